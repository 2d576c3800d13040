//! Command-line front end: runs the experiments and emits machine-readable
//! CSV/JSON results.
//!
//! Every subcommand is deterministic under `--seed`; reruns with identical
//! flags produce byte-identical payloads except for the timestamp isolated
//! inside the JSON metadata field. Exit codes: 0 success, 2 usage, 3
//! capacity, 4 I/O.

mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use shvqe::clifford::{graph_circuit, GraphPattern};
use shvqe::error::Error;
use shvqe::expressivity::{
    self, delta_t, haar_self_test, DeltaReport, EnsembleSpec, HeisenbergEnsemble,
};
use shvqe::hamiltonians::{
    exact_ground, format_hamiltonian, ground_space_fidelity, load_hamiltonian,
};
use shvqe::layer::{transform_hamiltonian, SingleQubitLayer};
use shvqe::measurement::{
    allocate, overhead_trials, shots_for_allocation, AllocationStrategy,
};
use shvqe::optimizer::{self, HeisenbergMode, RunOutcome, SpsaAdamConfig};
use shvqe::pauli::{PauliString, PauliSum};

use output::{write_csv, Payload};

#[derive(Parser)]
#[command(
    name = "shvqe",
    version,
    about = "Schrödinger-Heisenberg variational quantum eigensolver experiments"
)]
struct Cli {
    /// key=value file preloading defaults for numeric flags; explicit flags
    /// override the file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker thread cap (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Δ_t expressivity sweeps over circuit depths
    Expressivity(ExpressivityArgs),
    /// Equivalent-depth table: smallest plain depth matching the SH profile
    Sweep(SweepArgs),
    /// Ground-state optimization of the XXZ ring
    Xxz(XxzArgs),
    /// Ground-state optimization of a Hamiltonian file
    Molecule(MoleculeArgs),
    /// Transform a Hamiltonian file by a graph pattern and layer angles
    Transform(TransformArgs),
    /// Measurement-overhead and shot-allocation experiments
    Shots(ShotsArgs),
}

#[derive(Args)]
struct ExpressivityArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated Schrödinger depths
    #[arg(long)]
    depths: Option<String>,
    /// sh | vqe | clifford | haar-self-test
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    /// Haar reference budget (defaults to --samples)
    #[arg(long)]
    haar_samples: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
    /// Gate count of the random Clifford part
    #[arg(long)]
    gate_count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated qubit counts
    #[arg(long)]
    ns: Option<String>,
    /// Comma-separated SH Schrödinger depths
    #[arg(long)]
    sh_depths: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    haar_samples: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long)]
    gate_count: Option<usize>,
    #[arg(long)]
    max_vqe_depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizerFlags {
    #[arg(long)]
    restarts: Option<usize>,
    /// Iteration budget per restart
    #[arg(long)]
    iters: Option<usize>,
    /// Architecture samples per cost evaluation (N_s)
    #[arg(long)]
    ns: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// SPSA perturbation scale c0
    #[arg(long)]
    perturbation: Option<f64>,
    /// Alternate Schrödinger/Heisenberg updates instead of joint SPSA
    #[arg(long)]
    alternate: bool,
    /// Stop when the best cost improves less than the tolerance over this
    /// many iterations
    #[arg(long)]
    convergence_window: Option<usize>,
    #[arg(long)]
    convergence_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct XxzArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    /// vqe | shvqe | graph-compare
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    opt: OptimizerFlags,
    /// Output prefix: writes <prefix>.json plus trace/table CSVs
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MoleculeArgs {
    /// Hamiltonian text file
    #[arg(long)]
    hamiltonian: PathBuf,
    #[arg(long)]
    depth: Option<usize>,
    /// vqe | shvqe
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    opt: OptimizerFlags,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Graph pattern bitstring, length floor(n/2)
    #[arg(long)]
    pattern: String,
    /// Layer angles file: one "θx θy θz" line per qubit (default all zero)
    #[arg(long)]
    angles: Option<PathBuf>,
    /// Output Hamiltonian text file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ShotsArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    calibration_shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

/// key=value defaults loaded from --config; explicit flags win.
struct Defaults {
    map: BTreeMap<String, String>,
}

impl Defaults {
    fn load(path: Option<&Path>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path)?;
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: format!("expected key=value, got '{line}'"),
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Defaults { map })
    }

    fn get<T: FromStr + Copy>(&self, key: &str, cli: Option<T>, fallback: T) -> Result<T, Error> {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.map.get(key) {
            Some(raw) => raw.parse().map_err(|_| {
                Error::Contract(format!("config key '{key}': invalid value '{raw}'"))
            }),
            None => Ok(fallback),
        }
    }
}

/// Append a suffix to the file name (`with_extension` would clobber
/// anything after a dot in the stem).
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(suffix);
    path.with_file_name(name)
}

fn parse_list<T: FromStr>(raw: &str, what: &str) -> Result<Vec<T>, Error> {
    raw.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Contract(format!("invalid {what} entry '{s}'")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Capacity { .. } => 3,
                Error::Io(_) | Error::Parse { .. } | Error::Schema(_) => 4,
                Error::Contract(_) | Error::DimensionMismatch { .. } => 2,
                _ => 1,
            };
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let defaults = Defaults::load(cli.config.as_deref())?;
    if let Some(threads) = cli.threads {
        shvqe::parallel::configure_threads(threads);
    }
    match cli.command {
        Command::Expressivity(args) => cmd_expressivity(args, &defaults),
        Command::Sweep(args) => cmd_sweep(args, &defaults),
        Command::Xxz(args) => cmd_xxz(args, &defaults),
        Command::Molecule(args) => cmd_molecule(args, &defaults),
        Command::Transform(args) => cmd_transform(args),
        Command::Shots(args) => cmd_shots(args, &defaults),
    }
}

fn ensemble_from_label(label: &str, gate_count: usize) -> Result<HeisenbergEnsemble, Error> {
    match label {
        "vqe" => Ok(HeisenbergEnsemble::None),
        "clifford" => Ok(HeisenbergEnsemble::RandomClifford { gate_count }),
        "sh" => Ok(HeisenbergEnsemble::CliffordWithLayer { gate_count }),
        other => Err(Error::Contract(format!(
            "unknown ensemble '{other}' (expected sh, vqe, clifford or haar-self-test)"
        ))),
    }
}

fn cmd_expressivity(args: ExpressivityArgs, defaults: &Defaults) -> Result<(), Error> {
    let n = defaults.get("n", args.n, 8)?;
    let samples = defaults.get("samples", args.samples, 300)?;
    let haar_samples = defaults.get("haar_samples", args.haar_samples, samples)?;
    let t_max = defaults.get("t_max", args.t_max, 6)?;
    let gate_count = defaults.get("gate_count", args.gate_count, 500)?;
    let seed = defaults.get("seed", args.seed, 0)?;
    let ensemble = args.ensemble.as_deref().unwrap_or("sh");
    let depth_list: Vec<usize> =
        parse_list(args.depths.as_deref().unwrap_or("0,2"), "depth")?;

    let mut rows = Vec::new();
    let mut reports: Vec<DeltaReport> = Vec::new();
    if ensemble == "haar-self-test" {
        let report = haar_self_test(n, samples, haar_samples, t_max, seed)?;
        rows.extend(report.csv_rows());
        reports.push(report);
    } else {
        let heisenberg = ensemble_from_label(ensemble, gate_count)?;
        for &depth in &depth_list {
            let report = delta_t(&EnsembleSpec {
                n,
                schrodinger_depth: depth,
                heisenberg,
                sample_count: samples,
                haar_sample_count: haar_samples,
                t_max,
                seed,
            })?;
            rows.extend(report.csv_rows());
            reports.push(report);
        }
    }
    write_csv(&args.out, DeltaReport::CSV_HEADER, &rows)?;
    for report in &reports {
        for r in &report.rows {
            println!(
                "n={} depth={} ensemble={} t={} delta={:+.4} stderr={:.4}",
                report.n, report.schrodinger_depth, report.ensemble_label, r.t, r.delta, r.stderr
            );
        }
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs, defaults: &Defaults) -> Result<(), Error> {
    let samples = defaults.get("samples", args.samples, 200)?;
    let haar_samples = defaults.get("haar_samples", args.haar_samples, samples)?;
    let t_max = defaults.get("t_max", args.t_max, 6)?;
    let gate_count = defaults.get("gate_count", args.gate_count, 500)?;
    let max_vqe_depth = defaults.get("max_vqe_depth", args.max_vqe_depth, 12)?;
    let seed = defaults.get("seed", args.seed, 0)?;
    let ns: Vec<usize> = parse_list(args.ns.as_deref().unwrap_or("8"), "qubit count")?;
    let sh_depths: Vec<usize> =
        parse_list(args.sh_depths.as_deref().unwrap_or("2,4"), "depth")?;

    let rows = expressivity::equivalent_depth_sweep(
        &ns,
        &sh_depths,
        HeisenbergEnsemble::CliffordWithLayer { gate_count },
        samples,
        haar_samples,
        t_max,
        max_vqe_depth,
        seed,
    )?;
    let csv_rows: Vec<String> = rows.iter().map(|r| r.csv_row()).collect();
    write_csv(&args.out, expressivity::SWEEP_CSV_HEADER, &csv_rows)?;
    for row in &rows {
        println!("{}", row.csv_row());
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn optimizer_config(
    flags: &OptimizerFlags,
    defaults: &Defaults,
    default_iters: usize,
    default_ns: usize,
) -> Result<SpsaAdamConfig, Error> {
    let base = SpsaAdamConfig::default();
    let cfg = SpsaAdamConfig {
        perturbation: defaults.get("perturbation", flags.perturbation, base.perturbation)?,
        learning_rate: defaults.get("learning_rate", flags.learning_rate, base.learning_rate)?,
        max_iters: defaults.get("iters", flags.iters, default_iters)?,
        samples_per_iter: defaults.get("ns", flags.ns, default_ns)?,
        seed: defaults.get("seed", flags.seed, 0)?,
        restarts: defaults.get("restarts", flags.restarts, 1)?,
        alternate: flags.alternate,
        convergence_window: defaults.get(
            "convergence_window",
            flags.convergence_window,
            base.convergence_window,
        )?,
        convergence_tol: defaults.get(
            "convergence_tol",
            flags.convergence_tol,
            base.convergence_tol,
        )?,
        ..base
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct OptimizationResults {
    mode: String,
    n: usize,
    depth: usize,
    final_energy: f64,
    exact_energy: Option<f64>,
    energy_error: Option<f64>,
    fidelity_ground_space: Option<f64>,
    best_pattern: String,
    converged: bool,
    iterations: usize,
    restart_index: usize,
    trace_file: String,
}

fn trace_csv(outcome: &RunOutcome, graph_count: usize) -> (String, Vec<String>) {
    let mut header = String::from("iteration,cost,best_cost");
    for j in 1..=graph_count {
        header.push_str(&format!(",p_graph_{j}"));
    }
    let rows = outcome
        .trace
        .costs
        .iter()
        .enumerate()
        .map(|(k, cost)| {
            let mut row = format!(
                "{},{:.10e},{:.10e}",
                k + 1,
                cost,
                outcome.trace.best_costs[k]
            );
            if !outcome.trace.graph_probs.is_empty() {
                for p in &outcome.trace.graph_probs[k] {
                    row.push_str(&format!(",{p:.10e}"));
                }
            }
            row
        })
        .collect();
    (header, rows)
}

/// Exact diagnostics where the dense/Lanczos oracles are in reach.
fn oracle_diagnostics(
    h: &PauliSum,
    outcome: &RunOutcome,
    depth: usize,
) -> Result<(Option<f64>, Option<f64>, Option<f64>), Error> {
    let n = h.n();
    let exact = if n <= 12 {
        Some(exact_ground(h)?.0)
    } else {
        None
    };
    let error = exact.map(|e| outcome.energy - e);
    let fidelity = if n <= 10 {
        let state = optimizer::prepare_sh_state(
            n,
            depth,
            &outcome.theta,
            &outcome.phi,
            &outcome.pattern,
        )?;
        Some(ground_space_fidelity(h, &state, 1e-8)?)
    } else {
        None
    };
    Ok((exact, error, fidelity))
}

fn run_optimization(
    h: &PauliSum,
    depth: usize,
    mode_label: &str,
    cfg: &SpsaAdamConfig,
) -> Result<RunOutcome, Error> {
    let mode = match mode_label {
        "vqe" => HeisenbergMode::Disabled,
        "shvqe" => HeisenbergMode::Search,
        other => {
            return Err(Error::Contract(format!(
                "unknown mode '{other}' (expected vqe or shvqe)"
            )))
        }
    };
    optimizer::run(h, depth, mode, cfg)
}

fn cmd_xxz(args: XxzArgs, defaults: &Defaults) -> Result<(), Error> {
    let n = defaults.get("n", args.n, 8)?;
    let delta = defaults.get("delta", args.delta, 1.0)?;
    let depth = defaults.get("depth", args.depth, 4)?;
    let mode = args.mode.as_deref().unwrap_or("shvqe").to_string();
    let cfg = optimizer_config(&args.opt, defaults, 500, 100)?;
    let h = shvqe::hamiltonians::build_xxz(n, delta)?;

    let mut echo = BTreeMap::new();
    echo.insert("n".into(), n.to_string());
    echo.insert("delta".into(), delta.to_string());
    echo.insert("depth".into(), depth.to_string());
    echo.insert("mode".into(), mode.clone());
    echo.insert("iters".into(), cfg.max_iters.to_string());
    echo.insert("ns".into(), cfg.samples_per_iter.to_string());
    echo.insert("restarts".into(), cfg.restarts.to_string());

    if mode == "graph-compare" {
        return graph_compare(&h, depth, &cfg, &args.out, echo);
    }

    let outcome = run_optimization(&h, depth, &mode, &cfg)?;
    let (exact, error, fidelity) = oracle_diagnostics(&h, &outcome, depth)?;

    let trace_path = with_suffix(&args.out, ".trace.csv");
    let (header, rows) = trace_csv(&outcome, n / 2);
    write_csv(&trace_path, &header, &rows)?;

    let results = OptimizationResults {
        mode,
        n,
        depth,
        final_energy: outcome.energy,
        exact_energy: exact,
        energy_error: error,
        fidelity_ground_space: fidelity,
        best_pattern: outcome.pattern.as_string(),
        converged: outcome.converged,
        iterations: outcome.iterations,
        restart_index: outcome.restart_index,
        trace_file: trace_path.display().to_string(),
    };
    let json_path = with_suffix(&args.out, ".json");
    Payload::new("xxz", echo, cfg.seed, results).write(&json_path)?;
    println!(
        "energy {:.8}{} pattern {}",
        outcome.energy,
        exact
            .map(|e| format!(" (exact {e:.8})"))
            .unwrap_or_default(),
        outcome.pattern
    );
    println!("wrote {} and {}", json_path.display(), trace_path.display());
    Ok(())
}

#[derive(Serialize)]
struct GraphCompareEntry {
    pattern: String,
    energy: f64,
    fidelity_ground_space: Option<f64>,
}

#[derive(Serialize)]
struct GraphCompareResults {
    n: usize,
    depth: usize,
    entries: Vec<GraphCompareEntry>,
    best_pattern: String,
    exact_energy: Option<f64>,
    table_file: String,
}

fn graph_compare(
    h: &PauliSum,
    depth: usize,
    cfg: &SpsaAdamConfig,
    out: &Path,
    echo: BTreeMap<String, String>,
) -> Result<(), Error> {
    let n = h.n();
    let mut entries = Vec::new();
    for pattern in GraphPattern::enumerate(n) {
        let outcome = optimizer::run(h, depth, HeisenbergMode::Fixed(pattern.clone()), cfg)?;
        let fidelity = if n <= 10 {
            let state = optimizer::prepare_sh_state(
                n,
                depth,
                &outcome.theta,
                &outcome.phi,
                &outcome.pattern,
            )?;
            Some(ground_space_fidelity(h, &state, 1e-8)?)
        } else {
            None
        };
        println!(
            "pattern {} energy {:.8} fidelity {}",
            pattern,
            outcome.energy,
            fidelity.map(|f| format!("{f:.6}")).unwrap_or_default()
        );
        entries.push(GraphCompareEntry {
            pattern: pattern.as_string(),
            energy: outcome.energy,
            fidelity_ground_space: fidelity,
        });
    }
    let best = entries
        .iter()
        .min_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap())
        .expect("at least one pattern");
    let best_pattern = best.pattern.clone();

    let table_path = with_suffix(out, ".table.csv");
    let rows: Vec<String> = entries
        .iter()
        .map(|e| {
            format!(
                "{},{:.10e},{}",
                e.pattern,
                e.energy,
                e.fidelity_ground_space
                    .map(|f| format!("{f:.10e}"))
                    .unwrap_or_else(|| "".into())
            )
        })
        .collect();
    write_csv(&table_path, "pattern,energy,fidelity_ground_space", &rows)?;

    let exact = if n <= 12 { Some(exact_ground(h)?.0) } else { None };
    let results = GraphCompareResults {
        n,
        depth,
        entries,
        best_pattern: best_pattern.clone(),
        exact_energy: exact,
        table_file: table_path.display().to_string(),
    };
    let json_path = with_suffix(out, ".json");
    Payload::new("xxz", echo, cfg.seed, results).write(&json_path)?;
    println!("best pattern {best_pattern}");
    println!("wrote {} and {}", json_path.display(), table_path.display());
    Ok(())
}

#[derive(Serialize)]
struct MoleculeResults {
    mode: String,
    n: usize,
    depth: usize,
    hamiltonian_file: String,
    final_energy: f64,
    exact_energy: Option<f64>,
    abs_energy_error: Option<f64>,
    chemical_accuracy: Option<bool>,
    best_pattern: String,
    converged: bool,
    iterations: usize,
    trace_file: String,
}

/// Chemical accuracy threshold in Hartree.
const CHEMICAL_ACCURACY: f64 = 1.6e-3;

fn cmd_molecule(args: MoleculeArgs, defaults: &Defaults) -> Result<(), Error> {
    let h = load_hamiltonian(&args.hamiltonian)?;
    let n = h.n();
    let depth = defaults.get("depth", args.depth, 2)?;
    let mode = args.mode.as_deref().unwrap_or("shvqe").to_string();
    let cfg = optimizer_config(&args.opt, defaults, 500, 100)?;

    let outcome = run_optimization(&h, depth, &mode, &cfg)?;
    let exact = if n <= 12 { Some(exact_ground(&h)?.0) } else { None };
    let abs_error = exact.map(|e| (outcome.energy - e).abs());
    let accurate = abs_error.map(|err| err < CHEMICAL_ACCURACY);

    let trace_path = with_suffix(&args.out, ".trace.csv");
    let (header, rows) = trace_csv(&outcome, n / 2);
    write_csv(&trace_path, &header, &rows)?;

    let mut echo = BTreeMap::new();
    echo.insert(
        "hamiltonian".into(),
        args.hamiltonian.display().to_string(),
    );
    echo.insert("depth".into(), depth.to_string());
    echo.insert("mode".into(), mode.clone());
    echo.insert("iters".into(), cfg.max_iters.to_string());
    echo.insert("ns".into(), cfg.samples_per_iter.to_string());
    echo.insert("restarts".into(), cfg.restarts.to_string());

    let results = MoleculeResults {
        mode,
        n,
        depth,
        hamiltonian_file: args.hamiltonian.display().to_string(),
        final_energy: outcome.energy,
        exact_energy: exact,
        abs_energy_error: abs_error,
        chemical_accuracy: accurate,
        best_pattern: outcome.pattern.as_string(),
        converged: outcome.converged,
        iterations: outcome.iterations,
        trace_file: trace_path.display().to_string(),
    };
    let json_path = with_suffix(&args.out, ".json");
    Payload::new("molecule", echo, cfg.seed, results).write(&json_path)?;
    println!(
        "energy {:.8}{}{}",
        outcome.energy,
        exact
            .map(|e| format!(" (exact {e:.8})"))
            .unwrap_or_default(),
        accurate
            .map(|a| format!(" chemical_accuracy={a}"))
            .unwrap_or_default()
    );
    println!("wrote {} and {}", json_path.display(), trace_path.display());
    Ok(())
}

fn load_angles(path: &Path, n: usize) -> Result<SingleQubitLayer, Error> {
    let text = fs::read_to_string(path)?;
    let mut triples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 'θx θy θz', got '{line}'"),
            });
        }
        let mut triple = [0.0f64; 3];
        for (slot, part) in triple.iter_mut().zip(parts.iter()) {
            *slot = part.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("invalid angle '{part}'"),
            })?;
        }
        triples.push(triple);
    }
    if triples.len() != n {
        return Err(Error::Schema(format!(
            "angles file has {} rows, Hamiltonian has n = {n}",
            triples.len()
        )));
    }
    Ok(SingleQubitLayer::new(triples))
}

fn cmd_transform(args: TransformArgs) -> Result<(), Error> {
    let h = load_hamiltonian(&args.hamiltonian)?;
    let n = h.n();
    let pattern = GraphPattern::parse(n, &args.pattern)?;
    let layer = match &args.angles {
        Some(path) => load_angles(path, n)?,
        None => SingleQubitLayer::identity(n),
    };
    let circuit = graph_circuit(&pattern)?;
    let ht = transform_hamiltonian(&circuit, &layer, &h)?;
    let header = format!(
        "transformed Hamiltonian: source {}, pattern {}, {} layer angles",
        args.hamiltonian.display(),
        pattern,
        if args.angles.is_some() { "file" } else { "zero" }
    );
    fs::write(&args.out, format_hamiltonian(&ht, &[&header]))?;
    println!(
        "terms {} max_weight {}",
        ht.term_count(),
        ht.max_weight()
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_shots(args: ShotsArgs, defaults: &Defaults) -> Result<(), Error> {
    let n = defaults.get("n", args.n, 6)?;
    let epsilon = defaults.get("epsilon", args.epsilon, 0.05)?;
    let trials = defaults.get("trials", args.trials, 50)?;
    let calibration = defaults.get("calibration_shots", args.calibration_shots, 3000)?;
    let seed = defaults.get("seed", args.seed, 0)?;

    // the three-term scenario: one X expanded by a fixed single-qubit layer
    let mut label = vec!['I'; n];
    label[0] = 'X';
    let h_term = PauliString::from_label(&label.iter().collect::<String>())?;
    let mut angles = vec![[0.0f64; 3]; n];
    angles[0] = [0.4, 0.5, 0.6];
    let layer = SingleQubitLayer::new(angles);
    let circuit = shvqe::clifford::CliffordCircuit::new(n);

    let results = overhead_trials(
        &h_term, &circuit, &layer, n, epsilon, calibration, trials, seed,
    )?;
    let trials_f = trials as f64;
    let mean =
        |f: &dyn Fn(&shvqe::measurement::OverheadResult) -> f64| -> f64 {
            results.iter().map(|r| f(r)).sum::<f64>() / trials_f
        };
    let m_h = results[0].m_h;
    let mean_n1 = mean(&|r| r.n1 as f64);
    let mean_ratio = mean(&|r| r.ratio);

    // per-strategy shot counts from the same empirical variances
    let mut rows = Vec::new();
    for strategy in [
        AllocationStrategy::Uniform,
        AllocationStrategy::AbsCoeff,
        AllocationStrategy::SquaredCoeff,
    ] {
        let mut acc_n2 = 0.0;
        for r in &results {
            let plan = allocate(&r.coeffs, strategy, 1000 * r.coeffs.len())?;
            acc_n2 += shots_for_allocation(
                &r.coeffs,
                &r.term_variances,
                &plan.fractions,
                epsilon,
            )? as f64;
        }
        let mean_n2 = acc_n2 / trials_f;
        rows.push(format!(
            "{},{},{:.3},{:.3},{:.6},{}",
            strategy.label(),
            m_h,
            mean_n1,
            mean_n2,
            mean_n2 / mean_n1,
            trials
        ));
        println!(
            "{}: N1 {:.1} N2 {:.1} ratio {:.3}",
            strategy.label(),
            mean_n1,
            mean_n2,
            mean_n2 / mean_n1
        );
    }
    write_csv(&args.out, "strategy,m_h,n1,n2,ratio,trials", &rows)?;
    println!("uniform-split overhead ratio over {trials} trials: {mean_ratio:.3}");
    println!("wrote {}", args.out.display());
    Ok(())
}
