//! adam-SPSA optimization of the Schrödinger-Heisenberg ansatz: SPSA
//! two-evaluation gradient estimates fed into Adam moment updates, applied
//! jointly to the Schrödinger angles θ, the Heisenberg layer angles φ and
//! the architecture logits α.
//!
//! Three modes share one engine: plain VQE (no Heisenberg circuit), SH-VQE
//! with a frozen graph pattern, and the stochastic architecture search in
//! which patterns are sampled from the logits each iteration and the cost
//! is the sample average of the transformed-Hamiltonian expectations.

use std::collections::BTreeMap;

use rand::Rng;

use crate::ansatz::{ArchLogits, HardwareEfficientAnsatz};
use crate::clifford::{graph_circuit, GraphPattern};
use crate::error::{Error, Result};
use crate::layer::{conjugate_layer, transform_hamiltonian, SingleQubitLayer};
use crate::parallel::map_indexed;
use crate::pauli::PauliSum;
use crate::rng::{child_seed, domain, stream_rng};
use crate::statevector::StateVector;

/// Hyperparameters of the adam-SPSA loop.
#[derive(Clone, Debug)]
pub struct SpsaAdamConfig {
    /// SPSA perturbation scale c₀; the step-k scale is c₀/(k+1)^γ.
    pub perturbation: f64,
    /// Perturbation decay exponent γ.
    pub perturbation_decay: f64,
    /// Adam learning rate η.
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    /// Architecture samples per cost evaluation (N_s).
    pub samples_per_iter: usize,
    pub seed: u64,
    /// Independent random initializations; the best run is reported.
    pub restarts: usize,
    /// Stop when the best cost improves by less than `convergence_tol`
    /// over this many iterations.
    pub convergence_window: usize,
    pub convergence_tol: f64,
    /// Alternate SPSA perturbations between the Schrödinger block and the
    /// Heisenberg block instead of perturbing everything jointly.
    pub alternate: bool,
}

impl Default for SpsaAdamConfig {
    fn default() -> Self {
        SpsaAdamConfig {
            perturbation: 0.1,
            perturbation_decay: 0.101,
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_iters: 500,
            samples_per_iter: 800,
            seed: 0,
            restarts: 1,
            convergence_window: 50,
            convergence_tol: 1e-6,
            alternate: false,
        }
    }
}

impl SpsaAdamConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("perturbation", self.perturbation),
            ("perturbation_decay", self.perturbation_decay),
            ("learning_rate", self.learning_rate),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("epsilon", self.epsilon),
            ("convergence_tol", self.convergence_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::contract(format!("{name} must be positive, got {v}")));
            }
        }
        if self.samples_per_iter == 0 {
            return Err(Error::contract("samples_per_iter must be >= 1"));
        }
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(Error::contract("max_iters and restarts must be >= 1"));
        }
        Ok(())
    }
}

/// What the Heisenberg circuit does during a run.
#[derive(Clone, Debug)]
pub enum HeisenbergMode {
    /// No Heisenberg circuit: plain VQE over θ.
    Disabled,
    /// Clifford part frozen to one graph pattern; θ and φ optimized.
    Fixed(GraphPattern),
    /// Stochastic architecture search: θ, φ and α optimized jointly.
    Search,
}

/// Per-iteration record of one optimization run.
#[derive(Clone, Debug, Default)]
pub struct OptTrace {
    /// Cost at the parameters after each iteration's update.
    pub costs: Vec<f64>,
    /// Monotone best-so-far cost.
    pub best_costs: Vec<f64>,
    /// FNV-1a hash of the parameter vector after each iteration.
    pub param_hashes: Vec<u64>,
    /// Elementary-graph on-probabilities per iteration (search mode only).
    pub graph_probs: Vec<Vec<f64>>,
}

/// Result of an optimization run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: OptTrace,
    pub theta: Vec<f64>,
    /// Heisenberg layer angles; empty when the mode was `Disabled`.
    pub phi: Vec<f64>,
    /// Final architecture logits (search mode only).
    pub logits: Option<ArchLogits>,
    /// The reported pattern: argmax-probability in search mode, the frozen
    /// pattern in fixed mode, all-off otherwise.
    pub pattern: GraphPattern,
    /// Cost with the reported pattern fixed, at the best parameters.
    pub energy: f64,
    pub converged: bool,
    pub restart_index: usize,
    pub iterations: usize,
}

/// FNV-1a over the little-endian parameter bytes; stable across runs.
pub fn param_hash(params: &[f64]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for p in params {
        for b in p.to_le_bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x1000_0000_01b3);
        }
    }
    hash
}

fn layer_from_phi(n: usize, phi: &[f64]) -> Result<SingleQubitLayer> {
    if phi.len() != 3 * n {
        return Err(Error::contract(format!(
            "layer needs 3n = {} angles, got {}",
            3 * n,
            phi.len()
        )));
    }
    Ok(SingleQubitLayer::new(
        phi.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
    ))
}

fn depth_from_theta(n: usize, theta: &[f64]) -> Result<usize> {
    let per_layer = 3 * n;
    if per_layer == 0 || theta.len() % per_layer != 0 || theta.len() < per_layer {
        return Err(Error::contract(format!(
            "theta length {} is not 3n(depth+1) for n={n}",
            theta.len()
        )));
    }
    Ok(theta.len() / per_layer - 1)
}

/// Plain VQE cost ⟨0|U(θ)† H U(θ)|0⟩.
pub fn vqe_cost(h: &PauliSum, theta: &[f64]) -> Result<f64> {
    let n = h.n();
    let depth = depth_from_theta(n, theta)?;
    let ansatz = HardwareEfficientAnsatz::new(n, depth, theta.to_vec())?;
    ansatz.prepare()?.expectation(h)
}

/// SH-VQE cost with a frozen graph pattern:
/// ⟨0|U(θ)† H_T U(θ)|0⟩ for T = pattern circuit then layer(φ).
pub fn fixed_pattern_cost(
    h: &PauliSum,
    pattern: &GraphPattern,
    theta: &[f64],
    phi: &[f64],
) -> Result<f64> {
    let n = h.n();
    let depth = depth_from_theta(n, theta)?;
    let ansatz = HardwareEfficientAnsatz::new(n, depth, theta.to_vec())?;
    let layer = layer_from_phi(n, phi)?;
    let ht = transform_hamiltonian(&graph_circuit(pattern)?, &layer, h)?;
    ansatz.prepare()?.expectation(&ht)
}

/// Architecture-averaged SH-VQE cost: draw `n_s` patterns from the logits
/// and average the transformed-Hamiltonian expectations under the same
/// gate parameters. Deterministic under `seed`.
pub fn shvqe_cost(
    theta: &[f64],
    phi: &[f64],
    logits: &ArchLogits,
    h: &PauliSum,
    n_s: usize,
    seed: u64,
) -> Result<f64> {
    if n_s == 0 {
        return Err(Error::contract("n_s must be >= 1"));
    }
    let n = h.n();
    let depth = depth_from_theta(n, theta)?;
    let ansatz = HardwareEfficientAnsatz::new(n, depth, theta.to_vec())?;
    let psi = ansatz.prepare()?;
    let layer = layer_from_phi(n, phi)?;
    let h_phi = conjugate_layer(&layer, h)?;

    // tally distinct patterns; the expectation is computed once per pattern
    let mut rng = stream_rng(seed, domain::PATTERN_SAMPLING, 0);
    let mut counts: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for _ in 0..n_s {
        let pat = logits.sample_with(&mut rng);
        *counts.entry(pat.bits().to_vec()).or_insert(0) += 1;
    }
    let distinct: Vec<(GraphPattern, usize)> = counts
        .into_iter()
        .map(|(bits, count)| (GraphPattern::new(n, bits).unwrap(), count))
        .collect();

    let energies: Vec<Result<f64>> = map_indexed(distinct.len(), |i| {
        let circuit = graph_circuit(&distinct[i].0)?;
        let ht = circuit.transform_sum(&h_phi)?;
        psi.expectation(&ht)
    });
    let mut acc = 0.0;
    for ((_, count), e) in distinct.iter().zip(energies) {
        acc += *count as f64 * e?;
    }
    Ok(acc / n_s as f64)
}

/// SPSA gradient estimate with a Rademacher perturbation restricted to the
/// `active` coordinates: two cost evaluations total. Returns the gradient
/// and the two probed costs.
pub fn spsa_gradient_masked<F>(
    cost: F,
    params: &[f64],
    c_k: f64,
    seed: u64,
    active: &[bool],
) -> Result<(Vec<f64>, f64, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(c_k > 0.0) {
        return Err(Error::contract(format!(
            "perturbation scale must be positive, got {c_k}"
        )));
    }
    let mut rng = stream_rng(seed, domain::SPSA_PERTURBATION, 0);
    let delta: Vec<f64> = active
        .iter()
        .map(|&a| {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            if a {
                sign
            } else {
                0.0
            }
        })
        .collect();
    let plus: Vec<f64> = params
        .iter()
        .zip(delta.iter())
        .map(|(p, d)| p + c_k * d)
        .collect();
    let minus: Vec<f64> = params
        .iter()
        .zip(delta.iter())
        .map(|(p, d)| p - c_k * d)
        .collect();
    let cost_plus = cost(&plus)?;
    let cost_minus = cost(&minus)?;
    if !cost_plus.is_finite() || !cost_minus.is_finite() {
        return Err(Error::Diverged(format!(
            "non-finite SPSA probe costs ({cost_plus}, {cost_minus})"
        )));
    }
    let scale = (cost_plus - cost_minus) / (2.0 * c_k);
    let grad = delta.iter().map(|d| scale * d).collect();
    Ok((grad, cost_plus, cost_minus))
}

/// SPSA gradient with every coordinate active.
pub fn spsa_gradient<F>(cost: F, params: &[f64], c_k: f64, seed: u64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let active = vec![true; params.len()];
    spsa_gradient_masked(cost, params, c_k, seed, &active).map(|(g, _, _)| g)
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    step: usize,
}

impl Adam {
    fn new(dim: usize) -> Self {
        Adam {
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            step: 0,
        }
    }

    fn update(&mut self, params: &mut [f64], grad: &[f64], cfg: &SpsaAdamConfig) {
        self.step += 1;
        let b1 = cfg.beta1;
        let b2 = cfg.beta2;
        let bias1 = 1.0 - b1.powi(self.step as i32);
        let bias2 = 1.0 - b2.powi(self.step as i32);
        for i in 0..params.len() {
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * grad[i];
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * grad[i] * grad[i];
            let m_hat = self.m[i] / bias1;
            let v_hat = self.v[i] / bias2;
            params[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
        }
    }
}

struct Blocks {
    theta_len: usize,
    phi_len: usize,
    alpha_len: usize,
}

impl Blocks {
    fn split<'a>(&self, params: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let (theta, rest) = params.split_at(self.theta_len);
        let (phi, alpha) = rest.split_at(self.phi_len);
        (theta, phi, alpha)
    }
}

/// Run one optimization (all restarts) and report the best outcome.
pub fn run(
    h: &PauliSum,
    depth: usize,
    mode: HeisenbergMode,
    cfg: &SpsaAdamConfig,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut best: Option<RunOutcome> = None;
    for restart in 0..cfg.restarts {
        let outcome = run_single(h, depth, &mode, cfg, restart)?;
        let replace = match &best {
            None => true,
            Some(b) => outcome.energy < b.energy,
        };
        if replace {
            best = Some(outcome);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// Plain VQE baseline.
pub fn run_vqe(h: &PauliSum, depth: usize, cfg: &SpsaAdamConfig) -> Result<RunOutcome> {
    run(h, depth, HeisenbergMode::Disabled, cfg)
}

/// Joint architecture-searched SH-VQE.
pub fn run_shvqe(h: &PauliSum, depth: usize, cfg: &SpsaAdamConfig) -> Result<RunOutcome> {
    run(h, depth, HeisenbergMode::Search, cfg)
}

fn run_single(
    h: &PauliSum,
    depth: usize,
    mode: &HeisenbergMode,
    cfg: &SpsaAdamConfig,
    restart: usize,
) -> Result<RunOutcome> {
    use std::f64::consts::PI;
    let n = h.n();
    let run_seed = child_seed(cfg.seed, domain::RESTART, restart as u64);
    let blocks = Blocks {
        theta_len: HardwareEfficientAnsatz::param_count(n, depth),
        phi_len: match mode {
            HeisenbergMode::Disabled => 0,
            _ => 3 * n,
        },
        alpha_len: match mode {
            HeisenbergMode::Search => (n / 2) * 2,
            _ => 0,
        },
    };

    let mut params = Vec::with_capacity(blocks.theta_len + blocks.phi_len + blocks.alpha_len);
    let mut init_rng = stream_rng(run_seed, domain::PARAM_INIT, 0);
    for _ in 0..blocks.theta_len + blocks.phi_len {
        params.push(init_rng.gen_range(-PI..PI));
    }
    // logits start at zero: every pattern equiprobable
    params.extend(std::iter::repeat(0.0).take(blocks.alpha_len));

    let cost_at = |p: &[f64], iter_seed: u64| -> Result<f64> {
        let (theta, phi, alpha) = blocks.split(p);
        match mode {
            HeisenbergMode::Disabled => vqe_cost(h, theta),
            HeisenbergMode::Fixed(pattern) => fixed_pattern_cost(h, pattern, theta, phi),
            HeisenbergMode::Search => {
                let logits = ArchLogits::from_flat(n, alpha)?;
                shvqe_cost(theta, phi, &logits, h, cfg.samples_per_iter, iter_seed)
            }
        }
    };

    let mut adam = Adam::new(params.len());
    let mut trace = OptTrace::default();
    let mut best_cost = f64::INFINITY;
    let mut best_params = params.clone();
    let mut converged = false;
    let mut iterations = 0;

    for k in 0..cfg.max_iters {
        iterations = k + 1;
        let c_k = cfg.perturbation / ((k + 1) as f64).powf(cfg.perturbation_decay);
        let grad_seed = child_seed(run_seed, domain::SPSA_PERTURBATION, k as u64);
        // both SPSA probes and the recorded cost share the iteration's
        // pattern-sampling seed (common random numbers)
        let sample_seed = child_seed(run_seed, domain::PATTERN_SAMPLING, k as u64);

        let active: Vec<bool> = if cfg.alternate && blocks.phi_len + blocks.alpha_len > 0 {
            let schrodinger_turn = k % 2 == 0;
            (0..params.len())
                .map(|i| (i < blocks.theta_len) == schrodinger_turn)
                .collect()
        } else {
            vec![true; params.len()]
        };

        let (grad, _, _) = spsa_gradient_masked(
            |p| cost_at(p, sample_seed),
            &params,
            c_k,
            grad_seed,
            &active,
        )?;
        adam.update(&mut params, &grad, cfg);

        let cost = cost_at(&params, sample_seed)?;
        if !cost.is_finite() {
            return Err(Error::Diverged(format!("iteration {k}: cost {cost}")));
        }
        if cost < best_cost {
            best_cost = cost;
            best_params = params.clone();
        }
        trace.costs.push(cost);
        trace.best_costs.push(best_cost);
        trace.param_hashes.push(param_hash(&params));
        if matches!(mode, HeisenbergMode::Search) {
            let (_, _, alpha) = blocks.split(&params);
            trace.graph_probs.push(ArchLogits::from_flat(n, alpha)?.pattern_probs());
        }

        let w = cfg.convergence_window;
        if k + 1 >= 2 * w {
            let prev = trace.best_costs[k - w];
            if prev - best_cost < cfg.convergence_tol {
                converged = true;
                break;
            }
        }
    }

    let (theta, phi, alpha) = blocks.split(&best_params);
    let (logits, pattern) = match mode {
        HeisenbergMode::Disabled => (None, GraphPattern::new(n, vec![false; n / 2])?),
        HeisenbergMode::Fixed(p) => (None, p.clone()),
        HeisenbergMode::Search => {
            let logits = ArchLogits::from_flat(n, alpha)?;
            let pattern = logits.argmax_pattern();
            (Some(logits), pattern)
        }
    };
    let energy = match mode {
        HeisenbergMode::Disabled => vqe_cost(h, theta)?,
        _ => fixed_pattern_cost(h, &pattern, theta, phi)?,
    };

    Ok(RunOutcome {
        trace,
        theta: theta.to_vec(),
        phi: phi.to_vec(),
        logits,
        pattern,
        energy,
        converged,
        restart_index: restart,
        iterations,
    })
}

/// The physical ansatz state T U(θ)|0⟩: Schrödinger circuit, then the graph
/// circuit, then the Heisenberg layer.
pub fn prepare_sh_state(
    n: usize,
    depth: usize,
    theta: &[f64],
    phi: &[f64],
    pattern: &GraphPattern,
) -> Result<StateVector> {
    let ansatz = HardwareEfficientAnsatz::new(n, depth, theta.to_vec())?;
    let mut state = ansatz.prepare()?;
    state.apply_clifford(&graph_circuit(pattern)?)?;
    if !phi.is_empty() {
        let layer = layer_from_phi(n, phi)?;
        for gate in layer.gate_ops() {
            state.apply(&gate)?;
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_xxz, exact_ground};

    #[test]
    fn spsa_gradient_unbiased_on_quadratic() {
        let cost = |p: &[f64]| -> Result<f64> { Ok(p.iter().map(|x| x * x).sum()) };
        let x = vec![0.7, -0.3, 1.1, 0.2];
        let mut mean = vec![0.0; 4];
        let draws = 200u64;
        for s in 0..draws {
            let g = spsa_gradient(cost, &x, 0.05, 1000 + s).unwrap();
            for (m, gi) in mean.iter_mut().zip(g.iter()) {
                *m += gi / draws as f64;
            }
        }
        // per-coordinate estimator variance is 4(Σx² − x_i²) from the
        // Rademacher cross terms; allow 10% systematic plus 3σ of the mean
        let ssq: f64 = x.iter().map(|v| v * v).sum();
        for (m, xi) in mean.iter().zip(x.iter()) {
            let expect = 2.0 * xi;
            let sigma = (4.0 * (ssq - xi * xi) / draws as f64).sqrt();
            let tol = 0.1 * expect.abs() + 3.0 * sigma;
            assert!((m - expect).abs() < tol, "{m} vs {expect} (tol {tol})");
        }
    }

    #[test]
    fn spsa_rejects_zero_scale() {
        let cost = |_: &[f64]| -> Result<f64> { Ok(0.0) };
        assert!(spsa_gradient(cost, &[1.0], 0.0, 0).is_err());
    }

    #[test]
    fn spsa_single_param_is_central_difference() {
        let cost = |p: &[f64]| -> Result<f64> { Ok(p[0].sin()) };
        let x = [0.4];
        let c = 0.01;
        let g = spsa_gradient(cost, &x, c, 5).unwrap();
        let fd = ((x[0] + c).sin() - (x[0] - c).sin()) / (2.0 * c);
        assert!((g[0] - fd).abs() < 1e-14);
    }

    #[test]
    fn frozen_all_off_equals_vqe_cost() {
        let h = build_xxz(4, 1.0).unwrap();
        let theta: Vec<f64> = (0..HardwareEfficientAnsatz::param_count(4, 1))
            .map(|i| 0.1 * i as f64)
            .collect();
        let phi = vec![0.0; 12];
        let pattern = GraphPattern::parse(4, "00").unwrap();
        let a = vqe_cost(&h, &theta).unwrap();
        let b = fixed_pattern_cost(&h, &pattern, &theta, &phi).unwrap();
        assert!((a - b).abs() < 1e-12);
        // the sampled cost with pinned-off logits agrees too
        let logits = ArchLogits::new(4, vec![[-40.0, 40.0]; 2]).unwrap();
        let c = shvqe_cost(&theta, &phi, &logits, &h, 16, 7).unwrap();
        assert!((a - c).abs() < 1e-12);
    }

    #[test]
    fn sampled_cost_approaches_exhaustive_mean() {
        // n = 4: two elementary graphs, four patterns
        let h = build_xxz(4, 1.0).unwrap();
        let theta: Vec<f64> = (0..24).map(|i| (i as f64 * 0.37).sin()).collect();
        let phi: Vec<f64> = (0..12).map(|i| (i as f64 * 0.21).cos()).collect();
        let logits = ArchLogits::new(4, vec![[0.4, -0.1], [-0.3, 0.2]]).unwrap();

        let mut exact = 0.0;
        for pattern in GraphPattern::enumerate(4) {
            let pr = logits.pattern_probability(&pattern);
            exact += pr * fixed_pattern_cost(&h, &pattern, &theta, &phi).unwrap();
        }

        let n_s = 4000;
        let estimate = shvqe_cost(&theta, &phi, &logits, &h, n_s, 17).unwrap();
        // per-sample spread is bounded by the energy range over 4 patterns
        let energies: Vec<f64> = GraphPattern::enumerate(4)
            .iter()
            .map(|p| fixed_pattern_cost(&h, p, &theta, &phi).unwrap())
            .collect();
        let spread = energies.iter().cloned().fold(f64::MIN, f64::max)
            - energies.iter().cloned().fold(f64::MAX, f64::min);
        let three_sigma = 3.0 * spread / (n_s as f64).sqrt();
        assert!(
            (estimate - exact).abs() < three_sigma.max(1e-9),
            "estimate {estimate} exact {exact}"
        );
    }

    #[test]
    fn cost_respects_variational_bound() {
        let h = build_xxz(4, 1.0).unwrap();
        let (e0, _) = exact_ground(&h).unwrap();
        for seed in 0..5u64 {
            let a = HardwareEfficientAnsatz::random(4, 2, seed);
            let cost = vqe_cost(&h, a.theta()).unwrap();
            assert!(cost >= e0 - 1e-9);
        }
    }

    #[test]
    fn runs_are_bit_reproducible() {
        let h = build_xxz(4, 1.0).unwrap();
        let cfg = SpsaAdamConfig {
            max_iters: 30,
            samples_per_iter: 8,
            seed: 5,
            ..Default::default()
        };
        let a = run_shvqe(&h, 1, &cfg).unwrap();
        let b = run_shvqe(&h, 1, &cfg).unwrap();
        assert_eq!(a.trace.costs, b.trace.costs);
        assert_eq!(a.trace.param_hashes, b.trace.param_hashes);
        assert_eq!(a.energy, b.energy);
    }

    #[test]
    fn best_so_far_is_monotone() {
        let h = build_xxz(4, 1.0).unwrap();
        let cfg = SpsaAdamConfig {
            max_iters: 40,
            samples_per_iter: 8,
            seed: 2,
            ..Default::default()
        };
        let out = run_shvqe(&h, 1, &cfg).unwrap();
        for w in out.trace.best_costs.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
        // recorded best matches the cost stream
        let mut acc = f64::INFINITY;
        for (c, b) in out.trace.costs.iter().zip(out.trace.best_costs.iter()) {
            acc = acc.min(*c);
            assert_eq!(acc, *b);
        }
    }

    #[test]
    fn vqe_improves_over_initial_cost() {
        let h = build_xxz(4, 1.0).unwrap();
        let cfg = SpsaAdamConfig {
            max_iters: 120,
            seed: 3,
            ..Default::default()
        };
        let out = run_vqe(&h, 2, &cfg).unwrap();
        let first = out.trace.costs[0];
        assert!(out.energy < first, "energy {} first {first}", out.energy);
        let (e0, _) = exact_ground(&h).unwrap();
        assert!(out.energy >= e0 - 1e-9);
        for c in &out.trace.costs {
            assert!(c.is_finite());
        }
    }

    #[test]
    fn fixed_all_off_run_matches_vqe_run_shape() {
        // same seeds, same Schrödinger block: the '00' -pattern run optimizes
        // extra φ angles but its cost function coincides with VQE when φ=0;
        // here we only check both report valid energies above the bound
        let h = build_xxz(4, 1.0).unwrap();
        let (e0, _) = exact_ground(&h).unwrap();
        let cfg = SpsaAdamConfig {
            max_iters: 60,
            seed: 8,
            ..Default::default()
        };
        let pattern = GraphPattern::parse(4, "00").unwrap();
        let fixed = run(&h, 1, HeisenbergMode::Fixed(pattern), &cfg).unwrap();
        let vqe = run_vqe(&h, 1, &cfg).unwrap();
        assert!(fixed.energy >= e0 - 1e-9);
        assert!(vqe.energy >= e0 - 1e-9);
    }

    #[test]
    fn prepared_state_energy_matches_reported() {
        let h = build_xxz(4, 1.0).unwrap();
        let cfg = SpsaAdamConfig {
            max_iters: 40,
            samples_per_iter: 16,
            seed: 4,
            ..Default::default()
        };
        let out = run_shvqe(&h, 1, &cfg).unwrap();
        let state = prepare_sh_state(4, 1, &out.theta, &out.phi, &out.pattern).unwrap();
        let direct = state.expectation(&h).unwrap();
        assert!(
            (direct - out.energy).abs() < 1e-9,
            "direct {direct} reported {}",
            out.energy
        );
    }
}
