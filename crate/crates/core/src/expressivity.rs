//! Expressivity benchmarking of circuit ensembles through half-cut purity
//! moments.
//!
//! For an ensemble of output states the measure is
//! Δ_t = log E_Haar[Tr(ρ^t)] − log E_ensemble[Tr(ρ^t)] over the reduced
//! half-system density matrix (natural log). Δ_t ≈ 0 up to order t means
//! the ensemble reproduces Haar moments to that order, i.e. forms a
//! t-design at the level of these observables. Both expectations are
//! estimated by Monte Carlo; standard errors come from the jackknife.

use crate::ansatz::HardwareEfficientAnsatz;
use crate::clifford::random_clifford;
use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::rng::{child_seed, domain};
use crate::statevector::{haar_state, haar_unitary, haar_unitary4, GateOp, StateVector};

/// The virtual circuit appended to each ensemble sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeisenbergEnsemble {
    /// Plain brickwork only (the VQE setting).
    None,
    /// A fresh random circuit of basic Clifford gates per sample.
    RandomClifford { gate_count: usize },
    /// Random Clifford followed by a Haar-random single-qubit layer.
    CliffordWithLayer { gate_count: usize },
}

impl HeisenbergEnsemble {
    pub fn label(&self) -> &'static str {
        match self {
            HeisenbergEnsemble::None => "vqe",
            HeisenbergEnsemble::RandomClifford { .. } => "clifford",
            HeisenbergEnsemble::CliffordWithLayer { .. } => "sh",
        }
    }
}

/// One ensemble to benchmark: brickwork of Haar two-qubit blocks at the
/// given depth, optionally followed by a Heisenberg circuit, all seeded.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub n: usize,
    pub schrodinger_depth: usize,
    pub heisenberg: HeisenbergEnsemble,
    pub sample_count: usize,
    /// Independent budget for the Haar reference average.
    pub haar_sample_count: usize,
    pub t_max: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n % 2 != 0 {
            return Err(Error::contract("expressivity needs even n"));
        }
        if self.sample_count == 0 || self.haar_sample_count == 0 {
            return Err(Error::contract("sample counts must be >= 1"));
        }
        if self.t_max < 1 {
            return Err(Error::contract("t_max must be >= 1"));
        }
        Ok(())
    }
}

/// Draw ensemble member `index`: deterministic per (seed, index).
pub fn ensemble_sample(spec: &EnsembleSpec, index: usize) -> Result<StateVector> {
    spec.validate()?;
    if index >= spec.sample_count {
        return Err(Error::contract(format!(
            "sample index {index} >= sample_count {}",
            spec.sample_count
        )));
    }
    let n = spec.n;
    let sample_seed = child_seed(spec.seed, domain::ENSEMBLE_SAMPLE, index as u64);
    let mut state = StateVector::zero_state(n)?;

    let mut block = 0u64;
    for layer in 1..=spec.schrodinger_depth {
        for (a, b) in HardwareEfficientAnsatz::brick_pairs(n, layer) {
            let u = haar_unitary4(child_seed(sample_seed, domain::BRICK_BLOCK, block));
            block += 1;
            state.apply(&GateOp::two_from_matrix(a, b, &u)?)?;
        }
    }

    match spec.heisenberg {
        HeisenbergEnsemble::None => {}
        HeisenbergEnsemble::RandomClifford { gate_count }
        | HeisenbergEnsemble::CliffordWithLayer { gate_count } => {
            let circuit = random_clifford(
                n,
                gate_count,
                child_seed(sample_seed, domain::RANDOM_CLIFFORD, 0),
            );
            state.apply_clifford(&circuit)?;
            if let HeisenbergEnsemble::CliffordWithLayer { .. } = spec.heisenberg {
                for q in 0..n {
                    let u = haar_unitary(
                        2,
                        child_seed(sample_seed, domain::HEISENBERG_LAYER, q as u64),
                    );
                    let mut m = [[num_complex::Complex64::new(0.0, 0.0); 2]; 2];
                    for r in 0..2 {
                        for c in 0..2 {
                            m[r][c] = u[(r, c)];
                        }
                    }
                    state.apply(&GateOp::single(q, m)?)?;
                }
            }
        }
    }
    Ok(state)
}

/// One Δ_t estimate with its ingredients.
#[derive(Clone, Copy, Debug)]
pub struct DeltaRow {
    pub t: usize,
    pub e_ensemble: f64,
    pub e_haar: f64,
    pub delta: f64,
    /// Combined jackknife standard error of Δ_t.
    pub stderr: f64,
}

/// Δ_t for t = 1..t_max of one ensemble.
#[derive(Clone, Debug)]
pub struct DeltaReport {
    pub n: usize,
    pub schrodinger_depth: usize,
    pub ensemble_label: &'static str,
    pub sample_count: usize,
    pub seed: u64,
    pub rows: Vec<DeltaRow>,
}

impl DeltaReport {
    pub const CSV_HEADER: &'static str =
        "n,depth,ensemble,t,e_ensemble,e_haar,delta_t,stderr,samples,seed";

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{:.10e},{:.10e},{:.10e},{:.10e},{},{}",
                    self.n,
                    self.schrodinger_depth,
                    self.ensemble_label,
                    r.t,
                    r.e_ensemble,
                    r.e_haar,
                    r.delta,
                    r.stderr,
                    self.sample_count,
                    self.seed
                )
            })
            .collect()
    }

    pub fn row(&self, t: usize) -> &DeltaRow {
        &self.rows[t - 1]
    }
}

/// log(mean) of a positive sample with its jackknife standard error.
fn jackknife_log_mean(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let sum: f64 = xs.iter().sum();
    let log_mean = (sum / m).ln();
    if xs.len() < 2 {
        return (log_mean, 0.0);
    }
    let thetas: Vec<f64> = xs.iter().map(|x| ((sum - x) / (m - 1.0)).ln()).collect();
    let theta_bar = thetas.iter().sum::<f64>() / m;
    let var = thetas.iter().map(|t| (t - theta_bar).powi(2)).sum::<f64>() * (m - 1.0) / m;
    (log_mean, var.sqrt())
}

/// Monte Carlo Δ_t: ensemble moments against an independently sampled Haar
/// reference with its own budget.
pub fn delta_t(spec: &EnsembleSpec) -> Result<DeltaReport> {
    spec.validate()?;
    let ens: Vec<Result<Vec<f64>>> = map_indexed(spec.sample_count, |i| {
        ensemble_sample(spec, i)?.reduced_moments(spec.t_max)
    });
    let haar: Vec<Result<Vec<f64>>> = map_indexed(spec.haar_sample_count, |i| {
        haar_state(spec.n, child_seed(spec.seed, domain::HAAR_REFERENCE, i as u64))?
            .reduced_moments(spec.t_max)
    });
    let ens: Vec<Vec<f64>> = ens.into_iter().collect::<Result<_>>()?;
    let haar: Vec<Vec<f64>> = haar.into_iter().collect::<Result<_>>()?;

    let rows = (1..=spec.t_max)
        .map(|t| {
            let ens_t: Vec<f64> = ens.iter().map(|m| m[t - 1]).collect();
            let haar_t: Vec<f64> = haar.iter().map(|m| m[t - 1]).collect();
            let (log_e, se_e) = jackknife_log_mean(&ens_t);
            let (log_h, se_h) = jackknife_log_mean(&haar_t);
            DeltaRow {
                t,
                e_ensemble: log_e.exp(),
                e_haar: log_h.exp(),
                delta: log_h - log_e,
                stderr: (se_e * se_e + se_h * se_h).sqrt(),
            }
        })
        .collect();

    Ok(DeltaReport {
        n: spec.n,
        schrodinger_depth: spec.schrodinger_depth,
        ensemble_label: spec.heisenberg.label(),
        sample_count: spec.sample_count,
        seed: spec.seed,
        rows,
    })
}

/// Self-comparison control: Haar states against an independent Haar
/// reference. Every Δ_t is statistical zero.
pub fn haar_self_test(
    n: usize,
    sample_count: usize,
    haar_sample_count: usize,
    t_max: usize,
    seed: u64,
) -> Result<DeltaReport> {
    if n % 2 != 0 {
        return Err(Error::contract("expressivity needs even n"));
    }
    let ens: Vec<Result<Vec<f64>>> = map_indexed(sample_count, |i| {
        haar_state(n, child_seed(seed, domain::ENSEMBLE_SAMPLE, i as u64))?
            .reduced_moments(t_max)
    });
    let haar: Vec<Result<Vec<f64>>> = map_indexed(haar_sample_count, |i| {
        haar_state(n, child_seed(seed, domain::HAAR_REFERENCE, i as u64))?.reduced_moments(t_max)
    });
    let ens: Vec<Vec<f64>> = ens.into_iter().collect::<Result<_>>()?;
    let haar: Vec<Vec<f64>> = haar.into_iter().collect::<Result<_>>()?;
    let rows = (1..=t_max)
        .map(|t| {
            let ens_t: Vec<f64> = ens.iter().map(|m| m[t - 1]).collect();
            let haar_t: Vec<f64> = haar.iter().map(|m| m[t - 1]).collect();
            let (log_e, se_e) = jackknife_log_mean(&ens_t);
            let (log_h, se_h) = jackknife_log_mean(&haar_t);
            DeltaRow {
                t,
                e_ensemble: log_e.exp(),
                e_haar: log_h.exp(),
                delta: log_h - log_e,
                stderr: (se_e * se_e + se_h * se_h).sqrt(),
            }
        })
        .collect();
    Ok(DeltaReport {
        n,
        schrodinger_depth: 0,
        ensemble_label: "haar-self-test",
        sample_count,
        seed,
        rows,
    })
}

/// Whether a Δ profile statistically saturates (|Δ_t| below threshold or
/// within 3σ of zero) for every t in 3..=t_max.
pub fn is_saturated(report: &DeltaReport, threshold: f64) -> bool {
    report
        .rows
        .iter()
        .filter(|r| r.t >= 3)
        .all(|r| r.delta.abs() < threshold.max(3.0 * r.stderr))
}

/// One row of the equivalent-depth table.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub n: usize,
    pub sh_depth: usize,
    /// Smallest plain-brickwork depth whose Δ profile matches the reference
    /// ensemble within statistical error; None if not reached by the cap.
    pub equivalent_vqe_depth: Option<usize>,
}

/// For each n, find the smallest plain-circuit depth whose Δ_t profile
/// matches the reference (SH) circuit's within combined statistical error.
pub fn equivalent_depth_sweep(
    ns: &[usize],
    sh_depths: &[usize],
    heisenberg: HeisenbergEnsemble,
    sample_count: usize,
    haar_sample_count: usize,
    t_max: usize,
    max_vqe_depth: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for &sh_depth in sh_depths {
            let sh_report = delta_t(&EnsembleSpec {
                n,
                schrodinger_depth: sh_depth,
                heisenberg,
                sample_count,
                haar_sample_count,
                t_max,
                seed,
            })?;
            let mut found = None;
            for d in 0..=max_vqe_depth {
                let vqe_report = delta_t(&EnsembleSpec {
                    n,
                    schrodinger_depth: d,
                    heisenberg: HeisenbergEnsemble::None,
                    sample_count,
                    haar_sample_count,
                    t_max,
                    seed,
                })?;
                if profile_matches(&vqe_report, &sh_report) {
                    found = Some(d);
                    break;
                }
            }
            rows.push(SweepRow {
                n,
                sh_depth,
                equivalent_vqe_depth: found,
            });
        }
    }
    Ok(rows)
}

/// The candidate matches when it is at least as scrambled as the reference
/// (within 3σ of the combined error) at every t >= 2.
fn profile_matches(candidate: &DeltaReport, reference: &DeltaReport) -> bool {
    candidate
        .rows
        .iter()
        .zip(reference.rows.iter())
        .filter(|(c, _)| c.t >= 2)
        .all(|(c, r)| {
            let sigma = (c.stderr * c.stderr + r.stderr * r.stderr).sqrt();
            c.delta >= r.delta - 3.0 * sigma
        })
}

pub const SWEEP_CSV_HEADER: &'static str = "n,sh_depth,equivalent_vqe_depth";

impl SweepRow {
    pub fn csv_row(&self) -> String {
        match self.equivalent_vqe_depth {
            Some(d) => format!("{},{},{}", self.n, self.sh_depth, d),
            None => format!("{},{},unreached", self.n, self.sh_depth),
        }
    }
}

/// Per-block fidelity needed for a target total circuit fidelity in a
/// brickwork of `depth × ⌊n/2⌋` two-qubit blocks.
#[derive(Clone, Copy, Debug)]
pub struct FidelityRequirement {
    pub blocks: usize,
    pub per_block_fidelity: f64,
    pub per_block_infidelity: f64,
}

pub fn fidelity_requirement(
    total_fidelity: f64,
    depth: usize,
    n: usize,
) -> Result<FidelityRequirement> {
    if !(total_fidelity > 0.0 && total_fidelity <= 1.0) {
        return Err(Error::contract(format!(
            "total fidelity must be in (0,1], got {total_fidelity}"
        )));
    }
    let blocks = depth * (n / 2);
    let per_block = if blocks == 0 {
        1.0
    } else {
        total_fidelity.powf(1.0 / blocks as f64)
    };
    Ok(FidelityRequirement {
        blocks,
        per_block_fidelity: per_block,
        per_block_infidelity: 1.0 - per_block,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(
        depth: usize,
        heisenberg: HeisenbergEnsemble,
        samples: usize,
        seed: u64,
    ) -> EnsembleSpec {
        EnsembleSpec {
            n: 6,
            schrodinger_depth: depth,
            heisenberg,
            sample_count: samples,
            haar_sample_count: samples,
            t_max: 4,
            seed,
        }
    }

    #[test]
    fn depth_zero_without_heisenberg_is_vacuum() {
        let s = spec(0, HeisenbergEnsemble::None, 4, 1);
        let state = ensemble_sample(&s, 0).unwrap();
        assert!((state.amplitudes()[0].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clifford_samples_have_flat_entanglement_spectra() {
        // stabilizer state: Tr(rho^t) = 2^{-(t-1)k}, so m_3 = m_2^2, m_4 = m_2^3
        let s = spec(0, HeisenbergEnsemble::RandomClifford { gate_count: 120 }, 6, 2);
        for i in 0..6 {
            let m = ensemble_sample(&s, i).unwrap().reduced_moments(4).unwrap();
            assert!((m[2] - m[1] * m[1]).abs() < 1e-9, "m3 {m:?}");
            assert!((m[3] - m[1] * m[1] * m[1]).abs() < 1e-9, "m4 {m:?}");
        }
    }

    #[test]
    fn samples_are_deterministic_per_index() {
        let s = spec(2, HeisenbergEnsemble::CliffordWithLayer { gate_count: 50 }, 4, 3);
        let a = ensemble_sample(&s, 2).unwrap();
        let b = ensemble_sample(&s, 2).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let c = ensemble_sample(&s, 3).unwrap();
        assert!(a.fidelity(&c).unwrap() < 0.999);
    }

    #[test]
    fn moments_monotone_and_in_range() {
        let s = spec(1, HeisenbergEnsemble::None, 5, 4);
        for i in 0..5 {
            let m = ensemble_sample(&s, i).unwrap().reduced_moments(6).unwrap();
            for w in m.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
            for v in &m {
                assert!(*v > 0.0 && *v <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn haar_self_comparison_is_statistical_zero() {
        // ensemble == Haar states themselves: Δ_t within 3 standard errors
        let n = 6;
        let t_max = 4;
        let samples = 200;
        let haar_a: Vec<Vec<f64>> = (0..samples)
            .map(|i| {
                haar_state(n, child_seed(99, domain::ENSEMBLE_SAMPLE, i))
                    .unwrap()
                    .reduced_moments(t_max)
                    .unwrap()
            })
            .collect();
        let haar_b: Vec<Vec<f64>> = (0..samples)
            .map(|i| {
                haar_state(n, child_seed(99, domain::HAAR_REFERENCE, i))
                    .unwrap()
                    .reduced_moments(t_max)
                    .unwrap()
            })
            .collect();
        for t in 1..=t_max {
            let a: Vec<f64> = haar_a.iter().map(|m| m[t - 1]).collect();
            let b: Vec<f64> = haar_b.iter().map(|m| m[t - 1]).collect();
            let (la, sa) = jackknife_log_mean(&a);
            let (lb, sb) = jackknife_log_mean(&b);
            let delta = lb - la;
            let sigma = (sa * sa + sb * sb).sqrt();
            assert!(delta.abs() <= 3.0 * sigma.max(1e-12), "t={t} delta={delta} sigma={sigma}");
        }
    }

    #[test]
    fn jackknife_error_scales_with_sample_count() {
        // doubling the sample count shrinks the error by about sqrt(2)
        let n = 4;
        let draw = |count: usize, salt: u64| -> f64 {
            let xs: Vec<f64> = (0..count)
                .map(|i| {
                    haar_state(n, child_seed(salt, 55, i as u64))
                        .unwrap()
                        .reduced_moments(2)
                        .unwrap()[1]
                })
                .collect();
            jackknife_log_mean(&xs).1
        };
        let reps = 6;
        let mut ratio_acc = 0.0;
        for r in 0..reps {
            let se_small = draw(150, 1000 + r);
            let se_big = draw(300, 2000 + r);
            ratio_acc += se_small / se_big;
        }
        let ratio = ratio_acc / reps as f64;
        assert!((ratio - 2f64.sqrt()).abs() < 0.35, "ratio {ratio}");
    }

    #[test]
    fn fidelity_requirement_closed_forms() {
        let r = fidelity_requirement(0.9, 4, 12).unwrap();
        assert_eq!(r.blocks, 24);
        assert!((r.per_block_fidelity - 0.995_62).abs() < 5e-5);
        assert!((r.per_block_infidelity - 0.0044).abs() < 5e-5);

        let r = fidelity_requirement(0.9, 40, 12).unwrap();
        assert_eq!(r.blocks, 240);
        assert!((r.per_block_infidelity - 0.000_439).abs() < 5e-6);

        let r = fidelity_requirement(1.0, 4, 12).unwrap();
        assert_eq!(r.per_block_infidelity, 0.0);

        assert!(fidelity_requirement(0.0, 4, 12).is_err());
    }

    #[test]
    fn csv_shape() {
        let s = spec(0, HeisenbergEnsemble::None, 3, 8);
        let report = delta_t(&s).unwrap();
        let rows = report.csv_rows();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].starts_with("6,0,vqe,1,"));
    }
}
