//! Measurement-cost analysis: shot-count formulas, allocation strategies
//! over the terms of a transformed observable, and simulated verification
//! of the term-count overhead.
//!
//! Estimating ⟨P⟩ to standard error ε takes N = Var[P]/ε² shots. After the
//! Heisenberg transform splits one Pauli into m_h terms with Σc_i² = 1,
//! measuring each term separately with a uniform shot split costs roughly
//! m_h times as many shots for the same accuracy; allocating shots
//! proportionally to |c_i| is the constrained optimum of the estimator
//! variance, while p_i ∝ c_i² performs exactly like the uniform split.

use crate::clifford::CliffordCircuit;
use crate::error::{Error, Result};
use crate::layer::{transform_hamiltonian, SingleQubitLayer};
use crate::parallel::map_indexed;
use crate::pauli::{PauliString, PauliSum};
use crate::rng::{child_seed, domain};
use crate::statevector::{sample_pauli, StateVector};

/// Shot fractions over the terms of an observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AllocationStrategy {
    Uniform,
    AbsCoeff,
    SquaredCoeff,
}

impl AllocationStrategy {
    pub fn label(&self) -> &'static str {
        match self {
            AllocationStrategy::Uniform => "uniform",
            AllocationStrategy::AbsCoeff => "abs_coeff",
            AllocationStrategy::SquaredCoeff => "squared_coeff",
        }
    }
}

/// A concrete division of a shot budget: fractions sum to 1, integer shots
/// conserve the total with every term getting at least one shot.
#[derive(Clone, Debug)]
pub struct AllocationPlan {
    pub strategy: AllocationStrategy,
    pub fractions: Vec<f64>,
    pub shots: Vec<usize>,
    pub total: usize,
}

/// Shots needed to estimate an observable with variance `variance` to
/// standard error `epsilon`: ceil(Var/ε²), at least one.
pub fn shots_required(variance: f64, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::contract(format!("epsilon must be positive, got {epsilon}")));
    }
    if variance < 0.0 {
        return Err(Error::contract(format!("variance must be >= 0, got {variance}")));
    }
    Ok(((variance / (epsilon * epsilon)).ceil() as usize).max(1))
}

/// Divide `total` shots over terms with the given coefficients.
pub fn allocate(
    coeffs: &[f64],
    strategy: AllocationStrategy,
    total: usize,
) -> Result<AllocationPlan> {
    let m = coeffs.len();
    if m == 0 || coeffs.iter().all(|c| *c == 0.0) {
        return Err(Error::contract("allocation needs a nonzero coefficient vector"));
    }
    if total < m {
        return Err(Error::contract(format!(
            "budget {total} < term count {m}"
        )));
    }
    let raw: Vec<f64> = match strategy {
        AllocationStrategy::Uniform => vec![1.0; m],
        AllocationStrategy::AbsCoeff => coeffs.iter().map(|c| c.abs()).collect(),
        AllocationStrategy::SquaredCoeff => coeffs.iter().map(|c| c * c).collect(),
    };
    let sum: f64 = raw.iter().sum();
    let fractions: Vec<f64> = raw.iter().map(|r| r / sum).collect();
    let shots = largest_remainder(&fractions, total);
    Ok(AllocationPlan {
        strategy,
        fractions,
        shots,
        total,
    })
}

/// Largest-remainder rounding with a per-term floor of one shot.
fn largest_remainder(fractions: &[f64], total: usize) -> Vec<usize> {
    let m = fractions.len();
    let quotas: Vec<f64> = fractions.iter().map(|f| f * total as f64).collect();
    let mut shots: Vec<usize> = quotas
        .iter()
        .map(|q| (q.floor() as usize).max(1))
        .collect();
    let mut assigned: usize = shots.iter().sum();

    // floor bumps may overshoot: reclaim from the largest overshoots first
    while assigned > total {
        let victim = (0..m)
            .filter(|&i| shots[i] > 1)
            .max_by(|&a, &b| {
                let oa = shots[a] as f64 - quotas[a];
                let ob = shots[b] as f64 - quotas[b];
                oa.partial_cmp(&ob).unwrap()
            })
            .expect("total >= m guarantees a reducible entry");
        shots[victim] -= 1;
        assigned -= 1;
    }
    // distribute the remainder by largest fractional part
    if assigned < total {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            let ra = quotas[a] - quotas[a].floor();
            let rb = quotas[b] - quotas[b].floor();
            rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
        });
        let mut idx = 0;
        while assigned < total {
            shots[order[idx % m]] += 1;
            assigned += 1;
            idx += 1;
        }
    }
    shots
}

/// The estimator-variance objective Σ c_i² Var_i / (N p_i) of a plan.
pub fn estimator_variance(coeffs: &[f64], variances: &[f64], plan: &AllocationPlan) -> f64 {
    coeffs
        .iter()
        .zip(variances.iter())
        .zip(plan.fractions.iter())
        .map(|((c, v), p)| c * c * v / (plan.total as f64 * p))
        .sum()
}

/// Outcome of one simulated overhead comparison.
#[derive(Clone, Debug)]
pub struct OverheadResult {
    /// Shots to reach ε measuring the original Pauli on the transformed state.
    pub n1: usize,
    /// Shots to reach ε measuring the expanded terms on the bare state with
    /// a uniform split.
    pub n2: usize,
    /// Term count of the transformed observable.
    pub m_h: usize,
    pub ratio: f64,
    /// Empirical variance of the direct measurement.
    pub direct_variance: f64,
    /// Expansion coefficients and their empirical term variances, in mask
    /// order.
    pub coeffs: Vec<f64>,
    pub term_variances: Vec<f64>,
}

/// Shots needed to reach standard error ε under an arbitrary shot split:
/// N = Σ c_i² Var_i / p_i / ε² (uniform fractions recover the m_h overhead).
pub fn shots_for_allocation(
    coeffs: &[f64],
    variances: &[f64],
    fractions: &[f64],
    epsilon: f64,
) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::contract("epsilon must be positive"));
    }
    let total: f64 = coeffs
        .iter()
        .zip(variances.iter())
        .zip(fractions.iter())
        .map(|((c, v), p)| c * c * v / p)
        .sum();
    Ok(((total / (epsilon * epsilon)).ceil() as usize).max(1))
}

/// Simulate both measurement routes for one Hermitian Pauli `h_term` under
/// the Heisenberg circuit (Clifford part + layer):
/// direct estimation of ⟨P_h⟩ on T·state versus term-wise estimation of
/// ⟨T†P_hT⟩ on the bare state. Shot counts come from empirical variances
/// over `calibration_shots` simulated shots per observable.
pub fn overhead_experiment(
    h_term: &PauliString,
    t_clifford: &CliffordCircuit,
    t_layer: &SingleQubitLayer,
    state: &StateVector,
    epsilon: f64,
    calibration_shots: usize,
    seed: u64,
) -> Result<OverheadResult> {
    if !(epsilon > 0.0) {
        return Err(Error::contract("epsilon must be positive"));
    }
    let n = state.n();
    Error::check_same_n(n, h_term.n())?;

    let mut single = PauliSum::new(n);
    single.add_term(h_term, 1.0)?;
    let expanded = transform_hamiltonian(t_clifford, t_layer, &single)?;
    let m_h = expanded.term_count();

    // T applied to the state: Clifford first, then the layer
    let mut transformed = state.clone();
    transformed.apply_clifford(t_clifford)?;
    for gate in t_layer.gate_ops() {
        transformed.apply(&gate)?;
    }

    let direct = sample_pauli(
        &transformed,
        h_term,
        calibration_shots,
        child_seed(seed, domain::SHOT_SAMPLING, 0),
    )?;
    let n1 = shots_required(direct.variance, epsilon)?;

    // uniform split over the expanded terms (Σ over i of m_h c_i² Var_i / ε²)
    let mut coeffs = Vec::with_capacity(m_h);
    let mut term_variances = Vec::with_capacity(m_h);
    let mut n2_real = 0.0;
    for (idx, (p, coeff)) in expanded.iter_terms().enumerate() {
        let est = sample_pauli(
            state,
            &p,
            calibration_shots,
            child_seed(seed, domain::SHOT_SAMPLING, idx as u64 + 1),
        )?;
        n2_real += m_h as f64 * coeff * coeff * est.variance / (epsilon * epsilon);
        coeffs.push(coeff);
        term_variances.push(est.variance);
    }
    let n2 = (n2_real.ceil() as usize).max(1);

    Ok(OverheadResult {
        n1,
        n2,
        m_h,
        ratio: n2 as f64 / n1 as f64,
        direct_variance: direct.variance,
        coeffs,
        term_variances,
    })
}

/// Repeat the overhead experiment over independently seeded trials (fresh
/// Haar input states) and report per-trial results.
pub fn overhead_trials(
    h_term: &PauliString,
    t_clifford: &CliffordCircuit,
    t_layer: &SingleQubitLayer,
    n: usize,
    epsilon: f64,
    calibration_shots: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<OverheadResult>> {
    let results: Vec<Result<OverheadResult>> = map_indexed(trials, |i| {
        let trial_seed = child_seed(seed, domain::OVERHEAD_TRIAL, i as u64);
        let state = crate::statevector::haar_state(n, trial_seed)?;
        overhead_experiment(
            h_term,
            t_clifford,
            t_layer,
            &state,
            epsilon,
            calibration_shots,
            trial_seed,
        )
    });
    results.into_iter().collect()
}

/// Exact (simulator-side) variance of a Hermitian Pauli on a state:
/// Var[P] = 1 − ⟨P⟩² since P² = I.
pub fn exact_pauli_variance(state: &StateVector, p: &PauliString) -> Result<f64> {
    let ev = state.expectation_string(p)?;
    Ok(1.0 - ev * ev)
}

/// Exact variance of a unit-normalized transformed observable A = Σ c_i P_i
/// with Σ c_i² = 1: since A = T†P_hT is itself a Pauli conjugate, A² = I and
/// Var[A] = 1 − ⟨A⟩².
pub fn exact_sum_variance(state: &StateVector, a: &PauliSum) -> Result<f64> {
    let ev = state.expectation(a)?;
    Ok(1.0 - ev * ev)
}
