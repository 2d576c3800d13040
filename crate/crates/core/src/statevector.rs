//! Dense 2^n statevector simulation for the Schrödinger side: gate
//! application, Pauli expectation values, reduced-density-matrix moments,
//! fidelities and Haar sampling.
//!
//! Qubit q lives on index bit q of the amplitude array (qubit 0 is the
//! least significant bit).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::clifford::{CliffordCircuit, CliffordGate};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::rng::{domain, stream_rng};

/// Desk-scale ceiling on simulated qubits.
pub const STATE_MAX_QUBITS: usize = 16;

const UNITARITY_TOL: f64 = 1e-10;

type C = Complex64;

fn capacity_guard(n: usize) -> Result<()> {
    if n > STATE_MAX_QUBITS {
        Err(Error::Capacity {
            what: "statevector",
            limit: STATE_MAX_QUBITS,
            n,
        })
    } else {
        Ok(())
    }
}

/// A 2x2 or 4x4 unitary bound to target qubits.
#[derive(Clone, Debug)]
pub enum GateOp {
    Single {
        qubit: usize,
        matrix: [[C; 2]; 2],
    },
    /// The 4x4 basis is |q0 q1> with q0 the more significant pair bit.
    Two {
        qubits: (usize, usize),
        matrix: [[C; 4]; 4],
    },
}

impl GateOp {
    pub fn single(qubit: usize, matrix: [[C; 2]; 2]) -> Result<Self> {
        check_unitary_2(&matrix)?;
        Ok(GateOp::Single { qubit, matrix })
    }

    pub fn two(q0: usize, q1: usize, matrix: [[C; 4]; 4]) -> Result<Self> {
        if q0 == q1 {
            return Err(Error::contract("two-qubit gate needs distinct qubits"));
        }
        check_unitary_4(&matrix)?;
        Ok(GateOp::Two {
            qubits: (q0, q1),
            matrix,
        })
    }

    pub fn two_from_matrix(q0: usize, q1: usize, m: &DMatrix<C>) -> Result<Self> {
        assert_eq!(m.shape(), (4, 4));
        let mut matrix = [[C::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for col in 0..4 {
                matrix[r][col] = m[(r, col)];
            }
        }
        GateOp::two(q0, q1, matrix)
    }

    fn from_clifford(gate: &CliffordGate) -> GateOp {
        let z = C::new(0.0, 0.0);
        let o = C::new(1.0, 0.0);
        match *gate {
            CliffordGate::H(q) => {
                let s = C::new(1.0 / 2f64.sqrt(), 0.0);
                GateOp::Single {
                    qubit: q,
                    matrix: [[s, s], [s, -s]],
                }
            }
            CliffordGate::S(q) => GateOp::Single {
                qubit: q,
                matrix: [[o, z], [z, C::new(0.0, 1.0)]],
            },
            CliffordGate::Cnot { control, target } => GateOp::Two {
                qubits: (control, target),
                matrix: [
                    [o, z, z, z],
                    [z, o, z, z],
                    [z, z, z, o],
                    [z, z, o, z],
                ],
            },
            CliffordGate::Cz(a, b) => GateOp::Two {
                qubits: (a, b),
                matrix: [
                    [o, z, z, z],
                    [z, o, z, z],
                    [z, z, o, z],
                    [z, z, z, -o],
                ],
            },
        }
    }

    fn max_qubit(&self) -> usize {
        match self {
            GateOp::Single { qubit, .. } => *qubit,
            GateOp::Two { qubits, .. } => qubits.0.max(qubits.1),
        }
    }
}

fn check_unitary_2(m: &[[C; 2]; 2]) -> Result<()> {
    for i in 0..2 {
        for j in 0..2 {
            let dot: C = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot - C::new(expect, 0.0)).norm() > UNITARITY_TOL {
                return Err(Error::contract("gate matrix is not unitary"));
            }
        }
    }
    Ok(())
}

fn check_unitary_4(m: &[[C; 4]; 4]) -> Result<()> {
    for i in 0..4 {
        for j in 0..4 {
            let dot: C = (0..4).map(|k| m[k][i].conj() * m[k][j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot - C::new(expect, 0.0)).norm() > UNITARITY_TOL {
                return Err(Error::contract("gate matrix is not unitary"));
            }
        }
    }
    Ok(())
}

/// Dense complex amplitude vector of dimension 2^n.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<C>,
}

impl StateVector {
    /// The computational basis state |0...0>.
    pub fn zero_state(n: usize) -> Result<Self> {
        capacity_guard(n)?;
        let mut amps = vec![C::new(0.0, 0.0); 1 << n];
        amps[0] = C::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C>) -> Result<Self> {
        capacity_guard(n)?;
        if amps.len() != 1 << n {
            return Err(Error::contract(format!(
                "amplitude count {} != 2^{n}",
                amps.len()
            )));
        }
        let state = StateVector { n, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!("state norm {norm} != 1")));
        }
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Apply one gate in place.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        if gate.max_qubit() >= self.n {
            return Err(Error::contract(format!(
                "gate qubit out of range for n={}",
                self.n
            )));
        }
        match gate {
            GateOp::Single { qubit, matrix } => self.apply_single(*qubit, matrix),
            GateOp::Two { qubits, matrix } => self.apply_two(qubits.0, qubits.1, matrix),
        }
        debug_assert!((self.norm() - 1.0).abs() < 1e-10);
        Ok(())
    }

    fn apply_single(&mut self, q: usize, m: &[[C; 2]; 2]) {
        let bit = 1usize << q;
        let dim = self.amps.len();
        let mut base = 0usize;
        while base < dim {
            if base & bit != 0 {
                base += bit;
                continue;
            }
            for low in base..base + bit {
                let a0 = self.amps[low];
                let a1 = self.amps[low | bit];
                self.amps[low] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[low | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += 2 * bit;
        }
    }

    fn apply_two(&mut self, q0: usize, q1: usize, m: &[[C; 4]; 4]) {
        let b0 = 1usize << q0;
        let b1 = 1usize << q1;
        let dim = self.amps.len();
        for idx in 0..dim {
            if idx & (b0 | b1) != 0 {
                continue;
            }
            let i00 = idx;
            let i01 = idx | b1;
            let i10 = idx | b0;
            let i11 = idx | b0 | b1;
            let a = [
                self.amps[i00],
                self.amps[i01],
                self.amps[i10],
                self.amps[i11],
            ];
            for (r, &target) in [i00, i01, i10, i11].iter().enumerate() {
                self.amps[target] =
                    m[r][0] * a[0] + m[r][1] * a[1] + m[r][2] * a[2] + m[r][3] * a[3];
            }
        }
    }

    /// Apply every gate of a Clifford circuit in order.
    pub fn apply_clifford(&mut self, circuit: &CliffordCircuit) -> Result<()> {
        Error::check_same_n(self.n, circuit.n())?;
        for gate in circuit.gates() {
            self.apply(&GateOp::from_clifford(gate))?;
        }
        Ok(())
    }

    /// Expectation value of a Hermitian Pauli sum, `Σᵢ gᵢ ⟨ψ|Pᵢ|ψ⟩`.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        Error::check_same_n(self.n, h.n())?;
        let mut total = C::new(0.0, 0.0);
        for (x, z, coeff) in h.iter_masks() {
            total += C::new(coeff, 0.0) * self.pauli_overlap(x, z);
        }
        if total.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "expectation has imaginary residue {:.3e}",
                total.im
            )));
        }
        Ok(total.re)
    }

    /// Expectation of a single Hermitian Pauli string (sign included).
    pub fn expectation_string(&self, p: &PauliString) -> Result<f64> {
        Error::check_same_n(self.n, p.n())?;
        let sign = p.sign()?;
        let v = self.pauli_overlap(p.x_mask(), p.z_mask());
        if v.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "expectation has imaginary residue {:.3e}",
                v.im
            )));
        }
        Ok(sign * v.re)
    }

    /// ⟨ψ| L |ψ⟩ for the literal Pauli with the given masks.
    fn pauli_overlap(&self, x: u64, z: u64) -> C {
        let y_phase = C::i().powu((x & z).count_ones() % 4);
        let mut acc = C::new(0.0, 0.0);
        for (b, amp) in self.amps.iter().enumerate() {
            let flipped = b ^ x as usize;
            let minus = (b as u64 & z).count_ones() & 1 == 1;
            let contrib = self.amps[flipped].conj() * amp;
            acc += if minus { -contrib } else { contrib };
        }
        acc * y_phase
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C> {
        Error::check_same_n(self.n, other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Trace moments Tr(ρ^t), t = 1..t_max, of the reduced density matrix of
    /// the first n/2 qubits. Eigen-decomposes ρ once and reuses the spectrum
    /// for all t.
    pub fn reduced_moments(&self, t_max: usize) -> Result<Vec<f64>> {
        if self.n % 2 != 0 {
            return Err(Error::contract("reduced_moments needs even n"));
        }
        let half = self.n / 2;
        let d_a = 1usize << half;
        let mut rho = DMatrix::<C>::zeros(d_a, d_a);
        for h in 0..d_a {
            let base = h << half;
            for a in 0..d_a {
                let psi_a = self.amps[base | a];
                if psi_a.norm_sqr() == 0.0 {
                    continue;
                }
                for a2 in 0..d_a {
                    rho[(a, a2)] += psi_a * self.amps[base | a2].conj();
                }
            }
        }
        let eigs = rho.symmetric_eigen().eigenvalues;
        let lambda: Vec<f64> = eigs.iter().map(|v| v.max(0.0)).collect();
        let trace: f64 = lambda.iter().sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "reduced density matrix trace {trace} != 1"
            )));
        }
        let mut moments = Vec::with_capacity(t_max);
        let mut powers = lambda.clone();
        for t in 1..=t_max {
            if t > 1 {
                for (p, l) in powers.iter_mut().zip(lambda.iter()) {
                    *p *= l;
                }
            }
            moments.push(powers.iter().sum());
        }
        Ok(moments)
    }
}

/// Normalized i.i.d. complex Gaussian vector: a Haar-random pure state.
pub fn haar_state(n: usize, seed: u64) -> Result<StateVector> {
    capacity_guard(n)?;
    let mut rng = stream_rng(seed, domain::HAAR_REFERENCE, 0);
    let dim = 1usize << n;
    let mut amps: Vec<C> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    Ok(StateVector { n, amps })
}

/// Haar-random unitary of the given dimension: QR of a complex Ginibre
/// matrix via modified Gram-Schmidt, which fixes the positive-real-diagonal
/// gauge of R.
pub fn haar_unitary(dim: usize, seed: u64) -> DMatrix<C> {
    let mut rng = stream_rng(seed, domain::HAAR_REFERENCE, 1);
    let mut g = DMatrix::<C>::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(r, c)] = C::new(re, im);
        }
    }
    for col in 0..dim {
        for prev in 0..col {
            let proj: C = (0..dim).map(|r| g[(r, prev)].conj() * g[(r, col)]).sum();
            for r in 0..dim {
                let sub = proj * g[(r, prev)];
                g[(r, col)] -= sub;
            }
        }
        let norm = (0..dim).map(|r| g[(r, col)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..dim {
            g[(r, col)] /= C::new(norm, 0.0);
        }
    }
    g
}

/// Haar-random two-qubit block.
pub fn haar_unitary4(seed: u64) -> DMatrix<C> {
    haar_unitary(4, seed)
}

/// Outcome statistics of a simulated shot campaign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotEstimate {
    pub mean: f64,
    /// Unbiased sample variance of the ±1 outcomes.
    pub variance: f64,
    pub shots: usize,
}

/// Simulate `shots` projective ±1 measurements of a Hermitian Pauli string:
/// Pr(+1) = (1 + ⟨P⟩)/2.
pub fn sample_pauli(
    state: &StateVector,
    p: &PauliString,
    shots: usize,
    seed: u64,
) -> Result<ShotEstimate> {
    if shots == 0 {
        return Err(Error::contract("shots must be >= 1"));
    }
    let ev = state.expectation_string(p)?.clamp(-1.0, 1.0);
    let p_plus = (1.0 + ev) / 2.0;
    let mut rng = stream_rng(seed, domain::SHOT_SAMPLING, 0);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..shots {
        let outcome = if rng.gen::<f64>() < p_plus { 1.0 } else { -1.0 };
        sum += outcome;
        sum_sq += outcome * outcome;
    }
    let mean = sum / shots as f64;
    let variance = if shots > 1 {
        (sum_sq - shots as f64 * mean * mean) / (shots as f64 - 1.0)
    } else {
        0.0
    };
    Ok(ShotEstimate {
        mean,
        variance: variance.max(0.0),
        shots,
    })
}
