//! Dense-matrix helpers for small systems: gate matrices, full circuit
//! unitaries and Hermitian eigendecomposition. These back the exact
//! diagonalization path and the matrix oracles in the test suites; all of
//! them respect the n <= 12 dense ceiling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::clifford::{CliffordCircuit, CliffordGate};
use crate::error::{Error, Result};
use crate::pauli::DENSE_MAX_QUBITS;

type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn hadamard_matrix() -> CMat {
    let s = 1.0 / 2f64.sqrt();
    CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

pub fn s_matrix() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
}

/// Embed a single-qubit matrix on qubit `q` of `n` qubits
/// (qubit q on index bit q).
pub fn embed_single(n: usize, q: usize, m: &CMat) -> Result<CMat> {
    guard(n)?;
    let dim = 1usize << n;
    let bit = 1usize << q;
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let cq = (col & bit != 0) as usize;
        for rq in 0..2 {
            let row = (col & !bit) | if rq == 1 { bit } else { 0 };
            out[(row, col)] = m[(rq, cq)];
        }
    }
    Ok(out)
}

/// Embed a two-qubit matrix on qubits `(q0, q1)` of `n`; the 4x4 basis is
/// |q0 q1> with q0 the more significant pair bit.
pub fn embed_two(n: usize, q0: usize, q1: usize, m: &CMat) -> Result<CMat> {
    guard(n)?;
    assert_ne!(q0, q1);
    let dim = 1usize << n;
    let b0 = 1usize << q0;
    let b1 = 1usize << q1;
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let cpair = ((col & b0 != 0) as usize) << 1 | (col & b1 != 0) as usize;
        let base = col & !(b0 | b1);
        for rpair in 0..4 {
            let row = base
                | if rpair & 0b10 != 0 { b0 } else { 0 }
                | if rpair & 0b01 != 0 { b1 } else { 0 };
            out[(row, col)] = m[(rpair, cpair)];
        }
    }
    Ok(out)
}

pub fn cnot_matrix() -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(0, 0)] = c(1.0, 0.0);
    m[(1, 1)] = c(1.0, 0.0);
    m[(2, 3)] = c(1.0, 0.0);
    m[(3, 2)] = c(1.0, 0.0);
    m
}

pub fn cz_matrix() -> CMat {
    let mut m = CMat::identity(4, 4);
    m[(3, 3)] = c(-1.0, 0.0);
    m
}

/// Dense matrix of one Clifford gate embedded on `n` qubits.
pub fn clifford_gate_matrix(n: usize, gate: &CliffordGate) -> Result<CMat> {
    match *gate {
        CliffordGate::H(q) => embed_single(n, q, &hadamard_matrix()),
        CliffordGate::S(q) => embed_single(n, q, &s_matrix()),
        CliffordGate::Cnot { control, target } => embed_two(n, control, target, &cnot_matrix()),
        CliffordGate::Cz(a, b) => embed_two(n, a, b, &cz_matrix()),
    }
}

/// Full unitary of a circuit as applied to states (first gate rightmost).
pub fn circuit_matrix(circuit: &CliffordCircuit) -> Result<CMat> {
    let n = circuit.n();
    guard(n)?;
    let dim = 1usize << n;
    let mut total = CMat::identity(dim, dim);
    for gate in circuit.gates() {
        total = clifford_gate_matrix(n, gate)? * total;
    }
    Ok(total)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let eig = m.clone().symmetric_eigen();
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Full Hermitian eigendecomposition, pairs sorted ascending by eigenvalue.
pub fn hermitian_eigenpairs(m: &CMat) -> Vec<(f64, DVector<Complex64>)> {
    let eig = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, eig.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs
}

/// Max-abs-entry comparison.
pub fn matrices_close(a: &CMat, b: &CMat, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - y).norm() <= tol)
}

fn guard(n: usize) -> Result<()> {
    if n > DENSE_MAX_QUBITS {
        Err(Error::Capacity {
            what: "dense matrix",
            limit: DENSE_MAX_QUBITS,
            n,
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_is_unitary() {
        let h = hadamard_matrix();
        assert!(matrices_close(&(&h * h.adjoint()), &CMat::identity(2, 2), 1e-14));
    }

    #[test]
    fn embedding_respects_bit_order() {
        // X on qubit 1 of 2: flips index bit 1
        let x = CMat::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let m = embed_single(2, 1, &x).unwrap();
        assert_eq!(m[(2, 0)], c(1.0, 0.0));
        assert_eq!(m[(0, 2)], c(1.0, 0.0));
        assert_eq!(m[(3, 1)], c(1.0, 0.0));
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_z() {
        let z = crate::pauli::PauliString::from_label("Z")
            .unwrap()
            .to_dense()
            .unwrap();
        let ev = hermitian_eigenvalues(&z);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 1.0).abs() < 1e-12);
    }
}
