//! The parametrized single-qubit layer of the Heisenberg circuit.
//!
//! Each qubit carries a gate G = exp(−iθx σx)·exp(−iθy σy)·exp(−iθz σz).
//! Conjugating a Pauli sum by the layer rotates every non-identity site
//! through the SO(3) matrix R with rows G†σ_aG = Σ_b R_ab σ_b, so one
//! k-weight term expands into at most 3^k terms of the same weight.

use num_complex::Complex64;

use crate::clifford::CliffordCircuit;
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PRUNE_THRESHOLD};
use crate::statevector::GateOp;

type C = Complex64;

/// Per-qubit Euler angle triples (θx, θy, θz) in radians.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleQubitLayer {
    n: usize,
    angles: Vec<[f64; 3]>,
}

/// Per-qubit 3x3 rotation acting on Pauli labels under conjugation.
#[derive(Clone, Debug)]
pub struct So3Table {
    rotations: Vec<[[f64; 3]; 3]>,
}

impl So3Table {
    pub fn rotation(&self, q: usize) -> &[[f64; 3]; 3] {
        &self.rotations[q]
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }
}

fn rotation_gate(axis: usize, theta: f64) -> [[C; 2]; 2] {
    let c = C::new(theta.cos(), 0.0);
    let ms = C::new(0.0, -theta.sin());
    let zero = C::new(0.0, 0.0);
    match axis {
        // exp(-i θ σx) = cos θ I - i sin θ σx
        0 => [[c, ms], [ms, c]],
        // exp(-i θ σy)
        1 => [
            [c, C::new(-theta.sin(), 0.0)],
            [C::new(theta.sin(), 0.0), c],
        ],
        // exp(-i θ σz) = diag(e^{-iθ}, e^{iθ})
        _ => [
            [C::new(theta.cos(), -theta.sin()), zero],
            [zero, C::new(theta.cos(), theta.sin())],
        ],
    }
}

fn mat_mul(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            out[r][col] = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    out
}

const PAULI_2X2: [[[C; 2]; 2]; 3] = [
    // X
    [
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
    ],
    // Y
    [
        [C::new(0.0, 0.0), C::new(0.0, -1.0)],
        [C::new(0.0, 1.0), C::new(0.0, 0.0)],
    ],
    // Z
    [
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(-1.0, 0.0)],
    ],
];

impl SingleQubitLayer {
    pub fn new(angles: Vec<[f64; 3]>) -> Self {
        SingleQubitLayer {
            n: angles.len(),
            angles,
        }
    }

    /// All angles zero: the identity layer.
    pub fn identity(n: usize) -> Self {
        SingleQubitLayer {
            n,
            angles: vec![[0.0; 3]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[[f64; 3]] {
        &self.angles
    }

    /// The 2x2 unitary on qubit `q`.
    pub fn unitary(&self, q: usize) -> [[C; 2]; 2] {
        let [tx, ty, tz] = self.angles[q];
        let gx = rotation_gate(0, tx);
        let gy = rotation_gate(1, ty);
        let gz = rotation_gate(2, tz);
        mat_mul(&gx, &mat_mul(&gy, &gz))
    }

    /// Gate list applying the layer to a state.
    pub fn gate_ops(&self) -> Vec<GateOp> {
        (0..self.n)
            .map(|q| GateOp::single(q, self.unitary(q)).expect("rotation gates are unitary"))
            .collect()
    }
}

/// Compute the per-qubit SO(3) conjugation table: R_ab = ½ Tr(σ_b G† σ_a G).
pub fn layer_table(layer: &SingleQubitLayer) -> So3Table {
    let rotations = (0..layer.n())
        .map(|q| {
            let g = layer.unitary(q);
            let g_dag = [
                [g[0][0].conj(), g[1][0].conj()],
                [g[0][1].conj(), g[1][1].conj()],
            ];
            let mut r = [[0.0f64; 3]; 3];
            for (a, row) in r.iter_mut().enumerate() {
                let conj = mat_mul(&g_dag, &mat_mul(&PAULI_2X2[a], &g));
                for (b, entry) in row.iter_mut().enumerate() {
                    let sb = &PAULI_2X2[b];
                    // ½ Tr(σ_b · conj)
                    let tr = sb[0][0] * conj[0][0]
                        + sb[0][1] * conj[1][0]
                        + sb[1][0] * conj[0][1]
                        + sb[1][1] * conj[1][1];
                    *entry = 0.5 * tr.re;
                }
            }
            r
        })
        .collect();
    So3Table { rotations }
}

fn letter_index(x: bool, z: bool) -> Option<usize> {
    match (x, z) {
        (false, false) => None,
        (true, false) => Some(0),
        (true, true) => Some(1),
        (false, true) => Some(2),
    }
}

const LETTER_BITS: [(bool, bool); 3] = [(true, false), (true, true), (false, true)];

/// Conjugate a Pauli sum by the layer: L† H L. Every k-weight input term
/// expands into at most 3^k terms of weight exactly k; coefficients stay
/// real and are merged and pruned in the output.
pub fn conjugate_layer(layer: &SingleQubitLayer, h: &PauliSum) -> Result<PauliSum> {
    Error::check_same_n(layer.n(), h.n())?;
    let table = layer_table(layer);
    let mut out = PauliSum::new(h.n());
    for (x, z, coeff) in h.iter_masks() {
        expand_term(&table, x, z, coeff, &mut out);
    }
    Ok(out)
}

fn expand_term(table: &So3Table, x: u64, z: u64, coeff: f64, out: &mut PauliSum) {
    let support = x | z;
    // partial expansions over the non-identity sites
    let mut partial: Vec<(u64, u64, f64)> = vec![(0, 0, coeff)];
    let mut next: Vec<(u64, u64, f64)> = Vec::new();
    for q in 0..table.len() {
        let bit = 1u64 << q;
        if support & bit == 0 {
            continue;
        }
        let a = letter_index(x & bit != 0, z & bit != 0).expect("site in support");
        let r = table.rotation(q);
        next.clear();
        for &(px, pz, pc) in &partial {
            for (b, &(bx, bz)) in LETTER_BITS.iter().enumerate() {
                let weight = r[a][b];
                if weight.abs() < PRUNE_THRESHOLD {
                    continue;
                }
                next.push((
                    px | if bx { bit } else { 0 },
                    pz | if bz { bit } else { 0 },
                    pc * weight,
                ));
            }
        }
        std::mem::swap(&mut partial, &mut next);
    }
    for &(px, pz, pc) in &partial {
        out.add_masks(px, pz, pc);
    }
}

/// Full Heisenberg transform of Eq-style pipelines: with the Clifford part
/// applied to the state first and the layer second, the transformed
/// Hamiltonian is C†·(L†·H·L)·C — the layer folds in first.
pub fn transform_hamiltonian(
    t_clifford: &CliffordCircuit,
    t_layer: &SingleQubitLayer,
    h: &PauliSum,
) -> Result<PauliSum> {
    let folded = conjugate_layer(t_layer, h)?;
    t_clifford.transform_sum(&folded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{graph_circuit, random_clifford, GraphPattern};
    use crate::hamiltonians::build_xxz;
    use crate::pauli::PauliString;
    use crate::rng::stream_rng;
    use crate::statevector::StateVector;
    use rand::Rng;

    fn random_layer(n: usize, seed: u64) -> SingleQubitLayer {
        use std::f64::consts::PI;
        let mut rng = stream_rng(seed, 404, 0);
        SingleQubitLayer::new(
            (0..n)
                .map(|_| {
                    [
                        rng.gen_range(-PI..PI),
                        rng.gen_range(-PI..PI),
                        rng.gen_range(-PI..PI),
                    ]
                })
                .collect(),
        )
    }

    #[test]
    fn identity_layer_gives_identity_rotations() {
        let table = layer_table(&SingleQubitLayer::identity(3));
        for q in 0..3 {
            let r = table.rotation(q);
            for a in 0..3 {
                for b in 0..3 {
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((r[a][b] - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn z_quarter_rotation_maps_x_to_minus_y() {
        let layer = SingleQubitLayer::new(vec![[0.0, 0.0, std::f64::consts::FRAC_PI_4]]);
        let table = layer_table(&layer);
        let r = table.rotation(0);
        assert!((r[0][0]).abs() < 1e-12);
        assert!((r[0][1] + 1.0).abs() < 1e-12);
        assert!((r[0][2]).abs() < 1e-12);
    }

    #[test]
    fn rotations_are_special_orthogonal() {
        let layer = random_layer(4, 7);
        let table = layer_table(&layer);
        for q in 0..4 {
            let r = table.rotation(q);
            for i in 0..3 {
                for j in 0..3 {
                    let dot: f64 = (0..3).map(|k| r[i][k] * r[j][k]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-10, "q={q} ({i},{j})");
                }
            }
            let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
            assert!((det - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_layer_preserves_sum() {
        let h = build_xxz(4, 0.8).unwrap();
        let out = conjugate_layer(&SingleQubitLayer::identity(4), &h).unwrap();
        assert_eq!(out, h);
    }

    #[test]
    fn single_x_rotates_to_minus_y() {
        let mut h = PauliSum::new(2);
        h.add_term(&PauliString::from_label("XI").unwrap(), 1.0).unwrap();
        let mut layer = SingleQubitLayer::identity(2);
        layer.angles[0] = [0.0, 0.0, std::f64::consts::FRAC_PI_4];
        let out = conjugate_layer(&layer, &h).unwrap();
        assert_eq!(out.term_count(), 1);
        let yi = PauliString::from_label("YI").unwrap();
        assert!((out.coefficient(&yi) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn xxz_expansion_bounds_and_weights() {
        let h = build_xxz(4, 1.0).unwrap();
        let layer = random_layer(4, 21);
        let out = conjugate_layer(&layer, &h).unwrap();
        assert!(out.term_count() <= 12 * 9);
        for (p, _) in out.iter_terms() {
            assert_eq!(p.weight(), 2);
        }
    }

    #[test]
    fn expansion_preserves_squared_coefficient_sum() {
        // one input term at a time: Σ c_i² equals the input coefficient²
        let layer = random_layer(3, 33);
        for label in ["XYZ", "XII", "IYZ"] {
            let mut h = PauliSum::new(3);
            h.add_term(&PauliString::from_label(label).unwrap(), 0.7).unwrap();
            let out = conjugate_layer(&layer, &h).unwrap();
            let sq: f64 = out.iter_terms().map(|(_, c)| c * c).sum();
            assert!((sq - 0.49).abs() < 1e-10, "{label}: {sq}");
        }
    }

    #[test]
    fn transform_hamiltonian_identity() {
        let h = build_xxz(4, 1.0).unwrap();
        let c = crate::clifford::CliffordCircuit::new(4);
        let l = SingleQubitLayer::identity(4);
        assert_eq!(transform_hamiltonian(&c, &l, &h).unwrap(), h);
    }

    #[test]
    fn transform_preserves_spectrum() {
        use crate::dense::hermitian_eigenvalues;
        let h = build_xxz(4, 1.0).unwrap();
        let circuit = random_clifford(4, 16, 5);
        let layer = random_layer(4, 6);
        let ht = transform_hamiltonian(&circuit, &layer, &h).unwrap();
        let ev_a = hermitian_eigenvalues(&h.to_dense().unwrap());
        let ev_b = hermitian_eigenvalues(&ht.to_dense().unwrap());
        for (a, b) in ev_a.iter().zip(ev_b.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn consistency_with_statevector_oracle() {
        // <0|U† H_T U|0> == <psi|H|psi> with psi = Layer·Clifford·U|0>
        let n = 6;
        let h = build_xxz(n, 1.0).unwrap();
        let pattern = GraphPattern::parse(n, "101").unwrap();
        let circuit = graph_circuit(&pattern).unwrap();
        let layer = random_layer(n, 11);
        let ht = transform_hamiltonian(&circuit, &layer, &h).unwrap();

        // random product state as U|0>
        let u_layer = random_layer(n, 12);
        let mut psi_u = StateVector::zero_state(n).unwrap();
        for g in u_layer.gate_ops() {
            psi_u.apply(&g).unwrap();
        }
        let lhs = psi_u.expectation(&ht).unwrap();

        let mut psi_full = psi_u.clone();
        psi_full.apply_clifford(&circuit).unwrap();
        for g in layer.gate_ops() {
            psi_full.apply(&g).unwrap();
        }
        let rhs = psi_full.expectation(&h).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "lhs {lhs} rhs {rhs}");
    }
}
