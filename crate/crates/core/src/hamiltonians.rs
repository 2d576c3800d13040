//! Model Hamiltonians, text-format ingestion, and exact ground-state
//! oracles.
//!
//! The text format is line oriented: a `n <int>` header, then one
//! `<coeff> <paulistring>` term per line, `#` for comments, qubit 0 leftmost
//! in the Pauli string. Coefficients are written with 17 significant digits
//! so a save/load round trip is bit exact.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, DENSE_MAX_QUBITS};
use crate::rng::stream_rng;
use crate::statevector::StateVector;

/// XXZ ring: Σᵢ XᵢXᵢ₊₁ + YᵢYᵢ₊₁ + Δ ZᵢZᵢ₊₁ with periodic boundary,
/// for n >= 3. Exactly 3n terms (2n when Δ = 0), all weight 2.
pub fn build_xxz(n: usize, delta: f64) -> Result<PauliSum> {
    if n < 3 {
        return Err(Error::contract(format!(
            "XXZ ring needs n >= 3, got {n}"
        )));
    }
    let mut h = PauliSum::new(n);
    for i in 0..n {
        let j = (i + 1) % n;
        for (letter, coeff) in [('X', 1.0), ('Y', 1.0), ('Z', delta)] {
            let a = PauliString::single(n, i, letter)?;
            let b = PauliString::single(n, j, letter)?;
            h.add_term(&a.multiply(&b)?, coeff)?;
        }
    }
    Ok(h)
}

/// Parse a Hamiltonian in the text format from a string.
pub fn parse_hamiltonian(contents: &str) -> Result<PauliSum> {
    let mut sum: Option<PauliSum> = None;
    for (idx, raw) in contents.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match &mut sum {
            None => {
                let mut parts = line.split_whitespace();
                let key = parts.next();
                let value = parts.next();
                if key != Some("n") || parts.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("expected header 'n <int>', got '{line}'"),
                    });
                }
                let n: usize = value
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: format!("invalid qubit count '{}'", value.unwrap_or("")),
                    })?;
                if n == 0 || n > 64 {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("qubit count {n} out of range"),
                    });
                }
                sum = Some(PauliSum::new(n));
            }
            Some(sum) => {
                let mut parts = line.split_whitespace();
                let coeff_str = parts.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: "missing coefficient".into(),
                })?;
                let pauli_str = parts.next().ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: "missing Pauli string".into(),
                })?;
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "trailing tokens after term".into(),
                    });
                }
                let coeff: f64 = coeff_str.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid coefficient '{coeff_str}'"),
                })?;
                if !coeff.is_finite() {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("non-finite coefficient '{coeff_str}'"),
                    });
                }
                if pauli_str.chars().count() != sum.n() {
                    return Err(Error::Schema(format!(
                        "line {lineno}: Pauli string length {} != declared n = {}",
                        pauli_str.chars().count(),
                        sum.n()
                    )));
                }
                let p = PauliString::from_label(pauli_str).map_err(|e| Error::Parse {
                    line: lineno,
                    message: e.to_string(),
                })?;
                sum.add_term(&p, coeff)?;
            }
        }
    }
    sum.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing 'n <int>' header".into(),
    })
}

/// Load a Hamiltonian file.
pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<PauliSum> {
    let contents = fs::read_to_string(path)?;
    parse_hamiltonian(&contents)
}

/// Render a Hamiltonian in the text format, terms in mask order.
pub fn format_hamiltonian(h: &PauliSum, header_comments: &[&str]) -> String {
    let mut out = String::new();
    for c in header_comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("n {}\n", h.n()));
    for (p, coeff) in h.iter_terms() {
        let label: String = (0..h.n()).map(|q| p.letter(q)).collect();
        out.push_str(&format!("{coeff:.17e} {label}\n"));
    }
    out
}

/// Save a Hamiltonian file; round trips losslessly modulo term merging.
pub fn save_hamiltonian(
    h: &PauliSum,
    path: impl AsRef<Path>,
    header_comments: &[&str],
) -> Result<()> {
    fs::write(path, format_hamiltonian(h, header_comments))?;
    Ok(())
}

/// H·v for a Pauli sum acting on a raw amplitude vector.
pub(crate) fn apply_sum(h: &PauliSum, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (x, z, coeff) in h.iter_masks() {
        let y_phase = Complex64::i().powu((x & z).count_ones() % 4) * coeff;
        for (b, amp) in v.iter().enumerate() {
            let target = b ^ x as usize;
            let minus = (b as u64 & z).count_ones() & 1 == 1;
            let contrib = y_phase * amp;
            out[target] += if minus { -contrib } else { contrib };
        }
    }
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair of the Hamiltonian, computed matrix-free by Lanczos
/// iteration with full reorthogonalization. The returned vector satisfies
/// ‖Hv − Ev‖ < 1e-8 (typically ~1e-11); for a degenerate ground space any
/// unit vector in the space may be returned.
pub fn exact_ground(h: &PauliSum) -> Result<(f64, StateVector)> {
    let n = h.n();
    if n > DENSE_MAX_QUBITS {
        return Err(Error::Capacity {
            what: "exact diagonalization",
            limit: DENSE_MAX_QUBITS,
            n,
        });
    }
    let dim = 1usize << n;
    if h.is_empty() {
        return Ok((0.0, StateVector::zero_state(n)?));
    }

    // deterministic Gaussian start vector
    use rand_distr::StandardNormal;
    use rand::Rng;
    let mut rng = stream_rng(0x9d2c_5680, 0xdead, n as u64);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();

    const RESIDUAL_TARGET: f64 = 1e-11;
    const RESIDUAL_REQUIRED: f64 = 1e-8;
    let max_krylov = dim.min(220);

    for _restart in 0..4 {
        let nv = norm(&v);
        for a in &mut v {
            *a /= nv;
        }
        let mut basis: Vec<Vec<Complex64>> = vec![v.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        loop {
            let j = alphas.len();
            let mut w = apply_sum(h, &basis[j]);
            if j > 0 {
                let beta = betas[j - 1];
                for (wi, pi) in w.iter_mut().zip(basis[j - 1].iter()) {
                    *wi -= beta * pi;
                }
            }
            let alpha = dot(&basis[j], &w).re;
            for (wi, vi) in w.iter_mut().zip(basis[j].iter()) {
                *wi -= alpha * vi;
            }
            // two reorthogonalization sweeps keep the basis numerically sound
            for _ in 0..2 {
                for u in &basis {
                    let p = dot(u, &w);
                    for (wi, ui) in w.iter_mut().zip(u.iter()) {
                        *wi -= p * ui;
                    }
                }
            }
            alphas.push(alpha);
            let beta = norm(&w);
            let m = alphas.len();
            let invariant = beta < 1e-13;
            let exhausted = m == max_krylov;

            if invariant || exhausted || m % 5 == 0 {
                let (theta, y) = tridiag_ground(&alphas, &betas);
                let residual_est = beta * y.last().copied().unwrap_or(1.0).abs();
                if invariant || exhausted || residual_est < RESIDUAL_TARGET {
                    let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
                    for (coeff, bvec) in y.iter().zip(basis.iter()) {
                        for (r, b) in ritz.iter_mut().zip(bvec.iter()) {
                            *r += Complex64::new(*coeff, 0.0) * b;
                        }
                    }
                    let nr = norm(&ritz);
                    for a in &mut ritz {
                        *a /= nr;
                    }
                    let hv = apply_sum(h, &ritz);
                    let res: f64 = hv
                        .iter()
                        .zip(ritz.iter())
                        .map(|(hvi, vi)| (hvi - Complex64::new(theta, 0.0) * vi).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    if res < RESIDUAL_REQUIRED {
                        let state = StateVector::from_amplitudes(n, ritz)?;
                        return Ok((theta, state));
                    }
                    // not converged: restart the whole iteration from the
                    // current Ritz vector
                    v = ritz;
                    break;
                }
            }
            if invariant {
                // unreachable in practice: invariant subspace implies an
                // exact eigenpair, caught above
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
    }
    Err(Error::Numerical(
        "Lanczos failed to reach residual 1e-8".into(),
    ))
}

/// Ground eigenpair of a symmetric tridiagonal matrix given diagonals and
/// off-diagonals, via dense symmetric eigendecomposition of the small T.
fn tridiag_ground(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut best = 0;
    for i in 1..m {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    (
        eig.eigenvalues[best],
        eig.eigenvectors.column(best).iter().copied().collect(),
    )
}

/// Orthonormal basis of the ground eigenspace: all eigenvectors with
/// eigenvalue within `degeneracy_tol` of the minimum (dense path, n <= 12).
pub fn ground_space(h: &PauliSum, degeneracy_tol: f64) -> Result<(f64, Vec<StateVector>)> {
    let pairs = crate::dense::hermitian_eigenpairs(&h.to_dense()?);
    let e0 = pairs[0].0;
    let mut basis = Vec::new();
    for (ev, vec) in &pairs {
        if ev - e0 <= degeneracy_tol {
            let amps: Vec<Complex64> = vec.iter().copied().collect();
            let nv = norm(&amps);
            let amps = amps.into_iter().map(|a| a / nv).collect();
            basis.push(StateVector::from_amplitudes(h.n(), amps)?);
        }
    }
    Ok((e0, basis))
}

/// Squared projection of a state onto the ground eigenspace of `h`.
pub fn ground_space_fidelity(h: &PauliSum, psi: &StateVector, degeneracy_tol: f64) -> Result<f64> {
    let (_, basis) = ground_space(h, degeneracy_tol)?;
    let mut fid = 0.0;
    for b in &basis {
        fid += b.fidelity(psi)?;
    }
    Ok(fid.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::hermitian_eigenvalues;

    #[test]
    fn xxz_structure() {
        let h = build_xxz(4, 1.0).unwrap();
        assert_eq!(h.term_count(), 12);
        assert_eq!(h.max_weight(), 2);
        for (p, _) in h.iter_terms() {
            assert_eq!(p.weight(), 2);
        }
        let h0 = build_xxz(5, 0.0).unwrap();
        assert_eq!(h0.term_count(), 10);
        assert!(build_xxz(2, 1.0).is_err());
    }

    #[test]
    fn xxz_cyclic_relabel_invariance() {
        // shifting every site by one leaves the term multiset unchanged
        let n = 6;
        let h = build_xxz(n, 0.5).unwrap();
        let mut shifted = PauliSum::new(n);
        for (p, c) in h.iter_terms() {
            let mut label: Vec<char> = vec!['I'; n];
            for q in 0..n {
                label[(q + 1) % n] = p.letter(q);
            }
            let sp = PauliString::from_label(&label.iter().collect::<String>()).unwrap();
            shifted.add_term(&sp, c).unwrap();
        }
        assert_eq!(h, shifted);
    }

    #[test]
    fn round_trip_is_exact() {
        let h = build_xxz(6, 0.5).unwrap();
        let text = format_hamiltonian(&h, &["xxz ring", "delta 0.5"]);
        let back = parse_hamiltonian(&text).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn duplicate_terms_merge() {
        let text = "n 2\n0.25 XX\n0.5 XX\n";
        let h = parse_hamiltonian(text).unwrap();
        assert_eq!(h.term_count(), 1);
        let xx = PauliString::from_label("XX").unwrap();
        assert!((h.coefficient(&xx) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_header = "q 4\n";
        match parse_hamiltonian(bad_header) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad_char = "n 2\n0.5 XQ\n";
        match parse_hamiltonian(bad_char) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let wrong_len = "n 3\n0.5 XX\n";
        assert!(matches!(parse_hamiltonian(wrong_len), Err(Error::Schema(_))));
        let bad_coeff = "n 2\n0.x5 XX\n";
        match parse_hamiltonian(bad_coeff) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn spectrum_survives_round_trip() {
        let h = build_xxz(4, 1.3).unwrap();
        let text = format_hamiltonian(&h, &[]);
        let back = parse_hamiltonian(&text).unwrap();
        let ev_a = hermitian_eigenvalues(&h.to_dense().unwrap());
        let ev_b = hermitian_eigenvalues(&back.to_dense().unwrap());
        for (a, b) in ev_a.iter().zip(ev_b.iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn ground_of_single_z() {
        let mut h = PauliSum::new(1);
        h.add_term(&PauliString::from_label("Z").unwrap(), 1.0).unwrap();
        let (e, v) = exact_ground(&h).unwrap();
        assert!((e + 1.0).abs() < 1e-10);
        assert!(v.amplitudes()[1].norm() > 0.999_999);
    }

    #[test]
    fn lanczos_matches_dense_oracle() {
        let h = build_xxz(4, 1.0).unwrap();
        let (e, v) = exact_ground(&h).unwrap();
        let ev = hermitian_eigenvalues(&h.to_dense().unwrap());
        assert!((e - ev[0]).abs() < 1e-9, "lanczos {e} dense {}", ev[0]);
        // residual check
        let hv = apply_sum(&h, v.amplitudes());
        let res: f64 = hv
            .iter()
            .zip(v.amplitudes().iter())
            .map(|(a, b)| (a - Complex64::new(e, 0.0) * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn lanczos_handles_degenerate_ground() {
        // H = -X on one qubit of two: ground space is 2-fold degenerate
        let mut h = PauliSum::new(2);
        h.add_term(&PauliString::from_label("XI").unwrap(), -1.0).unwrap();
        let (e, v) = exact_ground(&h).unwrap();
        assert!((e + 1.0).abs() < 1e-10);
        let ev = v.expectation_string(&PauliString::from_label("XI").unwrap()).unwrap();
        assert!((ev - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ground_space_projection() {
        let mut h = PauliSum::new(1);
        h.add_term(&PauliString::from_label("Z").unwrap(), -1.0).unwrap();
        let (e0, basis) = ground_space(&h, 1e-9).unwrap();
        assert!((e0 + 1.0).abs() < 1e-12);
        assert_eq!(basis.len(), 1);
        let zero = StateVector::zero_state(1).unwrap();
        assert!((ground_space_fidelity(&h, &zero, 1e-9).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn xxz8_ground_energy_regression() {
        // frozen from the dense eigensolver oracle (test below pins n=4)
        let h = build_xxz(8, 1.0).unwrap();
        let (e, _) = exact_ground(&h).unwrap();
        let dense = hermitian_eigenvalues(&h.to_dense().unwrap())[0];
        assert!((e - dense).abs() < 1e-9);
        assert!(
            (e - XXZ8_DELTA1_GROUND_ENERGY).abs() < 1e-8,
            "ground energy {e}"
        );
    }

    /// Regression fixture: XXZ n=8, Δ=1 ground energy, frozen from the
    /// dense eigensolver oracle.
    pub(crate) const XXZ8_DELTA1_GROUND_ENERGY: f64 = -14.604373635748681;

    #[test]
    fn xxz_n2_dense_eigenvalues_symmetric() {
        // weight-2 terms on a 2-site line (open chain keeps keys distinct)
        let mut h = PauliSum::new(2);
        h.add_term(&PauliString::from_label("XX").unwrap(), 1.0).unwrap();
        h.add_term(&PauliString::from_label("YY").unwrap(), 1.0).unwrap();
        h.add_term(&PauliString::from_label("ZZ").unwrap(), 1.0).unwrap();
        let ev = hermitian_eigenvalues(&h.to_dense().unwrap());
        // singlet at -3, triplet at +1
        assert!((ev[0] + 3.0).abs() < 1e-10);
        for v in &ev[1..] {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }
}
