//! Signed multi-qubit Pauli operators and real-weighted Pauli sums.
//!
//! A [`PauliString`] is stored in symplectic form: an X mask, a Z mask and a
//! global phase exponent. The stored operator equals the literal tensor
//! product of `{I, X, Y, Z}` factors times `i^phase_exp`, with the per-qubit
//! factor read off the mask bits as
//!
//! ```text
//! (x, z) = (0,0) -> I    (1,0) -> X    (0,1) -> Z    (1,1) -> Y
//! ```
//!
//! Y occupies both masks (it is X·Z with the compensating `i` folded into
//! `phase_exp`), which makes multiplication a pair of XORs plus phase
//! bookkeeping. Qubit 0 is the leftmost character in text form.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with absolute value below this are dropped after merges;
/// it sits below double-precision conjugation noise.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Largest qubit count for which dense matrices may be materialized.
pub const DENSE_MAX_QUBITS: usize = 12;

/// One signed n-qubit Pauli operator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exp: u8,
}

impl PauliString {
    /// The identity operator on `n` qubits.
    pub fn identity(n: usize) -> Self {
        assert!(n <= 64, "masks are 64-bit");
        PauliString {
            n,
            x_mask: 0,
            z_mask: 0,
            phase_exp: 0,
        }
    }

    /// Build from raw masks and phase exponent (mod 4).
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Self {
        assert!(n <= 64, "masks are 64-bit");
        let valid = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        assert!(x_mask & !valid == 0 && z_mask & !valid == 0, "mask out of range");
        PauliString {
            n,
            x_mask,
            z_mask,
            phase_exp: phase_exp % 4,
        }
    }

    /// A single-site literal Pauli embedded on qubit `q` of `n`.
    pub fn single(n: usize, q: usize, p: char) -> Result<Self> {
        if q >= n {
            return Err(Error::contract(format!("qubit {q} out of range for n={n}")));
        }
        let bit = 1u64 << q;
        let (x, z) = match p {
            'I' => (0, 0),
            'X' => (bit, 0),
            'Z' => (0, bit),
            'Y' => (bit, bit),
            other => return Err(Error::contract(format!("invalid Pauli letter '{other}'"))),
        };
        Ok(PauliString::from_masks(n, x, z, 0))
    }

    /// Parse a label like `"XIYZ"`, qubit 0 leftmost.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        if n == 0 || n > 64 {
            return Err(Error::contract(format!("label length {n} unsupported")));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, ch) in label.chars().enumerate() {
            let bit = 1u64 << q;
            match ch {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::contract(format!("invalid Pauli letter '{other}'")))
                }
            }
        }
        Ok(PauliString::from_masks(n, x, z, 0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Global phase exponent: the operator equals `i^phase_exp` times the
    /// literal tensor product.
    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_exp % 2 == 0
    }

    /// For Hermitian strings, the sign `i^phase_exp` as ±1.
    pub fn sign(&self) -> Result<f64> {
        match self.phase_exp {
            0 => Ok(1.0),
            2 => Ok(-1.0),
            e => Err(Error::contract(format!(
                "non-Hermitian phase exponent {e}"
            ))),
        }
    }

    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    /// The exact operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        Error::check_same_n(self.n, other.n)?;
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // Work through the X^x Z^z picture: pushing other's X factors left
        // past self's Z factors contributes (-1) per overlap, and the
        // literal-Y encoding folds i per Y site in and out.
        let y_in = (self.x_mask & self.z_mask).count_ones()
            + (other.x_mask & other.z_mask).count_ones();
        let y_out = (x & z).count_ones();
        let anti = 2 * (self.z_mask & other.x_mask).count_ones();
        let phase = (self.phase_exp as u32 + other.phase_exp as u32 + y_in + anti + 4 * 64
            - y_out)
            % 4;
        Ok(PauliString {
            n: self.n,
            x_mask: x,
            z_mask: z,
            phase_exp: phase as u8,
        })
    }

    /// Symplectic form ⟨a,b⟩: 0 when the operators commute, 1 when they
    /// anticommute.
    pub fn symplectic(&self, other: &PauliString) -> u8 {
        let p1 = (self.x_mask & other.z_mask).count_ones() & 1;
        let p2 = (self.z_mask & other.x_mask).count_ones() & 1;
        (p1 ^ p2) as u8
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.symplectic(other) == 0
    }

    /// Literal Pauli letter on qubit `q`.
    pub fn letter(&self, q: usize) -> char {
        let x = self.x_mask >> q & 1;
        let z = self.z_mask >> q & 1;
        match (x, z) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    /// Dense matrix, `2^n x 2^n`, qubit q on index bit q (qubit 0 is the
    /// least significant bit).
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        dense_guard(self.n)?;
        let dim = 1usize << self.n;
        let phase = Complex64::i().powu(self.phase_exp as u32);
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, amp) = self.apply_basis(col as u64);
            m[(row as usize, col)] = phase * amp;
        }
        Ok(m)
    }

    /// Action on a computational basis state: `P |b⟩ = amp |b ^ x_mask⟩`,
    /// excluding the global `i^phase_exp` factor.
    ///
    /// Bit q of `b` holds qubit q's value.
    pub(crate) fn apply_basis(&self, b: u64) -> (u64, Complex64) {
        let flipped = b ^ self.x_mask;
        let y_count = (self.x_mask & self.z_mask).count_ones();
        let minus = (b & self.z_mask).count_ones() & 1;
        let mut amp = Complex64::i().powu(y_count % 4);
        if minus == 1 {
            amp = -amp;
        }
        (flipped, amp)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp {
            0 => "",
            1 => "i*",
            2 => "-",
            _ => "-i*",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

fn dense_guard(n: usize) -> Result<()> {
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

/// Real-weighted sum of Hermitian Pauli strings; the Hamiltonian
/// representation before and after Heisenberg transforms.
///
/// Terms are keyed by `(x_mask, z_mask)` in a sorted map so iteration order
/// (and everything downstream of it) is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<(u64, u64), f64>,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "masks are 64-bit");
        PauliSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge `coeff * p` into the sum. `p` must be Hermitian; its sign is
    /// folded into the coefficient and near-zero results are pruned.
    pub fn add_term(&mut self, p: &PauliString, coeff: f64) -> Result<()> {
        Error::check_same_n(self.n, p.n())?;
        let signed = coeff * p.sign()?;
        self.add_masks(p.x_mask(), p.z_mask(), signed);
        Ok(())
    }

    pub(crate) fn add_masks(&mut self, x: u64, z: u64, coeff: f64) {
        let entry = self.terms.entry((x, z)).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < PRUNE_THRESHOLD {
            self.terms.remove(&(x, z));
        }
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms
            .get(&(p.x_mask(), p.z_mask()))
            .copied()
            .unwrap_or(0.0)
            * p.sign().unwrap_or(1.0)
    }

    /// Terms as `(string, coefficient)` pairs in mask order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (PauliString, f64)> + '_ {
        self.terms
            .iter()
            .map(|(&(x, z), &c)| (PauliString::from_masks(self.n, x, z, 0), c))
    }

    pub(crate) fn iter_masks(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        self.terms.iter().map(|(&(x, z), &c)| (x, z, c))
    }

    /// Largest term weight in the sum.
    pub fn max_weight(&self) -> usize {
        self.terms
            .keys()
            .map(|&(x, z)| (x | z).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Sum of squared coefficients.
    pub fn coeff_norm_sq(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    /// Multiset of absolute coefficient values, sorted.
    pub fn abs_coefficients(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.terms.values().map(|c| c.abs()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    /// Dense Hermitian matrix of the sum.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        dense_guard(self.n)?;
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for (&(x, z), &c) in &self.terms {
            let p = PauliString::from_masks(self.n, x, z, 0);
            for col in 0..dim {
                let (row, amp) = p.apply_basis(col as u64);
                m[(row as usize, col)] += amp * Complex64::new(c, 0.0);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::from_label("X").unwrap();
        let z = PauliString::from_label("Z").unwrap();
        let p = x.multiply(&z).unwrap();
        assert_eq!(p.x_mask(), 1);
        assert_eq!(p.z_mask(), 1);
        assert_eq!(p.phase_exp(), 3);
    }

    #[test]
    fn multiply_by_identity_is_noop() {
        let p = PauliString::from_label("XYZI").unwrap();
        let id = PauliString::identity(4);
        assert_eq!(p.multiply(&id).unwrap(), p);
        assert_eq!(id.multiply(&p).unwrap(), p);
    }

    #[test]
    fn two_qubit_product_matches_dense() {
        // (X⊗Z)·(Z⊗Z) = (XZ)⊗(ZZ) = -i Y⊗I
        let a = PauliString::from_label("XZ").unwrap();
        let b = PauliString::from_label("ZZ").unwrap();
        let p = a.multiply(&b).unwrap();
        assert_eq!(p.letter(0), 'Y');
        assert_eq!(p.letter(1), 'I');
        assert_eq!(p.phase_exp(), 3);
        let dense = a.to_dense().unwrap() * b.to_dense().unwrap();
        let diff = (p.to_dense().unwrap() - dense).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn multiply_size_mismatch_rejected() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(matches!(
            a.multiply(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weight_counts_non_identity_sites() {
        assert_eq!(PauliString::from_label("IIII").unwrap().weight(), 0);
        assert_eq!(PauliString::from_label("XIYZ").unwrap().weight(), 3);
    }

    #[test]
    fn dense_of_z_is_diag() {
        let z = PauliString::from_label("Z").unwrap().to_dense().unwrap();
        assert_eq!(z[(0, 0)], c(1.0, 0.0));
        assert_eq!(z[(1, 1)], c(-1.0, 0.0));
        assert_eq!(z[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn dense_of_sum_is_linear() {
        let mut s = PauliSum::new(1);
        s.add_term(&PauliString::from_label("X").unwrap(), 0.5).unwrap();
        s.add_term(&PauliString::from_label("Z").unwrap(), 0.5).unwrap();
        let m = s.to_dense().unwrap();
        assert_eq!(m[(0, 0)], c(0.5, 0.0));
        assert_eq!(m[(0, 1)], c(0.5, 0.0));
        assert_eq!(m[(1, 0)], c(0.5, 0.0));
        assert_eq!(m[(1, 1)], c(-0.5, 0.0));
    }

    #[test]
    fn dense_guard_rejects_large_n() {
        let p = PauliString::identity(13);
        assert!(matches!(p.to_dense(), Err(Error::Capacity { .. })));
    }

    #[test]
    fn add_term_cancels() {
        let mut s = PauliSum::new(1);
        let x = PauliString::from_label("X").unwrap();
        s.add_term(&x, 0.3).unwrap();
        s.add_term(&x, -0.3).unwrap();
        assert_eq!(s.term_count(), 0);
    }

    #[test]
    fn add_term_folds_sign() {
        let mut s = PauliSum::new(1);
        let minus_x = PauliString::from_masks(1, 1, 0, 2);
        s.add_term(&minus_x, 1.0).unwrap();
        let x = PauliString::from_label("X").unwrap();
        assert!((s.coefficient(&x) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn add_term_rejects_non_hermitian() {
        let mut s = PauliSum::new(1);
        let iy = PauliString::from_masks(1, 1, 1, 1);
        assert!(s.add_term(&iy, 1.0).is_err());
    }

    #[test]
    fn y_letter_roundtrip() {
        let y = PauliString::from_label("Y").unwrap();
        // literal Y = i * (XZ); dense check
        let d = y.to_dense().unwrap();
        assert!((d[(0, 1)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((d[(1, 0)] - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(format!("{y}"), "Y");
    }

    #[test]
    fn symplectic_form_predicts_commutation_exhaustively() {
        // n = 2: all 16 x 16 pairs
        let all: Vec<PauliString> = (0..4u64)
            .flat_map(|x| (0..4u64).map(move |z| PauliString::from_masks(2, x, z, 0)))
            .collect();
        for a in &all {
            for b in &all {
                let ab = a.multiply(b).unwrap();
                let ba = b.multiply(a).unwrap();
                let sym = a.symplectic(b);
                assert_eq!(ab.x_mask(), ba.x_mask());
                assert_eq!(ab.z_mask(), ba.z_mask());
                let phase_diff = (ab.phase_exp() + 4 - ba.phase_exp()) % 4;
                assert_eq!(phase_diff, 2 * sym, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn random_products_match_dense_oracle() {
        use rand::Rng;
        let mut rng = crate::rng::stream_rng(11, 99, 0);
        for _ in 0..200 {
            let n = rng.gen_range(1..=3usize);
            let mask = (1u64 << n) - 1;
            let a = PauliString::from_masks(
                n,
                rng.gen::<u64>() & mask,
                rng.gen::<u64>() & mask,
                rng.gen_range(0..4u8),
            );
            let b = PauliString::from_masks(
                n,
                rng.gen::<u64>() & mask,
                rng.gen::<u64>() & mask,
                rng.gen_range(0..4u8),
            );
            let prod = a.multiply(&b).unwrap();
            let dense = a.to_dense().unwrap() * b.to_dense().unwrap();
            let diff = (prod.to_dense().unwrap() - dense).norm();
            assert!(diff < 1e-12, "a={a} b={b}");
        }
    }
}
