//! Clifford circuits over {H, S, CNOT, CZ} and classical conjugation of
//! Pauli operators, the Heisenberg-picture workhorse: a Clifford maps a
//! signed Pauli to a signed Pauli, so `T† H T` is computed term by term
//! without ever touching a statevector.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::rng::{domain, stream_rng};

/// One basic Clifford gate. Qubit indices are checked against the circuit
/// size at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) => (q, None),
            CliffordGate::Cnot { control, target } => (control, Some(target)),
            CliffordGate::Cz(a, b) => (a, Some(b)),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        let ok = match b {
            None => a < n,
            Some(b) => a < n && b < n && a != b,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::contract(format!(
                "gate {self:?} invalid for n={n}"
            )))
        }
    }

    /// Conjugate `p` in place by this gate: `p <- g† p g`.
    ///
    /// Per-gate images of the literal Paulis:
    ///   H: X<->Z, Y -> -Y
    ///   S: X -> -Y, Y -> X, Z -> Z
    ///   CNOT(c,t): X_c -> X_c X_t, Z_t -> Z_c Z_t, X_t and Z_c fixed
    ///   CZ(a,b): X_a -> X_a Z_b, X_b -> Z_a X_b, Z fixed
    fn conjugate(&self, x: &mut u64, z: &mut u64, phase: &mut u8) {
        match *self {
            CliffordGate::H(q) => {
                let bit = 1u64 << q;
                let xq = *x & bit != 0;
                let zq = *z & bit != 0;
                if xq && zq {
                    *phase = (*phase + 2) % 4;
                }
                *x = (*x & !bit) | if zq { bit } else { 0 };
                *z = (*z & !bit) | if xq { bit } else { 0 };
            }
            CliffordGate::S(q) => {
                let bit = 1u64 << q;
                if *x & bit != 0 {
                    if *z & bit == 0 {
                        *phase = (*phase + 2) % 4;
                    }
                    *z ^= bit;
                }
            }
            CliffordGate::Cnot { control, target } => {
                let cb = 1u64 << control;
                let tb = 1u64 << target;
                let xc = *x & cb != 0;
                let zc = *z & cb != 0;
                let xt = *x & tb != 0;
                let zt = *z & tb != 0;
                // sign flips iff x_c z_t (x_t XOR z_c XOR 1)
                if xc && zt && (xt == zc) {
                    *phase = (*phase + 2) % 4;
                }
                if xc {
                    *x ^= tb;
                }
                if zt {
                    *z ^= cb;
                }
            }
            CliffordGate::Cz(a, b) => {
                let ab = 1u64 << a;
                let bb = 1u64 << b;
                let xa = *x & ab != 0;
                let xb = *x & bb != 0;
                let y_in = (*x & *z & ab != 0) as i32 + (*x & *z & bb != 0) as i32;
                if xa {
                    *z ^= bb;
                }
                if xb {
                    *z ^= ab;
                }
                let y_out = (*x & *z & ab != 0) as i32 + (*x & *z & bb != 0) as i32;
                let mut delta = y_in - y_out;
                if xa && xb {
                    delta += 2;
                }
                *phase = ((*phase as i32 + delta).rem_euclid(4)) as u8;
            }
        }
    }
}

/// Ordered list of Clifford gates; the first element is applied first to a
/// state.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        CliffordCircuit { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: Vec<CliffordGate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(CliffordCircuit { n, gates })
    }

    pub fn push(&mut self, gate: CliffordGate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    /// Concatenate: `self` followed by `other` (as applied to a state).
    pub fn then(&self, other: &CliffordCircuit) -> Result<CliffordCircuit> {
        Error::check_same_n(self.n, other.n)?;
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(CliffordCircuit { n: self.n, gates })
    }

    /// Heisenberg transform of a single Pauli: returns `T† P T`.
    ///
    /// Gates are folded in reverse application order, each step replacing
    /// `P` with `g† P g`.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        Error::check_same_n(self.n, p.n())?;
        let mut x = p.x_mask();
        let mut z = p.z_mask();
        let mut phase = p.phase_exp();
        for gate in self.gates.iter().rev() {
            gate.conjugate(&mut x, &mut z, &mut phase);
        }
        Ok(PauliString::from_masks(self.n, x, z, phase))
    }

    /// Term-by-term Heisenberg transform of a Pauli sum: `T† H T`.
    pub fn transform_sum(&self, h: &PauliSum) -> Result<PauliSum> {
        Error::check_same_n(self.n, h.n())?;
        let mut out = PauliSum::new(self.n);
        for (x, z, coeff) in h.iter_masks() {
            let p = PauliString::from_masks(self.n, x, z, 0);
            let q = self.conjugate_pauli(&p)?;
            debug_assert!(q.is_hermitian());
            out.add_masks(q.x_mask(), q.z_mask(), coeff * q.sign()?);
        }
        Ok(out)
    }
}

/// On/off code over the ⌊n/2⌋ elementary translation-invariant graphs;
/// bit j-1 set means elementary graph j (connecting node i to i+j mod n)
/// is active.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPattern {
    n: usize,
    bits: Vec<bool>,
}

impl GraphPattern {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != n / 2 {
            return Err(Error::contract(format!(
                "pattern length {} != floor(n/2) = {}",
                bits.len(),
                n / 2
            )));
        }
        Ok(GraphPattern { n, bits })
    }

    /// Parse a bitstring like `"1011"`; '1' = graph on.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::contract(format!("invalid pattern char '{other}'"))),
            })
            .collect();
        GraphPattern::new(n, bits?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn as_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// All `2^(n/2)` patterns on `n` qubits, in binary counting order with
    /// graph 1 as the most significant position of the code string.
    pub fn enumerate(n: usize) -> Vec<GraphPattern> {
        let k = n / 2;
        (0..1usize << k)
            .map(|code| {
                let bits = (0..k).map(|j| code >> (k - 1 - j) & 1 == 1).collect();
                GraphPattern { n, bits }
            })
            .collect()
    }
}

impl std::fmt::Display for GraphPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_string())
    }
}

/// CZ circuit of the active elementary graphs: for each active graph j,
/// edges (i, i+j mod n) for i = 0..n-1 with duplicates removed, emitted in
/// ascending (j, i) order.
pub fn graph_circuit(pattern: &GraphPattern) -> Result<CliffordCircuit> {
    let n = pattern.n();
    if n < 2 {
        return Err(Error::contract("graph circuits need n >= 2".to_string()));
    }
    let mut circuit = CliffordCircuit::new(n);
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (idx, &active) in pattern.bits().iter().enumerate() {
        if !active {
            continue;
        }
        let j = idx + 1;
        for i in 0..n {
            let a = i;
            let b = (i + j) % n;
            let edge = (a.min(b), a.max(b));
            if seen.insert(edge) {
                circuit.push(CliffordGate::Cz(edge.0, edge.1))?;
            }
        }
    }
    Ok(circuit)
}

/// Random circuit of `gate_count` i.i.d. picks from {H(q), S(q), CNOT(q,q')}
/// with uniform (distinct) qubit indices.
pub fn random_clifford(n: usize, gate_count: usize, seed: u64) -> CliffordCircuit {
    let mut rng = stream_rng(seed, domain::RANDOM_CLIFFORD, 0);
    let mut gates = Vec::with_capacity(gate_count);
    for _ in 0..gate_count {
        let gate = match rng.gen_range(0..3u8) {
            0 => CliffordGate::H(rng.gen_range(0..n)),
            1 => CliffordGate::S(rng.gen_range(0..n)),
            _ => {
                let control = rng.gen_range(0..n);
                let mut target = rng.gen_range(0..n - 1);
                if target >= control {
                    target += 1;
                }
                CliffordGate::Cnot { control, target }
            }
        };
        gates.push(gate);
    }
    CliffordCircuit { n, gates }
}
