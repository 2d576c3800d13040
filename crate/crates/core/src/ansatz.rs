//! The hardware-efficient Schrödinger circuit and the stochastic
//! architecture distribution over translation-invariant graph patterns.

use rand::Rng;

use crate::clifford::GraphPattern;
use crate::error::{Error, Result};
use crate::layer::SingleQubitLayer;
use crate::rng::{domain, stream_rng};
use crate::statevector::{GateOp, StateVector};

/// Alternating fixed-CZ brick layers and parametrized single-qubit Euler
/// rotations: an initial single-qubit layer, then `depth` repetitions of
/// (CZ brick, single-qubit layer). Parameter count is 3n(depth+1).
#[derive(Clone, Debug, PartialEq)]
pub struct HardwareEfficientAnsatz {
    n: usize,
    depth: usize,
    theta: Vec<f64>,
}

impl HardwareEfficientAnsatz {
    pub fn param_count(n: usize, depth: usize) -> usize {
        3 * n * (depth + 1)
    }

    pub fn new(n: usize, depth: usize, theta: Vec<f64>) -> Result<Self> {
        let expect = Self::param_count(n, depth);
        if theta.len() != expect {
            return Err(Error::contract(format!(
                "ansatz needs {expect} parameters (3n(depth+1)), got {}",
                theta.len()
            )));
        }
        Ok(HardwareEfficientAnsatz { n, depth, theta })
    }

    pub fn zero(n: usize, depth: usize) -> Self {
        HardwareEfficientAnsatz {
            n,
            depth,
            theta: vec![0.0; Self::param_count(n, depth)],
        }
    }

    /// Uniform(-π, π) initial angles, reproducible under seed.
    pub fn random(n: usize, depth: usize, seed: u64) -> Self {
        use std::f64::consts::PI;
        let mut rng = stream_rng(seed, domain::PARAM_INIT, 0);
        let theta = (0..Self::param_count(n, depth))
            .map(|_| rng.gen_range(-PI..PI))
            .collect();
        HardwareEfficientAnsatz { n, depth, theta }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    fn rotation_layer(&self, layer_idx: usize) -> SingleQubitLayer {
        let base = 3 * self.n * layer_idx;
        SingleQubitLayer::new(
            (0..self.n)
                .map(|q| {
                    [
                        self.theta[base + 3 * q],
                        self.theta[base + 3 * q + 1],
                        self.theta[base + 3 * q + 2],
                    ]
                })
                .collect(),
        )
    }

    /// CZ brick pairs for circuit layer ℓ (1-based): even layers pair
    /// (0,1),(2,3),…; odd layers pair (1,2),(3,4),… plus the periodic
    /// closure (n-1, 0).
    pub fn brick_pairs(n: usize, layer: usize) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        if layer % 2 == 0 {
            let mut i = 0;
            while i + 1 < n {
                pairs.push((i, i + 1));
                i += 2;
            }
        } else {
            let mut i = 1;
            while i + 1 < n {
                pairs.push((i, i + 1));
                i += 2;
            }
            if n >= 2 {
                pairs.push((n - 1, 0));
            }
        }
        pairs
    }

    /// The ordered gate list of the circuit.
    pub fn build_schrodinger(&self) -> Vec<GateOp> {
        let mut gates = self.rotation_layer(0).gate_ops();
        for layer in 1..=self.depth {
            for (a, b) in Self::brick_pairs(self.n, layer) {
                gates.push(cz_gate(a, b));
            }
            gates.extend(self.rotation_layer(layer).gate_ops());
        }
        gates
    }

    /// U(θ)|0⟩.
    pub fn prepare(&self) -> Result<StateVector> {
        let mut state = StateVector::zero_state(self.n)?;
        for gate in self.build_schrodinger() {
            state.apply(&gate)?;
        }
        Ok(state)
    }
}

fn cz_gate(a: usize, b: usize) -> GateOp {
    use num_complex::Complex64 as C;
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    GateOp::Two {
        qubits: (a, b),
        matrix: [
            [o, z, z, z],
            [z, o, z, z],
            [z, z, o, z],
            [z, z, z, -o],
        ],
    }
}

/// Per elementary graph, a logit pair (α_on, α_off); the graph is switched
/// on with the two-logit softmax probability.
#[derive(Clone, Debug, PartialEq)]
pub struct ArchLogits {
    n: usize,
    pairs: Vec<[f64; 2]>,
}

impl ArchLogits {
    /// All-zero logits: every pattern equiprobable.
    pub fn uniform(n: usize) -> Self {
        ArchLogits {
            n,
            pairs: vec![[0.0; 2]; n / 2],
        }
    }

    pub fn new(n: usize, pairs: Vec<[f64; 2]>) -> Result<Self> {
        if pairs.len() != n / 2 {
            return Err(Error::contract(format!(
                "need floor(n/2) = {} logit pairs, got {}",
                n / 2,
                pairs.len()
            )));
        }
        Ok(ArchLogits { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn param_count(&self) -> usize {
        self.pairs.len() * 2
    }

    pub fn as_flat(&self) -> Vec<f64> {
        self.pairs.iter().flat_map(|p| p.iter().copied()).collect()
    }

    pub fn from_flat(n: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != (n / 2) * 2 {
            return Err(Error::contract(format!(
                "need {} logit values, got {}",
                n / 2 * 2,
                flat.len()
            )));
        }
        Ok(ArchLogits {
            n,
            pairs: flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect(),
        })
    }

    /// On-probability per elementary graph:
    /// p_j = exp(α_on)/(exp(α_on)+exp(α_off)), max-subtracted.
    pub fn pattern_probs(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .map(|&[on, off]| {
                let m = on.max(off);
                let eon = (on - m).exp();
                let eoff = (off - m).exp();
                eon / (eon + eoff)
            })
            .collect()
    }

    /// Probability of one full pattern under the independent-Bernoulli model.
    pub fn pattern_probability(&self, pattern: &GraphPattern) -> f64 {
        let probs = self.pattern_probs();
        pattern
            .bits()
            .iter()
            .zip(probs.iter())
            .map(|(&b, &p)| if b { p } else { 1.0 - p })
            .product()
    }

    /// Independent Bernoulli draw per elementary graph.
    pub fn sample_pattern(&self, seed: u64) -> GraphPattern {
        let mut rng = stream_rng(seed, domain::PATTERN_SAMPLING, 0);
        self.sample_with(&mut rng)
    }

    pub(crate) fn sample_with(&self, rng: &mut impl Rng) -> GraphPattern {
        let probs = self.pattern_probs();
        let bits = probs.iter().map(|&p| rng.gen::<f64>() < p).collect();
        GraphPattern::new(self.n, bits).expect("length matches by construction")
    }

    /// The single most probable pattern (each graph on iff p_j > 0.5).
    pub fn argmax_pattern(&self) -> GraphPattern {
        let bits = self.pattern_probs().iter().map(|&p| p > 0.5).collect();
        GraphPattern::new(self.n, bits).expect("length matches by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_single_layer() {
        let a = HardwareEfficientAnsatz::zero(4, 0);
        assert_eq!(a.build_schrodinger().len(), 4);
    }

    #[test]
    fn param_count_matches_construction() {
        assert_eq!(HardwareEfficientAnsatz::param_count(8, 4), 120);
        let a = HardwareEfficientAnsatz::random(8, 4, 1);
        assert_eq!(a.theta().len(), 120);
        // gate count: 5 rotation layers of 8 + 4 brick layers of 4
        assert_eq!(a.build_schrodinger().len(), 5 * 8 + 4 * 4);
    }

    #[test]
    fn zero_angles_leave_vacuum_invariant() {
        // CZ is diagonal and the rotation layers are identity
        let a = HardwareEfficientAnsatz::zero(6, 3);
        let state = a.prepare().unwrap();
        assert!((state.amplitudes()[0].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brick_layers_alternate_with_periodic_wrap() {
        assert_eq!(
            HardwareEfficientAnsatz::brick_pairs(8, 2),
            vec![(0, 1), (2, 3), (4, 5), (6, 7)]
        );
        assert_eq!(
            HardwareEfficientAnsatz::brick_pairs(8, 1),
            vec![(1, 2), (3, 4), (5, 6), (7, 0)]
        );
    }

    #[test]
    fn build_is_deterministic() {
        let a = HardwareEfficientAnsatz::random(5, 2, 9);
        let b = HardwareEfficientAnsatz::random(5, 2, 9);
        assert_eq!(a, b);
        let sa = a.prepare().unwrap();
        let sb = b.prepare().unwrap();
        assert_eq!(sa.amplitudes(), sb.amplitudes());
    }

    #[test]
    fn softmax_probabilities() {
        let l = ArchLogits::new(8, vec![[0.0, 0.0]; 4]).unwrap();
        for p in l.pattern_probs() {
            assert!((p - 0.5).abs() < 1e-15);
        }
        let l = ArchLogits::new(2, vec![[20.0, -20.0]]).unwrap();
        let p = l.pattern_probs()[0];
        assert!((p - 1.0).abs() < 1e-12);
        assert!(p.is_finite());
        // extreme logits must not overflow
        let l = ArchLogits::new(2, vec![[800.0, -800.0]]).unwrap();
        assert!((l.pattern_probs()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_logits_make_patterns_equiprobable() {
        let l = ArchLogits::uniform(8);
        for pattern in GraphPattern::enumerate(8) {
            assert!((l.pattern_probability(&pattern) - 1.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn saturated_logits_pin_patterns() {
        let on = ArchLogits::new(8, vec![[30.0, -30.0]; 4]).unwrap();
        assert_eq!(on.sample_pattern(3).as_string(), "1111");
        let off = ArchLogits::new(8, vec![[-30.0, 30.0]; 4]).unwrap();
        assert_eq!(off.sample_pattern(3).as_string(), "0000");
    }

    #[test]
    fn pattern_frequencies_uniform_chi_square() {
        // 10^4 draws over 16 patterns at p = 1/2 each
        let l = ArchLogits::uniform(8);
        let draws = 10_000usize;
        let mut counts = [0usize; 16];
        for i in 0..draws {
            let pat = l.sample_pattern(7_000 + i as u64);
            let idx = pat
                .bits()
                .iter()
                .fold(0usize, |acc, &b| (acc << 1) | b as usize);
            counts[idx] += 1;
        }
        let expect = draws as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        // 15 dof: mean 15, sd sqrt(30); 3σ above the mean
        assert!(chi2 < 15.0 + 3.0 * 30f64.sqrt(), "chi2 = {chi2}");
    }

    #[test]
    fn softmax_gradient_matches_finite_difference() {
        // dp/d(α_on - α_off) = p(1-p)
        let check = |on: f64, off: f64| {
            let p = ArchLogits::new(2, vec![[on, off]]).unwrap().pattern_probs()[0];
            let h = 1e-6;
            let pp = ArchLogits::new(2, vec![[on + h / 2.0, off - h / 2.0]])
                .unwrap()
                .pattern_probs()[0];
            let pm = ArchLogits::new(2, vec![[on - h / 2.0, off + h / 2.0]])
                .unwrap()
                .pattern_probs()[0];
            let fd = (pp - pm) / (2.0 * h);
            // the difference coordinate moves by h when on/off move by ±h/2
            assert!((fd - p * (1.0 - p)).abs() < 1e-6, "on={on} off={off}");
        };
        check(0.0, 0.0);
        check(1.3, -0.4);
        check(-2.0, 1.0);
    }
}
