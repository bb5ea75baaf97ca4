//! Dense statevector simulation of the gate set, shot sampling, and cost
//! evaluation. Qubit 0 is the least-significant bit of basis-state indices.
//!
//! Two independent evolution paths exist on purpose: [`run`] applies gates
//! one by one, while [`apply_cost_phase`] (and the [`AnsatzEvaluator`] built
//! on it) phases basis states straight from polynomial energies. Tests hold
//! the two paths against each other.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Bindings, Circuit, Gate};
use crate::error::{Error, Result};
use crate::formulation::Formulation;
use crate::poly::PBPoly;

/// Default simulation width cap.
pub const DEFAULT_MAX_QUBITS: usize = 24;

#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
    width: usize,
}

impl StateVector {
    /// `|0...0>` on `width` qubits.
    pub fn zero_state(width: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; 1 << width];
        amps[0] = Complex64::ONE;
        Self { amps, width }
    }

    /// Uniform superposition `H^{(x)n} |0...0>`.
    pub fn uniform(width: usize) -> Self {
        let dim = 1usize << width;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self { amps: vec![amp; dim], width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, basis: u64) -> Complex64 {
        self.amps[basis as usize]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probability(&self, basis: u64) -> f64 {
        self.amps[basis as usize].norm_sqr()
    }

    /// Largest fidelity-style overlap `|<self|other>|`; 1 means equal up to
    /// a global phase.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    fn apply_single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + stride {
                let j = i + stride;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[j] = m[1][0] * a + m[1][1] * b;
            }
            base += 2 * stride;
        }
    }

    fn apply_hadamard(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let s = Complex64::new(s, 0.0);
        self.apply_single(q, [[s, s], [s, -s]]);
    }

    fn apply_rx(&mut self, q: usize, theta: f64) {
        let c = Complex64::new((theta / 2.0).cos(), 0.0);
        let s = Complex64::new(0.0, -(theta / 2.0).sin());
        self.apply_single(q, [[c, s], [s, c]]);
    }

    fn apply_rz(&mut self, q: usize, theta: f64) {
        let phase0 = Complex64::from_polar(1.0, -theta / 2.0);
        let phase1 = Complex64::from_polar(1.0, theta / 2.0);
        let stride = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if i & stride == 0 { phase0 } else { phase1 };
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }
}

/// Applies every gate of a bound circuit to `|0...0>`.
pub fn run(circuit: &Circuit, bindings: &Bindings) -> Result<StateVector> {
    run_with_cap(circuit, bindings, DEFAULT_MAX_QUBITS)
}

pub fn run_with_cap(circuit: &Circuit, bindings: &Bindings, cap: usize) -> Result<StateVector> {
    if circuit.width() > cap {
        return Err(Error::WidthCap { width: circuit.width(), cap });
    }
    let mut state = StateVector::zero_state(circuit.width());
    for gate in circuit.gates() {
        match *gate {
            Gate::H { q } => state.apply_hadamard(q),
            Gate::Rz { q, angle } => state.apply_rz(q, angle.resolve(bindings)?),
            Gate::Rx { q, angle } => state.apply_rx(q, angle.resolve(bindings)?),
            Gate::Cnot { control, target } => state.apply_cnot(control, target),
        }
    }
    Ok(state)
}

/// Measurement outcomes of repeated shots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    pub counts: BTreeMap<u64, u64>,
    pub shots: u64,
}

/// Multinomial sampling from `|amp|^2`, deterministic in the seed.
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(state, shots, &mut rng)
}

pub fn sample_with_rng(state: &StateVector, shots: u64, rng: &mut impl Rng) -> SampleSet {
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut total = 0.0;
    for amp in state.amps() {
        total += amp.norm_sqr();
        cumulative.push(total);
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        let x: f64 = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= x).min(state.dim() - 1);
        *counts.entry(idx as u64).or_insert(0) += 1;
    }
    SampleSet { counts, shots }
}

/// Exact `sum_b |amp(b)|^2 * E(b)` for a polynomial over the same width.
pub fn exact_expectation(state: &StateVector, poly: &PBPoly) -> Result<f64> {
    if poly.registry().len() != state.width() {
        return Err(Error::WidthMismatch { got: poly.registry().len(), want: state.width() });
    }
    let compiled = poly.compile();
    let mut total = 0.0;
    for (b, amp) in state.amps().iter().enumerate() {
        let p = amp.norm_sqr();
        if p > 0.0 {
            total += p * compiled.evaluate(b as u64);
        }
    }
    Ok(total)
}

/// Shot-weighted mean cost of a sample set.
pub fn sample_cost_mean(samples: &SampleSet, poly: &PBPoly) -> Result<f64> {
    if samples.shots == 0 || samples.counts.is_empty() {
        return Err(Error::EmptySamples);
    }
    let compiled = poly.compile();
    let mut total = 0.0;
    for (&bits, &count) in &samples.counts {
        total += count as f64 * compiled.evaluate(bits);
    }
    Ok(total / samples.shots as f64)
}

/// Energy of every basis state under a polynomial, by superset accumulation
/// over the term masks.
pub fn energy_table(poly: &PBPoly, width: usize) -> Vec<f64> {
    let dim = 1usize << width;
    let mut table = vec![poly.constant_part(); dim];
    let full = (dim - 1) as u64;
    for (mask, coeff) in poly.compile().terms {
        let comp = full & !mask;
        let mut sub = comp;
        loop {
            table[(mask | sub) as usize] += coeff;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & comp;
        }
    }
    table
}

/// The cost layer as a diagonal: `|b> -> exp(-i gamma (E(b) - constant)) |b>`.
/// This bypasses gate synthesis entirely; it is the independent reference
/// for the gadget constructions and the fast path for optimization.
pub fn apply_cost_phase(state: &mut StateVector, energies: &[f64], gamma: f64, constant: f64) {
    debug_assert_eq!(energies.len(), state.dim());
    for (amp, &e) in state.amps.iter_mut().zip(energies) {
        *amp *= Complex64::from_polar(1.0, -gamma * (e - constant));
    }
}

/// Evolves the QAOA ansatz for a formulation without materializing gates:
/// uniform superposition, then alternately the diagonal cost layer and the
/// `RX(2 beta)` mixer. Produces the same state as running the synthesized
/// circuit.
#[derive(Debug, Clone)]
pub struct AnsatzEvaluator {
    energies: Vec<f64>,
    spin_constant: f64,
    width: usize,
}

impl AnsatzEvaluator {
    pub fn new(f: &Formulation, cap: usize) -> Result<Self> {
        Self::from_poly(f.poly(), cap)
    }

    pub fn from_poly(poly: &PBPoly, cap: usize) -> Result<Self> {
        let width = poly.registry().len();
        if width > cap {
            return Err(Error::WidthCap { width, cap });
        }
        Ok(Self {
            energies: energy_table(poly, width),
            spin_constant: poly.to_spin().constant_part(),
            width,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn evolve(&self, bindings: &Bindings) -> StateVector {
        debug_assert_eq!(bindings.gammas.len(), bindings.betas.len());
        let mut state = StateVector::uniform(self.width);
        for (&gamma, &beta) in bindings.gammas.iter().zip(&bindings.betas) {
            apply_cost_phase(&mut state, &self.energies, gamma, self.spin_constant);
            for q in 0..self.width {
                state.apply_rx(q, 2.0 * beta);
            }
        }
        state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ParamSlot;
    use crate::poly::{PBPoly, VarRegistry};

    #[test]
    fn empty_circuit_leaves_ground_state() {
        let c = Circuit::new(3, 0);
        let state = run(&c, &Bindings::default()).unwrap();
        assert_eq!(state.amp(0), Complex64::ONE);
        for b in 1..8 {
            assert_eq!(state.amp(b), Complex64::ZERO);
        }
    }

    #[test]
    fn hadamard_layer_is_uniform() {
        let mut c = Circuit::new(4, 0);
        for q in 0..4 {
            c.push(Gate::H { q });
        }
        let state = run(&c, &Bindings::default()).unwrap();
        let expect = 1.0 / 4.0;
        for b in 0..16 {
            assert!((state.amp(b).re - expect).abs() < 1e-12);
            assert!(state.amp(b).im.abs() < 1e-12);
        }
        assert!((state.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bell_state_amplitudes() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::H { q: 0 });
        c.push(Gate::Cnot { control: 0, target: 1 });
        let state = run(&c, &Bindings::default()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((state.amp(0b00).re - s).abs() < 1e-12);
        assert!((state.amp(0b11).re - s).abs() < 1e-12);
        assert!(state.amp(0b01).norm() < 1e-12);
        assert!(state.amp(0b10).norm() < 1e-12);
    }

    #[test]
    fn width_cap_enforced() {
        let c = Circuit::new(5, 0);
        assert!(matches!(
            run_with_cap(&c, &Bindings::default(), 4),
            Err(Error::WidthCap { width: 5, cap: 4 })
        ));
    }

    #[test]
    fn norm_preserved_through_rotations() {
        let mut c = Circuit::new(3, 0);
        for q in 0..3 {
            c.push(Gate::H { q });
        }
        c.push(Gate::Rz { q: 0, angle: ParamSlot::Literal(0.7) });
        c.push(Gate::Rx { q: 1, angle: ParamSlot::Literal(-1.3) });
        c.push(Gate::Cnot { control: 2, target: 0 });
        let state = run(&c, &Bindings::default()).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sampling_basis_state_is_certain() {
        let state = StateVector::zero_state(3);
        let samples = sample(&state, 64, 7);
        assert_eq!(samples.counts.len(), 1);
        assert_eq!(samples.counts[&0], 64);
        assert_eq!(samples.shots, 64);
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mut c = Circuit::new(3, 0);
        for q in 0..3 {
            c.push(Gate::H { q });
        }
        let state = run(&c, &Bindings::default()).unwrap();
        let a = sample(&state, 512, 11);
        let b = sample(&state, 512, 11);
        assert_eq!(a, b);
        let c2 = sample(&state, 512, 12);
        assert_ne!(a, c2);
    }

    #[test]
    fn uniform_sampling_within_binomial_bounds() {
        let state = StateVector::uniform(4);
        let shots = 100_000u64;
        let samples = sample(&state, shots, 3);
        let p = 1.0 / 16.0;
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        for b in 0..16 {
            let observed = *samples.counts.get(&b).unwrap_or(&0) as f64 / shots as f64;
            assert!(
                (observed - p).abs() < 5.0 * sigma,
                "state {b} frequency {observed} outside 5 sigma"
            );
        }
    }

    #[test]
    fn expectations_on_basis_and_uniform_states() {
        let registry = VarRegistry::anonymous(3);
        let mut poly = PBPoly::constant(registry.clone(), 1.0);
        poly.add_term(&[0], 2.0);
        poly.add_term(&[1, 2], -4.0);

        let basis = StateVector::zero_state(3);
        assert!((exact_expectation(&basis, &poly).unwrap() - 1.0).abs() < 1e-12);

        // Uniform state: mean over all 8 assignments.
        let uniform = StateVector::uniform(3);
        let mean: f64 = (0..8u64).map(|b| poly.evaluate_bits(b)).sum::<f64>() / 8.0;
        assert!((exact_expectation(&uniform, &poly).unwrap() - mean).abs() < 1e-12);

        let narrow = StateVector::zero_state(2);
        assert!(matches!(
            exact_expectation(&narrow, &poly),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn sample_mean_converges_to_exact_expectation() {
        let registry = VarRegistry::anonymous(3);
        let mut poly = PBPoly::zero(registry.clone());
        poly.add_term(&[0], 1.0);
        poly.add_term(&[1], 2.0);
        poly.add_term(&[0, 2], -3.0);
        let uniform = StateVector::uniform(3);
        let exact = exact_expectation(&uniform, &poly).unwrap();
        let shots = 100_000u64;
        let samples = sample(&uniform, shots, 5);
        let mean = sample_cost_mean(&samples, &poly).unwrap();
        // 3-sigma bound with the distribution's true variance.
        let var: f64 =
            (0..8u64).map(|b| (poly.evaluate_bits(b) - exact).powi(2)).sum::<f64>() / 8.0;
        let sigma = (var / shots as f64).sqrt();
        assert!((mean - exact).abs() < 3.0 * sigma, "mean {mean} vs exact {exact}");

        let empty = SampleSet { counts: BTreeMap::new(), shots: 0 };
        assert!(matches!(sample_cost_mean(&empty, &poly), Err(Error::EmptySamples)));
    }

    #[test]
    fn energy_table_matches_direct_evaluation() {
        let registry = VarRegistry::anonymous(4);
        let mut poly = PBPoly::constant(registry.clone(), -0.5);
        poly.add_term(&[0], 1.5);
        poly.add_term(&[1, 3], 2.0);
        poly.add_term(&[0, 1, 2], -3.25);
        let table = energy_table(&poly, 4);
        for b in 0..16u64 {
            assert!((table[b as usize] - poly.evaluate_bits(b)).abs() < 1e-12);
        }
    }
}
