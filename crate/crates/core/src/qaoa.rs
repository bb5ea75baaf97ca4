//! The classical half of the loop: a deterministic derivative-free
//! parameter search over the `2p` ansatz angles, with best-measurement
//! tracking and the solution-quality metric.
//!
//! Each objective evaluation prepares the ansatz state, samples it, scores
//! every sampled assignment against the cost polynomial, and feeds the
//! shot-mean back to the optimizer. The lowest-cost assignment seen at any
//! point in the whole run is kept as the answer; it can only improve on the
//! mode of the final distribution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Bindings, Circuit};
use crate::error::{Error, Result};
use crate::formulation::Formulation;
use crate::sim::{self, AnsatzEvaluator};

/// Convergence window: the run stops once this many consecutive cost
/// signals move by less than [`CONVERGENCE_RTOL`] relative to their scale.
const CONVERGENCE_WINDOW: usize = 5;
const CONVERGENCE_RTOL: f64 = 1e-4;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_evaluations: usize,
    /// Flat `[gamma_1.., beta_1..]` starting point; its length fixes `p`.
    pub initial_params: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    /// Use the exact expectation as the cost signal instead of the shot
    /// mean (sampling still feeds best-measurement tracking).
    pub use_exact_expectation: bool,
    pub max_qubits: usize,
}

impl OptimizerConfig {
    /// Defaults for a `p`-layer ansatz: 150 evaluations, 1024 shots, all
    /// parameters starting at 0.01 (off the stationary zero point).
    pub fn new(layers: usize, seed: u64) -> Self {
        Self {
            max_evaluations: 150,
            initial_params: vec![0.01; 2 * layers],
            shots: 1024,
            seed,
            use_exact_expectation: false,
            max_qubits: sim::DEFAULT_MAX_QUBITS,
        }
    }

    pub fn layers(&self) -> usize {
        self.initial_params.len() / 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleCost {
    pub bits: u64,
    pub count: u64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Flat `[gammas.., betas..]`.
    pub params: Vec<f64>,
    pub cost_signal: f64,
    /// Unique sampled assignments with shot counts and costs, ascending by
    /// bit pattern.
    pub samples: Vec<SampleCost>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestMeasurement {
    pub bits: u64,
    pub cost: f64,
    /// Evaluation index (0-based) where this assignment first appeared.
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub iterations: Vec<IterationRecord>,
    pub best: BestMeasurement,
    pub final_params: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
    pub seed: u64,
    pub shots: u64,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("bad run record: {e}")))
    }

    /// Most frequent assignment of the final iteration, ties to the lower
    /// bit pattern.
    pub fn final_mode(&self) -> Option<&SampleCost> {
        self.iterations
            .last()?
            .samples
            .iter()
            .max_by(|a, b| a.count.cmp(&b.count).then(b.bits.cmp(&a.bits)))
    }
}

/// Runs the derivative-free search for a formulation's ansatz.
/// Deterministic: the same formulation, config, and seed reproduce the
/// record byte for byte.
pub fn optimize(ansatz: &Circuit, f: &Formulation, cfg: &OptimizerConfig) -> Result<RunRecord> {
    if ansatz.width() != f.qubit_count() {
        return Err(Error::WidthMismatch { got: ansatz.width(), want: f.qubit_count() });
    }
    if ansatz.layers() != cfg.layers() {
        return Err(Error::InvalidInstance(format!(
            "ansatz has {} layers but the config provides parameters for {}",
            ansatz.layers(),
            cfg.layers()
        )));
    }
    optimize_cost(f.poly(), cfg)
}

/// The search engine itself, over an arbitrary cost polynomial. The ansatz
/// is evolved through the diagonal fast path, which prepares the same state
/// as the synthesized circuit.
pub fn optimize_cost(poly: &crate::poly::PBPoly, cfg: &OptimizerConfig) -> Result<RunRecord> {
    if cfg.max_evaluations < 1 || cfg.shots < 1 {
        return Err(Error::InvalidInstance(
            "optimizer needs at least one evaluation and one shot".into(),
        ));
    }
    let layers = cfg.layers();
    if layers < 1 || cfg.initial_params.len() != 2 * layers {
        return Err(Error::InvalidInstance(format!(
            "initial parameter vector of length {} cannot split into gammas and betas",
            cfg.initial_params.len()
        )));
    }

    let evaluator = AnsatzEvaluator::from_poly(poly, cfg.max_qubits)?;
    let compiled = poly.compile();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut record = RunRecord {
        iterations: Vec::new(),
        best: BestMeasurement { bits: 0, cost: f64::INFINITY, iteration: 0 },
        final_params: cfg.initial_params.clone(),
        converged: false,
        evaluations: 0,
        seed: cfg.seed,
        shots: cfg.shots,
    };
    let mut window: Vec<f64> = Vec::new();

    let mut evaluate = |params: &[f64], record: &mut RunRecord, window: &mut Vec<f64>| -> f64 {
        let bindings = Bindings::from_flat(params);
        let state = evaluator.evolve(&bindings);
        let samples = sim::sample_with_rng(&state, cfg.shots, &mut rng);
        let mut rows = Vec::with_capacity(samples.counts.len());
        let mut shot_total = 0.0;
        for (&bits, &count) in &samples.counts {
            let cost = compiled.evaluate(bits);
            shot_total += count as f64 * cost;
            if cost < record.best.cost || (cost == record.best.cost && bits < record.best.bits) {
                record.best =
                    BestMeasurement { bits, cost, iteration: record.evaluations };
            }
            rows.push(SampleCost { bits, count, cost });
        }
        let shot_mean = shot_total / cfg.shots as f64;
        let signal = if cfg.use_exact_expectation {
            sim::exact_expectation(&state, poly).expect("widths already checked")
        } else {
            shot_mean
        };
        record.iterations.push(IterationRecord {
            params: params.to_vec(),
            cost_signal: signal,
            samples: rows,
        });
        record.evaluations += 1;
        window.push(signal);
        if window.len() > CONVERGENCE_WINDOW {
            window.remove(0);
        }
        signal
    };

    // Nelder-Mead simplex over the 2p parameters.
    let dims = 2 * layers;
    let step = 0.1;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dims + 1);
    let x0 = cfg.initial_params.clone();
    let budget_left = |record: &RunRecord| record.evaluations < cfg.max_evaluations;
    let converged = |window: &Vec<f64>| {
        if window.len() < CONVERGENCE_WINDOW {
            return false;
        }
        let max = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = window.iter().cloned().fold(f64::INFINITY, f64::min);
        let scale = window.last().unwrap().abs().max(1.0);
        max - min < CONVERGENCE_RTOL * scale
    };

    let value0 = evaluate(&x0, &mut record, &mut window);
    simplex.push((x0.clone(), value0));
    for d in 0..dims {
        if !budget_left(&record) || converged(&window) {
            break;
        }
        let mut x = x0.clone();
        x[d] += step;
        let v = evaluate(&x, &mut record, &mut window);
        simplex.push((x, v));
    }

    let full_simplex = simplex.len() == dims + 1;
    'outer: while full_simplex && budget_left(&record) && !converged(&window) {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let best = simplex[0].clone();
        let worst = simplex[dims].clone();
        let second_worst_value = simplex[dims - 1].1;

        let mut centroid = vec![0.0; dims];
        for (x, _) in &simplex[..dims] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dims as f64;
            }
        }
        let blend = |a: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(&c, &w)| c + a * (c - w))
                .collect()
        };

        // Reflection.
        let xr = blend(1.0);
        let vr = evaluate(&xr, &mut record, &mut window);
        if vr < best.1 {
            // Expansion.
            if !budget_left(&record) || converged(&window) {
                simplex[dims] = (xr, vr);
                break;
            }
            let xe = blend(2.0);
            let ve = evaluate(&xe, &mut record, &mut window);
            simplex[dims] = if ve < vr { (xe, ve) } else { (xr, vr) };
        } else if vr < second_worst_value {
            simplex[dims] = (xr, vr);
        } else {
            // Contraction (outside or inside of the worst point).
            if !budget_left(&record) || converged(&window) {
                break;
            }
            let xc = blend(-0.5);
            let vc = evaluate(&xc, &mut record, &mut window);
            if vc < worst.1.min(vr) {
                simplex[dims] = (xc, vc);
            } else {
                // Shrink toward the best vertex.
                for i in 1..=dims {
                    if !budget_left(&record) || converged(&window) {
                        break 'outer;
                    }
                    let x: Vec<f64> = simplex[i]
                        .0
                        .iter()
                        .zip(&best.0)
                        .map(|(&xi, &bi)| bi + 0.5 * (xi - bi))
                        .collect();
                    let v = evaluate(&x, &mut record, &mut window);
                    simplex[i] = (x, v);
                }
            }
        }
    }

    record.converged = converged(&window);
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    record.final_params = simplex[0].0.clone();
    Ok(record)
}

/// The overall lowest-cost sampled assignment, recomputed from the raw
/// record.
pub fn best_measurement(record: &RunRecord) -> Result<(u64, f64)> {
    if record.iterations.is_empty() {
        return Err(Error::EmptyRecord);
    }
    let mut best: Option<(f64, u64)> = None;
    for iteration in &record.iterations {
        for sample in &iteration.samples {
            let key = (sample.cost, sample.bits);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
    }
    let (cost, bits) = best.ok_or(Error::EmptyRecord)?;
    Ok((bits, cost))
}

/// Mean relative gap between found costs and the optimum:
/// `(1/n) * sum |x_i - x_opt| / |x_opt|`.
pub fn normalized_distance(found_costs: &[f64], optimal: f64) -> Result<f64> {
    if optimal == 0.0 {
        return Err(Error::UndefinedNormalization);
    }
    if found_costs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let sum: f64 = found_costs.iter().map(|&x| (x - optimal).abs() / optimal.abs()).sum();
    Ok(sum / found_costs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ansatz, GadgetStyle};
    use crate::formulation::{build_hubo, default_penalty};
    use crate::problem::{prepare, ProblemInstance};

    fn small_formulation() -> Formulation {
        let inst = ProblemInstance::new(
            "A",
            "B",
            &[("1".into(), 6.0)],
            &[
                ("A".into(), "1".into(), 1),
                ("1".into(), "B".into(), 1),
                ("A".into(), "B".into(), 1),
            ],
            2,
        )
        .unwrap();
        let prep = prepare(&inst).unwrap();
        build_hubo(&prep.instance, &prep.mask, default_penalty(&prep.instance).unwrap()).unwrap()
    }

    #[test]
    fn optimize_is_deterministic() {
        let f = small_formulation();
        let ansatz = build_ansatz(&f.spin(), 1, false, GadgetStyle::Ladder).unwrap();
        let mut cfg = OptimizerConfig::new(1, 42);
        cfg.max_evaluations = 30;
        cfg.shots = 256;
        let a = optimize(&ansatz, &f, &cfg).unwrap();
        let b = optimize(&ansatz, &f, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.evaluations <= 30);
    }

    #[test]
    fn best_measurement_dominates_all_samples() {
        let f = small_formulation();
        let ansatz = build_ansatz(&f.spin(), 1, false, GadgetStyle::Ladder).unwrap();
        let mut cfg = OptimizerConfig::new(1, 7);
        cfg.max_evaluations = 40;
        let record = optimize(&ansatz, &f, &cfg).unwrap();
        let (bits, cost) = best_measurement(&record).unwrap();
        assert_eq!(bits, record.best.bits);
        assert_eq!(cost, record.best.cost);
        for iteration in &record.iterations {
            for sample in &iteration.samples {
                assert!(record.best.cost <= sample.cost);
            }
        }
        // And it is at least as good as the final-distribution mode.
        let mode = record.final_mode().unwrap();
        assert!(record.best.cost <= mode.cost);
    }

    #[test]
    fn empty_record_is_an_error() {
        let record = RunRecord {
            iterations: vec![],
            best: BestMeasurement { bits: 0, cost: 0.0, iteration: 0 },
            final_params: vec![],
            converged: false,
            evaluations: 0,
            seed: 0,
            shots: 0,
        };
        assert!(matches!(best_measurement(&record), Err(Error::EmptyRecord)));
    }

    #[test]
    fn one_qubit_exact_optimization_reaches_analytic_minimum() {
        // Single binary variable x with cost E(b) = b: the p=1 expectation
        // is (1 + sin(2 beta) sin(gamma)) / 2, with analytic minimum 0.
        let registry = crate::poly::VarRegistry::anonymous(1);
        let mut poly = crate::poly::PBPoly::zero(registry.clone());
        poly.add_term(&[0], 1.0);
        let mut cfg = OptimizerConfig::new(1, 3);
        cfg.max_evaluations = 400;
        cfg.use_exact_expectation = true;
        cfg.shots = 64;
        let record = optimize_cost(&poly, &cfg).unwrap();
        let reached = record.iterations.iter().map(|it| it.cost_signal).fold(f64::INFINITY, f64::min);
        assert!(reached <= 1e-3, "reached {reached}");
        // Sanity-check the closed form at the best parameters seen.
        let best_it = record
            .iterations
            .iter()
            .min_by(|a, b| a.cost_signal.partial_cmp(&b.cost_signal).unwrap())
            .unwrap();
        let (gamma, beta) = (best_it.params[0], best_it.params[1]);
        let analytic = (1.0 + (2.0 * beta).sin() * gamma.sin()) / 2.0;
        assert!((analytic - best_it.cost_signal).abs() < 1e-9);
    }

    #[test]
    fn normalized_distance_examples() {
        assert_eq!(normalized_distance(&[-5.0, -5.0], -5.0).unwrap(), 0.0);
        // One repeat off by 0.75 out of ten, optimum -76.75.
        let mut found = vec![-76.75; 10];
        found[0] = -76.0;
        let nd = normalized_distance(&found, -76.75).unwrap();
        assert!((nd - 0.75 / 76.75 / 10.0).abs() < 1e-12);
        assert_eq!(normalized_distance(&[4.0], 2.0).unwrap(), 1.0);
        assert!(matches!(normalized_distance(&[1.0], 0.0), Err(Error::UndefinedNormalization)));
        assert!(matches!(normalized_distance(&[], 1.0), Err(Error::EmptySamples)));
    }
}
