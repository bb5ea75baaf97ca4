//! Shipped benchmark instances and the random instance generator.
//!
//! The four canonical instances mirror the benchmark shapes
//! (internal nodes, deadline) = (2,4), (3,5), (3,6), (4,6). They are built
//! so the start node is one time unit from every node it can usefully
//! reach: variable pruning keeps a position `(u, i)` only when `u` is
//! reachable by step `i`, and routes may hop straight from the start to any
//! node, so a usable node farther than one unit from the start would make
//! some feasible route unrepresentable. Nodes meant to be pruned away sit
//! beyond the deadline budget instead. The generator follows the same rule.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

pub const CANONICAL_COUNT: usize = 4;

/// Returns canonical instance `k` (1-based), as declared (not completed).
pub fn canonical(k: usize) -> Result<ProblemInstance> {
    let build = |internal: &[(&str, f64)], edges: &[(&str, &str, u32)], t: u32| {
        let internal: Vec<(String, f64)> =
            internal.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        let edges: Vec<(String, String, u32)> =
            edges.iter().map(|(u, v, t)| (u.to_string(), v.to_string(), *t)).collect();
        ProblemInstance::new("A", "B", &internal, &edges, t)
    };
    match k {
        1 => build(
            &[("1", 100.0), ("2", 52.0)],
            &[
                ("A", "1", 1),
                ("A", "2", 1),
                ("A", "B", 1),
                ("1", "2", 2),
                ("2", "B", 1),
                ("1", "B", 2),
            ],
            4,
        ),
        2 => build(
            &[("1", 30.0), ("2", 20.5), ("3", 12.0)],
            &[
                ("A", "1", 1),
                ("A", "2", 1),
                ("A", "3", 1),
                ("A", "B", 1),
                ("1", "2", 2),
                ("2", "3", 1),
                ("3", "B", 2),
            ],
            5,
        ),
        // Same graph as instance 2 with one more time step, which unlocks
        // routes that collect all three assets.
        3 => build(
            &[("1", 30.0), ("2", 20.5), ("3", 12.0)],
            &[
                ("A", "1", 1),
                ("A", "2", 1),
                ("A", "3", 1),
                ("A", "B", 1),
                ("1", "2", 2),
                ("2", "3", 1),
                ("3", "B", 2),
            ],
            6,
        ),
        // Nodes 3 and 4 cannot be reached and returned from within the
        // deadline; pruning removes every variable that touches them.
        4 => build(
            &[("1", 60.0), ("2", 44.5), ("3", 35.0), ("4", 20.0)],
            &[
                ("A", "1", 1),
                ("A", "2", 1),
                ("A", "B", 1),
                ("1", "2", 2),
                ("2", "3", 3),
                ("3", "4", 2),
                ("4", "B", 4),
            ],
            6,
        ),
        _ => Err(Error::InvalidInstance(format!(
            "canonical instance index must be 1..={CANONICAL_COUNT}, got {k}"
        ))),
    }
}

/// Parameters for [`random_instance`].
#[derive(Debug, Clone)]
pub struct GenParams {
    pub internal_nodes: usize,
    pub deadline: u32,
    pub seed: u64,
    /// Inclusive asset value range; values are drawn in quarter steps.
    pub value_range: (f64, f64),
    /// Inclusive traversal time range for non-start edges.
    pub time_range: (u32, u32),
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            internal_nodes: 2,
            deadline: 4,
            seed: 0,
            value_range: (4.0, 40.0),
            time_range: (1, 3),
        }
    }
}

/// Generates a random connected instance, reproducibly from the seed. The
/// start node is joined to every other node with a unit edge (see the
/// module notes); additional internal edges appear with probability 1/2.
pub fn random_instance(params: &GenParams) -> Result<ProblemInstance> {
    if params.internal_nodes == 0 {
        return Err(Error::InvalidInstance("need at least one internal node".into()));
    }
    if params.deadline == 0 {
        return Err(Error::InvalidInstance("deadline must be at least 1".into()));
    }
    let (vlo, vhi) = params.value_range;
    if !(vlo.is_finite() && vhi.is_finite()) || vlo < 0.0 || vhi < vlo {
        return Err(Error::InvalidInstance("bad asset value range".into()));
    }
    let (tlo, thi) = params.time_range;
    if tlo < 1 || thi < tlo {
        return Err(Error::InvalidInstance("bad edge time range".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let names: Vec<String> = (1..=params.internal_nodes).map(|i| i.to_string()).collect();

    let quarters_lo = (vlo * 4.0).round() as i64;
    let quarters_hi = (vhi * 4.0).round() as i64;
    let mut internal = Vec::new();
    for name in &names {
        let quarters = rng.random_range(quarters_lo..=quarters_hi);
        internal.push((name.clone(), quarters as f64 / 4.0));
    }

    let mut edges: Vec<(String, String, u32)> = Vec::new();
    for name in &names {
        edges.push(("A".into(), name.clone(), 1));
    }
    edges.push(("A".into(), "B".into(), 1));
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            if rng.random_bool(0.5) {
                let t = rng.random_range(tlo..=thi);
                edges.push((names[i].clone(), names[j].clone(), t));
            }
        }
        if rng.random_bool(0.5) {
            let t = rng.random_range(tlo..=thi);
            edges.push((names[i].clone(), "B".into(), t));
        }
    }

    ProblemInstance::new("A", "B", &internal, &edges, params.deadline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::prepare;

    #[test]
    fn canonical_instances_validate_and_match_shapes() {
        let shapes = [(2usize, 4u32), (3, 5), (3, 6), (4, 6)];
        for (k, (internal, t)) in (1..=CANONICAL_COUNT).zip(shapes) {
            let inst = canonical(k).unwrap();
            assert_eq!(inst.internal_count(), internal, "instance {k}");
            assert_eq!(inst.deadline(), t, "instance {k}");
            prepare(&inst).unwrap();
        }
        assert!(canonical(0).is_err());
        assert!(canonical(5).is_err());
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let params = GenParams { internal_nodes: 3, deadline: 5, seed: 99, ..Default::default() };
        let a = random_instance(&params).unwrap();
        let b = random_instance(&params).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        // Different seed, almost surely different values.
        let c = random_instance(&GenParams { seed: 100, ..params }).unwrap();
        assert_ne!(a, c);
        prepare(&a).unwrap();
    }

    #[test]
    fn generator_rejects_bad_params() {
        assert!(random_instance(&GenParams { internal_nodes: 0, ..Default::default() }).is_err());
        assert!(random_instance(&GenParams { deadline: 0, ..Default::default() }).is_err());
        assert!(random_instance(&GenParams { time_range: (0, 2), ..Default::default() }).is_err());
        assert!(random_instance(&GenParams { value_range: (5.0, 1.0), ..Default::default() })
            .is_err());
    }
}
