//! Ground-truth engines: exhaustive bitstring minimization of a formulation
//! and exhaustive search of the route space itself. Both are deliberately
//! independent of the QAOA pipeline so they can vouch for it.

use crate::error::{Error, Result};
use crate::formulation::{self, decode, route_objective, Formulation, Route};
use crate::problem::{NodeIdx, ProblemInstance};

/// Exhaustive search is limited to this many qubits.
pub const BRUTE_FORCE_QUBIT_CAP: usize = 24;

/// Result of an exhaustive bitstring scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    /// First global minimizer in integer order.
    pub assignment: u64,
    pub value: f64,
    pub tie_count: usize,
}

/// Result of an exhaustive route-space search.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSearchResult {
    pub route: Option<Route>,
    /// Minimal route objective (negated collected assets); infinite when no
    /// feasible route exists.
    pub value: f64,
    pub feasible: bool,
    pub tie_count: usize,
}

/// Scans all `2^n` assignments of the formulation's polynomial, walking a
/// Gray code so each step pays only for the terms touching the flipped
/// variable. The reported minimizer is the smallest assignment in integer
/// order; `tie_count` reports the degeneracy of the minimum.
pub fn brute_force_min(f: &Formulation) -> Result<BruteForceResult> {
    min_of_poly(f.poly(), f.qubit_count())
}

/// Gray-code exhaustive minimum of an arbitrary polynomial over `n` bits.
pub fn min_of_poly(poly: &crate::poly::PBPoly, n: usize) -> Result<BruteForceResult> {
    if n > BRUTE_FORCE_QUBIT_CAP {
        return Err(Error::TooManyQubits(n));
    }
    let compiled = poly.compile();

    // Per-variable views: for each term containing q, the mask of the other
    // variables and the coefficient.
    let mut per_var: Vec<Vec<(u64, f64)>> = vec![Vec::new(); n];
    for &(mask, coeff) in &compiled.terms {
        let mut rest = mask;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            per_var[q].push((mask & !(1u64 << q), coeff));
        }
    }

    let mut bits = 0u64;
    let mut value = compiled.constant;
    let mut best_bits = bits;
    let mut best_value = value;
    let mut tie_count = 1usize;
    let total: u64 = 1u64 << n;
    for k in 1..total {
        let q = k.trailing_zeros() as usize;
        let flipped_on = bits >> q & 1 == 0;
        let mut delta = 0.0;
        for &(others, coeff) in &per_var[q] {
            if bits & others == others {
                delta += coeff;
            }
        }
        if flipped_on {
            value += delta;
            bits |= 1 << q;
        } else {
            bits &= !(1 << q);
            value -= delta;
        }
        if value < best_value {
            best_value = value;
            best_bits = bits;
            tie_count = 1;
        } else if value == best_value {
            tie_count += 1;
            if bits < best_bits {
                best_bits = bits;
            }
        }
    }
    Ok(BruteForceResult { assignment: best_bits, value: best_value, tie_count })
}

/// Depth-first search over (current node, elapsed time, visited set) with
/// end-node padding. Internal nodes are visited at most once, the start is
/// never re-entered, and a branch is cut when even collecting every
/// remaining asset could not beat the incumbent (ties are kept so the
/// degeneracy count stays exact).
pub fn enumerate_routes(instance: &ProblemInstance) -> Result<RouteSearchResult> {
    let dist = crate::problem::shortest_paths(instance)?;
    let a = instance.start();
    let b = instance.end();
    let t_limit = instance.deadline();

    struct Search<'a> {
        instance: &'a ProblemInstance,
        dist: &'a crate::problem::DistanceTable,
        best_value: f64,
        best_route: Option<Vec<NodeIdx>>,
        tie_count: usize,
    }

    impl Search<'_> {
        fn record(&mut self, visits: &[NodeIdx], value: f64) {
            if value < self.best_value {
                self.best_value = value;
                self.best_route = Some(visits.to_vec());
                self.tie_count = 1;
            } else if value == self.best_value && self.best_route.is_some() {
                self.tie_count += 1;
            }
        }

        fn dfs(&mut self, current: NodeIdx, elapsed: u32, collected: f64, visits: &mut Vec<NodeIdx>) {
            let inst = self.instance;
            let t_limit = inst.deadline();
            let b = inst.end();
            // Close the route here if the end is still reachable in time and
            // within the step budget.
            if let Some(t) = inst.time_between(current, b) {
                if elapsed + t <= t_limit && visits.len() + 1 <= t_limit as usize {
                    self.record(visits, -collected);
                }
            }
            // Even collecting everything left cannot beat the incumbent.
            let remaining: f64 = inst
                .internal()
                .filter(|u| !visits.contains(u))
                .map(|u| inst.asset_value(u))
                .sum();
            if -(collected + remaining) > self.best_value {
                return;
            }
            for v in inst.internal() {
                if visits.contains(&v) {
                    continue;
                }
                let Some(t) = inst.time_between(current, v) else { continue };
                let arrive = elapsed + t;
                // Must still be able to reach the end afterwards.
                if arrive + self.dist.get(v, b) > t_limit {
                    continue;
                }
                if visits.len() + 2 > t_limit as usize {
                    continue;
                }
                visits.push(v);
                self.dfs(v, arrive, collected + inst.asset_value(v), visits);
                visits.pop();
            }
        }
    }

    let mut search =
        Search { instance, dist: &dist, best_value: f64::INFINITY, best_route: None, tie_count: 0 };
    if dist.get(a, b) <= t_limit {
        search.dfs(a, 0, 0.0, &mut Vec::new());
    }

    match search.best_route {
        Some(visits) => {
            let route = Route::from_visits(instance, &visits);
            Ok(RouteSearchResult {
                route: Some(route),
                value: search.best_value,
                feasible: true,
                tie_count: search.tie_count,
            })
        }
        None => Ok(RouteSearchResult {
            route: None,
            value: f64::INFINITY,
            feasible: false,
            tie_count: 0,
        }),
    }
}

/// Cross-oracle consistency gate: the brute-force minimizer of the
/// formulation must decode to a feasible route whose objective matches the
/// route-space optimum (up to the dropped constant). A failure means the
/// penalty weight or the pruning cut away the optimum.
pub fn penalty_gate(f: &Formulation) -> Result<()> {
    let brute = brute_force_min(f)?;
    let routes = enumerate_routes(f.instance())?;
    if !routes.feasible {
        return Err(Error::OracleGate("route search found no feasible route".into()));
    }
    let route = match decode(brute.assignment, f) {
        formulation::Decoded::Feasible(route) => route,
        formulation::Decoded::Infeasible(report) => {
            return Err(Error::OracleGate(format!(
                "alpha insufficient: brute-force minimizer violates {} ({})",
                report.first_violation, report.detail
            )));
        }
    };
    let objective = route_objective(&route, f.instance())?;
    if (objective - routes.value).abs() > 1e-9 {
        return Err(Error::OracleGate(format!(
            "brute-force optimum decodes to objective {objective} but route search found {}",
            routes.value
        )));
    }
    if (brute.value + f.dropped_constant() - objective).abs() > 1e-9 {
        return Err(Error::OracleGate(format!(
            "energy identity broken: {} + {} != {objective}",
            brute.value,
            f.dropped_constant()
        )));
    }
    Ok(())
}
