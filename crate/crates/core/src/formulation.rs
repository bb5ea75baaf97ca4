//! QUBO and HUBO builders for the asset retrieval problem, plus route
//! decoding and scoring.
//!
//! Both forms share the same shape: a negated asset-collection objective
//! plus five penalty constraints weighted by `alpha`. The QUBO tracks one
//! binary variable per (edge, step); the HUBO tracks one per (node, step)
//! and pays for it with quartic terms in the time constraint.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{PBPoly, SpinPoly, VarId, VarRegistry};
use crate::problem::{FeasibilityMask, NodeIdx, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Qubo,
    Hubo,
}

impl std::fmt::Display for FormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormKind::Qubo => write!(f, "qubo"),
            FormKind::Hubo => write!(f, "hubo"),
        }
    }
}

/// A built pseudo-Boolean program: the full penalty polynomial (constants
/// dropped), its labelled constraint parts (constants kept, for diagnostics
/// and verification), and the variable registry.
#[derive(Debug, Clone)]
pub struct Formulation {
    kind: FormKind,
    instance: Arc<ProblemInstance>,
    registry: Arc<VarRegistry>,
    poly: PBPoly,
    objective: PBPoly,
    constraints: Vec<(&'static str, PBPoly)>,
    alpha: f64,
    dropped_constant: f64,
}

impl Formulation {
    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn instance(&self) -> &Arc<ProblemInstance> {
        &self.instance
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    pub fn qubit_count(&self) -> usize {
        self.registry.len()
    }

    /// The minimized polynomial, constants already dropped.
    pub fn poly(&self) -> &PBPoly {
        &self.poly
    }

    /// The asset objective part, before penalties.
    pub fn objective(&self) -> &PBPoly {
        &self.objective
    }

    /// Labelled penalty constraints (`Q1`..`Q5` or `H1`..`H5`), with their
    /// constants intact and without the `alpha` weight.
    pub fn constraints(&self) -> &[(&'static str, PBPoly)] {
        &self.constraints
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dropped_constant(&self) -> f64 {
        self.dropped_constant
    }

    pub fn energy(&self, bits: u64) -> f64 {
        self.poly.evaluate_bits(bits)
    }

    pub fn spin(&self) -> SpinPoly {
        self.poly.to_spin()
    }

    /// JSON registry mapping variables to qubit indices, for external
    /// consumers of the dumped polynomial.
    pub fn registry_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct Entry {
            qubit: usize,
            var: String,
        }
        #[derive(serde::Serialize)]
        struct RegistryFile {
            kind: FormKind,
            qubits: usize,
            alpha: f64,
            dropped_constant: f64,
            variables: Vec<Entry>,
        }
        let file = RegistryFile {
            kind: self.kind,
            qubits: self.qubit_count(),
            alpha: self.alpha,
            dropped_constant: self.dropped_constant,
            variables: self
                .registry
                .iter()
                .map(|(i, v)| Entry { qubit: i, var: v.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("registry serializes")
    }
}

/// The paper's penalty weight: three quarters of the largest asset value,
/// floored at 1 so all-zero-asset instances still enforce constraints.
pub fn default_penalty(instance: &ProblemInstance) -> Result<f64> {
    if instance.internal_count() == 0 {
        return Err(Error::NoInternalNodes);
    }
    let max = instance.max_asset_value();
    if max == 0.0 {
        Ok(1.0)
    } else {
        Ok(0.75 * max)
    }
}

fn require_completed(instance: &ProblemInstance) -> Result<()> {
    for u in 0..instance.node_count() {
        for v in u + 1..instance.node_count() {
            if instance.time_between(u, v).is_none() {
                return Err(Error::InvalidInstance(format!(
                    "formulation requires a completed instance; edge {}-{} missing",
                    instance.name(u),
                    instance.name(v)
                )));
            }
        }
    }
    Ok(())
}

/// One-hot slack polynomial pieces shared by both builders.
fn slack_vars(registry: &mut VarRegistry, deadline: u32) -> Vec<usize> {
    (0..=deadline).map(|j| registry.register(VarId::Slack { j })).collect()
}

fn sum_of(registry: &Arc<VarRegistry>, vars: &[usize]) -> PBPoly {
    let mut p = PBPoly::zero(registry.clone());
    for &v in vars {
        p.add_term(&[v as u32], 1.0);
    }
    p
}

/// Builds the quadratic formulation over edge-per-step variables.
pub fn build_qubo(
    instance: &Arc<ProblemInstance>,
    mask: &FeasibilityMask,
    alpha: f64,
) -> Result<Formulation> {
    require_completed(instance)?;
    let t_limit = instance.deadline();
    let a = instance.start();
    let b = instance.end();

    // Variable universe. The first step leaves A, the last step enters B,
    // and B is never left except through its zero-time self-loop; pruned
    // combinations are omitted entirely.
    let mut registry = VarRegistry::new();
    let mut step_vars: Vec<Vec<(NodeIdx, NodeIdx, usize)>> = vec![Vec::new(); t_limit as usize + 1];
    for i in 1..=t_limit {
        let sources: Vec<NodeIdx> = if i == 1 {
            vec![a]
        } else {
            instance.internal().chain(std::iter::once(b)).collect()
        };
        for u in sources {
            let targets: Vec<NodeIdx> = if u == b {
                vec![b]
            } else if i == t_limit {
                vec![b]
            } else {
                instance.internal().filter(|&v| v != u).chain(std::iter::once(b)).collect()
            };
            for v in targets {
                if instance.time_between(u, v).is_none() {
                    continue;
                }
                if !mask.qubo_allowed(u, v, i) {
                    continue;
                }
                let name_u = instance.name(u).to_string();
                let name_v = instance.name(v).to_string();
                let idx =
                    registry.register(VarId::QuboEdge { from: name_u, to: name_v, step: i });
                step_vars[i as usize].push((u, v, idx));
            }
        }
        if step_vars[i as usize].is_empty() {
            return Err(Error::Infeasible(format!(
                "no usable edge at step {i}; every candidate was pruned"
            )));
        }
    }
    let slacks = slack_vars(&mut registry, t_limit);
    let registry = Arc::new(registry);

    let zero = || PBPoly::zero(registry.clone());

    // Q0: collect asset values on every arrival at an internal node.
    let mut objective = zero();
    for vars in &step_vars {
        for &(_, v, idx) in vars {
            if instance.is_internal(v) {
                objective.add_term(&[idx as u32], -instance.asset_value(v));
            }
        }
    }

    // Q1: at most one arrival per internal node, counted over ordered pairs.
    let mut q1 = zero();
    for v in instance.internal() {
        let arrivals: Vec<usize> = step_vars
            .iter()
            .flatten()
            .filter(|&&(_, to, _)| to == v)
            .map(|&(_, _, idx)| idx)
            .collect();
        for (k, &x) in arrivals.iter().enumerate() {
            for &y in &arrivals[k + 1..] {
                q1.add_term(&[x as u32, y as u32], 2.0);
            }
        }
    }

    // Q2: exactly one edge per step, with the first and last steps pinned to
    // A-departures and B-arrivals by the variable universe above.
    let mut q2 = zero();
    for i in 1..=t_limit {
        let vars: Vec<usize> = step_vars[i as usize].iter().map(|&(_, _, idx)| idx).collect();
        let mut s = sum_of(&registry, &vars);
        s.add_constant(-1.0);
        q2 = q2.add(&s.square())?;
        // The single-step instance plays both the "leave A" and "enter B"
        // roles; the paper's split writes the squared term twice.
        if t_limit == 1 {
            let mut s = sum_of(&registry, &vars);
            s.add_constant(-1.0);
            q2 = q2.add(&s.square())?;
        }
    }

    // Q3: total traversal time plus one-hot slack equals the deadline.
    let mut time_poly = zero();
    for vars in &step_vars {
        for &(u, v, idx) in vars {
            let t = instance.time_between(u, v).unwrap();
            if t > 0 {
                time_poly.add_term(&[idx as u32], t as f64);
            }
        }
    }
    let mut slack_weighted = zero();
    for (j, &z) in slacks.iter().enumerate() {
        if j > 0 {
            slack_weighted.add_term(&[z as u32], j as f64);
        }
    }
    let mut q3_inner = time_poly.add(&slack_weighted)?;
    q3_inner.add_constant(-(t_limit as f64));
    let q3 = q3_inner.square();

    // Q4: every arrival is followed by a departure.
    let mut q4 = zero();
    for v in instance.internal().chain(std::iter::once(b)) {
        for i in 2..=t_limit {
            let arrivals: Vec<usize> = step_vars[i as usize - 1]
                .iter()
                .filter(|&&(_, to, _)| to == v)
                .map(|&(_, _, idx)| idx)
                .collect();
            let departures: Vec<usize> = step_vars[i as usize]
                .iter()
                .filter(|&&(from, _, _)| from == v)
                .map(|&(_, _, idx)| idx)
                .collect();
            if arrivals.is_empty() && departures.is_empty() {
                continue;
            }
            let diff = sum_of(&registry, &arrivals).sub(&sum_of(&registry, &departures))?;
            q4 = q4.add(&diff.square())?;
        }
    }

    // Q5: slack one-hot.
    let mut q5_inner = sum_of(&registry, &slacks);
    q5_inner.add_constant(-1.0);
    let q5 = q5_inner.square();

    assemble(
        FormKind::Qubo,
        instance.clone(),
        registry,
        objective,
        vec![("Q1", q1), ("Q2", q2), ("Q3", q3), ("Q4", q4), ("Q5", q5)],
        alpha,
    )
}

/// Builds the higher-order formulation over node-per-step variables. The
/// boundary positions (`A` at step 0, `B` at step `T`) are substituted in
/// rather than registered.
pub fn build_hubo(
    instance: &Arc<ProblemInstance>,
    mask: &FeasibilityMask,
    alpha: f64,
) -> Result<Formulation> {
    require_completed(instance)?;
    let t_limit = instance.deadline();
    let a = instance.start();
    let b = instance.end();
    let neighbors_of_a = instance.neighbors(a);
    let neighbors_of_b = instance.neighbors(b);

    let mut registry = VarRegistry::new();
    let mut position: Vec<Vec<(NodeIdx, usize)>> = vec![Vec::new(); t_limit as usize];
    for i in 1..t_limit {
        for u in instance.internal().chain(std::iter::once(b)) {
            if !mask.hubo_allowed(u, i) {
                continue;
            }
            // Step-1 positions are restricted to neighbours of A.
            if i == 1 && !neighbors_of_a.contains(&u) {
                continue;
            }
            let idx = registry.register(VarId::HuboNode { node: instance.name(u).into(), step: i });
            position[i as usize].push((u, idx));
        }
        if position[i as usize].is_empty() {
            return Err(Error::Infeasible(format!(
                "no usable position at step {i}; every candidate was pruned"
            )));
        }
    }
    let slacks = slack_vars(&mut registry, t_limit);
    let registry = Arc::new(registry);

    let zero = || PBPoly::zero(registry.clone());

    // Occupancy of (node, step) with the boundary conditions folded in:
    // step 0 is A, step T is B, everything else is a variable or zero.
    #[derive(Clone, Copy)]
    enum Factor {
        One,
        Zero,
        Var(usize),
    }
    let factor = |u: NodeIdx, step: u32| -> Factor {
        if step == 0 {
            return if u == a { Factor::One } else { Factor::Zero };
        }
        if step == t_limit {
            return if u == b { Factor::One } else { Factor::Zero };
        }
        match position[step as usize].iter().find(|&&(node, _)| node == u) {
            Some(&(_, idx)) => Factor::Var(idx),
            None => Factor::Zero,
        }
    };

    // H0: collect asset values on occupied internal positions.
    let mut objective = zero();
    for vars in &position {
        for &(u, idx) in vars {
            if instance.is_internal(u) {
                objective.add_term(&[idx as u32], -instance.asset_value(u));
            }
        }
    }

    // H1: each internal node occupied at most once, ordered pairs.
    let mut h1 = zero();
    for u in instance.internal() {
        let occ: Vec<usize> = position
            .iter()
            .flatten()
            .filter(|&&(node, _)| node == u)
            .map(|&(_, idx)| idx)
            .collect();
        for (k, &x) in occ.iter().enumerate() {
            for &y in &occ[k + 1..] {
                h1.add_term(&[x as u32, y as u32], 2.0);
            }
        }
    }

    // H2: exactly one position per step.
    let mut h2 = zero();
    for i in 1..t_limit {
        let vars: Vec<usize> = position[i as usize].iter().map(|&(_, idx)| idx).collect();
        let mut s = sum_of(&registry, &vars);
        s.add_constant(-1.0);
        h2 = h2.add(&s.square())?;
    }

    // H3: total traversal time plus slack equals the deadline. The time sum
    // pairs consecutive occupancies; the quartic terms come from squaring it.
    let mut time_poly = zero();
    for i in 1..=t_limit {
        for u in 0..instance.node_count() {
            let fu = factor(u, i - 1);
            if matches!(fu, Factor::Zero) {
                continue;
            }
            for v in 0..instance.node_count() {
                if v == u {
                    continue;
                }
                let fv = factor(v, i);
                if matches!(fv, Factor::Zero) {
                    continue;
                }
                let Some(t) = instance.time_between(u, v) else { continue };
                if t == 0 {
                    continue;
                }
                match (fu, fv) {
                    (Factor::One, Factor::One) => time_poly.add_constant(t as f64),
                    (Factor::One, Factor::Var(k)) | (Factor::Var(k), Factor::One) => {
                        time_poly.add_term(&[k as u32], t as f64)
                    }
                    (Factor::Var(j), Factor::Var(k)) => {
                        time_poly.add_term(&[j as u32, k as u32], t as f64)
                    }
                    _ => unreachable!("zero factors are skipped"),
                }
            }
        }
    }
    let mut slack_weighted = zero();
    for (j, &z) in slacks.iter().enumerate() {
        if j > 0 {
            slack_weighted.add_term(&[z as u32], j as f64);
        }
    }
    let mut h3_inner = time_poly.add(&slack_weighted)?;
    h3_inner.add_constant(-(t_limit as f64));
    let h3 = h3_inner.square();

    // H4: B may only be entered from its neighbourhood (vacuous once the
    // graph is completed) and never left once reached.
    let mut h4 = zero();
    for i in 2..t_limit {
        for u in instance.internal() {
            if neighbors_of_b.contains(&u) {
                continue;
            }
            if let (Factor::Var(j), Factor::Var(k)) = (factor(u, i - 1), factor(b, i)) {
                h4.add_term(&[j as u32, k as u32], 1.0);
            }
        }
    }
    for i in 1..t_limit.saturating_sub(1) {
        for u in instance.internal() {
            if let (Factor::Var(j), Factor::Var(k)) = (factor(b, i), factor(u, i + 1)) {
                h4.add_term(&[j as u32, k as u32], 1.0);
            }
        }
    }

    // H5: slack one-hot.
    let mut h5_inner = sum_of(&registry, &slacks);
    h5_inner.add_constant(-1.0);
    let h5 = h5_inner.square();

    assemble(
        FormKind::Hubo,
        instance.clone(),
        registry,
        objective,
        vec![("H1", h1), ("H2", h2), ("H3", h3), ("H4", h4), ("H5", h5)],
        alpha,
    )
}

fn assemble(
    kind: FormKind,
    instance: Arc<ProblemInstance>,
    registry: Arc<VarRegistry>,
    objective: PBPoly,
    constraints: Vec<(&'static str, PBPoly)>,
    alpha: f64,
) -> Result<Formulation> {
    let mut full = objective.clone();
    for (_, c) in &constraints {
        full = full.add(&c.scale(alpha))?;
    }
    let (poly, dropped_constant) = full.drop_constant();
    let max_degree = match kind {
        FormKind::Qubo => 2,
        FormKind::Hubo => 4,
    };
    debug_assert!(poly.degree() <= max_degree, "{kind} degree {} too high", poly.degree());
    Ok(Formulation {
        kind,
        instance,
        registry,
        poly,
        objective,
        constraints,
        alpha,
        dropped_constant,
    })
}

/// A node sequence `p_0..p_T`: starts at A, ends at B, padded at B with the
/// zero-time self-loop once the end is reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    path: Vec<NodeIdx>,
}

impl Route {
    pub fn new(path: Vec<NodeIdx>) -> Self {
        Self { path }
    }

    /// Builds the padded path from the visited internal nodes.
    pub fn from_visits(instance: &ProblemInstance, visits: &[NodeIdx]) -> Self {
        let mut path = Vec::with_capacity(instance.deadline() as usize + 1);
        path.push(instance.start());
        path.extend_from_slice(visits);
        while path.len() < instance.deadline() as usize + 1 {
            path.push(instance.end());
        }
        Self { path }
    }

    pub fn path(&self) -> &[NodeIdx] {
        &self.path
    }

    /// The internal nodes visited, in order.
    pub fn visits(&self, instance: &ProblemInstance) -> Vec<NodeIdx> {
        self.path.iter().copied().filter(|&u| instance.is_internal(u)).collect()
    }

    /// Total traversal time along the path (B-padding contributes zero).
    pub fn total_time(&self, instance: &ProblemInstance) -> Option<u32> {
        let mut total = 0;
        for pair in self.path.windows(2) {
            total += instance.time_between(pair[0], pair[1])?;
        }
        Some(total)
    }

    pub fn display(&self, instance: &ProblemInstance) -> String {
        self.path.iter().map(|&u| instance.name(u)).collect::<Vec<_>>().join(" -> ")
    }
}

/// Feasibility check for a padded route: right endpoints, edges present,
/// internal nodes visited at most once, B absorbing, total time within the
/// deadline.
pub fn is_feasible(route: &Route, instance: &ProblemInstance) -> (bool, Vec<String>) {
    let mut violations = Vec::new();
    let path = route.path();
    let t_limit = instance.deadline() as usize;
    if path.len() != t_limit + 1 {
        violations.push(format!("length: path has {} steps, deadline is {}", path.len() - 1, t_limit));
    }
    if path.first() != Some(&instance.start()) {
        violations.push("start: path must begin at the start node".into());
    }
    if path.last() != Some(&instance.end()) {
        violations.push("end: path must finish at the end node".into());
    }
    if path.iter().skip(1).any(|&u| u == instance.start()) {
        violations.push("start-revisit: the start node cannot be re-entered".into());
    }
    for pair in path.windows(2) {
        if instance.time_between(pair[0], pair[1]).is_none() {
            violations.push(format!(
                "edge: no edge {} -> {}",
                instance.name(pair[0]),
                instance.name(pair[1])
            ));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for &u in path {
        if instance.is_internal(u) && !seen.insert(u) {
            violations.push(format!("visit-once: internal node {} revisited", instance.name(u)));
        }
    }
    if let Some(first_b) = path.iter().position(|&u| u == instance.end()) {
        if path[first_b..].iter().any(|&u| u != instance.end()) {
            violations.push("stay-at-end: the end node cannot be left".into());
        }
    }
    if let Some(total) = route.total_time(instance) {
        if total > instance.deadline() {
            violations.push(format!("time: total {total} exceeds deadline {}", instance.deadline()));
        }
    }
    (violations.is_empty(), violations)
}

/// Negated sum of asset values over distinct visited internal nodes.
pub fn route_objective(route: &Route, instance: &ProblemInstance) -> Result<f64> {
    let (ok, violations) = is_feasible(route, instance);
    if !ok {
        return Err(Error::Infeasible(format!("route is infeasible: {}", violations.join("; "))));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut total = 0.0;
    for &u in route.path() {
        if instance.is_internal(u) && seen.insert(u) {
            total -= instance.asset_value(u);
        }
    }
    Ok(total)
}

/// Why a bitstring failed to decode into a route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityReport {
    /// Label of the first violated constraint (`Q1`..`Q5` / `H1`..`H5`).
    pub first_violation: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decoded {
    Feasible(Route),
    Infeasible(InfeasibilityReport),
}

impl Decoded {
    pub fn route(&self) -> Option<&Route> {
        match self {
            Decoded::Feasible(r) => Some(r),
            Decoded::Infeasible(_) => None,
        }
    }
}

fn infeasible(label: &str, detail: String) -> Decoded {
    Decoded::Infeasible(InfeasibilityReport { first_violation: label.to_string(), detail })
}

/// Reconstructs the route a bitstring encodes, or reports the first violated
/// constraint.
pub fn decode(bits: u64, f: &Formulation) -> Decoded {
    match f.kind() {
        FormKind::Qubo => decode_qubo(bits, f),
        FormKind::Hubo => decode_hubo(bits, f),
    }
}

fn slack_value(bits: u64, f: &Formulation, label: &str) -> std::result::Result<u32, Decoded> {
    let mut chosen = Vec::new();
    for (idx, var) in f.registry().iter() {
        if let VarId::Slack { j } = var {
            if bits >> idx & 1 == 1 {
                chosen.push(*j);
            }
        }
    }
    if chosen.len() != 1 {
        return Err(infeasible(label, format!("{} slack bits set, expected exactly 1", chosen.len())));
    }
    Ok(chosen[0])
}

fn decode_qubo(bits: u64, f: &Formulation) -> Decoded {
    let instance = f.instance();
    let t_limit = instance.deadline() as usize;
    let mut steps: Vec<Vec<(NodeIdx, NodeIdx)>> = vec![Vec::new(); t_limit + 1];
    for (idx, var) in f.registry().iter() {
        if bits >> idx & 1 == 0 {
            continue;
        }
        if let VarId::QuboEdge { from, to, step } = var {
            let u = instance.index_of(from).expect("registered node");
            let v = instance.index_of(to).expect("registered node");
            steps[*step as usize].push((u, v));
        }
    }
    for i in 1..=t_limit {
        if steps[i].len() != 1 {
            return infeasible("Q2", format!("step {i} selects {} edges, expected exactly 1", steps[i].len()));
        }
    }
    let mut path = vec![instance.start()];
    for i in 1..=t_limit {
        let (u, v) = steps[i][0];
        if u != *path.last().unwrap() {
            return infeasible(
                "Q4",
                format!("step {i} departs {} but the route is at {}", instance.name(u), instance.name(*path.last().unwrap())),
            );
        }
        path.push(v);
    }
    let mut seen = std::collections::BTreeSet::new();
    for &u in &path {
        if instance.is_internal(u) && !seen.insert(u) {
            return infeasible("Q1", format!("internal node {} visited twice", instance.name(u)));
        }
    }
    let j = match slack_value(bits, f, "Q5") {
        Ok(j) => j,
        Err(report) => return report,
    };
    let route = Route::new(path);
    let total = route.total_time(instance).expect("edges exist by construction");
    if total + j != instance.deadline() {
        return infeasible("Q3", format!("total time {total} plus slack {j} is not the deadline {}", instance.deadline()));
    }
    Decoded::Feasible(route)
}

fn decode_hubo(bits: u64, f: &Formulation) -> Decoded {
    let instance = f.instance();
    let t_limit = instance.deadline() as usize;
    let mut steps: Vec<Vec<NodeIdx>> = vec![Vec::new(); t_limit.max(1)];
    for (idx, var) in f.registry().iter() {
        if bits >> idx & 1 == 0 {
            continue;
        }
        if let VarId::HuboNode { node, step } = var {
            let u = instance.index_of(node).expect("registered node");
            steps[*step as usize].push(u);
        }
    }
    for i in 1..t_limit {
        if steps[i].len() != 1 {
            return infeasible("H2", format!("step {i} occupies {} nodes, expected exactly 1", steps[i].len()));
        }
    }
    let mut path = vec![instance.start()];
    for step in steps.iter().take(t_limit).skip(1) {
        path.push(step[0]);
    }
    path.push(instance.end());
    // Once at the end node the route must stay there.
    let first_b = path.iter().position(|&u| u == instance.end()).unwrap();
    if path[first_b..].iter().any(|&u| u != instance.end()) {
        return infeasible("H4", "the end node is left after being reached".into());
    }
    let mut seen = std::collections::BTreeSet::new();
    for &u in &path {
        if instance.is_internal(u) && !seen.insert(u) {
            return infeasible("H1", format!("internal node {} occupied twice", instance.name(u)));
        }
    }
    let j = match slack_value(bits, f, "H5") {
        Ok(j) => j,
        Err(report) => return report,
    };
    let route = Route::new(path);
    let Some(total) = route.total_time(instance) else {
        return infeasible("H3", "consecutive positions are not joined by an edge".into());
    };
    if total + j != instance.deadline() {
        return infeasible("H3", format!("total time {total} plus slack {j} is not the deadline {}", instance.deadline()));
    }
    Decoded::Feasible(route)
}

/// Encodes a feasible route as the bitstring that represents it, including
/// the slack bit for its arrival time. Fails if the route touches a pruned
/// variable.
pub fn encode_route(route: &Route, f: &Formulation) -> Result<u64> {
    let instance = f.instance();
    let (ok, violations) = is_feasible(route, instance);
    if !ok {
        return Err(Error::Infeasible(violations.join("; ")));
    }
    let mut bits = 0u64;
    let mut set = |var: VarId| -> Result<()> {
        match f.registry().index_of(&var) {
            Some(idx) => {
                bits |= 1 << idx;
                Ok(())
            }
            None => Err(Error::Infeasible(format!("route needs pruned variable {var}"))),
        }
    };
    match f.kind() {
        FormKind::Qubo => {
            for (i, pair) in route.path().windows(2).enumerate() {
                set(VarId::QuboEdge {
                    from: instance.name(pair[0]).into(),
                    to: instance.name(pair[1]).into(),
                    step: i as u32 + 1,
                })?;
            }
        }
        FormKind::Hubo => {
            for (i, &u) in route.path().iter().enumerate() {
                if i == 0 || i == instance.deadline() as usize {
                    continue;
                }
                set(VarId::HuboNode { node: instance.name(u).into(), step: i as u32 })?;
            }
        }
    }
    let total = route.total_time(instance).expect("feasible route");
    set(VarId::Slack { j: instance.deadline() - total })?;
    Ok(bits)
}
