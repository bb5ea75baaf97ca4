//! Gate-level circuit IR, phase-gadget synthesis, the greedy subset-chain
//! factoring heuristic, QAOA ansatz assembly, and circuit metrics.
//!
//! A spin term `w * z_{i1}...z_{ik}` becomes a phase gadget: CNOTs collect
//! the parity of the term's qubits onto a target, an RZ applies the phase,
//! and the CNOTs unwind. Chained gadgets whose qubit sets form a strict
//! subset chain share one CNOT scaffold, so a whole chain costs only as
//! many CNOTs as its longest term.

use crate::error::{Error, Result};
use crate::poly::SpinPoly;

/// Rotation angle: either a bound literal or a symbolic ansatz parameter
/// scaled by a multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSlot {
    Literal(f64),
    Gamma { layer: usize, multiplier: f64 },
    Beta { layer: usize, multiplier: f64 },
}

impl ParamSlot {
    pub fn resolve(&self, bindings: &Bindings) -> Result<f64> {
        match *self {
            ParamSlot::Literal(v) => Ok(v),
            ParamSlot::Gamma { layer, multiplier } => bindings
                .gammas
                .get(layer)
                .map(|g| g * multiplier)
                .ok_or_else(|| Error::UnboundParameter(format!("gamma_{}", layer + 1))),
            ParamSlot::Beta { layer, multiplier } => bindings
                .betas
                .get(layer)
                .map(|b| b * multiplier)
                .ok_or_else(|| Error::UnboundParameter(format!("beta_{}", layer + 1))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H { q: usize },
    Rz { q: usize, angle: ParamSlot },
    Rx { q: usize, angle: ParamSlot },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { q } | Gate::Rz { q, .. } | Gate::Rx { q, .. } => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }
}

/// Values for the symbolic parameters `gamma_1..gamma_p, beta_1..beta_p`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl Bindings {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Self {
        Self { gammas, betas }
    }

    /// Splits a flat `[gamma_1.., beta_1..]` vector in half.
    pub fn from_flat(params: &[f64]) -> Self {
        let p = params.len() / 2;
        Self { gammas: params[..p].to_vec(), betas: params[p..].to_vec() }
    }
}

/// An ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    layers: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, layers: usize) -> Self {
        Self { width, layers, gates: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of ansatz layers `p` (0 for plain bound circuits).
    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.qubits().iter().all(|&q| q < self.width));
        if let Gate::Cnot { control, target } = gate {
            debug_assert_ne!(control, target);
        }
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        for g in gates {
            self.push(g);
        }
    }

    pub fn is_bound(&self) -> bool {
        self.gates.iter().all(|g| match g {
            Gate::Rz { angle, .. } | Gate::Rx { angle, .. } => {
                matches!(angle, ParamSlot::Literal(_))
            }
            _ => true,
        })
    }

    /// Resolves every symbolic parameter into a literal-angle circuit.
    pub fn bind(&self, bindings: &Bindings) -> Result<Circuit> {
        let mut out = Circuit::new(self.width, self.layers);
        for gate in &self.gates {
            let bound = match *gate {
                Gate::Rz { q, angle } => Gate::Rz { q, angle: ParamSlot::Literal(angle.resolve(bindings)?) },
                Gate::Rx { q, angle } => Gate::Rx { q, angle: ParamSlot::Literal(angle.resolve(bindings)?) },
                g => g,
            };
            out.push(bound);
        }
        Ok(out)
    }
}

/// Fan-in shape of a phase gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetStyle {
    /// CNOTs collect parity one qubit at a time: linear depth.
    Ladder,
    /// CNOTs combine disjoint pairs level by level: logarithmic depth.
    Tree,
}

impl std::str::FromStr for GadgetStyle {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ladder" => Ok(GadgetStyle::Ladder),
            "tree" => Ok(GadgetStyle::Tree),
            other => Err(format!("unknown gadget style `{other}` (expected ladder or tree)")),
        }
    }
}

/// The RZ angle realizing `exp(-i * gamma * coeff * prod z)` on the parity
/// target. `RZ(theta)` phases by the Z eigenvalue `(-1)^b`, which is the
/// negation of the spin value `z = 2b - 1`, so odd-sized terms flip sign.
fn gadget_multiplier(term_len: usize, coeff: f64) -> f64 {
    if term_len % 2 == 0 {
        2.0 * coeff
    } else {
        -2.0 * coeff
    }
}

/// Synthesizes one phase gadget for a spin term: `2(k-1)` CNOTs around a
/// single RZ on the parity target (the term's lowest qubit).
pub fn synth_phase_gadget(
    term: &[u32],
    coeff: f64,
    layer: usize,
    style: GadgetStyle,
) -> Result<Vec<Gate>> {
    if term.is_empty() {
        return Err(Error::EmptyTerm);
    }
    let mut qubits: Vec<usize> = term.iter().map(|&q| q as usize).collect();
    qubits.sort_unstable();
    qubits.dedup();
    let target = qubits[0];
    let angle = ParamSlot::Gamma { layer, multiplier: gadget_multiplier(qubits.len(), coeff) };

    let fan_in: Vec<Gate> = match style {
        GadgetStyle::Ladder => qubits[1..]
            .iter()
            .map(|&q| Gate::Cnot { control: q, target })
            .collect(),
        GadgetStyle::Tree => {
            let mut gates = Vec::with_capacity(qubits.len() - 1);
            let mut active = qubits.clone();
            while active.len() > 1 {
                let mut next = Vec::with_capacity(active.len().div_ceil(2));
                for pair in active.chunks(2) {
                    if pair.len() == 2 {
                        gates.push(Gate::Cnot { control: pair[1], target: pair[0] });
                    }
                    next.push(pair[0]);
                }
                active = next;
            }
            gates
        }
    };

    let mut gates = fan_in.clone();
    gates.push(Gate::Rz { q: target, angle });
    gates.extend(fan_in.into_iter().rev());
    Ok(gates)
}

/// A strict subset chain of spin terms, smallest first, with their
/// coefficients. Synthesized as one shared-scaffold gadget.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetGroup {
    chain: Vec<(Vec<u32>, f64)>,
}

impl GadgetGroup {
    pub fn new(chain: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::ChainViolation);
        }
        for window in chain.windows(2) {
            let (small, big) = (&window[0].0, &window[1].0);
            let strict_subset =
                small.len() < big.len() && small.iter().all(|q| big.contains(q));
            if !strict_subset {
                return Err(Error::ChainViolation);
            }
        }
        Ok(Self { chain })
    }

    pub fn chain(&self) -> &[(Vec<u32>, f64)] {
        &self.chain
    }

    pub fn longest(&self) -> &[u32] {
        &self.chain.last().expect("chain is non-empty").0
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// Synthesizes a whole chain with one scaffold: fan the smallest term onto
/// the target, rotate, then extend the fan with each set difference and
/// rotate again, unwinding everything at the end. Costs `2(|S_m| - 1)`
/// CNOTs for the longest term `S_m`.
pub fn synth_group(group: &GadgetGroup, layer: usize) -> Result<Vec<Gate>> {
    let chain = group.chain();
    let first = &chain[0].0;
    let target = *first.iter().min().ok_or(Error::EmptyTerm)? as usize;

    let mut gates = Vec::new();
    let mut fan_in: Vec<Gate> = Vec::new();
    let mut covered: Vec<u32> = Vec::new();
    for (term, coeff) in chain {
        let mut added: Vec<u32> =
            term.iter().copied().filter(|q| !covered.contains(q)).collect();
        added.sort_unstable();
        for &q in &added {
            if q as usize != target {
                let gate = Gate::Cnot { control: q as usize, target };
                fan_in.push(gate);
                gates.push(gate);
            }
        }
        covered.extend(added);
        gates.push(Gate::Rz {
            q: target,
            angle: ParamSlot::Gamma { layer, multiplier: gadget_multiplier(term.len(), *coeff) },
        });
    }
    gates.extend(fan_in.into_iter().rev());
    Ok(gates)
}

/// Greedy grouping of spin terms into strict subset chains: repeatedly take
/// the longest unassigned term, then keep extending downward with the
/// longest unassigned strict subset of the most recently added term. Ties
/// pick the lexicographically largest qubit-index set, which reproduces the
/// worked grouping {z1z2z3z4, z1z2z4, z2z4} for the standard example.
/// Every non-constant term lands in exactly one group.
pub fn factor_terms(spin: &SpinPoly) -> Vec<GadgetGroup> {
    let mut terms: Vec<(Vec<u32>, f64)> =
        spin.terms().map(|(k, c)| (k.to_vec(), c)).collect();
    // Longest first; ties broken toward the lexicographically largest set.
    terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| b.0.cmp(&a.0)));

    let mut assigned = vec![false; terms.len()];
    let mut groups: Vec<GadgetGroup> = Vec::new();
    for start in 0..terms.len() {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let mut chain_desc: Vec<(Vec<u32>, f64)> = vec![terms[start].clone()];
        loop {
            let last = &chain_desc.last().unwrap().0;
            // Terms are scanned longest-first, so the first unassigned
            // strict subset is the longest one with the preferred tie-break.
            let next = (0..terms.len()).find(|&i| {
                !assigned[i]
                    && terms[i].0.len() < last.len()
                    && terms[i].0.iter().all(|q| last.contains(q))
            });
            match next {
                Some(i) => {
                    assigned[i] = true;
                    chain_desc.push(terms[i].clone());
                }
                None => break,
            }
        }
        chain_desc.reverse();
        groups.push(GadgetGroup::new(chain_desc).expect("greedy chain is strict"));
    }
    groups.sort_by(|a, b| a.longest().cmp(b.longest()));
    groups
}

/// Assembles the alternating ansatz: Hadamards, then `p` repetitions of the
/// cost layer (every spin term as a phase gadget, chained when `factored`)
/// and the transverse-field mixer `RX(2 beta)` on every qubit. Factored
/// cost layers always use the shared-scaffold fan; `style` shapes the
/// standalone gadgets of unfactored layers.
pub fn build_ansatz(
    spin: &SpinPoly,
    layers: usize,
    factored: bool,
    style: GadgetStyle,
) -> Result<Circuit> {
    if layers < 1 {
        return Err(Error::NoLayers);
    }
    let width = spin.width();
    let mut circuit = Circuit::new(width, layers);
    for q in 0..width {
        circuit.push(Gate::H { q });
    }
    let groups = if factored {
        factor_terms(spin)
    } else {
        spin.terms()
            .map(|(k, c)| GadgetGroup::new(vec![(k.to_vec(), c)]).expect("singleton chain"))
            .collect()
    };
    for layer in 0..layers {
        for group in &groups {
            if factored || group.len() > 1 {
                circuit.extend(synth_group(group, layer)?);
            } else {
                let (term, coeff) = &group.chain()[0];
                circuit.extend(synth_phase_gadget(term, *coeff, layer, style)?);
            }
        }
        for q in 0..width {
            circuit.push(Gate::Rx { q, angle: ParamSlot::Beta { layer, multiplier: 2.0 } });
        }
    }
    Ok(circuit)
}

/// Depth under as-soon-as-possible scheduling with unit gate duration,
/// two-qubit gate count, and width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Metrics {
    pub depth: usize,
    pub two_qubit_gates: usize,
    pub qubits: usize,
}

pub fn metrics(c: &Circuit) -> Metrics {
    let mut ready = vec![0usize; c.width()];
    let mut two_qubit_gates = 0;
    for gate in c.gates() {
        if matches!(gate, Gate::Cnot { .. }) {
            two_qubit_gates += 1;
        }
        let qs = gate.qubits();
        let start = qs.iter().map(|&q| ready[q]).max().unwrap_or(0);
        for q in qs {
            ready[q] = start + 1;
        }
    }
    Metrics { depth: ready.into_iter().max().unwrap_or(0), two_qubit_gates, qubits: c.width() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_cnots(gates: &[Gate]) -> usize {
        gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    #[test]
    fn single_qubit_term_is_a_bare_rotation() {
        for style in [GadgetStyle::Ladder, GadgetStyle::Tree] {
            let gates = synth_phase_gadget(&[3], 0.5, 0, style).unwrap();
            assert_eq!(gates.len(), 1);
            assert!(matches!(gates[0], Gate::Rz { q: 3, .. }));
        }
    }

    #[test]
    fn gadget_cnot_count_law() {
        for k in 1..=6usize {
            let term: Vec<u32> = (0..k as u32).collect();
            for style in [GadgetStyle::Ladder, GadgetStyle::Tree] {
                let gates = synth_phase_gadget(&term, 1.0, 0, style).unwrap();
                assert_eq!(count_cnots(&gates), 2 * (k - 1), "k={k} style={style:?}");
            }
        }
    }

    #[test]
    fn empty_term_rejected() {
        assert!(matches!(
            synth_phase_gadget(&[], 1.0, 0, GadgetStyle::Ladder),
            Err(Error::EmptyTerm)
        ));
    }

    #[test]
    fn ladder_depth_is_linear_tree_depth_logarithmic() {
        let term: Vec<u32> = (0..8).collect();
        let wrap = |gates: Vec<Gate>| {
            let mut c = Circuit::new(8, 1);
            c.extend(gates);
            c
        };
        let ladder = wrap(synth_phase_gadget(&term, 1.0, 0, GadgetStyle::Ladder).unwrap());
        let tree = wrap(synth_phase_gadget(&term, 1.0, 0, GadgetStyle::Tree).unwrap());
        assert_eq!(metrics(&ladder).depth, 2 * 7 + 1);
        assert_eq!(metrics(&tree).depth, 2 * 3 + 1);
        assert_eq!(metrics(&ladder).two_qubit_gates, metrics(&tree).two_qubit_gates);
    }

    #[test]
    fn factoring_reproduces_worked_grouping() {
        // Terms {z1z2z3z4, z1z2z3, z1z2z4, z2z4, z1z4} group into the chain
        // {z1z2z3z4 > z1z2z4 > z2z4} plus two singletons.
        let mut spin = SpinPoly::new(5);
        spin.add_term(&[1, 2, 3, 4], 1.0);
        spin.add_term(&[1, 2, 3], 1.0);
        spin.add_term(&[1, 2, 4], 1.0);
        spin.add_term(&[2, 4], 1.0);
        spin.add_term(&[1, 4], 1.0);
        let groups = factor_terms(&spin);
        let chains: Vec<Vec<Vec<u32>>> = groups
            .iter()
            .map(|g| g.chain().iter().map(|(t, _)| t.clone()).collect())
            .collect();
        assert!(chains.contains(&vec![vec![2, 4], vec![1, 2, 4], vec![1, 2, 3, 4]]));
        assert!(chains.contains(&vec![vec![1, 2, 3]]));
        assert!(chains.contains(&vec![vec![1, 4]]));
        assert_eq!(groups.len(), 3);
    }

    #[test]
    fn factored_chain_costs_six_cnots_vs_twelve() {
        let chain = GadgetGroup::new(vec![
            (vec![2, 4], 1.0),
            (vec![1, 2, 4], 1.0),
            (vec![1, 2, 3, 4], 1.0),
        ])
        .unwrap();
        let factored = synth_group(&chain, 0).unwrap();
        assert_eq!(count_cnots(&factored), 6);
        let unfactored: usize = chain
            .chain()
            .iter()
            .map(|(t, c)| {
                count_cnots(&synth_phase_gadget(t, *c, 0, GadgetStyle::Ladder).unwrap())
            })
            .sum();
        assert_eq!(unfactored, 12);
    }

    #[test]
    fn disjoint_terms_stay_singletons() {
        let mut spin = SpinPoly::new(6);
        spin.add_term(&[0, 1], 1.0);
        spin.add_term(&[2, 3], 1.0);
        spin.add_term(&[4, 5], 1.0);
        let groups = factor_terms(&spin);
        assert_eq!(groups.len(), 3);
        assert!(groups.iter().all(|g| g.len() == 1));
    }

    #[test]
    fn singleton_group_matches_plain_gadget() {
        let term = vec![1u32, 3, 5];
        let group = GadgetGroup::new(vec![(term.clone(), 0.75)]).unwrap();
        let grouped = synth_group(&group, 0).unwrap();
        let plain = synth_phase_gadget(&term, 0.75, 0, GadgetStyle::Ladder).unwrap();
        assert_eq!(grouped, plain);
    }

    #[test]
    fn chain_violation_rejected() {
        assert!(matches!(
            GadgetGroup::new(vec![(vec![0, 1], 1.0), (vec![2, 3], 1.0)]),
            Err(Error::ChainViolation)
        ));
        assert!(matches!(
            GadgetGroup::new(vec![(vec![0, 1], 1.0), (vec![0, 1], 1.0)]),
            Err(Error::ChainViolation)
        ));
        assert!(matches!(GadgetGroup::new(vec![]), Err(Error::ChainViolation)));
    }

    #[test]
    fn empty_spin_ansatz_is_hadamards_plus_mixer() {
        let spin = SpinPoly::new(3);
        let c = build_ansatz(&spin, 1, false, GadgetStyle::Ladder).unwrap();
        assert_eq!(c.gates().len(), 6);
        assert!(c.gates()[..3].iter().all(|g| matches!(g, Gate::H { .. })));
        assert!(c.gates()[3..].iter().all(|g| matches!(g, Gate::Rx { .. })));
    }

    #[test]
    fn ansatz_rejects_zero_layers() {
        let spin = SpinPoly::new(2);
        assert!(matches!(build_ansatz(&spin, 0, false, GadgetStyle::Ladder), Err(Error::NoLayers)));
    }

    #[test]
    fn two_layer_ansatz_has_distinct_parameters() {
        let mut spin = SpinPoly::new(2);
        spin.add_term(&[0, 1], 1.0);
        let c = build_ansatz(&spin, 2, false, GadgetStyle::Ladder).unwrap();
        let mut layers_seen = std::collections::BTreeSet::new();
        for gate in c.gates() {
            if let Gate::Rz { angle: ParamSlot::Gamma { layer, .. }, .. } = gate {
                layers_seen.insert(*layer);
            }
        }
        assert_eq!(layers_seen.len(), 2);
        let bindings = Bindings::new(vec![0.1, 0.2], vec![0.3, 0.4]);
        assert!(c.bind(&bindings).unwrap().is_bound());
        // Binding with too few parameters fails.
        assert!(c.bind(&Bindings::new(vec![0.1], vec![0.3, 0.4])).is_err());
    }

    #[test]
    fn metrics_on_disjoint_gadgets_take_the_max_depth() {
        let mut c = Circuit::new(6, 1);
        c.extend(synth_phase_gadget(&[0, 1, 2], 1.0, 0, GadgetStyle::Ladder).unwrap());
        c.extend(synth_phase_gadget(&[3, 4, 5], 1.0, 0, GadgetStyle::Ladder).unwrap());
        let m = metrics(&c);
        assert_eq!(m.depth, 5);
        assert_eq!(m.two_qubit_gates, 8);
        assert_eq!(m.qubits, 6);

        let single = {
            let mut c = Circuit::new(3, 1);
            c.extend(synth_phase_gadget(&[0, 1, 2], 1.0, 0, GadgetStyle::Ladder).unwrap());
            c
        };
        assert_eq!(metrics(&single).depth, 5);
    }

    #[test]
    fn cnot_count_law_over_a_whole_layer() {
        let mut spin = SpinPoly::new(6);
        spin.add_term(&[0], 1.0);
        spin.add_term(&[0, 2], -0.5);
        spin.add_term(&[1, 2, 3], 2.0);
        spin.add_term(&[1, 2, 3, 5], 0.25);
        let unfactored = build_ansatz(&spin, 1, false, GadgetStyle::Ladder).unwrap();
        let expected: usize = [1usize, 2, 3, 4].iter().map(|k| 2 * (k - 1)).sum();
        assert_eq!(metrics(&unfactored).two_qubit_gates, expected);

        let factored = build_ansatz(&spin, 1, true, GadgetStyle::Ladder).unwrap();
        // Chains: {0} < {0,2} and {1,2,3} < {1,2,3,5}.
        assert_eq!(metrics(&factored).two_qubit_gates, 2 * 1 + 2 * 3);
        assert!(metrics(&factored).two_qubit_gates <= metrics(&unfactored).two_qubit_gates);
    }
}
