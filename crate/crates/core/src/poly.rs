//! Multilinear pseudo-Boolean polynomials over named binary variables, and
//! their Ising (spin) form.
//!
//! A [`PBPoly`] stores a map from sorted variable-index sets to real
//! coefficients plus a separately tracked constant, reduced eagerly by the
//! idempotence rule `x^2 = x`. [`SpinPoly`] is the same storage over qubit
//! indices after the substitution `x_i = (1 + z_i) / 2`, `z_i in {-1, +1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Coefficients with magnitude at or below this are treated as zero and
/// removed from term maps.
const COEFF_EPS: f64 = 1e-12;

/// Identity of one binary variable in a formulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// `x_{u,v}^{(i)}`: the route traverses edge `u -> v` at step `i`.
    QuboEdge { from: String, to: String, step: u32 },
    /// `x_u^{(i)}`: the route occupies node `u` at step `i`.
    HuboNode { node: String, step: u32 },
    /// One-hot slack bit `z_j` for the time constraint.
    Slack { j: u32 },
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::QuboEdge { from, to, step } => write!(f, "edge({from},{to},{step})"),
            VarId::HuboNode { node, step } => write!(f, "node({node},{step})"),
            VarId::Slack { j } => write!(f, "slack({j})"),
        }
    }
}

impl VarId {
    /// Parses the `Display` form back into a `VarId`.
    pub fn parse(s: &str) -> Option<VarId> {
        let (kind, rest) = s.split_once('(')?;
        let inner = rest.strip_suffix(')')?;
        match kind {
            "edge" => {
                let mut it = inner.split(',');
                let from = it.next()?.to_string();
                let to = it.next()?.to_string();
                let step = it.next()?.parse().ok()?;
                if it.next().is_some() {
                    return None;
                }
                Some(VarId::QuboEdge { from, to, step })
            }
            "node" => {
                let mut it = inner.split(',');
                let node = it.next()?.to_string();
                let step = it.next()?.parse().ok()?;
                if it.next().is_some() {
                    return None;
                }
                Some(VarId::HuboNode { node, step })
            }
            "slack" => Some(VarId::Slack { j: inner.parse().ok()? }),
            _ => None,
        }
    }
}

/// Bijection between registered variables and dense qubit indices `0..n`.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct VarRegistry {
    vars: Vec<VarId>,
    index: HashMap<VarId, usize>,
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a variable, returning its dense index. Registering the same
    /// variable twice returns the original index.
    pub fn register(&mut self, var: VarId) -> usize {
        if let Some(&i) = self.index.get(&var) {
            return i;
        }
        let i = self.vars.len();
        self.index.insert(var.clone(), i);
        self.vars.push(var);
        i
    }

    pub fn index_of(&self, var: &VarId) -> Option<usize> {
        self.index.get(var).copied()
    }

    pub fn var(&self, index: usize) -> &VarId {
        &self.vars[index]
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &VarId)> {
        self.vars.iter().enumerate()
    }

    /// Convenience: a registry of `n` anonymous slack-kind variables, handy
    /// for tests and generic polynomials.
    pub fn anonymous(n: usize) -> Arc<Self> {
        let mut reg = Self::new();
        for j in 0..n {
            reg.register(VarId::Slack { j: j as u32 });
        }
        Arc::new(reg)
    }
}

fn registries_match(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Multilinear pseudo-Boolean polynomial.
#[derive(Debug, Clone)]
pub struct PBPoly {
    registry: Arc<VarRegistry>,
    /// Sorted variable-index set -> coefficient. No zero coefficients, no
    /// empty key (the constant lives in `constant`).
    terms: std::collections::BTreeMap<Vec<u32>, f64>,
    constant: f64,
}

impl PBPoly {
    pub fn zero(registry: Arc<VarRegistry>) -> Self {
        Self { registry, terms: Default::default(), constant: 0.0 }
    }

    pub fn constant(registry: Arc<VarRegistry>, c: f64) -> Self {
        Self { registry, terms: Default::default(), constant: c }
    }

    /// The polynomial `x_i` for a single registered variable index.
    pub fn var(registry: Arc<VarRegistry>, index: usize) -> Self {
        let mut p = Self::zero(registry);
        p.add_term(&[index as u32], 1.0);
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    pub fn constant_part(&self) -> f64 {
        self.constant
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant == 0.0
    }

    /// Highest term cardinality; 0 for constant-only polynomials.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    /// Adds `coeff * prod(vars)` to the polynomial. `vars` need not be
    /// sorted; repeated indices are collapsed by idempotence.
    pub fn add_term(&mut self, vars: &[u32], coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        if vars.is_empty() {
            self.constant += coeff;
            return;
        }
        let mut key: Vec<u32> = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        self.add_term_sorted(&key, coeff);
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    fn check_registry(&self, other: &PBPoly) -> Result<()> {
        if registries_match(&self.registry, &other.registry) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &PBPoly) -> Result<PBPoly> {
        self.check_registry(other)?;
        let mut out = self.clone();
        out.constant += other.constant;
        for (k, &c) in &other.terms {
            let entry = out.terms.entry(k.clone()).or_insert(0.0);
            *entry += c;
            if entry.abs() <= COEFF_EPS {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PBPoly) -> Result<PBPoly> {
        self.add(&other.scale(-1.0))
    }

    /// Scales every coefficient (constant included).
    pub fn scale(&self, c: f64) -> PBPoly {
        let mut out = PBPoly::zero(self.registry.clone());
        if c == 0.0 {
            return out;
        }
        out.constant = self.constant * c;
        for (k, &v) in &self.terms {
            let w = v * c;
            if w.abs() > COEFF_EPS {
                out.terms.insert(k.clone(), w);
            }
        }
        out
    }

    /// Product, reduced by idempotence: `x_i * x_i = x_i`.
    pub fn multiply(&self, other: &PBPoly) -> Result<PBPoly> {
        self.check_registry(other)?;
        let mut out = PBPoly::zero(self.registry.clone());
        out.constant = self.constant * other.constant;
        if other.constant != 0.0 {
            for (k, &c) in &self.terms {
                out.add_term_sorted(k, c * other.constant);
            }
        }
        if self.constant != 0.0 {
            for (k, &c) in &other.terms {
                out.add_term_sorted(k, c * self.constant);
            }
        }
        let mut merged: Vec<u32> = Vec::new();
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                merged.clear();
                merge_sorted(ka, kb, &mut merged);
                out.add_term_sorted(&merged, ca * cb);
            }
        }
        Ok(out)
    }

    /// `(self)^2`, a common shape for penalty expansion.
    pub fn square(&self) -> PBPoly {
        self.multiply(self).expect("same registry")
    }

    fn add_term_sorted(&mut self, key: &[u32], coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        if key.is_empty() {
            self.constant += coeff;
            return;
        }
        let entry = self.terms.entry(key.to_vec()).or_insert(0.0);
        *entry += coeff;
        if entry.abs() <= COEFF_EPS {
            self.terms.remove(key);
        }
    }

    /// Splits off the constant: returns the polynomial with constant 0 and
    /// the dropped value. Minimizers are unchanged.
    pub fn drop_constant(&self) -> (PBPoly, f64) {
        let mut p = self.clone();
        let c = p.constant;
        p.constant = 0.0;
        (p, c)
    }

    /// Eliminates variable `index` by fixing it to `bit`.
    pub fn substitute(&self, index: usize, bit: bool) -> PBPoly {
        let idx = index as u32;
        let mut out = PBPoly::zero(self.registry.clone());
        out.constant = self.constant;
        for (k, &c) in &self.terms {
            match (k.binary_search(&idx).is_ok(), bit) {
                (false, _) => out.add_term_sorted(k, c),
                (true, false) => {}
                (true, true) => {
                    let reduced: Vec<u32> = k.iter().copied().filter(|&i| i != idx).collect();
                    out.add_term_sorted(&reduced, c);
                }
            }
        }
        out
    }

    /// Exact evaluation over a full assignment (indexed by variable index).
    pub fn evaluate(&self, assignment: &[bool]) -> Result<f64> {
        let mut total = self.constant;
        for (k, &c) in &self.terms {
            let mut all = true;
            for &i in k {
                let i = i as usize;
                if i >= assignment.len() {
                    return Err(Error::MissingVariable(i));
                }
                if !assignment[i] {
                    all = false;
                    break;
                }
            }
            if all {
                total += c;
            }
        }
        Ok(total)
    }

    /// Evaluation with the assignment packed into a `u64` (bit `i` = variable
    /// `i`). Callers guarantee all variable indices fit in the word.
    pub fn evaluate_bits(&self, bits: u64) -> f64 {
        let mut total = self.constant;
        for (k, &c) in &self.terms {
            if k.iter().all(|&i| bits >> i & 1 == 1) {
                total += c;
            }
        }
        total
    }

    /// Precomputes `(mask, coeff)` pairs for repeated `evaluate_bits`-style
    /// scans over many assignments.
    pub fn compile(&self) -> CompiledPoly {
        let terms = self
            .terms
            .iter()
            .map(|(k, &c)| {
                let mask = k.iter().fold(0u64, |m, &i| m | 1u64 << i);
                (mask, c)
            })
            .collect();
        CompiledPoly { terms, constant: self.constant }
    }

    /// Converts to Ising form via `x_i = (1 + z_i) / 2`.
    pub fn to_spin(&self) -> SpinPoly {
        let width = self.registry.len();
        let mut spin = SpinPoly::new(width);
        spin.constant = self.constant;
        // prod_{i in S} (1 + z_i)/2 = 2^-|S| * sum_{U subseteq S} prod_{i in U} z_i
        for (k, &c) in &self.terms {
            let n = k.len();
            let scale = c / (1u64 << n) as f64;
            let mut subset: Vec<u32> = Vec::with_capacity(n);
            for bits in 0..(1u64 << n) {
                subset.clear();
                for (pos, &i) in k.iter().enumerate() {
                    if bits >> pos & 1 == 1 {
                        subset.push(i);
                    }
                }
                spin.add_term(&subset, scale);
            }
        }
        spin
    }

    /// Text dump: one `coeff * name...` line per term, constant as a bare
    /// number. Round-trips through [`PBPoly::parse_dump`].
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if self.constant != 0.0 || self.terms.is_empty() {
            out.push_str(&format!("{}\n", self.constant));
        }
        for (k, c) in &self.terms {
            let names: Vec<String> =
                k.iter().map(|&i| self.registry.var(i as usize).to_string()).collect();
            out.push_str(&format!("{} * {}\n", c, names.join(" ")));
        }
        out
    }

    /// Parses the [`PBPoly::dump`] format against a known registry.
    pub fn parse_dump(text: &str, registry: Arc<VarRegistry>) -> Result<PBPoly> {
        let mut poly = PBPoly::zero(registry.clone());
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::PolyParse { line: lineno + 1, message };
            match line.split_once('*') {
                None => {
                    let c: f64 =
                        line.parse().map_err(|e| err(format!("bad constant `{line}`: {e}")))?;
                    poly.add_constant(c);
                }
                Some((coeff, names)) => {
                    let c: f64 = coeff
                        .trim()
                        .parse()
                        .map_err(|e| err(format!("bad coefficient `{}`: {e}", coeff.trim())))?;
                    let mut idxs = Vec::new();
                    for name in names.split_whitespace() {
                        let var = VarId::parse(name)
                            .ok_or_else(|| err(format!("bad variable `{name}`")))?;
                        let idx = registry
                            .index_of(&var)
                            .ok_or_else(|| err(format!("unregistered variable `{name}`")))?;
                        idxs.push(idx as u32);
                    }
                    if idxs.is_empty() {
                        return Err(err("term with no variables".into()));
                    }
                    poly.add_term(&idxs, c);
                }
            }
        }
        Ok(poly)
    }
}

fn merge_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Term masks + coefficients for fast evaluation over packed assignments.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    pub terms: Vec<(u64, f64)>,
    pub constant: f64,
}

impl CompiledPoly {
    pub fn evaluate(&self, bits: u64) -> f64 {
        let mut total = self.constant;
        for &(mask, c) in &self.terms {
            if bits & mask == mask {
                total += c;
            }
        }
        total
    }
}

/// Ising-form polynomial: weighted products of spin variables `z_i` over
/// qubit indices, plus a tracked constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPoly {
    width: usize,
    terms: std::collections::BTreeMap<Vec<u32>, f64>,
    constant: f64,
}

impl SpinPoly {
    pub fn new(width: usize) -> Self {
        Self { width, terms: Default::default(), constant: 0.0 }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn constant_part(&self) -> f64 {
        self.constant
    }

    pub fn set_constant(&mut self, c: f64) {
        self.constant = c;
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    /// Adds `coeff * prod(z_i)`; repeated indices cancel via `z_i^2 = 1`.
    pub fn add_term(&mut self, vars: &[u32], coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let mut key = vars.to_vec();
        key.sort_unstable();
        // z^2 = 1: remove index pairs.
        let mut reduced: Vec<u32> = Vec::with_capacity(key.len());
        for v in key {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        debug_assert!(reduced.iter().all(|&i| (i as usize) < self.width));
        if reduced.is_empty() {
            self.constant += coeff;
            return;
        }
        let entry = self.terms.entry(reduced.clone()).or_insert(0.0);
        *entry += coeff;
        if entry.abs() <= COEFF_EPS {
            self.terms.remove(&reduced);
        }
    }

    /// Evaluation at spin values `z in {-1, +1}` indexed by qubit.
    pub fn evaluate(&self, spins: &[f64]) -> f64 {
        let mut total = self.constant;
        for (k, &c) in &self.terms {
            let prod: f64 = k.iter().map(|&i| spins[i as usize]).product();
            total += c * prod;
        }
        total
    }

    /// Evaluation at the spin image `z_i = 2 b_i - 1` of a packed bitstring.
    pub fn evaluate_bits(&self, bits: u64) -> f64 {
        let mut total = self.constant;
        for (k, &c) in &self.terms {
            let zeros = k.iter().filter(|&&i| bits >> i & 1 == 0).count();
            let sign = if zeros % 2 == 0 { 1.0 } else { -1.0 };
            total += c * sign;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(n: usize) -> Arc<VarRegistry> {
        VarRegistry::anonymous(n)
    }

    fn x(r: &Arc<VarRegistry>, i: usize) -> PBPoly {
        PBPoly::var(r.clone(), i)
    }

    #[test]
    fn add_identity_and_cancellation() {
        let r = reg(3);
        let p = x(&r, 0).add(&x(&r, 1).scale(3.0)).unwrap();
        let zero = PBPoly::zero(r.clone());
        let q = p.add(&zero).unwrap();
        assert_eq!(q.term_count(), p.term_count());
        for b in 0..8u64 {
            assert_eq!(p.evaluate_bits(b), q.evaluate_bits(b));
        }

        let cancelled = x(&r, 0).add(&x(&r, 0).scale(-1.0)).unwrap();
        assert!(cancelled.is_zero());
        assert_eq!(cancelled.term_count(), 0);
    }

    #[test]
    fn scale_distributes_over_constant() {
        let r = reg(2);
        let mut p = x(&r, 0).multiply(&x(&r, 1)).unwrap();
        p.add_constant(3.0);
        let q = p.scale(2.0);
        assert_eq!(q.constant_part(), 6.0);
        assert_eq!(q.evaluate(&[true, true]).unwrap(), 8.0);
    }

    #[test]
    fn square_applies_idempotence() {
        // (x0 + x1)^2 = x0 + x1 + 2 x0 x1
        let r = reg(2);
        let s = x(&r, 0).add(&x(&r, 1)).unwrap();
        let sq = s.square();
        assert_eq!(sq.degree(), 2);
        assert_eq!(sq.evaluate(&[true, false]).unwrap(), 1.0);
        assert_eq!(sq.evaluate(&[true, true]).unwrap(), 4.0);
        assert_eq!(sq.term_count(), 3);
    }

    #[test]
    fn product_of_overlapping_terms() {
        // (x0 x1) * (x1 x2) = x0 x1 x2
        let r = reg(3);
        let a = x(&r, 0).multiply(&x(&r, 1)).unwrap();
        let b = x(&r, 1).multiply(&x(&r, 2)).unwrap();
        let p = a.multiply(&b).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.term_count(), 1);
        assert_eq!(p.evaluate(&[true, true, true]).unwrap(), 1.0);
        assert_eq!(p.evaluate(&[true, false, true]).unwrap(), 0.0);
    }

    #[test]
    fn registry_mismatch_rejected() {
        let a = PBPoly::var(reg(2), 0);
        let b = PBPoly::var(reg(3), 0);
        assert!(matches!(a.add(&b), Err(Error::RegistryMismatch)));
        assert!(matches!(a.multiply(&b), Err(Error::RegistryMismatch)));
    }

    #[test]
    fn drop_constant_behaviour() {
        let r = reg(2);
        let c = PBPoly::constant(r.clone(), 5.5);
        let (p, dropped) = c.drop_constant();
        assert!(p.is_zero());
        assert_eq!(dropped, 5.5);

        let q = x(&r, 0);
        let (q2, d2) = q.drop_constant();
        assert_eq!(d2, 0.0);
        assert_eq!(q2.evaluate(&[true, false]).unwrap(), 1.0);
    }

    #[test]
    fn drop_constant_preserves_argmin() {
        // Exhaustive check on a handful of assorted polynomials.
        let r = reg(4);
        let mut p = PBPoly::constant(r.clone(), -7.25);
        p.add_term(&[0], 2.0);
        p.add_term(&[1, 2], -3.0);
        p.add_term(&[0, 2, 3], 1.5);
        let (q, dropped) = p.drop_constant();
        let argmin = |f: &PBPoly| {
            (0..16u64)
                .min_by(|&a, &b| f.evaluate_bits(a).partial_cmp(&f.evaluate_bits(b)).unwrap())
                .unwrap()
        };
        assert_eq!(argmin(&p), argmin(&q));
        for b in 0..16u64 {
            assert!((p.evaluate_bits(b) - (q.evaluate_bits(b) + dropped)).abs() < 1e-12);
        }
    }

    #[test]
    fn substitute_fixes_variables() {
        let r = reg(2);
        let p = x(&r, 0).multiply(&x(&r, 1)).unwrap();
        let one = p.substitute(0, true);
        assert_eq!(one.evaluate(&[false, true]).unwrap(), 1.0);
        assert_eq!(one.degree(), 1);
        let zero = p.substitute(0, false);
        assert!(zero.is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let r = reg(2);
        let mut p = x(&r, 0);
        p.add_term(&[0, 1], 2.0);
        assert_eq!(p.evaluate(&[false, false]).unwrap(), 0.0);
        assert_eq!(p.evaluate(&[true, true]).unwrap(), 3.0);
        assert!(matches!(p.evaluate(&[true]), Err(Error::MissingVariable(1))));
    }

    #[test]
    fn to_spin_single_variable() {
        // x0 -> z0/2 + 1/2
        let r = reg(1);
        let s = x(&r, 0).to_spin();
        assert_eq!(s.constant_part(), 0.5);
        let coeffs: Vec<(&[u32], f64)> = s.terms().collect();
        assert_eq!(coeffs, vec![(&[0u32][..], 0.5)]);
    }

    #[test]
    fn to_spin_pair() {
        // x0 x1 -> (1 + z0 + z1 + z0 z1) / 4
        let r = reg(2);
        let s = x(&r, 0).multiply(&x(&r, 1)).unwrap().to_spin();
        assert_eq!(s.constant_part(), 0.25);
        assert_eq!(s.term_count(), 3);
        for (_, c) in s.terms() {
            assert_eq!(c, 0.25);
        }
    }

    #[test]
    fn spin_matches_binary_exhaustively() {
        let r = reg(5);
        let mut p = PBPoly::constant(r.clone(), 1.25);
        p.add_term(&[0], -2.0);
        p.add_term(&[1, 3], 4.0);
        p.add_term(&[0, 2, 4], -0.5);
        p.add_term(&[1, 2, 3, 4], 3.0);
        let s = p.to_spin();
        assert!(s.degree() <= p.degree());
        for b in 0..32u64 {
            let spins: Vec<f64> =
                (0..5).map(|i| if b >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
            assert!((p.evaluate_bits(b) - s.evaluate(&spins)).abs() < 1e-9);
            assert!((p.evaluate_bits(b) - s.evaluate_bits(b)).abs() < 1e-9);
        }
    }

    #[test]
    fn dump_round_trips() {
        let mut reg = VarRegistry::new();
        let a = reg.register(VarId::QuboEdge { from: "A".into(), to: "1".into(), step: 1 });
        let b = reg.register(VarId::HuboNode { node: "2".into(), step: 3 });
        let z = reg.register(VarId::Slack { j: 0 });
        let reg = Arc::new(reg);
        let mut p = PBPoly::constant(reg.clone(), -3.75);
        p.add_term(&[a as u32], 2.5);
        p.add_term(&[a as u32, b as u32, z as u32], -1.0);
        let text = p.dump();
        let q = PBPoly::parse_dump(&text, reg).unwrap();
        for bits in 0..8u64 {
            assert_eq!(p.evaluate_bits(bits), q.evaluate_bits(bits));
        }
        assert_eq!(text, q.dump());
    }

    #[test]
    fn varid_display_parse() {
        let ids = vec![
            VarId::QuboEdge { from: "A".into(), to: "B".into(), step: 4 },
            VarId::HuboNode { node: "7".into(), step: 2 },
            VarId::Slack { j: 5 },
        ];
        for id in ids {
            assert_eq!(VarId::parse(&id.to_string()), Some(id));
        }
        assert_eq!(VarId::parse("junk"), None);
    }
}
