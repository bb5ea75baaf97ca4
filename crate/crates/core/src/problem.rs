//! Asset-retrieval problem instances and the classical graph pre-processing:
//! all-pairs shortest paths, internal-graph completion, and infeasible
//! variable pruning.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index into [`ProblemInstance`]. Index 0 is the start node,
/// the last index is the end node, internal nodes sit in between in their
/// declared order.
pub type NodeIdx = usize;

/// A weighted undirected graph with a start node `A`, an end node `B`,
/// asset-bearing internal nodes, integer edge traversal times, and a
/// deadline `T`. Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    names: Vec<String>,
    asset_values: Vec<f64>,
    /// Unordered pairs keyed as (min, max), no self-loops.
    edges: BTreeMap<(NodeIdx, NodeIdx), u32>,
    deadline: u32,
}

/// On-disk JSON form of an instance. Unknown keys are rejected.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub nodes: Vec<NodeSpec>,
    pub start: String,
    pub end: String,
    pub edges: Vec<EdgeSpec>,
    pub deadline: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    pub asset_value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    pub time: u32,
}

fn valid_id(id: &str) -> bool {
    // Node ids get embedded in variable names like `edge(u,v,3)`.
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl ProblemInstance {
    /// Builds and validates an instance. `internal` keeps its given order;
    /// edges are `(u, v, time)` over node ids.
    pub fn new(
        start: &str,
        end: &str,
        internal: &[(String, f64)],
        edges: &[(String, String, u32)],
        deadline: u32,
    ) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidInstance(msg);
        if start == end {
            return Err(invalid("start and end must differ".into()));
        }
        if deadline == 0 {
            return Err(invalid("deadline must be at least 1".into()));
        }
        let mut names = Vec::with_capacity(internal.len() + 2);
        let mut asset_values = Vec::with_capacity(internal.len() + 2);
        names.push(start.to_string());
        asset_values.push(0.0);
        for (id, value) in internal {
            if id == start || id == end {
                return Err(invalid(format!("internal node `{id}` duplicates start or end")));
            }
            if !value.is_finite() || *value < 0.0 {
                return Err(invalid(format!("asset value of `{id}` must be non-negative")));
            }
            names.push(id.clone());
            asset_values.push(*value);
        }
        names.push(end.to_string());
        asset_values.push(0.0);

        for name in &names {
            if !valid_id(name) {
                return Err(invalid(format!(
                    "node id `{name}` must be non-empty and use only [A-Za-z0-9_-]"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.clone()) {
                return Err(invalid(format!("duplicate node id `{name}`")));
            }
        }

        let index_of = |id: &str| -> Result<NodeIdx> {
            names
                .iter()
                .position(|n| n == id)
                .ok_or_else(|| Error::InvalidInstance(format!("edge references unknown node `{id}`")))
        };
        let mut edge_map = BTreeMap::new();
        for (u, v, time) in edges {
            let ui = index_of(u)?;
            let vi = index_of(v)?;
            if ui == vi {
                return Err(invalid(format!("self-loop on `{u}` is not allowed")));
            }
            if *time < 1 {
                return Err(invalid(format!("edge {u}-{v} must have time >= 1")));
            }
            let key = (ui.min(vi), ui.max(vi));
            if let Some(prev) = edge_map.insert(key, *time) {
                if prev != *time {
                    return Err(invalid(format!("conflicting duplicate edge {u}-{v}")));
                }
            }
        }

        let instance = Self { names, asset_values, edges: edge_map, deadline };
        instance.check_connected()?;
        Ok(instance)
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.names.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if !seen[v] && self.time_between(u, v).is_some() {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            None => Ok(()),
            Some(u) => Err(Error::UnreachableNode(self.names[u].clone())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("bad instance file: {e}")))?;
        Self::try_from(file)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            nodes: self
                .names
                .iter()
                .zip(&self.asset_values)
                .map(|(id, &asset_value)| NodeSpec { id: id.clone(), asset_value })
                .collect(),
            start: self.start_name().to_string(),
            end: self.end_name().to_string(),
            edges: self
                .edges
                .iter()
                .map(|(&(u, v), &time)| EdgeSpec {
                    u: self.names[u].clone(),
                    v: self.names[v].clone(),
                    time,
                })
                .collect(),
            deadline: self.deadline,
        };
        serde_json::to_string_pretty(&file).expect("instance serializes")
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn start(&self) -> NodeIdx {
        0
    }

    pub fn end(&self) -> NodeIdx {
        self.names.len() - 1
    }

    pub fn start_name(&self) -> &str {
        &self.names[0]
    }

    pub fn end_name(&self) -> &str {
        &self.names[self.names.len() - 1]
    }

    pub fn name(&self, u: NodeIdx) -> &str {
        &self.names[u]
    }

    pub fn index_of(&self, name: &str) -> Option<NodeIdx> {
        self.names.iter().position(|n| n == name)
    }

    /// Internal (asset) node indices, in declaration order.
    pub fn internal(&self) -> impl Iterator<Item = NodeIdx> + Clone {
        1..self.names.len() - 1
    }

    pub fn internal_count(&self) -> usize {
        self.names.len() - 2
    }

    pub fn is_internal(&self, u: NodeIdx) -> bool {
        u != self.start() && u != self.end()
    }

    pub fn asset_value(&self, u: NodeIdx) -> f64 {
        self.asset_values[u]
    }

    pub fn deadline(&self) -> u32 {
        self.deadline
    }

    /// Traversal time of the edge between `u` and `v`, if present. The end
    /// node carries an implicit zero-time self-loop so routes can wait there.
    pub fn time_between(&self, u: NodeIdx, v: NodeIdx) -> Option<u32> {
        if u == v {
            return (u == self.end()).then_some(0);
        }
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = ((NodeIdx, NodeIdx), u32)> + '_ {
        self.edges.iter().map(|(&k, &t)| (k, t))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbourhood of `u` over declared edges (the self-loop excluded).
    pub fn neighbors(&self, u: NodeIdx) -> Vec<NodeIdx> {
        (0..self.node_count()).filter(|&v| v != u && self.time_between(u, v).is_some()).collect()
    }

    pub fn max_asset_value(&self) -> f64 {
        self.internal().map(|u| self.asset_values[u]).fold(0.0, f64::max)
    }
}

impl TryFrom<InstanceFile> for ProblemInstance {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        let mut internal = Vec::new();
        let mut start_value = None;
        let mut end_value = None;
        for node in &file.nodes {
            if node.id == file.start {
                start_value = Some(node.asset_value);
            } else if node.id == file.end {
                end_value = Some(node.asset_value);
            } else {
                internal.push((node.id.clone(), node.asset_value));
            }
        }
        let start_value = start_value
            .ok_or_else(|| Error::InvalidInstance("start node missing from node list".into()))?;
        let end_value = end_value
            .ok_or_else(|| Error::InvalidInstance("end node missing from node list".into()))?;
        if start_value != 0.0 || end_value != 0.0 {
            return Err(Error::InvalidInstance("start and end must have asset value 0".into()));
        }
        let edges: Vec<(String, String, u32)> =
            file.edges.iter().map(|e| (e.u.clone(), e.v.clone(), e.time)).collect();
        ProblemInstance::new(&file.start, &file.end, &internal, &edges, file.deadline)
    }
}

/// All-pairs shortest traversal times.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    dist: Vec<Vec<u32>>,
}

impl DistanceTable {
    pub fn get(&self, u: NodeIdx, v: NodeIdx) -> u32 {
        self.dist[u][v]
    }

    pub fn node_count(&self) -> usize {
        self.dist.len()
    }
}

/// Dijkstra from every node over the instance's declared edges.
pub fn shortest_paths(instance: &ProblemInstance) -> Result<DistanceTable> {
    let n = instance.node_count();
    let mut dist = vec![vec![u32::MAX; n]; n];
    for source in 0..n {
        let row = &mut dist[source];
        row[source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(std::cmp::Reverse((0u32, source)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if d > row[u] {
                continue;
            }
            for v in 0..n {
                if v == u {
                    continue;
                }
                if let Some(t) = instance.time_between(u, v) {
                    let nd = d + t;
                    if nd < row[v] {
                        row[v] = nd;
                        heap.push(std::cmp::Reverse((nd, v)));
                    }
                }
            }
        }
        if let Some(v) = row.iter().position(|&d| d == u32::MAX) {
            return Err(Error::UnreachableNode(instance.name(v).to_string()));
        }
    }
    Ok(DistanceTable { dist })
}

/// Returns an instance where every node pair is joined by an edge whose time
/// is the shortest-path time, so retracing through already-used nodes is
/// implicitly allowed.
pub fn complete_internal_graph(
    instance: &ProblemInstance,
    dist: &DistanceTable,
) -> ProblemInstance {
    let mut completed = instance.clone();
    let n = instance.node_count();
    for u in 0..n {
        for v in u + 1..n {
            completed.edges.insert((u, v), dist.get(u, v));
        }
    }
    completed
}

/// Which (variable, step) combinations survive feasibility pruning.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasibilityMask {
    hubo: BTreeSet<(NodeIdx, u32)>,
    qubo: BTreeSet<(NodeIdx, NodeIdx, u32)>,
}

impl FeasibilityMask {
    pub fn hubo_allowed(&self, node: NodeIdx, step: u32) -> bool {
        self.hubo.contains(&(node, step))
    }

    pub fn qubo_allowed(&self, from: NodeIdx, to: NodeIdx, step: u32) -> bool {
        self.qubo.contains(&(from, to, step))
    }

    pub fn hubo_entries(&self) -> impl Iterator<Item = &(NodeIdx, u32)> {
        self.hubo.iter()
    }

    pub fn qubo_entries(&self) -> impl Iterator<Item = &(NodeIdx, NodeIdx, u32)> {
        self.qubo.iter()
    }

    pub fn hubo_len(&self) -> usize {
        self.hubo.len()
    }

    pub fn qubo_len(&self) -> usize {
        self.qubo.len()
    }
}

/// A completed instance together with its distance table and pruning mask,
/// ready for formulation building.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub instance: std::sync::Arc<ProblemInstance>,
    pub dist: DistanceTable,
    pub mask: FeasibilityMask,
}

/// Runs the full classical pre-processing pipeline: all-pairs shortest
/// paths, graph completion, and variable pruning.
pub fn prepare(raw: &ProblemInstance) -> Result<Prepared> {
    let dist = shortest_paths(raw)?;
    let completed = complete_internal_graph(raw, &dist);
    let mask = prune_variables(&completed, &dist);
    Ok(Prepared { instance: std::sync::Arc::new(completed), dist, mask })
}

/// Removes variables that cannot appear in any completed route: a position
/// is kept only if it can be reached by its step and still leaves enough
/// time to finish by the deadline. Expects a completed instance.
pub fn prune_variables(instance: &ProblemInstance, dist: &DistanceTable) -> FeasibilityMask {
    let t_limit = instance.deadline();
    let a = instance.start();
    let b = instance.end();
    let mut mask = FeasibilityMask::default();

    // HUBO positions x_u^{(i)}, u != A, i in 1..T-1.
    for u in 0..instance.node_count() {
        if u == a {
            continue;
        }
        for i in 1..t_limit {
            if dist.get(a, u) <= i && i + dist.get(u, b) <= t_limit {
                mask.hubo.insert((u, i));
            }
        }
    }

    // QUBO edge-steps x_{u,v}^{(i)}, both orientations of every edge,
    // i in 1..=T. The end node's zero-time self-loop is kept whenever the
    // end is reachable by step i-1; it is the "remain at B" padding.
    for ((p, q), _) in instance.edge_pairs() {
        for (u, v) in [(p, q), (q, p)] {
            for i in 1..=t_limit {
                if dist.get(a, u) <= i - 1 && i + dist.get(v, b) <= t_limit {
                    mask.qubo.insert((u, v, i));
                }
            }
        }
    }
    for i in 1..=t_limit {
        if dist.get(a, b) <= i - 1 {
            mask.qubo.insert((b, b, i));
        }
    }
    mask
}
