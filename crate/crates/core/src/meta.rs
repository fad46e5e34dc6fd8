//! Metagraphs, the graphical reduced-stabilizer rule, neighborsets,
//! marginal-orbit signatures, and LC-preserving graph condensation.

use crate::graph::{Graph, NodeSet};
use crate::stab::{marginal_dimension, stab_element, PauliString, ReducedStabilizer};
use crate::{Error, Result};
use std::fmt::Write as _;

/// Metagraphs enumerate all non-empty subsets of `m` as type-2 nodes.
pub const MAX_METAGRAPH_NODES: usize = 12;

/// The metagraph of a marginal `M`: the type-1 nodes are `M` with the
/// induced edges; each non-empty subset `w ⊆ M` is a type-2 node, connected
/// to exactly the type-1 nodes of its label iff some external node `v` has
/// `N_v ∩ M = w` (otherwise it remains isolated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metagraph {
    pub m: NodeSet,
    /// `(label, connected)` for every non-empty subset of `m`, in ascending
    /// mask order; `2^|m| - 1` entries.
    pub type2: Vec<(NodeSet, bool)>,
    /// the host graph restricted to edges inside `m` (full node count kept,
    /// so stabilizer elements come out on the original qubits)
    pub inner: Graph,
}

pub fn build_metagraph(g: &Graph, m: NodeSet) -> Result<Metagraph> {
    if m.is_empty() || m == NodeSet::full(g.n()) {
        return Err(Error::EmptySet);
    }
    if m.len() > MAX_METAGRAPH_NODES {
        return Err(Error::SetTooLarge(m.len(), MAX_METAGRAPH_NODES));
    }
    let outside = NodeSet::full(g.n()).difference(m);
    let mut witnessed: Vec<NodeSet> = outside
        .iter()
        .map(|v| g.neighborhood(v).map(|nv| nv.intersection(m)))
        .collect::<Result<_>>()?;
    witnessed.retain(|w| !w.is_empty());
    let type2 = m
        .nonempty_subsets()
        .map(|w| (w, witnessed.contains(&w)))
        .collect();
    let mut inner = Graph::empty(g.n())?;
    for (i, j) in g.edges() {
        if m.contains(i) && m.contains(j) {
            inner.add_edge(i, j)?;
        }
    }
    Ok(Metagraph { m, type2, inner })
}

/// The reduced stabilizer read directly off the metagraph (the parity rule):
/// `g_L ∈ S_M` iff `|L ∩ w|` is even for every connected type-2 node `w`.
/// Elements are realized as Pauli strings over the inner edges.
pub fn metagraph_stabilizer(mg: &Metagraph) -> Result<ReducedStabilizer> {
    if mg.m.len() > 20 {
        return Err(Error::SetTooLarge(mg.m.len(), 20));
    }
    let connected: Vec<NodeSet> =
        mg.type2.iter().filter(|(_, c)| *c).map(|(w, _)| *w).collect();
    let mut elements = vec![PauliString::identity(mg.inner.n())];
    for l in mg.m.nonempty_subsets() {
        if connected.iter().all(|w| l.intersection(*w).len() % 2 == 0) {
            elements.push(stab_element(&mg.inner, l));
        }
    }
    debug_assert!(elements.len().is_power_of_two());
    let dim = elements.len().trailing_zeros() as usize;
    Ok(ReducedStabilizer { marginal: mg.m, elements, dim })
}

/// Neighborsets of a condensation set `C`: `N̂_B = {v ∉ C : N_v ∩ C = B}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborsetMap {
    pub c: NodeSet,
    /// `(B, N̂_B)` for every non-empty `B ⊆ C` with non-empty `N̂_B`,
    /// ascending mask order
    pub entries: Vec<(NodeSet, NodeSet)>,
}

impl NeighborsetMap {
    pub fn nonempty_count(&self) -> usize {
        self.entries.len()
    }
}

pub fn neighborsets(g: &Graph, c: NodeSet) -> Result<NeighborsetMap> {
    if c.is_empty() || c == NodeSet::full(g.n()) {
        return Err(Error::EmptySet);
    }
    let outside = NodeSet::full(g.n()).difference(c);
    let mut entries: Vec<(NodeSet, NodeSet)> = Vec::new();
    for v in outside.iter() {
        let b = g.neighborhood(v)?.intersection(c);
        if b.is_empty() {
            continue;
        }
        match entries.iter_mut().find(|(label, _)| *label == b) {
            Some((_, set)) => set.insert(v),
            None => entries.push((b, NodeSet::single(v))),
        }
    }
    entries.sort_by_key(|(b, _)| b.0);
    Ok(NeighborsetMap { c, entries })
}

/// A condensed graph together with the old-index → new-index map
/// (every node of `C` maps to the condensed node, which sits at the last
/// index; surviving nodes keep their relative order).
#[derive(Clone, Debug)]
pub struct Condensation {
    pub graph: Graph,
    pub map: Vec<usize>,
}

pub fn condense(g: &Graph, c: NodeSet) -> Result<Condensation> {
    if c.is_empty() || c == NodeSet::full(g.n()) {
        return Err(Error::EmptySet);
    }
    let survivors: Vec<usize> = (0..g.n()).filter(|&v| !c.contains(v)).collect();
    let c_new = survivors.len();
    let mut map = vec![c_new; g.n()];
    for (new, &old) in survivors.iter().enumerate() {
        map[old] = new;
    }
    let mut graph = Graph::empty(c_new + 1)?;
    for (i, j) in g.edges() {
        let (a, b) = (map[i], map[j]);
        if a != b {
            graph.add_edge(a, b)?;
        }
    }
    Ok(Condensation { graph, map })
}

/// Sequential condensation of pairwise disjoint sets, processed in
/// ascending-minimum-index order. Returns the final graph and the composed
/// index map.
pub fn condense_all(g: &Graph, sets: &[NodeSet]) -> Result<Condensation> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if !a.intersection(*b).is_empty() {
                return Err(Error::Unsupported(
                    "condensation sets must be pairwise disjoint".into(),
                ));
            }
        }
    }
    let mut order: Vec<NodeSet> = sets.to_vec();
    order.sort_by_key(|s| s.min_node());
    let mut cur = Condensation { graph: g.clone(), map: (0..g.n()).collect() };
    for c in order {
        let image = NodeSet(c.iter().fold(0u32, |acc, v| acc | 1 << cur.map[v]));
        let step = condense(&cur.graph, image)?;
        cur = Condensation {
            graph: step.graph,
            map: cur.map.iter().map(|&v| step.map[v]).collect(),
        };
    }
    Ok(cur)
}

/// Which (if any) known rule certifies that condensing `C` preserves
/// LC-equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CondensationRule {
    /// two-node special case of `DimCMinus1`; never reported by
    /// [`condensable`], which folds it into the general rule
    TwoNodeDim1,
    /// `d_C = |C| - 1`, equivalently exactly one non-empty neighborset;
    /// proven LC-preserving
    DimCMinus1,
    /// every node of `C` has at most one neighbor outside `C`; conjectured
    /// only — always [`experimental`](CondensationRule::experimental)
    SingleExternalNeighbor,
    None,
}

impl CondensationRule {
    /// True for rules that rest on a conjecture rather than a proof.
    pub fn experimental(self) -> bool {
        self == CondensationRule::SingleExternalNeighbor
    }
}

pub fn condensable(g: &Graph, c: NodeSet) -> Result<CondensationRule> {
    if c.is_empty() || c == NodeSet::full(g.n()) {
        return Err(Error::EmptySet);
    }
    if marginal_dimension(g, c)? == c.len() - 1 {
        return Ok(CondensationRule::DimCMinus1);
    }
    let single_external = c
        .iter()
        .map(|v| Ok(g.neighborhood(v)?.difference(c).len()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|&d| d <= 1);
    if single_external {
        return Ok(CondensationRule::SingleExternalNeighbor);
    }
    Ok(CondensationRule::None)
}

/// The multiset `{d_N : ∅ ≠ N ⊆ m}`, grouped by subset size (descending)
/// with each group sorted descending. Equal signatures are necessary for
/// two marginals to be in the same marginal orbit; for `|m| ≤ 3` the
/// partition it induces is also complete, which is why larger sets are
/// rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarginalOrbitSignature {
    /// `(subset size, sorted d-values)`, sizes descending
    pub by_size: Vec<(usize, Vec<usize>)>,
}

impl std::fmt::Display for MarginalOrbitSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let groups: Vec<String> = self
            .by_size
            .iter()
            .map(|(_, ds)| {
                ds.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            })
            .collect();
        write!(f, "({})", groups.join("; "))
    }
}

pub fn marginal_orbit_signature(g: &Graph, m: NodeSet) -> Result<MarginalOrbitSignature> {
    if m.is_empty() {
        return Err(Error::EmptySet);
    }
    if m.len() > 3 {
        return Err(Error::SetTooLarge(m.len(), 3));
    }
    let mut by_size: Vec<(usize, Vec<usize>)> =
        (1..=m.len()).rev().map(|s| (s, Vec::new())).collect();
    for sub in m.nonempty_subsets() {
        let d = marginal_dimension(g, sub)?;
        by_size[m.len() - sub.len()].1.push(d);
    }
    for (_, ds) in &mut by_size {
        ds.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok(MarginalOrbitSignature { by_size })
}

/// DOT rendering of a plain graph (1-based node labels).
pub fn graph_dot(g: &Graph) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  n{};", v + 1);
    }
    for (i, j) in g.edges() {
        let _ = writeln!(out, "  n{} -- n{};", i + 1, j + 1);
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a metagraph: type-1 nodes as circles with the induced
/// edges, type-2 nodes as boxed bracketed labels, isolated ones included.
pub fn metagraph_dot(mg: &Metagraph) -> String {
    let mut out = String::from("graph {\n");
    for v in mg.m.iter() {
        let _ = writeln!(out, "  n{};", v + 1);
    }
    for (i, j) in mg.inner.edges() {
        let _ = writeln!(out, "  n{} -- n{};", i + 1, j + 1);
    }
    for (w, connected) in &mg.type2 {
        let id = format!("t{}", w.0);
        let label: Vec<String> = w.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(out, "  {id} [shape=box, label=\"[{{{}}}]\"];", label.join(","));
        if *connected {
            for v in w.iter() {
                let _ = writeln!(out, "  {id} -- n{};", v + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}
