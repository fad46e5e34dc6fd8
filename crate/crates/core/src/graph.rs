//! Labeled simple graphs on up to 32 nodes, stored as neighborhood bitmasks.
//!
//! Includes graph6 and edge-list serialization, connectivity, and an exact
//! canonical labeling for isomorphism-class comparisons.

use crate::{Error, Result};
use std::fmt;

/// Largest supported node count; a [`NodeSet`] must fit one `u32`.
pub const MAX_NODES: usize = 32;

/// Exact canonical labeling is limited to this many nodes.
pub const MAX_CANON_NODES: usize = 12;

/// A subset of the nodes `0..n-1`, as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(pub u32);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(n: usize) -> NodeSet {
        debug_assert!(n <= MAX_NODES);
        if n == 32 { NodeSet(!0) } else { NodeSet((1u32 << n) - 1) }
    }

    pub fn single(i: usize) -> NodeSet {
        NodeSet(1 << i)
    }

    pub fn from_nodes(nodes: &[usize]) -> NodeSet {
        NodeSet(nodes.iter().fold(0, |m, &i| m | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_node(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Iterate node indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                i
            })
        })
    }

    /// All non-empty subsets, in ascending bit-pattern order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = NodeSet> {
        let full = self.0;
        let mut cur = 0u32;
        let mut done = full == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            cur = cur.wrapping_sub(full) & full;
            if cur == full {
                done = true;
            }
            Some(NodeSet(cur))
        })
    }
}

impl fmt::Display for NodeSet {
    /// 1-based node labels, e.g. `{1,3,4}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// A labeled simple graph: `adj[i]` is the neighborhood bitmask of node `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Graph> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::TooManyNodes(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Rebuild from raw neighborhood masks; symmetry and zero diagonal are
    /// checked.
    pub fn from_adj(adj: Vec<u32>) -> Result<Graph> {
        let n = adj.len();
        if n == 0 || n > MAX_NODES {
            return Err(Error::TooManyNodes(n));
        }
        let full = NodeSet::full(n).0;
        for i in 0..n {
            if adj[i] & !full != 0 || adj[i] >> i & 1 == 1 {
                return Err(Error::InvalidAdjacency);
            }
            for j in 0..i {
                if adj[i] >> j & 1 != adj[j] >> i & 1 {
                    return Err(Error::InvalidAdjacency);
                }
            }
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adj(&self) -> &[u32] {
        &self.adj
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::NodeOutOfRange { node: i.max(j), n: self.n });
        }
        if i == j {
            return Err(Error::InvalidAdjacency);
        }
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
        Ok(())
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    /// The neighborhood of node `i` as a set.
    pub fn neighborhood(&self, i: usize) -> Result<NodeSet> {
        if i >= self.n {
            return Err(Error::NodeOutOfRange { node: i, n: self.n });
        }
        Ok(NodeSet(self.adj[i]))
    }

    /// Nodes outside `m` adjacent to at least one node of `m`.
    pub fn set_neighborhood(&self, m: NodeSet) -> NodeSet {
        let mut acc = 0u32;
        for i in m.iter() {
            acc |= self.adj[i];
        }
        NodeSet(acc & !m.0)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1u32;
        loop {
            let mut next = seen;
            let mut frontier = seen;
            while frontier != 0 {
                let i = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                next |= self.adj[i];
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen == NodeSet::full(self.n).0
    }

    /// Relabel nodes: node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u32; self.n];
        for v in 0..self.n {
            let mut m = self.adj[v];
            let mut img = 0u32;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                img |= 1 << perm[w];
            }
            adj[perm[v]] = img;
        }
        Graph { n: self.n, adj }
    }

    /// Upper-triangle bit encoding, usable as a compact dedup key for
    /// `n <= 16`.
    pub fn triangle_key(&self) -> u128 {
        debug_assert!(self.n <= 16);
        let mut key = 0u128;
        let mut bit = 0;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    key |= 1u128 << bit;
                }
                bit += 1;
            }
        }
        key
    }

    pub fn from_triangle_key(n: usize, key: u128) -> Graph {
        debug_assert!(n <= 16);
        let mut adj = vec![0u32; n];
        let mut bit = 0;
        for j in 1..n {
            for i in 0..j {
                if key >> bit & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
                bit += 1;
            }
        }
        Graph { n, adj }
    }
}

// ---------------------------------------------------------------------------
// fixtures

/// Star with node 0 as the center.
pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::from_edges(n, &edges).expect("valid star")
}

/// Path 0-1-...-(n-1).
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("valid path")
}

/// Cycle on n nodes (n >= 3).
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges).expect("valid complete graph")
}

// ---------------------------------------------------------------------------
// graph6

/// Decode a single graph6 line (n <= 32).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse { offset: 0, reason: "empty graph6 input".into() });
    }
    let header = bytes[0];
    if header == b'~' {
        return Err(Error::Parse {
            offset: 0,
            reason: "graph6 long-form header (n > 62) not supported".into(),
        });
    }
    if !(63..=126).contains(&header) {
        return Err(Error::Parse {
            offset: 0,
            reason: format!("invalid graph6 header byte 0x{header:02x}"),
        });
    }
    let n = (header - 63) as usize;
    if n == 0 || n > MAX_NODES {
        return Err(Error::Parse {
            offset: 0,
            reason: format!("node count {n} outside supported range 1..=32"),
        });
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < 1 + nbytes {
        return Err(Error::Parse {
            offset: bytes.len(),
            reason: format!("truncated bit section: expected {nbytes} data bytes"),
        });
    }
    if bytes.len() > 1 + nbytes {
        return Err(Error::Parse {
            offset: 1 + nbytes,
            reason: "trailing garbage after graph6 data".into(),
        });
    }
    let mut g = Graph::empty(n)?;
    let mut bit = 0usize;
    for (k, &b) in bytes[1..].iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::Parse {
                offset: 1 + k,
                reason: format!("invalid graph6 data byte 0x{b:02x}"),
            });
        }
        let v = b - 63;
        for s in (0..6).rev() {
            if bit >= nbits {
                if v >> s & 1 == 1 {
                    return Err(Error::Parse {
                        offset: 1 + k,
                        reason: "nonzero padding bits".into(),
                    });
                }
                continue;
            }
            if v >> s & 1 == 1 {
                let (i, j) = triangle_pos(bit);
                g.add_edge(i, j)?;
            }
            bit += 1;
        }
    }
    Ok(g)
}

/// bit index -> (row, column) in column-major upper-triangle order
fn triangle_pos(bit: usize) -> (usize, usize) {
    let mut j = 1;
    let mut seen = 0;
    while seen + j <= bit {
        seen += j;
        j += 1;
    }
    (bit - seen, j)
}

/// Encode as a graph6 line (no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = vec![63 + n as u8];
    let nbits = n * (n - 1) / 2;
    let mut cur = 0u8;
    let mut fill = 0;
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            cur <<= 1;
            if g.has_edge(i, j) {
                cur |= 1;
            }
            fill += 1;
            bit += 1;
            if fill == 6 {
                out.push(63 + cur);
                cur = 0;
                fill = 0;
            }
        }
    }
    debug_assert_eq!(bit, nbits);
    if fill > 0 {
        out.push(63 + (cur << (6 - fill)));
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

// ---------------------------------------------------------------------------
// edge-list text format

/// Parse the `i j` per line edge-list format (1-based labels, `#` comments).
/// The node count is the largest label mentioned, or `n_hint` if larger.
pub fn parse_edge_list(text: &str, n_hint: Option<usize>) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_label = n_hint.unwrap_or(0);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse_label = |tok: Option<&str>| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::Parse {
                offset: lineno,
                reason: format!("line {}: expected `i j`", lineno + 1),
            })?;
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                offset: lineno,
                reason: format!("line {}: bad node label `{tok}`", lineno + 1),
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    offset: lineno,
                    reason: format!("line {}: labels are 1-based", lineno + 1),
                });
            }
            Ok(v)
        };
        let i = parse_label(it.next())?;
        let j = parse_label(it.next())?;
        if it.next().is_some() {
            return Err(Error::Parse {
                offset: lineno,
                reason: format!("line {}: trailing tokens", lineno + 1),
            });
        }
        max_label = max_label.max(i).max(j);
        edges.push((i - 1, j - 1));
    }
    if max_label == 0 {
        return Err(Error::Parse { offset: 0, reason: "no edges or node count given".into() });
    }
    Graph::from_edges(max_label, &edges)
}

// ---------------------------------------------------------------------------
// canonical labeling

/// A canonical labeling: `graph` is the canonical representative and
/// `perm[v]` the canonical position of input node `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub graph: Graph,
    pub perm: Vec<usize>,
}

/// Exact deterministic canonical form by refinement plus backtracking.
///
/// Equal canonical graphs if and only if the inputs are isomorphic. Limited
/// to [`MAX_CANON_NODES`] nodes.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    if g.n() > MAX_CANON_NODES {
        return Err(Error::TooManyNodes(g.n()));
    }
    let mut search = CanonSearch { g, best: None, autos: Vec::new() };
    let colors = refine(g, vec![0; g.n()]);
    search.descend(colors, &mut Vec::new());
    let (canon_adj, perm) = search.best.expect("search always finds a leaf");
    let graph = Graph { n: g.n(), adj: canon_adj };
    Ok(CanonicalForm { graph, perm })
}

struct CanonSearch<'a> {
    g: &'a Graph,
    /// smallest relabeled adjacency found so far, with its labeling
    best: Option<(Vec<u32>, Vec<usize>)>,
    /// automorphisms discovered from coinciding leaves
    autos: Vec<Vec<usize>>,
}

impl CanonSearch<'_> {
    fn descend(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let n = self.g.n();
        // first non-singleton color class, by color rank
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let target = (0..n).find(|&c| counts[c] > 1);
        let Some(target) = target else {
            self.leaf(&colors);
            return;
        };
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            // skip v if a known automorphism fixing the current prefix maps
            // it onto an already-tried candidate
            let redundant = self.autos.iter().any(|a| {
                prefix.iter().all(|&p| a[p] == p) && tried.contains(&a[v])
            });
            if redundant {
                continue;
            }
            tried.push(v);
            // individualize v ahead of its class, then re-refine
            let mut child: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
            child[v] -= 1;
            let child = refine(self.g, child);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, colors: &[usize]) {
        let n = self.g.n();
        // discrete coloring: node v goes to position colors[v]
        let mut adj = vec![0u32; n];
        for v in 0..n {
            let mut m = self.g.adj[v];
            let mut img = 0u32;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                img |= 1 << colors[w];
            }
            adj[colors[v]] = img;
        }
        match &self.best {
            None => self.best = Some((adj, colors.to_vec())),
            Some((best_adj, best_perm)) => {
                if adj < *best_adj {
                    self.best = Some((adj, colors.to_vec()));
                } else if adj == *best_adj {
                    // two labelings with the same image give an automorphism
                    let mut inv_best = vec![0usize; n];
                    for v in 0..n {
                        inv_best[best_perm[v]] = v;
                    }
                    let auto: Vec<usize> = (0..n).map(|v| inv_best[colors[v]]).collect();
                    if auto.iter().enumerate().any(|(v, &w)| v != w)
                        && !self.autos.contains(&auto)
                    {
                        self.autos.push(auto);
                    }
                }
            }
        }
    }
}

/// Stable neighborhood refinement: nodes are repartitioned by
/// (color, multiset of neighbor colors) until nothing splits. Returned colors
/// are contiguous ranks, ordered by the signature.
fn refine(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut nc: Vec<usize> = NodeSet(g.adj[v]).iter().map(|w| colors[w]).collect();
                nc.sort_unstable();
                (colors[v], nc, v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0usize; n];
        let mut rank = 0;
        for k in 0..n {
            if k > 0 && (sigs[k].0, &sigs[k].1) != (sigs[k - 1].0, &sigs[k - 1].1) {
                rank += 1;
            }
            next[sigs[k].2] = rank;
        }
        if next == colors {
            return colors;
        }
        colors = next;
    }
}
