//! Local complementation, LC-orbit enumeration, and equivalence decisions
//! for labeled graphs and for entanglement classes (unlabeled graphs).

use crate::graph::{canonical_form, CanonicalForm, Graph};
use crate::{Error, Result};
use rand::Rng;
use std::collections::{HashMap, HashSet, VecDeque};

/// Default cap on enumerated orbit elements.
pub const DEFAULT_ORBIT_CAP: usize = 10_000_000;

/// Toggle all edges among the neighbors of node `i`.
pub fn local_complement(g: &Graph, i: usize) -> Result<Graph> {
    if i >= g.n() {
        return Err(Error::NodeOutOfRange { node: i, n: g.n() });
    }
    let nbrs = g.adj()[i];
    let mut adj = g.adj().to_vec();
    let mut m = nbrs;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        m &= m - 1;
        adj[j] ^= nbrs & !(1 << j);
    }
    Graph::from_adj(adj)
}

/// Apply a sequence of local complementations.
pub fn lc_walk(g: &Graph, moves: &[usize]) -> Result<Graph> {
    let mut cur = g.clone();
    for &i in moves {
        cur = local_complement(&cur, i)?;
    }
    Ok(cur)
}

/// A uniformly random LC walk of the given length.
pub fn random_lc_walk<R: Rng>(g: &Graph, len: usize, rng: &mut R) -> Result<Graph> {
    let moves: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.n())).collect();
    lc_walk(g, &moves)
}

/// Breadth-first closure of `g` under all local complementations.
///
/// Deterministic order: BFS layer by layer, node index ascending. Errors out
/// (never truncates) when `cap` elements are exceeded.
pub fn lc_orbit_capped(g: &Graph, cap: usize) -> Result<Vec<Graph>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(g.adj().to_vec());
    queue.push_back(g.clone());
    while let Some(cur) = queue.pop_front() {
        out.push(cur.clone());
        for i in 0..cur.n() {
            let img = local_complement(&cur, i)?;
            if seen.insert(img.adj().to_vec()) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                queue.push_back(img);
            }
        }
    }
    Ok(out)
}

/// [`lc_orbit_capped`] with the default cap.
pub fn lc_orbit(g: &Graph) -> Result<Vec<Graph>> {
    lc_orbit_capped(g, DEFAULT_ORBIT_CAP)
}

/// Labeled LC-equivalence by bidirectional BFS with early exit.
pub fn lc_equivalent(g1: &Graph, g2: &Graph) -> Result<bool> {
    lc_equivalent_capped(g1, g2, DEFAULT_ORBIT_CAP)
}

pub fn lc_equivalent_capped(g1: &Graph, g2: &Graph, cap: usize) -> Result<bool> {
    if g1.n() != g2.n() {
        return Err(Error::Unsupported("graphs must have the same node count".into()));
    }
    if g1 == g2 {
        return Ok(true);
    }
    let mut side = [
        BfsSide::new(g1.adj().to_vec()),
        BfsSide::new(g2.adj().to_vec()),
    ];
    loop {
        // expand the smaller frontier
        let which = usize::from(side[1].frontier.len() < side[0].frontier.len());
        if side[which].frontier.is_empty() {
            // one orbit exhausted without meeting the other
            return Ok(false);
        }
        let (a, b) = side.split_at_mut(1);
        let (expand, other) = if which == 0 { (&mut a[0], &b[0]) } else { (&mut b[0], &a[0]) };
        let mut next = Vec::new();
        for adj in expand.frontier.drain(..) {
            let cur = Graph::from_adj(adj)?;
            for i in 0..cur.n() {
                let img = local_complement(&cur, i)?;
                let key = img.adj().to_vec();
                if other.seen.contains(&key) {
                    return Ok(true);
                }
                if expand.seen.insert(key.clone()) {
                    if expand.seen.len() + other.seen.len() > cap {
                        return Err(Error::OrbitCapExceeded { cap });
                    }
                    next.push(key);
                }
            }
        }
        expand.frontier = next;
    }
}

struct BfsSide {
    seen: HashSet<Vec<u32>>,
    frontier: Vec<Vec<u32>>,
}

impl BfsSide {
    fn new(start: Vec<u32>) -> Self {
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        BfsSide { seen, frontier: vec![start] }
    }
}

/// The LC orbit of `g` in canonical-form space: one element per isomorphism
/// class touched by the entanglement class of `g`.
pub fn canonical_orbit_capped(g: &Graph, cap: usize) -> Result<Vec<CanonicalForm>> {
    let start = canonical_form(g)?;
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(start.graph.triangle_key());
    let mut queue = VecDeque::new();
    queue.push_back(start.graph.clone());
    let mut out = vec![start];
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.n() {
            let img = canonical_form(&local_complement(&cur, i)?)?;
            if seen.insert(img.graph.triangle_key()) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                queue.push_back(img.graph.clone());
                out.push(img);
            }
        }
    }
    Ok(out)
}

/// True iff some permutation of `g1` is LC-equivalent to `g2`, i.e. the two
/// graph states are in the same entanglement class.
pub fn class_equivalent(g1: &Graph, g2: &Graph) -> Result<bool> {
    class_equivalent_capped(g1, g2, DEFAULT_ORBIT_CAP)
}

pub fn class_equivalent_capped(g1: &Graph, g2: &Graph, cap: usize) -> Result<bool> {
    if g1.n() != g2.n() {
        return Err(Error::Unsupported("graphs must have the same node count".into()));
    }
    let target = canonical_form(g2)?.graph.triangle_key();
    // walk the orbit of g1 one isomorphism class at a time
    let start = canonical_form(g1)?;
    if start.graph.triangle_key() == target {
        return Ok(true);
    }
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(start.graph.triangle_key());
    let mut queue = VecDeque::new();
    queue.push_back(start.graph);
    while let Some(cur) = queue.pop_front() {
        for i in 0..cur.n() {
            let img = canonical_form(&local_complement(&cur, i)?)?.graph;
            let key = img.triangle_key();
            if key == target {
                return Ok(true);
            }
            if seen.insert(key) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                queue.push_back(img);
            }
        }
    }
    Ok(false)
}

/// Whether node permutations are considered equivalent when partitioning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    Labeled,
    Unlabeled,
}

/// A union-find partition of a graph list into LC orbits (labeled mode) or
/// entanglement classes (unlabeled mode).
pub struct OrbitPartition {
    pub universe: Vec<Graph>,
    parent: Vec<u32>,
    orbit_count: usize,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    /// Root id of the orbit containing universe index `i`.
    pub fn root(&self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            i = self.parent[i] as usize;
        }
        i
    }

    pub fn same_orbit(&self, i: usize, j: usize) -> bool {
        self.root(i) == self.root(j)
    }

    /// Universe indices grouped by orbit, deterministic order (ascending
    /// minimum member index).
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..self.parent.len() {
            by_root.entry(self.root(i)).or_default().push(i);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }
}

struct UnionFind {
    parent: Vec<u32>,
    count: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), count: n }
    }

    fn grow(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i as u32);
        self.count += 1;
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            let gp = self.parent[self.parent[i] as usize];
            self.parent[i] = gp;
            i = gp as usize;
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri.max(rj)] = ri.min(rj) as u32;
            self.count -= 1;
        }
    }
}

/// Partition graphs into labeled LC orbits or unlabeled entanglement classes.
///
/// In labeled mode, the universe is expanded with any LC image not already
/// present. In unlabeled mode, the universe must be closed under LC moves up
/// to isomorphism (e.g. all connected graphs of a fixed size, or all
/// isomorphism-class representatives).
pub fn partition_orbits(graphs: Vec<Graph>, mode: PartitionMode) -> Result<OrbitPartition> {
    if graphs.is_empty() {
        return Ok(OrbitPartition { universe: graphs, parent: Vec::new(), orbit_count: 0 });
    }
    let n = graphs[0].n();
    if n > 16 {
        return Err(Error::Unsupported("orbit partitioning is limited to 16 nodes".into()));
    }
    if graphs.iter().any(|g| g.n() != n) {
        return Err(Error::Unsupported("all graphs must share the node count".into()));
    }
    match mode {
        PartitionMode::Labeled => partition_labeled(graphs),
        PartitionMode::Unlabeled => partition_unlabeled(graphs),
    }
}

fn partition_labeled(mut universe: Vec<Graph>) -> Result<OrbitPartition> {
    let mut index: HashMap<u128, usize> = HashMap::with_capacity(universe.len());
    for (i, g) in universe.iter().enumerate() {
        index.insert(g.triangle_key(), i);
    }
    let mut uf = UnionFind::new(universe.len());
    let mut cursor = 0;
    while cursor < universe.len() {
        let cur = universe[cursor].clone();
        for i in 0..cur.n() {
            let img = local_complement(&cur, i)?;
            let key = img.triangle_key();
            let j = *index.entry(key).or_insert_with(|| {
                universe.push(img);
                uf.grow()
            });
            uf.union(cursor, j);
        }
        cursor += 1;
    }
    finish(universe, uf)
}

fn partition_unlabeled(universe: Vec<Graph>) -> Result<OrbitPartition> {
    // index by canonical form so isomorphic entries merge
    let canon: Vec<Graph> = universe
        .iter()
        .map(|g| canonical_form(g).map(|c| c.graph))
        .collect::<Result<_>>()?;
    let mut index: HashMap<u128, usize> = HashMap::with_capacity(universe.len());
    let mut uf = UnionFind::new(universe.len());
    for (i, c) in canon.iter().enumerate() {
        match index.entry(c.triangle_key()) {
            std::collections::hash_map::Entry::Occupied(e) => uf.union(i, *e.get()),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(i);
            }
        }
    }
    for (i, c) in canon.iter().enumerate() {
        for node in 0..c.n() {
            let img = canonical_form(&local_complement(c, node)?)?.graph;
            let j = *index.get(&img.triangle_key()).ok_or_else(|| {
                Error::Unsupported(
                    "universe is not closed under LC moves up to isomorphism".into(),
                )
            })?;
            uf.union(i, j);
        }
    }
    finish(universe, uf)
}

fn finish(universe: Vec<Graph>, mut uf: UnionFind) -> Result<OrbitPartition> {
    for i in 0..uf.parent.len() {
        uf.find(i);
    }
    Ok(OrbitPartition { universe, parent: uf.parent, orbit_count: uf.count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::connected_graphs;
    use crate::graph::{complete, path, star};
    use rand::SeedableRng;

    #[test]
    fn star_center_becomes_complete() {
        for n in 3..=7 {
            assert_eq!(local_complement(&star(n), 0).unwrap(), complete(n));
        }
    }

    #[test]
    fn star_leaf_is_fixed() {
        let s = star(5);
        assert_eq!(local_complement(&s, 3).unwrap(), s);
    }

    #[test]
    fn local_complement_is_involutive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..10);
            let g = crate::enumerate::random_connected_graph(n, &mut rng);
            let i = rng.gen_range(0..n);
            let twice = local_complement(&local_complement(&g, i).unwrap(), i).unwrap();
            assert_eq!(twice, g);
        }
    }

    #[test]
    fn star4_orbit_has_five_graphs() {
        let orbit = lc_orbit(&star(4)).unwrap();
        assert_eq!(orbit.len(), 5);
        // K4 plus the four stars
        assert!(orbit.contains(&complete(4)));
        for c in 0..4 {
            let mut perm: Vec<usize> = (0..4).collect();
            perm.swap(0, c);
            assert!(orbit.contains(&star(4).permuted(&perm)));
        }
    }

    #[test]
    fn ghz7_orbit_has_eight_graphs() {
        assert_eq!(lc_orbit(&star(7)).unwrap().len(), 8);
    }

    #[test]
    fn single_edge_orbit_is_trivial() {
        assert_eq!(lc_orbit(&complete(2)).unwrap().len(), 1);
    }

    #[test]
    fn orbit_cap_is_an_error() {
        assert!(matches!(
            lc_orbit_capped(&path(6), 3),
            Err(Error::OrbitCapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn labeled_line_permutations() {
        // path 1-2-3-4 vs path labeled 1-2-4-3: LC-equivalent
        let p1234 = path(4);
        let p1243 = Graph::from_edges(4, &[(0, 1), (1, 3), (3, 2)]).unwrap();
        assert!(lc_equivalent(&p1234, &p1243).unwrap());
        // path 1-2-3-4 vs path labeled 1-4-3-2: inequivalent as labeled graphs
        let p1432 = Graph::from_edges(4, &[(0, 3), (3, 2), (2, 1)]).unwrap();
        assert!(!lc_equivalent(&p1234, &p1432).unwrap());
        // but equivalent as unlabeled graphs
        assert!(class_equivalent(&p1234, &p1432).unwrap());
        assert!(lc_equivalent(&p1234, &p1234).unwrap());
    }

    #[test]
    fn star_and_path_are_different_classes() {
        assert!(!class_equivalent(&star(4), &path(4)).unwrap());
    }

    #[test]
    fn class_equivalent_under_permutation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(3..8);
            let g = crate::enumerate::random_connected_graph(n, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            assert!(class_equivalent(&g, &g.permuted(&perm)).unwrap());
        }
    }

    #[test]
    fn four_node_census() {
        let graphs: Vec<Graph> = connected_graphs(4).unwrap().collect();
        assert_eq!(graphs.len(), 38);
        let labeled = partition_orbits(graphs.clone(), PartitionMode::Labeled).unwrap();
        assert_eq!(labeled.orbit_count(), 4);
        let unlabeled = partition_orbits(graphs, PartitionMode::Unlabeled).unwrap();
        assert_eq!(unlabeled.orbit_count(), 2);
    }

    #[test]
    fn orbit_preserves_connectivity_and_size() {
        for n in 2..=6 {
            for g in connected_graphs(n).unwrap().take(200) {
                for h in lc_orbit(&g).unwrap() {
                    assert_eq!(h.n(), n);
                    assert!(h.is_connected());
                }
            }
        }
    }

    #[test]
    fn equivalence_is_symmetric_and_transitive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let n = rng.gen_range(3..7);
            let g = crate::enumerate::random_connected_graph(n, &mut rng);
            let h = random_lc_walk(&g, 6, &mut rng).unwrap();
            let k = random_lc_walk(&h, 6, &mut rng).unwrap();
            assert!(lc_equivalent(&g, &h).unwrap());
            assert!(lc_equivalent(&h, &g).unwrap());
            assert!(lc_equivalent(&g, &k).unwrap());
        }
    }
}
