//! Graph enumeration: exhaustive labeled connected graphs, random samples,
//! isomorphism-class representatives, and LC-class censuses built from them.

use crate::graph::{canonical_form, Graph};
use crate::lc::local_complement;
use crate::{Error, Result};
use rand::Rng;
use std::collections::{HashMap, HashSet, VecDeque};

/// Exhaustive enumeration limit: 2^(n(n-1)/2) candidates are filtered.
pub const MAX_EXHAUSTIVE_NODES: usize = 7;

/// All connected labeled graphs on `n` nodes, in ascending triangle-key
/// order. Exhaustive enumeration is limited to `n <= 7`.
pub fn connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 || n > MAX_EXHAUSTIVE_NODES {
        return Err(Error::Unsupported(format!(
            "exhaustive enumeration supports 1..={MAX_EXHAUSTIVE_NODES} nodes, got {n}; \
             supply a graph6 file for larger sizes"
        )));
    }
    Ok(connected_keys(n).map(move |k| Graph::from_triangle_key(n, k)))
}

/// Triangle keys of all connected labeled graphs on `n` nodes.
pub fn connected_keys(n: usize) -> impl Iterator<Item = u128> {
    let bits = n * (n - 1) / 2;
    (0u128..1 << bits).filter(move |&k| Graph::from_triangle_key(n, k).is_connected())
}

/// A uniformly random connected labeled graph, by rejection sampling.
pub fn random_connected_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!((1..=16).contains(&n));
    let bits = n * (n - 1) / 2;
    loop {
        let key: u128 = rng.gen::<u128>() & ((1 << bits) - 1);
        let g = Graph::from_triangle_key(n, key);
        if g.is_connected() {
            return g;
        }
    }
}

/// Canonical representatives of every connected isomorphism class on `n`
/// nodes, built by vertex extension with canonical-form dedup.
///
/// Intermediate levels keep disconnected graphs (a connected graph minus a
/// vertex need not be connected); only the final level filters connectivity.
pub fn connected_iso_classes(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > crate::graph::MAX_CANON_NODES {
        return Err(Error::TooManyNodes(n));
    }
    let mut level: Vec<Graph> = vec![Graph::empty(1)?];
    for k in 2..=n {
        let mut seen: HashSet<u128> = HashSet::new();
        let mut next: Vec<Graph> = Vec::new();
        for g in &level {
            for nbrs in 0u32..1 << (k - 1) {
                let mut adj: Vec<u32> = g.adj().to_vec();
                adj.push(nbrs);
                for (i, row) in adj.iter_mut().enumerate().take(k - 1) {
                    if nbrs >> i & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                let ext = Graph::from_adj(adj)?;
                let canon = canonical_form(&ext)?.graph;
                if seen.insert(canon.triangle_key()) {
                    next.push(canon);
                }
            }
        }
        level = next;
    }
    level.retain(|g| g.is_connected());
    level.sort_by_key(|g| g.triangle_key());
    Ok(level)
}

/// Partition isomorphism-class representatives into LC classes
/// (entanglement classes), walking each class in canonical-form space.
///
/// Returns one sorted group of `reps` indices per class.
pub fn lc_class_partition(reps: &[Graph]) -> Result<Vec<Vec<usize>>> {
    let mut index: HashMap<u128, usize> = HashMap::with_capacity(reps.len());
    for (i, g) in reps.iter().enumerate() {
        let canon = canonical_form(g)?.graph;
        if index.insert(canon.triangle_key(), i).is_some() {
            return Err(Error::Integrity(format!(
                "duplicate isomorphism class at representative {i}"
            )));
        }
    }
    let mut assigned = vec![false; reps.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..reps.len() {
        if assigned[start] {
            continue;
        }
        let mut members = Vec::new();
        let root = canonical_form(&reps[start])?.graph;
        let mut seen: HashSet<u128> = HashSet::new();
        seen.insert(root.triangle_key());
        let mut queue = VecDeque::new();
        queue.push_back(root);
        while let Some(cur) = queue.pop_front() {
            if let Some(&i) = index.get(&cur.triangle_key()) {
                assigned[i] = true;
                members.push(i);
            }
            for node in 0..cur.n() {
                let img = canonical_form(&local_complement(&cur, node)?)?.graph;
                if seen.insert(img.triangle_key()) {
                    queue.push_back(img);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok(classes)
}
