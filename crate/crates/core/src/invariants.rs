//! Marginal-dimension LU-invariants: fixed-dimension sets D_k^i, rank lists
//! l_k, rank tensors T_k, eigenvalue products t_k, signature comparison, and
//! the figures of merit r and p.

use crate::graph::{Graph, NodeSet};
use crate::lc::{lc_equivalent_capped, OrbitPartition, PartitionMode, DEFAULT_ORBIT_CAP};
use crate::stab::marginal_dimension;
use crate::{Error, Result};
use rand::SeedableRng;
use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

/// All size-k subsets partitioned by marginal dimension: entry `i` of the
/// result is `D_k^i`, the sets `M` with `d_M = i`.
pub fn fixed_dimension_sets(g: &Graph, k: usize) -> Result<Vec<Vec<NodeSet>>> {
    if k == 0 || k >= g.n() {
        return Err(Error::SetTooLarge(k, g.n().saturating_sub(1)));
    }
    let mut sets: Vec<Vec<NodeSet>> = vec![Vec::new(); k + 1];
    for m in NodeSet::full(g.n()).nonempty_subsets() {
        if m.len() == k {
            sets[marginal_dimension(g, m)?].push(m);
        }
    }
    Ok(sets)
}

/// The rank list l_k: how many size-k marginals have each dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankList {
    pub k: usize,
    /// `counts[i] = |D_k^i|`, for `i` in `0..=k`.
    pub counts: Vec<usize>,
}

pub fn rank_list(g: &Graph, k: usize) -> Result<RankList> {
    let counts = fixed_dimension_sets(g, k)?.iter().map(Vec::len).collect();
    Ok(RankList { k, counts })
}

/// The supersymmetric rank tensor T_k, stored by sorted index multiset.
///
/// An entry for indices `(i1, ..., ik)` (repetitions allowed) is the
/// marginal dimension of the underlying set, so `T_{k-1}` sits on the
/// generalized diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTensor {
    pub n: usize,
    pub k: usize,
    /// sorted multiset (0-based nodes) → d of the distinct-element set
    pub values: BTreeMap<Vec<u8>, u8>,
}

impl RankTensor {
    /// Entry for an arbitrary (unsorted, possibly repeating) index tuple.
    pub fn entry(&self, indices: &[usize]) -> u8 {
        let mut key: Vec<u8> = indices.iter().map(|&i| i as u8).collect();
        key.sort_unstable();
        self.values[&key]
    }

    /// Canonical byte digest: values in multiset order. Two tensors on the
    /// same `(n, k)` are identical iff their digests are equal.
    pub fn digest(&self) -> Vec<u8> {
        self.values.values().copied().collect()
    }
}

pub fn rank_tensor(g: &Graph, k: usize) -> Result<RankTensor> {
    if k == 0 || k > g.n() {
        return Err(Error::SetTooLarge(k, g.n()));
    }
    let n = g.n();
    let mut values = BTreeMap::new();
    let mut stack: Vec<(Vec<u8>, NodeSet)> = vec![(Vec::new(), NodeSet::EMPTY)];
    // enumerate non-decreasing index tuples depth-first
    while let Some((prefix, set)) = stack.pop() {
        if prefix.len() == k {
            let d = if set == NodeSet::full(n) {
                n
            } else {
                marginal_dimension(g, set)?
            };
            values.insert(prefix, d as u8);
            continue;
        }
        let lo = prefix.last().copied().unwrap_or(0);
        for i in lo..n as u8 {
            let mut next = prefix.clone();
            next.push(i);
            stack.push((next, set.union(NodeSet::single(i as usize))));
        }
    }
    Ok(RankTensor { n, k, values })
}

/// The eigenvalue product t_k: sum T_k over k−2 axes to an n×n symmetric
/// integer matrix and return the product of its nonzero eigenvalues.
///
/// Computed exactly: the product of the nonzero roots of the characteristic
/// polynomial is ± its trailing nonzero coefficient (Faddeev–LeVerrier over
/// i128). An all-zero spectrum (the summed matrix is symmetric, so this
/// means the zero matrix) yields 0; this keeps the all-d-zero graphs, like
/// C_5 at k = 2, distinct from graphs whose nonzero eigenvalues multiply
/// to 1.
pub fn tensor_eigen_product(g: &Graph, k: usize) -> Result<i128> {
    summed_eigen_product(&summed_matrix(&rank_tensor(g, k)?))
}

/// The full spectrum of the summed matrix, as the exact coefficients
/// `[c_1, ..., c_n]` of its characteristic polynomial.
///
/// This is the comparison key used for t_k verdicts and figures of merit:
/// the scalar eigenvalue product alone merges entanglement classes whose
/// spectra differ but multiply to the same value (e.g. the friendship graph
/// F_3 and the K_7 pattern both give 6 at k = 3), and the class-separation
/// counts of the paper's t_k table are only reproduced by the spectrum.
/// Sound for the same reason as t_k itself: the summed matrix of a
/// permuted graph is permutation-similar, so the spectrum is preserved.
pub fn tensor_eigen_spectrum(g: &Graph, k: usize) -> Result<Vec<i128>> {
    char_poly(&summed_matrix(&rank_tensor(g, k)?))
}

/// Sum the tensor over its last k−2 axes.
#[allow(clippy::needless_range_loop)] // index pairs mirror the tensor axes
pub fn summed_matrix(t: &RankTensor) -> Vec<Vec<i128>> {
    let n = t.n;
    let mut a = vec![vec![0i128; n]; n];
    let mut tail = vec![0usize; t.k - 2];
    loop {
        for i in 0..n {
            for j in 0..n {
                let mut idx: Vec<usize> = vec![i, j];
                idx.extend_from_slice(&tail);
                a[i][j] += t.entry(&idx) as i128;
            }
        }
        // advance the tail odometer
        let mut pos = 0;
        loop {
            if pos == tail.len() {
                return a;
            }
            tail[pos] += 1;
            if tail[pos] < n {
                break;
            }
            tail[pos] = 0;
            pos += 1;
        }
    }
}

fn summed_eigen_product(a: &[Vec<i128>]) -> Result<i128> {
    let coeffs = char_poly(a)?;
    match coeffs.iter().rposition(|&c| c != 0) {
        // coeffs[m-1] = c_m, the coefficient of λ^{n-m}
        Some(i) => {
            let m = i + 1;
            Ok(if m % 2 == 0 { coeffs[i] } else { -coeffs[i] })
        }
        None => Ok(0),
    }
}

/// Coefficients `[c_1, ..., c_n]` of `det(λI − A) = λ^n + c_1 λ^{n−1} + …`,
/// by the Faddeev–LeVerrier recurrence (exact integer arithmetic).
#[allow(clippy::needless_range_loop)] // dense index arithmetic reads best bare
fn char_poly(a: &[Vec<i128>]) -> Result<Vec<i128>> {
    let n = a.len();
    let overflow = || Error::Unsupported("characteristic polynomial overflows i128".into());
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut coeffs = Vec::with_capacity(n);
    for step in 1..=n {
        let trace: i128 = (0..n).map(|i| m[i][i]).sum();
        let c = -trace / step as i128;
        debug_assert_eq!(trace % step as i128, 0, "Faddeev-LeVerrier trace not divisible");
        coeffs.push(c);
        if step == n {
            break;
        }
        for i in 0..n {
            m[i][i] = m[i][i].checked_add(c).ok_or_else(overflow)?;
        }
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l] == 0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] = next[i][j]
                        .checked_add(a[i][l].checked_mul(m[l][j]).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
            }
        }
        m = next;
    }
    Ok(coeffs)
}

/// Per-k bundle of l_k, t_k, and the canonical T_k digest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSignature {
    pub per_k: Vec<SignatureEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureEntry {
    pub k: usize,
    pub rank_list: RankList,
    pub eigen_product: Option<i128>, // defined for k >= 2
    pub tensor_digest: Vec<u8>,
}

pub fn signature(g: &Graph, ks: RangeInclusive<usize>) -> Result<InvariantSignature> {
    let mut per_k = Vec::new();
    for k in ks {
        if k == 0 || k >= g.n() {
            return Err(Error::SetTooLarge(k, g.n().saturating_sub(1)));
        }
        let t = rank_tensor(g, k)?;
        let rl = rank_list(g, k)?;
        // cross-check: l_k is recoverable from T_k's distinct-index entries
        debug_assert_eq!(rank_list_from_tensor(&t), rl.counts);
        per_k.push(SignatureEntry {
            k,
            rank_list: rl,
            eigen_product: if k >= 2 {
                Some(summed_eigen_product(&summed_matrix(&t))?)
            } else {
                None
            },
            tensor_digest: t.digest(),
        });
    }
    Ok(InvariantSignature { per_k })
}

fn rank_list_from_tensor(t: &RankTensor) -> Vec<usize> {
    let mut counts = vec![0usize; t.k + 1];
    for (key, &d) in &t.values {
        if key.windows(2).all(|w| w[0] < w[1]) {
            counts[d as usize] += 1;
        }
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareMode {
    Labeled,
    Unlabeled,
}

/// `Inequivalent` is a sound LU-inequivalence certificate; `Inconclusive`
/// claims nothing. In labeled mode `witness` is the lexicographically least
/// index multiset (0-based) where T_k differs; in unlabeled mode it is the
/// dimension value at which l_k's counts first differ, or empty for a t_k
/// mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompareVerdict {
    Inequivalent { k: usize, witness: Vec<usize> },
    Inconclusive,
}

pub fn compare(
    g1: &Graph,
    g2: &Graph,
    mode: CompareMode,
    ks: RangeInclusive<usize>,
) -> Result<CompareVerdict> {
    if g1.n() != g2.n() {
        return Err(Error::Unsupported("graphs must have the same node count".into()));
    }
    for k in ks {
        if k == 0 || k >= g1.n() {
            return Err(Error::SetTooLarge(k, g1.n().saturating_sub(1)));
        }
        match mode {
            CompareMode::Labeled => {
                let t1 = rank_tensor(g1, k)?;
                let t2 = rank_tensor(g2, k)?;
                // BTreeMap order is lexicographic, so the first differing
                // entry is the least witness
                for ((key, v1), (_, v2)) in t1.values.iter().zip(t2.values.iter()) {
                    if v1 != v2 {
                        return Ok(CompareVerdict::Inequivalent {
                            k,
                            witness: key.iter().map(|&b| b as usize).collect(),
                        });
                    }
                }
            }
            CompareMode::Unlabeled => {
                let l1 = rank_list(g1, k)?;
                let l2 = rank_list(g2, k)?;
                if l1 != l2 {
                    let d = l1.counts.iter().zip(&l2.counts).position(|(a, b)| a != b);
                    return Ok(CompareVerdict::Inequivalent {
                        k,
                        witness: d.into_iter().collect(),
                    });
                }
                if k >= 2 && tensor_eigen_spectrum(g1, k)? != tensor_eigen_spectrum(g2, k)? {
                    return Ok(CompareVerdict::Inequivalent { k, witness: Vec::new() });
                }
            }
        }
    }
    Ok(CompareVerdict::Inconclusive)
}

/// Which §3.1 invariant a figure-of-merit run evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantKind {
    /// T_k (labeled setting)
    Tensor,
    /// l_k (unlabeled setting)
    List,
    /// t_k (unlabeled setting)
    Eigen,
}

/// Hashable encoding of one invariant value.
pub fn invariant_bytes(g: &Graph, kind: InvariantKind, k: usize) -> Result<Vec<u8>> {
    let mut out = vec![k as u8];
    match kind {
        InvariantKind::Tensor => out.extend(rank_tensor(g, k)?.digest()),
        InvariantKind::List => {
            for c in rank_list(g, k)?.counts {
                out.extend((c as u32).to_le_bytes());
            }
        }
        InvariantKind::Eigen => {
            for c in tensor_eigen_spectrum(g, k)? {
                out.extend(c.to_le_bytes());
            }
        }
    }
    Ok(out)
}

/// Concatenated encoding over several k (the aggregated R/P invariants).
pub fn aggregate_bytes(g: &Graph, kind: InvariantKind, ks: &[usize]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for &k in ks {
        out.extend(invariant_bytes(g, kind, k)?);
    }
    Ok(out)
}

/// Figures of merit of one invariant over one orbit/class partition.
#[derive(Clone, Debug)]
pub struct Merit {
    /// distinct invariant values / number of orbits (or classes)
    pub r: f64,
    /// probability over uniformly random ordered pairs from the universe
    /// that the invariants agree and the pair is *not* equivalent
    /// (joint-event reading)
    pub p: f64,
    /// same numerator, conditioned on the pair being inequivalent
    pub p_conditional: f64,
    /// unweighted variant: orbits count once each, ordered distinct pairs
    pub p_unweighted: f64,
    pub groups: usize,
    pub distinct: usize,
    pub universe_size: usize,
}

/// Exact figures of merit: evaluate the invariant on one representative per
/// group (sound by Lemma 8) and weight groups by their labeled-universe
/// sizes.
pub fn figures_of_merit(
    part: &OrbitPartition,
    kind: InvariantKind,
    ks: &[usize],
) -> Result<Merit> {
    let groups = part.groups();
    if groups.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut by_value: HashMap<Vec<u8>, Vec<u64>> = HashMap::new();
    for group in &groups {
        let bytes = aggregate_bytes(&part.universe[group[0]], kind, ks)?;
        by_value.entry(bytes).or_default().push(group.len() as u64);
    }
    let w_total: u64 = groups.iter().map(|g| g.len() as u64).sum();
    let w_sq: u128 = (w_total as u128) * (w_total as u128);
    let same_group_sq: u128 = groups.iter().map(|g| (g.len() as u128).pow(2)).sum();
    let mut coincident: u128 = 0; // ordered pairs, different groups, equal value
    let mut unweighted: u128 = 0;
    for weights in by_value.values() {
        let s: u128 = weights.iter().map(|&w| w as u128).sum();
        let s2: u128 = weights.iter().map(|&w| (w as u128).pow(2)).sum();
        coincident += s * s - s2;
        let c = weights.len() as u128;
        unweighted += c * c - c;
    }
    let g = groups.len() as u128;
    Ok(Merit {
        r: by_value.len() as f64 / groups.len() as f64,
        p: coincident as f64 / w_sq as f64,
        p_conditional: if w_sq > same_group_sq {
            coincident as f64 / (w_sq - same_group_sq) as f64
        } else {
            0.0
        },
        p_unweighted: if g > 1 { unweighted as f64 / (g * g - g) as f64 } else { 0.0 },
        groups: groups.len(),
        distinct: by_value.len(),
        universe_size: w_total as usize,
    })
}

/// One reproduced table row: per-k merits plus the aggregate over all k.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub n: usize,
    pub mode: PartitionMode,
    pub kind: InvariantKind,
    pub ks: Vec<usize>,
    pub per_k: Vec<(usize, Merit)>,
    pub aggregate: Merit,
}

/// Exact table row over all connected labeled graphs on `n` nodes (n ≤ 7).
pub fn table_row(
    n: usize,
    mode: PartitionMode,
    kind: InvariantKind,
    ks: &[usize],
) -> Result<TableRow> {
    let universe: Vec<Graph> = crate::enumerate::connected_graphs(n)?.collect();
    let part = crate::lc::partition_orbits(universe, mode)?;
    let per_k = ks
        .iter()
        .map(|&k| Ok((k, figures_of_merit(&part, kind, &[k])?)))
        .collect::<Result<Vec<_>>>()?;
    let aggregate = figures_of_merit(&part, kind, ks)?;
    Ok(TableRow { n, mode, kind, ks: ks.to_vec(), per_k, aggregate })
}

/// Monte-Carlo estimate of the labeled false-coincidence probability p for
/// sizes where exact enumeration is out of reach.
#[derive(Clone, Debug)]
pub struct SampledMerit {
    pub p: f64,
    pub stderr: f64,
    pub samples: usize,
    /// pairs with equal invariants whose orbit search exhausted the cap
    /// (excluded from the coincidence count)
    pub unresolved: usize,
    pub seed: u64,
}

pub fn sampled_false_coincidence(
    n: usize,
    kind: InvariantKind,
    ks: &[usize],
    samples: usize,
    seed: u64,
    orbit_cap: Option<usize>,
) -> Result<SampledMerit> {
    let cap = orbit_cap.unwrap_or(DEFAULT_ORBIT_CAP);
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut coincidences = 0usize;
    let mut unresolved = 0usize;
    for _ in 0..samples {
        let g1 = crate::enumerate::random_connected_graph(n, &mut rng);
        let g2 = crate::enumerate::random_connected_graph(n, &mut rng);
        if aggregate_bytes(&g1, kind, ks)? != aggregate_bytes(&g2, kind, ks)? {
            continue;
        }
        match lc_equivalent_capped(&g1, &g2, cap) {
            Ok(true) => {}
            Ok(false) => coincidences += 1,
            Err(Error::OrbitCapExceeded { .. }) => unresolved += 1,
            Err(e) => return Err(e),
        }
    }
    let p = coincidences as f64 / samples as f64;
    Ok(SampledMerit {
        p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        unresolved,
        seed,
    })
}
