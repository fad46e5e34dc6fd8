//! Symbolic stabilizer algebra for graph states: generators, sign-tracked
//! products, reduced stabilizers, marginal dimensions, new-structure tests,
//! and the stabilizer-contradiction LU-inequivalence scan.

use crate::gf2::gf2_rank_rows;
use crate::graph::{Graph, NodeSet};
use crate::invariants::{compare, CompareMode, CompareVerdict};
use crate::{Error, Result};
use std::fmt;

/// Practical cap on marginal size for brute-force subset enumeration.
pub const MAX_MARGINAL_NODES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// An n-qubit Pauli string in symplectic form.
///
/// The operator is `i^phase · ⊗_q X^{x_q} Z^{z_q}`; qubit `q` carries a Y
/// exactly when both mask bits are set. Elements generated from graph-state
/// generators always have a real sign (the accumulated imaginary count is
/// even).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    phase: u8, // power of i, mod 4
    x: u32,
    z: u32,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        PauliString { n, phase: 0, x: 0, z: 0 }
    }

    /// Build a string from its raw symplectic parts: `i^phase · ⊗ X^x Z^z`.
    pub fn from_parts(n: usize, phase: u8, x: NodeSet, z: NodeSet) -> Result<PauliString> {
        if n > crate::graph::MAX_NODES {
            return Err(Error::TooManyNodes(n));
        }
        let full = NodeSet::full(n);
        if !x.is_subset_of(full) || !z.is_subset_of(full) {
            let top = 31 - x.union(z).0.leading_zeros();
            return Err(Error::NodeOutOfRange { node: top as usize, n });
        }
        Ok(PauliString { n, phase: phase % 4, x: x.0, z: z.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn xmask(&self) -> NodeSet {
        NodeSet(self.x)
    }

    pub fn zmask(&self) -> NodeSet {
        NodeSet(self.z)
    }

    pub fn support(&self) -> NodeSet {
        NodeSet(self.x | self.z)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0 && self.phase == 0
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        match (self.x >> q & 1, self.z >> q & 1) {
            (0, 0) => PauliLetter::I,
            (1, 0) => PauliLetter::X,
            (1, 1) => PauliLetter::Y,
            (0, 1) => PauliLetter::Z,
            _ => unreachable!(),
        }
    }

    /// Multiplication with phase tracking: the overlap of our Z part with the
    /// right factor's X part anticommutes past it, contributing i^2 each.
    pub fn mul(&self, rhs: &PauliString) -> PauliString {
        debug_assert_eq!(self.n, rhs.n);
        let anti = (self.z & rhs.x).count_ones() as u8;
        PauliString {
            n: self.n,
            phase: (self.phase + rhs.phase + 2 * anti) % 4,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
        }
    }

    /// The real sign, `+1` or `-1`, in the letter representation
    /// (`Y = i·XZ` absorbs one imaginary unit per Y position).
    ///
    /// Panics if the phase is not real; graph-state stabilizer elements
    /// always are.
    pub fn sign(&self) -> i8 {
        let y = (self.x & self.z).count_ones() as u8;
        let k = (self.phase + 4 - y % 4 + 4) % 4;
        match k {
            0 => 1,
            2 => -1,
            _ => panic!("Pauli string has imaginary phase i^{k}; not a stabilizer element"),
        }
    }
}

impl fmt::Display for PauliString {
    /// `±P1 P2 ... Pn` without spaces, e.g. `-ZYIIIY`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign() >= 0 { '+' } else { '-' })?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

/// The graph-state generator `g_i = X_i ⊗ Z_{N_i}`.
pub fn generator(g: &Graph, i: usize) -> Result<PauliString> {
    if i >= g.n() {
        return Err(Error::NodeOutOfRange { node: i, n: g.n() });
    }
    Ok(PauliString { n: g.n(), phase: 0, x: 1 << i, z: g.adj()[i] })
}

/// The stabilizer element `g_L = ∏_{i∈L} g_i`, multiplied in ascending
/// generator-index order (this fixes the sign convention).
pub fn stab_element(g: &Graph, l: NodeSet) -> PauliString {
    let mut acc = PauliString::identity(g.n());
    for i in l.iter() {
        acc = acc.mul(&generator(g, i).expect("l is within the vertex set"));
    }
    acc
}

/// `d_M = |M| - rank(Γ_{M,M⊥})` over GF(2). `m = V` returns `n`.
pub fn marginal_dimension(g: &Graph, m: NodeSet) -> Result<usize> {
    if m.is_empty() {
        return Err(Error::EmptySet);
    }
    if m == NodeSet::full(g.n()) {
        return Ok(g.n());
    }
    let rows: Vec<u64> = m.iter().map(|i| (g.adj()[i] & !m.0) as u64).collect();
    Ok(m.len() - gf2_rank_rows(&rows))
}

/// `rank(ρ_M) = 2^(|M| - d_M)`.
pub fn marginal_rank(g: &Graph, m: NodeSet) -> Result<u64> {
    Ok(1u64 << (m.len() - marginal_dimension(g, m)?.min(m.len())))
}

/// Entanglement entropy of the bipartition `M | M⊥`, in bits:
/// `E_M = |M| - d_M`.
pub fn entanglement_entropy(g: &Graph, m: NodeSet) -> Result<usize> {
    if m.is_empty() || m == NodeSet::full(g.n()) {
        return Err(Error::EmptySet);
    }
    Ok(m.len() - marginal_dimension(g, m)?)
}

/// The reduced stabilizer `S_M`: every element of `S(G)` supported inside
/// `M`, identity included, with `dim = log2 |S_M|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedStabilizer {
    pub marginal: NodeSet,
    pub elements: Vec<PauliString>,
    pub dim: usize,
}

/// Brute force over `L ⊆ M` (sufficient: any element of `S_M` has its X part
/// inside `M`, which fixes `L`).
pub fn reduced_stabilizer(g: &Graph, m: NodeSet) -> Result<ReducedStabilizer> {
    if m.len() > MAX_MARGINAL_NODES {
        return Err(Error::SetTooLarge(m.len(), MAX_MARGINAL_NODES));
    }
    let mut elements = vec![PauliString::identity(g.n())];
    for l in m.nonempty_subsets() {
        let p = stab_element(g, l);
        if p.support().is_subset_of(m) {
            elements.push(p);
        }
    }
    debug_assert!(elements.len().is_power_of_two());
    let dim = elements.len().trailing_zeros() as usize;
    Ok(ReducedStabilizer { marginal: m, elements, dim })
}

/// Order (as a power of two) of the group generated by the reduced
/// stabilizers of all proper subsets of `m`.
///
/// The maximal proper subsets suffice: `S_N ⊆ S_N'` whenever `N ⊆ N'`.
fn proper_subset_group_log2(g: &Graph, m: NodeSet) -> Result<usize> {
    let mut vectors: Vec<u64> = Vec::new();
    for drop in m.iter() {
        let sub = m.difference(NodeSet::single(drop));
        if sub.is_empty() {
            continue;
        }
        for p in reduced_stabilizer(g, sub)?.elements {
            if !p.is_identity() {
                vectors.push(p.xmask().0 as u64 | (p.zmask().0 as u64) << 32);
            }
        }
    }
    Ok(gf2_rank_rows(&vectors))
}

/// Whether `S_M` strictly exceeds the group generated by all proper-subset
/// reduced stabilizers.
pub fn new_structure(g: &Graph, m: NodeSet) -> Result<bool> {
    if m.len() < 2 {
        return Err(Error::EmptySet);
    }
    Ok(ell_value(g, m)? > 0)
}

/// `ℓ = log2(|S_M| / |⟨∪_{N ⊊ M} S_N⟩|)`, always in `{0, 1, 2}`.
///
/// A returned `ℓ = 2` additionally satisfies: `|M|` even, the sub-generated
/// group trivial, and `|S_M| = 4`. Violations panic — they would signal an
/// algebra bug, not user error.
pub fn ell_value(g: &Graph, m: NodeSet) -> Result<usize> {
    let d = marginal_dimension(g, m)?;
    let sub = proper_subset_group_log2(g, m)?;
    assert!(sub <= d, "proper-subset group exceeds S_M");
    let ell = d - sub;
    assert!(ell <= 2, "ell = {ell} > 2 contradicts the subgroup-index bound");
    if ell == 2 {
        assert!(m.len().is_multiple_of(2), "ell = 2 on an odd-size marginal");
        assert!(sub == 0, "ell = 2 with a nontrivial sub-generated group");
        assert!(d == 2, "ell = 2 with |S_M| != 4");
    }
    Ok(ell)
}

// ---------------------------------------------------------------------------
// LU-inequivalence scan

/// Verdict of the stabilizer-contradiction scan. `Inequivalent` is a sound
/// LU-inequivalence certificate; `Inconclusive` claims nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LuVerdict {
    Inequivalent(LuWitness),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LuWitness {
    /// The invariant-signature prerequisite already fails.
    SignatureMismatch { k: usize, witness: Vec<usize> },
    /// Matched d=1 marginals whose unique elements act on different supports.
    SupportMismatch { marginal: NodeSet },
    /// One input letter is forced onto two different output letters at a
    /// qubit.
    LetterContradiction {
        qubit: usize,
        from: PauliLetter,
        to_first: PauliLetter,
        marginal_first: NodeSet,
        to_second: PauliLetter,
        marginal_second: NodeSet,
    },
    /// Two different input letters are forced onto the same output letter.
    InjectivityContradiction {
        qubit: usize,
        from_first: PauliLetter,
        marginal_first: NodeSet,
        from_second: PauliLetter,
        marginal_second: NodeSet,
        to: PauliLetter,
    },
}

impl fmt::Display for LuWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LuWitness::SignatureMismatch { k, witness } => {
                write!(f, "invariant signature differs at k={k}, multiset {witness:?}")
            }
            LuWitness::SupportMismatch { marginal } => {
                write!(f, "d=1 stabilizer supports differ on marginal {marginal}")
            }
            LuWitness::LetterContradiction {
                qubit,
                from,
                to_first,
                marginal_first,
                to_second,
                marginal_second,
            } => write!(
                f,
                "qubit {}: {from}->{to_first} (marginal {marginal_first}) conflicts with \
                 {from}->{to_second} (marginal {marginal_second})",
                qubit + 1
            ),
            LuWitness::InjectivityContradiction {
                qubit,
                from_first,
                marginal_first,
                from_second,
                marginal_second,
                to,
            } => write!(
                f,
                "qubit {}: both {from_first} (marginal {marginal_first}) and {from_second} \
                 (marginal {marginal_second}) map to {to}",
                qubit + 1
            ),
        }
    }
}

/// Accumulate per-qubit partial maps on `{X,Y,Z}` from matched d=1 marginal
/// stabilizer pairs and report the first contradiction (marginals processed
/// in the order given; feed them lexicographically for determinism).
pub fn scan_constraints<I>(n: usize, pairs: I) -> LuVerdict
where
    I: IntoIterator<Item = (NodeSet, PauliString, PauliString)>,
{
    // per qubit: forward map letter -> (image, witnessing marginal),
    // and reverse map image -> (preimage, witnessing marginal)
    let mut forward: Vec<[Option<(PauliLetter, NodeSet)>; 3]> = vec![[None; 3]; n];
    let mut reverse: Vec<[Option<(PauliLetter, NodeSet)>; 3]> = vec![[None; 3]; n];
    let idx = |l: PauliLetter| match l {
        PauliLetter::X => 0,
        PauliLetter::Y => 1,
        PauliLetter::Z => 2,
        PauliLetter::I => unreachable!("identity letters carry no constraint"),
    };
    for (m, s, s2) in pairs {
        if s.support() != s2.support() {
            return LuVerdict::Inequivalent(LuWitness::SupportMismatch { marginal: m });
        }
        for q in s.support().iter() {
            let from = s.letter(q);
            let to = s2.letter(q);
            match forward[q][idx(from)] {
                None => forward[q][idx(from)] = Some((to, m)),
                Some((prev, prev_m)) if prev != to => {
                    return LuVerdict::Inequivalent(LuWitness::LetterContradiction {
                        qubit: q,
                        from,
                        to_first: prev,
                        marginal_first: prev_m,
                        to_second: to,
                        marginal_second: m,
                    });
                }
                Some(_) => {}
            }
            match reverse[q][idx(to)] {
                None => reverse[q][idx(to)] = Some((from, m)),
                Some((prev, prev_m)) if prev != from => {
                    return LuVerdict::Inequivalent(LuWitness::InjectivityContradiction {
                        qubit: q,
                        from_first: prev,
                        marginal_first: prev_m,
                        from_second: from,
                        marginal_second: m,
                        to,
                    });
                }
                Some(_) => {}
            }
        }
    }
    LuVerdict::Inconclusive
}

/// The full scan: an invariant-signature prerequisite pass, then letter
/// constraints from every marginal of size at most `kmax` where both graphs
/// have `d_M = 1`.
pub fn lu_inequivalence_scan(g1: &Graph, g2: &Graph, kmax: usize) -> Result<LuVerdict> {
    if g1.n() != g2.n() {
        return Err(Error::Unsupported("graphs must have the same node count".into()));
    }
    if kmax > 8 {
        return Err(Error::SetTooLarge(kmax, 8));
    }
    let n = g1.n();
    let k_hi = kmax.min(n.saturating_sub(1)).max(1);
    if let CompareVerdict::Inequivalent { k, witness } =
        compare(g1, g2, CompareMode::Labeled, 1..=k_hi)?
    {
        return Ok(LuVerdict::Inequivalent(LuWitness::SignatureMismatch { k, witness }));
    }
    let mut pairs = Vec::new();
    let full = NodeSet::full(n);
    for mask in 1..full.0 {
        let m = NodeSet(mask);
        if m.len() > kmax {
            continue;
        }
        if marginal_dimension(g1, m)? == 1 && marginal_dimension(g2, m)? == 1 {
            let s = nonidentity_element(g1, m)?;
            let s2 = nonidentity_element(g2, m)?;
            pairs.push((m, s, s2));
        }
    }
    Ok(scan_constraints(n, pairs))
}

fn nonidentity_element(g: &Graph, m: NodeSet) -> Result<PauliString> {
    let rs = reduced_stabilizer(g, m)?;
    rs.elements
        .into_iter()
        .find(|p| !p.is_identity())
        .ok_or_else(|| Error::Unsupported("marginal has no nontrivial stabilizer".into()))
}
