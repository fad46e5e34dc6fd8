//! Cross-route and paper-property integration tests: every quantity with
//! more than one derivation is checked against an independent oracle.

use gsx_core::enumerate::{connected_graphs, connected_iso_classes, random_connected_graph};
use gsx_core::graph::{parse_graph6, to_graph6, Graph, NodeSet};
use gsx_core::invariants::signature;
use gsx_core::lc::{class_equivalent, local_complement, random_lc_walk};
use gsx_core::meta::{build_metagraph, condense, metagraph_stabilizer};
use gsx_core::stab::{
    ell_value, generator, lu_inequivalence_scan, marginal_dimension, new_structure,
    reduced_stabilizer, stab_element, LuVerdict, PauliString,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_proper_subset<R: Rng>(n: usize, rng: &mut R) -> NodeSet {
    loop {
        let m = NodeSet(rng.gen_range(1..(1u32 << n) - 1));
        if !m.is_empty() {
            return m;
        }
    }
}

/// marginal dimension via the brute-force reduced stabilizer (oracle 2)
fn d_brute(g: &Graph, m: NodeSet) -> usize {
    reduced_stabilizer(g, m).unwrap().dim
}

/// marginal dimension via the metagraph parity rule (oracle 3)
fn d_meta(g: &Graph, m: NodeSet) -> usize {
    metagraph_stabilizer(&build_metagraph(g, m).unwrap()).unwrap().dim
}

#[test]
fn route_agreement_exhaustive_small() {
    // every proper non-empty subset of every connected graph, n <= 5
    for n in 2..=5 {
        for g in connected_graphs(n).unwrap() {
            for mask in 1..NodeSet::full(n).0 {
                let m = NodeSet(mask);
                let d = marginal_dimension(&g, m).unwrap();
                assert_eq!(d, d_brute(&g, m));
                assert_eq!(d, d_meta(&g, m));
            }
        }
    }
}

#[test]
fn route_agreement_iso_classes_n6_n7() {
    // all subsets of size <= 4 on all isomorphism-class representatives
    for n in [6, 7] {
        for g in connected_iso_classes(n).unwrap() {
            for mask in 1..NodeSet::full(n).0 {
                let m = NodeSet(mask);
                if m.len() > 4 {
                    continue;
                }
                let d = marginal_dimension(&g, m).unwrap();
                assert_eq!(d, d_brute(&g, m));
                assert_eq!(d, d_meta(&g, m));
            }
        }
    }
}

#[test]
fn complement_identity() {
    // Eq. 21: d_{M^c} = d_M + |M^c| - |M|
    let mut rng = rng(21);
    for _ in 0..2000 {
        let n = rng.gen_range(2..=10);
        let g = random_connected_graph(n, &mut rng);
        let m = random_proper_subset(n, &mut rng);
        let mc = NodeSet::full(n).difference(m);
        let (d, dc) = (
            marginal_dimension(&g, m).unwrap() as i64,
            marginal_dimension(&g, mc).unwrap() as i64,
        );
        assert_eq!(dc, d + mc.len() as i64 - m.len() as i64, "{} m={m}", to_graph6(&g));
    }
}

#[test]
fn new_structure_conditions_agree_at_size_three() {
    // Eq. 26 (group comparison) <=> Eq. 27 (d_M > sum of pair d's) at |M|=3
    for n in 3..=6 {
        for g in connected_graphs(n).unwrap() {
            for mask in 1..NodeSet::full(n).0 {
                let m = NodeSet(mask);
                if m.len() != 3 {
                    continue;
                }
                let eq26 = new_structure(&g, m).unwrap();
                let pair_sum: usize = m
                    .nonempty_subsets()
                    .filter(|s| s.len() == 2)
                    .map(|s| marginal_dimension(&g, s).unwrap())
                    .sum();
                let eq27 = marginal_dimension(&g, m).unwrap() > pair_sum;
                assert_eq!(eq26, eq27, "{} m={m}", to_graph6(&g));
            }
        }
    }
}

#[test]
fn ell_values_satisfy_lemma_11() {
    // ell in {0,1,2}; the ell=2 side conditions are asserted inside
    // ell_value itself, so a clean pass over many random cases is the check
    let mut rng = rng(11);
    let mut seen_two = 0;
    for _ in 0..4000 {
        let n = rng.gen_range(4..=9);
        let g = random_connected_graph(n, &mut rng);
        let m = random_proper_subset(n, &mut rng);
        if m.len() < 2 {
            continue;
        }
        if ell_value(&g, m).unwrap() == 2 {
            seen_two += 1;
        }
    }
    // the interesting branch must actually occur for the test to mean much
    assert!(seen_two > 0, "no ell=2 instance in 4000 samples");
}

// ---------------------------------------------------------------------------
// dense-matrix sign oracle

/// 2^n x 2^n integer complex matrix (re, im), enough for Pauli products
#[derive(Clone, PartialEq)]
struct CMat(Vec<Vec<(i64, i64)>>);

#[allow(clippy::needless_range_loop)]
impl CMat {
    fn kron(&self, other: &CMat) -> CMat {
        let (a, b) = (&self.0, &other.0);
        let (n, m) = (a.len(), b.len());
        let mut out = vec![vec![(0i64, 0i64); n * m]; n * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        let (ar, ai) = a[i][j];
                        let (br, bi) = b[k][l];
                        out[i * m + k][j * m + l] = (ar * br - ai * bi, ar * bi + ai * br);
                    }
                }
            }
        }
        CMat(out)
    }

    fn mul(&self, other: &CMat) -> CMat {
        let n = self.0.len();
        let mut out = vec![vec![(0i64, 0i64); n]; n];
        for i in 0..n {
            for k in 0..n {
                let (ar, ai) = self.0[i][k];
                if (ar, ai) == (0, 0) {
                    continue;
                }
                for j in 0..n {
                    let (br, bi) = other.0[k][j];
                    out[i][j].0 += ar * br - ai * bi;
                    out[i][j].1 += ar * bi + ai * br;
                }
            }
        }
        CMat(out)
    }

    fn scale(&self, s: i64) -> CMat {
        CMat(self.0.iter().map(|r| r.iter().map(|&(a, b)| (s * a, s * b)).collect()).collect())
    }
}

fn letter_matrix(l: char) -> CMat {
    CMat(match l {
        'I' => vec![vec![(1, 0), (0, 0)], vec![(0, 0), (1, 0)]],
        'X' => vec![vec![(0, 0), (1, 0)], vec![(1, 0), (0, 0)]],
        'Y' => vec![vec![(0, 0), (0, -1)], vec![(0, 1), (0, 0)]],
        'Z' => vec![vec![(1, 0), (0, 0)], vec![(0, 0), (-1, 0)]],
        _ => unreachable!(),
    })
}

/// the matrix a Pauli string's displayed form (sign + letters) denotes
fn pauli_matrix(p: &PauliString) -> CMat {
    let text = p.to_string();
    let mut chars = text.chars();
    let sign = if chars.next() == Some('-') { -1 } else { 1 };
    let mut m = CMat(vec![vec![(1, 0)]]);
    for c in chars {
        m = m.kron(&letter_matrix(c));
    }
    m.scale(sign)
}

#[test]
fn sign_oracle_dense_matrices() {
    // the displayed sign/letters of g_L must equal the actual matrix
    // product of the generator matrices, in index order
    let check = |g: &Graph| {
        for l in NodeSet::full(g.n()).nonempty_subsets() {
            let mut acc = pauli_matrix(&PauliString::identity(g.n()));
            for i in l.iter() {
                acc = acc.mul(&pauli_matrix(&generator(g, i).unwrap()));
            }
            assert!(acc == pauli_matrix(&stab_element(g, l)), "{} L={l}", to_graph6(g));
        }
    };
    for n in 2..=4 {
        for g in connected_graphs(n).unwrap() {
            check(&g);
        }
    }
    let mut rng = rng(4);
    for _ in 0..15 {
        check(&random_connected_graph(5, &mut rng));
    }
}

// ---------------------------------------------------------------------------

#[test]
fn signatures_constant_along_lc_walks() {
    // Lemma 8 direction: T_k, l_k, t_k unchanged by local complementation
    let mut rng = rng(8);
    for _ in 0..120 {
        let n = rng.gen_range(4..=8);
        let g = random_connected_graph(n, &mut rng);
        let k_hi = (n / 2).clamp(2, 3);
        let sig = signature(&g, 2..=k_hi).unwrap();
        let walked = random_lc_walk(&g, 12, &mut rng).unwrap();
        assert_eq!(sig, signature(&walked, 2..=k_hi).unwrap(), "{}", to_graph6(&g));
    }
}

#[test]
fn scan_never_separates_lc_equivalent_pairs() {
    let mut rng = rng(9);
    for _ in 0..60 {
        let n = rng.gen_range(4..=8);
        let g = random_connected_graph(n, &mut rng);
        let walked = random_lc_walk(&g, 15, &mut rng).unwrap();
        assert_eq!(
            lu_inequivalence_scan(&g, &walked, 3).unwrap(),
            LuVerdict::Inconclusive,
            "{} vs {}",
            to_graph6(&g),
            to_graph6(&walked)
        );
    }
}

#[test]
fn condensation_preserves_lc_equivalence() {
    // Lemma 15: d_C = |C|-1 makes condensation commute with LC walks up to
    // LC-equivalence of the condensed graphs
    let mut rng = rng(15);
    let mut trials = 0;
    while trials < 200 {
        let n = rng.gen_range(4..=8);
        let g = random_connected_graph(n, &mut rng);
        let c = random_proper_subset(n, &mut rng);
        if c.len() < 2 || marginal_dimension(&g, c).unwrap() != c.len() - 1 {
            continue;
        }
        trials += 1;
        let walked = random_lc_walk(&g, 10, &mut rng).unwrap();
        let a = condense(&g, c).unwrap().graph;
        let b = condense(&walked, c).unwrap().graph;
        assert!(
            class_equivalent(&a, &b).unwrap(),
            "{} C={c} walked {}",
            to_graph6(&g),
            to_graph6(&walked)
        );
    }
}

#[test]
#[ignore = "randomized falsifier; run with --ignored"]
fn negative_control_new_structure_is_not_a_condensation_rule() {
    // Observation B.1(1): Eq. 26 alone does not certify condensation — a
    // search must find an LC pair whose condensed graphs are inequivalent
    let mut rng = rng(1166);
    for _ in 0..20_000 {
        let n = rng.gen_range(5..=8);
        let g = random_connected_graph(n, &mut rng);
        let c = random_proper_subset(n, &mut rng);
        if c.len() < 3 || c.len() >= n {
            continue;
        }
        // Eq. 26 fulfilled but not the proven d_C = |C|-1 rule
        if !new_structure(&g, c).unwrap()
            || marginal_dimension(&g, c).unwrap() == c.len() - 1
        {
            continue;
        }
        let walked = random_lc_walk(&g, 8, &mut rng).unwrap();
        let a = condense(&g, c).unwrap().graph;
        let b = condense(&walked, c).unwrap().graph;
        if !class_equivalent(&a, &b).unwrap() {
            return; // counterexample found: the non-rule is confirmed
        }
    }
    panic!("no counterexample found; Observation B.1 not confirmed");
}

#[test]
fn graph6_roundtrip_exhaustive() {
    for n in 1..=6 {
        if n == 1 {
            let g = Graph::empty(1).unwrap();
            assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
            continue;
        }
        for g in connected_graphs(n).unwrap() {
            assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }
    for g in connected_iso_classes(7).unwrap() {
        assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
    }
}

#[test]
fn lc_moves_commute_with_relabeling() {
    // LC_pi(i)(pi(G)) = pi(LC_i(G)) — sanity for the canonical-space walks
    let mut rng = rng(77);
    for _ in 0..200 {
        let n = rng.gen_range(3..=9);
        let g = random_connected_graph(n, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let i = rng.gen_range(0..n);
        let lhs = local_complement(&g.permuted(&perm), perm[i]).unwrap();
        let rhs = local_complement(&g, i).unwrap().permuted(&perm);
        assert_eq!(lhs, rhs);
    }
}
