//! The two built-in cooperads: the arity-wise duals of the operadic suspensions of `Com` and
//! `Ass`, realised inside `End_Y` with `Y` one-dimensional in degree 1.
//!
//! In `End_Y` the generator of arity `n` has degree `1 - n`, and composing along a tree produces
//! the Koszul sign [`sign_end`] of moving the generators (listed in preorder) past the inputs
//! into the nested order of the tree.

use std::collections::{BTreeMap, HashMap};

use super::{ArityData, PartialKey, PartialTable, Term, TruncatedCooperad};
use crate::linalg::{koszul_sign, permutation_sign, Scalar, SparseVec};
use crate::trees::{permutations, LabeledPlanarTree, Node};

/// Sign of composing generators of `End_Y` along the shape of a tree.
pub fn sign_end(t: &Node) -> i64 {
    // symbols: nodal vertices in preorder, then the leaves in planar order
    fn walk(n: &Node, vdeg: &mut Vec<i64>, leaves: &mut usize, seq: &mut Vec<(bool, usize)>) {
        match n {
            Node::Leaf(_) => {
                seq.push((false, *leaves));
                *leaves += 1;
            }
            Node::Vertex(ch) => {
                seq.push((true, vdeg.len()));
                vdeg.push(1 - ch.len() as i64);
                ch.iter().for_each(|c| walk(c, vdeg, leaves, seq));
            }
        }
    }
    let (mut vdeg, mut leaves, mut seq) = (Vec::new(), 0, Vec::new());
    walk(t, &mut vdeg, &mut leaves, &mut seq);
    let nv = vdeg.len();
    let mut deg = vdeg;
    deg.extend(std::iter::repeat_n(1, leaves));
    let order: Vec<usize> = seq.iter().map(|&(v, i)| if v { i } else { nv + i }).collect();
    koszul_sign(&deg, &order)
}

fn sgn_one_based(lambda: &[usize]) -> i64 {
    let zero: Vec<usize> = lambda.iter().map(|l| l - 1).collect();
    permutation_sign(&zero)
}

/// `Δ_t(c_n)` in the cocommutative cooperad: one term whose factors are all the unique basis
/// vector of their arity, or nothing when some vertex has no inputs.
pub fn direct_cocom_delta(t: &LabeledPlanarTree) -> Option<Term> {
    let ar = t.vertex_arities();
    if ar.contains(&0) {
        return None;
    }
    let std = super::standard_node(t.top());
    let s = sign_end(&std) * sgn_one_based(&t.planar_labels());
    Some((vec![0; ar.len()], Scalar::from_int(s)))
}

/// Lexicographic rank of a permutation of `1..=n` in one-line notation.
pub fn perm_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&q| q < p[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// `Δ_t(e_Ω)` in the associative cooperad. Vanishes unless the leaves above every vertex form
/// a contiguous block of `Ω`; the factor at a vertex records the order in which its children
/// appear in `Ω`.
pub fn direct_coass_delta(t: &LabeledPlanarTree, omega: &[usize]) -> Option<Term> {
    let n = omega.len();
    let mut pos = vec![0; n + 1];
    for (i, &l) in omega.iter().enumerate() {
        pos[l] = i;
    }
    // (min, max) position of the leaves of a subtree
    fn span(node: &Node, pos: &[usize]) -> (usize, usize) {
        let mut ls = Vec::new();
        node.leaf_labels(&mut ls);
        let ps = ls.iter().map(|&l| pos[l]);
        (ps.clone().min().unwrap_or(usize::MAX), ps.max().unwrap_or(0))
    }
    fn walk(node: &Node, pos: &[usize], out: &mut Vec<usize>) -> bool {
        let Node::Vertex(ch) = node else { return true };
        if ch.is_empty() {
            return false;
        }
        let (lo, hi) = span(node, pos);
        if hi - lo + 1 != node.leaf_count() {
            return false;
        }
        let mut order: Vec<usize> = (0..ch.len()).collect();
        order.sort_by_key(|&c| span(&ch[c], pos).0);
        let omega_v: Vec<usize> = order.iter().map(|c| c + 1).collect();
        out.push(perm_rank(&omega_v));
        ch.iter().all(|c| walk(c, pos, out))
    }
    let mut factors = Vec::new();
    if !walk(t.top(), &pos, &mut factors) {
        return None;
    }
    let std = super::standard_node(t.top());
    let s = sign_end(&std) * sgn_one_based(&t.planar_labels());
    Some((factors, Scalar::from_int(s)))
}

/// The standard two-vertex tree of shape `(k, i, p)`.
pub(crate) fn two_vertex_tree(k: usize, i: usize, p: usize) -> LabeledPlanarTree {
    let mut ch: Vec<Node> = (1..i).map(Node::Leaf).collect();
    ch.push(Node::Vertex((i..i + p).map(Node::Leaf).collect()));
    ch.extend((i + p..k + p).map(Node::Leaf));
    LabeledPlanarTree::new(Node::Vertex(ch)).expect("valid two-vertex tree")
}

fn partials_from(cap: usize, dims: &[usize], f: impl Fn(&LabeledPlanarTree, usize) -> Option<Term>) -> BTreeMap<PartialKey, PartialTable> {
    let mut out = BTreeMap::new();
    for n in 1..=cap {
        for k in 1..=n {
            let p = n + 1 - k;
            for i in 1..=k {
                let t = two_vertex_tree(k, i, p);
                let table: PartialTable = (0..dims[n - 1])
                    .map(|x| f(&t, x).into_iter().map(|(fs, c)| (fs[0], fs[1], c)).collect())
                    .collect();
                out.insert((k, i, p), table);
            }
        }
    }
    out
}

/// The cocommutative cooperad: `C(n)` spanned by `c_n` in degree `1 - n`, with `S_n` acting by
/// the sign representation.
pub fn builtin_cocom_shifted(cap: usize) -> TruncatedCooperad {
    let arities = (1..=cap)
        .map(|n| ArityData {
            labels: vec![format!("c{n}")],
            degrees: vec![1 - n as i64],
            levels: vec![n as u32 - 1],
            action: (1..n).map(|_| vec![SparseVec::single(0, -Scalar::one())]).collect(),
            differential: Vec::new(),
        })
        .collect();
    let dims = vec![1; cap];
    let partials = partials_from(cap, &dims, |t, _| direct_cocom_delta(t));
    TruncatedCooperad::from_tables("cocom", arities, 0, partials).expect("built-in tables are well formed")
}

/// The associative cooperad: `C(n)` spanned by `e_Ω` for `Ω ∈ S_n` (lexicographic order) in
/// degree `1 - n`, with `ρ(λ)e_Ω = sgn(λ) e_{λ⁻¹∘Ω}`.
pub fn builtin_coass_shifted(cap: usize) -> TruncatedCooperad {
    let mut arities = Vec::new();
    let mut perms_by_n = Vec::new();
    for n in 1..=cap {
        let perms = permutations(n);
        let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let action = (1..n)
            .map(|j| {
                perms
                    .iter()
                    .map(|om| {
                        let swapped: Vec<usize> = om
                            .iter()
                            .map(|&v| if v == j { j + 1 } else if v == j + 1 { j } else { v })
                            .collect();
                        SparseVec::single(index[&swapped], -Scalar::one())
                    })
                    .collect()
            })
            .collect();
        arities.push(ArityData {
            labels: perms.iter().map(|p| format!("e{}", perm_label(p))).collect(),
            degrees: vec![1 - n as i64; perms.len()],
            levels: vec![n as u32 - 1; perms.len()],
            action,
            differential: Vec::new(),
        });
        perms_by_n.push(perms);
    }
    let dims: Vec<usize> = perms_by_n.iter().map(Vec::len).collect();
    let partials = partials_from(cap, &dims, |t, x| direct_coass_delta(t, &perms_by_n[t.arity() - 1][x]));
    TruncatedCooperad::from_tables("coass", arities, 0, partials).expect("built-in tables are well formed")
}

fn perm_label(p: &[usize]) -> String {
    if p.iter().all(|&v| v < 10) {
        p.iter().map(|v| v.to_string()).collect()
    } else {
        p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_rank_matches_enumeration() {
        for n in 1..=5 {
            for (i, p) in permutations(n).iter().enumerate() {
                assert_eq!(perm_rank(p), i);
            }
        }
    }

    #[test]
    fn corolla_sign_is_trivial() {
        for n in 0..6 {
            let t = Node::Vertex((1..=n).map(Node::Leaf).collect());
            assert_eq!(sign_end(&t), 1);
        }
    }

    #[test]
    fn two_vertex_sign_by_hand() {
        // θ_2 θ_2 y1 y2 y3 → θ_2 θ_2 y1 y2 y3 for [[1,2],3]: the inner vertex stays put
        assert_eq!(sign_end(&two_vertex_tree(2, 1, 2).top().clone()), 1);
        // [1,[2,3]]: θ_a θ_b y1 y2 y3 → θ_a y1 θ_b y2 y3, θ_b (odd) passes y1 (odd)
        assert_eq!(sign_end(&two_vertex_tree(2, 2, 2).top().clone()), -1);
    }

    #[test]
    fn coass_dimensions() {
        let c = builtin_coass_shifted(3);
        assert_eq!(c.dim(3), 6);
        assert_eq!(c.label(3, 5), "e321");
        assert_eq!(c.degree(3, 0), -2);
    }

    #[test]
    fn coass_non_contiguous_block_vanishes() {
        let t = LabeledPlanarTree::new(Node::Vertex(vec![Node::Vertex(vec![Node::Leaf(1), Node::Leaf(3)]), Node::Leaf(2)])).unwrap();
        assert!(direct_coass_delta(&t, &[1, 2, 3]).is_none());
        assert!(direct_coass_delta(&t, &[1, 3, 2]).is_some());
        assert!(direct_coass_delta(&t, &[2, 3, 1]).is_some());
    }
}
