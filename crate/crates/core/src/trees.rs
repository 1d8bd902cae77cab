//! Labelled planar trees, shuffles and pitchforks.
//!
//! A tree hangs off an implicit root: the stored [`Node`] is the root-adjacent nodal vertex, so
//! its children sit at height 2 and the leaves of a pitchfork at height 3. Nodal vertices are
//! numbered 1, 2, … in depth-first preorder with children visited in planar order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf(usize),
    Vertex(Vec<Node>),
}

impl Node {
    pub fn leaf_labels(&self, out: &mut Vec<usize>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Vertex(ch) => ch.iter().for_each(|c| c.leaf_labels(out)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Vertex(ch) => ch.iter().map(Node::leaf_count).sum(),
        }
    }

    fn vertex_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Vertex(ch) => 1 + ch.iter().map(Node::vertex_count).sum::<usize>(),
        }
    }

    fn canonical(&self) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(*l),
            Node::Vertex(ch) => {
                let mut c: Vec<Node> = ch.iter().map(Node::canonical).collect();
                c.sort();
                Node::Vertex(c)
            }
        }
    }

    fn arities(&self, out: &mut Vec<usize>) {
        if let Node::Vertex(ch) = self {
            out.push(ch.len());
            ch.iter().for_each(|c| c.arities(out));
        }
    }

    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(f(*l)),
            Node::Vertex(ch) => Node::Vertex(ch.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Node::Leaf(l) => Value::from(*l),
            Node::Vertex(ch) => Value::Array(ch.iter().map(Node::to_json).collect()),
        }
    }

    fn from_json(v: &Value) -> Result<Node> {
        match v {
            Value::Number(n) => n
                .as_u64()
                .map(|l| Node::Leaf(l as usize))
                .ok_or_else(|| Error::InvalidTree(format!("leaf label {n} is not a positive integer"))),
            Value::Array(items) => Ok(Node::Vertex(items.iter().map(Node::from_json).collect::<Result<_>>()?)),
            other => Err(Error::InvalidTree(format!("unexpected JSON value {other}"))),
        }
    }

    /// Replace the `*counter`-th vertex (counting down to zero in preorder).
    fn insert_at(&self, counter: &mut usize, t2: &Node) -> Result<Node> {
        match self {
            Node::Leaf(l) => Ok(Node::Leaf(*l)),
            Node::Vertex(ch) => {
                if *counter == 0 {
                    *counter = usize::MAX;
                    let k = t2.leaf_count();
                    if k != ch.len() {
                        return Err(Error::ArityMismatch { expected: ch.len(), actual: k });
                    }
                    return Ok(graft(t2, ch));
                }
                *counter -= 1;
                let mut out = Vec::with_capacity(ch.len());
                for c in ch {
                    out.push(c.insert_at(counter, t2)?);
                }
                Ok(Node::Vertex(out))
            }
        }
    }
}

/// `t2` with its leaf `i` replaced by `subtrees[i − 1]`.
fn graft(t2: &Node, subtrees: &[Node]) -> Node {
    match t2 {
        Node::Leaf(l) => subtrees[*l - 1].clone(),
        Node::Vertex(ch) => Node::Vertex(ch.iter().map(|c| graft(c, subtrees)).collect()),
    }
}

/// A rooted planar tree whose leaves carry the labels `1..=n` bijectively.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledPlanarTree {
    top: Node,
}

impl LabeledPlanarTree {
    /// `top` is the root-adjacent nodal vertex.
    pub fn new(top: Node) -> Result<Self> {
        if !matches!(top, Node::Vertex(_)) {
            return Err(Error::InvalidTree("the root must carry a nodal vertex".into()));
        }
        let mut labels = Vec::new();
        top.leaf_labels(&mut labels);
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted != (1..=labels.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidTree(format!("leaf labels {labels:?} are not a permutation of 1..{}", labels.len())));
        }
        Ok(LabeledPlanarTree { top })
    }

    /// The corolla with leaves labelled in the given planar order.
    pub fn corolla(labels: &[usize]) -> Result<Self> {
        LabeledPlanarTree::new(Node::Vertex(labels.iter().map(|&l| Node::Leaf(l)).collect()))
    }

    pub fn top(&self) -> &Node {
        &self.top
    }

    pub fn arity(&self) -> usize {
        self.top.leaf_count()
    }

    /// Leaf labels in planar order.
    pub fn planar_labels(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.top.leaf_labels(&mut v);
        v
    }

    pub fn nodal_count(&self) -> usize {
        self.top.vertex_count()
    }

    /// Number of incoming edges of each nodal vertex, in preorder.
    pub fn vertex_arities(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.top.arities(&mut v);
        v
    }

    /// The same shape with leaves relabelled `1..n` in planar order.
    pub fn standardized(&self) -> LabeledPlanarTree {
        let labels = self.planar_labels();
        let mut pos = vec![0; labels.len() + 1];
        for (i, &l) in labels.iter().enumerate() {
            pos[l] = i + 1;
        }
        LabeledPlanarTree { top: self.top.relabel(&|l| pos[l]) }
    }

    /// Apply `f` to every leaf label (must be a bijection of `1..=n`).
    pub fn relabeled(&self, f: &dyn Fn(usize) -> usize) -> LabeledPlanarTree {
        LabeledPlanarTree { top: self.top.relabel(f) }
    }

    /// Leaf heights, counting the root as height 0.
    pub fn leaf_heights(&self) -> Vec<usize> {
        fn go(n: &Node, h: usize, out: &mut Vec<usize>) {
            match n {
                Node::Leaf(_) => out.push(h),
                Node::Vertex(ch) => ch.iter().for_each(|c| go(c, h + 1, out)),
            }
        }
        let mut out = Vec::new();
        go(&self.top, 1, &mut out);
        out
    }

    pub fn is_pitchfork(&self) -> bool {
        let Node::Vertex(ch) = &self.top else { return false };
        !ch.is_empty()
            && ch.iter().all(|c| matches!(c, Node::Vertex(g) if !g.is_empty() && g.iter().all(|l| matches!(l, Node::Leaf(_)))))
    }

    pub fn to_json(&self) -> Value {
        self.top.to_json()
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        LabeledPlanarTree::new(Node::from_json(v)?)
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    /// Indented drawing with `•` for the root and `○` for nodal vertices.
    pub fn ascii_art(&self) -> String {
        fn go(n: &Node, prefix: &str, last: bool, out: &mut String) {
            let branch = if last { "└─" } else { "├─" };
            match n {
                Node::Leaf(l) => out.push_str(&format!("{prefix}{branch}{l}\n")),
                Node::Vertex(ch) => {
                    out.push_str(&format!("{prefix}{branch}○\n"));
                    let next = format!("{prefix}{}", if last { "  " } else { "│ " });
                    for (i, c) in ch.iter().enumerate() {
                        go(c, &next, i + 1 == ch.len(), out);
                    }
                }
            }
        }
        let mut out = String::from("•\n");
        go(&self.top, "", true, &mut out);
        out
    }
}

impl fmt::Display for LabeledPlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl Serialize for LabeledPlanarTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledPlanarTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        LabeledPlanarTree::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Isomorphism class of a labelled planar tree, stored as its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeIsoClass(pub LabeledPlanarTree);

impl TreeIsoClass {
    pub fn representative(&self) -> &LabeledPlanarTree {
        &self.0
    }
}

/// Children sorted recursively (leaves before vertices, leaves by label, vertices
/// lexicographically by their sorted children).
pub fn canonical_form(t: &LabeledPlanarTree) -> TreeIsoClass {
    TreeIsoClass(LabeledPlanarTree { top: t.top.canonical() })
}

/// `t •_j t2`: insert `t2` into the `j`-th nodal vertex (1-based preorder) of `t`.
pub fn insert(t: &LabeledPlanarTree, j: usize, t2: &LabeledPlanarTree) -> Result<LabeledPlanarTree> {
    if j == 0 || j > t.nodal_count() {
        return Err(Error::InvalidTree(format!("no nodal vertex {j} in a tree with {}", t.nodal_count())));
    }
    let mut counter = j - 1;
    Ok(LabeledPlanarTree { top: t.top.insert_at(&mut counter, &t2.top)? })
}

/// A permutation of `1..=n` (one-line notation) together with consecutive block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shuffle {
    pub perm: Vec<usize>,
    pub blocks: Vec<usize>,
}

impl Shuffle {
    pub fn identity(n: usize) -> Self {
        Shuffle { perm: (1..=n).collect(), blocks: vec![n] }
    }

    pub fn block_slices(&self) -> Vec<&[usize]> {
        let mut out = Vec::new();
        let mut start = 0;
        for &b in &self.blocks {
            out.push(&self.perm[start..start + b]);
            start += b;
        }
        out
    }

    /// Increasing inside every block.
    pub fn is_shuffle(&self) -> bool {
        let n = self.perm.len();
        let mut sorted = self.perm.clone();
        sorted.sort_unstable();
        sorted == (1..=n).collect::<Vec<_>>()
            && self.blocks.iter().sum::<usize>() == n
            && self.block_slices().iter().all(|b| b.windows(2).all(|w| w[0] < w[1]))
    }

    /// Nonempty blocks whose first entries increase.
    pub fn is_sh(&self) -> bool {
        self.is_shuffle()
            && self.blocks.iter().all(|&b| b > 0)
            && self.block_slices().windows(2).all(|w| w[0][0] < w[1][0])
    }
}

/// All `(p, q)`-shuffles in lexicographic order of their one-line notation.
pub fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    let n = p + q;
    let mut out = Vec::new();
    for first in combinations(n, p) {
        let chosen: BTreeSet<usize> = first.iter().copied().collect();
        let mut perm = first.clone();
        perm.extend((1..=n).filter(|i| !chosen.contains(i)));
        out.push(Shuffle { perm, blocks: vec![p, q] });
    }
    out.sort();
    out
}

/// All `k`-subsets of `1..=n` as increasing vectors, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

/// The elements of 𝔖𝔥_{n,r}: shuffles with `r` nonempty blocks ordered by their minima.
/// Sorted by one-line notation, then block sizes.
pub fn enumerate_sh(n: usize, r: usize) -> Vec<Shuffle> {
    let mut out = Vec::new();
    if r == 0 || r > n {
        return out;
    }
    // restricted growth strings: block index of each element, blocks appear in order of minima
    fn go(i: usize, n: usize, r: usize, used: usize, assign: &mut Vec<usize>, out: &mut Vec<Shuffle>) {
        if i == n {
            if used == r {
                let mut perm = Vec::with_capacity(n);
                let mut blocks = Vec::with_capacity(r);
                for b in 0..r {
                    let members: Vec<usize> = (0..n).filter(|&k| assign[k] == b).map(|k| k + 1).collect();
                    blocks.push(members.len());
                    perm.extend(members);
                }
                out.push(Shuffle { perm, blocks });
            }
            return;
        }
        if r - used > n - i {
            return;
        }
        for b in 0..=used.min(r - 1) {
            assign.push(b);
            go(i + 1, n, r, used.max(b + 1), assign, out);
            assign.pop();
        }
    }
    go(0, n, r, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The pitchfork of a 𝔖𝔥 element: one height-2 vertex per block, carrying the block as leaves.
pub fn pitchfork_from_sh(tau: &Shuffle) -> Result<LabeledPlanarTree> {
    if !tau.is_sh() {
        return Err(Error::InvalidShuffle(format!("{:?} with blocks {:?} is not in 𝔖𝔥", tau.perm, tau.blocks)));
    }
    let ch = tau
        .block_slices()
        .into_iter()
        .map(|b| Node::Vertex(b.iter().map(|&l| Node::Leaf(l)).collect()))
        .collect();
    LabeledPlanarTree::new(Node::Vertex(ch))
}

/// The two-vertex tree of a `(p, r−p)`-shuffle: the lower vertex carries the upper vertex
/// (leaves `σ(1..p)`) followed by the leaves `σ(p+1..r)`.
pub fn tree_from_shuffle(sigma: &Shuffle) -> Result<LabeledPlanarTree> {
    if !sigma.is_shuffle() || sigma.blocks.len() != 2 {
        return Err(Error::InvalidShuffle(format!("{:?} is not a two-block shuffle", sigma.perm)));
    }
    let p = sigma.blocks[0];
    let upper = Node::Vertex(sigma.perm[..p].iter().map(|&l| Node::Leaf(l)).collect());
    let mut ch = vec![upper];
    ch.extend(sigma.perm[p..].iter().map(|&l| Node::Leaf(l)));
    LabeledPlanarTree::new(Node::Vertex(ch))
}

/// One class per shuffle in `⊔_{p=0..n} Sh_{p,n−p}`, listed by `p` then shuffle order.
pub fn enumerate_tree2_classes(n: usize) -> Vec<TreeIsoClass> {
    (0..=n)
        .flat_map(|p| shuffles(p, n - p))
        .map(|s| canonical_form(&tree_from_shuffle(&s).expect("valid shuffle")))
        .collect()
}

/// Leaf data of a pitchfork: planar leaf labels and leaf counts of the height-2 vertices.
pub fn leaf_data(t: &LabeledPlanarTree) -> Result<(Vec<usize>, Vec<usize>)> {
    if !t.is_pitchfork() {
        return Err(Error::InvalidTree(format!("{t} is not a pitchfork")));
    }
    let Node::Vertex(ch) = &t.top else { unreachable!() };
    Ok((t.planar_labels(), ch.iter().map(Node::leaf_count).collect()))
}

/// Compare the trees `t^⋔_τ •₁ t_σ` with the trees `t^⋔_{τ'} •_{i+1} t^⋔_{τ''}`: both families
/// must be free of repetitions and have the same isomorphism classes.
pub fn verify_insertion_bijection(n: usize) -> bool {
    insertion_bijection_counts(n).is_some_and(|(a, b)| a == b)
}

/// Number of trees on each side when the check succeeds.
pub fn insertion_bijection_counts(n: usize) -> Option<(usize, usize)> {
    let mut lhs: BTreeMap<TreeIsoClass, usize> = BTreeMap::new();
    for r in 1..=n {
        for tau in enumerate_sh(n, r) {
            let pf = pitchfork_from_sh(&tau).ok()?;
            for p in 1..=r {
                for sigma in shuffles(p, r - p) {
                    let ts = tree_from_shuffle(&sigma).ok()?;
                    let t = insert(&pf, 1, &ts).ok()?;
                    *lhs.entry(canonical_form(&t)).or_default() += 1;
                }
            }
        }
    }
    let mut rhs: BTreeMap<TreeIsoClass, usize> = BTreeMap::new();
    for r1 in 1..=n {
        for tau1 in enumerate_sh(n, r1) {
            let pf = pitchfork_from_sh(&tau1).ok()?;
            for (i, &m) in tau1.blocks.iter().enumerate() {
                for r2 in 1..=m {
                    for tau2 in enumerate_sh(m, r2) {
                        let t = insert(&pf, i + 2, &pitchfork_from_sh(&tau2).ok()?).ok()?;
                        *rhs.entry(canonical_form(&t)).or_default() += 1;
                    }
                }
            }
        }
    }
    let injective = lhs.values().all(|&c| c == 1) && rhs.values().all(|&c| c == 1);
    (injective && lhs.keys().eq(rhs.keys())).then_some((lhs.len(), rhs.len()))
}

/// Every planar tree with `n` leaves whose nodal vertices have at least two children, with
/// leaves labelled `1..n` in planar order.
pub fn reduced_planar_shapes(n: usize) -> Vec<LabeledPlanarTree> {
    fn shapes(lo: usize, n: usize) -> Vec<Node> {
        // vertex over leaves lo..lo+n with ≥2 children
        let mut out = Vec::new();
        for comp in compositions(n) {
            if comp.len() < 2 {
                continue;
            }
            let mut partial: Vec<Vec<Node>> = vec![vec![]];
            let mut start = lo;
            for &part in &comp {
                let options: Vec<Node> = if part == 1 { vec![Node::Leaf(start)] } else { shapes(start, part) };
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        options.iter().map(move |o| {
                            let mut q = p.clone();
                            q.push(o.clone());
                            q
                        })
                    })
                    .collect();
                start += part;
            }
            out.extend(partial.into_iter().map(Node::Vertex));
        }
        out
    }
    if n == 1 {
        return vec![LabeledPlanarTree::corolla(&[1]).unwrap()];
    }
    shapes(1, n).into_iter().map(|top| LabeledPlanarTree { top }).collect()
}

/// Ordered compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tree(s: &str) -> LabeledPlanarTree {
        LabeledPlanarTree::from_json(&serde_json::from_str(s).unwrap()).unwrap()
    }

    /// Isomorphism test by backtracking over child matchings.
    fn iso(a: &Node, b: &Node) -> bool {
        match (a, b) {
            (Node::Leaf(x), Node::Leaf(y)) => x == y,
            (Node::Vertex(xs), Node::Vertex(ys)) => {
                if xs.len() != ys.len() {
                    return false;
                }
                fn matching(xs: &[Node], ys: &mut Vec<&Node>) -> bool {
                    let Some((first, rest)) = xs.split_first() else { return ys.is_empty() };
                    for i in 0..ys.len() {
                        if iso(first, ys[i]) {
                            let y = ys.remove(i);
                            if matching(rest, ys) {
                                return true;
                            }
                            ys.insert(i, y);
                        }
                    }
                    false
                }
                matching(xs, &mut ys.iter().collect())
            }
            _ => false,
        }
    }

    fn iso_class_count(trees: &[LabeledPlanarTree]) -> usize {
        let mut reps: Vec<&LabeledPlanarTree> = Vec::new();
        for t in trees {
            if !reps.iter().any(|r| iso(&r.top, &t.top)) {
                reps.push(t);
            }
        }
        reps.len()
    }

    fn all_labelings(shape: &LabeledPlanarTree) -> Vec<LabeledPlanarTree> {
        permutations(shape.arity()).into_iter().map(|p| shape.relabeled(&|l| p[l - 1])).collect()
    }

    fn stirling2(n: usize, r: usize) -> usize {
        // count set partitions directly: assign each element a block label, divide out labelings
        fn count(i: usize, n: usize, r: usize, sizes: &mut Vec<usize>) -> usize {
            if i == n {
                return usize::from(sizes.iter().all(|&s| s > 0));
            }
            let mut total = 0;
            for b in 0..r {
                sizes[b] += 1;
                total += count(i + 1, n, r, sizes);
                sizes[b] -= 1;
            }
            total
        }
        let labelled = count(0, n, r, &mut vec![0; r]);
        labelled / (1..=r).product::<usize>()
    }

    #[test]
    fn corolla_reorderings_share_a_class() {
        let a = LabeledPlanarTree::corolla(&[2, 1]).unwrap();
        let b = LabeledPlanarTree::corolla(&[1, 2]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
    }

    #[test]
    fn figure_one_pitchfork() {
        let t = tree("[[2,1],[4],[3]]");
        let permuted = tree("[[3],[2,1],[4]]");
        assert_eq!(canonical_form(&t), canonical_form(&permuted));
        assert!(t.is_pitchfork());
        assert!(t.leaf_heights().iter().all(|&h| h == 3));
        let (lambda, nz) = leaf_data(&t).unwrap();
        assert_eq!(lambda, vec![2, 1, 4, 3]);
        assert_eq!(nz, vec![2, 1, 1]);
    }

    #[test]
    fn non_pitchfork_rejected() {
        let t = tree("[[1,[2,3]],4]");
        assert!(leaf_data(&t).is_err());
    }

    #[test]
    fn malformed_trees_rejected() {
        assert!(LabeledPlanarTree::from_json(&serde_json::json!([1, 1])).is_err());
        assert!(LabeledPlanarTree::from_json(&serde_json::json!([1, 3])).is_err());
        assert!(LabeledPlanarTree::from_json(&serde_json::json!(1)).is_err());
    }

    #[test]
    fn degenerate_pitchforks() {
        let id = Shuffle::identity(4);
        let (lambda, nz) = leaf_data(&pitchfork_from_sh(&id).unwrap()).unwrap();
        assert_eq!((lambda, nz), (vec![1, 2, 3, 4], vec![4]));
        let all_single = Shuffle { perm: vec![1, 2, 3, 4], blocks: vec![1; 4] };
        let (_, nz) = leaf_data(&pitchfork_from_sh(&all_single).unwrap()).unwrap();
        assert_eq!(nz, vec![1; 4]);
        let bad = Shuffle { perm: vec![2, 1], blocks: vec![1, 1] };
        assert!(pitchfork_from_sh(&bad).is_err());
    }

    #[test]
    fn canonical_classes_match_pairwise_iso_oracle() {
        for n in 1..=3 {
            let trees: Vec<LabeledPlanarTree> = reduced_planar_shapes(n).iter().flat_map(all_labelings).collect();
            let classes: BTreeSet<TreeIsoClass> = trees.iter().map(canonical_form).collect();
            assert_eq!(classes.len(), iso_class_count(&trees), "n = {n}");
        }
    }

    #[test]
    fn two_vertex_classes_match_brute_force() {
        for n in 1..=4 {
            // every planar 2-vertex tree: upper vertex at any position among the lower leaves
            let mut all = Vec::new();
            for labels in permutations(n) {
                for p in 0..=n {
                    for pos in 0..=(n - p) {
                        let upper = Node::Vertex(labels[..p].iter().map(|&l| Node::Leaf(l)).collect());
                        let mut lower: Vec<Node> = labels[p..].iter().map(|&l| Node::Leaf(l)).collect();
                        lower.insert(pos, upper);
                        all.push(LabeledPlanarTree::new(Node::Vertex(lower)).unwrap());
                    }
                }
            }
            let expected = iso_class_count(&all);
            let classes = enumerate_tree2_classes(n);
            assert_eq!(classes.len(), expected);
            assert_eq!(classes.len(), 1 << n);
            assert_eq!(classes.iter().collect::<BTreeSet<_>>().len(), classes.len());
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(0, 3), vec![Shuffle { perm: vec![1, 2, 3], blocks: vec![0, 3] }]);
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert!(shuffles(2, 2).iter().all(Shuffle::is_shuffle));
    }

    #[test]
    fn sh_counts_are_stirling_numbers() {
        for n in 1..=7 {
            for r in 1..=n {
                let all = enumerate_sh(n, r);
                assert_eq!(all.len(), stirling2(n, r), "({n},{r})");
                assert!(all.iter().all(|t| t.is_sh() && t.perm[0] == 1));
            }
        }
        assert_eq!(enumerate_sh(3, 1), vec![Shuffle::identity(3)]);
        assert_eq!(enumerate_sh(3, 3), vec![Shuffle { perm: vec![1, 2, 3], blocks: vec![1, 1, 1] }]);
    }

    #[test]
    fn pitchforks_of_sh_4_2_are_distinct() {
        let classes: BTreeSet<TreeIsoClass> =
            enumerate_sh(4, 2).iter().map(|t| canonical_form(&pitchfork_from_sh(t).unwrap())).collect();
        assert_eq!(classes.len(), 7);
    }

    #[test]
    fn shuffle_trees() {
        let s = Shuffle { perm: vec![1, 3, 2], blocks: vec![2, 1] };
        assert_eq!(tree_from_shuffle(&s).unwrap(), tree("[[1,3],2]"));
        let p0 = Shuffle { perm: vec![1, 2], blocks: vec![0, 2] };
        assert_eq!(tree_from_shuffle(&p0).unwrap(), tree("[[],1,2]"));
        let pr = Shuffle { perm: vec![1, 2], blocks: vec![2, 0] };
        assert_eq!(tree_from_shuffle(&pr).unwrap(), tree("[[1,2]]"));
    }

    #[test]
    fn insertion_unit_and_node_count() {
        let t = tree("[[1],[2,3]]");
        let unit = LabeledPlanarTree::corolla(&[1]).unwrap();
        assert_eq!(insert(&t, 2, &unit).unwrap(), t);
        assert!(matches!(insert(&t, 3, &unit), Err(Error::ArityMismatch { expected: 2, actual: 1 })));
        for tau in enumerate_sh(3, 2) {
            for s in shuffles(1, 1) {
                let r = insert(&pitchfork_from_sh(&tau).unwrap(), 1, &tree_from_shuffle(&s).unwrap()).unwrap();
                assert_eq!(r.arity(), 3);
                assert_eq!(r.nodal_count(), 4);
            }
        }
    }

    /// Leaf set of every nodal vertex, used to track vertices across insertions in reduced trees.
    fn vertex_leaf_sets(n: &Node, out: &mut Vec<BTreeSet<usize>>) {
        if let Node::Vertex(ch) = n {
            let mut l = Vec::new();
            n.leaf_labels(&mut l);
            out.push(l.into_iter().collect());
            ch.iter().for_each(|c| vertex_leaf_sets(c, out));
        }
    }

    #[test]
    fn insertion_at_disjoint_vertices_commutes() {
        for n in 2..=4 {
            for t in reduced_planar_shapes(n) {
                let mut sets = Vec::new();
                vertex_leaf_sets(&t.top, &mut sets);
                let ar = t.vertex_arities();
                for i in 0..ar.len() {
                    for j in 0..ar.len() {
                        if i == j {
                            continue;
                        }
                        for a in reduced_planar_shapes(ar[i]) {
                            for b in reduced_planar_shapes(ar[j]) {
                                let first = insert(&t, i + 1, &a).unwrap();
                                let mut s1 = Vec::new();
                                vertex_leaf_sets(&first.top, &mut s1);
                                let jj = s1.iter().position(|s| *s == sets[j]).unwrap();
                                let lhs = insert(&first, jj + 1, &b).unwrap();
                                let second = insert(&t, j + 1, &b).unwrap();
                                let mut s2 = Vec::new();
                                vertex_leaf_sets(&second.top, &mut s2);
                                let ii = s2.iter().position(|s| *s == sets[i]).unwrap();
                                let rhs = insert(&second, ii + 1, &a).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn insertion_bijection_small() {
        assert_eq!(insertion_bijection_counts(2), Some((4, 4)));
        for n in 1..=4 {
            assert!(verify_insertion_bijection(n), "n = {n}");
        }
    }

    #[test]
    fn json_and_ascii() {
        let t = tree("[[2,1],[4],[3]]");
        assert_eq!(t.to_json_string(), "[[2,1],[4],[3]]");
        let art = t.ascii_art();
        assert!(art.starts_with("•\n└─○\n"));
        assert_eq!(art.lines().count(), 9);
    }

    fn shuffle_children(n: &Node, seed: &mut u64) -> Node {
        match n {
            Node::Leaf(l) => Node::Leaf(*l),
            Node::Vertex(ch) => {
                let mut c: Vec<Node> = ch.iter().map(|x| shuffle_children(x, seed)).collect();
                for i in (1..c.len()).rev() {
                    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let j = (*seed >> 33) as usize % (i + 1);
                    c.swap(i, j);
                }
                Node::Vertex(c)
            }
        }
    }

    proptest! {
        /// Canonical form is idempotent and blind to child reorderings.
        #[test]
        fn canonical_form_is_orbit_invariant(n in 1usize..=5, pick in 0usize..1000, seed in any::<u64>()) {
            let shapes = reduced_planar_shapes(n);
            let shape = &shapes[pick % shapes.len()];
            let perms = permutations(n);
            let p = &perms[(pick / shapes.len()) % perms.len()];
            let t = shape.relabeled(&|l| p[l - 1]);
            let mut s = seed;
            let moved = LabeledPlanarTree::new(shuffle_children(&t.top, &mut s)).unwrap();
            let c = canonical_form(&t);
            prop_assert_eq!(&canonical_form(c.representative()), &c);
            prop_assert_eq!(canonical_form(&moved), c);
        }
    }

    #[test]
    fn pitchfork_class_extraction_is_injective() {
        for n in 1..=5 {
            for r in 1..=n {
                let all = enumerate_sh(n, r);
                let classes: BTreeSet<TreeIsoClass> =
                    all.iter().map(|t| canonical_form(&pitchfork_from_sh(t).unwrap())).collect();
                assert_eq!(classes.len(), all.len());
            }
        }
    }
}
