//! Axiom checks for tabulated cooperads.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{collect_terms, vertex_positions, DeltaTable, Term, TruncatedCooperad};
use crate::error::{Error, Result};
use crate::linalg::{Scalar, SparseVec};
use crate::trees::{LabeledPlanarTree, Node};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationSummary {
    pub max_arity: usize,
    pub trees: usize,
    pub cuts: usize,
    pub swaps: usize,
}

/// Planar shapes with `n` leaves labelled in planar order, every vertex having at least
/// `min_arity` inputs and at most `max_vertices` nodal vertices in total.
pub(crate) fn planar_shapes(n: usize, min_arity: usize, max_vertices: usize) -> Vec<Node> {
    fn forests(n: usize, budget: usize, min_arity: usize) -> Vec<(Vec<Node>, usize)> {
        if n == 0 {
            return vec![(Vec::new(), 0)];
        }
        let mut out = Vec::new();
        for (rest, used) in forests(n - 1, budget, min_arity) {
            let mut f = vec![Node::Leaf(0)];
            f.extend(rest);
            out.push((f, used));
        }
        for m in 1..=n {
            for (tree, tv) in trees(m, budget, min_arity) {
                for (rest, used) in forests(n - m, budget - tv, min_arity) {
                    let mut f = vec![tree.clone()];
                    f.extend(rest);
                    out.push((f, tv + used));
                }
            }
        }
        out
    }
    fn trees(n: usize, budget: usize, min_arity: usize) -> Vec<(Node, usize)> {
        if budget == 0 {
            return Vec::new();
        }
        forests(n, budget - 1, min_arity)
            .into_iter()
            .filter(|(f, _)| f.len() >= min_arity.max(1))
            .map(|(f, used)| (Node::Vertex(f), used + 1))
            .collect()
    }
    trees(n, max_vertices, min_arity).into_iter().map(|(t, _)| super::standard_node(&t)).collect()
}

impl TruncatedCooperad {
    /// The standard trees on which coassociativity and equivariance are checked: all reduced
    /// trees, and all trees with at most three nodal vertices.
    pub(crate) fn test_shapes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for n in 1..=self.cap {
            let mut shapes = planar_shapes(n, 2, n);
            for s in planar_shapes(n, 1, 3) {
                if !shapes.contains(&s) {
                    shapes.push(s);
                }
            }
            out.extend(shapes.into_iter().filter(|s| {
                LabeledPlanarTree::new(s.clone()).unwrap().vertex_arities().iter().all(|&a| a <= self.cap)
            }));
        }
        out
    }

    /// Check every axiom: action relations, counit, coassociativity on all cuts, equivariance
    /// under swapping adjacent children, filtration compatibility and the differential.
    pub fn validate(&self) -> Result<ValidationSummary> {
        let fail = |m: String| Err(Error::InvalidCooperad(m));
        let mut summary = ValidationSummary { max_arity: self.cap, ..Default::default() };
        self.check_action()?;
        self.check_counit()?;
        for t in self.test_shapes() {
            summary.trees += 1;
            let tree = LabeledPlanarTree::new(t.clone())?;
            let derived = self.derive(&t);
            for (u, i) in vertex_positions(&t).into_iter().skip(1) {
                summary.cuts += 1;
                if self.cut(&t, u, i) != *derived {
                    return fail(format!("not coassociative: cutting {tree} above vertex {} disagrees", u + 1));
                }
            }
            self.check_filtration(&tree, &derived)?;
            summary.swaps += self.check_swaps(&t)?;
        }
        self.check_differential()?;
        Ok(summary)
    }

    fn check_action(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidCooperad(m));
        for n in 1..=self.cap {
            let a = self.arity(n);
            let apply = |j: usize, v: &SparseVec| -> SparseVec {
                let mut out = SparseVec::new();
                for (x, c) in v.iter() {
                    out.add_scaled(&a.action[j][x], c);
                }
                out
            };
            for x in 0..a.dim() {
                let e = SparseVec::unit(x);
                for j in 0..n - 1 {
                    let img = apply(j, &e);
                    if img.iter().any(|(y, _)| a.degrees[y] != a.degrees[x]) {
                        return fail(format!("arity {n}: s_{} does not preserve degrees", j + 1));
                    }
                    if img.iter().any(|(y, _)| self.level(n, y) > self.level(n, x)) {
                        return fail(format!("arity {n}: s_{} does not preserve the filtration", j + 1));
                    }
                    if apply(j, &img) != e {
                        return fail(format!("arity {n}: s_{} is not an involution", j + 1));
                    }
                    for k in 0..n - 1 {
                        let (lhs, rhs) = if k == j + 1 {
                            (apply(j, &apply(k, &img)), apply(k, &apply(j, &apply(k, &e))))
                        } else if k > j + 1 {
                            (apply(k, &img), apply(j, &apply(k, &e)))
                        } else {
                            continue;
                        };
                        if lhs != rhs {
                            return fail(format!("arity {n}: s_{} and s_{} violate the braid relations", j + 1, k + 1));
                        }
                    }
                }
                if !self.is_coaug(n, x) && self.level(n, x) == 0 {
                    return fail(format!("arity {n}: only the coaugmentation may have level 0"));
                }
            }
        }
        Ok(())
    }

    fn check_counit(&self) -> Result<()> {
        for n in 1..=self.cap {
            for x in 0..self.dim(n) {
                let mut left = SparseVec::new();
                for (y, z, c) in self.partial((1, 1, n)).get(x).into_iter().flatten() {
                    if *y == self.coaug {
                        left.add_term(*z, c.clone());
                    }
                }
                if left != SparseVec::unit(x) {
                    return Err(Error::InvalidCooperad(format!("arity {n}: left counit law fails on {}", self.label(n, x))));
                }
                for i in 1..=n {
                    let mut right = SparseVec::new();
                    for (y, z, c) in &self.partial((n, i, 1))[x] {
                        if *z == self.coaug {
                            right.add_term(*y, c.clone());
                        }
                    }
                    if right != SparseVec::unit(x) {
                        return Err(Error::InvalidCooperad(format!("arity {n}: right counit law fails at input {i}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_filtration(&self, t: &LabeledPlanarTree, table: &DeltaTable) -> Result<()> {
        let ar = t.vertex_arities();
        for (x, terms) in table.iter().enumerate() {
            for (f, _) in terms {
                let total: u32 = ar.iter().zip(f).map(|(&n, &y)| self.level(n, y)).sum();
                if total > self.level(t.arity(), x) {
                    return Err(Error::InvalidCooperad(format!("decomposition along {t} raises the filtration level")));
                }
            }
        }
        Ok(())
    }

    /// Swap every pair of adjacent children in `t` and compare with the transported decomposition.
    fn check_swaps(&self, t: &Node) -> Result<usize> {
        let tree = LabeledPlanarTree::new(t.clone())?;
        let ar = tree.vertex_arities();
        let base = self.derive(t);
        let blocks = subtree_blocks(t);
        let mut count = 0;
        for (v, &arity) in ar.iter().enumerate() {
            for j in 0..arity.saturating_sub(1) {
                count += 1;
                let swapped = LabeledPlanarTree::new(swap_children(t, v, j))?;
                let direct = self.delta(&swapped)?;
                let gen = &self.arity(arity).action[j];
                let (bj, bk) = (blocks[v][j].clone(), blocks[v][j + 1].clone());
                let transported: DeltaTable = base
                    .iter()
                    .map(|terms| {
                        let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
                        for (f, c) in terms {
                            let s = Scalar::sign(
                                self.factor_degree(&ar[bj.clone()], &f[bj.clone()]) * self.factor_degree(&ar[bk.clone()], &f[bk.clone()]),
                            );
                            for (y, cy) in gen[f[v]].iter() {
                                let mut g = f.clone();
                                g[v] = y;
                                let mut h = g[..bj.start].to_vec();
                                h.extend_from_slice(&g[bk.clone()]);
                                h.extend_from_slice(&g[bj.clone()]);
                                h.extend_from_slice(&g[bk.end..]);
                                *acc.entry(h).or_insert_with(Scalar::zero) += c * cy * &s;
                            }
                        }
                        collect_terms(acc)
                    })
                    .collect();
                if transported != *direct {
                    return Err(Error::NotEquivariant(format!(
                        "decomposition along {swapped} is not the transport of the one along {tree}"
                    )));
                }
            }
        }
        Ok(count)
    }

    fn check_differential(&self) -> Result<()> {
        if !self.has_differential() {
            return Ok(());
        }
        let fail = |m: String| Err(Error::InvalidCooperad(m));
        let d_vec = |n: usize, v: &SparseVec| -> SparseVec {
            let mut out = SparseVec::new();
            for (x, c) in v.iter() {
                out.add_scaled(&self.differential(n, x), c);
            }
            out
        };
        if !self.differential(1, self.coaug).is_zero() {
            return fail("the differential does not vanish on the coaugmentation".into());
        }
        for n in 1..=self.cap {
            let a = self.arity(n);
            for x in 0..a.dim() {
                let dx = self.differential(n, x);
                if dx.iter().any(|(y, _)| a.degrees[y] != a.degrees[x] + 1) {
                    return fail(format!("arity {n}: the differential does not have degree 1"));
                }
                if dx.iter().any(|(y, _)| self.level(n, y) > self.level(n, x)) {
                    return fail(format!("arity {n}: the differential does not preserve the filtration"));
                }
                if !d_vec(n, &dx).is_zero() {
                    return Err(Error::DSquaredNonzero(a.degrees[x]));
                }
                for j in 0..n - 1 {
                    let mut lhs = SparseVec::new();
                    for (y, c) in a.action[j][x].iter() {
                        lhs.add_scaled(&self.differential(n, y), c);
                    }
                    let mut rhs = SparseVec::new();
                    for (y, c) in dx.iter() {
                        rhs.add_scaled(&a.action[j][y], c);
                    }
                    if lhs != rhs {
                        return fail(format!("arity {n}: the differential does not commute with s_{}", j + 1));
                    }
                }
            }
        }
        for (&(k, i, p), table) in self.partials() {
            let n = k + p - 1;
            for x in 0..self.dim(n) {
                let mut lhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
                for (x2, c) in self.differential(n, x).iter() {
                    for (y, z, cc) in &table[x2] {
                        *lhs.entry((*y, *z)).or_insert_with(Scalar::zero) += c * cc;
                    }
                }
                let mut rhs: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
                for (y, z, c) in &table[x] {
                    for (y2, cy) in self.differential(k, *y).iter() {
                        *rhs.entry((y2, *z)).or_insert_with(Scalar::zero) += c * cy;
                    }
                    let s = Scalar::sign(self.degree(k, *y));
                    for (z2, cz) in self.differential(p, *z).iter() {
                        *rhs.entry((*y, z2)).or_insert_with(Scalar::zero) += c * cz * &s;
                    }
                }
                lhs.retain(|_, c| !c.is_zero());
                rhs.retain(|_, c| !c.is_zero());
                if lhs != rhs {
                    return fail(format!("the differential is not a coderivation along {:?}", (k, i, p)));
                }
            }
        }
        Ok(())
    }

    /// Direct reference decomposition, for comparison against a closed formula.
    pub fn compare_with(&self, t: &LabeledPlanarTree, expected: impl Fn(usize) -> Vec<Term>) -> Result<bool> {
        let table = self.delta(t)?;
        Ok((0..self.dim(t.arity())).all(|x| {
            let mut e = expected(x);
            e.sort();
            table[x] == e
        }))
    }
}

/// For every nodal vertex (preorder), the preorder index range of each child's subtree; empty
/// for leaf children.
fn subtree_blocks(t: &Node) -> Vec<Vec<std::ops::Range<usize>>> {
    fn go(n: &Node, next: &mut usize, out: &mut Vec<Vec<std::ops::Range<usize>>>) -> std::ops::Range<usize> {
        let start = *next;
        let Node::Vertex(ch) = n else { return start..start };
        let me = out.len();
        out.push(Vec::new());
        *next += 1;
        for c in ch {
            let r = go(c, next, out);
            out[me].push(r);
        }
        start..*next
    }
    let mut out = Vec::new();
    go(t, &mut 0, &mut out);
    out
}

fn swap_children(t: &Node, v: usize, j: usize) -> Node {
    fn go(n: &Node, counter: &mut usize, v: usize, j: usize) -> Node {
        match n {
            Node::Leaf(l) => Node::Leaf(*l),
            Node::Vertex(ch) => {
                let me = *counter;
                *counter += 1;
                let mut c: Vec<Node> = ch.iter().map(|c| go(c, counter, v, j)).collect();
                if me == v {
                    c.swap(j, j + 1);
                }
                Node::Vertex(c)
            }
        }
    }
    go(t, &mut 0, v, j)
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_coass_shifted, builtin_cocom_shifted, direct_coass_delta, direct_cocom_delta};
    use super::*;
    use crate::trees::permutations;

    #[test]
    fn shape_counts() {
        // reduced planar trees: little Schröder numbers
        let counts: Vec<usize> = (1..=5).map(|n| planar_shapes(n, 2, n).len()).collect();
        assert_eq!(counts, vec![0, 1, 3, 11, 45]);
    }

    #[test]
    fn builtins_validate() {
        for cap in 1..=5 {
            builtin_cocom_shifted(cap).validate().unwrap();
        }
        for cap in 1..=4 {
            builtin_coass_shifted(cap).validate().unwrap();
        }
    }

    fn labelled_trees(c: &TruncatedCooperad) -> Vec<LabeledPlanarTree> {
        let mut out = Vec::new();
        for s in c.test_shapes() {
            let t = LabeledPlanarTree::new(s).unwrap();
            for p in permutations(t.arity()) {
                out.push(t.relabeled(&|l| p[l - 1]));
            }
        }
        out
    }

    #[test]
    fn derived_cocom_matches_closed_form() {
        let c = builtin_cocom_shifted(4);
        for t in labelled_trees(&c) {
            assert!(c.compare_with(&t, |_| direct_cocom_delta(&t).into_iter().collect()).unwrap(), "{t}");
        }
    }

    #[test]
    fn derived_coass_matches_closed_form() {
        let c = builtin_coass_shifted(4);
        for t in labelled_trees(&c) {
            let perms = permutations(t.arity());
            assert!(c.compare_with(&t, |x| direct_coass_delta(&t, &perms[x]).into_iter().collect()).unwrap(), "{t}");
        }
    }

    #[test]
    fn broken_sign_is_detected() {
        let c = builtin_cocom_shifted(3);
        let mut partials = c.partials().clone();
        for row in partials.get_mut(&(2, 2, 2)).unwrap() {
            for term in row.iter_mut() {
                term.2 = -term.2.clone();
            }
        }
        let arities = (1..=3).map(|n| c.arity(n).clone()).collect();
        let bad = TruncatedCooperad::from_tables("bad", arities, 0, partials).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let c = builtin_cocom_shifted(2);
        let t = LabeledPlanarTree::corolla(&[1, 2, 3]).unwrap();
        assert!(matches!(c.delta(&t), Err(Error::ArityOverflow { arity: 3, cap: 2 })));
    }
}
