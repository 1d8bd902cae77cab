//! Symmetric group actions and coinvariants of `X ⊗ V^{⊗n}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use super::{GradedMap, GradedSpace, Matrix, Scalar, SparseVec};
use crate::error::{Error, Result};

/// An action of `S_n` on a graded space, given by the adjacent transpositions `s_1 … s_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricAction {
    arity: usize,
    generators: Vec<GradedMap>,
}

impl SymmetricAction {
    pub fn new(arity: usize, generators: Vec<GradedMap>) -> Result<Self> {
        if generators.len() != arity.saturating_sub(1) {
            return Err(Error::ArityMismatch { expected: arity.saturating_sub(1), actual: generators.len() });
        }
        let a = SymmetricAction { arity, generators };
        a.check_relations()?;
        Ok(a)
    }

    /// Every generator acts as the identity.
    pub fn trivial(space: &GradedSpace, arity: usize) -> Self {
        SymmetricAction {
            arity,
            generators: (1..arity).map(|_| GradedMap::identity(space)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[GradedMap] {
        &self.generators
    }

    fn check_relations(&self) -> Result<()> {
        let Some(first) = self.generators.first() else { return Ok(()) };
        let n = first.source().total_dim();
        let id = Matrix::identity(n);
        let mats: Vec<Matrix> = self.generators.iter().map(GradedMap::flat_matrix).collect();
        for (i, g) in self.generators.iter().enumerate() {
            if g.degree() != 0 || g.source() != first.source() || g.target() != first.source() {
                return Err(Error::Incompatible(format!("generator s_{} is not a degree-0 endomorphism", i + 1)));
            }
        }
        for i in 0..mats.len() {
            if mats[i].mul(&mats[i]) != id {
                return Err(Error::NotEquivariant(format!("s_{} does not square to the identity", i + 1)));
            }
            for j in i + 1..mats.len() {
                let ok = if j == i + 1 {
                    let l = mats[i].mul(&mats[j]).mul(&mats[i]);
                    let r = mats[j].mul(&mats[i]).mul(&mats[j]);
                    l == r
                } else {
                    mats[i].mul(&mats[j]) == mats[j].mul(&mats[i])
                };
                if !ok {
                    return Err(Error::NotEquivariant(format!("relation between s_{} and s_{} fails", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }
}

/// Coinvariants `(X ⊗ V^{⊗n})_{S_n}` with an explicit projection from the tensor basis.
///
/// Tensor basis vectors `x ⊗ a_1 ⊗ … ⊗ a_n` are numbered `x·d^n + Σ a_i d^{n−i}` with
/// `d = dim V`. The transposition `s_j` sends `x ⊗ a` to `(−1)^{|a_j||a_{j+1}|} s_j(x) ⊗ a'`,
/// where `a'` swaps positions `j, j+1`. Each coinvariant basis vector is represented by the
/// smallest tensor of its class that survives the row reduction; basis vectors are ordered by
/// degree, then by representative.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    n: usize,
    x_deg: Vec<i64>,
    v_deg: Vec<i64>,
    reps: Vec<usize>,
    degrees: Vec<i64>,
    proj: Vec<SparseVec>,
}

impl Coinvariants {
    /// `gens[j][x]` is the image of basis vector `x` under `s_{j+1}`.
    pub fn new(x_deg: &[i64], gens: &[Vec<SparseVec>], v_deg: &[i64], n: usize) -> Self {
        assert_eq!(gens.len(), n.saturating_sub(1));
        let dv = v_deg.len();
        let total = x_deg.len() * dv.pow(n as u32);
        let mut c = Coinvariants {
            n,
            x_deg: x_deg.to_vec(),
            v_deg: v_deg.to_vec(),
            reps: Vec::new(),
            degrees: Vec::new(),
            proj: vec![SparseVec::new(); total],
        };
        // s_j applied to every tensor
        let act = |t: usize, j: usize| -> SparseVec {
            let (x, a) = c.split(t);
            let mut b = a.clone();
            b.swap(j, j + 1);
            let sign = Scalar::sign(v_deg[a[j]] * v_deg[a[j + 1]]);
            let mut out = SparseVec::new();
            for (x2, coef) in gens[j][x].iter() {
                out.add_term(c.join(x2, &b), coef * &sign);
            }
            out
        };
        let images: Vec<Vec<SparseVec>> =
            (0..total).map(|t| (0..n.saturating_sub(1)).map(|j| act(t, j)).collect()).collect();

        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for t in 0..total {
            for img in &images[t] {
                for (u, _) in img.iter() {
                    let (ra, rb) = (find(&mut parent, t), find(&mut parent, u));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for t in 0..total {
            let r = find(&mut parent, t);
            comps.entry(r).or_default().push(t);
        }

        let mut free_of: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        let mut free_list: Vec<usize> = Vec::new();
        for members in comps.values() {
            let (free, exprs) = reduce_component(members, |t| images[t].clone());
            free_list.extend(free);
            free_of.extend(exprs);
        }

        let mut ordered: Vec<(i64, usize)> = free_list.iter().map(|&t| (c.degree_of(t), t)).collect();
        ordered.sort();
        let position: BTreeMap<usize, usize> = ordered.iter().enumerate().map(|(i, &(_, t))| (t, i)).collect();
        c.reps = ordered.iter().map(|&(_, t)| t).collect();
        c.degrees = ordered.iter().map(|&(d, _)| d).collect();
        for (t, expr) in free_of {
            c.proj[t] = expr.into_iter().map(|(f, coef)| (position[&f], coef)).collect();
        }
        c
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn tensor_count(&self) -> usize {
        self.proj.len()
    }

    /// Degree of each coinvariant basis vector.
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Representative tensor of each coinvariant basis vector.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> (usize, Vec<usize>) {
        self.split(self.reps[i])
    }

    pub fn split(&self, t: usize) -> (usize, Vec<usize>) {
        let dv = self.v_deg.len();
        let mut a = vec![0; self.n];
        let mut rest = t;
        for i in (0..self.n).rev() {
            a[i] = rest % dv;
            rest /= dv;
        }
        (rest, a)
    }

    pub fn join(&self, x: usize, a: &[usize]) -> usize {
        let dv = self.v_deg.len();
        a.iter().fold(x, |acc, &ai| acc * dv + ai)
    }

    pub fn degree_of(&self, t: usize) -> i64 {
        let (x, a) = self.split(t);
        self.x_deg[x] + a.iter().map(|&i| self.v_deg[i]).sum::<i64>()
    }

    /// Class of a tensor basis vector in the coinvariant basis.
    pub fn project(&self, t: usize) -> &SparseVec {
        &self.proj[t]
    }

    pub fn project_parts(&self, x: usize, a: &[usize]) -> &SparseVec {
        &self.proj[self.join(x, a)]
    }

    /// The coinvariants as a graded space with labels `"[x|a1,…,an]"` built from the given
    /// label lists.
    pub fn space(&self, x_labels: &[String], v_labels: &[String]) -> GradedSpace {
        GradedSpace::from_labels(self.labels(x_labels, v_labels)).expect("labels are distinct")
    }

    /// `(label, degree)` of every class, in class order.
    pub fn labels(&self, x_labels: &[String], v_labels: &[String]) -> Vec<(String, i64)> {
        self.reps
            .iter()
            .zip(&self.degrees)
            .map(|(&t, &d)| {
                let (x, a) = self.split(t);
                let args: Vec<&str> = a.iter().map(|&i| v_labels[i].as_str()).collect();
                (format!("[{}|{}]", x_labels[x], args.join(",")), d)
            })
            .collect()
    }
}

/// Row-reduce the relations `m − s_j·m` on one connected component.
///
/// Returns the free tensors (the classes' representatives) and, for every member, its
/// expression as a combination of free tensors.
fn reduce_component(
    members: &[usize],
    images: impl Fn(usize) -> Vec<SparseVec>,
) -> (Vec<usize>, Vec<(usize, Vec<(usize, Scalar)>)>) {
    // columns in descending tensor order, so the smallest tensors stay free
    let cols: Vec<usize> = members.iter().rev().copied().collect();
    let col_of: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut rows = Vec::new();
    for &t in members {
        for img in images(t) {
            let mut row = vec![Scalar::zero(); cols.len()];
            row[col_of[&t]] += Scalar::one();
            for (u, coef) in img.iter() {
                row[col_of[&u]] -= coef.clone();
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let (r, pivots) = if rows.is_empty() {
        (Matrix::zeros(0, cols.len()), vec![])
    } else {
        Matrix::from_rows(rows).expect("rectangular").rref()
    };
    let mut is_pivot = vec![false; cols.len()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut free = Vec::new();
    let mut exprs = Vec::new();
    for (ci, &t) in cols.iter().enumerate() {
        if !is_pivot[ci] {
            free.push(t);
            exprs.push((t, vec![(t, Scalar::one())]));
        }
    }
    for (ri, &p) in pivots.iter().enumerate() {
        let mut expr = Vec::new();
        for (ci, &t) in cols.iter().enumerate() {
            if !is_pivot[ci] {
                let coef = r.get(ri, ci);
                if !coef.is_zero() {
                    expr.push((t, -coef.clone()));
                }
            }
        }
        exprs.push((cols[p], expr));
    }
    (free, exprs)
}

/// Coinvariants of a tensor space too large to enumerate: classes are computed on demand, one
/// connected component at a time, and projections are keyed by representative tensor index.
pub struct LazyCoinvariants {
    n: usize,
    v_deg: Vec<i64>,
    gens: Vec<Vec<SparseVec>>,
    cache: Mutex<HashMap<usize, SparseVec>>,
}

impl LazyCoinvariants {
    pub fn new(gens: Vec<Vec<SparseVec>>, v_deg: Vec<i64>, n: usize) -> Self {
        assert_eq!(gens.len(), n.saturating_sub(1));
        LazyCoinvariants { n, v_deg, gens, cache: Mutex::new(HashMap::new()) }
    }

    pub fn join(&self, x: usize, a: &[usize]) -> usize {
        let dv = self.v_deg.len();
        a.iter().fold(x, |acc, &ai| acc * dv + ai)
    }

    fn split(&self, t: usize) -> (usize, Vec<usize>) {
        let dv = self.v_deg.len();
        let mut a = vec![0; self.n];
        let mut rest = t;
        for i in (0..self.n).rev() {
            a[i] = rest % dv;
            rest /= dv;
        }
        (rest, a)
    }

    fn act(&self, t: usize) -> Vec<SparseVec> {
        let (x, a) = self.split(t);
        (0..self.n.saturating_sub(1))
            .map(|j| {
                let mut b = a.clone();
                b.swap(j, j + 1);
                let sign = Scalar::sign(self.v_deg[a[j]] * self.v_deg[a[j + 1]]);
                let mut out = SparseVec::new();
                for (x2, coef) in self.gens[j][x].iter() {
                    out.add_term(self.join(x2, &b), coef * &sign);
                }
                out
            })
            .collect()
    }

    /// Class of a tensor, keyed by representative tensor indices.
    pub fn project(&self, t: usize) -> SparseVec {
        if let Some(v) = self.cache.lock().unwrap().get(&t) {
            return v.clone();
        }
        let mut seen = BTreeSet::from([t]);
        let mut queue = vec![t];
        while let Some(u) = queue.pop() {
            for img in self.act(u) {
                for (w, _) in img.iter() {
                    if seen.insert(w) {
                        queue.push(w);
                    }
                }
            }
        }
        let members: Vec<usize> = seen.into_iter().collect();
        let (_, exprs) = reduce_component(&members, |u| self.act(u));
        let mut cache = self.cache.lock().unwrap();
        for (u, expr) in exprs {
            cache.insert(u, expr.into_iter().collect());
        }
        cache[&t].clone()
    }

    /// Project a linear combination of tensors given as `(x, a, coefficient)`.
    pub fn project_sum<'a>(&self, terms: impl IntoIterator<Item = (usize, &'a [usize], Scalar)>) -> SparseVec {
        let mut out = SparseVec::new();
        for (x, a, c) in terms {
            out.add_scaled(&self.project(self.join(x, a)), &c);
        }
        out
    }
}

/// `(X ⊗ V^{⊗n})_{S_n}` as a graded space.
pub fn tensor_and_coinvariants(
    x: &GradedSpace,
    action: &SymmetricAction,
    v: &GradedSpace,
    n: usize,
) -> Result<GradedSpace> {
    if action.arity() != n {
        return Err(Error::ArityMismatch { expected: n, actual: action.arity() });
    }
    let gens: Vec<Vec<SparseVec>> = action
        .generators()
        .iter()
        .map(|g| {
            let m = g.flat_matrix();
            (0..m.cols()).map(|c| SparseVec::from_dense(&m.column(c))).collect()
        })
        .collect();
    let coinv = Coinvariants::new(&x.flat_degrees(), &gens, &v.flat_degrees(), n);
    let xl: Vec<String> = x.flat_basis().into_iter().map(|(l, _)| l).collect();
    let vl: Vec<String> = v.flat_basis().into_iter().map(|(l, _)| l).collect();
    Ok(coinv.space(&xl, &vl))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_one_is_plain_tensor_product() {
        let x = GradedSpace::from_labels([("c", -1)]).unwrap();
        let v = GradedSpace::from_labels([("a", 0), ("b", 2)]).unwrap();
        let s = tensor_and_coinvariants(&x, &SymmetricAction::trivial(&x, 1), &v, 1).unwrap();
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.dim(1), 1);
    }

    #[test]
    fn even_square_survives_odd_square_dies() {
        let x = GradedSpace::from_labels([("c", 0)]).unwrap();
        let act = SymmetricAction::trivial(&x, 2);
        let even = GradedSpace::from_labels([("a", 3)]).unwrap();
        let s = tensor_and_coinvariants(&x, &act, &even.shift(-3), 2).unwrap();
        assert_eq!(s.dim(0), 1);
        let odd = GradedSpace::from_labels([("a", 1)]).unwrap();
        assert_eq!(tensor_and_coinvariants(&x, &act, &odd, 2).unwrap().total_dim(), 0);
    }

    #[test]
    fn symmetric_square_dimension() {
        // Sym² of a 3-dim even space
        let x = GradedSpace::from_labels([("c", 0)]).unwrap();
        let v = GradedSpace::with_dims("v", 0, &[3]);
        let s = tensor_and_coinvariants(&x, &SymmetricAction::trivial(&x, 2), &v, 2).unwrap();
        assert_eq!(s.total_dim(), 6);
    }

    #[test]
    fn projection_identifies_orbit() {
        let c = Coinvariants::new(&[0], &[vec![SparseVec::unit(0)]], &[0, 0], 2);
        // a0⊗a1 and a1⊗a0 are identified
        assert_eq!(c.project_parts(0, &[0, 1]), c.project_parts(0, &[1, 0]));
        assert_eq!(c.dim(), 3);
    }
}
