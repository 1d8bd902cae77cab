//! The truncated cofree coalgebra `C(V) = ⊕_{1≤n≤N} (C(n) ⊗ V^{⊗n})_{S_n}`.

use std::sync::Arc;

use super::TruncatedCooperad;
use crate::linalg::{koszul_sign, Coinvariants, GradedSpace, LazyCoinvariants, Scalar, SparseVec};
use crate::trees::{enumerate_sh, pitchfork_from_sh};

/// A pure tensor `x ⊗ w_1 ⊗ … ⊗ w_n` in `C(n) ⊗ C(V)^{⊗n}` with a coefficient.
pub type CofreeTerm = (usize, Vec<usize>, Scalar);

/// Basis: the coinvariant basis of each arity, concatenated by arity.
#[derive(Debug)]
pub struct Cofree {
    coop: Arc<TruncatedCooperad>,
    v: GradedSpace,
    v_deg: Vec<i64>,
    pieces: Vec<Coinvariants>,
    offsets: Vec<usize>,
    degrees: Vec<i64>,
}

impl Cofree {
    pub fn new(coop: Arc<TruncatedCooperad>, v: &GradedSpace) -> Self {
        let v_deg = v.flat_degrees();
        let mut pieces = Vec::new();
        let mut offsets = Vec::new();
        let mut degrees = Vec::new();
        for n in 1..=coop.cap() {
            let a = coop.arity(n);
            let piece = Coinvariants::new(&a.degrees, &a.action, &v_deg, n);
            offsets.push(degrees.len());
            degrees.extend_from_slice(piece.degrees());
            pieces.push(piece);
        }
        Cofree { coop, v: v.clone(), v_deg, pieces, offsets, degrees }
    }

    pub fn cooperad(&self) -> &Arc<TruncatedCooperad> {
        &self.coop
    }

    pub fn cogenerators(&self) -> &GradedSpace {
        &self.v
    }

    pub fn v_degrees(&self) -> &[i64] {
        &self.v_deg
    }

    pub fn cap(&self) -> usize {
        self.coop.cap()
    }

    /// Coinvariants of arity `n`.
    pub fn piece(&self, n: usize) -> &Coinvariants {
        &self.pieces[n - 1]
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, w: usize) -> i64 {
        self.degrees[w]
    }

    /// Flat index of class `i` of arity `n`.
    pub fn index(&self, n: usize, i: usize) -> usize {
        self.offsets[n - 1] + i
    }

    /// Arity and class index of a flat basis vector.
    pub fn locate(&self, w: usize) -> (usize, usize) {
        let n = self.offsets.partition_point(|&o| o <= w);
        (n, w - self.offsets[n - 1])
    }

    /// Representative `(n, x, a)` of a basis vector.
    pub fn rep(&self, w: usize) -> (usize, usize, Vec<usize>) {
        let (n, i) = self.locate(w);
        let (x, a) = self.pieces[n - 1].rep(i);
        (n, x, a)
    }

    /// Class of the tensor `x ⊗ a_1 ⊗ … ⊗ a_n` in flat coordinates.
    pub fn project(&self, x: usize, a: &[usize]) -> SparseVec {
        let n = a.len();
        if n == 0 || n > self.cap() {
            return SparseVec::new();
        }
        self.pieces[n - 1].project_parts(x, a).iter().map(|(i, c)| (self.offsets[n - 1] + i, c.clone())).collect()
    }

    /// The cofree coalgebra as a graded space. Its flat order is by degree, not by index.
    pub fn space(&self) -> GradedSpace {
        GradedSpace::from_labels(self.labels()).expect("labels are distinct")
    }

    /// `(label, degree)` of every basis vector, in index order.
    pub fn labels(&self) -> Vec<(String, i64)> {
        let vl: Vec<String> = self.v.flat_basis().into_iter().map(|(l, _)| l).collect();
        (1..=self.cap()).flat_map(|n| self.pieces[n - 1].labels(&self.coop.arity(n).labels, &vl)).collect()
    }

    /// The projection `p_V` onto cogenerators.
    pub fn p_v(&self, w: usize) -> SparseVec {
        let (n, x, a) = self.rep(w);
        if n == 1 && self.coop.is_coaug(1, x) {
            SparseVec::unit(a[0])
        } else {
            SparseVec::new()
        }
    }

    /// The inclusion of cogenerators, `a ↦ [1|a]`.
    pub fn include(&self, a: usize) -> usize {
        let v = self.project(self.coop.coaug(), &[a]);
        debug_assert_eq!(v.len(), 1);
        let w = v.iter().next().map(|(w, _)| w).expect("arity one has no relations");
        w
    }

    /// `Δ_n` of a basis vector as pure tensors in `C(n) ⊗ C(V)^{⊗n}`, before passing to
    /// coinvariants.
    pub fn delta_n(&self, w: usize, n: usize) -> Vec<CofreeTerm> {
        let (_, x, a) = self.rep(w);
        self.delta_n_tensor(x, &a, n)
    }

    /// `Δ_n` of the tensor `x ⊗ a_1 ⊗ … ⊗ a_m`.
    pub fn delta_n_tensor(&self, x: usize, a: &[usize], n: usize) -> Vec<CofreeTerm> {
        let m = a.len();
        if n == 0 || n > m {
            return Vec::new();
        }
        let mut out = Vec::new();
        for tau in enumerate_sh(m, n) {
            let tree = pitchfork_from_sh(&tau).expect("shuffles from enumerate_sh are valid");
            let table = self.coop.delta(&tree).expect("arities within the cap");
            let blocks = tau.block_slices();
            for (f, c) in &table[x] {
                // X⁰ X¹ … Xⁿ a_1 … a_m  →  X⁰ (X¹ a_block1) … (Xⁿ a_blockn)
                let mut deg: Vec<i64> =
                    (0..=n).map(|q| self.coop.degree(if q == 0 { n } else { blocks[q - 1].len() }, f[q])).collect();
                deg.extend(a.iter().map(|&ai| self.v_deg[ai]));
                let mut order = vec![0];
                for (q, b) in blocks.iter().enumerate() {
                    order.push(q + 1);
                    order.extend(b.iter().map(|&l| n + l));
                }
                let sign = Scalar::from_int(koszul_sign(&deg, &order)) * c;
                let factors: Vec<SparseVec> = blocks
                    .iter()
                    .enumerate()
                    .map(|(q, b)| {
                        let args: Vec<usize> = b.iter().map(|&l| a[l - 1]).collect();
                        self.project(f[q + 1], &args)
                    })
                    .collect();
                expand(&factors, &mut |ws, coef| out.push((f[0], ws.to_vec(), coef * &sign)));
            }
        }
        out
    }

    /// The coinvariants `(C(n) ⊗ C(V)^{⊗n})_{S_n}`, computed lazily.
    pub fn tensor_coinvariants(&self, n: usize) -> LazyCoinvariants {
        LazyCoinvariants::new(self.coop.arity(n).action.clone(), self.degrees.clone(), n)
    }

    /// `Δ_n(w)` in the coinvariants.
    pub fn delta_n_class(&self, lazy: &LazyCoinvariants, w: usize, n: usize) -> SparseVec {
        let terms = self.delta_n(w, n);
        lazy.project_sum(terms.iter().map(|(x, ws, c)| (*x, ws.as_slice(), c.clone())))
    }

    /// The differential induced by `d_C` and `d_V` (given on the flat basis of `V`).
    pub fn differential(&self, d_v: &[SparseVec]) -> Vec<SparseVec> {
        (0..self.dim())
            .map(|w| {
                let (n, x, a) = self.rep(w);
                let mut out = SparseVec::new();
                for (x2, c) in self.coop.differential(n, x).iter() {
                    out.add_scaled(&self.project(x2, &a), c);
                }
                let mut deg = self.coop.degree(n, x);
                for i in 0..n {
                    let s = Scalar::sign(deg);
                    for (b, c) in d_v[a[i]].iter() {
                        let mut a2 = a.clone();
                        a2[i] = b;
                        out.add_scaled(&self.project(x, &a2), &(c * &s));
                    }
                    deg += self.v_deg[a[i]];
                }
                out
            })
            .collect()
    }
}

/// Multiply out a tensor product of sparse vectors.
pub(crate) fn expand(factors: &[SparseVec], f: &mut dyn FnMut(&[usize], Scalar)) {
    fn go(factors: &[SparseVec], cur: &mut Vec<usize>, coef: Scalar, f: &mut dyn FnMut(&[usize], Scalar)) {
        let Some((first, rest)) = factors.split_first() else {
            f(cur, coef);
            return;
        };
        for (i, c) in first.iter() {
            cur.push(i);
            go(rest, cur, &coef * c, f);
            cur.pop();
        }
    }
    go(factors, &mut Vec::new(), Scalar::one(), f);
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_coass_shifted, builtin_cocom_shifted};
    use super::*;

    #[test]
    fn one_generator() {
        // S_2 acts on c_2 by the sign, so arity two sees the exterior square of V
        let cocom = Arc::new(builtin_cocom_shifted(2));
        let even = Cofree::new(cocom.clone(), &GradedSpace::from_labels([("a", 0)]).unwrap());
        assert_eq!(even.piece(1).degrees(), &[0]);
        assert_eq!(even.piece(2).dim(), 0);
        let odd = Cofree::new(cocom, &GradedSpace::from_labels([("a", 1)]).unwrap());
        assert_eq!(odd.piece(2).degrees(), &[1]);
    }

    #[test]
    fn cocom_dimensions_match_exterior_powers() {
        // graded exterior powers: even generators anticommute, odd ones commute
        let v = GradedSpace::from_labels([("a", 0), ("b", 0), ("c", 1)]).unwrap();
        let cv = Cofree::new(Arc::new(builtin_cocom_shifted(3)), &v);
        // Λ²: C(2,2) + 2·1 + 1 = 4;  Λ³: C(2,3) + C(2,2)·1 + 2·1 + 1 = 0 + 1 + 2 + 1 = 4
        assert_eq!(cv.piece(2).dim(), 4);
        assert_eq!(cv.piece(3).dim(), 4);
        let cv = Cofree::new(Arc::new(builtin_coass_shifted(3)), &v);
        assert_eq!(cv.piece(3).dim(), 27);
    }

    #[test]
    fn projection_after_inclusion_is_identity() {
        let v = GradedSpace::from_labels([("a", 0), ("b", 1), ("c", -1)]).unwrap();
        let cv = Cofree::new(Arc::new(builtin_coass_shifted(3)), &v);
        for i in 0..3 {
            assert_eq!(cv.p_v(cv.include(i)), SparseVec::unit(i));
            for n in 2..=3 {
                assert!(cv.delta_n(cv.include(i), n).is_empty());
            }
        }
    }

    #[test]
    fn delta_one_is_identity() {
        let v = GradedSpace::from_labels([("a", 0), ("b", 1)]).unwrap();
        let cv = Cofree::new(Arc::new(builtin_cocom_shifted(3)), &v);
        let lazy = cv.tensor_coinvariants(1);
        for w in 0..cv.dim() {
            let got = cv.delta_n_class(&lazy, w, 1);
            let want = lazy.project(lazy.join(cv.cooperad().coaug(), &[w]));
            assert_eq!(got, want);
        }
    }

    /// `Δ_n` is well defined on coinvariants: every tensor in the orbit of a representative
    /// has the same image.
    #[test]
    fn delta_is_independent_of_representative() {
        let v = GradedSpace::from_labels([("a", 0), ("b", 1)]).unwrap();
        for coop in [builtin_cocom_shifted(3), builtin_coass_shifted(3)] {
            let cv = Cofree::new(Arc::new(coop), &v);
            for n in 1..=3 {
                let lazy = cv.tensor_coinvariants(n);
                for m in 1..=3 {
                    let piece = cv.piece(m);
                    for t in 0..piece.tensor_count() {
                        let (x, a) = piece.split(t);
                        // Δ_n of the tensor, computed through its coinvariant class
                        let mut via_class = SparseVec::new();
                        for (i, c) in piece.project(t).iter() {
                            via_class.add_scaled(&cv.delta_n_class(&lazy, cv.index(m, i), n), c);
                        }
                        let direct = cv.delta_n_tensor(x, &a, n);
                        assert_eq!(lazy.project_sum(direct.iter().map(|(x, w, c)| (*x, w.as_slice(), c.clone()))), via_class);
                    }
                }
            }
        }
    }
}
