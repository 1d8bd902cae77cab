//! Maps out of cofree coalgebras, the convolution Lie algebra `Conv(C∘, End_V)`, coderivations and
//! Maurer–Cartan residuals.
//!
//! A [`HomMap`] from `C(V)` to a complex `Y` is stored by its values on the coinvariant basis of
//! `C(V)`, so equivariance holds by construction. The convolution algebra consists of the maps
//! `C(V) → V` that vanish on the coaugmentation piece `V ⊂ C(V)`.
//!
//! For `P: C(V) → V` the coderivation `D_P` is
//! `D_P(X; a) = Σ_{p, σ ∈ Sh_{p,n−p}} ± (X'; P(X''; a_σ(1..p)), a_σ(p+1..n))`
//! where `X' ⊗ X''` runs over `Δ_{t_σ}(X)` and the sign is `(−1)^{|P||X'|}` times the Koszul sign
//! of `σ` on the inputs. Then `f ⋆ P = f ∘ D_P` and `[P₁, P₂] = P₁⋆P₂ − (−1)^{|P₁||P₂|} P₂⋆P₁`.

mod def;
mod encode;

use std::sync::Arc;

pub use def::{def_complex, DefComplex};
pub use encode::{encode_dga, encode_dgla, AlgebraDoc, BasisEntry, BinaryAlgebra, BinaryKind, DiffEntry, ProductEntry};

use crate::cooperad::{Cofree, TruncatedCooperad};
use crate::error::{Error, Result};
use crate::linalg::{koszul_sign, Complex, GradedSpace, Scalar, SparseVec};
use crate::trees::{shuffles, tree_from_shuffle};

/// A complex with its flat basis degrees and differential columns.
#[derive(Debug)]
pub struct FlatComplex {
    complex: Complex,
    degrees: Vec<i64>,
    d: Vec<SparseVec>,
}

impl FlatComplex {
    pub fn new(complex: Complex) -> Arc<Self> {
        let degrees = complex.space().flat_degrees();
        let d = (0..degrees.len()).map(|i| complex.differential().apply_sparse(&SparseVec::unit(i))).collect();
        Arc::new(FlatComplex { complex, degrees, d })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn d(&self, i: usize) -> &SparseVec {
        &self.d[i]
    }

    pub fn apply_d(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.d[i], c);
        }
        out
    }
}

/// The cofree coalgebra on a complex, with its induced differential.
#[derive(Debug)]
pub struct CofreeComplex {
    base: Arc<FlatComplex>,
    cofree: Cofree,
    d: Vec<SparseVec>,
}

impl CofreeComplex {
    pub fn new(coop: Arc<TruncatedCooperad>, v: &Complex) -> Arc<Self> {
        Self::over(coop, FlatComplex::new(v.clone()))
    }

    pub fn over(coop: Arc<TruncatedCooperad>, base: Arc<FlatComplex>) -> Arc<Self> {
        let cofree = Cofree::new(coop, base.space());
        let d_v: Vec<SparseVec> = (0..base.dim()).map(|i| base.d(i).clone()).collect();
        let d = cofree.differential(&d_v);
        Arc::new(CofreeComplex { base, cofree, d })
    }

    pub fn base(&self) -> &Arc<FlatComplex> {
        &self.base
    }

    pub fn cofree(&self) -> &Cofree {
        &self.cofree
    }

    pub fn cooperad(&self) -> &Arc<TruncatedCooperad> {
        self.cofree.cooperad()
    }

    pub fn dim(&self) -> usize {
        self.cofree.dim()
    }

    pub fn d(&self, w: usize) -> &SparseVec {
        &self.d[w]
    }

    /// Whether basis vector `w` lies in the coaugmentation piece `V ⊂ C(V)`.
    pub fn is_cogenerator(&self, w: usize) -> bool {
        let (n, x, _) = self.cofree.rep(w);
        self.cooperad().is_coaug(n, x)
    }

    /// Filtration level of basis vector `w`: that of its cooperad factor.
    pub fn level(&self, w: usize) -> u32 {
        let (n, x, _) = self.cofree.rep(w);
        self.cooperad().level(n, x)
    }

    pub fn arity(&self, w: usize) -> usize {
        self.cofree.locate(w).0
    }
}

/// A homogeneous map `C(V) → Y`.
#[derive(Clone, Debug)]
pub struct HomMap {
    src: Arc<CofreeComplex>,
    tgt: Arc<FlatComplex>,
    degree: i64,
    values: Vec<SparseVec>,
}

/// An element of `Conv(C∘, End_V)`: a map `C(V) → V` vanishing on the cogenerators.
pub type ConvElement = HomMap;

impl PartialEq for HomMap {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.src, &other.src)
            && Arc::ptr_eq(&self.tgt, &other.tgt)
            && self.values == other.values
            && (self.degree == other.degree || self.is_zero())
    }
}

impl HomMap {
    pub fn zero(src: &Arc<CofreeComplex>, tgt: &Arc<FlatComplex>, degree: i64) -> Self {
        HomMap { src: src.clone(), tgt: tgt.clone(), degree, values: vec![SparseVec::new(); src.dim()] }
    }

    /// Build from values on the basis of `C(V)`, checking homogeneity.
    pub fn from_fn(
        src: &Arc<CofreeComplex>,
        tgt: &Arc<FlatComplex>,
        degree: i64,
        f: impl Fn(usize) -> SparseVec,
    ) -> Result<Self> {
        let values: Vec<SparseVec> = (0..src.dim()).map(f).collect();
        let m = HomMap { src: src.clone(), tgt: tgt.clone(), degree, values };
        m.check_degrees()?;
        Ok(m)
    }

    fn check_degrees(&self) -> Result<()> {
        for (w, v) in self.values.iter().enumerate() {
            let want = self.src.cofree.degree(w) + self.degree;
            if let Some((i, _)) = v.iter().find(|(i, _)| self.tgt.degrees[*i] != want) {
                return Err(Error::DegreeMismatch { expected: want, found: self.tgt.degrees[i] });
            }
        }
        Ok(())
    }

    /// Conv element `C(V) → V` from values on the basis.
    pub fn conv_from_fn(src: &Arc<CofreeComplex>, degree: i64, f: impl Fn(usize) -> SparseVec) -> Result<Self> {
        let m = Self::from_fn(src, src.base(), degree, f)?;
        if !m.is_reduced() {
            return Err(Error::Incompatible("a convolution element must vanish on the cogenerators".into()));
        }
        Ok(m)
    }

    pub fn source(&self) -> &Arc<CofreeComplex> {
        &self.src
    }

    pub fn target(&self) -> &Arc<FlatComplex> {
        &self.tgt
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn values(&self) -> &[SparseVec] {
        &self.values
    }

    pub fn value(&self, w: usize) -> &SparseVec {
        &self.values[w]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(SparseVec::is_zero)
    }

    /// Vanishes on the cogenerators `V ⊂ C(V)`.
    pub fn is_reduced(&self) -> bool {
        (0..self.values.len()).all(|w| self.values[w].is_zero() || !self.src.is_cogenerator(w))
    }

    /// Whether the target is the cogenerating complex of the source.
    pub fn is_endo(&self) -> bool {
        Arc::ptr_eq(&self.tgt, self.src.base())
    }

    pub fn eval(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (w, c) in v.iter() {
            out.add_scaled(&self.values[w], c);
        }
        out
    }

    /// Value on the tensor `x ⊗ a_1 ⊗ … ⊗ a_n`.
    pub fn eval_tensor(&self, x: usize, a: &[usize]) -> SparseVec {
        self.eval(&self.src.cofree.project(x, a))
    }

    fn compatible(&self, other: &HomMap) -> Result<()> {
        if Arc::ptr_eq(&self.src, &other.src) && Arc::ptr_eq(&self.tgt, &other.tgt) {
            Ok(())
        } else {
            Err(Error::Incompatible("maps live on different spaces".into()))
        }
    }

    fn with_values(&self, degree: i64, values: Vec<SparseVec>) -> HomMap {
        HomMap { src: self.src.clone(), tgt: self.tgt.clone(), degree, values }
    }

    pub fn add(&self, other: &HomMap) -> Result<HomMap> {
        self.compatible(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_scaled(b, &Scalar::one());
                s
            })
            .collect();
        Ok(self.with_values(self.degree, values))
    }

    pub fn sub(&self, other: &HomMap) -> Result<HomMap> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> HomMap {
        self.with_values(self.degree, self.values.iter().map(|v| v.scaled(c)).collect())
    }

    /// Accumulate `c · other` in place.
    pub fn add_scaled(&mut self, other: &HomMap, c: &Scalar) -> Result<()> {
        self.compatible(other)?;
        if other.is_zero() || c.is_zero() {
            return Ok(());
        }
        if self.is_zero() {
            self.degree = other.degree;
        } else if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.add_scaled(b, c);
        }
        Ok(())
    }

    /// The part supported in arity `n`.
    pub fn arity_part(&self, n: usize) -> HomMap {
        let values = (0..self.values.len())
            .map(|w| if self.src.arity(w) == n { self.values[w].clone() } else { SparseVec::new() })
            .collect();
        self.with_values(self.degree, values)
    }

    /// The part vanishing on the cogenerators.
    pub fn reduced_part(&self) -> HomMap {
        let values = (0..self.values.len())
            .map(|w| if self.src.is_cogenerator(w) { SparseVec::new() } else { self.values[w].clone() })
            .collect();
        self.with_values(self.degree, values)
    }

    /// Filtration level: the least level of a basis vector of `C(V)` on which the map is
    /// nonzero, `None` for the zero map.
    pub fn filtration_level(&self) -> Option<u32> {
        (0..self.values.len()).filter(|&w| !self.values[w].is_zero()).map(|w| self.src.level(w)).min()
    }

    /// `∂f = d_Y ∘ f − (−1)^{|f|} f ∘ d_{C(V)}`.
    pub fn differential(&self) -> HomMap {
        let s = -Scalar::sign(self.degree);
        let values = (0..self.values.len())
            .map(|w| {
                let mut out = self.tgt.apply_d(&self.values[w]);
                out.add_scaled(&self.eval(self.src.d(w)), &s);
                out
            })
            .collect();
        self.with_values(self.degree + 1, values)
    }

    /// `f ∘ D` for an operator `D` on `C(V)` of degree `d_degree` given on the basis.
    pub fn after(&self, d: &[SparseVec], d_degree: i64) -> HomMap {
        self.with_values(self.degree + d_degree, d.iter().map(|v| self.eval(v)).collect())
    }

    /// The coderivation `D_P` of `C(V)` with corestriction `P`, on every basis vector.
    pub fn coderivation(&self) -> Result<Vec<SparseVec>> {
        if !self.is_endo() {
            return Err(Error::Incompatible("a coderivation needs a map C(V) → V".into()));
        }
        let cofree = &self.src.cofree;
        let coop = cofree.cooperad();
        let vdeg = cofree.v_degrees();
        Ok((0..self.values.len())
            .map(|w| {
                let (n, x, a) = cofree.rep(w);
                let mut out = SparseVec::new();
                for p in 1..=n {
                    for sigma in shuffles(p, n - p) {
                        let tree = tree_from_shuffle(&sigma).expect("two-block shuffle");
                        let table = coop.delta(&tree).expect("arities within the cap");
                        if table[x].is_empty() {
                            continue;
                        }
                        let deg: Vec<i64> = a.iter().map(|&ai| vdeg[ai]).collect();
                        let order: Vec<usize> = sigma.perm.iter().map(|l| l - 1).collect();
                        let ks = koszul_sign(&deg, &order);
                        let inner: Vec<usize> = sigma.perm[..p].iter().map(|&l| a[l - 1]).collect();
                        let rest: Vec<usize> = sigma.perm[p..].iter().map(|&l| a[l - 1]).collect();
                        for (f, c) in &table[x] {
                            let (outer, upper) = (f[0], f[1]);
                            let y = self.eval_tensor(upper, &inner);
                            if y.is_zero() {
                                continue;
                            }
                            let s = Scalar::from_int(ks) * Scalar::sign(self.degree * coop.degree(n - p + 1, outer)) * c;
                            for (b, cb) in y.iter() {
                                let mut args = vec![b];
                                args.extend_from_slice(&rest);
                                out.add_scaled(&cofree.project(outer, &args), &(cb * &s));
                            }
                        }
                    }
                }
                out
            })
            .collect())
    }

    /// `f ⋆ P = f ∘ D_P`.
    pub fn star(&self, p: &HomMap) -> Result<HomMap> {
        if !Arc::ptr_eq(&self.src, &p.src) {
            return Err(Error::Incompatible("⋆ needs maps out of the same cofree coalgebra".into()));
        }
        Ok(self.after(&p.coderivation()?, p.degree))
    }
}

/// `[P₁, P₂] = P₁⋆P₂ − (−1)^{|P₁||P₂|} P₂⋆P₁`.
pub fn conv_bracket(p1: &HomMap, p2: &HomMap) -> Result<HomMap> {
    p1.compatible(p2)?;
    let a = p1.star(p2)?;
    let b = p2.star(p1)?;
    let mut out = a;
    out.add_scaled(&b, &-Scalar::sign(p1.degree * p2.degree))?;
    if out.is_zero() {
        out.degree = p1.degree + p2.degree;
    }
    Ok(out)
}

/// `∂Q + ½[Q, Q]`.
pub fn mc_residual(q: &HomMap) -> Result<HomMap> {
    if q.degree != 1 && !q.is_zero() {
        return Err(Error::DegreeMismatch { expected: 1, found: q.degree });
    }
    let mut out = q.differential();
    out.degree = 2;
    out.add_scaled(&conv_bracket(q, q)?, &Scalar::ratio(1, 2))?;
    Ok(out)
}

/// The coderivation of a convolution element.
pub fn coderivation_from_conv(p: &HomMap) -> Result<Vec<SparseVec>> {
    if !p.is_reduced() {
        return Err(Error::Incompatible("the coderivation of a convolution element must vanish on V".into()));
    }
    p.coderivation()
}

/// Check the coderivation axiom `Δ_n ∘ D = Σ_i (1 ⊗ … ⊗ D ⊗ … ⊗ 1) ∘ Δ_n` for `2 ≤ n ≤ N` on every
/// basis vector.
pub fn check_coderivation(src: &CofreeComplex, d: &[SparseVec], degree: i64) -> Result<()> {
    let cofree = src.cofree();
    let coop = cofree.cooperad();
    for n in 2..=cofree.cap() {
        let lazy = cofree.tensor_coinvariants(n);
        for w in 0..cofree.dim() {
            let mut lhs = SparseVec::new();
            for (u, c) in d[w].iter() {
                lhs.add_scaled(&cofree.delta_n_class(&lazy, u, n), c);
            }
            let mut rhs = SparseVec::new();
            for (x, ws, c) in cofree.delta_n(w, n) {
                let mut pre = coop.degree(n, x);
                for i in 0..n {
                    let s = Scalar::sign(degree * pre) * &c;
                    for (u, cu) in d[ws[i]].iter() {
                        let mut ws2 = ws.clone();
                        ws2[i] = u;
                        rhs.add_scaled(&lazy.project(lazy.join(x, &ws2)), &(cu * &s));
                    }
                    pre += cofree.degree(ws[i]);
                }
            }
            if lhs != rhs {
                let (m, x, a) = cofree.rep(w);
                return Err(Error::NotCoderivation(format!(
                    "Δ_{n} fails on the basis vector with cooperad factor {} and inputs {:?} (arity {m})",
                    coop.label(m, x),
                    a
                )));
            }
        }
    }
    Ok(())
}

/// Recover the convolution element of a coderivation, after checking the coderivation axiom and
/// that it vanishes on the cogenerators.
pub fn conv_from_coderivation(src: &Arc<CofreeComplex>, d: &[SparseVec], degree: i64) -> Result<HomMap> {
    if d.len() != src.dim() {
        return Err(Error::Incompatible("operator has the wrong number of columns".into()));
    }
    check_coderivation(src, d, degree)?;
    let cofree = src.cofree();
    let m = HomMap::from_fn(src, src.base(), degree, |w| {
        let mut out = SparseVec::new();
        for (u, c) in d[w].iter() {
            out.add_scaled(&cofree.p_v(u), c);
        }
        out
    })?;
    if !m.is_reduced() {
        return Err(Error::NotCoderivation("the coderivation does not vanish on the cogenerators".into()));
    }
    Ok(m)
}

/// Coderivations of `C(V)` without the condition of vanishing on `V`, as operators on the basis.
/// Their corestrictions are arbitrary maps `C(V) → V`; this is exposed for inspection only.
pub fn unreduced_coderivation(p: &HomMap) -> Result<Vec<SparseVec>> {
    p.coderivation()
}

/// Graded commutator of two operators on `C(V)`.
pub fn commutator(d1: &[SparseVec], deg1: i64, d2: &[SparseVec], deg2: i64) -> Vec<SparseVec> {
    let apply = |d: &[SparseVec], v: &SparseVec| {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.add_scaled(&d[i], c);
        }
        out
    };
    let s = -Scalar::sign(deg1 * deg2);
    (0..d1.len())
        .map(|w| {
            let mut out = apply(d1, &d2[w]);
            out.add_scaled(&apply(d2, &d1[w]), &s);
            out
        })
        .collect()
}

#[cfg(test)]
mod tests;
