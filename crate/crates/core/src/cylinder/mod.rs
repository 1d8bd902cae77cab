//! The auxiliary L∞-algebra `Cyl(C, A, B) = Hom(C∘(A), A) ⊕ s Hom(C(A), B) ⊕ Hom(C∘(B), B)`.
//!
//! Brackets are graded symmetric of degree 1 on `s⁻¹Cyl`. An element of degree `d` in `Cyl` has
//! components `P` and `R` of degree `d` and an unsuspended `T` of degree `d − 1`, so all three
//! sit in degree `d − 1` of `s⁻¹Cyl`. The nonzero brackets are
//!
//! * `{s⁻¹P₁, s⁻¹P₂} = (−1)^{|P₁|+1} s⁻¹[P₁, P₂]`, and likewise for two `R`'s;
//! * `{T, s⁻¹P} = (−1)^{|T|+|P|} T ⋆ P`;
//! * `{s⁻¹R, T₁, …, T_r}(X; a) = Σ_{σ ∈ S_r} ± (−1)^{|R|+1} R(X⁰; T_σ(1)(X¹; …), …, T_σ(r)(Xʳ; …))`
//!   summed over the pitchfork decomposition `Δ_r` of `(X; a)`;
//!
//! extended to other orderings by graded symmetry. Twisting by a degree-one element `β` gives
//! `ℓ^β_n(x) = Σ_k (1/k!) ℓ_{n+k}(β, …, β, x)`.

mod complex;
mod zigzag;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

pub use complex::{CylBasis, CylComplex};
pub use zigzag::{
    build_def_morphism_complex, untwisted_by_arity, verify_zigzag, ArityReport, ProjectionReport, ZigzagReport,
};

use crate::convolution::{mc_residual, CofreeComplex, HomMap};
use crate::cooperad::{expand, CofreeTerm, TruncatedCooperad};
use crate::error::{Error, Result};
use crate::linalg::{koszul_sign, Complex, Scalar, SparseVec};
use crate::trees::{permutations, shuffles};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    P,
    T,
    R,
}

impl Component {
    pub fn tag(self) -> &'static str {
        match self {
            Component::P => "P",
            Component::T => "T",
            Component::R => "R",
        }
    }
}

/// The cofree coalgebras on `A` and `B` over a common cooperad.
#[derive(Debug)]
pub struct CylSpaces {
    a: Arc<CofreeComplex>,
    b: Arc<CofreeComplex>,
    deltas: Vec<OnceLock<Vec<Vec<CofreeTerm>>>>,
}

impl CylSpaces {
    pub fn new(coop: Arc<TruncatedCooperad>, a: &Complex, b: &Complex) -> Arc<Self> {
        let a = CofreeComplex::new(coop.clone(), a);
        let b = CofreeComplex::new(coop, b);
        Self::from_sources(a, b).expect("same cooperad")
    }

    /// Reuse existing cofree coalgebras, so that maps already built on them can be combined.
    pub fn from_sources(a: Arc<CofreeComplex>, b: Arc<CofreeComplex>) -> Result<Arc<Self>> {
        if !Arc::ptr_eq(a.cooperad(), b.cooperad()) {
            return Err(Error::Incompatible("A and B must be built over the same cooperad".into()));
        }
        let deltas = (0..=a.cooperad().cap()).map(|_| OnceLock::new()).collect();
        Ok(Arc::new(CylSpaces { a, b, deltas }))
    }

    pub fn a(&self) -> &Arc<CofreeComplex> {
        &self.a
    }

    pub fn b(&self) -> &Arc<CofreeComplex> {
        &self.b
    }

    pub fn cooperad(&self) -> &Arc<TruncatedCooperad> {
        self.a.cooperad()
    }

    pub fn cap(&self) -> usize {
        self.cooperad().cap()
    }

    /// `Δ_r` on every basis vector of `C(A)`.
    fn deltas(&self, r: usize) -> &[Vec<CofreeTerm>] {
        self.deltas[r].get_or_init(|| (0..self.a.dim()).map(|w| self.a.cofree().delta_n(w, r)).collect())
    }

    /// A map `C(A) → B` from its values.
    pub fn t_map(&self, degree: i64, f: impl Fn(usize) -> SparseVec) -> Result<HomMap> {
        HomMap::from_fn(&self.a, self.b.base(), degree, f)
    }

    /// The map `C(A) → B` that is `f₁` on the cogenerators and zero elsewhere.
    pub fn t_from_linear(&self, degree: i64, f1: &crate::linalg::GradedMap) -> Result<HomMap> {
        let cofree = self.a.cofree();
        self.t_map(degree, |w| {
            let (n, x, a) = cofree.rep(w);
            if n == 1 && self.cooperad().is_coaug(1, x) {
                f1.apply_sparse(&SparseVec::unit(a[0]))
            } else {
                SparseVec::new()
            }
        })
    }

    /// The arity-one part of a map `C(A) → B` as a linear map `A → B`.
    pub fn linear_part(&self, t: &HomMap) -> Result<crate::linalg::GradedMap> {
        let cofree = self.a.cofree();
        crate::linalg::GradedMap::from_fn(self.a.base().space(), self.b.base().space(), t.degree(), |a| {
            t.value(cofree.include(a)).clone()
        })
    }
}

/// A homogeneous element `P + sT + R` of `Cyl`, with its degree in `Cyl`.
#[derive(Clone, Debug, PartialEq)]
pub struct CylElement {
    p: HomMap,
    t: HomMap,
    r: HomMap,
    degree: i64,
}

impl CylElement {
    pub fn new(p: HomMap, t: HomMap, r: HomMap, degree: i64) -> Result<Self> {
        if !p.is_endo() || !r.is_endo() || !Arc::ptr_eq(t.source(), p.source()) || !Arc::ptr_eq(t.target(), r.target()) {
            return Err(Error::Incompatible("components live on different spaces".into()));
        }
        if !p.is_reduced() || !r.is_reduced() {
            return Err(Error::Incompatible("the P and R components must vanish on the cogenerators".into()));
        }
        for (m, want) in [(&p, degree), (&t, degree - 1), (&r, degree)] {
            if !m.is_zero() && m.degree() != want {
                return Err(Error::DegreeMismatch { expected: want, found: m.degree() });
            }
        }
        let p = if p.degree() == degree { p } else { HomMap::zero(p.source(), p.target(), degree) };
        let t = if t.degree() == degree - 1 { t } else { HomMap::zero(t.source(), t.target(), degree - 1) };
        let r = if r.degree() == degree { r } else { HomMap::zero(r.source(), r.target(), degree) };
        Ok(CylElement { p, t, r, degree })
    }

    pub fn zero(sp: &CylSpaces, degree: i64) -> Self {
        CylElement {
            p: HomMap::zero(&sp.a, sp.a.base(), degree),
            t: HomMap::zero(&sp.a, sp.b.base(), degree - 1),
            r: HomMap::zero(&sp.b, sp.b.base(), degree),
            degree,
        }
    }

    pub fn from_p(sp: &CylSpaces, p: HomMap) -> Result<Self> {
        let z = Self::zero(sp, p.degree());
        Self::new(p, z.t, z.r, z.degree)
    }

    /// `sT`, of degree `|T| + 1`.
    pub fn from_t(sp: &CylSpaces, t: HomMap) -> Result<Self> {
        let z = Self::zero(sp, t.degree() + 1);
        Self::new(z.p, t, z.r, z.degree)
    }

    pub fn from_r(sp: &CylSpaces, r: HomMap) -> Result<Self> {
        let z = Self::zero(sp, r.degree());
        Self::new(z.p, z.t, r, z.degree)
    }

    pub fn p(&self) -> &HomMap {
        &self.p
    }

    pub fn t(&self) -> &HomMap {
        &self.t
    }

    pub fn r(&self) -> &HomMap {
        &self.r
    }

    pub fn component(&self, c: Component) -> &HomMap {
        match c {
            Component::P => &self.p,
            Component::T => &self.t,
            Component::R => &self.r,
        }
    }

    fn component_mut(&mut self, c: Component) -> &mut HomMap {
        match c {
            Component::P => &mut self.p,
            Component::T => &mut self.t,
            Component::R => &mut self.r,
        }
    }

    /// Degree in `Cyl`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Degree in `s⁻¹Cyl`.
    pub fn shifted_degree(&self) -> i64 {
        self.degree - 1
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.t.is_zero() && self.r.is_zero()
    }

    fn compatible(&self, other: &CylElement) -> Result<()> {
        if Arc::ptr_eq(self.p.source(), other.p.source()) && Arc::ptr_eq(self.r.source(), other.r.source()) {
            Ok(())
        } else {
            Err(Error::Incompatible("elements of different cylinders".into()))
        }
    }

    pub fn add(&self, other: &CylElement) -> Result<CylElement> {
        self.compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(CylElement { p: self.p.add(&other.p)?, t: self.t.add(&other.t)?, r: self.r.add(&other.r)?, degree: self.degree })
    }

    pub fn sub(&self, other: &CylElement) -> Result<CylElement> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> CylElement {
        CylElement { p: self.p.scale(c), t: self.t.scale(c), r: self.r.scale(c), degree: self.degree }
    }

    /// The part supported in arity `n`.
    pub fn arity_part(&self, n: usize) -> CylElement {
        CylElement { p: self.p.arity_part(n), t: self.t.arity_part(n), r: self.r.arity_part(n), degree: self.degree }
    }

    /// The largest `m` with the element in `ℱ_m`, or `None` for zero.
    pub fn filtration_level(&self) -> Option<u32> {
        [self.p.filtration_level(), self.t.filtration_level(), self.r.filtration_level()].into_iter().flatten().min()
    }

    /// Whether `T` vanishes on the cogenerators, i.e. the element lies in `Cyl∘`.
    pub fn in_cyl_circ(&self) -> bool {
        self.t.is_reduced()
    }

    /// Whether the element is `sF₁` for a linear map `F₁` (only `T` nonzero, and only on the
    /// cogenerators).
    pub fn is_linear_t(&self) -> bool {
        self.p.is_zero() && self.r.is_zero() && self.t.reduced_part().is_zero()
    }
}

/// One component of an input to a bracket, with its coderivation computed on first use.
struct Part {
    kind: Component,
    map: HomMap,
    coder: OnceLock<Vec<SparseVec>>,
}

impl Part {
    fn new(kind: Component, map: HomMap) -> Self {
        Part { kind, map, coder: OnceLock::new() }
    }

    fn shifted_degree(&self) -> i64 {
        match self.kind {
            Component::T => self.map.degree(),
            _ => self.map.degree() - 1,
        }
    }

    fn coder(&self) -> &[SparseVec] {
        self.coder.get_or_init(|| self.map.coderivation().expect("P and R are endomorphic"))
    }
}

fn parts(x: &CylElement) -> Vec<Part> {
    [Component::P, Component::T, Component::R]
        .into_iter()
        .filter(|&c| !x.component(c).is_zero())
        .map(|c| Part::new(c, x.component(c).clone()))
        .collect()
}

/// How the algebra was obtained from `Cyl(C, A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CylMode {
    Plain,
    TwistedBySF1,
    RestrictedToCylCirc,
    TwistedByAlpha,
}

/// `Cyl(C, A, B)`, possibly twisted by an MC element and restricted to `Cyl∘`.
pub struct CylAlgebra {
    spaces: Arc<CylSpaces>,
    mode: CylMode,
    beta: Option<CylElement>,
    beta_parts: Vec<Part>,
}

/// `U = Q_A + sU_F + Q_B` with the three components of its MC residual.
#[derive(Clone, Debug)]
pub struct McDecoding {
    pub q_a: HomMap,
    pub u_f: HomMap,
    pub q_b: HomMap,
    /// `∂Q_A + ½[Q_A, Q_A]`
    pub residual_a: HomMap,
    /// `∂U_F + {U_F, s⁻¹Q_A} + Σ_r (1/r!) {s⁻¹Q_B, U_F, …, U_F}`
    pub residual_mixed: HomMap,
    /// `∂Q_B + ½[Q_B, Q_B]`
    pub residual_b: HomMap,
}

impl McDecoding {
    pub fn is_mc(&self) -> bool {
        self.residual_a.is_zero() && self.residual_mixed.is_zero() && self.residual_b.is_zero()
    }

    /// Which of the three equations fail.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.residual_a.is_zero() {
            out.push("the structure on A is not Maurer-Cartan");
        }
        if !self.residual_b.is_zero() {
            out.push("the structure on B is not Maurer-Cartan");
        }
        if !self.residual_mixed.is_zero() {
            out.push("the map is not an ∞-morphism");
        }
        out
    }
}

impl CylAlgebra {
    pub fn new(spaces: Arc<CylSpaces>) -> Self {
        CylAlgebra { spaces, mode: CylMode::Plain, beta: None, beta_parts: Vec::new() }
    }

    pub fn spaces(&self) -> &Arc<CylSpaces> {
        &self.spaces
    }

    pub fn mode(&self) -> CylMode {
        self.mode
    }

    /// The total twisting element, if any.
    pub fn twisting_element(&self) -> Option<&CylElement> {
        self.beta.as_ref()
    }

    pub fn is_restricted(&self) -> bool {
        matches!(self.mode, CylMode::RestrictedToCylCirc | CylMode::TwistedByAlpha)
    }

    fn check(&self, x: &CylElement) -> Result<()> {
        if !Arc::ptr_eq(x.p.source(), &self.spaces.a) || !Arc::ptr_eq(x.r.source(), &self.spaces.b) {
            return Err(Error::Incompatible("element of a different cylinder".into()));
        }
        if self.is_restricted() && !x.in_cyl_circ() {
            return Err(Error::Incompatible("element does not lie in Cyl∘: T is nonzero on the cogenerators".into()));
        }
        Ok(())
    }

    /// `ℓ_n(x₁, …, x_n)` in this algebra; `n = 1` is the differential.
    pub fn bracket(&self, xs: &[&CylElement]) -> Result<CylElement> {
        if xs.is_empty() {
            return Err(Error::Incompatible("a bracket needs at least one input".into()));
        }
        for x in xs {
            self.check(x)?;
        }
        let inputs: Vec<Vec<Part>> = xs.iter().map(|x| parts(x)).collect();
        let degree = xs.iter().map(|x| x.degree).sum::<i64>() - xs.len() as i64 + 2;
        evaluate(&self.spaces, &self.beta_parts, &inputs, degree)
    }

    pub fn differential(&self, x: &CylElement) -> Result<CylElement> {
        self.bracket(&[x])
    }

    /// `Σ_{p, σ ∈ Sh_{p,n−p}} ε ℓ_{n−p+1}(ℓ_p(f_σ(1), …, f_σ(p)), f_σ(p+1), …, f_σ(n))`, which
    /// vanishes exactly when the L∞ identity holds on the inputs.
    pub fn linf_residual(&self, fs: &[CylElement]) -> Result<CylElement> {
        let n = fs.len();
        let deg: Vec<i64> = fs.iter().map(CylElement::shifted_degree).collect();
        let mut out = CylElement::zero(&self.spaces, deg.iter().sum::<i64>() + 3);
        for p in 1..=n {
            for sigma in shuffles(p, n - p) {
                let order: Vec<usize> = sigma.perm.iter().map(|l| l - 1).collect();
                let sign = Scalar::from_int(koszul_sign(&deg, &order));
                let inner_args: Vec<&CylElement> = order[..p].iter().map(|&i| &fs[i]).collect();
                let inner = self.bracket(&inner_args)?;
                let mut outer_args = vec![&inner];
                outer_args.extend(order[p..].iter().map(|&i| &fs[i]));
                out = out.add(&self.bracket(&outer_args)?.scale(&sign))?;
            }
        }
        Ok(out)
    }

    /// `Σ_{n≥1} (1/n!) ℓ_n(u, …, u)` for `u` of degree 1.
    pub fn mc_residual(&self, u: &CylElement) -> Result<CylElement> {
        if u.degree != 1 && !u.is_zero() {
            return Err(Error::DegreeMismatch { expected: 1, found: u.degree });
        }
        self.check(u)?;
        // the twisted MC equation for u is the plain one for β + u
        let total = match &self.beta {
            Some(b) => b.add(u)?,
            None => u.clone(),
        };
        let total_parts = parts(&total);
        evaluate(&self.spaces, &total_parts, &[], 2)
    }

    /// Split `U` and evaluate the three equations separately.
    pub fn decode_mc(&self, u: &CylElement) -> Result<McDecoding> {
        if self.mode != CylMode::Plain {
            return Err(Error::Incompatible("decoding applies to the untwisted cylinder".into()));
        }
        if u.degree != 1 && !u.is_zero() {
            return Err(Error::DegreeMismatch { expected: 1, found: u.degree });
        }
        self.check(u)?;
        let sp = &self.spaces;
        let residual_a = mc_residual(&u.p)?;
        let residual_b = mc_residual(&u.r)?;
        let mut mixed = u.t.differential();
        // {U_F, s⁻¹Q_A} = (−1)^{|U_F|+|Q_A|} U_F ⋆ Q_A
        mixed.add_scaled(&u.t.star(&u.p)?, &-Scalar::one())?;
        for r in 1..=sp.cap() {
            let ts: Vec<&HomMap> = vec![&u.t; r];
            mixed.add_scaled(&r_bracket(sp, &u.r, &ts), &Scalar::inv_factorial(r))?;
        }
        Ok(McDecoding { q_a: u.p.clone(), u_f: u.t.clone(), q_b: u.r.clone(), residual_a, residual_mixed: mixed, residual_b })
    }

    /// Twist by an MC element. The element must have filtration level at least one, or be `sF₁`
    /// for a chain map `F₁`, so that the twisting series is finite.
    pub fn twist(&self, alpha: &CylElement) -> Result<CylAlgebra> {
        self.check(alpha)?;
        let linear = alpha.is_linear_t();
        if !linear && alpha.filtration_level().is_some_and(|l| l < 1) {
            return Err(Error::Incompatible(
                "twisting needs an element of filtration level at least one, or sF₁".into(),
            ));
        }
        let res = self.mc_residual(alpha)?;
        if !res.is_zero() {
            return Err(Error::NotMaurerCartan(describe_residual(&res)));
        }
        let mode = match (self.mode, linear) {
            (CylMode::Plain, true) => CylMode::TwistedBySF1,
            (CylMode::Plain, false) => CylMode::TwistedByAlpha,
            (CylMode::RestrictedToCylCirc, _) | (CylMode::TwistedByAlpha, _) => CylMode::TwistedByAlpha,
            (CylMode::TwistedBySF1, _) => CylMode::TwistedByAlpha,
        };
        let beta = match &self.beta {
            Some(b) => b.add(alpha)?,
            None => alpha.clone(),
        };
        let beta_parts = parts(&beta);
        Ok(CylAlgebra { spaces: self.spaces.clone(), mode, beta: Some(beta), beta_parts })
    }

    /// The sub-L∞-algebra `Cyl∘` of the algebra twisted by `sF₁`.
    pub fn restrict_to_cyl_circ(&self) -> Result<CylAlgebra> {
        if self.mode != CylMode::TwistedBySF1 {
            return Err(Error::Incompatible("restriction applies to the cylinder twisted by sF₁".into()));
        }
        let beta = self.beta.clone();
        let beta_parts = beta.as_ref().map(parts).unwrap_or_default();
        Ok(CylAlgebra { spaces: self.spaces.clone(), mode: CylMode::RestrictedToCylCirc, beta, beta_parts })
    }

    /// `π_A`: the `P` component.
    pub fn project_a(&self, x: &CylElement) -> HomMap {
        x.p.clone()
    }

    /// `π_B`: the `R` component.
    pub fn project_b(&self, x: &CylElement) -> HomMap {
        x.r.clone()
    }

    /// The finite complex `(Cyl, ℓ_1)` of this algebra.
    pub fn complex(&self) -> Result<CylComplex> {
        CylComplex::build(self)
    }
}

/// Where a nonzero element first fails to vanish, one line per component.
pub fn describe_residual(res: &CylElement) -> String {
    let mut parts = Vec::new();
    for c in [Component::P, Component::T, Component::R] {
        let m = res.component(c);
        if let Some(w) = (0..m.values().len()).find(|&w| !m.value(w).is_zero()) {
            let (n, x, a) = m.source().cofree().rep(w);
            parts.push(format!(
                "{} component nonzero on arity {n}, cooperad factor {}, inputs {a:?}",
                c.tag(),
                m.source().cooperad().label(n, x)
            ));
        }
    }
    parts.join("; ")
}

/// `Σ_k (1/k!) ℓ_{k+n}(β, …, β, x₁, …, x_n)` with `β` given by its parts, expanded over components
/// and restricted to the patterns with a nonzero bracket.
fn evaluate(sp: &CylSpaces, beta: &[Part], inputs: &[Vec<Part>], degree: i64) -> Result<CylElement> {
    let mut out = CylElement::zero(sp, degree);
    let find = |k: Component| beta.iter().find(|p| p.kind == k);
    let (bp, bt, br) = (find(Component::P), find(Component::T), find(Component::R));
    let n = inputs.len();
    let cap = sp.cap();
    let mut choices: Vec<Vec<&Part>> = vec![Vec::new()];
    for parts in inputs {
        let mut next = Vec::new();
        for c in &choices {
            for p in parts {
                let mut c2 = c.clone();
                c2.push(p);
                next.push(c2);
            }
        }
        choices = next;
    }
    for i in 0..=if bp.is_some() { 2 } else { 0 } {
        for l in 0..=if br.is_some() { 2 - i } else { 0 } {
            for j in 0..=if bt.is_some() { cap } else { 0 } {
                let total = i + j + l + n;
                if total == 0 {
                    continue;
                }
                let coef = Scalar::inv_factorial(i) * Scalar::inv_factorial(j) * Scalar::inv_factorial(l);
                for choice in &choices {
                    let n_r = l + choice.iter().filter(|p| p.kind == Component::R).count();
                    let n_p = i + choice.iter().filter(|p| p.kind == Component::P).count();
                    let n_t = total - n_r - n_p;
                    let admissible = total == 1
                        || (total == 2 && n_r + n_p >= 1)
                        || (n_r == 1 && n_p == 0 && n_t <= cap);
                    if !admissible {
                        continue;
                    }
                    let mut comps: Vec<&Part> = Vec::with_capacity(total);
                    comps.extend(std::iter::repeat_n(bp, i).flatten());
                    comps.extend(std::iter::repeat_n(bt, j).flatten());
                    comps.extend(std::iter::repeat_n(br, l).flatten());
                    comps.extend(choice.iter().copied());
                    if let Some((kind, m)) = raw_bracket(sp, &comps)? {
                        let target = out.component_mut(kind);
                        debug_assert!(m.is_zero() || m.degree() == target.degree());
                        target.add_scaled(&m, &coef)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The untwisted bracket of single components, or `None` when it vanishes identically.
fn raw_bracket(sp: &CylSpaces, comps: &[&Part]) -> Result<Option<(Component, HomMap)>> {
    use Component::*;
    let n = comps.len();
    if n == 1 {
        return Ok(Some((comps[0].kind, comps[0].map.differential())));
    }
    let kinds: Vec<Component> = comps.iter().map(|c| c.kind).collect();
    let deg: Vec<i64> = comps.iter().map(|c| c.shifted_degree()).collect();
    if n == 2 {
        match (kinds[0], kinds[1]) {
            (P, P) | (R, R) => {
                let (a, b) = (comps[0], comps[1]);
                let (da, db) = (a.map.degree(), b.map.degree());
                // [a, b] = a ∘ D_b − (−1)^{|a||b|} b ∘ D_a
                let mut br = a.map.after(b.coder(), db);
                br.add_scaled(&b.map.after(a.coder(), da), &-Scalar::sign(da * db))?;
                return Ok(Some((kinds[0], br.scale(&-Scalar::sign(da)))));
            }
            (T, P) | (P, T) => {
                let (t, p, sign) = if kinds[0] == T {
                    (comps[0], comps[1], Scalar::one())
                } else {
                    (comps[1], comps[0], Scalar::sign(deg[0] * deg[1]))
                };
                let s = sign * Scalar::sign(t.map.degree() + p.map.degree());
                return Ok(Some((T, t.map.after(p.coder(), p.map.degree()).scale(&s))));
            }
            _ => {}
        }
    }
    let n_r = kinds.iter().filter(|&&k| k == R).count();
    let n_t = kinds.iter().filter(|&&k| k == T).count();
    if n_r == 1 && n_t == n - 1 {
        let k = kinds.iter().position(|&c| c == R).unwrap();
        let before: i64 = deg[..k].iter().sum();
        let sign = Scalar::sign(deg[k] * before);
        let ts: Vec<&HomMap> = comps.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, c)| &c.map).collect();
        return Ok(Some((T, r_bracket(sp, &comps[k].map, &ts).scale(&sign))));
    }
    Ok(None)
}

/// `{s⁻¹R, T₁, …, T_r}` evaluated through `Δ_r` on every basis vector of `C(A)`.
fn r_bracket(sp: &CylSpaces, r: &HomMap, ts: &[&HomMap]) -> HomMap {
    let rr = ts.len();
    let degree = r.degree() + ts.iter().map(|t| t.degree()).sum::<i64>();
    let coop = sp.cooperad();
    let b_src = &sp.b;
    if rr == 0 || rr > sp.cap() || ts.iter().any(|t| t.is_zero()) || r.is_zero() {
        return HomMap::zero(&sp.a, sp.b.base(), degree);
    }
    let tdeg: Vec<i64> = ts.iter().map(|t| t.degree()).collect();
    // arrangements that differ only by swapping equal inputs give the same term, so group them
    let class: Vec<usize> = (0..rr).map(|i| (0..=i).find(|&j| std::ptr::eq(ts[j], ts[i])).unwrap()).collect();
    let mut grouped: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for s in permutations(rr) {
        let order: Vec<usize> = s.iter().map(|x| x - 1).collect();
        let k = Scalar::from_int(koszul_sign(&tdeg, &order));
        let key = order.iter().map(|&i| class[i]).collect();
        let e = grouped.entry(key).or_insert_with(Scalar::zero);
        *e = &*e + &k;
    }
    let sign_r = Scalar::sign(r.degree() + 1);
    let perms: Vec<(Vec<usize>, Scalar)> =
        grouped.into_iter().filter(|(_, k)| !k.is_zero()).map(|(o, k)| (o, k * &sign_r)).collect();
    let a_deg = sp.a.cofree().degrees();
    let deltas = sp.deltas(rr);
    let values: Vec<SparseVec> = (0..sp.a.dim())
        .map(|w| {
            let mut out = SparseVec::new();
            for (x, ws, c) in &deltas[w] {
                if coop.is_coaug(rr, *x) {
                    continue;
                }
                for (order, k) in &perms {
                    let mut factors = Vec::with_capacity(rr);
                    let mut pre = coop.degree(rr, *x);
                    let mut sign = k * c;
                    for (q, &wq) in ws.iter().enumerate() {
                        let t = ts[order[q]];
                        sign *= Scalar::sign(t.degree() * pre);
                        pre += a_deg[wq];
                        factors.push(t.value(wq).clone());
                    }
                    if factors.iter().any(SparseVec::is_zero) {
                        continue;
                    }
                    expand(&factors, &mut |bs, coef| {
                        out.add_scaled(&r.eval(&b_src.cofree().project(*x, bs)), &(coef * &sign));
                    });
                }
            }
            out
        })
        .collect();
    HomMap::from_fn(&sp.a, sp.b.base(), degree, |w| values[w].clone()).expect("homogeneous")
}
