//! `Def(A) ← Def(A⇝B) → Def(B)` on arity-truncated instances.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::complex::subcomplex;
use super::{Component, CylAlgebra, CylComplex, CylElement, CylSpaces};
use crate::convolution::{def_complex, HomMap};
use crate::error::{Error, Result};
use crate::linalg::{chain_map_failure, cohomology, induced_cohomology_map, Complex, GradedMap, InducedMap, SparseVec};

/// `Def(A⇝B)`: `Cyl∘^{sF₁}` twisted by `α = Q_A + s(F − F₁) + Q_B`. Returns the algebra and `α`.
pub fn build_def_morphism_complex(q_a: &HomMap, q_b: &HomMap, f: &HomMap) -> Result<(CylAlgebra, CylElement)> {
    let sp = CylSpaces::from_sources(q_a.source().clone(), q_b.source().clone())?;
    if !Arc::ptr_eq(f.source(), q_a.source()) || !Arc::ptr_eq(f.target(), q_b.target()) {
        return Err(Error::Incompatible("F must map C(A) to B for the given A and B".into()));
    }
    let plain = CylAlgebra::new(sp.clone());
    let u = CylElement::new(q_a.clone(), f.clone(), q_b.clone(), 1)?;
    let decoded = plain.decode_mc(&u)?;
    if !decoded.is_mc() {
        return Err(Error::NotMaurerCartan(decoded.failures().join("; ")));
    }
    let sf1 = CylElement::from_t(&sp, sp.t_from_linear(0, &sp.linear_part(f)?)?)?;
    let alpha = u.sub(&sf1)?;
    let def = plain.twist(&sf1)?.restrict_to_cyl_circ()?.twist(&alpha)?;
    Ok((def, alpha))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub quasi_iso: bool,
    /// Induced map on cohomology per degree, in the bases of representatives.
    pub induced: BTreeMap<i64, Vec<Vec<String>>>,
}

impl ProjectionReport {
    fn new(m: &InducedMap) -> Self {
        let induced = m
            .matrices
            .iter()
            .map(|(&k, mat)| {
                let rows = (0..mat.rows()).map(|r| (0..mat.cols()).map(|c| mat.get(r, c).to_string()).collect()).collect();
                (k, rows)
            })
            .collect();
        ProjectionReport { quasi_iso: m.is_iso(), induced }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArityReport {
    pub arity: usize,
    pub cyl_ranks: BTreeMap<i64, usize>,
    pub a_ranks: BTreeMap<i64, usize>,
    pub b_ranks: BTreeMap<i64, usize>,
    pub pi_a_quasi_iso: bool,
    pub pi_b_quasi_iso: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZigzagReport {
    pub cap: usize,
    pub cooperad: String,
    pub f1_quasi_iso: bool,
    pub def_a_dim: usize,
    pub def_b_dim: usize,
    pub def_ab_dim: usize,
    pub def_a_ranks: BTreeMap<i64, usize>,
    pub def_b_ranks: BTreeMap<i64, usize>,
    pub def_ab_ranks: BTreeMap<i64, usize>,
    pub pi_a: ProjectionReport,
    pub pi_b: ProjectionReport,
    /// The untwisted `Cyl∘^{sF₁}`, arity by arity.
    pub per_arity: Vec<ArityReport>,
    pub conclusion_holds: bool,
    /// `pass`, `fail`, or `hypothesis-violated` when `F₁` is not a quasi-isomorphism.
    pub verdict: String,
}

impl ZigzagReport {
    pub fn passed(&self) -> bool {
        self.verdict != "fail"
    }
}

/// Projection from (a summand of) a cylinder complex to (a summand of) a deformation complex.
/// `src_order`/`tgt_order` list the flat indices of the summands in the full complexes.
fn projection(
    cyl: &CylComplex,
    src: &Complex,
    src_order: &[usize],
    which: Component,
    tgt: &Complex,
    tgt_pairs: &[(usize, usize)],
    tgt_order: &[usize],
) -> Result<GradedMap> {
    let pos: HashMap<(usize, usize), usize> = tgt_order.iter().enumerate().map(|(j, &i)| (tgt_pairs[i], j)).collect();
    GradedMap::from_fn(src.space(), tgt.space(), 0, |j| {
        let (c, w, v) = cyl.basis.entry(src_order[j]);
        match pos.get(&(w, v)) {
            Some(&k) if c == which => SparseVec::unit(k),
            _ => SparseVec::new(),
        }
    })
}

fn ranks(c: &Complex) -> Result<BTreeMap<i64, usize>> {
    Ok(cohomology(c)?.ranks())
}

/// Check that `π_A`, `π_B` are quasi-isomorphisms out of the truncated `Def(A⇝B)`, and the
/// untwisted statement arity by arity.
pub fn verify_zigzag(q_a: &HomMap, q_b: &HomMap, f: &HomMap) -> Result<ZigzagReport> {
    let sp = CylSpaces::from_sources(q_a.source().clone(), q_b.source().clone())?;
    let a = sp.a().base().complex();
    let b = sp.b().base().complex();
    let f1 = sp.linear_part(f)?;
    if let Some(k) = chain_map_failure(&f1, a, b)? {
        return Err(Error::NotChainMap(k));
    }
    let f1_quasi_iso = induced_cohomology_map(&f1, a, b)?.is_iso();

    let (def_ab, _) = build_def_morphism_complex(q_a, q_b, f)?;
    let cyl = def_ab.complex()?;
    let def_a = def_complex(q_a)?;
    let def_b = def_complex(q_b)?;
    let all = |n: usize| (0..n).collect::<Vec<_>>();
    let ident_src = all(cyl.basis.dim());
    let pi_a = projection(&cyl, &cyl.complex, &ident_src, Component::P, &def_a.complex, &def_a.basis.pairs, &all(def_a.basis.dim()))?;
    let pi_b = projection(&cyl, &cyl.complex, &ident_src, Component::R, &def_b.complex, &def_b.basis.pairs, &all(def_b.basis.dim()))?;
    let pi_a = ProjectionReport::new(&induced_cohomology_map(&pi_a, &cyl.complex, &def_a.complex)?);
    let pi_b = ProjectionReport::new(&induced_cohomology_map(&pi_b, &cyl.complex, &def_b.complex)?);

    let per_arity = untwisted_by_arity(&sp, &f1)?;

    let conclusion_holds =
        pi_a.quasi_iso && pi_b.quasi_iso && per_arity.iter().all(|r| r.pi_a_quasi_iso && r.pi_b_quasi_iso);
    let verdict = match (f1_quasi_iso, conclusion_holds) {
        (false, _) => "hypothesis-violated",
        (true, true) => "pass",
        (true, false) => "fail",
    };
    Ok(ZigzagReport {
        cap: sp.cap(),
        cooperad: sp.cooperad().name().to_string(),
        f1_quasi_iso,
        def_a_dim: def_a.basis.dim(),
        def_b_dim: def_b.basis.dim(),
        def_ab_dim: cyl.basis.dim(),
        def_a_ranks: ranks(&def_a.complex)?,
        def_b_ranks: ranks(&def_b.complex)?,
        def_ab_ranks: ranks(&cyl.complex)?,
        pi_a,
        pi_b,
        per_arity,
        conclusion_holds,
        verdict: verdict.to_string(),
    })
}

/// `Cyl∘(C, A, B)^{sF₁}` with trivial structures on `A` and `B`, compared arity by arity with
/// `Hom(C∘(A), A)` and `Hom(C∘(B), B)` through `π_A` and `π_B`.
pub fn untwisted_by_arity(sp: &Arc<CylSpaces>, f1: &GradedMap) -> Result<Vec<ArityReport>> {
    let sf1 = CylElement::from_t(sp, sp.t_from_linear(0, f1)?)?;
    let untwisted = CylAlgebra::new(sp.clone()).twist(&sf1)?.restrict_to_cyl_circ()?;
    let cyl0 = untwisted.complex()?;
    let hom_a = def_complex(&HomMap::zero(sp.a(), sp.a().base(), 1))?;
    let hom_b = def_complex(&HomMap::zero(sp.b(), sp.b().base(), 1))?;
    let mut per_arity = Vec::new();
    for n in 1..=sp.cap() {
        let (c_n, c_idx) = cyl0.arity_piece(sp, n)?;
        let keep_a: Vec<usize> = (0..hom_a.basis.dim()).filter(|&i| sp.a().arity(hom_a.basis.pairs[i].0) == n).collect();
        let keep_b: Vec<usize> = (0..hom_b.basis.dim()).filter(|&i| sp.b().arity(hom_b.basis.pairs[i].0) == n).collect();
        if c_idx.is_empty() && keep_a.is_empty() && keep_b.is_empty() {
            continue;
        }
        let (a_n, a_idx) = subcomplex(&hom_a.complex, &keep_a)?;
        let (b_n, b_idx) = subcomplex(&hom_b.complex, &keep_b)?;
        let pa = projection(&cyl0, &c_n, &c_idx, Component::P, &a_n, &hom_a.basis.pairs, &a_idx)?;
        let pb = projection(&cyl0, &c_n, &c_idx, Component::R, &b_n, &hom_b.basis.pairs, &b_idx)?;
        per_arity.push(ArityReport {
            arity: n,
            cyl_ranks: ranks(&c_n)?,
            a_ranks: ranks(&a_n)?,
            b_ranks: ranks(&b_n)?,
            pi_a_quasi_iso: induced_cohomology_map(&pa, &c_n, &a_n)?.is_iso(),
            pi_b_quasi_iso: induced_cohomology_map(&pb, &c_n, &b_n)?.is_iso(),
        });
    }
    Ok(per_arity)
}
