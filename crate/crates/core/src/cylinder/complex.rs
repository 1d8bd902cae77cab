//! `Cyl` and its twisted versions as finite complexes, with the projections onto the
//! deformation complexes of `A` and `B`.

use std::collections::HashMap;

use super::{Component, CylAlgebra, CylElement, CylSpaces};
use crate::convolution::{CofreeComplex, HomMap};
use crate::error::{Error, Result};
use crate::linalg::{Complex, GradedMap, GradedSpace, SparseVec};

/// A basis of `Cyl`: elementary maps sending one basis vector of the cofree coalgebra to one
/// basis vector of the target. Degrees are those in `Cyl`, so the `T` entries are shifted by one.
#[derive(Clone, Debug)]
pub struct CylBasis {
    space: GradedSpace,
    /// `(component, w, v)` for every flat basis vector.
    entries: Vec<(Component, usize, usize)>,
    index: HashMap<(Component, usize, usize), usize>,
}

impl CylBasis {
    /// `reduced_t` drops the `T` entries on the cogenerators (the `Cyl∘` basis).
    pub fn new(sp: &CylSpaces, reduced_t: bool) -> Self {
        let mut elems: Vec<(String, i64, (Component, usize, usize))> = Vec::new();
        let mut push = |c: Component, src: &CofreeComplex, tgt: &CofreeComplex, reduced: bool, shift: i64| {
            let wl = src.cofree().labels();
            let tb = tgt.base().space().flat_basis();
            for (w, (wlab, wdeg)) in wl.iter().enumerate() {
                if reduced && src.is_cogenerator(w) {
                    continue;
                }
                for (v, (vlab, vdeg)) in tb.iter().enumerate() {
                    elems.push((format!("{}:{wlab}->{vlab}", c.tag()), vdeg - wdeg + shift, (c, w, v)));
                }
            }
        };
        push(Component::P, sp.a(), sp.a(), true, 0);
        push(Component::T, sp.a(), sp.b(), reduced_t, 1);
        push(Component::R, sp.b(), sp.b(), true, 0);
        let space = GradedSpace::from_labels(elems.iter().map(|(l, d, _)| (l.clone(), *d))).expect("distinct labels");
        let by_label: HashMap<&str, (Component, usize, usize)> = elems.iter().map(|(l, _, e)| (l.as_str(), *e)).collect();
        let entries: Vec<(Component, usize, usize)> =
            space.flat_basis().iter().map(|(l, _)| by_label[l.as_str()]).collect();
        let index = entries.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        CylBasis { space, entries, index }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> (Component, usize, usize) {
        self.entries[i]
    }

    /// The basis vector as an element of `Cyl`.
    pub fn element(&self, sp: &CylSpaces, i: usize) -> Result<CylElement> {
        let (c, w, v) = self.entries[i];
        let degree = self.space.flat_degrees()[i];
        let unit = |u: usize| if u == w { SparseVec::unit(v) } else { SparseVec::new() };
        match c {
            Component::P => CylElement::from_p(sp, HomMap::from_fn(sp.a(), sp.a().base(), degree, unit)?),
            Component::T => CylElement::from_t(sp, HomMap::from_fn(sp.a(), sp.b().base(), degree - 1, unit)?),
            Component::R => CylElement::from_r(sp, HomMap::from_fn(sp.b(), sp.b().base(), degree, unit)?),
        }
    }

    /// Coordinates of an element; fails if it has a component outside the basis.
    pub fn coords(&self, x: &CylElement) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for c in [Component::P, Component::T, Component::R] {
            let m = x.component(c);
            for (w, val) in m.values().iter().enumerate() {
                for (v, k) in val.iter() {
                    let i = self.index.get(&(c, w, v)).ok_or_else(|| {
                        Error::Incompatible(format!("{} component leaves the basis", c.tag()))
                    })?;
                    out.add_term(*i, k.clone());
                }
            }
        }
        Ok(out)
    }

    /// Arity of the cofree basis vector underlying entry `i`.
    pub fn arity(&self, sp: &CylSpaces, i: usize) -> usize {
        let (c, w, _) = self.entries[i];
        match c {
            Component::R => sp.b().arity(w),
            _ => sp.a().arity(w),
        }
    }
}

/// The complex `(Cyl, ℓ_1)` of a (twisted) cylinder algebra.
pub struct CylComplex {
    pub basis: CylBasis,
    pub complex: Complex,
}

impl CylComplex {
    pub(super) fn build(alg: &CylAlgebra) -> Result<Self> {
        let sp = alg.spaces();
        let basis = CylBasis::new(sp, alg.is_restricted());
        let mut cols = Vec::with_capacity(basis.dim());
        for i in 0..basis.dim() {
            let e = basis.element(sp, i)?;
            cols.push(basis.coords(&alg.differential(&e)?)?);
        }
        let space = basis.space.clone();
        let d = GradedMap::from_fn(&space, &space, 1, |i| cols[i].clone())?;
        let complex = Complex::new(space, d)?;
        Ok(CylComplex { basis, complex })
    }

    /// The projection onto `P` (for `A`) or `R` (for `B`), as a chain map to a complex whose
    /// flat basis is the elementary maps `(w, v)` in `target_pairs` order.
    pub fn projection(&self, which: Component, target: &Complex, target_pairs: &[(usize, usize)]) -> Result<GradedMap> {
        let idx: HashMap<(usize, usize), usize> = target_pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        GradedMap::from_fn(self.complex.space(), target.space(), 0, |i| {
            let (c, w, v) = self.basis.entries[i];
            match idx.get(&(w, v)) {
                Some(&j) if c == which => SparseVec::unit(j),
                _ => SparseVec::new(),
            }
        })
    }

    /// The summand spanned by the entries of arity `n`, which is a subcomplex whenever the
    /// differential preserves arity.
    pub fn arity_piece(&self, sp: &CylSpaces, n: usize) -> Result<(Complex, Vec<usize>)> {
        let keep: Vec<usize> = (0..self.basis.dim()).filter(|&i| self.basis.arity(sp, i) == n).collect();
        subcomplex(&self.complex, &keep)
    }
}

/// The subcomplex on a subset of the flat basis, checking that it is closed under `d`. Returns
/// the complex and the chosen indices in its flat order.
pub fn subcomplex(c: &Complex, keep: &[usize]) -> Result<(Complex, Vec<usize>)> {
    let basis = c.space().flat_basis();
    let space = GradedSpace::from_labels(keep.iter().map(|&i| basis[i].clone()))?;
    let order: Vec<usize> = space.flat_basis().iter().map(|(l, _)| c.space().find_flat(l).expect("label exists")).collect();
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(j, &i)| (i, j)).collect();
    let mut failure = None;
    let d = GradedMap::from_fn(&space, &space, 1, |j| {
        let col = c.differential().apply_sparse(&SparseVec::unit(order[j]));
        let mut out = SparseVec::new();
        for (i, k) in col.iter() {
            match pos.get(&i) {
                Some(&jj) => out.add_term(jj, k.clone()),
                None => failure = Some(basis[order[j]].1),
            }
        }
        out
    })?;
    if let Some(deg) = failure {
        return Err(Error::SpaceMismatch { degree: deg, detail: "the chosen summand is not closed under d".into() });
    }
    Ok((Complex::new(space, d)?, order))
}
