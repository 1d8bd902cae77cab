//! The deformation complex `Def(A) = (Conv(C∘, End_A), ∂ + [Q, −])`, truncated at the arity cap.

use std::sync::Arc;

use super::{conv_bracket, mc_residual, CofreeComplex, HomMap};
use crate::error::{Error, Result};
use crate::linalg::{Complex, GradedMap, GradedSpace, SparseVec};

/// Elementary maps sending one basis vector of `C∘(A)` to one basis vector of `A`.
#[derive(Clone, Debug)]
pub struct ElementaryBasis {
    pub space: GradedSpace,
    /// `(w, v)` for every flat basis vector of `space`.
    pub pairs: Vec<(usize, usize)>,
}

impl ElementaryBasis {
    /// Maps `C(V) → Y` vanishing on the cogenerators when `reduced`.
    pub fn new(src: &CofreeComplex, tgt_space: &GradedSpace, reduced: bool, prefix: &str) -> Self {
        let cofree = src.cofree();
        let wl: Vec<String> = cofree.labels().into_iter().map(|(l, _)| l).collect();
        let tb = tgt_space.flat_basis();
        let mut elems = Vec::new();
        for w in 0..cofree.dim() {
            if reduced && src.is_cogenerator(w) {
                continue;
            }
            for (v, (vl, vd)) in tb.iter().enumerate() {
                elems.push((format!("{prefix}{}->{vl}", wl[w]), vd - cofree.degree(w), (w, v)));
            }
        }
        let space = GradedSpace::from_labels(elems.iter().map(|(l, d, _)| (l.clone(), *d))).expect("distinct labels");
        let pairs = space
            .flat_basis()
            .iter()
            .map(|(l, _)| elems.iter().find(|(m, _, _)| m == l).map(|e| e.2).expect("label exists"))
            .collect();
        ElementaryBasis { space, pairs }
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// Coordinates of a map in this basis.
    pub fn coords(&self, f: &HomMap) -> SparseVec {
        self.pairs
            .iter()
            .enumerate()
            .filter_map(|(i, &(w, v))| {
                let c = f.value(w).get(v);
                (!c.is_zero()).then_some((i, c))
            })
            .collect()
    }
}

pub struct DefComplex {
    pub q: HomMap,
    pub basis: ElementaryBasis,
    pub complex: Complex,
}

impl DefComplex {
    /// The map with the given coordinates, of degree `degree`.
    pub fn element(&self, degree: i64, coords: &SparseVec) -> Result<HomMap> {
        let src = self.q.source();
        let mut values = vec![SparseVec::new(); src.dim()];
        for (i, c) in coords.iter() {
            let (w, v) = self.basis.pairs[i];
            values[w].add_term(v, c.clone());
        }
        HomMap::from_fn(src, src.base(), degree, |w| values[w].clone())
    }

    /// `∂f + [Q, f]`.
    pub fn apply(&self, f: &HomMap) -> Result<HomMap> {
        let mut out = f.differential();
        out.add_scaled(&conv_bracket(&self.q, f)?, &crate::linalg::Scalar::one())?;
        Ok(out)
    }
}

/// Build `Def(A)` for an MC element `Q`; rejects non-MC input with its residual.
pub fn def_complex(q: &HomMap) -> Result<DefComplex> {
    if !q.is_endo() || !q.is_reduced() {
        return Err(Error::Incompatible("Q must be a convolution element".into()));
    }
    let r = mc_residual(q)?;
    if !r.is_zero() {
        let w = (0..r.values().len()).find(|&w| !r.value(w).is_zero()).unwrap();
        let (n, x, a) = q.source().cofree().rep(w);
        return Err(Error::NotMaurerCartan(format!(
            "∂Q + ½[Q,Q] is nonzero on arity {n}, cooperad factor {}, inputs {a:?}",
            q.source().cooperad().label(n, x)
        )));
    }
    let src: &Arc<CofreeComplex> = q.source();
    let basis = ElementaryBasis::new(src, src.base().space(), true, "");
    let dq = q.coderivation()?;
    let space = basis.space.clone();
    let d = GradedMap::from_fn(&space, &space, 1, |i| {
        let (w, v) = basis.pairs[i];
        let degree = src.base().degrees()[v] - src.cofree().degree(w);
        let f = HomMap::from_fn(src, src.base(), degree, |u| if u == w { SparseVec::unit(v) } else { SparseVec::new() })
            .expect("homogeneous");
        // ∂f + Q⋆f − (−1)^{|f|} f⋆Q
        let mut out = f.differential();
        out.add_scaled(&q.star(&f).expect("same source"), &crate::linalg::Scalar::one()).expect("same degree");
        out.add_scaled(&f.after(&dq, 1), &-crate::linalg::Scalar::sign(degree)).expect("same degree");
        basis.coords(&out)
    })?;
    let complex = Complex::new(space, d)?;
    Ok(DefComplex { q: q.clone(), basis, complex })
}
