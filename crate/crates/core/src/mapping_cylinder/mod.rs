//! The cylinder `Cyl(f, f̃) = V ⊕ sW ⊕ Ṽ` of a pair of chain maps `V → W ← Ṽ`, with
//! `∂(v + sw + ṽ) = ∂v + s(f(v) − ∂w + f̃(ṽ)) + ∂ṽ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::convolution::{BasisEntry, DiffEntry};
use crate::error::{Error, Result};
use crate::linalg::{
    chain_map_failure, cohomology, induced_cohomology_map, Complex, GradedMap, GradedSpace, Matrix, Scalar, SparseVec,
};

#[derive(Clone, Debug)]
pub struct MappingCylinder {
    pub v: Complex,
    pub w: Complex,
    pub vt: Complex,
    pub f: GradedMap,
    pub ft: GradedMap,
    pub complex: Complex,
    /// Flat positions in `complex` of the basis vectors of `V`, `sW` and `Ṽ`.
    v_pos: Vec<usize>,
    w_pos: Vec<usize>,
    vt_pos: Vec<usize>,
}

fn prefixed(space: &GradedSpace, prefix: &str, shift: i64) -> Vec<(String, i64)> {
    space.flat_basis().into_iter().map(|(l, d)| (format!("{prefix}{l}"), d + shift)).collect()
}

fn check_map(name: &str, m: &GradedMap, src: &Complex, tgt: &Complex) -> Result<()> {
    if m.source() != src.space() || m.target() != tgt.space() {
        return Err(Error::SpaceMismatch { degree: 0, detail: format!("{name} has the wrong source or target") });
    }
    if let Some(k) = chain_map_failure(m, src, tgt)? {
        return Err(Error::NotChainMap(k));
    }
    Ok(())
}

impl MappingCylinder {
    /// Basis labels are `v:…`, `sw:…` and `vt:…`.
    pub fn build(v: &Complex, w: &Complex, vt: &Complex, f: &GradedMap, ft: &GradedMap) -> Result<Self> {
        check_map("f", f, v, w)?;
        check_map("f̃", ft, vt, w)?;
        let mut elems = prefixed(v.space(), "v:", 0);
        elems.extend(prefixed(w.space(), "sw:", 1));
        elems.extend(prefixed(vt.space(), "vt:", 0));
        let space = GradedSpace::from_labels(elems)?;
        let pos = |s: &GradedSpace, prefix: &str| -> Vec<usize> {
            s.flat_basis().iter().map(|(l, _)| space.find_flat(&format!("{prefix}{l}")).expect("label exists")).collect()
        };
        let (v_pos, w_pos, vt_pos) = (pos(v.space(), "v:"), pos(w.space(), "sw:"), pos(vt.space(), "vt:"));
        let embed = |out: &mut SparseVec, img: SparseVec, at: &[usize], c: &Scalar| {
            for (i, k) in img.iter() {
                out.add_term(at[i], k * c);
            }
        };
        let one = Scalar::one();
        let mut cols = vec![SparseVec::new(); space.total_dim()];
        for (i, &p) in v_pos.iter().enumerate() {
            let e = SparseVec::unit(i);
            embed(&mut cols[p], v.differential().apply_sparse(&e), &v_pos, &one);
            embed(&mut cols[p], f.apply_sparse(&e), &w_pos, &one);
        }
        for (i, &p) in w_pos.iter().enumerate() {
            embed(&mut cols[p], w.differential().apply_sparse(&SparseVec::unit(i)), &w_pos, &-Scalar::one());
        }
        for (i, &p) in vt_pos.iter().enumerate() {
            let e = SparseVec::unit(i);
            embed(&mut cols[p], ft.apply_sparse(&e), &w_pos, &one);
            embed(&mut cols[p], vt.differential().apply_sparse(&e), &vt_pos, &one);
        }
        let d = GradedMap::from_fn(&space, &space, 1, |i| cols[i].clone())?;
        let complex = Complex::new(space, d)?;
        Ok(MappingCylinder {
            v: v.clone(),
            w: w.clone(),
            vt: vt.clone(),
            f: f.clone(),
            ft: ft.clone(),
            complex,
            v_pos,
            w_pos,
            vt_pos,
        })
    }

    /// `v + sw + ṽ` in flat coordinates of the cylinder.
    pub fn element(&self, v: &SparseVec, w: &SparseVec, vt: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (x, pos) in [(v, &self.v_pos), (w, &self.w_pos), (vt, &self.vt_pos)] {
            for (i, c) in x.iter() {
                out.add_term(pos[i], c.clone());
            }
        }
        out
    }

    pub fn differential(&self, x: &SparseVec) -> SparseVec {
        self.complex.differential().apply_sparse(x)
    }

    fn component(&self, x: &SparseVec, pos: &[usize]) -> SparseVec {
        pos.iter().enumerate().filter_map(|(i, &p)| Some((i, x.get(p))).filter(|(_, c)| !c.is_zero())).collect()
    }

    pub fn proj_v(&self, x: &SparseVec) -> SparseVec {
        self.component(x, &self.v_pos)
    }

    pub fn proj_w(&self, x: &SparseVec) -> SparseVec {
        self.component(x, &self.w_pos)
    }

    pub fn proj_vt(&self, x: &SparseVec) -> SparseVec {
        self.component(x, &self.vt_pos)
    }

    /// `π_V` as a map of graded spaces.
    pub fn pi_v(&self) -> Result<GradedMap> {
        GradedMap::from_fn(self.complex.space(), self.v.space(), 0, |i| self.proj_v(&SparseVec::unit(i)))
    }

    /// `π_Ṽ` as a map of graded spaces.
    pub fn pi_vt(&self) -> Result<GradedMap> {
        GradedMap::from_fn(self.complex.space(), self.vt.space(), 0, |i| self.proj_vt(&SparseVec::unit(i)))
    }

    /// For a cocycle `v` of degree `n`, a cocycle `v′ ∈ Ṽ` and `w ∈ W` of degree `n − 1` with
    /// `f(v) − f̃(v′) − ∂w = 0`, or `None` if there is none.
    pub fn witness(&self, degree: i64, v: &SparseVec) -> Option<(SparseVec, SparseVec)> {
        let vts = self.vt.space();
        let ws = self.w.space();
        let rows = ws.dim(degree);
        let kernel = if vts.dim(degree) == 0 { Vec::new() } else { self.vt.differential().block(degree).kernel_basis() };
        let ft = self.ft.block(degree);
        let dw = self.w.differential().block(degree - 1);
        let mut cols: Vec<Vec<Scalar>> = kernel.iter().map(|k| ft.mul_vec(k)).collect();
        cols.extend((0..ws.dim(degree - 1)).map(|j| dw.column(j)));
        let fv = self.f.apply_sparse(v);
        let off = ws.offset(degree);
        let rhs: Vec<Scalar> = (0..rows).map(|r| fv.get(off + r)).collect();
        if rhs.iter().all(Scalar::is_zero) {
            return Some((SparseVec::new(), SparseVec::new()));
        }
        if cols.is_empty() {
            return None;
        }
        let sol = Matrix::from_columns(rows, &cols).solve(&rhs)?;
        let (c, w) = sol.split_at(kernel.len());
        let mut vp = SparseVec::new();
        let vt_off = vts.offset(degree);
        for (k, ck) in kernel.iter().zip(c) {
            for (i, x) in k.iter().enumerate() {
                vp.add_term(vt_off + i, x * ck);
            }
        }
        let w_off = ws.offset(degree - 1);
        let w = w.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (w_off + i, x.clone())).collect();
        Some((vp, w))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub degree: i64,
    /// Vectors as `(basis label, coefficient)` lists.
    pub v: Vec<(String, Scalar)>,
    pub v_prime: Vec<(String, Scalar)>,
    pub w: Vec<(String, Scalar)>,
    /// `v + sw − v′` is a cocycle of the cylinder projecting to `v`.
    pub lifts: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub f_quasi_iso: bool,
    pub ft_quasi_iso: bool,
    pub pi_v_quasi_iso: bool,
    pub pi_vt_quasi_iso: bool,
    pub cyl_ranks: std::collections::BTreeMap<i64, usize>,
    /// One per cohomology representative of `V`; only attempted when `f` and `f̃` are
    /// quasi-isomorphisms.
    pub witnesses: Vec<Witness>,
    /// `pass`, `fail`, or `hypothesis-violated`.
    pub verdict: String,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.verdict != "fail"
    }
}

fn labelled(space: &GradedSpace, x: &SparseVec) -> Vec<(String, Scalar)> {
    let basis = space.flat_basis();
    x.iter().map(|(i, c)| (basis[i].0.clone(), c.clone())).collect()
}

/// Build `Cyl(f, f̃)` and check whether `π_V` and `π_Ṽ` are quasi-isomorphisms.
pub fn check_lemma(v: &Complex, w: &Complex, vt: &Complex, f: &GradedMap, ft: &GradedMap) -> Result<LemmaReport> {
    let cyl = MappingCylinder::build(v, w, vt, f, ft)?;
    let f_quasi_iso = induced_cohomology_map(f, v, w)?.is_iso();
    let ft_quasi_iso = induced_cohomology_map(ft, vt, w)?.is_iso();
    let pi_v_quasi_iso = induced_cohomology_map(&cyl.pi_v()?, &cyl.complex, v)?.is_iso();
    let pi_vt_quasi_iso = induced_cohomology_map(&cyl.pi_vt()?, &cyl.complex, vt)?.is_iso();
    let hypothesis = f_quasi_iso && ft_quasi_iso;
    let mut witnesses = Vec::new();
    let w_space = w.space();
    if hypothesis {
        for piece in cohomology(v)?.pieces() {
            let off = v.space().offset(piece.degree);
            for rep in &piece.representatives {
                let vv: SparseVec =
                    rep.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (off + i, c.clone())).collect();
                let (v_prime, w, lifts) = match cyl.witness(piece.degree, &vv) {
                    Some((vp, w)) => {
                        let x = cyl.element(&vv, &w, &vp.scaled(&-Scalar::one()));
                        let lifts = cyl.differential(&x).is_zero() && cyl.proj_v(&x) == vv;
                        (vp, w, lifts)
                    }
                    None => (SparseVec::new(), SparseVec::new(), false),
                };
                witnesses.push(Witness {
                    degree: piece.degree,
                    v: labelled(v.space(), &vv),
                    v_prime: labelled(vt.space(), &v_prime),
                    w: labelled(w_space, &w),
                    lifts,
                });
            }
        }
    }
    let conclusion = pi_v_quasi_iso && pi_vt_quasi_iso && witnesses.iter().all(|w| w.lifts);
    let verdict = match (hypothesis, conclusion) {
        (false, _) => "hypothesis-violated",
        (true, true) => "pass",
        (true, false) => "fail",
    };
    Ok(LemmaReport {
        f_quasi_iso,
        ft_quasi_iso,
        pi_v_quasi_iso,
        pi_vt_quasi_iso,
        cyl_ranks: cohomology(&cyl.complex)?.ranks(),
        witnesses,
        verdict: verdict.to_string(),
    })
}

/// A complex given by labelled basis vectors and differential entries `d(source) ∋ coeff·target`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
}

impl ComplexDoc {
    pub fn build(&self) -> Result<Complex> {
        let space = GradedSpace::from_labels(self.basis.iter().map(|b| (b.label.clone(), b.degree)))?;
        let d = map_from_entries(&space, &space, 1, &self.differential)?;
        Complex::new(space, d)
    }
}

fn map_from_entries(src: &GradedSpace, tgt: &GradedSpace, degree: i64, entries: &[DiffEntry]) -> Result<GradedMap> {
    let mut cols: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for e in entries {
        let s = src.find_flat(&e.source).ok_or_else(|| Error::Schema(format!("unknown source label {}", e.source)))?;
        let t = tgt.find_flat(&e.target).ok_or_else(|| Error::Schema(format!("unknown target label {}", e.target)))?;
        cols.entry(s).or_default().add_term(t, e.coeff.clone());
    }
    GradedMap::from_fn(src, tgt, degree, |i| cols.get(&i).cloned().unwrap_or_default())
}

/// An explicit instance `V → W ← Ṽ`; the maps use the same entry format as differentials.
///
/// ```json
/// {
///   "v":  {"basis": [{"label": "a", "degree": 0}]},
///   "w":  {"basis": [{"label": "x", "degree": 0}]},
///   "vt": {"basis": [{"label": "b", "degree": 0}]},
///   "f":  [{"source": "a", "target": "x", "coeff": "1"}],
///   "ft": [{"source": "b", "target": "x", "coeff": "2"}]
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaDoc {
    pub v: ComplexDoc,
    pub w: ComplexDoc,
    pub vt: ComplexDoc,
    #[serde(default)]
    pub f: Vec<DiffEntry>,
    #[serde(default)]
    pub ft: Vec<DiffEntry>,
}

impl LemmaDoc {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn check(&self) -> Result<LemmaReport> {
        let (v, w, vt) = (self.v.build()?, self.w.build()?, self.vt.build()?);
        let f = map_from_entries(v.space(), w.space(), 0, &self.f)?;
        let ft = map_from_entries(vt.space(), w.space(), 0, &self.ft)?;
        check_lemma(&v, &w, &vt, &f, &ft)
    }
}

#[cfg(test)]
mod tests;
