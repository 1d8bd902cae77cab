//! Graded spaces, homogeneous maps and cochain complexes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{Matrix, Scalar, SparseVec};
use crate::error::{Error, Result};

/// A finite-dimensional ℤ-graded vector space with labelled bases.
///
/// Elements are addressed either by `(degree, index)` or by a flat index that runs through the
/// degrees in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedSpace {
    pieces: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new(pieces: BTreeMap<i64, Vec<String>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (deg, labels) in &pieces {
            if labels.is_empty() {
                return Err(Error::Schema(format!("degree {deg} listed with an empty basis")));
            }
            for l in labels {
                if !seen.insert(l.clone()) {
                    return Err(Error::Schema(format!("duplicate basis label {l:?}")));
                }
            }
        }
        Ok(GradedSpace { pieces })
    }

    pub fn empty() -> Self {
        GradedSpace::default()
    }

    /// Basis given as `(label, degree)` pairs; order within a degree follows the input.
    pub fn from_labels<S: Into<String>>(elements: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut pieces: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for (l, d) in elements {
            pieces.entry(d).or_default().push(l.into());
        }
        GradedSpace::new(pieces)
    }

    /// `dims[i]` basis vectors in degree `lo + i`, labelled `{prefix}{degree}_{j}`.
    pub fn with_dims(prefix: &str, lo: i64, dims: &[usize]) -> Self {
        let mut pieces = BTreeMap::new();
        for (i, &n) in dims.iter().enumerate() {
            if n > 0 {
                let d = lo + i as i64;
                pieces.insert(d, (0..n).map(|j| format!("{prefix}{d}_{j}")).collect());
            }
        }
        GradedSpace { pieces }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.pieces.keys().copied()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.pieces.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.pieces.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn pieces(&self) -> &BTreeMap<i64, Vec<String>> {
        &self.pieces
    }

    /// `(label, degree)` for every basis vector in flat order.
    pub fn flat_basis(&self) -> Vec<(String, i64)> {
        self.pieces.iter().flat_map(|(&d, ls)| ls.iter().map(move |l| (l.clone(), d))).collect()
    }

    /// Degree of each basis vector in flat order.
    pub fn flat_degrees(&self) -> Vec<i64> {
        self.pieces.iter().flat_map(|(&d, ls)| std::iter::repeat_n(d, ls.len())).collect()
    }

    /// Flat index of the first basis vector in `degree`.
    pub fn offset(&self, degree: i64) -> usize {
        self.pieces.range(..degree).map(|(_, v)| v.len()).sum()
    }

    pub fn flat_index(&self, degree: i64, i: usize) -> usize {
        self.offset(degree) + i
    }

    /// `(degree, index within degree)` of a flat index.
    pub fn locate(&self, flat: usize) -> (i64, usize) {
        let mut rest = flat;
        for (&d, ls) in &self.pieces {
            if rest < ls.len() {
                return (d, rest);
            }
            rest -= ls.len();
        }
        panic!("flat index {flat} out of range");
    }

    pub fn find(&self, label: &str) -> Option<(i64, usize)> {
        self.pieces
            .iter()
            .find_map(|(&d, ls)| ls.iter().position(|l| l == label).map(|i| (d, i)))
    }

    pub fn find_flat(&self, label: &str) -> Option<usize> {
        self.find(label).map(|(d, i)| self.flat_index(d, i))
    }

    /// Shift every degree by `k` (labels unchanged).
    pub fn shift(&self, k: i64) -> GradedSpace {
        GradedSpace { pieces: self.pieces.iter().map(|(&d, l)| (d + k, l.clone())).collect() }
    }

    /// Direct sum; labels of the summands must be disjoint.
    pub fn direct_sum(&self, other: &GradedSpace) -> Result<GradedSpace> {
        let mut pieces = self.pieces.clone();
        for (&d, ls) in &other.pieces {
            pieces.entry(d).or_default().extend(ls.iter().cloned());
        }
        GradedSpace::new(pieces)
    }

    /// Restrict to one degree, keeping a flat-index-to-vector conversion cheap.
    pub fn vector(&self, degree: i64, coords: Vec<Scalar>) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim(degree));
        let mut v = vec![Scalar::zero(); self.total_dim()];
        let off = self.offset(degree);
        for (i, c) in coords.into_iter().enumerate() {
            v[off + i] = c;
        }
        v
    }
}

/// Shift up by one: an element of degree `d` becomes degree `d + 1`.
pub fn suspend(v: &GradedSpace) -> GradedSpace {
    v.shift(1)
}

pub fn desuspend(v: &GradedSpace) -> GradedSpace {
    v.shift(-1)
}

/// A degree-homogeneous linear map, one dense block per source degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    degree: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    /// Blocks that are identically zero are dropped, so equal maps have equal representations.
    pub fn new(
        source: GradedSpace,
        target: GradedSpace,
        degree: i64,
        blocks: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (k, m) in blocks {
            let (rows, cols) = (target.dim(k + degree), source.dim(k));
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::SpaceMismatch {
                    degree: k,
                    detail: format!("block is {}x{}, expected {rows}x{cols}", m.rows(), m.cols()),
                });
            }
            if !m.is_zero() {
                kept.insert(k, m);
            }
        }
        Ok(GradedMap { source, target, degree, blocks: kept })
    }

    pub fn zero(source: &GradedSpace, target: &GradedSpace, degree: i64) -> Self {
        GradedMap { source: source.clone(), target: target.clone(), degree, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space.degrees().map(|d| (d, Matrix::identity(space.dim(d)))).collect();
        GradedMap { source: space.clone(), target: space.clone(), degree: 0, blocks }
    }

    /// Build a map from its values on flat basis vectors of the source.
    pub fn from_fn(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i64,
        mut f: impl FnMut(usize) -> SparseVec,
    ) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        let sdeg = source.flat_degrees();
        for (flat, &k) in sdeg.iter().enumerate() {
            let img = f(flat);
            if img.is_zero() {
                continue;
            }
            let toff = target.offset(k + degree);
            let tdim = target.dim(k + degree);
            let block = blocks
                .entry(k)
                .or_insert_with(|| Matrix::zeros(tdim, source.dim(k)));
            let col = flat - source.offset(k);
            for (t, c) in img.iter() {
                if t < toff || t >= toff + tdim {
                    return Err(Error::DegreeMismatch { expected: k + degree, found: target.locate(t).0 });
                }
                block.set(t - toff, col, c.clone());
            }
        }
        GradedMap::new(source.clone(), target.clone(), degree, blocks)
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Matrix> {
        &self.blocks
    }

    /// The block on source degree `k` (a zero matrix when absent).
    pub fn block(&self, k: i64) -> Matrix {
        self.blocks
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(k + self.degree), self.source.dim(k)))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Apply to a flat coordinate vector of the source.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.source.total_dim());
        let mut out = vec![Scalar::zero(); self.target.total_dim()];
        for (&k, m) in &self.blocks {
            let so = self.source.offset(k);
            let to = self.target.offset(k + self.degree);
            let img = m.mul_vec(&v[so..so + m.cols()]);
            for (i, c) in img.into_iter().enumerate() {
                out[to + i] += c;
            }
        }
        out
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_dense(&self.apply(&v.to_dense(self.source.total_dim())))
    }

    pub fn scale(&self, s: &Scalar) -> GradedMap {
        let blocks = self.blocks.iter().map(|(&k, m)| (k, m.scale(s))).collect();
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree, blocks).unwrap()
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Incompatible("sum of maps with different shapes".into()));
        }
        let mut blocks = self.blocks.clone();
        for (&k, m) in &other.blocks {
            let b = blocks.remove(&k).map_or_else(|| m.clone(), |b| b.add(m));
            blocks.insert(k, b);
        }
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree, blocks)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// The whole map as a single matrix on flat coordinates.
    pub fn flat_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (&k, b) in &self.blocks {
            let so = self.source.offset(k);
            let to = self.target.offset(k + self.degree);
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(to + r, so + c, b.get(r, c).clone());
                }
            }
        }
        m
    }
}

/// `g ∘ f`
pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
    if f.target != g.source {
        let bad = f
            .target
            .degrees()
            .chain(g.source.degrees())
            .find(|&d| f.target.labels(d) != g.source.labels(d))
            .unwrap_or(0);
        return Err(Error::SpaceMismatch {
            degree: bad,
            detail: "target of the inner map differs from the source of the outer map".into(),
        });
    }
    let mut blocks = BTreeMap::new();
    for (&k, fb) in &f.blocks {
        if let Some(gb) = g.blocks.get(&(k + f.degree)) {
            blocks.insert(k, gb.mul(fb));
        }
    }
    GradedMap::new(f.source.clone(), g.target.clone(), f.degree + g.degree, blocks)
}

/// A cochain complex: a graded space with a degree +1 differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    space: GradedSpace,
    d: GradedMap,
}

impl Complex {
    /// Validated construction: the differential must have degree +1 and square to zero.
    pub fn new(space: GradedSpace, d: GradedMap) -> Result<Self> {
        let c = Complex::from_parts_unchecked(space, d)?;
        if let Some(k) = c.first_d_squared_failure() {
            return Err(Error::DSquaredNonzero(k));
        }
        Ok(c)
    }

    /// Only the shape and the degree of the differential are checked.
    pub fn from_parts_unchecked(space: GradedSpace, d: GradedMap) -> Result<Self> {
        if d.degree != 1 {
            return Err(Error::DegreeMismatch { expected: 1, found: d.degree });
        }
        if d.source != space || d.target != space {
            return Err(Error::Incompatible("differential must be an endomorphism of the space".into()));
        }
        Ok(Complex { space, d })
    }

    pub fn zero_differential(space: GradedSpace) -> Self {
        let d = GradedMap::zero(&space, &space, 1);
        Complex { space, d }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.d
    }

    fn first_d_squared_failure(&self) -> Option<i64> {
        let dd = compose(&self.d, &self.d).expect("endomorphism");
        dd.blocks.keys().next().copied()
    }

    /// Suspension: degrees shift up by one and the differential changes sign.
    pub fn suspend(&self) -> Complex {
        self.shift_by(1)
    }

    pub fn desuspend(&self) -> Complex {
        self.shift_by(-1)
    }

    fn shift_by(&self, k: i64) -> Complex {
        let space = self.space.shift(k);
        let sign = Scalar::sign(k);
        let blocks = self.d.blocks.iter().map(|(&j, m)| (j + k, m.scale(&sign))).collect();
        let d = GradedMap::new(space.clone(), space.clone(), 1, blocks).expect("shape preserved");
        Complex { space, d }
    }

    /// Direct sum of complexes (labels must be disjoint).
    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        let space = self.space.direct_sum(&other.space)?;
        let (a, b) = (&self.space, &other.space);
        let d = GradedMap::from_fn(&space, &space, 1, |flat| {
            let (deg, i) = space.locate(flat);
            let first = i < a.dim(deg);
            let (src, map, shift) = if first { (a, &self.d, 0) } else { (b, &other.d, a.dim(deg)) };
            let local = src.flat_index(deg, i - shift);
            let img = map.apply_sparse(&SparseVec::unit(local));
            img.iter()
                .map(|(t, c)| {
                    let (td, ti) = src.locate(t);
                    let extra = if first { 0 } else { a.dim(td) };
                    (space.flat_index(td, ti + extra), c.clone())
                })
                .collect()
        })?;
        Complex::new(space, d)
    }
}

pub fn check_d_squared(c: &Complex) -> bool {
    c.first_d_squared_failure().is_none()
}

/// Cohomology in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyPiece {
    pub degree: i64,
    pub rank: usize,
    /// Cocycles (coordinates in the degree-`degree` basis) whose classes form a basis.
    pub representatives: Vec<Vec<Scalar>>,
    #[serde(skip)]
    boundary_basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pieces: BTreeMap<i64, CohomologyPiece>,
    complex: Complex,
}

impl Cohomology {
    pub fn rank(&self, degree: i64) -> usize {
        self.pieces.get(&degree).map_or(0, |p| p.rank)
    }

    /// Ranks in every degree where the underlying space is nonzero.
    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(&d, p)| (d, p.rank)).collect()
    }

    pub fn piece(&self, degree: i64) -> Option<&CohomologyPiece> {
        self.pieces.get(&degree)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &CohomologyPiece> {
        self.pieces.values()
    }

    /// Coordinates of the class of `z` in the representative basis, or `None` if `z` is not a
    /// cocycle.
    pub fn class_of(&self, degree: i64, z: &[Scalar]) -> Option<Vec<Scalar>> {
        let space = self.complex.space();
        if space.dim(degree) == 0 {
            return Some(vec![]);
        }
        let dz = self.complex.d.block(degree).mul_vec(z);
        if dz.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let p = &self.pieces[&degree];
        let mut cols = p.representatives.clone();
        cols.extend(p.boundary_basis.iter().cloned());
        let m = Matrix::from_columns(space.dim(degree), &cols);
        let x = m.solve(z).expect("cocycles are spanned by representatives and boundaries");
        Some(x[..p.rank].to_vec())
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }
}

/// Cohomology with representatives chosen by pivoting in basis order.
pub fn cohomology(c: &Complex) -> Result<Cohomology> {
    if let Some(k) = c.first_d_squared_failure() {
        return Err(Error::DSquaredNonzero(k));
    }
    let mut pieces = BTreeMap::new();
    for k in c.space.degrees() {
        let n = c.space.dim(k);
        let dk = c.d.block(k);
        let kernel = dk.kernel_basis();
        let incoming = c.d.block(k - 1);
        let (_, piv) = incoming.rref();
        let boundary_basis: Vec<Vec<Scalar>> = piv.iter().map(|&j| incoming.column(j)).collect();
        let mut cols = boundary_basis.clone();
        cols.extend(kernel.iter().cloned());
        let (_, piv) = Matrix::from_columns(n, &cols).rref();
        let representatives: Vec<Vec<Scalar>> = piv
            .iter()
            .filter(|&&j| j >= boundary_basis.len())
            .map(|&j| cols[j].clone())
            .collect();
        pieces.insert(
            k,
            CohomologyPiece { degree: k, rank: representatives.len(), representatives, boundary_basis },
        );
    }
    Ok(Cohomology { pieces, complex: c.clone() })
}

/// Check `f ∘ d_V = d_W ∘ f` for a degree-0 map; returns the first failing source degree.
pub fn chain_map_failure(f: &GradedMap, v: &Complex, w: &Complex) -> Result<Option<i64>> {
    if f.degree != 0 {
        return Err(Error::DegreeMismatch { expected: 0, found: f.degree });
    }
    let lhs = compose(f, &v.d)?;
    let rhs = compose(&w.d, f)?;
    let diff = lhs.sub(&rhs)?;
    Ok(diff.blocks.keys().next().copied())
}

/// Matrices of the map induced on cohomology, in the representative bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedMap {
    pub matrices: BTreeMap<i64, Matrix>,
}

impl InducedMap {
    pub fn is_iso(&self) -> bool {
        self.matrices.values().all(Matrix::is_invertible)
    }
}

pub fn induced_cohomology_map(f: &GradedMap, v: &Complex, w: &Complex) -> Result<InducedMap> {
    if let Some(k) = chain_map_failure(f, v, w)? {
        return Err(Error::NotChainMap(k));
    }
    let hv = cohomology(v)?;
    let hw = cohomology(w)?;
    induced_from(f, &hv, &hw)
}

/// Induced map when the cohomologies are already known.
pub fn induced_from(f: &GradedMap, hv: &Cohomology, hw: &Cohomology) -> Result<InducedMap> {
    let degrees: BTreeSet<i64> = hv.pieces.keys().chain(hw.pieces.keys()).copied().collect();
    let mut matrices = BTreeMap::new();
    for k in degrees {
        let (rv, rw) = (hv.rank(k), hw.rank(k));
        if rv == 0 && rw == 0 {
            continue;
        }
        let mut m = Matrix::zeros(rw, rv);
        if let Some(p) = hv.piece(k) {
            let block = f.block(k);
            for (j, z) in p.representatives.iter().enumerate() {
                let img = block.mul_vec(z);
                let coords = hw.class_of(k, &img).ok_or(Error::NotChainMap(k))?;
                for (i, c) in coords.into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
        }
        matrices.insert(k, m);
    }
    Ok(InducedMap { matrices })
}

pub fn is_quasi_iso(f: &GradedMap, v: &Complex, w: &Complex) -> Result<bool> {
    Ok(induced_cohomology_map(f, v, w)?.is_iso())
}

/// The complex of graded maps `V → W` with `∂φ = d_W∘φ − (−1)^{|φ|} φ∘d_V`.
///
/// The basis of degree `k` consists of the elementary maps sending one basis vector `v` of `V`
/// to one basis vector `w` of `W` with `|w| − |v| = k`, labelled `"v->w"`.
pub fn hom_complex(v: &Complex, w: &Complex) -> Result<Complex> {
    let vb = v.space.flat_basis();
    let wb = w.space.flat_basis();
    let mut elems = Vec::new();
    for (vi, (vl, vd)) in vb.iter().enumerate() {
        for (wi, (wl, wd)) in wb.iter().enumerate() {
            elems.push((format!("{vl}->{wl}"), wd - vd, vi, wi));
        }
    }
    let space = GradedSpace::from_labels(elems.iter().map(|(l, d, _, _)| (l.clone(), *d)))?;
    let index: BTreeMap<(usize, usize), usize> = elems
        .iter()
        .map(|(l, _, vi, wi)| ((*vi, *wi), space.find_flat(l).unwrap()))
        .collect();
    let dv = v.d.flat_matrix();
    let dw = w.d.flat_matrix();
    let d = GradedMap::from_fn(&space, &space, 1, |flat| {
        let (k, _) = space.locate(flat);
        let (_, _, vi, wi) = elems.iter().find(|e| index[&(e.2, e.3)] == flat).unwrap();
        let mut out = SparseVec::new();
        // d_W ∘ E_{v,w} = Σ_u (d_W)_{u,w} E_{v,u}
        for u in 0..wb.len() {
            let c = dw.get(u, *wi);
            if !c.is_zero() {
                out.add_term(index[&(*vi, u)], c.clone());
            }
        }
        // E_{v,w} ∘ d_V = Σ_x (d_V)_{v,x} E_{x,w}
        let s = -Scalar::sign(k);
        for x in 0..vb.len() {
            let c = dv.get(*vi, x);
            if !c.is_zero() {
                out.add_term(index[&(x, *wi)], c * &s);
            }
        }
        out
    })?;
    Complex::new(space, d)
}

#[derive(Serialize, Deserialize)]
struct PieceDoc {
    degree: i64,
    basis: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SpaceDoc {
    pieces: Vec<PieceDoc>,
}

impl Serialize for GradedSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceDoc {
            pieces: self.pieces.iter().map(|(&degree, b)| PieceDoc { degree, basis: b.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SpaceDoc::deserialize(d)?;
        let mut pieces = BTreeMap::new();
        for p in doc.pieces {
            if pieces.insert(p.degree, p.basis).is_some() {
                return Err(serde::de::Error::custom(format!("degree {} listed twice", p.degree)));
            }
        }
        GradedSpace::new(pieces).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct BlockDoc {
    source_degree: i64,
    matrix: Matrix,
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    source: GradedSpace,
    target: GradedSpace,
    degree: i64,
    blocks: Vec<BlockDoc>,
}

impl Serialize for GradedMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapDoc {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks: self
                .blocks
                .iter()
                .map(|(&k, m)| BlockDoc { source_degree: k, matrix: m.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MapDoc::deserialize(d)?;
        let blocks = doc.blocks.into_iter().map(|b| (b.source_degree, b.matrix)).collect();
        GradedMap::new(doc.source, doc.target, doc.degree, blocks).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    space: GradedSpace,
    differential: Vec<BlockDoc>,
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexDoc {
            space: self.space.clone(),
            differential: self
                .d
                .blocks
                .iter()
                .map(|(&k, m)| BlockDoc { source_degree: k, matrix: m.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ComplexDoc::deserialize(d)?;
        let blocks = doc.differential.into_iter().map(|b| (b.source_degree, b.matrix)).collect();
        let map = GradedMap::new(doc.space.clone(), doc.space.clone(), 1, blocks)
            .map_err(serde::de::Error::custom)?;
        Complex::new(doc.space, map).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(dims: &[usize], lo: i64, maps: &[Matrix]) -> Complex {
        let space = GradedSpace::with_dims("e", lo, dims);
        let blocks = maps.iter().enumerate().map(|(i, m)| (lo + i as i64, m.clone())).collect();
        let d = GradedMap::new(space.clone(), space.clone(), 1, blocks).unwrap();
        Complex::from_parts_unchecked(space, d).unwrap()
    }

    #[test]
    fn compose_identity_and_zero() {
        let s = GradedSpace::with_dims("x", 0, &[2, 2]);
        let mut blocks = BTreeMap::new();
        blocks.insert(0, Matrix::from_ints(2, 2, &[1, 2, 3, 4]));
        let f = GradedMap::new(s.clone(), s.clone(), 1, blocks).unwrap();
        assert_eq!(compose(&GradedMap::identity(&s), &f).unwrap(), f);
        assert!(compose(&GradedMap::zero(&s, &s, 0), &f).unwrap().is_zero());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = GradedSpace::with_dims("a", 0, &[1]);
        let b = GradedSpace::with_dims("b", 0, &[1]);
        let f = GradedMap::identity(&a);
        let g = GradedMap::identity(&b);
        assert!(matches!(compose(&g, &f), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn d_squared_detection() {
        assert!(check_d_squared(&Complex::zero_differential(GradedSpace::with_dims("z", 0, &[2, 3]))));
        let one = Matrix::from_ints(1, 1, &[1]);
        let c = line(&[1, 1, 1], 0, &[one.clone(), one]);
        assert!(!check_d_squared(&c));
        assert!(matches!(cohomology(&c), Err(Error::DSquaredNonzero(0))));
        let s = GradedSpace::with_dims("z", 0, &[1]);
        assert!(Complex::new(s.clone(), GradedMap::identity(&s)).is_err());
    }

    #[test]
    fn acyclic_and_zero_differential() {
        let c = line(&[1, 1], 0, &[Matrix::from_ints(1, 1, &[1])]);
        let h = cohomology(&c).unwrap();
        assert!(h.ranks().values().all(|&r| r == 0));
        let z = Complex::zero_differential(GradedSpace::with_dims("z", 0, &[2, 3]));
        let h = cohomology(&z).unwrap();
        assert_eq!((h.rank(0), h.rank(1)), (2, 3));
    }

    #[test]
    fn suspension_negates_differential() {
        let c = line(&[1, 1], 0, &[Matrix::from_ints(1, 1, &[2])]);
        let s = c.suspend();
        assert_eq!(s.space().dim(1), 1);
        assert_eq!(s.differential().block(1), Matrix::from_ints(1, 1, &[-2]));
        assert_eq!(s.desuspend(), c);
        assert_eq!(desuspend(&suspend(c.space())), *c.space());
    }

    #[test]
    fn direct_sum_offsets_the_second_summand_when_the_first_is_empty_in_a_degree() {
        let a = Complex::zero_differential(GradedSpace::from_labels([("a", -1)]).unwrap());
        let b = line(&[1, 1], -2, &[Matrix::from_ints(1, 1, &[3])]);
        let s = a.direct_sum(&b).unwrap();
        assert!(check_d_squared(&s));
        assert_eq!(s.differential().block(-2), Matrix::from_ints(2, 1, &[0, 3]));
    }

    #[test]
    fn hom_complex_of_lines() {
        let q = Complex::zero_differential(GradedSpace::with_dims("q", 0, &[1]));
        let h = hom_complex(&q, &q).unwrap();
        assert_eq!(h.space().dim(0), 1);
        assert!(h.differential().is_zero());
    }

    #[test]
    fn inclusion_into_acyclic_extension_is_quasi_iso() {
        let q = Complex::zero_differential(GradedSpace::from_labels([("x", 0)]).unwrap());
        let big_space = GradedSpace::from_labels([("x", 0), ("y", 0), ("z", 1)]).unwrap();
        let mut blocks = BTreeMap::new();
        blocks.insert(0, Matrix::from_ints(1, 2, &[0, 1]));
        let d = GradedMap::new(big_space.clone(), big_space.clone(), 1, blocks).unwrap();
        let big = Complex::new(big_space.clone(), d).unwrap();
        let mut inc = BTreeMap::new();
        inc.insert(0, Matrix::from_ints(2, 1, &[1, 0]));
        let f = GradedMap::new(q.space().clone(), big_space, 0, inc).unwrap();
        assert!(is_quasi_iso(&f, &q, &big).unwrap());
        let zero = GradedMap::zero(q.space(), big.space(), 0);
        assert!(!is_quasi_iso(&zero, &q, &big).unwrap());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let c = line(&[1, 2], -1, &[Matrix::from_ints(2, 1, &[1, -3])]);
        let c = Complex::new(c.space().clone(), c.differential().clone()).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: Complex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
