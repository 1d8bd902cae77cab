//! Seeded random instances for the property checks.
//!
//! Every driver threads a single [`ChaCha8Rng`] seeded with `seed_from_u64(seed)`; the algorithm
//! is fixed so that a seed reproduces the same instances on every platform.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use crate::convolution::{BinaryAlgebra, CofreeComplex, FlatComplex, HomMap};
use crate::cylinder::{CylElement, CylSpaces};
use crate::error::Result;
use crate::linalg::{hom_complex, Complex, GradedMap, GradedSpace, Matrix, Scalar, SparseVec};

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small integer in `-2..=2`.
pub fn small(rng: &mut DetRng) -> Scalar {
    Scalar::from_int(rng.gen_range(-2..=2))
}

/// A nonzero small integer.
pub fn small_nonzero(rng: &mut DetRng) -> Scalar {
    let v = rng.gen_range(1..=2);
    Scalar::from_int(if rng.gen_bool(0.5) { v } else { -v })
}

/// A random invertible matrix: a product of random unitriangular factors.
pub fn invertible(rng: &mut DetRng, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, small(rng));
            u.set(j, i, small(rng));
        }
    }
    l.mul(&u)
}

/// A random complex with total dimension in `1..=max_dim` and degrees in `lo..=hi`, built from
/// generators and contractible pairs `x → dx` and scrambled by a random change of basis in
/// every degree.
pub fn random_complex(rng: &mut DetRng, prefix: &str, max_dim: usize, lo: i64, hi: i64) -> Complex {
    let total = rng.gen_range(1..=max_dim);
    random_complex_of_dim(rng, prefix, total, lo, hi)
}

pub fn random_complex_of_dim(rng: &mut DetRng, prefix: &str, total: usize, lo: i64, hi: i64) -> Complex {
    // (degree, partner in degree+1) before scrambling
    let mut gens: Vec<i64> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    while gens.len() < total {
        let k = rng.gen_range(lo..=hi);
        if gens.len() + 2 <= total && k < hi && rng.gen_bool(0.4) {
            pairs.push((gens.len(), gens.len() + 1));
            gens.push(k);
            gens.push(k + 1);
        } else {
            gens.push(k);
        }
    }
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &k) in gens.iter().enumerate() {
        by_degree.entry(k).or_default().push(i);
    }
    let mut labels = BTreeMap::new();
    let mut pos = vec![(0, 0); gens.len()];
    let mut counter = 0;
    for (&k, members) in &by_degree {
        let mut ls = Vec::new();
        for (j, &i) in members.iter().enumerate() {
            pos[i] = (k, j);
            ls.push(format!("{prefix}{counter}"));
            counter += 1;
        }
        labels.insert(k, ls);
    }
    let space = GradedSpace::new(labels).expect("nonempty pieces");
    let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    for &(x, y) in &pairs {
        let (k, jx) = pos[x];
        let (_, jy) = pos[y];
        blocks
            .entry(k)
            .or_insert_with(|| Matrix::zeros(space.dim(k + 1), space.dim(k)))
            .set(jy, jx, small_nonzero(rng));
    }
    let change: BTreeMap<i64, Matrix> = space.degrees().map(|k| (k, invertible(rng, space.dim(k)))).collect();
    let blocks = blocks
        .into_iter()
        .map(|(k, m)| {
            let inv = change[&k].inverse().expect("invertible");
            (k, change[&(k + 1)].mul(&m).mul(&inv))
        })
        .collect();
    let d = GradedMap::new(space.clone(), space.clone(), 1, blocks).expect("shapes match");
    Complex::new(space, d).expect("d² = 0 by construction")
}

/// A random vector in the span of the given columns.
fn combination(rng: &mut DetRng, cols: &[Vec<Scalar>], len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for c in cols {
        let k = small(rng);
        for (o, x) in out.iter_mut().zip(c) {
            *o += &k * x;
        }
    }
    out
}

/// A random chain map `V → W` (a random degree-0 cocycle of the hom complex).
pub fn random_chain_map(rng: &mut DetRng, v: &Complex, w: &Complex) -> Result<GradedMap> {
    let h = hom_complex(v, w)?;
    let space = h.space();
    let kernel = if space.dim(0) == 0 { Vec::new() } else { h.differential().block(0).kernel_basis() };
    let coords = combination(rng, &kernel, space.dim(0));
    let vb = v.space().flat_basis();
    let wb = w.space().flat_basis();
    let wflat: BTreeMap<&str, usize> = wb.iter().enumerate().map(|(i, (l, _))| (l.as_str(), i)).collect();
    let labels = space.labels(0).to_vec();
    GradedMap::from_fn(v.space(), w.space(), 0, |flat| {
        let vl = &vb[flat].0;
        let mut out = SparseVec::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some((src, dst)) = l.split_once("->") {
                if src == vl && !coords[i].is_zero() {
                    out.add_term(wflat[dst], coords[i].clone());
                }
            }
        }
        out
    })
}

/// A random quasi-isomorphism onto `W`: the projection `W ⊕ Cone(id_X) → W` for a random
/// complex `X`. Returns the source and the map.
pub fn random_quasi_iso_onto(rng: &mut DetRng, w: &Complex, prefix: &str, max_extra: usize, lo: i64, hi: i64) -> Result<(Complex, GradedMap)> {
    let extra = rng.gen_range(0..=max_extra);
    let source = if extra == 0 {
        relabel(w, prefix)
    } else {
        let x = random_complex_of_dim(rng, &format!("{prefix}x"), extra, lo, hi);
        relabel(w, prefix).direct_sum(&cone_of_identity(&x, &format!("{prefix}c"))?)?
    };
    let w_dim = w.space().total_dim();
    let wl: Vec<String> = w.space().flat_basis().into_iter().map(|(l, _)| l).collect();
    let src_basis = source.space().flat_basis();
    let proj = GradedMap::from_fn(source.space(), w.space(), 0, |flat| {
        let label = &src_basis[flat].0;
        match label.strip_prefix(prefix).and_then(|rest| rest.parse::<usize>().ok()) {
            Some(i) if i < w_dim => SparseVec::unit(w.space().find_flat(&wl[i]).expect("label exists")),
            _ => SparseVec::new(),
        }
    })?;
    // scramble the source basis so the map is not a coordinate projection
    let change: BTreeMap<i64, Matrix> =
        source.space().degrees().map(|k| (k, invertible(rng, source.space().dim(k)))).collect();
    let conj = |m: &GradedMap, deg: i64| -> BTreeMap<i64, Matrix> {
        m.blocks().iter().map(|(&k, b)| (k, change.get(&(k + deg)).map_or(b.clone(), |c| c.mul(b)).mul(&change[&k].inverse().unwrap()))).collect()
    };
    let d = GradedMap::new(source.space().clone(), source.space().clone(), 1, conj(source.differential(), 1))?;
    let scrambled = Complex::new(source.space().clone(), d)?;
    let proj_blocks = proj.blocks().iter().map(|(&k, b)| (k, b.mul(&change[&k].inverse().unwrap()))).collect();
    let proj = GradedMap::new(source.space().clone(), w.space().clone(), 0, proj_blocks)?;
    Ok((scrambled, proj))
}

/// Relabel the basis `prefix0, prefix1, …` in flat order.
pub fn relabel(c: &Complex, prefix: &str) -> Complex {
    let mut pieces = BTreeMap::new();
    let mut i = 0;
    for (&k, ls) in c.space().pieces() {
        let mut v = Vec::new();
        for _ in ls {
            v.push(format!("{prefix}{i}"));
            i += 1;
        }
        pieces.insert(k, v);
    }
    let space = GradedSpace::new(pieces).expect("same shape");
    let d = GradedMap::new(space.clone(), space.clone(), 1, c.differential().blocks().clone()).expect("same shape");
    Complex::new(space, d).expect("same differential")
}

/// The acyclic cone of `id_X`: basis `s x_i` (one degree lower) and `x_i`, with
/// `d(s x) = x − s(dx)`.
pub fn cone_of_identity(x: &Complex, prefix: &str) -> Result<Complex> {
    let xb = x.space().flat_basis();
    let mut elems: Vec<(String, i64)> = Vec::new();
    for (i, (_, k)) in xb.iter().enumerate() {
        elems.push((format!("{prefix}s{i}"), k - 1));
        elems.push((format!("{prefix}{i}"), *k));
    }
    let space = GradedSpace::from_labels(elems)?;
    let dx = x.differential();
    let sidx: Vec<usize> = (0..xb.len()).map(|i| space.find_flat(&format!("{prefix}s{i}")).unwrap()).collect();
    let pidx: Vec<usize> = (0..xb.len()).map(|i| space.find_flat(&format!("{prefix}{i}")).unwrap()).collect();
    let d = GradedMap::from_fn(&space, &space, 1, |flat| {
        let mut out = SparseVec::new();
        if let Some(i) = sidx.iter().position(|&s| s == flat) {
            // d(s x_i) = x_i − s(d x_i)
            out.add_term(pidx[i], Scalar::one());
            for (j, c) in dx.apply_sparse(&SparseVec::unit(i)).iter() {
                out.add_term(sidx[j], -c.clone());
            }
        } else if let Some(i) = pidx.iter().position(|&p| p == flat) {
            for (j, c) in dx.apply_sparse(&SparseVec::unit(i)).iter() {
                out.add_term(pidx[j], c.clone());
            }
        }
        out
    })?;
    Complex::new(space, d)
}

/// Shuffle a list in place with the driver's generator.
pub fn shuffle<T>(rng: &mut DetRng, v: &mut [T]) {
    v.shuffle(rng);
}

/// A random map `src → tgt` of the given degree with small integer entries; `reduced` keeps it
/// zero on the cogenerators.
pub fn random_hom(rng: &mut DetRng, src: &Arc<CofreeComplex>, tgt: &Arc<FlatComplex>, degree: i64, reduced: bool) -> HomMap {
    let tdeg = tgt.degrees().to_vec();
    let vals: Vec<SparseVec> = (0..src.dim())
        .map(|w| {
            if reduced && src.is_cogenerator(w) {
                return SparseVec::new();
            }
            let want = src.cofree().degree(w) + degree;
            (0..tdeg.len()).filter(|&i| tdeg[i] == want).map(|i| (i, small(rng))).collect()
        })
        .collect();
    HomMap::from_fn(src, tgt, degree, |w| vals[w].clone()).expect("degrees match by construction")
}

/// A random element of `Cyl` of the given degree. `reduced_t` keeps it in `Cyl∘`.
pub fn random_element(rng: &mut DetRng, sp: &CylSpaces, degree: i64, reduced_t: bool) -> CylElement {
    let p = random_hom(rng, sp.a(), sp.a().base(), degree, true);
    let t = random_hom(rng, sp.a(), sp.b().base(), degree - 1, reduced_t);
    let r = random_hom(rng, sp.b(), sp.b().base(), degree, true);
    CylElement::new(p, t, r, degree).expect("degrees match by construction")
}

/// The same structure transported along a random change of basis in every degree, together
/// with the isomorphism from `alg` to the result.
pub fn random_isomorphic(rng: &mut DetRng, alg: &BinaryAlgebra) -> Result<(BinaryAlgebra, GradedMap)> {
    let space = alg.complex.space();
    let g: BTreeMap<i64, Matrix> = space.degrees().map(|k| (k, invertible(rng, space.dim(k)))).collect();
    let g_inv: BTreeMap<i64, Matrix> = g.iter().map(|(&k, m)| (k, m.inverse().expect("invertible"))).collect();
    let iso = GradedMap::new(space.clone(), space.clone(), 0, g)?;
    let inv = GradedMap::new(space.clone(), space.clone(), 0, g_inv)?;
    let d = crate::linalg::compose(&iso, &crate::linalg::compose(alg.complex.differential(), &inv)?)?;
    let complex = Complex::new(space.clone(), d)?;
    let n = space.total_dim();
    let columns: Vec<SparseVec> = (0..n).map(|i| inv.apply_sparse(&SparseVec::unit(i))).collect();
    let mut product = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let m = alg.mul_vec(&columns[a], &columns[b]);
            let v = iso.apply_sparse(&m);
            if !v.is_zero() {
                product.insert((a, b), v);
            }
        }
    }
    Ok((BinaryAlgebra::new(alg.kind, complex, product)?, iso))
}
