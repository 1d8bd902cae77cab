//! Binary algebra structures (dg Lie and dg associative) and their Maurer–Cartan elements.
//!
//! ```json
//! {
//!   "kind": "dgla",
//!   "basis": [{"label": "x", "degree": 0}, {"label": "y", "degree": 0}],
//!   "differential": [],
//!   "products": [{"left": "x", "right": "y", "target": "y", "coeff": "1"}]
//! }
//! ```
//!
//! `differential` entries read `d(source) ∋ coeff · target`. For a dgla the bracket is completed
//! by graded antisymmetry from whichever ordered pairs are listed.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CofreeComplex, HomMap};
use crate::error::{Error, Result};
use crate::linalg::{Complex, GradedMap, GradedSpace, Scalar, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryKind {
    Dgla,
    Dga,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub source: String,
    pub target: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub target: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub kind: BinaryKind,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
}

/// A complex with a degree-0 binary operation, indexed by flat basis positions.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryAlgebra {
    pub kind: BinaryKind,
    pub complex: Complex,
    pub product: BTreeMap<(usize, usize), SparseVec>,
}

impl BinaryAlgebra {
    pub fn new(kind: BinaryKind, complex: Complex, product: BTreeMap<(usize, usize), SparseVec>) -> Result<Self> {
        let deg = complex.space().flat_degrees();
        let mut product: BTreeMap<(usize, usize), SparseVec> = product.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for (&(a, b), v) in &product {
            if a >= deg.len() || b >= deg.len() {
                return Err(Error::Schema("product refers to a missing basis vector".into()));
            }
            if let Some((t, _)) = v.iter().find(|(t, _)| deg[*t] != deg[a] + deg[b]) {
                return Err(Error::DegreeMismatch { expected: deg[a] + deg[b], found: deg[t] });
            }
        }
        if kind == BinaryKind::Dgla {
            let listed: Vec<((usize, usize), SparseVec)> = product.iter().map(|(k, v)| (*k, v.clone())).collect();
            for ((a, b), v) in listed {
                let mirror = v.scaled(&-Scalar::sign(deg[a] * deg[b]));
                match product.get(&(b, a)) {
                    Some(w) if *w != mirror => {
                        return Err(Error::Schema(format!("bracket is not graded antisymmetric on basis pair ({a}, {b})")));
                    }
                    Some(_) => {}
                    None => {
                        product.insert((b, a), mirror);
                    }
                }
            }
        }
        Ok(BinaryAlgebra { kind, complex, product })
    }

    pub fn from_doc(doc: &AlgebraDoc) -> Result<Self> {
        let space = GradedSpace::from_labels(doc.basis.iter().map(|b| (b.label.clone(), b.degree)))?;
        let find = |l: &str| space.find_flat(l).ok_or_else(|| Error::Schema(format!("unknown basis label {l}")));
        let mut dcols: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for e in &doc.differential {
            dcols.entry(find(&e.source)?).or_default().add_term(find(&e.target)?, e.coeff.clone());
        }
        let d = GradedMap::from_fn(&space, &space, 1, |i| dcols.get(&i).cloned().unwrap_or_default())?;
        let complex = Complex::new(space.clone(), d)?;
        let mut product: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for e in &doc.products {
            product.entry((find(&e.left)?, find(&e.right)?)).or_default().add_term(find(&e.target)?, e.coeff.clone());
        }
        BinaryAlgebra::new(doc.kind, complex, product)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: AlgebraDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        let basis = self.complex.space().flat_basis();
        let label = |i: usize| basis[i].0.clone();
        let mut differential = Vec::new();
        for i in 0..basis.len() {
            for (t, c) in self.complex.differential().apply_sparse(&SparseVec::unit(i)).iter() {
                differential.push(DiffEntry { source: label(i), target: label(t), coeff: c.clone() });
            }
        }
        let products = self
            .product
            .iter()
            .flat_map(|(&(a, b), v)| {
                v.iter()
                    .map(|(t, c)| ProductEntry { left: label(a), right: label(b), target: label(t), coeff: c.clone() })
                    .collect::<Vec<_>>()
            })
            .collect();
        AlgebraDoc {
            kind: self.kind,
            basis: basis.iter().map(|(l, d)| BasisEntry { label: l.clone(), degree: *d }).collect(),
            differential,
            products,
        }
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.complex.space().flat_degrees()
    }

    pub fn dim(&self) -> usize {
        self.complex.space().total_dim()
    }

    /// The product of two basis vectors.
    pub fn mul(&self, a: usize, b: usize) -> SparseVec {
        self.product.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// The product extended bilinearly.
    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.mul(a, b), &(ca * cb));
            }
        }
        out
    }

    /// Same structure with one structure constant changed by `delta`; for a dgla the mirrored
    /// constant changes accordingly so the bracket stays antisymmetric.
    pub fn perturbed(&self, a: usize, b: usize, target: usize, delta: &Scalar) -> Result<Self> {
        let deg = self.degrees();
        if deg[target] != deg[a] + deg[b] {
            return Err(Error::DegreeMismatch { expected: deg[a] + deg[b], found: deg[target] });
        }
        let mut product = self.product.clone();
        product.entry((a, b)).or_default().add_term(target, delta.clone());
        if self.kind == BinaryKind::Dgla && a != b {
            product.entry((b, a)).or_default().add_term(target, -delta * Scalar::sign(deg[a] * deg[b]));
        } else if self.kind == BinaryKind::Dgla && deg[a] % 2 == 0 {
            return Err(Error::Incompatible("an even element brackets to zero with itself".into()));
        }
        BinaryAlgebra::new(self.kind, self.complex.clone(), product)
    }
}

impl BinaryAlgebra {
    /// The first failing axiom, checked directly on structure constants: the Leibniz rule for
    /// `d`, then the Jacobi identity or associativity.
    pub fn axiom_defect(&self) -> Option<String> {
        let deg = self.degrees();
        let d = self.complex.differential();
        let n = self.dim();
        let basis = self.complex.space().flat_basis();
        let u = SparseVec::unit;
        for x in 0..n {
            for y in 0..n {
                // d(xy) = (dx)y + (−1)^{|x|} x(dy)
                let lhs = d.apply_sparse(&self.mul(x, y));
                let mut rhs = self.mul_vec(&d.apply_sparse(&u(x)), &u(y));
                rhs.add_scaled(&self.mul_vec(&u(x), &d.apply_sparse(&u(y))), &Scalar::sign(deg[x]));
                if lhs != rhs {
                    return Some(format!("Leibniz rule fails on ({}, {})", basis[x].0, basis[y].0));
                }
                for z in 0..n {
                    let ok = match self.kind {
                        // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                        BinaryKind::Dgla => {
                            let lhs = self.mul_vec(&u(x), &self.mul(y, z));
                            let mut rhs = self.mul_vec(&self.mul(x, y), &u(z));
                            rhs.add_scaled(&self.mul_vec(&u(y), &self.mul(x, z)), &Scalar::sign(deg[x] * deg[y]));
                            lhs == rhs
                        }
                        BinaryKind::Dga => self.mul_vec(&self.mul(x, y), &u(z)) == self.mul_vec(&u(x), &self.mul(y, z)),
                    };
                    if !ok {
                        let what = match self.kind {
                            BinaryKind::Dgla => "Jacobi identity",
                            BinaryKind::Dga => "associativity",
                        };
                        return Some(format!("{what} fails on ({}, {}, {})", basis[x].0, basis[y].0, basis[z].0));
                    }
                }
            }
        }
        None
    }
}

fn encode(src: &Arc<CofreeComplex>, alg: &BinaryAlgebra, kind: BinaryKind) -> Result<HomMap> {
    if alg.kind != kind {
        return Err(Error::Incompatible(format!("expected a {kind:?} structure")));
    }
    let coop = src.cooperad();
    let expected = match kind {
        BinaryKind::Dgla => 1,
        BinaryKind::Dga => 2,
    };
    if coop.cap() < 2 || coop.dim(2) != expected {
        return Err(Error::Incompatible("the cooperad does not match the algebra type".into()));
    }
    if src.base().space() != alg.complex.space() {
        return Err(Error::Incompatible("the cofree coalgebra is not built on the algebra's complex".into()));
    }
    let deg = alg.degrees();
    HomMap::conv_from_fn(src, 1, |w| {
        let (n, x, a) = src.cofree().rep(w);
        if n != 2 {
            return SparseVec::new();
        }
        match (kind, x) {
            (BinaryKind::Dgla, _) | (BinaryKind::Dga, 0) => alg.mul(a[0], a[1]),
            // (e_21; a, b) is the class of −(−1)^{|a||b|}(e_12; b, a)
            _ => alg.mul(a[1], a[0]).scaled(&-Scalar::sign(deg[a[0]] * deg[a[1]])),
        }
    })
}

/// The MC element of a dg Lie algebra in `Conv(C∘, End_V)` for the cocommutative cooperad:
/// `Q(c_2; a, b) = [a, b]`.
pub fn encode_dgla(src: &Arc<CofreeComplex>, alg: &BinaryAlgebra) -> Result<HomMap> {
    encode(src, alg, BinaryKind::Dgla)
}

/// The MC element of a dg associative algebra for the associative cooperad:
/// `Q(e_12; a, b) = a·b`.
pub fn encode_dga(src: &Arc<CofreeComplex>, alg: &BinaryAlgebra) -> Result<HomMap> {
    encode(src, alg, BinaryKind::Dga)
}
