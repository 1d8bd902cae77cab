//! Morphism scenarios: two binary algebras, a cooperad and the components of `F`.
//!
//! ```json
//! {
//!   "cooperad": "cocom",
//!   "max_arity": 3,
//!   "a": { "kind": "dgla", "basis": [{"label": "x", "degree": 0}] },
//!   "b": { "kind": "dgla", "basis": [{"label": "x", "degree": 0}] },
//!   "f": [{"arity": 1, "inputs": ["x"], "image": {"x": "1"}}]
//! }
//! ```
//!
//! `cooperad` is `cocom`, `coass` or a path to a cooperad file (relative paths resolve against
//! the scenario's directory). A component of `F` in arity `n` is given on the representative
//! tensors `x ⊗ a₁ ⊗ … ⊗ aₙ` of the coinvariant classes, where `operation` is the index of `x`
//! in the cooperad basis of arity `n`; classes that are not listed map to zero.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convolution::{encode_dga, encode_dgla, AlgebraDoc, BinaryAlgebra, BinaryKind, CofreeComplex, HomMap};
use crate::cooperad::{builtin_coass_shifted, builtin_cocom_shifted, CooperadDoc, TruncatedCooperad};
use crate::cylinder::{CylElement, CylSpaces};
use crate::error::{Error, Result};
use crate::linalg::{GradedMap, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FComponentDoc {
    pub arity: usize,
    #[serde(default)]
    pub operation: usize,
    pub inputs: Vec<String>,
    pub image: BTreeMap<String, Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub cooperad: String,
    pub max_arity: usize,
    pub a: AlgebraDoc,
    pub b: AlgebraDoc,
    #[serde(default)]
    pub f: Vec<FComponentDoc>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
}

impl ScenarioDoc {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Build the instance. `base_dir` resolves a relative cooperad path; `max_arity` overrides
    /// the cap from the file.
    pub fn instance(&self, base_dir: Option<&Path>, max_arity: Option<usize>) -> Result<Instance> {
        let cap = max_arity.unwrap_or(self.max_arity);
        let coop = load_cooperad(&self.cooperad, cap, base_dir)?;
        let a = BinaryAlgebra::from_doc(&self.a)?;
        let b = BinaryAlgebra::from_doc(&self.b)?;
        let sa = CofreeComplex::new(coop.clone(), &a.complex);
        let sb = CofreeComplex::new(coop, &b.complex);
        let q_a = encode_for(&sa, &a)?;
        let q_b = encode_for(&sb, &b)?;
        let spaces = CylSpaces::from_sources(sa, sb)?;
        let f = f_from_components(&spaces, &a, &b, &self.f)?;
        Ok(Instance { spaces, q_a, q_b, f })
    }
}

/// `cocom`, `coass`, or a cooperad file truncated at `cap`.
pub fn load_cooperad(choice: &str, cap: usize, base_dir: Option<&Path>) -> Result<Arc<TruncatedCooperad>> {
    if cap == 0 {
        return Err(Error::Schema("the arity cap must be at least 1".into()));
    }
    Ok(Arc::new(match choice {
        "cocom" => builtin_cocom_shifted(cap),
        "coass" => builtin_coass_shifted(cap),
        path => {
            let p = Path::new(path);
            let full = match base_dir {
                Some(d) if p.is_relative() => d.join(p),
                _ => p.to_path_buf(),
            };
            let coop = CooperadDoc::from_json_str(&std::fs::read_to_string(&full)?)?.build()?;
            if coop.cap() < cap {
                return Err(Error::ArityOverflow { arity: cap, cap: coop.cap() });
            }
            coop
        }
    }))
}

/// The built-in cooperad governing algebras of the given kind.
pub fn cooperad_for(kind: BinaryKind, cap: usize) -> Arc<TruncatedCooperad> {
    Arc::new(match kind {
        BinaryKind::Dgla => builtin_cocom_shifted(cap),
        BinaryKind::Dga => builtin_coass_shifted(cap),
    })
}

/// The MC element of `alg`. An algebra with no products is encoded by zero over any cooperad.
pub fn encode_for(src: &Arc<CofreeComplex>, alg: &BinaryAlgebra) -> Result<HomMap> {
    if alg.product.is_empty() {
        return Ok(HomMap::zero(src, src.base(), 1));
    }
    match alg.kind {
        BinaryKind::Dgla => encode_dgla(src, alg),
        BinaryKind::Dga => encode_dga(src, alg),
    }
}

fn f_from_components(sp: &Arc<CylSpaces>, a: &BinaryAlgebra, b: &BinaryAlgebra, comps: &[FComponentDoc]) -> Result<HomMap> {
    let (asp, bsp) = (a.complex.space(), b.complex.space());
    let cofree = sp.a().cofree();
    let mut values: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for c in comps {
        if c.inputs.len() != c.arity {
            return Err(Error::ArityMismatch { expected: c.arity, actual: c.inputs.len() });
        }
        if c.arity == 0 || c.arity > sp.cap() {
            return Err(Error::ArityOverflow { arity: c.arity, cap: sp.cap() });
        }
        let inputs: Vec<usize> = c
            .inputs
            .iter()
            .map(|l| asp.find_flat(l).ok_or_else(|| Error::Schema(format!("unknown basis label {l} of A"))))
            .collect::<Result<_>>()?;
        let w = (0..cofree.dim())
            .find(|&w| cofree.rep(w) == (c.arity, c.operation, inputs.clone()))
            .ok_or_else(|| {
                Error::Schema(format!(
                    "operation {} on {:?} is not the representative of a coinvariant class",
                    c.operation, c.inputs
                ))
            })?;
        let mut img = SparseVec::new();
        for (l, k) in &c.image {
            img.add_term(bsp.find_flat(l).ok_or_else(|| Error::Schema(format!("unknown basis label {l} of B")))?, k.clone());
        }
        values.entry(w).or_default().add_scaled(&img, &Scalar::one());
    }
    sp.t_map(0, |w| values.get(&w).cloned().unwrap_or_default())
}

/// `Q_A`, `Q_B` and `F` over a common cooperad.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spaces: Arc<CylSpaces>,
    pub q_a: HomMap,
    pub q_b: HomMap,
    pub f: HomMap,
}

impl Instance {
    /// A strict morphism `A → B` of algebras of the same kind, over the built-in cooperad
    /// truncated at `cap`.
    pub fn strict(a: &BinaryAlgebra, b: &BinaryAlgebra, f1: &GradedMap, cap: usize) -> Result<Self> {
        if a.kind != b.kind {
            return Err(Error::Incompatible("A and B have different kinds".into()));
        }
        let coop = cooperad_for(a.kind, cap);
        let sa = CofreeComplex::new(coop.clone(), &a.complex);
        let sb = CofreeComplex::new(coop, &b.complex);
        let q_a = encode_for(&sa, a)?;
        let q_b = encode_for(&sb, b)?;
        let spaces = CylSpaces::from_sources(sa, sb)?;
        let f = spaces.t_from_linear(0, f1)?;
        Ok(Instance { spaces, q_a, q_b, f })
    }

    /// The identity of `alg`.
    pub fn identity(alg: &BinaryAlgebra, cap: usize) -> Result<Self> {
        Self::strict(alg, alg, &GradedMap::identity(alg.complex.space()), cap)
    }

    /// `U = Q_A + sF + Q_B`.
    pub fn u(&self) -> Result<CylElement> {
        CylElement::new(self.q_a.clone(), self.f.clone(), self.q_b.clone(), 1)
    }

    pub fn f1(&self) -> Result<GradedMap> {
        self.spaces.linear_part(&self.f)
    }
}

/// A linear map between algebras from images of basis labels with integer coefficients.
pub fn linear_map(a: &BinaryAlgebra, b: &BinaryAlgebra, images: &[(&str, &[(&str, i64)])]) -> Result<GradedMap> {
    let (asp, bsp) = (a.complex.space(), b.complex.space());
    let basis = asp.flat_basis();
    for (l, img) in images {
        if asp.find_flat(l).is_none() {
            return Err(Error::Schema(format!("unknown basis label {l} of A")));
        }
        if let Some((t, _)) = img.iter().find(|(t, _)| bsp.find_flat(t).is_none()) {
            return Err(Error::Schema(format!("unknown basis label {t} of B")));
        }
    }
    GradedMap::from_fn(asp, bsp, 0, |i| {
        images
            .iter()
            .find(|(l, _)| *l == basis[i].0)
            .map(|(_, img)| img.iter().map(|(t, c)| (bsp.find_flat(t).expect("checked"), Scalar::from_int(*c))).collect())
            .unwrap_or_default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{dg_assoc, ground_dga};

    #[test]
    fn scenario_round_trip_and_strict_map() {
        let doc = ScenarioDoc {
            name: Some("unit".into()),
            cooperad: "coass".into(),
            max_arity: 2,
            a: ground_dga().to_doc(),
            b: dg_assoc().to_doc(),
            f: vec![FComponentDoc { arity: 1, operation: 0, inputs: vec!["1".into()], image: [("1".to_string(), Scalar::one())].into() }],
            seed: None,
            trials: None,
        };
        let back = ScenarioDoc::from_json_str(&doc.to_json_string()).unwrap();
        assert_eq!(back, doc);
        let inst = doc.instance(None, None).unwrap();
        let f1 = linear_map(&ground_dga(), &dg_assoc(), &[("1", &[("1", 1)])]).unwrap();
        let strict = Instance::strict(&ground_dga(), &dg_assoc(), &f1, 2).unwrap();
        assert_eq!(inst.f.values(), strict.f.values());
        assert_eq!(inst.q_b.values(), strict.q_b.values());
    }

    #[test]
    fn non_representative_components_are_rejected() {
        let alg = dg_assoc();
        let doc = ScenarioDoc {
            name: None,
            cooperad: "coass".into(),
            max_arity: 2,
            a: alg.to_doc(),
            b: alg.to_doc(),
            f: vec![FComponentDoc { arity: 2, operation: 7, inputs: vec!["1".into(), "u".into()], image: BTreeMap::new() }],
            seed: None,
            trials: None,
        };
        assert!(matches!(doc.instance(None, None), Err(Error::Schema(_))));
        let mut bad = doc.clone();
        bad.f[0].inputs.pop();
        assert!(matches!(bad.instance(None, None), Err(Error::ArityMismatch { .. })));
    }
}
