//! JSON form of a truncated cooperad.
//!
//! ```json
//! {
//!   "name": "cocom",
//!   "max_arity": 3,
//!   "coaugmentation": "c1",
//!   "arities": [
//!     {"arity": 2, "basis": [{"label": "c2", "degree": -1, "level": 1}],
//!      "action": [{"rows": 1, "cols": 1, "entries": ["-1"]}]}
//!   ],
//!   "decompositions": [
//!     {"tree": [[1, 2], 3], "terms": [{"source": "c3", "lower": "c2", "upper": "c2", "coeff": "1"}]}
//!   ]
//! }
//! ```
//!
//! Action matrices act on columns. A decomposition is keyed by a standard two-vertex tree;
//! `lower` is the factor at the root-adjacent vertex. Decompositions along trees with a unary
//! vertex may be omitted when `C(1)` is one-dimensional.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{ArityData, PartialKey, PartialTable, TruncatedCooperad};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, SparseVec};
use crate::trees::{LabeledPlanarTree, Node};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub label: String,
    pub degree: i64,
    #[serde(default)]
    pub level: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArityDoc {
    pub arity: usize,
    pub basis: Vec<BasisDoc>,
    #[serde(default)]
    pub action: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompTermDoc {
    pub source: String,
    pub lower: String,
    pub upper: String,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub tree: LabeledPlanarTree,
    pub terms: Vec<DecompTermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CooperadDoc {
    #[serde(default)]
    pub name: String,
    pub max_arity: usize,
    pub coaugmentation: String,
    pub arities: Vec<ArityDoc>,
    pub decompositions: Vec<DecompositionDoc>,
}

/// Recognise a standard two-vertex tree and return its `(k, i, p)`.
fn two_vertex_key(t: &LabeledPlanarTree) -> Option<PartialKey> {
    let Node::Vertex(ch) = t.top() else { return None };
    let inner: Vec<usize> = ch.iter().enumerate().filter(|(_, c)| matches!(c, Node::Vertex(_))).map(|(i, _)| i).collect();
    if inner.len() != 1 || t.planar_labels().iter().enumerate().any(|(i, &l)| l != i + 1) {
        return None;
    }
    let Node::Vertex(up) = &ch[inner[0]] else { return None };
    if up.iter().any(|c| matches!(c, Node::Vertex(_))) {
        return None;
    }
    Some((ch.len(), inner[0] + 1, up.len()))
}

fn sparse_columns(m: &Matrix, dim: usize, what: &str) -> Result<Vec<SparseVec>> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::Schema(format!("{what}: expected a {dim}×{dim} matrix")));
    }
    Ok((0..dim).map(|c| SparseVec::from_dense(&m.column(c))).collect())
}

fn dense_matrix(cols: &[SparseVec], dim: usize) -> Matrix {
    let columns: Vec<Vec<Scalar>> = cols.iter().map(|v| v.to_dense(dim)).collect();
    Matrix::from_columns(dim, &columns)
}

impl CooperadDoc {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn build(&self) -> Result<TruncatedCooperad> {
        let cap = self.max_arity;
        let mut by_arity: BTreeMap<usize, &ArityDoc> = BTreeMap::new();
        for a in &self.arities {
            if a.arity == 0 || a.arity > cap {
                return Err(Error::Schema(format!("arity {} outside 1..={cap}", a.arity)));
            }
            if by_arity.insert(a.arity, a).is_some() {
                return Err(Error::Schema(format!("arity {} listed twice", a.arity)));
            }
        }
        let mut arities = Vec::new();
        let mut index: Vec<HashMap<&str, usize>> = Vec::new();
        for n in 1..=cap {
            let Some(a) = by_arity.get(&n) else {
                return Err(Error::Schema(format!("arity {n} is missing")));
            };
            let dim = a.basis.len();
            let mut idx = HashMap::new();
            for (i, b) in a.basis.iter().enumerate() {
                if idx.insert(b.label.as_str(), i).is_some() {
                    return Err(Error::Schema(format!("arity {n}: duplicate label {}", b.label)));
                }
            }
            if a.action.len() != n - 1 {
                return Err(Error::Schema(format!("arity {n}: expected {} action generators", n - 1)));
            }
            let action = a
                .action
                .iter()
                .enumerate()
                .map(|(j, m)| sparse_columns(m, dim, &format!("arity {n}, s_{}", j + 1)))
                .collect::<Result<Vec<_>>>()?;
            let differential = match &a.differential {
                Some(m) => sparse_columns(m, dim, &format!("arity {n}, differential"))?,
                None => Vec::new(),
            };
            arities.push(ArityData {
                labels: a.basis.iter().map(|b| b.label.clone()).collect(),
                degrees: a.basis.iter().map(|b| b.degree).collect(),
                levels: a.basis.iter().map(|b| b.level.unwrap_or(n as u32 - 1)).collect(),
                action,
                differential,
            });
            index.push(idx);
        }
        let coaug = *index
            .first()
            .and_then(|m| m.get(self.coaugmentation.as_str()))
            .ok_or_else(|| Error::Schema(format!("coaugmentation {} is not a label of C(1)", self.coaugmentation)))?;
        let mut partials: BTreeMap<PartialKey, PartialTable> = BTreeMap::new();
        for d in &self.decompositions {
            let key = two_vertex_key(&d.tree)
                .ok_or_else(|| Error::Schema(format!("{} is not a standard two-vertex tree", d.tree)))?;
            let (k, _, p) = key;
            let n = k + p - 1;
            if n > cap {
                return Err(Error::Schema(format!("decomposition along {} exceeds the arity cap", d.tree)));
            }
            let mut table: PartialTable = vec![Vec::new(); arities[n - 1].dim()];
            let look = |m: usize, l: &str| {
                index[m - 1].get(l).copied().ok_or_else(|| Error::Schema(format!("unknown label {l} in arity {m}")))
            };
            for term in &d.terms {
                let x = look(n, &term.source)?;
                table[x].push((look(k, &term.lower)?, look(p, &term.upper)?, term.coeff.clone()));
            }
            if partials.insert(key, table).is_some() {
                return Err(Error::Schema(format!("decomposition along {} listed twice", d.tree)));
            }
        }
        TruncatedCooperad::from_tables(self.name.clone(), arities, coaug, partials)
    }
}

impl TruncatedCooperad {
    pub fn from_json_str(s: &str) -> Result<Self> {
        CooperadDoc::from_json_str(s)?.build()
    }

    pub fn to_doc(&self) -> CooperadDoc {
        let arities = (1..=self.cap)
            .map(|n| {
                let a = self.arity(n);
                ArityDoc {
                    arity: n,
                    basis: (0..a.dim())
                        .map(|x| BasisDoc { label: a.labels[x].clone(), degree: a.degrees[x], level: Some(self.level(n, x)) })
                        .collect(),
                    action: a.action.iter().map(|g| dense_matrix(g, a.dim())).collect(),
                    differential: a.has_differential().then(|| dense_matrix(&a.differential, a.dim())),
                }
            })
            .collect();
        let decompositions = self
            .partials
            .iter()
            .map(|(&(k, i, p), table)| DecompositionDoc {
                tree: super::builtin::two_vertex_tree(k, i, p),
                terms: table
                    .iter()
                    .enumerate()
                    .flat_map(|(x, row)| {
                        row.iter().map(move |(y, z, c)| DecompTermDoc {
                            source: self.label(k + p - 1, x).to_string(),
                            lower: self.label(k, *y).to_string(),
                            upper: self.label(p, *z).to_string(),
                            coeff: c.clone(),
                        })
                    })
                    .collect(),
            })
            .collect();
        CooperadDoc {
            name: self.name.clone(),
            max_arity: self.cap,
            coaugmentation: self.label(1, self.coaug).to_string(),
            arities,
            decompositions,
        }
    }

    pub fn to_json_string(&self) -> String {
        self.to_doc().to_json_string()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{builtin_coass_shifted, builtin_cocom_shifted};
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        for c in [builtin_cocom_shifted(4), builtin_coass_shifted(3)] {
            let s = c.to_json_string();
            let back = TruncatedCooperad::from_json_str(&s).unwrap();
            assert_eq!(back.to_json_string(), s);
            back.validate().unwrap();
        }
    }

    #[test]
    fn unary_decompositions_default() {
        let c = builtin_cocom_shifted(3);
        let mut doc = c.to_doc();
        doc.decompositions.retain(|d| {
            let (k, _, p) = two_vertex_key(&d.tree).unwrap();
            k > 1 && p > 1
        });
        let back = doc.build().unwrap();
        assert_eq!(back.partials(), c.partials());
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(matches!(TruncatedCooperad::from_json_str("{"), Err(Error::Parse(_))));
        let mut doc = builtin_cocom_shifted(2).to_doc();
        doc.coaugmentation = "nope".into();
        assert!(matches!(doc.build(), Err(Error::Schema(_))));
    }
}
