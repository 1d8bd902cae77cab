//! Arity-truncated coaugmented cooperads.
//!
//! A cooperad is stored as a table: the spaces `C(1) … C(N)`, the adjacent transpositions acting
//! on each `C(n)`, an optional differential, filtration levels, and the partial decompositions
//! along the two-vertex planar trees. The decomposition along any other tree is derived by
//! cutting it into two-vertex pieces; coassociativity is exactly the statement that the result does
//! not depend on the cuts, and [`TruncatedCooperad::validate`] checks this.
//!
//! Conventions. For a tree `t` with leaf labels `λ(1), …, λ(n)` in planar order,
//! `Δ_t(X) = Δ_{t_std}(ρ(λ)X)`, where `t_std` is the same shape labelled in planar order and `ρ`
//! is the action, an anti-homomorphism (`ρ(ab) = ρ(b)ρ(a)`) with `ρ(s_j)` the stored generator.
//! Tensor factors of `Δ_t` are listed in the preorder of the nodal vertices.

mod builtin;
mod cofree;
mod io;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

pub use builtin::{builtin_coass_shifted, builtin_cocom_shifted, direct_coass_delta, direct_cocom_delta, sign_end};
pub use cofree::{Cofree, CofreeTerm};
pub(crate) use cofree::expand;
pub use io::CooperadDoc;
pub use validate::ValidationSummary;

use crate::error::{Error, Result};
use crate::linalg::{GradedSpace, Scalar, SparseVec};
use crate::trees::{LabeledPlanarTree, Node};

/// One summand of a tree decomposition: basis indices of the factors (one per nodal vertex, in
/// preorder) and a coefficient.
pub type Term = (Vec<usize>, Scalar);

/// Decomposition of every basis vector of `C(n)` along one tree.
pub type DeltaTable = Vec<Vec<Term>>;

/// Basis vector data of one arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityData {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub levels: Vec<u32>,
    /// `action[j][x]` is `s_{j+1}` applied to basis vector `x`.
    pub action: Vec<Vec<SparseVec>>,
    /// `differential[x]` is `d(x)`; empty when the differential vanishes.
    pub differential: Vec<SparseVec>,
}

impl ArityData {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn has_differential(&self) -> bool {
        self.differential.iter().any(|v| !v.is_zero())
    }
}

/// `(k, i, p)`: the lower vertex has `k` incoming edges, the `i`-th of which comes from an upper
/// vertex carrying `p` leaves.
pub type PartialKey = (usize, usize, usize);

/// `y ⊗ z` summands of a partial decomposition, per source basis vector.
pub type PartialTable = Vec<Vec<(usize, usize, Scalar)>>;

pub struct TruncatedCooperad {
    name: String,
    cap: usize,
    arities: Vec<ArityData>,
    coaug: usize,
    partials: BTreeMap<PartialKey, PartialTable>,
    std_cache: Mutex<HashMap<Node, Arc<DeltaTable>>>,
    tree_cache: Mutex<HashMap<Node, Arc<DeltaTable>>>,
    rho_cache: Mutex<HashMap<Vec<usize>, Arc<Vec<SparseVec>>>>,
}

impl std::fmt::Debug for TruncatedCooperad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncatedCooperad").field("name", &self.name).field("cap", &self.cap).finish()
    }
}

impl TruncatedCooperad {
    /// Assemble a cooperad from tables. Partial decompositions with a unary vertex may be omitted
    /// when `C(1)` is spanned by the coaugmentation; they then default to the counit form.
    pub fn from_tables(
        name: impl Into<String>,
        arities: Vec<ArityData>,
        coaug: usize,
        mut partials: BTreeMap<PartialKey, PartialTable>,
    ) -> Result<Self> {
        let cap = arities.len();
        if cap == 0 {
            return Err(Error::InvalidCooperad("at least arity 1 is required".into()));
        }
        if coaug >= arities[0].dim() {
            return Err(Error::InvalidCooperad("coaugmentation is not a basis vector of C(1)".into()));
        }
        if arities[0].degrees[coaug] != 0 {
            return Err(Error::InvalidCooperad("the coaugmentation must have degree 0".into()));
        }
        for (idx, a) in arities.iter().enumerate() {
            let n = idx + 1;
            let d = a.dim();
            if a.degrees.len() != d || a.levels.len() != d {
                return Err(Error::InvalidCooperad(format!("arity {n}: basis data of unequal lengths")));
            }
            if a.action.len() != n - 1 || a.action.iter().any(|g| g.len() != d) {
                return Err(Error::InvalidCooperad(format!("arity {n}: expected {} action generators", n - 1)));
            }
            if !a.differential.is_empty() && a.differential.len() != d {
                return Err(Error::InvalidCooperad(format!("arity {n}: differential has the wrong size")));
            }
        }
        let c1 = arities[0].dim();
        for n in 1..=cap {
            for k in 1..=n {
                let p = n + 1 - k;
                for i in 1..=k {
                    let key = (k, i, p);
                    if partials.contains_key(&key) {
                        continue;
                    }
                    let dim_n = arities[n - 1].dim();
                    if k == 1 && c1 == 1 {
                        partials.insert(key, (0..dim_n).map(|x| vec![(coaug, x, Scalar::one())]).collect());
                    } else if p == 1 && c1 == 1 {
                        partials.insert(key, (0..dim_n).map(|x| vec![(x, coaug, Scalar::one())]).collect());
                    } else {
                        return Err(Error::InvalidCooperad(format!("missing decomposition along {key:?}")));
                    }
                }
            }
        }
        for (&(k, i, p), table) in &partials {
            let n = k + p - 1;
            if k == 0 || p == 0 || i == 0 || i > k || n > cap {
                return Err(Error::InvalidCooperad(format!("decomposition key {:?} out of range", (k, i, p))));
            }
            if table.len() != arities[n - 1].dim() {
                return Err(Error::InvalidCooperad(format!("decomposition {:?} has the wrong length", (k, i, p))));
            }
            for row in table {
                for &(y, z, _) in row {
                    if y >= arities[k - 1].dim() || z >= arities[p - 1].dim() {
                        return Err(Error::InvalidCooperad(format!("decomposition {:?} refers to a missing basis vector", (k, i, p))));
                    }
                }
            }
        }
        Ok(TruncatedCooperad {
            name: name.into(),
            cap,
            arities,
            coaug,
            partials,
            std_cache: Mutex::new(HashMap::new()),
            tree_cache: Mutex::new(HashMap::new()),
            rho_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The arity cap `N`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn arity(&self, n: usize) -> &ArityData {
        &self.arities[n - 1]
    }

    /// `dim C(n)`, zero outside `1..=N`.
    pub fn dim(&self, n: usize) -> usize {
        if n == 0 || n > self.cap {
            0
        } else {
            self.arities[n - 1].dim()
        }
    }

    pub fn degree(&self, n: usize, x: usize) -> i64 {
        self.arities[n - 1].degrees[x]
    }

    pub fn level(&self, n: usize, x: usize) -> u32 {
        if n == 1 && x == self.coaug {
            0
        } else {
            self.arities[n - 1].levels[x]
        }
    }

    pub fn label(&self, n: usize, x: usize) -> &str {
        &self.arities[n - 1].labels[x]
    }

    /// Index of the coaugmentation inside `C(1)`.
    pub fn coaug(&self) -> usize {
        self.coaug
    }

    pub fn is_coaug(&self, n: usize, x: usize) -> bool {
        n == 1 && x == self.coaug
    }

    pub fn partial(&self, key: PartialKey) -> &PartialTable {
        &self.partials[&key]
    }

    pub fn partials(&self) -> &BTreeMap<PartialKey, PartialTable> {
        &self.partials
    }

    pub fn has_differential(&self) -> bool {
        self.arities.iter().any(ArityData::has_differential)
    }

    /// `d(x)` for a basis vector of `C(n)`.
    pub fn differential(&self, n: usize, x: usize) -> SparseVec {
        self.arities[n - 1].differential.get(x).cloned().unwrap_or_default()
    }

    /// `C(n)` as a graded space.
    pub fn space(&self, n: usize) -> GradedSpace {
        let a = &self.arities[n - 1];
        GradedSpace::from_labels(a.labels.iter().cloned().zip(a.degrees.iter().copied()))
            .expect("labels validated at construction")
    }

    /// Total degree of a list of factors sitting at vertices of the given arities.
    pub fn factor_degree(&self, arities: &[usize], factors: &[usize]) -> i64 {
        arities.iter().zip(factors).map(|(&n, &x)| self.degree(n, x)).sum()
    }

    /// `ρ(λ)` on every basis vector of `C(n)`, for `λ` in one-line notation.
    pub fn rho(&self, lambda: &[usize]) -> Arc<Vec<SparseVec>> {
        let n = lambda.len();
        if let Some(r) = self.rho_cache.lock().unwrap().get(lambda) {
            return r.clone();
        }
        // bubble sort: λ∘s_{j1}∘…∘s_{jk} = id, hence ρ(λ) = ρ(s_{j1})⋯ρ(s_{jk})
        let mut cur = lambda.to_vec();
        let mut swaps = Vec::new();
        let mut sorted = false;
        while !sorted {
            sorted = true;
            for j in 0..n.saturating_sub(1) {
                if cur[j] > cur[j + 1] {
                    cur.swap(j, j + 1);
                    swaps.push(j);
                    sorted = false;
                }
            }
        }
        let gens = &self.arities[n - 1].action;
        let images: Vec<SparseVec> = (0..self.dim(n))
            .map(|x| {
                let mut v = SparseVec::unit(x);
                for &j in swaps.iter().rev() {
                    let mut next = SparseVec::new();
                    for (y, c) in v.iter() {
                        next.add_scaled(&gens[j][y], c);
                    }
                    v = next;
                }
                v
            })
            .collect();
        let r = Arc::new(images);
        self.rho_cache.lock().unwrap().insert(lambda.to_vec(), r.clone());
        r
    }

    fn check_tree(&self, t: &LabeledPlanarTree) -> Result<()> {
        let n = t.arity();
        if n > self.cap {
            return Err(Error::ArityOverflow { arity: n, cap: self.cap });
        }
        if let Some(&a) = t.vertex_arities().iter().find(|&&a| a > self.cap) {
            return Err(Error::ArityOverflow { arity: a, cap: self.cap });
        }
        Ok(())
    }

    /// Decomposition table along an arbitrary labelled tree.
    pub fn delta(&self, t: &LabeledPlanarTree) -> Result<Arc<DeltaTable>> {
        if let Some(d) = self.tree_cache.lock().unwrap().get(t.top()) {
            return Ok(d.clone());
        }
        self.check_tree(t)?;
        let n = t.arity();
        let std = standard_node(t.top());
        let base = self.derive(&std);
        let lambda = t.planar_labels();
        let table: DeltaTable = if lambda.iter().enumerate().all(|(i, &l)| l == i + 1) {
            (*base).clone()
        } else {
            let rho = self.rho(&lambda);
            (0..self.dim(n))
                .map(|x| {
                    let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
                    for (y, c) in rho[x].iter() {
                        for (f, cf) in &base[y] {
                            *acc.entry(f.clone()).or_insert_with(Scalar::zero) += c * cf;
                        }
                    }
                    collect_terms(acc)
                })
                .collect()
        };
        let table = Arc::new(table);
        self.tree_cache.lock().unwrap().insert(t.top().clone(), table.clone());
        Ok(table)
    }

    /// `Δ_t(x)` for a vector `x ∈ C(n)`, with equal factor lists merged.
    pub fn delta_t(&self, t: &LabeledPlanarTree, x: &SparseVec) -> Result<Vec<Term>> {
        let table = self.delta(t)?;
        let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (b, c) in x.iter() {
            for (f, cf) in &table[b] {
                *acc.entry(f.clone()).or_insert_with(Scalar::zero) += c * cf;
            }
        }
        Ok(collect_terms(acc))
    }

    /// Decomposition along a standard tree (leaves labelled in planar order), by repeatedly
    /// cutting off the first nodal child of the root-adjacent vertex.
    fn derive(&self, t: &Node) -> Arc<DeltaTable> {
        if let Some(d) = self.std_cache.lock().unwrap().get(t) {
            return d.clone();
        }
        let table = Arc::new(self.derive_uncached(t));
        self.std_cache.lock().unwrap().insert(t.clone(), table.clone());
        table
    }

    fn derive_uncached(&self, t: &Node) -> DeltaTable {
        let n = t.leaf_count();
        let dim = self.dim(n);
        let Node::Vertex(ch) = t else { unreachable!("trees start with a nodal vertex") };
        let tree = LabeledPlanarTree::new(t.clone()).expect("standard tree");
        if tree.vertex_arities().contains(&0) {
            return vec![Vec::new(); dim];
        }
        let Some(j) = ch.iter().position(|c| matches!(c, Node::Vertex(_))) else {
            return (0..dim).map(|x| vec![(vec![x], Scalar::one())]).collect();
        };
        self.cut(t, 1, j + 1)
    }

    /// Decomposition of a standard tree computed by cutting above the nodal vertex with preorder
    /// index `u` (0-based, `u ≥ 1`), whose subtree's leaves start at planar position `i`.
    fn cut(&self, t: &Node, u: usize, i: usize) -> DeltaTable {
        let n = t.leaf_count();
        let (lower, upper) = split_at_vertex(t, u);
        let p = upper.leaf_count();
        let k = n + 1 - p;
        let lower = standard_node(&lower);
        let upper = standard_node(&upper);
        let lower_ar = LabeledPlanarTree::new(lower.clone()).unwrap().vertex_arities();
        let upper_ar = LabeledPlanarTree::new(upper.clone()).unwrap().vertex_arities();
        let dl = self.derive(&lower);
        let du = self.derive(&upper);
        let part = &self.partials[&(k, i, p)];
        (0..self.dim(n))
            .map(|x| {
                let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
                for (y, z, c) in &part[x] {
                    for (fl, cl) in &dl[*y] {
                        let tail = self.factor_degree(&lower_ar[u..], &fl[u..]);
                        for (fu, cu) in &du[*z] {
                            let s = Scalar::sign(tail * self.factor_degree(&upper_ar, fu));
                            let mut f = fl[..u].to_vec();
                            f.extend_from_slice(fu);
                            f.extend_from_slice(&fl[u..]);
                            *acc.entry(f).or_insert_with(Scalar::zero) += c * cl * cu * s;
                        }
                    }
                }
                collect_terms(acc)
            })
            .collect()
    }
}

pub(crate) fn collect_terms(acc: BTreeMap<Vec<usize>, Scalar>) -> Vec<Term> {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Relabel the leaves `1..n` in planar order.
pub(crate) fn standard_node(t: &Node) -> Node {
    fn go(n: &Node, next: &mut usize) -> Node {
        match n {
            Node::Leaf(_) => {
                *next += 1;
                Node::Leaf(*next)
            }
            Node::Vertex(ch) => Node::Vertex(ch.iter().map(|c| go(c, next)).collect()),
        }
    }
    go(t, &mut 0)
}

/// Split a tree above the nodal vertex with preorder index `u ≥ 1`: the lower part has that
/// subtree replaced by a leaf (label 0), the upper part is the subtree itself.
pub(crate) fn split_at_vertex(t: &Node, u: usize) -> (Node, Node) {
    fn go(n: &Node, counter: &mut usize, u: usize, found: &mut Option<Node>) -> Node {
        match n {
            Node::Leaf(l) => Node::Leaf(*l),
            Node::Vertex(ch) => {
                if *counter == u {
                    *counter += 1;
                    *found = Some(n.clone());
                    return Node::Leaf(0);
                }
                *counter += 1;
                Node::Vertex(ch.iter().map(|c| go(c, counter, u, found)).collect())
            }
        }
    }
    let mut found = None;
    let lower = go(t, &mut 0, u, &mut found);
    (lower, found.expect("vertex index in range"))
}

/// Preorder index and first planar leaf position (1-based) of every nodal vertex.
pub(crate) fn vertex_positions(t: &Node) -> Vec<(usize, usize)> {
    fn go(n: &Node, leaves: &mut usize, out: &mut Vec<(usize, usize)>) {
        match n {
            Node::Leaf(_) => *leaves += 1,
            Node::Vertex(ch) => {
                out.push((out.len(), *leaves + 1));
                ch.iter().for_each(|c| go(c, leaves, out));
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut 0, &mut out);
    out
}
