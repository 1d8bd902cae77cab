//! Sparse vectors keyed by basis index.

use std::collections::BTreeMap;

use super::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(BTreeMap<usize, Scalar>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        Self::single(i, Scalar::one())
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        let mut v = SparseVec::new();
        v.add_term(i, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(&i, x)| (i, x * c)).collect())
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); len];
        for (i, c) in self.iter() {
            v[i] = c.clone();
        }
        v
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        let mut s = SparseVec::new();
        for (i, c) in v.iter().enumerate() {
            s.add_term(i, c.clone());
        }
        s
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<I: IntoIterator<Item = (usize, Scalar)>>(iter: I) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in iter {
            v.add_term(i, c);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_entries() {
        let mut v = SparseVec::unit(3);
        v.add_term(3, -Scalar::one());
        assert!(v.is_zero());
        v.add_scaled(&SparseVec::unit(1), &Scalar::from_int(2));
        assert_eq!(v.get(1), Scalar::from_int(2));
        assert_eq!(v.to_dense(3)[1], Scalar::from_int(2));
    }
}
