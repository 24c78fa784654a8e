//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::Scalar;

pub(crate) type SparseVec<K> = BTreeMap<K, Scalar>;

/// Rows in echelon form keyed by their leading (largest) coordinate, normalized to 1 there.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, c: &Scalar, row: &SparseVec<K>) {
    for (k, x) in row {
        let delta = c * x;
        match v.get_mut(k) {
            Some(e) => {
                *e -= delta;
                if e.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                v.insert(k.clone(), -delta);
            }
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub(crate) fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub(crate) fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        let mut upper: Option<K> = None;
        loop {
            let next = match &upper {
                None => v.keys().next_back().cloned(),
                Some(u) => v.range(..u.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { return v };
            if let Some(row) = self.rows.get(&k) {
                let c = v[&k].clone();
                axpy(&mut v, &c, row);
            }
            upper = Some(k);
        }
    }

    pub(crate) fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Add `v` to the span; returns false when it was already there.
    pub(crate) fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce(v);
        let Some((lead, c)) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        if !c.is_one() {
            let inv = c.recip();
            for x in r.values_mut() {
                *x *= &inv;
            }
        }
        self.rows.insert(lead, r);
        true
    }

    /// Reduced rows: each pivot row has zero entries at every other pivot.
    pub(crate) fn reduced_rows(&self) -> BTreeMap<K, SparseVec<K>> {
        let mut out: BTreeMap<K, SparseVec<K>> = BTreeMap::new();
        for (p, row) in &self.rows {
            let mut r = row.clone();
            let pivots: Vec<K> = out.keys().rev().cloned().collect();
            for q in pivots {
                if let Some(c) = r.get(&q).cloned() {
                    axpy(&mut r, &c, &out[&q]);
                }
            }
            out.insert(p.clone(), r);
        }
        out
    }
}

/// Basis of `{v : M v = 0}` for a matrix given by sparse rows over `ncols` columns.
pub(crate) fn nullspace(rows: impl IntoIterator<Item = SparseVec<usize>>, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new();
    for r in rows {
        if ech.rank() == ncols {
            break;
        }
        ech.insert(r);
    }
    let reduced = ech.reduced_rows();
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !reduced.contains_key(c)) {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = Scalar::one();
        for (p, row) in &reduced {
            if let Some(c) = row.get(&f) {
                v[*p] = -c;
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar;

    fn sv(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().map(|&(k, c)| (k, scalar(c))).collect()
    }

    #[test]
    fn span_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[(0, 1), (2, 1)])));
        assert!(e.insert(sv(&[(1, 2), (2, 2)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 1), (2, 2)])));
        assert!(e.contains(sv(&[(0, 3), (2, 3)])));
        assert!(!e.contains(sv(&[(0, 1)])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let rows = vec![sv(&[(0, 1), (1, 2), (3, -1)]), sv(&[(1, 1), (2, 1)]), sv(&[(0, 1), (1, 3), (2, 1), (3, -1)])];
        let ns = nullspace(rows.clone(), 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot: Scalar = r.iter().map(|(k, c)| c * &v[*k]).sum();
                assert!(dot.is_zero());
            }
        }
    }
}
