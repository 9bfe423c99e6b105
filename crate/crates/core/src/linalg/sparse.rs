use std::collections::BTreeMap;

use crate::poly::Scalar;

/// Sparse vector: `(index, value)` pairs with strictly increasing indices and
/// nonzero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Semi-echelon basis of a subspace with distinct pivots, where the pivot of
/// a row is its largest index. Rows are scaled so the pivot entry is 1.
///
/// With indices ordered so that a graded filtration is an initial segment,
/// the rows with pivot below a bound span exactly the intersection of the
/// subspace with that segment.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> SparseEchelon {
        SparseEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// Number of basis rows whose pivot is `< bound`.
    pub fn count_pivots_below(&self, bound: usize) -> usize {
        self.rows.range(..bound).count()
    }

    /// Rows with pivot `< bound`.
    pub fn rows_below(&self, bound: usize) -> impl Iterator<Item = &SparseVec> {
        self.rows.range(..bound).map(|(_, r)| r)
    }

    /// Eliminates leading entries against the basis until the pivot is new or
    /// the vector vanishes.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((piv, c)) = v.last() {
            match self.rows.get(piv) {
                Some(row) => {
                    let c = -c;
                    v = axpy(&v, &c, row);
                }
                None => break,
            }
        }
        v
    }

    /// Adds `v` to the span. Returns its new pivot, or `None` if `v` was
    /// already in the span.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let v = self.reduce(v);
        let (piv, c) = v.last()?.clone();
        let inv = c.inv().expect("nonzero pivot");
        let row = v.into_iter().map(|(i, x)| (i, &x * &inv)).collect();
        self.rows.insert(piv, row);
        Some(piv)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

/// `a + c*b`.
pub(crate) fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(i, c)| (i, Scalar::from_int(c))).collect()
    }

    #[test]
    fn insert_and_contains() {
        let mut e = SparseEchelon::new();
        assert_eq!(e.insert(sv(&[(0, 1), (2, 2)])), Some(2));
        assert_eq!(e.insert(sv(&[(1, 1), (2, 1)])), Some(1));
        assert_eq!(e.insert(sv(&[(0, 1), (1, -2)])), None);
        assert_eq!(e.rank(), 2);
        assert!(!e.contains(&sv(&[(0, 2), (1, 3), (2, 8)])));
        assert!(e.contains(&sv(&[(0, 1), (1, -2)])));
        assert_eq!(e.count_pivots_below(2), 1);
    }

    #[test]
    fn filtration_pieces() {
        // span{e0 + e3, e3} contains e0, found with pivot below 1
        let mut e = SparseEchelon::new();
        e.insert(sv(&[(0, 1), (3, 1)]));
        e.insert(sv(&[(3, 1)]));
        assert_eq!(e.count_pivots_below(1), 1);
    }
}
