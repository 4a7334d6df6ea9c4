use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::RatMatrix;

/// Rank over ℚ, exact.
pub fn rational_rank(m: &RatMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    m.rref().1.len()
}

/// Sparse row: strictly increasing column indices, no explicit zeros.
pub type SparseRow = Vec<(usize, BigRational)>;

/// Incremental row echelon form over ℚ on sparse rows. Each stored row has
/// leading coefficient 1 and a leading column not shared with any other.
#[derive(Default, Debug, Clone)]
pub struct SparseEchelon {
    pivots: HashMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored pivots and stores the remainder if
    /// nonzero. Returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        match self.reduce(row) {
            Some(mut r) => {
                let lead = r[0].0;
                let inv = r[0].1.recip();
                for (_, x) in r.iter_mut() {
                    *x *= &inv;
                }
                self.pivots.insert(lead, r);
                true
            }
            None => false,
        }
    }

    /// Whether `row` lies in the span of the stored rows.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_none()
    }

    fn reduce(&self, mut row: SparseRow) -> Option<SparseRow> {
        // Eliminate entries left to right; entries to the left of the
        // current position are already free of pivot columns.
        let mut pos = 0;
        while pos < row.len() {
            let (c, coef) = (row[pos].0, row[pos].1.clone());
            match self.pivots.get(&c) {
                Some(p) => {
                    row = axpy(&row, &-coef, p);
                }
                None => pos += 1,
            }
        }
        if row.is_empty() {
            None
        } else {
            Some(row)
        }
    }
}

/// `x + a·y` on sparse rows.
fn axpy(x: &SparseRow, a: &BigRational, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        if cx < cy {
            out.push(x[i].clone());
            i += 1;
        } else if cy < cx {
            out.push((cy, a * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + a * &y[j].1;
            if !v.is_zero() {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Builds a sparse row from unsorted `(column, coefficient)` terms, summing
/// duplicates and dropping zeros.
pub fn sparse_row(mut terms: Vec<(usize, BigRational)>) -> SparseRow {
    terms.sort_by_key(|t| t.0);
    let mut out: SparseRow = Vec::with_capacity(terms.len());
    for (c, v) in terms {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Rank of a set of sparse rows.
pub fn sparse_rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::rat;

    #[test]
    fn small_ranks() {
        assert_eq!(rational_rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rational_rank(&RatMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()), 3);
        assert_eq!(rational_rank(&RatMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]).unwrap()), 1);
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = vec![vec![1, 2, 0, 3], vec![2, 4, 0, 6], vec![0, 1, 1, 0], vec![1, 3, 1, 3]];
        let dense = RatMatrix::from_i64_rows(&rows).unwrap();
        let sparse = rows.iter().map(|r| {
            sparse_row(r.iter().enumerate().map(|(c, &v)| (c, rat(v))).collect())
        });
        assert_eq!(sparse_rank(sparse), rational_rank(&dense));
        assert_eq!(rational_rank(&dense), 2);
    }

    #[test]
    fn contains_detects_span() {
        let mut e = SparseEchelon::new();
        e.insert(sparse_row(vec![(0, rat(1)), (2, rat(1))]));
        e.insert(sparse_row(vec![(1, rat(1)), (2, rat(-1))]));
        assert!(e.contains(sparse_row(vec![(0, rat(2)), (1, rat(1)), (2, rat(1))])));
        assert!(!e.contains(sparse_row(vec![(2, rat(1))])));
    }
}
