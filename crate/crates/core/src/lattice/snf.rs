use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `U · m · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// all diagonal entries nonnegative.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

struct Work {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap(a, b);
        self.u.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(a, b);
        }
    }

    /// row[dst] -= q · row[src] on D and U.
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.d, &mut self.u] {
            let (s, t) = pair_mut(m, src, dst);
            for (x, y) in t.iter_mut().zip(s.iter()) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    /// col[dst] -= q · col[src] on D and V.
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for m in [&mut self.d, &mut self.u] {
            for x in m[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (l, r) = v.split_at_mut(b);
        (&l[a], &mut r[0])
    } else {
        let (l, r) = v.split_at_mut(a);
        (&r[0], &mut l[b])
    }
}

/// Smith normal form. Pivots on the smallest nonzero absolute value in the
/// remaining block, ties broken by `(row, col)`; deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.to_rows(),
        u: IntMatrix::identity(rows).to_rows(),
        v: IntMatrix::identity(cols).to_rows(),
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.d[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let p = w.d[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if !w.d[i][t].is_zero() {
                    let q = w.d[i][t].div_floor(&p);
                    w.sub_row(i, t, &q);
                    dirty |= !w.d[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.d[t][j].is_zero() {
                    let q = w.d[t][j].div_floor(&p);
                    w.sub_col(j, t, &q);
                    dirty |= !w.d[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.d[i][j].is_multiple_of(&p)));
            if let Some(i) = bad {
                let one = BigInt::from(-1);
                w.sub_row(t, i, &one);
                continue;
            }
            if p.is_negative() {
                w.negate_row(t);
            }
            break;
        }
    }
    let to_mat = |rows: Vec<Vec<BigInt>>, c: usize| {
        IntMatrix::from_rows_with_cols(&rows, c).expect("rectangular by construction")
    };
    SmithDecomposition {
        u: to_mat(w.u, rows),
        d: to_mat(w.d, cols),
        v: to_mat(w.v, cols),
    }
}

/// A ℤ-basis of `{x : m·x = 0}` as the columns of the result. The lattice
/// spanned is saturated. Trivial kernel gives a `cols × 0` matrix.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    s.v.select_cols(&idx)
}

/// Rows of the result span the left kernel `{y : yᵀ·m = 0}` over ℤ. When
/// the cokernel of `m` is free these rows define a surjection `ℤ^rows → coker m`
/// whose kernel is the image of `m`.
pub fn integer_left_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.rows()).collect();
    s.u.select_rows(&idx)
}
