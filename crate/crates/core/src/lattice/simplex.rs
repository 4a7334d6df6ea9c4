//! Exact dense-tableau simplex over ℚ with Bland's anti-cycling rule.
//!
//! Problems are in equality form: `A·x = b`, `x ≥ 0`. Infeasibility comes
//! with a Farkas certificate `y` such that `yᵀA ≤ 0` and `yᵀb > 0`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible { farkas: Vec<BigRational> },
    Unbounded,
}

struct Tableau {
    // rows × (ncols + 1); last column is the right-hand side.
    t: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [BigRational]) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for minimizing `cost·x` over the current basis.
    fn objective_row(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let mut obj: Vec<BigRational> = cost.to_vec();
        obj.push(BigRational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (x, v) in obj.iter_mut().zip(&self.t[r]) {
                *x -= cb * v;
            }
        }
        obj
    }

    /// Runs Bland's rule to optimality. Returns false if unbounded.
    fn optimize(&mut self, obj: &mut [BigRational], allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (r, row) in self.t.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c, obj),
                None => return false,
            }
        }
    }
}

/// Solves `optimize c·x` subject to `A·x = b`, `x ≥ 0`.
pub fn solve_lp(a: &RatMatrix, b: &[BigRational], c: &[BigRational], sense: Sense) -> Result<LpOutcome> {
    let (m, k) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }
    if c.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: c.len() });
    }
    let signs: Vec<BigRational> = b
        .iter()
        .map(|x| if x.is_negative() { -BigRational::one() } else { BigRational::one() })
        .collect();
    let ncols = k + m;
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(ncols + 1);
        row.extend(a.row(i).iter().map(|x| x * &signs[i]));
        for j in 0..m {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
        row.push(&b[i] * &signs[i]);
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis: (k..k + m).collect(),
        ncols,
    };

    // Phase I: minimize the sum of artificials.
    let mut phase1_cost = vec![BigRational::zero(); k];
    phase1_cost.extend(std::iter::repeat_n(BigRational::one(), m));
    let mut obj = tab.objective_row(&phase1_cost);
    tab.optimize(&mut obj, ncols);
    let infeas = -obj[ncols].clone();
    if infeas.is_positive() {
        let farkas: Vec<BigRational> = (0..m)
            .map(|i| &signs[i] * (BigRational::one() - &obj[k + i]))
            .collect();
        return Ok(LpOutcome::Infeasible { farkas });
    }

    // Drive artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= k {
            match (0..k).find(|&j| !tab.t[r][j].is_zero()) {
                Some(j) => {
                    let mut dummy = vec![BigRational::zero(); ncols + 1];
                    tab.pivot(r, j, &mut dummy);
                }
                None => {
                    tab.t.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase II on original columns only.
    let mut cost: Vec<BigRational> = match sense {
        Sense::Minimize => c.to_vec(),
        Sense::Maximize => c.iter().map(|x| -x).collect(),
    };
    cost.extend(std::iter::repeat_n(BigRational::zero(), m));
    let mut obj = tab.objective_row(&cost);
    if !tab.optimize(&mut obj, k) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < k {
            x[bv] = tab.t[r][ncols].clone();
        }
    }
    let value: BigRational = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// Nonnegative rational span of finitely many vectors in `ℚ^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    dim: usize,
    generators: Vec<Vec<BigRational>>,
}

impl RationalCone {
    pub fn new(dim: usize, generators: Vec<Vec<BigRational>>) -> Result<Self> {
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
        }
        Ok(RationalCone { dim, generators })
    }

    pub fn from_i64(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            dim,
            generators
                .iter()
                .map(|g| g.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }
}

/// Result of a cone membership query, with a certificate either way.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeMembership {
    pub member: bool,
    /// Nonnegative coefficients on the generators when `member`.
    pub witness: Option<Vec<BigRational>>,
    /// Separating functional when not `member`.
    pub separator: Option<Vec<BigRational>>,
}

/// Exact membership test `v ∈ cone(c)`. Certificates are checked before
/// returning.
pub fn cone_contains(c: &RationalCone, v: &[BigRational]) -> Result<ConeMembership> {
    if v.len() != c.dim {
        return Err(Error::DimensionMismatch { expected: c.dim, got: v.len() });
    }
    let k = c.generators.len();
    let cols: Vec<Vec<BigRational>> = (0..c.dim)
        .map(|i| c.generators.iter().map(|g| g[i].clone()).collect())
        .collect();
    let a = RatMatrix::from_rows(cols, k)?;
    let zero_cost = vec![BigRational::zero(); k];
    match solve_lp(&a, v, &zero_cost, Sense::Minimize)? {
        LpOutcome::Optimal { x, .. } => {
            debug_assert!(x.iter().all(|w| !w.is_negative()));
            for i in 0..c.dim {
                let s: BigRational = c.generators.iter().zip(&x).map(|(g, w)| &g[i] * w).sum();
                if s != v[i] {
                    return Err(Error::input("internal: witness check failed"));
                }
            }
            Ok(ConeMembership { member: true, witness: Some(x), separator: None })
        }
        LpOutcome::Infeasible { farkas } => {
            let dot = |u: &[BigRational]| -> BigRational { farkas.iter().zip(u).map(|(a, b)| a * b).sum() };
            if !dot(v).is_positive() || c.generators.iter().any(|g| dot(g).is_positive()) {
                return Err(Error::input("internal: separator check failed"));
            }
            Ok(ConeMembership { member: false, witness: None, separator: Some(farkas) })
        }
        LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::rat;

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn orthant_contains_point() {
        let c = RationalCone::from_i64(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let r = cone_contains(&c, &v(&[2, 3])).unwrap();
        assert!(r.member);
        assert_eq!(r.witness.unwrap(), v(&[2, 3]));
    }

    #[test]
    fn ray_excludes_point() {
        let c = RationalCone::from_i64(2, &[vec![1, -1]]).unwrap();
        let r = cone_contains(&c, &v(&[1, 1])).unwrap();
        assert!(!r.member);
        assert!(r.separator.is_some());
    }

    #[test]
    fn blowup_columns_contain_theta() {
        let c = RationalCone::from_i64(2, &[vec![1, -1], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(cone_contains(&c, &v(&[1, -1])).unwrap().member);
    }

    #[test]
    fn empty_cone_contains_only_zero() {
        let c = RationalCone::new(2, vec![]).unwrap();
        assert!(cone_contains(&c, &v(&[0, 0])).unwrap().member);
        assert!(!cone_contains(&c, &v(&[0, 1])).unwrap().member);
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let c = RationalCone::from_i64(2, &[vec![1, 0]]).unwrap();
        assert!(cone_contains(&c, &v(&[1])).is_err());
        assert!(RationalCone::from_i64(2, &[vec![1]]).is_err());
    }

    #[test]
    fn maximize_and_unbounded() {
        // x + y = 4, maximize x - y
        let a = RatMatrix::from_i64_rows(&[vec![1, 1]]).unwrap();
        match solve_lp(&a, &v(&[4]), &v(&[1, -1]), Sense::Maximize).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(4)),
            o => panic!("{o:?}"),
        }
        // x - y = 1, maximize x
        let a = RatMatrix::from_i64_rows(&[vec![1, -1]]).unwrap();
        assert_eq!(solve_lp(&a, &v(&[1]), &v(&[1, 0]), Sense::Maximize).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = RatMatrix::from_i64_rows(&[vec![1, 1], vec![2, 2]]).unwrap();
        match solve_lp(&a, &v(&[1, 2]), &v(&[1, 0]), Sense::Minimize).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(0)),
            o => panic!("{o:?}"),
        }
    }
}
