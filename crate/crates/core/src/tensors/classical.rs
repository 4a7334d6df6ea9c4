//! Explicit matrix models for `ℙⁿ` and its blow-ups at toric fixed points.
//!
//! Matrices are square `Vec<Vec<BigRational>>` indexed from 0. Points of
//! `ℂ^{2N}` are pairs `(x, y)` of coordinate vectors, one entry per ray.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::fan::Fan;

pub type RatSquare = Vec<Vec<BigRational>>;

fn check_square(z: &RatSquare, size: usize) -> Result<()> {
    if z.len() != size || z.iter().any(|r| r.len() != size) {
        return Err(Error::input(format!("expected a {size}x{size} matrix")));
    }
    Ok(())
}

pub fn trace(z: &RatSquare) -> BigRational {
    z.iter().enumerate().map(|(i, r)| r[i].clone()).sum()
}

/// Every 2×2 minor vanishes, i.e. rank ≤ 1.
pub fn rank_at_most_one(z: &RatSquare) -> bool {
    let n = z.len();
    let cols = z.first().map_or(0, Vec::len);
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..cols {
                for l in j + 1..cols {
                    if z[i][j].clone() * &z[k][l] != z[i][l].clone() * &z[k][j] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Springer resolution of `T*ℙⁿ`: `(x, y) ↦ (x_i y_j)`, defined on the
/// hypersurface `Σ x_i y_i = 0`.
pub fn springer_eval_pn(n: usize, x: &[BigRational], y: &[BigRational]) -> Result<RatSquare> {
    check_dim(n + 1, x.len())?;
    check_dim(n + 1, y.len())?;
    let s: BigRational = x.iter().zip(y).map(|(a, b)| a * b).sum();
    if !s.is_zero() {
        return Err(Error::precondition("point is off the hypersurface sum x_i y_i = 0"));
    }
    Ok(x.iter().map(|xi| y.iter().map(|yj| xi * yj).collect()).collect())
}

/// `ν: Ō_min → 𝒵_{Bl ℙⁿ}`: entries `(i, n+1)` for `i ≤ n` are multiplied by
/// `−z_{n+1,n+1}`, all other entries are kept.
pub fn nu_eval_blowup(n: usize, z: &RatSquare) -> Result<RatSquare> {
    check_square(z, n + 1)?;
    if !trace(z).is_zero() || !rank_at_most_one(z) {
        return Err(Error::precondition("matrix is not traceless of rank at most 1"));
    }
    let c = -z[n][n].clone();
    let mut out = z.clone();
    for row in out.iter_mut().take(n) {
        row[n] = &row[n] * &c;
    }
    Ok(out)
}

/// Membership in the determinantal model of `ℙⁿ` blown up at the `n+1−k`
/// fixed points indexed `k+1..=n+1` (1-based): trace zero, and the matrix
/// with diagonal entries `z_jj` replaced by `−z_jj²` for `j > k` has rank
/// at most 1.
pub fn determinantal_membership(n: usize, k: usize, z: &RatSquare) -> Result<bool> {
    if k < 1 || k > n + 1 {
        return Err(Error::precondition(format!("k = {k} must lie in 1..={}", n + 1)));
    }
    check_square(z, n + 1)?;
    if !trace(z).is_zero() {
        return Ok(false);
    }
    let mut m = z.clone();
    for j in k..=n {
        m[j][j] = -(z[j][j].clone() * &z[j][j]);
    }
    Ok(rank_at_most_one(&m))
}

/// Ray index of `−v_j` in `Fan::blowup_projective_space(n, k..=n)` for a
/// 0-based blown-up index `j ∈ k..=n`.
pub fn exceptional_ray(n: usize, k: usize, j: usize) -> usize {
    n + 1 + (j - k)
}

/// Determinantal coordinates of a point `(x, y)` of `Φ⁻¹(0)` for the blow-up
/// at the points `k+1..=n+1` (1-based):
/// `z_ij = X_i Y_j` off the diagonal and `z_jj = x_j y_j`, where
/// `X_j = x_j y′_j`, `Y_j = y_j x′_j` for blown-up `j` (primes denote the
/// coordinates of the ray `−v_j`) and `X_j = x_j`, `Y_j = y_j` otherwise.
pub fn determinantal_coordinates(n: usize, k: usize, x: &[BigRational], y: &[BigRational]) -> Result<RatSquare> {
    if k < 1 || k > n + 1 {
        return Err(Error::precondition(format!("k = {k} must lie in 1..={}", n + 1)));
    }
    let n_rays = 2 * n + 2 - k;
    check_dim(n_rays, x.len())?;
    check_dim(n_rays, y.len())?;
    let mut big_x: Vec<BigRational> = x[..=n].to_vec();
    let mut big_y: Vec<BigRational> = y[..=n].to_vec();
    for j in k..=n {
        let e = exceptional_ray(n, k, j);
        big_x[j] = &x[j] * &y[e];
        big_y[j] = &y[j] * &x[e];
    }
    Ok((0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| if i == j { &x[i] * &y[i] } else { &big_x[i] * &big_y[j] })
                .collect()
        })
        .collect())
}

/// Lift `(x, y) ∈ ℋ` to `Φ⁻¹(0)^θ` for `Bl ℙⁿ`, `θ = (1, −1)`:
/// `(x_1, …, x_{n+1}, −x_{n+1} y_{n+1}; y_1, …, y_{n+1}, 1)`.
pub fn nu_tilde(n: usize, x: &[BigRational], y: &[BigRational]) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    check_dim(n + 1, x.len())?;
    check_dim(n + 1, y.len())?;
    let mut xs = x.to_vec();
    xs.push(-(&x[n] * &y[n]));
    let mut ys = y.to_vec();
    ys.push(BigRational::one());
    Ok((xs, ys))
}

/// Point of `Φ⁻¹(0)` with prescribed nonzero `x`: `x_ρ y_ρ = ⟨m, v_ρ⟩`, which
/// puts `x∘y` in the image of `M`, the kernel of `A`.
pub fn moment_zero_point(f: &Fan, x: &[BigRational], m: &[BigRational]) -> Result<Vec<BigRational>> {
    check_dim(f.num_rays(), x.len())?;
    check_dim(f.dim, m.len())?;
    f.rays
        .iter()
        .zip(x)
        .map(|(v, xr)| {
            if xr.is_zero() {
                return Err(Error::precondition("x must have no zero coordinate"));
            }
            let pair: BigRational = v.iter().zip(m).map(|(&a, b)| b * BigRational::from_integer(a.into())).sum();
            Ok(pair / xr)
        })
        .collect()
}
