//! Independent brute-force computation of graded dimensions.
//!
//! The oracle takes the weight matrix `A` written out by hand, enumerates
//! every monomial `S^{I′} T^{I}` of fiber degree `p` in a box, keeps those of
//! torus weight zero, and computes the rank of all products (invariant
//! monomial of degree `p − 1`) × (moment relation) by dense Gaussian
//! elimination over `Ratio<i128>`. No code from the library is used.

use num_rational::Ratio;
use num_traits::Zero;
use std::collections::HashMap;

type Q = Ratio<i128>;

fn boxed(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

fn weight(a: &[Vec<i64>], s: &[u32], t: &[u32]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().enumerate().map(|(k, &x)| x * (s[k] as i64 - t[k] as i64)).sum())
        .collect()
}

type Mono = (Vec<u32>, Vec<u32>);

fn invariants(a: &[Vec<i64>], deg: u32, s_max: u32) -> Vec<Mono> {
    let n = a[0].len();
    let mut out = Vec::new();
    for t in boxed(n, deg).into_iter().filter(|t| t.iter().sum::<u32>() == deg) {
        for s in boxed(n, s_max) {
            if weight(a, &s, &t).iter().all(|&x| x == 0) {
                out.push((s, t.clone()));
            }
        }
    }
    out
}

fn rank(mut m: Vec<Vec<Q>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c] / pivot_row[c];
                for (x, &v) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim` of the invariant part of `k[S, T^ρ] / (Σ_ρ a_{jρ} S_ρ T^ρ)` in fiber
/// degree `p`.
pub fn oracle_dims(a: &[Vec<i64>], p_max: u32, s_max: impl Fn(u32) -> u32) -> Vec<u64> {
    let n = a[0].len();
    let mut dims = vec![1];
    for p in 1..=p_max {
        let here = invariants(a, p, s_max(p));
        let below = invariants(a, p - 1, s_max(p));
        let index: HashMap<&Mono, usize> = here.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut rows = Vec::new();
        for (s, t) in &below {
            for rel in a {
                let mut row = vec![Q::zero(); here.len()];
                for rho in 0..n {
                    if rel[rho] == 0 {
                        continue;
                    }
                    let mut s2 = s.clone();
                    let mut t2 = t.clone();
                    s2[rho] += 1;
                    t2[rho] += 1;
                    let k = index[&(s2, t2)];
                    row[k] += Q::from_integer(rel[rho] as i128);
                }
                rows.push(row);
            }
        }
        dims.push((here.len() - rank(rows)) as u64);
    }
    dims
}

pub fn a_pn(n: usize) -> Vec<Vec<i64>> {
    vec![vec![1; n + 1]]
}

/// Columns `(1,−1)` (n times), `(1,0)`, `(0,1)`.
pub fn a_blowup(n: usize) -> Vec<Vec<i64>> {
    let mut r1 = vec![1; n];
    r1.extend([1, 0]);
    let mut r2 = vec![-1; n];
    r2.extend([0, 1]);
    vec![r1, r2]
}
