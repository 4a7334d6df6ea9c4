use std::cmp::Ordering;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coxring::{var_name, PresentationKind, VarRole};
use crate::error::{Error, Result};
use crate::fan::{positive_grading_rays, ExactSequenceData, SignedRayPairing};

/// `S^{I′} T^I` of class zero. `i` indexes `T_ρ` in unprimed kinds and `T^ρ`
/// in primed kinds; both vectors have one entry per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantMonomial {
    pub i_prime: Vec<u32>,
    pub i: Vec<u32>,
    pub fiber_deg: u32,
}

impl InvariantMonomial {
    pub fn new(i_prime: Vec<u32>, i: Vec<u32>) -> Self {
        let fiber_deg = i.iter().sum();
        InvariantMonomial { i_prime, i, fiber_deg }
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &InvariantMonomial) -> InvariantMonomial {
        InvariantMonomial::new(
            self.i_prime.iter().zip(&other.i_prime).map(|(a, b)| a + b).collect(),
            self.i.iter().zip(&other.i).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn divides(&self, other: &InvariantMonomial) -> bool {
        self.i_prime.iter().zip(&other.i_prime).all(|(a, b)| a <= b) && self.i.iter().zip(&other.i).all(|(a, b)| a <= b)
    }

    /// Text form such as `S1*S4*T^2`.
    pub fn name(&self, kind: PresentationKind) -> String {
        let mut parts = Vec::new();
        let mut push = |role: VarRole, e: u32| match e {
            0 => {}
            1 => parts.push(var_name(role)),
            _ => parts.push(format!("{}^{e}", var_name(role))),
        };
        for (r, &e) in self.i_prime.iter().enumerate() {
            push(VarRole::S(r), e);
        }
        for (r, &e) in self.i.iter().enumerate() {
            push(if kind.is_primed() { VarRole::TUpper(r) } else { VarRole::T(r) }, e);
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Order by fiber degree, then the sorted multiset of `T` indices, then
    /// the sorted multiset of `S` indices.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        fn multiset(v: &[u32]) -> Vec<usize> {
            v.iter().enumerate().flat_map(|(k, &e)| std::iter::repeat_n(k, e as usize)).collect()
        }
        self.fiber_deg
            .cmp(&other.fiber_deg)
            .then_with(|| multiset(&self.i).cmp(&multiset(&other.i)))
            .then_with(|| multiset(&self.i_prime).cmp(&multiset(&other.i_prime)))
    }
}

/// `ᶜI`: `(ᶜI)_ρ = I_{−ρ}` when `−ρ` is a ray, else 0.
pub fn antipodal_transport(opposite: &[Option<usize>], i: &[u32]) -> Vec<u32> {
    opposite.iter().map(|o| o.map_or(0, |s| i[s])).collect()
}

/// `A·(I′ − I − ᶜI) = 0` (unprimed kinds) or `A·(I′ − I) = 0` (primed).
pub fn kernel_criterion(esd: &ExactSequenceData, p: &SignedRayPairing, kind: PresentationKind, i_prime: &[u32], i: &[u32]) -> bool {
    let c = if kind.is_primed() { vec![0; i.len()] } else { antipodal_transport(&p.opposite, i) };
    let d: Vec<BigInt> = (0..i.len())
        .map(|r| BigInt::from(i_prime[r]) - BigInt::from(i[r]) - BigInt::from(c[r]))
        .collect();
    esd.a.mul_vec(&d).map(|v| v.iter().all(Zero::is_zero)).unwrap_or(false)
}

/// Torus weight `Σ I′_ρ wt(S_ρ) + Σ I_ρ wt(T_ρ)` with `wt(S_ρ) = a_ρ`,
/// `wt(T_ρ) = −a_ρ − a_{−ρ}` (or `wt(T^ρ) = −a_ρ` in primed kinds).
pub fn torus_weight(esd: &ExactSequenceData, p: &SignedRayPairing, kind: PresentationKind, i_prime: &[u32], i: &[u32]) -> Vec<BigInt> {
    let mut wt = vec![BigInt::zero(); esd.pic_rank];
    for rho in 0..i_prime.len() {
        for (j, w) in wt.iter_mut().enumerate() {
            let a = esd.a.get(j, rho);
            *w += a * i_prime[rho];
            *w -= a * i[rho];
            if !kind.is_primed() {
                if let Some(o) = p.opposite[rho] {
                    *w -= esd.a.get(j, o) * i[rho];
                }
            }
        }
    }
    wt
}

pub fn weight_criterion(esd: &ExactSequenceData, p: &SignedRayPairing, kind: PresentationKind, i_prime: &[u32], i: &[u32]) -> bool {
    torus_weight(esd, p, kind, i_prime, i).iter().all(Zero::is_zero)
}

/// Both membership predicates with `A` held in machine integers, for
/// exhaustive checks over large boxes.
#[derive(Clone, Debug)]
pub struct CriterionChecker {
    kind: PresentationKind,
    a: Vec<Vec<i64>>,
    opposite: Vec<Option<usize>>,
}

impl CriterionChecker {
    pub fn new(esd: &ExactSequenceData, p: &SignedRayPairing, kind: PresentationKind) -> Result<Self> {
        Ok(CriterionChecker { kind, a: esd.a.to_i64_rows()?, opposite: p.opposite.clone() })
    }

    /// `A·(I′ − I − ᶜI) = 0`, or `A·(I′ − I) = 0` in primed kinds.
    pub fn kernel(&self, i_prime: &[u32], i: &[u32]) -> bool {
        let primed = self.kind.is_primed();
        self.a.iter().all(|row| {
            let mut acc = 0i64;
            for r in 0..row.len() {
                let c = if primed { 0 } else { self.opposite[r].map_or(0, |s| i[s]) };
                acc += row[r] * (i_prime[r] as i64 - i[r] as i64 - c as i64);
            }
            acc == 0
        })
    }

    /// Zero torus weight, with `wt(T_ρ) = −a_ρ − a_{−ρ}` in unprimed kinds.
    pub fn weight(&self, i_prime: &[u32], i: &[u32]) -> bool {
        let primed = self.kind.is_primed();
        self.a.iter().all(|row| {
            let mut acc = 0i64;
            for rho in 0..row.len() {
                acc += row[rho] * i_prime[rho] as i64;
                let mut wt = -row[rho];
                if !primed {
                    if let Some(o) = self.opposite[rho] {
                        wt -= row[o];
                    }
                }
                acc += wt * i[rho] as i64;
            }
            acc == 0
        })
    }
}

/// Precomputed data for enumerating lattice points of the fibers of `A`.
///
/// With `C` a column set such that `A_C` is unimodular and `β` its
/// complement, `M = A_C⁻¹·A` has `M_C = I`, so the `C`-coordinates of a
/// solution of `A·x = A·t` are determined by its `β`-coordinates.
#[derive(Clone, Debug)]
pub struct MonomialContext {
    pub n_rays: usize,
    pub opposite: Vec<Option<usize>>,
    pub sigma1: Vec<usize>,
    beta: Vec<usize>,
    comp: Vec<usize>,
    m: Vec<Vec<i64>>,
    w: Vec<i64>,
    fingerprint: String,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::input(format!("entry {x} exceeds 64 bits")))
}

impl MonomialContext {
    pub fn new(esd: &ExactSequenceData, p: &SignedRayPairing) -> Result<Self> {
        let n_rays = esd.num_rays();
        let r = esd.pic_rank;
        let w = positive_grading_rays(&esd.b)?;
        let comp = (0..n_rays)
            .combinations(r)
            .find(|c| esd.a.select_cols(c).determinant().map(|d| d.abs() == BigInt::from(1)).unwrap_or(false))
            .ok_or_else(|| Error::precondition("A has no unimodular maximal minor"))?;
        let beta: Vec<usize> = (0..n_rays).filter(|i| !comp.contains(i)).collect();
        let m = esd.a.select_cols(&comp).unimodular_inverse()?.mul(&esd.a)?;
        let m = m.to_rows().iter().map(|row| row.iter().map(to_i64).collect()).collect::<Result<Vec<Vec<i64>>>>()?;
        let w = w.iter().map(to_i64).collect::<Result<Vec<i64>>>()?;

        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&(esd.a.to_i64_rows()?, esd.b.to_i64_rows()?, &p.sigma1, &p.opposite))?);
        let fingerprint = hex::encode(h.finalize());
        Ok(MonomialContext {
            n_rays,
            opposite: p.opposite.clone(),
            sigma1: p.sigma1.clone(),
            beta,
            comp,
            m,
            w,
            fingerprint,
        })
    }

    /// Content hash of `(A, B, Σ₁)`; identifies the context in caches.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn t_indices(&self, kind: PresentationKind) -> Vec<usize> {
        match kind {
            PresentationKind::R => self.sigma1.clone(),
            _ => (0..self.n_rays).collect(),
        }
    }

    /// Vector `I + ᶜI` (unprimed) or `I` (primed) whose `A`-class `I′` must match.
    fn target(&self, kind: PresentationKind, i: &[u32]) -> Vec<u32> {
        if kind.is_primed() {
            i.to_vec()
        } else {
            let c = antipodal_transport(&self.opposite, i);
            i.iter().zip(c).map(|(a, b)| a + b).collect()
        }
    }

    /// `d = I′ − I − ᶜI` (or `I′ − I`): products with relations preserve it.
    pub fn block_key(&self, kind: PresentationKind, mono: &InvariantMonomial) -> Vec<i64> {
        let t = self.target(kind, &mono.i);
        mono.i_prime.iter().zip(t).map(|(&a, b)| a as i64 - b as i64).collect()
    }

    /// All `I′ ≥ 0` with `A·I′ = A·t`.
    pub fn fiber_points(&self, t: &[u32]) -> Vec<Vec<u32>> {
        let c: Vec<i64> = self
            .m
            .iter()
            .map(|row| row.iter().zip(t).map(|(a, &b)| a * b as i64).sum())
            .collect();
        let budget: i64 = self.w.iter().zip(t).map(|(a, &b)| a * b as i64).sum();
        let mut out = Vec::new();
        let mut x = vec![0i64; self.beta.len()];
        self.dfs(0, budget, &c, &mut x, &mut out);
        out
    }

    fn dfs(&self, k: usize, budget: i64, c: &[i64], x: &mut Vec<i64>, out: &mut Vec<Vec<u32>>) {
        if k == self.beta.len() {
            let mut point = vec![0u32; self.n_rays];
            for (idx, &b) in self.beta.iter().enumerate() {
                point[b] = x[idx] as u32;
            }
            for (j, &col) in self.comp.iter().enumerate() {
                let v = c[j] - self.beta.iter().zip(x.iter()).map(|(&b, &xb)| self.m[j][b] * xb).sum::<i64>();
                if v < 0 {
                    return;
                }
                point[col] = v as u32;
            }
            out.push(point);
            return;
        }
        let wk = self.w[self.beta[k]];
        let mut v = 0;
        while v * wk <= budget {
            x[k] = v;
            self.dfs(k + 1, budget - v * wk, c, x, out);
            v += 1;
        }
        x[k] = 0;
    }

    /// Every invariant monomial of fiber degree `deg` in presentation
    /// `kind`, sorted by `(I, I′)`.
    pub fn enumerate(&self, kind: PresentationKind, deg: u32) -> Vec<InvariantMonomial> {
        let idx = self.t_indices(kind);
        let mut out = Vec::new();
        for comp in compositions(deg, idx.len()) {
            let mut i = vec![0u32; self.n_rays];
            for (k, &r) in idx.iter().enumerate() {
                i[r] = comp[k];
            }
            let t = self.target(kind, &i);
            for ip in self.fiber_points(&t) {
                out.push(InvariantMonomial::new(ip, i.clone()));
            }
        }
        out.sort_by(|a, b| a.i.cmp(&b.i).then_with(|| a.i_prime.cmp(&b.i_prime)));
        out
    }
}

/// Vectors of `parts` nonnegative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=total).rev() {
            cur.push(v);
            rec(total - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive list of invariant monomials of fiber degree `deg`.
pub fn invariant_monomials_of_degree(
    esd: &ExactSequenceData,
    p: &SignedRayPairing,
    kind: PresentationKind,
    deg: u32,
) -> Result<Vec<InvariantMonomial>> {
    let ctx = MonomialContext::new(esd, p)?;
    Ok(ctx.enumerate(kind, deg))
}
