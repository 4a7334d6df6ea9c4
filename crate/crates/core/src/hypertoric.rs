//! Hypertoric data `(A, θ, ξ)`: moment maps, θ-semistability, unimodularity,
//! the wall structure of the stability parameter, and the central fiber of
//! `𝒴(A, θ, 0) → 𝒴(A, 0, 0)` as a union of coordinate-subspace quotients.
//!
//! Coordinates on `T*ℂ^N` are `(z, w)`. The torus `T^{N−n}` acts on `z_i`
//! with weight `a_i` (column `i` of `A`) and on `w_i` with weight `−a_i`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::fan::{build_exact_sequence, Fan};
use crate::lattice::{
    cone_contains, integer_kernel, rational_rank, smith_normal_form, solve_lp, IntMatrix, LpOutcome, RatMatrix,
    RationalCone, Sense,
};
use crate::tensors::GeneratorReport;

fn ser_rats<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

fn big_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertoricProblem {
    a: IntMatrix,
    theta: Vec<BigRational>,
    xi: Vec<BigRational>,
}

impl HypertoricProblem {
    /// Requires `A` surjective over ℤ (Smith form all ones) and no zero row
    /// in a kernel basis of `A`.
    pub fn new(a: IntMatrix, theta: Vec<BigRational>, xi: Vec<BigRational>) -> Result<Self> {
        check_dim(a.rows(), theta.len())?;
        check_dim(a.rows(), xi.len())?;
        let snf = smith_normal_form(&a);
        if snf.rank() != a.rows() || snf.diagonal().iter().any(|d| !d.is_one()) {
            return Err(Error::precondition("A is not surjective onto Z^rows"));
        }
        let b = integer_kernel(&a);
        if (0..b.rows()).any(|i| b.row(i).iter().all(Zero::is_zero)) {
            return Err(Error::precondition("a kernel basis of A has a zero row"));
        }
        Ok(HypertoricProblem { a, theta, xi })
    }

    /// Data `(A, θ, 0)` of a fan.
    pub fn from_fan(f: &Fan, theta: Vec<BigRational>) -> Result<Self> {
        let a = build_exact_sequence(f)?.a;
        let xi = vec![BigRational::zero(); a.rows()];
        Self::new(a, theta, xi)
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn theta(&self) -> &[BigRational] {
        &self.theta
    }

    pub fn xi(&self) -> &[BigRational] {
        &self.xi
    }

    pub fn num_coords(&self) -> usize {
        self.a.cols()
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn with_theta(&self, theta: Vec<BigRational>) -> Result<Self> {
        check_dim(self.rank(), theta.len())?;
        Ok(HypertoricProblem { theta, ..self.clone() })
    }

    fn col(&self, i: usize) -> Vec<BigRational> {
        self.a.col(i).iter().map(big_rat).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePoint {
    pub z: Vec<BigRational>,
    pub w: Vec<BigRational>,
}

impl PhasePoint {
    pub fn support(&self) -> SupportPattern {
        let nz = |v: &[BigRational]| (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        SupportPattern { z_support: nz(&self.z), w_support: nz(&self.w) }
    }
}

/// Index sets of the coordinates allowed to be nonzero. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SupportPattern {
    pub z_support: Vec<usize>,
    pub w_support: Vec<usize>,
}

impl SupportPattern {
    pub fn size(&self) -> usize {
        self.z_support.len() + self.w_support.len()
    }

    pub fn is_subset_of(&self, other: &SupportPattern) -> bool {
        self.z_support.iter().all(|i| other.z_support.contains(i))
            && self.w_support.iter().all(|i| other.w_support.contains(i))
    }
}

fn check_point(h: &HypertoricProblem, pt: &PhasePoint) -> Result<()> {
    check_dim(h.num_coords(), pt.z.len())?;
    check_dim(h.num_coords(), pt.w.len())
}

/// `Φ(z, w) = Σ a_i z_i w_i`.
pub fn moment_eval(h: &HypertoricProblem, pt: &PhasePoint) -> Result<Vec<BigRational>> {
    check_point(h, pt)?;
    let mut out = vec![BigRational::zero(); h.rank()];
    for i in 0..h.num_coords() {
        let zw = &pt.z[i] * &pt.w[i];
        if zw.is_zero() {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += big_rat(h.a.get(j, i)) * &zw;
        }
    }
    Ok(out)
}

/// Moment map of the translation action of `ℂ^N` on itself: `(z, w) ↦ w`.
pub fn vector_group_moment(pt: &PhasePoint) -> Vec<BigRational> {
    pt.w.clone()
}

/// `t · (z, w) = (t^{a_i} z_i, t^{−a_i} w_i)` for `t ∈ (ℚ^×)^{N−n}`.
pub fn torus_act(h: &HypertoricProblem, t: &[BigRational], pt: &PhasePoint) -> Result<PhasePoint> {
    check_point(h, pt)?;
    check_dim(h.rank(), t.len())?;
    if t.iter().any(Zero::is_zero) {
        return Err(Error::precondition("torus element has a zero coordinate"));
    }
    let mut z = pt.z.clone();
    let mut w = pt.w.clone();
    for i in 0..h.num_coords() {
        let mut c = BigRational::one();
        for (j, tj) in t.iter().enumerate() {
            let e = i32::try_from(h.a.get(j, i)).map_err(|_| Error::input("weight exceeds 32 bits"))?;
            c *= num_traits::pow::Pow::pow(tj, e);
        }
        z[i] = &z[i] * &c;
        w[i] = &w[i] / &c;
    }
    Ok(PhasePoint { z, w })
}

/// `θ ∈ cone({a_i : i ∈ z_support} ∪ {−a_j : j ∈ w_support})`.
pub fn pattern_semistable(h: &HypertoricProblem, theta: &[BigRational], p: &SupportPattern) -> Result<bool> {
    let mut gens: Vec<Vec<BigRational>> = p.z_support.iter().map(|&i| h.col(i)).collect();
    gens.extend(p.w_support.iter().map(|&j| h.col(j).into_iter().map(|x| -x).collect()));
    Ok(cone_contains(&RationalCone::new(h.rank(), gens)?, theta)?.member)
}

/// θ-semistability of a point; depends only on its support.
pub fn is_semistable(h: &HypertoricProblem, pt: &PhasePoint) -> Result<bool> {
    check_point(h, pt)?;
    pattern_semistable(h, &h.theta, &pt.support())
}

/// Every maximal minor of `A` lies in `{−1, 0, 1}`.
pub fn is_unimodular(a: &IntMatrix) -> Result<bool> {
    if rational_rank(&a.to_rational()) != a.rows() {
        return Err(Error::precondition("A does not have full row rank"));
    }
    Ok(a.maximal_minors().iter().all(|(_, d)| d.abs() <= BigInt::one()))
}

/// Hyperplane spanned by columns of `A`, with the columns lying on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    #[serde(serialize_with = "crate::lattice::ser::vec")]
    pub normal: Vec<BigInt>,
    pub columns: Vec<usize>,
}

impl Wall {
    pub fn pairing(&self, theta: &[BigRational]) -> BigRational {
        self.normal.iter().zip(theta).map(|(n, t)| big_rat(n) * t).sum()
    }
}

/// All distinct hyperplanes spanned by `N − n − 1` columns of `A`, with
/// primitive normals whose first nonzero entry is positive, in sorted order.
pub fn walls(a: &IntMatrix) -> Vec<Wall> {
    let r = a.rows();
    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    if r == 1 {
        normals.push(vec![BigInt::one()]);
    } else {
        for cols in (0..a.cols()).combinations(r - 1) {
            let m = a.select_cols(&cols).transpose().to_rational();
            if rational_rank(&m) != r - 1 {
                continue;
            }
            let mut n = m.nullspace_primitive().remove(0);
            if n.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                n.iter_mut().for_each(|x| *x = -x.clone());
            }
            normals.push(n);
        }
    }
    normals.sort();
    normals.dedup();
    normals
        .into_iter()
        .map(|normal| {
            let columns = (0..a.cols())
                .filter(|&i| a.col(i).iter().zip(&normal).map(|(x, y)| x * y).sum::<BigInt>().is_zero())
                .collect();
            Wall { normal, columns }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Genericity {
    pub generic: bool,
    /// Walls containing θ.
    pub walls: Vec<Wall>,
}

/// θ is generic iff it lies on no wall.
pub fn is_generic(h: &HypertoricProblem) -> Genericity {
    generic_report(&h.a, &h.theta)
}

fn generic_report(a: &IntMatrix, theta: &[BigRational]) -> Genericity {
    let on: Vec<Wall> = walls(a).into_iter().filter(|w| w.pairing(theta).is_zero()).collect();
    Genericity { generic: on.is_empty(), walls: on }
}

/// A generic parameter in a chamber adjacent to `θ`: `θ + ε·d` with `ε`
/// halved until no wall is crossed. Directions tried in order: `−Σ a_i`,
/// the unit vectors, then `(1, T, …, T^{r−1})` with `T` beyond every normal
/// entry, which avoids all walls.
pub fn perturb_theta(a: &IntMatrix, theta: &[BigRational]) -> Vec<BigRational> {
    let all = walls(a);
    let r = a.rows();
    let mut dirs: Vec<Vec<BigRational>> = Vec::new();
    dirs.push((0..r).map(|j| -(0..a.cols()).map(|i| big_rat(a.get(j, i))).sum::<BigRational>()).collect());
    for k in 0..r {
        dirs.push((0..r).map(|j| if j == k { BigRational::one() } else { BigRational::zero() }).collect());
    }
    let bound = all
        .iter()
        .flat_map(|w| w.normal.iter().map(|x| x.abs()))
        .max()
        .unwrap_or_else(BigInt::one);
    let t = big_rat(&(bound + 1));
    let mut p = BigRational::one();
    dirs.push(
        (0..r)
            .map(|_| {
                let v = p.clone();
                p *= &t;
                v
            })
            .collect(),
    );
    let signs: Vec<BigRational> = all.iter().map(|w| w.pairing(theta)).collect();
    for d in &dirs {
        if all.iter().any(|w| w.pairing(theta).is_zero() && w.pairing(d).is_zero()) {
            continue;
        }
        let mut eps = BigRational::one();
        for _ in 0..128 {
            let cand: Vec<BigRational> = theta.iter().zip(d).map(|(a, b)| a + &eps * b).collect();
            let ok = all.iter().zip(&signs).all(|(w, s)| {
                let v = w.pairing(&cand);
                !v.is_zero() && (s.is_zero() || v.signum() == s.signum())
            });
            if ok {
                return cand;
            }
            eps /= BigRational::from_integer(2.into());
        }
    }
    unreachable!("the last direction avoids every wall")
}

/// One maximal support pattern of the central fiber, with the dimension of
/// its quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberComponent {
    pub z_support: Vec<usize>,
    pub w_support: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralFiberReport {
    pub unimodular: bool,
    pub generic: bool,
    /// Walls containing the requested θ.
    pub walls: Vec<Wall>,
    pub components: Vec<FiberComponent>,
    #[serde(serialize_with = "ser_rats")]
    pub theta_used: Vec<BigRational>,
    pub perturbed: bool,
    pub generators_certified: bool,
}

/// The restriction of every component of `Φ` to `L_σ` is the zero polynomial.
pub fn moment_vanishes_on(h: &HypertoricProblem, p: &SupportPattern) -> bool {
    p.z_support
        .iter()
        .filter(|i| p.w_support.contains(i))
        .all(|&i| (0..h.rank()).all(|j| h.a.get(j, i).is_zero()))
}

/// Every generator has a variable with positive exponent outside `σ`.
pub fn generators_vanish_on(gens: &GeneratorReport, p: &SupportPattern) -> bool {
    gens.monomials().all(|m| {
        m.i_prime.iter().enumerate().any(|(i, &e)| e > 0 && !p.z_support.contains(&i))
            || m.i.iter().enumerate().any(|(i, &e)| e > 0 && !p.w_support.contains(&i))
    })
}

/// Dimension of `{u ≥ 0 : W·u = θ}` for `W` the weights of `σ`, i.e. of the
/// toric quotient `L_σ^{ss} // T`.
pub fn pattern_quotient_dim(h: &HypertoricProblem, theta: &[BigRational], p: &SupportPattern) -> Result<usize> {
    let mut cols: Vec<Vec<BigRational>> = p.z_support.iter().map(|&i| h.col(i)).collect();
    cols.extend(p.w_support.iter().map(|&j| h.col(j).into_iter().map(|x| -x).collect()));
    let k = cols.len();
    let rows: Vec<Vec<BigRational>> = (0..h.rank()).map(|j| cols.iter().map(|c| c[j].clone()).collect()).collect();
    let w = RatMatrix::from_rows(rows, k)?;
    let mut free = Vec::new();
    for idx in 0..k {
        let mut c = vec![BigRational::zero(); k];
        c[idx] = BigRational::one();
        match solve_lp(&w, theta, &c, Sense::Maximize)? {
            LpOutcome::Optimal { value, .. } if value.is_zero() => {}
            LpOutcome::Infeasible { .. } => return Err(Error::precondition("pattern is not semistable")),
            _ => free.push(idx),
        }
    }
    let sub: Vec<Vec<BigRational>> = (0..h.rank()).map(|j| free.iter().map(|&i| cols[i][j].clone()).collect()).collect();
    let rank = rational_rank(&RatMatrix::from_rows(sub, free.len())?);
    Ok(free.len() - rank)
}

fn all_patterns(n: usize) -> Vec<SupportPattern> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let (mut z, mut w) = (Vec::new(), Vec::new());
        for i in 0..n {
            match c % 3 {
                1 => z.push(i),
                2 => w.push(i),
                _ => {}
            }
            c /= 3;
        }
        out.push(SupportPattern { z_support: z, w_support: w });
    }
    out.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));
    out
}

/// Maximal support patterns `σ` with disjoint `z`/`w` parts such that `Φ`
/// vanishes on `L_σ`, every generator of the invariant ring vanishes on
/// `L_σ`, and `L_σ` has θ-semistable points. A non-generic θ is replaced by
/// [`perturb_theta`].
///
/// Each `S_ρ T^ρ` is invariant, so points of the fiber have disjoint
/// supports and the fiber is exactly the union of these `L_σ^{ss}`.
pub fn central_fiber_components(h: &HypertoricProblem, gens: &GeneratorReport) -> Result<CentralFiberReport> {
    if h.xi.iter().any(|x| !x.is_zero()) {
        return Err(Error::precondition("central fiber requires xi = 0"));
    }
    let n = h.num_coords();
    for m in gens.monomials() {
        check_dim(n, m.i.len())?;
    }
    let unimodular = is_unimodular(&h.a)?;
    let gen = is_generic(h);
    let theta = if gen.generic { h.theta.clone() } else { perturb_theta(&h.a, &h.theta) };

    let patterns = all_patterns(n);
    let mut accepted: Vec<SupportPattern> = Vec::new();
    for (_, level) in &patterns.into_iter().chunk_by(SupportPattern::size) {
        let candidates: Vec<SupportPattern> =
            level.filter(|p| !accepted.iter().any(|a| p.is_subset_of(a))).collect();
        let ok: Vec<Result<bool>> = candidates
            .par_iter()
            .map(|p| {
                if !moment_vanishes_on(h, p) || !generators_vanish_on(gens, p) {
                    return Ok(false);
                }
                pattern_semistable(h, &theta, p)
            })
            .collect();
        for (p, keep) in candidates.into_iter().zip(ok) {
            if keep? {
                accepted.push(p);
            }
        }
    }
    accepted.sort();
    let components = accepted
        .into_iter()
        .map(|p| {
            let dim = pattern_quotient_dim(h, &theta, &p)?;
            Ok(FiberComponent { z_support: p.z_support, w_support: p.w_support, dim })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CentralFiberReport {
        unimodular,
        generic: gen.generic,
        walls: gen.walls,
        components,
        perturbed: !gen.generic,
        theta_used: theta,
        generators_certified: gens.certified_complete,
    })
}

/// Membership of a point in the central fiber for parameter `theta`:
/// `Φ = 0`, every generator vanishes, and the point is semistable.
pub fn in_central_fiber(h: &HypertoricProblem, gens: &GeneratorReport, theta: &[BigRational], pt: &PhasePoint) -> Result<bool> {
    if moment_eval(h, pt)?.iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    let vanish = gens.monomials().all(|m| {
        let mut v = BigRational::one();
        for i in 0..h.num_coords() {
            v *= num_traits::pow(pt.z[i].clone(), m.i_prime[i] as usize);
            v *= num_traits::pow(pt.w[i].clone(), m.i[i] as usize);
        }
        v.is_zero()
    });
    Ok(vanish && pattern_semistable(h, theta, &pt.support())?)
}
