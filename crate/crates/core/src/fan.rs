//! Smooth complete fans and the exact sequence `0 → M → ℤ^N → Pic(X) → 0`.
//!
//! Ray order is significant: it fixes the order of the Cox variables, the
//! columns of `A`, and every tie-break downstream.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    cone_contains, integer_left_kernel, primitive_integer_vector, rational_rank, smith_normal_form, IntMatrix,
    RatMatrix, RationalCone,
};

/// Rays and maximal cones of a toric variety. This is also the JSON input
/// format: `{"dim": n, "rays": [[..], ..], "max_cones": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fan {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Checks structural well-formedness only: ray lengths, index ranges,
    /// no repeated index within a cone. Geometric properties are checked by
    /// [`validate_fan`].
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let f = Fan { dim, rays, max_cones };
        f.check_structure()?;
        Ok(f)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Fan = serde_json::from_str(s).map_err(|e| Error::input(format!("fan JSON: {e}")))?;
        f.check_structure()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fan serializes")
    }

    fn check_structure(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::input("fan dimension must be positive"));
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.dim {
                return Err(Error::input(format!(
                    "ray {i} has {} coordinates, expected {}",
                    r.len(),
                    self.dim
                )));
            }
        }
        for (c, cone) in self.max_cones.iter().enumerate() {
            if cone.is_empty() {
                return Err(Error::input(format!("cone {c} is empty")));
            }
            for &i in cone {
                if i >= self.rays.len() {
                    return Err(Error::input(format!("cone {c} refers to ray {i}, only {} rays", self.rays.len())));
                }
            }
            if cone.iter().duplicates().next().is_some() {
                return Err(Error::input(format!("cone {c} repeats a ray index")));
            }
        }
        Ok(())
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Index of the ray `-v_i`, if present.
    pub fn opposite(&self, i: usize) -> Option<usize> {
        let neg: Vec<i64> = self.rays[i].iter().map(|x| -x).collect();
        self.rays.iter().position(|r| *r == neg)
    }

    /// Same fan with rays permuted: new ray `k` is old ray `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Fan> {
        let n = self.rays.len();
        if perm.len() != n || perm.iter().copied().sorted().ne(0..n) {
            return Err(Error::input("not a permutation of the rays"));
        }
        let mut inv = vec![0; n];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        let rays = perm.iter().map(|&p| self.rays[p].clone()).collect();
        let max_cones = self
            .max_cones
            .iter()
            .map(|c| c.iter().map(|&i| inv[i]).sorted().collect())
            .collect();
        Fan::new(self.dim, rays, max_cones)
    }

    /// `ℙⁿ`: rays `e₁, …, eₙ, −Σeᵢ`, cones omitting one ray each.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        rays.push(vec![-1; n]);
        let max_cones = (0..=n).rev().map(|j| (0..=n).filter(|&i| i != j).collect()).collect();
        Fan::new(n, rays, max_cones).expect("well formed")
    }

    /// Blow-up of `ℙⁿ` at the torus-fixed points `p_j` for `j ∈ points`
    /// (0-based), where `p_j` is the fixed point of the cone omitting `v_j`.
    /// The new ray `−v_j` is appended in increasing `j`.
    pub fn blowup_projective_space(n: usize, points: &[usize]) -> Result<Fan> {
        let base = Fan::projective_space(n);
        let pts: Vec<usize> = points.iter().copied().sorted().dedup().collect();
        if pts.len() != points.len() || pts.iter().any(|&j| j > n) {
            return Err(Error::input("blow-up points must be distinct fixed points"));
        }
        let mut rays = base.rays.clone();
        let mut max_cones = Vec::new();
        let mut new_index = HashMap::new();
        for &j in &pts {
            new_index.insert(j, rays.len());
            rays.push(base.rays[j].iter().map(|x| -x).collect());
        }
        for j in (0..=n).rev() {
            let cone: Vec<usize> = (0..=n).filter(|&i| i != j).collect();
            match new_index.get(&j) {
                None => max_cones.push(cone),
                Some(&e) => {
                    for &i in &cone {
                        let mut c: Vec<usize> = cone.iter().copied().filter(|&k| k != i).collect();
                        c.push(e);
                        max_cones.push(c);
                    }
                }
            }
        }
        Fan::new(n, rays, max_cones)
    }

    pub fn p1xp1() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .expect("well formed")
    }

    /// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (−1,a), (0,−1)`.
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .expect("well formed")
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Built-in fans, in a fixed order. Every entry has at most six rays.
pub fn library() -> Vec<(&'static str, Fan)> {
    let bl = |n, pts: &[usize]| Fan::blowup_projective_space(n, pts).expect("valid points");
    vec![
        ("p1", Fan::projective_space(1)),
        ("p2", Fan::projective_space(2)),
        ("p3", Fan::projective_space(3)),
        ("p4", Fan::projective_space(4)),
        ("blowup-p2", bl(2, &[2])),
        ("blowup-p3", bl(3, &[3])),
        ("blowup-p4", bl(4, &[4])),
        ("blowup2-p2", bl(2, &[1, 2])),
        ("blowup3-p2", bl(2, &[0, 1, 2])),
        ("blowup2-p3", bl(3, &[2, 3])),
        ("p1xp1", Fan::p1xp1()),
        ("hirzebruch-1", Fan::hirzebruch(1)),
        ("hirzebruch-2", Fan::hirzebruch(2)),
        ("hirzebruch-3", Fan::hirzebruch(3)),
    ]
}

pub fn builtin(name: &str) -> Result<Fan> {
    library()
        .into_iter()
        .find(|(k, _)| *k == name)
        .map(|(_, f)| f)
        .ok_or_else(|| Error::input(format!("unknown built-in fan `{name}`")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check { ok: true, detail: None }
    }

    fn fail(detail: String) -> Self {
        Check { ok: false, detail: Some(detail) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanValidation {
    pub primitive: Check,
    pub distinct: Check,
    pub smooth: Check,
    pub facet_pairing: Check,
    pub positive_spanning: Check,
    pub pass: bool,
}

impl FanValidation {
    pub fn failures(&self) -> Vec<String> {
        [
            ("primitive", &self.primitive),
            ("distinct", &self.distinct),
            ("smooth", &self.smooth),
            ("facet_pairing", &self.facet_pairing),
            ("positive_spanning", &self.positive_spanning),
        ]
        .into_iter()
        .filter(|(_, c)| !c.ok)
        .map(|(k, c)| format!("{k}: {}", c.detail.clone().unwrap_or_default()))
        .collect()
    }
}

fn int_det(vectors: &[&Vec<i64>]) -> BigInt {
    IntMatrix::from_rows(&vectors.iter().map(|v| (*v).clone()).collect::<Vec<_>>())
        .and_then(|m| m.determinant())
        .expect("square by construction")
}

/// Smoothness and completeness checks. Only structural problems (bad
/// indices, ray lengths) are errors; geometric failures are reported.
pub fn validate_fan(f: &Fan) -> Result<FanValidation> {
    f.check_structure()?;
    let n = f.dim;

    let primitive = match f.rays.iter().position(|r| {
        let g = r.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        g != 1
    }) {
        None => Check::pass(),
        Some(i) => Check::fail(format!("ray {i} is zero or not primitive")),
    };

    let distinct = match f.rays.iter().enumerate().tuple_combinations().find(|((_, a), (_, b))| a == b) {
        None => Check::pass(),
        Some(((i, _), (j, _))) => Check::fail(format!("rays {i} and {j} coincide")),
    };

    let mut smooth = Check::pass();
    for (c, cone) in f.max_cones.iter().enumerate() {
        if cone.len() != n {
            smooth = Check::fail(format!("cone {c} has {} rays, expected {n}", cone.len()));
            break;
        }
        let d = int_det(&cone.iter().map(|&i| &f.rays[i]).collect::<Vec<_>>());
        if d.abs() != BigInt::one() {
            smooth = Check::fail(format!("cone {c} has determinant {d}"));
            break;
        }
    }

    let facet_pairing = if f.max_cones.is_empty() {
        Check::fail("no maximal cones".into())
    } else if !smooth.ok {
        Check::fail("requires simplicial cones of full dimension".into())
    } else {
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for cone in &f.max_cones {
            let sorted: Vec<usize> = cone.iter().copied().sorted().collect();
            for facet in sorted.iter().copied().combinations(n - 1) {
                *count.entry(facet).or_default() += 1;
            }
        }
        match count.iter().filter(|(_, &k)| k != 2).min_by_key(|(f, _)| (*f).clone()) {
            None => Check::pass(),
            Some((facet, k)) => Check::fail(format!("facet {facet:?} lies in {k} maximal cones")),
        }
    };

    let positive_spanning = {
        let cone = RationalCone::from_i64(n, &f.rays).expect("ray lengths checked");
        let mut res = Check::pass();
        'outer: for i in 0..n {
            for s in [1i64, -1] {
                let mut t = vec![BigRational::zero(); n];
                t[i] = BigRational::from_integer(s.into());
                if !cone_contains(&cone, &t)?.member {
                    res = Check::fail(format!("{}e{} is not a nonnegative combination of rays", if s > 0 { "+" } else { "-" }, i + 1));
                    break 'outer;
                }
            }
        }
        res
    };

    let pass = primitive.ok && distinct.ok && smooth.ok && facet_pairing.ok && positive_spanning.ok;
    Ok(FanValidation {
        primitive,
        distinct,
        smooth,
        facet_pairing,
        positive_spanning,
        pass,
    })
}

/// `B` (N × n, row ρ is `v_ρ`) and `A` ((N−n) × N) with `A·B = 0`, `A`
/// surjective and `ker A = im B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequenceData {
    pub b: IntMatrix,
    pub a: IntMatrix,
    pub pic_rank: usize,
}

impl ExactSequenceData {
    pub fn num_rays(&self) -> usize {
        self.b.rows()
    }

    pub fn dim(&self) -> usize {
        self.b.cols()
    }

    /// Column `a_ρ` of `A`.
    pub fn a_col(&self, rho: usize) -> Vec<BigInt> {
        self.a.col(rho)
    }

    /// Replaces `A` by `G·A` for a unimodular `G`. All downstream outputs
    /// are invariant under this change of basis of `Pic(X)`.
    pub fn change_basis(&self, g: &IntMatrix) -> Result<ExactSequenceData> {
        if g.rows() != self.pic_rank || g.cols() != self.pic_rank {
            return Err(Error::DimensionMismatch { expected: self.pic_rank, got: g.rows() });
        }
        if g.determinant()?.abs() != BigInt::one() {
            return Err(Error::input("basis change is not unimodular"));
        }
        Ok(ExactSequenceData {
            b: self.b.clone(),
            a: g.mul(&self.a)?,
            pic_rank: self.pic_rank,
        })
    }

    /// Rechecks `A·B = 0`, `SNF(A) = [I | 0]` and `SNF(B) = [I; 0]`; the last
    /// two together with ranks force `ker A = im B`.
    pub fn verify(&self) -> Result<()> {
        if !self.a.mul(&self.b)?.is_zero() {
            return Err(Error::precondition("A·B ≠ 0"));
        }
        let all_ones = |m: &IntMatrix, r: usize| {
            let s = smith_normal_form(m);
            s.rank() == r && s.diagonal().iter().take(r).all(|d| d.is_one())
        };
        if !all_ones(&self.a, self.pic_rank) {
            return Err(Error::precondition("A is not surjective"));
        }
        if !all_ones(&self.b, self.dim()) {
            return Err(Error::precondition("image of B is not saturated"));
        }
        if self.a.rows() + self.b.cols() != self.b.rows() {
            return Err(Error::precondition("ranks of A and B do not add up"));
        }
        Ok(())
    }
}

/// First `n`-subset of rays (lexicographic) forming a lattice basis.
pub fn first_unimodular_basis(f: &Fan) -> Option<Vec<usize>> {
    (0..f.num_rays()).combinations(f.dim).find(|c| {
        int_det(&c.iter().map(|&i| &f.rays[i]).collect::<Vec<_>>()).abs().is_one()
    })
}

/// Builds `B` and a canonical `A`: with `β` the first ray subset forming a
/// lattice basis, `A` is the unique cokernel map whose columns outside `β`
/// form the identity.
pub fn build_exact_sequence(f: &Fan) -> Result<ExactSequenceData> {
    let report = validate_fan(f)?;
    if !report.pass {
        return Err(Error::precondition(format!("fan is not smooth and complete: {}", report.failures().join("; "))));
    }
    let b = IntMatrix::from_rows_with_cols(&f.rays, f.dim)?;
    let a0 = integer_left_kernel(&b);
    let beta = first_unimodular_basis(f).ok_or_else(|| Error::precondition("no ray subset forms a lattice basis"))?;
    let rest: Vec<usize> = (0..f.num_rays()).filter(|i| !beta.contains(i)).collect();
    let g = a0.select_cols(&rest).unimodular_inverse()?;
    let a = g.mul(&a0)?;
    let esd = ExactSequenceData {
        pic_rank: a.rows(),
        b,
        a,
    };
    esd.verify()?;
    Ok(esd)
}

/// `Σ₁` together with the antipodal pairing `ρ ↔ −ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedRayPairing {
    /// Sorted ray indices.
    pub sigma1: Vec<usize>,
    /// `opposite[ρ] = Some(σ)` iff `v_σ = −v_ρ`.
    pub opposite: Vec<Option<usize>>,
}

impl SignedRayPairing {
    pub fn in_sigma1(&self, rho: usize) -> bool {
        self.sigma1.binary_search(&rho).is_ok()
    }

    /// Antipodal pairs `(ρ, −ρ)` with `ρ ∈ Σ₁`, in increasing `ρ`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.sigma1
            .iter()
            .filter_map(|&r| self.opposite[r].map(|s| (r, s)))
            .collect()
    }
}

/// Keeps every unpaired ray and the smaller index of each antipodal pair.
pub fn select_sigma1(f: &Fan) -> SignedRayPairing {
    let opposite: Vec<Option<usize>> = (0..f.num_rays()).map(|i| f.opposite(i)).collect();
    let sigma1 = (0..f.num_rays())
        .filter(|&i| opposite[i].is_none_or(|j| i < j))
        .collect();
    SignedRayPairing { sigma1, opposite }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerpSpaces {
    /// Basis of `Σ₁^⊥ ⊂ ℚ^{Σ₁}`, coordinates in `sigma1` order.
    #[serde(serialize_with = "crate::lattice::ser::rows")]
    pub sigma1_perp: Vec<Vec<BigInt>>,
    /// The same vectors extended by zero to `ℚ^N`.
    #[serde(serialize_with = "crate::lattice::ser::rows")]
    pub sigma1_perp_embedded: Vec<Vec<BigInt>>,
    /// Basis of `Σ(1)^⊥ ⊂ ℚ^N`; equal to the rows of `A`.
    #[serde(serialize_with = "crate::lattice::ser::rows")]
    pub full_perp: Vec<Vec<BigInt>>,
    /// `^ρc` for each antipodal pair: ones at `ρ` and `−ρ`.
    #[serde(serialize_with = "crate::lattice::ser::rows")]
    pub rho_c: Vec<Vec<BigInt>>,
}

/// `Σ₁^⊥ = {u : Σ_{ρ∈Σ₁} u_ρ v_ρ = 0}` via the reduced row echelon basis,
/// each vector cleared to a primitive integer vector.
pub fn perp_spaces(f: &Fan, p: &SignedRayPairing) -> Result<PerpSpaces> {
    let esd = build_exact_sequence(f)?;
    let n_rays = f.num_rays();
    let cols_matrix = |idx: &[usize]| -> RatMatrix {
        let rows = (0..f.dim)
            .map(|k| idx.iter().map(|&i| BigRational::from_integer(f.rays[i][k].into())).collect())
            .collect();
        RatMatrix::from_rows(rows, idx.len()).expect("rectangular")
    };
    let sigma1_perp = sigma1_perp_rays(&esd.b, p);
    let sigma1_perp_embedded: Vec<Vec<BigInt>> = sigma1_perp
        .iter()
        .map(|u| {
            let mut e = vec![BigInt::zero(); n_rays];
            for (k, &r) in p.sigma1.iter().enumerate() {
                e[r] = u[k].clone();
            }
            e
        })
        .collect();
    let full_perp = esd.a.to_rows();
    let all: Vec<usize> = (0..n_rays).collect();
    let nullity = cols_matrix(&all).nullspace_primitive().len();
    if nullity != full_perp.len() {
        return Err(Error::precondition("rows of A do not span the orthogonal complement of the rays"));
    }
    let rho_c = p
        .pairs()
        .into_iter()
        .map(|(r, s)| {
            let mut e = vec![BigInt::zero(); n_rays];
            e[r] = BigInt::one();
            e[s] = BigInt::one();
            e
        })
        .collect();
    Ok(PerpSpaces {
        sigma1_perp,
        sigma1_perp_embedded,
        full_perp,
        rho_c,
    })
}

/// Rank of the span of a list of integer vectors.
pub fn span_rank(vectors: &[Vec<BigInt>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors
        .iter()
        .map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    rational_rank(&RatMatrix::from_rows(rows, len).expect("rectangular"))
}

/// A vector `w` with all `w_ρ ≥ 1` and `Σ w_ρ v_ρ = 0`, primitive in `ℤ^N`.
/// Exists exactly when the rays positively span. Since `w ⊥ ker A`, the
/// functional `w` is constant on every fiber of `A` and bounds `|I|` there.
pub fn positive_grading(f: &Fan) -> Result<Vec<BigInt>> {
    positive_grading_rays(&IntMatrix::from_rows_with_cols(&f.rays, f.dim)?)
}

/// [`positive_grading`] for rays given as the rows of `b`.
pub fn positive_grading_rays(b: &IntMatrix) -> Result<Vec<BigInt>> {
    let dim = b.cols();
    let rays: Vec<Vec<BigRational>> = b
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let target: Vec<BigRational> = (0..dim)
        .map(|k| -rays.iter().map(|r| r[k].clone()).sum::<BigRational>())
        .collect();
    let cone = RationalCone::new(dim, rays)?;
    let res = cone_contains(&cone, &target)?;
    let x = res
        .witness
        .ok_or_else(|| Error::precondition("rays do not positively span; no positive grading"))?;
    let w: Vec<BigRational> = x.into_iter().map(|xi| xi + BigRational::one()).collect();
    let w = primitive_integer_vector(&w);
    debug_assert!(w.iter().all(|x| x.is_positive()));
    Ok(w)
}

/// Basis of `Σ₁^⊥` in `sigma1` coordinates for rays given as the rows of `b`.
pub fn sigma1_perp_rays(b: &IntMatrix, p: &SignedRayPairing) -> Vec<Vec<BigInt>> {
    let rows = (0..b.cols())
        .map(|k| p.sigma1.iter().map(|&i| BigRational::from_integer(b.get(i, k).clone())).collect())
        .collect();
    RatMatrix::from_rows(rows, p.sigma1.len()).expect("rectangular").nullspace_primitive()
}
