//! The four graded presentations built from a fan and the comparison map
//! `φ̄ : R′ → R`.
//!
//! Variables: `S_ρ` for every ray, and either `T_ρ` (kinds `R`, `R̃`) or
//! `T^ρ` (kinds `R′`, `R̃′`). Kind `R` keeps `T_ρ` only for `ρ ∈ Σ₁` and
//! eliminates `T_{−ρ} = −T_ρ` by substitution. Every variable is bigraded
//! by a divisor class in `ℤ^{N−n}` and a fiber degree.
//!
//! Monomials are stored as a pair of exponent vectors `(s, t)`, both of
//! length `N`, indexed by ray; the kind says how to read `t`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{build_exact_sequence, sigma1_perp_rays, ExactSequenceData, Fan, SignedRayPairing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PresentationKind {
    R,
    Rprime,
    Rtilde,
    RtildePrime,
}

impl PresentationKind {
    pub const ALL: [PresentationKind; 4] = [Self::R, Self::Rprime, Self::Rtilde, Self::RtildePrime];

    /// Whether the fiber variables are the `T^ρ` of the hypertoric side.
    pub fn is_primed(self) -> bool {
        matches!(self, Self::Rprime | Self::RtildePrime)
    }

    /// Rays carrying a fiber variable.
    pub fn t_indices(self, p: &SignedRayPairing) -> Vec<usize> {
        match self {
            Self::R => p.sigma1.clone(),
            _ => (0..p.opposite.len()).collect(),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::R => "R",
            Self::Rprime => "Rprime",
            Self::Rtilde => "Rtilde",
            Self::RtildePrime => "RtildePrime",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::input(format!("unknown presentation `{s}`")))
    }
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "ray")]
pub enum VarRole {
    S(usize),
    T(usize),
    TUpper(usize),
}

/// Names are 1-based: `S3`, `T3`, `T^3`.
pub fn var_name(role: VarRole) -> String {
    match role {
        VarRole::S(r) => format!("S{}", r + 1),
        VarRole::T(r) => format!("T{}", r + 1),
        VarRole::TUpper(r) => format!("T^{}", r + 1),
    }
}

pub fn parse_var_name(name: &str) -> Result<VarRole> {
    let (ctor, rest): (fn(usize) -> VarRole, &str) = if let Some(r) = name.strip_prefix("T^") {
        (VarRole::TUpper, r)
    } else if let Some(r) = name.strip_prefix('T') {
        (VarRole::T, r)
    } else if let Some(r) = name.strip_prefix('S') {
        (VarRole::S, r)
    } else {
        return Err(Error::input(format!("unknown variable `{name}`")));
    };
    match rest.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(ctor(k - 1)),
        _ => Err(Error::input(format!("unknown variable `{name}`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub name: String,
    pub role: VarRole,
    #[serde(serialize_with = "crate::lattice::ser::vec")]
    pub class: Vec<BigInt>,
    pub fiber_deg: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    #[serde(serialize_with = "ser_rat")]
    pub coeff: BigRational,
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polynomial {
    pub terms: Vec<Term>,
}

/// Eliminated variable `from = coefficient · to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identification {
    pub from: String,
    pub to: String,
    pub coefficient: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPresentation {
    pub kind: PresentationKind,
    pub num_rays: usize,
    pub variables: Vec<Variable>,
    pub relations: Vec<Polynomial>,
    pub identifications: Vec<Identification>,
}

/// Divisor classes of the variables, shared by every kind.
#[derive(Clone, Debug)]
pub struct Grading {
    /// `a[ρ]` is column `ρ` of `A`.
    pub a: Vec<Vec<BigInt>>,
    pub opposite: Vec<Option<usize>>,
}

impl Grading {
    pub fn new(esd: &ExactSequenceData, p: &SignedRayPairing) -> Self {
        Grading {
            a: (0..esd.num_rays()).map(|r| esd.a_col(r)).collect(),
            opposite: p.opposite.clone(),
        }
    }

    pub fn pic_rank(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    pub fn s_class(&self, rho: usize) -> Vec<BigInt> {
        self.a[rho].clone()
    }

    /// Class of `T_ρ` (unprimed) or `T^ρ` (primed).
    pub fn t_class(&self, rho: usize, primed: bool) -> Vec<BigInt> {
        let mut c: Vec<BigInt> = self.a[rho].iter().map(|x| -x).collect();
        if !primed {
            if let Some(o) = self.opposite[rho] {
                for (ci, ai) in c.iter_mut().zip(&self.a[o]) {
                    *ci -= ai;
                }
            }
        }
        c
    }

    pub fn bidegree(&self, s: &[u32], t: &[u32], primed: bool) -> (Vec<BigInt>, u32) {
        let mut c = vec![BigInt::zero(); self.pic_rank()];
        for (r, &e) in s.iter().enumerate() {
            if e > 0 {
                for (ci, ai) in c.iter_mut().zip(&self.a[r]) {
                    *ci += ai * e;
                }
            }
        }
        for (r, &e) in t.iter().enumerate() {
            if e > 0 {
                for (ci, ti) in c.iter_mut().zip(self.t_class(r, primed)) {
                    *ci += ti * e;
                }
            }
        }
        (c, t.iter().sum())
    }
}

fn unit_term(n: usize, s: &[usize], t: usize, coeff: BigRational) -> Term {
    let mut se = vec![0; n];
    for &i in s {
        se[i] += 1;
    }
    let mut te = vec![0; n];
    te[t] = 1;
    Term { s: se, t: te, coeff }
}

fn int_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Builds presentation `kind`. Requires a smooth complete fan.
pub fn cox_presentation(f: &Fan, p: &SignedRayPairing, kind: PresentationKind) -> Result<GradedPresentation> {
    let esd = build_exact_sequence(f)?;
    Ok(cox_presentation_esd(&esd, p, kind))
}

/// [`cox_presentation`] from exact-sequence data; `R′` uses the rows of the
/// given `A`, so a change of basis of `Pic` changes its relations but not
/// their span.
pub fn cox_presentation_esd(esd: &ExactSequenceData, p: &SignedRayPairing, kind: PresentationKind) -> GradedPresentation {
    let sigma1_perp = sigma1_perp_rays(&esd.b, p);
    let g = Grading::new(esd, p);
    let n = esd.num_rays();
    let primed = kind.is_primed();

    let mut variables: Vec<Variable> = (0..n)
        .map(|r| Variable {
            name: var_name(VarRole::S(r)),
            role: VarRole::S(r),
            class: g.s_class(r),
            fiber_deg: 0,
        })
        .collect();
    for r in kind.t_indices(p) {
        let role = if primed { VarRole::TUpper(r) } else { VarRole::T(r) };
        variables.push(Variable {
            name: var_name(role),
            role,
            class: g.t_class(r, primed),
            fiber_deg: 1,
        });
    }

    // `S^ρ` in unprimed kinds, `S_ρ` in primed kinds.
    let s_factor = |r: usize| -> Vec<usize> {
        match (primed, p.opposite[r]) {
            (false, Some(o)) => vec![r, o],
            _ => vec![r],
        }
    };

    let mut relations = Vec::new();
    match kind {
        PresentationKind::Rprime => {
            for row in esd.a.to_rows() {
                let terms = (0..n)
                    .filter(|&r| !row[r].is_zero())
                    .map(|r| unit_term(n, &[r], r, int_rat(&row[r])))
                    .collect();
                relations.push(Polynomial { terms });
            }
        }
        _ => {
            for u in &sigma1_perp {
                let terms = p
                    .sigma1
                    .iter()
                    .zip(u)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&r, c)| unit_term(n, &s_factor(r), r, int_rat(c)))
                    .collect();
                relations.push(Polynomial { terms });
            }
            if matches!(kind, PresentationKind::Rtilde | PresentationKind::RtildePrime) {
                for (r, o) in p.pairs() {
                    let (sr, so) = if primed { (vec![r], vec![o]) } else { (vec![r, o], vec![r, o]) };
                    relations.push(Polynomial {
                        terms: vec![
                            unit_term(n, &sr, r, BigRational::one()),
                            unit_term(n, &so, o, BigRational::one()),
                        ],
                    });
                }
            }
        }
    }

    let identifications = if kind == PresentationKind::R {
        p.pairs()
            .into_iter()
            .map(|(r, o)| Identification {
                from: var_name(VarRole::T(o)),
                to: var_name(VarRole::T(r)),
                coefficient: -1,
            })
            .collect()
    } else {
        Vec::new()
    };

    GradedPresentation {
        kind,
        num_rays: n,
        variables,
        relations,
        identifications,
    }
}

impl GradedPresentation {
    fn term_string(&self, t: &Term) -> String {
        let mut factors = Vec::new();
        for (r, &e) in t.s.iter().enumerate() {
            push_power(&mut factors, &var_name(VarRole::S(r)), e);
        }
        for (r, &e) in t.t.iter().enumerate() {
            let role = if self.kind.is_primed() { VarRole::TUpper(r) } else { VarRole::T(r) };
            push_power(&mut factors, &var_name(role), e);
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        factors.join("*")
    }

    /// Relation as text, e.g. `S1*T1 + S2*T2 - S3*T3`.
    pub fn relation_string(&self, rel: &Polynomial) -> String {
        let mut out = String::new();
        for (i, t) in rel.terms.iter().enumerate() {
            let mono = self.term_string(t);
            let abs = t.coeff.abs();
            let coeff = if abs.is_one() { String::new() } else { format!("{abs}*") };
            let sign = if t.coeff.is_negative() { "-" } else { "+" };
            if i == 0 {
                out.push_str(if t.coeff.is_negative() { "-" } else { "" });
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&coeff);
            out.push_str(&mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("presentation {}\nvariables:\n", self.kind);
        for v in &self.variables {
            let class: Vec<String> = v.class.iter().map(ToString::to_string).collect();
            s.push_str(&format!("  {:<6} class ({}) fiber {}\n", v.name, class.join(","), v.fiber_deg));
        }
        s.push_str("relations:\n");
        if self.relations.is_empty() {
            s.push_str("  (none)\n");
        }
        for r in &self.relations {
            s.push_str(&format!("  {}\n", self.relation_string(r)));
        }
        if !self.identifications.is_empty() {
            s.push_str("identifications:\n");
            for i in &self.identifications {
                s.push_str(&format!("  {} = {}{}\n", i.from, if i.coefficient < 0 { "-" } else { "" }, i.to));
            }
        }
        s
    }
}

fn push_power(out: &mut Vec<String>, name: &str, e: u32) {
    match e {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{e}")),
    }
}

/// `φ̄` on exponent vectors: `T^ρ ↦ S_{−ρ} T_ρ` when `−ρ` is a ray, else
/// `T^ρ ↦ T_ρ`. The result is in full lemma coordinates (every `T_ρ`).
pub fn phi_bar(p: &SignedRayPairing, s: &[u32], t_upper: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut s2 = s.to_vec();
    for (r, &e) in t_upper.iter().enumerate() {
        if let Some(o) = p.opposite[r] {
            s2[o] += e;
        }
    }
    (s2, t_upper.to_vec())
}

/// Rewrites a monomial in full `T_ρ` coordinates into the variables of `R`
/// by `T_{−ρ} = −T_ρ`; returns the sign picked up.
pub fn in_r_coordinates(p: &SignedRayPairing, s: &[u32], t: &[u32]) -> (Vec<u32>, Vec<u32>, i32) {
    let mut t2 = t.to_vec();
    let mut sign = 1;
    for (r, o) in p.pairs() {
        let e = t2[o];
        if e > 0 {
            t2[r] += e;
            t2[o] = 0;
            if e % 2 == 1 {
                sign = -sign;
            }
        }
    }
    (s.to_vec(), t2, sign)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiImage {
    /// `(name, exponent)` in full `T_ρ` coordinates, `S` before `T`, by ray.
    pub monomial: Vec<(String, u32)>,
    /// The same monomial in the variables of `R`, and its sign.
    pub r_monomial: Vec<(String, u32)>,
    pub r_sign: i32,
}

fn named(s: &[u32], t: &[u32], t_role: fn(usize) -> VarRole) -> Vec<(String, u32)> {
    let mut out = Vec::new();
    for (r, &e) in s.iter().enumerate() {
        if e > 0 {
            out.push((var_name(VarRole::S(r)), e));
        }
    }
    for (r, &e) in t.iter().enumerate() {
        if e > 0 {
            out.push((var_name(t_role(r)), e));
        }
    }
    out
}

/// `φ̄` on a monomial given by variable names of `R′` (`S_k`, `T^k`).
pub fn phi_bar_image(f: &Fan, p: &SignedRayPairing, monomial: &[(String, u32)]) -> Result<PhiImage> {
    let n = f.num_rays();
    let mut s = vec![0u32; n];
    let mut t = vec![0u32; n];
    for (name, e) in monomial {
        match parse_var_name(name)? {
            VarRole::S(r) if r < n => s[r] += e,
            VarRole::TUpper(r) if r < n => t[r] += e,
            _ => return Err(Error::input(format!("`{name}` is not a variable of R′"))),
        }
    }
    let (s2, t2) = phi_bar(p, &s, &t);
    let (s3, t3, sign) = in_r_coordinates(p, &s2, &t2);
    Ok(PhiImage {
        monomial: named(&s2, &t2, VarRole::T),
        r_monomial: named(&s3, &t3, VarRole::T),
        r_sign: sign,
    })
}
