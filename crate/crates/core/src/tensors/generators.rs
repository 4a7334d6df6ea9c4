use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::cache::DiskCache;
use super::monomials::{InvariantMonomial, MonomialContext};
use crate::coxring::PresentationKind;
use crate::error::{Error, Result};
use crate::fan::{build_exact_sequence, select_sigma1, ExactSequenceData, Fan, SignedRayPairing};
use crate::lattice::{sparse_row, SparseEchelon};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub monomial: InvariantMonomial,
    /// Degree-1 generator lying in the span of earlier kept generators and
    /// the moment relations.
    pub quotient_redundant: bool,
}

/// Minimal generators of the semigroup of invariant monomials of `R′`
/// (`S_ρ`, `T^ρ` coordinates) up to a fiber degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub generators: Vec<GeneratorEntry>,
    pub degree_bound_used: u32,
    /// Every semigroup generator has fiber degree at most this.
    pub certification_bound: u64,
    pub certified_complete: bool,
    pub unimodular: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

impl GeneratorReport {
    pub fn monomials(&self) -> impl Iterator<Item = &InvariantMonomial> {
        self.generators.iter().map(|g| &g.monomial)
    }
}

/// A-priori bound on the fiber degree of semigroup generators of
/// `{(I′, I) ≥ 0 : A·(I′ − I) = 0}`.
///
/// Generators are Graver elements of `[A | −A]`. For unimodular `A` these
/// are circuits with entries in `{0, ±1}` and support at most `N − n + 1`,
/// at least one entry in `I′`; so fiber degree `≤ N − n`. Otherwise the
/// 1-norm bound `(2N − r)(r + 1)·Δ` applies, `r = N − n`, `Δ` the largest
/// maximal minor.
pub fn certification_bound(esd: &ExactSequenceData) -> (u64, bool) {
    let n_rays = esd.num_rays() as u64;
    let r = esd.pic_rank as u64;
    let delta = esd.a.max_abs_maximal_minor();
    if delta.is_one() {
        (r, true)
    } else {
        let d = delta.to_u64().unwrap_or(u64::MAX);
        ((2 * n_rays - r).saturating_mul(r + 1).saturating_mul(d), false)
    }
}

/// Graded Hilbert-basis computation: a monomial is a generator iff no
/// generator of smaller fiber degree divides it.
pub fn generator_report(esd: &ExactSequenceData, p: &SignedRayPairing, degree_bound: u32) -> Result<GeneratorReport> {
    if degree_bound == 0 {
        return Err(Error::precondition("degree bound must be at least 1"));
    }
    let ctx = MonomialContext::new(esd, p)?;
    let kind = PresentationKind::Rprime;
    let mut gens: Vec<InvariantMonomial> = Vec::new();
    for d in 1..=degree_bound {
        let level = ctx.enumerate(kind, d);
        let lower = gens.len();
        for m in level {
            if !gens[..lower].iter().any(|g| g.divides(&m)) {
                gens.push(m);
            }
        }
    }
    gens.sort_by(|a, b| a.canonical_cmp(b));

    // Degree-1 quotient redundancy, greedily in canonical order.
    let deg1 = ctx.enumerate(kind, 1);
    let index: HashMap<&InvariantMonomial, usize> = deg1.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut ech = SparseEchelon::new();
    for row in esd.a.to_rows() {
        let terms = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(r, c)| {
                let mut s = vec![0; ctx.n_rays];
                s[r] = 1;
                let m = InvariantMonomial::new(s.clone(), s);
                (index[&m], BigRational::from_integer(c.clone()))
            })
            .collect();
        ech.insert(sparse_row(terms));
    }
    let mut generators = Vec::with_capacity(gens.len());
    for g in gens {
        let redundant = if g.fiber_deg == 1 {
            let row = sparse_row(vec![(index[&g], BigRational::one())]);
            !ech.insert(row)
        } else {
            false
        };
        generators.push(GeneratorEntry {
            name: g.name(kind),
            monomial: g,
            quotient_redundant: redundant,
        });
    }

    let (bound, unimodular) = certification_bound(esd);
    let certified = u64::from(degree_bound) >= bound;
    let warning = (!certified).then(|| {
        format!("generator list truncated at fiber degree {degree_bound}; completeness is only certified from degree {bound}")
    });
    Ok(GeneratorReport {
        generators,
        degree_bound_used: degree_bound,
        certification_bound: bound,
        certified_complete: certified,
        unimodular,
        warning,
    })
}

/// [`generator_report`] for a fan, memoized on disk under a hash of
/// `(rays, max_cones, degree_bound)`.
pub fn generator_report_cached(f: &Fan, degree_bound: u32, cache: Option<&DiskCache>) -> Result<GeneratorReport> {
    let compute = || -> Result<GeneratorReport> {
        let esd = build_exact_sequence(f)?;
        generator_report(&esd, &select_sigma1(f), degree_bound)
    };
    let Some(cache) = cache else { return compute() };
    let hash = DiskCache::key_hash(&(&f.rays, &f.max_cones, degree_bound))?;
    if let Some(r) = cache.load::<GeneratorReport>("generators", &hash) {
        return Ok(r);
    }
    let r = compute()?;
    cache.store("generators", &hash, &r)?;
    Ok(r)
}

/// Fiber-degree bound as an integer, for callers that want to request a
/// certified report directly.
pub fn certified_degree_bound(esd: &ExactSequenceData) -> Option<u32> {
    let (b, _) = certification_bound(esd);
    u32::try_from(b).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(f: &Fan, bound: u32) -> GeneratorReport {
        generator_report(&build_exact_sequence(f).unwrap(), &select_sigma1(f), bound).unwrap()
    }

    #[test]
    fn p1_generators() {
        let r = report(&Fan::projective_space(1), 1);
        let names: Vec<&str> = r.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["S1*T^1", "S2*T^1", "S1*T^2", "S2*T^2"]);
        assert!(r.certified_complete);
    }

    #[test]
    fn non_unimodular_is_not_certified_at_low_bound() {
        let r = report(&Fan::hirzebruch(2), 2);
        assert!(!r.unimodular);
        assert!(!r.certified_complete);
        assert!(r.warning.is_some());
    }
}
