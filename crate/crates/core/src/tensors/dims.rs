use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache::global_cache;
use super::monomials::{InvariantMonomial, MonomialContext};
use crate::coxring::{cox_presentation_esd, PresentationKind};
use crate::error::{Error, Result};
use crate::fan::{build_exact_sequence, select_sigma1, ExactSequenceData, Fan, SignedRayPairing};
use crate::lattice::{sparse_row, SparseEchelon};

/// `dims[p] = dim S(X)_p` for `p = 0..=p_max`, together with the two counts
/// it is the difference of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub presentation: PresentationKind,
    pub dims: Vec<u64>,
    /// Invariant monomials of each fiber degree.
    pub monomials: Vec<u64>,
    /// Rank of the invariant part of the ideal in each fiber degree.
    pub relation_ranks: Vec<u64>,
}

/// Graded dimensions of the invariant ring of presentation `kind`.
pub fn graded_dims(f: &Fan, kind: PresentationKind, p_max: u32) -> Result<GradedDims> {
    let esd = build_exact_sequence(f)?;
    graded_dims_esd(&esd, &select_sigma1(f), kind, p_max)
}

/// [`graded_dims`] from exact-sequence data, e.g. after a change of basis.
///
/// The invariant part of the ideal in degree `p` is spanned by products of
/// invariant monomials of degree `p − 1` with the relations. Those products
/// preserve the block key `I′ − I − ᶜI`, so ranks are taken block by block.
pub fn graded_dims_esd(esd: &ExactSequenceData, p: &SignedRayPairing, kind: PresentationKind, p_max: u32) -> Result<GradedDims> {
    let ctx = MonomialContext::new(esd, p)?;
    let pres = cox_presentation_esd(esd, p, kind);
    let cache = global_cache();
    let lists: Vec<_> = (0..=p_max)
        .into_par_iter()
        .map(|d| cache.get_or_compute(&ctx, kind, d))
        .collect();

    let mut dims = vec![1u64];
    let mut monomials = vec![lists[0].len() as u64];
    let mut relation_ranks = vec![0u64];
    for d in 1..=p_max as usize {
        let cur = &lists[d];
        let prev = &lists[d - 1];
        let mut blocks: HashMap<Vec<i64>, (Vec<&InvariantMonomial>, Vec<&InvariantMonomial>)> = HashMap::new();
        for m in cur.iter() {
            blocks.entry(ctx.block_key(kind, m)).or_default().0.push(m);
        }
        for m in prev.iter() {
            blocks.entry(ctx.block_key(kind, m)).or_default().1.push(m);
        }
        let blocks: Vec<_> = blocks.into_values().collect();
        let ranks: Vec<Result<usize>> = blocks
            .par_iter()
            .map(|(here, below)| {
                let index: HashMap<(&[u32], &[u32]), usize> = here
                    .iter()
                    .enumerate()
                    .map(|(k, m)| ((m.i_prime.as_slice(), m.i.as_slice()), k))
                    .collect();
                let mut ech = SparseEchelon::new();
                let mut s = vec![0u32; ctx.n_rays];
                let mut t = vec![0u32; ctx.n_rays];
                for m in below {
                    for rel in &pres.relations {
                        let mut terms = Vec::with_capacity(rel.terms.len());
                        for term in &rel.terms {
                            for r in 0..ctx.n_rays {
                                s[r] = m.i_prime[r] + term.s[r];
                                t[r] = m.i[r] + term.t[r];
                            }
                            let k = index.get(&(s.as_slice(), t.as_slice())).ok_or_else(|| {
                                Error::precondition("relation product left the invariant monomials")
                            })?;
                            terms.push((*k, term.coeff.clone()));
                        }
                        ech.insert(sparse_row(terms));
                        if ech.rank() == here.len() {
                            return Ok(ech.rank());
                        }
                    }
                }
                Ok(ech.rank())
            })
            .collect();
        let rank: usize = ranks.into_iter().sum::<Result<usize>>()?;
        monomials.push(cur.len() as u64);
        relation_ranks.push(rank as u64);
        dims.push((cur.len() - rank) as u64);
    }
    Ok(GradedDims {
        presentation: kind,
        dims,
        monomials,
        relation_ranks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub agree: bool,
    pub r: GradedDims,
    pub rprime: GradedDims,
}

/// Graded dimensions from the Cox-ring side `R` and the hypertoric side
/// `R′`; they must coincide.
pub fn presentations_agree(f: &Fan, p_max: u32) -> Result<Agreement> {
    let esd = build_exact_sequence(f)?;
    let p = select_sigma1(f);
    let (r, rprime) = rayon::join(
        || graded_dims_esd(&esd, &p, PresentationKind::R, p_max),
        || graded_dims_esd(&esd, &p, PresentationKind::Rprime, p_max),
    );
    let (r, rprime) = (r?, rprime?);
    Ok(Agreement {
        agree: r.dims == rprime.dims,
        r,
        rprime,
    })
}
