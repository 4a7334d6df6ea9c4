use serde::{Deserialize, Serialize};

use super::dims::graded_dims;
use crate::coxring::PresentationKind;
use crate::error::{Error, Result};
use crate::fan::Fan;

/// Growth of `dim S(X)_p`. `dims[p] ~ c·p^{2n−1}` since `dim 𝒵_X = 2n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub dims: Vec<u64>,
    pub fit_range: (u32, u32),
    /// Least-squares slope of `ln dims[p]` against `ln p` over `fit_range`.
    pub exponent_estimate: f64,
    pub expected_exponent: u32,
}

pub fn bigness_growth_report(f: &Fan, p_max: u32) -> Result<GrowthReport> {
    if p_max < 4 {
        return Err(Error::precondition("p_max must be at least 4"));
    }
    let dims = graded_dims(f, PresentationKind::Rprime, p_max)?.dims;
    let lo = p_max / 2;
    let pts: Vec<(f64, f64)> = (lo..=p_max)
        .map(|p| ((p as f64).ln(), (dims[p as usize].max(1) as f64).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(GrowthReport {
        dims,
        fit_range: (lo, p_max),
        exponent_estimate: sxy / sxx,
        expected_exponent: 2 * f.dim as u32 - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_is_linear() {
        let r = bigness_growth_report(&Fan::projective_space(1), 8).unwrap();
        assert_eq!(r.expected_exponent, 1);
        assert!((r.exponent_estimate - 1.0).abs() < 0.1, "{}", r.exponent_estimate);
    }

    #[test]
    fn small_p_max_rejected() {
        assert!(bigness_growth_report(&Fan::projective_space(1), 3).is_err());
    }
}
