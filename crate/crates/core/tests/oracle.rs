//! Graded dimensions checked against the brute-force oracle in `common`.

mod common;

use common::{a_blowup, a_pn, oracle_dims};
use symtens::coxring::PresentationKind;
use symtens::fan::Fan;
use symtens::tensors::graded_dims;

#[test]
fn oracle_matches_frozen_values() {
    // For A = [1..1] the S-degree equals the fiber degree; for the blow-up
    // every S exponent is at most 2p.
    assert_eq!(oracle_dims(&a_pn(1), 3, |p| p), vec![1, 3, 5, 7]);
    assert_eq!(oracle_dims(&a_pn(2), 3, |p| p), vec![1, 8, 27, 64]);
    assert_eq!(oracle_dims(&a_blowup(2), 3, |p| 2 * p), vec![1, 6, 20, 46]);
}

#[test]
fn graded_dims_match_oracle() {
    let cases = [
        (Fan::projective_space(1), vec![1, 3, 5, 7]),
        (Fan::projective_space(2), vec![1, 8, 27, 64]),
        (Fan::blowup_projective_space(2, &[2]).unwrap(), vec![1, 6, 20, 46]),
    ];
    for (f, want) in cases {
        for kind in [PresentationKind::R, PresentationKind::Rprime] {
            assert_eq!(graded_dims(&f, kind, 3).unwrap().dims, want, "{kind} on {f:?}");
        }
    }
}

/// `S(ℙⁿ)_p` is the degree-`p` part of the coordinate ring of the minimal
/// nilpotent orbit closure in `sl_{n+1}`: `C(p+n, n)² − C(p+n−1, n)²`.
#[test]
fn pn_closed_form() {
    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for n in 1..=3u64 {
        let f = Fan::projective_space(n as usize);
        let dims = graded_dims(&f, PresentationKind::Rprime, 4).unwrap().dims;
        for (p, &d) in dims.iter().enumerate() {
            let p = p as u64;
            let want = binom(p + n, n).pow(2) - if p == 0 { 0 } else { binom(p + n - 1, n).pow(2) };
            assert_eq!(d, want, "n={n} p={p}");
        }
    }
}
