use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symtens::coxring::PresentationKind;
use symtens::fan::{build_exact_sequence, builtin, library, select_sigma1, Fan};
use symtens::hypertoric::{
    central_fiber_components, in_central_fiber, is_generic, is_semistable, is_unimodular, moment_eval,
    pattern_semistable, perturb_theta, torus_act, HypertoricProblem, PhasePoint, SupportPattern,
};
use symtens::lattice::{integer_kernel, smith_normal_form, IntMatrix};
use symtens::tensors::{
    compositions, determinantal_coordinates, determinantal_membership, exceptional_ray, generator_report,
    graded_dims, graded_dims_esd, invariant_monomials_of_degree, kernel_criterion, moment_zero_point,
    nu_eval_blowup, nu_tilde, rank_at_most_one, springer_eval_pn, trace, weight_criterion, CriterionChecker,
    GeneratorReport, InvariantMonomial,
};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn random_rat(rng: &mut impl Rng) -> BigRational {
    BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
}

fn random_nonzero(rng: &mut impl Rng) -> BigRational {
    loop {
        let q = random_rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

/// Product of random elementary integer matrices.
fn unimodular(size: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..size, 0..size, -2i64..=2, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut g = IntMatrix::identity(size);
        for (i, j, k, swap) in ops {
            let mut e = IntMatrix::identity(size);
            if swap {
                e.set(i, i, BigInt::zero());
                e.set(j, j, BigInt::zero());
                e.set(i, j, BigInt::one());
                e.set(j, i, BigInt::one());
                if i == j {
                    e.set(i, i, -BigInt::one());
                }
            } else if i != j {
                e.set(i, j, k.into());
            }
            g = e.mul(&g).unwrap();
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_identity(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let k = integer_kernel(&m);
        prop_assert_eq!(k.cols(), m.cols() - s.rank());
        prop_assert!(m.mul(&k).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn dims_invariant_under_basis_change(g in unimodular(2), which in 0usize..4) {
        let f = builtin(["blowup-p2", "p1xp1", "hirzebruch-1", "hirzebruch-2"][which]).unwrap();
        let esd = build_exact_sequence(&f).unwrap();
        let p = select_sigma1(&f);
        let moved = esd.change_basis(&g).unwrap();
        for kind in [PresentationKind::R, PresentationKind::Rprime] {
            prop_assert_eq!(
                graded_dims_esd(&esd, &p, kind, 3).unwrap().dims,
                graded_dims_esd(&moved, &p, kind, 3).unwrap().dims
            );
        }
    }

    #[test]
    fn unimodularity_invariant_under_basis_change(g in unimodular(2), which in 0usize..5) {
        let f = builtin(["blowup-p2", "hirzebruch-1", "p1xp1", "hirzebruch-2", "hirzebruch-3"][which]).unwrap();
        let a = build_exact_sequence(&f).unwrap().a;
        prop_assert_eq!(is_unimodular(&a).unwrap(), is_unimodular(&g.mul(&a).unwrap()).unwrap());
    }

    #[test]
    fn dims_invariant_under_ray_reordering(seed in any::<u64>(), which in 0usize..5) {
        let f = builtin(["p2", "blowup-p2", "blowup2-p2", "p1xp1", "hirzebruch-2"][which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..f.num_rays()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let g = f.permuted(&perm).unwrap();
        for kind in [PresentationKind::R, PresentationKind::Rprime] {
            prop_assert_eq!(graded_dims(&f, kind, 3).unwrap().dims, graded_dims(&g, kind, 3).unwrap().dims);
        }
    }
}

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

#[test]
fn kernel_and_weight_criteria_agree_exhaustively() {
    for (name, f) in library() {
        let esd = build_exact_sequence(&f).unwrap();
        let p = select_sigma1(&f);
        let n = f.num_rays();
        let primes = boxed(n, 3);
        for kind in PresentationKind::ALL {
            let chk = CriterionChecker::new(&esd, &p, kind).unwrap();
            let idx = kind.t_indices(&p);
            let mut hits = 0u64;
            for sub in boxed(idx.len(), 3) {
                let mut i = vec![0u32; n];
                for (k, &r) in idx.iter().enumerate() {
                    i[r] = sub[k];
                }
                for ip in &primes {
                    let k = chk.kernel(ip, &i);
                    assert_eq!(k, chk.weight(ip, &i), "{name} {kind} {ip:?} {i:?}");
                    hits += k as u64;
                }
            }
            assert!(hits > 0);
        }
    }
}

#[test]
fn big_integer_criteria_match_machine_versions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, f) in library() {
        let esd = build_exact_sequence(&f).unwrap();
        let p = select_sigma1(&f);
        let n = f.num_rays();
        for kind in PresentationKind::ALL {
            let chk = CriterionChecker::new(&esd, &p, kind).unwrap();
            for _ in 0..300 {
                let ip: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                let i: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
                assert_eq!(kernel_criterion(&esd, &p, kind, &ip, &i), chk.kernel(&ip, &i), "{name}");
                assert_eq!(weight_criterion(&esd, &p, kind, &ip, &i), chk.weight(&ip, &i), "{name}");
            }
            for d in 0..=2 {
                for m in invariant_monomials_of_degree(&esd, &p, kind, d).unwrap() {
                    assert!(kernel_criterion(&esd, &p, kind, &m.i_prime, &m.i));
                    assert!(weight_criterion(&esd, &p, kind, &m.i_prime, &m.i));
                }
            }
        }
    }
}

/// Enumerated monomials are exactly the invariant ones in a box large
/// enough to contain them.
#[test]
fn enumeration_is_complete_in_a_box() {
    for name in ["p1", "p2", "blowup-p2", "p1xp1", "hirzebruch-1", "hirzebruch-2"] {
        let f = builtin(name).unwrap();
        let esd = build_exact_sequence(&f).unwrap();
        let p = select_sigma1(&f);
        let n = f.num_rays();
        for kind in PresentationKind::ALL {
            let chk = CriterionChecker::new(&esd, &p, kind).unwrap();
            let idx = kind.t_indices(&p);
            for d in 0..=2u32 {
                let mut brute: Vec<InvariantMonomial> = Vec::new();
                for comp in compositions(d, idx.len()) {
                    let mut i = vec![0u32; n];
                    for (k, &r) in idx.iter().enumerate() {
                        i[r] = comp[k];
                    }
                    for ip in boxed(n, 3 * d + 2) {
                        if chk.kernel(&ip, &i) {
                            brute.push(InvariantMonomial::new(ip, i.clone()));
                        }
                    }
                }
                let mut got = invariant_monomials_of_degree(&esd, &p, kind, d).unwrap();
                brute.sort_by(|a, b| a.i.cmp(&b.i).then_with(|| a.i_prime.cmp(&b.i_prime)));
                got.sort_by(|a, b| a.i.cmp(&b.i).then_with(|| a.i_prime.cmp(&b.i_prime)));
                assert_eq!(got, brute, "{name} {kind} degree {d}");
            }
        }
    }
}

fn certified_report(f: &Fan) -> GeneratorReport {
    let esd = build_exact_sequence(f).unwrap();
    let bound = symtens::tensors::certified_degree_bound(&esd).unwrap();
    generator_report(&esd, &select_sigma1(f), bound).unwrap()
}

#[test]
fn generators_are_minimal_and_generate() {
    for (name, f) in library() {
        let esd = build_exact_sequence(&f).unwrap();
        if !is_unimodular(&esd.a).unwrap() {
            continue;
        }
        let r = certified_report(&f);
        assert!(r.certified_complete, "{name}");
        let gens: Vec<&InvariantMonomial> = r.monomials().collect();
        for g in &gens {
            for h in &gens {
                let prod = g.mul(h);
                assert!(!gens.contains(&&prod), "{name}: {g:?} * {h:?} is a generator");
            }
        }
        let p = select_sigma1(&f);
        for d in 1..=3 {
            for m in invariant_monomials_of_degree(&esd, &p, PresentationKind::Rprime, d).unwrap() {
                assert!(gens.iter().any(|g| g.divides(&m)), "{name}: {m:?} has no generator factor");
            }
        }
    }
}

#[test]
fn presentations_agree_on_reordered_fans() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["blowup-p2", "blowup2-p2", "p1xp1", "hirzebruch-1"] {
        let f = builtin(name).unwrap();
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..f.num_rays()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let g = f.permuted(&perm).unwrap();
            assert!(symtens::tensors::presentations_agree(&g, 3).unwrap().agree, "{name} {perm:?}");
        }
    }
}

fn random_point(rng: &mut impl Rng, n: usize, zero_prob: f64) -> PhasePoint {
    let coord = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(zero_prob) {
            BigRational::zero()
        } else {
            random_nonzero(rng)
        }
    };
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    PhasePoint { z: (0..n).map(|_| coord(&mut r)).collect(), w: (0..n).map(|_| coord(&mut r)).collect() }
}

#[test]
fn moment_map_is_torus_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["p2", "blowup-p2", "blowup-p3", "blowup2-p3", "hirzebruch-2"] {
        let f = builtin(name).unwrap();
        let h = HypertoricProblem::from_fan(&f, vec![rat(0); f.num_rays() - f.dim]).unwrap();
        for _ in 0..50 {
            let pt = random_point(&mut rng, f.num_rays(), 0.2);
            let t: Vec<BigRational> = (0..h.rank()).map(|_| random_nonzero(&mut rng)).collect();
            let moved = torus_act(&h, &t, &pt).unwrap();
            assert_eq!(moment_eval(&h, &pt).unwrap(), moment_eval(&h, &moved).unwrap());
            assert_eq!(is_semistable(&h, &pt).unwrap(), is_semistable(&h, &moved).unwrap());
        }
    }
}

#[test]
fn semistability_depends_only_on_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["blowup-p2", "blowup2-p2", "hirzebruch-1"] {
        let f = builtin(name).unwrap();
        for _ in 0..40 {
            let theta: Vec<BigRational> = (0..f.num_rays() - f.dim).map(|_| random_rat(&mut rng)).collect();
            let h = HypertoricProblem::from_fan(&f, theta).unwrap();
            let pt = random_point(&mut rng, f.num_rays(), 0.5);
            let same = PhasePoint {
                z: pt.z.iter().map(|x| if x.is_zero() { x.clone() } else { random_nonzero(&mut rng) }).collect(),
                w: pt.w.iter().map(|x| if x.is_zero() { x.clone() } else { random_nonzero(&mut rng) }).collect(),
            };
            assert_eq!(is_semistable(&h, &pt).unwrap(), is_semistable(&h, &same).unwrap());
        }
    }
}

fn hypersurface_point(rng: &mut impl Rng, n: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let x: Vec<BigRational> = (0..=n).map(|i| if i == 0 { random_nonzero(rng) } else { random_rat(rng) }).collect();
    let mut y: Vec<BigRational> = (0..=n).map(|_| random_rat(rng)).collect();
    let rest: BigRational = (1..=n).map(|i| &x[i] * &y[i]).sum();
    y[0] = -rest / &x[0];
    (x, y)
}

#[test]
fn springer_image_is_traceless_rank_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=4 {
        for _ in 0..100 {
            let (x, y) = hypersurface_point(&mut rng, n);
            let z = springer_eval_pn(n, &x, &y).unwrap();
            assert!(trace(&z).is_zero());
            assert!(rank_at_most_one(&z));
            assert!(determinantal_membership(n, n + 1, &z).unwrap());
        }
    }
}

#[test]
fn nu_commutes_with_beta() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 2..=4 {
        let f = Fan::blowup_projective_space(n, &[n]).unwrap();
        let h = HypertoricProblem::from_fan(&f, vec![rat(1), rat(-1)]).unwrap();
        let theta = perturb_theta(h.a(), h.theta());
        for _ in 0..50 {
            let (x, y) = hypersurface_point(&mut rng, n);
            let z = nu_eval_blowup(n, &springer_eval_pn(n, &x, &y).unwrap()).unwrap();
            let (xs, ys) = nu_tilde(n, &x, &y).unwrap();
            let lifted = PhasePoint { z: xs.clone(), w: ys.clone() };
            assert!(moment_eval(&h, &lifted).unwrap().iter().all(Zero::is_zero));
            assert!(pattern_semistable(&h, &theta, &lifted.support()).unwrap());
            assert_eq!(z, determinantal_coordinates(n, n, &xs, &ys).unwrap());
            assert!(determinantal_membership(n, n, &z).unwrap());
        }
    }
}

/// Exponents `(S, T^ρ)` of the entry `z_ij` of the determinantal model.
fn entry_monomial(n: usize, k: usize, i: usize, j: usize) -> InvariantMonomial {
    let rays = 2 * n + 2 - k;
    let mut s = vec![0u32; rays];
    let mut t = vec![0u32; rays];
    if i == j {
        s[i] += 1;
        t[i] += 1;
    } else {
        s[i] += 1;
        if i >= k {
            t[exceptional_ray(n, k, i)] += 1;
        }
        t[j] += 1;
        if j >= k {
            s[exceptional_ray(n, k, j)] += 1;
        }
    }
    InvariantMonomial::new(s, t)
}

#[test]
fn determinantal_models_contain_sampled_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for (n, k) in [(2, 2), (3, 3), (3, 2), (2, 1), (3, 1)] {
        let f = Fan::blowup_projective_space(n, &(k..=n).collect::<Vec<_>>()).unwrap();
        let esd = build_exact_sequence(&f).unwrap();
        let p = select_sigma1(&f);
        for i in 0..=n {
            for j in 0..=n {
                let m = entry_monomial(n, k, i, j);
                assert!(weight_criterion(&esd, &p, PresentationKind::Rprime, &m.i_prime, &m.i), "({n},{k}) z_{i}{j}");
            }
        }
        for _ in 0..30 {
            let x: Vec<BigRational> = (0..f.num_rays()).map(|_| random_nonzero(&mut rng)).collect();
            let m: Vec<BigRational> = (0..n).map(|_| random_rat(&mut rng)).collect();
            let y = moment_zero_point(&f, &x, &m).unwrap();
            let z = determinantal_coordinates(n, k, &x, &y).unwrap();
            assert!(determinantal_membership(n, k, &z).unwrap(), "({n},{k})");
        }
    }
}

fn random_in_support(rng: &mut impl Rng, n: usize, p: &SupportPattern) -> PhasePoint {
    let z = (0..n).map(|i| if p.z_support.contains(&i) { random_nonzero(rng) } else { BigRational::zero() }).collect();
    let w = (0..n).map(|i| if p.w_support.contains(&i) { random_nonzero(rng) } else { BigRational::zero() }).collect();
    PhasePoint { z, w }
}

#[test]
fn central_fiber_components_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for name in ["p2", "p3", "blowup-p2", "blowup-p3", "blowup2-p2", "blowup3-p2", "p1xp1", "hirzebruch-1"] {
        let f = builtin(name).unwrap();
        let gens = certified_report(&f);
        for _ in 0..4 {
            let theta: Vec<BigRational> = (0..f.num_rays() - f.dim).map(|_| random_rat(&mut rng)).collect();
            let h = HypertoricProblem::from_fan(&f, theta).unwrap();
            let r = central_fiber_components(&h, &gens).unwrap();
            let hp = h.with_theta(r.theta_used.clone()).unwrap();
            assert!(is_generic(&hp).generic);
            let pats: Vec<SupportPattern> = r
                .components
                .iter()
                .map(|c| SupportPattern { z_support: c.z_support.clone(), w_support: c.w_support.clone() })
                .collect();
            for (a, pa) in pats.iter().enumerate() {
                for (b, pb) in pats.iter().enumerate() {
                    assert!(a == b || !pa.is_subset_of(pb), "{name}: nested patterns");
                }
                let pt = random_in_support(&mut rng, f.num_rays(), pa);
                assert!(in_central_fiber(&h, &gens, &r.theta_used, &pt).unwrap(), "{name}: {pa:?}");
            }
            // Points of the fiber with random supports lie in a returned pattern.
            for _ in 0..200 {
                let pt = random_point(&mut rng, f.num_rays(), 0.6);
                if in_central_fiber(&h, &gens, &r.theta_used, &pt).unwrap() {
                    let s = pt.support();
                    assert!(pats.iter().any(|p| s.is_subset_of(p)), "{name}: {s:?} uncovered");
                }
            }
        }
    }
}

#[test]
fn zero_section_of_projective_space() {
    for n in 1..=4 {
        let f = Fan::projective_space(n);
        let h = HypertoricProblem::from_fan(&f, vec![rat(1)]).unwrap();
        let r = central_fiber_components(&h, &certified_report(&f)).unwrap();
        assert!(!r.perturbed);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].z_support, (0..=n).collect::<Vec<_>>());
        assert_eq!(r.components[0].dim, n);
        // The opposite chamber flops the zero section to the fiber side.
        let neg = central_fiber_components(&h.with_theta(vec![rat(-1)]).unwrap(), &certified_report(&f)).unwrap();
        assert_eq!(neg.components.len(), 1);
        assert_eq!(neg.components[0].w_support, (0..=n).collect::<Vec<_>>());
    }
}
