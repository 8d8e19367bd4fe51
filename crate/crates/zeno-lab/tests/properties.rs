use proptest::prelude::*;

use zeno_lab::bounds::{power_bound_check, power_bound_from_mu0};
use zeno_lab::experiment::random_cycle;
use zeno_lab::io::fmt_f64;
use zeno_lab::linalg::{c64, expm, identity, kron, op_norm, unvec, vec, CMat};
use zeno_lab::matfunc::{build_ad, f_of_ad, f_of_matrix, primary_log, CutSpec, GOfAd};
use zeno_lab::random;
use zeno_lab::spectral::decompose_default;
use zeno_lab::superop::{is_cptp_default, superop_exp, CpVerdict, SuperOperator};
use zeno_lab::zeno::{hermitian_intersection, zeno_generator};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn rel(a: &CMat, b: &CMat) -> f64 {
    op_norm(&(a - b)) / op_norm(b).max(1.0)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn sandwich_matches_kron(seed in any::<u64>(), d in 1usize..4) {
        let mut rng = random::rng(seed);
        let (a, b, x) = (random::ginibre(&mut rng, d, d), random::ginibre(&mut rng, d, d), random::ginibre(&mut rng, d, d));
        let lhs = vec(&(&a * &x * &b));
        let rhs = kron(&b.transpose(), &a) * vec(&x);
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + op_norm(&a) * op_norm(&b) * op_norm(&x)));
        let s = SuperOperator::sandwich(&a, &b);
        prop_assert!(rel(&s.apply(&x), &(&a * &x * &b)) < 1e-12);
    }

    #[test]
    fn random_channels_are_cptp_and_bounded(seed in any::<u64>(), d in 1usize..4) {
        let e = random::channel(&mut random::rng(seed), d).unwrap();
        prop_assert_eq!(is_cptp_default(&e), CpVerdict::Cptp);
        prop_assert!(op_norm(e.matrix()) <= (d as f64).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn gkls_semigroup_is_cptp(seed in any::<u64>(), d in 1usize..4, t in 0.0f64..3.0) {
        let l = random::gkls(&mut random::rng(seed), d, 2, 0.7).unwrap();
        prop_assert_eq!(is_cptp_default(&superop_exp(&l, t).unwrap()), CpVerdict::Cptp);
    }

    #[test]
    fn spectral_projections_resolve_identity(seed in any::<u64>(), d in 1usize..4) {
        let e = random::channel(&mut random::rng(seed), d).unwrap();
        let dec = decompose_default(e.matrix()).unwrap();
        let n = d * d;
        let sum = dec.clusters.iter().fold(CMat::zeros(n, n), |acc, c| acc + &c.projection);
        prop_assert!(rel(&sum, &identity(n)) < 1e-7);
        for (i, ci) in dec.clusters.iter().enumerate() {
            for (j, cj) in dec.clusters.iter().enumerate() {
                let prod = &ci.projection * &cj.projection;
                let target = if i == j { ci.projection.clone() } else { CMat::zeros(n, n) };
                prop_assert!(op_norm(&(prod - target)) < 1e-6 * op_norm(&ci.projection).max(1.0));
            }
        }
        prop_assert!(rel(&dec.reconstruct(), e.matrix()) < 1e-8);
        prop_assert!(dec.max_peripheral_nilpotent() < 1e-7);
        let inv_fwd = &dec.peripheral_inverse * &dec.peripheral_part;
        prop_assert!(rel(&inv_fwd, &dec.peripheral_projection) < 1e-8);
        prop_assert!(dec.mu0 < 1.0);
    }

    #[test]
    fn unitary_channels_are_fully_peripheral(seed in any::<u64>(), d in 1usize..4) {
        let e = random::unitary_channel(&mut random::rng(seed), d);
        let dec = decompose_default(e.matrix()).unwrap();
        prop_assert!(rel(&dec.peripheral_projection, &identity(d * d)) < 1e-8);
        prop_assert!(rel(&dec.peripheral_part, e.matrix()) < 1e-8);
    }

    #[test]
    fn primary_log_inverts_exp(seed in any::<u64>(), d in 1usize..5) {
        let a = random::normal(&mut random::rng(seed), d, 1.0);
        let e = expm(&a);
        let log = primary_log(&e, CutSpec::Auto).unwrap();
        prop_assert!(rel(&expm(&log.matrix), &e) < 1e-10);
        // a primary function commutes with its argument
        prop_assert!(op_norm(&(&log.matrix * &e - &e * &log.matrix)) < 1e-9 * op_norm(&e).max(1.0));
    }

    #[test]
    fn block_exponential_matches_direct_f(seed in any::<u64>(), d in 1usize..4) {
        let a = random::scaled(&mut random::rng(seed), d, 1.0);
        let direct = f_of_matrix(&build_ad(&a).ad_matrix);
        prop_assert!(rel(&f_of_ad(&a), &direct) < 1e-10);
    }

    #[test]
    fn g_inverts_f(seed in any::<u64>(), d in 1usize..4) {
        let mut rng = random::rng(seed);
        let a = random::scaled(&mut rng, d, 1.0);
        let l = random::ginibre(&mut rng, d, d);
        let g = GOfAd::new(&a).unwrap();
        let gl = g.apply(&l).unwrap();
        let back = unvec(&(g.f_matrix() * vec(&gl)), d);
        prop_assert!(rel(&back, &l) < 1e-10);
    }

    #[test]
    fn zeno_generator_is_block_diagonal(seed in 1u64..10_000) {
        let cycle = random_cycle(seed).unwrap();
        let zl = zeno_generator(&cycle).unwrap();
        let per: Vec<_> = zl.decomposition.peripheral().collect();
        for (i, a) in per.iter().enumerate() {
            for (j, b) in per.iter().enumerate() {
                if i != j {
                    prop_assert!(op_norm(&(&a.projection * &zl.lz * &b.projection)) < 1e-9);
                }
            }
        }
        let p = zl.peripheral_projection();
        prop_assert!(rel(&(p * &zl.lz * p), &zl.lz) < 1e-9);
    }

    #[test]
    fn power_bound_dominates_random_channels(seed in any::<u64>(), d in 2usize..4) {
        let e = random::channel(&mut random::rng(seed), d).unwrap();
        let dec = decompose_default(e.matrix()).unwrap();
        let mu = 0.5 * (1.0 + dec.mu0);
        let pb = power_bound_from_mu0(d, dec.mu0, mu).unwrap();
        let p = &dec.peripheral_projection;
        for r in power_bound_check(&pb, e.matrix(), p, 60) {
            prop_assert!(r.holds, "{} violated: {} > {}", r.name, r.measured, r.analytic);
        }
    }

    #[test]
    fn nested_projections_intersect_to_smaller(seed in any::<u64>(), d in 2usize..5, k in 1usize..3) {
        let u = random::unitary(&mut random::rng(seed), d);
        let proj = |rank: usize| {
            let mut diag = CMat::zeros(d, d);
            for i in 0..rank {
                diag[(i, i)] = c64(1.0, 0.0);
            }
            &u * diag * u.adjoint()
        };
        let small = k.min(d - 1);
        let inter = hermitian_intersection(&[proj(d), proj(small), proj(d)]).unwrap();
        prop_assert!(rel(&inter.projection, &proj(small)) < 1e-9);
    }

    #[test]
    fn csv_floats_round_trip(x in any::<f64>()) {
        let s = fmt_f64(x);
        let back: f64 = s.parse().unwrap();
        if x.is_nan() {
            prop_assert!(back.is_nan());
        } else {
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
