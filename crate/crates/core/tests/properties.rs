//! Randomized invariants of the CGF, the engine, the closed forms and the oracle.

use proptest::prelude::*;
use subgauss::closed_forms::{
    asymmetric_three_mass_proxy, bernoulli_proxy, symmetric_three_mass_proxy, ThreeMassParams,
};
use subgauss::oracle::{bisect_optimal_proxy, is_variance_proxy, GridConfig};
use subgauss::{optimal_proxy_general, DiscreteDistribution, Method, SolverConfig};

fn distribution() -> impl Strategy<Value = DiscreteDistribution> {
    (2usize..=6)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-10.0f64..10.0, n),
                prop::collection::vec(0.01f64..1.0, n),
            )
        })
        .prop_filter_map("atoms collapsed to one point", |(atoms, weights)| {
            DiscreteDistribution::new(&atoms, &weights)
                .ok()
                .filter(|d| d.len() >= 2 && d.range() > 1e-3)
        })
}

fn three_mass_params() -> impl Strategy<Value = (f64, f64)> {
    (0.005f64..0.99, 0.005f64..0.99).prop_filter("p1 + p2 < 1", |(a, b)| a + b < 0.995)
}

fn general(d: &DiscreteDistribution) -> f64 {
    optimal_proxy_general(d, &SolverConfig::default())
        .unwrap()
        .sigma2_opt
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cgf_second_derivative_is_a_variance(d in distribution(), t in -3.0f64..3.0) {
        let lambda = t / d.range() * 10.0;
        let c = d.cgf_at(lambda).unwrap();
        prop_assert!(c.m2 >= 0.0);
        prop_assert!(c.m2 <= 0.25 * d.range() * d.range() * (1.0 + 1e-12));
    }

    #[test]
    fn cgf_derivatives_match_finite_differences(d in distribution(), t in -3.0f64..3.0) {
        let lambda = t / d.range();
        let step = 1e-4 / d.range();
        let at = |l: f64| d.cgf_at(l).unwrap();
        let c = at(lambda);
        let fd1 = (at(lambda + step).m0 - at(lambda - step).m0) / (2.0 * step);
        let fd2 = (at(lambda + step).m1 - at(lambda - step).m1) / (2.0 * step);
        let scale = d.range();
        prop_assert!((fd1 - c.m1).abs() <= 1e-6 * scale, "{fd1} vs {}", c.m1);
        prop_assert!((fd2 - c.m2).abs() <= 1e-6 * scale * scale, "{fd2} vs {}", c.m2);
    }

    #[test]
    fn cgf_is_squeezed_between_mean_shift_bounds(d in distribution(), t in -5.0f64..5.0) {
        // (x_min − μ)λ ≤ M(λ) ≤ (x_max − μ)λ for λ ≥ 0, reversed for λ < 0
        let lambda = t / d.range() * 10.0;
        let m0 = d.cgf_at(lambda).unwrap().m0;
        let a = (d.x_min() - d.mean()) * lambda;
        let b = (d.x_max() - d.mean()) * lambda;
        let slack = 1e-9 * (1.0 + a.abs().max(b.abs()));
        prop_assert!(m0 >= a.min(b) - slack && m0 <= a.max(b) + slack);
        prop_assert!(m0 >= -1e-15, "Jensen: M ≥ 0, got {m0}");
    }

    #[test]
    fn uniform_tilted_variance_decreases_for_positive_tilt(n in 2u32..30, t in 0.0f64..4.0) {
        let d = DiscreteDistribution::uniform(n).unwrap();
        let m2 = |l: f64| d.cgf_at(l).unwrap().m2;
        prop_assert!(m2(t + 0.01) <= m2(t) * (1.0 + 1e-12));
    }

    #[test]
    fn affine_transform_round_trips(d in distribution(), a in 0.1f64..5.0, neg in any::<bool>(), b in -20.0f64..20.0) {
        let a = if neg { -a } else { a };
        let t = d.affine_transform(a, b).unwrap();
        prop_assert!((t.mean() - (a * d.mean() + b)).abs() <= 1e-9 * (1.0 + t.mean().abs()));
        prop_assert!((t.variance() - a * a * d.variance()).abs() <= 1e-9 * t.variance());
        let back = t.affine_transform(1.0 / a, -b / a).unwrap();
        prop_assert_eq!(back.len(), d.len());
        for (x, y) in back.atoms().iter().zip(d.atoms()) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn engine_result_invariants(d in distribution()) {
        let r = optimal_proxy_general(&d, &SolverConfig::default()).unwrap();
        prop_assert_eq!(r.method, Method::GeneralEngine);
        prop_assert!(r.sigma2_opt >= r.variance);
        prop_assert!(r.sigma2_opt <= 0.25 * d.range() * d.range() * (1.0 + 1e-9));
        let best = r.local_minima().map(|c| c.s_c).fold(r.variance, f64::max);
        prop_assert_eq!(r.sigma2_opt, best);
        prop_assert_eq!(r.strict, r.sigma2_opt <= r.variance * (1.0 + 1e-9));
        let eps = SolverConfig::default().exclusion_radius(&d);
        for c in &r.candidates {
            prop_assert!(c.lambda_c.abs() > eps);
            let m1 = d.cgf_at(c.lambda_c).unwrap().m1;
            prop_assert!((c.s_c - m1 / c.lambda_c).abs() <= 1e-9 * c.s_c.abs());
        }
    }

    #[test]
    fn engine_is_scale_and_shift_equivariant(d in distribution(), a in 0.2f64..5.0, b in -20.0f64..20.0) {
        let base = general(&d);
        let shifted = general(&d.affine_transform(a, b).unwrap());
        prop_assert!((shifted - a * a * base).abs() <= 1e-8 * shifted);
        let reflected = general(&d.affine_transform(-1.0, 0.0).unwrap());
        prop_assert!((reflected - base).abs() <= 1e-8 * base);
    }

    #[test]
    fn hoeffding_cap_always_verifies(d in distribution()) {
        let cap = 0.25 * d.range() * d.range();
        prop_assert!(is_variance_proxy(&d, cap, &GridConfig::default()).unwrap().pass);
    }

    #[test]
    fn bernoulli_proxy_dominates_variance_and_is_symmetric(p in 0.001f64..0.999) {
        let s = bernoulli_proxy(p).unwrap();
        prop_assert!(s >= p * (1.0 - p) * (1.0 - 1e-12));
        prop_assert!(s <= 0.25 * (1.0 + 1e-12));
        let mirrored = bernoulli_proxy(1.0 - p).unwrap();
        prop_assert!((s - mirrored).abs() <= 1e-12 * s);
    }

    #[test]
    fn asymmetric_closed_form_matches_engine((p1, p2) in three_mass_params(), a in 0.5f64..3.0) {
        let params = ThreeMassParams::new(p1, p2, a).unwrap();
        let closed = asymmetric_three_mass_proxy(params).unwrap();
        let engine = general(&params.distribution().unwrap());
        prop_assert!((closed.sigma2_opt - engine).abs() <= 1e-8 * engine, "{} vs {engine}", closed.sigma2_opt);
        prop_assert!(closed.sigma2_opt >= closed.variance);
        // the log-ratio branch is always a lower bound
        let (lo, hi) = (p1.min(p2), p1.max(p2));
        let log_ratio = if hi - lo < 1e-12 { lo + hi } else { 2.0 * (hi - lo) / (hi / lo).ln() };
        prop_assert!(closed.sigma2_opt >= log_ratio * a * a * (1.0 - 1e-9));
    }

    #[test]
    fn asymmetric_closed_form_is_reflection_invariant((p1, p2) in three_mass_params()) {
        let forward = asymmetric_three_mass_proxy(ThreeMassParams::new(p1, p2, 1.0).unwrap()).unwrap();
        let mirror = asymmetric_three_mass_proxy(ThreeMassParams::new(p2, p1, 1.0).unwrap()).unwrap();
        prop_assert!((forward.sigma2_opt - mirror.sigma2_opt).abs() <= 1e-10 * forward.sigma2_opt);
    }

    #[test]
    fn symmetric_closed_form_matches_engine(p in 0.001f64..0.499) {
        let closed = symmetric_three_mass_proxy(p, 1.0).unwrap();
        let engine = general(&DiscreteDistribution::three_mass(p, p, 1.0).unwrap());
        prop_assert!((closed.sigma2_opt - engine).abs() <= 1e-8 * engine);
        prop_assert_eq!(closed.strict, p >= 1.0 / 6.0);
    }

    #[test]
    fn regimes_join_continuously_at_the_boundary(p1 in 0.01f64..0.2, ratio in 1.05f64..4.0) {
        // p3 = 4√(p1 p2) with p1 + p2 + p3 = 1 ⇒ solve for the scale of (p1, p2)
        let p2 = p1 * ratio;
        let k = 1.0 / (p1 + p2 + 4.0 * (p1 * p2).sqrt());
        let (q1, q2) = (p1 * k, p2 * k);
        let eval = |f: f64| {
            asymmetric_three_mass_proxy(ThreeMassParams::new(q1 * f, q2 * f, 1.0).unwrap())
                .unwrap()
                .sigma2_opt
        };
        let inside = eval(1.0 + 1e-7);
        let outside = eval(1.0 - 1e-7);
        prop_assert!((inside - outside).abs() <= 1e-6 * inside, "{inside} vs {outside}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_predicate_is_monotone(d in distribution(), f in 1.0f64..2.0) {
        let grid = GridConfig::default();
        let opt = general(&d);
        prop_assert!(is_variance_proxy(&d, opt * (1.0 + 1e-7), &grid).unwrap().pass);
        prop_assert!(is_variance_proxy(&d, opt * f * (1.0 + 1e-7), &grid).unwrap().pass);
        if opt > d.variance() * (1.0 + 1e-3) {
            prop_assert!(!is_variance_proxy(&d, opt * (1.0 - 1e-4), &grid).unwrap().pass);
        }
    }

    #[test]
    fn oracle_agrees_with_engine(d in distribution()) {
        let engine = general(&d);
        let oracle = bisect_optimal_proxy(&d, 1e-7).unwrap();
        prop_assert!((oracle - engine).abs() <= 1e-4 * engine, "{oracle} vs {engine}");
    }
}
