use lattice_lab::convexgeom::{
    build_c_body, build_minimal_factorization, interpolate_theta, interpolated_exponents, search_d_violation,
    verify_polarity, InterpolationCase, SolidConvexBody,
};
use lattice_lab::exponent::Exponent;
use lattice_lab::lattice::{dot, LinOperator, NormedLattice, SymmetricSeqNorm};
use lattice_lab::search;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn l2(n: usize) -> NormedLattice {
    NormedLattice::lp(n, 2.0).unwrap()
}

fn ell(p: f64) -> SymmetricSeqNorm {
    SymmetricSeqNorm::ell(p).unwrap()
}

fn ell_inf() -> SymmetricSeqNorm {
    ell(f64::INFINITY)
}

/// Gauge of a two-generator body: `1 / max_λ min_j (λg_j + (1−λ)h_j)/|y_j|`,
/// maximized by ternary search since the inner minimum is concave in `λ`.
fn two_generator_gauge(g: &[f64], h: &[f64], y: &[f64]) -> f64 {
    let f = |l: f64| {
        y.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| (l * g[j].abs() + (1.0 - l) * h[j].abs()) / v.abs())
            .fold(f64::INFINITY, f64::min)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    1.0 / f(0.5 * (lo + hi))
}

#[test]
fn gauge_examples() {
    let body = SolidConvexBody::new(2, vec![vec![1.0, 1.0]]).unwrap();
    assert!(close(body.gauge(&[2.0, 0.0]).unwrap(), 2.0, 1e-12));
    assert_eq!(body.gauge(&[0.0, 0.0]).unwrap(), 0.0);

    let cross = SolidConvexBody::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let g = cross.gauge(&[1.0, 1.0]).unwrap();
    assert!(close(g, 2.0, 1e-9));
    assert!(close(g, two_generator_gauge(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]), 1e-9));

    let axis = SolidConvexBody::new(2, vec![vec![1.0, 0.0]]).unwrap();
    assert_eq!(axis.gauge(&[0.0, 1.0]).unwrap(), f64::INFINITY);
    assert!(axis.gauge(&[1.0]).is_err());
    assert!(SolidConvexBody::new(2, vec![vec![1.0]]).is_err());
}

#[test]
fn support_examples() {
    let body = SolidConvexBody::new(2, vec![vec![1.0, 1.0]]).unwrap();
    assert!(close(body.support_function(&[1.0, -2.0]).unwrap(), 3.0, 1e-12));
    assert!(body.contains(&[0.5, -1.0], 0.0).unwrap());
    assert!(!body.contains(&[1.5, 0.0], 1e-9).unwrap());
}

#[test]
fn c_body_contains_images_of_unit_vectors() {
    let t = LinOperator::new(vec![vec![1.0, 0.5], vec![-0.3, 2.0]], l2(2), NormedLattice::lp(2, 3.0).unwrap()).unwrap();
    let c = build_c_body(&t, ell(2.0), ell(2.0), 2000, 0).unwrap();
    assert!(!c.generators().is_empty());
    let mut rng = search::trial_rng(4, 0, 0);
    for _ in 0..50 {
        let x = search::gaussian_vec(&mut rng, 2);
        let n = t.domain().norm(&x);
        let y: Vec<f64> = t.apply(&x).iter().map(|v| v / n).collect();
        // Single vectors are members; the sampled body is an inner approximation.
        assert!(c.gauge(&y).unwrap() <= 1.0 + 5e-2);
    }
    for g in c.generators() {
        assert!(c.gauge(g).unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn d_search_examples() {
    let one = LinOperator::identity(l2(1));
    let d = search_d_violation(&one, &[1.0], ell(2.0), ell(2.0), 1000, 0).unwrap();
    assert!(close(d.rho_lower, 1.0, 1e-9));

    let t = LinOperator::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]], l2(2), l2(2)).unwrap();
    let zero = search_d_violation(&t, &[0.0, 0.0], ell(2.0), ell(2.0), 1000, 0).unwrap();
    assert!(zero.in_d);
    assert_eq!(zero.rho_lower, 0.0);

    let a = search_d_violation(&t, &[0.3, -0.4], ell(2.0), ell(2.0), 2000, 1).unwrap();
    let b = search_d_violation(&t, &[0.9, -1.2], ell(2.0), ell(2.0), 2000, 1).unwrap();
    assert!(close(b.rho_lower, 3.0 * a.rho_lower, 1e-6 * (1.0 + b.rho_lower)));

    let big = search_d_violation(&t, &[3.0, 3.0], ell(2.0), ell(2.0), 1000, 2).unwrap();
    assert!(!big.in_d);
    let fam = big.witness.unwrap();
    let norms: Vec<f64> = fam.iter().map(|u| t.codomain().norm(&t.apply(u))).collect();
    assert!(close(ell(2.0).eval(&norms), big.rho_lower, 1e-9));
}

#[test]
fn polarity_examples() {
    let d = LinOperator::diagonal(&[2.0, 1.0], l2(2), l2(2)).unwrap();
    let rep = verify_polarity(&d, ell(2.0), ell(2.0), 10, 2000, 0).unwrap();
    assert_eq!(rep.samples, 10);
    assert!(rep.pass, "{rep:?}");

    let one = LinOperator::diagonal(&[1.5], l2(1), l2(1)).unwrap();
    assert!(verify_polarity(&one, ell(2.0), ell_inf(), 10, 1000, 0).unwrap().pass);

    let zero = LinOperator::new(vec![vec![0.0, 0.0]], l2(2), l2(1)).unwrap();
    let rep = verify_polarity(&zero, ell(2.0), ell(2.0), 5, 500, 0).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.violations, 0);

    let lorentz = LinOperator::identity(NormedLattice::lorentz_q1(2.0, lattice_lab::lattice::AtomicMeasure::counting(2)).unwrap());
    assert!(verify_polarity(&lorentz, ell(2.0), ell(2.0), 5, 500, 0).is_err());
}

#[test]
fn factorization_of_identity() {
    let f = build_minimal_factorization(&LinOperator::identity(l2(2)), ell(2.0), ell(2.0), 2000, 0).unwrap();
    let c = &f.norm_checks;
    assert!(c.composition_error <= 1e-12);
    assert!(c.u0 <= 1e-6);
    assert!(c.convexity_ratio_max <= 1.0 + 1e-6);
    assert!(c.pass);
    assert_eq!(f.dim_y, 2);
}

#[test]
fn factorization_of_rank_one_operator() {
    let t = LinOperator::new(vec![vec![1.0, 2.0], vec![2.0, 4.0]], l2(2), NormedLattice::lp(2, 1.5).unwrap()).unwrap();
    let f = build_minimal_factorization(&t, ell(2.0), ell(2.0), 2000, 3).unwrap();
    assert!(f.norm_checks.pass, "{:?}", f.norm_checks);
    assert!(f.norm_checks.composition_error <= 1e-12);
    for j in 0..2 {
        let mut e = vec![0.0; 2];
        e[j] = 1.0;
        let back = f.v.apply(&f.u.apply(&e));
        for (a, b) in back.iter().zip(t.apply(&e)) {
            assert!(close(*a, b, 1e-12));
        }
    }
}

#[test]
fn factorization_with_upper_estimate_inner_norm() {
    let t = LinOperator::new(
        vec![vec![1.0, -0.5, 0.0], vec![0.2, 1.0, 0.7]],
        NormedLattice::lp(3, 1.5).unwrap(),
        NormedLattice::lp(2, 3.0).unwrap(),
    )
    .unwrap();
    let f = build_minimal_factorization(&t, ell(1.5), ell_inf(), 2000, 5).unwrap();
    assert!(f.norm_checks.pass, "{:?}", f.norm_checks);
    assert!(f.norm_checks.u0 <= 1e-6);
    assert!(f.norm_checks.convexity_ratio_max <= 1.0 + 1e-6);
}

#[test]
fn interpolation_exponents() {
    let case = InterpolationCase {
        p2: Exponent::INFINITY,
        q2: Exponent::ONE,
    };
    let e = interpolated_exponents(0.5, 2.0, 2.0, case).unwrap();
    assert!(close(e.p_theta, 4.0 / 3.0, 1e-12));
    assert!(close(e.q_theta, 4.0, 1e-12));
    assert_eq!(e.pbar2, f64::INFINITY);
    assert_eq!(e.qbar2, 1.0);

    let qq = InterpolationCase {
        p2: Exponent::INFINITY,
        q2: Exponent::TWO,
    };
    let e = interpolated_exponents(0.5, 2.0, 2.0, qq).unwrap();
    assert!(close(e.q_theta, 4.0, 1e-12));
    assert!(close(e.qbar2, 4.0, 1e-12));

    assert!(interpolated_exponents(0.0, 2.0, 2.0, case).is_err());
    assert!(interpolated_exponents(1.0, 2.0, 2.0, case).is_err());
    let bad = InterpolationCase {
        p2: Exponent::new(3.0).unwrap(),
        q2: Exponent::ONE,
    };
    assert!(interpolated_exponents(0.5, 2.0, 2.0, bad).is_err());
}

#[test]
fn interpolating_a_body_with_itself() {
    let c = SolidConvexBody::new(2, vec![vec![1.0, 0.2], vec![0.3, 1.0]]).unwrap();
    let case = InterpolationCase {
        p2: Exponent::INFINITY,
        q2: Exponent::ONE,
    };
    let out = interpolate_theta(&c, &c, 0.4, 2.0, 2.0, case, 40, 0).unwrap();
    assert!(out.pass);
    for g in c.generators() {
        assert!(out.c_theta.gauge(g).unwrap() <= 1.0 + 1e-9);
    }
    let mut rng = search::trial_rng(1, 0, 0);
    for _ in 0..20 {
        let b = search::gaussian_vec(&mut rng, 2);
        let h = c.support_function(&b).unwrap();
        assert!(out.c_theta.support_function(&b).unwrap() <= h + 1e-9);
    }
    assert!(out.midpoint_max_gauge <= 1.0 + 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_matches_two_generator_oracle(
        g in prop::collection::vec(0.05f64..2.0, 3),
        h in prop::collection::vec(0.05f64..2.0, 3),
        y in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let body = SolidConvexBody::new(3, vec![g.clone(), h.clone()]).unwrap();
        let lp = body.gauge(&y).unwrap();
        let oracle = if y.iter().all(|v| *v == 0.0) { 0.0 } else { two_generator_gauge(&g, &h, &y) };
        prop_assert!(close(lp, oracle, 1e-7 * (1.0 + oracle)), "{} vs {}", lp, oracle);
    }

    #[test]
    fn sampled_supremum_is_below_support(
        gens in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 1..5),
        b in prop::collection::vec(-2.0f64..2.0, 3),
        seed in 0u64..1000,
    ) {
        let body = SolidConvexBody::new(3, gens).unwrap();
        let h = body.support_function(&b).unwrap();
        let mut rng = search::trial_rng(seed, 0, 0);
        for _ in 0..20 {
            let y = search::gaussian_vec(&mut rng, 3);
            let g = body.gauge(&y).unwrap();
            if g.is_finite() && g > 0.0 {
                let unit: Vec<f64> = y.iter().map(|v| v / g).collect();
                prop_assert!(dot(&unit, &b) <= h * (1.0 + 1e-9) + 1e-12);
            }
        }
    }

    #[test]
    fn gauge_is_homogeneous_and_solid(
        gens in prop::collection::vec(prop::collection::vec(0.0f64..2.0, 3), 1..5),
        y in prop::collection::vec(-2.0f64..2.0, 3),
        c in 0.1f64..5.0,
        shrink in prop::collection::vec(0.0f64..1.0, 3),
    ) {
        let body = SolidConvexBody::new(3, gens).unwrap();
        let g = body.gauge(&y).unwrap();
        let cy: Vec<f64> = y.iter().map(|v| c * v).collect();
        let gc = body.gauge(&cy).unwrap();
        if g.is_finite() {
            prop_assert!(close(gc, c * g, 1e-9 * (1.0 + c * g)));
            let small: Vec<f64> = y.iter().zip(&shrink).map(|(v, s)| v * s).collect();
            prop_assert!(body.gauge(&small).unwrap() <= g * (1.0 + 1e-9) + 1e-12);
        } else {
            prop_assert!(gc.is_infinite());
        }
    }
}
