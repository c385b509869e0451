use lattice_lab::idealnorms::{
    build_eta_factorization, multiplication_operator_check, parse_rep, theta_lower, theta_profile, IdealExponents,
    TensorRep,
};
use lattice_lab::lattice::{AtomicMeasure, NormedLattice};
use lattice_lab::search;
use lattice_lab::Side;
use serde_json::json;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn exps(p: f64, p2: f64, q: f64, q2: f64) -> IdealExponents {
    IdealExponents::new(p, p2, q, q2).unwrap()
}

fn l(n: usize, p: f64) -> NormedLattice {
    NormedLattice::lp(n, p).unwrap()
}

/// `sup Σ_i |⟨a,x_i⟩||⟨b,y_i⟩|` over unit functionals of ℓ_2², on an angle grid.
fn single_functional_grid(rep: &TensorRep) -> f64 {
    let steps = 720;
    let mut best = 0.0f64;
    for i in 0..steps {
        let s = std::f64::consts::PI * i as f64 / steps as f64;
        let a = [s.cos(), s.sin()];
        for j in 0..steps {
            let t = std::f64::consts::PI * j as f64 / steps as f64;
            let b = [t.cos(), t.sin()];
            let v: f64 = rep
                .pairs()
                .iter()
                .map(|(x, y)| (a[0] * x[0] + a[1] * x[1]).abs() * (b[0] * y[0] + b[1] * y[1]).abs())
                .sum();
            best = best.max(v);
        }
    }
    best
}

#[test]
fn single_pair_theta_is_the_product_of_norms() {
    let e = exps(2.0, f64::INFINITY, 2.0, 1.0);
    let rep = TensorRep::new(vec![(vec![3.0, -4.0], vec![1.0, 1.0, 0.5])], e).unwrap();
    let est = theta_lower(&rep, &l(2, 2.0), &l(3, 3.0), 4, 2000, 0).unwrap();
    let want = 5.0 * l(3, 3.0).norm(&[1.0, 1.0, 0.5]);
    assert!(close(est.value, want, 1e-6));
    assert_eq!(est.side, Side::Exact);

    let prof = theta_profile(&rep, &l(2, 2.0), &l(3, 3.0), 4, 2000, 0).unwrap();
    assert!(close(prof.levels[0].value, prof.levels.last().unwrap().value, 1e-9));
}

#[test]
fn two_pair_theta_matches_a_grid_at_length_one() {
    let e = exps(2.0, f64::INFINITY, 2.0, 1.0);
    let rep = TensorRep::new(vec![(vec![1.0, 0.5], vec![0.0, 1.0]), (vec![-0.2, 1.0], vec![1.0, 0.3])], e).unwrap();
    let prof = theta_profile(&rep, &l(2, 2.0), &l(2, 2.0), 4, 4000, 0).unwrap();
    let grid = single_functional_grid(&rep);
    assert!(prof.levels[0].value >= grid - 1e-4);
    assert!(prof.levels[0].value <= grid + 1e-4);
    assert!(prof.monotone);
    assert_eq!(prof.estimate.side, Side::Lower);
}

#[test]
fn theta_is_monotone_homogeneous_and_deterministic() {
    let e = exps(2.0, 2.0, 3.0, 1.0);
    let rep = TensorRep::new(
        vec![(vec![1.0, 0.5, 0.0], vec![0.2, 1.0]), (vec![0.0, 1.0, -1.0], vec![1.0, 0.0])],
        e,
    )
    .unwrap();
    let (ee, ff) = (l(3, 1.5), l(2, 2.0));
    let prof = theta_profile(&rep, &ee, &ff, 4, 1000, 7).unwrap();
    assert_eq!(prof.levels.iter().map(|l| l.trunc_len).collect::<Vec<_>>(), vec![1, 2, 4]);
    assert!(prof.levels.windows(2).all(|w| w[1].value >= w[0].value));

    let more = theta_lower(&rep, &ee, &ff, 4, 4000, 7).unwrap();
    assert!(more.value >= prof.estimate.value);

    let again = theta_lower(&rep, &ee, &ff, 4, 1000, 7).unwrap();
    assert_eq!(again, prof.estimate);

    let scaled = theta_lower(&rep.scaled(2.5), &ee, &ff, 4, 1000, 7).unwrap();
    assert!(close(scaled.value, 2.5 * prof.estimate.value, 1e-9 * (1.0 + scaled.value)));

    let zero = theta_lower(&rep.scaled(0.0), &ee, &ff, 4, 1000, 7).unwrap();
    assert_eq!(zero.value, 0.0);
}

#[test]
fn rep_documents() {
    let doc = json!({
        "pairs": [{"x": [1.0, 0.0], "y": [0.0, 2.0]}],
        "exponents": {"p": 2.0, "p2": "inf", "q": 2.0, "q2": 1.0}
    });
    let rep = parse_rep(&doc).unwrap();
    assert_eq!(rep.matrix(), vec![vec![0.0, 0.0], vec![2.0, 0.0]]);
    assert_eq!(parse_rep(&rep.to_json()).unwrap(), rep);

    let bad = json!({"pairs": [], "exponents": {"p": 2.0, "p2": 2.0, "q": 2.0, "q2": 1.0}});
    assert!(parse_rep(&bad).is_err());
    let bad = json!({"pairs": [{"x": [1.0], "y": [1.0]}], "exponents": {"p": 2.0, "p2": 3.0, "q": 2.0, "q2": 1.0}});
    assert!(parse_rep(&bad).is_err());
    let bad = json!({"pairs": [{"x": [1.0], "y": [1.0], "z": 0}], "exponents": {"p": 2.0, "p2": 2.0, "q": 2.0, "q2": 1.0}});
    assert!(parse_rep(&bad).is_err());
}

#[test]
fn eta_factorization_of_one_dimensional_identity() {
    let rep = TensorRep::new(vec![(vec![1.0], vec![1.0])], exps(1.5, 1.5, 3.0, 3.0)).unwrap();
    let f = build_eta_factorization(&rep, &l(1, 2.0), &l(1, 2.0), 2, 1000, 0).unwrap();
    assert_eq!(f.dim_z, 1);
    assert!(close(f.product_bound.k_r, 1.0, 1e-6));
    assert!(close(f.product_bound.k_s, 1.0, 1e-6));
    assert!(f.pass);
}

#[test]
fn eta_factorization_of_diagonal() {
    let rep = TensorRep::new(
        vec![(vec![1.0, 0.0], vec![1.0, 0.0]), (vec![0.0, 1.0], vec![0.0, 1.0])],
        exps(2.0, f64::INFINITY, 2.0, 1.0),
    )
    .unwrap();
    let f = build_eta_factorization(&rep, &l(2, 2.0), &l(2, 2.0), 2, 2000, 0).unwrap();
    assert!(f.composition_error <= 1e-12);
    assert!(f.unconditional);
    assert!(f.product_bound.within_tolerance);
    assert!(f.pass);
    for j in 0..2 {
        let mut e = vec![0.0; 2];
        e[j] = 1.0;
        assert_eq!(f.s.apply(&f.r.apply(&e)), e);
    }
}

#[test]
fn eta_factorization_of_rank_one() {
    let xstar = vec![0.6, 0.8];
    let y = vec![2.0, 1.0];
    let rep = TensorRep::new(vec![(xstar.clone(), y.clone())], exps(2.0, 2.0, 2.0, 1.0)).unwrap();
    let (e, f) = (l(2, 3.0), l(2, 1.5));
    let out = build_eta_factorization(&rep, &e, &f, 2, 2000, 0).unwrap();
    let want = e.dual().norm(&xstar) * f.norm(&y);
    assert!(close(out.product_bound.product, want, 5e-2));
    assert!(out.pass);
}

#[test]
fn eta_factorization_on_random_reps() {
    for i in 0..6u64 {
        let mut rng = search::trial_rng(31, 0, i);
        let de = 1 + search::index(&mut rng, 3);
        let df = 1 + search::index(&mut rng, 3);
        let n = 1 + search::index(&mut rng, 3);
        let pairs = (0..n)
            .map(|_| (search::gaussian_vec(&mut rng, de), search::gaussian_vec(&mut rng, df)))
            .collect();
        let rep = TensorRep::new(pairs, exps(2.0, f64::INFINITY, 2.0, 1.0)).unwrap();
        let out = build_eta_factorization(&rep, &l(de, 2.0), &l(df, 1.5), 2, 1000, i).unwrap();
        assert!(out.composition_error <= 1e-12, "rep {i}");
        assert!(out.pass, "rep {i}: {:?}", out.product_bound);
    }
}

#[test]
fn multiplier_examples() {
    let w1 = AtomicMeasure::new(vec![1.0, 0.5, 2.0, 0.7]).unwrap();
    let w2 = AtomicMeasure::new(vec![0.3, 1.0, 1.0, 1.5]).unwrap();
    let source = NormedLattice::lorentz_pinfty(3.0, 1.0, w1).unwrap();
    let target = NormedLattice::lorentz_q1(2.0, w2).unwrap();

    let zero = multiplication_operator_check(&[0.0; 4], &source, &target, 500, 0).unwrap();
    assert_eq!(zero.operator_norm, 0.0);
    assert_eq!(zero.convex.value, 0.0);
    assert_eq!(zero.concave.value, 0.0);

    let one = multiplication_operator_check(&[1.0; 4], &source, &target, 500, 0).unwrap();
    let three = multiplication_operator_check(&[3.0; 4], &source, &target, 500, 0).unwrap();
    assert!(close(three.operator_norm, 3.0 * one.operator_norm, 1e-9));
    assert!(close(three.convex.value, 3.0 * one.convex.value, 1e-9));
    assert!(close(three.concave.value, 3.0 * one.concave.value, 1e-9));

    let mut rng = search::trial_rng(2, 0, 0);
    let g: Vec<f64> = search::exponential_vec(&mut rng, 4);
    let rep = multiplication_operator_check(&g, &source, &target, 1000, 0).unwrap();
    assert_eq!(rep.q2, 1.0);
    assert!(rep.convex_ok && rep.concave_ok && rep.pass);

    let lq = multiplication_operator_check(&g, &source, &l(4, 2.0), 1000, 0).unwrap();
    assert!(lq.pass);

    assert!(multiplication_operator_check(&[1.0, -1.0, 0.0, 0.0], &source, &target, 100, 0).is_err());
    assert!(multiplication_operator_check(&[1.0; 3], &source, &target, 100, 0).is_err());
}
