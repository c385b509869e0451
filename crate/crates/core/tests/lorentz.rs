use lattice_lab::constants::alpha_sequence;
use lattice_lab::lattice::AtomicMeasure;
use lattice_lab::lorentz::{
    build_weak_lp_embedding, check_renorming_sandwich, lemma_a2_d, norm_pinfty_r, norm_pinfty_r_enumerated,
    norm_pinfty_r_prefix, norm_q1, quasinorm_pinfty, rearrange, StepFunction,
};
use lattice_lab::search;
use lattice_lab::Side;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn weighted(values: &[f64], weights: &[f64]) -> StepFunction {
    StepFunction::new(values.to_vec(), AtomicMeasure::new(weights.to_vec()).unwrap()).unwrap()
}

/// `sup_A μ(A)^{1/p−1/r} (∫_A |f|^r)^{1/r}` by looping over all subsets.
fn brute_norm_r(values: &[f64], weights: &[f64], p: f64, r: f64) -> f64 {
    let n = values.len();
    let mut best = 0.0f64;
    for mask in 1..1usize << n {
        let (mut m, mut s) = (0.0, 0.0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                m += weights[i];
                s += weights[i] * values[i].abs().powf(r);
            }
        }
        best = best.max(m.powf(1.0 / p - 1.0 / r) * s.powf(1.0 / r));
    }
    best
}

#[test]
fn rearrangement_examples() {
    let r = rearrange(&StepFunction::counting(vec![1.0, 3.0, 2.0]));
    assert_eq!(r.values, vec![3.0, 2.0, 1.0]);
    assert_eq!(r.breakpoints, vec![1.0, 2.0, 3.0]);
    let r = rearrange(&StepFunction::counting(vec![1.0, 1.0]));
    assert_eq!(r.values, vec![1.0]);
    assert_eq!(r.breakpoints, vec![2.0]);
    let r = rearrange(&weighted(&[2.0, 1.0], &[0.5, 2.0]));
    assert_eq!(r.values, vec![2.0, 1.0]);
    assert_eq!(r.breakpoints, vec![0.5, 2.5]);
    assert_eq!(r.at(0.2), 2.0);
    assert_eq!(r.at(1.0), 1.0);
    assert_eq!(r.at(3.0), 0.0);
}

#[test]
fn quasinorm_examples() {
    assert!(close(quasinorm_pinfty(&StepFunction::counting(vec![1.0; 4]), 2.0).unwrap(), 2.0, 1e-12));
    assert!(close(quasinorm_pinfty(&StepFunction::counting(vec![3.0, 1.0]), 2.0).unwrap(), 3.0, 1e-12));
    for p in [1.5, 2.0, 4.0] {
        for n in [1, 5, 17, 64] {
            let f = StepFunction::counting(alpha_sequence(p, n));
            assert!(close(quasinorm_pinfty(&f, p).unwrap(), 1.0, 1e-12));
        }
    }
}

#[test]
fn renorming_examples() {
    let f = StepFunction::counting(vec![3.0, 1.0]);
    let e = norm_pinfty_r(&f, 2.0, 1.0).unwrap();
    assert!(close(e.value, 3.0, 1e-12));
    assert_eq!(e.side, Side::Exact);
    for p in [1.5, 2.0, 4.0] {
        let f = StepFunction::counting(alpha_sequence(p, 12));
        assert!(close(norm_pinfty_r(&f, p, 1.0).unwrap().value, 1.0, 1e-12));
    }
    let chi = weighted(&[1.0, 1.0, 0.0], &[0.5, 1.0, 3.0]);
    for (p, r) in [(2.0, 1.0), (3.0, 2.5), (1.5, 1.2)] {
        assert!(close(norm_pinfty_r(&chi, p, r).unwrap().value, 1.5f64.powf(1.0 / p), 1e-12));
    }
    assert!(norm_pinfty_r(&f, 2.0, 2.0).is_err());
}

#[test]
fn wide_unequal_weights_are_flagged_lower() {
    let n = 24;
    let w: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 * 0.1).collect();
    let f = weighted(&vec![1.0; n], &w);
    assert_eq!(norm_pinfty_r(&f, 2.0, 1.0).unwrap().side, Side::Lower);
    let counting = StepFunction::counting(vec![1.0; n]);
    assert_eq!(norm_pinfty_r(&counting, 2.0, 1.0).unwrap().side, Side::Exact);
    assert!(norm_pinfty_r_enumerated(&counting, 2.0, 1.0).is_err());
}

#[test]
fn q1_examples() {
    assert!(close(norm_q1(&StepFunction::counting(vec![1.0]), 2.0).unwrap(), 2.0, 1e-12));
    assert_eq!(norm_q1(&StepFunction::counting(vec![0.0, 0.0]), 2.0).unwrap(), 0.0);
    let v = norm_q1(&StepFunction::counting(vec![2.0, 1.0]), 2.0).unwrap();
    assert!(close(v, 2.0 + 2.0 * 2f64.sqrt(), 1e-12));
}

#[test]
fn sandwich_examples() {
    let rep = check_renorming_sandwich(&StepFunction::counting(vec![3.0, 1.0]), 2.0, 1.0).unwrap();
    assert!(close(rep.upper_factor, 2.0, 1e-12));
    assert!(close(rep.quasi, 3.0, 1e-12));
    assert!(close(rep.norm_r, 3.0, 1e-12));
    assert!(rep.pass);
    let atom = check_renorming_sandwich(&weighted(&[0.0, 2.0], &[1.0, 0.7]), 3.0, 2.0).unwrap();
    assert!(close(atom.ratio, 1.0, 1e-12));
}

#[test]
fn embedding_examples() {
    let single = build_weak_lp_embedding(&weighted(&[1.0], &[1.0]), 2.0, 1.0, 0).unwrap();
    assert!(close(single.c, 1.0, 1e-12));
    assert!(close(single.coefficients[0], 1.0, 1e-12));
    assert!(close(single.verification.sa_norm, 1.0, 1e-12));
    assert!(single.verification.pass);

    // a = (1,1) on two unit atoms has C = √2 > 1; scaled to C = 1 the construction applies.
    assert!(build_weak_lp_embedding(&weighted(&[1.0, 1.0], &[1.0, 1.0]), 2.0, 1.5, 3).is_err());
    let h = 0.5f64.sqrt();
    let two = build_weak_lp_embedding(&weighted(&[h, h], &[1.0, 1.0]), 2.0, 1.5, 3).unwrap();
    assert!(close(two.c, 1.0, 1e-12));
    assert!(two.verification.pass);
    assert!(two.verification.sampled >= 500);

    assert!(build_weak_lp_embedding(&weighted(&[1.0, 0.0], &[1.0, 1.0]), 2.0, 1.5, 0).is_err());
    assert!(build_weak_lp_embedding(&weighted(&[5.0, 5.0], &[1.0, 1.0]), 2.0, 1.5, 0).is_err());
}

#[test]
fn lemma_a2_instance() {
    let (beta, b, s) = ([0.5, 0.5], [0.5, 0.5], 0.5);
    let d = lemma_a2_d(&beta, &b, s);
    assert_eq!(d, vec![0.5, 0.5]);
    let mut rng = search::trial_rng(9, 0, 0);
    for _ in 0..100 {
        let x = search::exponential_vec(&mut rng, 2);
        let bx: f64 = beta.iter().zip(&x).map(|(a, v)| a * v).sum();
        let cx: f64 = b.iter().zip(&x).map(|(a, v)| a * v).sum();
        let dx: f64 = d.iter().zip(&x).map(|(a, v)| a * v).sum();
        assert!(bx.powf(1.0 - s) * cx.powf(s) <= dx + 1e-12);
    }
}

fn step_strategy(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max).prop_flat_map(|n| (prop::collection::vec(-4.0f64..4.0, n), prop::collection::vec(0.05f64..3.0, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rearrangement_preserves_integral((values, weights) in step_strategy(10)) {
        let f = weighted(&values, &weights);
        let r = rearrange(&f);
        let mut prev = 0.0;
        let mut total = 0.0;
        for (v, t) in r.values.iter().zip(&r.breakpoints) {
            total += v * (t - prev);
            prev = *t;
        }
        let direct: f64 = values.iter().zip(&weights).map(|(v, w)| v.abs() * w).sum();
        prop_assert!(close(total, direct, 1e-12 * (1.0 + direct)));
        prop_assert!(r.values.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(r.breakpoints.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn quasinorm_is_rearrangement_invariant((values, weights) in step_strategy(10), p in 1.1f64..5.0) {
        let f = weighted(&values, &weights);
        let r = rearrange(&f);
        let mut masses = Vec::new();
        let mut prev = 0.0;
        for t in &r.breakpoints {
            masses.push(t - prev);
            prev = *t;
        }
        let q1 = quasinorm_pinfty(&f, p).unwrap();
        if masses.is_empty() {
            prop_assert_eq!(q1, 0.0);
        } else {
            let g = weighted(&r.values, &masses);
            prop_assert!(close(q1, quasinorm_pinfty(&g, p).unwrap(), 1e-12 * (1.0 + q1)));
        }
    }

    #[test]
    fn weighted_norm_matches_brute_force((values, weights) in step_strategy(8), p in 1.2f64..5.0, t in 0.0f64..1.0) {
        let r = 1.0 + t * (p - 1.0) * 0.95;
        let v = norm_pinfty_r(&weighted(&values, &weights), p, r).unwrap().value;
        prop_assert!(close(v, brute_norm_r(&values, &weights, p, r), 1e-10 * (1.0 + v)));
    }

    #[test]
    fn prefix_rule_matches_enumeration(values in prop::collection::vec(-4.0f64..4.0, 1..=12), p in 1.2f64..5.0, t in 0.0f64..1.0) {
        let r = 1.0 + t * (p - 1.0) * 0.95;
        let f = StepFunction::counting(values);
        let a = norm_pinfty_r_prefix(&f, p, r).unwrap();
        let b = norm_pinfty_r_enumerated(&f, p, r).unwrap();
        prop_assert!(close(a, b, 1e-9));
    }

    #[test]
    fn sandwich_holds((values, weights) in step_strategy(12), pi in 0usize..3, ri in 0usize..3) {
        let p = [1.5, 2.0, 3.0][pi];
        let r = [1.0, 1.2, (p + 1.0) / 2.0][ri];
        let rep = check_renorming_sandwich(&weighted(&values, &weights), p, r).unwrap();
        prop_assert!(rep.pass);
        prop_assert!(rep.quasi <= rep.norm_r + 1e-9);
        prop_assert!(rep.norm_r <= rep.upper_factor * rep.quasi + 1e-9);
    }

    #[test]
    fn q1_is_positively_homogeneous((values, weights) in step_strategy(8), c in 0.0f64..5.0, q in 1.1f64..4.0) {
        let f = weighted(&values, &weights);
        let cf = weighted(&values.iter().map(|v| c * v).collect::<Vec<_>>(), &weights);
        let a = norm_q1(&f, q).unwrap();
        prop_assert!(close(norm_q1(&cf, q).unwrap(), c * a, 1e-10 * (1.0 + c * a)));
    }
}
