use lattice_lab::embedcert::{
    c42_bound, example54_closed_form, reproduce_example54, t41_check, CoveringFamily, T41Outcome, MAX_T41_DIM,
};
use lattice_lab::exponent::{conjugate, lp_norm};
use lattice_lab::lattice::NormedLattice;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn t41_on_a_basis_vector() {
    let x = NormedLattice::lp(2, 2.0).unwrap();
    let out = t41_check(&x, 2.0, 1.0, &[1.0, 0.0], 1e-6, 2000, 0).unwrap();
    let cert = out.certificate().expect("certificate");
    assert!(cert.validate(&x.dual()));
    assert!(cert.validate_at(&x.dual(), 1.5));
    assert!(cert.pairing > 1.0 - 1e-6);
    assert!(close(cert.d.iter().sum::<f64>(), 1.0, 1e-12));
}

#[test]
fn t41_rejects_bad_input() {
    let x = NormedLattice::lp(2, 2.0).unwrap();
    assert!(t41_check(&x, 2.0, 1.0, &[1.0, 1.0], 1e-6, 100, 0).is_err());
    assert!(t41_check(&x, 2.0, 0.9, &[1.0, 0.0], 1e-6, 100, 0).is_err());
    assert!(t41_check(&x, 1.0, 1.0, &[1.0, 0.0], 1e-6, 100, 0).is_err());
    assert!(t41_check(&x, 2.0, 1.0, &[-1.0, 0.0], 1e-6, 100, 0).is_err());
    let big = NormedLattice::lp(MAX_T41_DIM + 1, 2.0).unwrap();
    let mut a = vec![0.0; MAX_T41_DIM + 1];
    a[0] = 1.0;
    assert!(t41_check(&big, 2.0, 1.0, &a, 1e-6, 100, 0).is_err());
}

#[test]
fn infeasible_outcome_is_tagged() {
    let x = NormedLattice::predual_of(NormedLattice::example54_dual(2.0).unwrap()).unwrap();
    let a: Vec<f64> = {
        let n = x.norm(&[1.0, 1.0, 1.0]);
        vec![1.0 / n; 3]
    };
    let out = t41_check(&x, 2.0, 1.0, &a, 1e-6, 500, 0).unwrap();
    let json = serde_json::to_value(&out).unwrap();
    match out {
        T41Outcome::Infeasible(r) => {
            assert_eq!(json["outcome"], "infeasible");
            assert!(r.best_pairing <= 1.0);
        }
        T41Outcome::Certificate(_) => panic!("the three-term lattice has constant above 1 at p = 2"),
    }
}

#[test]
fn c42_bounds_for_lp() {
    let p = 3.0;
    let xstar = NormedLattice::lp(4, conjugate(p)).unwrap();
    let raw = [0.3, 1.0, 0.0, 2.0];
    let n = lp_norm(&raw, conjugate(p));
    let b: Vec<f64> = raw.iter().map(|v| v / n).collect();
    let single = c42_bound(&xstar, p, &b, &CoveringFamily::singletons(4)).unwrap();
    assert!(single <= 1.0 + 1e-12);
    assert!(close(single, 1.0, 1e-12));
    let e1 = c42_bound(&xstar, p, &[1.0, 0.0, 0.0, 0.0], &CoveringFamily::pairs(4).unwrap()).unwrap();
    assert!(close(e1, 1.0, 1e-12));
    assert!(c42_bound(&xstar, p, &[2.0, 0.0, 0.0, 0.0], &CoveringFamily::singletons(4)).is_err());
    assert!(CoveringFamily::new(3, vec![vec![0, 1], vec![1, 2]], 1).is_err());
}

#[test]
fn example54_closed_form_values() {
    assert!(close(example54_closed_form(4.0 / 3.0).powi(4), 24.0 / 17.0, 1e-12));
    assert!(close(example54_closed_form(2.0).powi(2), 6.0 / 5.0, 1e-12));
    for k in 1..=40 {
        let p = 1.0 + 0.125 * k as f64;
        let q = conjugate(p);
        assert!(example54_closed_form(p).powf(q) > 1.0);
    }
}

#[test]
fn example54_bound_from_the_lattice() {
    for p in [4.0 / 3.0, 2.0, 4.0] {
        let q = conjugate(p);
        let y = NormedLattice::example54_dual(p).unwrap();
        let s = (1.0 + 2f64.powf(q)).powf(-1.0 / q);
        let b = vec![s; 3];
        assert!(close(y.norm(&b), 1.0, 1e-12));
        let bound = c42_bound(&y, p, &b, &CoveringFamily::pairs(3).unwrap()).unwrap();
        assert!(close(bound, example54_closed_form(p), 1e-9));
    }
}

#[test]
fn example54_reproduction() {
    let rep = reproduce_example54(2.0, 500, 0).unwrap();
    assert!(rep.pass);
    assert!(rep.matches_closed_form && rep.exceeds_one);
    assert!(close(rep.bound_pow, 1.2, 1e-9));
    assert!(rep.bracket.lower <= rep.bracket.gamma_p);
    if let Some(u) = rep.bracket.upper_search {
        assert!(u >= rep.bracket.lower);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lp_plane_admits_certificates(p in 1.2f64..4.0, angle in 0.0f64..std::f64::consts::FRAC_PI_2, seed in 0u64..100) {
        let x = NormedLattice::lp(2, p).unwrap();
        let raw = [angle.cos(), angle.sin()];
        let n = lp_norm(&raw, p);
        let a: Vec<f64> = raw.iter().map(|v| v / n).collect();
        let out = t41_check(&x, p, 1.0 + 1e-4, &a, 1e-6, 1000, seed).unwrap();
        let cert = out.certificate();
        prop_assert!(cert.is_some());
        let cert = cert.unwrap();
        prop_assert!(cert.validate(&x.dual()));
        prop_assert!(cert.validate_at(&x.dual(), 2.0));
    }

    #[test]
    fn singleton_bound_never_exceeds_one(raw in prop::collection::vec(0.0f64..3.0, 1..6), p in 1.2f64..5.0) {
        prop_assume!(raw.iter().any(|v| *v > 0.0));
        let q = conjugate(p);
        let xstar = NormedLattice::lp(raw.len(), q).unwrap();
        let n = lp_norm(&raw, q);
        let b: Vec<f64> = raw.iter().map(|v| v / n).collect();
        let v = c42_bound(&xstar, p, &b, &CoveringFamily::singletons(raw.len())).unwrap();
        prop_assert!(v <= 1.0 + 1e-9);
    }
}
