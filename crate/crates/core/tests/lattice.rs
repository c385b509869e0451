use lattice_lab::convexgeom::SolidConvexBody;
use lattice_lab::exponent::{conjugate, lp_norm};
use lattice_lab::lattice::{
    dot, eval_dual_norm, eval_norm, join, lattice_from_json, lattice_to_json, meet, modulus, sigma_apply, sigma_dual,
    AtomicMeasure, NormedLattice, SymmetricSeqNorm,
};
use lattice_lab::report::to_canonical_string;
use lattice_lab::{Error, Side};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn euclidean_norm() {
    let x = NormedLattice::lp(2, 2.0).unwrap();
    let e = eval_norm(&x, &[3.0, 4.0]).unwrap();
    assert!(close(e.value, 5.0, TOL));
    assert_eq!(e.side, Side::Exact);
}

#[test]
fn example54_dual_values() {
    let y = NormedLattice::example54_dual(2.0).unwrap();
    assert!(close(y.norm(&[1.0, 1.0, 0.0]), 2.0, TOL));
    assert!(close(y.norm(&[1.0, 1.0, 1.0]), 5f64.sqrt(), TOL));
    for p in [4.0 / 3.0, 3.0, 4.0] {
        let q = conjugate(p);
        let y = NormedLattice::example54_dual(p).unwrap();
        let expected = (1.0 + 2f64.powf(q)).powf(1.0 / q);
        assert!(close(y.norm(&[1.0, 1.0, 1.0]), expected, TOL));
    }
}

#[test]
fn linf_sum_takes_block_max() {
    let x = NormedLattice::linf_sum(vec![NormedLattice::lp(2, 2.0).unwrap(), NormedLattice::lp(2, 1.0).unwrap()]).unwrap();
    assert!(close(x.norm(&[3.0, 4.0, 1.0, 1.0]), 5.0, TOL));
}

#[test]
fn dual_norm_examples() {
    let l2 = NormedLattice::lp(2, 2.0).unwrap();
    assert!(close(eval_dual_norm(&l2, &[3.0, 4.0], 100, 0).unwrap().value, 5.0, TOL));
    let l1 = NormedLattice::lp(2, 1.0).unwrap();
    assert!(close(eval_dual_norm(&l1, &[1.0, -2.0], 100, 0).unwrap().value, 2.0, TOL));
    let g = NormedLattice::gauge_of(SolidConvexBody::new(2, vec![vec![1.0, 1.0]]).unwrap()).unwrap();
    let d = eval_dual_norm(&g, &[1.0, 1.0], 100, 0).unwrap();
    assert!(close(d.value, 2.0, 1e-9));
}

#[test]
fn dimension_mismatch_is_reported() {
    let x = NormedLattice::lp(3, 2.0).unwrap();
    assert!(matches!(eval_norm(&x, &[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 3, got: 2 })));
}

#[test]
fn sigma_examples() {
    let l2 = SymmetricSeqNorm::ell(2.0).unwrap();
    assert_eq!(sigma_apply(&l2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(), vec![1.0, 1.0]);
    let linf = SymmetricSeqNorm::ell(f64::INFINITY).unwrap();
    assert_eq!(sigma_apply(&linf, &[vec![1.0, -3.0], vec![2.0, 1.0]]).unwrap(), vec![2.0, 3.0]);
    let l1 = SymmetricSeqNorm::ell(1.0).unwrap();
    assert_eq!(sigma_apply(&l1, &[vec![1.0, 1.0], vec![2.0, -2.0]]).unwrap(), vec![3.0, 3.0]);
    assert!(sigma_apply(&l1, &[]).is_err());
    assert!(sigma_apply(&l1, &[vec![1.0], vec![1.0, 2.0]]).is_err());
}

#[test]
fn sigma_dual_examples() {
    let d3 = sigma_dual(&SymmetricSeqNorm::ell(3.0).unwrap());
    assert!(close(d3.p.value(), 1.5, 1e-12));
    assert!(sigma_dual(&SymmetricSeqNorm::ell(1.0).unwrap()).p.is_infinite());
    assert!(close(sigma_dual(&SymmetricSeqNorm::ell(2.0).unwrap()).p.value(), 2.0, 1e-12));
    for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let s = SymmetricSeqNorm::ell(p).unwrap();
        assert_eq!(sigma_dual(&sigma_dual(&s)), s);
    }
}

#[test]
fn documents_parse_and_round_trip() {
    let x = lattice_from_json(r#"{"dim":2,"norm":{"kind":"lp","p":2}}"#).unwrap();
    assert_eq!(x, NormedLattice::lp(2, 2.0).unwrap());
    let y = lattice_from_json(r#"{"dim":3,"norm":{"kind":"example54_dual","p":2}}"#).unwrap();
    assert!(close(y.norm(&[1.0, 1.0, 1.0]), 5f64.sqrt(), TOL));
    let docs = [
        r#"{"dim":3,"norm":{"kind":"lorentz_pinfty","p":2,"r":1.5,"weights":[1,2,0.5]}}"#,
        r#"{"dim":2,"norm":{"kind":"lorentz_q1","q":3,"weights":[1,1]}}"#,
        r#"{"dim":2,"norm":{"kind":"lp","p":"inf"}}"#,
        r#"{"dim":3,"norm":{"kind":"predual_of","norm":{"kind":"example54_dual","p":2}}}"#,
        r#"{"dim":2,"norm":{"kind":"gauge_of","generators":[[1,0.5],[0.2,1]]}}"#,
    ];
    for d in docs {
        let x = lattice_from_json(d).unwrap();
        let once = to_canonical_string(&lattice_to_json(&x));
        let again = to_canonical_string(&lattice_to_json(&lattice_from_json(&once).unwrap()));
        assert_eq!(once, again);
    }
}

#[test]
fn documents_reject_bad_input() {
    let r_ge_p = lattice_from_json(r#"{"dim":2,"norm":{"kind":"lorentz_pinfty","p":2,"r":3,"weights":[1,1]}}"#);
    match r_ge_p {
        Err(Error::Schema { path, message }) => {
            assert!(path.starts_with("/norm"));
            assert!(message.contains("r"));
        }
        other => panic!("expected schema error, got {other:?}"),
    }
    let unknown = lattice_from_json(r#"{"dim":2,"norm":{"kind":"orlicz"}}"#);
    assert!(matches!(unknown, Err(Error::Schema { .. })));
    let bad_weight = lattice_from_json(r#"{"dim":2,"norm":{"kind":"lorentz_q1","q":2,"weights":[1,0]}}"#);
    assert!(matches!(bad_weight, Err(Error::Schema { .. })));
}

#[test]
fn coordinate_operations() {
    assert_eq!(modulus(&[-1.0, 2.0]), vec![1.0, 2.0]);
    assert_eq!(join(&[-1.0, 2.0], &[0.0, 1.0]), vec![0.0, 2.0]);
    assert_eq!(meet(&[-1.0, 2.0], &[0.0, 1.0]), vec![-1.0, 1.0]);
}

fn variants() -> Vec<(NormedLattice, f64)> {
    let m3 = AtomicMeasure::new(vec![1.0, 2.0, 0.5]).unwrap();
    let l2 = NormedLattice::lp(3, 2.0).unwrap();
    vec![
        (NormedLattice::lp(3, 1.5).unwrap(), 1e-12),
        (NormedLattice::lp(3, f64::INFINITY).unwrap(), 1e-12),
        (NormedLattice::lorentz_pinfty(2.0, 1.0, m3.clone()).unwrap(), 1e-12),
        (NormedLattice::lorentz_pinfty(3.0, 2.0, m3.clone()).unwrap(), 1e-12),
        (NormedLattice::lorentz_q1(2.0, m3.clone()).unwrap(), 1e-12),
        (
            NormedLattice::linf_sum(vec![NormedLattice::lp(1, 2.0).unwrap(), NormedLattice::lp(2, 1.0).unwrap()]).unwrap(),
            1e-12,
        ),
        (
            NormedLattice::block_lorentz(
                NormedLattice::lorentz_pinfty(2.0, 1.0, AtomicMeasure::counting(1)).unwrap(),
                vec![l2.clone()],
            )
            .unwrap(),
            1e-12,
        ),
        (NormedLattice::example54_dual(2.0).unwrap(), 1e-12),
        (NormedLattice::predual_of(NormedLattice::lorentz_pinfty(2.0, 1.0, m3).unwrap()).unwrap(), 1e-9),
        (
            NormedLattice::gauge_of(SolidConvexBody::new(3, vec![vec![1.0, 0.5, 0.0], vec![0.0, 1.0, 1.0], vec![0.3, 0.0, 1.0]]).unwrap())
                .unwrap(),
            1e-9,
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_solid(y in prop::collection::vec(-5.0f64..5.0, 3), shrink in prop::collection::vec(0.0f64..1.0, 3)) {
        let x: Vec<f64> = y.iter().zip(&shrink).map(|(a, s)| a * s).collect();
        for (lat, tol) in variants() {
            prop_assert!(lat.norm(&x) <= lat.norm(&y) + tol, "{:?}", lat.spec());
            let flipped: Vec<f64> = y.iter().map(|v| -v).collect();
            prop_assert!(close(lat.norm(&flipped), lat.norm(&y), tol));
        }
    }

    #[test]
    fn norms_are_homogeneous_and_subadditive(
        x in prop::collection::vec(-5.0f64..5.0, 3),
        y in prop::collection::vec(-5.0f64..5.0, 3),
        c in 0.0f64..4.0,
    ) {
        for (lat, tol) in variants() {
            let cx: Vec<f64> = x.iter().map(|v| c * v).collect();
            prop_assert!(close(lat.norm(&cx), c * lat.norm(&x), 1e-6 * (1.0 + c * lat.norm(&x))));
            let s: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            prop_assert!(lat.norm(&s) <= lat.norm(&x) + lat.norm(&y) + tol.max(1e-9));
        }
    }

    #[test]
    fn sigma_axioms(t in prop::collection::vec(-3.0f64..3.0, 4), u in prop::collection::vec(-3.0f64..3.0, 4), p in prop::sample::select(vec![1.0, 1.5, 2.0, 4.0, f64::INFINITY])) {
        let s = SymmetricSeqNorm::ell(p).unwrap();
        let mut rev = t.clone();
        rev.reverse();
        prop_assert!(close(s.eval(&t), s.eval(&rev), 1e-12));
        prop_assert!(close(s.eval(&[1.0, 0.0, 0.0]), 1.0, 1e-15));
        let sum: Vec<f64> = t.iter().zip(&u).map(|(a, b)| a + b).collect();
        prop_assert!(s.eval(&sum) <= s.eval(&t) + s.eval(&u) + 1e-12);
    }

    #[test]
    fn pairing_lemma(
        us in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 3), 1..5),
        seed in prop::collection::vec(-2.0f64..2.0, 15),
        p in prop::sample::select(vec![1.0, 2.0, f64::INFINITY]),
    ) {
        let vs: Vec<Vec<f64>> = (0..us.len()).map(|i| seed[3 * i..3 * i + 3].to_vec()).collect();
        let s = SymmetricSeqNorm::ell(p).unwrap();
        let lhs: f64 = us.iter().zip(&vs).map(|(u, v)| dot(u, v)).sum();
        let rhs = dot(&sigma_apply(&s, &us).unwrap(), &sigma_apply(&sigma_dual(&s), &vs).unwrap());
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn lp_dual_matches_closed_form(b in prop::collection::vec(-3.0f64..3.0, 1..6), p in prop::sample::select(vec![1.0, 1.2, 2.0, 3.5, f64::INFINITY])) {
        let x = NormedLattice::lp(b.len(), p).unwrap();
        let d = eval_dual_norm(&x, &b, 100, 0).unwrap();
        prop_assert!(close(d.value, lp_norm(&b, conjugate(p)), 1e-9));
        prop_assert_eq!(d.side, Side::Exact);
    }
}
