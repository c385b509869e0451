//! θ lower bounds, the η factorization `u = S∘R` and multiplication operators
//! between Lorentz spaces.

use std::time::Instant;

use lattice_lab::idealnorms::{
    build_eta_factorization, multiplication_operator_check, theta_profile, IdealExponents, TensorRep,
};
use lattice_lab::lattice::AtomicMeasure;
use lattice_lab::search::{gaussian_vec, index, trial_rng};
use lattice_lab::NormedLattice;

fn main() -> lattice_lab::Result<()> {
    let ex = IdealExponents::new(2.0, f64::INFINITY, 2.0, 1.0)?;
    let l2 = NormedLattice::lp(2, 2.0)?;
    let single = TensorRep::new(vec![(vec![3.0, 4.0], vec![1.0, 1.0])], ex)?;
    let prof = theta_profile(&single, &l2, &l2, 4, 2000, 0)?;
    println!("single pair: theta = {:.9}, |x||y| = {:.9}", prof.estimate.value, 5.0 * 2f64.sqrt());

    let diag = TensorRep::new(vec![(vec![1.0, 0.0], vec![1.0, 0.0]), (vec![0.0, 1.0], vec![0.0, 1.0])], ex)?;
    let fac = build_eta_factorization(&diag, &l2, &l2, 2, 2000, 0)?;
    println!(
        "diag(1,1): |S R - u| = {:.1e}, K(R) = {:.6}, K(S) = {:.6}, theta = {:.6}, pass = {}",
        fac.composition_error, fac.product_bound.k_r, fac.product_bound.k_s, fac.product_bound.theta_lower, fac.pass
    );

    let start = Instant::now();
    let mut passed = 0;
    for trial in 0..20u64 {
        let mut rng = trial_rng(7, 0, trial);
        let de = 1 + index(&mut rng, 3);
        let df = 1 + index(&mut rng, 3);
        let n = 1 + index(&mut rng, 3);
        let pairs = (0..n).map(|_| (gaussian_vec(&mut rng, de), gaussian_vec(&mut rng, df))).collect();
        let (p, q) = (1.5 + index(&mut rng, 3) as f64 * 0.5, 1.5 + index(&mut rng, 3) as f64 * 0.5);
        let p2 = if index(&mut rng, 2) == 0 { p } else { f64::INFINITY };
        let q2 = if index(&mut rng, 2) == 0 { q } else { 1.0 };
        let rep = TensorRep::new(pairs, IdealExponents::new(p, p2, q, q2)?)?;
        let e = NormedLattice::lp(de, 1.0 + index(&mut rng, 3) as f64)?;
        let f = NormedLattice::lp(df, 1.0 + index(&mut rng, 3) as f64)?;
        let fac = build_eta_factorization(&rep, &e, &f, 2, 2000, trial)?;
        passed += fac.pass as usize;
        println!(
            "rep {trial:2} ({de}x{df}, n={n}): kr {:.6} ks {:.6} product {:.6} theta {:.6} diff {:+.2e} gens {} pass {}",
            fac.product_bound.k_r, fac.product_bound.k_s, fac.product_bound.product, fac.product_bound.theta_lower, fac.product_bound.difference, fac.z_generators, fac.pass
        );
    }
    println!("{passed}/20 factorizations pass in {:.1?}", start.elapsed());

    let source = NormedLattice::lorentz_pinfty(3.0, 1.0, AtomicMeasure::new(vec![0.5, 1.0, 1.5, 2.0])?)?;
    let target = NormedLattice::lorentz_q1(2.0, AtomicMeasure::new(vec![1.0, 0.8, 1.2, 0.6])?)?;
    let r = multiplication_operator_check(&[0.3, 1.2, 0.7, 2.0], &source, &target, 2000, 0)?;
    println!(
        "multiplier: |D| = {:.6}, K^(3,inf)(D) >= {:.6}, K_(2,1)(D) >= {:.6}, pass = {}",
        r.operator_norm, r.convex.value, r.concave.value, r.pass
    );
    Ok(())
}
