//! Embedding weak-L_p^[r] into weak-L_p^[1] on a step function with `C ≤ 1`.

use lattice_lab::lattice::AtomicMeasure;
use lattice_lab::lorentz::{build_weak_lp_embedding, StepFunction};

fn main() -> lattice_lab::Result<()> {
    let (p, r) = (3.0, 1.5);
    let w = vec![0.5, 1.0, 1.5];
    let raw = [1.0, 0.6, 0.3];
    let m: f64 = w.iter().sum();
    let ar = w.iter().zip(&raw).map(|(w, v)| w * f64::powf(*v, r)).sum::<f64>().powf(1.0 / r);
    let scale = 0.8 / (m.powf(1.0 / p - 1.0 / r) * ar);
    let a = StepFunction::new(raw.iter().map(|v| v * scale).collect(), AtomicMeasure::new(w)?)?;

    let emb = build_weak_lp_embedding(&a, p, r, 0)?;
    println!("C = {:.6}, M = {:.6}, s = {:.6}", emb.c, emb.m, emb.s);
    println!("nu = {:?}", emb.nu.weights());
    println!("S = diag{:?}", emb.coefficients);
    let v = &emb.verification;
    println!(
        "{} probes, max excess {:.2e}, ||Sa|| = {:.6} >= C^r = {:.6}: {}",
        v.probes, v.max_excess, v.sa_norm, v.c_pow_r, v.pass
    );
    println!("S a = {:?}", emb.apply(&a.values));
    Ok(())
}
