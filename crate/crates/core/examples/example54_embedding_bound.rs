//! Example 5.4: a three-dimensional lattice with an upper p-estimate of
//! constant 1 that does not embed isometrically into an ℓ∞-sum of weak-L_p.

use lattice_lab::embedcert::{reproduce_example54, t41_check, T41Outcome};
use lattice_lab::lattice::AtomicMeasure;
use lattice_lab::NormedLattice;

fn main() -> lattice_lab::Result<()> {
    for p in [4.0 / 3.0, 2.0, 4.0] {
        let r = reproduce_example54(p, 2000, 0)?;
        println!(
            "p={p:.4}: lower p*-estimate constant {:.9}, bound {:.9} (closed form {:.9}), bracket [{:.6}, {:?}] gamma_p={:.6}, pass={}",
            r.lower_estimate.value, r.bound, r.closed_form, r.bracket.lower, r.bracket.upper_search, r.bracket.gamma_p, r.pass
        );
    }

    let x = NormedLattice::lorentz_pinfty(3.0, 1.0, AtomicMeasure::new(vec![0.7, 1.9])?)?;
    let a = vec![0.4, 1.0];
    let s = x.norm(&a);
    let a: Vec<f64> = a.iter().map(|v| v / s).collect();
    match t41_check(&x, 3.0, 1.0 + 1e-4, &a, 1e-6, 2000, 0)? {
        T41Outcome::Certificate(c) => println!("2-dim weighted Lorentz: certificate b={:?} d={:?}", c.b, c.d),
        T41Outcome::Infeasible(r) => println!("2-dim weighted Lorentz: no certificate, best pairing {}", r.best_pairing),
    }
    Ok(())
}
