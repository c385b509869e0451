//! Rearrangements, the weak-L_p quasinorm and its `[r]` renormings.

use lattice_lab::constants::alpha_sequence;
use lattice_lab::lattice::AtomicMeasure;
use lattice_lab::lorentz::{check_renorming_sandwich, norm_pinfty_r, norm_q1, quasinorm_pinfty, rearrange, StepFunction};

fn main() -> lattice_lab::Result<()> {
    let f = StepFunction::new(vec![1.0, -3.0, 2.0, 0.5], AtomicMeasure::new(vec![0.5, 1.0, 0.25, 2.0])?)?;
    let r = rearrange(&f);
    println!("f* values {:?} on breakpoints {:?}", r.values, r.breakpoints);
    println!("f*(0.9) = {}", r.at(0.9));

    let p = 2.0;
    println!("quasinorm: {:.6}", quasinorm_pinfty(&f, p)?);
    for rr in [1.0, 1.2, 1.5] {
        let e = norm_pinfty_r(&f, p, rr)?;
        let s = check_renorming_sandwich(&f, p, rr)?;
        println!(
            "[r={rr}] norm {:.6} ({:?}), ratio {:.4} <= {:.4}",
            e.value, e.side, s.ratio, s.upper_factor
        );
    }
    println!("L_(2,1) norm: {:.6}", norm_q1(&f, 2.0)?);

    let alpha = StepFunction::counting(alpha_sequence(p, 16));
    println!("alpha sequence, n = 16: [1]-norm {:.12}", norm_pinfty_r(&alpha, p, 1.0)?.value);
    Ok(())
}
