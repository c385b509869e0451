//! Upper estimates, q-convexity and the ℓ_{p,∞}(ℓ_p) counterexample.

use lattice_lab::constants::{check_q_convexity_bound, estimate_constant, gamma, reproduce_lpinfty_lp, ConstantKind};
use lattice_lab::lattice::AtomicMeasure;
use lattice_lab::{LinOperator, NormedLattice};

fn main() -> lattice_lab::Result<()> {
    let l1 = NormedLattice::lp(3, 1.0)?;
    let k = estimate_constant(&LinOperator::identity(l1), ConstantKind::upper(2.0)?, 200, 0);
    println!("K(up 2) of l1^3: {:.6} ({:?}), sqrt(3) = {:.6}", k.value, k.side, 3f64.sqrt());

    let w = AtomicMeasure::new(vec![0.5, 1.0, 2.0, 0.25])?;
    let x = NormedLattice::lorentz_pinfty(2.0, 1.0, w)?;
    let k = estimate_constant(&LinOperator::identity(x.clone()), ConstantKind::upper(2.0)?, 500, 1);
    println!("K(up 2) of weighted L_(2,inf)^[1]: {:.6}", k.value);

    println!("gamma_2 = {:.10}", gamma(2.0)?);
    let r = check_q_convexity_bound(&x, 2.0, 1.0, 500, 2)?;
    println!("K(1) lower bound {:.6} <= bound {:.6}: {}", r.estimate.value, r.bound, r.pass);

    for p in [1.5, 2.0, 3.0] {
        let rep = reproduce_lpinfty_lp(p, 8)?;
        let table: Vec<String> = rep.growth_table.iter().map(|g| format!("A_{}={:.5}", g.n, g.a_n)).collect();
        println!("p={p}: A_8={:.6} ratio={:.6} pass={} [{}]", rep.a_n, rep.vee_ratio, rep.pass, table.join(" "));
    }
    Ok(())
}
