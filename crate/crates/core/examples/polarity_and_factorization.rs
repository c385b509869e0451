//! The polar of the sampled `C` set against the `D` set of the adjoint, and
//! the minimal factorization through the gauge of `C`.

use lattice_lab::convexgeom::{build_minimal_factorization, verify_polarity};
use lattice_lab::{LinOperator, NormedLattice, SymmetricSeqNorm};

fn main() -> lattice_lab::Result<()> {
    let e = NormedLattice::lp(2, 2.0)?;
    let x = NormedLattice::lp(2, 2.0)?;
    let t = LinOperator::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]], e, x)?;
    let l2 = SymmetricSeqNorm::ell(2.0)?;
    let linf = SymmetricSeqNorm::ell(f64::INFINITY)?;

    let r = verify_polarity(&t, l2, l2, 200, 10_000, 0)?;
    println!(
        "polarity diag(2,1): generators={} in_polar={} violations={} resolved={} reverse_gap={} pass={}",
        r.c_generators, r.in_polar, r.violations, r.resolved_by_witness, r.reverse_gap, r.pass
    );

    let e = NormedLattice::lp(3, 1.5)?;
    let x = NormedLattice::lp(3, 3.0)?;
    let t = LinOperator::new(
        vec![vec![1.0, -0.5, 0.2], vec![0.3, 1.0, 0.0], vec![0.0, 0.4, -1.0]],
        e,
        x,
    )?;
    for (name, sigma) in [("l_2", SymmetricSeqNorm::ell(2.0)?), ("l_inf", linf)] {
        let r = verify_polarity(&t, SymmetricSeqNorm::ell(2.0)?, sigma, 200, 10_000, 1)?;
        println!(
            "polarity 3x3 tau=l_2 sigma={name}: generators={} in_polar={} violations={} resolved={} reverse_gap={} pass={}",
            r.c_generators, r.in_polar, r.violations, r.resolved_by_witness, r.reverse_gap, r.pass
        );
        let f = build_minimal_factorization(&t, SymmetricSeqNorm::ell(2.0)?, sigma, 10_000, 2)?;
        let c = &f.norm_checks;
        println!(
            "  factorization: dim_Y={} U0={:.2e} U0_fresh={:.2e} V0={:.6} K={:.6} ratio_max={:.9} fresh={:.6} families={} pass={}",
            f.dim_y, c.u0, c.u0_fresh, c.v0, c.k_estimate, c.convexity_ratio_max, c.fresh_ratio_max, c.convexity_families, c.pass
        );
    }
    Ok(())
}
