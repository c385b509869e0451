//! Calderón products of two solid convex bodies and the interpolated exponents.

use lattice_lab::convexgeom::{interpolate_theta, interpolated_exponents, InterpolationCase, SolidConvexBody};
use lattice_lab::Exponent;

fn main() -> lattice_lab::Result<()> {
    let c0 = SolidConvexBody::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let c1 = SolidConvexBody::new(2, vec![vec![1.0, 1.0]])?;
    let case = InterpolationCase {
        p2: Exponent::INFINITY,
        q2: Exponent::ONE,
    };
    for theta in [0.25, 0.5, 0.75] {
        let e = interpolated_exponents(theta, 2.0, 2.0, case)?;
        let out = interpolate_theta(&c0, &c1, theta, 2.0, 2.0, case, 40, 0)?;
        println!(
            "theta={theta}: p_theta={:.4} q_theta={:.4}, {} generators, gauge of (0.5,0.5) = {:.4}, midpoints ok: {}",
            e.p_theta,
            e.q_theta,
            out.generators,
            out.c_theta.gauge(&[0.5, 0.5])?,
            out.pass
        );
    }
    Ok(())
}
