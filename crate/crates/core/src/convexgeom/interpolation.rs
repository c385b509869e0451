use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exponent::Exponent;
use crate::lattice::Vector;
use crate::search::{self, Rng};

use super::SolidConvexBody;

const STREAM_HULL0: u64 = 91;
const STREAM_HULL1: u64 = 92;

/// Inner exponents of the operator being factored: `p₂ ∈ {p, ∞}`, `q₂ ∈ {1, q}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationCase {
    pub p2: Exponent,
    pub q2: Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterpolatedExponents {
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub p_theta: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub q_theta: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub pbar2: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub qbar2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interpolation {
    #[serde(skip)]
    pub c_theta: SolidConvexBody,
    pub exponents: InterpolatedExponents,
    pub generators: usize,
    pub hull_samples: usize,
    pub midpoint_checks: usize,
    pub midpoint_max_gauge: f64,
    pub pass: bool,
}

/// `1/p_θ = θ/p + (1−θ)` with `q_θ = q/(1−θ)` for `q₂ = 1`, and `q_θ = q/θ`
/// for the `(p,∞)`-convex, `(q,q)`-concave case. A `(q,q)`-concave operator is
/// also `(q,1)`-concave, so `p₂ = p, q₂ = q` falls under the first rule.
pub fn interpolated_exponents(theta: f64, p: f64, q: f64, case: InterpolationCase) -> Result<InterpolatedExponents> {
    if !(theta > 0.0 && theta < 1.0) {
        return invalid(format!("theta must lie in (0, 1), got {theta}"));
    }
    let (pe, qe) = (Exponent::new(p)?, Exponent::new(q)?);
    if case.p2 != pe && !case.p2.is_infinite() {
        return invalid("p2 must be p or inf");
    }
    if case.q2 != qe && case.q2 != Exponent::ONE {
        return invalid("q2 must be 1 or q");
    }
    let p_theta = 1.0 / (theta * pe.recip() + (1.0 - theta));
    let by_q2_one = case.q2 == Exponent::ONE || !case.p2.is_infinite();
    Ok(if by_q2_one {
        InterpolatedExponents {
            p_theta,
            q_theta: q / (1.0 - theta),
            pbar2: if case.p2.is_infinite() { f64::INFINITY } else { p_theta },
            qbar2: 1.0,
        }
    } else {
        let q_theta = q / theta;
        InterpolatedExponents {
            p_theta,
            q_theta,
            pbar2: f64::INFINITY,
            qbar2: q_theta,
        }
    })
}

fn hull_sample(body: &SolidConvexBody, rng: &mut Rng) -> Vector {
    let gens = body.generators();
    let k = 1 + search::index(rng, gens.len().min(3));
    let w: Vec<f64> = (0..k).map(|_| search::exponential(rng)).collect();
    let s: f64 = w.iter().sum();
    let mut out = vec![0.0; body.dim()];
    for wi in &w {
        let g = &gens[search::index(rng, gens.len())];
        for (o, v) in out.iter_mut().zip(g) {
            *o += wi / s * v;
        }
    }
    out
}

fn product(a: &[f64], b: &[f64], theta: f64) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.powf(theta) * y.powf(1.0 - theta)).collect()
}

fn midpoint(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Inner approximation of `C_θ = {v : |v| ≤ |v₀|^θ |v₁|^{1−θ}, v₀ ∈ C₀, v₁ ∈ C₁}`.
///
/// Generators are the products over all generator pairs and over `samples`
/// paired hull samples; for consecutive sample pairs the product of the
/// midpoints is added too, which dominates the midpoint of the two products
/// (Hölder) and so certifies the convexity check. Samples are prefix-stable in
/// `samples`.
pub fn interpolate_theta(
    c0: &SolidConvexBody,
    c1: &SolidConvexBody,
    theta: f64,
    p: f64,
    q: f64,
    case: InterpolationCase,
    samples: usize,
    seed: u64,
) -> Result<Interpolation> {
    let exponents = interpolated_exponents(theta, p, q, case)?;
    crate::error::check_dim(c0.dim(), c1.dim())?;
    let dim = c0.dim();
    let mut gens: Vec<Vector> = Vec::new();
    for g in c0.generators() {
        for h in c1.generators() {
            gens.push(product(g, h, theta));
        }
    }
    let empty = c0.generators().is_empty() || c1.generators().is_empty();
    let (h0, h1): (Vec<Vector>, Vec<Vector>) = if empty {
        (vec![], vec![])
    } else {
        (0..samples as u64)
            .map(|k| {
                (
                    hull_sample(c0, &mut search::trial_rng(seed, STREAM_HULL0, k)),
                    hull_sample(c1, &mut search::trial_rng(seed, STREAM_HULL1, k)),
                )
            })
            .unzip()
    };
    let members: Vec<Vector> = h0.iter().zip(&h1).map(|(a, b)| product(a, b, theta)).collect();
    gens.extend(members.iter().cloned());
    for k in 1..members.len() {
        gens.push(product(&midpoint(&h0[k - 1], &h0[k]), &midpoint(&h1[k - 1], &h1[k]), theta));
    }
    let c_theta = SolidConvexBody::new(dim, gens)?;
    let mids: Vec<Vector> = (1..members.len()).map(|k| midpoint(&members[k - 1], &members[k])).collect();
    let gauges: Vec<Result<f64>> = mids.par_iter().map(|v| c_theta.gauge(v)).collect();
    let mut midpoint_max_gauge = 0.0f64;
    for g in gauges {
        midpoint_max_gauge = midpoint_max_gauge.max(g?);
    }
    Ok(Interpolation {
        generators: c_theta.generators().len(),
        c_theta,
        exponents,
        hull_samples: members.len(),
        midpoint_checks: mids.len(),
        midpoint_max_gauge,
        pass: midpoint_max_gauge <= 1.0 + 1e-6,
    })
}
