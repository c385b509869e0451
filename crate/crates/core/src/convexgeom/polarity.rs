use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::lattice::{dot, norming_vector, LinOperator, NormSpec, SymmetricSeqNorm, Vector};
use crate::search;

use super::cbody::{build_c, family_generator};
use super::dset::search_d_violation;
use super::SolidConvexBody;

const STREAM_SAMPLE: u64 = 71;
pub const POLAR_SLACK: f64 = 1e-6;
pub const SAMPLING_SLACK: f64 = 5e-2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarityCandidate {
    pub check: &'static str,
    pub u_star: Vector,
    pub support: f64,
    pub rho_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarityReport {
    pub samples: usize,
    pub c_generators: usize,
    /// Samples in the polar of the sampled body.
    pub in_polar: usize,
    /// Samples with a found violation of the `D` condition.
    pub violations: usize,
    /// Violations at samples in the polar that were turned into a body point
    /// separating the sample.
    pub resolved_by_witness: usize,
    /// Samples outside the polar with no violation found (sampling gap, not gated).
    pub reverse_gap: usize,
    pub check_a: bool,
    pub check_b: bool,
    pub candidates: Vec<PolarityCandidate>,
    pub pass: bool,
}

/// The body point built from a `D`-violation `(u_i*)` of `T*`: with `x_i` norming
/// `T*u_i*` and `c` norming `(‖T*u_i*‖)` for `τ`, the family `(c_i x_i)` has
/// `⟨σ(|Tc_ix_i|), |u*|⟩ ≥ τ*(‖T*u_i*‖)`.
fn separating_point(t: &LinOperator, tau: &SymmetricSeqNorm, sigma: &SymmetricSeqNorm, witness: &[Vector]) -> Option<Vector> {
    let adj = t.adjoint();
    let p_dom = match t.domain().spec() {
        NormSpec::Lp(p) => p.value(),
        _ => return None,
    };
    let images: Vec<Vector> = witness.iter().map(|u| adj.apply(u)).collect();
    let norms: Vec<f64> = images.iter().map(|w| adj.codomain().norm(w)).collect();
    let c = norming_vector(&norms, tau.p.value())?;
    let fam: Vec<Vector> = images
        .iter()
        .zip(&c)
        .map(|(w, ci)| match norming_vector(w, p_dom) {
            Some(x) => x.iter().map(|v| v * ci).collect(),
            None => vec![0.0; w.len()],
        })
        .collect();
    family_generator(t, tau, sigma, &fam)
}

/// Numerical check of `(C_T^{τ,σ})° = D^{T*}_{τ*,σ*}` on sampled functionals.
///
/// (a) samples in the polar of the sampled body must show no `D`-violation at
/// `1 + 1e-6`; a violation is first converted into a body point (the pairing
/// argument) and counts as a failure only if that point does not separate.
/// (b) samples with a found violation must have support value above `1 − 5e-2`
/// on the sampled body.
pub fn verify_polarity(
    t: &LinOperator,
    tau: SymmetricSeqNorm,
    sigma: SymmetricSeqNorm,
    sample_count: usize,
    budget: usize,
    seed: u64,
) -> Result<PolarityReport> {
    let lp = |s: &NormSpec| matches!(s, NormSpec::Lp(_));
    if !lp(t.domain().spec()) || !lp(t.codomain().spec()) {
        return invalid("verify_polarity needs lp domain and codomain");
    }
    let c = build_c(t, &tau, &sigma, budget, seed)?.body;
    let adj = t.adjoint();
    let m = t.codomain().dim();
    let d_budget = (budget / 10).max(100);
    let samples: Vec<Vector> = (0..sample_count as u64)
        .map(|i| {
            let mut rng = search::trial_rng(seed, STREAM_SAMPLE, i);
            let mut u = search::gaussian_vec(&mut rng, m);
            if i < m as u64 {
                u = vec![0.0; m];
                u[i as usize] = 1.0;
            }
            let target = 0.5 + search::uniform(&mut rng);
            let h = c.support_function(&u).unwrap_or(0.0);
            let s = if h > 0.0 { target / h } else { target };
            u.iter().map(|v| v * s).collect()
        })
        .collect();
    let rows: Vec<Result<(Vector, f64, crate::convexgeom::DSearch)>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let h = c.support_function(u)?;
            let d = search_d_violation(&adj, u, tau.dual(), sigma.dual(), d_budget, seed.wrapping_add(i as u64))?;
            Ok((u.clone(), h, d))
        })
        .collect();

    let mut extra: Vec<Vector> = Vec::new();
    let mut report = PolarityReport {
        samples: sample_count,
        c_generators: c.generators().len(),
        in_polar: 0,
        violations: 0,
        resolved_by_witness: 0,
        reverse_gap: 0,
        check_a: true,
        check_b: true,
        candidates: Vec::new(),
        pass: true,
    };
    for row in rows {
        let (u, h, d) = row?;
        let abs_u: Vec<f64> = u.iter().map(|v| v.abs()).collect();
        if h <= 1.0 {
            report.in_polar += 1;
        }
        if d.rho_lower > 1.0 {
            report.violations += 1;
            if h <= 1.0 - SAMPLING_SLACK {
                report.check_b = false;
                report.candidates.push(PolarityCandidate {
                    check: "b",
                    u_star: u.clone(),
                    support: h,
                    rho_lower: d.rho_lower,
                });
            }
        } else if h > 1.0 {
            report.reverse_gap += 1;
        }
        if h <= 1.0 && d.rho_lower > 1.0 + POLAR_SLACK {
            let point = d.witness.as_deref().and_then(|w| separating_point(t, &tau, &sigma, w));
            match point {
                Some(g) if dot(&g, &abs_u) > 1.0 => {
                    report.resolved_by_witness += 1;
                    extra.push(g);
                }
                _ => {
                    report.check_a = false;
                    report.candidates.push(PolarityCandidate {
                        check: "a",
                        u_star: u.clone(),
                        support: h,
                        rho_lower: d.rho_lower,
                    });
                }
            }
        }
    }
    let augmented: SolidConvexBody = c.extended(extra)?;
    report.c_generators = augmented.generators().len();
    report.pass = report.check_a && report.check_b;
    Ok(report)
}
