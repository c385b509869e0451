use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{estimate_constant, ConstantKind};
use crate::error::Result;
use crate::lattice::{sigma_apply_unchecked, LinOperator, NormedLattice, SymmetricSeqNorm, Vector};
use crate::search::{self, Rng};

use super::cbody::build_c;
use super::SolidConvexBody;

const STREAM_FAMILY: u64 = 81;
const STREAM_FRESH: u64 = 82;
/// Families whose members drop below this gauge in the closed body are discarded.
const BOUNDARY: f64 = 1.0 - 1e-8;
pub const FACTOR_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorizationKind {
    ClassC,
    ClassD,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationChecks {
    /// `max |V₀U₀e_j − Te_j|`.
    pub composition_error: f64,
    /// `max gauge(U₀x) − ‖x‖` over the construction's unit vectors.
    #[serde(rename = "U0")]
    pub u0: f64,
    /// Same on fresh unit vectors; an inner approximation may exceed 0 here.
    pub u0_fresh: f64,
    /// `max ‖V₀g‖ / gauge(g)` over generators.
    #[serde(rename = "V0")]
    pub v0: f64,
    /// Lower bound for the `(τ,σ)`-convexity constant of `T`.
    pub k_estimate: f64,
    pub convexity_families: usize,
    pub convexity_ratio_max: f64,
    /// Ratios on fresh families of body points, reported only.
    pub fresh_ratio_max: f64,
    /// Combinations of tested families added to the body.
    pub closure_points: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationTriple {
    pub kind: FactorizationKind,
    #[serde(rename = "dim_Y")]
    pub dim_y: usize,
    /// Rank of the generator matrix of the sampled body, before closure points.
    pub generator_rank: usize,
    #[serde(skip)]
    pub y: NormedLattice,
    #[serde(skip)]
    pub u: LinOperator,
    #[serde(skip)]
    pub v: LinOperator,
    pub norm_checks: FactorizationChecks,
}

pub(crate) fn rank(rows: &[Vector]) -> usize {
    let mut a: Vec<Vector> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * scale.max(1e-300);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
            break;
        };
        if a[piv][c].abs() <= tol {
            continue;
        }
        a.swap(r, piv);
        for i in 0..a.len() {
            if i != r {
                let f = a[i][c] / a[r][c];
                for k in c..cols {
                    a[i][k] -= f * a[r][k];
                }
            }
        }
        r += 1;
    }
    r
}

/// A tested family `(c_i h_i)` with `τ(c) = 1` and its `σ`-combination.
struct Family {
    members: Vec<Vector>,
    coeffs: Vec<f64>,
    combination: Vector,
}

fn tau_unit(rng: &mut Rng, len: usize, tau: &SymmetricSeqNorm) -> Vec<f64> {
    let c: Vec<f64> = (0..len).map(|_| search::exponential(rng) + 1e-3).collect();
    let s = tau.eval(&c);
    c.iter().map(|v| v / s).collect()
}

fn sample_family(
    k: u64,
    seed: u64,
    body: &SolidConvexBody,
    tau: &SymmetricSeqNorm,
    sigma: &SymmetricSeqNorm,
    disjoint: bool,
) -> Option<Family> {
    let gens = body.generators();
    let m = body.dim();
    let mut rng = search::trial_rng(seed, STREAM_FAMILY, k);
    let len = 2 + search::index(&mut rng, (2 * m).max(2) - 1);
    let coeffs = tau_unit(&mut rng, len, tau);
    let labels: Vec<usize> = (0..m).map(|_| search::index(&mut rng, len)).collect();
    let mut members = Vec::with_capacity(len);
    for i in 0..len {
        let g = &gens[search::index(&mut rng, gens.len())];
        let h: Vector = if disjoint {
            let r: Vector = g.iter().zip(&labels).map(|(v, l)| if *l == i { *v } else { 0.0 }).collect();
            let gauge = body.gauge(&r).ok()?;
            if !(gauge > 0.0 && gauge.is_finite()) {
                return None;
            }
            r.iter().map(|v| v / gauge).collect()
        } else {
            g.clone()
        };
        members.push(h);
    }
    let scaled: Vec<Vector> = members
        .iter()
        .zip(&coeffs)
        .map(|(h, c)| h.iter().map(|v| v * c).collect())
        .collect();
    let combination = sigma_apply_unchecked(sigma, &scaled, m);
    Some(Family {
        members,
        coeffs,
        combination,
    })
}

fn on_boundary(body: &SolidConvexBody, fam: &Family) -> bool {
    fam.members
        .iter()
        .all(|h| body.gauge(h).is_ok_and(|g| g >= BOUNDARY))
}

fn family_ratio(body: &SolidConvexBody, tau: &SymmetricSeqNorm, members: &[Vector], combination: &[f64]) -> f64 {
    let num = body.gauge(combination).unwrap_or(f64::INFINITY);
    let den: Vec<f64> = members.iter().map(|h| body.gauge(h).unwrap_or(f64::INFINITY)).collect();
    let d = tau.eval(&den);
    if d > 0.0 {
        num / d
    } else {
        0.0
    }
}

/// Minimal `(τ,σ)`-convex factorization `T = V₀U₀` through `Y₀ = (span C, gauge of C)`.
///
/// `C` is the sampled inner approximation of `C_T^{τ,σ}`. The body is closed
/// under the `σ`-combinations of the tested families: combinations of
/// generators are themselves generators (concatenate the families), and
/// combinations of normalized disjoint restrictions lie in `C` because `C` is
/// `(τ,σ)`-convex with constant 1. Families whose members leave the boundary
/// of the closed body are discarded before measuring.
pub fn build_minimal_factorization(
    t: &LinOperator,
    tau: SymmetricSeqNorm,
    sigma: SymmetricSeqNorm,
    budget: usize,
    seed: u64,
) -> Result<FactorizationTriple> {
    let n = t.domain().dim();
    let m = t.codomain().dim();
    let identity: Vec<Vector> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    if t.is_zero() {
        let y = NormedLattice::gauge_of(SolidConvexBody::new(m, vec![])?)?;
        let u = LinOperator::new(vec![vec![0.0; n]; m], t.domain().clone(), y.clone())?;
        let v = LinOperator::new(identity, y.clone(), t.codomain().clone())?;
        return Ok(FactorizationTriple {
            kind: FactorizationKind::ClassC,
            dim_y: 0,
            generator_rank: 0,
            y,
            u,
            v,
            norm_checks: FactorizationChecks {
                composition_error: 0.0,
                u0: 0.0,
                u0_fresh: 0.0,
                v0: 0.0,
                k_estimate: 0.0,
                convexity_families: 0,
                convexity_ratio_max: 0.0,
                fresh_ratio_max: 0.0,
                closure_points: 0,
                pass: true,
            },
        });
    }
    let built = build_c(t, &tau, &sigma, budget, seed)?;
    let base = built.body;

    let wanted = 500usize;
    let disjoint_share = if sigma.p.is_infinite() { wanted / 2 } else { 0 };
    let disjoint_candidates = 6 * disjoint_share;
    let total = disjoint_candidates + 2 * wanted;
    let candidates: Vec<(Family, bool)> = (0..total as u64)
        .into_par_iter()
        .filter_map(|k| {
            let disjoint = (k as usize) < disjoint_candidates;
            sample_family(k, seed, &base, &tau, &sigma, disjoint).map(|f| (f, disjoint))
        })
        .collect();
    let wide = base.extended(candidates.iter().map(|(f, _)| f.combination.clone()))?;
    let keep: Vec<bool> = candidates.par_iter().map(|(f, _)| on_boundary(&wide, f)).collect();
    let mut chosen: Vec<&Family> = Vec::new();
    let (mut n_disjoint, mut n_general) = (0, 0);
    for ((f, disjoint), ok) in candidates.iter().zip(keep) {
        if !ok {
            continue;
        }
        if *disjoint && n_disjoint < disjoint_share {
            n_disjoint += 1;
            chosen.push(f);
        } else if !*disjoint && n_disjoint + n_general < wanted {
            n_general += 1;
            chosen.push(f);
        }
    }
    let body = base.extended(chosen.iter().map(|f| f.combination.clone()))?;
    let closure_points = body.generators().len() - base.generators().len();

    let ratios: Vec<f64> = chosen
        .par_iter()
        .map(|f| {
            let scaled: Vec<Vector> = f
                .members
                .iter()
                .zip(&f.coeffs)
                .map(|(h, c)| h.iter().map(|v| v * c).collect())
                .collect();
            family_ratio(&body, &tau, &scaled, &f.combination)
        })
        .collect();
    let convexity_ratio_max = ratios.iter().cloned().fold(0.0, f64::max);

    let fresh: Vec<f64> = (0..200u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = search::trial_rng(seed, STREAM_FRESH, k);
            let len = 2 + search::index(&mut rng, (2 * m).max(2) - 1);
            let gens = body.generators();
            let members: Vec<Vector> = (0..len)
                .map(|_| {
                    let a = &gens[search::index(&mut rng, gens.len())];
                    let b = &gens[search::index(&mut rng, gens.len())];
                    let l = search::uniform(&mut rng);
                    let c = search::exponential(&mut rng);
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| c * (l * x + (1.0 - l) * y) * if search::uniform(&mut rng) < 0.5 { -1.0 } else { 1.0 })
                        .collect()
                })
                .collect();
            let comb = sigma_apply_unchecked(&sigma, &members, m);
            family_ratio(&body, &tau, &members, &comb)
        })
        .collect();
    let fresh_ratio_max = fresh.iter().cloned().fold(0.0, f64::max);

    let u0 = built
        .singles
        .par_iter()
        .map(|x| body.gauge(&t.apply(x)).unwrap_or(f64::INFINITY) - t.domain().norm(x))
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let u0_fresh = (0..200u64)
        .into_par_iter()
        .map(|k| {
            let x = search::gaussian_vec(&mut search::trial_rng(seed, STREAM_FRESH + 1, k), n);
            let s = t.domain().norm(&x);
            body.gauge(&t.apply(&x)).unwrap_or(f64::INFINITY) / s - 1.0
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);

    let kind = ConstantKind::Convex { p: tau.p, p2: sigma.p };
    let estimate = estimate_constant(t, kind, budget.min(2000), seed);
    let gen_norm = body
        .generators()
        .iter()
        .map(|g| t.codomain().norm(g))
        .fold(0.0, f64::max);
    let k_estimate = estimate.value.max(gen_norm);
    let v0 = body
        .generators()
        .par_iter()
        .map(|g| {
            let gauge = body.gauge(g).unwrap_or(f64::INFINITY);
            t.codomain().norm(g) / gauge
        })
        .reduce(|| 0.0, f64::max);

    let y = NormedLattice::gauge_of(body.clone())?;
    let u = LinOperator::new(t.matrix().to_vec(), t.domain().clone(), y.clone())?;
    let v = LinOperator::new(identity, y.clone(), t.codomain().clone())?;
    let mut composition_error = 0.0f64;
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let lhs = v.apply(&u.apply(&e));
        let rhs = t.apply(&e);
        for (a, b) in lhs.iter().zip(&rhs) {
            composition_error = composition_error.max((a - b).abs());
        }
    }
    let dim_y = (0..m)
        .filter(|&j| body.generators().iter().any(|g| g[j] > 0.0))
        .count();
    let pass = composition_error <= 1e-12
        && u0 <= FACTOR_TOLERANCE
        && v0 <= k_estimate + FACTOR_TOLERANCE
        && convexity_ratio_max <= 1.0 + FACTOR_TOLERANCE;
    Ok(FactorizationTriple {
        kind: FactorizationKind::ClassC,
        dim_y,
        generator_rank: rank(base.generators()),
        y,
        u,
        v,
        norm_checks: FactorizationChecks {
            composition_error,
            u0,
            u0_fresh,
            v0,
            k_estimate,
            convexity_families: chosen.len(),
            convexity_ratio_max,
            fresh_ratio_max,
            closure_points,
            pass,
        },
    })
}
