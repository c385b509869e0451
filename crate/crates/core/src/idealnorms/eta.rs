use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{estimate_constant, ratio, set_partitions, ConstantKind};
use crate::convexgeom::SolidConvexBody;
use crate::error::{check_dim, Result};
use crate::estimate::ConstantEstimate;
use crate::exponent::Exponent;
use crate::lattice::{dot, norming_vector, LinOperator, NormSpec, NormedLattice, Vector};
use crate::search::{self, AscentConfig};

use super::theta::{theta_lower, Problem};
use super::{lp_exponent, TensorRep};

const STREAM_SUPPORT: u64 = 121;
const STREAM_SIGNS: u64 = 122;
const SUPPORT_EVALS: usize = 600;
const SIGN_SAMPLES: u64 = 64;
const K_BUDGET_MAX: usize = 2000;
const PARTITION_MAX: usize = 6;
const REFINE_ROUNDS: usize = 8;

/// Allowed gap between `K^{(p,p₂)}(R)·K_{(q,q₂)}(S)` and the θ lower bound.
pub const ETA_TOLERANCE: f64 = 5e-2;
const COMPOSITION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductBound {
    pub k_r: f64,
    pub k_s: f64,
    pub product: f64,
    pub theta_lower: f64,
    pub difference: f64,
    pub within_tolerance: bool,
}

/// `u = S∘R` through `Z = (ℝⁿ, |||·|||)` with its 1-unconditional unit vector basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaFactorization {
    #[serde(skip)]
    pub z: NormedLattice,
    #[serde(skip)]
    pub r: LinOperator,
    #[serde(skip)]
    pub s: LinOperator,
    pub dim_z: usize,
    pub dropped_pairs: usize,
    pub trunc_len: usize,
    /// Sampled points `w(y*)`; the Z norm is their support function, a lower bound.
    pub z_generators: usize,
    pub composition_error: f64,
    pub unconditional_samples: usize,
    pub unconditional: bool,
    pub theta: ConstantEstimate,
    pub product_bound: ProductBound,
    pub pass: bool,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Points of the simplex grid `{d ∈ ℕⁿ : Σd = m}`.
fn simplex_grid(n: usize, m: usize) -> Vec<Vector> {
    fn rec(i: usize, left: usize, cur: &mut Vec<f64>, out: &mut Vec<Vector>) {
        if i + 1 == cur.len() {
            cur[i] = left as f64;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v as f64;
            rec(i + 1, left - v, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, m, &mut vec![0.0; n], &mut out);
    out
}

fn directions(n: usize, budget: usize) -> Vec<Vector> {
    let cap = (budget / 5).clamp(64, 600);
    if n == 1 {
        return vec![vec![1.0]];
    }
    let mut m = 1;
    while binomial(m + n, n - 1) <= cap {
        m += 1;
    }
    simplex_grid(n, m)
}

/// `w(y*)` at the norming functionals, the θ witness and support maximizers over a direction grid.
fn sample_w(problem: &Problem, n: usize, df: usize, l: usize, witness_y: &[f64], budget: usize, seed: u64) -> Vec<Vector> {
    let mut seeds: Vec<Vector> = (0..n)
        .map(|i| {
            let mut z = vec![0.0; l * df];
            z[..df].copy_from_slice(&problem.y_norming(i));
            z
        })
        .collect();
    seeds.push(witness_y.to_vec());
    let seed_w: Vec<Vector> = seeds
        .iter()
        .map(|z| problem.y_values(z, l).unwrap_or_else(|| vec![0.0; n]))
        .collect();
    let cfg = AscentConfig {
        max_evals: SUPPORT_EVALS,
        ..AscentConfig::default()
    };
    let partitions: Vec<Vec<usize>> = if n <= PARTITION_MAX {
        set_partitions(n).into_iter().filter(|c| c.iter().all(|&k| k < l)).collect()
    } else {
        vec![vec![0; n], (0..n).map(|i| i.min(l - 1)).collect()]
    };
    let dirs = directions(n, budget);
    let found: Vec<Vector> = dirs
        .par_iter()
        .enumerate()
        .filter_map(|(i, d)| {
            let f = |z: &[f64]| problem.y_values(z, l).map_or(0.0, |w| dot(d, &w));
            let mut start = (0..seeds.len())
                .max_by(|&a, &b| dot(d, &seed_w[a]).total_cmp(&dot(d, &seed_w[b])).then(b.cmp(&a)))
                .map(|k| seeds[k].clone())?;
            let mut best = f(&start);
            for labels in &partitions {
                let z = problem.partition_family(d, labels, l);
                let v = f(&z);
                if v > best {
                    best = v;
                    start = z;
                }
            }
            let mut rng = search::trial_rng(seed, STREAM_SUPPORT, i as u64);
            let mut f = f;
            let (z, _) = search::ascend(&mut f, start, None, &cfg, &mut rng);
            problem.y_values(&z, l)
        })
        .collect();
    let mut out = seed_w;
    out.extend(found);
    out
}

/// The point `w(y*)` for the functionals norming a concavity family `(z_k)` of `S`:
/// with `y_k*` norming `Sz_k` and weighted by `‖Sz_k‖^{q−1}`, the family's ratio
/// is at most 1 once `w(y*)` is a generator.
fn pairing_point(problem: &Problem, s: &LinOperator, family: &[Vector], q: Exponent) -> Option<Vector> {
    let images: Vec<Vector> = family.iter().map(|z| s.apply(z)).collect();
    let f = s.codomain();
    let dual = match f.spec() {
        NormSpec::Lp(p) => p.conjugate().value(),
        _ => return None,
    };
    let mut fam = Vec::with_capacity(images.len() * f.dim());
    for v in &images {
        let weight = f.norm(v).powf(q.value() - 1.0);
        match norming_vector(v, dual) {
            Some(y) => fam.extend(y.iter().map(|t| t * weight)),
            None => fam.extend(std::iter::repeat_n(0.0, f.dim())),
        }
    }
    problem.y_values(&fam, images.len())
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// The factorization `u = S∘R` of `u = Σ x_i ⊗ y_i : E → F`, `x_i ∈ E*`.
///
/// `Z = ℝⁿ` carries `|||z||| = sup_{y*} Σ|z_i| w_i(y*)` over sampled
/// functional families of length `trunc_len`, `R = Σ x_i ⊗ e_i` and
/// `S e_i = y_i`. Pairs with a zero side are dropped; they do not change `u`.
/// `K^{(p,p₂)}(R)` and `K_{(q,q₂)}(S)` are search estimates, the first
/// seeded with the θ witness. A concavity family of `S` with ratio above 1
/// exposes a missing point of the Z body; it is added and `S` re-estimated.
pub fn build_eta_factorization(
    rep: &TensorRep,
    e: &NormedLattice,
    f: &NormedLattice,
    trunc_len: usize,
    budget: usize,
    seed: u64,
) -> Result<EtaFactorization> {
    lp_exponent(e, "E")?;
    lp_exponent(f, "F")?;
    check_dim(e.dim(), rep.x_dim())?;
    check_dim(f.dim(), rep.y_dim())?;
    let trunc_len = trunc_len.max(1);
    let ex = rep.exponents();
    let (p, p2, q, q2) = ex.exps();
    let e_star = e.dual();
    let theta = theta_lower(rep, &e_star, f, trunc_len, budget, seed)?;
    let nonzero = |v: &Vector| v.iter().any(|t| *t != 0.0);
    let kept: Vec<usize> = (0..rep.len())
        .filter(|&i| nonzero(&rep.pairs()[i].0) && nonzero(&rep.pairs()[i].1))
        .collect();
    let xs: Vec<Vector> = kept.iter().map(|&i| rep.pairs()[i].0.clone()).collect();
    let ys: Vec<Vector> = kept.iter().map(|&i| rep.pairs()[i].1.clone()).collect();
    let (de, df) = (e.dim(), f.dim());
    let n = kept.len().max(1);

    let kb = budget.clamp(1, K_BUDGET_MAX);
    let concave = ConstantKind::Concave { q, q2 };
    let s_matrix: Vec<Vec<f64>> = (0..df)
        .map(|j| if kept.is_empty() { vec![0.0] } else { ys.iter().map(|y| y[j]).collect() })
        .collect();
    let (z, z_generators, s, k_s) = if kept.is_empty() {
        let z = NormedLattice::lp(1, 1.0)?;
        let s = LinOperator::new(s_matrix, z.clone(), f.clone())?;
        let k_s = estimate_constant(&s, concave, kb, seed).value;
        (z, 0, s, k_s)
    } else {
        let problem = Problem::new(&xs, &ys, &e_star, f, rep)?;
        let witness_y: Vec<f64> = theta.witness[trunc_len..].concat();
        let mut gens = sample_w(&problem, n, df, trunc_len, &witness_y, budget, seed);
        let mut round = 0;
        loop {
            let body = SolidConvexBody::new(n, gens.clone())?;
            let count = body.generators().len();
            let z = NormedLattice::predual_of(NormedLattice::gauge_of(body)?)?;
            let s = LinOperator::new(s_matrix.clone(), z.clone(), f.clone())?;
            let est = estimate_constant(&s, concave, kb, seed);
            round += 1;
            let point = (est.value > 1.0 && round < REFINE_ROUNDS)
                .then(|| pairing_point(&problem, &s, &est.witness, q))
                .flatten();
            match point {
                Some(w) => gens.push(w),
                None => break (z, count, s, est.value),
            }
        }
    };
    let r_matrix: Vec<Vec<f64>> = if kept.is_empty() { vec![vec![0.0; de]] } else { xs.clone() };
    let r = LinOperator::new(r_matrix, e.clone(), z.clone())?;

    let u = rep.matrix();
    let composition_error = (0..de)
        .map(|k| {
            let mut ek = vec![0.0; de];
            ek[k] = 1.0;
            let col: Vec<f64> = u.iter().map(|row| row[k]).collect();
            max_abs_diff(&s.apply(&r.apply(&ek)), &col)
        })
        .fold(0.0, f64::max);

    let mut unconditional = true;
    for i in 0..SIGN_SAMPLES {
        let mut rng = search::trial_rng(seed, STREAM_SIGNS, i);
        let v = search::gaussian_vec(&mut rng, z.dim());
        let flipped: Vec<f64> = v.iter().map(|t| if search::uniform(&mut rng) < 0.5 { -t } else { *t }).collect();
        unconditional &= z.norm(&v) == z.norm(&flipped);
    }

    let convex = ConstantKind::Convex { p, p2 };
    let mut k_r = estimate_constant(&r, convex, kb, seed).value;
    let x_family: Vec<Vector> = theta.witness[..trunc_len].to_vec();
    if let Ok(v) = ratio(&r, convex, &x_family) {
        if v.is_finite() {
            k_r = k_r.max(v);
        }
    }
    let product = k_r * k_s;
    let difference = product - theta.value;
    let within_tolerance = difference.abs() <= ETA_TOLERANCE;
    let composition_ok = composition_error <= COMPOSITION_TOLERANCE;
    Ok(EtaFactorization {
        dim_z: z.dim(),
        z,
        r,
        s,
        dropped_pairs: rep.len() - kept.len(),
        trunc_len,
        z_generators,
        composition_error,
        unconditional_samples: SIGN_SAMPLES as usize,
        unconditional,
        product_bound: ProductBound {
            k_r,
            k_s,
            product,
            theta_lower: theta.value,
            difference,
            within_tolerance,
        },
        theta,
        pass: composition_ok && unconditional && within_tolerance,
    })
}
