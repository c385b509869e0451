use rayon::prelude::*;

use crate::error::Result;
use crate::lattice::{dot, sigma_apply_unchecked, LinOperator, SymmetricSeqNorm, Vector};
use crate::search::{self, AscentConfig};

use super::SolidConvexBody;

const STREAM_SINGLE: u64 = 51;
const STREAM_FAMILY: u64 = 52;
const STREAM_DIRECTION: u64 = 53;
const STREAM_REFINE: u64 = 54;
/// Generators with gauge below this are dropped as interior.
const INTERIOR: f64 = 1.0 - 1e-9;

pub(crate) struct CBuild {
    pub body: SolidConvexBody,
    /// The normalized single vectors `x` whose images `|Tx|` were added.
    pub singles: Vec<Vector>,
}

/// `σ(|Tx_1|, …, |Tx_n|) / τ(‖x_1‖, …, ‖x_n‖)`, or `None` for a null family.
pub(crate) fn family_generator(t: &LinOperator, tau: &SymmetricSeqNorm, sigma: &SymmetricSeqNorm, fam: &[Vector]) -> Option<Vector> {
    let norms: Vec<f64> = fam.iter().map(|x| t.domain().norm(x)).collect();
    let s = tau.eval(&norms);
    if !(s > 0.0) {
        return None;
    }
    let images: Vec<Vector> = fam.iter().map(|x| t.apply(x)).collect();
    let g = sigma_apply_unchecked(sigma, &images, t.codomain().dim());
    Some(g.iter().map(|v| v / s).collect())
}

fn sign_patterns(n: usize) -> Vec<Vector> {
    let total = 3usize.pow(n as u32);
    (1..total)
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let v = (c % 3) as f64 - 1.0;
                    c /= 3;
                    v
                })
                .collect()
        })
        .collect()
}

fn unflatten(x: &[f64], n: usize) -> Vec<Vector> {
    x.chunks(n).map(|c| c.to_vec()).collect()
}

/// Drops generators dominated coordinatewise by another one.
fn pareto(mut gens: Vec<Vector>) -> Vec<Vector> {
    gens.sort_by(|a, b| {
        let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
        sb.total_cmp(&sa).then_with(|| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut kept: Vec<Vector> = Vec::new();
    for g in gens {
        if !kept.iter().any(|k| k.iter().zip(&g).all(|(a, b)| a >= b)) {
            kept.push(g);
        }
    }
    kept
}

/// Keeps only generators on the boundary of the body they generate.
pub(crate) fn reduce(body: &SolidConvexBody) -> Result<SolidConvexBody> {
    let gens = pareto(body.generators().to_vec());
    let full = SolidConvexBody::new(body.dim(), gens)?;
    let gauges: Vec<Result<f64>> = full.generators().par_iter().map(|g| full.gauge(g)).collect();
    let mut kept = Vec::new();
    for (g, r) in full.generators().iter().zip(gauges) {
        if r? >= INTERIOR {
            kept.push(g.clone());
        }
    }
    SolidConvexBody::new(body.dim(), kept)
}

/// Inner approximation of `C_T^{τ,σ}`: the solid convex hull of
/// `σ(|Tx_1|,…,|Tx_n|)` over sampled families with `τ(‖x_i‖) ≤ 1`.
///
/// Sources are sign patterns and random points of the unit sphere of the
/// domain, random families of length `2..=2·dim`, and families refined by
/// ascent towards a set of positive directions.
pub fn build_c_body(
    t: &LinOperator,
    tau: SymmetricSeqNorm,
    sigma: SymmetricSeqNorm,
    budget: usize,
    seed: u64,
) -> Result<SolidConvexBody> {
    Ok(build_c(t, &tau, &sigma, budget, seed)?.body)
}

pub(crate) fn build_c(
    t: &LinOperator,
    tau: &SymmetricSeqNorm,
    sigma: &SymmetricSeqNorm,
    budget: usize,
    seed: u64,
) -> Result<CBuild> {
    let n = t.domain().dim();
    let m = t.codomain().dim();
    let budget = budget.max(1);
    let mut singles: Vec<Vector> = if n <= 6 {
        sign_patterns(n)
    } else {
        (0..n)
            .map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            })
            .collect()
    };
    let random_singles = budget / 4 + 1;
    singles.extend((0..random_singles as u64).map(|i| search::gaussian_vec(&mut search::trial_rng(seed, STREAM_SINGLE, i), n)));
    let singles: Vec<Vector> = singles
        .into_iter()
        .filter_map(|x| {
            let s = t.domain().norm(&x);
            (s > 0.0).then(|| x.iter().map(|v| v / s).collect())
        })
        .collect();

    let families: Vec<Vec<Vector>> = (0..budget.saturating_sub(random_singles) as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = search::trial_rng(seed, STREAM_FAMILY, i);
            let len = 2 + search::index(&mut rng, (2 * n).max(2) - 1);
            (0..len).map(|_| search::gaussian_vec(&mut rng, n)).collect()
        })
        .collect();

    let mut pool: Vec<(Vec<Vector>, Vector)> = Vec::new();
    for x in &singles {
        pool.push((vec![x.clone()], t.apply(x).iter().map(|v| v.abs()).collect()));
    }
    for fam in families {
        if let Some(g) = family_generator(t, tau, sigma, &fam) {
            pool.push((fam, g));
        }
    }

    let mut directions: Vec<Vector> = (0..m)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();
    directions.push(vec![1.0; m]);
    let random_dirs = (budget / 100).clamp(16, 128);
    directions.extend((0..random_dirs as u64).map(|i| search::exponential_vec(&mut search::trial_rng(seed, STREAM_DIRECTION, i), m)));
    let lengths: Vec<usize> = {
        let mut l = vec![1, 2, n + 1, 2 * n];
        l.sort_unstable();
        l.dedup();
        l
    };
    let jobs: Vec<(usize, usize)> = (0..directions.len())
        .flat_map(|d| lengths.iter().map(move |&l| (d, l)))
        .collect();
    let refined: Vec<Option<Vector>> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, &(d, len))| {
            let b = &directions[d];
            let start = pool
                .iter()
                .filter(|(f, _)| f.len() == len)
                .max_by(|x, y| dot(&x.1, b).total_cmp(&dot(&y.1, b)))
                .map(|(f, _)| f.clone());
            let mut rng = search::trial_rng(seed, STREAM_REFINE, k as u64);
            let start = start.unwrap_or_else(|| (0..len).map(|_| search::gaussian_vec(&mut rng, n)).collect());
            let mut f = |x: &[f64]| match family_generator(t, tau, sigma, &unflatten(x, n)) {
                Some(g) => dot(&g, b),
                None => f64::NEG_INFINITY,
            };
            let cfg = AscentConfig {
                max_evals: 1500,
                min_step: 1e-7,
                ..AscentConfig::default()
            };
            let x0: Vec<f64> = start.concat();
            let (x, _) = search::ascend(&mut f, x0, None, &cfg, &mut rng);
            family_generator(t, tau, sigma, &unflatten(&x, n))
        })
        .collect();

    let mut gens: Vec<Vector> = pool.into_iter().map(|(_, g)| g).collect();
    gens.extend(refined.into_iter().flatten());
    let body = reduce(&SolidConvexBody::new(m, gens)?)?;
    Ok(CBuild { body, singles })
}
