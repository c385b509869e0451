use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Result};
use crate::lattice::{LinOperator, SymmetricSeqNorm, Vector};
use crate::search::{self, AscentConfig};

const STREAM_START: u64 = 61;
const GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
/// Exhaustive length-two split grids are used up to this dimension.
pub const SPLIT_GRID_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DSearch {
    /// No decomposition with value above 1 was found.
    pub in_d: bool,
    /// The best decomposition `(u_i)` when it exceeds 1.
    pub witness: Option<Vec<Vector>>,
    pub rho_lower: f64,
}

/// Decomposition of `|u|` whose column `j` is `|u_j| v_{·j} / σ(v_{·j})`.
fn decompose(v: &[f64], abs_u: &[f64], sigma: &SymmetricSeqNorm) -> Vec<Vector> {
    let m = abs_u.len();
    let len = v.len() / m;
    let mut fam = vec![vec![0.0; m]; len];
    let mut col = vec![0.0; len];
    for j in 0..m {
        for i in 0..len {
            col[i] = v[i * m + j];
        }
        let s = sigma.eval(&col);
        if s > 0.0 {
            for i in 0..len {
                fam[i][j] = abs_u[j] * col[i] / s;
            }
        }
    }
    fam
}

fn value(t: &LinOperator, tau: &SymmetricSeqNorm, fam: &[Vector]) -> f64 {
    let norms: Vec<f64> = fam.iter().map(|x| t.codomain().norm(&t.apply(x))).collect();
    tau.eval(&norms)
}

/// Searches for a decomposition `σ(|u_1|,…,|u_n|) ≤ |u|` with
/// `τ(‖Tu_1‖,…,‖Tu_n‖) > 1`; `rho_lower` is the best value found.
///
/// One-sided: a reported violation is genuine, membership is only the absence
/// of a found violation.
pub fn search_d_violation(
    t: &LinOperator,
    u: &[f64],
    tau: SymmetricSeqNorm,
    sigma: SymmetricSeqNorm,
    budget: usize,
    seed: u64,
) -> Result<DSearch> {
    let m = t.domain().dim();
    check_dim(m, u.len())?;
    let abs_u: Vec<f64> = u.iter().map(|v| v.abs()).collect();
    let f = |v: &[f64]| value(t, &tau, &decompose(v, &abs_u, &sigma));
    if abs_u.iter().all(|v| *v == 0.0) || t.is_zero() {
        return Ok(DSearch {
            in_d: true,
            witness: None,
            rho_lower: 0.0,
        });
    }

    let mut seeds: Vec<Vec<f64>> = Vec::new();
    if m <= 10 {
        for code in 0..(1usize << m) {
            seeds.push((0..m).map(|j| if code >> j & 1 == 1 { -1.0 } else { 1.0 }).collect());
        }
    }
    if m <= SPLIT_GRID_DIM {
        let slots = 2 * m;
        let total = GRID.len().pow(slots as u32);
        let grid: Vec<(f64, Vec<f64>)> = (0..total)
            .into_par_iter()
            .map(|mut c| {
                let v: Vec<f64> = (0..slots)
                    .map(|_| {
                        let g = GRID[c % GRID.len()];
                        c /= GRID.len();
                        g
                    })
                    .collect();
                (f(&v), v)
            })
            .collect();
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&a, &b| grid[b].0.total_cmp(&grid[a].0).then(a.cmp(&b)));
        seeds.extend(order.iter().take(4).map(|&i| grid[i].1.clone()));
    }
    let max_len = (2 * m).clamp(2, 6);
    let starts = (budget / 250).clamp(8, 64);
    for k in 0..starts as u64 {
        let mut rng = search::trial_rng(seed, STREAM_START, k);
        let len = 1 + (k as usize % max_len);
        seeds.push(search::gaussian_vec(&mut rng, len * m));
    }

    let results: Vec<(f64, Vec<f64>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, v0)| {
            let mut rng = search::trial_rng(seed, STREAM_START + 1, k as u64);
            let cfg = AscentConfig {
                max_evals: 1500,
                min_step: 1e-8,
                ..AscentConfig::default()
            };
            let mut g = |v: &[f64]| f(v);
            let (v, fv) = search::ascend(&mut g, v0.clone(), None, &cfg, &mut rng);
            (fv, v)
        })
        .collect();
    let mut best = 0usize;
    for (k, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = k;
        }
    }
    let fam = decompose(&results[best].1, &abs_u, &sigma);
    let rho = value(t, &tau, &fam);
    Ok(DSearch {
        in_d: rho <= 1.0,
        witness: (rho > 1.0).then_some(fam),
        rho_lower: rho,
    })
}
