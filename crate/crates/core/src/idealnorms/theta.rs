use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Result};
use crate::estimate::{ConstantEstimate, Side};
use crate::exponent::{conjugate, lp_norm};
use crate::lattice::{dot, norming_vector, NormedLattice, Vector};
use crate::search::{self, AscentConfig};

use super::{lp_exponent, TensorRep};

const STREAM_RANDOM: u64 = 111;
const STREAM_ASCENT: u64 = 112;
const ASCENT_EVALS: usize = 2000;
/// All ordered pairs of norming functionals are tried as starts up to this many pairs.
const PAIRED_STARTS_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaLevel {
    pub trunc_len: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaProfile {
    pub levels: Vec<ThetaLevel>,
    pub monotone: bool,
    /// Witness: the `L` functionals on `E` followed by the `L` functionals on `F`.
    pub estimate: ConstantEstimate,
}

pub(crate) struct Problem<'a> {
    xs: &'a [Vector],
    ys: &'a [Vector],
    de: usize,
    df: usize,
    x_dual: f64,
    y_dual: f64,
    p: f64,
    p2: f64,
    qs: f64,
    q2s: f64,
}

/// Per-pair values `‖(f_k(v_i))_k‖_inner` for a family normalized in `ℓ_outer` of `ℓ_dual` norms.
fn side_values(vs: &[Vector], fam: &[f64], l: usize, d: usize, dual: f64, outer: f64, inner: f64) -> Option<Vec<f64>> {
    let norms: Vec<f64> = (0..l).map(|k| lp_norm(&fam[k * d..(k + 1) * d], dual)).collect();
    let total = lp_norm(&norms, outer);
    if !(total > 0.0) {
        return None;
    }
    Some(
        vs.iter()
            .map(|v| {
                let pairings: Vec<f64> = (0..l).map(|k| dot(&fam[k * d..(k + 1) * d], v)).collect();
                lp_norm(&pairings, inner) / total
            })
            .collect(),
    )
}

impl<'a> Problem<'a> {
    pub(crate) fn new(xs: &'a [Vector], ys: &'a [Vector], e: &NormedLattice, f: &NormedLattice, rep: &TensorRep) -> Result<Self> {
        let pe = lp_exponent(e, "E")?;
        let pf = lp_exponent(f, "F")?;
        check_dim(e.dim(), rep.x_dim())?;
        check_dim(f.dim(), rep.y_dim())?;
        let ex = rep.exponents();
        Ok(Problem {
            xs,
            ys,
            de: e.dim(),
            df: f.dim(),
            x_dual: conjugate(pe),
            y_dual: conjugate(pf),
            p: ex.p,
            p2: ex.p2,
            qs: conjugate(ex.q),
            q2s: conjugate(ex.q2),
        })
    }

    pub(crate) fn x_values(&self, fam: &[f64], l: usize) -> Option<Vec<f64>> {
        side_values(self.xs, fam, l, self.de, self.x_dual, self.p, self.p2)
    }

    /// `w_i(y*) = ‖(y_j*(y_i))_j‖_{q₂*}` for a family normalized in `ℓ_{q*}(F*)`.
    pub(crate) fn y_values(&self, fam: &[f64], l: usize) -> Option<Vec<f64>> {
        side_values(self.ys, fam, l, self.df, self.y_dual, self.qs, self.q2s)
    }

    fn value(&self, z: &[f64], l: usize) -> f64 {
        let (zx, zy) = z.split_at(l * self.de);
        match (self.x_values(zx, l), self.y_values(zy, l)) {
            (Some(a), Some(b)) => dot(&a, &b),
            _ => 0.0,
        }
    }

    fn pad(&self, z: &[f64], from: usize, to: usize) -> Vector {
        let mut out = vec![0.0; to * (self.de + self.df)];
        out[..from * self.de].copy_from_slice(&z[..from * self.de]);
        out[to * self.de..to * self.de + from * self.df].copy_from_slice(&z[from * self.de..]);
        out
    }

    fn x_norming(&self, i: usize) -> Vector {
        norming_vector(&self.xs[i], self.x_dual).unwrap_or_else(|| unit(self.de, 0))
    }

    pub(crate) fn y_norming(&self, i: usize) -> Vector {
        norming_vector(&self.ys[i], self.y_dual).unwrap_or_else(|| unit(self.df, 0))
    }

    /// The family on `F*` maximizing `Σ d_i w_i` among those whose `i`-th
    /// value is carried by functional `labels[i]`: each block gets the norming
    /// functional of its best signed sum `Σ ±d_i y_i`, weighted by Hölder.
    pub(crate) fn partition_family(&self, d: &[f64], labels: &[usize], l: usize) -> Vector {
        let q = conjugate(self.qs);
        let mut z = vec![0.0; l * self.df];
        let blocks = labels.iter().max().map_or(0, |m| m + 1).min(l);
        for k in 0..blocks {
            let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == k).collect();
            let mut best: Option<(f64, Vector)> = None;
            for mask in 0..1usize << members.len().saturating_sub(1) {
                let mut v = vec![0.0; self.df];
                for (t, &i) in members.iter().enumerate() {
                    let s = if t > 0 && mask >> (t - 1) & 1 == 1 { -d[i] } else { d[i] };
                    for (vj, yj) in v.iter_mut().zip(&self.ys[i]) {
                        *vj += s * yj;
                    }
                }
                let c = lp_norm(&v, conjugate(self.y_dual));
                if best.as_ref().is_none_or(|b| c > b.0) {
                    best = Some((c, v));
                }
            }
            if let Some((c, v)) = best {
                if let Some(f) = norming_vector(&v, self.y_dual) {
                    let a = if q.is_infinite() { 1.0 } else { c.powf(q - 1.0) };
                    for (zj, fj) in z[k * self.df..(k + 1) * self.df].iter_mut().zip(f) {
                        *zj = a * fj;
                    }
                }
            }
        }
        z
    }

    /// Norming starts: one functional per side, plus a spread start for `l ≥ 2`.
    fn structured_starts(&self, l: usize) -> Vec<Vector> {
        let n = self.xs.len();
        let mut out = Vec::new();
        let mut single = |xi: Vector, yi: Vector| {
            let mut z = vec![0.0; l * (self.de + self.df)];
            z[..self.de].copy_from_slice(&xi);
            z[l * self.de..l * self.de + self.df].copy_from_slice(&yi);
            out.push(z);
        };
        if n <= PAIRED_STARTS_MAX {
            for i in 0..n {
                for j in 0..n {
                    single(self.x_norming(i), self.y_norming(j));
                }
            }
        } else {
            for i in 0..n {
                single(self.x_norming(i), self.y_norming(i));
            }
        }
        if l >= 2 {
            let mut z = Vec::with_capacity(l * (self.de + self.df));
            for k in 0..l {
                z.extend(self.x_norming(k % n));
            }
            for k in 0..l {
                z.extend(self.y_norming(k % n));
            }
            out.push(z);
        }
        out
    }

    /// Rescales both halves of `z` to unit norm.
    fn normalized(&self, z: &[f64], l: usize) -> Vec<Vector> {
        let (zx, zy) = z.split_at(l * self.de);
        let half = |fam: &[f64], d: usize, dual: f64, outer: f64| -> Vec<Vector> {
            let norms: Vec<f64> = (0..l).map(|k| lp_norm(&fam[k * d..(k + 1) * d], dual)).collect();
            let t = lp_norm(&norms, outer);
            let s = if t > 0.0 { 1.0 / t } else { 0.0 };
            (0..l).map(|k| fam[k * d..(k + 1) * d].iter().map(|v| v * s).collect()).collect()
        };
        let mut out = half(zx, self.de, self.x_dual, self.p);
        out.extend(half(zy, self.df, self.y_dual, self.qs));
        out
    }
}

fn unit(n: usize, j: usize) -> Vector {
    let mut e = vec![0.0; n];
    e[j] = 1.0;
    e
}

fn random_starts(budget: usize) -> usize {
    (budget / 200).clamp(4, 32)
}

fn levels_up_to(trunc_len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut l = 1;
    while l < trunc_len {
        out.push(l);
        l *= 2;
    }
    out.push(trunc_len);
    out
}

/// Ascends from each start in parallel; returns the best `(z, value)` in start order.
fn best_of(problem: &Problem, starts: &[Vector], l: usize, seed: u64, stream_offset: u64) -> Option<(Vector, f64)> {
    let cfg = AscentConfig {
        max_evals: ASCENT_EVALS,
        ..AscentConfig::default()
    };
    let results: Vec<(Vector, f64)> = starts
        .par_iter()
        .enumerate()
        .map(|(i, z0)| {
            let mut rng = search::trial_rng(seed, STREAM_ASCENT, ((l as u64) << 40) | (stream_offset + i as u64));
            let mut f = |z: &[f64]| problem.value(z, l);
            search::ascend(&mut f, z0.clone(), None, &cfg, &mut rng)
        })
        .collect();
    let mut best: Option<(Vector, f64)> = None;
    for (z, v) in results {
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((z, v));
        }
    }
    best
}

/// θ over truncations `1, 2, 4, …, L`, each level the max over its own starts and all shorter levels.
///
/// Structured starts do not depend on the budget and random starts form a
/// prefix-stable sequence, so every level value is nondecreasing in the budget.
pub fn theta_profile(
    rep: &TensorRep,
    e: &NormedLattice,
    f: &NormedLattice,
    trunc_len: usize,
    budget: usize,
    seed: u64,
) -> Result<ThetaProfile> {
    let trunc_len = trunc_len.max(1);
    let (xs, ys) = (rep.xs(), rep.ys());
    let problem = Problem::new(&xs, &ys, e, f, rep)?;
    let zero = xs.iter().all(|x| x.iter().all(|v| *v == 0.0)) || ys.iter().all(|y| y.iter().all(|v| *v == 0.0));
    let width = problem.de + problem.df;
    let mut levels = Vec::new();
    let mut best: (Vector, usize, f64) = (problem.structured_starts(1).swap_remove(0), 1, 0.0);
    let mut warm: Option<(Vector, usize)> = None;
    if !zero {
        for l in levels_up_to(trunc_len) {
            let mut starts = problem.structured_starts(l);
            if let Some((z, from)) = &warm {
                starts.push(problem.pad(z, *from, l));
            }
            let structured = best_of(&problem, &starts, l, seed, 0);
            let randoms: Vec<Vector> = (0..random_starts(budget) as u64)
                .map(|i| {
                    let mut rng = search::trial_rng(seed, STREAM_RANDOM, ((l as u64) << 40) | i);
                    search::gaussian_vec(&mut rng, l * width)
                })
                .collect();
            let random = best_of(&problem, &randoms, l, seed, 1 << 20);
            if let Some((z, v)) = &structured {
                warm = Some((z.clone(), l));
                if *v > best.2 {
                    best = (z.clone(), l, *v);
                }
            }
            if let Some((z, v)) = random {
                if v > best.2 {
                    best = (z, l, v);
                }
            }
            levels.push(ThetaLevel {
                trunc_len: l,
                value: best.2,
            });
        }
    } else {
        for l in levels_up_to(trunc_len) {
            levels.push(ThetaLevel { trunc_len: l, value: 0.0 });
        }
    }
    let monotone = levels.windows(2).all(|w| w[1].value >= w[0].value);
    let z = problem.pad(&best.0, best.1, trunc_len);
    let exact = zero || rep.len() == 1;
    Ok(ThetaProfile {
        levels,
        monotone,
        estimate: ConstantEstimate {
            value: best.2,
            side: if exact { Side::Exact } else { Side::Lower },
            witness: problem.normalized(&z, trunc_len),
            budget,
            seed,
        },
    })
}

/// Lower bound for `θ` of the representation, functionals truncated at length `trunc_len`.
///
/// `e` and `f` are the ℓ_p lattices containing the `x_i` and the `y_i`. For a
/// single pair the value is `‖x‖‖y‖` and is flagged exact.
pub fn theta_lower(
    rep: &TensorRep,
    e: &NormedLattice,
    f: &NormedLattice,
    trunc_len: usize,
    budget: usize,
    seed: u64,
) -> Result<ConstantEstimate> {
    Ok(theta_profile(rep, e, f, trunc_len, budget, seed)?.estimate)
}
