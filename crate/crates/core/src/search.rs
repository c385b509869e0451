//! Seeded randomness and derivative-free local ascent shared by the estimators.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

pub type Rng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for trial `index` of stream `stream` under `seed`.
///
/// Trials are independent of each other and of evaluation order.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> Rng {
    let key = splitmix(seed ^ splitmix(stream.wrapping_mul(0x1000_0001) ^ splitmix(index)));
    ChaCha8Rng::seed_from_u64(key)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn exponential(rng: &mut Rng) -> f64 {
    rng.sample(Exp1)
}

pub fn uniform(rng: &mut Rng) -> f64 {
    rng.random::<f64>()
}

pub fn index(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

pub fn gaussian_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn exponential_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| exponential(rng)).collect()
}

/// Index of the largest value, lowest index on ties, NaN ignored.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some(b) if values[b] >= *v => {}
            _ => best = Some(i),
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
pub struct AscentConfig {
    /// Keep coordinates nonnegative.
    pub nonneg: bool,
    /// First step, relative to the largest coordinate.
    pub initial_step: f64,
    /// Stop once the relative step falls below this.
    pub min_step: f64,
    pub max_evals: usize,
    /// Random directions tried per sweep in addition to coordinate moves.
    pub random_dirs: usize,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            nonneg: false,
            initial_step: 0.25,
            min_step: 1e-9,
            max_evals: 4000,
            random_dirs: 2,
        }
    }
}

fn score(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Pattern-search ascent of `f` from `x`; returns the final point and value.
///
/// Coordinate moves, pairwise transfers and random directions are tried at
/// the current step; the step halves after a sweep without improvement.
/// `mask`, when given, freezes coordinates whose entry is `false`.
pub fn ascend<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    mut x: Vec<f64>,
    mask: Option<&[bool]>,
    cfg: &AscentConfig,
    rng: &mut Rng,
) -> (Vec<f64>, f64) {
    let m = x.len();
    let free: Vec<usize> = (0..m).filter(|&j| mask.is_none_or(|k| k[j])).collect();
    let mut fx = score(f(&x));
    let mut evals = 1usize;
    if free.is_empty() {
        return (x, fx);
    }
    let mut step = cfg.initial_step;
    let mut y = x.clone();
    let mut try_point = |y: &mut Vec<f64>, x: &mut Vec<f64>, fx: &mut f64, evals: &mut usize| -> bool {
        if cfg.nonneg {
            for v in y.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        *evals += 1;
        let v = score(f(y));
        if v > *fx {
            *fx = v;
            x.copy_from_slice(y);
            true
        } else {
            y.copy_from_slice(x);
            false
        }
    };
    while step > cfg.min_step && evals < cfg.max_evals {
        let scale = free.iter().fold(0.0f64, |s, &j| s.max(x[j].abs())).max(1e-300);
        let h = step * scale;
        let mut improved = false;
        for &j in &free {
            for s in [1.0, -1.0] {
                y[j] = x[j] + s * h;
                if try_point(&mut y, &mut x, &mut fx, &mut evals) {
                    improved = true;
                    break;
                }
            }
        }
        if free.len() >= 2 && free.len() <= 8 {
            for a in 0..free.len() {
                for b in 0..free.len() {
                    if a == b {
                        continue;
                    }
                    let (i, j) = (free[a], free[b]);
                    y[i] = x[i] + h;
                    y[j] = x[j] - h;
                    if try_point(&mut y, &mut x, &mut fx, &mut evals) {
                        improved = true;
                    }
                }
            }
        }
        for _ in 0..cfg.random_dirs {
            let d: Vec<f64> = free.iter().map(|_| gaussian(rng)).collect();
            let dn = d.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300);
            for (k, &j) in free.iter().enumerate() {
                y[j] = x[j] + h * d[k] / dn;
            }
            if try_point(&mut y, &mut x, &mut fx, &mut evals) {
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}
