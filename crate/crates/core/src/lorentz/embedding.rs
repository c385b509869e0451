use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exponent::conjugate;
use crate::lattice::AtomicMeasure;
use crate::search;

use super::{kernels, StepFunction};

/// `d = (1−s)β + s·b`, the linear majorant of `(β·x)^{1−s}(b·x)^s`.
pub fn lemma_a2_d(beta: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    beta.iter().zip(b).map(|(be, bi)| (1.0 - s) * be + s * bi).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingVerification {
    pub sampled: usize,
    pub probes: usize,
    /// Largest `‖Sf‖ − ‖f‖` over samples and probes.
    pub max_excess: f64,
    pub sa_norm: f64,
    pub c_pow_r: f64,
    pub pass: bool,
}

/// The multiplication operator `S` from `L^{[r]}_{p,∞}(μ)` into `L^{[1]}_{p,∞}(ν)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakLpEmbedding {
    pub nu: AtomicMeasure,
    pub coefficients: Vec<f64>,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
    pub d: Vec<f64>,
    pub s: f64,
    pub verification: EmbeddingVerification,
}

impl WeakLpEmbedding {
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        f.iter().zip(&self.coefficients).map(|(f, c)| f * c).collect()
    }
}

/// Builds `ν` and `S` for a positive step function `a` with `C ≤ 1`.
///
/// `‖S‖ ≤ 1` is checked on 500 sampled functions plus, up to six atoms, every
/// pattern in `{−1,0,1}ⁿ` applied to `1` and to `a`.
pub fn build_weak_lp_embedding(a: &StepFunction, p: f64, r: f64, seed: u64) -> Result<WeakLpEmbedding> {
    if !(p.is_finite() && p > 1.0 && r >= 1.0 && r < p) {
        return invalid(format!("need 1 <= r < p < inf, got r = {r}, p = {p}"));
    }
    if a.values.iter().any(|v| !(*v > 0.0)) {
        return invalid("a must be strictly positive on every atom");
    }
    let mu = a.measure.weights();
    let n = a.dim();
    let m: f64 = mu.iter().sum();
    let a_r: f64 = mu
        .iter()
        .zip(&a.values)
        .map(|(w, v)| w * v.powf(r))
        .sum::<f64>()
        .powf(1.0 / r);
    let c = m.powf(1.0 / p - 1.0 / r) * a_r;
    if c > 1.0 + 1e-12 {
        return invalid(format!("C = {c} exceeds 1"));
    }
    let b: Vec<f64> = mu.iter().map(|w| w / m).collect();
    let beta: Vec<f64> = mu
        .iter()
        .zip(&a.values)
        .map(|(w, v)| m.powf(r / p - 1.0) * w * v.powf(r))
        .collect();
    let s = conjugate(p) * (1.0 / r - 1.0 / p);
    let d = lemma_a2_d(&beta, &b, s);
    let coefficients: Vec<f64> = (0..n)
        .map(|i| m.powf(r / p) * a.values[i].powf(r - 1.0) * b[i] / d[i])
        .collect();
    let nu = AtomicMeasure::new(d.clone())?;

    let src = |f: &[f64]| {
        let abs: Vec<f64> = f.iter().map(|v| v.abs()).collect();
        kernels::weak_norm_r(&abs, mu, p, r).0
    };
    let dst = |f: &[f64]| {
        let abs: Vec<f64> = f.iter().zip(&coefficients).map(|(v, c)| (v * c).abs()).collect();
        kernels::weak_norm_r(&abs, nu.weights(), p, 1.0).0
    };
    let mut max_excess = f64::NEG_INFINITY;
    let mut check = |f: &[f64]| {
        let excess = dst(f) - src(f);
        if excess > max_excess {
            max_excess = excess;
        }
    };
    let sampled = 500;
    for t in 0..sampled {
        let mut rng = search::trial_rng(seed, 21, t as u64);
        let f: Vec<f64> = if t % 2 == 0 {
            search::gaussian_vec(&mut rng, n)
        } else {
            search::exponential_vec(&mut rng, n)
                .into_iter()
                .zip(&a.values)
                .map(|(e, v)| e * v)
                .collect()
        };
        check(&f);
    }
    let mut probes = 0;
    if n <= 6 {
        let total = 3usize.pow(n as u32);
        for code in 1..total {
            let mut c = code;
            let pattern: Vec<f64> = (0..n)
                .map(|_| {
                    let digit = c % 3;
                    c /= 3;
                    [0.0, 1.0, -1.0][digit]
                })
                .collect();
            check(&pattern);
            let weighted: Vec<f64> = pattern.iter().zip(&a.values).map(|(s, v)| s * v).collect();
            check(&weighted);
            probes += 2;
        }
    }
    let sa_norm = dst(&a.values);
    let c_pow_r = c.powf(r);
    let pass = max_excess <= 1e-9 && sa_norm >= c_pow_r - 1e-9;
    Ok(WeakLpEmbedding {
        nu,
        coefficients,
        c,
        m,
        b,
        beta,
        d,
        s,
        verification: EmbeddingVerification {
            sampled,
            probes,
            max_excess,
            sa_norm,
            c_pow_r,
            pass,
        },
    })
}
