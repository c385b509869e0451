//! Decreasing rearrangements, weak-L_p quasinorm and its renormings, and L_{q,1}.

mod embedding;
pub(crate) mod kernels;

pub use embedding::{build_weak_lp_embedding, lemma_a2_d, EmbeddingVerification, WeakLpEmbedding};

use serde::Serialize;

use crate::error::{check_dim, invalid, Result};
use crate::estimate::Side;
use crate::lattice::{AtomicMeasure, Evaluation};

/// `f = Σ values_i χ_{atom i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub values: Vec<f64>,
    pub measure: AtomicMeasure,
}

impl StepFunction {
    pub fn new(values: Vec<f64>, measure: AtomicMeasure) -> Result<Self> {
        check_dim(measure.dim(), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("step function values must be finite");
        }
        Ok(StepFunction { values, measure })
    }

    /// Values on atoms of unit mass.
    pub fn counting(values: Vec<f64>) -> Self {
        let measure = AtomicMeasure::counting(values.len());
        StepFunction { values, measure }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.abs()).collect()
    }
}

/// `f*` as distinct values `v₁ > v₂ > … > 0` with cumulative masses `T_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RearrangedStep {
    pub values: Vec<f64>,
    pub breakpoints: Vec<f64>,
}

impl RearrangedStep {
    /// `f*(t)`.
    pub fn at(&self, t: f64) -> f64 {
        self.breakpoints
            .iter()
            .position(|b| t < *b)
            .map_or(0.0, |k| self.values[k])
    }
}

pub fn rearrange(f: &StepFunction) -> RearrangedStep {
    let w = f.measure.weights();
    let mut pairs: Vec<(f64, f64)> = f
        .values
        .iter()
        .zip(w)
        .filter(|(v, _)| **v != 0.0)
        .map(|(v, w)| (v.abs(), *w))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut values: Vec<f64> = Vec::new();
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut t = 0.0;
    for (v, w) in pairs {
        t += w;
        if values.last() == Some(&v) {
            *breakpoints.last_mut().unwrap() = t;
        } else {
            values.push(v);
            breakpoints.push(t);
        }
    }
    RearrangedStep { values, breakpoints }
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return invalid(format!("p must lie in (1, inf), got {p}"));
    }
    Ok(())
}

fn check_r(p: f64, r: f64) -> Result<()> {
    check_p(p)?;
    if !(r >= 1.0 && r < p) {
        return invalid(format!("r must satisfy 1 <= r < p, got r = {r}, p = {p}"));
    }
    Ok(())
}

/// `⦀f⦀ = sup_t t^{1/p} f*(t) = max_k T_k^{1/p} v_k`.
pub fn quasinorm_pinfty(f: &StepFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    let rs = rearrange(f);
    Ok(rs
        .values
        .iter()
        .zip(&rs.breakpoints)
        .map(|(v, t)| t.powf(1.0 / p) * v)
        .fold(0.0, f64::max))
}

/// `‖f‖_{[r]} = sup_A μ(A)^{1/p−1/r} (∫_A |f|^r)^{1/r}`.
///
/// Exact for uniform weights and for up to 20 atoms; beyond that the value is
/// a lower bound flagged as such.
pub fn norm_pinfty_r(f: &StepFunction, p: f64, r: f64) -> Result<Evaluation> {
    check_r(p, r)?;
    let (value, exact) = kernels::weak_norm_r(&f.moduli(), f.measure.weights(), p, r);
    Ok(Evaluation {
        value,
        side: if exact { Side::Exact } else { Side::Lower },
    })
}

/// The `[r]` norm restricted to the level sets `{|f| ≥ v}`.
pub fn norm_pinfty_r_prefix(f: &StepFunction, p: f64, r: f64) -> Result<f64> {
    check_r(p, r)?;
    Ok(kernels::prefix_value(&f.moduli(), f.measure.weights(), p, r))
}

/// The `[r]` norm by enumerating every subset of atoms.
pub fn norm_pinfty_r_enumerated(f: &StepFunction, p: f64, r: f64) -> Result<f64> {
    check_r(p, r)?;
    if f.dim() > kernels::MAX_ENUM_DIM {
        return invalid(format!("subset enumeration is limited to {} atoms", kernels::MAX_ENUM_DIM));
    }
    Ok(kernels::enumerate_subsets(&f.moduli(), f.measure.weights(), p, r))
}

/// `∫ t^{1/q} f*(t) dt/t = q Σ_k v_k (T_k^{1/q} − T_{k−1}^{1/q})`.
pub fn norm_q1(f: &StepFunction, q: f64) -> Result<f64> {
    check_p(q)?;
    Ok(kernels::norm_q1(&f.moduli(), f.measure.weights(), q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub quasi: f64,
    pub norm_r: f64,
    pub ratio: f64,
    pub upper_factor: f64,
    pub monotone_in_r: bool,
    pub pass: bool,
}

/// Checks `⦀f⦀ ≤ ‖f‖_{[r]} ≤ (p/(p−r))^{1/r} ⦀f⦀` and monotonicity of `‖f‖_{[s]}` in `s`.
pub fn check_renorming_sandwich(f: &StepFunction, p: f64, r: f64) -> Result<SandwichReport> {
    check_r(p, r)?;
    const TOL: f64 = 1e-9;
    let quasi = quasinorm_pinfty(f, p)?;
    let norm_r = norm_pinfty_r(f, p, r)?.value;
    let upper_factor = (p / (p - r)).powf(1.0 / r);
    let grid: Vec<f64> = (0..8).map(|k| 1.0 + (p - 1.0) * k as f64 / 8.0).collect();
    let mut monotone_in_r = true;
    let mut prev = 0.0;
    for s in grid {
        let v = norm_pinfty_r(f, p, s)?.value;
        if v < prev - TOL {
            monotone_in_r = false;
        }
        prev = v;
    }
    let pass = quasi <= norm_r + TOL && norm_r <= upper_factor * quasi + TOL && monotone_in_r;
    Ok(SandwichReport {
        quasi,
        norm_r,
        ratio: if quasi > 0.0 { norm_r / quasi } else { 1.0 },
        upper_factor,
        monotone_in_r,
        pass,
    })
}
