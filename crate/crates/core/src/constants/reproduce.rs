use serde::Serialize;

use crate::error::{invalid, Result};
use crate::estimate::ConstantEstimate;
use crate::exponent::{conjugate, lp_norm};
use crate::lattice::{AtomicMeasure, LinOperator, NormSpec, NormedLattice, Vector};
use crate::search;

use super::estimate::estimate_constant;
use super::kind::{ratio_value, ConstantKind};

/// `γ_p = (p*)^{1/p*}`.
pub fn gamma(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return invalid(format!("gamma needs p in (1, inf), got {p}"));
    }
    let ps = conjugate(p);
    Ok(ps.powf(1.0 / ps))
}

/// `(p/(p−q))^{1/q} γ_p`.
pub fn q_convexity_bound(p: f64, q: f64) -> Result<f64> {
    if !(q >= 1.0 && q < p) {
        return invalid(format!("need 1 <= q < p, got q = {q}, p = {p}"));
    }
    Ok((p / (p - q)).powf(1.0 / q) * gamma(p)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenormedCheck {
    pub families: usize,
    pub max_ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QConvexityReport {
    pub p: f64,
    pub q: f64,
    pub bound: f64,
    pub estimate: ConstantEstimate,
    pub renormed: Vec<RenormedCheck>,
    pub pass: bool,
}

/// Lorentz measures inside a lattice with a known constant-1 upper p-estimate.
fn certified(x: &NormedLattice, p: f64, measures: &mut Vec<(f64, AtomicMeasure)>) -> bool {
    match x.spec() {
        NormSpec::Lp(r) => r.value() >= p,
        NormSpec::LorentzPInfty { p: px, measure, .. } => {
            measures.push((*px, measure.clone()));
            *px >= p
        }
        NormSpec::LinfSum(blocks) => blocks.iter().all(|b| certified(b, p, measures)),
        _ => false,
    }
}

/// Largest q-convexity ratio of `L^{[q]}_{p,∞}(μ)` over random families.
pub fn renormed_q_convexity(p: f64, q: f64, measure: &AtomicMeasure, families: usize, seed: u64) -> Result<RenormedCheck> {
    let x = NormedLattice::lorentz_pinfty(p, q, measure.clone())?;
    let n = x.dim();
    let t = LinOperator::identity(x);
    let kind = ConstantKind::convex(q, q)?;
    let mut max_ratio = 0.0f64;
    for i in 0..families {
        let mut rng = search::trial_rng(seed, 41, i as u64);
        let len = 2 + search::index(&mut rng, 2 * n - 1);
        let fam: Vec<Vector> = (0..len)
            .map(|_| {
                let s = search::gaussian(&mut rng).exp();
                (0..n).map(|_| s * search::gaussian(&mut rng)).collect()
            })
            .collect();
        max_ratio = max_ratio.max(ratio_value(&t, kind, &fam));
    }
    Ok(RenormedCheck {
        families,
        max_ratio,
        pass: max_ratio <= 1.0 + 1e-9,
    })
}

/// Estimates `K^{(q)}(X)` from below and compares with `(p/(p−q))^{1/q} γ_p`.
pub fn check_q_convexity_bound(x: &NormedLattice, p: f64, q: f64, budget: usize, seed: u64) -> Result<QConvexityReport> {
    let bound = q_convexity_bound(p, q)?;
    let mut measures = Vec::new();
    if !certified(x, p, &mut measures) {
        return invalid("lattice must be lp (exponent >= p), lorentz_pinfty (exponent >= p), or an linf_sum of those");
    }
    let t = LinOperator::identity(x.clone());
    let estimate = estimate_constant(&t, ConstantKind::convex(q, q)?, budget, seed);
    let mut renormed = Vec::new();
    for (k, (px, m)) in measures.iter().enumerate() {
        renormed.push(renormed_q_convexity(*px, q, m, 100, seed.wrapping_add(k as u64))?);
    }
    let pass = estimate.value <= bound + 1e-6 && renormed.iter().all(|r| r.pass);
    Ok(QConvexityReport {
        p,
        q,
        bound,
        estimate,
        renormed,
        pass,
    })
}

/// `α_k = (k+1)^{1/p*} − k^{1/p*}`, `k = 0..n−1`.
pub fn alpha_sequence(p: f64, n: usize) -> Vec<f64> {
    let e = 1.0 - 1.0 / p;
    (0..n).map(|k| ((k + 1) as f64).powf(e) - (k as f64).powf(e)).collect()
}

/// `A_n = (Σ α_j^p)^{1/p}`.
pub fn a_n(p: f64, n: usize) -> f64 {
    lp_norm(&alpha_sequence(p, n), p)
}

/// `ℓ^n_{p,∞}(ℓ^n_p)` with the `[1]`-norm outside.
pub fn lpinfty_lp_lattice(p: f64, n: usize) -> Result<NormedLattice> {
    let outer = NormedLattice::lorentz_pinfty(p, 1.0, AtomicMeasure::counting(n))?;
    let blocks = (0..n).map(|_| NormedLattice::lp(n, p)).collect::<Result<Vec<_>>>()?;
    NormedLattice::block_lorentz(outer, blocks)
}

/// The vectors `x̄^{(i)}` whose k-th block is `α_{(k+i) mod n} e_i`.
pub fn cyclic_family(p: f64, n: usize) -> Vec<Vector> {
    let alpha = alpha_sequence(p, n);
    (0..n)
        .map(|i| {
            let mut x = vec![0.0; n * n];
            for k in 0..n {
                x[k * n + i] = alpha[(k + i) % n];
            }
            x
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    #[serde(rename = "A_n")]
    pub a_n: f64,
    pub vee_ratio: f64,
    /// `A_n^p / H_n` with `H_n` the harmonic number.
    pub ratio_to_harmonic: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpInftyLpReport {
    pub p: f64,
    pub n: usize,
    #[serde(rename = "A_n")]
    pub a_n: f64,
    pub vee_ratio: f64,
    pub unit_norm_max_deviation: f64,
    pub unit_norm_check: bool,
    pub ratio_check: bool,
    pub growth_table: Vec<GrowthRow>,
    pub growth_increasing: bool,
    pub pass: bool,
}

fn measure_row(p: f64, n: usize) -> Result<(GrowthRow, f64)> {
    let x = lpinfty_lp_lattice(p, n)?;
    let fam = cyclic_family(p, n);
    let dev = fam
        .iter()
        .map(|v| (x.norm(v) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut vee = vec![0.0f64; n * n];
    for v in &fam {
        for (a, b) in vee.iter_mut().zip(v) {
            *a = a.max(b.abs());
        }
    }
    let vee_ratio = x.norm(&vee) / (n as f64).powf(1.0 / p);
    let a = a_n(p, n);
    let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    Ok((
        GrowthRow {
            n,
            a_n: a,
            vee_ratio,
            ratio_to_harmonic: a.powf(p) / h,
        },
        dev,
    ))
}

/// Rebuilds the cyclic-permutation family showing that `ℓ_{p,∞}(ℓ_p)` has no
/// upper p-estimate: unit vectors whose join has norm `A_n n^{1/p}`.
pub fn reproduce_lpinfty_lp(p: f64, n: usize) -> Result<LpInftyLpReport> {
    if !(p.is_finite() && p > 1.0) || n < 2 {
        return invalid("need p in (1, inf) and n >= 2");
    }
    let (row, dev) = measure_row(p, n)?;
    let mut growth_table = Vec::new();
    let mut m = 2;
    while m <= n.max(32) {
        growth_table.push(measure_row(p, m)?.0);
        m *= 2;
    }
    let growth_increasing = growth_table.windows(2).all(|w| w[1].a_n > w[0].a_n && w[1].vee_ratio > w[0].vee_ratio);
    let unit_norm_check = dev <= 1e-9;
    let ratio_check = (row.vee_ratio - row.a_n).abs() <= 1e-9;
    Ok(LpInftyLpReport {
        p,
        n,
        a_n: row.a_n,
        vee_ratio: row.vee_ratio,
        unit_norm_max_deviation: dev,
        unit_norm_check,
        ratio_check,
        growth_table,
        growth_increasing,
        pass: unit_norm_check && ratio_check && growth_increasing,
    })
}
