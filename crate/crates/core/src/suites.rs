//! Randomized reproduction runs over many instances, shared by the CLI's
//! `reproduce` commands and the acceptance tests.

use rayon::prelude::*;
use serde::Serialize;

use crate::convexgeom::verify_polarity;
use crate::error::Result;
use crate::lattice::{AtomicMeasure, LinOperator, NormedLattice, SymmetricSeqNorm};
use crate::lorentz::{
    build_weak_lp_embedding, check_renorming_sandwich, norm_pinfty_r_enumerated, norm_pinfty_r_prefix, StepFunction,
};
use crate::search::{self, Rng};

const STREAM_RENORMING: u64 = 201;
const STREAM_EMBEDDING: u64 = 202;
const STREAM_POLARITY: u64 = 203;
const TOLERANCE: f64 = 1e-9;

pub const RENORMING_MAX_DIM: usize = 12;
pub const EMBEDDING_MAX_DIM: usize = 6;
pub const POLARITY_MAX_DIM: usize = 3;

/// Renorming exponents `1`, `1.2` and `(p+1)/2`.
pub fn renorming_exponents(p: f64) -> [f64; 3] {
    [1.0, 1.2, (p + 1.0) / 2.0]
}

fn unequal_weights(rng: &mut Rng, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n).map(|_| 0.1 + search::exponential(rng)).collect();
        if n == 1 || w.iter().any(|v| *v != w[0]) {
            return w;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenormingCase {
    pub p: f64,
    pub r: f64,
    pub trials: usize,
    pub upper_factor: f64,
    /// `min(‖f‖_{[r]} − ⦀f⦀)`; nonnegative when the left inequality holds.
    pub min_lower_margin: f64,
    pub max_ratio: f64,
    pub sandwich_failures: usize,
    pub prefix_max_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenormingSuite {
    pub cases: Vec<RenormingCase>,
    pub pass: bool,
}

/// `⦀f⦀ ≤ ‖f‖_{[r]} ≤ (p/(p−r))^{1/r}⦀f⦀` on random weighted step functions,
/// and prefix evaluation against subset enumeration for counting measure.
pub fn renorming_suite(ps: &[f64], trials: usize, seed: u64) -> Result<RenormingSuite> {
    let mut cases = Vec::new();
    for (pi, &p) in ps.iter().enumerate() {
        for (ri, r) in renorming_exponents(p).into_iter().enumerate() {
            let stream = (pi * 3 + ri) as u64;
            let rows: Vec<Result<(f64, f64, bool, f64)>> = (0..trials as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = search::trial_rng(seed, STREAM_RENORMING + 16 * stream, i);
                    let n = 1 + search::index(&mut rng, RENORMING_MAX_DIM);
                    let w = unequal_weights(&mut rng, n);
                    let values: Vec<f64> = (0..n)
                        .map(|_| {
                            let v = search::gaussian(&mut rng);
                            if search::uniform(&mut rng) < 0.15 {
                                0.0
                            } else {
                                v
                            }
                        })
                        .collect();
                    let rep = check_renorming_sandwich(&StepFunction::new(values.clone(), AtomicMeasure::new(w)?)?, p, r)?;
                    let counting = StepFunction::counting(values);
                    let prefix = norm_pinfty_r_prefix(&counting, p, r)?;
                    let full = norm_pinfty_r_enumerated(&counting, p, r)?;
                    Ok((rep.norm_r - rep.quasi, rep.ratio, rep.pass, (prefix - full).abs()))
                })
                .collect();
            let mut case = RenormingCase {
                p,
                r,
                trials,
                upper_factor: (p / (p - r)).powf(1.0 / r),
                min_lower_margin: f64::INFINITY,
                max_ratio: 0.0,
                sandwich_failures: 0,
                prefix_max_diff: 0.0,
                pass: true,
            };
            for row in rows {
                let (margin, ratio, ok, diff) = row?;
                case.min_lower_margin = case.min_lower_margin.min(margin);
                case.max_ratio = case.max_ratio.max(ratio);
                case.sandwich_failures += (!ok) as usize;
                case.prefix_max_diff = case.prefix_max_diff.max(diff);
            }
            case.pass = case.sandwich_failures == 0 && case.prefix_max_diff <= TOLERANCE;
            cases.push(case);
        }
    }
    let pass = cases.iter().all(|c| c.pass);
    Ok(RenormingSuite { cases, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingRun {
    pub dim: usize,
    pub p: f64,
    pub r: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub max_excess: f64,
    pub sa_margin: f64,
    pub probes: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingSuite {
    pub runs: Vec<EmbeddingRun>,
    pub max_excess: f64,
    pub min_sa_margin: f64,
    pub pass: bool,
}

/// The weak-L_p embedding on random positive step functions with `C ≤ 1`.
pub fn embedding_lemma_suite(count: usize, seed: u64) -> Result<EmbeddingSuite> {
    let runs: Vec<Result<EmbeddingRun>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = search::trial_rng(seed, STREAM_EMBEDDING, i);
            let n = 1 + search::index(&mut rng, EMBEDDING_MAX_DIM);
            let p = [1.5, 2.0, 3.0, 4.0][search::index(&mut rng, 4)];
            let r = 1.0 + (p - 1.0) * 0.9 * search::uniform(&mut rng);
            let w = unequal_weights(&mut rng, n);
            let raw: Vec<f64> = (0..n).map(|_| 0.05 + search::exponential(&mut rng)).collect();
            let m: f64 = w.iter().sum();
            let ar = w.iter().zip(&raw).map(|(w, v)| w * v.powf(r)).sum::<f64>().powf(1.0 / r);
            let c_raw = m.powf(1.0 / p - 1.0 / r) * ar;
            let target = 0.2 + 0.8 * search::uniform(&mut rng);
            let values: Vec<f64> = raw.iter().map(|v| v * target / c_raw).collect();
            let a = StepFunction::new(values, AtomicMeasure::new(w)?)?;
            let emb = build_weak_lp_embedding(&a, p, r, seed.wrapping_add(i))?;
            let v = &emb.verification;
            Ok(EmbeddingRun {
                dim: n,
                p,
                r,
                c: emb.c,
                max_excess: v.max_excess,
                sa_margin: v.sa_norm - v.c_pow_r,
                probes: v.probes,
                pass: v.pass,
            })
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let max_excess = runs.iter().map(|r| r.max_excess).fold(f64::NEG_INFINITY, f64::max);
    let min_sa_margin = runs.iter().map(|r| r.sa_margin).fold(f64::INFINITY, f64::min);
    let pass = runs.iter().all(|r| r.pass);
    Ok(EmbeddingSuite {
        runs,
        max_excess,
        min_sa_margin,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarityRun {
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub domain_p: f64,
    pub codomain_p: f64,
    pub tau: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub sigma: f64,
    pub c_generators: usize,
    pub in_polar: usize,
    pub violations: usize,
    pub resolved_by_witness: usize,
    pub check_a: bool,
    pub check_b: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolaritySuite {
    pub runs: Vec<PolarityRun>,
    pub pass: bool,
}

/// A random operator `ℓ_{p₁}^m → ℓ_{p₂}^k` with `m, k ≤ 3`.
pub fn random_lp_operator(rng: &mut Rng, max_dim: usize) -> Result<LinOperator> {
    let exps = [1.5, 2.0, 3.0];
    let m = 1 + search::index(rng, max_dim);
    let k = 1 + search::index(rng, max_dim);
    let pd = exps[search::index(rng, 3)];
    let pc = exps[search::index(rng, 3)];
    let matrix = (0..k).map(|_| search::gaussian_vec(rng, m)).collect();
    LinOperator::new(matrix, NormedLattice::lp(m, pd)?, NormedLattice::lp(k, pc)?)
}

/// Both one-sided polarity checks on random operators, alternating `σ = ℓ_τ` and `σ = ℓ_∞`.
pub fn polarity_suite(count: usize, samples: usize, budget: usize, seed: u64) -> Result<PolaritySuite> {
    let mut runs = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let mut rng = search::trial_rng(seed, STREAM_POLARITY, i);
        let t = random_lp_operator(&mut rng, POLARITY_MAX_DIM)?;
        let tau_p = [1.5, 2.0, 3.0][search::index(&mut rng, 3)];
        let sigma_p = if i % 2 == 0 { tau_p } else { f64::INFINITY };
        let rep = verify_polarity(
            &t,
            SymmetricSeqNorm::ell(tau_p)?,
            SymmetricSeqNorm::ell(sigma_p)?,
            samples,
            budget,
            seed.wrapping_add(i),
        )?;
        let exp = |x: &NormedLattice| match x.spec() {
            crate::lattice::NormSpec::Lp(p) => p.value(),
            _ => f64::NAN,
        };
        runs.push(PolarityRun {
            domain_dim: t.domain().dim(),
            codomain_dim: t.codomain().dim(),
            domain_p: exp(t.domain()),
            codomain_p: exp(t.codomain()),
            tau: tau_p,
            sigma: sigma_p,
            c_generators: rep.c_generators,
            in_polar: rep.in_polar,
            violations: rep.violations,
            resolved_by_witness: rep.resolved_by_witness,
            check_a: rep.check_a,
            check_b: rep.check_b,
            pass: rep.pass,
        });
    }
    let pass = runs.iter().all(|r| r.pass);
    Ok(PolaritySuite { runs, pass })
}
