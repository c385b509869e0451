use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exponent::conjugate;
use crate::lattice::{dot, norming_vector, NormSpec, NormedLattice, Vector};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::search::{self, AscentConfig};

/// Subset constraints are enumerated exactly up to this dimension.
pub const MAX_T41_DIM: usize = 12;
pub const MARGIN_TOLERANCE: f64 = 1e-9;
const STREAM_START: u64 = 101;
/// Relative shrink applied to `b` so that the subset constraints hold strictly.
const SHRINK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetMargin {
    pub subset: Vec<usize>,
    /// `‖b_I‖^{p*} − C^{p*} Σ_{i∈I} d_i`.
    pub margin: f64,
}

/// Witness for condition (1): `⟨a,b⟩ > 1 − ε`, `d` in the simplex and
/// `‖b_I‖^{p*} ≤ C^{p*} d(I)` for every nonempty `I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingCertificate {
    #[serde(rename = "C")]
    pub c: f64,
    pub p: f64,
    pub a: Vector,
    pub b: Vector,
    pub d: Vec<f64>,
    pub epsilon: f64,
    pub pairing: f64,
    pub subset_margins: Vec<SubsetMargin>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfeasibleReport {
    #[serde(rename = "C")]
    pub c: f64,
    pub epsilon: f64,
    /// Largest `⟨a,b⟩` over searched `b` satisfying the constraints at `C`.
    pub best_pairing: f64,
    pub best_b: Vector,
    pub starts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum T41Outcome {
    Certificate(EmbeddingCertificate),
    Infeasible(InfeasibleReport),
}

impl T41Outcome {
    pub fn certificate(&self) -> Option<&EmbeddingCertificate> {
        match self {
            T41Outcome::Certificate(c) => Some(c),
            T41Outcome::Infeasible(_) => None,
        }
    }
}

fn subset(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

fn restricted(b: &[f64], mask: usize) -> Vector {
    b.iter()
        .enumerate()
        .map(|(i, v)| if mask >> i & 1 == 1 { *v } else { 0.0 })
        .collect()
}

/// `‖b_I‖^{p*}` for every mask `I` (index 0 unused).
fn subset_powers(xstar: &NormedLattice, b: &[f64], q: f64) -> Vec<f64> {
    let n = b.len();
    let mut out = vec![0.0; 1 << n];
    for (mask, o) in out.iter_mut().enumerate().skip(1) {
        *o = xstar.norm(&restricted(b, mask)).powf(q);
    }
    out
}

impl EmbeddingCertificate {
    /// Rechecks simplex, pairing and all subset margins at constant `c`.
    pub fn validate_at(&self, xstar: &NormedLattice, c: f64) -> bool {
        let n = self.b.len();
        let q = conjugate(self.p);
        let simplex = self.d.iter().all(|v| *v >= 0.0) && (self.d.iter().sum::<f64>() - 1.0).abs() <= 1e-12;
        let pairing = dot(&self.a, &self.b) > 1.0 - self.epsilon && self.b.iter().all(|v| *v >= 0.0);
        let powers = subset_powers(xstar, &self.b, q);
        let margins = (1..1usize << n).all(|mask| {
            let dsum: f64 = subset(mask, n).iter().map(|&i| self.d[i]).sum();
            powers[mask] - c.powf(q) * dsum <= MARGIN_TOLERANCE
        });
        simplex && pairing && margins
    }

    pub fn validate(&self, xstar: &NormedLattice) -> bool {
        self.validate_at(xstar, self.c)
    }
}

/// `κ(b)` with `κ^{p*} = 1/t*`, `t* = max t` subject to `d(I) ≥ t‖b_I‖^{p*}`,
/// `Σd = 1`, `d ≥ 0`: the least `C` admitting some `d` for this `b`.
pub(crate) fn kappa(xstar: &NormedLattice, b: &[f64], q: f64) -> Result<Option<(f64, Vec<f64>)>> {
    let n = b.len();
    let powers = subset_powers(xstar, b, q);
    if powers.iter().all(|v| *v <= 0.0) {
        return Ok(None);
    }
    let mut lp = LinearProgram::new(true);
    let d: Vec<usize> = (0..n).map(|_| lp.add_var(0.0, 0.0, f64::INFINITY)).collect();
    let t = lp.add_var(1.0, 0.0, f64::INFINITY);
    for (mask, &pw) in powers.iter().enumerate().skip(1) {
        if pw > 0.0 {
            let mut row: Vec<(usize, f64)> = subset(mask, n).iter().map(|&i| (d[i], 1.0)).collect();
            row.push((t, -pw));
            lp.add_row(row, Cmp::Ge, 0.0);
        }
    }
    lp.add_row(d.iter().map(|&v| (v, 1.0)).collect(), Cmp::Eq, 1.0);
    match lp.solve()? {
        LpOutcome::Optimal { value, x } if value > 0.0 => {
            let mut dv: Vec<f64> = x[..n].iter().map(|v| v.max(0.0)).collect();
            let s: f64 = dv.iter().sum();
            dv.iter_mut().for_each(|v| *v /= s);
            Ok(Some((value.powf(-1.0 / q), dv)))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        _ => Err(Error::Lp("subset LP not optimal".into())),
    }
}

/// A positive functional with `⟨a,b⟩ = ‖a‖` and `‖b‖_* = 1`, where one is known in closed form.
pub(crate) fn norming_functional(x: &NormedLattice, a: &[f64]) -> Option<Vector> {
    match x.spec() {
        NormSpec::Lp(p) => norming_vector(a, p.conjugate().value()).map(|b| b.iter().map(|v| v.abs()).collect()),
        NormSpec::LorentzPInfty { p, r, measure } if *r == 1.0 && a.len() <= 20 => {
            let w = measure.weights();
            let n = a.len();
            let mut best = (0.0, 0usize);
            for mask in 1usize..1 << n {
                let (mut mass, mut integral) = (0.0, 0.0);
                for i in subset(mask, n) {
                    mass += w[i];
                    integral += w[i] * a[i].abs();
                }
                let v = mass.powf(1.0 / p - 1.0) * integral;
                if v > best.0 {
                    best = (v, mask);
                }
            }
            let mass: f64 = subset(best.1, n).iter().map(|&i| w[i]).sum();
            let s = mass.powf(1.0 / p - 1.0);
            Some((0..n).map(|i| if best.1 >> i & 1 == 1 { s * w[i] } else { 0.0 }).collect())
        }
        _ => None,
    }
}

fn certificate(xstar: &NormedLattice, a: &[f64], b: &[f64], p: f64, c: f64, epsilon: f64) -> Result<Option<EmbeddingCertificate>> {
    let q = conjugate(p);
    let Some((k, _)) = kappa(xstar, b, q)? else {
        return Ok(None);
    };
    let scale = c / k * (1.0 - SHRINK);
    let bs: Vector = b.iter().map(|v| v * scale).collect();
    let Some((_, d)) = kappa(xstar, &bs, q)? else {
        return Ok(None);
    };
    let n = b.len();
    let powers = subset_powers(xstar, &bs, q);
    let subset_margins = (1..1usize << n)
        .map(|mask| {
            let members = subset(mask, n);
            let dsum: f64 = members.iter().map(|&i| d[i]).sum();
            SubsetMargin {
                subset: members,
                margin: powers[mask] - c.powf(q) * dsum,
            }
        })
        .collect();
    let cert = EmbeddingCertificate {
        c,
        p,
        a: a.to_vec(),
        pairing: dot(a, &bs),
        b: bs,
        d,
        epsilon,
        subset_margins,
    };
    Ok(cert.validate(xstar).then_some(cert))
}

/// Searches for a certificate of condition (1) at constant `C`.
///
/// `b ≥ 0` maximizes `⟨a,b⟩/κ(b)` by multistart ascent; the best `b` is then
/// scaled to `κ = C` and the subset LP supplies `d`. Failure to find one is
/// reported, not proven.
pub fn t41_check(x: &NormedLattice, p: f64, c: f64, a: &[f64], epsilon: f64, budget: usize, seed: u64) -> Result<T41Outcome> {
    crate::error::check_dim(x.dim(), a.len())?;
    let n = a.len();
    if n > MAX_T41_DIM {
        return invalid(format!("t41_check enumerates subsets up to dimension {MAX_T41_DIM}"));
    }
    if !(p.is_finite() && p > 1.0) {
        return invalid(format!("p must lie in (1, inf), got {p}"));
    }
    if !(c >= 1.0) {
        return invalid(format!("C must be at least 1, got {c}"));
    }
    if a.iter().any(|v| *v < 0.0) {
        return invalid("a must be nonnegative");
    }
    let norm_a = x.eval(a)?.value;
    if (norm_a - 1.0).abs() > 1e-6 {
        return invalid(format!("a must be normalized, got norm {norm_a}"));
    }
    let xstar = x.dual();
    let q = conjugate(p);
    let ratio = |b: &[f64]| -> f64 {
        match kappa(&xstar, b, q) {
            Ok(Some((k, _))) if k > 0.0 => dot(a, b) / k,
            _ => f64::NEG_INFINITY,
        }
    };
    let target = (1.0 - epsilon) / (c * (1.0 - SHRINK));

    let mut starts: Vec<Vector> = Vec::new();
    if let Some(b) = norming_functional(x, a) {
        starts.push(b);
    }
    starts.push(a.to_vec());
    starts.push(vec![1.0; n]);
    let random = (budget / 200).clamp(4, 32);
    for k in 0..random as u64 {
        starts.push(search::exponential_vec(&mut search::trial_rng(seed, STREAM_START, k), n));
    }
    let mut best = (f64::NEG_INFINITY, vec![0.0; n]);
    for (k, b0) in starts.iter().enumerate() {
        let v0 = ratio(b0);
        if v0 > best.0 {
            best = (v0, b0.clone());
        }
        if best.0 > target {
            break;
        }
        let mut rng = search::trial_rng(seed, STREAM_START + 1, k as u64);
        let cfg = AscentConfig {
            nonneg: true,
            max_evals: 400,
            min_step: 1e-7,
            random_dirs: 1,
            ..AscentConfig::default()
        };
        let mut f = |b: &[f64]| ratio(b);
        let (b, v) = search::ascend(&mut f, b0.clone(), None, &cfg, &mut rng);
        if v > best.0 {
            best = (v, b);
        }
        if best.0 > target {
            break;
        }
    }
    if best.0 > target {
        if let Some(cert) = certificate(&xstar, a, &best.1, p, c, epsilon)? {
            return Ok(T41Outcome::Certificate(cert));
        }
    }
    let (best_pairing, best_b) = match kappa(&xstar, &best.1, q)? {
        Some((k, _)) => {
            let bs: Vector = best.1.iter().map(|v| v * c / k).collect();
            (dot(a, &bs), bs)
        }
        None => (0.0, best.1.clone()),
    };
    Ok(T41Outcome::Infeasible(InfeasibleReport {
        c,
        epsilon,
        best_pairing,
        best_b,
        starts: starts.len(),
    }))
}
