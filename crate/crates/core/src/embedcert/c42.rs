use serde::Serialize;

use crate::constants::{estimate_constant, gamma, ConstantKind};
use crate::error::{invalid, Result};
use crate::estimate::ConstantEstimate;
use crate::exponent::conjugate;
use crate::lattice::{LinOperator, NormedLattice, Vector};
use crate::search::{self, AscentConfig};

use super::t41::{t41_check, T41Outcome};

/// Sets `I_j` with `Σ_j χ_{I_j} = l χ_{1..n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringFamily {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
    pub multiplicity: usize,
}

impl CoveringFamily {
    pub fn new(n: usize, sets: Vec<Vec<usize>>, multiplicity: usize) -> Result<Self> {
        if multiplicity == 0 || sets.is_empty() {
            return invalid("a covering needs at least one set and multiplicity >= 1");
        }
        let mut count = vec![0usize; n];
        for s in &sets {
            for &i in s {
                if i >= n {
                    return invalid(format!("covering index {i} out of range for n = {n}"));
                }
                count[i] += 1;
            }
        }
        if let Some(i) = count.iter().position(|c| *c != multiplicity) {
            return invalid(format!("coordinate {i} is covered {} times, expected {multiplicity}", count[i]));
        }
        Ok(CoveringFamily { n, sets, multiplicity })
    }

    pub fn singletons(n: usize) -> Self {
        CoveringFamily {
            n,
            sets: (0..n).map(|i| vec![i]).collect(),
            multiplicity: 1,
        }
    }

    /// All two-element subsets; every coordinate lies in `n − 1` of them.
    pub fn pairs(n: usize) -> Result<Self> {
        let mut sets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                sets.push(vec![i, j]);
            }
        }
        Self::new(n, sets, n.saturating_sub(1))
    }
}

/// `(Σ_j ‖b_{I_j}‖^{p*} / l)^{1/p*}`, a lower bound for every embedding constant.
pub fn c42_bound(xstar: &NormedLattice, p: f64, b: &[f64], covering: &CoveringFamily) -> Result<f64> {
    crate::error::check_dim(xstar.dim(), b.len())?;
    crate::error::check_dim(covering.n, b.len())?;
    if !(p.is_finite() && p > 1.0) {
        return invalid(format!("p must lie in (1, inf), got {p}"));
    }
    if b.iter().any(|v| *v < 0.0) {
        return invalid("b must be nonnegative");
    }
    let nb = xstar.eval(b)?.value;
    if (nb - 1.0).abs() > 1e-6 {
        return invalid(format!("b must be normalized, got norm {nb}"));
    }
    let q = conjugate(p);
    let total: f64 = covering
        .sets
        .iter()
        .map(|s| {
            let mut r = vec![0.0; b.len()];
            for &i in s {
                r[i] = b[i];
            }
            xstar.eval(&r).map(|e| e.value.powf(q))
        })
        .sum::<Result<f64>>()?;
    Ok((total / covering.multiplicity as f64).powf(1.0 / q))
}

/// `(3·2^{p*} / (2(1 + 2^{p*})))^{1/p*}`.
pub fn example54_closed_form(p: f64) -> f64 {
    let q = conjugate(p);
    let t = 2f64.powf(q);
    (3.0 * t / (2.0 * (1.0 + t))).powf(1.0 / q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerEstimateCheck {
    pub search: ConstantEstimate,
    /// Largest ratio over the disjoint positive grid families.
    pub grid_max: f64,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bracket {
    /// Certified lower bound for the embedding constant of this lattice.
    pub lower: f64,
    /// Smallest grid constant at which every sampled `a` got a certificate; not a proof.
    pub upper_search: Option<f64>,
    pub gamma_p: f64,
    pub sampled_a: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example54Report {
    pub p: f64,
    pub p_star: f64,
    pub lower_estimate: LowerEstimateCheck,
    pub bound: f64,
    pub closed_form: f64,
    pub bound_pow: f64,
    pub matches_closed_form: bool,
    pub exceeds_one: bool,
    pub bracket: Bracket,
    pub pass: bool,
}

/// Largest lower `p*`-estimate ratio of the three-term norm over disjoint
/// positive families on a grid, each refined by ascent.
fn lower_estimate_grid(y: &NormedLattice, q: f64) -> f64 {
    let parts: [&[&[usize]]; 4] = [
        &[&[0], &[1, 2]],
        &[&[1], &[0, 2]],
        &[&[2], &[0, 1]],
        &[&[0], &[1], &[2]],
    ];
    let ratio = |z: &[f64], part: &[&[usize]]| -> f64 {
        let mut sum = 0.0;
        for s in part {
            let mut r = vec![0.0; 3];
            for &i in *s {
                r[i] = z[i];
            }
            sum += y.norm(&r).powf(q);
        }
        let den = y.norm(z);
        if den > 0.0 {
            sum.powf(1.0 / q) / den
        } else {
            f64::NEG_INFINITY
        }
    };
    let steps = 24;
    let mut best = f64::NEG_INFINITY;
    for (k, part) in parts.iter().enumerate() {
        let mut local = (f64::NEG_INFINITY, vec![1.0; 3]);
        for i in 0..=steps {
            for j in 0..=steps - i {
                let z = vec![i as f64, j as f64, (steps - i - j) as f64];
                let v = ratio(&z, part);
                if v > local.0 {
                    local = (v, z);
                }
            }
        }
        let mut rng = search::trial_rng(0, 111, k as u64);
        let cfg = AscentConfig {
            nonneg: true,
            ..AscentConfig::default()
        };
        let mut f = |z: &[f64]| ratio(z, part);
        let (_, v) = search::ascend(&mut f, local.1, None, &cfg, &mut rng);
        best = best.max(v).max(local.0);
    }
    best
}

/// Reproduces the lower bound `C_p^{p*} ≥ 3·2^{p*}/(2(1+2^{p*})) > 1`.
pub fn reproduce_example54(p: f64, budget: usize, seed: u64) -> Result<Example54Report> {
    if !(p.is_finite() && p > 1.0) {
        return invalid(format!("p must lie in (1, inf), got {p}"));
    }
    let q = conjugate(p);
    let y = NormedLattice::example54_dual(p)?;
    let search = estimate_constant(&LinOperator::identity(y.clone()), ConstantKind::lower(q)?, budget.min(2000), seed);
    let grid_max = lower_estimate_grid(&y, q);
    let value = search.value.max(grid_max);
    let lower_estimate = LowerEstimateCheck {
        pass: (value - 1.0).abs() <= 1e-6,
        search,
        grid_max,
        value,
    };

    let s = (1.0 + 2f64.powf(q)).powf(-1.0 / q);
    let b = vec![s; 3];
    let bound = c42_bound(&y, p, &b, &CoveringFamily::pairs(3)?)?;
    let closed_form = example54_closed_form(p);
    let matches_closed_form = (bound - closed_form).abs() <= 1e-9;
    let exceeds_one = bound > 1.0;

    let x = NormedLattice::predual_of(y)?;
    let mut samples: Vec<Vector> = vec![vec![1.0; 3], vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]];
    for k in 0..4 {
        samples.push(search::exponential_vec(&mut search::trial_rng(seed, 112, k), 3));
    }
    let samples: Vec<Vector> = samples
        .into_iter()
        .map(|a| {
            let n = x.norm(&a);
            a.iter().map(|v| v / n).collect()
        })
        .collect();
    let gamma_p = gamma(p)?;
    let grid: Vec<f64> = (0..=8).map(|k| bound + (gamma_p - bound) * k as f64 / 8.0).collect();
    let mut upper_search = None;
    for &c in &grid {
        let mut all = true;
        for a in &samples {
            match t41_check(&x, p, c, a, 1e-6, budget.min(2000), seed) {
                Ok(T41Outcome::Certificate(_)) => {}
                _ => {
                    all = false;
                    break;
                }
            }
        }
        if all {
            upper_search = Some(c);
            break;
        }
    }
    let bracket = Bracket {
        lower: bound,
        upper_search,
        gamma_p,
        sampled_a: samples.len(),
    };
    Ok(Example54Report {
        p,
        p_star: q,
        bound_pow: bound.powf(q),
        pass: lower_estimate.pass && matches_closed_form && exceeds_one,
        lower_estimate,
        bound,
        closed_form,
        matches_closed_form,
        exceeds_one,
        bracket,
    })
}
