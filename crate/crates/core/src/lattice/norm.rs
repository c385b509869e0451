use crate::convexgeom::SolidConvexBody;
use crate::error::{check_dim, invalid, Error, Result};
use crate::estimate::{ConstantEstimate, Side};
use crate::exponent::{conjugate, lp_norm, Exponent};
use crate::lorentz::kernels;
use crate::search::{self, AscentConfig};

use super::AtomicMeasure;

/// Parametric lattice norms on ℝⁿ with the coordinatewise order.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    Lp(Exponent),
    /// The `[r]` renorming of weak-L_p over an atomic measure, `1 ≤ r < p`.
    LorentzPInfty { p: f64, r: f64, measure: AtomicMeasure },
    /// The classical `∫ t^{1/q} f*(t) dt/t` norm over an atomic measure.
    LorentzQ1 { q: f64, measure: AtomicMeasure },
    /// Maximum of the block norms.
    LinfSum(Vec<NormedLattice>),
    /// Outer norm applied to the vector of inner block norms.
    BlockLorentz {
        outer: Box<NormedLattice>,
        blocks: Vec<NormedLattice>,
    },
    /// The three-term max norm on ℝ³ built from `p*`.
    Example54Dual { p: f64 },
    /// `sup{⟨x,b⟩ : ‖x‖ ≤ 1}` over the referenced unit ball.
    PredualOf(Box<NormedLattice>),
    /// Minkowski functional of a solid convex body.
    GaugeOf(SolidConvexBody),
}

/// ℝⁿ with the coordinatewise order and a lattice norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NormedLattice {
    dim: usize,
    spec: NormSpec,
}

/// A norm value with its reliability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub side: Side,
}

impl Evaluation {
    fn exact(value: f64) -> Self {
        Evaluation {
            value,
            side: Side::Exact,
        }
    }
}

const PREDUAL_BUDGET: usize = 2000;

fn finite_exponent(name: &str, p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return invalid(format!("{name} must lie in (1, inf), got {p}"));
    }
    Ok(())
}

impl NormedLattice {
    pub fn new(dim: usize, spec: NormSpec) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be positive");
        }
        match &spec {
            NormSpec::Lp(_) => {}
            NormSpec::LorentzPInfty { p, r, measure } => {
                finite_exponent("p", *p)?;
                if !(r.is_finite() && *r >= 1.0) {
                    return invalid(format!("r must satisfy r >= 1, got {r}"));
                }
                if r >= p {
                    return invalid(format!("r must be < p, got r = {r}, p = {p}"));
                }
                check_dim(dim, measure.dim())?;
            }
            NormSpec::LorentzQ1 { q, measure } => {
                finite_exponent("q", *q)?;
                check_dim(dim, measure.dim())?;
            }
            NormSpec::LinfSum(blocks) => {
                if blocks.is_empty() {
                    return invalid("linf_sum needs at least one block");
                }
                check_dim(dim, blocks.iter().map(|b| b.dim).sum())?;
            }
            NormSpec::BlockLorentz { outer, blocks } => {
                if !matches!(outer.spec, NormSpec::Lp(_) | NormSpec::LorentzPInfty { .. }) {
                    return invalid("block_lorentz outer norm must be lp or lorentz_pinfty");
                }
                check_dim(outer.dim, blocks.len())?;
                check_dim(dim, blocks.iter().map(|b| b.dim).sum())?;
            }
            NormSpec::Example54Dual { p } => {
                finite_exponent("p", *p)?;
                check_dim(3, dim)?;
            }
            NormSpec::PredualOf(inner) => {
                if matches!(inner.spec, NormSpec::PredualOf(_)) {
                    return invalid("predual_of nested more than once");
                }
                check_dim(dim, inner.dim)?;
            }
            NormSpec::GaugeOf(body) => check_dim(dim, body.dim())?,
        }
        Ok(NormedLattice { dim, spec })
    }

    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        Self::new(dim, NormSpec::Lp(Exponent::new(p)?))
    }

    pub fn lorentz_pinfty(p: f64, r: f64, measure: AtomicMeasure) -> Result<Self> {
        Self::new(measure.dim(), NormSpec::LorentzPInfty { p, r, measure })
    }

    pub fn lorentz_q1(q: f64, measure: AtomicMeasure) -> Result<Self> {
        Self::new(measure.dim(), NormSpec::LorentzQ1 { q, measure })
    }

    pub fn linf_sum(blocks: Vec<NormedLattice>) -> Result<Self> {
        let dim = blocks.iter().map(|b| b.dim).sum();
        Self::new(dim, NormSpec::LinfSum(blocks))
    }

    pub fn block_lorentz(outer: NormedLattice, blocks: Vec<NormedLattice>) -> Result<Self> {
        let dim = blocks.iter().map(|b| b.dim).sum();
        Self::new(
            dim,
            NormSpec::BlockLorentz {
                outer: Box::new(outer),
                blocks,
            },
        )
    }

    pub fn example54_dual(p: f64) -> Result<Self> {
        Self::new(3, NormSpec::Example54Dual { p })
    }

    pub fn predual_of(inner: NormedLattice) -> Result<Self> {
        Self::new(inner.dim, NormSpec::PredualOf(Box::new(inner)))
    }

    pub fn gauge_of(body: SolidConvexBody) -> Result<Self> {
        Self::new(body.dim(), NormSpec::GaugeOf(body))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    /// The lattice carrying the dual norm under the standard pairing.
    pub fn dual(&self) -> NormedLattice {
        match &self.spec {
            NormSpec::Lp(p) => NormedLattice {
                dim: self.dim,
                spec: NormSpec::Lp(p.conjugate()),
            },
            NormSpec::PredualOf(inner) => (**inner).clone(),
            _ => NormedLattice {
                dim: self.dim,
                spec: NormSpec::PredualOf(Box::new(self.clone())),
            },
        }
    }

    /// Norm with its reliability flag.
    pub fn eval(&self, x: &[f64]) -> Result<Evaluation> {
        check_dim(self.dim, x.len())?;
        let a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        self.eval_abs(&a)
    }

    /// Norm value; panics on a length mismatch.
    pub fn norm(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "vector length does not match lattice dimension");
        let a: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        match self.eval_abs(&a) {
            Ok(e) => e.value,
            Err(_) => f64::NAN,
        }
    }

    fn eval_abs(&self, a: &[f64]) -> Result<Evaluation> {
        Ok(match &self.spec {
            NormSpec::Lp(p) => Evaluation::exact(lp_norm(a, p.value())),
            NormSpec::LorentzPInfty { p, r, measure } => {
                let (value, exact) = kernels::weak_norm_r(a, measure.weights(), *p, *r);
                Evaluation {
                    value,
                    side: if exact { Side::Exact } else { Side::Lower },
                }
            }
            NormSpec::LorentzQ1 { q, measure } => {
                Evaluation::exact(kernels::norm_q1(a, measure.weights(), *q))
            }
            NormSpec::LinfSum(blocks) => {
                let mut out = Evaluation::exact(0.0);
                let mut start = 0;
                for b in blocks {
                    let e = b.eval_abs(&a[start..start + b.dim])?;
                    out.value = out.value.max(e.value);
                    out.side = out.side.meet(e.side);
                    start += b.dim;
                }
                out
            }
            NormSpec::BlockLorentz { outer, blocks } => {
                let mut side = Side::Exact;
                let mut inner = Vec::with_capacity(blocks.len());
                let mut start = 0;
                for b in blocks {
                    let e = b.eval_abs(&a[start..start + b.dim])?;
                    inner.push(e.value);
                    side = side.meet(e.side);
                    start += b.dim;
                }
                let e = outer.eval_abs(&inner)?;
                Evaluation {
                    value: e.value,
                    side: side.meet(e.side),
                }
            }
            NormSpec::Example54Dual { p } => Evaluation::exact(example54_norm(a, conjugate(*p))),
            NormSpec::PredualOf(inner) => {
                let d = inner.dual_abs(a, PREDUAL_BUDGET, 0)?;
                Evaluation {
                    value: d.value,
                    side: d.side,
                }
            }
            NormSpec::GaugeOf(body) => Evaluation::exact(body.gauge(a)?),
        })
    }

    /// Dual norm `sup{⟨x,b⟩ : ‖x‖ ≤ 1}` with a witness when one is produced.
    pub fn dual_eval(&self, b: &[f64], budget: usize, seed: u64) -> Result<ConstantEstimate> {
        check_dim(self.dim, b.len())?;
        let a: Vec<f64> = b.iter().map(|v| v.abs()).collect();
        let mut est = self.dual_abs(&a, budget, seed)?;
        for w in est.witness.iter_mut() {
            for (wi, bi) in w.iter_mut().zip(b) {
                if *bi < 0.0 {
                    *wi = -*wi;
                }
            }
        }
        Ok(est)
    }

    pub(crate) fn dual_abs(&self, a: &[f64], budget: usize, seed: u64) -> Result<ConstantEstimate> {
        let exact = |value: f64, witness: Vec<Vec<f64>>| ConstantEstimate {
            value,
            side: Side::Exact,
            witness,
            budget,
            seed,
        };
        Ok(match &self.spec {
            NormSpec::Lp(p) => {
                let q = p.conjugate().value();
                let value = lp_norm(a, q);
                exact(value, lp_norming_vector(a, p.value()).into_iter().collect())
            }
            NormSpec::LorentzPInfty { p, r, measure } if *r == 1.0 => {
                exact(kernels::weak_r1_dual(a, measure.weights(), *p), vec![])
            }
            NormSpec::LorentzQ1 { q, measure } => {
                let w = measure.weights();
                let g: Vec<f64> = a.iter().zip(w).map(|(b, w)| b / w).collect();
                let (v, ok) = kernels::weak_norm_r(&g, w, conjugate(*q), 1.0);
                ConstantEstimate {
                    value: v / q,
                    side: if ok { Side::Exact } else { Side::Lower },
                    witness: vec![],
                    budget,
                    seed,
                }
            }
            NormSpec::LinfSum(blocks) => {
                let mut value = 0.0;
                let mut side = Side::Exact;
                let mut start = 0;
                for b in blocks {
                    let e = b.dual_abs(&a[start..start + b.dim], budget, seed)?;
                    value += e.value;
                    side = side.meet(e.side);
                    start += b.dim;
                }
                ConstantEstimate {
                    value,
                    side,
                    witness: vec![],
                    budget,
                    seed,
                }
            }
            NormSpec::BlockLorentz { outer, blocks } => {
                let mut inner = Vec::with_capacity(blocks.len());
                let mut side = Side::Exact;
                let mut start = 0;
                for b in blocks {
                    let e = b.dual_abs(&a[start..start + b.dim], budget, seed)?;
                    inner.push(e.value);
                    side = side.meet(e.side);
                    start += b.dim;
                }
                let e = outer.dual_abs(&inner, budget, seed)?;
                ConstantEstimate {
                    value: e.value,
                    side: side.meet(e.side),
                    witness: vec![],
                    budget,
                    seed,
                }
            }
            NormSpec::PredualOf(inner) => {
                let e = inner.eval_abs(a)?;
                ConstantEstimate {
                    value: e.value,
                    side: e.side,
                    witness: vec![],
                    budget,
                    seed,
                }
            }
            NormSpec::GaugeOf(body) => exact(body.support_function(a)?, vec![]),
            NormSpec::LorentzPInfty { .. } | NormSpec::Example54Dual { .. } => {
                self.dual_by_ascent(a, budget, seed)?
            }
        })
    }

    /// Multistart pattern ascent of `⟨x,a⟩/‖x‖` over the positive cone.
    fn dual_by_ascent(&self, a: &[f64], budget: usize, seed: u64) -> Result<ConstantEstimate> {
        let n = self.dim;
        if a.iter().all(|v| *v == 0.0) {
            return Ok(ConstantEstimate {
                value: 0.0,
                side: Side::Exact,
                witness: vec![vec![0.0; n]],
                budget,
                seed,
            });
        }
        let mut objective = |x: &[f64]| -> f64 {
            let nx = self.eval_abs(x).map(|e| e.value).unwrap_or(f64::NAN);
            if nx <= 0.0 {
                return f64::NEG_INFINITY;
            }
            x.iter().zip(a).map(|(x, a)| x * a).sum::<f64>() / nx
        };
        let starts = (budget / 100).clamp(32, 128);
        let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(starts);
        candidates.push(a.to_vec());
        candidates.push(vec![1.0; n]);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            candidates.push(e);
        }
        for k in [0.5, 2.0, 3.0] {
            candidates.push(a.iter().map(|v| v.powf(k)).collect());
        }
        let mut t = 0u64;
        while candidates.len() < starts {
            let mut rng = search::trial_rng(seed, 11, t);
            candidates.push(search::exponential_vec(&mut rng, n));
            t += 1;
        }
        let short = AscentConfig {
            nonneg: true,
            initial_step: 0.25,
            min_step: 1e-4,
            max_evals: 200,
            random_dirs: 1,
        };
        let mut runs: Vec<(Vec<f64>, f64)> = candidates
            .into_iter()
            .enumerate()
            .map(|(i, x0)| {
                let mut rng = search::trial_rng(seed, 12, i as u64);
                search::ascend(&mut objective, x0, None, &short, &mut rng)
            })
            .collect();
        let mut order: Vec<usize> = (0..runs.len()).collect();
        order.sort_by(|&i, &j| runs[j].1.total_cmp(&runs[i].1).then(i.cmp(&j)));
        let fine = AscentConfig {
            nonneg: true,
            initial_step: 1e-3,
            min_step: 1e-10,
            max_evals: 4000,
            random_dirs: 2,
        };
        for (rank, &i) in order.iter().take(4).enumerate() {
            let mut rng = search::trial_rng(seed, 13, rank as u64);
            let x0 = runs[i].0.clone();
            runs[i] = search::ascend(&mut objective, x0, None, &fine, &mut rng);
        }
        let values: Vec<f64> = runs.iter().map(|r| r.1).collect();
        let best = search::argmax(&values).ok_or_else(|| Error::Lp("ascent failed".into()))?;
        let (x, value) = runs.swap_remove(best);
        let nx = self.eval_abs(&x)?.value;
        let witness: Vec<f64> = x.iter().map(|v| v / nx).collect();
        Ok(ConstantEstimate {
            value,
            side: Side::Lower,
            witness: vec![witness],
            budget,
            seed,
        })
    }
}

/// Unit vector `x` of ℓ_p with `⟨x,a⟩ = ‖a‖_{p*}`, signs included.
pub(crate) fn norming_vector(a: &[f64], p: f64) -> Option<Vec<f64>> {
    let m: Vec<f64> = a.iter().map(|v| v.abs()).collect();
    let x = lp_norming_vector(&m, p)?;
    Some(x.iter().zip(a).map(|(x, v)| if *v < 0.0 { -x } else { *x }).collect())
}

fn lp_norming_vector(a: &[f64], p: f64) -> Option<Vec<f64>> {
    let q = conjugate(p);
    let nb = lp_norm(a, q);
    if nb == 0.0 {
        return None;
    }
    Some(if p.is_infinite() {
        vec![1.0; a.len()]
    } else if p == 1.0 {
        let m = a.iter().fold(0.0f64, |m, v| m.max(*v));
        let j = a.iter().position(|v| *v == m).unwrap_or(0);
        let mut e = vec![0.0; a.len()];
        e[j] = 1.0;
        e
    } else {
        let x: Vec<f64> = a.iter().map(|v| (v / nb).powf(q - 1.0)).collect();
        let nx = lp_norm(&x, p);
        x.iter().map(|v| v / nx).collect()
    })
}

/// `max_i (|b_i|^{q} + (|b_j| + |b_k|)^{q})^{1/q}` on ℝ³.
pub(crate) fn example54_norm(a: &[f64], q: f64) -> f64 {
    (0..3)
        .map(|i| {
            let rest = a[(i + 1) % 3] + a[(i + 2) % 3];
            lp_norm(&[a[i], rest], q)
        })
        .fold(0.0, f64::max)
}

/// Norm of `x` in `X`; one-sided values are flagged in the result.
pub fn eval_norm(x: &NormedLattice, v: &[f64]) -> Result<Evaluation> {
    x.eval(v)
}

/// Dual norm of `b`; exact where a closed form or LP exists, else a lower bound.
pub fn eval_dual_norm(x: &NormedLattice, b: &[f64], budget: usize, seed: u64) -> Result<ConstantEstimate> {
    x.dual_eval(b, budget, seed)
}
