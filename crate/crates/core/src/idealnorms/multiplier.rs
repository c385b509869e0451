use serde::Serialize;

use crate::constants::{estimate_constant, ConstantKind};
use crate::error::{check_dim, invalid, Result};
use crate::estimate::ConstantEstimate;
use crate::exponent::{conjugate, Exponent};
use crate::lattice::{LinOperator, NormSpec, NormedLattice, Vector};

/// Operator norms are computed over all greedy vertices, `n!` of them.
pub const MAX_MULTIPLIER_DIM: usize = 8;
const NORM_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub dim: usize,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub p: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub q: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub q2: f64,
    pub operator_norm: f64,
    /// Unit vector of the source attaining the operator norm.
    pub norm_vertex: Vector,
    pub vertex_source_norm: f64,
    pub convex: ConstantEstimate,
    pub concave: ConstantEstimate,
    pub convex_ok: bool,
    pub concave_ok: bool,
    pub pass: bool,
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("a larger element exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// `‖diag(g)‖` from `L_{p,∞}^{[1]}(w)` into `target`.
///
/// The unit ball of the source is `{f : Σ_A w_i|f_i| ≤ w(A)^{1/p*}}`, a
/// polymatroid in `(w_i|f_i|)`; a convex target norm peaks at one of its
/// greedy vertices.
fn operator_norm(g: &[f64], w: &[f64], p: f64, target: &NormedLattice) -> (f64, Vector) {
    let n = g.len();
    let ps = conjugate(p);
    let phi = |m: f64| m.powf(1.0 / ps);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = (f64::NEG_INFINITY, vec![0.0; n]);
    loop {
        let mut f = vec![0.0; n];
        let mut mass = 0.0;
        for &i in &perm {
            let next = mass + w[i];
            f[i] = (phi(next) - phi(mass)) / w[i];
            mass = next;
        }
        let gf: Vec<f64> = g.iter().zip(&f).map(|(a, b)| a * b).collect();
        let v = target.norm(&gf);
        if v > best.0 {
            best = (v, f);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

/// Multiplication by `g ≥ 0` from `L_{p,∞}^{[1]}(w₁)` into `L_q` or `L_{q,1}(w₂)`.
///
/// The target fixes `q₂`: `q` for `L_q`, `1` for `L_{q,1}`. Both estimated
/// constants `K^{(p,∞)}(D)` and `K_{(q,q₂)}(D)` must stay below `‖D‖`.
pub fn multiplication_operator_check(
    g: &[f64],
    source: &NormedLattice,
    target: &NormedLattice,
    budget: usize,
    seed: u64,
) -> Result<MultiplierReport> {
    if g.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return invalid("multiplier g must be finite and nonnegative");
    }
    check_dim(source.dim(), g.len())?;
    check_dim(target.dim(), g.len())?;
    let n = g.len();
    if n > MAX_MULTIPLIER_DIM {
        return invalid(format!("multiplier dimension {n} exceeds {MAX_MULTIPLIER_DIM}"));
    }
    let (p, w) = match source.spec() {
        NormSpec::LorentzPInfty { p, r, measure } if *r == 1.0 => (*p, measure.weights().to_vec()),
        _ => return invalid("source must be lorentz_pinfty with r = 1"),
    };
    let (q, q2) = match target.spec() {
        NormSpec::Lp(q) if q.value().is_finite() && q.value() > 1.0 => (q.value(), q.value()),
        NormSpec::LorentzQ1 { q, .. } => (*q, 1.0),
        _ => return invalid("target must be lp with 1 < q < inf or lorentz_q1"),
    };
    let (operator_norm, norm_vertex) = operator_norm(g, &w, p, target);
    let vertex_source_norm = source.norm(&norm_vertex);
    let d = LinOperator::diagonal(g, source.clone(), target.clone())?;
    let convex = estimate_constant(
        &d,
        ConstantKind::Convex {
            p: Exponent::new(p)?,
            p2: Exponent::INFINITY,
        },
        budget,
        seed,
    );
    let concave = estimate_constant(
        &d,
        ConstantKind::Concave {
            q: Exponent::new(q)?,
            q2: Exponent::new(q2)?,
        },
        budget,
        seed,
    );
    let convex_ok = convex.value <= operator_norm + NORM_SLACK;
    let concave_ok = concave.value <= operator_norm + NORM_SLACK;
    Ok(MultiplierReport {
        dim: n,
        p,
        q,
        q2,
        operator_norm,
        norm_vertex,
        vertex_source_norm,
        convex,
        concave,
        convex_ok,
        concave_ok,
        pass: convex_ok && concave_ok,
    })
}
