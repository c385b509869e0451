use serde::Serialize;

use crate::error::{invalid, Result};
use crate::estimate::ConstantEstimate;
use crate::lattice::{LinOperator, NormSpec, SymmetricSeqNorm, Vector};

use super::estimate::estimate_constant;
use super::kind::{ratio_value, ConstantKind};

/// Oracle instances: diagonal operators, dim ≤ 3, families of length ≤ 3.
pub const ORACLE_DIM: usize = 3;
pub const ORACLE_LEN: usize = 3;
const ORACLE_POINTS: usize = 200_000;
pub const ORACLE_TOLERANCE: f64 = 5e-2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleValues {
    pub grid_points: usize,
    pub convex: f64,
    pub concave: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityGapReport {
    pub convex: ConstantEstimate,
    pub concave: ConstantEstimate,
    pub gap: f64,
    pub oracle: Option<OracleValues>,
    pub asserted: bool,
    pub pass: bool,
}

fn is_diagonal(t: &LinOperator) -> bool {
    let m = t.matrix();
    m.len() == t.domain().dim()
        && m.iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| i == j || *v == 0.0))
}

/// Best ratio over all families of `len` vectors with entries on a uniform grid in `[0, 1]`.
fn grid_sup(t: &LinOperator, kind: ConstantKind, len: usize, levels: usize) -> (f64, Vec<Vector>) {
    let n = t.domain().dim();
    let slots = n * len;
    let total = levels.pow(slots as u32);
    let step = 1.0 / (levels - 1) as f64;
    let mut best = (0.0f64, Vec::new());
    let mut fam = vec![vec![0.0; n]; len];
    for code in 0..total {
        let mut c = code;
        for s in 0..slots {
            fam[s / n][s % n] = (c % levels) as f64 * step;
            c /= levels;
        }
        let v = ratio_value(t, kind, &fam);
        if v > best.0 {
            best = (v, fam.clone());
        }
    }
    best
}

type Best = (f64, Vec<Vector>);

fn oracle(t: &LinOperator, convex: ConstantKind, concave: ConstantKind) -> (OracleValues, Best, Best) {
    let adj = t.adjoint();
    let n = t.domain().dim();
    let mut points = 0;
    let mut a: Best = (0.0, Vec::new());
    let mut b: Best = (0.0, Vec::new());
    for len in 1..=ORACLE_LEN {
        let slots = (n * len) as f64;
        let levels = ((ORACLE_POINTS as f64).powf(1.0 / slots).floor() as usize).max(2);
        points += levels.pow((n * len) as u32);
        let (ga, gb) = rayon::join(|| grid_sup(t, convex, len, levels), || grid_sup(&adj, concave, len, levels));
        if ga.0 > a.0 {
            a = ga;
        }
        if gb.0 > b.0 {
            b = gb;
        }
    }
    let values = OracleValues {
        grid_points: points,
        convex: a.0,
        concave: b.0,
    };
    (values, a, b)
}

/// Lower bounds for `K^{(τ,σ)}(T)` and `K_{(τ*,σ*)}(T*)`, which coincide in theory.
///
/// On oracle-scale instances the two sides are also maximized over a grid and
/// their gap is asserted to be within `5e-2`; elsewhere it is only reported.
pub fn duality_gap(
    t: &LinOperator,
    tau: SymmetricSeqNorm,
    sigma: SymmetricSeqNorm,
    budget: usize,
    seed: u64,
) -> Result<DualityGapReport> {
    let lp = |s: &NormSpec| matches!(s, NormSpec::Lp(_));
    if !lp(t.domain().spec()) || !lp(t.codomain().spec()) {
        return invalid("duality_gap needs lp domain and codomain");
    }
    let convex_kind = ConstantKind::Convex { p: tau.p, p2: sigma.p };
    let concave_kind = ConstantKind::Concave {
        q: tau.dual().p,
        q2: sigma.dual().p,
    };
    let mut convex = estimate_constant(t, convex_kind, budget, seed);
    let mut concave = estimate_constant(&t.adjoint(), concave_kind, budget, seed);
    let mut oracle_values = None;
    let asserted = is_diagonal(t) && t.domain().dim() <= ORACLE_DIM;
    if asserted {
        let (o, a, b) = oracle(t, convex_kind, concave_kind);
        let lift = |e: &mut ConstantEstimate, (v, fam): Best| {
            if v > e.value {
                e.value = v;
                e.witness = fam;
            }
        };
        lift(&mut convex, a);
        lift(&mut concave, b);
        oracle_values = Some(o);
    }
    let gap = (convex.value - concave.value).abs();
    Ok(DualityGapReport {
        pass: !asserted || gap <= ORACLE_TOLERANCE,
        convex,
        concave,
        gap,
        oracle: oracle_values,
        asserted,
    })
}

