use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exponent::Exponent;
use crate::lattice::{sigma_apply_unchecked, LinOperator, SymmetricSeqNorm, Vector};

/// Which inequality of the convexity/concavity family a constant refers to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConstantKind {
    /// `‖σ_{p₂}(|Tx_i|)‖ ≤ K (Σ‖x_i‖^p)^{1/p}`, `p ≤ p₂`.
    Convex { p: Exponent, p2: Exponent },
    /// `(Σ‖Tx_i‖^q)^{1/q} ≤ K ‖σ_{q₂}(|x_i|)‖`, `q₂ ≤ q`.
    Concave { q: Exponent, q2: Exponent },
    /// `Convex(p, ∞)` over pairwise disjoint families.
    UpperEstimate(Exponent),
    /// `Concave(q, 1)` over pairwise disjoint families.
    LowerEstimate(Exponent),
}

impl ConstantKind {
    pub fn convex(p: f64, p2: f64) -> Result<Self> {
        let (p, p2) = (Exponent::new(p)?, Exponent::new(p2)?);
        if p > p2 {
            return invalid(format!("convexity needs p <= p2, got p = {p}, p2 = {p2}"));
        }
        Ok(ConstantKind::Convex { p, p2 })
    }

    pub fn concave(q: f64, q2: f64) -> Result<Self> {
        let (q, q2) = (Exponent::new(q)?, Exponent::new(q2)?);
        if q2 > q {
            return invalid(format!("concavity needs q2 <= q, got q = {q}, q2 = {q2}"));
        }
        Ok(ConstantKind::Concave { q, q2 })
    }

    pub fn upper(p: f64) -> Result<Self> {
        Ok(ConstantKind::UpperEstimate(Exponent::new(p)?))
    }

    pub fn lower(q: f64) -> Result<Self> {
        Ok(ConstantKind::LowerEstimate(Exponent::new(q)?))
    }

    pub fn is_disjoint(&self) -> bool {
        matches!(self, ConstantKind::UpperEstimate(_) | ConstantKind::LowerEstimate(_))
    }

    pub fn is_convex_side(&self) -> bool {
        matches!(self, ConstantKind::Convex { .. } | ConstantKind::UpperEstimate(_))
    }

    /// Name and exponents for reports.
    pub fn describe(&self) -> KindRecord {
        let (name, a, b) = match *self {
            ConstantKind::Convex { p, p2 } => ("convex", p, Some(p2)),
            ConstantKind::Concave { q, q2 } => ("concave", q, Some(q2)),
            ConstantKind::UpperEstimate(p) => ("upper_estimate", p, None),
            ConstantKind::LowerEstimate(q) => ("lower_estimate", q, None),
        };
        let show = |e: Exponent| {
            if e.is_infinite() {
                "inf".to_string()
            } else {
                format!("{}", e.value())
            }
        };
        KindRecord {
            kind: name,
            exponent: show(a),
            inner_exponent: b.map(show),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KindRecord {
    pub kind: &'static str,
    pub exponent: String,
    pub inner_exponent: Option<String>,
}

fn disjoint(family: &[Vector]) -> bool {
    let dim = family[0].len();
    (0..dim).all(|j| family.iter().filter(|x| x[j] != 0.0).count() <= 1)
}

/// Numerator and denominator of the defining inequality.
pub(crate) fn ratio_parts(t: &LinOperator, kind: ConstantKind, family: &[Vector]) -> (f64, f64) {
    let seq = |p: Exponent| SymmetricSeqNorm::lp(p);
    let n_dom = t.domain().dim();
    let n_cod = t.codomain().dim();
    let (convex, a, b) = match kind {
        ConstantKind::Convex { p, p2 } => (true, p, p2),
        ConstantKind::UpperEstimate(p) => (true, p, Exponent::INFINITY),
        ConstantKind::Concave { q, q2 } => (false, q, q2),
        ConstantKind::LowerEstimate(q) => (false, q, Exponent::INFINITY),
    };
    if convex {
        let images: Vec<Vector> = family.iter().map(|x| t.apply(x)).collect();
        let num = t.codomain().norm(&sigma_apply_unchecked(&seq(b), &images, n_cod));
        let norms: Vec<f64> = family.iter().map(|x| t.domain().norm(x)).collect();
        (num, seq(a).eval(&norms))
    } else {
        let norms: Vec<f64> = family.iter().map(|x| t.codomain().norm(&t.apply(x))).collect();
        let den = t.domain().norm(&sigma_apply_unchecked(&seq(b), family, n_dom));
        (seq(a).eval(&norms), den)
    }
}

pub(crate) fn ratio_value(t: &LinOperator, kind: ConstantKind, family: &[Vector]) -> f64 {
    let (num, den) = ratio_parts(t, kind, family);
    if den > 0.0 && num.is_finite() {
        num / den
    } else {
        f64::NEG_INFINITY
    }
}

/// The ratio of the defining inequality for one family: a lower bound for the constant.
pub fn ratio(t: &LinOperator, kind: ConstantKind, family: &[Vector]) -> Result<f64> {
    if family.is_empty() {
        return invalid("empty family");
    }
    for x in family {
        crate::error::check_dim(t.domain().dim(), x.len())?;
    }
    if kind.is_disjoint() && !disjoint(family) {
        return invalid("estimate kinds need pairwise disjoint supports");
    }
    let (num, den) = ratio_parts(t, kind, family);
    if !(den > 0.0) {
        return invalid("zero family: the denominator vanishes");
    }
    Ok(num / den)
}
