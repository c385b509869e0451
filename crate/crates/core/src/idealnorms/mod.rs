//! The θ and η ideal norms on finite tensors and the factorizations they produce.

mod eta;
mod multiplier;
mod theta;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{check_dim, invalid, Result};
use crate::exponent::Exponent;
use crate::lattice::{field, number, number_list, object, only_keys, schema, NormSpec, NormedLattice, Vector};

pub use eta::{build_eta_factorization, EtaFactorization, ProductBound, ETA_TOLERANCE};
pub use multiplier::{multiplication_operator_check, MultiplierReport, MAX_MULTIPLIER_DIM};
pub use theta::{theta_lower, theta_profile, ThetaLevel, ThetaProfile};

/// `(p, p₂; q, q₂)` with `1 < p, q < ∞`, `p₂ ∈ {p, ∞}`, `q₂ ∈ {1, q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdealExponents {
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub p: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub p2: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub q: f64,
    #[serde(serialize_with = "crate::report::ser_exponent")]
    pub q2: f64,
}

impl IdealExponents {
    pub fn new(p: f64, p2: f64, q: f64, q2: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v > 1.0) {
                return invalid(format!("{name} must lie in (1, inf), got {v}"));
            }
        }
        if p2 != p && !p2.is_infinite() {
            return invalid(format!("p2 must be p or inf, got {p2}"));
        }
        if q2 != q && q2 != 1.0 {
            return invalid(format!("q2 must be 1 or q, got {q2}"));
        }
        Ok(IdealExponents { p, p2, q, q2 })
    }

    pub(crate) fn exps(&self) -> (Exponent, Exponent, Exponent, Exponent) {
        let e = |v: f64| Exponent::new(v).expect("validated exponent");
        (e(self.p), e(self.p2), e(self.q), e(self.q2))
    }
}

/// `u = Σ x_i ⊗ y_i` with the exponents of the ideal norm evaluated on it.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorRep {
    pairs: Vec<(Vector, Vector)>,
    exponents: IdealExponents,
}

impl TensorRep {
    pub fn new(pairs: Vec<(Vector, Vector)>, exponents: IdealExponents) -> Result<Self> {
        let Some((x0, y0)) = pairs.first() else {
            return invalid("a representation needs at least one pair");
        };
        let (dx, dy) = (x0.len(), y0.len());
        if dx == 0 || dy == 0 {
            return invalid("pair vectors must be nonempty");
        }
        for (x, y) in &pairs {
            check_dim(dx, x.len())?;
            check_dim(dy, y.len())?;
            if x.iter().chain(y).any(|v| !v.is_finite()) {
                return invalid("pair entries must be finite");
            }
        }
        Ok(TensorRep { pairs, exponents })
    }

    pub fn pairs(&self) -> &[(Vector, Vector)] {
        &self.pairs
    }

    pub fn exponents(&self) -> IdealExponents {
        self.exponents
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn x_dim(&self) -> usize {
        self.pairs[0].0.len()
    }

    pub fn y_dim(&self) -> usize {
        self.pairs[0].1.len()
    }

    pub fn xs(&self) -> Vec<Vector> {
        self.pairs.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn ys(&self) -> Vec<Vector> {
        self.pairs.iter().map(|(_, y)| y.clone()).collect()
    }

    /// Every `x_i` multiplied by `c`.
    pub fn scaled(&self, c: f64) -> TensorRep {
        TensorRep {
            pairs: self
                .pairs
                .iter()
                .map(|(x, y)| (x.iter().map(|v| c * v).collect(), y.clone()))
                .collect(),
            exponents: self.exponents,
        }
    }

    /// The matrix of `u` as an operator, `u_{jk} = Σ_i y_i[j] x_i[k]`.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.y_dim())
            .map(|j| {
                (0..self.x_dim())
                    .map(|k| self.pairs.iter().map(|(x, y)| y[j] * x[k]).sum())
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let e = |v: f64| if v.is_infinite() { json!("inf") } else { json!(v) };
        json!({
            "pairs": self.pairs.iter().map(|(x, y)| json!({"x": x, "y": y})).collect::<Vec<_>>(),
            "exponents": {
                "p": e(self.exponents.p),
                "p2": e(self.exponents.p2),
                "q": e(self.exponents.q),
                "q2": e(self.exponents.q2),
            }
        })
    }
}

/// Parses `{"pairs": [{"x": [...], "y": [...]}], "exponents": {"p", "p2", "q", "q2"}}`.
pub fn parse_rep(v: &Value) -> Result<TensorRep> {
    let m = object(v, "")?;
    only_keys(m, &["pairs", "exponents"], "")?;
    let Some(items) = field(m, "pairs", "")?.as_array() else {
        return schema("/pairs", "expected a list of pairs");
    };
    let mut pairs = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let path = format!("/pairs/{i}");
        let pm = object(item, &path)?;
        only_keys(pm, &["x", "y"], &path)?;
        let x = number_list(field(pm, "x", &path)?, &format!("{path}/x"))?;
        let y = number_list(field(pm, "y", &path)?, &format!("{path}/y"))?;
        pairs.push((x, y));
    }
    let em = object(field(m, "exponents", "")?, "/exponents")?;
    only_keys(em, &["p", "p2", "q", "q2"], "/exponents")?;
    let exponents = IdealExponents::new(
        number(em, "p", "/exponents")?,
        number(em, "p2", "/exponents")?,
        number(em, "q", "/exponents")?,
        number(em, "q2", "/exponents")?,
    )?;
    TensorRep::new(pairs, exponents)
}

fn lp_exponent(x: &NormedLattice, name: &str) -> Result<f64> {
    match x.spec() {
        NormSpec::Lp(p) => Ok(p.value()),
        _ => invalid(format!("{name} must be an lp lattice")),
    }
}
