//! The JSON lattice-definition document.

use serde_json::{json, Map, Value};

use crate::convexgeom::SolidConvexBody;
use crate::error::{Error, Result};
use crate::exponent::Exponent;

use super::{AtomicMeasure, NormSpec, NormedLattice};

pub(crate) fn schema<T>(path: &str, message: impl Into<String>) -> Result<T> {
    Err(Error::Schema {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    })
}

pub(crate) fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    match v.as_object() {
        Some(m) => Ok(m),
        None => schema(path, "expected an object"),
    }
}

pub(crate) fn only_keys(m: &Map<String, Value>, keys: &[&str], path: &str) -> Result<()> {
    for k in m.keys() {
        if !keys.contains(&k.as_str()) {
            return schema(&format!("{path}/{k}"), "unknown field");
        }
    }
    Ok(())
}

pub(crate) fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    match m.get(key) {
        Some(v) => Ok(v),
        None => schema(&format!("{path}/{key}"), "missing field"),
    }
}

pub(crate) fn number(m: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let p = format!("{path}/{key}");
    match field(m, key, path)? {
        Value::Number(n) => Ok(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        _ => schema(&p, "expected a number"),
    }
}

pub(crate) fn number_list(v: &Value, path: &str) -> Result<Vec<f64>> {
    let Some(items) = v.as_array() else {
        return schema(path, "expected a list of numbers");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match x.as_f64() {
            Some(f) => Ok(f),
            None => schema(&format!("{path}/{i}"), "expected a number"),
        })
        .collect()
}

fn at(path: &str, r: Result<NormedLattice>) -> Result<NormedLattice> {
    r.map_err(|e| match e {
        Error::Schema { .. } => e,
        other => Error::Schema {
            path: path.into(),
            message: other.to_string(),
        },
    })
}

fn measure(m: &Map<String, Value>, dim: usize, path: &str) -> Result<AtomicMeasure> {
    match m.get("weights") {
        None => Ok(AtomicMeasure::counting(dim)),
        Some(v) => {
            let p = format!("{path}/weights");
            let w = number_list(v, &p)?;
            if w.len() != dim {
                return schema(&p, format!("expected {dim} weights, got {}", w.len()));
            }
            AtomicMeasure::new(w).or_else(|e| schema(&p, e.to_string()))
        }
    }
}

fn blocks(m: &Map<String, Value>, path: &str) -> Result<Vec<NormedLattice>> {
    let p = format!("{path}/blocks");
    let Some(items) = field(m, "blocks", path)?.as_array() else {
        return schema(&p, "expected a list of lattice documents");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, b)| parse_at(b, &format!("{p}/{i}")))
        .collect()
}

fn parse_norm(v: &Value, dim: usize, path: &str) -> Result<NormedLattice> {
    let m = object(v, path)?;
    let kind = match field(m, "kind", path)? {
        Value::String(s) => s.as_str(),
        _ => return schema(&format!("{path}/kind"), "expected a string"),
    };
    match kind {
        "lp" => {
            only_keys(m, &["kind", "p"], path)?;
            let p = number(m, "p", path)?;
            let p = Exponent::new(p).or_else(|e| schema(&format!("{path}/p"), e.to_string()))?;
            at(path, NormedLattice::new(dim, NormSpec::Lp(p)))
        }
        "lorentz_pinfty" => {
            only_keys(m, &["kind", "p", "r", "weights"], path)?;
            let p = number(m, "p", path)?;
            let r = number(m, "r", path)?;
            if r >= p {
                return schema(&format!("{path}/r"), format!("r must be < p (r = {r}, p = {p})"));
            }
            let measure = measure(m, dim, path)?;
            at(path, NormedLattice::new(dim, NormSpec::LorentzPInfty { p, r, measure }))
        }
        "lorentz_q1" => {
            only_keys(m, &["kind", "q", "weights"], path)?;
            let q = number(m, "q", path)?;
            let measure = measure(m, dim, path)?;
            at(path, NormedLattice::new(dim, NormSpec::LorentzQ1 { q, measure }))
        }
        "linf_sum" => {
            only_keys(m, &["kind", "blocks"], path)?;
            let blocks = blocks(m, path)?;
            at(path, NormedLattice::new(dim, NormSpec::LinfSum(blocks)))
        }
        "block_lorentz" => {
            only_keys(m, &["kind", "outer", "blocks"], path)?;
            let blocks = blocks(m, path)?;
            let outer = parse_norm(field(m, "outer", path)?, blocks.len(), &format!("{path}/outer"))?;
            at(
                path,
                NormedLattice::new(
                    dim,
                    NormSpec::BlockLorentz {
                        outer: Box::new(outer),
                        blocks,
                    },
                ),
            )
        }
        "example54_dual" => {
            only_keys(m, &["kind", "p"], path)?;
            let p = number(m, "p", path)?;
            at(path, NormedLattice::new(dim, NormSpec::Example54Dual { p }))
        }
        "predual_of" => {
            only_keys(m, &["kind", "norm"], path)?;
            let inner = parse_norm(field(m, "norm", path)?, dim, &format!("{path}/norm"))?;
            at(path, NormedLattice::new(dim, NormSpec::PredualOf(Box::new(inner))))
        }
        "gauge_of" => {
            only_keys(m, &["kind", "generators"], path)?;
            let p = format!("{path}/generators");
            let Some(items) = field(m, "generators", path)?.as_array() else {
                return schema(&p, "expected a list of vectors");
            };
            let gens = items
                .iter()
                .enumerate()
                .map(|(i, g)| number_list(g, &format!("{p}/{i}")))
                .collect::<Result<Vec<_>>>()?;
            let body = SolidConvexBody::new(dim, gens).or_else(|e| schema(&p, e.to_string()))?;
            at(path, NormedLattice::new(dim, NormSpec::GaugeOf(body)))
        }
        other => schema(&format!("{path}/kind"), format!("unknown norm kind '{other}'")),
    }
}

fn parse_at(v: &Value, path: &str) -> Result<NormedLattice> {
    let m = object(v, path)?;
    only_keys(m, &["dim", "norm"], path)?;
    let dim = match field(m, "dim", path)?.as_u64() {
        Some(d) if d > 0 => d as usize,
        _ => return schema(&format!("{path}/dim"), "expected a positive integer"),
    };
    parse_norm(field(m, "norm", path)?, dim, &format!("{path}/norm"))
}

/// Validates a lattice-definition document.
pub fn parse_lattice(v: &Value) -> Result<NormedLattice> {
    parse_at(v, "")
}

pub fn lattice_from_json(text: &str) -> Result<NormedLattice> {
    let v: Value = serde_json::from_str(text).or_else(|e| schema("", format!("invalid JSON: {e}")))?;
    parse_lattice(&v)
}

pub fn load_lattice(path: &std::path::Path) -> Result<NormedLattice> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    lattice_from_json(&text)
}

fn exponent_json(p: f64) -> Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

fn norm_json(x: &NormedLattice) -> Value {
    match x.spec() {
        NormSpec::Lp(p) => json!({"kind": "lp", "p": exponent_json(p.value())}),
        NormSpec::LorentzPInfty { p, r, measure } => {
            json!({"kind": "lorentz_pinfty", "p": p, "r": r, "weights": measure.weights()})
        }
        NormSpec::LorentzQ1 { q, measure } => {
            json!({"kind": "lorentz_q1", "q": q, "weights": measure.weights()})
        }
        NormSpec::LinfSum(blocks) => {
            json!({"kind": "linf_sum", "blocks": blocks.iter().map(lattice_to_json).collect::<Vec<_>>()})
        }
        NormSpec::BlockLorentz { outer, blocks } => json!({
            "kind": "block_lorentz",
            "outer": norm_json(outer),
            "blocks": blocks.iter().map(lattice_to_json).collect::<Vec<_>>()
        }),
        NormSpec::Example54Dual { p } => json!({"kind": "example54_dual", "p": p}),
        NormSpec::PredualOf(inner) => json!({"kind": "predual_of", "norm": norm_json(inner)}),
        NormSpec::GaugeOf(body) => json!({"kind": "gauge_of", "generators": body.generators()}),
    }
}

/// Canonical document for a lattice.
pub fn lattice_to_json(x: &NormedLattice) -> Value {
    json!({"dim": x.dim(), "norm": norm_json(x)})
}
