//! Run configuration and the canonical JSON writer used for reports.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{invalid, Result};

/// Acceptance tolerances by check name; overrides may only loosen them.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("sandwich", 1e-9),
    ("alpha_sequence", 1e-12),
    ("lpinfty_lp", 1e-9),
    ("example54", 1e-9),
    ("lower_estimate", 1e-6),
    ("q_convexity", 1e-6),
    ("polar", 1e-6),
    ("polar_sampling", 5e-2),
    ("factorization", 1e-6),
    ("embedding", 1e-9),
    ("ideal", 5e-2),
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub budget: usize,
    tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            budget: 10_000,
            tolerances: BTreeMap::new(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn new(seed: u64, budget: usize) -> Result<Self> {
        if budget == 0 {
            return invalid("budget must be positive");
        }
        Ok(RunConfig {
            seed,
            budget,
            ..RunConfig::default()
        })
    }

    pub fn default_tolerance(name: &str) -> Option<f64> {
        DEFAULT_TOLERANCES.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    /// Sets a tolerance override; rejects unknown names and tightening.
    pub fn override_tolerance(&mut self, name: &str, value: f64) -> Result<()> {
        let Some(default) = Self::default_tolerance(name) else {
            return invalid(format!("unknown tolerance '{name}'"));
        };
        if !(value.is_finite() && value >= default) {
            return invalid(format!("tolerance '{name}' may only be loosened: default {default}, got {value}"));
        }
        self.tolerances.insert(name.to_string(), value);
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| Self::default_tolerance(name))
            .unwrap_or(0.0)
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("seed".into(), self.seed.into());
        m.insert("budget".into(), self.budget.into());
        let tol: serde_json::Map<String, Value> = self
            .tolerances
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(*v)))
            .collect();
        m.insert("tolerance_overrides".into(), Value::Object(tol));
        m.insert(
            "out".into(),
            self.out.as_ref().map_or(Value::Null, |p| Value::from(p.display().to_string())),
        );
        Value::Object(m)
    }
}

/// Exponents serialize as numbers, with `"inf"` for infinity.
pub fn ser_exponent<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push_str(&serde_json::to_string(s).expect("strings serialize"));
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', 2 * k));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format!("{:.16e}", n.as_f64().unwrap_or(0.0)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => write_string(s, out),
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            let flat = a.iter().all(|x| !(x.is_array() || x.is_object()));
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if flat {
                    if i > 0 {
                        out.push(' ');
                    }
                } else {
                    out.push('\n');
                    pad(indent + 1, out);
                }
                write_value(x, indent + 1, out);
            }
            if !flat {
                out.push('\n');
                pad(indent, out);
            }
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(indent + 1, out);
                write_string(k, out);
                out.push_str(": ");
                write_value(x, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
    }
}

/// Stable key order, two-space indentation, floats with 17 significant digits.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

/// Serializes any report through [`to_canonical_string`].
pub fn canonical<T: Serialize>(report: &T) -> Result<String> {
    let v = serde_json::to_value(report).map_err(|e| crate::error::Error::InvalidParameter(e.to_string()))?;
    Ok(to_canonical_string(&v))
}
