//! JSON encodings. Integers are always decimal strings.

use cmkit_core::algebra::IntPoly;
use cmkit_core::motive::{Level, MotiveSummand, SummandKind, SummandMultiset};
use cmkit_core::quadfield::QuadElement;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::spec::parse_integer;
use crate::CliError;

pub fn int(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn poly(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(int).collect())
}

/// Integers print plainly, other rationals as `n/d`.
pub fn rational(r: &BigRational) -> Value {
    int(r)
}

pub fn element(a: &QuadElement) -> Value {
    json!({ "x": rational(a.x()), "y": rational(a.y()) })
}

fn summand(s: &MotiveSummand, k: u64) -> Value {
    let mut m = Map::new();
    match s.kind {
        SummandKind::Lefschetz { j } => {
            m.insert("kind".into(), json!("lefschetz"));
            m.insert("j".into(), int(j));
        }
        SummandKind::UnitF { j } => {
            m.insert("kind".into(), json!("unit_f"));
            m.insert("j".into(), int(j));
        }
        SummandKind::Tensor { i, j, conj } => {
            m.insert("kind".into(), json!("tensor"));
            m.insert("i".into(), int(i));
            m.insert("j".into(), int(j));
            m.insert("conj".into(), json!(conj));
        }
    }
    m.insert("base_factor".into(), json!(s.base_factor));
    m.insert("multiplicity".into(), int(k));
    m.insert("label".into(), json!(s.to_string()));
    Value::Object(m)
}

pub fn decomposition(d: &SummandMultiset) -> Value {
    json!({
        "level": d.level().to_string(),
        "summands": d.entries().iter().map(|(s, &k)| summand(s, k)).collect::<Vec<_>>(),
    })
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    m.get(key).ok_or_else(|| CliError::new("InvalidDecomposition", format!("missing \"{key}\"")))
}

fn small_int(m: &Map<String, Value>, key: &str) -> Result<u64, CliError> {
    parse_integer(field(m, key)?)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| CliError::new("InvalidDecomposition", format!("\"{key}\" must be a nonnegative integer")))
}

fn flag(m: &Map<String, Value>, key: &str) -> Result<bool, CliError> {
    field(m, key)?
        .as_bool()
        .ok_or_else(|| CliError::new("InvalidDecomposition", format!("\"{key}\" must be a boolean")))
}

/// Inverse of [`decomposition`].
pub fn parse_decomposition(v: &Value) -> Result<SummandMultiset, CliError> {
    let bad = |d: &str| CliError::new("InvalidDecomposition", d.to_string());
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    let level = match field(obj, "level")?.as_str() {
        Some("F") => Level::F,
        Some("Q") => Level::Q,
        _ => return Err(bad("level must be \"F\" or \"Q\"")),
    };
    let mut out = SummandMultiset::new(level);
    for entry in field(obj, "summands")?.as_array().ok_or_else(|| bad("summands must be an array"))? {
        let m = entry.as_object().ok_or_else(|| bad("summand must be an object"))?;
        let j = small_int(m, "j")? as u32;
        let s = match field(m, "kind")?.as_str() {
            Some("lefschetz") => MotiveSummand::lefschetz(j),
            Some("unit_f") => MotiveSummand::unit_f(j),
            Some("tensor") => {
                let i = small_int(m, "i")? as u32;
                if i == 0 {
                    return Err(bad("tensor summands need i >= 1"));
                }
                MotiveSummand::tensor(i, j, flag(m, "conj")?)
            }
            _ => return Err(bad("unknown summand kind")),
        };
        let s = if flag(m, "base_factor")? { s.with_base() } else { s };
        out.add(s, small_int(m, "multiplicity")?);
    }
    Ok(out)
}
