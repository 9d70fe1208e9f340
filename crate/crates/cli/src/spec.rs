//! Curve specification files.

use std::fs;
use std::path::Path;

use cmkit_core::algebra::{IntPoly, PrimePower};
use cmkit_core::curves::{AbstractCurve, CurveDescriptor, EllipticCurveData, WeierstrassModel};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// A curve file after validation, together with its normalized form.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub descriptor: CurveDescriptor,
    /// Canonical JSON of the normalized spec; hashed into the cache key.
    pub canonical: String,
}

impl CurveSpec {
    pub fn curve_id(&self) -> String {
        hex::encode(Sha256::digest(self.canonical.as_bytes()))
    }

    pub fn elliptic(&self) -> Result<EllipticCurveData, CliError> {
        Ok(self.descriptor.as_elliptic()?)
    }
}

fn integer(map: &Map<String, Value>, key: &str) -> Result<BigInt, CliError> {
    let value = map.get(key).ok_or_else(|| CliError::spec(format!("missing key \"{key}\"")))?;
    parse_integer(value).ok_or_else(|| CliError::spec(format!("\"{key}\" must be a decimal integer string")))
}

pub fn parse_integer(value: &Value) -> Option<BigInt> {
    match value {
        Value::String(s) => s.trim().parse().ok(),
        Value::Number(n) => n.as_i64().map(BigInt::from),
        _ => None,
    }
}

fn small<T: TryFrom<BigInt>>(v: BigInt, key: &str) -> Result<T, CliError> {
    T::try_from(v).map_err(|_| CliError::spec(format!("\"{key}\" is out of range")))
}

fn check_keys(map: &Map<String, Value>, allowed: &[&str]) -> Result<(), CliError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::spec(format!("unknown key \"{k}\""))),
        None => Ok(()),
    }
}

pub fn parse_curve_value(value: &Value) -> Result<CurveSpec, CliError> {
    let map = value.as_object().ok_or_else(|| CliError::spec("curve spec must be a JSON object".into()))?;
    if map.contains_key("zeta_numerator") {
        check_keys(map, &["q", "zeta_numerator"])?;
        let q: u64 = small(integer(map, "q")?, "q")?;
        let q = PrimePower::from_value(q).map_err(|e| CliError::new("NotPrimePower", e.to_string()))?;
        let coeffs = map["zeta_numerator"]
            .as_array()
            .ok_or_else(|| CliError::spec("\"zeta_numerator\" must be an array".into()))?
            .iter()
            .map(|c| parse_integer(c).ok_or_else(|| CliError::spec("zeta numerator entries must be integers".into())))
            .collect::<Result<Vec<BigInt>, CliError>>()?;
        let p1 = IntPoly::new(coeffs);
        let curve = AbstractCurve::new(q, p1.clone())?;
        let canonical = json!({
            "q": q.value().to_string(),
            "zeta_numerator": p1.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        });
        return Ok(CurveSpec { descriptor: CurveDescriptor::Abstract(curve), canonical: canonical.to_string() });
    }
    check_keys(map, &["p", "e", "model", "A", "B"])?;
    match map.get("model").and_then(Value::as_str) {
        Some("short-weierstrass") => {}
        _ => return Err(CliError::spec("\"model\" must be \"short-weierstrass\"".into())),
    }
    let p: u64 = small(integer(map, "p")?, "p")?;
    let e: u32 = small(integer(map, "e")?, "e")?;
    let a: i64 = small(integer(map, "A")?, "A")?;
    let b: i64 = small(integer(map, "B")?, "B")?;
    let model = WeierstrassModel::new(p, e, a, b)?;
    let curve = EllipticCurveData::from_weierstrass(p, e, a, b)?;
    let canonical = json!({
        "A": model.a_index().to_string(),
        "B": model.b_index().to_string(),
        "e": e.to_string(),
        "model": "short-weierstrass",
        "p": p.to_string(),
    });
    Ok(CurveSpec { descriptor: CurveDescriptor::Elliptic(curve), canonical: canonical.to_string() })
}

pub fn load_curve(path: &Path) -> Result<CurveSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new("Io", format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::spec(format!("{}: {e}", path.display())))?;
    parse_curve_value(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weierstrass_and_abstract() {
        let e0 = parse_curve_value(&json!({"p": "5", "e": "1", "model": "short-weierstrass", "A": "1", "B": "0"}))
            .unwrap();
        assert_eq!(e0.elliptic().unwrap().trace(), 2);
        // Same curve written with an unreduced coefficient has the same id.
        let again = parse_curve_value(&json!({"p": "5", "e": "1", "model": "short-weierstrass", "A": "6", "B": "0"}))
            .unwrap();
        assert_eq!(e0.curve_id(), again.curve_id());
        let abs = parse_curve_value(&json!({"q": "5", "zeta_numerator": ["1", "-2", "5"]})).unwrap();
        assert_eq!(abs.descriptor.genus(), 1);
        assert_ne!(abs.curve_id(), e0.curve_id());
    }

    #[test]
    fn rejections() {
        let bad = |v: Value| parse_curve_value(&v).unwrap_err().code;
        assert_eq!(bad(json!({"p": "5", "e": "1", "model": "short-weierstrass", "A": "1", "B": "0", "x": 1})), "InvalidCurveSpec");
        assert_eq!(bad(json!({"p": "5", "e": "1", "model": "short-weierstrass", "A": "0", "B": "0"})), "Singular");
        assert_eq!(bad(json!({"p": "3", "e": "1", "model": "short-weierstrass", "A": "1", "B": "0"})), "Char2Or3Unsupported");
        assert_eq!(bad(json!({"q": "5", "zeta_numerator": ["1", "-2", "4"]})), "BadZetaNumerator");
        assert_eq!(bad(json!({"p": "5", "e": "1", "model": "weierstrass", "A": "1", "B": "0"})), "InvalidCurveSpec");
    }
}
