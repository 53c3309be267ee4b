//! JSON input formats.
//!
//! A period character is `{"g": 2, "D": 2, "values": [[re, im], ...]}` with
//! `2g` entries in the order `a_1, b_1, ..., a_g, b_g`; each part is a
//! string in the text form of [`QuadReal`] or a JSON integer. `"D"` may be
//! omitted or `1` for Gaussian-rational values. A monodromy datum is
//! `{"d": 3, "sigma_h": [...], "sigma_v": [...], "taus": [[i, j], ...]}`
//! with 1-based permutations.

use serde_json::{json, Value};

use crate::error::{InputError, ScalarError};
use crate::hurwitz::{MonodromyDatum, MonodromyJson};
use crate::periods::PeriodCharacter;
use crate::scalar::{parse_quadreal, FieldDesc, KComplex, QuadReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseLimits {
    pub max_genus: usize,
    /// Maximum length in bytes of one numeric literal.
    pub max_literal: usize,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits { max_genus: 8, max_literal: 4096 }
    }
}

pub fn parse_period(text: &str) -> Result<PeriodCharacter, InputError> {
    parse_period_with(text, &ParseLimits::default())
}

/// Parses one part and widens `field` unless `fixed`.
fn part(v: &Value, pointer: String, field: &mut FieldDesc, fixed: bool, limits: &ParseLimits) -> Result<QuadReal, InputError> {
    let x = match v {
        Value::String(s) if s.len() > limits.max_literal => {
            return Err(InputError::schema(pointer, format!("literal longer than {} bytes", limits.max_literal)));
        }
        Value::String(s) => parse_quadreal(s).map_err(|e| InputError::schema(pointer.clone(), e.to_string()))?,
        Value::Number(n) => match n.as_i64() {
            Some(k) => QuadReal::from_int(k),
            None => return Err(InputError::schema(pointer, "numbers must be integers; use a string for other values")),
        },
        _ => return Err(InputError::schema(pointer, "expected a string or an integer")),
    };
    let joined = field.join(x.field()).map_err(|source| InputError::FieldMix { pointer: pointer.clone(), source })?;
    if fixed && joined != *field {
        let source = ScalarError::FieldMix { left: field.radicand().unwrap_or(1), right: joined.radicand().unwrap_or(1) };
        return Err(InputError::FieldMix { pointer, source });
    }
    *field = joined;
    Ok(x)
}

pub fn parse_period_with(text: &str, limits: &ParseLimits) -> Result<PeriodCharacter, InputError> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root.as_object().ok_or_else(|| InputError::schema("", "expected an object"))?;
    for key in obj.keys() {
        if !["g", "D", "values"].contains(&key.as_str()) {
            return Err(InputError::schema(format!("/{key}"), "unknown field"));
        }
    }
    let g = obj
        .get("g")
        .ok_or_else(|| InputError::schema("/g", "missing"))?
        .as_u64()
        .filter(|&g| g >= 1)
        .ok_or_else(|| InputError::schema("/g", "expected a positive integer"))? as usize;
    if g > limits.max_genus {
        return Err(InputError::schema("/g", format!("genus {g} exceeds the cap {}", limits.max_genus)));
    }
    let fixed = obj.contains_key("D");
    let mut field = match obj.get("D") {
        None => FieldDesc::Rational,
        Some(d) => match d.as_u64() {
            Some(1) => FieldDesc::Rational,
            Some(d) => FieldDesc::quadratic(d).map_err(|e| InputError::schema("/D", e.to_string()))?,
            None => return Err(InputError::schema("/D", "expected a positive integer")),
        },
    };
    let values = obj
        .get("values")
        .ok_or_else(|| InputError::schema("/values", "missing"))?
        .as_array()
        .ok_or_else(|| InputError::schema("/values", "expected an array"))?;
    if values.len() != 2 * g {
        return Err(InputError::schema("/values", format!("expected {} entries, found {}", 2 * g, values.len())));
    }
    let mut vals = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| InputError::schema(format!("/values/{i}"), "expected [re, im]"))?;
        let re = part(&pair[0], format!("/values/{i}/0"), &mut field, fixed, limits)?;
        let im = part(&pair[1], format!("/values/{i}/1"), &mut field, fixed, limits)?;
        vals.push(KComplex::new(re, im));
    }
    Ok(PeriodCharacter::with_field(g, field, vals)?)
}

/// Canonical form of the input format.
pub fn period_to_json(p: &PeriodCharacter) -> Value {
    json!({
        "g": p.genus(),
        "D": p.field().radicand().unwrap_or(1),
        "values": p.values(),
    })
}

pub fn parse_monodromy(text: &str) -> Result<MonodromyDatum, InputError> {
    let j: MonodromyJson = serde_json::from_str(text)?;
    let md = MonodromyDatum::from_json(&j)?;
    md.validate()?;
    Ok(md)
}
