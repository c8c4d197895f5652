//! JSON encodings of matrices, groups, actions and block scenarios.
//!
//! Integers are JSON numbers of any size (or decimal strings). Rationals are
//! integers, `"a/b"` strings or `{"num": a, "den": b}` objects. Parse errors
//! carry a JSON-pointer-like path such as `$.subsections[1].cartan[0][2]`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{Map, Number, Value};

use crate::blockcalc::{subsection_inventory, BlockScenario, LRule};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::paction::{galois_model, AbelianPGroup, ActionGroup, ActionMatrix};
use crate::qform::GramForm;
use crate::{IntMatrix, RatMatrix};

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("at {path}: {msg}"))
}

/// Parses JSON text, reporting syntax errors with line and column.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Looks up `key` in an object, with `path` naming the object.
pub fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| err(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| err(path, format!("missing field \"{key}\"")))
}

pub fn optional_field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(key)).filter(|x| !x.is_null())
}

pub fn parse_int(v: &Value, path: &str) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(err(path, "expected an integer")),
    };
    BigInt::from_str(&text).map_err(|_| err(path, format!("\"{text}\" is not an integer")))
}

pub fn parse_u64(v: &Value, path: &str) -> Result<u64> {
    parse_int(v, path)?
        .to_u64()
        .ok_or_else(|| err(path, "expected a nonnegative machine integer"))
}

pub fn parse_i64(v: &Value, path: &str) -> Result<i64> {
    parse_int(v, path)?
        .to_i64()
        .ok_or_else(|| err(path, "integer out of range"))
}

pub fn parse_rational(v: &Value, path: &str) -> Result<BigRational> {
    let (num, den) = match v {
        Value::Object(_) => (
            parse_int(field(v, "num", path)?, &format!("{path}.num"))?,
            parse_int(field(v, "den", path)?, &format!("{path}.den"))?,
        ),
        Value::String(s) if s.contains('/') => {
            let (a, b) = s.split_once('/').expect("contains a slash");
            let p = |t: &str| BigInt::from_str(t.trim()).map_err(|_| err(path, format!("\"{s}\" is not a rational")));
            (p(a)?, p(b)?)
        }
        _ => (parse_int(v, path)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(err(path, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_rows<T>(v: &Value, path: &str, entry: impl Fn(&Value, &str) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let rows = v.as_array().ok_or_else(|| err(path, "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = format!("{path}[{i}]");
            r.as_array()
                .ok_or_else(|| err(&rp, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(j, x)| entry(x, &format!("{rp}[{j}]")))
                .collect()
        })
        .collect()
}

/// A matrix is an array of rows; an object `{"matrix": ...}` is unwrapped.
pub fn parse_int_matrix(v: &Value, path: &str) -> Result<IntMatrix> {
    if let Some(inner) = optional_field(v, "matrix") {
        return parse_int_matrix(inner, &format!("{path}.matrix"));
    }
    let rows = parse_rows(v, path, parse_int)?;
    Matrix::from_rows(rows).map_err(|e| err(path, e))
}

pub fn parse_rat_matrix(v: &Value, path: &str) -> Result<RatMatrix> {
    if let Some(inner) = optional_field(v, "matrix") {
        return parse_rat_matrix(inner, &format!("{path}.matrix"));
    }
    let rows = parse_rows(v, path, parse_rational)?;
    Matrix::from_rows(rows).map_err(|e| err(path, e))
}

/// A Gram matrix, optionally scaled: `{"matrix": ..., "scale": r}` or a bare array.
pub fn parse_form(v: &Value, path: &str) -> Result<GramForm> {
    let mut m = parse_rat_matrix(v, path)?;
    if let Some(s) = optional_field(v, "scale") {
        m = m.scale(&parse_rational(s, &format!("{path}.scale"))?);
    }
    GramForm::new(m).map_err(|e| err(path, e))
}

fn parse_i64_vec(v: &Value, path: &str) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| err(path, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_i64(x, &format!("{path}[{i}]")))
        .collect()
}

/// `{"p": 2, "exponents": [2, 2]}` or `{"p": 2, "e": 2, "rank": 2}`.
pub fn parse_group(v: &Value, path: &str) -> Result<AbelianPGroup> {
    let p = parse_u64(field(v, "p", path)?, &format!("{path}.p"))?;
    let exponents: Vec<u32> = if let Some(ex) = optional_field(v, "exponents") {
        parse_i64_vec(ex, &format!("{path}.exponents"))?
            .into_iter()
            .map(|x| u32::try_from(x).map_err(|_| err(&format!("{path}.exponents"), "bad exponent")))
            .collect::<Result<_>>()?
    } else {
        let e = parse_u64(field(v, "e", path)?, &format!("{path}.e"))?;
        let r = parse_u64(field(v, "rank", path)?, &format!("{path}.rank"))?;
        let e = u32::try_from(e).map_err(|_| err(&format!("{path}.e"), "bad exponent"))?;
        vec![e; r as usize]
    };
    AbelianPGroup::new(p, exponents).map_err(|e| err(path, e))
}

/// An action is either a list of generator matrices over `group`, or
/// `{"galois": {"p", "e", "poly", "frobenius"}}` which also fixes the group.
pub fn parse_action(v: &Value, group: Option<&AbelianPGroup>, path: &str) -> Result<ActionGroup> {
    if let Some(gal) = optional_field(v, "galois") {
        let gp = format!("{path}.galois");
        let p = parse_u64(field(gal, "p", &gp)?, &format!("{gp}.p"))?;
        let e = parse_u64(optional_field(gal, "e").unwrap_or(&Value::from(1)), &format!("{gp}.e"))?;
        let poly = parse_i64_vec(field(gal, "poly", &gp)?, &format!("{gp}.poly"))?;
        let frob = optional_field(gal, "frobenius")
            .and_then(Value::as_bool)
            .unwrap_or(false);
        let a = galois_model(p, e as u32, &poly, frob).map_err(|x| err(&gp, x))?;
        if let Some(g) = group {
            if g != a.group() {
                return Err(err(&gp, "model does not act on the declared group"));
            }
        }
        return Ok(a);
    }
    let group = group.ok_or_else(|| err(path, "matrix generators need a declared group"))?;
    let gens = v
        .as_array()
        .ok_or_else(|| err(path, "expected a list of generator matrices"))?;
    let mut mats = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let gp = format!("{path}[{i}]");
        let m = parse_int_matrix(g, &gp)?;
        mats.push(ActionMatrix::new(group, &m).map_err(|e| err(&gp, e))?);
    }
    ActionGroup::new(group, mats).map_err(|e| err(path, e))
}

/// Reads `{"defect"/"group": ..., "action": ...}`; the action may be absent (trivial).
pub fn parse_group_action(v: &Value, path: &str) -> Result<ActionGroup> {
    let gv = optional_field(v, "defect").or_else(|| optional_field(v, "group"));
    let group = gv.map(|g| parse_group(g, &format!("{path}.defect"))).transpose()?;
    match optional_field(v, "action") {
        Some(a) => parse_action(a, group.as_ref(), &format!("{path}.action")),
        None => Ok(ActionGroup::trivial(
            &group.ok_or_else(|| err(path, "missing field \"defect\""))?,
        )),
    }
}

/// Scenario JSON:
///
/// ```json
/// {"defect": {...}, "action": [...], "l_rule": "free" | "supplied",
///  "l_block": 3, "k_bar": 4,
///  "subsections": [{"rep": [1, 0], "l": 1, "cartan": [[4]], "z_part": 4}]}
/// ```
///
/// `z_part` is optional and checked against the computed value. The rule
/// defaults to `"free"`.
pub fn parse_scenario(v: &Value) -> Result<BlockScenario> {
    let a = parse_group_action(v, "$")?;
    let mut rule = match optional_field(v, "l_rule").map(|r| r.as_str()) {
        None | Some(Some("free")) => LRule::free_action(),
        Some(Some("supplied")) => LRule::supplied(),
        _ => return Err(err("$.l_rule", "expected \"free\" or \"supplied\"")),
    };
    let zero = vec![0; a.group().rank()];
    if let Some(l) = optional_field(v, "l_block") {
        rule = rule.with_l(zero.clone(), parse_u64(l, "$.l_block")?);
    }
    let mut z_parts = Vec::new();
    if let Some(subs) = optional_field(v, "subsections") {
        let subs = subs
            .as_array()
            .ok_or_else(|| err("$.subsections", "expected an array"))?;
        for (i, s) in subs.iter().enumerate() {
            let sp = format!("$.subsections[{i}]");
            let rep = parse_i64_vec(field(s, "rep", &sp)?, &format!("{sp}.rep"))?;
            if rep.len() != a.group().rank() {
                return Err(err(&format!("{sp}.rep"), "wrong number of coordinates"));
            }
            if let Some(l) = optional_field(s, "l") {
                rule = rule.with_l(rep.clone(), parse_u64(l, &format!("{sp}.l"))?);
            }
            if let Some(c) = optional_field(s, "cartan") {
                rule = rule.with_cartan(rep.clone(), parse_int_matrix(c, &format!("{sp}.cartan"))?);
            }
            if let Some(z) = optional_field(s, "z_part") {
                z_parts.push((rep, parse_u64(z, &format!("{sp}.z_part"))?, sp));
            }
        }
    }
    let mut scenario = subsection_inventory(&a, &rule)?;
    for (rep, z, sp) in z_parts {
        let rep = crate::paction::orbit_representative(&a, &rep);
        let actual = scenario.subsection(&rep).map(|s| s.z_part as u64);
        if actual != Some(z) {
            return Err(err(
                &format!("{sp}.z_part"),
                format!("declared {z}, computed {actual:?}"),
            ));
        }
    }
    if let Some(k) = optional_field(v, "k_bar") {
        scenario.k_bar = Some(parse_u64(k, "$.k_bar")?);
    }
    Ok(scenario)
}

pub fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::Number(Number::from_str(&x.to_string()).expect("decimal integer")),
    }
}

pub fn rational_to_json(x: &BigRational) -> Value {
    if x.is_integer() {
        return int_to_json(x.numer());
    }
    let mut m = Map::new();
    m.insert("num".into(), int_to_json(x.numer()));
    m.insert("den".into(), int_to_json(x.denom()));
    Value::Object(m)
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.iter_rows()
            .map(|r| Value::Array(r.iter().map(int_to_json).collect()))
            .collect(),
    )
}

pub fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(
        m.iter_rows()
            .map(|r| Value::Array(r.iter().map(rational_to_json).collect()))
            .collect(),
    )
}

pub fn vec_to_json(x: &[i64]) -> Value {
    Value::Array(x.iter().map(|&v| Value::from(v)).collect())
}

pub fn group_to_json(g: &AbelianPGroup) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), Value::from(g.p()));
    m.insert(
        "exponents".into(),
        Value::Array(g.exponents().iter().map(|&e| Value::from(e)).collect()),
    );
    Value::Object(m)
}

pub fn action_to_json(a: &ActionGroup) -> Value {
    Value::Array(
        a.generators()
            .iter()
            .map(|g| int_matrix_to_json(&g.to_matrix()))
            .collect(),
    )
}
