//! JSON documents for elements, groups and tool output.
//!
//! All documents carry `"schema": "hypdisc/1"` at top level. Floats are
//! written with a fixed 17 significant digits (`{:.16e}`) so output is
//! byte-reproducible across runs and platforms; map keys come out sorted.

use crate::clifford::CliffordNumber;
use crate::error::Error;
use crate::mobius::CliffordMatrix;
use crate::probe::{Algebra, Element, GroupPresentation};
use crate::quat::QuatMatrix;
use crate::sp::{FormTag, SpMatrix};
use crate::Result;
use serde_json::{json, Value};

// --- element documents ----------------------------------------------------

/// Serializes an element with its algebra tag:
/// `{"algebra":"clifford","n":…, "a":…,…}` or
/// `{"algebra":"sp"|"su","n":…, "form":"J2","rows":[[…]]}`.
pub fn element_to_value(e: &Element) -> Value {
    match e {
        Element::Clifford(m) => json!({
            "schema": crate::SCHEMA,
            "algebra": "clifford",
            "n": m.n(),
            "a": serde_json::to_value(&m.a).expect("serializable"),
            "b": serde_json::to_value(&m.b).expect("serializable"),
            "c": serde_json::to_value(&m.c).expect("serializable"),
            "d": serde_json::to_value(&m.d).expect("serializable"),
        }),
        Element::Sp(m) => {
            let algebra = if m.mat.is_complex(1e-12) { "su" } else { "sp" };
            json!({
                "schema": crate::SCHEMA,
                "algebra": algebra,
                "n": m.n(),
                "form": m.form.name(),
                "rows": serde_json::to_value(&m.mat).expect("serializable"),
            })
        }
    }
}

fn get_str<'v>(v: &'v Value, key: &str) -> Result<&'v str> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidInput(format!("missing string field \"{key}\"")))
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    v.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput(format!("missing integer field \"{key}\"")))
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| Error::InvalidInput(format!("missing field \"{key}\"")))
}

/// Parses an element document (the `"schema"` field is optional on input).
pub fn parse_element(v: &Value) -> Result<Element> {
    let algebra = get_str(v, "algebra")?;
    match algebra {
        "clifford" => {
            let n = get_u64(v, "n")? as u32;
            let parse_entry = |key: &str| -> Result<CliffordNumber> {
                let e: CliffordNumber = serde_json::from_value(field(v, key)?.clone())
                    .map_err(|e| Error::InvalidInput(format!("entry \"{key}\": {e}")))?;
                if e.n() != n {
                    return Err(Error::InvalidInput(format!(
                        "entry \"{key}\" has n = {}, document says {n}",
                        e.n()
                    )));
                }
                Ok(e)
            };
            Ok(Element::Clifford(CliffordMatrix::new(
                parse_entry("a")?,
                parse_entry("b")?,
                parse_entry("c")?,
                parse_entry("d")?,
            )?))
        }
        "sp" | "su" => {
            let n = get_u64(v, "n")? as usize;
            let form = match get_str(v, "form")? {
                "J1" => FormTag::J1,
                "J2" => FormTag::J2,
                other => return Err(Error::InvalidInput(format!("unknown form \"{other}\""))),
            };
            let mat: QuatMatrix = serde_json::from_value(field(v, "rows")?.clone())
                .map_err(|e| Error::InvalidInput(format!("rows: {e}")))?;
            if mat.nrows() != n + 1 {
                return Err(Error::InvalidInput(format!(
                    "rows are {}×{}, but n = {n} needs {}×{}",
                    mat.nrows(),
                    mat.ncols(),
                    n + 1,
                    n + 1
                )));
            }
            let m = SpMatrix::new(mat, form)?;
            if algebra == "su" && !m.mat.is_complex(1e-12) {
                return Err(Error::InvalidInput(
                    "algebra \"su\" requires complex entries (zero j,k parts)".into(),
                ));
            }
            Ok(Element::Sp(m))
        }
        other => Err(Error::InvalidInput(format!("unknown algebra \"{other}\""))),
    }
}

// --- group documents --------------------------------------------------------

pub fn group_to_value(g: &GroupPresentation) -> Value {
    let (algebra, n) = match g.algebra {
        Algebra::Clifford(n) => ("clifford", n as u64),
        Algebra::Sp(n) => ("sp", n as u64),
        Algebra::Su(n) => ("su", n as u64),
    };
    let generators: Vec<Value> = g
        .generators
        .iter()
        .map(|(name, e)| {
            let mut m = element_to_value(e);
            if let Value::Object(obj) = &mut m {
                obj.remove("schema");
            }
            json!({"name": name, "matrix": m})
        })
        .collect();
    json!({
        "schema": crate::SCHEMA,
        "algebra": algebra,
        "n": n,
        "generators": generators,
        "metadata": g.metadata,
    })
}

pub fn parse_group(v: &Value) -> Result<GroupPresentation> {
    let algebra_name = get_str(v, "algebra")?;
    let n = get_u64(v, "n")?;
    let algebra = match algebra_name {
        "clifford" => Algebra::Clifford(n as u32),
        "sp" => Algebra::Sp(n as usize),
        "su" => Algebra::Su(n as usize),
        other => return Err(Error::InvalidInput(format!("unknown algebra \"{other}\""))),
    };
    let gens = field(v, "generators")?
        .as_array()
        .ok_or_else(|| Error::InvalidInput("\"generators\" must be an array".into()))?;
    let mut generators = Vec::with_capacity(gens.len());
    for g in gens {
        let name = get_str(g, "name")?.to_string();
        let matrix = parse_element(field(g, "matrix")?)?;
        generators.push((name, matrix));
    }
    let metadata = v.get("metadata").and_then(Value::as_str).unwrap_or("").to_string();
    let group = GroupPresentation { algebra, generators, metadata };
    group.validate()?;
    Ok(group)
}

// --- deterministic writer ---------------------------------------------------

/// Writes a JSON value compactly with every float at 17 significant digits.
/// Object keys are emitted in sorted order (serde_json's default map).
pub fn write_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, &mut out);
    out
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let x = n.as_f64().expect("numeric");
                out.push_str(&format!("{x:.16e}"));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push(':');
                write_value(val, out);
            }
            out.push('}');
        }
    }
}

/// Serializes any value through [`write_json`].
pub fn to_output<T: serde::Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::InvalidInput(format!("serialization: {e}")))?;
    Ok(write_json(&v))
}

// --- minimal JSON-schema validation ------------------------------------------

/// Validates a value against the subset of JSON Schema used by the files in
/// `schemas/`: `type`, `required`, `properties`, `items`, `enum`. Returns
/// the first violation found.
pub fn validate_schema(value: &Value, schema: &Value) -> std::result::Result<(), String> {
    validate_at(value, schema, "$")
}

fn validate_at(value: &Value, schema: &Value, path: &str) -> std::result::Result<(), String> {
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            return Err(format!("{path}: value not in enum"));
        }
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "number" => value.is_number(),
            "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            other => return Err(format!("{path}: unsupported schema type \"{other}\"")),
        };
        if !ok {
            return Err(format!("{path}: expected type {ty}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required {
            let key = key.as_str().ok_or_else(|| format!("{path}: bad required entry"))?;
            if value.get(key).is_none() {
                return Err(format!("{path}: missing required field \"{key}\""));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if let Some(obj) = value.as_object() {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate_at(v, sub, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_at(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}
