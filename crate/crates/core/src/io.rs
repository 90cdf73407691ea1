//! JSON file formats for algebras, set systems, function families, groups,
//! graphs and halfspace lists.
//!
//! Readers report the first offending index of a malformed file.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::actions::PermutationGroup;
use crate::algebra::MedianAlgebra;
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::independence::{FunctionFamily, SetSystem};
use crate::rational::{Rational, RationalFunctionTable};

fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::malformed(format!("invalid JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::malformed(format!("missing field `{key}`")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    as_usize(field(v, key)?).ok_or_else(|| Error::malformed(format!("field `{key}` must be a nonnegative integer")))
}

fn as_usize(v: &Value) -> Option<usize> {
    v.as_u64().and_then(|x| usize::try_from(x).ok())
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::malformed(format!("{what} must be an array")))
}

/// A list of element ids below `bound`; `what` prefixes error messages.
fn id_list(v: &Value, bound: usize, what: &str) -> Result<Vec<usize>> {
    let items = array(v, what)?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match as_usize(x) {
            Some(id) if id < bound => Ok(id),
            _ => Err(Error::malformed(format!("{what} index {i}: {x} is not an id below {bound}"))),
        })
        .collect()
}

/// Reads either table or generator format.
pub fn parse_algebra(text: &str) -> Result<MedianAlgebra> {
    let v = parse(text)?;
    match field(&v, "format")?.as_str() {
        Some("median-table") => {
            let n = usize_field(&v, "n")?;
            if n == 0 {
                return Err(Error::malformed("carrier must be nonempty"));
            }
            crate::limits::Limit::TableMax.check(n)?;
            let items = array(field(&v, "table")?, "table")?;
            let mut table = Vec::with_capacity(items.len());
            for (i, x) in items.iter().enumerate() {
                match as_usize(x) {
                    Some(id) => table.push(id),
                    None => return Err(Error::malformed(format!("table index {i} holds {x}, not an element id"))),
                }
            }
            MedianAlgebra::from_table(n, &table)
        }
        Some("generator") => {
            let spec: GeneratorSpec = serde_json::from_value(json!({
                "kind": field(&v, "kind")?,
                "params": v.get("params").cloned().unwrap_or(json!({})),
            }))
            .map_err(|e| Error::malformed(format!("bad generator: {e}")))?;
            spec.build()
        }
        _ => Err(Error::malformed("field `format` must be \"median-table\" or \"generator\"")),
    }
}

pub fn algebra_table_json(a: &MedianAlgebra) -> Result<Value> {
    Ok(json!({"format": "median-table", "n": a.n(), "table": a.to_table()?}))
}

pub fn generator_json(spec: &GeneratorSpec) -> Value {
    let mut v = serde_json::to_value(spec).expect("generator specs serialize");
    let obj = v.as_object_mut().expect("tagged enum serializes to an object");
    obj.insert("format".into(), json!("generator"));
    v
}

/// Exact rational as `[num, den]`; parts beyond 64 bits become decimal strings.
pub fn rational_json(r: &Rational) -> Value {
    let part = |b: &BigInt| b.to_i64().map_or_else(|| json!(b.to_string()), |x| json!(x));
    json!([part(r.numer()), part(r.denom())])
}

fn big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn rational_value(v: &Value) -> Option<(BigInt, BigInt)> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Some((big(&pair[0])?, big(&pair[1])?)),
        other => Some((big(other)?, BigInt::from(1))),
    }
}

fn function_from(v: &Value, n: Option<usize>, what: &str) -> Result<RationalFunctionTable> {
    let items = array(field(v, "values")?, &format!("{what} values"))?;
    if let Some(n) = n {
        if items.len() != n {
            return Err(Error::malformed(format!("{what} has {} values, expected {n}", items.len())));
        }
    }
    let mut pairs = Vec::with_capacity(items.len());
    for (i, x) in items.iter().enumerate() {
        match rational_value(x) {
            Some((num, den)) if !den.is_zero() => pairs.push((num, den)),
            _ => {
                return Err(Error::malformed(format!(
                    "{what} value index {i}: {x} is not [num, den] with nonzero den"
                )))
            }
        }
    }
    RationalFunctionTable::from_pairs(&pairs)
}

/// `{"n", "functions": [{"values": ..}]}`, or a single `{"n", "values"}`.
pub fn parse_function_family(text: &str) -> Result<FunctionFamily> {
    let v = parse(text)?;
    let n = usize_field(&v, "n")?;
    if v.get("values").is_some() {
        return FunctionFamily::new(n, vec![function_from(&v, Some(n), "function")?]);
    }
    let items = array(field(&v, "functions")?, "functions")?;
    let functions = items
        .iter()
        .enumerate()
        .map(|(i, f)| function_from(f, Some(n), &format!("function {i}")))
        .collect::<Result<Vec<_>>>()?;
    FunctionFamily::new(n, functions)
}

/// Exactly one function.
pub fn parse_function(text: &str) -> Result<RationalFunctionTable> {
    let family = parse_function_family(text)?;
    match family.functions() {
        [f] => Ok(f.clone()),
        fs => Err(Error::malformed(format!("expected one function, found {}", fs.len()))),
    }
}

pub fn function_json(f: &RationalFunctionTable) -> Value {
    json!({"n": f.n(), "values": f.values().iter().map(rational_json).collect::<Vec<_>>()})
}

pub fn function_family_json(fam: &FunctionFamily) -> Value {
    json!({
        "n": fam.n(),
        "functions": fam.functions().iter().map(|f| json!({"values": f.values().iter().map(rational_json).collect::<Vec<_>>()})).collect::<Vec<_>>(),
    })
}

/// `{"ground", "sets": [[ids]..], "labels"?}`.
pub fn parse_set_system(text: &str) -> Result<SetSystem> {
    let v = parse(text)?;
    let ground = usize_field(&v, "ground")?;
    let items = array(field(&v, "sets")?, "sets")?;
    let mut sets = Vec::with_capacity(items.len());
    for (i, s) in items.iter().enumerate() {
        let ids = id_list(s, ground, &format!("set {i}"))?;
        sets.push(ElementSet::from_members(ground, ids));
    }
    let mut system = SetSystem::new(ground, sets)?;
    if let Some(labels) = v.get("labels") {
        let labels = array(labels, "labels")?;
        if labels.len() != system.len() {
            return Err(Error::malformed(format!(
                "{} labels for {} sets",
                labels.len(),
                system.len()
            )));
        }
        system.labels = Some(
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    l.as_str()
                        .map(str::to_owned)
                        .ok_or_else(|| Error::malformed(format!("label index {i} is not a string")))
                })
                .collect::<Result<_>>()?,
        );
    }
    Ok(system)
}

pub fn set_system_json(s: &SetSystem) -> Value {
    let mut v = json!({
        "ground": s.ground(),
        "sets": s.sets().iter().map(ElementSet::to_vec).collect::<Vec<_>>(),
    });
    if let Some(labels) = &s.labels {
        v["labels"] = json!(labels);
    }
    v
}

/// `{"n", "perms": [[images]..]}`.
pub fn parse_group(text: &str) -> Result<PermutationGroup> {
    let v = parse(text)?;
    let n = usize_field(&v, "n")?;
    let items = array(field(&v, "perms")?, "perms")?;
    let perms = items
        .iter()
        .enumerate()
        .map(|(i, p)| id_list(p, n, &format!("perm {i}")))
        .collect::<Result<Vec<_>>>()?;
    PermutationGroup::from_generators(n, perms)
}

pub fn group_json(n: usize, perms: &[Vec<usize>]) -> Value {
    json!({"n": n, "perms": perms})
}

/// `{"n", "edges": [[u, v]..]}`.
pub fn parse_graph(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let v = parse(text)?;
    let n = usize_field(&v, "n")?;
    let items = array(field(&v, "edges")?, "edges")?;
    let mut edges = Vec::with_capacity(items.len());
    for (i, e) in items.iter().enumerate() {
        match id_list(e, n, &format!("edge {i}"))?.as_slice() {
            &[a, b] => edges.push((a, b)),
            _ => return Err(Error::malformed(format!("edge {i} must have two endpoints"))),
        }
    }
    Ok((n, edges))
}

/// Halfspace lists share the set-system format; the ground set must match the carrier.
pub fn parse_halfspaces(text: &str, n: usize) -> Result<Vec<ElementSet>> {
    let s = parse_set_system(text)?;
    if s.ground() != n {
        return Err(Error::malformed(format!(
            "halfspace file has ground {}, algebra has {n} elements",
            s.ground()
        )));
    }
    Ok(s.sets().to_vec())
}
