use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::ring::json::{
    element_to_json, parse_element, sb_to_json, table_from_json, table_to_json, u64_from_json,
};
use crate::ring::SymbolTable;

use super::dual::{DualComplex, DualReport};
use super::model::{Component, Piece, SncModel, ValidationReport};
use super::odp::{NodeRecord, OdpInput};
use super::reducible::{FiberComponent, IntersectionPiece, ReducibleFiberInput, ReducibleReport};
use super::SncError;

fn err(m: impl Into<String>) -> SncError {
    SncError::Json(m.into())
}

/// Ids may be given as strings or integers.
fn id_from_json(v: &Value, what: &str) -> Result<String, SncError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() || n.is_i64() => Ok(n.to_string()),
        other => Err(err(format!("{what}: expected string or integer id, got {other}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str, what: &str) -> Result<&'a Value, SncError> {
    v.get(key).filter(|x| !x.is_null()).ok_or_else(|| err(format!("{what} needs \"{key}\"")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a [Value], SncError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(other) => Err(err(format!("{key} must be a list, got {other}"))),
    }
}

pub fn symbols_from_json(v: &Value) -> Result<SymbolTable, SncError> {
    match v.get("symbols") {
        None | Some(Value::Null) => Ok(SymbolTable::new()),
        Some(t) => Ok(table_from_json(t)?),
    }
}

/// Parses a model without validating it.
pub fn model_from_json(v: &Value) -> Result<SncModel, SncError> {
    if !v.is_object() {
        return Err(err("model must be an object"));
    }
    let symbols = symbols_from_json(v)?;
    let mut components = Vec::new();
    for c in array(v, "components")? {
        components.push(Component {
            id: id_from_json(field(c, "id", "component")?, "component id")?,
            multiplicity: match c.get("multiplicity") {
                None | Some(Value::Null) => 1,
                Some(n) => u64_from_json(n, "multiplicity")?,
            },
        });
    }
    let mut pieces = Vec::new();
    for p in array(v, "pieces")? {
        let subset: BTreeSet<String> = field(p, "subset", "piece")?
            .as_array()
            .ok_or_else(|| err("subset must be a list"))?
            .iter()
            .map(|j| id_from_json(j, "subset entry"))
            .collect::<Result<_, _>>()?;
        let piece_id = match p.get("piece_id") {
            None | Some(Value::Null) => "0".to_string(),
            Some(x) => id_from_json(x, "piece_id")?,
        };
        let class_open = parse_element(&symbols, field(p, "class_open", "piece")?)?;
        let cover_class = match p.get("cover_class") {
            None | Some(Value::Null) => class_open.clone(),
            Some(c) => parse_element(&symbols, c)?,
        };
        pieces.push(Piece { subset, piece_id, class_open, cover_class });
    }
    Ok(SncModel { symbols, components, pieces })
}

/// Parses and validates.
pub fn valid_model_from_json(v: &Value) -> Result<SncModel, SncError> {
    let m = model_from_json(v)?;
    m.ensure_valid()?;
    Ok(m)
}

pub fn model_to_json(m: &SncModel) -> Value {
    let pieces: Vec<Value> = m
        .pieces
        .iter()
        .map(|p| {
            let mut o = Map::new();
            o.insert("subset".into(), json!(p.subset));
            o.insert("piece_id".into(), json!(p.piece_id));
            o.insert("class_open".into(), element_to_json(&p.class_open));
            if p.cover_class != p.class_open {
                o.insert("cover_class".into(), element_to_json(&p.cover_class));
            }
            Value::Object(o)
        })
        .collect();
    json!({
        "symbols": table_to_json(&m.symbols),
        "components": m.components.iter().map(|c| json!({"id": c.id, "multiplicity": c.multiplicity})).collect::<Vec<_>>(),
        "pieces": pieces,
    })
}

pub fn validation_to_json(r: &ValidationReport) -> Value {
    json!({
        "valid": r.is_valid(),
        "violations": r.violations.iter().map(|v| json!({"piece": v.piece, "message": v.message})).collect::<Vec<_>>(),
    })
}

pub fn dual_complex_to_json(d: &DualComplex) -> Value {
    json!({
        "euler": d.euler(),
        "f_vector": d.f_vector(),
        "cells": d.cells.iter().zip(&d.faces).map(|(c, f)| json!({
            "subset": c.subset, "piece_id": c.piece_id, "dim": c.dim, "faces": f,
        })).collect::<Vec<_>>(),
    })
}

pub fn dual_report_to_json(r: &DualReport) -> Value {
    json!({
        "euler": r.euler,
        "num_components": r.num_components,
        "lhs": sb_to_json(&r.lhs),
        "rhs": sb_to_json(&r.rhs),
        "identity_holds": r.identity_holds,
        "hypothesis_holds": r.hypothesis_holds(),
        "hypothesis_violations": r.hypothesis_violations.iter().map(|h| json!({
            "subset": h.subset, "reduction": sb_to_json(&h.reduction), "expected_points": h.expected_points,
        })).collect::<Vec<_>>(),
        "components": r.components.iter().map(|c| json!({
            "id": c.id, "closed_reduction": sb_to_json(&c.closed_reduction), "stably_rational": c.stably_rational,
        })).collect::<Vec<_>>(),
        "generic_fiber_obstructed": r.generic_fiber_obstructed,
        "verdict": r.verdict,
    })
}

pub fn odp_from_json(v: &Value) -> Result<OdpInput, SncError> {
    let symbols = symbols_from_json(v)?;
    let fiber_class = parse_element(&symbols, field(v, "fiber_class", "odp input")?)?;
    let mut nodes = Vec::new();
    for (k, n) in array(v, "nodes")?.iter().enumerate() {
        let label = match n.get("label") {
            None | Some(Value::Null) => format!("Q{}", k + 1),
            Some(l) => id_from_json(l, "node label")?,
        };
        let locus = match n.get("locus") {
            None | Some(Value::Null) => crate::ring::RingElement::one(),
            Some(l) => parse_element(&symbols, l)?,
        };
        nodes.push(NodeRecord {
            label,
            locus,
            fiber_quadric: parse_element(&symbols, field(n, "fiber_quadric", "node")?)?,
            model_quadric: parse_element(&symbols, field(n, "model_quadric", "node")?)?,
        });
    }
    Ok(OdpInput { symbols, fiber_class, nodes })
}

pub fn odp_to_json(o: &OdpInput) -> Value {
    json!({
        "symbols": table_to_json(&o.symbols),
        "fiber_class": element_to_json(&o.fiber_class),
        "nodes": o.nodes.iter().map(|n| json!({
            "label": n.label,
            "locus": element_to_json(&n.locus),
            "fiber_quadric": element_to_json(&n.fiber_quadric),
            "model_quadric": element_to_json(&n.model_quadric),
        })).collect::<Vec<_>>(),
    })
}

pub fn reducible_from_json(v: &Value) -> Result<ReducibleFiberInput, SncError> {
    let symbols = symbols_from_json(v)?;
    let mut components = Vec::new();
    for c in array(v, "components")? {
        let class_y = parse_element(&symbols, field(c, "class_y", "component")?)?;
        let class_ypp = match c.get("class_ypp") {
            None | Some(Value::Null) => class_y.clone(),
            Some(x) => parse_element(&symbols, x)?,
        };
        let class_z = match c.get("class_z") {
            None | Some(Value::Null) => crate::ring::RingElement::zero(),
            Some(x) => parse_element(&symbols, x)?,
        };
        components.push(FiberComponent {
            id: id_from_json(field(c, "id", "component")?, "component id")?,
            class_y,
            class_ypp,
            class_z,
        });
    }
    let mut edges = Vec::new();
    for (k, e) in array(v, "intersections")?.iter().enumerate() {
        edges.push(IntersectionPiece {
            i: id_from_json(field(e, "i", "intersection")?, "i")?,
            j: id_from_json(field(e, "j", "intersection")?, "j")?,
            piece_id: match e.get("piece_id") {
                None | Some(Value::Null) => k.to_string(),
                Some(x) => id_from_json(x, "piece_id")?,
            },
            class_c: parse_element(&symbols, field(e, "class_c", "intersection")?)?,
        });
    }
    Ok(ReducibleFiberInput { symbols, components, edges })
}

pub fn reducible_report_to_json(r: &ReducibleReport) -> Value {
    json!({
        "s": sb_to_json(&r.s),
        "fiber_reduction": sb_to_json(&r.fiber_reduction),
        "hypothesis": r.hypothesis,
        "vertices": r.vertices,
        "edges": r.edges,
        "euler": r.euler,
        "singular_count": r.singular_count,
        "euler_minus_n": r.euler - r.singular_count as i64,
        "connected": r.connected,
        "tree": r.tree,
        "rational_components": r.rational_components,
        "blowup_mismatches": r.blowup_mismatches,
        "failures": r.failures,
        "consistent": r.consistent,
        "message": r.message,
    })
}

/// `{"symbols": .., "expr": element}`, the input shape of `ring` commands.
pub fn element_document(t: &SymbolTable, e: &crate::ring::RingElement) -> Value {
    json!({"symbols": table_to_json(t), "expr": element_to_json(e)})
}
