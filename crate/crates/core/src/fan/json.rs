use serde_json::{json, Value};

use crate::ring::json::{element_to_json, parse_element, table_to_json};
use crate::snc::json::symbols_from_json;

use super::euler::{EulerCheck, SubdivisionProblem};
use super::point::{FanPoint, LogFan};
use super::subdivision::{InvarianceReport, PlanStep};
use super::FanError;

fn err(m: impl Into<String>) -> FanError {
    FanError::Json(m.into())
}

fn int_vec(v: &Value, what: &str) -> Result<Vec<i64>, FanError> {
    v.as_array()
        .ok_or_else(|| err(format!("{what} must be a list of integers")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| err(format!("{what}: {x} is not an integer"))))
        .collect()
}

fn vec_list(v: &Value, what: &str) -> Result<Vec<Vec<i64>>, FanError> {
    v.as_array()
        .ok_or_else(|| err(format!("{what} must be a list")))?
        .iter()
        .map(|x| int_vec(x, what))
        .collect()
}

fn index(v: &Value, what: &str) -> Result<usize, FanError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| err(format!("{what} must be a nonnegative integer")))
}

/// Parses a fan without validating it.
pub fn fan_from_json(v: &Value) -> Result<LogFan, FanError> {
    let symbols = symbols_from_json(v)?;
    let ambient_rank = index(v.get("ambient_rank").ok_or_else(|| err("fan needs \"ambient_rank\""))?, "ambient_rank")?;
    let mut points = Vec::new();
    for p in v.get("points").and_then(Value::as_array).ok_or_else(|| err("fan needs a \"points\" list"))? {
        let rays = vec_list(p.get("rays").ok_or_else(|| err("point needs \"rays\""))?, "rays")?;
        let t_bar = int_vec(p.get("t_bar").ok_or_else(|| err("point needs \"t_bar\""))?, "t_bar")?;
        let class = parse_element(&symbols, p.get("class").ok_or_else(|| err("point needs \"class\""))?)?;
        points.push(FanPoint::new(rays, t_bar, class));
    }
    Ok(LogFan { ambient_rank, points, symbols })
}

pub fn valid_fan_from_json(v: &Value) -> Result<LogFan, FanError> {
    let f = fan_from_json(v)?;
    f.validate()?;
    Ok(f)
}

pub fn fan_to_json(f: &LogFan) -> Value {
    json!({
        "ambient_rank": f.ambient_rank,
        "symbols": table_to_json(&f.symbols),
        "points": f.points.iter().map(|p| json!({
            "rays": p.rays, "t_bar": p.t_bar, "class": element_to_json(&p.class),
        })).collect::<Vec<_>>(),
    })
}

/// Annotated listing with ranks and root indices.
pub fn fan_summary_to_json(f: &LogFan) -> Result<Value, FanError> {
    let mut pts = Vec::new();
    for p in &f.points {
        let rk = p.ranks()?;
        pts.push(json!({
            "rays": p.rays,
            "t_bar": p.t_bar,
            "class": element_to_json(&p.class),
            "r": rk.r, "r_h": rk.r_h, "r_v": rk.r_v,
            "root_index": if p.is_vertical() { json!(p.root_index()?) } else { Value::Null },
        }));
    }
    Ok(json!({"ambient_rank": f.ambient_rank, "points": pts}))
}

/// Steps as `{"point": i, "ray": [..]}` or `[i, [..]]`.
pub fn plan_from_json(v: &Value) -> Result<Vec<PlanStep>, FanError> {
    let steps = match v {
        Value::Null => return Ok(vec![]),
        Value::Array(a) => a,
        _ => return Err(err("plan must be a list")),
    };
    steps
        .iter()
        .map(|s| match s {
            Value::Array(pair) if pair.len() == 2 => Ok((index(&pair[0], "plan point")?, int_vec(&pair[1], "plan ray")?)),
            Value::Object(_) => Ok((
                index(s.get("point").ok_or_else(|| err("plan step needs \"point\""))?, "plan point")?,
                int_vec(s.get("ray").ok_or_else(|| err("plan step needs \"ray\""))?, "plan ray")?,
            )),
            other => Err(err(format!("bad plan step {other}"))),
        })
        .collect()
}

pub fn plan_to_json(plan: &[PlanStep]) -> Value {
    json!(plan.iter().map(|(i, w)| json!({"point": i, "ray": w})).collect::<Vec<_>>())
}

pub fn invariance_to_json(r: &InvarianceReport) -> Value {
    json!({
        "before": element_to_json(&r.before),
        "after": element_to_json(&r.after),
        "points_after": r.points_after,
        "invariant": r.invariant,
    })
}

pub fn problem_from_json(v: &Value) -> Result<SubdivisionProblem, FanError> {
    let gamma = vec_list(v.get("gamma").ok_or_else(|| err("problem needs \"gamma\""))?, "gamma")?;
    let delta = match v.get("delta") {
        None | Some(Value::Null) => vec![],
        Some(d) => d
            .as_array()
            .ok_or_else(|| err("delta must be a list of indices"))?
            .iter()
            .map(|x| index(x, "delta index"))
            .collect::<Result<_, _>>()?,
    };
    let cones = match v.get("cones") {
        None | Some(Value::Null) => vec![gamma.clone()],
        Some(c) => c
            .as_array()
            .ok_or_else(|| err("cones must be a list"))?
            .iter()
            .map(|x| vec_list(x, "cone"))
            .collect::<Result<_, _>>()?,
    };
    SubdivisionProblem::new(gamma, delta, cones)
}

pub fn problem_to_json(p: &SubdivisionProblem) -> Value {
    json!({"gamma": p.gamma, "delta": p.delta, "cones": super::euler::maximal_cones(&p.cones)})
}

pub fn euler_check_to_json(c: &EulerCheck) -> Value {
    let entry = |m: &std::collections::BTreeMap<Vec<usize>, i64>| {
        m.iter().map(|(k, v)| json!({"face": k, "value": v})).collect::<Vec<_>>()
    };
    json!({"counts": entry(&c.counts), "expected": entry(&c.expected), "holds": c.holds, "covers": c.covers})
}
