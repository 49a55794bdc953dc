use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::ring::json::{bigint_from_json, bigint_to_json};

use super::morse::{Certificate, MorseResult};
use super::quadratic::{Isotropy, QuadInvariants};
use super::truncated::TruncatedSeries;
use super::SeriesError;

fn err(m: impl Into<String>) -> SeriesError {
    SeriesError::Json(m.into())
}

pub fn rational_to_json(c: &BigRational) -> Value {
    json!({"num": bigint_to_json(c.numer()), "den": bigint_to_json(c.denom())})
}

pub fn rational_from_json(v: &Value) -> Result<BigRational, SeriesError> {
    let int = |x: &Value| bigint_from_json(x).map_err(|e| err(e.to_string()));
    let num = int(v.get("num").ok_or_else(|| err("coefficient needs \"num\""))?)?;
    let den = match v.get("den") {
        None | Some(Value::Null) => BigInt::one(),
        Some(d) => int(d)?,
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("z{i}")).collect()
}

/// `{"vars": [...], "trunc": D, "terms": [{"exp": [...], "num": .., "den": ..}]}`.
pub fn series_from_json(v: &Value) -> Result<TruncatedSeries, SeriesError> {
    let vars = v.get("vars").and_then(Value::as_array).ok_or_else(|| err("series needs a \"vars\" list"))?;
    let n = vars.len();
    let trunc = match v.get("trunc") {
        None | Some(Value::Null) => 8,
        Some(t) => t.as_u64().filter(|&t| t <= u32::MAX as u64).ok_or_else(|| err("trunc must be a nonnegative integer"))? as u32,
    };
    let mut terms = Vec::new();
    for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| err("series needs a \"terms\" list"))? {
        let exp: Vec<u32> = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| err("term needs \"exp\""))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| err(format!("bad exponent {x}"))))
            .collect::<Result<_, _>>()?;
        terms.push((exp, rational_from_json(t)?));
    }
    TruncatedSeries::from_terms(n, trunc, terms)
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    json!({
        "vars": var_names(s.nvars()),
        "trunc": s.trunc(),
        "terms": s.terms().map(|(e, c)| json!({
            "exp": e, "num": bigint_to_json(c.numer()), "den": bigint_to_json(c.denom()),
        })).collect::<Vec<_>>(),
    })
}

pub fn morse_to_json(m: &MorseResult) -> Value {
    json!({
        "diagonal": m.diagonal.iter().map(rational_to_json).collect::<Vec<_>>(),
        "change": m.change.images().iter().map(series_to_json).collect::<Vec<_>>(),
        "rank": m.diagonal.len(),
        "residual_zero": true,
    })
}

pub fn isotropy_to_json(i: &Isotropy) -> Value {
    match i {
        Isotropy::Witness(w) => json!({"found": true, "witness": w}),
        Isotropy::NoneFound { height_bound } => json!({"found": false, "height_bound": height_bound}),
    }
}

pub fn invariants_to_json(q: &QuadInvariants) -> Value {
    json!({
        "rank": q.rank,
        "discriminant_class": bigint_to_json(&q.discriminant_class),
        "isotropy": isotropy_to_json(&q.isotropy),
    })
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    json!({
        "rank": c.rank,
        "expected_rank": c.expected_rank,
        "diagonal": c.diagonal.iter().map(rational_to_json).collect::<Vec<_>>(),
        "discriminant_class": bigint_to_json(&c.discriminant_class),
        "isotropy": isotropy_to_json(&c.isotropy),
        "certified": c.certified,
        "status": c.status,
    })
}
