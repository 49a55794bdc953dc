//! JSON encoding of polynomials, elements and symbol tables.
//!
//! Integers are JSON numbers when they fit in an `i64` and decimal strings
//! otherwise. Elements are lists of `{"symbol": "A*B", "poly": [[k, c], ...]}`
//! with strictly increasing exponents. On input a bare string stands for a
//! single symbol and a bare integer for a multiple of the point.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use super::element::{ClassMonomial, RingElement};
use super::lpoly::LPoly;
use super::sb::{SbElement, SbMonomial};
use super::table::{ClassSymbol, ProductRule, SymbolTable, Verdict};
use super::RingError;

fn err(m: impl Into<String>) -> RingError {
    RingError::Json(m.into())
}

pub fn bigint_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt, RingError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| err(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| err(format!("not an integer: {s:?}"))),
        other => Err(err(format!("expected integer, got {other}"))),
    }
}

pub fn u64_from_json(v: &Value, what: &str) -> Result<u64, RingError> {
    v.as_u64().ok_or_else(|| err(format!("{what}: expected nonnegative integer, got {v}")))
}

pub fn poly_to_json(p: &LPoly) -> Value {
    Value::Array(p.terms().map(|(k, c)| json!([k, bigint_to_json(c)])).collect())
}

pub fn poly_from_json(v: &Value) -> Result<LPoly, RingError> {
    let arr = v.as_array().ok_or_else(|| err("poly must be a list of [exponent, coeff]"))?;
    let mut last: Option<u32> = None;
    let mut p = LPoly::zero();
    for t in arr {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(format!("bad poly term {t}")))?;
        let k = u64_from_json(&pair[0], "exponent")?;
        let k = u32::try_from(k).map_err(|_| err("exponent too large"))?;
        if last.is_some_and(|l| l >= k) {
            return Err(err("poly exponents must be strictly increasing"));
        }
        last = Some(k);
        p.add_term(k, bigint_from_json(&pair[1])?);
    }
    Ok(p)
}

pub fn element_to_json(e: &RingElement) -> Value {
    Value::Array(
        e.terms()
            .map(|(m, p)| json!({"symbol": m.to_string(), "poly": poly_to_json(p)}))
            .collect(),
    )
}

/// Parses without checking declarations.
pub fn element_from_json(v: &Value) -> Result<RingElement, RingError> {
    match v {
        Value::String(s) => Ok(RingElement::term(ClassMonomial::parse(s), LPoly::one())),
        Value::Number(_) => Ok(RingElement::integer(bigint_from_json(v)?)),
        Value::Array(terms) => {
            let mut out = RingElement::zero();
            for t in terms {
                let sym = t
                    .get("symbol")
                    .and_then(Value::as_str)
                    .ok_or_else(|| err(format!("element term needs a \"symbol\": {t}")))?;
                let poly = t.get("poly").ok_or_else(|| err(format!("element term needs a \"poly\": {t}")))?;
                out.add_poly(ClassMonomial::parse(sym), &poly_from_json(poly)?);
            }
            Ok(out)
        }
        other => Err(err(format!("expected element, got {other}"))),
    }
}

/// Parses and checks every label against the table.
pub fn parse_element(table: &SymbolTable, v: &Value) -> Result<RingElement, RingError> {
    let e = element_from_json(v)?;
    table.check_declared(&e)?;
    Ok(e)
}

pub fn sb_to_json(e: &SbElement) -> Value {
    Value::Array(
        e.terms()
            .map(|(m, c)| json!({"symbol": m.to_string(), "coeff": bigint_to_json(c)}))
            .collect(),
    )
}

pub fn sb_from_json(v: &Value) -> Result<SbElement, RingError> {
    match v {
        Value::String(s) => Ok(SbElement::term(SbMonomial::parse(s), 1)),
        Value::Number(_) => Ok(SbElement::integer(bigint_from_json(v)?)),
        Value::Array(terms) => {
            let mut out = SbElement::zero();
            for t in terms {
                let sym = t
                    .get("symbol")
                    .and_then(Value::as_str)
                    .ok_or_else(|| err(format!("sb term needs a \"symbol\": {t}")))?;
                let c = t.get("coeff").ok_or_else(|| err(format!("sb term needs a \"coeff\": {t}")))?;
                out.add_term(SbMonomial::parse(sym), bigint_from_json(c)?);
            }
            Ok(out)
        }
        other => Err(err(format!("expected sb element, got {other}"))),
    }
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    match v {
        Verdict::StablyRational { components } => {
            json!({"verdict": "stably_rational", "components": bigint_to_json(components)})
        }
        Verdict::Obstructed { witness } => {
            json!({"verdict": "obstructed", "witness": sb_to_json(witness)})
        }
    }
}

pub fn table_to_json(t: &SymbolTable) -> Value {
    let classes: Vec<Value> = t
        .classes()
        .map(|c| {
            let mut o = Map::new();
            o.insert("label".into(), json!(c.label));
            o.insert("action_order".into(), json!(c.action_order));
            if let Some(sb) = &c.sb_reduction {
                o.insert("sb_reduction".into(), sb_to_json(sb));
            }
            if let Some(u) = &c.underlying_plain {
                o.insert("underlying_plain".into(), element_to_json(u));
            }
            if let Some(q) = &c.quotient_class {
                o.insert("quotient_class".into(), element_to_json(q));
            }
            Value::Object(o)
        })
        .collect();
    let rules: Vec<Value> = t
        .rules()
        .map(|r| json!({"left": r.left, "right": r.right, "product": element_to_json(&r.product)}))
        .collect();
    json!({
        "sb_symbols": t.explicit_sb_symbols(),
        "class_symbols": classes,
        "product_rules": rules,
    })
}

fn list<'a>(v: &'a Value, key: &str) -> Result<&'a [Value], RingError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(other) => Err(err(format!("{key} must be a list, got {other}"))),
    }
}

fn opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

pub fn table_from_json(v: &Value) -> Result<SymbolTable, RingError> {
    if !v.is_object() {
        return Err(err("symbol table must be an object"));
    }
    let sb = list(v, "sb_symbols")?
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| err("sb_symbols must be strings")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut classes = Vec::new();
    for c in list(v, "class_symbols")? {
        let label = c
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| err(format!("class symbol needs a label: {c}")))?;
        let action_order = match opt(c, "action_order") {
            Some(n) => u64_from_json(n, "action_order")?,
            None => 1,
        };
        classes.push(ClassSymbol {
            label: label.to_string(),
            action_order,
            sb_reduction: opt(c, "sb_reduction").map(sb_from_json).transpose()?,
            underlying_plain: opt(c, "underlying_plain").map(element_from_json).transpose()?,
            quotient_class: opt(c, "quotient_class").map(element_from_json).transpose()?,
        });
    }
    let mut rules = Vec::new();
    for r in list(v, "product_rules")? {
        let side = |k: &str| {
            r.get(k)
                .and_then(Value::as_str)
                .map(String::from)
                .ok_or_else(|| err(format!("product rule needs \"{k}\": {r}")))
        };
        let product = r.get("product").ok_or_else(|| err(format!("product rule needs \"product\": {r}")))?;
        rules.push(ProductRule {
            left: side("left")?,
            right: side("right")?,
            product: element_from_json(product)?,
        });
    }
    SymbolTable::build(sb, classes, rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_coefficients_become_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = LPoly::monomial(2, big.clone());
        let v = poly_to_json(&p);
        assert_eq!(v, json!([[2, "123456789012345678901234567890"]]));
        assert_eq!(poly_from_json(&v).unwrap(), p);
    }

    #[test]
    fn non_increasing_exponents_rejected() {
        assert!(poly_from_json(&json!([[1, 1], [1, 2]])).is_err());
        assert!(poly_from_json(&json!([[2, 1], [0, 2]])).is_err());
    }

    #[test]
    fn table_round_trip() {
        let src = json!({
            "sb_symbols": ["S"],
            "class_symbols": [
                {"label": "A"},
                {"label": "B", "sb_reduction": "S"},
                {"label": "T", "action_order": 2, "underlying_plain": 2, "quotient_class": 1}
            ],
            "product_rules": [{"left": "T", "right": "T", "product": [{"symbol": "T", "poly": [[0, 2]]}]}]
        });
        let t = table_from_json(&src).unwrap();
        let back = table_from_json(&table_to_json(&t)).unwrap();
        assert_eq!(t, back);
    }
}
