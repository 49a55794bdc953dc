//! Small JSON expression language over a symbol table.
//!
//! ```text
//! [ {"symbol":..,"poly":..}, .. ]   literal element
//! "A" | 3                             symbol | integer
//! {"sym": "A"}  {"L": k}  {"int": n}
//! {"add": [e, ..]}  {"sub": [a, b]}  {"mul": [e, ..]}  {"neg": e}  {"pow": [e, k]}
//! {"res_full": e}  {"res_level": {"n": n, "expr": e}}  {"quotient": e}
//! {"bittner": {"x": e, "y": e, "e": e}}
//! ```

use serde_json::Value;

use super::element::RingElement;
use super::json::{bigint_from_json, parse_element, u64_from_json};
use super::table::{bittner_blowup_class, SymbolTable};
use super::RingError;

fn err(m: impl Into<String>) -> RingError {
    RingError::Json(m.into())
}

fn args(v: &Value, op: &str) -> Result<Vec<Value>, RingError> {
    v.as_array().cloned().ok_or_else(|| err(format!("{op} expects a list")))
}

pub fn eval(table: &SymbolTable, v: &Value) -> Result<RingElement, RingError> {
    let obj = match v {
        Value::Object(o) => o,
        _ => return parse_element(table, v),
    };
    if obj.len() != 1 {
        return Err(err(format!("expression object must have exactly one key: {v}")));
    }
    let (op, a) = obj.iter().next().unwrap();
    match op.as_str() {
        "sym" => {
            let s = a.as_str().ok_or_else(|| err("sym expects a label"))?;
            parse_element(table, &Value::String(s.to_string()))
        }
        "L" => {
            let k = u64_from_json(a, "L")?;
            Ok(RingElement::l_power(u32::try_from(k).map_err(|_| err("L exponent too large"))?))
        }
        "int" => Ok(RingElement::integer(bigint_from_json(a)?)),
        "add" => {
            let mut acc = RingElement::zero();
            for x in args(a, "add")? {
                acc.add_assign(&eval(table, &x)?);
            }
            Ok(acc)
        }
        "sub" => {
            let xs = args(a, "sub")?;
            if xs.len() != 2 {
                return Err(err("sub expects two arguments"));
            }
            Ok(&eval(table, &xs[0])? - &eval(table, &xs[1])?)
        }
        "mul" => {
            let mut acc = RingElement::one();
            for x in args(a, "mul")? {
                acc = table.mul(&acc, &eval(table, &x)?)?;
            }
            Ok(acc)
        }
        "neg" => Ok(-eval(table, a)?),
        "pow" => {
            let xs = args(a, "pow")?;
            if xs.len() != 2 {
                return Err(err("pow expects [expr, k]"));
            }
            let k = u64_from_json(&xs[1], "pow exponent")?;
            let k = u32::try_from(k).map_err(|_| err("pow exponent too large"))?;
            table.pow(&eval(table, &xs[0])?, k)
        }
        "res_full" => table.res_full(&eval(table, a)?),
        "res_level" => {
            let n = u64_from_json(a.get("n").ok_or_else(|| err("res_level needs n"))?, "n")?;
            let e = eval(table, a.get("expr").ok_or_else(|| err("res_level needs expr"))?)?;
            table.res_to_level(&e, n)
        }
        "quotient" => table.quotient_mu(&eval(table, a)?),
        "bittner" => {
            let get = |k: &str| {
                a.get(k)
                    .ok_or_else(|| err(format!("bittner needs {k}")))
                    .and_then(|x| eval(table, x))
            };
            Ok(bittner_blowup_class(&get("x")?, &get("y")?, &get("e")?))
        }
        other => Err(err(format!("unknown operator {other:?}"))),
    }
}
