//! Canonical JSON forms. Equal values serialize to identical bytes.

use serde_json::{json, Value};

use super::basis::UnitBasis;
use super::laurent::{LaurentPoly, Monomial};
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::ypoly::MonicYPoly;
use super::zpoly::ZPoly;
use crate::error::SymError;

fn zpoly_json(p: &ZPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

fn zpoly_from(v: &Value) -> Result<ZPoly, SymError> {
    let arr = v.as_array().ok_or_else(|| SymError::Malformed("expected coefficient list".into()))?;
    let cs = arr
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| SymError::Malformed("expected coefficient string".into()))?
                .parse::<GaussRat>()
                .map_err(|e| SymError::Malformed(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ZPoly::new(cs))
}

/// List of frequency coefficient vectors, ascending degree.
pub fn basis_to_json(b: &UnitBasis) -> Value {
    Value::Array(b.freqs().iter().map(zpoly_json).collect())
}

pub fn basis_from_json(v: &Value) -> Result<UnitBasis, SymError> {
    let arr = v.as_array().ok_or_else(|| SymError::Malformed("expected basis list".into()))?;
    UnitBasis::new(arr.iter().map(zpoly_from).collect::<Result<_, _>>()?)
}

/// Terms `{exponents, num, den}` in ascending graded-lex order.
pub fn laurent_to_json(p: &LaurentPoly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!({"exponents": m.0, "num": zpoly_json(c.num()), "den": zpoly_json(c.den())}))
            .collect(),
    )
}

pub fn laurent_from_json(v: &Value, arity: usize) -> Result<LaurentPoly, SymError> {
    let arr = v.as_array().ok_or_else(|| SymError::Malformed("expected term list".into()))?;
    let mut out = LaurentPoly::zero(arity);
    for t in arr {
        let exps: Vec<i64> = t["exponents"]
            .as_array()
            .ok_or_else(|| SymError::Malformed("missing exponents".into()))?
            .iter()
            .map(|e| e.as_i64().ok_or_else(|| SymError::Malformed("exponent not an integer".into())))
            .collect::<Result<_, _>>()?;
        if exps.len() != arity {
            return Err(SymError::ArityMismatch(arity, exps.len()));
        }
        let den = zpoly_from(&t["den"])?;
        if den.is_zero() {
            return Err(SymError::Malformed("zero denominator".into()));
        }
        out.add_term(Monomial(exps), &RatFunc::new(zpoly_from(&t["num"])?, den));
    }
    Ok(out)
}

/// Coefficients `A_0..A_{d-1}`.
pub fn ypoly_to_json(f: &MonicYPoly) -> Value {
    json!({"degree": f.degree(), "coeffs": f.lower_coeffs().iter().map(laurent_to_json).collect::<Vec<_>>()})
}

pub fn canonical_string(p: &LaurentPoly) -> String {
    laurent_to_json(p).to_string()
}
