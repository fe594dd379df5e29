//! JSON encodings for curves, field elements and the cohomological data.
//!
//! Field elements of a prime field are plain integers; elements of an
//! extension are ascending coefficient lists in the generator of the field's
//! modulus. Polynomials are ascending lists of elements.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cech::{CechSextuple, CechTriple, DrClass, H1Class, OrderBudget, TripleReport};
use crate::coordring::{Differential, RingElement};
use crate::curve::{validate, CurveModel, ModelKind};
use crate::error::{Error, Result};
use crate::gfield::{field_with_modulus, make_field, Fe, Field};
use crate::linalg::Matrix;
use crate::places::{Base, Place};
use crate::polylab::{Poly, RationalFn};

/// The on-disk description of a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub ext: u32,
    /// Irreducible modulus of the extension, ascending. The lexicographically
    /// smallest one is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub model: String,
    pub f: Vec<Value>,
    #[serde(default)]
    pub h: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
}

fn one() -> u32 {
    1
}

impl CurveSpec {
    pub fn from_json(text: &str) -> Result<CurveSpec> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("curve spec: {e}")))
    }

    pub fn field(&self) -> Result<Field> {
        match &self.modulus {
            Some(m) => {
                let k = field_with_modulus(self.p, m)?;
                if k.m() != self.ext {
                    return Err(Error::Invalid(format!(
                        "modulus has degree {} but ext is {}",
                        k.m(),
                        self.ext
                    )));
                }
                Ok(k)
            }
            None => make_field(self.p, self.ext),
        }
    }

    /// Parses the coefficients and runs full curve validation.
    pub fn to_curve(&self) -> Result<CurveModel> {
        let k = self.field()?;
        let f = decode_poly(k, &Value::Array(self.f.clone()))?;
        let kind = match (self.model.as_str(), &self.h) {
            ("odd", None) => ModelKind::Odd { f },
            ("odd", Some(_)) => {
                return Err(Error::Invalid("odd model takes no h".into()));
            }
            ("char2", Some(h)) => ModelKind::CharTwo {
                h: decode_poly(k, &Value::Array(h.clone()))?,
                f,
            },
            ("char2", None) => return Err(Error::Invalid("char2 model needs h".into())),
            (other, _) => return Err(Error::Invalid(format!("unknown model {other:?}"))),
        };
        validate(k, kind, self.genus)
    }

    pub fn from_curve(c: &CurveModel) -> CurveSpec {
        let k = c.field();
        let modulus = (k.m() > 1).then(|| k.desc().modulus.clone());
        let as_list = |p: &Poly| match encode_poly(p) {
            Value::Array(v) => v,
            _ => unreachable!(),
        };
        let (model, h) = match c.kind() {
            ModelKind::Odd { .. } => ("odd", None),
            ModelKind::CharTwo { h, .. } => ("char2", Some(as_list(h))),
        };
        CurveSpec {
            p: k.p(),
            ext: k.m(),
            modulus,
            model: model.into(),
            f: as_list(c.f()),
            h,
            genus: Some(c.g()),
        }
    }
}

pub fn encode_fe(e: Fe) -> Value {
    if e.field().m() == 1 {
        json!(e.raw())
    } else {
        json!(e.coeffs())
    }
}

pub fn decode_fe(k: Field, v: &Value) -> Result<Fe> {
    let bad = || Error::Invalid(format!("not a field element: {v}"));
    match v {
        Value::Number(n) => {
            let n = n.as_i64().ok_or_else(bad)?;
            Ok(k.from_int(n))
        }
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| c.as_i64().ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            k.from_coeffs(&coeffs)
        }
        _ => Err(bad()),
    }
}

/// Parses `3`, `-1`, `[1,2]` or `1,2` style element text.
pub fn parse_fe(k: Field, text: &str) -> Result<Fe> {
    let text = text.trim();
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return decode_fe(k, &v);
    }
    let wrapped = format!("[{text}]");
    let v: Value = serde_json::from_str(&wrapped)
        .map_err(|_| Error::Invalid(format!("not a field element: {text}")))?;
    decode_fe(k, &v)
}

pub fn encode_poly(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| encode_fe(c)).collect())
}

pub fn decode_poly(k: Field, v: &Value) -> Result<Poly> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("not a coefficient list: {v}")))?;
    let coeffs = items
        .iter()
        .map(|c| decode_fe(k, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(k, coeffs))
}

pub fn encode_rational(r: &RationalFn) -> Value {
    json!({ "num": encode_poly(r.num()), "den": encode_poly(r.den()) })
}

pub fn decode_rational(k: Field, v: &Value) -> Result<RationalFn> {
    RationalFn::new(
        decode_poly(k, field_of(v, "num")?)?,
        decode_poly(k, field_of(v, "den")?)?,
    )
}

pub fn encode_ring(e: &RingElement) -> Value {
    json!({ "a": encode_rational(e.a()), "b": encode_rational(e.b()) })
}

pub fn decode_ring(c: &CurveModel, v: &Value) -> Result<RingElement> {
    let k = c.field();
    Ok(RingElement::new(
        c,
        decode_rational(k, field_of(v, "a")?)?,
        decode_rational(k, field_of(v, "b")?)?,
    ))
}

pub fn encode_diff(w: &Differential) -> Value {
    json!({ "coeff": encode_ring(w.coeff()) })
}

pub fn decode_diff(c: &CurveModel, v: &Value) -> Result<Differential> {
    Ok(Differential::new(decode_ring(c, field_of(v, "coeff")?)?))
}

pub fn encode_vec(v: &[Fe]) -> Value {
    Value::Array(v.iter().map(|&e| encode_fe(e)).collect())
}

pub fn decode_vec(k: Field, v: &Value) -> Result<Vec<Fe>> {
    v.as_array()
        .ok_or_else(|| Error::Invalid(format!("not a vector: {v}")))?
        .iter()
        .map(|e| decode_fe(k, e))
        .collect()
}

/// Row-major.
pub fn encode_matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| encode_vec(r)).collect())
}

pub fn decode_matrix(k: Field, v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Invalid(format!("not a matrix: {v}")))?
        .iter()
        .map(|r| decode_vec(k, r))
        .collect::<Result<Vec<_>>>()?;
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    Ok(Matrix::from_rows(k, &rows))
}

pub fn encode_triple(t: &CechTriple) -> Value {
    json!({
        "w0": encode_diff(&t.w0),
        "winf": encode_diff(&t.winf),
        "f": encode_ring(&t.f),
    })
}

pub fn decode_triple(c: &CurveModel, v: &Value) -> Result<CechTriple> {
    Ok(CechTriple::new(
        decode_diff(c, field_of(v, "w0")?)?,
        decode_diff(c, field_of(v, "winf")?)?,
        decode_ring(c, field_of(v, "f")?)?,
    ))
}

pub fn encode_sextuple(s: &CechSextuple) -> Value {
    json!({
        "a": encode_fe(s.a),
        "i": s.i,
        "w0": encode_diff(&s.w0),
        "wa": encode_diff(&s.wa),
        "winf": encode_diff(&s.winf),
        "f0a": encode_ring(&s.f0a),
        "f0inf": encode_ring(&s.f0inf),
        "fainf": encode_ring(&s.fainf),
        "r": encode_poly(&s.r),
        "t": encode_poly(&s.t),
        "b_prev": encode_fe(s.b_prev),
    })
}

pub fn encode_h1(cls: &H1Class) -> Value {
    json!({ "coords": encode_vec(&cls.coords) })
}

pub fn encode_dr_class(cls: &DrClass) -> Value {
    json!({ "lambda": encode_vec(&cls.lambda), "gamma": encode_vec(&cls.gamma) })
}

pub fn decode_dr_class(k: Field, v: &Value) -> Result<DrClass> {
    Ok(DrClass {
        lambda: decode_vec(k, field_of(v, "lambda")?)?,
        gamma: decode_vec(k, field_of(v, "gamma")?)?,
    })
}

pub fn encode_report(r: &TripleReport) -> Value {
    json!({
        "identity": r.identity,
        "w0_regular": r.w0_regular,
        "winf_regular": r.winf_regular,
        "f_regular": r.f_regular,
        "pass": r.all_pass(),
    })
}

pub fn encode_base(b: Base) -> Value {
    match b {
        Base::Finite(c) => encode_fe(c),
        Base::Infinity => json!("inf"),
    }
}

pub fn decode_base(k: Field, v: &Value) -> Result<Base> {
    match v {
        Value::String(s) if s == "inf" => Ok(Base::Infinity),
        other => Ok(Base::Finite(decode_fe(k, other)?)),
    }
}

pub fn encode_place(pl: &Place) -> Result<Value> {
    Ok(json!({
        "base": encode_base(pl.base()),
        "e": pl.e(),
        "label": pl.label(),
        "dP": pl.different_exponent()?,
    }))
}

pub fn encode_budget(b: &OrderBudget) -> Value {
    json!({
        "i": b.i,
        "label": b.label,
        "e": b.e,
        "psi_bounds": [b.psi_bounds.0, b.psi_bounds.1],
        "y_bound": b.y_bound,
        "ord_x_power": b.ord_x_power,
        "ord_h_inv": b.ord_h_inv,
        "ord_dx": b.ord_dx,
        "total": b.total,
        "consistent": b.consistent,
    })
}

/// The field description, so extension elements can be interpreted.
pub fn encode_field(k: Field) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(k.p()));
    m.insert("ext".into(), json!(k.m()));
    if k.m() > 1 {
        m.insert("modulus".into(), json!(k.desc().modulus));
    }
    Value::Object(m)
}

fn field_of<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Invalid(format!("missing key {key:?}")))
}
