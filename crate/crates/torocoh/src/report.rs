//! Shared JSON rendering of scalars, vectors, and lattice data for the CLI
//! and the Python bindings. Report bodies are timestamp-free so repeated
//! runs are byte-identical.

use num::ToPrimitive;
use serde_json::{json, Value};

use crate::scalars::{render_rational, CScalar, Scalar};
use crate::spectral::ZSet;

/// Kind tag, exact value when rational, decimal rendering, and a certified
/// enclosure when the rendering is not exact.
pub fn scalar_json(s: &Scalar, digits: u32) -> Value {
    let mut o = serde_json::Map::new();
    o.insert("kind".into(), json!(s.kind()));
    if let Scalar::Rat(r) = s {
        o.insert("exact".into(), json!(r.to_string()));
    }
    if let Ok(e) = s.enclosure(digits) {
        o.insert("decimal".into(), json!(e.render(digits)));
        if !e.exact {
            o.insert(
                "enclosure".into(),
                json!([render_rational(&e.lo, digits), render_rational(&e.hi, digits)]),
            );
        }
    }
    Value::Object(o)
}

pub fn cscalar_json(c: &CScalar, digits: u32) -> Value {
    json!({ "re": scalar_json(&c.re, digits), "im": scalar_json(&c.im, digits) })
}

pub fn cvec_json(v: &[CScalar], digits: u32) -> Value {
    Value::Array(v.iter().map(|c| cscalar_json(c, digits)).collect())
}

pub fn mat_json(m: &[Vec<Scalar>], digits: u32) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|s| scalar_json(s, digits)).collect()))
            .collect(),
    )
}

pub fn sigma0_json(z: &ZSet) -> Value {
    match &z.sigma0 {
        Some(idx) => Value::Array(
            idx.sigma
                .iter()
                .map(|x| json!(x.to_i64().unwrap_or(i64::MAX)))
                .collect(),
        ),
        None => Value::Null,
    }
}
