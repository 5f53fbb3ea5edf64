//! JSON wire formats.
//!
//! * element: array of `deg` decimal strings, the coordinates of
//!   1, x, ..., x^(deg-1) (plain JSON integers, possibly negative, are
//!   accepted on input and reduced mod p^N);
//! * ring: `{"p", "deg", "precision", "defining_poly"}` with the defining
//!   polynomial as `deg + 1` decimal strings, low to high;
//! * module: `{"ring", "rank", "phi", "description", "provenance"}` where
//!   `phi[i][j]` is the e_i-coordinate of phi(e_j);
//! * polygon: `{"segments": [{"slope": "3/5", "mult": 5}, ...]}`;
//! * valuations: integers, with `"inf"` for elements that vanish mod p^N.

use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula_one::{CyclicVector, QxData};
use crate::matrix::Matrix;
use crate::newton::{NewtonPolygon, Segment, Slope};
use crate::sigma_modules::DieudonneModule;
use crate::witt_ring::{RingParams, Valuation, WittElem, WittRing};

pub const PHI_CONVENTION: &str = "column convention: phi[i][j] is the e_i-coordinate of phi(e_j)";

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedInput(msg.into())
}

impl Serialize for WittElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs().iter().map(u64::to_string).collect();
        strings.serialize(s)
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) if s == "inf" => Ok(Valuation::Infinite),
            Value::Number(n) => n
                .as_u64()
                .and_then(|v| u32::try_from(v).ok())
                .map(Valuation::Finite)
                .ok_or_else(|| de::Error::custom("valuation must be a non-negative integer")),
            _ => Err(de::Error::custom("valuation must be an integer or \"inf\"")),
        }
    }
}

pub fn parse_slope(text: &str) -> Result<Slope> {
    let bad = || malformed(format!("bad slope {text:?}"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|_| bad())?,
            d.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (text.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d <= 0 {
        return Err(bad());
    }
    Ok(Slope::new(n, d))
}

#[derive(Serialize, Deserialize)]
struct SegmentWire {
    slope: String,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct PolygonWire {
    segments: Vec<SegmentWire>,
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonWire {
            segments: self
                .segments()
                .iter()
                .map(|seg| SegmentWire {
                    slope: seg.slope.to_string(),
                    mult: seg.mult,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PolygonWire::deserialize(d)?;
        let segments = wire
            .segments
            .iter()
            .map(|s| {
                Ok(Segment {
                    slope: parse_slope(&s.slope)?,
                    mult: s.mult,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        NewtonPolygon::new(segments).map_err(de::Error::custom)
    }
}

pub fn polygon_from_json(value: &Value) -> Result<NewtonPolygon> {
    NewtonPolygon::deserialize(value).map_err(|e| malformed(e.to_string()))
}

pub fn ring_to_json(ring: &WittRing) -> Value {
    json!({
        "p": ring.p(),
        "deg": ring.deg(),
        "precision": ring.precision(),
        "defining_poly": ring.defining_poly().iter().map(u64::to_string).collect::<Vec<_>>(),
    })
}

fn parse_u64_field(obj: &Value, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed(format!("missing or non-integer field {key:?}")))
}

fn parse_integer(v: &Value) -> Result<i128> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<i128>()
            .map_err(|_| malformed(format!("bad integer {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(i128::from)
            .or_else(|| n.as_u64().map(i128::from))
            .ok_or_else(|| malformed(format!("bad integer {n}"))),
        other => Err(malformed(format!("expected an integer, got {other}"))),
    }
}

/// Ring from JSON. A supplied defining polynomial is honored; otherwise the
/// default one for (p, deg) is used.
pub fn ring_from_json(value: &Value) -> Result<WittRing> {
    let p = parse_u64_field(value, "p")?;
    let deg = parse_u64_field(value, "deg")? as usize;
    let precision = u32::try_from(parse_u64_field(value, "precision")?)
        .map_err(|_| malformed("precision out of range"))?;
    let params = RingParams::new(p, deg, precision);
    match value.get("defining_poly") {
        None | Some(Value::Null) => WittRing::new(params),
        Some(Value::Array(items)) => {
            let modulus = p.checked_pow(precision).ok_or_else(|| {
                Error::InvalidParams("p^precision does not fit in 64 bits".into())
            })?;
            let coeffs = items
                .iter()
                .map(|v| parse_integer(v).map(|x| x.rem_euclid(modulus as i128) as u64))
                .collect::<Result<Vec<_>>>()?;
            WittRing::with_defining_poly(params, &coeffs)
        }
        Some(_) => Err(malformed("defining_poly must be an array")),
    }
}

pub fn elem_from_json(ring: &WittRing, value: &Value) -> Result<WittElem> {
    let items = value
        .as_array()
        .ok_or_else(|| malformed("element must be an array"))?;
    if items.len() != ring.deg() {
        return Err(malformed(format!(
            "element must have {} coordinates",
            ring.deg()
        )));
    }
    let m = ring.modulus() as i128;
    let coeffs = items
        .iter()
        .map(|v| parse_integer(v).map(|x| x.rem_euclid(m) as u64))
        .collect::<Result<Vec<_>>>()?;
    ring.element(coeffs)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    serde_json::to_value(m.to_rows()).expect("elements serialize")
}

pub fn matrix_from_json(ring: &WittRing, value: &Value) -> Result<Matrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| malformed("matrix must be an array of rows"))?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| malformed("matrix row must be an array"))?
                .iter()
                .map(|e| elem_from_json(ring, e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).ok_or_else(|| malformed("matrix rows are empty or ragged"))
}

pub fn module_to_json(module: &DieudonneModule, provenance: Option<&str>) -> Value {
    let mut v = json!({
        "ring": ring_to_json(module.ring()),
        "rank": module.rank(),
        "phi": matrix_to_json(module.phi()),
        "description": PHI_CONVENTION,
    });
    if let Some(p) = provenance {
        v["provenance"] = Value::String(p.to_string());
    }
    v
}

/// Module from JSON, together with its provenance tag if present.
pub fn module_from_json(value: &Value) -> Result<(DieudonneModule, Option<String>)> {
    let ring = Arc::new(ring_from_json(
        value.get("ring").ok_or_else(|| malformed("missing ring"))?,
    )?);
    let phi = matrix_from_json(
        &ring,
        value.get("phi").ok_or_else(|| malformed("missing phi"))?,
    )?;
    if let Some(rank) = value.get("rank") {
        if rank.as_u64() != Some(phi.rows() as u64) {
            return Err(malformed("rank does not match the phi-matrix"));
        }
    }
    let provenance = value
        .get("provenance")
        .and_then(Value::as_str)
        .map(str::to_string);
    Ok((DieudonneModule::new(ring, phi)?, provenance))
}

pub fn qx_to_json(qx: &QxData, cv: Option<&CyclicVector>) -> Value {
    let mut v = json!({
        "valuations": qx.valuations,
        "coefficients": qx.coeffs,
        "polygon": qx.polygon,
    });
    if let Some(cv) = cv {
        v["cyclic_vector"] = serde_json::to_value(&cv.x).expect("elements serialize");
    }
    v
}

/// Valuation tuple of a QxData document.
pub fn qx_valuations_from_json(value: &Value) -> Result<Vec<Valuation>> {
    let vals = value
        .get("valuations")
        .ok_or_else(|| malformed("missing valuations"))?;
    Vec::<Valuation>::deserialize(vals).map_err(|e| malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_simple_minimal;

    #[test]
    fn polygon_wire_format() {
        let np = NewtonPolygon::from_simple_blocks(&[(1, 1), (1, 2)]).unwrap();
        let text = serde_json::to_string(&np).unwrap();
        assert_eq!(
            text,
            r#"{"segments":[{"slope":"1/2","mult":2},{"slope":"2/3","mult":3}]}"#
        );
        let back: NewtonPolygon = serde_json::from_str(&text).unwrap();
        assert_eq!(back, np);
        let zero = NewtonPolygon::from_simple_blocks(&[(1, 0)]).unwrap();
        assert_eq!(
            serde_json::to_string(&zero).unwrap(),
            r#"{"segments":[{"slope":"0","mult":1}]}"#
        );
        assert!(serde_json::from_str::<NewtonPolygon>(
            r#"{"segments":[{"slope":"1/2","mult":3}]}"#
        )
        .is_err());
    }

    #[test]
    fn module_round_trip() {
        let ring = Arc::new(WittRing::new(RingParams::new(3, 2, 5)).unwrap());
        let m = build_simple_minimal(&ring, 2, 3).unwrap();
        let v = module_to_json(&m, Some("minimal"));
        assert_eq!(v["ring"]["defining_poly"], json!(["2", "2", "1"]));
        let (back, prov) = module_from_json(&v).unwrap();
        assert_eq!(back, m);
        assert_eq!(prov.as_deref(), Some("minimal"));
    }

    #[test]
    fn lenient_elements() {
        let ring = WittRing::new(RingParams::new(2, 1, 8)).unwrap();
        assert_eq!(
            elem_from_json(&ring, &json!([-1])).unwrap(),
            ring.from_int(255)
        );
        assert_eq!(
            elem_from_json(&ring, &json!(["300"])).unwrap(),
            ring.from_int(44)
        );
        assert!(elem_from_json(&ring, &json!(["1", "2"])).is_err());
        assert!(elem_from_json(&ring, &json!("1")).is_err());
    }

    #[test]
    fn malformed_modules() {
        assert!(matches!(
            module_from_json(&json!({"phi": [[["1"]]]})),
            Err(Error::MalformedInput(_))
        ));
        let bad_rank =
            json!({"ring": {"p": 2, "deg": 1, "precision": 8}, "rank": 2, "phi": [[["1"]]]});
        assert!(matches!(
            module_from_json(&bad_rank),
            Err(Error::MalformedInput(_))
        ));
        let ragged =
            json!({"ring": {"p": 2, "deg": 1, "precision": 8}, "phi": [[["1"], ["0"]], [["1"]]]});
        assert!(matches!(
            module_from_json(&ragged),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn valuation_wire() {
        let v = vec![
            Valuation::Finite(0),
            Valuation::Infinite,
            Valuation::Finite(3),
        ];
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"[0,"inf",3]"#);
        let back: Vec<Valuation> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
