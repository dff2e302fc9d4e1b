//! Canonical textual exchange format.
//!
//! A complex is a JSON document with fields `dim` and `boxes`; each box is
//! a list of `dim` records `{lo, hi, lo_closed, hi_closed}` whose
//! endpoints are plain integers or strings `"m/2^e"` in canonical form.
//! Parsing validates every constructor invariant and rejects non-dyadic
//! endpoints; emitted documents re-parse to equal values bit-exactly.
//! Paths are serialized as waypoint coordinate strings plus the sign
//! pattern and re-validated on input.

use serde::{Deserialize, Serialize};

use crate::geom::{BoxRegion, GeomError, Interval, Point, SpanComplex};
use crate::num::Dyadic;
use crate::path::{MonotonePath, PathError, SignPattern};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("box has {got} intervals, document declares dim {dim}")]
    BoxArity { dim: usize, got: usize },
    #[error("declared sign pattern does not match the waypoints")]
    SignMismatch,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: Dyadic,
    hi: Dyadic,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Serialize, Deserialize)]
struct RawComplex {
    dim: usize,
    boxes: Vec<Vec<RawInterval>>,
}

pub fn parse_complex(text: &str) -> Result<SpanComplex<Dyadic>, FormatError> {
    let raw: RawComplex = serde_json::from_str(text)?;
    let mut boxes = Vec::with_capacity(raw.boxes.len());
    for raw_box in raw.boxes {
        if raw_box.len() != raw.dim {
            return Err(FormatError::BoxArity {
                dim: raw.dim,
                got: raw_box.len(),
            });
        }
        let intervals = raw_box
            .into_iter()
            .map(|iv| Interval::new(iv.lo, iv.hi, iv.lo_closed, iv.hi_closed))
            .collect::<Result<Vec<_>, _>>()?;
        boxes.push(BoxRegion::new(intervals));
    }
    Ok(SpanComplex::new(raw.dim, boxes)?)
}

pub fn complex_to_json(complex: &SpanComplex<Dyadic>) -> String {
    let raw = RawComplex {
        dim: complex.dim(),
        boxes: complex
            .boxes()
            .iter()
            .map(|b| {
                b.intervals()
                    .iter()
                    .map(|iv| RawInterval {
                        lo: iv.lo().clone(),
                        hi: iv.hi().clone(),
                        lo_closed: iv.lo_closed(),
                        hi_closed: iv.hi_closed(),
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("complex documents serialize")
}

/// Parses a single box given as a JSON list of interval records.
pub fn parse_box(text: &str, dim: usize) -> Result<BoxRegion<Dyadic>, FormatError> {
    let raw: Vec<RawInterval> = serde_json::from_str(text)?;
    if raw.len() != dim {
        return Err(FormatError::BoxArity {
            dim,
            got: raw.len(),
        });
    }
    let intervals = raw
        .into_iter()
        .map(|iv| Interval::new(iv.lo, iv.hi, iv.lo_closed, iv.hi_closed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoxRegion::new(intervals))
}

#[derive(Serialize, Deserialize)]
struct RawPath {
    waypoints: Vec<Vec<String>>,
    signs: Vec<i8>,
}

pub fn parse_path(text: &str) -> Result<MonotonePath<Dyadic>, FormatError> {
    let raw: RawPath = serde_json::from_str(text)?;
    let mut waypoints = Vec::with_capacity(raw.waypoints.len());
    for wp in raw.waypoints {
        let coords = wp
            .iter()
            .map(|s| s.parse::<Dyadic>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| {
                FormatError::Json(serde_json::Error::io(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    e.to_string(),
                )))
            })?;
        waypoints.push(Point::new(coords));
    }
    let path = MonotonePath::new(waypoints)?;
    if path.direction().signs() != raw.signs.as_slice() {
        return Err(FormatError::SignMismatch);
    }
    Ok(path)
}

pub fn path_to_json(path: &MonotonePath<Dyadic>) -> String {
    let raw = RawPath {
        waypoints: path
            .waypoints()
            .iter()
            .map(|p| p.coords().iter().map(Dyadic::to_string).collect())
            .collect(),
        signs: path.direction().signs().to_vec(),
    };
    serde_json::to_string_pretty(&raw).expect("paths serialize")
}

/// Sign patterns as exposed in reports.
pub fn signs_of(path: &MonotonePath<Dyadic>) -> &SignPattern {
    path.direction()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::dy;
    use proptest::prelude::*;

    fn arb_interval() -> impl Strategy<Value = Interval<Dyadic>> {
        (
            (-64i64..64),
            (0i64..64),
            0u32..4,
            any::<bool>(),
            any::<bool>(),
        )
            .prop_map(|(lo, len, e, lc, hc)| {
                let lo = dy(lo, e);
                let hi = lo.clone() + dy(len, e);
                if len == 0 {
                    Interval::point(lo)
                } else {
                    Interval::new(lo, hi, lc, hc).expect("nonempty by construction")
                }
            })
    }

    fn arb_complex() -> impl Strategy<Value = SpanComplex<Dyadic>> {
        (1usize..4)
            .prop_flat_map(|dim| {
                (
                    Just(dim),
                    proptest::collection::vec(
                        proptest::collection::vec(arb_interval(), dim..=dim),
                        0..5,
                    ),
                )
            })
            .prop_map(|(dim, boxes)| {
                SpanComplex::new(dim, boxes.into_iter().map(BoxRegion::new).collect())
                    .expect("arity fixed by construction")
            })
    }

    proptest! {
        #[test]
        fn round_trip(complex in arb_complex()) {
            let text = complex_to_json(&complex);
            let back = parse_complex(&text).unwrap();
            prop_assert_eq!(back, complex);
        }
    }

    #[test]
    fn rejects_non_dyadic_and_empty() {
        let bad = r#"{"dim":1,"boxes":[[{"lo":"1/3","hi":1,"lo_closed":true,"hi_closed":true}]]}"#;
        assert!(parse_complex(bad).is_err());
        let empty_interval =
            r#"{"dim":1,"boxes":[[{"lo":1,"hi":0,"lo_closed":true,"hi_closed":true}]]}"#;
        assert!(matches!(
            parse_complex(empty_interval),
            Err(FormatError::Geometry(_))
        ));
        let arity = r#"{"dim":2,"boxes":[[{"lo":0,"hi":1,"lo_closed":true,"hi_closed":true}]]}"#;
        assert!(matches!(
            parse_complex(arity),
            Err(FormatError::BoxArity { .. })
        ));
    }

    #[test]
    fn path_round_trip_and_validation() {
        let path = MonotonePath::new(vec![
            Point::from_ints(&[0, 0]),
            Point::new(vec![dy(1, 1), dy(3, 2)]),
            Point::from_ints(&[1, 1]),
        ])
        .unwrap();
        let text = path_to_json(&path);
        let back = parse_path(&text).unwrap();
        assert_eq!(back, path);

        let bad = r#"{"waypoints":[["0","0"],["1","0"],["0","1"]],"signs":[0,1]}"#;
        assert!(parse_path(bad).is_err());
    }
}
