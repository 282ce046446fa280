//! JSON forms of points and complex numbers.
//!
//! A complex number is a JSON number (real), a pair `[re, im]`, or an object
//! `{"re": .., "im": ..}`. A point is a complex number, or
//! `{"coords": [..], "sides": ["left", ..]}` for ball and direct-sum points.
//! A point list is an array of points or `{"points": [..]}`.

use std::path::Path;

use rkhs_core::{Point, Side, C64};
use serde_json::{Map, Number, Value};

use crate::error::{CliError, Result};
use crate::formats::load_json;

fn real(v: &Value) -> Option<f64> {
    v.as_f64()
}

pub fn complex_from_json(v: &Value) -> std::result::Result<C64, String> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .map(|x| C64::new(x, 0.0))
            .ok_or_else(|| format!("bad number {n}")),
        Value::Array(a) if a.len() == 2 => match (real(&a[0]), real(&a[1])) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(format!("expected [re, im] numbers, got {v}")),
        },
        Value::Object(o) if o.contains_key("re") => {
            let re = o.get("re").and_then(real);
            let im = o.get("im").map_or(Some(0.0), real);
            match (re, im) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(format!("expected numeric re/im, got {v}")),
            }
        }
        _ => Err(format!(
            "expected a number, [re, im] or {{\"re\", \"im\"}}, got {v}"
        )),
    }
}

fn side_from_json(v: &Value) -> std::result::Result<Side, String> {
    match v.as_str() {
        Some("left") => Ok(Side::Left),
        Some("right") => Ok(Side::Right),
        _ => Err(format!("side must be \"left\" or \"right\", got {v}")),
    }
}

pub fn point_from_json(v: &Value) -> std::result::Result<Point, String> {
    if let Value::Object(o) = v {
        if let Some(coords) = o.get("coords") {
            let coords = coords
                .as_array()
                .ok_or("coords must be a list")?
                .iter()
                .map(complex_from_json)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if coords.is_empty() {
                return Err("coords must not be empty".into());
            }
            let sides = match o.get("sides") {
                Some(s) => s
                    .as_array()
                    .ok_or("sides must be a list")?
                    .iter()
                    .map(side_from_json)
                    .collect::<std::result::Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            return Ok(Point::with_sides(coords, sides));
        }
    }
    complex_from_json(v).map(Point::scalar)
}

pub fn points_from_json(v: &Value) -> std::result::Result<Vec<Point>, String> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("points")
            .and_then(Value::as_array)
            .ok_or("expected a list of points or {\"points\": [..]}")?,
        _ => return Err(format!("expected a list of points, got {v}")),
    };
    list.iter()
        .enumerate()
        .map(|(i, p)| point_from_json(p).map_err(|e| format!("point {i}: {e}")))
        .collect()
}

/// Reads points from inline JSON, or from a file when `source` does not start
/// with `[` or `{`.
pub fn load_points(source: &str, base: &Path) -> Result<Vec<Point>> {
    let trimmed = source.trim_start();
    let (value, origin) = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let v = serde_json::from_str(trimmed).map_err(|source| CliError::Json {
            origin: "--points".into(),
            source,
        })?;
        (v, "--points".to_string())
    } else {
        let path = base.join(source);
        (load_json(&path)?, path.display().to_string())
    };
    points_from_json(&value).map_err(|m| CliError::format(origin, m))
}

/// A float rendered with 17 significant digits, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(
        text.parse::<Number>()
            .expect("formatted float is valid JSON"),
    )
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn complex_to_json(z: C64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn point_to_json(p: &Point) -> Value {
    if p.sides().is_empty() {
        if let Some(z) = p.as_scalar() {
            return if z.im == 0.0 {
                num(z.re)
            } else {
                complex_to_json(z)
            };
        }
    }
    let mut o = Map::new();
    o.insert(
        "coords".into(),
        Value::Array(p.coords().iter().map(|z| complex_to_json(*z)).collect()),
    );
    if !p.sides().is_empty() {
        let sides = p
            .sides()
            .iter()
            .map(|s| Value::String(if *s == Side::Left { "left" } else { "right" }.into()))
            .collect();
        o.insert("sides".into(), Value::Array(sides));
    }
    Value::Object(o)
}
