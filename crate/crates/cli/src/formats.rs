//! File formats: moment lists, explicit Gram matrices, zero-set descriptions
//! and serialized span operators.

use std::fs;
use std::path::Path;

use rkhs_core::kernels::Kernel;
use rkhs_core::linalg::CMatrix;
use rkhs_core::npkernels::{ZeroSetGenerator, DEFAULT_PREFIX};
use rkhs_core::operators::{SpanBasis, SpanOperator};
use rkhs_core::{Point, C64};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::points::{complex_from_json, complex_to_json, point_to_json, points_from_json};
use crate::spec::kernel_from_spec;

pub fn load_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        origin: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `{"moments": [..]}` or a bare array of positive reals.
pub fn moments_from_json(v: &Value, origin: &str) -> Result<Vec<f64>> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) => o
            .get("moments")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::format(origin, "expected {\"moments\": [..]}"))?,
        _ => return Err(CliError::format(origin, "expected a list of moments")),
    };
    list.iter()
        .enumerate()
        .map(|(i, m)| {
            m.as_f64()
                .ok_or_else(|| CliError::format(origin, format!("moment {i} is not a number")))
        })
        .collect()
}

fn matrix_from_json(v: &Value, rows: usize, origin: &str) -> Result<CMatrix> {
    let bad = |m: String| CliError::format(origin, m);
    let list = v
        .as_array()
        .ok_or_else(|| bad("matrix must be a list of rows".into()))?;
    if list.len() != rows {
        return Err(bad(format!(
            "matrix has {} rows, expected {rows}",
            list.len()
        )));
    }
    let mut m = CMatrix::zeros(rows, rows);
    for (i, row) in list.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| bad(format!("row {i} is not a list")))?;
        if row.len() != rows {
            return Err(bad(format!(
                "row {i} has {} entries, expected {rows}",
                row.len()
            )));
        }
        for (j, entry) in row.iter().enumerate() {
            m[(i, j)] =
                complex_from_json(entry).map_err(|e| bad(format!("entry ({i}, {j}): {e}")))?;
        }
    }
    Ok(m)
}

fn matrix_to_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect()))
            .collect(),
    )
}

/// `{"points": [..], "matrix": [[..]]}` describing a kernel on a finite set.
pub fn custom_from_json(v: &Value, origin: &str) -> Result<(Vec<Point>, CMatrix)> {
    let points = v
        .get("points")
        .ok_or_else(|| CliError::format(origin, "missing \"points\""))
        .and_then(|p| points_from_json(p).map_err(|m| CliError::format(origin, m)))?;
    let matrix = v
        .get("matrix")
        .ok_or_else(|| CliError::format(origin, "missing \"matrix\""))?;
    let matrix = matrix_from_json(matrix, points.len(), origin)?;
    Ok((points, matrix))
}

/// A zero set and how many of its points to use.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetInput {
    pub generator: ZeroSetGenerator,
    pub prefix: usize,
}

/// Accepted forms:
///
/// ```json
/// {"generator": "explicit", "zeros": [0.5, [0, 0.2]]}
/// {"generator": "geometric", "ratio": 0.5, "prefix": 200}
/// {"generator": "power", "exponent": 2}
/// ```
pub fn zero_set_from_json(v: &Value, origin: &str) -> Result<ZeroSetInput> {
    let bad = |m: &str| CliError::format(origin, m);
    let number = |key: &str| {
        v.get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| CliError::format(origin, format!("missing numeric \"{key}\"")))
    };
    let generator = match v.get("generator").and_then(Value::as_str) {
        Some("explicit") => {
            let zs = v
                .get("zeros")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing \"zeros\" list"))?
                .iter()
                .map(complex_from_json)
                .collect::<std::result::Result<Vec<C64>, _>>()
                .map_err(|m| CliError::format(origin, m))?;
            ZeroSetGenerator::Explicit(zs)
        }
        Some("geometric") => ZeroSetGenerator::Geometric {
            ratio: number("ratio")?,
        },
        Some("power") => ZeroSetGenerator::Power {
            exponent: number("exponent")?,
        },
        _ => {
            return Err(bad(
                "\"generator\" must be \"explicit\", \"geometric\" or \"power\"",
            ))
        }
    };
    let prefix = match v.get("prefix") {
        None => DEFAULT_PREFIX,
        Some(p) => {
            p.as_u64()
                .filter(|p| *p > 0)
                .ok_or_else(|| bad("\"prefix\" must be a positive integer"))? as usize
        }
    };
    Ok(ZeroSetInput { generator, prefix })
}

/// A span operator together with the kernel specification it was built from.
#[derive(Debug, Clone)]
pub struct SpanOperatorFile {
    pub kernel: String,
    pub operator: SpanOperator<Kernel>,
}

impl SpanOperatorFile {
    pub fn from_json(v: &Value, origin: &str, base: &Path) -> Result<Self> {
        let kernel = v
            .get("kernel")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::format(origin, "missing \"kernel\" specification"))?
            .to_string();
        let points = v
            .get("points")
            .ok_or_else(|| CliError::format(origin, "missing \"points\""))
            .and_then(|p| points_from_json(p).map_err(|m| CliError::format(origin, m)))?;
        let coeffs = v
            .get("coeffs")
            .ok_or_else(|| CliError::format(origin, "missing \"coeffs\""))?;
        let coeffs = matrix_from_json(coeffs, points.len(), origin)?;
        let basis = SpanBasis::new(kernel_from_spec(&kernel, base)?, &points)?;
        Ok(SpanOperatorFile {
            kernel,
            operator: SpanOperator::new(basis, coeffs)?,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("kernel".into(), json!(self.kernel));
        let points = self
            .operator
            .basis()
            .points()
            .iter()
            .map(point_to_json)
            .collect();
        o.insert("points".into(), Value::Array(points));
        o.insert("coeffs".into(), matrix_to_json(self.operator.coeffs()));
        Value::Object(o)
    }
}
