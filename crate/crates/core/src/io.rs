//! Tensor JSON files and sweep CSV output.
//!
//! A tensor file is
//!
//! ```json
//! {
//!   "row_dims": [2, 2],
//!   "col_dims": [1, 1],
//!   "entries": [
//!     [1.0, 0.0],
//!     [0.0, -0.5],
//!     [2.0, 0.0],
//!     [1.0, 0.0]
//!   ]
//! }
//! ```
//!
//! with `entries` in storage order (the row-major unfolding). Floats are
//! written in shortest round-trip form, so reading a written file gives back
//! the same bits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::error::Error;
use crate::sensitivity::SweepRow;
use crate::shape::PairedShape;
use crate::tensor::{EinsteinTensor, Scalar};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed tensor file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid tensor: {0}")]
    Tensor(#[from] Error),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    entries: Vec<[f64; 2]>,
}

pub fn parse_tensor(text: &str) -> Result<EinsteinTensor, IoError> {
    let f: TensorFile = serde_json::from_str(text)?;
    let shape = PairedShape::new(f.row_dims, f.col_dims)?;
    let data = f
        .entries
        .iter()
        .map(|&[re, im]| Scalar::new(re, im))
        .collect();
    Ok(EinsteinTensor::from_entries(shape, data)?)
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<EinsteinTensor, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_tensor(&text)
}

fn float(x: f64) -> String {
    // finite by construction of EinsteinTensor
    serde_json::to_string(&x).expect("finite float")
}

fn dims(d: &[usize]) -> String {
    d.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical JSON text: one entry per line, trailing newline.
pub fn tensor_to_json(t: &EinsteinTensor) -> String {
    let s = t.shape();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"row_dims\": [{}],", dims(s.row_dims()));
    let _ = writeln!(out, "  \"col_dims\": [{}],", dims(s.col_dims()));
    out.push_str("  \"entries\": [\n");
    let n = t.entries().len();
    for (k, z) in t.entries().iter().enumerate() {
        let sep = if k + 1 == n { "" } else { "," };
        let _ = writeln!(out, "    [{}, {}]{sep}", float(z.re), float(z.im));
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn write_tensor(path: impl AsRef<Path>, t: &EinsteinTensor) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, tensor_to_json(t)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub const SWEEP_HEADER: &str = "eps_A,eps_D,alpha,norm_A,norm_A_pinv,bound,measured_error";

/// Sweep rows as CSV with 17 significant digits per float.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.report;
        let _ = write!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},",
            r.eps_a, r.eps_d, row.alpha, r.norm_a, r.norm_a_pinv, r.bound
        );
        if let Some(m) = r.measured_error {
            let _ = write!(out, "{m:.16e}");
        }
        out.push('\n');
    }
    out
}
