//! JSON interchange for states and channels.
//!
//! A state document is `{"dim": d, "matrix": M}`; a channel document is
//! `{"dim": d, "kraus": [M, ...], "convention": "row_sum" | "column_sum"}`.
//! Every `M` is a row-major nested array of `[re, im]` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::quantum::{validate_channel, validate_density, Convention, DensityMatrix, KrausChannel};

/// Row-major nested `[re, im]` pairs.
pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub dim: usize,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    pub dim: usize,
    pub kraus: Vec<MatrixDoc>,
    pub convention: Convention,
}

pub fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| [m.get(r, c).re, m.get(r, c).im]).collect()).collect()
}

pub fn matrix_from_doc(doc: &MatrixDoc, dim: usize) -> Result<ComplexMatrix> {
    if doc.len() != dim || doc.iter().any(|row| row.len() != dim) {
        return Err(Error::Parse(format!("matrix is not {dim}x{dim}")));
    }
    let entries: Vec<Complex64> = doc.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::from_row_major(dim, dim, &entries)
}

impl StateDocument {
    pub fn from_state(state: &DensityMatrix) -> Self {
        Self { dim: state.dim(), matrix: matrix_to_doc(state.rho()) }
    }

    pub fn validate(&self, tol: f64) -> Result<DensityMatrix> {
        validate_density(&matrix_from_doc(&self.matrix, self.dim)?, tol)
    }
}

impl ChannelDocument {
    pub fn from_channel(channel: &KrausChannel) -> Self {
        Self {
            dim: channel.dim(),
            kraus: channel.operators().iter().map(matrix_to_doc).collect(),
            convention: channel.convention(),
        }
    }

    pub fn validate(&self, tol: f64) -> Result<KrausChannel> {
        let ops = self.kraus.iter().map(|m| matrix_from_doc(m, self.dim)).collect::<Result<Vec<_>>>()?;
        validate_channel(ops, self.convention, tol)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_state(text: &str, tol: f64) -> Result<DensityMatrix> {
    parse::<StateDocument>(text)?.validate(tol)
}

pub fn parse_channel(text: &str, tol: f64) -> Result<KrausChannel> {
    parse::<ChannelDocument>(text)?.validate(tol)
}

pub fn read_state(path: &Path, tol: f64) -> Result<DensityMatrix> {
    parse_state(&fs::read_to_string(path)?, tol)
}

pub fn read_channel(path: &Path, tol: f64) -> Result<KrausChannel> {
    parse_channel(&fs::read_to_string(path)?, tol)
}

pub fn state_to_json(state: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateDocument::from_state(state)).expect("serializable")
}

pub fn channel_to_json(channel: &KrausChannel) -> String {
    serde_json::to_string_pretty(&ChannelDocument::from_channel(channel)).expect("serializable")
}

/// Writes `contents` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
