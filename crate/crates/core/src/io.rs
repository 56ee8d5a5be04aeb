//! JSON encoding of exact matrices.
//!
//! Every entry is an array of `φ(conductor)` rational strings `"p/q"`, the
//! coefficients of the entry in the power basis `1, ζ, ζ², …`.

use serde::{Deserialize, Serialize};

use crate::cyclo::{euler_phi, CycNum};
use crate::error::{Error, Result};
use crate::linalg::{FieldMatrix, FieldVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub conductor: u32,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &FieldMatrix) -> Self {
        MatrixFile {
            conductor: m.conductor(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(CycNum::to_strings).collect(),
        }
    }

    pub fn from_vector(v: &FieldVector) -> Self {
        MatrixFile {
            conductor: v.conductor(),
            rows: v.len(),
            cols: 1,
            entries: v.entries().iter().map(CycNum::to_strings).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<FieldMatrix> {
        if self.conductor == 0 {
            return Err(Error::Parse("conductor: must be positive".into()));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "entries: {}x{} matrix needs {} entries, got {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        let phi = euler_phi(self.conductor);
        let mut out = Vec::with_capacity(self.entries.len());
        for (i, e) in self.entries.iter().enumerate() {
            if e.len() != phi {
                return Err(Error::Parse(format!(
                    "entries[{i}]: conductor {} needs {phi} coefficients, got {}",
                    self.conductor,
                    e.len()
                )));
            }
            out.push(CycNum::from_strings(self.conductor, e).map_err(|err| Error::Parse(format!("entries[{i}]: {err}")))?);
        }
        FieldMatrix::new(self.conductor, self.rows, self.cols, out)
    }

    /// Reads a column vector; a `1 x N` row is accepted as well.
    pub fn to_vector(&self) -> Result<FieldVector> {
        let m = self.to_matrix()?;
        if m.cols() == 1 {
            Ok(m.column(0))
        } else if m.rows() == 1 {
            Ok(m.row(0))
        } else {
            Err(Error::Parse(format!("cols: expected a vector, got a {}x{} matrix", m.rows(), m.cols())))
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}
