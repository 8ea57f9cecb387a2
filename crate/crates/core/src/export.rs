//! JSON interchange format for spanning sets.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "factors": [{"group": "O", "n": 2, "k": 2, "l": 2}],
//!   "d_k": 1,
//!   "d_l": 1,
//!   "rows": 4,
//!   "cols": 4,
//!   "ordering": "...",
//!   "elements": [
//!     {"diagram": "B 2 2 : (1,2)(3,4)", "kind": "E", "entries": [[1, 1, 1], [1, 4, 1], ...]}
//!   ]
//! }
//! ```
//!
//! Entries are `[row, col, value]` with 1-based indices, sorted by row then
//! column. Featured elements carry `"feature": [i, j]`. Local-symmetry
//! elements join their per-factor diagrams with ` ⊗ ` and kinds with `⊗`.
//! The file holds integers only.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagrams::{BrauerDiagram, GroodDiagram};
use crate::error::{Error, Result};
use crate::layers::{Factor, SpanElement, SpanningSet};
use crate::spanmat::{Diagram, MatrixKind};
use crate::sparse::{Entry, SparseMatrix};

pub const FORMAT_VERSION: u32 = 1;

pub const ORDERING_CONTRACT: &str = "E/F elements in canonical Brauer diagram order, then H elements in \
(l+k)\\n-diagram order; local-symmetry products lexicographic in factor element indices, first factor \
outermost; feature units (i,j) with i outer after each base element; indices 1-based, tensor index major, \
feature index minor";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportElement {
    pub diagram: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature: Option<[usize; 2]>,
    pub entries: Vec<[i64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportFile {
    pub format_version: u32,
    pub factors: Vec<Factor>,
    pub d_k: usize,
    pub d_l: usize,
    pub rows: usize,
    pub cols: usize,
    pub ordering: String,
    pub elements: Vec<ExportElement>,
}

impl From<&SpanningSet> for ExportFile {
    fn from(set: &SpanningSet) -> Self {
        let elements = set
            .elements
            .iter()
            .map(|e| ExportElement {
                diagram: e.diagram_label(),
                kind: e.kind_label(),
                feature: e.feature.map(|(i, j)| [i, j]),
                entries: e
                    .matrix
                    .entries()
                    .iter()
                    .map(|x| [x.row as i64 + 1, x.col as i64 + 1, x.value as i64])
                    .collect(),
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            factors: set.factors.clone(),
            d_k: set.d_k,
            d_l: set.d_l,
            rows: set.rows(),
            cols: set.cols(),
            ordering: ORDERING_CONTRACT.to_string(),
            elements,
        }
    }
}

fn parse_diagram(text: &str) -> Result<Diagram> {
    let text = text.trim();
    if text.starts_with('B') {
        Ok(Diagram::Brauer(text.parse::<BrauerDiagram>()?))
    } else {
        Ok(Diagram::Grood(text.parse::<GroodDiagram>()?))
    }
}

fn parse_kind(text: &str) -> Result<MatrixKind> {
    match text.trim() {
        "E" => Ok(MatrixKind::E),
        "F" => Ok(MatrixKind::F),
        "H" => Ok(MatrixKind::H),
        other => Err(Error::InvalidExport(format!("unknown element kind `{other}`"))),
    }
}

impl ExportFile {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses JSON text, rejecting unknown format versions before anything else.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::InvalidExport("missing format_version".into()))?;
        if version != FORMAT_VERSION as u64 {
            return Err(Error::UnsupportedFormat(version as u32));
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Rebuilds the spanning set, validating shapes, indices and provenance.
    pub fn to_spanning_set(&self) -> Result<SpanningSet> {
        if self.factors.is_empty() {
            return Err(Error::NoFactors);
        }
        for f in &self.factors {
            f.group.check_dimension(f.n)?;
        }
        if self.d_k == 0 || self.d_l == 0 {
            return Err(Error::InvalidFeatureDims {
                d_k: self.d_k,
                d_l: self.d_l,
            });
        }
        let rows = self.factors.iter().map(Factor::rows).product::<usize>() * self.d_l;
        let cols = self.factors.iter().map(Factor::cols).product::<usize>() * self.d_k;
        if (rows, cols) != (self.rows, self.cols) {
            return Err(Error::ShapeMismatch {
                expected_rows: rows,
                expected_cols: cols,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut elements = Vec::with_capacity(self.elements.len());
        for (idx, e) in self.elements.iter().enumerate() {
            let diagrams = e.diagram.split('⊗').map(parse_diagram).collect::<Result<Vec<_>>>()?;
            let kinds = e.kind.split('⊗').map(parse_kind).collect::<Result<Vec<_>>>()?;
            if diagrams.len() != self.factors.len() || kinds.len() != self.factors.len() {
                return Err(Error::InvalidExport(format!(
                    "element {} lists {} diagrams for {} factors",
                    idx + 1,
                    diagrams.len(),
                    self.factors.len()
                )));
            }
            let mut triplets = Vec::with_capacity(e.entries.len());
            for &[row, col, value] in &e.entries {
                if row < 1 || col < 1 || row as usize > rows || col as usize > cols {
                    return Err(Error::InvalidExport(format!(
                        "element {} has entry ({row}, {col}) outside {rows}x{cols}",
                        idx + 1
                    )));
                }
                let value = i32::try_from(value)
                    .ok()
                    .filter(|v| *v != 0)
                    .ok_or_else(|| Error::InvalidExport(format!("element {} has entry value {value}", idx + 1)))?;
                triplets.push(Entry {
                    row: row as usize - 1,
                    col: col as usize - 1,
                    value,
                });
            }
            let matrix = SparseMatrix::from_triplets(rows, cols, triplets)?;
            if matrix.nnz() != e.entries.len() {
                return Err(Error::InvalidExport(format!(
                    "element {} repeats an entry position",
                    idx + 1
                )));
            }
            elements.push(SpanElement {
                diagrams,
                kinds,
                feature: e.feature.map(|[i, j]| (i, j)),
                matrix,
            });
        }
        Ok(SpanningSet {
            factors: self.factors.clone(),
            d_k: self.d_k,
            d_l: self.d_l,
            elements,
        })
    }
}
