//! JSON interchange format for observables and kernels.
//!
//! Complex entries are `[re, im]` pairs of finite doubles. Parsing and
//! printing go through `serde_json` with exact float round trips, so a
//! document survives serialize/parse unchanged bit for bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::MarkovKernel;
use crate::linalg::{ComplexMatrix, Tolerance, C64};
use crate::observables::{Observable, OutcomeSet};

pub const SCHEMA_VERSION: &str = "1";

/// A matrix as rows of `[re, im]` pairs.
pub type MatrixEntries = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDocument {
    pub schema_version: String,
    pub dim: usize,
    pub outcomes: Vec<String>,
    pub effects: Vec<MatrixEntries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, String>>,
}

impl ObservableDocument {
    pub fn from_observable(e: &Observable) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            dim: e.dim(),
            outcomes: e.outcomes().labels().to_vec(),
            effects: e.effects().iter().map(matrix_entries).collect(),
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata
            .get_or_insert_with(BTreeMap::new)
            .insert(key.to_string(), value.into());
        self
    }

    /// Checks version and shapes. Positivity and normalisation are left to
    /// [`crate::observables::validate`].
    pub fn to_observable(&self) -> Result<Observable> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {:?}, expected {SCHEMA_VERSION:?}",
                self.schema_version
            )));
        }
        if self.outcomes.len() != self.effects.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} outcomes but {} effects",
                self.outcomes.len(),
                self.effects.len()
            )));
        }
        let effects = self
            .effects
            .iter()
            .map(|m| parse_matrix(m, self.dim))
            .collect::<Result<Vec<_>>>()?;
        Observable::new(OutcomeSet::new(self.outcomes.clone())?, effects)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

pub fn matrix_entries(m: &ComplexMatrix) -> MatrixEntries {
    let d = m.dim();
    (0..d)
        .map(|i| (0..d).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

pub fn parse_matrix(rows: &MatrixEntries, dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::ShapeMismatch(format!("effect is not {dim}x{dim}")));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|[re, im]| C64::new(*re, *im))
        .collect();
    ComplexMatrix::new(dim, data)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDocument {
    pub schema_version: String,
    pub from: Vec<String>,
    pub to: Vec<String>,
    /// `matrix[x][a]` is the probability of target `a` given source `x`.
    pub matrix: Vec<Vec<f64>>,
}

impl KernelDocument {
    pub fn from_kernel(k: &MarkovKernel) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            from: k.from_outcomes().labels().to_vec(),
            to: k.to_outcomes().labels().to_vec(),
            matrix: k.matrix().to_vec(),
        }
    }

    pub fn to_kernel(&self, tol: &Tolerance) -> Result<MarkovKernel> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        MarkovKernel::new(
            OutcomeSet::new(self.from.clone())?,
            OutcomeSet::new(self.to.clone())?,
            self.matrix.clone(),
            tol,
        )
    }
}
