//! JSON state documents.
//!
//! ```json
//! { "modes": 1, "covariance": [[1, 0], [0, 1]], "mean": [0, 0] }
//! ```
//!
//! `form` is `"standard"` (default) or `"doubled"`. A doubled document holds a
//! purification: `modes` counts real plus fictitious modes, the covariance is
//! in `(ξ, η, ξ̃, η̃)` order with form `diag(J, −J)`, and the mean is zero.

use std::fs;
use std::path::Path;

use quasifree::purification::DoubledState;
use quasifree::{QuasifreeState, RealMatrix, RealVector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    #[default]
    Standard,
    Doubled,
}

impl Form {
    fn is_standard(&self) -> bool {
        *self == Form::Standard
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub modes: usize,
    pub covariance: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    #[serde(default, skip_serializing_if = "Form::is_standard")]
    pub form: Form,
}

/// A parsed and validated document.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Standard(QuasifreeState),
    Doubled(DoubledState),
}

impl LoadedState {
    /// The doubled form is reinterpreted as a standard `2n`-mode state.
    pub fn into_standard(self) -> Result<QuasifreeState, CliError> {
        match self {
            LoadedState::Standard(s) => Ok(s),
            LoadedState::Doubled(d) => Ok(d.to_standard()?),
        }
    }
}

impl StateDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: StateDocument = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("malformed state document: {e}")))?;
        doc.check_shape()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn check_shape(&self) -> Result<(), CliError> {
        let dim = 2 * self.modes;
        if self.modes == 0 {
            return Err(CliError::Parse("modes must be at least 1".into()));
        }
        if self.form == Form::Doubled && !self.modes.is_multiple_of(2) {
            return Err(CliError::Parse(format!(
                "doubled document needs an even mode count, got {}",
                self.modes
            )));
        }
        if self.covariance.len() != dim || self.covariance.iter().any(|row| row.len() != dim) {
            return Err(CliError::Parse(format!("covariance must be {dim}x{dim}")));
        }
        if self.mean.len() != dim {
            return Err(CliError::Parse(format!(
                "mean must have {dim} entries, got {}",
                self.mean.len()
            )));
        }
        let finite = self
            .covariance
            .iter()
            .flatten()
            .chain(&self.mean)
            .all(|x| x.is_finite());
        if !finite {
            return Err(CliError::Parse(
                "non-finite number in state document".into(),
            ));
        }
        Ok(())
    }

    pub fn covariance_matrix(&self) -> RealMatrix {
        let dim = 2 * self.modes;
        RealMatrix::from_fn(dim, dim, |i, j| self.covariance[i][j])
    }

    pub fn mean_vector(&self) -> RealVector {
        RealVector::from_column_slice(&self.mean)
    }

    pub fn load(&self, tol: f64) -> Result<LoadedState, CliError> {
        match self.form {
            Form::Standard => Ok(LoadedState::Standard(QuasifreeState::new(
                self.covariance_matrix(),
                self.mean_vector(),
                tol,
            )?)),
            Form::Doubled => {
                if self.mean.iter().any(|&x| x != 0.0) {
                    return Err(CliError::Domain("doubled state must have zero mean".into()));
                }
                Ok(LoadedState::Doubled(DoubledState::new(
                    self.covariance_matrix(),
                    tol,
                )?))
            }
        }
    }

    pub fn from_state(state: &QuasifreeState) -> Self {
        Self {
            modes: state.modes(),
            covariance: rows(state.covariance()),
            mean: state.mean().iter().copied().collect(),
            form: Form::Standard,
        }
    }

    pub fn from_doubled(state: &DoubledState) -> Self {
        let dim = state.covariance().nrows();
        Self {
            modes: dim / 2,
            covariance: rows(state.covariance()),
            mean: vec![0.0; dim],
            form: Form::Doubled,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("documents serialize");
        text.push('\n');
        text
    }
}

pub fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Reads and validates a document in one step.
pub fn load_path(path: &Path, tol: f64) -> Result<LoadedState, CliError> {
    StateDocument::read(path)?.load(tol)
}
