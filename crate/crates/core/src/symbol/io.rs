//! Walk-spec JSON.
//!
//! Explicit form:
//! `{ "n": 2, "entries": [ { "row": 1, "col": 1, "terms": [ { "shift": -1, "re": 0.7, "im": 0.0 } ] } ] }`
//! with 1-based rows and columns; unspecified entries are zero.
//!
//! Model form: `{ "model": { "d": 2, "lambda_coeffs": [ { "shift": 1, "re": 1.0, "im": 0.0 } ] } }`.

use serde::{Deserialize, Serialize};

use super::{LaurentPoly, SymbolMatrix};
use crate::error::{Error, Result};
use crate::model::{build_model_walk, ModelWalkSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub row: usize,
    pub col: usize,
    pub terms: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpecJson {
    pub d: usize,
    pub lambda_coeffs: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitJson {
    n: usize,
    entries: Vec<EntrySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    model: ModelSpecJson,
}

/// Either form of a walk-spec document.
#[derive(Clone, Debug, PartialEq)]
pub enum WalkFile {
    Explicit { n: usize, entries: Vec<EntrySpec> },
    Model(ModelSpecJson),
}

impl WalkFile {
    /// Parses either form; syntax and schema errors carry line/column positions.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let probe: serde_json::Value = serde_json::from_str(text)?;
        if probe.get("model").is_some() {
            let m: ModelJson = serde_json::from_str(text)?;
            Ok(WalkFile::Model(m.model))
        } else {
            let e: ExplicitJson = serde_json::from_str(text)?;
            Ok(WalkFile::Explicit {
                n: e.n,
                entries: e.entries,
            })
        }
    }

    pub fn to_json_string(&self) -> String {
        let value = match self {
            WalkFile::Explicit { n, entries } => serde_json::to_value(ExplicitJson {
                n: *n,
                entries: entries.clone(),
            }),
            WalkFile::Model(m) => serde_json::to_value(ModelJson { model: m.clone() }),
        };
        serde_json::to_string_pretty(&value.expect("plain data serializes")).expect("value prints")
    }

    /// Validates and expands into a symbol (model form goes through
    /// [`build_model_walk`]).
    pub fn to_symbol(&self) -> Result<SymbolMatrix> {
        match self {
            WalkFile::Explicit { n, entries } => {
                if *n == 0 {
                    return Err(Error::InvalidArgument("field `n` must be positive".into()));
                }
                let mut w = SymbolMatrix::zeros(*n);
                for (idx, e) in entries.iter().enumerate() {
                    if e.row == 0 || e.row > *n || e.col == 0 || e.col > *n {
                        return Err(Error::InvalidArgument(format!(
                            "entries[{idx}]: row/col ({}, {}) outside 1..={n}",
                            e.row, e.col
                        )));
                    }
                    let sum = w.entry(e.row - 1, e.col - 1) + &e.terms;
                    w.set(e.row - 1, e.col - 1, sum);
                }
                Ok(w)
            }
            WalkFile::Model(m) => build_model_walk(&ModelWalkSpec {
                d: m.d,
                lambda: m.lambda_coeffs.clone(),
            }),
        }
    }

    pub fn model_spec(&self) -> Option<ModelWalkSpec> {
        match self {
            WalkFile::Model(m) => Some(ModelWalkSpec {
                d: m.d,
                lambda: m.lambda_coeffs.clone(),
            }),
            WalkFile::Explicit { .. } => None,
        }
    }
}

impl From<&SymbolMatrix> for WalkFile {
    fn from(w: &SymbolMatrix) -> Self {
        let entries = w
            .entries()
            .filter(|(_, _, p)| !p.is_zero())
            .map(|(k, l, p)| EntrySpec {
                row: k + 1,
                col: l + 1,
                terms: p.clone(),
            })
            .collect();
        WalkFile::Explicit {
            n: w.dim(),
            entries,
        }
    }
}

impl From<&ModelWalkSpec> for WalkFile {
    fn from(m: &ModelWalkSpec) -> Self {
        WalkFile::Model(ModelSpecJson {
            d: m.d,
            lambda_coeffs: m.lambda.clone(),
        })
    }
}
