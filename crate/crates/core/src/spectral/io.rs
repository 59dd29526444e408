//! JSON and CSV export of eigen systems.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Band, EigenSystem};
use crate::error::{Error, Result};
use crate::fmt17;
use crate::grid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct SampleJson {
    re: f64,
    im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BandJson {
    d: usize,
    winding: i64,
    multiplicity: usize,
    samples: Vec<SampleJson>,
}

/// Serialized form `{ "bands": [...], "indecomposable": bool, "base_grid": int }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenSystemJson {
    bands: Vec<BandJson>,
    indecomposable: bool,
    base_grid: usize,
}

impl From<&EigenSystem> for EigenSystemJson {
    fn from(sys: &EigenSystem) -> Self {
        let bands = sys
            .bands
            .iter()
            .map(|b| BandJson {
                d: b.d,
                winding: b.winding,
                multiplicity: b.multiplicity,
                samples: b
                    .samples
                    .iter()
                    .map(|c| SampleJson { re: c.re, im: c.im })
                    .collect(),
            })
            .collect();
        Self {
            bands,
            indecomposable: sys.indecomposable,
            base_grid: sys.base_grid,
        }
    }
}

impl EigenSystem {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&EigenSystemJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: EigenSystemJson = serde_json::from_str(text)?;
        let mut bands = Vec::with_capacity(j.bands.len());
        for (idx, b) in j.bands.into_iter().enumerate() {
            if b.d == 0 || b.multiplicity == 0 || b.samples.len() != b.d * j.base_grid {
                return Err(Error::InvalidArgument(format!(
                    "bands[{idx}]: expected d >= 1, multiplicity >= 1 and d * base_grid samples"
                )));
            }
            bands.push(Band {
                d: b.d,
                winding: b.winding,
                multiplicity: b.multiplicity,
                samples: b
                    .samples
                    .iter()
                    .map(|s| Complex64::new(s.re, s.im))
                    .collect(),
            });
        }
        let n = bands.iter().map(|b| b.d * b.multiplicity).sum();
        Ok(EigenSystem {
            n,
            bands,
            indecomposable: j.indecomposable,
            base_grid: j.base_grid,
        })
    }

    /// Rows `band_index, covering_angle, re, im, arg`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "band_index,covering_angle,re,im,arg")?;
        for (j, b) in self.bands.iter().enumerate() {
            let len = b.samples.len();
            for (k, v) in b.samples.iter().enumerate() {
                writeln!(
                    out,
                    "{j},{},{},{},{}",
                    fmt17(grid::angle(k, len)),
                    fmt17(v.re),
                    fmt17(v.im),
                    fmt17(v.arg())
                )?;
            }
        }
        Ok(())
    }
}
