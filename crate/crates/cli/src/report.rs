//! JSON documents written into a run directory.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qwalk_core::symbol::DecayClass;
use qwalk_core::EigenSystem;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaritySummary {
    pub pass: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub d: usize,
    pub winding: i64,
    pub multiplicity: usize,
}

/// Summary of one analysis. Fields a command does not compute stay absent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub walk_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitarity: Option<UnitaritySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_class: Option<DecayClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cayley_hamilton_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bands: Option<Vec<BandSummary>>,
    /// Bands were refined; the decomposability verdict is only given then.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refined: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ct_realizable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_winding: Option<u64>,
    pub artifacts: Vec<String>,
}

impl AnalysisReport {
    pub fn new(walk_id: impl Into<String>) -> Self {
        Self {
            walk_id: walk_id.into(),
            ..Self::default()
        }
    }

    /// Fills the band summary and every flag derived from it, so the flags
    /// cannot disagree with the system.
    pub fn with_system(mut self, sys: &EigenSystem) -> Self {
        self.bands = Some(
            sys.bands
                .iter()
                .map(|b| BandSummary {
                    d: b.d,
                    winding: b.winding,
                    multiplicity: b.multiplicity,
                })
                .collect(),
        );
        self.refined = Some(sys.indecomposable);
        if sys.indecomposable {
            self.decomposable = Some(sys.is_decomposable());
        }
        self.ct_realizable = Some(qwalk_core::ct_realizable(sys));
        self.total_winding = Some(qwalk_core::total_winding(sys));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub grid: usize,
    pub tol: f64,
    pub bins: usize,
}

/// Index of a run directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Vec<String>,
    pub settings: Settings,
    pub files: Vec<String>,
}

/// Output directory that remembers what was written to it.
pub struct RunDir {
    root: PathBuf,
    files: Vec<String>,
}

impl RunDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Io {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn write_str(&mut self, name: &str, text: &str) -> CliResult<PathBuf> {
        self.write_with(name, |f| f.write_all(text.as_bytes()))
    }

    pub fn write_with<F>(&mut self, name: &str, body: F) -> CliResult<PathBuf>
    where
        F: FnOnce(&mut std::io::BufWriter<fs::File>) -> std::io::Result<()>,
    {
        let path = self.path(name);
        let io = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let file = fs::File::create(&path).map_err(io)?;
        let mut out = std::io::BufWriter::new(file);
        body(&mut out).map_err(io)?;
        out.flush().map_err(io)?;
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<PathBuf> {
        let text = serde_json::to_string_pretty(value).expect("report types serialize");
        self.write_str(name, &text)
    }

    /// Writes `report.json`; its artifact list is the files written so far.
    pub fn write_report(&mut self, mut report: AnalysisReport) -> CliResult<AnalysisReport> {
        report.artifacts = self.files.clone();
        self.write_json("report.json", &report)?;
        Ok(report)
    }

    pub fn finish(
        mut self,
        command: &str,
        inputs: Vec<String>,
        settings: Settings,
    ) -> CliResult<Manifest> {
        let mut files = self.files.clone();
        files.push("manifest.json".into());
        let manifest = Manifest {
            tool: "qwalk".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            inputs,
            settings,
            files,
        };
        self.write_json("manifest.json", &manifest)?;
        Ok(manifest)
    }
}
