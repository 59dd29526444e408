//! Reading walk and state documents from files or stdin.

use std::io::Read;
use std::path::{Path, PathBuf};

use qwalk_core::{StateVector, SymbolMatrix, WalkFile};

use crate::error::{CliError, CliResult, Context};

/// Reads a whole document; `-` means standard input.
pub fn read_source(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdin>"),
                source,
            })?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Short identifier for reports: the file stem, or `stdin`.
pub fn source_id(path: &Path) -> String {
    if path == Path::new("-") {
        return "stdin".into();
    }
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub struct LoadedWalk {
    pub id: String,
    pub file: WalkFile,
    pub symbol: SymbolMatrix,
}

pub fn load_walk(path: &Path) -> CliResult<LoadedWalk> {
    let text = read_source(path)?;
    let shown = path.display().to_string();
    let file = WalkFile::from_json_str(&text).context(shown.clone())?;
    let symbol = file.to_symbol().context(shown)?;
    Ok(LoadedWalk {
        id: source_id(path),
        file,
        symbol,
    })
}

pub fn load_state(path: &Path) -> CliResult<StateVector> {
    let text = read_source(path)?;
    StateVector::from_json_str(&text).context(path.display().to_string())
}
