//! Reading the bundled corpus: `tangles/*.json` are single diagrams,
//! `pairs/*.json` hold `{"move", "first", "second"}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::tangle::{parse_tangle, TangleDiagram, TangleError};

#[derive(Debug, Clone)]
pub struct MoveFile {
    pub name: String,
    pub mv: String,
    pub first: TangleDiagram,
    pub second: TangleDiagram,
}

#[derive(Deserialize)]
struct RawPair {
    #[serde(rename = "move")]
    mv: String,
    first: serde_json::Value,
    second: serde_json::Value,
}

pub fn parse_pair(name: &str, text: &str) -> Result<MoveFile, TangleError> {
    let raw: RawPair = serde_json::from_str(text)?;
    Ok(MoveFile {
        name: name.into(),
        mv: raw.mv,
        first: parse_tangle(&raw.first.to_string())?,
        second: parse_tangle(&raw.second.to_string())?,
    })
}

fn json_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Parse(PathBuf, TangleError),
}

pub fn load_tangles(dir: &Path) -> Result<Vec<(String, TangleDiagram)>, CorpusError> {
    let files = json_files(dir).map_err(|e| CorpusError::Io(dir.into(), e))?;
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|e| CorpusError::Io(p.clone(), e))?;
            let d = parse_tangle(&text).map_err(|e| CorpusError::Parse(p.clone(), e))?;
            Ok((stem(&p), d))
        })
        .collect()
}

pub fn load_pairs(dir: &Path) -> Result<Vec<MoveFile>, CorpusError> {
    let files = json_files(dir).map_err(|e| CorpusError::Io(dir.into(), e))?;
    files
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(|e| CorpusError::Io(p.clone(), e))?;
            parse_pair(&stem(&p), &text).map_err(|e| CorpusError::Parse(p.clone(), e))
        })
        .collect()
}
