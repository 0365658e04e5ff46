//! Field snapshots: a flat little-endian `f64` file of physical samples in
//! row-major order, plus a JSON sidecar with the grid metadata.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub n: usize,
    pub period: f64,
    pub field: String,
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

/// Sidecar path for a sample file: `foo.f64` -> `foo.json`.
pub fn sidecar_path(data_path: &Path) -> PathBuf {
    data_path.with_extension("json")
}

/// Writes `<data_path>` and its sidecar.
pub fn write_snapshot(data_path: &Path, field: &SpectralField, meta: &SnapshotMeta) -> Result<()> {
    let samples = field.to_physical();
    let bytes: Vec<u8> = samples.iter().flat_map(|v| v.to_le_bytes()).collect();
    fs::write(data_path, bytes).map_err(|e| Error::io(data_path, e))?;
    let side = sidecar_path(data_path);
    let text = serde_json::to_string_pretty(meta)?;
    fs::write(&side, text).map_err(|e| Error::io(&side, e))?;
    Ok(())
}

pub fn read_snapshot(data_path: &Path) -> Result<(SpectralField, SnapshotMeta)> {
    let side = sidecar_path(data_path);
    let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta: SnapshotMeta = serde_json::from_str(&text)?;
    let grid = Grid::new(meta.n)?;
    let bytes = fs::read(data_path).map_err(|e| Error::io(data_path, e))?;
    if bytes.len() != grid.points() * 8 {
        return Err(Error::LengthMismatch {
            expected: grid.points() * 8,
            got: bytes.len(),
        });
    }
    let samples: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((SpectralField::from_physical(grid, &samples)?, meta))
}
