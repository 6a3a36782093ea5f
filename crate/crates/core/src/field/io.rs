//! Field files: a raw little-endian `f64` array in row-major order plus a
//! JSON sidecar at `<path>.json` holding
//! `{"dim", "shape", "spacing", "origin", "order": "row-major"}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Geometry, GridField};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Sidecar {
    dim: usize,
    shape: Vec<usize>,
    spacing: f64,
    origin: Vec<f64>,
    order: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_field(path: &Path, field: &GridField) -> Result<()> {
    let geom = field.geometry();
    let mut bytes = Vec::with_capacity(8 * geom.len());
    for v in field.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    let meta = Sidecar {
        dim: geom.dim(),
        shape: geom.shape().to_vec(),
        spacing: geom.spacing(),
        origin: geom.origin().to_vec(),
        order: "row-major".into(),
    };
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<GridField> {
    let meta: Sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    if meta.order != "row-major" {
        return Err(Error::Format(format!("unsupported sample order `{}`", meta.order)));
    }
    if meta.dim != meta.shape.len() {
        return Err(Error::Format("sidecar dim disagrees with shape".into()));
    }
    let geom = Geometry::new(meta.shape, meta.spacing, meta.origin)?;
    let bytes = fs::read(path)?;
    if bytes.len() != 8 * geom.len() {
        return Err(Error::Format(format!(
            "{} holds {} bytes, expected {}",
            path.display(),
            bytes.len(),
            8 * geom.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of eight")))
        .collect();
    GridField::new(geom, values)
}
