//! File formats: lattices and product bodies as JSON documents.
//!
//! A lattice document carries `dim`, a row-major `basis` array whose columns
//! are the generating vectors, and an optional `radius`. Bodies are stored
//! exactly as the `ProductBody` struct serializes. Finite f64 values survive
//! a write/read round trip bit-exactly.

use crate::density::ProductBody;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk form of a lattice (plus an optional associated radius).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub dim: usize,
    /// Row-major dim x dim matrix; column j is the j-th generator.
    pub basis: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl LatticeDoc {
    pub fn from_lattice(lat: &Lattice, radius: Option<f64>) -> Self {
        let n = lat.dim();
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(lat.basis()[(i, j)]);
            }
        }
        LatticeDoc {
            dim: n,
            basis,
            radius,
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        if self.basis.len() != self.dim * self.dim {
            return Err(Error::invalid(format!(
                "basis has {} entries, expected dim^2 = {}",
                self.basis.len(),
                self.dim * self.dim
            )));
        }
        Lattice::from_basis(DMatrix::from_row_slice(self.dim, self.dim, &self.basis))
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn malformed(path: &Path, err: impl std::fmt::Display) -> Error {
    Error::MalformedFile {
        path: path.display().to_string(),
        msg: err.to_string(),
    }
}

pub fn read_lattice_doc(path: impl AsRef<Path>) -> Result<LatticeDoc> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| malformed(path, e))
}

pub fn write_lattice_doc(path: impl AsRef<Path>, doc: &LatticeDoc) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(doc).map_err(|e| malformed(path, e))?;
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Read a lattice file and construct the lattice.
pub fn read_lattice(path: impl AsRef<Path>) -> Result<(Lattice, Option<f64>)> {
    let doc = read_lattice_doc(&path)?;
    Ok((doc.to_lattice()?, doc.radius))
}

pub fn read_body(path: impl AsRef<Path>) -> Result<ProductBody> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut body: ProductBody = serde_json::from_str(&text).map_err(|e| malformed(path, e))?;
    if body.translates.is_empty() {
        body.translates = vec![vec![0.0; body.ambient_dim()]];
    }
    body.validate()?;
    Ok(body)
}

pub fn write_body(path: impl AsRef<Path>, body: &ProductBody) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(body).map_err(|e| malformed(path, e))?;
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hex_lattice;

    #[test]
    fn lattice_doc_round_trip_is_bit_exact() {
        let hex = hex_lattice();
        let doc = LatticeDoc::from_lattice(&hex, Some(2.0 / 3.0f64.sqrt()));
        let dir = std::env::temp_dir().join("latcov-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("hex.json");
        write_lattice_doc(&path, &doc).unwrap();
        let back = read_lattice_doc(&path).unwrap();
        assert_eq!(doc, back);
        let lat = back.to_lattice().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(lat.basis()[(i, j)].to_bits(), hex.basis()[(i, j)].to_bits());
            }
        }
    }

    #[test]
    fn body_round_trip_and_defaults() {
        let dir = std::env::temp_dir().join("latcov-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("body.json");
        std::fs::write(&path, r#"{"blocks": [[2, 0.5]]}"#).unwrap();
        let body = read_body(&path).unwrap();
        assert_eq!(body.scale, 1.0);
        assert_eq!(body.translates, vec![vec![0.0, 0.0]]);

        write_body(&path, &body).unwrap();
        let again = read_body(&path).unwrap();
        assert_eq!(body, again);
    }

    #[test]
    fn malformed_body_is_rejected() {
        let dir = std::env::temp_dir().join("latcov-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            read_body(&path),
            Err(Error::MalformedFile { .. })
        ));
    }
}
