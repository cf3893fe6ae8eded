//! JSON export/import of a complex description (cell counts, incidence
//! lists, coordinates) for golden-file testing and CLI pipelines.

use super::CellComplex;
use crate::error::ComplexError;
use crate::lattices::LatticeSpec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema_version: u32,
    /// Present when the complex was generated by a lattice builder; allows
    /// downstream commands to rebuild the full causal structure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    pub dimension: u8,
    pub cell_counts: Vec<u32>,
    pub periods: Vec<i64>,
    /// boundary[k-1][c] = (k-1)-cells of k-cell c, for k = 1..=d.
    pub boundary: Vec<Vec<Vec<u32>>>,
    /// Flat vertex coordinates, `dimension` entries per vertex.
    pub coordinates: Vec<i64>,
}

pub fn export(complex: &CellComplex, lattice: Option<LatticeSpec>) -> ComplexDoc {
    let d = complex.dimension();
    let mut boundary = Vec::with_capacity(d as usize);
    for k in 1..=d {
        let table: Vec<Vec<u32>> = (0..complex.ncells(k))
            .map(|c| complex.cell_boundary(k, c).to_vec())
            .collect();
        boundary.push(table);
    }
    let nv = complex.ncells(0);
    let mut coordinates = Vec::with_capacity(nv as usize * d as usize);
    for v in 0..nv {
        coordinates.extend_from_slice(complex.vertex_coords(v));
    }
    ComplexDoc {
        schema_version: SCHEMA_VERSION,
        lattice,
        dimension: d,
        cell_counts: (0..=d).map(|k| complex.ncells(k)).collect(),
        periods: complex.periods().to_vec(),
        boundary,
        coordinates,
    }
}

/// Rebuild a validated complex from its JSON description.
pub fn import(doc: &ComplexDoc) -> Result<CellComplex, ComplexError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ComplexError::Schema(format!(
            "unsupported schema version {}",
            doc.schema_version
        )));
    }
    let complex = CellComplex::new(
        doc.dimension,
        doc.cell_counts.clone(),
        doc.boundary.clone(),
        doc.coordinates.clone(),
        doc.periods.clone(),
    )?;
    complex.validate()?;
    Ok(complex)
}
