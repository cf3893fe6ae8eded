//! F2 chain-complex arithmetic over finite cell complexes.
//!
//! A [`CellComplex`] stores, for each dimension `k`, a dense list of k-cells
//! together with their boundary incidences (the (k-1)-cells each k-cell
//! contains) and the transposed coboundary incidences. Cells are referenced
//! by dense integer indices per dimension; geometry (integer vertex
//! coordinates on the covering space, with torus periods) is carried
//! separately so chain arithmetic is pure index-set manipulation.

mod chain;
pub mod json;

pub use chain::{Chain, ChainRepr, Syndrome};

use crate::error::ComplexError;
use std::sync::atomic::{AtomicU64, Ordering};

static NEXT_COMPLEX_ID: AtomicU64 = AtomicU64::new(1);

/// A finite cell complex with boundary/coboundary incidence tables.
///
/// Immutable after construction and safely shareable across threads.
#[derive(Debug)]
pub struct CellComplex {
    id: u64,
    dimension: u8,
    /// `boundary[k][c]` lists the (k-1)-cells contained in k-cell `c`
    /// (k ranges over 1..=d; index 0 of the outer vec corresponds to k = 1).
    boundary: Vec<Vec<Vec<u32>>>,
    /// `coboundary[k][c]` lists the (k+1)-cells containing k-cell `c`.
    coboundary: Vec<Vec<Vec<u32>>>,
    /// Number of cells per dimension, 0..=d.
    ncells: Vec<u32>,
    /// Flat integer vertex coordinates (minimal lift), `dimension` per vertex.
    vertex_coords: Vec<i64>,
    /// Embedded coordinate period per axis (torus wraparound metadata).
    periods: Vec<i64>,
}

impl CellComplex {
    /// Assemble a complex from raw incidence data. The coboundary tables are
    /// derived by transposition.
    pub fn new(
        dimension: u8,
        ncells: Vec<u32>,
        boundary: Vec<Vec<Vec<u32>>>,
        vertex_coords: Vec<i64>,
        periods: Vec<i64>,
    ) -> Result<Self, ComplexError> {
        if ncells.len() != dimension as usize + 1 {
            return Err(ComplexError::Schema(format!(
                "expected {} cell counts, got {}",
                dimension + 1,
                ncells.len()
            )));
        }
        if boundary.len() != dimension as usize {
            return Err(ComplexError::Schema(format!(
                "expected {} boundary tables, got {}",
                dimension,
                boundary.len()
            )));
        }
        if vertex_coords.len() != ncells[0] as usize * dimension as usize {
            return Err(ComplexError::Schema(
                "vertex coordinate array has wrong length".into(),
            ));
        }
        for (ki, table) in boundary.iter().enumerate() {
            let k = ki + 1;
            if table.len() != ncells[k] as usize {
                return Err(ComplexError::Schema(format!(
                    "boundary table for dimension {k} has wrong length"
                )));
            }
            for (c, faces) in table.iter().enumerate() {
                let mut seen = faces.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != faces.len() {
                    return Err(ComplexError::Schema(format!(
                        "duplicate incidence entry in boundary of {k}-cell {c}"
                    )));
                }
                for &f in faces {
                    if f >= ncells[k - 1] {
                        return Err(ComplexError::InvalidCell {
                            dim: (k - 1) as u8,
                            index: f,
                            count: ncells[k - 1],
                        });
                    }
                }
            }
        }

        let mut coboundary: Vec<Vec<Vec<u32>>> = Vec::with_capacity(dimension as usize);
        for (ki, table) in boundary.iter().enumerate() {
            let k = ki + 1;
            let mut co = vec![Vec::new(); ncells[k - 1] as usize];
            for (c, faces) in table.iter().enumerate() {
                for &f in faces {
                    co[f as usize].push(c as u32);
                }
            }
            coboundary.push(co);
        }

        Ok(CellComplex {
            id: NEXT_COMPLEX_ID.fetch_add(1, Ordering::Relaxed),
            dimension,
            boundary,
            coboundary,
            ncells,
            vertex_coords,
            periods,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dimension(&self) -> u8 {
        self.dimension
    }

    pub fn ncells(&self, k: u8) -> u32 {
        self.ncells[k as usize]
    }

    pub fn periods(&self) -> &[i64] {
        &self.periods
    }

    /// The (k-1)-cells contained in k-cell `c`.
    pub fn cell_boundary(&self, k: u8, c: u32) -> &[u32] {
        &self.boundary[k as usize - 1][c as usize]
    }

    /// The (k+1)-cells containing k-cell `c`.
    pub fn cell_coboundary(&self, k: u8, c: u32) -> &[u32] {
        &self.coboundary[k as usize][c as usize]
    }

    /// Embedded integer coordinates of a vertex (length = dimension).
    pub fn vertex_coords(&self, v: u32) -> &[i64] {
        let d = self.dimension as usize;
        &self.vertex_coords[v as usize * d..(v as usize + 1) * d]
    }

    /// Vertices of a k-cell, collected by walking boundary tables down to
    /// dimension 0 (set union, so quotient multi-cells are handled).
    pub fn cell_vertices(&self, k: u8, c: u32) -> Vec<u32> {
        let mut cur = vec![c];
        for kk in (1..=k).rev() {
            let mut next: Vec<u32> = cur
                .iter()
                .flat_map(|&x| self.cell_boundary(kk, x).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur
    }

    /// F2 boundary of a chain: XOR of the boundary incidences of every cell
    /// in the support.
    pub fn boundary(&self, chain: &Chain) -> Result<Chain, ComplexError> {
        self.check_chain(chain)?;
        let k = chain.dim();
        if k == 0 {
            return Err(ComplexError::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut out = crate::bits::DenseBits::zeros(self.ncells[k as usize - 1] as usize);
        for c in chain.iter() {
            for &f in self.cell_boundary(k, c) {
                out.flip(f);
            }
        }
        Ok(Chain::from_dense(self, k - 1, out))
    }

    /// F2 sum (symmetric difference of supports).
    pub fn add(&self, a: &Chain, b: &Chain) -> Result<Chain, ComplexError> {
        self.check_chain(a)?;
        self.check_chain(b)?;
        if a.dim() != b.dim() {
            return Err(ComplexError::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(a.xor(b))
    }

    /// The n-star of a k-cell: all n-cells containing it (n >= k).
    pub fn star(&self, k: u8, cell: u32, n: u8) -> Result<Vec<u32>, ComplexError> {
        if cell >= self.ncells(k) {
            return Err(ComplexError::InvalidCell {
                dim: k,
                index: cell,
                count: self.ncells(k),
            });
        }
        if n < k {
            return Err(ComplexError::DimensionMismatch { expected: k, got: n });
        }
        let mut cur = vec![cell];
        for kk in k..n {
            let mut next: Vec<u32> = cur
                .iter()
                .flat_map(|&x| self.cell_coboundary(kk, x).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        Ok(cur)
    }

    fn check_chain(&self, chain: &Chain) -> Result<(), ComplexError> {
        if chain.complex_id() != self.id {
            return Err(ComplexError::ComplexMismatch);
        }
        Ok(())
    }

    /// Euler characteristic over F2 cell counts (alternating sum).
    pub fn euler_characteristic(&self) -> i64 {
        self.ncells
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Structural validation: mutually-transposed incidences, no duplicate
    /// entries, and the chain-complex identity (boundary of boundary vanishes
    /// for every basis cell).
    pub fn validate(&self) -> Result<(), ComplexError> {
        for k in 1..=self.dimension {
            // transpose consistency
            let mut counted = 0usize;
            for c in 0..self.ncells(k) {
                for &f in self.cell_boundary(k, c) {
                    if !self.cell_coboundary(k - 1, f).contains(&c) {
                        return Err(ComplexError::Schema(format!(
                            "coboundary of {}-cell {} is missing {}-cell {}",
                            k - 1,
                            f,
                            k,
                            c
                        )));
                    }
                    counted += 1;
                }
            }
            let co_total: usize = (0..self.ncells(k - 1))
                .map(|f| self.cell_coboundary(k - 1, f).len())
                .sum();
            if counted != co_total {
                return Err(ComplexError::Schema(format!(
                    "incidence count mismatch between dimensions {} and {}",
                    k - 1,
                    k
                )));
            }
        }
        for k in 2..=self.dimension {
            for c in 0..self.ncells(k) {
                let mut acc = std::collections::HashMap::new();
                for &f in self.cell_boundary(k, c) {
                    for &e in self.cell_boundary(k - 1, f) {
                        *acc.entry(e).or_insert(0u32) += 1;
                    }
                }
                if acc.values().any(|&m| m % 2 != 0) {
                    return Err(ComplexError::Schema(format!(
                        "boundary of boundary of {k}-cell {c} is nonzero"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
