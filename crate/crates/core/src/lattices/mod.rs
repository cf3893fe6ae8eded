//! Builders for the concrete lattices and their causal structure.

pub mod cover;
pub mod families;
pub mod homology;
pub mod motif;
pub mod tables;

use crate::complex::{CellComplex, Chain};
use crate::error::LatticeError;
use cover::{CausalCover, CoverCell, CoverVertex};
use motif::{Coord, Motif};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use tables::SweepStructure;

pub type SweepDirection = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeFamily {
    Cubic3d,
    Bcc3d,
    Square2d,
    Parallelogram2d,
}

impl LatticeFamily {
    pub fn dimension(self) -> u8 {
        match self {
            LatticeFamily::Cubic3d | LatticeFamily::Bcc3d => 3,
            LatticeFamily::Square2d | LatticeFamily::Parallelogram2d => 2,
        }
    }

    pub fn default_direction(self) -> SweepDirection {
        match self {
            LatticeFamily::Bcc3d => vec![1, 1, 1],
            LatticeFamily::Cubic3d => vec![-1, -1, -1],
            LatticeFamily::Square2d => vec![-1, -1],
            LatticeFamily::Parallelogram2d => vec![-1, -2],
        }
    }

    pub fn motif(self) -> Motif {
        match self {
            LatticeFamily::Cubic3d => families::motif_cubic3d(),
            LatticeFamily::Bcc3d => families::motif_bcc3d(),
            LatticeFamily::Square2d => families::motif_square2d(),
            LatticeFamily::Parallelogram2d => families::motif_parallelogram2d(),
        }
    }
}

impl std::fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LatticeFamily::Cubic3d => "cubic3d",
            LatticeFamily::Bcc3d => "bcc3d",
            LatticeFamily::Square2d => "square2d",
            LatticeFamily::Parallelogram2d => "parallelogram2d",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for LatticeFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cubic3d" => Ok(LatticeFamily::Cubic3d),
            "bcc3d" => Ok(LatticeFamily::Bcc3d),
            "square2d" => Ok(LatticeFamily::Square2d),
            "parallelogram2d" => Ok(LatticeFamily::Parallelogram2d),
            _ => Err(format!("unknown lattice family '{s}'")),
        }
    }
}

/// Which lattice to build. `size` is the linear size: the length of the
/// shortest non-contractible path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub family: LatticeFamily,
    pub size: u32,
    /// Code type: qubits live on k-cells. Defaults to 2.
    #[serde(default = "default_k")]
    pub k: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_direction: Option<SweepDirection>,
}

fn default_k() -> u8 {
    2
}

impl LatticeSpec {
    pub fn new(family: LatticeFamily, size: u32) -> Self {
        LatticeSpec {
            family,
            size,
            k: 2,
            sweep_direction: None,
        }
    }

    pub fn direction(&self) -> SweepDirection {
        self.sweep_direction
            .clone()
            .unwrap_or_else(|| self.family.default_direction())
    }
}

/// Locally-Euclidean constants of a lattice family. The bcc values follow the
/// published analysis; the others are conservative defaults cross-checked by
/// the empirical estimator in `verify`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LatticeConstants {
    pub d: u8,
    pub c_ball: f64,
    pub c_diameter: f64,
    pub c_path: f64,
    pub max_star_k: u32,
}

impl LatticeConstants {
    pub fn chunk_scale(&self) -> u32 {
        (6.0 * self.c_diameter * self.c_path).round() as u32
    }
}

/// A built lattice: the finite complex, the causal tables for the active
/// sweep direction, and homology data for decoding.
pub struct Lattice {
    pub spec: LatticeSpec,
    pub motif: Motif,
    pub dims: Coord,
    pub complex: CellComplex,
    pub sweep: SweepStructure,
    pub constants: LatticeConstants,
    /// Logical parity masks: `masks[j]` detects the j-th homology class.
    pub masks: Vec<Chain>,
    /// Representative non-contractible k-cycles, index-aligned with `masks`.
    pub surfaces: Vec<Chain>,
    /// Parity masks for (k-1)-cells, used to test syndrome validity.
    pub syndrome_masks: Vec<Chain>,
    /// Flattened vertex lists of (k-1)-cells: `stride` vertices per cell.
    pub syndrome_cell_verts: Vec<u32>,
    pub syndrome_cell_verts_stride: usize,
}

impl Lattice {
    pub fn k(&self) -> u8 {
        self.spec.k
    }

    pub fn d(&self) -> usize {
        self.motif.d
    }

    pub fn nslots(&self) -> usize {
        self.motif.slots.len()
    }

    fn lin(&self, pos: Coord) -> u32 {
        let d0 = self.dims[0];
        let d1 = self.dims[1];
        (pos[0] + d0 * (pos[1] + d1 * pos[2])) as u32
    }

    pub fn wrap(&self, pos: Coord) -> Coord {
        [
            pos[0].rem_euclid(self.dims[0]),
            pos[1].rem_euclid(self.dims[1]),
            pos[2].rem_euclid(self.dims[2]),
        ]
    }

    pub fn cell_index(&self, k: usize, pos: Coord, ty: u16) -> u32 {
        let nt = self.motif.ntypes(k) as u32;
        self.lin(self.wrap(pos)) * nt + ty as u32
    }

    pub fn cell_pos_ty(&self, k: usize, index: u32) -> (Coord, u16) {
        let nt = self.motif.ntypes(k) as u32;
        let ty = (index % nt) as u16;
        let lin = (index / nt) as i64;
        let p0 = lin % self.dims[0];
        let rest = lin / self.dims[0];
        let p1 = rest % self.dims[1];
        let p2 = rest / self.dims[1];
        ([p0, p1, p2], ty)
    }

    pub fn vertex_index(&self, v: CoverVertex) -> u32 {
        self.cell_index(0, v.pos, v.slot as u16)
    }

    pub fn project_cell(&self, k: usize, cell: CoverCell) -> u32 {
        self.cell_index(k, cell.pos, cell.ty)
    }

    pub fn causal_cover(&self) -> CausalCover<'_> {
        CausalCover::new(&self.motif, &self.sweep.direction)
            .expect("direction validated at build time")
    }

    /// Lift a set of quotient vertices to the cover through the minimal
    /// image around the first vertex. Rejects sets whose positional extent
    /// reaches half the lattice in any axis.
    pub fn lift_vertices(&self, verts: &[u32]) -> Result<Vec<CoverVertex>, LatticeError> {
        assert!(!verts.is_empty());
        let (base_pos, base_slot) = self.cell_pos_ty(0, verts[0]);
        let mut out = vec![CoverVertex {
            pos: base_pos,
            slot: base_slot as u8,
        }];
        for &v in &verts[1..] {
            let (pos, slot) = self.cell_pos_ty(0, v);
            let mut lifted = [0i64; 3];
            for i in 0..3 {
                let dim = self.dims[i];
                let mut delta = (pos[i] - base_pos[i]).rem_euclid(dim);
                if 2 * delta > dim {
                    delta -= dim;
                }
                if dim > 1 && 2 * delta.abs() >= dim {
                    return Err(LatticeError::RegionTooLarge);
                }
                lifted[i] = base_pos[i] + delta;
            }
            out.push(CoverVertex {
                pos: lifted,
                slot: slot as u8,
            });
        }
        Ok(out)
    }

    /// Graph distance on the 1-skeleton.
    pub fn distance(&self, u: u32, w: u32) -> u32 {
        if u == w {
            return 0;
        }
        *self.distances_from(u, Some(w)).get(w as usize).unwrap()
    }

    /// BFS distances from a source vertex; stops early when `target` found.
    pub fn distances_from(&self, source: u32, target: Option<u32>) -> Vec<u32> {
        let n = self.complex.ncells(0) as usize;
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            if Some(v) == target {
                break;
            }
            let (pos, slot) = self.cell_pos_ty(0, v);
            for info in &self.motif.slot_edges[slot as usize] {
                let npos = [
                    pos[0] + info.nbr_delta[0],
                    pos[1] + info.nbr_delta[1],
                    pos[2] + info.nbr_delta[2],
                ];
                let w = self.cell_index(0, npos, info.nbr_slot as u16);
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Maximum pairwise graph distance of a vertex set.
    pub fn diameter(&self, verts: &[u32]) -> u32 {
        let mut best = 0;
        for (i, &u) in verts.iter().enumerate() {
            let dist = self.distances_from(u, None);
            for &w in &verts[i + 1..] {
                best = best.max(dist[w as usize]);
            }
        }
        best
    }

    /// Minimum causal-path length between two vertices within a local
    /// region; `None` when no causal path exists.
    pub fn causal_distance(&self, u: u32, w: u32) -> Result<Option<u32>, LatticeError> {
        let lifted = self.lift_vertices(&[u, w])?;
        Ok(self.causal_cover().causal_distance(lifted[0], lifted[1]))
    }

    /// Causal diamond of a vertex set, as quotient cell indices per
    /// dimension.
    pub fn causal_diamond(&self, verts: &[u32]) -> Result<Vec<Vec<u32>>, LatticeError> {
        let lifted = self.lift_vertices(verts)?;
        let cover = self.causal_cover();
        let cells = cover.diamond(&lifted)?;
        Ok(cells
            .iter()
            .enumerate()
            .map(|(k, list)| {
                let mut v: Vec<u32> = list.iter().map(|&c| self.project_cell(k, c)).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect())
    }

    /// Logical parity masks for the k-cells (one per homology class).
    pub fn logical_representatives(&self) -> &[Chain] {
        &self.masks
    }

    /// Vertices of a (k-1)-cell (flattened lookup).
    pub fn syndrome_cell_vertices(&self, cell: u32) -> &[u32] {
        let s = self.syndrome_cell_verts_stride;
        &self.syndrome_cell_verts[cell as usize * s..(cell as usize + 1) * s]
    }
}

fn family_constants(family: LatticeFamily, max_star_k: u32) -> LatticeConstants {
    match family {
        // published values for the bcc lattice
        LatticeFamily::Bcc3d => LatticeConstants {
            d: 3,
            c_ball: 24.0,
            c_diameter: 2.0,
            c_path: 3.0,
            max_star_k,
        },
        LatticeFamily::Cubic3d => LatticeConstants {
            d: 3,
            c_ball: 24.0,
            c_diameter: 2.0,
            c_path: 3.0,
            max_star_k,
        },
        LatticeFamily::Square2d => LatticeConstants {
            d: 2,
            c_ball: 16.0,
            c_diameter: 2.0,
            c_path: 2.0,
            max_star_k,
        },
        LatticeFamily::Parallelogram2d => LatticeConstants {
            d: 2,
            c_ball: 16.0,
            c_diameter: 3.0,
            c_path: 4.0,
            max_star_k,
        },
    }
}

/// Build the quotient complex of a motif on the torus with `dims` unit cells
/// per axis.
pub fn build_complex_from_motif(
    motif: &Motif,
    dims: Coord,
) -> Result<CellComplex, crate::error::ComplexError> {
    let d = motif.d;
    let npos: i64 = dims[0] * dims[1] * dims[2];
    let wrap = |pos: Coord| -> Coord {
        [
            pos[0].rem_euclid(dims[0]),
            pos[1].rem_euclid(dims[1]),
            pos[2].rem_euclid(dims[2]),
        ]
    };
    let lin = |pos: Coord| -> u32 { (pos[0] + dims[0] * (pos[1] + dims[1] * pos[2])) as u32 };

    let ncells: Vec<u32> = (0..=d).map(|k| (npos as u32) * motif.ntypes(k) as u32).collect();
    let mut boundary: Vec<Vec<Vec<u32>>> = Vec::with_capacity(d);
    for k in 1..=d {
        let nt = motif.ntypes(k) as u32;
        let nct = motif.ntypes(k - 1) as u32;
        let mut table = vec![Vec::new(); ncells[k] as usize];
        for p2 in 0..dims[2] {
            for p1 in 0..dims[1] {
                for p0 in 0..dims[0] {
                    let pos = [p0, p1, p2];
                    for (ti, ty) in motif.cells[k].iter().enumerate() {
                        let idx = lin(pos) * nt + ti as u32;
                        let faces: Vec<u32> = ty
                            .children
                            .iter()
                            .map(|rc| {
                                let cpos = wrap([
                                    pos[0] + rc.delta[0],
                                    pos[1] + rc.delta[1],
                                    pos[2] + rc.delta[2],
                                ]);
                                lin(cpos) * nct + rc.ty as u32
                            })
                            .collect();
                        table[idx as usize] = faces;
                    }
                }
            }
        }
        boundary.push(table);
    }

    let nslots = motif.slots.len();
    let mut coords = Vec::with_capacity(ncells[0] as usize * d);
    for p2 in 0..dims[2] {
        for p1 in 0..dims[1] {
            for p0 in 0..dims[0] {
                for slot in 0..nslots {
                    let e = motif.vertex_embed([p0, p1, p2], slot as u8);
                    coords.extend_from_slice(&e[..d]);
                }
            }
        }
    }
    let periods: Vec<i64> = (0..d).map(|i| motif.strides[i] * dims[i]).collect();
    CellComplex::new(d as u8, ncells, boundary, coords, periods)
}

/// Build a lattice: complex, sweep tables (validated), constants, homology.
pub fn build(spec: &LatticeSpec) -> Result<Lattice, LatticeError> {
    let d = spec.family.dimension();
    if spec.size < 2 {
        return Err(LatticeError::InvalidSpec(format!(
            "linear size must be >= 2, got {}",
            spec.size
        )));
    }
    if spec.k < 2 || spec.k > d {
        return Err(LatticeError::InvalidSpec(format!(
            "code type k = {} unsupported for a {d}-dimensional lattice (need 2 <= k <= d)",
            spec.k
        )));
    }
    let motif = spec.family.motif();
    let l = spec.size as i64;
    let dims: Coord = if motif.d == 3 { [l, l, l] } else { [l, l, 1] };

    let complex = build_complex_from_motif(&motif, dims)
        .map_err(|e| LatticeError::InvalidSpec(e.to_string()))?;

    let direction = spec.direction();
    let sweep = tables::build_sweep_structure(&motif, dims, &direction, spec.k as usize)?;

    let k = spec.k as usize;
    let max_star_k = (0..motif.slots.len())
        .map(|s| motif.vstar[k][s].len() as u32)
        .max()
        .unwrap();
    let constants = family_constants(spec.family, max_star_k);

    let (masks, surfaces) = homology::logical_masks_and_surfaces(&motif, dims, &complex, k)
        .map_err(|e| LatticeError::Unsupported(e))?;
    let syndrome_masks = if k >= 2 {
        homology::parity_masks(&motif, dims, &complex, k - 1)
            .map_err(LatticeError::Unsupported)?
    } else {
        Vec::new()
    };

    // flattened vertex lists for (k-1)-cells
    let stride = complex.cell_vertices((k - 1) as u8, 0).len();
    let mut syndrome_cell_verts = Vec::with_capacity(complex.ncells((k - 1) as u8) as usize * stride);
    for c in 0..complex.ncells((k - 1) as u8) {
        let vs = complex.cell_vertices((k - 1) as u8, c);
        assert_eq!(vs.len(), stride, "nonuniform syndrome cell vertex counts");
        syndrome_cell_verts.extend_from_slice(&vs);
    }

    Ok(Lattice {
        spec: spec.clone(),
        motif,
        dims,
        complex,
        sweep,
        constants,
        masks,
        surfaces,
        syndrome_masks,
        syndrome_cell_verts,
        syndrome_cell_verts_stride: stride,
    })
}
