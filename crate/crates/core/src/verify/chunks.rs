//! Recursive chunk decomposition of error configurations and connected
//! components, used as analysis oracles.
//!
//! A level-0 chunk is a single error cell; a level-n chunk is a disjoint
//! union of two level-(n-1) chunks whose vertex diameter is at most Q^n/2.
//! The level-n error E_n collects the cells of all level-n chunks, giving
//! the nested sequence E_0 ⊇ E_1 ⊇ ... ⊇ E_m and the disjoint parts
//! F_i = E_i \ E_{i+1}.
//!
//! The exact decomposition enumerates chunk supports as bitmasks, which is
//! exponential in the error weight; it is an oracle for small inputs, not a
//! production path.

use crate::complex::Chain;
use crate::error::VerifyError;
use crate::lattices::Lattice;
use std::collections::HashMap;

pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Debug)]
pub struct ChunkDecomposition {
    pub q: u32,
    /// Nested level supports E_0 ⊇ E_1 ⊇ ... (cell indices, sorted).
    pub levels: Vec<Vec<u32>>,
    /// Disjoint parts F_i = E_i \ E_{i+1}; their union is the error.
    pub parts: Vec<Vec<u32>>,
    /// All level-n chunks, as index lists into the error support.
    pub chunks: Vec<Vec<Vec<u32>>>,
}

/// Pairwise vertex-distance data between the cells of a support.
pub struct CellMetric {
    pub support: Vec<u32>,
    /// max vertex-pair distance between cells i and j (i == j gives the
    /// intra-cell diameter)
    pub dmax: Vec<Vec<u32>>,
    /// min vertex-pair distance
    pub dmin: Vec<Vec<u32>>,
}

pub fn cell_metric(lat: &Lattice, support: &[u32]) -> CellMetric {
    let k = lat.k();
    let vert_sets: Vec<Vec<u32>> = support
        .iter()
        .map(|&c| lat.complex.cell_vertices(k, c))
        .collect();
    let mut all_verts: Vec<u32> = vert_sets.iter().flatten().copied().collect();
    all_verts.sort_unstable();
    all_verts.dedup();
    let mut dist_from: HashMap<u32, Vec<u32>> = HashMap::new();
    for &v in &all_verts {
        dist_from.insert(v, lat.distances_from(v, None));
    }
    let n = support.len();
    let mut dmax = vec![vec![0u32; n]; n];
    let mut dmin = vec![vec![u32::MAX; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut hi = 0;
            let mut lo = u32::MAX;
            for &u in &vert_sets[i] {
                let d = &dist_from[&u];
                for &v in &vert_sets[j] {
                    hi = hi.max(d[v as usize]);
                    lo = lo.min(d[v as usize]);
                }
            }
            dmax[i][j] = hi;
            dmax[j][i] = hi;
            dmin[i][j] = lo;
            dmin[j][i] = lo;
        }
    }
    CellMetric {
        support: support.to_vec(),
        dmax,
        dmin,
    }
}

/// Exact decomposition by recursive pairing over all subsets.
pub fn decompose_chunks(
    lat: &Lattice,
    error: &Chain,
    q: u32,
) -> Result<ChunkDecomposition, VerifyError> {
    let support = error.support();
    let n = support.len();
    if n > EXACT_LIMIT {
        return Err(VerifyError::SizeLimit {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    let metric = cell_metric(lat, &support);

    // vertex diameter per subset, built incrementally over the lowest bit
    let nmask = 1usize << n;
    let mut diam = vec![0u32; nmask];
    for mask in 1..nmask {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut d = if rest == 0 {
            metric.dmax[low][low]
        } else {
            diam[rest].max(metric.dmax[low][low])
        };
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            d = d.max(metric.dmax[low][j]);
            m &= m - 1;
        }
        diam[mask] = d;
    }

    // is_chunk per level; only masks of size 2^level can be chunks
    let mut chunk_masks: Vec<Vec<usize>> = vec![(0..n).map(|i| 1usize << i).collect()];
    let mut is_chunk_prev: Vec<bool> = vec![false; nmask];
    for i in 0..n {
        is_chunk_prev[1 << i] = true;
    }
    let mut level = 0u32;
    loop {
        level += 1;
        let size = 1usize << level;
        if size > n {
            break;
        }
        let budget = (q as i128).pow(level);
        let mut found = Vec::new();
        let mut is_chunk = vec![false; nmask];
        for mask in 1..nmask {
            if mask.count_ones() as usize != size {
                continue;
            }
            if 2 * diam[mask] as i128 > budget {
                continue;
            }
            // bipartitions into two previous-level chunks; fix the lowest
            // bit on one side to enumerate each split once
            let low = 1usize << mask.trailing_zeros();
            let rest = mask ^ low;
            let mut sub = rest;
            let mut ok = false;
            loop {
                let half = sub | low;
                if half.count_ones() as usize == size / 2
                    && is_chunk_prev[half]
                    && is_chunk_prev[mask ^ half]
                {
                    ok = true;
                    break;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            if ok {
                is_chunk[mask] = true;
                found.push(mask);
            }
        }
        if found.is_empty() {
            break;
        }
        chunk_masks.push(found);
        is_chunk_prev = is_chunk;
    }

    // level supports and disjoint parts
    let mut levels: Vec<Vec<u32>> = Vec::new();
    for masks in &chunk_masks {
        let mut cells: Vec<u32> = masks
            .iter()
            .flat_map(|&m| {
                (0..n)
                    .filter(move |&i| m >> i & 1 == 1)
                    .map(|i| support[i])
            })
            .collect();
        cells.sort_unstable();
        cells.dedup();
        levels.push(cells);
    }
    let mut parts = Vec::new();
    for i in 0..levels.len() {
        let next: &[u32] = if i + 1 < levels.len() { &levels[i + 1] } else { &[] };
        parts.push(
            levels[i]
                .iter()
                .filter(|c| !next.contains(c))
                .copied()
                .collect(),
        );
    }
    let chunks = chunk_masks
        .iter()
        .map(|masks| {
            masks
                .iter()
                .map(|&m| {
                    (0..n)
                        .filter(|&i| m >> i & 1 == 1)
                        .map(|i| support[i])
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(ChunkDecomposition {
        q,
        levels,
        parts,
        chunks,
    })
}

/// Partition cells into maximal sets that cannot be split into parts
/// separated by more than `l` (single-linkage at vertex distance `l`).
pub fn connected_components(lat: &Lattice, cells: &[u32], l: u32) -> Vec<Vec<u32>> {
    if cells.is_empty() {
        return Vec::new();
    }
    let metric = cell_metric(lat, cells);
    let n = cells.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if metric.dmin[i][j] <= l {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<u32>> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(cells[i]);
    }
    let mut out: Vec<Vec<u32>> = groups.into_values().collect();
    for g in out.iter_mut() {
        g.sort_unstable();
    }
    out.sort();
    out
}
