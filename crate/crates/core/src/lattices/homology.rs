//! Logical parity masks and representative cycles on torus lattices.
//!
//! A homology class of k-cycles is detected by counting crossings with a
//! transverse (d-k)-dimensional affine line or point, and represented by the
//! k-cells separating two slabs of d-cells across a transverse cut. Both
//! constructions use exact integer geometry: embedded coordinates are scaled
//! by a fixed even factor and test points get odd offsets, so strict
//! comparisons never tie.

use super::motif::{Coord, Motif};
use crate::complex::{CellComplex, Chain};

const SCALE: i64 = 8;

fn lin(dims: Coord, pos: Coord) -> u32 {
    (pos[0] + dims[0] * (pos[1] + dims[1] * pos[2])) as u32
}

fn wrap(dims: Coord, pos: Coord) -> Coord {
    [
        pos[0].rem_euclid(dims[0]),
        pos[1].rem_euclid(dims[1]),
        pos[2].rem_euclid(dims[2]),
    ]
}

/// Parity masks for m-cells, one per homology class. Classes are indexed by
/// the m-subsets of axes in lexicographic order; a mask counts the m-cells
/// crossed by the affine subspace that fixes the subset's coordinates at a
/// generic point.
pub fn parity_masks(
    motif: &Motif,
    dims: Coord,
    complex: &CellComplex,
    m: usize,
) -> Result<Vec<Chain>, String> {
    let d = motif.d;
    let subsets = axis_subsets(d, m);
    let mut out = Vec::with_capacity(subsets.len());
    for s in subsets {
        out.push(mask_for_subset(motif, dims, complex, m, &s)?);
    }
    Ok(out)
}

/// Logical parity masks together with index-aligned representative
/// non-contractible k-cycles.
pub fn logical_masks_and_surfaces(
    motif: &Motif,
    dims: Coord,
    complex: &CellComplex,
    k: usize,
) -> Result<(Vec<Chain>, Vec<Chain>), String> {
    let d = motif.d;
    if k == d {
        // one class: the fundamental class; any single d-cell detects it
        let mask = Chain::from_cells(complex, k as u8, [0u32]).unwrap();
        let all: Vec<u32> = (0..complex.ncells(k as u8)).collect();
        let surface = Chain::from_cells(complex, k as u8, all).unwrap();
        return Ok((vec![mask], vec![surface]));
    }
    if k != d - 1 {
        return Err(format!(
            "logical representatives implemented for k = d and k = d-1 only (got k={k}, d={d})"
        ));
    }
    // classes indexed by the transverse axis g; the detecting subspace fixes
    // the complementary axes
    let mut masks = Vec::with_capacity(d);
    let mut surfaces = Vec::with_capacity(d);
    for g in 0..d {
        let subset: Vec<usize> = (0..d).filter(|&i| i != g).collect();
        masks.push(mask_for_subset(motif, dims, complex, k, &subset)?);
        surfaces.push(cut_surface(motif, dims, complex, g)?);
    }
    Ok((masks, surfaces))
}

fn axis_subsets(d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for bits in 0..(1usize << d) {
        if bits.count_ones() as usize == m {
            out.push((0..d).filter(|&i| bits >> i & 1 == 1).collect());
        }
    }
    out
}

/// Offsets tried for the generic test point, in order.
const POINT_OFFSETS: [[i64; 2]; 4] = [[1, 2], [3, 2], [1, 6], [5, 2]];

fn mask_for_subset(
    motif: &Motif,
    dims: Coord,
    complex: &CellComplex,
    m: usize,
    subset: &[usize],
) -> Result<Chain, String> {
    'offsets: for offs in POINT_OFFSETS {
        let xi: Vec<i64> = subset.iter().enumerate().map(|(j, _)| offs[j.min(1)]).collect();
        let mut cells = Vec::new();
        for pi2 in 0..dims[2] {
            for pi1 in 0..dims[1] {
                for pi0 in 0..dims[0] {
                    let pos = [pi0, pi1, pi2];
                    for (ti, ty) in motif.cells[m].iter().enumerate() {
                        let pts: Vec<Vec<i64>> = ty
                            .verts
                            .iter()
                            .map(|w| {
                                subset
                                    .iter()
                                    .map(|&ax| {
                                        SCALE * (pos[ax] * motif.strides[ax] + w[ax])
                                    })
                                    .collect()
                            })
                            .collect();
                        let periods: Vec<i64> = subset
                            .iter()
                            .map(|&ax| SCALE * motif.strides[ax] * dims[ax])
                            .collect();
                        match crossed(&pts, &xi, &periods) {
                            Ok(true) => {
                                cells.push(lin(dims, pos) * motif.ntypes(m) as u32 + ti as u32)
                            }
                            Ok(false) => {}
                            Err(()) => continue 'offsets,
                        }
                    }
                }
            }
        }
        return Chain::from_cells(complex, m as u8, cells).map_err(|e| e.to_string());
    }
    Err("no generic test point found for parity mask".into())
}

/// Does the projected cell strictly contain the test point (for some torus
/// image)? `Err(())` signals a degenerate configuration: retry with another
/// test point.
fn crossed(pts: &[Vec<i64>], xi: &[i64], periods: &[i64]) -> Result<bool, ()> {
    let dim = xi.len();
    // candidate torus shifts per axis: place the cell's minimum near xi
    let mut shifted: Vec<Vec<i64>> = pts.to_vec();
    for ax in 0..dim {
        let m = pts.iter().map(|p| p[ax]).min().unwrap();
        let p = periods[ax];
        let base = (m - xi[ax]).div_euclid(p);
        for v in shifted.iter_mut() {
            v[ax] -= base * p;
        }
    }
    let mut hit = false;
    let shifts: Vec<Vec<i64>> = match dim {
        1 => vec![vec![-periods[0]], vec![0], vec![periods[0]]],
        2 => {
            let mut s = Vec::new();
            for a in [-periods[0], 0, periods[0]] {
                for b in [-periods[1], 0, periods[1]] {
                    s.push(vec![a, b]);
                }
            }
            s
        }
        _ => return Err(()),
    };
    for shift in shifts {
        let moved: Vec<Vec<i64>> = shifted
            .iter()
            .map(|p| (0..dim).map(|i| p[i] + shift[i]).collect())
            .collect();
        match contains_point(&moved, xi)? {
            true => {
                if hit {
                    // the same cell cannot contain the point twice
                    return Err(());
                }
                hit = true;
            }
            false => {}
        }
    }
    Ok(hit)
}

fn contains_point(pts: &[Vec<i64>], xi: &[i64]) -> Result<bool, ()> {
    match xi.len() {
        1 => {
            let lo = pts.iter().map(|p| p[0]).min().unwrap();
            let hi = pts.iter().map(|p| p[0]).max().unwrap();
            if xi[0] == lo || xi[0] == hi {
                return Err(());
            }
            Ok(lo < xi[0] && xi[0] < hi)
        }
        2 => {
            let mut unique: Vec<(i64, i64)> = pts.iter().map(|p| (p[0], p[1])).collect();
            unique.sort_unstable();
            unique.dedup();
            if unique.len() < 3 {
                // degenerate projection: a segment or point cannot strictly
                // contain a generic point
                return Ok(false);
            }
            let hull = convex_hull(&unique);
            if hull.len() < 3 {
                return Ok(false);
            }
            let p = (xi[0], xi[1]);
            let mut sign = 0i64;
            for i in 0..hull.len() {
                let a = hull[i];
                let b = hull[(i + 1) % hull.len()];
                let cr = cross(a, b, p);
                if cr == 0 {
                    return Err(());
                }
                let s = cr.signum();
                if sign == 0 {
                    sign = s;
                } else if sign != s {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(()),
    }
}

fn cross(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> i64 {
    (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0)
}

/// Andrew's monotone chain hull over a handful of integer points.
fn convex_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut sorted = pts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 3 {
        return sorted;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &sorted {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The (d-1)-cells separating d-cells on opposite sides of a transverse cut
/// along axis `g`: a representative of the class wrapping the complementary
/// axes.
fn cut_surface(
    motif: &Motif,
    dims: Coord,
    complex: &CellComplex,
    g: usize,
) -> Result<Chain, String> {
    let d = motif.d;
    let period = motif.strides[g] * dims[g];
    // centroid comparisons scaled by SCALE * nverts; the cut sits at
    // period/2 plus an odd sub-cell offset so ties are impossible
    let mut coface_positions: Vec<Vec<i64>> = vec![Vec::new(); complex.ncells((d - 1) as u8) as usize];
    let ntf = motif.ntypes(d - 1) as u32;
    for p2 in 0..dims[2] {
        for p1 in 0..dims[1] {
            for p0 in 0..dims[0] {
                let pos = [p0, p1, p2];
                for ty in motif.cells[d].iter() {
                    let nv = ty.verts.len() as i64;
                    let centroid_g: i64 = SCALE
                        * ty.verts
                            .iter()
                            .map(|w| pos[g] * motif.strides[g] + w[g])
                            .sum::<i64>()
                        / 1;
                    let _ = nv;
                    for child in &ty.children {
                        let cpos = wrap(
                            dims,
                            [
                                pos[0] + child.delta[0],
                                pos[1] + child.delta[1],
                                pos[2] + child.delta[2],
                            ],
                        );
                        let idx = lin(dims, cpos) * ntf + child.ty as u32;
                        coface_positions[idx as usize].push(centroid_g);
                    }
                }
            }
        }
    }
    let nv = motif.cells[d][0].verts.len() as i64;
    for ty in motif.cells[d].iter() {
        if ty.verts.len() as i64 != nv {
            return Err("mixed top-cell vertex counts unsupported".into());
        }
    }
    // scaled units: positions are SCALE * sum(coords); full period and cut in
    // the same units
    let period_s = SCALE * period * nv;
    let cut = SCALE * period * nv / 2 + 1;
    let mut cells = Vec::new();
    for (idx, entries) in coface_positions.iter().enumerate() {
        if entries.len() != 2 {
            return Err(format!(
                "cell {idx} of dimension {} has {} cofaces (expected 2)",
                d - 1,
                entries.len()
            ));
        }
        let a = entries[0];
        let mut delta = (entries[1] - a).rem_euclid(period_s);
        if 2 * delta > period_s {
            delta -= period_s;
        }
        let crossings = floor_div(a + delta - cut, period_s) - floor_div(a - cut, period_s);
        if crossings.rem_euclid(2) == 1 {
            cells.push(idx as u32);
        }
    }
    Chain::from_cells(complex, (d - 1) as u8, cells).map_err(|e| e.to_string())
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}
