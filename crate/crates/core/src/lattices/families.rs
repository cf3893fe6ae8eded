//! Motif constructors for the shipped lattice families.

use super::motif::{ChildRule, Coord, Motif};

/// Cubical complex on the 3-torus. Default sweep direction -(1,1,1); spins
/// on faces give the three-dimensional analogue of the east/north rule.
pub fn motif_cubic3d() -> Motif {
    let mut cube: Vec<Coord> = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                cube.push([x, y, z]);
            }
        }
    }
    Motif::build(3, [1, 1, 1], vec![[0, 0, 0]], vec![cube], ChildRule::AxisBox)
}

/// Square lattice on the 2-torus (the classical Toom setting).
pub fn motif_square2d() -> Motif {
    let square: Vec<Coord> = vec![[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]];
    Motif::build(2, [1, 1, 1], vec![[0, 0, 0]], vec![square], ChildRule::AxisBox)
}

/// Body-centered cubic triangulation of the 3-torus: vertices at the even
/// sublattice (corners) and the odd sublattice (centers), twelve tetrahedra
/// per spacing-2 cube, each spanned by two adjacent corners and two adjacent
/// centers.
pub fn motif_bcc3d() -> Motif {
    let e = |axis: usize| -> Coord {
        let mut v = [0i64; 3];
        v[axis] = 1;
        v
    };
    let mut tets: Vec<Vec<Coord>> = Vec::new();
    for a in 0..3usize {
        for b in (0..3usize).filter(|&b| b != a) {
            let g = 3 - a - b;
            for u in [0i64, -1] {
                // corner edge along a at the origin cell, center edge along b
                let q = [
                    -(e(b)[0]) + u * e(g)[0],
                    -(e(b)[1]) + u * e(g)[1],
                    -(e(b)[2]) + u * e(g)[2],
                ];
                let c0 = [0, 0, 0];
                let c1 = [2 * e(a)[0], 2 * e(a)[1], 2 * e(a)[2]];
                let z0 = [2 * q[0] + 1, 2 * q[1] + 1, 2 * q[2] + 1];
                let z1 = [z0[0] + 2 * e(b)[0], z0[1] + 2 * e(b)[1], z0[2] + 2 * e(b)[2]];
                tets.push(vec![c0, c1, z0, z1]);
            }
        }
    }
    // canonicalize anchors to the origin cell
    let strides = [2, 2, 2];
    let tets: Vec<Vec<Coord>> = tets
        .into_iter()
        .map(|t| {
            let mut anchor = [0i64; 3];
            for i in 0..3 {
                anchor[i] = t.iter().map(|v| v[i]).min().unwrap().div_euclid(strides[i]);
            }
            t.into_iter()
                .map(|v| {
                    [
                        v[0] - 2 * anchor[0],
                        v[1] - 2 * anchor[1],
                        v[2] - 2 * anchor[2],
                    ]
                })
                .collect()
        })
        .collect();
    Motif::build(
        3,
        strides,
        vec![[0, 0, 0], [1, 1, 1]],
        tets,
        ChildRule::Simplex,
    )
}

/// Row slant pattern of the parallelogram lattice: right-leaning, then
/// left-leaning, then square rows. Three prototiles.
pub const PARALLELOGRAM_SLANTS: [i64; 3] = [1, -1, 0];

/// 2D lattice built of three parallelogram prototiles, arranged in rows with
/// the slant pattern [`PARALLELOGRAM_SLANTS`]. The naive east/north update
/// has persistent domain walls here; the greedy sweep rule does not.
pub fn motif_parallelogram2d() -> Motif {
    // cumulative shears: c_0 = 0, c_1 = 1, c_2 = 0, c_3 = 0 (periodic)
    let quads: Vec<Vec<Coord>> = vec![
        // row 0, slant +1: B1 B2 T2 T1 in cyclic order
        vec![[0, 0, 0], [1, 0, 0], [2, 1, 0], [1, 1, 0]],
        // row 1, slant -1
        vec![[1, 1, 0], [2, 1, 0], [1, 2, 0], [0, 2, 0]],
        // row 2, square
        vec![[0, 2, 0], [1, 2, 0], [1, 3, 0], [0, 3, 0]],
    ];
    Motif::build(
        2,
        [1, 3, 1],
        vec![[0, 0, 0], [1, 1, 0], [0, 2, 0]],
        quads,
        ChildRule::Polygon,
    )
}
