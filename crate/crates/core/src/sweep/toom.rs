//! Reference east/north updates on 2D lattices.
//!
//! These are independent of the sweep tables: the spin update is the
//! classical majority-of-self-east-north rule, and the naive domain-wall rule
//! flips a face iff both edges at its geometrically north-east corner lie on
//! the wall. On the square lattice both agree with the sweep rules; on the
//! parallelogram lattice the naive rule has persistent walls.

use crate::bits::DenseBits;
use crate::complex::{Chain, Syndrome};
use crate::lattices::Lattice;

/// Per face type: which two boundary edges meet at the north-east corner.
fn northeast_edges(lat: &Lattice) -> Vec<[usize; 2]> {
    assert_eq!(lat.d(), 2, "east/north updates are 2D constructions");
    let motif = &lat.motif;
    let mut out = Vec::new();
    for ty in &motif.cells[2] {
        // NE corner: maximal x+y, ties broken toward larger x
        let mut best = 0usize;
        for (i, w) in ty.verts.iter().enumerate() {
            let key = (w[0] + w[1], w[0]);
            let cur = (ty.verts[best][0] + ty.verts[best][1], ty.verts[best][0]);
            if key > cur {
                best = i;
            }
        }
        let corner = ty.verts[best];
        let mut edges = Vec::new();
        for (ci, child) in ty.children.iter().enumerate() {
            let ety = &motif.cells[1][child.ty as usize];
            let shift = |w: [i64; 3]| {
                [
                    w[0] + child.delta[0] * motif.strides[0],
                    w[1] + child.delta[1] * motif.strides[1],
                    w[2] + child.delta[2] * motif.strides[2],
                ]
            };
            if ety.verts.iter().any(|&w| shift(w) == corner) {
                edges.push(ci);
            }
        }
        assert_eq!(edges.len(), 2, "corner of a 2-cell must meet two edges");
        out.push([edges[0], edges[1]]);
    }
    out
}

/// One synchronous step of the naive east/north rule on a domain wall:
/// flip a face iff both edges at its north-east corner belong to the wall.
pub fn naive_east_north_step(lat: &Lattice, sigma: &Syndrome) -> (Chain, Syndrome) {
    let ne = northeast_edges(lat);
    let bits = sigma.to_dense_bits();
    let mut rho = DenseBits::zeros(lat.complex.ncells(2) as usize);
    for f in 0..lat.complex.ncells(2) {
        let (_, ty) = lat.cell_pos_ty(2, f);
        let bnd = lat.complex.cell_boundary(2, f);
        let [a, b] = ne[ty as usize];
        if bits.get(bnd[a]) && bits.get(bnd[b]) {
            rho.flip(f);
        }
    }
    let mut next = bits;
    for f in rho.iter_ones() {
        for &e in lat.complex.cell_boundary(2, f) {
            next.flip(e);
        }
    }
    (
        Chain::from_dense(&lat.complex, 2, rho),
        Chain::from_dense(&lat.complex, 1, next),
    )
}

/// One synchronous step of the majority spin update on the square lattice:
/// every face takes the sign of (self + east + north).
pub fn square_spin_majority_step(lat: &Lattice, down_spins: &DenseBits) -> DenseBits {
    assert_eq!(lat.spec.family, crate::lattices::LatticeFamily::Square2d);
    let mut next = DenseBits::zeros(down_spins.len());
    for f in 0..lat.complex.ncells(2) {
        let (pos, ty) = lat.cell_pos_ty(2, f);
        let east = lat.cell_index(2, [pos[0] + 1, pos[1], pos[2]], ty);
        let north = lat.cell_index(2, [pos[0], pos[1] + 1, pos[2]], ty);
        let votes = down_spins.get(f) as u8 + down_spins.get(east) as u8 + down_spins.get(north) as u8;
        next.set(f, votes >= 2);
    }
    next
}

/// The stuck configuration of the parallelogram lattice: two stacked faces
/// spanning a right-leaning and a left-leaning row. Its wall is a fixed
/// point of the naive east/north rule.
pub fn parallelogram_stuck_error(lat: &Lattice) -> Chain {
    assert_eq!(
        lat.spec.family,
        crate::lattices::LatticeFamily::Parallelogram2d
    );
    let row_of = |ty: usize| -> i64 {
        lat.motif.cells[2][ty]
            .verts
            .iter()
            .map(|w| w[1])
            .min()
            .unwrap()
    };
    let ty_row0 = (0..lat.motif.ntypes(2)).find(|&t| row_of(t) == 0).unwrap();
    let ty_row1 = (0..lat.motif.ntypes(2)).find(|&t| row_of(t) == 1).unwrap();
    // the row-1 face whose bottom edge is the top edge of the row-0 face at
    // the same unit cell position
    let base = [1i64, 1, 0];
    let f0 = lat.cell_index(2, base, ty_row0 as u16);
    let f1 = lat.cell_index(2, base, ty_row1 as u16);
    let e0 = lat.complex.cell_boundary(2, f0);
    let e1 = lat.complex.cell_boundary(2, f1);
    let shared: Vec<u32> = e0.iter().filter(|e| e1.contains(e)).copied().collect();
    assert_eq!(shared.len(), 1, "stacked faces must share one edge");
    Chain::from_cells(&lat.complex, 2, [f0, f1]).unwrap()
}
