use super::*;
use crate::lattices::{self, LatticeFamily, LatticeSpec};
use proptest::prelude::*;

fn bcc(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap()
}

fn cubic(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Cubic3d, l)).unwrap()
}

#[test]
fn boundary_of_empty_is_empty() {
    let lat = cubic(3);
    let c = Chain::empty(&lat.complex, 2);
    assert!(lat.complex.boundary(&c).unwrap().is_empty());
}

#[test]
fn boundary_of_square_face_is_four_edges() {
    let lat = cubic(3);
    let f = Chain::from_cells(&lat.complex, 2, [0u32]).unwrap();
    let b = lat.complex.boundary(&f).unwrap();
    assert_eq!(b.weight(), 4);
    // each bounding edge contains the face in its coboundary
    for e in b.iter() {
        assert!(lat.complex.cell_coboundary(1, e).contains(&0));
    }
}

#[test]
fn boundary_squared_vanishes_on_random_chains() {
    let lat = bcc(3);
    let nf = lat.complex.ncells(2);
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..1000 {
        let cells: Vec<u32> = (0..20).map(|_| (next() % nf as u64) as u32).collect();
        let c = Chain::from_cells(&lat.complex, 2, cells).unwrap();
        let b = lat.complex.boundary(&c).unwrap();
        let bb = lat.complex.boundary(&b).unwrap();
        assert!(bb.is_empty());
    }
}

#[test]
fn add_is_symmetric_difference() {
    let lat = cubic(3);
    let a = Chain::from_cells(&lat.complex, 2, [1u32, 2]).unwrap();
    let b = Chain::from_cells(&lat.complex, 2, [2u32, 3]).unwrap();
    let sum = lat.complex.add(&a, &b).unwrap();
    assert_eq!(sum.support(), vec![1, 3]);
    // self-inverse and identity
    assert!(lat.complex.add(&a, &a).unwrap().is_empty());
    let empty = Chain::empty(&lat.complex, 2);
    assert_eq!(lat.complex.add(&a, &empty).unwrap(), a);
}

#[test]
fn add_rejects_dimension_mismatch() {
    let lat = cubic(3);
    let a = Chain::from_cells(&lat.complex, 2, [0u32]).unwrap();
    let b = Chain::from_cells(&lat.complex, 1, [0u32]).unwrap();
    assert!(matches!(
        lat.complex.add(&a, &b),
        Err(ComplexError::DimensionMismatch { .. })
    ));
}

#[test]
fn chains_from_different_complexes_do_not_mix() {
    let la = cubic(3);
    let lb = cubic(3);
    let a = Chain::from_cells(&la.complex, 2, [0u32]).unwrap();
    let b = Chain::from_cells(&lb.complex, 2, [0u32]).unwrap();
    assert!(matches!(
        la.complex.add(&a, &b),
        Err(ComplexError::ComplexMismatch)
    ));
}

#[test]
fn star_of_cell_at_own_dimension_is_itself() {
    let lat = bcc(2);
    assert_eq!(lat.complex.star(2, 7, 2).unwrap(), vec![7]);
}

#[test]
fn star_of_bcc_vertex_at_faces_has_36_elements() {
    let lat = bcc(3);
    for v in 0..lat.complex.ncells(0) {
        assert_eq!(lat.complex.star(0, v, 2).unwrap().len(), 36);
    }
}

#[test]
fn star_of_cubic_vertex_at_edges_has_6_elements() {
    let lat = cubic(4);
    assert_eq!(lat.complex.star(0, 0, 1).unwrap().len(), 6);
}

#[test]
fn incidence_counts_are_conserved() {
    let lat = bcc(2);
    for k in 1..=3u8 {
        let down: usize = (0..lat.complex.ncells(k))
            .map(|c| lat.complex.cell_boundary(k, c).len())
            .sum();
        let up: usize = (0..lat.complex.ncells(k - 1))
            .map(|c| lat.complex.cell_coboundary(k - 1, c).len())
            .sum();
        assert_eq!(down, up);
    }
}

#[test]
fn euler_characteristic_of_torus_complexes_is_zero() {
    for l in 2..=4 {
        assert_eq!(bcc(l).complex.euler_characteristic(), 0);
        assert_eq!(cubic(l).complex.euler_characteristic(), 0);
    }
    let sq = lattices::build(&LatticeSpec::new(LatticeFamily::Square2d, 4)).unwrap();
    assert_eq!(sq.complex.euler_characteristic(), 0);
    let par = lattices::build(&LatticeSpec::new(LatticeFamily::Parallelogram2d, 4)).unwrap();
    assert_eq!(par.complex.euler_characteristic(), 0);
}

#[test]
fn json_roundtrip_preserves_the_complex() {
    let lat = cubic(2);
    let doc = json::export(&lat.complex, Some(lat.spec.clone()));
    let text = serde_json::to_string(&doc).unwrap();
    let parsed: json::ComplexDoc = serde_json::from_str(&text).unwrap();
    let rebuilt = json::import(&parsed).unwrap();
    assert_eq!(rebuilt.ncells(2), lat.complex.ncells(2));
    for c in 0..rebuilt.ncells(3) {
        assert_eq!(
            rebuilt.cell_boundary(3, c),
            lat.complex.cell_boundary(3, c)
        );
    }
}

#[test]
fn import_rejects_corrupted_incidences() {
    let lat = cubic(2);
    let mut doc = json::export(&lat.complex, None);
    // duplicate entry in one boundary list
    let first = doc.boundary[1][0][0];
    doc.boundary[1][0].push(first);
    assert!(json::import(&doc).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_boundary_squared_is_zero(cells in proptest::collection::vec(0u32..192, 0..24)) {
        let lat = cubic(4);
        let c = Chain::from_cells(&lat.complex, 2, cells).unwrap();
        let bb = lat.complex.boundary(&lat.complex.boundary(&c).unwrap()).unwrap();
        prop_assert!(bb.is_empty());
    }

    #[test]
    fn prop_xor_associates_and_commutes(
        a in proptest::collection::vec(0u32..192, 0..16),
        b in proptest::collection::vec(0u32..192, 0..16),
        c in proptest::collection::vec(0u32..192, 0..16),
    ) {
        let lat = cubic(4);
        let ca = Chain::from_cells(&lat.complex, 2, a).unwrap();
        let cb = Chain::from_cells(&lat.complex, 2, b).unwrap();
        let cc = Chain::from_cells(&lat.complex, 2, c).unwrap();
        prop_assert_eq!(ca.xor(&cb), cb.xor(&ca));
        prop_assert_eq!(ca.xor(&cb).xor(&cc), ca.xor(&cb.xor(&cc)));
    }

    #[test]
    fn prop_sparse_and_dense_representations_agree(
        cells in proptest::collection::vec(0u32..192, 0..64),
    ) {
        let lat = cubic(4);
        let sparse = Chain::from_cells(&lat.complex, 2, cells.clone()).unwrap();
        let dense = Chain::from_dense(&lat.complex, 2, {
            let mut bits = crate::bits::DenseBits::zeros(192);
            let mut sorted = cells;
            sorted.sort_unstable();
            let mut i = 0;
            while i < sorted.len() {
                let mut j = i;
                while j < sorted.len() && sorted[j] == sorted[i] { j += 1; }
                if (j - i) % 2 == 1 { bits.set(sorted[i], true); }
                i = j;
            }
            bits
        });
        prop_assert_eq!(sparse.support(), dense.support());
        prop_assert_eq!(&sparse, &dense);
    }
}
