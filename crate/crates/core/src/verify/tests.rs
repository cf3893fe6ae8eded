use super::*;
use crate::complex::Chain;
use crate::lattices::{self, LatticeFamily, LatticeSpec};
use crate::sweep::Rule;

fn bcc(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap()
}

fn cubic(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Cubic3d, l)).unwrap()
}

#[test]
fn singleton_error_decomposes_at_level_zero() {
    let lat = cubic(8);
    let eps = Chain::from_cells(&lat.complex, 2, [11u32]).unwrap();
    let dec = decompose_chunks(&lat, &eps, 36).unwrap();
    assert_eq!(dec.levels.len(), 1);
    assert_eq!(dec.parts[0], vec![11]);
}

#[test]
fn nearby_pair_forms_a_level_one_chunk() {
    let lat = cubic(8);
    // two faces of the same cube: vertex diameter well below Q/2
    let c0 = lat.complex.cell_boundary(3, 0).to_vec();
    let eps = Chain::from_cells(&lat.complex, 2, [c0[0], c0[1]]).unwrap();
    let dec = decompose_chunks(&lat, &eps, 36).unwrap();
    assert_eq!(dec.levels.len(), 2);
    assert!(dec.parts[0].is_empty(), "no cells left at level 0");
    assert_eq!(dec.parts[1].len(), 2);
}

#[test]
fn level_supports_are_nested_and_parts_partition() {
    let lat = cubic(16);
    let mut state = 0xfeedu64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let nf = lat.complex.ncells(2) as u64;
    for _ in 0..20 {
        let cells: Vec<u32> = (0..10).map(|_| (next() % nf) as u32).collect();
        let eps = Chain::from_cells(&lat.complex, 2, cells).unwrap();
        if eps.is_empty() {
            continue;
        }
        let dec = decompose_chunks(&lat, &eps, 36).unwrap();
        for w in dec.levels.windows(2) {
            for c in &w[1] {
                assert!(w[0].contains(c), "levels not nested");
            }
        }
        let mut all: Vec<u32> = dec.parts.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, eps.support(), "parts do not partition the error");
    }
}

#[test]
fn oversized_inputs_hit_the_exact_mode_limit() {
    let lat = cubic(16);
    let cells: Vec<u32> = (0..21u32).map(|i| i * 31).collect();
    let eps = Chain::from_cells(&lat.complex, 2, cells).unwrap();
    assert!(decompose_chunks(&lat, &eps, 36).is_err());
}

#[test]
fn component_splitting_respects_the_distance_threshold() {
    let lat = cubic(12);
    assert!(connected_components(&lat, &[], 3).is_empty());
    // two parallel faces separated along x by j steps
    let ty = lat.cell_pos_ty(2, 0).1;
    let a = lat.cell_index(2, [0, 0, 0], ty);
    let b = lat.cell_index(2, [4, 0, 0], ty);
    let metric = cell_metric(&lat, &[a, b]);
    let gap = metric.dmin[0][1];
    assert!(gap > 0);
    let two = connected_components(&lat, &[a, b], gap - 1);
    assert_eq!(two.len(), 2, "distance {gap} with threshold {}", gap - 1);
    let one = connected_components(&lat, &[a, b], gap);
    assert_eq!(one.len(), 1);
}

#[test]
fn empty_component_is_vacuously_removed() {
    let lat = bcc(4);
    let empty = Chain::empty(&lat.complex, 2);
    assert!(removal_time_oracle(&lat, &empty, 36, 0).unwrap());
}

#[test]
fn single_cells_are_removed_within_the_level_zero_budget() {
    let lat = bcc(4);
    // T_0 = c_D * c_P = 6
    for face in [0u32, 100, 1000, 1535] {
        let m = Chain::from_cells(&lat.complex, 2, [face]).unwrap();
        assert!(removal_time_oracle(&lat, &m, 36, 0).unwrap(), "face {face}");
        let lifted = lift_cells(&lat, &[face]).unwrap();
        let steps = steps_to_removal(&lat, Rule::Sweep, &lifted, 6).unwrap();
        assert!(steps <= 6);
    }
}

#[test]
fn random_level_zero_components_respect_the_removal_bound() {
    // small chunk scale so that spread-out errors stay at level zero
    let lat = bcc(8);
    let q = 6;
    let mut state = 0x600du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let nf = lat.complex.ncells(2) as u64;
    let mut checked = 0;
    for _ in 0..150 {
        let cells: Vec<u32> = (0..4).map(|_| (next() % nf) as u32).collect();
        let eps = Chain::from_cells(&lat.complex, 2, cells).unwrap();
        if eps.is_empty() {
            continue;
        }
        let dec = decompose_chunks(&lat, &eps, q).unwrap();
        for m in connected_components(&lat, &dec.parts[0], 1) {
            let chain = Chain::from_cells(&lat.complex, 2, m).unwrap();
            match removal_time_oracle(&lat, &chain, q, 0) {
                Ok(ok) => {
                    assert!(ok, "level-0 component exceeded its removal bound");
                    checked += 1;
                }
                Err(_) => {} // component spans too much of this small torus
            }
        }
    }
    assert!(checked > 50, "only {checked} components checked");
}

#[test]
fn lemma_suite_passes_on_small_samples() {
    let lat = bcc(4);
    let report = lemma_suite(&lat, Rule::Sweep, 60, 0.03, 2, 0x11);
    assert!(report.nonempty_trials > 10);
    assert!(
        report.violations.is_empty(),
        "violations: {:?}",
        report.violations
    );
}

#[test]
fn conditions_hold_on_the_shipped_lattices() {
    for lat in [bcc(4), cubic(4)] {
        let report = check_causal_conditions(&lat, 60, 0x22);
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(report.observed_c_diameter <= lat.constants.c_diameter + 1e-9);
        assert!(report.observed_c_path <= lat.constants.c_path + 1e-9);
        for (total, covered) in &report.flip_existence {
            assert_eq!(total, covered);
        }
    }
}

#[test]
fn corrupted_incidences_are_reported_with_a_witness() {
    // a complex whose boundary-of-boundary does not vanish
    let complex = crate::complex::CellComplex::new(
        2,
        vec![2, 1, 1],
        vec![vec![vec![0, 1]], vec![vec![0]]],
        vec![0, 0, 1, 0],
        vec![4, 4],
    )
    .unwrap();
    let err = complex.validate().unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("boundary"), "unexpected witness: {msg}");
}
