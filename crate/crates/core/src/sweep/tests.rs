use super::*;
use crate::complex::Chain;
use crate::lattices::cover::CoverVertex;
use crate::lattices::tables::JoinCtx;
use crate::lattices::{self, LatticeFamily, LatticeSpec};

fn bcc(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap()
}

fn square(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Square2d, l)).unwrap()
}

#[test]
fn empty_wall_has_no_trailing_vertices_and_is_a_fixed_point() {
    let lat = bcc(3);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Sweep)).unwrap();
    let sigma = Chain::empty(&lat.complex, 1);
    for v in 0..lat.complex.ncells(0) {
        assert!(!rs.is_trailing(v, &sigma));
    }
    let (rho, next) = rs.apply(&sigma, 0);
    assert!(rho.is_empty());
    assert!(next.is_empty());
}

#[test]
fn minimal_vertex_of_a_face_wall_is_trailing() {
    let lat = bcc(4);
    let cover = lat.causal_cover();
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Sweep)).unwrap();
    for face in [0u32, 13, 700] {
        let eps = Chain::from_cells(&lat.complex, 2, [face]).unwrap();
        let sigma = lat.complex.boundary(&eps).unwrap();
        // the face vertex with minimal sweep potential
        let verts = lat.complex.cell_vertices(2, face);
        let lifted = lat.lift_vertices(&verts).unwrap();
        let vmin = lifted
            .iter()
            .copied()
            .min_by_key(|&v| cover.potential(v))
            .unwrap();
        let vmin_idx = lat.vertex_index(vmin);
        assert!(rs.is_trailing(vmin_idx, &sigma), "face {face}");
        // a vertex whose wall restriction contains a past cell is not trailing
        let vmax = lifted
            .iter()
            .copied()
            .max_by_key(|&v| cover.potential(v))
            .unwrap();
        assert!(!rs.is_trailing(lat.vertex_index(vmax), &sigma));
        // non-trailing vertices flip nothing under the sweep rule
        assert!(rs.flip_set(lat.vertex_index(vmax), &sigma).is_empty());
    }
}

#[test]
fn east_north_wall_at_a_square_corner_flips_the_matching_face() {
    let lat = square(6);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let f = lat.cell_index(2, [2, 2, 0], 0);
    let eps = Chain::from_cells(&lat.complex, 2, [f]).unwrap();
    let sigma = lat.complex.boundary(&eps).unwrap();
    // the north-east corner of the face sees its east and north edges
    let ne = lat.cell_index(0, [3, 3, 0], 0);
    assert!(rs.is_trailing(ne, &sigma));
    let flips = rs.flip_set(ne, &sigma);
    assert_eq!(flips.support(), vec![f]);
    // and it is the only vertex that flips anything
    let (rho, next) = rs.apply(&sigma, 0);
    assert_eq!(rho.support(), vec![f]);
    assert!(next.is_empty());
}

#[test]
fn trailing_vertices_get_identical_flips_from_both_rules() {
    // residual minimization reaches zero exactly on the admissible patterns,
    // so the greedy choice coincides with the exact sweep choice
    for lat in [bcc(2), lattices::build(&LatticeSpec::new(LatticeFamily::Cubic3d, 2)).unwrap()] {
        for st in &lat.sweep.slots {
            for &pat in &st.admissible {
                let exact = st.exact_choice[pat as usize];
                assert!(exact.is_some());
                let greedy = st.greedy_choice[pat as usize];
                // the greedy minimizer also reaches residual zero there
                assert_eq!(
                    cover_ca::choose_flip(st, Rule::Sweep, pat, false),
                    cover_ca::choose_flip(st, Rule::Greedy, pat, false),
                );
                let exact_phi = &st.phis[exact.unwrap() as usize];
                let greedy_phi = &st.phis[greedy as usize];
                // both candidates cancel the pattern completely
                assert_eq!(local_pattern(&lat, st, exact_phi), pat);
                assert_eq!(local_pattern(&lat, st, greedy_phi), pat);
            }
        }
    }
}

fn local_pattern(
    lat: &lattices::Lattice,
    st: &lattices::tables::SlotTables,
    phi: &[crate::lattices::motif::RelCell],
) -> u64 {
    let mut pattern = 0u64;
    for rc in phi {
        let ty = &lat.motif.cells[lat.k() as usize][rc.ty as usize];
        for child in &ty.children {
            let abs = crate::lattices::motif::RelCell {
                delta: [
                    rc.delta[0] + child.delta[0],
                    rc.delta[1] + child.delta[1],
                    rc.delta[2] + child.delta[2],
                ],
                ty: child.ty,
            };
            if let Some(j) = st.fsc.iter().position(|&c| c == abs) {
                pattern ^= 1 << j;
            }
        }
    }
    pattern
}

#[test]
fn single_face_wall_is_removed_within_the_causal_bound() {
    let lat = bcc(4);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Sweep)).unwrap();
    let cover = lat.causal_cover();
    for face in [0u32, 321, 999] {
        let eps = Chain::from_cells(&lat.complex, 2, [face]).unwrap();
        let mut sigma = lat.complex.boundary(&eps).unwrap();
        // removal bound: the longest causal path between the wall's extrema
        let verts = lat.complex.cell_vertices(2, face);
        let lifted = lat.lift_vertices(&verts).unwrap();
        let mut ctx = JoinCtx::new(&cover);
        let inf = ctx.join_all(&lifted, false).unwrap();
        let sup = ctx.join_all(&lifted, true).unwrap();
        let t_star = cover.longest_causal_path(inf, sup).unwrap();
        let mut total = Chain::empty(&lat.complex, 2);
        let mut steps = 0;
        while !sigma.is_empty() {
            let (rho, next) = rs.apply(&sigma, steps);
            total = total.xor(&rho);
            sigma = next;
            steps += 1;
            assert!(steps as u32 <= t_star, "face {face} not removed in time");
        }
        assert_eq!(total, eps, "correction must equal the error");
    }
}

#[test]
fn fixed_points_are_idempotent() {
    let lat = bcc(3);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Sweep)).unwrap();
    // an invalid single-bit wall has no trailing vertex with an exact match,
    // so the sweep rule leaves it alone
    let sigma = Chain::from_cells(&lat.complex, 1, [5u32]).unwrap();
    let (rho, next) = rs.apply(&sigma, 0);
    if rho.is_empty() {
        assert_eq!(next, sigma);
    }
}

#[test]
fn greedy_matches_the_majority_vote_on_every_local_spin_pattern() {
    // exhaustive over all 512 spin patterns of a 3x3 block
    let lat = square(6);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let nf = lat.complex.ncells(2) as usize;
    for pattern in 0u32..512 {
        let mut spins = crate::bits::DenseBits::zeros(nf);
        for bit in 0..9 {
            if pattern >> bit & 1 == 1 {
                let f = lat.cell_index(2, [(bit % 3) as i64 + 1, (bit / 3) as i64 + 1, 0], 0);
                spins.set(f, true);
            }
        }
        // majority-vote oracle
        let next = toom::square_spin_majority_step(&lat, &spins);
        let mut toom_flips = next.clone();
        toom_flips.xor_assign(&spins);
        // greedy rule on the domain wall
        let eps = Chain::from_dense(&lat.complex, 2, spins);
        let sigma = lat.complex.boundary(&eps).unwrap();
        let (rho, _) = rs.apply(&sigma, 0);
        assert_eq!(
            rho.support(),
            toom_flips.iter_ones().collect::<Vec<_>>(),
            "pattern {pattern:#b}"
        );
        // the geometric east/north reference agrees as well
        let (naive, _) = toom::naive_east_north_step(&lat, &sigma);
        assert_eq!(naive, rho);
    }
}

#[test]
fn parallelogram_wall_stuck_under_east_north_is_removed_by_greedy() {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Parallelogram2d, 6)).unwrap();
    let eps = toom::parallelogram_stuck_error(&lat);
    let sigma = lat.complex.boundary(&eps).unwrap();
    assert!(!sigma.is_empty());
    // fixed point of the naive east/north rule
    let (naive_flips, naive_next) = toom::naive_east_north_step(&lat, &sigma);
    assert!(naive_flips.is_empty());
    assert_eq!(naive_next, sigma);
    // removed by the greedy sweep rule in finitely many steps
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let doc = trace(&rs, &sigma, 100);
    assert!(doc.removed, "wall weight left: {}", doc.final_wall_weight);
    assert!(doc.steps.len() <= 50);
}

#[test]
fn direction_schedules_apply_per_step() {
    let lat = bcc(3);
    let fixed = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let mut cfg = SweepConfig::new(Rule::Greedy);
    cfg.direction_schedule =
        DirectionSchedule::Cycle(vec![vec![1, 1, 1], vec![-1, -1, -1]]);
    let cycling = Ruleset::new(&lat, cfg).unwrap();
    let eps = Chain::from_cells(&lat.complex, 2, [7u32]).unwrap();
    let sigma = lat.complex.boundary(&eps).unwrap();
    // step 0 uses the default direction in both rulesets
    let (a, _) = fixed.apply(&sigma, 0);
    let (b, _) = cycling.apply(&sigma, 0);
    assert_eq!(a, b);
    // and the cycling schedule still removes simple walls
    let doc = trace(&cycling, &sigma, 64);
    assert!(doc.removed);
}

#[test]
fn apply_is_deterministic() {
    let lat = bcc(4);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let eps = Chain::from_cells(&lat.complex, 2, [0u32, 40, 41, 900]).unwrap();
    let sigma = lat.complex.boundary(&eps).unwrap();
    let (r1, s1) = rs.apply(&sigma, 0);
    let (r2, s2) = rs.apply(&sigma, 0);
    assert_eq!(r1, r2);
    assert_eq!(s1, s2);
}

#[test]
fn cover_and_quotient_engines_agree_on_local_walls() {
    let lat = bcc(6);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Sweep)).unwrap();
    let faces = [5u32, 6, 7];
    let eps = Chain::from_cells(&lat.complex, 2, faces).unwrap();
    let mut sigma = lat.complex.boundary(&eps).unwrap();
    let lifted = crate::verify::lift_cells(&lat, &faces).unwrap();
    let cells: std::collections::BTreeSet<_> = lifted.into_iter().collect();
    let mut cover_sigma = cover_ca::boundary_of_set(&lat.motif, 2, &cells);
    for step in 0..10 {
        assert_eq!(sigma.weight(), cover_sigma.len(), "step {step}");
        if sigma.is_empty() {
            break;
        }
        let (_, nq) = rs.apply(&sigma, step);
        let (_, nc) = cover_ca::step(&lat.motif, &lat.sweep.slots, Rule::Sweep, 2, &cover_sigma);
        sigma = nq;
        cover_sigma = nc;
    }
}
