//! Executable checks of the rule's dynamical guarantees on the cover:
//! support, propagation, removal time, the decreasing wall monotone, and the
//! per-component removal bound.

use crate::complex::Chain;
use crate::error::LatticeError;
use crate::lattices::cover::{CausalCover, CoverCell, CoverVertex};
use crate::lattices::tables::JoinCtx;
use crate::lattices::Lattice;
use crate::sweep::{cover_ca, Rule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};

/// Lift a set of quotient k-cells to the cover through the minimal image of
/// their unit-cell positions around the first cell.
pub fn lift_cells(lat: &Lattice, cells: &[u32]) -> Result<Vec<CoverCell>, LatticeError> {
    assert!(!cells.is_empty());
    let k = lat.k() as usize;
    let (base, ty0) = lat.cell_pos_ty(k, cells[0]);
    let mut out = vec![CoverCell { pos: base, ty: ty0 }];
    for &c in &cells[1..] {
        let (pos, ty) = lat.cell_pos_ty(k, c);
        let mut lifted = [0i64; 3];
        for i in 0..3 {
            let dim = lat.dims[i];
            let mut delta = (pos[i] - base[i]).rem_euclid(dim);
            if 2 * delta > dim {
                delta -= dim;
            }
            if dim > 1 && 2 * delta.abs() >= dim {
                return Err(LatticeError::RegionTooLarge);
            }
            lifted[i] = base[i] + delta;
        }
        out.push(CoverCell { pos: lifted, ty });
    }
    Ok(out)
}

/// Evolve the wall of a lifted error in isolation and count the steps until
/// removal; gives up after `max_steps`.
pub fn steps_to_removal(
    lat: &Lattice,
    rule: Rule,
    error_cells: &[CoverCell],
    max_steps: u32,
) -> Option<u32> {
    let k = lat.k() as usize;
    let cells: BTreeSet<CoverCell> = error_cells.iter().copied().collect();
    let mut sigma = cover_ca::boundary_of_set(&lat.motif, k, &cells);
    let slots = &lat.sweep.slots;
    for t in 0..max_steps {
        if sigma.is_empty() {
            return Some(t);
        }
        let (_, next) = cover_ca::step(&lat.motif, slots, rule, k, &sigma);
        sigma = next;
    }
    sigma.is_empty().then_some(max_steps)
}

/// Is the component removed within `T_i = c_D * c_P * Q^i` steps?
pub fn removal_time_oracle(
    lat: &Lattice,
    component: &Chain,
    q: u32,
    level: u32,
) -> Result<bool, LatticeError> {
    if component.is_empty() {
        return Ok(true);
    }
    let lifted = lift_cells(lat, &component.support())?;
    let c = &lat.constants;
    let budget = (c.c_diameter * c.c_path * (q as f64).powi(level as i32)).ceil() as u32;
    Ok(steps_to_removal(lat, Rule::Sweep, &lifted, budget).is_some())
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub rule: Rule,
    pub trials: u64,
    pub nonempty_trials: u64,
    pub violations: Vec<String>,
}

/// Full dynamical check of one evolved wall. Returns violation strings.
fn check_one_evolution(
    lat: &Lattice,
    cover: &CausalCover<'_>,
    rule: Rule,
    error_cells: &BTreeSet<CoverCell>,
    checked_steps: u32,
) -> Vec<String> {
    let mut violations = Vec::new();
    let k = lat.k() as usize;
    let motif = &lat.motif;
    let sigma1 = cover_ca::boundary_of_set(motif, k, error_cells);
    if sigma1.is_empty() {
        return violations;
    }
    let sigma1_cells: Vec<CoverCell> = sigma1.iter().copied().collect();
    let sigma1_verts = cover.cells_vertices(&sigma1_cells, k - 1);

    let mut ctx = JoinCtx::new(cover);
    let inf = match ctx.join_all(&sigma1_verts, false) {
        Ok(v) => v,
        Err(e) => {
            violations.push(format!("no infimum for initial wall: {e}"));
            return violations;
        }
    };
    let sup = match ctx.join_all(&sigma1_verts, true) {
        Ok(v) => v,
        Err(e) => {
            violations.push(format!("no supremum for initial wall: {e}"));
            return violations;
        }
    };
    let t_star = cover
        .longest_causal_path(inf, sup)
        .expect("inf precedes sup");

    let member: HashSet<CoverVertex> = cover.interval(inf, sup).unwrap();
    // strengthened support region: join of the initial wall's futures, cut
    // by the past of the supremum
    let gap = cover.potential(sup) - cover.potential(inf);
    let strengthened: HashSet<CoverVertex> = {
        let down = cover.cone(sup, false, gap);
        let mut up_union: HashSet<CoverVertex> = HashSet::new();
        for &v in &sigma1_verts {
            let cap = cover.potential(sup) - cover.potential(v);
            if cap >= 0 {
                up_union.extend(cover.cone(v, true, cap).into_keys());
            }
        }
        up_union
            .into_iter()
            .filter(|v| down.contains_key(v))
            .collect()
    };

    // multi-source causal distance from the initial wall (both orientations)
    let causal_dist_to_wall = |v: CoverVertex| -> Option<u32> {
        let mut best: Option<u32> = None;
        for &u in &sigma1_verts {
            if let Some(d) = cover.causal_distance(u, v) {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    };

    // longest causal path to the supremum, for every interval vertex, by a
    // reverse sweep in decreasing potential order
    let mut members_sorted: Vec<CoverVertex> = member.iter().copied().collect();
    members_sorted.sort_unstable_by_key(|&v| (std::cmp::Reverse(cover.potential(v)), v));
    let mut to_sup: HashMap<CoverVertex, i64> = HashMap::new();
    to_sup.insert(sup, 0);
    for &v in &members_sorted {
        if v == sup {
            continue;
        }
        let mut best = i64::MIN;
        for info in &motif.slot_edges[v.slot as usize] {
            let dot: i64 = (0..3)
                .map(|i| cover.direction.get(i).copied().unwrap_or(0) * info.embed_delta[i])
                .sum();
            if dot <= 0 {
                continue;
            }
            let w = CoverVertex {
                pos: [
                    v.pos[0] + info.nbr_delta[0],
                    v.pos[1] + info.nbr_delta[1],
                    v.pos[2] + info.nbr_delta[2],
                ],
                slot: info.nbr_slot,
            };
            if let Some(&d) = to_sup.get(&w) {
                best = best.max(d + 1);
            }
        }
        if best > i64::MIN {
            to_sup.insert(v, best);
        }
    }

    let cell_inside = |cell: &CoverCell, set: &HashSet<CoverVertex>| -> bool {
        motif
            .cell_vertices(cell.pos, k - 1, cell.ty)
            .into_iter()
            .all(|(pos, slot)| set.contains(&CoverVertex { pos, slot }))
    };
    let kcell_inside = |cell: &CoverCell, set: &HashSet<CoverVertex>| -> bool {
        motif
            .cell_vertices(cell.pos, k, cell.ty)
            .into_iter()
            .all(|(pos, slot)| set.contains(&CoverVertex { pos, slot }))
    };

    let f_of = |sigma: &BTreeSet<CoverCell>| -> i64 {
        let cells: Vec<CoverCell> = sigma.iter().copied().collect();
        cover
            .cells_vertices(&cells, k - 1)
            .into_iter()
            .map(|v| to_sup.get(&v).copied().unwrap_or(i64::MIN))
            .max()
            .unwrap_or(0)
    };

    let mut sigma = sigma1.clone();
    let mut prev_f = f_of(&sigma);
    let mut removed_at: Option<u32> = None;
    for t in 1..=checked_steps {
        let (flips, next) = cover_ca::step(motif, &lat.sweep.slots, rule, k, &sigma);
        // flips stay inside the causal diamond of the initial wall
        for cell in &flips {
            if !kcell_inside(cell, &member) {
                violations.push(format!("step {t}: flip {cell:?} leaves the causal diamond"));
            }
        }
        sigma = next;
        if sigma.is_empty() {
            removed_at = Some(t);
            break;
        }
        // support: the wall stays within the causal diamond (and within the
        // strengthened region)
        for cell in &sigma {
            if !cell_inside(cell, &member) {
                violations.push(format!("step {t}: wall cell {cell:?} leaves the causal diamond"));
            } else if !cell_inside(cell, &strengthened) {
                violations.push(format!(
                    "step {t}: wall cell {cell:?} leaves the strengthened support region"
                ));
            }
        }
        // propagation: causal distance from the initial wall grows at most
        // one per step
        let cells: Vec<CoverCell> = sigma.iter().copied().collect();
        for v in cover.cells_vertices(&cells, k - 1) {
            match causal_dist_to_wall(v) {
                Some(d) if d <= t => {}
                other => violations.push(format!(
                    "step {t}: wall vertex {v:?} at causal distance {other:?} from the initial wall"
                )),
            }
        }
        // the monotone strictly decreases for the sweep rule
        if rule == Rule::Sweep {
            let f = f_of(&sigma);
            if f >= prev_f {
                violations.push(format!(
                    "step {t}: wall monotone did not decrease ({prev_f} -> {f})"
                ));
            }
            prev_f = f;
        }
    }
    match removed_at {
        Some(t) if t as u32 <= t_star + 1 => {}
        Some(t) => violations.push(format!(
            "wall removed at step {t}, after the removal bound {t_star}"
        )),
        None => violations.push(format!(
            "wall not removed within {checked_steps} steps (bound {t_star})"
        )),
    }
    violations
}

/// Sample random errors in a ball on the cover and verify the dynamical
/// invariants of the noiseless rule on each.
pub fn lemma_suite(
    lat: &Lattice,
    rule: Rule,
    trials: u64,
    p: f64,
    radius: u32,
    seed: u64,
) -> SuiteReport {
    let cover = lat.causal_cover();
    let k = lat.k() as usize;
    let motif = &lat.motif;

    // k-cells of a ball around a fixed base vertex: those whose vertices all
    // lie within graph distance `radius`
    let base = CoverVertex {
        pos: [0, 0, 0],
        slot: 0,
    };
    let mut ball: HashSet<CoverVertex> = HashSet::new();
    let mut frontier = vec![base];
    ball.insert(base);
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in frontier {
            for info in &motif.slot_edges[v.slot as usize] {
                let w = CoverVertex {
                    pos: [
                        v.pos[0] + info.nbr_delta[0],
                        v.pos[1] + info.nbr_delta[1],
                        v.pos[2] + info.nbr_delta[2],
                    ],
                    slot: info.nbr_slot,
                };
                if ball.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut cells: BTreeSet<CoverCell> = BTreeSet::new();
    for &v in &ball {
        for rc in &motif.vstar[k][v.slot as usize] {
            let cell = CoverCell {
                pos: [
                    v.pos[0] + rc.delta[0],
                    v.pos[1] + rc.delta[1],
                    v.pos[2] + rc.delta[2],
                ],
                ty: rc.ty,
            };
            let inside = motif
                .cell_vertices(cell.pos, k, cell.ty)
                .into_iter()
                .all(|(pos, slot)| ball.contains(&CoverVertex { pos, slot }));
            if inside {
                cells.insert(cell);
            }
        }
    }
    let cell_list: Vec<CoverCell> = cells.into_iter().collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut nonempty = 0u64;
    let checked_steps = 16 * (radius.max(1)) * lat.constants.chunk_scale().max(1);
    for trial in 0..trials {
        let error: BTreeSet<CoverCell> = cell_list
            .iter()
            .filter(|_| rng.gen::<f64>() < p)
            .copied()
            .collect();
        if error.is_empty() {
            continue;
        }
        nonempty += 1;
        for v in check_one_evolution(lat, &cover, rule, &error, checked_steps) {
            violations.push(format!("trial {trial}: {v}"));
            if violations.len() > 32 {
                return SuiteReport {
                    rule,
                    trials,
                    nonempty_trials: nonempty,
                    violations,
                };
            }
        }
    }
    SuiteReport {
        rule,
        trials,
        nonempty_trials: nonempty,
        violations,
    }
}
