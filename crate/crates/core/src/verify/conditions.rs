//! Causal-lattice condition checker: unique infima/suprema on sampled local
//! vertex sets, exhaustive flip-set existence, and empirical estimates of
//! the locally-Euclidean constants.

use crate::lattices::cover::CoverVertex;
use crate::lattices::tables::JoinCtx;
use crate::lattices::Lattice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, Serialize)]
pub struct ConditionsReport {
    pub family: String,
    pub size: u32,
    /// Unique infimum/supremum existence on sampled local vertex sets.
    pub infsup_sets_checked: u64,
    /// Exhaustive flip-set existence per slot: (admissible patterns, covered).
    pub flip_existence: Vec<(usize, usize)>,
    /// Worst observed ratio diam(diamond)/diam(set).
    pub observed_c_diameter: f64,
    /// Worst observed ratio (longest causal path)/distance.
    pub observed_c_path: f64,
    /// Worst observed ball-cover constant |U| * (r/R)^d.
    pub observed_c_ball: f64,
    pub stored_c_diameter: f64,
    pub stored_c_path: f64,
    pub violations: Vec<String>,
}

impl ConditionsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn ball(lat: &Lattice, base: CoverVertex, radius: u32) -> Vec<CoverVertex> {
    let motif = &lat.motif;
    let mut seen = HashSet::new();
    let mut frontier = vec![base];
    seen.insert(base);
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
                if seen.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<CoverVertex> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

fn cover_distance(lat: &Lattice, from: CoverVertex, targets: &[CoverVertex]) -> Vec<u32> {
    // BFS on the cover; stops as soon as every target is reached
    let motif = &lat.motif;
    let mut dist: std::collections::HashMap<CoverVertex, u32> = Default::default();
    let mut queue = std::collections::VecDeque::new();
    dist.insert(from, 0);
    queue.push_back(from);
    let target_set: HashSet<CoverVertex> = targets.iter().copied().collect();
    let mut remaining = target_set.len() - target_set.contains(&from) as usize;
    let maxd = targets
        .iter()
        .map(|t| {
            (0..3)
                .map(|i| (t.pos[i] - from.pos[i]).unsigned_abs() as u32)
                .sum::<u32>()
        })
        .max()
        .unwrap_or(0)
        + 8;
    'bfs: while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv >= maxd || remaining == 0 {
            break;
        }
        for info in &motif.slot_edges[v.slot as usize] {
            let w = CoverVertex {
                pos: [
                    v.pos[0] + info.nbr_delta[0],
                    v.pos[1] + info.nbr_delta[1],
                    v.pos[2] + info.nbr_delta[2],
                ],
                slot: info.nbr_slot,
            };
            if !dist.contains_key(&w) {
                dist.insert(w, dv + 1);
                queue.push_back(w);
                if target_set.contains(&w) {
                    remaining -= 1;
                    if remaining == 0 {
                        break 'bfs;
                    }
                }
            }
        }
    }
    targets
        .iter()
        .map(|t| dist.get(t).copied().unwrap_or(u32::MAX))
        .collect()
}

/// Run the checks with a sampling budget. Exhaustive parts (flip-set
/// existence) always run in full.
pub fn check_causal_conditions(lat: &Lattice, samples: u64, seed: u64) -> ConditionsReport {
    let cover = lat.causal_cover();
    let mut ctx = JoinCtx::new(&cover);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();

    if let Err(e) = lat.complex.validate() {
        violations.push(format!("structural validation failed: {e}"));
    }

    // flip-set existence, exhaustively per slot (recorded at build time)
    let flip_existence: Vec<(usize, usize)> = lat
        .sweep
        .slots
        .iter()
        .enumerate()
        .map(|(si, st)| {
            let total = st.admissible.len();
            let covered = st
                .admissible
                .iter()
                .filter(|&&p| st.exact_choice[p as usize].is_some())
                .count();
            if covered != total {
                violations.push(format!(
                    "slot {si}: only {covered}/{total} admissible restrictions have flip sets"
                ));
            }
            (total, covered)
        })
        .collect();

    // unique infima/suprema on sampled small vertex sets; cross-check the
    // binary-join fold against the direct extremum search
    let nslots = lat.nslots() as u64;
    let mut infsup_checked = 0u64;
    let mut observed_c_diameter: f64 = 1.0;
    for i in 0..samples {
        let size = 2 + (rng.gen::<u64>() % 3) as usize;
        let mut verts: Vec<CoverVertex> = (0..size)
            .map(|_| CoverVertex {
                pos: [
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                ],
                slot: (rng.gen::<u64>() % nslots) as u8,
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() < 2 {
            continue;
        }
        infsup_checked += 1;
        let sup_direct = cover.supremum(&verts);
        let inf_direct = cover.infimum(&verts);
        match (&sup_direct, &inf_direct) {
            (Ok(sup), Ok(inf)) => {
                match (ctx.join_all(&verts, true), ctx.join_all(&verts, false)) {
                    (Ok(s2), Ok(i2)) => {
                        if s2 != *sup || i2 != *inf {
                            violations.push(format!(
                                "sample {i}: join fold disagrees with direct extremum on {verts:?}"
                            ));
                        }
                    }
                    _ => violations.push(format!(
                        "sample {i}: join fold failed where direct extremum succeeded"
                    )),
                }
            }
            _ => violations.push(format!(
                "sample {i}: no unique infimum/supremum for {verts:?}"
            )),
        }
        // diameter ratio via explicit distance computations
        if let (Ok(inf), Ok(sup)) = (inf_direct, sup_direct) {
            let dv = {
                let mut best = 0u32;
                for (ai, &a) in verts.iter().enumerate() {
                    let d = cover_distance(lat, a, &verts[ai + 1..]);
                    for x in d {
                        if x != u32::MAX {
                            best = best.max(x);
                        }
                    }
                }
                best
            };
            if dv > 0 {
                let interval = cover.interval(inf, sup).unwrap();
                let ivec: Vec<CoverVertex> = interval.iter().copied().collect();
                let mut dd = 0u32;
                for (ai, &a) in ivec.iter().enumerate() {
                    let d = cover_distance(lat, a, &ivec[ai + 1..]);
                    for x in d {
                        if x != u32::MAX {
                            dd = dd.max(x);
                        }
                    }
                }
                observed_c_diameter = observed_c_diameter.max(dd as f64 / dv as f64);
            }
        }
    }

    // longest-causal-path/distance ratio on sampled comparable pairs
    let mut observed_c_path: f64 = 1.0;
    for _ in 0..samples {
        let u = CoverVertex {
            pos: [0, 0, 0],
            slot: (rng.gen::<u64>() % nslots) as u8,
        };
        let w = CoverVertex {
            pos: [
                rng.gen_range(0..3),
                rng.gen_range(0..3),
                rng.gen_range(0..3),
            ],
            slot: (rng.gen::<u64>() % nslots) as u8,
        };
        if u == w || !ctx.precedes(u, w) {
            continue;
        }
        if let Some(longest) = cover.longest_causal_path(u, w) {
            let d = cover_distance(lat, u, &[w])[0];
            if d > 0 && d != u32::MAX {
                observed_c_path = observed_c_path.max(longest as f64 / d as f64);
            }
        }
    }

    // greedy ball covers for the volume constant
    let mut observed_c_ball: f64 = 1.0;
    let base = CoverVertex {
        pos: [0, 0, 0],
        slot: 0,
    };
    for (big_r, small_r) in [(4u32, 2u32), (6, 2), (6, 3)] {
        let big = ball(lat, base, big_r);
        let mut uncovered: HashSet<CoverVertex> = big.iter().copied().collect();
        let mut count = 0u32;
        // greedy: repeatedly cover from an uncovered vertex
        let mut sorted: Vec<CoverVertex> = big.clone();
        sorted.sort_unstable();
        for v in sorted {
            if !uncovered.contains(&v) {
                continue;
            }
            count += 1;
            for w in ball(lat, v, small_r) {
                uncovered.remove(&w);
            }
        }
        let ratio = count as f64 * (small_r as f64 / big_r as f64).powi(lat.d() as i32);
        observed_c_ball = observed_c_ball.max(ratio);
    }

    ConditionsReport {
        family: lat.spec.family.to_string(),
        size: lat.spec.size,
        infsup_sets_checked: infsup_checked,
        flip_existence,
        observed_c_diameter,
        observed_c_path,
        observed_c_ball,
        stored_c_diameter: lat.constants.c_diameter,
        stored_c_path: lat.constants.c_path,
        violations,
    }
}
