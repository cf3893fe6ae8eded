//! Per-vertex flip tables for the sweep rules.
//!
//! The candidate search is table-driven: the size of the future k-star of a
//! vertex is bounded by a lattice constant, so the exhaustive subset search
//! happens once per vertex slot at build time. Tables are computed on the
//! cover at a representative vertex of each slot and apply to every vertex by
//! translation invariance.

use super::cover::{CausalCover, CoverVertex};
use super::motif::{Coord, Motif, RelCell};
use crate::error::LatticeError;
use std::collections::HashMap;

/// Flip tables for one vertex slot, in slot-relative encoding.
#[derive(Clone, Debug)]
pub struct SlotTables {
    /// Future (k-1)-cells at the vertex, in canonical order; syndrome
    /// restrictions are encoded as bit patterns over this list.
    pub fsc: Vec<RelCell>,
    /// Remaining (k-1)-cells at the vertex (any syndrome bit here means the
    /// vertex is not trailing).
    pub rest: Vec<RelCell>,
    /// Future k-cells at the vertex.
    pub future_kcells: Vec<RelCell>,
    /// Pool of flip sets referenced by the tables. Entry 0 is empty.
    pub phis: Vec<Vec<RelCell>>,
    /// Per pattern: the unique-under-tie-break flip set whose local boundary
    /// matches the pattern exactly with equal causal diamond, when one
    /// exists.
    pub exact_choice: Vec<Option<u32>>,
    /// Per pattern: the minimal-residual flip set under the containment and
    /// diamond conditions (always defined; may be empty).
    pub greedy_choice: Vec<u32>,
    /// Patterns that arise as restrictions of valid domain walls and are
    /// contained in the future (the flip-set existence condition quantifies
    /// over these).
    pub admissible: Vec<u64>,
}

/// Precomputed causal data for one sweep direction.
#[derive(Clone, Debug)]
pub struct SweepStructure {
    pub direction: Vec<i64>,
    pub k: usize,
    pub slots: Vec<SlotTables>,
    /// Per slot, flattened absolute indices of the future (k-1)-cells of
    /// every vertex: `fsc_abs[slot][pos_lin * len + j]`.
    pub fsc_abs: Vec<Vec<u32>>,
    /// Same for the non-future (k-1)-cells.
    pub rest_abs: Vec<Vec<u32>>,
}

/// Supremum engine with memoized cones and binary joins. Relies on the
/// unique-infimum/supremum property; fold order does not matter on lattices
/// that satisfy it (cross-checked by the condition checker in `verify`).
pub struct JoinCtx<'c, 'm> {
    pub cover: &'c CausalCover<'m>,
    cones: HashMap<(CoverVertex, bool), (i64, HashMap<CoverVertex, u32>)>,
    joins: HashMap<(CoverVertex, CoverVertex, bool), CoverVertex>,
}

impl<'c, 'm> JoinCtx<'c, 'm> {
    pub fn new(cover: &'c CausalCover<'m>) -> Self {
        JoinCtx {
            cover,
            cones: HashMap::new(),
            joins: HashMap::new(),
        }
    }

    fn cone(&mut self, v: CoverVertex, future: bool, cap: i64) -> &HashMap<CoverVertex, u32> {
        let entry = self.cones.entry((v, future));
        match entry {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                if o.get().0 < cap {
                    let cone = self.cover.cone(v, future, cap);
                    o.insert((cap, cone));
                }
            }
            std::collections::hash_map::Entry::Vacant(va) => {
                va.insert((cap, self.cover.cone(v, future, cap)));
            }
        }
        &self.cones[&(v, future)].1
    }

    pub fn precedes(&mut self, a: CoverVertex, b: CoverVertex) -> bool {
        if a == b {
            return true;
        }
        let gap = self.cover.potential(b) - self.cover.potential(a);
        if gap <= 0 {
            return false;
        }
        self.cone(a, true, gap).contains_key(&b)
    }

    /// Least common successor (future) or greatest common predecessor (past)
    /// of two vertices.
    pub fn join2(
        &mut self,
        a: CoverVertex,
        b: CoverVertex,
        future: bool,
    ) -> Result<CoverVertex, LatticeError> {
        if a == b {
            return Ok(a);
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if let Some(&j) = self.joins.get(&(a, b, future)) {
            return Ok(j);
        }
        let j = if future && self.precedes(a, b) {
            b
        } else if future && self.precedes(b, a) {
            a
        } else if !future && self.precedes(a, b) {
            a
        } else if !future && self.precedes(b, a) {
            b
        } else {
            self.join2_search(a, b, future)?
        };
        self.joins.insert((a, b, future), j);
        Ok(j)
    }

    fn join2_search(
        &mut self,
        a: CoverVertex,
        b: CoverVertex,
        future: bool,
    ) -> Result<CoverVertex, LatticeError> {
        let cover = self.cover;
        let pa = cover.potential(a);
        let pb = cover.potential(b);
        let max_dot = cover.max_dot();
        let mut slack = 4 * max_dot + 8;
        for _ in 0..3 {
            let (cap_a, cap_b) = if future {
                let ext = pa.max(pb) + slack;
                (ext - pa, ext - pb)
            } else {
                let ext = pa.min(pb) - slack;
                (pa - ext, pb - ext)
            };
            let ca: Vec<CoverVertex> = {
                let cone_a = self.cone(a, future, cap_a).clone();
                let cone_b = self.cone(b, future, cap_b);
                // memoized cones may extend past the current window; clamp
                // so the coverage check below sees every candidate
                let bound = if future {
                    pa.max(pb) + slack
                } else {
                    pa.min(pb) - slack
                };
                cone_a
                    .keys()
                    .filter(|v| cone_b.contains_key(v))
                    .filter(|v| {
                        let p = cover.potential(**v);
                        if future {
                            p <= bound
                        } else {
                            p >= bound
                        }
                    })
                    .copied()
                    .collect()
            };
            if !ca.is_empty() {
                let mut sorted = ca;
                sorted.sort_unstable_by_key(|&c| {
                    let p = cover.potential(c);
                    (if future { p } else { -p }, c)
                });
                let best = cover.potential(sorted[0]);
                let ties = sorted
                    .iter()
                    .take_while(|&&c| cover.potential(c) == best)
                    .count();
                if ties != 1 {
                    return Err(if future {
                        LatticeError::NoSupremum
                    } else {
                        LatticeError::NoInfimum
                    });
                }
                let c0 = sorted[0];
                let cap0 = if future {
                    pa.max(pb) + slack - best
                } else {
                    best - (pa.min(pb) - slack)
                };
                let cone0 = self.cone(c0, future, cap0);
                if sorted.iter().all(|c| cone0.contains_key(c)) {
                    return Ok(c0);
                }
                return Err(if future {
                    LatticeError::NoSupremum
                } else {
                    LatticeError::NoInfimum
                });
            }
            slack *= 4;
        }
        Err(if future {
            LatticeError::NoSupremum
        } else {
            LatticeError::NoInfimum
        })
    }

    pub fn join_all(
        &mut self,
        verts: &[CoverVertex],
        future: bool,
    ) -> Result<CoverVertex, LatticeError> {
        assert!(!verts.is_empty());
        let mut acc = verts[0];
        for &v in &verts[1..] {
            acc = self.join2(acc, v, future)?;
        }
        Ok(acc)
    }
}

struct Candidate {
    members: Vec<u32>,
    pattern: u64,
    sup: CoverVertex,
}

pub fn build_sweep_structure(
    motif: &Motif,
    dims: Coord,
    direction: &[i64],
    k: usize,
) -> Result<SweepStructure, LatticeError> {
    let cover = CausalCover::new(motif, direction)?;
    let mut slots = Vec::with_capacity(motif.slots.len());
    for slot in 0..motif.slots.len() {
        slots.push(build_slot_tables(&cover, motif, k, slot as u8)?);
    }

    // absolute gather lists per vertex
    let npos = (dims[0] * dims[1] * dims[2]) as usize;
    let wrap = |pos: Coord| -> Coord {
        [
            pos[0].rem_euclid(dims[0]),
            pos[1].rem_euclid(dims[1]),
            pos[2].rem_euclid(dims[2]),
        ]
    };
    let lin = |pos: Coord| -> u32 { (pos[0] + dims[0] * (pos[1] + dims[1] * pos[2])) as u32 };
    let nct = motif.ntypes(k - 1) as u32;
    let mut fsc_abs = Vec::with_capacity(slots.len());
    let mut rest_abs = Vec::with_capacity(slots.len());
    for st in &slots {
        let mut fa = Vec::with_capacity(npos * st.fsc.len());
        let mut ra = Vec::with_capacity(npos * st.rest.len());
        for p2 in 0..dims[2] {
            for p1 in 0..dims[1] {
                for p0 in 0..dims[0] {
                    let pos = [p0, p1, p2];
                    for rc in &st.fsc {
                        let c = wrap([
                            pos[0] + rc.delta[0],
                            pos[1] + rc.delta[1],
                            pos[2] + rc.delta[2],
                        ]);
                        fa.push(lin(c) * nct + rc.ty as u32);
                    }
                    for rc in &st.rest {
                        let c = wrap([
                            pos[0] + rc.delta[0],
                            pos[1] + rc.delta[1],
                            pos[2] + rc.delta[2],
                        ]);
                        ra.push(lin(c) * nct + rc.ty as u32);
                    }
                }
            }
        }
        fsc_abs.push(fa);
        rest_abs.push(ra);
    }

    Ok(SweepStructure {
        direction: direction.to_vec(),
        k,
        slots,
        fsc_abs,
        rest_abs,
    })
}

fn build_slot_tables(
    cover: &CausalCover<'_>,
    motif: &Motif,
    k: usize,
    slot: u8,
) -> Result<SlotTables, LatticeError> {
    let v0 = CoverVertex {
        pos: [0, 0, 0],
        slot,
    };
    let mut ctx = JoinCtx::new(cover);

    let cell_future = |rc: &RelCell, dim: usize, ctx: &mut JoinCtx| -> bool {
        motif
            .cell_vertices(rc.delta, dim, rc.ty)
            .into_iter()
            .all(|(pos, s)| ctx.precedes(v0, CoverVertex { pos, slot: s }))
    };

    let all_syndrome = &motif.vstar[k - 1][slot as usize];
    let mut fsc = Vec::new();
    let mut rest = Vec::new();
    for &rc in all_syndrome {
        if cell_future(&rc, k - 1, &mut ctx) {
            fsc.push(rc);
        } else {
            rest.push(rc);
        }
    }
    assert!(fsc.len() <= 20, "future syndrome star too large for bit patterns");

    let future_kcells: Vec<RelCell> = motif.vstar[k][slot as usize]
        .iter()
        .filter(|rc| cell_future(rc, k, &mut ctx))
        .copied()
        .collect();
    assert!(
        future_kcells.len() <= 20,
        "future k-star too large for subset search"
    );

    // local boundary pattern of each future k-cell over the fsc list
    let fsc_index: HashMap<RelCell, usize> =
        fsc.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut local_masks = Vec::with_capacity(future_kcells.len());
    for rc in &future_kcells {
        let ty = &motif.cells[k][rc.ty as usize];
        let mut mask = 0u64;
        for child in &ty.children {
            let abs = RelCell {
                delta: [
                    rc.delta[0] + child.delta[0],
                    rc.delta[1] + child.delta[1],
                    rc.delta[2] + child.delta[2],
                ],
                ty: child.ty,
            };
            if let Some(&i) = fsc_index.get(&abs) {
                mask ^= 1 << i;
            }
        }
        local_masks.push(mask);
    }

    // supremum of each future k-cell's vertex set
    let cell_sup = |rc: &RelCell, dim: usize, ctx: &mut JoinCtx| -> Result<CoverVertex, LatticeError> {
        let verts: Vec<CoverVertex> = motif
            .cell_vertices(rc.delta, dim, rc.ty)
            .into_iter()
            .map(|(pos, s)| CoverVertex { pos, slot: s })
            .collect();
        ctx.join_all(&verts, true)
    };
    let mut kcell_sup = Vec::with_capacity(future_kcells.len());
    for rc in &future_kcells {
        kcell_sup.push(cell_sup(rc, k, &mut ctx)?);
    }
    let mut fsc_sup = Vec::with_capacity(fsc.len());
    for rc in &fsc {
        fsc_sup.push(cell_sup(rc, k - 1, &mut ctx)?);
    }

    // enumerate candidate flip sets; supremum folds over member cells
    let nsub = 1usize << future_kcells.len();
    let mut sub_sup: Vec<CoverVertex> = vec![v0; nsub];
    let mut candidates = Vec::with_capacity(nsub);
    for mask in 0..nsub {
        let sup = if mask == 0 {
            v0
        } else {
            let low = mask.trailing_zeros() as usize;
            let rest_mask = mask & (mask - 1);
            ctx.join2(sub_sup[rest_mask], kcell_sup[low], true)?
        };
        sub_sup[mask] = sup;
        let members: Vec<u32> = (0..future_kcells.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| i as u32)
            .collect();
        let pattern = members
            .iter()
            .fold(0u64, |acc, &i| acc ^ local_masks[i as usize]);
        candidates.push(Candidate {
            members,
            pattern,
            sup,
        });
    }
    // tie-break: fewest cells first, then lexicographically smallest member
    // list; keeps single-cell flips ahead of larger homologous alternatives
    candidates.sort_by(|a, b| {
        (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members))
    });

    // per-pattern supremum of the syndrome restriction (v0 is always a
    // member vertex, so the fold starts at v0)
    let npat = 1usize << fsc.len();
    let mut pattern_sup: Vec<CoverVertex> = vec![v0; npat];
    for pat in 1..npat {
        let low = pat.trailing_zeros() as usize;
        let rest_mask = pat & (pat - 1);
        pattern_sup[pat] = ctx.join2(pattern_sup[rest_mask], fsc_sup[low], true)?;
    }

    let mut exact_pick: Vec<Option<usize>> = vec![None; npat];
    let mut greedy_pick: Vec<Option<(usize, u32)>> = vec![None; npat];
    for (ci, cand) in candidates.iter().enumerate() {
        for (pat, &psup) in pattern_sup.iter().enumerate() {
            let p = pat as u64;
            if cand.pattern == p && !cand.members.is_empty() && cand.sup == psup {
                exact_pick[pat].get_or_insert(ci);
            }
            if cand.pattern & !p == 0 && ctx.precedes(cand.sup, psup) {
                let residual = (cand.pattern ^ p).count_ones();
                match greedy_pick[pat] {
                    Some((_, best)) if best <= residual => {}
                    _ => greedy_pick[pat] = Some((ci, residual)),
                }
            }
        }
    }

    // pool the chosen flip sets
    let mut phis: Vec<Vec<RelCell>> = vec![Vec::new()];
    let mut pool_index: HashMap<Vec<u32>, u32> = HashMap::new();
    pool_index.insert(Vec::new(), 0);
    let mut intern = |members: &[u32], phis: &mut Vec<Vec<RelCell>>| -> u32 {
        if let Some(&i) = pool_index.get(members) {
            return i;
        }
        let cells: Vec<RelCell> = members
            .iter()
            .map(|&i| future_kcells[i as usize])
            .collect();
        let idx = phis.len() as u32;
        phis.push(cells);
        pool_index.insert(members.to_vec(), idx);
        idx
    };
    let exact_choice: Vec<Option<u32>> = exact_pick
        .iter()
        .map(|c| c.map(|ci| intern(&candidates[ci].members, &mut phis)))
        .collect();
    let greedy_choice: Vec<u32> = greedy_pick
        .iter()
        .map(|c| {
            let (ci, _) = c.expect("empty candidate always qualifies");
            intern(&candidates[ci].members, &mut phis)
        })
        .collect();

    // admissible future patterns: the span of the local boundary images of
    // every k-cell at the vertex, restricted to patterns supported on fsc
    let all_index: HashMap<RelCell, usize> = all_syndrome
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    assert!(all_syndrome.len() <= 64);
    let mut images: Vec<u64> = Vec::new();
    for rc in &motif.vstar[k][slot as usize] {
        let ty = &motif.cells[k][rc.ty as usize];
        let mut mask = 0u64;
        for child in &ty.children {
            let abs = RelCell {
                delta: [
                    rc.delta[0] + child.delta[0],
                    rc.delta[1] + child.delta[1],
                    rc.delta[2] + child.delta[2],
                ],
                ty: child.ty,
            };
            if let Some(&i) = all_index.get(&abs) {
                mask ^= 1 << i;
            }
        }
        images.push(mask);
    }
    let mut basis: Vec<u64> = Vec::new();
    for mut x in images {
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let future_mask: u64 = fsc
        .iter()
        .map(|c| 1u64 << all_index[c])
        .fold(0, |a, b| a | b);
    let fsc_bit_of_all: HashMap<usize, usize> = fsc
        .iter()
        .enumerate()
        .map(|(j, c)| (all_index[c], j))
        .collect();
    let mut admissible = Vec::new();
    for combo in 0..(1u64 << basis.len()) {
        let mut x = 0u64;
        for (i, &b) in basis.iter().enumerate() {
            if combo >> i & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 && x & !future_mask == 0 {
            let mut pat = 0u64;
            for i in 0..64 {
                if x >> i & 1 == 1 {
                    pat |= 1 << fsc_bit_of_all[&(i as usize)];
                }
            }
            admissible.push(pat);
        }
    }
    admissible.sort_unstable();
    admissible.dedup();

    // every admissible pattern must have an exact flip set with equal
    // causal diamond
    for &pat in &admissible {
        if exact_choice[pat as usize].is_none() {
            let cells: Vec<RelCell> = (0..fsc.len())
                .filter(|&i| pat >> i & 1 == 1)
                .map(|i| fsc[i])
                .collect();
            return Err(LatticeError::ConditionViolation(format!(
                "slot {slot}: admissible future restriction {cells:?} has no exact flip set"
            )));
        }
    }

    Ok(SlotTables {
        fsc,
        rest,
        future_kcells,
        phis,
        exact_choice,
        greedy_choice,
        admissible,
    })
}
