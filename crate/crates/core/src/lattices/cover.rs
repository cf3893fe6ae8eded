//! Causal structure on the universal cover.
//!
//! The partial order induced by a sweep direction is only consistent inside
//! local regions of the torus, so every order query (cones, infima, suprema,
//! causal diamonds, causal distances) runs on the cover, where it is globally
//! well-defined. Quotient-level callers lift their inputs through a minimal
//! image and reject regions that are too large to lift unambiguously.

use super::motif::{Coord, Motif, RelCell};
use crate::error::LatticeError;
use std::collections::{HashMap, HashSet, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverVertex {
    pub pos: Coord,
    pub slot: u8,
}

/// A cover cell of some dimension (the dimension is tracked by the caller).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverCell {
    pub pos: Coord,
    pub ty: u16,
}

impl CoverCell {
    pub fn shifted(self, base: Coord) -> CoverCell {
        CoverCell {
            pos: [
                self.pos[0] + base[0],
                self.pos[1] + base[1],
                self.pos[2] + base[2],
            ],
            ty: self.ty,
        }
    }

    pub fn rel(self, base: Coord) -> RelCell {
        RelCell {
            delta: [
                self.pos[0] - base[0],
                self.pos[1] - base[1],
                self.pos[2] - base[2],
            ],
            ty: self.ty,
        }
    }
}

struct SlotCausal {
    /// Edges at the slot with strictly positive sweep dot, as
    /// (neighbor delta, neighbor slot, dot).
    future: Vec<(Coord, u8, i64)>,
    past: Vec<(Coord, u8, i64)>,
}

/// Sweep-direction-aware view of the cover.
pub struct CausalCover<'a> {
    pub motif: &'a Motif,
    pub direction: Vec<i64>,
    slot_causal: Vec<SlotCausal>,
    max_dot: i64,
}

impl<'a> CausalCover<'a> {
    /// Fails if the direction is perpendicular to any edge of the lattice.
    pub fn new(motif: &'a Motif, direction: &[i64]) -> Result<Self, LatticeError> {
        let mut t = [0i64; 3];
        for (i, &c) in direction.iter().enumerate() {
            t[i] = c;
        }
        let mut slot_causal = Vec::with_capacity(motif.slots.len());
        let mut max_dot = 1;
        for edges in &motif.slot_edges {
            let mut future = Vec::new();
            let mut past = Vec::new();
            for info in edges {
                let dot: i64 = (0..3).map(|i| t[i] * info.embed_delta[i]).sum();
                if dot == 0 {
                    return Err(LatticeError::PerpendicularEdge {
                        direction: direction.to_vec(),
                        edge_delta: info.embed_delta[..motif.d].to_vec(),
                    });
                }
                max_dot = max_dot.max(dot.abs());
                if dot > 0 {
                    future.push((info.nbr_delta, info.nbr_slot, dot));
                } else {
                    past.push((info.nbr_delta, info.nbr_slot, -dot));
                }
            }
            slot_causal.push(SlotCausal { future, past });
        }
        Ok(CausalCover {
            motif,
            direction: direction.to_vec(),
            slot_causal,
            max_dot,
        })
    }

    /// Sweep potential of a vertex: the dot product of the direction with
    /// its embedded coordinates. Strictly increases along causal paths.
    pub fn potential(&self, v: CoverVertex) -> i64 {
        let e = self.motif.vertex_embed(v.pos, v.slot);
        (0..3)
            .map(|i| self.direction.get(i).copied().unwrap_or(0) * e[i])
            .sum()
    }

    fn step(&self, v: CoverVertex, future: bool) -> Vec<CoverVertex> {
        let sc = &self.slot_causal[v.slot as usize];
        let list = if future { &sc.future } else { &sc.past };
        list.iter()
            .map(|&(delta, slot, _)| CoverVertex {
                pos: [
                    v.pos[0] + delta[0],
                    v.pos[1] + delta[1],
                    v.pos[2] + delta[2],
                ],
                slot,
            })
            .collect()
    }

    /// All vertices reachable by causal paths from `v` with potential at most
    /// `cap`, mapped to the minimum causal path length reaching them.
    pub fn cone(&self, v: CoverVertex, future: bool, cap: i64) -> HashMap<CoverVertex, u32> {
        let mut out = HashMap::new();
        let mut queue = VecDeque::new();
        out.insert(v, 0u32);
        queue.push_back(v);
        let base = self.potential(v);
        while let Some(u) = queue.pop_front() {
            let du = out[&u];
            for w in self.step(u, future) {
                let drift = (self.potential(w) - base).abs();
                if drift > cap {
                    continue;
                }
                if !out.contains_key(&w) {
                    out.insert(w, du + 1);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// `u ⪯ w`: a causal path from u to w exists.
    pub fn precedes(&self, u: CoverVertex, w: CoverVertex) -> bool {
        if u == w {
            return true;
        }
        let gap = self.potential(w) - self.potential(u);
        if gap <= 0 {
            return false;
        }
        self.cone(u, true, gap).contains_key(&w)
    }

    /// Length of the shortest causal path between u and w (either
    /// orientation); `None` when no causal path exists.
    pub fn causal_distance(&self, u: CoverVertex, w: CoverVertex) -> Option<u32> {
        if u == w {
            return Some(0);
        }
        let gap = self.potential(w) - self.potential(u);
        if gap > 0 {
            self.cone(u, true, gap).get(&w).copied()
        } else {
            self.cone(w, true, -gap).get(&u).copied()
        }
    }

    pub fn max_dot(&self) -> i64 {
        self.max_dot
    }

    fn extremum(
        &self,
        verts: &[CoverVertex],
        future: bool,
    ) -> Result<CoverVertex, LatticeError> {
        assert!(!verts.is_empty());
        if verts.len() == 1 {
            return Ok(verts[0]);
        }
        let pots: Vec<i64> = verts.iter().map(|&v| self.potential(v)).collect();
        let mut slack = 4 * self.max_dot + 8;
        for _attempt in 0..3 {
            if let Some(found) = self.extremum_with_slack(verts, &pots, future, slack)? {
                return Ok(found);
            }
            slack *= 4;
        }
        Err(if future {
            LatticeError::NoSupremum
        } else {
            LatticeError::NoInfimum
        })
    }

    fn extremum_with_slack(
        &self,
        verts: &[CoverVertex],
        pots: &[i64],
        future: bool,
        slack: i64,
    ) -> Result<Option<CoverVertex>, LatticeError> {
        // Common bound candidates: intersection of all cones, truncated at a
        // potential cap. The extremum, when it exists, is the unique candidate
        // at the extremal potential level that bounds every other candidate.
        let span: i64 = {
            let max = pots.iter().max().unwrap();
            let min = pots.iter().min().unwrap();
            max - min
        };
        let cap = span + slack;
        let mut iter = verts.iter().zip(pots.iter());
        let (v0, _) = iter.next().unwrap();
        let mut candidates: HashSet<CoverVertex> =
            self.cone(*v0, future, cap).into_keys().collect();
        for (v, _) in iter {
            let cone = self.cone(*v, future, cap);
            candidates.retain(|c| cone.contains_key(c));
            if candidates.is_empty() {
                return Ok(None);
            }
        }
        let mut sorted: Vec<CoverVertex> = candidates.iter().copied().collect();
        sorted.sort_unstable_by_key(|&c| {
            let p = self.potential(c);
            (if future { p } else { -p }, c)
        });
        let best_pot = self.potential(sorted[0]);
        let ties = sorted
            .iter()
            .take_while(|&&c| self.potential(c) == best_pot)
            .count();
        if ties != 1 {
            // two incomparable minimal candidates: no unique extremum
            return Err(if future {
                LatticeError::NoSupremum
            } else {
                LatticeError::NoInfimum
            });
        }
        let c0 = sorted[0];
        let cone0 = self.cone(c0, future, cap);
        if sorted.iter().all(|c| cone0.contains_key(c)) {
            Ok(Some(c0))
        } else {
            Err(if future {
                LatticeError::NoSupremum
            } else {
                LatticeError::NoInfimum
            })
        }
    }

    /// Least common successor of the vertex set.
    pub fn supremum(&self, verts: &[CoverVertex]) -> Result<CoverVertex, LatticeError> {
        self.extremum(verts, true)
    }

    /// Greatest common predecessor of the vertex set.
    pub fn infimum(&self, verts: &[CoverVertex]) -> Result<CoverVertex, LatticeError> {
        self.extremum(verts, false)
    }

    /// The interval of vertices between `lo` and `hi`.
    pub fn interval(
        &self,
        lo: CoverVertex,
        hi: CoverVertex,
    ) -> Result<HashSet<CoverVertex>, LatticeError> {
        let gap = self.potential(hi) - self.potential(lo);
        if gap < 0 {
            return Ok(HashSet::new());
        }
        let up = self.cone(lo, true, gap);
        let down = self.cone(hi, false, gap);
        Ok(up
            .into_keys()
            .filter(|v| down.contains_key(v))
            .collect())
    }

    /// Causal diamond of a vertex set: for each dimension k, the cover cells
    /// whose vertices all lie between the infimum and supremum of the set.
    pub fn diamond(
        &self,
        verts: &[CoverVertex],
    ) -> Result<Vec<Vec<CoverCell>>, LatticeError> {
        let lo = self.infimum(verts)?;
        let hi = self.supremum(verts)?;
        let member = self.interval(lo, hi)?;
        let d = self.motif.d;
        let mut out: Vec<Vec<CoverCell>> = vec![Vec::new(); d + 1];
        for k in 0..=d {
            let mut seen = HashSet::new();
            for &v in &member {
                for rc in &self.motif.vstar[k][v.slot as usize] {
                    let cell = CoverCell {
                        pos: [
                            v.pos[0] + rc.delta[0],
                            v.pos[1] + rc.delta[1],
                            v.pos[2] + rc.delta[2],
                        ],
                        ty: rc.ty,
                    };
                    if !seen.insert(cell) {
                        continue;
                    }
                    let inside = self
                        .motif
                        .cell_vertices(cell.pos, k, cell.ty)
                        .into_iter()
                        .all(|(pos, slot)| member.contains(&CoverVertex { pos, slot }));
                    if inside {
                        out[k].push(cell);
                    }
                }
            }
            out[k].sort_unstable();
        }
        Ok(out)
    }

    /// Membership test against a precomputed interval.
    pub fn cell_in_interval(
        &self,
        cell: CoverCell,
        k: usize,
        member: &HashSet<CoverVertex>,
    ) -> bool {
        self.motif
            .cell_vertices(cell.pos, k, cell.ty)
            .into_iter()
            .all(|(pos, slot)| member.contains(&CoverVertex { pos, slot }))
    }

    /// Length of the longest causal path from `u` to `w`, or `None` when no
    /// causal path exists. Computed by dynamic programming over the interval
    /// between the two vertices, in order of increasing potential.
    pub fn longest_causal_path(&self, u: CoverVertex, w: CoverVertex) -> Option<u32> {
        if u == w {
            return Some(0);
        }
        let gap = self.potential(w) - self.potential(u);
        if gap <= 0 {
            return None;
        }
        let up = self.cone(u, true, gap);
        if !up.contains_key(&w) {
            return None;
        }
        let down = self.cone(w, false, gap);
        let mut members: Vec<CoverVertex> = up
            .keys()
            .filter(|v| down.contains_key(v))
            .copied()
            .collect();
        members.sort_unstable_by_key(|&v| (self.potential(v), v));
        let index: HashMap<CoverVertex, usize> =
            members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dp: Vec<i64> = vec![i64::MIN; members.len()];
        dp[index[&u]] = 0;
        for i in 0..members.len() {
            if dp[i] == i64::MIN {
                continue;
            }
            for nxt in self.step(members[i], true) {
                if let Some(&j) = index.get(&nxt) {
                    dp[j] = dp[j].max(dp[i] + 1);
                }
            }
        }
        let dw = dp[index[&w]];
        (dw >= 0).then_some(dw as u32)
    }

    /// Vertices of a set of cover cells of dimension k, deduplicated.
    pub fn cells_vertices(&self, cells: &[CoverCell], k: usize) -> Vec<CoverVertex> {
        let mut out: Vec<CoverVertex> = cells
            .iter()
            .flat_map(|c| {
                self.motif
                    .cell_vertices(c.pos, k, c.ty)
                    .into_iter()
                    .map(|(pos, slot)| CoverVertex { pos, slot })
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
