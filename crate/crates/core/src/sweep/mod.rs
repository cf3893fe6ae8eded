//! The sweep rule and greedy sweep rule as deterministic, simultaneous,
//! two-phase cellular-automaton updates on a syndrome.
//!
//! Phase 1 computes a flip set for every vertex from the same syndrome
//! snapshot; phase 2 adds the F2 sum of all flip sets to the error estimate
//! and pushes the wall by the flips' boundary. The per-vertex flip choice is
//! a table lookup (see `lattices::tables`); the update is deterministic for a
//! fixed configuration regardless of the order vertices are visited.

pub mod cover_ca;
pub mod toom;

use crate::bits::DenseBits;
use crate::complex::{Chain, Syndrome};
use crate::error::LatticeError;
use crate::lattices::tables::{build_sweep_structure, SweepStructure};
use crate::lattices::Lattice;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Flip only at trailing vertices, matching the wall restriction exactly.
    Sweep,
    /// Flip at every vertex on the wall, minimizing the local residual.
    Greedy,
}

impl std::str::FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sweep" => Ok(Rule::Sweep),
            "greedy" => Ok(Rule::Greedy),
            _ => Err(format!("unknown rule '{s}' (expected sweep|greedy)")),
        }
    }
}

/// Deterministic ordering used when the flip set is not unique.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Lexicographically smallest candidate set by sorted cell keys.
    #[default]
    LexSmallest,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSchedule {
    /// The lattice's sweep direction for every step.
    #[default]
    Fixed,
    /// Rotate through the listed directions, one per rule application.
    Cycle(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub rule: Rule,
    #[serde(default)]
    pub tie_break: TieBreak,
    #[serde(default)]
    pub direction_schedule: DirectionSchedule,
}

impl SweepConfig {
    pub fn new(rule: Rule) -> Self {
        SweepConfig {
            rule,
            tie_break: TieBreak::LexSmallest,
            direction_schedule: DirectionSchedule::Fixed,
        }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig::new(Rule::Greedy)
    }
}

/// A sweep configuration bound to a lattice, with tables prepared for every
/// scheduled direction.
pub struct Ruleset<'a> {
    pub lattice: &'a Lattice,
    pub cfg: SweepConfig,
    structures: Vec<SweepStructure>,
}

impl<'a> Ruleset<'a> {
    pub fn new(lattice: &'a Lattice, cfg: SweepConfig) -> Result<Self, LatticeError> {
        let structures = match &cfg.direction_schedule {
            DirectionSchedule::Fixed => vec![lattice.sweep.clone()],
            DirectionSchedule::Cycle(dirs) => {
                if dirs.is_empty() {
                    return Err(LatticeError::InvalidSpec(
                        "direction schedule must not be empty".into(),
                    ));
                }
                let mut out = Vec::with_capacity(dirs.len());
                for dir in dirs {
                    if *dir == lattice.sweep.direction {
                        out.push(lattice.sweep.clone());
                    } else {
                        out.push(build_sweep_structure(
                            &lattice.motif,
                            lattice.dims,
                            dir,
                            lattice.k() as usize,
                        )?);
                    }
                }
                out
            }
        };
        Ok(Ruleset {
            lattice,
            cfg,
            structures,
        })
    }

    pub fn structure(&self, step: usize) -> &SweepStructure {
        &self.structures[step % self.structures.len()]
    }

    fn vertex_state(
        &self,
        st: &SweepStructure,
        sigma: &DenseBits,
        v: u32,
    ) -> (usize, usize, u64, bool) {
        let nslots = self.lattice.nslots();
        let slot = (v as usize) % nslots;
        let pos_lin = (v as usize) / nslots;
        let tables = &st.slots[slot];
        let fl = tables.fsc.len();
        let fa = &st.fsc_abs[slot][pos_lin * fl..pos_lin * fl + fl];
        let mut pattern = 0u64;
        for (j, &c) in fa.iter().enumerate() {
            pattern |= (sigma.get(c) as u64) << j;
        }
        let rl = tables.rest.len();
        let ra = &st.rest_abs[slot][pos_lin * rl..pos_lin * rl + rl];
        let past = ra.iter().any(|&c| sigma.get(c));
        (slot, pos_lin, pattern, past)
    }

    /// Flip-set pool index for a vertex given its local syndrome state, or
    /// `None` for a no-op.
    fn choose(&self, st: &SweepStructure, slot: usize, pattern: u64, past: bool) -> Option<u32> {
        cover_ca::choose_flip(&st.slots[slot], self.cfg.rule, pattern, past)
    }

    /// True iff the wall restriction at `v` is non-empty and lies entirely in
    /// the vertex's future.
    pub fn is_trailing(&self, v: u32, sigma: &Syndrome) -> bool {
        let bits = sigma.to_dense_bits();
        let st = self.structure(0);
        let (_, _, pattern, past) = self.vertex_state(st, &bits, v);
        pattern != 0 && !past
    }

    /// The flip set assigned to a single vertex by the configured rule.
    pub fn flip_set(&self, v: u32, sigma: &Syndrome) -> Chain {
        let bits = sigma.to_dense_bits();
        let st = self.structure(0);
        let (slot, _, pattern, past) = self.vertex_state(st, &bits, v);
        let cells = match self.choose(st, slot, pattern, past) {
            None => Vec::new(),
            Some(idx) => self.resolve_phi(st, slot, v, idx),
        };
        Chain::from_cells(&self.lattice.complex, self.lattice.k(), cells).unwrap()
    }

    fn resolve_phi(&self, st: &SweepStructure, slot: usize, v: u32, idx: u32) -> Vec<u32> {
        let (pos, _) = self.lattice.cell_pos_ty(0, v);
        let k = self.lattice.k() as usize;
        st.slots[slot].phis[idx as usize]
            .iter()
            .map(|rc| {
                self.lattice.cell_index(
                    k,
                    [
                        pos[0] + rc.delta[0],
                        pos[1] + rc.delta[1],
                        pos[2] + rc.delta[2],
                    ],
                    rc.ty,
                )
            })
            .collect()
    }

    /// One synchronous update on a dense wall. Writes the flip chain into
    /// `rho` (cleared first), applies its boundary to `sigma`, and returns
    /// the number of flipped cells.
    pub fn step_dense(&self, sigma: &mut DenseBits, rho: &mut DenseBits, step: usize) -> usize {
        let st = self.structure(step);
        rho.clear();
        let nverts = self.lattice.complex.ncells(0) as usize;
        let mut seen = vec![false; nverts];
        let mut active: Vec<u32> = Vec::new();
        for cell in sigma.iter_ones() {
            for &v in self.lattice.syndrome_cell_vertices(cell) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    active.push(v);
                }
            }
        }
        active.sort_unstable();
        let mut flipped = 0usize;
        for &v in &active {
            let (slot, _, pattern, past) = self.vertex_state(st, sigma, v);
            if let Some(idx) = self.choose(st, slot, pattern, past) {
                for cell in self.resolve_phi(st, slot, v, idx) {
                    rho.flip(cell);
                }
            }
        }
        let k = self.lattice.k();
        for cell in rho.iter_ones() {
            flipped += 1;
            for &e in self.lattice.complex.cell_boundary(k, cell) {
                sigma.flip(e);
            }
        }
        flipped
    }

    /// Two-phase simultaneous update: returns the flip chain and the updated
    /// wall. The input wall need not be a valid boundary.
    pub fn apply(&self, sigma: &Syndrome, step: usize) -> (Chain, Syndrome) {
        let mut bits = sigma.to_dense_bits();
        let mut rho = DenseBits::zeros(self.lattice.complex.ncells(self.lattice.k()) as usize);
        self.step_dense(&mut bits, &mut rho, step);
        let rho = Chain::from_dense(&self.lattice.complex, self.lattice.k(), rho);
        let sigma_next = Chain::from_dense(&self.lattice.complex, self.lattice.k() - 1, bits);
        (rho, sigma_next)
    }
}

/// One step of a wall trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: u32,
    pub wall_weight: usize,
    pub flips: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceDoc {
    pub rule: Rule,
    pub steps: Vec<TraceStep>,
    pub final_wall_weight: usize,
    pub removed: bool,
}

/// Iterate the rule from a wall, recording weight and flips per step.
pub fn trace(ruleset: &Ruleset<'_>, sigma: &Syndrome, max_steps: u32) -> TraceDoc {
    let lat = ruleset.lattice;
    let mut bits = sigma.to_dense_bits();
    let mut rho = DenseBits::zeros(lat.complex.ncells(lat.k()) as usize);
    let mut steps = Vec::new();
    let mut t = 1u32;
    while t <= max_steps && !bits.is_empty() {
        let weight = bits.count_ones();
        ruleset.step_dense(&mut bits, &mut rho, (t - 1) as usize);
        steps.push(TraceStep {
            t,
            wall_weight: weight,
            flips: rho.iter_ones().collect(),
        });
        t += 1;
    }
    TraceDoc {
        rule: ruleset.cfg.rule,
        final_wall_weight: bits.count_ones(),
        removed: bits.is_empty(),
        steps,
    }
}

#[cfg(test)]
mod tests;
