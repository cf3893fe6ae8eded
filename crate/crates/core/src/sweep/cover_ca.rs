//! The sweep rules on the universal cover.
//!
//! Walls evolved here live on the infinite lattice, where the partial order
//! is globally consistent; this is the regime in which the rule's support,
//! propagation and removal properties are stated and checked.

use super::Rule;
use crate::lattices::cover::CoverCell;
use crate::lattices::motif::Motif;
use crate::lattices::tables::SlotTables;
use std::collections::BTreeSet;

/// Flip-set pool index for a local syndrome state, shared between the
/// quotient and cover engines.
pub fn choose_flip(tables: &SlotTables, rule: Rule, pattern: u64, past: bool) -> Option<u32> {
    let trailing = pattern != 0 && !past;
    let idx = if trailing {
        match tables.exact_choice[pattern as usize] {
            Some(i) => i,
            None => match rule {
                Rule::Greedy => tables.greedy_choice[pattern as usize],
                Rule::Sweep => return None,
            },
        }
    } else if rule == Rule::Greedy && (pattern != 0 || past) {
        tables.greedy_choice[pattern as usize]
    } else {
        return None;
    };
    (idx != 0).then_some(idx)
}

/// One synchronous update of a cover wall. Returns the flipped k-cells and
/// the updated wall.
pub fn step(
    motif: &Motif,
    slots: &[SlotTables],
    rule: Rule,
    k: usize,
    sigma: &BTreeSet<CoverCell>,
) -> (BTreeSet<CoverCell>, BTreeSet<CoverCell>) {
    let mut active = BTreeSet::new();
    for cell in sigma {
        for (pos, slot) in motif.cell_vertices(cell.pos, k - 1, cell.ty) {
            active.insert((pos, slot));
        }
    }
    let mut flips: BTreeSet<CoverCell> = BTreeSet::new();
    for (pos, slot) in active {
        let tables = &slots[slot as usize];
        let mut pattern = 0u64;
        for (j, rc) in tables.fsc.iter().enumerate() {
            let cell = CoverCell {
                pos: [
                    pos[0] + rc.delta[0],
                    pos[1] + rc.delta[1],
                    pos[2] + rc.delta[2],
                ],
                ty: rc.ty,
            };
            if sigma.contains(&cell) {
                pattern |= 1 << j;
            }
        }
        let past = tables.rest.iter().any(|rc| {
            sigma.contains(&CoverCell {
                pos: [
                    pos[0] + rc.delta[0],
                    pos[1] + rc.delta[1],
                    pos[2] + rc.delta[2],
                ],
                ty: rc.ty,
            })
        });
        if let Some(idx) = choose_flip(tables, rule, pattern, past) {
            for rc in &tables.phis[idx as usize] {
                let cell = CoverCell {
                    pos: [
                        pos[0] + rc.delta[0],
                        pos[1] + rc.delta[1],
                        pos[2] + rc.delta[2],
                    ],
                    ty: rc.ty,
                };
                if !flips.remove(&cell) {
                    flips.insert(cell);
                }
            }
        }
    }
    let mut next = sigma.clone();
    for cell in &flips {
        for child in boundary(motif, k, *cell) {
            if !next.remove(&child) {
                next.insert(child);
            }
        }
    }
    (flips, next)
}

/// F2 boundary of a single cover k-cell.
pub fn boundary(motif: &Motif, k: usize, cell: CoverCell) -> Vec<CoverCell> {
    motif.cells[k][cell.ty as usize]
        .children
        .iter()
        .map(|rc| CoverCell {
            pos: [
                cell.pos[0] + rc.delta[0],
                cell.pos[1] + rc.delta[1],
                cell.pos[2] + rc.delta[2],
            ],
            ty: rc.ty,
        })
        .collect()
}

/// F2 boundary of a set of cover k-cells.
pub fn boundary_of_set(motif: &Motif, k: usize, cells: &BTreeSet<CoverCell>) -> BTreeSet<CoverCell> {
    let mut out = BTreeSet::new();
    for cell in cells {
        for child in boundary(motif, k, *cell) {
            if !out.remove(&child) {
                out.insert(child);
            }
        }
    }
    out
}
