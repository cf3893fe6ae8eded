//! Translation-invariant unit-cell descriptions of the shipped lattices.
//!
//! A [`Motif`] lists the cell types of one unit cell with integer embedded
//! coordinates. The same description generates both the finite quotient
//! complex on the torus (positions taken modulo the lattice dimensions) and
//! the infinite cover (positions unrestricted), which is where all causal
//! queries run. Lower-dimensional cell types are derived from the top cells
//! by a per-family subcell rule and deduplicated in the cover, where vertex
//! sets identify cells uniquely.

use std::collections::BTreeMap;

pub const MAX_D: usize = 3;

pub type Coord = [i64; 3];

/// A cell referenced relative to a base unit-cell position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelCell {
    pub delta: Coord,
    pub ty: u16,
}

/// How a cell type's facets are enumerated from its vertex list.
#[derive(Clone, Copy, Debug)]
pub enum ChildRule {
    /// Facets are the (n-1)-subsets of the vertex set.
    Simplex,
    /// Cells are axis-aligned boxes; facets fix one spanning axis to an end.
    AxisBox,
    /// 2-cells given in cyclic vertex order; facets are consecutive pairs.
    Polygon,
}

#[derive(Clone, Debug)]
pub struct CellType {
    /// Embedded vertex coordinates relative to the anchor cell origin.
    /// Polygon 2-cells keep their cyclic order; all other types are sorted.
    pub verts: Vec<Coord>,
    /// Facets as (unit-cell delta, type index in dimension k-1).
    pub children: Vec<RelCell>,
    /// Each vertex resolved to (unit-cell delta, slot).
    pub vert_refs: Vec<(Coord, u8)>,
}

#[derive(Clone, Debug)]
pub struct NeighborInfo {
    pub edge: RelCell,
    pub nbr_delta: Coord,
    pub nbr_slot: u8,
    pub embed_delta: Coord,
}

#[derive(Clone, Debug)]
pub struct Motif {
    pub d: usize,
    /// Embedded extent of one unit cell per axis.
    pub strides: Coord,
    /// Vertex slot offsets, each within [0, stride) per axis.
    pub slots: Vec<Coord>,
    /// cells[k][ty]; cells[0] are the slot vertices in slot order.
    pub cells: Vec<Vec<CellType>>,
    /// vstar[k][slot]: k-cells containing the slot vertex (sorted).
    pub vstar: Vec<Vec<Vec<RelCell>>>,
    /// Per slot: incident edges with neighbor resolution.
    pub slot_edges: Vec<Vec<NeighborInfo>>,
}

fn add(a: Coord, b: Coord) -> Coord {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: Coord, b: Coord) -> Coord {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn mul(a: Coord, s: Coord) -> Coord {
    [a[0] * s[0], a[1] * s[1], a[2] * s[2]]
}

/// Anchor cell of a vertex list: componentwise floor-div of the coordinate
/// minimum by the strides.
fn anchor_of(verts: &[Coord], strides: Coord) -> Coord {
    let mut anchor = [0i64; 3];
    for i in 0..3 {
        let m = verts.iter().map(|v| v[i]).min().unwrap();
        anchor[i] = m.div_euclid(strides[i].max(1));
    }
    anchor
}

fn canonical_key(verts: &[Coord], strides: Coord) -> (Coord, Vec<Coord>) {
    let anchor = anchor_of(verts, strides);
    let shift = mul(anchor, strides);
    let mut rel: Vec<Coord> = verts.iter().map(|&v| sub(v, shift)).collect();
    rel.sort_unstable();
    (anchor, rel)
}

fn enumerate_children(verts: &[Coord], k: usize, rule: ChildRule) -> Vec<Vec<Coord>> {
    match rule {
        ChildRule::Simplex => {
            // all (len-1)-subsets
            (0..verts.len())
                .map(|omit| {
                    verts
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != omit)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect()
        }
        ChildRule::AxisBox => {
            let mut spans = Vec::new();
            for axis in 0..3 {
                let lo = verts.iter().map(|v| v[axis]).min().unwrap();
                let hi = verts.iter().map(|v| v[axis]).max().unwrap();
                if lo != hi {
                    spans.push((axis, lo, hi));
                }
            }
            assert_eq!(spans.len(), k, "box cell has wrong number of spanning axes");
            let mut out = Vec::new();
            for &(axis, lo, hi) in &spans {
                for end in [lo, hi] {
                    let face: Vec<Coord> = verts
                        .iter()
                        .filter(|v| v[axis] == end)
                        .copied()
                        .collect();
                    out.push(face);
                }
            }
            out
        }
        ChildRule::Polygon => match k {
            2 => {
                let n = verts.len();
                (0..n)
                    .map(|i| vec![verts[i], verts[(i + 1) % n]])
                    .collect()
            }
            // edges decompose like simplices
            1 => enumerate_children(verts, k, ChildRule::Simplex),
            _ => panic!("polygon rule applies to 2-complexes only"),
        },
    }
}

impl Motif {
    /// Derive the full motif from top-dimensional cell types.
    pub fn build(
        d: usize,
        strides: Coord,
        slots: Vec<Coord>,
        top_cells: Vec<Vec<Coord>>,
        rule: ChildRule,
    ) -> Motif {
        assert!(d >= 2 && d <= MAX_D);
        // Slot offsets must be distinguishable after reduction by strides.
        {
            let mut seen = std::collections::BTreeSet::new();
            for s in &slots {
                let r = [
                    s[0].rem_euclid(strides[0]),
                    s[1].rem_euclid(strides[1]),
                    s[2].rem_euclid(strides[2].max(1)),
                ];
                assert!(seen.insert(r), "ambiguous slot offsets");
            }
        }

        let mut cells: Vec<Vec<CellType>> = vec![Vec::new(); d + 1];
        // dimension 0: one type per slot
        let mut registries: Vec<BTreeMap<Vec<Coord>, u16>> = vec![BTreeMap::new(); d + 1];
        for (i, &s) in slots.iter().enumerate() {
            cells[0].push(CellType {
                verts: vec![s],
                children: Vec::new(),
                vert_refs: vec![([0; 3], i as u8)],
            });
        }

        // register top cells (canonicalized; anchors must reduce to zero)
        {
            let mut keys: Vec<Vec<Coord>> = Vec::new();
            for tc in &top_cells {
                let (anchor, key) = canonical_key(tc, strides);
                assert_eq!(anchor, [0; 3], "top cells must be anchored at the origin cell");
                keys.push(key);
            }
            let mut sorted = keys.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), top_cells.len(), "duplicate top cell types");
            for key in sorted {
                let id = registries[d].len() as u16;
                registries[d].insert(key, id);
            }
            // store with original vertex order (needed for Polygon children)
            let mut typed: Vec<(u16, Vec<Coord>)> = top_cells
                .iter()
                .map(|tc| {
                    let (_, key) = canonical_key(tc, strides);
                    (registries[d][&key], tc.clone())
                })
                .collect();
            typed.sort_by_key(|(id, _)| *id);
            for (_, verts) in typed {
                cells[d].push(CellType {
                    verts,
                    children: Vec::new(),
                    vert_refs: Vec::new(),
                });
            }
        }

        // A vertex's home cell is the one whose slot offset reproduces its
        // coordinates; this convention (not the coordinate floor) identifies
        // vertices throughout.
        let resolve = {
            let slots = slots.clone();
            move |w: Coord| -> (Coord, u8) {
                for (si, &s) in slots.iter().enumerate() {
                    let diff = sub(w, s);
                    if (0..3).all(|i| diff[i].rem_euclid(strides[i].max(1)) == 0) {
                        let delta = [
                            diff[0].div_euclid(strides[0]),
                            diff[1].div_euclid(strides[1]),
                            diff[2].div_euclid(strides[2].max(1)),
                        ];
                        return (delta, si as u8);
                    }
                }
                panic!("vertex coordinate {w:?} does not resolve to a slot");
            }
        };

        // derive lower dimensions top-down
        for k in (1..=d).rev() {
            if k - 1 > 0 {
                // pass 1: collect child keys and register types
                let mut child_keys: Vec<Vec<Coord>> = Vec::new();
                for ty in &cells[k] {
                    for child in enumerate_children(&ty.verts, k, rule) {
                        let (_, key) = canonical_key(&child, strides);
                        child_keys.push(key);
                    }
                }
                child_keys.sort_unstable();
                child_keys.dedup();
                for key in &child_keys {
                    let next = registries[k - 1].len() as u16;
                    registries[k - 1].entry(key.clone()).or_insert(next);
                }
                // materialize child cell types in id order
                let mut by_id: Vec<(u16, Vec<Coord>)> = registries[k - 1]
                    .iter()
                    .map(|(key, &id)| (id, key.clone()))
                    .collect();
                by_id.sort_unstable();
                cells[k - 1] = by_id
                    .into_iter()
                    .map(|(_, verts)| CellType {
                        verts,
                        children: Vec::new(),
                        vert_refs: Vec::new(),
                    })
                    .collect();
            }
            // pass 2: fill children lists
            for ti in 0..cells[k].len() {
                let children: Vec<RelCell> = enumerate_children(&cells[k][ti].verts, k, rule)
                    .into_iter()
                    .map(|child| {
                        if k == 1 {
                            let (delta, slot) = resolve(child[0]);
                            RelCell {
                                delta,
                                ty: slot as u16,
                            }
                        } else {
                            let (anchor, key) = canonical_key(&child, strides);
                            RelCell {
                                delta: anchor,
                                ty: registries[k - 1][&key],
                            }
                        }
                    })
                    .collect();
                cells[k][ti].children = children;
            }
        }
        for k in 0..=d {
            for ty in cells[k].iter_mut() {
                ty.vert_refs = ty.verts.iter().map(|&w| resolve(w)).collect();
            }
        }

        // vertex stars
        let mut vstar: Vec<Vec<Vec<RelCell>>> = (0..=d)
            .map(|_| vec![Vec::new(); slots.len()])
            .collect();
        for k in 0..=d {
            for (ti, ty) in cells[k].iter().enumerate() {
                for &(delta, slot) in &ty.vert_refs {
                    vstar[k][slot as usize].push(RelCell {
                        delta: [-delta[0], -delta[1], -delta[2]],
                        ty: ti as u16,
                    });
                }
            }
            for star in vstar[k].iter_mut() {
                star.sort_unstable();
                star.dedup();
            }
        }

        // per-slot edge adjacency
        let mut slot_edges: Vec<Vec<NeighborInfo>> = vec![Vec::new(); slots.len()];
        for (slot, star) in vstar[1].iter().enumerate() {
            for &edge in star {
                let ty = &cells[1][edge.ty as usize];
                let self_embed = sub(slots[slot], mul(edge.delta, strides));
                let mut found = false;
                for (vi, &w) in ty.verts.iter().enumerate() {
                    if w != self_embed {
                        continue;
                    }
                    // the other endpoint
                    let oi = 1 - vi;
                    let w_o = ty.verts[oi];
                    let (cd, ns) = ty.vert_refs[oi];
                    slot_edges[slot].push(NeighborInfo {
                        edge,
                        nbr_delta: add(edge.delta, cd),
                        nbr_slot: ns,
                        embed_delta: sub(w_o, self_embed),
                    });
                    found = true;
                    break;
                }
                assert!(found, "edge star entry does not contain its own vertex");
            }
        }

        Motif {
            d,
            strides,
            slots,
            cells,
            vstar,
            slot_edges,
        }
    }

    pub fn ntypes(&self, k: usize) -> usize {
        self.cells[k].len()
    }

    /// Embedded coordinates of a cover vertex.
    pub fn vertex_embed(&self, pos: Coord, slot: u8) -> Coord {
        add(mul(pos, self.strides), self.slots[slot as usize])
    }

    /// Vertices of a cover cell as (position, slot) pairs.
    pub fn cell_vertices(&self, pos: Coord, k: usize, ty: u16) -> Vec<(Coord, u8)> {
        self.cells[k][ty as usize]
            .vert_refs
            .iter()
            .map(|&(delta, slot)| (add(pos, delta), slot))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::families;

    #[test]
    fn cubic_motif_type_counts() {
        let m = families::motif_cubic3d();
        assert_eq!(m.ntypes(0), 1);
        assert_eq!(m.ntypes(1), 3);
        assert_eq!(m.ntypes(2), 3);
        assert_eq!(m.ntypes(3), 1);
    }

    #[test]
    fn bcc_motif_type_counts() {
        let m = families::motif_bcc3d();
        assert_eq!(m.ntypes(0), 2);
        assert_eq!(m.ntypes(1), 14);
        assert_eq!(m.ntypes(2), 24);
        assert_eq!(m.ntypes(3), 12);
        // per-vertex incidence: 14 edges, 36 faces at both slots
        for slot in 0..2 {
            assert_eq!(m.vstar[1][slot].len(), 14);
            assert_eq!(m.vstar[2][slot].len(), 36);
            assert_eq!(m.slot_edges[slot].len(), 14);
        }
    }

    #[test]
    fn square_motif_type_counts() {
        let m = families::motif_square2d();
        assert_eq!(m.ntypes(0), 1);
        assert_eq!(m.ntypes(1), 2);
        assert_eq!(m.ntypes(2), 1);
    }

    #[test]
    fn parallelogram_motif_type_counts() {
        let m = families::motif_parallelogram2d();
        assert_eq!(m.ntypes(0), 3);
        assert_eq!(m.ntypes(1), 6);
        assert_eq!(m.ntypes(2), 3);
        for slot in 0..3 {
            assert_eq!(m.slot_edges[slot].len(), 4);
        }
    }
}
