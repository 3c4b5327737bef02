//! Brute-force uncontraction searches over a census. Instead of asking
//! which uncontractions a cover admits, look at every cell, contract the
//! relevant edges, and record what was reached.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    contract_tracking, cut_components_with_preimage, equivariant_h_bridges, normalize_ascent, spiral_articulation_points,
    spiral_component_ascents, spiral_edges,
};
use crate::error::Result;
use crate::graph::Dsu;
use crate::pcover::{CoverKey, PCover};

/// Key of a cover with one vertex singled out.
pub fn marked_vertex_key(cover: &PCover, v: usize) -> CoverKey {
    let mut marks = vec![0u32; cover.target().num_vertices()];
    marks[v] = 1;
    cover.canonical_form_marked(Some(&marks), None).key
}

/// For each (cover, vertex) reachable by contracting a connected set of
/// equivariant h-bridges, the largest such set.
#[derive(Clone, Debug, Default)]
pub struct BridgeUncontractions {
    pub h: u32,
    best: BTreeMap<CoverKey, usize>,
}

impl BridgeUncontractions {
    pub fn build<'a>(cells: impl IntoIterator<Item = &'a PCover>, h: u32) -> Result<Self> {
        let mut best: BTreeMap<CoverKey, usize> = BTreeMap::new();
        for rho in cells {
            let g = rho.target();
            let bridges: Vec<usize> =
                equivariant_h_bridges(rho)?.into_iter().filter(|&(_, t)| t == h).map(|(e, _)| e).collect();
            for mask in 1u32..(1 << bridges.len()) {
                let set: Vec<usize> = (0..bridges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| bridges[i]).collect();
                let mut dsu = Dsu::new(g.num_vertices());
                for &e in &set {
                    let (a, b) = g.edge_vertices(e);
                    dsu.union(a, b);
                }
                let ends: BTreeSet<usize> = set
                    .iter()
                    .flat_map(|&e| {
                        let (a, b) = g.edge_vertices(e);
                        [a, b]
                    })
                    .map(|v| dsu.find(v))
                    .collect();
                if ends.len() != 1 {
                    continue;
                }
                let (pi, v) = contract_tracking(rho, &set, g.edge_vertices(set[0]).0)?;
                let slot = best.entry(marked_vertex_key(&pi, v)).or_insert(0);
                *slot = (*slot).max(set.len());
            }
        }
        Ok(Self { h, best })
    }

    /// Largest number of h-bridges found uncontracted at `v` (0 if none).
    pub fn at(&self, cover: &PCover, v: usize) -> usize {
        self.best.get(&marked_vertex_key(cover, v)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.best.len()
    }

    pub fn is_empty(&self) -> bool {
        self.best.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SpiralClass {
    /// the contracted cover, unmarked
    pub contracted: CoverKey,
    /// genus of the vertex the spiral edge contracts to
    pub vertex_genus: u32,
    pub uncontracted: BTreeSet<CoverKey>,
}

/// Single spiral-edge uncontractions grouped by what they contract to.
#[derive(Clone, Debug, Default)]
pub struct SpiralUncontractions {
    /// (marked contracted cover, normalised type) -> uncontracted covers
    pub classes: BTreeMap<(CoverKey, u32), SpiralClass>,
    /// spiral edges whose contraction is free but whose image vertex is not
    /// a spiral articulation point of that type
    pub outside_articulation: usize,
    /// contractions breaking the expected shape: a dilated image must be the
    /// only dilated vertex with trivial cut components; a free image must
    /// have every cut component trivial or spiral of the edge's type
    pub contraction_violations: usize,
    /// spiral edges found on a cover that is not free
    pub on_dilated_covers: usize,
}

impl SpiralUncontractions {
    pub fn build<'a>(cells: impl IntoIterator<Item = &'a PCover>) -> Result<Self> {
        let mut out = Self::default();
        for rho in cells {
            let spirals = spiral_edges(rho)?;
            if !spirals.is_empty() && !rho.is_free() {
                out.on_dilated_covers += 1;
            }
            let rho_key = rho.canonical_form().key;
            for (e, a) in spirals {
                let (pi, v) = contract_tracking(rho, &[e], rho.target().edge_vertices(e).0)?;
                let comps = cut_components_with_preimage(&pi, v)?;
                if !pi.is_free() {
                    let lone = (0..pi.target().num_vertices()).all(|u| pi.is_dilated_vertex(u) == (u == v));
                    if !lone || !comps.iter().all(|(_, trivial)| *trivial) {
                        out.contraction_violations += 1;
                    }
                    continue;
                }
                let shaped = comps.iter().all(|(c, trivial)| {
                    *trivial || spiral_component_ascents(&pi, v, c).iter().any(|&b| normalize_ascent(b, pi.p()) == a)
                });
                if !shaped {
                    out.contraction_violations += 1;
                }
                let points = spiral_articulation_points(&pi)?;
                if !points.points.get(&v).is_some_and(|s| s.contains(&a)) {
                    out.outside_articulation += 1;
                    continue;
                }
                out.classes
                    .entry((marked_vertex_key(&pi, v), a))
                    .or_insert_with(|| SpiralClass {
                        contracted: pi.canonical_form().key,
                        vertex_genus: pi.target().genus_at(v),
                        uncontracted: BTreeSet::new(),
                    })
                    .uncontracted
                    .insert(rho_key.clone());
            }
        }
        Ok(out)
    }

    /// Classes reached from more than one uncontracted cover.
    pub fn ambiguous(&self) -> Vec<(&(CoverKey, u32), &SpiralClass)> {
        self.classes.iter().filter(|(_, s)| s.uncontracted.len() > 1).collect()
    }
}
