//! Explicit source graph of a cover, used to cross-check the target-side
//! description.

use super::{EdgeKind, PCover, Violation};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, WeightedGraph};

#[derive(Clone, Debug)]
pub struct SourceCover {
    pub source: WeightedGraph,
    /// generator of the Z/p action, as a permutation of source cells
    pub action: Vec<usize>,
    /// source cell -> target cell
    pub projection: Vec<usize>,
}

impl PCover {
    /// Builds the source graph with its Z/p action. Fails when the cover is
    /// invalid.
    pub fn build_source(&self) -> Result<SourceCover> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidCover(report.to_string()));
        }
        Ok(self.build_source_unchecked())
    }

    /// Requires every dilated vertex to have nonnegative source genus.
    pub(crate) fn build_source_unchecked(&self) -> SourceCover {
        let g = self.target();
        let p = self.p() as usize;
        let nv = g.num_vertices();
        let mut b = GraphBuilder::new();
        // first source vertex over each target vertex
        let mut base = vec![0; nv];
        let mut vproj = Vec::new();
        let mut vact = Vec::new();
        for v in 0..nv {
            base[v] = vproj.len();
            if self.is_dilated_vertex(v) {
                let sg = self.source_vertex_genus(v);
                debug_assert!(sg >= 0);
                let id = b.vertex(sg.max(0) as u32);
                vproj.push(g.vertex_cell(v));
                vact.push(id);
            } else {
                for k in 0..p {
                    b.vertex(g.genus_at(v));
                    vproj.push(g.vertex_cell(v));
                    vact.push(base[v] + (k + 1) % p);
                }
            }
        }
        let lift = |v: usize, k: usize| -> usize {
            if self.is_dilated_vertex(v) {
                base[v]
            } else {
                base[v] + k % p
            }
        };
        // (target half-edge pair, first source edge index, number of lifts)
        let mut eproj: Vec<(usize, usize, usize)> = Vec::new();
        let mut ne = 0;
        for e in 0..g.num_edges() {
            let [h0, _] = g.edge(e);
            let (x, y) = g.edge_vertices(e);
            match self.edge_kind(e) {
                EdgeKind::Dilated => {
                    b.edge(base[x], base[y]);
                    eproj.push((e, ne, 1));
                    ne += 1;
                }
                kind => {
                    let shift = if kind == EdgeKind::FreeFree { self.gain(h0) as usize } else { 0 };
                    for k in 0..p {
                        b.edge(lift(x, k), lift(y, k + shift));
                    }
                    eproj.push((e, ne, p));
                    ne += p;
                }
            }
        }
        let source = b.build();
        let nsv = source.num_vertices();
        let n = source.num_cells();
        let mut projection = vec![0; n];
        let mut action = vec![0; n];
        for i in 0..nsv {
            projection[i] = vproj[i];
            action[i] = vact[i];
        }
        for &(e, first, count) in &eproj {
            let [h0, h1] = g.edge(e);
            for k in 0..count {
                let c = nsv + 2 * (first + k);
                let next = nsv + 2 * (first + (k + 1) % count);
                projection[c] = h0;
                projection[c + 1] = h1;
                action[c] = next;
                action[c + 1] = next + 1;
            }
        }
        SourceCover { source, action, projection }
    }
}

impl SourceCover {
    /// Checks the source against the cover axioms: connectivity, stability,
    /// both Riemann–Hurwitz relations and the quotient.
    pub(crate) fn check_against(&self, cover: &PCover) -> Vec<Violation> {
        let mut out = Vec::new();
        let s = &self.source;
        let p = cover.p() as i64;
        if !s.is_connected() {
            out.push(Violation::DisconnectedSource);
        }
        for v in 0..s.num_vertices() {
            if !s.is_stable_at(v) {
                out.push(Violation::UnstableSource(v));
                break;
            }
        }
        if let (Ok(gs), Ok(gt)) = (s.genus(), cover.target().genus()) {
            let expected = p * (gt as i64 - 1) + 1;
            if gs as i64 != expected {
                out.push(Violation::GlobalRiemannHurwitz { found: gs as i64, expected });
            }
        }
        if !self.local_riemann_hurwitz(cover) {
            out.push(Violation::LocalRiemannHurwitz(0));
        }
        if !self.quotient_matches(cover) {
            out.push(Violation::QuotientMismatch);
        }
        out
    }

    /// `2g̃ − 2 = d(ṽ)(2g − 2) + Σ (d(h̃) − 1)` at every source vertex.
    pub fn local_riemann_hurwitz(&self, cover: &PCover) -> bool {
        let s = &self.source;
        let t = cover.target();
        let p = cover.p() as i64;
        (0..s.num_vertices()).all(|sv| {
            let v = t.index_of(self.projection[s.vertex_cell(sv)]);
            let dv = if cover.is_dilated_vertex(v) { p } else { 1 };
            let ramification: i64 = s
                .star(sv)
                .iter()
                .map(|&h| if cover.is_dilated_edge(t.index_of(self.projection[h])) { p - 1 } else { 0 })
                .sum();
            2 * s.genus_at(sv) as i64 - 2 == dv * (2 * t.genus_at(v) as i64 - 2) + ramification
        })
    }

    /// The orbit space of the action, mapped by the projection, reproduces
    /// the target: orbits biject with target cells, fibres have size 1 over
    /// dilated cells and p over free ones, and the projection is a graph map.
    pub fn quotient_matches(&self, cover: &PCover) -> bool {
        let s = &self.source;
        let t = cover.target();
        let p = cover.p() as usize;
        let n = s.num_cells();
        for x in 0..n {
            if self.projection[self.action[x]] != self.projection[x]
                || self.action[s.involution(x)] != s.involution(self.action[x])
                || self.action[s.root(x)] != s.root(self.action[x])
                || self.projection[s.involution(x)] != t.involution(self.projection[x])
                || self.projection[s.root(x)] != t.root(self.projection[x])
            {
                return false;
            }
        }
        let mut fiber = vec![0usize; t.num_cells()];
        let mut seen = vec![false; n];
        let mut orbits_over = vec![0usize; t.num_cells()];
        for x in 0..n {
            fiber[self.projection[x]] += 1;
            if !seen[x] {
                orbits_over[self.projection[x]] += 1;
                let mut y = x;
                let mut len = 0;
                while !seen[y] {
                    seen[y] = true;
                    y = self.action[y];
                    len += 1;
                }
                if len != 1 && len != p {
                    return false;
                }
            }
        }
        (0..t.num_cells()).all(|c| {
            let dilated = if t.is_vertex_cell(c) {
                cover.is_dilated_vertex(t.index_of(c))
            } else {
                cover.is_dilated_edge(t.index_of(c))
            };
            orbits_over[c] == 1 && fiber[c] == if dilated { 1 } else { p }
        })
    }
}
