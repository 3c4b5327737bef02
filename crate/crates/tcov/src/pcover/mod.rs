//! Z/p-covers described on the target side.
//!
//! A cover is a stable weighted graph together with the set of dilated
//! vertices and edges, a dilation flow on dilated half-edges and gains
//! (voltages) on edges whose endpoints are both free. The source graph and
//! the group action are derived on demand (see [`PCover::build_source`]).

mod canon;
pub mod families;
mod source;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, HalfEdgeSpec, WeightedGraph};

pub use canon::{CanonicalForm, CoverKey};
pub use source::SourceCover;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PCover {
    p: u32,
    graph: WeightedGraph,
    dilated_vertex: Vec<bool>,
    dilated_edge: Vec<bool>,
    /// per cell; meaningful on dilated half-edges only
    flow: Vec<u32>,
    /// per cell; meaningful on half-edges of free–free edges only
    gain: Vec<u32>,
}

/// How an edge sits in the cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// free edge between free vertices; carries a gain
    FreeFree,
    /// free edge with at least one dilated endpoint
    FreeAtDilated,
    /// dilated edge; carries a flow
    Dilated,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("dilated edge {0} has a free endpoint")]
    DilatedEdgeAtFreeVertex(usize),
    #[error("flow on half-edge {0} is outside 1..p-1")]
    FlowOutOfRange(usize),
    #[error("flow is not antisymmetric on half-edge {0}")]
    FlowNotAntisymmetric(usize),
    #[error("flow is unbalanced at vertex {0}")]
    Unbalanced(usize),
    #[error("gain is not antisymmetric on edge {0}")]
    GainNotAntisymmetric(usize),
    #[error("stray decoration on cell {0}")]
    StrayDecoration(usize),
    #[error("target is disconnected")]
    DisconnectedTarget,
    #[error("target is unstable at vertex {0}")]
    UnstableTarget(usize),
    #[error("source genus over vertex {vertex} is {genus}")]
    NegativeSourceGenus { vertex: usize, genus: i64 },
    #[error("source is disconnected")]
    DisconnectedSource,
    #[error("source is unstable at vertex {0}")]
    UnstableSource(usize),
    #[error("source genus {found} differs from {expected}")]
    GlobalRiemannHurwitz { found: i64, expected: i64 },
    #[error("local Riemann-Hurwitz fails at source vertex {0}")]
    LocalRiemannHurwitz(usize),
    #[error("quotient of the source does not reproduce the target")]
    QuotientMismatch,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Builds covers in the standard graph layout.
#[derive(Clone, Debug)]
pub struct CoverBuilder {
    p: u32,
    graph: GraphBuilder,
    dilated_vertex: Vec<bool>,
    edges: Vec<(usize, usize, EdgeDecoration)>,
}

#[derive(Clone, Copy, Debug)]
enum EdgeDecoration {
    Free(u32),
    Dilated(u32),
}

impl CoverBuilder {
    pub fn new(p: u32) -> Self {
        Self { p, graph: GraphBuilder::new(), dilated_vertex: Vec::new(), edges: Vec::new() }
    }

    pub fn vertex(&mut self, genus: u32, dilated: bool) -> usize {
        self.dilated_vertex.push(dilated);
        self.graph.vertex(genus)
    }

    /// Free edge; `gain` is the gain read from `a` to `b` and is ignored when
    /// either endpoint is dilated.
    pub fn free_edge(&mut self, a: usize, b: usize, gain: u32) -> usize {
        self.graph.edge(a, b);
        self.edges.push((a, b, EdgeDecoration::Free(gain % self.p)));
        self.edges.len() - 1
    }

    /// Dilated edge with flow `flow` on the half-edge at `a`.
    pub fn dilated_edge(&mut self, a: usize, b: usize, flow: u32) -> usize {
        self.graph.edge(a, b);
        self.edges.push((a, b, EdgeDecoration::Dilated(flow % self.p)));
        self.edges.len() - 1
    }

    pub fn build(self) -> Result<PCover> {
        check_prime(self.p)?;
        let p = self.p;
        let graph = self.graph.build();
        let nv = graph.num_vertices();
        let n = graph.num_cells();
        let mut flow = vec![0; n];
        let mut gain = vec![0; n];
        let mut dilated_edge = vec![false; graph.num_edges()];
        for (j, &(a, b, dec)) in self.edges.iter().enumerate() {
            let h = nv + 2 * j;
            match dec {
                EdgeDecoration::Dilated(x) => {
                    dilated_edge[j] = true;
                    flow[h] = x;
                    flow[h + 1] = (p - x) % p;
                }
                EdgeDecoration::Free(x) => {
                    if !self.dilated_vertex[a] && !self.dilated_vertex[b] {
                        gain[h] = x;
                        gain[h + 1] = (p - x) % p;
                    }
                }
            }
        }
        Ok(PCover { p, graph, dilated_vertex: self.dilated_vertex, dilated_edge, flow, gain })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainSpec {
    pub tail: usize,
    pub value: u32,
}

/// JSON form of a cover: the graph format plus dilation data. Edges are
/// identified by their smaller half-edge cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub p: u32,
    #[serde(flatten)]
    pub graph: HalfEdgeSpec,
    #[serde(default)]
    pub dilated_vertices: Vec<usize>,
    #[serde(default)]
    pub dilated_edges: Vec<usize>,
    #[serde(default)]
    pub flow: BTreeMap<String, u32>,
    #[serde(default)]
    pub gains: BTreeMap<String, GainSpec>,
}

fn parse_cell(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::MalformedCover(format!("{s:?} is not a cell index")))
}

impl PCover {
    /// Assembles a cover from per-cell tables. Only structural checks are
    /// made here; the cover axioms are checked by [`PCover::validate`].
    pub fn from_parts(
        p: u32,
        graph: WeightedGraph,
        dilated_vertex: Vec<bool>,
        dilated_edge: Vec<bool>,
        flow: Vec<u32>,
        gain: Vec<u32>,
    ) -> Result<Self> {
        check_prime(p)?;
        let n = graph.num_cells();
        if dilated_vertex.len() != graph.num_vertices()
            || dilated_edge.len() != graph.num_edges()
            || flow.len() != n
            || gain.len() != n
        {
            return Err(Error::MalformedCover("table sizes do not match the graph".into()));
        }
        if let Some(x) = flow.iter().chain(&gain).find(|&&x| x >= p) {
            return Err(Error::MalformedCover(format!("residue {x} is not below p = {p}")));
        }
        Ok(Self { p, graph, dilated_vertex, dilated_edge, flow, gain })
    }

    pub fn from_spec(spec: &CoverSpec) -> Result<Self> {
        check_prime(spec.p)?;
        let graph = WeightedGraph::from_spec(&spec.graph)?;
        let n = graph.num_cells();
        let mut dv = vec![false; graph.num_vertices()];
        for &c in &spec.dilated_vertices {
            if c >= n || !graph.is_vertex_cell(c) {
                return Err(Error::UnknownVertex(c));
            }
            dv[graph.index_of(c)] = true;
        }
        let edge_id = |c: usize| -> Result<usize> {
            if c >= n || graph.is_vertex_cell(c) || graph.edge(graph.index_of(c))[0] != c {
                return Err(Error::UnknownEdge(c));
            }
            Ok(graph.index_of(c))
        };
        let mut de = vec![false; graph.num_edges()];
        for &c in &spec.dilated_edges {
            de[edge_id(c)?] = true;
        }
        let mut flow = vec![0; n];
        for (k, &x) in &spec.flow {
            let h = parse_cell(k)?;
            if h >= n || graph.is_vertex_cell(h) {
                return Err(Error::MalformedCover(format!("flow on non-half-edge {h}")));
            }
            flow[h] = x;
        }
        let mut gain = vec![0; n];
        for (k, g) in &spec.gains {
            let e = edge_id(parse_cell(k)?)?;
            let [h0, h1] = graph.edge(e);
            let (t, s) = if g.tail == h0 {
                (h0, h1)
            } else if g.tail == h1 {
                (h1, h0)
            } else {
                return Err(Error::MalformedCover(format!("gain tail {} is not on edge {k}", g.tail)));
            };
            if g.value >= spec.p {
                return Err(Error::MalformedCover(format!("gain {} is not below p", g.value)));
            }
            gain[t] = g.value;
            gain[s] = (spec.p - g.value) % spec.p;
        }
        Self::from_parts(spec.p, graph, dv, de, flow, gain)
    }

    pub fn to_spec(&self) -> CoverSpec {
        let g = &self.graph;
        let mut flow = BTreeMap::new();
        let mut gains = BTreeMap::new();
        for e in 0..g.num_edges() {
            let [h0, h1] = g.edge(e);
            match self.edge_kind(e) {
                EdgeKind::Dilated => {
                    flow.insert(h0.to_string(), self.flow[h0]);
                    flow.insert(h1.to_string(), self.flow[h1]);
                }
                EdgeKind::FreeFree => {
                    gains.insert(h0.to_string(), GainSpec { tail: h0, value: self.gain[h0] });
                }
                EdgeKind::FreeAtDilated => {}
            }
        }
        CoverSpec {
            p: self.p,
            graph: g.to_spec(),
            dilated_vertices: (0..g.num_vertices())
                .filter(|&v| self.dilated_vertex[v])
                .map(|v| g.vertex_cell(v))
                .collect(),
            dilated_edges: (0..g.num_edges()).filter(|&e| self.dilated_edge[e]).map(|e| g.edge(e)[0]).collect(),
            flow,
            gains,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn target(&self) -> &WeightedGraph {
        &self.graph
    }
    pub fn is_dilated_vertex(&self, v: usize) -> bool {
        self.dilated_vertex[v]
    }
    pub fn is_dilated_edge(&self, e: usize) -> bool {
        self.dilated_edge[e]
    }
    pub fn is_free(&self) -> bool {
        !self.dilated_vertex.iter().any(|&d| d)
    }
    /// Flow on a half-edge (0 when the half-edge is free).
    pub fn flow(&self, h: usize) -> u32 {
        if self.dilated_edge[self.graph.index_of(h)] {
            self.flow[h]
        } else {
            0
        }
    }
    /// Gain read along half-edge `h` (0 unless the edge is free–free).
    pub fn gain(&self, h: usize) -> u32 {
        if self.edge_kind(self.graph.index_of(h)) == EdgeKind::FreeFree {
            self.gain[h]
        } else {
            0
        }
    }

    pub fn edge_kind(&self, e: usize) -> EdgeKind {
        if self.dilated_edge[e] {
            return EdgeKind::Dilated;
        }
        let (a, b) = self.graph.edge_vertices(e);
        if self.dilated_vertex[a] || self.dilated_vertex[b] {
            EdgeKind::FreeAtDilated
        } else {
            EdgeKind::FreeFree
        }
    }

    /// Number of dilated half-edges at `v`.
    pub fn dilated_degree(&self, v: usize) -> usize {
        self.graph.star(v).iter().filter(|&&h| self.dilated_edge[self.graph.index_of(h)]).count()
    }

    /// Genus of one source vertex over `v`.
    pub fn source_vertex_genus(&self, v: usize) -> i64 {
        let g = self.graph.genus_at(v) as i64;
        if !self.dilated_vertex[v] {
            return g;
        }
        let p = self.p as i64;
        let d = self.dilated_degree(v) as i64;
        p * (g - 1) + 1 + d * (p - 1) / 2
    }

    /// Total genus of the fibre over `v`.
    pub fn fiber_genus(&self, v: usize) -> i64 {
        if self.dilated_vertex[v] {
            self.source_vertex_genus(v)
        } else {
            self.p as i64 * self.graph.genus_at(v) as i64
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let g = &self.graph;
        let p = self.p;
        for e in 0..g.num_edges() {
            let [h0, h1] = g.edge(e);
            let (a, b) = g.edge_vertices(e);
            if self.dilated_edge[e] {
                if !self.dilated_vertex[a] || !self.dilated_vertex[b] {
                    out.push(Violation::DilatedEdgeAtFreeVertex(e));
                }
                for h in [h0, h1] {
                    if self.flow[h] == 0 {
                        out.push(Violation::FlowOutOfRange(h));
                    }
                }
                if (self.flow[h0] + self.flow[h1]) % p != 0 {
                    out.push(Violation::FlowNotAntisymmetric(h0));
                }
                if self.gain[h0] != 0 || self.gain[h1] != 0 {
                    out.push(Violation::StrayDecoration(h0));
                }
            } else {
                if self.flow[h0] != 0 || self.flow[h1] != 0 {
                    out.push(Violation::StrayDecoration(h0));
                }
                if self.edge_kind(e) == EdgeKind::FreeFree {
                    if (self.gain[h0] + self.gain[h1]) % p != 0 {
                        out.push(Violation::GainNotAntisymmetric(e));
                    }
                } else if self.gain[h0] != 0 || self.gain[h1] != 0 {
                    out.push(Violation::StrayDecoration(h0));
                }
            }
        }
        for v in 0..g.num_vertices() {
            if self.dilated_vertex[v] {
                let s: u32 = g.star(v).iter().map(|&h| self.flow(h)).sum();
                if s % p != 0 {
                    out.push(Violation::Unbalanced(v));
                }
                let sg = self.source_vertex_genus(v);
                if sg < 0 {
                    out.push(Violation::NegativeSourceGenus { vertex: v, genus: sg });
                }
            }
            if !g.is_stable_at(v) {
                out.push(Violation::UnstableTarget(v));
            }
        }
        if !g.is_connected() {
            out.push(Violation::DisconnectedTarget);
        }
        if out.iter().any(|v| matches!(v, Violation::NegativeSourceGenus { .. })) {
            return ValidationReport { violations: out };
        }
        let src = self.build_source_unchecked();
        out.extend(src.check_against(self));
        ValidationReport { violations: out }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Contracts edge `e` (and its fibre in the source).
    pub fn contract(&self, e: usize) -> Result<PCover> {
        let g = &self.graph;
        let plan = g.contraction_plan(e)?;
        let (a, b) = plan.merged;
        let [h0, _] = g.edge(e);
        let kind = self.edge_kind(e);
        let p = self.p;

        // switching applied before the merge so that the contracted edge has gain 0
        let mut shift = vec![0u32; g.num_vertices()];
        let mut new_dilated = vec![false; plan.genus.len()];
        for v in 0..g.num_vertices() {
            new_dilated[plan.vertex_map[v]] |= self.dilated_vertex[v];
        }
        let m = plan.vertex_map[a];
        match kind {
            EdgeKind::Dilated | EdgeKind::FreeAtDilated => new_dilated[m] = true,
            EdgeKind::FreeFree if a != b => shift[b] = self.gain[h0],
            EdgeKind::FreeFree => {
                if self.gain[h0] != 0 {
                    new_dilated[m] = true;
                }
            }
        }

        let mut cb = CoverBuilder::new(p);
        for (i, &gen) in plan.genus.iter().enumerate() {
            cb.vertex(gen, new_dilated[i]);
        }
        for &f in &plan.kept {
            let [k0, _] = g.edge(f);
            let (x, y) = g.edge_vertices(f);
            let (nx, ny) = (plan.vertex_map[x], plan.vertex_map[y]);
            if self.dilated_edge[f] {
                cb.dilated_edge(nx, ny, self.flow[k0]);
            } else {
                let gain = (self.gain(k0) + shift[x] + p - shift[y]) % p;
                cb.free_edge(nx, ny, gain);
            }
        }
        cb.build()
    }

    /// Contracts a set of edges (given by index in this cover).
    pub fn contract_all(&self, edges: &[usize]) -> Result<PCover> {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut c = self.clone();
        for &e in sorted.iter().rev() {
            c = c.contract(e)?;
        }
        Ok(c)
    }

    /// Switching at a free vertex: gains leaving `v` grow by `amount`,
    /// gains entering `v` shrink by it.
    pub fn switch(&self, v: usize, amount: u32) -> Result<PCover> {
        if v >= self.graph.num_vertices() {
            return Err(Error::UnknownVertex(v));
        }
        if self.dilated_vertex[v] {
            return Err(Error::DilatedVertexSwitch(v));
        }
        let p = self.p;
        let a = amount % p;
        let mut out = self.clone();
        for e in 0..self.graph.num_edges() {
            if self.edge_kind(e) != EdgeKind::FreeFree {
                continue;
            }
            for h in self.graph.edge(e) {
                let from = self.graph.vertex_of(h);
                let to = self.graph.vertex_of(self.graph.involution(h));
                let mut x = self.gain[h];
                if from == v {
                    x = (x + a) % p;
                }
                if to == v {
                    x = (x + p - a) % p;
                }
                out.gain[h] = x;
            }
        }
        Ok(out)
    }

    /// Ascent of a closed walk given as the sequence of traversed half-edges.
    pub fn cycle_ascent(&self, walk: &[usize]) -> Result<u32> {
        let g = &self.graph;
        if walk.is_empty() {
            return Err(Error::InvalidWalk);
        }
        for (i, &h) in walk.iter().enumerate() {
            if h >= g.num_cells() || g.is_vertex_cell(h) {
                return Err(Error::InvalidWalk);
            }
            let next = walk[(i + 1) % walk.len()];
            if next >= g.num_cells() || g.root(g.involution(h)) != g.root(next) {
                return Err(Error::InvalidWalk);
            }
        }
        for &h in walk {
            let e = g.index_of(h);
            if self.dilated_edge[e] {
                return Err(Error::WalkThroughDilatedCell(h));
            }
            let v = g.vertex_of(h);
            if self.dilated_vertex[v] {
                return Err(Error::WalkThroughDilatedCell(g.vertex_cell(v)));
            }
        }
        Ok(walk.iter().map(|&h| self.gain[h]).sum::<u32>() % self.p)
    }

    pub fn isomorphic(&self, other: &PCover) -> Result<bool> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(self.canonical_form().key == other.canonical_form().key)
    }

    /// An isomorphism given by its action on edges, if one exists.
    pub fn isomorphism(&self, other: &PCover) -> Result<Option<Vec<usize>>> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let (a, b) = (self.canonical_form(), other.canonical_form());
        if a.key != b.key {
            return Ok(None);
        }
        let b_inv = crate::present::inverse(b.edge_map());
        Ok(Some(a.edge_map().iter().map(|&q| b_inv[q]).collect()))
    }

    /// Image of the automorphism group in the permutations of edges
    /// (`perm[e]` is the image of edge `e`), sorted and deduplicated.
    pub fn automorphism_edge_group(&self) -> Vec<Vec<usize>> {
        let cf = self.canonical_form();
        let mut out: Vec<Vec<usize>> = cf
            .edge_maps()
            .map(|m| {
                let m_inv = crate::present::inverse(m);
                cf.edge_map().iter().map(|&q| m_inv[q]).collect::<Vec<_>>()
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Applies a cell relabelling to the target (decorations follow).
    pub fn relabel(&self, perm: &[usize]) -> Result<PCover> {
        let graph = self.graph.relabel(perm)?;
        let n = graph.num_cells();
        let mut flow = vec![0; n];
        let mut gain = vec![0; n];
        for x in 0..n {
            flow[perm[x]] = self.flow[x];
            gain[perm[x]] = self.gain[x];
        }
        let mut dv = vec![false; graph.num_vertices()];
        for v in 0..self.graph.num_vertices() {
            dv[graph.index_of(perm[self.graph.vertex_cell(v)])] = self.dilated_vertex[v];
        }
        let mut de = vec![false; graph.num_edges()];
        for e in 0..self.graph.num_edges() {
            de[graph.index_of(perm[self.graph.edge(e)[0]])] = self.dilated_edge[e];
        }
        PCover::from_parts(self.p, graph, dv, de, flow, gain)
    }

    /// Short human-readable description, e.g. `v[1d,0] e[0-0 d2, 0-1 f]`.
    pub fn describe(&self) -> String {
        let g = &self.graph;
        let vs: Vec<String> = (0..g.num_vertices())
            .map(|v| format!("{}{}", g.genus_at(v), if self.dilated_vertex[v] { "d" } else { "" }))
            .collect();
        let es: Vec<String> = (0..g.num_edges())
            .map(|e| {
                let (a, b) = g.edge_vertices(e);
                let h = g.edge(e)[0];
                match self.edge_kind(e) {
                    EdgeKind::Dilated => format!("{a}-{b} d{}", self.flow[h]),
                    EdgeKind::FreeFree => format!("{a}-{b} g{}", self.gain[h]),
                    EdgeKind::FreeAtDilated => format!("{a}-{b} f"),
                }
            })
            .collect();
        format!("v[{}] e[{}]", vs.join(","), es.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(9));
        assert!(matches!(CoverBuilder::new(4).build(), Err(Error::NotPrime(4))));
    }

    #[test]
    fn lone_dilated_half_edge_is_unbalanced() {
        let mut b = CoverBuilder::new(5);
        let u = b.vertex(1, true);
        let v = b.vertex(1, true);
        b.dilated_edge(u, v, 2);
        let c = b.build().unwrap();
        let r = c.validate();
        assert!(r.violations.contains(&Violation::Unbalanced(0)));
    }

    #[test]
    fn trivial_free_theta_has_disconnected_source() {
        let c = free_theta(5, [0, 0, 0]);
        assert!(c.validate().violations.contains(&Violation::DisconnectedSource));
    }

    #[test]
    fn rings_are_valid() {
        for p in [2, 3, 5, 7] {
            for i in 1..p {
                assert!(ring(p, 2, i).is_valid(), "p={p} i={i}");
            }
        }
    }

    #[test]
    fn source_vertex_genera() {
        for p in [3, 5, 7] {
            assert_eq!(ring(p, 2, 1).source_vertex_genus(0), p as i64);
            assert_eq!(butterfly(p, 2).source_vertex_genus(0), 1);
        }
        let mut b = CoverBuilder::new(5);
        let u = b.vertex(0, true);
        let v = b.vertex(0, true);
        for _ in 0..3 {
            b.free_edge(u, v, 0);
        }
        assert_eq!(b.build().unwrap().source_vertex_genus(0), -4);
    }

    #[test]
    fn contraction_examples() {
        // free dumbbell, contract a loop with nonzero gain
        let mut b = CoverBuilder::new(5);
        let u = b.vertex(0, false);
        let v = b.vertex(0, false);
        b.free_edge(u, u, 2);
        b.free_edge(u, v, 0);
        b.free_edge(v, v, 1);
        let d = b.build().unwrap();
        let c = d.contract(0).unwrap();
        assert!(c.is_dilated_vertex(0));
        assert!(c.is_valid());

        // theta with a gain-0 edge -> free figure-eight with loop gains i, j
        let t = free_theta(7, [0, 2, 5]);
        let f = t.contract(0).unwrap();
        assert!(f.is_free() && f.target().num_vertices() == 1);
        let gains: Vec<u32> = (0..2).map(|e| f.gain(f.target().edge(e)[0])).collect();
        assert_eq!(gains, vec![2, 5]);

        // mixed theta, contract the free edge -> dilated figure-eight with flows i, -i
        let m = mixed_theta(5, 2);
        assert!(m.is_valid());
        let free = (0..3).find(|&e| !m.is_dilated_edge(e)).unwrap();
        let f = m.contract(free).unwrap();
        assert!(f.is_valid());
        assert!(f.is_dilated_vertex(0) && f.is_dilated_edge(0) && f.is_dilated_edge(1));
    }

    #[test]
    fn switching_examples() {
        let t = free_theta(5, [1, 2, 4]);
        // switching the tail by -1 lowers every gain by one
        let s = t.switch(0, 4).unwrap();
        assert_eq!(s.canonical_form().key, free_theta(5, [0, 1, 3]).canonical_form().key);
        let gains: Vec<u32> = (0..3).map(|e| s.gain(s.target().edge(e)[0])).collect();
        assert_eq!(gains, vec![0, 1, 3]);
        assert_eq!(t.switch(1, 0).unwrap(), t);
        let sp = spiral(5, 2, 2);
        assert_eq!(sp.switch(0, 3).unwrap(), sp);
        assert!(matches!(ring(5, 2, 1).switch(0, 1), Err(Error::DilatedVertexSwitch(0))));
    }

    #[test]
    fn ascents() {
        let sp = spiral(7, 2, 3);
        let [h, k] = sp.target().edge(0);
        assert_eq!(sp.cycle_ascent(&[h]).unwrap(), 3);
        assert_eq!(sp.cycle_ascent(&[k]).unwrap(), 4);
        let t = free_theta(7, [2, 5, 1]);
        let [h0, _] = t.target().edge(0);
        let [_, k1] = t.target().edge(1);
        assert_eq!(t.cycle_ascent(&[h0, k1]).unwrap(), (2 + 7 - 5) % 7);
        let s = t.switch(0, 3).unwrap();
        assert_eq!(s.cycle_ascent(&[h0, k1]).unwrap(), (2 + 7 - 5) % 7);
        let r = ring(7, 2, 1);
        let [h, _] = r.target().edge(0);
        assert!(matches!(r.cycle_ascent(&[h]), Err(Error::WalkThroughDilatedCell(_))));
    }

    #[test]
    fn canonical_form_examples() {
        for p in [5u32, 7] {
            for a in 1..p {
                assert!(spiral(p, 2, a).isomorphic(&spiral(p, 2, p - a)).unwrap());
            }
        }
        assert!(!spiral(5, 2, 1).isomorphic(&spiral(5, 2, 2)).unwrap());
        assert!(matches!(spiral(5, 2, 1).isomorphic(&spiral(7, 2, 1)), Err(Error::PrimeMismatch(5, 7))));
    }

    #[test]
    fn edge_automorphisms_of_thetas() {
        let has_transposition = |c: &PCover| {
            c.automorphism_edge_group().iter().any(|perm| crate::present::sign(perm) == -1)
        };
        assert!(has_transposition(&free_theta(5, [0, 1, 2])));
        let g = free_theta(7, [0, 1, 3]).automorphism_edge_group();
        assert_eq!(g, vec![vec![0, 1, 2]]);
        assert!(has_transposition(&dilated_theta(7, [1, 1, 5])));
    }

    #[test]
    fn spec_round_trip() {
        for c in [mixed_theta(5, 1), free_theta(5, [0, 1, 3]), ring(3, 2, 2), bridge(5, 2, 1)] {
            let s = c.to_spec();
            let json = serde_json::to_string(&s).unwrap();
            let back: CoverSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(PCover::from_spec(&back).unwrap(), c);
        }
    }
}
