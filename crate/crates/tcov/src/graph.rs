//! Weighted half-edge graphs `(X, ι, r)` with a genus on every vertex.
//!
//! Cells are dense indices. Vertices are the fixed points of the involution
//! (equivalently the image of the root map); the remaining cells are
//! half-edges, paired by the involution into edges. Edges are indexed in
//! increasing order of their smaller half-edge, and vertices in increasing
//! cell order; most of the API speaks in these vertex/edge indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::present::{for_each_presentation, Presentation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    involution: Vec<usize>,
    root: Vec<usize>,
    vertices: Vec<usize>,
    genus: Vec<u32>,
    edges: Vec<[usize; 2]>,
    /// cell -> vertex index (vertices) or edge index (half-edges)
    index: Vec<usize>,
    star: Vec<Vec<usize>>,
}

/// Raw JSON form: `half_edges` is the total number of cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeSpec {
    pub half_edges: usize,
    pub involution: Vec<usize>,
    pub root: Vec<usize>,
    #[serde(default)]
    pub vertex_genus: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClassification {
    pub loops: Vec<usize>,
    pub bridges: Vec<usize>,
    pub parallel_classes: Vec<Vec<usize>>,
}

/// One cut component at a vertex: the vertices (indices, including the cut
/// vertex) and edges (indices) it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutComponent {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Canonical key of a (coloured) weighted graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphKey(pub Vec<u32>);

impl GraphKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_le_bytes()).collect()
    }
}

/// Builds graphs in the standard layout: vertex `i` is cell `i`, edge `j`
/// owns cells `nv + 2j` (at its first endpoint) and `nv + 2j + 1`.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    genus: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, genus: u32) -> usize {
        self.genus.push(genus);
        self.genus.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize) -> usize {
        assert!(a < self.genus.len() && b < self.genus.len(), "edge endpoint out of range");
        self.edges.push((a, b));
        self.edges.len() - 1
    }

    pub fn build(self) -> WeightedGraph {
        let nv = self.genus.len();
        let n = nv + 2 * self.edges.len();
        let mut involution: Vec<usize> = (0..n).collect();
        let mut root: Vec<usize> = (0..n).collect();
        for (j, &(a, b)) in self.edges.iter().enumerate() {
            let h = nv + 2 * j;
            involution[h] = h + 1;
            involution[h + 1] = h;
            root[h] = a;
            root[h + 1] = b;
        }
        WeightedGraph::assemble(involution, root, |v| self.genus[v] as i64)
            .expect("builder output is well formed")
    }
}

impl WeightedGraph {
    pub fn from_maps(
        involution: Vec<usize>,
        root: Vec<usize>,
        genus: &BTreeMap<usize, i64>,
    ) -> Result<Self> {
        let n = involution.len();
        if root.len() != n {
            return Err(Error::MalformedGraph(format!(
                "involution has {} entries but root has {}",
                n,
                root.len()
            )));
        }
        for x in 0..n {
            if involution[x] >= n || root[x] >= n {
                return Err(Error::MalformedGraph(format!("cell {x} maps out of range")));
            }
        }
        for x in 0..n {
            if involution[involution[x]] != x {
                return Err(Error::InvalidInvolution(x));
            }
        }
        for x in 0..n {
            if root[root[x]] != root[x] {
                return Err(Error::InvalidRoot(x));
            }
        }
        for x in 0..n {
            let fixed = involution[x] == x;
            if involution[root[x]] != root[x] || (fixed && root[x] != x) {
                return Err(Error::FixedPointMismatch(x));
            }
        }
        for (&v, &g) in genus {
            if v >= n || root[v] != v {
                return Err(Error::UnknownVertex(v));
            }
            if g < 0 {
                return Err(Error::NegativeGenus { vertex: v, genus: g });
            }
        }
        Self::assemble(involution, root, |v| genus.get(&v).copied().unwrap_or(0))
    }

    fn assemble(involution: Vec<usize>, root: Vec<usize>, genus_of: impl Fn(usize) -> i64) -> Result<Self> {
        let n = involution.len();
        let vertices: Vec<usize> = (0..n).filter(|&x| involution[x] == x).collect();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for h in 0..n {
            let h2 = involution[h];
            if h < h2 {
                index[h] = edges.len();
                index[h2] = edges.len();
                edges.push([h, h2]);
            }
        }
        let mut star = vec![Vec::new(); vertices.len()];
        for h in 0..n {
            if involution[h] != h {
                star[index[root[h]]].push(h);
            }
        }
        let mut genus = Vec::with_capacity(vertices.len());
        for &v in &vertices {
            let g = genus_of(v);
            if g < 0 {
                return Err(Error::NegativeGenus { vertex: v, genus: g });
            }
            genus.push(g as u32);
        }
        Ok(Self { involution, root, vertices, genus, edges, index, star })
    }

    pub fn from_spec(spec: &HalfEdgeSpec) -> Result<Self> {
        if spec.involution.len() != spec.half_edges {
            return Err(Error::MalformedGraph(format!(
                "declared {} cells but involution has {}",
                spec.half_edges,
                spec.involution.len()
            )));
        }
        let mut genus = BTreeMap::new();
        for (k, &g) in &spec.vertex_genus {
            let v: usize = k
                .parse()
                .map_err(|_| Error::MalformedGraph(format!("vertex key {k:?} is not an index")))?;
            genus.insert(v, g);
        }
        Self::from_maps(spec.involution.clone(), spec.root.clone(), &genus)
    }

    pub fn to_spec(&self) -> HalfEdgeSpec {
        HalfEdgeSpec {
            half_edges: self.num_cells(),
            involution: self.involution.clone(),
            root: self.root.clone(),
            vertex_genus: self
                .vertices
                .iter()
                .zip(&self.genus)
                .map(|(v, &g)| (v.to_string(), g as i64))
                .collect(),
        }
    }

    pub fn num_cells(&self) -> usize {
        self.involution.len()
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn involution(&self, x: usize) -> usize {
        self.involution[x]
    }
    pub fn root(&self, x: usize) -> usize {
        self.root[x]
    }
    pub fn is_vertex_cell(&self, x: usize) -> bool {
        self.involution[x] == x
    }
    pub fn vertex_cell(&self, v: usize) -> usize {
        self.vertices[v]
    }
    /// Vertex index of a vertex cell, edge index of a half-edge cell.
    pub fn index_of(&self, x: usize) -> usize {
        self.index[x]
    }
    /// Vertex index at which half-edge `h` is rooted.
    pub fn vertex_of(&self, h: usize) -> usize {
        self.index[self.root[h]]
    }
    pub fn genus_at(&self, v: usize) -> u32 {
        self.genus[v]
    }
    pub fn vertex_genera(&self) -> &[u32] {
        &self.genus
    }
    /// Half-edges `[h, ιh]` of edge `e`, with `h < ιh`.
    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }
    /// Vertex indices of the two ends of `e`, in half-edge order.
    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        let [h, k] = self.edges[e];
        (self.vertex_of(h), self.vertex_of(k))
    }
    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.edge_vertices(e);
        a == b
    }
    /// Half-edges rooted at vertex `v` (the set T_v).
    pub fn star(&self, v: usize) -> &[usize] {
        &self.star[v]
    }
    pub fn valence(&self, v: usize) -> usize {
        self.star[v].len()
    }
    pub fn loops_at(&self, v: usize) -> usize {
        self.star[v].iter().filter(|&&h| self.vertex_of(self.involution[h]) == v).count() / 2
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(None).1 <= 1
    }

    /// Component label per vertex (ignoring one edge), and the count.
    fn components_without(&self, skip: Option<usize>) -> (Vec<usize>, usize) {
        let mut dsu = Dsu::new(self.num_vertices());
        for e in 0..self.num_edges() {
            if Some(e) != skip {
                let (a, b) = self.edge_vertices(e);
                dsu.union(a, b);
            }
        }
        dsu.labels()
    }

    pub fn genus(&self) -> Result<u32> {
        if !self.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        let s: u32 = self.genus.iter().sum();
        Ok((self.num_edges() + 1 - self.num_vertices()) as u32 + s)
    }

    pub fn stability_at(&self, v: usize) -> i64 {
        2 * self.genus[v] as i64 - 2 + self.valence(v) as i64
    }
    pub fn is_stable_at(&self, v: usize) -> bool {
        self.stability_at(v) > 0
    }
    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.is_stable_at(v))
    }

    pub(crate) fn contraction_plan(&self, e: usize) -> Result<ContractionPlan> {
        if e >= self.num_edges() {
            return Err(Error::UnknownEdge(e));
        }
        let (a, b) = self.edge_vertices(e);
        let nv = self.num_vertices();
        let mut vertex_map = vec![0; nv];
        let mut genus = Vec::with_capacity(nv);
        if a == b {
            for v in 0..nv {
                vertex_map[v] = v;
                genus.push(self.genus[v] + u32::from(v == a));
            }
        } else {
            let (keep, gone) = (a.min(b), a.max(b));
            for v in 0..nv {
                if v == gone {
                    continue;
                }
                vertex_map[v] = genus.len();
                genus.push(if v == keep { self.genus[a] + self.genus[b] } else { self.genus[v] });
            }
            vertex_map[gone] = vertex_map[keep];
        }
        let kept = (0..self.num_edges()).filter(|&f| f != e).collect();
        Ok(ContractionPlan { vertex_map, genus, kept, merged: (a, b) })
    }

    pub(crate) fn apply_plan(&self, plan: &ContractionPlan) -> WeightedGraph {
        let mut b = GraphBuilder::new();
        for &g in &plan.genus {
            b.vertex(g);
        }
        for &f in &plan.kept {
            let (x, y) = self.edge_vertices(f);
            b.edge(plan.vertex_map[x], plan.vertex_map[y]);
        }
        b.build()
    }

    /// Contracts edge `e`. The result is in standard layout; the remaining
    /// edges keep their relative order.
    pub fn contract_edge(&self, e: usize) -> Result<WeightedGraph> {
        Ok(self.apply_plan(&self.contraction_plan(e)?))
    }

    /// Renames cells: cell `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<WeightedGraph> {
        let n = self.num_cells();
        let mut inv = vec![0; n];
        let mut root = vec![0; n];
        for x in 0..n {
            inv[perm[x]] = perm[self.involution[x]];
            root[perm[x]] = perm[self.root[x]];
        }
        let genus = self
            .vertices
            .iter()
            .zip(&self.genus)
            .map(|(&v, &g)| (perm[v], g as i64))
            .collect();
        WeightedGraph::from_maps(inv, root, &genus)
    }

    /// Vertex signature used to restrict orderings; invariant under
    /// isomorphism.
    pub(crate) fn vertex_signature(&self, v: usize) -> Vec<u32> {
        vec![self.genus[v], self.valence(v) as u32, self.loops_at(v) as u32]
    }

    /// All cell permutations commuting with ι and r that preserve genus and
    /// the given cell colours. `perm[x]` is the image of cell `x`.
    pub fn automorphisms(&self, colors: &[u32]) -> Vec<Vec<usize>> {
        let nv = self.num_vertices();
        let vsig: Vec<Vec<u32>> = (0..nv)
            .map(|v| {
                let mut s = self.vertex_signature(v);
                s.push(colors[self.vertices[v]]);
                s
            })
            .collect();
        let mut out = Vec::new();
        let mut vmap = vec![usize::MAX; nv];
        let mut used = vec![false; nv];
        self.aut_vertices(0, &vsig, &mut vmap, &mut used, colors, &mut out);
        out
    }

    fn aut_vertices(
        &self,
        v: usize,
        vsig: &[Vec<u32>],
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
        colors: &[u32],
        out: &mut Vec<Vec<usize>>,
    ) {
        let nv = self.num_vertices();
        if v == nv {
            let mut cell_map = vec![usize::MAX; self.num_cells()];
            for u in 0..nv {
                cell_map[self.vertices[u]] = self.vertices[vmap[u]];
            }
            let mut used_e = vec![false; self.num_edges()];
            self.aut_edges(0, vmap, &mut cell_map, &mut used_e, colors, out);
            return;
        }
        for w in 0..nv {
            if !used[w] && vsig[w] == vsig[v] {
                used[w] = true;
                vmap[v] = w;
                self.aut_vertices(v + 1, vsig, vmap, used, colors, out);
                used[w] = false;
            }
        }
    }

    fn aut_edges(
        &self,
        e: usize,
        vmap: &[usize],
        cell_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        colors: &[u32],
        out: &mut Vec<Vec<usize>>,
    ) {
        if e == self.num_edges() {
            out.push(cell_map.clone());
            return;
        }
        let [h0, h1] = self.edges[e];
        let (want0, want1) = (vmap[self.vertex_of(h0)], vmap[self.vertex_of(h1)]);
        for f in 0..self.num_edges() {
            if used[f] {
                continue;
            }
            let [k0, k1] = self.edges[f];
            for (t0, t1) in [(k0, k1), (k1, k0)] {
                if self.vertex_of(t0) == want0
                    && self.vertex_of(t1) == want1
                    && colors[t0] == colors[h0]
                    && colors[t1] == colors[h1]
                {
                    used[f] = true;
                    cell_map[h0] = t0;
                    cell_map[h1] = t1;
                    self.aut_edges(e + 1, vmap, cell_map, used, colors, out);
                    used[f] = false;
                }
                if k0 == k1 {
                    break;
                }
            }
        }
    }

    /// Canonical key and the relabelling taking input cells to canonical
    /// cells (standard layout). Keys agree iff a colour-preserving
    /// isomorphism exists.
    pub fn canonical_labeling(&self, colors: &[u32]) -> (GraphKey, Vec<usize>) {
        let nv = self.num_vertices();
        let vsig: Vec<Vec<u32>> = (0..nv)
            .map(|v| {
                let mut s = self.vertex_signature(v);
                s.push(colors[self.vertices[v]]);
                s
            })
            .collect();
        let esig: Vec<[Vec<u32>; 2]> = self
            .edges
            .iter()
            .map(|&[h, k]| [vec![colors[h], colors[k]], vec![colors[k], colors[h]]])
            .collect();
        let mut best: Option<(Vec<u32>, Presentation)> = None;
        for_each_presentation(self, &vsig, &esig, &mut |p| {
            let enc = self.encode(p, colors);
            if best.as_ref().map_or(true, |(b, _)| enc < *b) {
                best = Some((enc, p.clone()));
            }
        });
        let (key, p) = best.expect("at least one presentation");
        let mut perm = vec![0; self.num_cells()];
        for v in 0..nv {
            perm[self.vertices[v]] = p.vertex_pos[v];
        }
        for e in 0..self.num_edges() {
            let [h, k] = self.edges[e];
            let (t, s) = if p.flipped[e] { (k, h) } else { (h, k) };
            perm[t] = nv + 2 * p.edge_pos[e];
            perm[s] = nv + 2 * p.edge_pos[e] + 1;
        }
        (GraphKey(key), perm)
    }

    pub fn canonical_key(&self) -> GraphKey {
        self.canonical_labeling(&vec![0; self.num_cells()]).0
    }

    fn encode(&self, p: &Presentation, colors: &[u32]) -> Vec<u32> {
        let mut enc = vec![self.num_vertices() as u32, self.num_edges() as u32];
        for &v in &p.vertex_order {
            enc.push(self.genus[v]);
            enc.push(colors[self.vertices[v]]);
        }
        for &e in &p.edge_order {
            let [h, k] = self.edges[e];
            let (t, s) = if p.flipped[e] { (k, h) } else { (h, k) };
            enc.extend([
                p.vertex_pos[self.vertex_of(t)] as u32,
                p.vertex_pos[self.vertex_of(s)] as u32,
                colors[t],
                colors[s],
            ]);
        }
        enc
    }

    /// Maximal decomposition of the graph into pieces glued at `v`.
    pub fn cut_components(&self, v: usize) -> Result<Vec<CutComponent>> {
        let nv = self.num_vertices();
        if v >= nv {
            return Err(Error::UnknownVertex(v));
        }
        let mut dsu = Dsu::new(nv);
        for e in 0..self.num_edges() {
            let (a, b) = self.edge_vertices(e);
            if a != v && b != v {
                dsu.union(a, b);
            }
        }
        // component id: representative of the far vertex, or a fresh id per loop
        let mut groups: BTreeMap<(usize, usize), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for e in 0..self.num_edges() {
            let (a, b) = self.edge_vertices(e);
            let id = if a == v && b == v {
                (1, e)
            } else if a == v {
                (0, dsu.find(b))
            } else {
                (0, dsu.find(a))
            };
            groups.entry(id).or_default().1.push(e);
        }
        for u in 0..nv {
            if u != v {
                if let Some(g) = groups.get_mut(&(0, dsu.find(u))) {
                    g.0.push(u);
                }
            }
        }
        let mut out: Vec<CutComponent> = groups
            .into_values()
            .filter(|(_, edges)| edges.iter().any(|&e| {
                let (a, b) = self.edge_vertices(e);
                a == v || b == v
            }))
            .map(|(mut vertices, edges)| {
                vertices.push(v);
                vertices.sort_unstable();
                CutComponent { vertices, edges }
            })
            .collect();
        if out.is_empty() {
            out.push(CutComponent { vertices: vec![v], edges: Vec::new() });
        }
        out.sort_by(|a, b| a.edges.cmp(&b.edges));
        Ok(out)
    }

    /// Genus `|E| − |V| + 1 + Σ g(v)` of a connected sub-piece.
    pub fn piece_genus(&self, vertices: &[usize], edges: &[usize]) -> i64 {
        let s: i64 = vertices.iter().map(|&v| self.genus[v] as i64).sum();
        edges.len() as i64 - vertices.len() as i64 + 1 + s
    }

    /// The sub-piece as a standalone graph (vertices and edges keep their
    /// relative order).
    pub fn induced(&self, vertices: &[usize], edges: &[usize]) -> WeightedGraph {
        let mut map = vec![usize::MAX; self.num_vertices()];
        let mut b = GraphBuilder::new();
        for &v in vertices {
            map[v] = b.vertex(self.genus[v]);
        }
        for &e in edges {
            let (x, y) = self.edge_vertices(e);
            b.edge(map[x], map[y]);
        }
        b.build()
    }

    pub fn classify_edges(&self) -> EdgeClassification {
        let mut loops = Vec::new();
        let mut bridges = Vec::new();
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let base = self.components_without(None).1;
        for e in 0..self.num_edges() {
            let (a, b) = self.edge_vertices(e);
            if a == b {
                loops.push(e);
                continue;
            }
            if self.components_without(Some(e)).1 > base {
                bridges.push(e);
            }
            classes.entry((a.min(b), a.max(b))).or_default().push(e);
        }
        EdgeClassification { loops, bridges, parallel_classes: classes.into_values().collect() }
    }

    pub fn is_bridge(&self, e: usize) -> bool {
        !self.is_loop(e) && self.components_without(Some(e)).1 > self.components_without(None).1
    }
}

pub(crate) struct ContractionPlan {
    pub vertex_map: Vec<usize>,
    pub genus: Vec<u32>,
    pub kept: Vec<usize>,
    pub merged: (usize, usize),
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }
    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
    /// Dense component labels in order of first appearance, and the count.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[x] = label[r];
        }
        (out, count)
    }
}

/// Small constructors used throughout tests and oracles.
pub mod shapes {
    use super::*;

    pub fn theta() -> WeightedGraph {
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(0), b.vertex(0));
        for _ in 0..3 {
            b.edge(u, v);
        }
        b.build()
    }

    pub fn dumbbell(g1: u32, g2: u32) -> WeightedGraph {
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(g1), b.vertex(g2));
        b.edge(u, u);
        b.edge(u, v);
        b.edge(v, v);
        b.build()
    }

    pub fn figure_eight(g: u32) -> WeightedGraph {
        let mut b = GraphBuilder::new();
        let u = b.vertex(g);
        b.edge(u, u);
        b.edge(u, u);
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::*;
    use super::*;

    fn loop_graph() -> WeightedGraph {
        let mut g = BTreeMap::new();
        g.insert(0, 1);
        WeightedGraph::from_maps(vec![0, 2, 1], vec![0, 0, 0], &g).unwrap()
    }

    #[test]
    fn smallest_loop_graph_has_genus_two() {
        let g = loop_graph();
        assert_eq!(g.genus().unwrap(), 2);
        assert!(g.is_stable());
    }

    #[test]
    fn rejects_malformed_maps() {
        let none = BTreeMap::new();
        assert!(matches!(
            WeightedGraph::from_maps(vec![1, 2, 0], vec![0, 0, 0], &none),
            Err(Error::InvalidInvolution(_))
        ));
        assert!(matches!(
            WeightedGraph::from_maps(vec![0, 2, 1], vec![1, 2, 0], &none),
            Err(Error::InvalidRoot(_))
        ));
        // root lands on a half-edge
        assert!(matches!(
            WeightedGraph::from_maps(vec![0, 2, 1], vec![0, 1, 1], &none),
            Err(Error::FixedPointMismatch(_))
        ));
        let mut neg = BTreeMap::new();
        neg.insert(0, -1);
        assert!(matches!(
            WeightedGraph::from_maps(vec![0, 2, 1], vec![0, 0, 0], &neg),
            Err(Error::NegativeGenus { .. })
        ));
    }

    #[test]
    fn spec_round_trip() {
        let t = theta();
        assert_eq!(t.num_cells() - t.num_vertices(), 6);
        let back = WeightedGraph::from_spec(&t.to_spec()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn genera() {
        assert_eq!(dumbbell(0, 0).genus().unwrap(), 2);
        assert_eq!(theta().genus().unwrap(), 2);
        let mut b = GraphBuilder::new();
        b.vertex(2);
        assert_eq!(b.build().genus().unwrap(), 2);
        let mut b = GraphBuilder::new();
        b.vertex(1);
        b.vertex(1);
        assert!(matches!(b.build().genus(), Err(Error::DisconnectedGraph)));
    }

    #[test]
    fn stability_values() {
        let mut b = GraphBuilder::new();
        let (u, v, w) = (b.vertex(0), b.vertex(1), b.vertex(0));
        b.edge(u, v);
        b.edge(u, w);
        let g = b.build();
        assert!(!g.is_stable_at(u)); // genus 0, valence 2
        assert!(g.is_stable_at(v)); // genus 1, valence 1
        assert_eq!(theta().stability_at(0), 1);
    }

    #[test]
    fn contractions() {
        let d = dumbbell(0, 0);
        assert_eq!(d.contract_edge(1).unwrap().canonical_key(), figure_eight(0).canonical_key());
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(1), b.vertex(0));
        b.edge(u, v);
        b.edge(v, v);
        assert_eq!(d.contract_edge(0).unwrap().canonical_key(), b.build().canonical_key());
        assert_eq!(theta().contract_edge(0).unwrap().canonical_key(), figure_eight(0).canonical_key());
        assert!(matches!(theta().contract_edge(3), Err(Error::UnknownEdge(3))));
    }

    #[test]
    fn automorphism_orders() {
        let t = theta();
        assert_eq!(t.automorphisms(&vec![0; t.num_cells()]).len(), 12);
        let f = figure_eight(0);
        assert_eq!(f.automorphisms(&vec![0; f.num_cells()]).len(), 8);
        let d = dumbbell(1, 0);
        assert_eq!(d.automorphisms(&vec![0; d.num_cells()]).len(), 4);
    }

    #[test]
    fn canonical_keys_distinguish() {
        let t = theta();
        let perm = vec![1, 0, 7, 6, 5, 4, 3, 2];
        let rt = t.relabel(&perm).unwrap();
        assert_eq!(t.canonical_key(), rt.canonical_key());
        assert_ne!(t.canonical_key(), dumbbell(0, 0).canonical_key());

        // colour the two loops of a dumbbell (cells 2,3 and 6,7) differently
        let d = dumbbell(0, 0);
        let mut ab = vec![0; d.num_cells()];
        ab[2] = 1;
        ab[3] = 1;
        ab[6] = 2;
        ab[7] = 2;
        let mut ba = vec![0; d.num_cells()];
        ba[2] = 2;
        ba[3] = 2;
        ba[6] = 1;
        ba[7] = 1;
        assert_eq!(d.canonical_labeling(&ab).0, d.canonical_labeling(&ba).0);
    }

    #[test]
    fn relabeling_permutation_is_an_isomorphism() {
        let d = dumbbell(1, 0);
        let (_, perm) = d.canonical_labeling(&vec![0; d.num_cells()]);
        let c = d.relabel(&perm).unwrap();
        assert_eq!(c.canonical_key(), d.canonical_key());
    }

    #[test]
    fn cut_component_examples() {
        let d = dumbbell(0, 0);
        assert_eq!(d.cut_components(0).unwrap().len(), 2);
        assert_eq!(theta().cut_components(0).unwrap().len(), 1);
        assert_eq!(figure_eight(0).cut_components(0).unwrap().len(), 2);
        assert!(matches!(theta().cut_components(5), Err(Error::UnknownVertex(5))));
    }

    #[test]
    fn edge_classes() {
        let c = dumbbell(0, 0).classify_edges();
        assert_eq!((c.loops.len(), c.bridges.len()), (2, 1));
        let c = theta().classify_edges();
        assert_eq!((c.loops.len(), c.bridges.len()), (0, 0));
        assert_eq!(c.parallel_classes, vec![vec![0, 1, 2]]);
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(1), b.vertex(1));
        b.edge(u, v);
        assert_eq!(b.build().classify_edges().bridges, vec![0]);
    }
}
