//! The nested loci w ⊆ lw ⊆ br ⊆ scon ⊆ par, and the local criteria that
//! describe where equivariant bridges and spiral edges can be uncontracted.
//!
//! Membership in a locus is computed generically: mark the cells carrying
//! one of the generating configurations and close downwards in the face
//! poset. The articulation-point criteria are independent descriptions of
//! the same sets and serve as cross-checks (see `search` for brute force).

pub mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::DeltaComplex;
use crate::error::{Error, Result};
use crate::graph::{CutComponent, Dsu};
use crate::pcover::{families, CoverKey, EdgeKind, PCover, SourceCover};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locus {
    W,
    Lw,
    Br,
    Scon,
    Par,
}

impl Locus {
    pub const ALL: [Locus; 5] = [Locus::W, Locus::Lw, Locus::Br, Locus::Scon, Locus::Par];

    pub fn name(self) -> &'static str {
        match self {
            Locus::W => "w",
            Locus::Lw => "lw",
            Locus::Br => "br",
            Locus::Scon => "scon",
            Locus::Par => "par",
        }
    }

    fn rank(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Locus {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Locus::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown locus {s:?} (expected w, lw, br, scon or par)"))
    }
}

// ---------------------------------------------------------------------------
// weight

/// Some fibre carries total vertex genus at least p.
pub fn in_weight_locus(cover: &PCover) -> bool {
    weight_vertex(cover).is_some()
}

fn weight_vertex(cover: &PCover) -> Option<usize> {
    let p = cover.p() as i64;
    (0..cover.target().num_vertices()).find(|&v| cover.fiber_genus(v) >= p)
}

/// Same predicate, by cases on a single vertex instead of the fibre sum.
pub fn in_weight_locus_by_cases(cover: &PCover) -> bool {
    let p = cover.p() as usize;
    let g = cover.target();
    (0..g.num_vertices()).any(|v| {
        let gv = g.genus_at(v);
        if !cover.is_dilated_vertex(v) {
            return gv >= 1;
        }
        let d = cover.dilated_degree(v);
        gv >= 2 || (d >= 2 && gv >= 1) || (gv == 0 && d * (p - 1) >= 4 * p - 2)
    })
}

// ---------------------------------------------------------------------------
// loops and bridges

/// Loops whose preimage is p loops: free loops at dilated vertices, and
/// free loops of gain 0 at free vertices.
pub fn equivariant_loop_edges(cover: &PCover) -> Vec<usize> {
    let g = cover.target();
    (0..g.num_edges())
        .filter(|&e| {
            g.is_loop(e)
                && match cover.edge_kind(e) {
                    EdgeKind::FreeAtDilated => true,
                    EdgeKind::FreeFree => cover.gain(g.edge(e)[0]) == 0,
                    EdgeKind::Dilated => false,
                }
        })
        .collect()
}

/// Contracts every edge outside `keep`; the kept edges stay in order.
pub fn contract_complement(cover: &PCover, keep: &[usize]) -> Result<PCover> {
    let others: Vec<usize> = (0..cover.target().num_edges()).filter(|e| !keep.contains(e)).collect();
    cover.contract_all(&others)
}

/// Contracts `edges` and reports where vertex `v` ends up.
pub(crate) fn contract_tracking(cover: &PCover, edges: &[usize], v: usize) -> Result<(PCover, usize)> {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut c = cover.clone();
    let mut at = v;
    for &e in sorted.iter().rev() {
        at = c.target().contraction_plan(e)?.vertex_map[at];
        c = c.contract(e)?;
    }
    Ok((c, at))
}

/// Bridges whose complement-contraction is the two-vertex cover with a
/// dilated end of genus g − h and a free end of genus h, mapped to h.
pub fn equivariant_h_bridges(cover: &PCover) -> Result<BTreeMap<usize, u32>> {
    let g = cover.target();
    let total = g.genus()?;
    let mut out = BTreeMap::new();
    for e in 0..g.num_edges() {
        if !g.is_bridge(e) {
            continue;
        }
        let c = contract_complement(cover, &[e])?;
        if c.edge_kind(0) != EdgeKind::FreeAtDilated {
            continue;
        }
        let free = if c.is_dilated_vertex(0) { 1 } else { 0 };
        let h = c.target().genus_at(free);
        if h >= 1 && h < total && c.canonical_form().key == families::bridge(cover.p(), total, h).canonical_form().key {
            out.insert(e, h);
        }
    }
    Ok(out)
}

/// Bridges with p lifts that are all bridges of the source.
pub fn bridges_with_bridge_lifts(cover: &PCover) -> Result<Vec<usize>> {
    let src = cover.build_source()?;
    let g = cover.target();
    let s = &src.source;
    let mut lifts: Vec<Vec<usize>> = vec![Vec::new(); g.num_edges()];
    for se in 0..s.num_edges() {
        lifts[g.index_of(src.projection[s.edge(se)[0]])].push(se);
    }
    Ok((0..g.num_edges())
        .filter(|&e| {
            g.is_bridge(e) && lifts[e].len() == cover.p() as usize && lifts[e].iter().all(|&se| s.is_bridge(se))
        })
        .collect())
}

/// Maximal number of stable uncontractions of equivariant 1-bridges at `v`.
pub fn max_1bridge_uncontractions(cover: &PCover, v: usize) -> usize {
    let g = cover.target();
    if g.stability_at(v) == 1 {
        return 0;
    }
    let loops = equivariant_loop_edges(cover).into_iter().filter(|&e| g.edge_vertices(e).0 == v).count();
    let weight = (cover.fiber_genus(v) / cover.p() as i64).max(0) as usize;
    (g.genus_at(v) as usize).min(weight) + loops
}

// ---------------------------------------------------------------------------
// preimages of subgraphs

/// Number of connected components of the preimage of the subgraph on
/// `vertices` and `edges` (edges must have both ends among `vertices`).
fn preimage_components(src: &SourceCover, cover: &PCover, vertices: &[usize], edges: &[usize]) -> usize {
    let t = cover.target();
    let s = &src.source;
    let mut vin = vec![false; t.num_vertices()];
    let mut ein = vec![false; t.num_edges()];
    for &v in vertices {
        vin[v] = true;
    }
    for &e in edges {
        ein[e] = true;
    }
    let over = |x: usize| t.index_of(src.projection[x]);
    let mut dsu = Dsu::new(s.num_vertices());
    for se in 0..s.num_edges() {
        if ein[over(s.edge(se)[0])] {
            let (a, b) = s.edge_vertices(se);
            dsu.union(a, b);
        }
    }
    let roots: BTreeSet<usize> =
        (0..s.num_vertices()).filter(|&sv| vin[over(s.vertex_cell(sv))]).map(|sv| dsu.find(sv)).collect();
    roots.len()
}

/// Whether the cut component `comp` at `v` has trivial preimage away from
/// `v`: p disjoint copies, or p copies glued at a dilated `v`.
fn trivial_away_from(src: &SourceCover, cover: &PCover, v: usize, comp: &CutComponent) -> bool {
    let p = cover.p() as usize;
    if !cover.is_dilated_vertex(v) {
        return preimage_components(src, cover, &comp.vertices, &comp.edges) == p;
    }
    let g = cover.target();
    let rest: Vec<usize> = comp.vertices.iter().copied().filter(|&u| u != v).collect();
    if rest.is_empty() {
        return comp.edges.iter().all(|&e| !cover.is_dilated_edge(e));
    }
    let inner: Vec<usize> = comp
        .edges
        .iter()
        .copied()
        .filter(|&e| {
            let (a, b) = g.edge_vertices(e);
            a != v && b != v
        })
        .collect();
    preimage_components(src, cover, &rest, &inner) == p
}

fn valence_in(cover: &PCover, v: usize, edges: &[usize]) -> usize {
    let g = cover.target();
    g.star(v).iter().filter(|&&h| edges.contains(&g.index_of(h))).count()
}

/// Cut components at `v` with their trivial-preimage flag.
pub fn cut_components_with_preimage(cover: &PCover, v: usize) -> Result<Vec<(CutComponent, bool)>> {
    let src = cover.build_source()?;
    let comps = cover.target().cut_components(v)?;
    Ok(comps
        .into_iter()
        .map(|c| {
            let t = trivial_away_from(&src, cover, v, &c);
            (c, t)
        })
        .collect())
}

/// Vertices that are bridge articulation points of type `h`: some cut
/// component has trivial preimage away from the vertex and genus h + g(v).
pub fn bridge_articulation_vertices(cover: &PCover, h: u32) -> Result<Vec<usize>> {
    let src = cover.build_source()?;
    let g = cover.target();
    let mut out = Vec::new();
    for v in 0..g.num_vertices() {
        let want = h as i64 + g.genus_at(v) as i64;
        let hit = g
            .cut_components(v)?
            .iter()
            .any(|c| g.piece_genus(&c.vertices, &c.edges) == want && trivial_away_from(&src, cover, v, c));
        if hit {
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeArticulation {
    pub h: u32,
    /// vertex -> maximal number of equivariant h-bridges uncontractible there
    pub counts: BTreeMap<usize, usize>,
    pub points: Vec<usize>,
}

impl BridgeArticulation {
    /// The cover lies in the closed star of the covers carrying an equivariant h-bridge.
    pub fn in_bridge_star(&self) -> bool {
        !self.points.is_empty()
    }
}

fn h_bridge_counts(cover: &PCover, src: &SourceCover, h: u32) -> Result<BTreeMap<usize, usize>> {
    let g = cover.target();
    let mut counts = BTreeMap::new();
    for v in 0..g.num_vertices() {
        let gv = g.genus_at(v) as i64;
        let mut r = 0i64;
        let mut rest_valence = 0i64;
        for c in g.cut_components(v)? {
            let val = valence_in(cover, v, &c.edges);
            if val >= 2
                && g.piece_genus(&c.vertices, &c.edges) == h as i64 + gv
                && trivial_away_from(src, cover, v, &c)
            {
                r += 1;
            } else {
                rest_valence += val as i64;
            }
        }
        let n = if 2 * gv - 2 + r + rest_valence <= 0 { r - 1 } else { r };
        counts.insert(v, n.max(0) as usize);
    }
    Ok(counts)
}

/// Per-vertex counts of equivariant h-bridge uncontractions (h ≥ 2) and the
/// articulation points. The cover must have no equivariant h′-bridges and
/// admit no h′-bridge uncontraction for h′ < h.
pub fn bridge_articulation_points(cover: &PCover, h: u32) -> Result<BridgeArticulation> {
    if h < 2 {
        return Err(Error::AssumptionViolated(format!("bridge type {h} must be at least 2")));
    }
    let src = cover.build_source()?;
    let bridges = equivariant_h_bridges(cover)?;
    let g = cover.target();
    for hh in 1..h {
        if let Some((e, _)) = bridges.iter().find(|(_, &t)| t == hh) {
            return Err(Error::AssumptionViolated(format!("edge {e} is an equivariant {hh}-bridge")));
        }
        let blocked = if hh == 1 {
            (0..g.num_vertices()).find(|&v| max_1bridge_uncontractions(cover, v) > 0)
        } else {
            h_bridge_counts(cover, &src, hh)?.into_iter().find(|&(_, n)| n > 0).map(|(v, _)| v)
        };
        if let Some(v) = blocked {
            return Err(Error::AssumptionViolated(format!("a {hh}-bridge can be uncontracted at vertex {v}")));
        }
    }
    Ok(BridgeArticulation { h, counts: h_bridge_counts(cover, &src, h)?, points: bridge_articulation_vertices(cover, h)? })
}

// ---------------------------------------------------------------------------
// spirals

/// Representative of ±a in 1..=(p−1)/2 (1 when p = 2).
pub fn normalize_ascent(a: u32, p: u32) -> u32 {
    let a = a % p;
    a.min(p - a)
}

/// Edges whose complement-contraction is a spiral, with the normalised type.
pub fn spiral_edges(cover: &PCover) -> Result<BTreeMap<usize, u32>> {
    let g = cover.target();
    let mut out = BTreeMap::new();
    for e in 0..g.num_edges() {
        let c = contract_complement(cover, &[e])?;
        let t = c.target();
        if t.num_vertices() == 1 && c.edge_kind(0) == EdgeKind::FreeFree {
            let a = c.gain(t.edge(0)[0]);
            if a != 0 {
                out.insert(e, normalize_ascent(a, cover.p()));
            }
        }
    }
    Ok(out)
}

/// Ascents `a` for which the cut component is a spiral cut component:
/// some nonempty set of half-edges at `v` can be cut so that the rest is
/// connected with trivial preimage and every cycle re-entering `v` through
/// a cut half-edge has ascent `a`.
pub fn spiral_component_ascents(cover: &PCover, v: usize, comp: &CutComponent) -> BTreeSet<u32> {
    let g = cover.target();
    let p = cover.p();
    let tv: Vec<usize> = comp
        .edges
        .iter()
        .flat_map(|&e| g.edge(e))
        .filter(|&h| g.vertex_of(h) == v)
        .collect();
    let mut out = BTreeSet::new();
    let mut pot = vec![0u32; g.num_vertices()];
    for mask in 1u32..(1 << tv.len()) {
        let cut: Vec<usize> = (0..tv.len()).filter(|&i| mask >> i & 1 == 1).map(|i| tv[i]).collect();
        let cut_edges: BTreeSet<usize> = cut.iter().map(|&h| g.index_of(h)).collect();
        let rest: Vec<usize> = comp.edges.iter().copied().filter(|e| !cut_edges.contains(e)).collect();

        // connectivity and a gauge making a spanning tree of the rest trivial
        let mut seen = vec![false; g.num_vertices()];
        let mut stack = vec![v];
        seen[v] = true;
        pot[v] = 0;
        while let Some(u) = stack.pop() {
            for &h in g.star(u) {
                let e = g.index_of(h);
                let w = g.vertex_of(g.involution(h));
                if !seen[w] && rest.contains(&e) {
                    seen[w] = true;
                    pot[w] = (pot[u] + cover.gain(h)) % p;
                    stack.push(w);
                }
            }
        }
        if comp.vertices.iter().any(|&u| !seen[u]) {
            continue;
        }
        let gauged = |h: usize| {
            let (a, b) = (g.vertex_of(h), g.vertex_of(g.involution(h)));
            (cover.gain(h) + pot[a] + p - pot[b]) % p
        };
        if rest.iter().any(|&e| gauged(g.edge(e)[0]) != 0) {
            continue;
        }
        let ascents: BTreeSet<u32> = cut.iter().map(|&h| gauged(g.involution(h))).collect();
        if ascents.len() == 1 {
            out.extend(ascents);
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpiralArticulation {
    /// articulation point -> admissible ascents, normalised up to sign
    pub points: BTreeMap<usize, BTreeSet<u32>>,
}

impl SpiralArticulation {
    /// Normalised ascents shared by every articulation point.
    pub fn common_ascents(&self) -> BTreeSet<u32> {
        let mut it = self.points.values();
        let Some(first) = it.next() else { return BTreeSet::new() };
        it.fold(first.clone(), |acc, s| acc.intersection(s).copied().collect())
    }

    /// All articulation points agree on an ascent (vacuous without points).
    pub fn common_ascent_holds(&self) -> bool {
        self.points.is_empty() || !self.common_ascents().is_empty()
    }
}

/// Spiral articulation points of a free cover.
pub fn spiral_articulation_points(cover: &PCover) -> Result<SpiralArticulation> {
    if !cover.is_free() {
        return Err(Error::DilatedCover);
    }
    let g = cover.target();
    let p = cover.p();
    let mut points = BTreeMap::new();
    for v in 0..g.num_vertices() {
        let mut common: Option<BTreeSet<u32>> = None;
        for c in g.cut_components(v)? {
            let s = spiral_component_ascents(cover, v, &c);
            common = Some(match common {
                None => s,
                Some(acc) => acc.intersection(&s).copied().collect(),
            });
        }
        let types: BTreeSet<u32> =
            common.unwrap_or_default().into_iter().filter(|&a| a != 0).map(|a| normalize_ascent(a, p)).collect();
        if !types.is_empty() {
            points.insert(v, types);
        }
    }
    Ok(SpiralArticulation { points })
}

// ---------------------------------------------------------------------------
// generators of the loci

/// An edge `e` and a component of Γ ∖ {e} whose preimage is disconnected.
pub fn disconnecting_split(cover: &PCover) -> Result<Option<(usize, Vec<usize>)>> {
    let src = cover.build_source()?;
    let g = cover.target();
    for e in 0..g.num_edges() {
        let mut dsu = Dsu::new(g.num_vertices());
        for f in (0..g.num_edges()).filter(|&f| f != e) {
            let (a, b) = g.edge_vertices(f);
            dsu.union(a, b);
        }
        let mut parts: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for v in 0..g.num_vertices() {
            parts.entry(dsu.find(v)).or_default().0.push(v);
        }
        for f in (0..g.num_edges()).filter(|&f| f != e) {
            let r = dsu.find(g.edge_vertices(f).0);
            parts.get_mut(&r).expect("component").1.push(f);
        }
        for (vs, es) in parts.into_values() {
            if preimage_components(&src, cover, &vs, &es) > 1 {
                return Ok(Some((e, vs)));
            }
        }
    }
    Ok(None)
}

/// Two parallel free edges whose 2-cycle lifts to closed 2-cycles: always
/// when an endpoint is dilated, otherwise when the co-oriented gains agree.
pub fn equivariant_parallel_pair(cover: &PCover) -> Option<(usize, usize)> {
    let g = cover.target();
    let ne = g.num_edges();
    for e in 0..ne {
        if g.is_loop(e) || cover.is_dilated_edge(e) {
            continue;
        }
        let [h0, _] = g.edge(e);
        let (a, b) = g.edge_vertices(e);
        for f in e + 1..ne {
            if cover.is_dilated_edge(f) {
                continue;
            }
            let (c, d) = g.edge_vertices(f);
            if !((c == a && d == b) || (c == b && d == a)) {
                continue;
            }
            if cover.edge_kind(e) == EdgeKind::FreeAtDilated {
                return Some((e, f));
            }
            let [k0, k1] = g.edge(f);
            let along = if g.vertex_of(k0) == a { k0 } else { k1 };
            if cover.gain(h0) == cover.gain(along) {
                return Some((e, f));
            }
        }
    }
    None
}

/// Witness for the configuration generating `locus` beyond the previous
/// one, if the cover carries it.
pub fn generator_witness(cover: &PCover, locus: Locus) -> Result<Option<String>> {
    Ok(match locus {
        Locus::W => weight_vertex(cover).map(|v| format!("fibre genus {} over v{v}", cover.fiber_genus(v))),
        Locus::Lw => {
            if let Some(e) = equivariant_loop_edges(cover).first() {
                Some(format!("equivariant loop e{e}"))
            } else {
                equivariant_h_bridges(cover)?.into_iter().find(|&(_, h)| h == 1).map(|(e, _)| format!("1-bridge e{e}"))
            }
        }
        Locus::Br => equivariant_h_bridges(cover)?.into_iter().next().map(|(e, h)| format!("{h}-bridge e{e}")),
        Locus::Scon => disconnecting_split(cover)?.map(|(e, vs)| {
            let names: Vec<String> = vs.iter().map(|v| format!("v{v}")).collect();
            format!("removing e{e} leaves {{{}}} with disconnected preimage", names.join(","))
        }),
        Locus::Par => equivariant_parallel_pair(cover).map(|(e, f)| format!("parallel pair e{e},e{f}")),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CellLoci {
    pub dim: usize,
    pub index: usize,
    pub key: CoverKey,
    /// membership in w, lw, br, scon, par
    pub member: [bool; 5],
    /// generator found on the cell itself, per locus
    pub generators: [Option<String>; 5],
}

impl CellLoci {
    pub fn is_member(&self, locus: Locus) -> bool {
        self.member[locus.rank()]
    }

    /// Why the cell belongs to `locus`: a generator of `locus` or a smaller
    /// locus carried by the cell itself, or a note that membership is
    /// inherited from a coface. Empty for non-members.
    pub fn witness_for(&self, locus: Locus) -> String {
        if !self.is_member(locus) {
            return String::new();
        }
        match self.generators[..=locus.rank()].iter().flatten().next() {
            Some(w) => w.clone(),
            None => "face of a generating cell".into(),
        }
    }

    /// First generator carried by the cell, or a note that membership is
    /// inherited from a coface.
    pub fn witness(&self) -> String {
        if let Some(w) = self.generators.iter().flatten().next() {
            return w.clone();
        }
        if self.member.iter().any(|&m| m) {
            "face of a generating cell".into()
        } else {
            String::new()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LociReport {
    pub genus: u32,
    pub p: u32,
    pub cells: Vec<Vec<CellLoci>>,
}

impl LociReport {
    pub fn compute(x: &DeltaComplex) -> Result<Self> {
        let mut cells = Vec::with_capacity(x.num_levels());
        for n in 0..x.num_levels() {
            let level: Vec<CellLoci> = x
                .level(n)
                .par_iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut generators: [Option<String>; 5] = Default::default();
                    for l in Locus::ALL {
                        generators[l.rank()] = generator_witness(&c.cover, l)?;
                    }
                    Ok(CellLoci { dim: n, index: i, key: c.key.clone(), member: [false; 5], generators })
                })
                .collect::<Result<_>>()?;
            cells.push(level);
        }
        let mut report = LociReport { genus: x.genus, p: x.p, cells };
        for l in Locus::ALL {
            let marked: Vec<Vec<bool>> = report
                .cells
                .iter()
                .map(|lv| lv.iter().map(|c| c.generators[..=l.rank()].iter().any(Option::is_some)).collect())
                .collect();
            let closed = x.close_down(marked);
            for (lv, row) in report.cells.iter_mut().zip(closed) {
                for (c, m) in lv.iter_mut().zip(row) {
                    c.member[l.rank()] = m;
                }
            }
        }
        Ok(report)
    }

    pub fn membership(&self, locus: Locus) -> Vec<Vec<bool>> {
        self.cells.iter().map(|lv| lv.iter().map(|c| c.is_member(locus)).collect()).collect()
    }

    /// Cells that carry a generator of `locus` themselves (no closure, no
    /// smaller loci).
    pub fn generating(&self, locus: Locus) -> Vec<Vec<bool>> {
        self.cells.iter().map(|lv| lv.iter().map(|c| c.generators[locus.rank()].is_some()).collect()).collect()
    }

    pub fn counts(&self, locus: Locus) -> Vec<usize> {
        self.membership(locus).iter().map(|r| r.iter().filter(|&&m| m).count()).collect()
    }

    /// Cell-wise w ⊆ lw ⊆ br ⊆ scon ⊆ par.
    pub fn is_nested(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.member.windows(2).all(|w| !w[0] || w[1]))
    }

    pub fn subcomplex(&self, x: &DeltaComplex, locus: Locus) -> DeltaComplex {
        x.restrict(&self.membership(locus))
    }
}

pub fn locus_subcomplex(x: &DeltaComplex, which: Locus) -> Result<DeltaComplex> {
    Ok(LociReport::compute(x)?.subcomplex(x, which))
}
