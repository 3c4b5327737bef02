//! Exhaustive enumeration of stable weighted graphs and of their p-covers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dsu, GraphBuilder, GraphKey, WeightedGraph};
use crate::pcover::{check_prime, CoverKey, CoverSpec, EdgeKind, PCover};

/// All connected stable weighted graphs of genus `g` with `k` edges, one per
/// isomorphism class, sorted by canonical key.
pub fn stable_weighted_graphs(g: u32, k: usize) -> Vec<WeightedGraph> {
    if g < 2 {
        return Vec::new();
    }
    let max_v = (k + 1).min(2 * g as usize - 2);
    let mut found: BTreeMap<GraphKey, WeightedGraph> = BTreeMap::new();
    for nv in 1..=max_v {
        // vertex genera must sum to g − (k − nv + 1)
        let Some(genus_sum) = (g as i64 - (k as i64 - nv as i64 + 1)).try_into().ok() else {
            continue;
        };
        let pairs: Vec<(usize, usize)> =
            (0..nv).flat_map(|i| (i..nv).map(move |j| (i, j))).collect();
        let mut genera = Vec::new();
        compositions(genus_sum, nv, &mut Vec::new(), &mut genera);
        let mut choice = Vec::with_capacity(k);
        multisets(pairs.len(), k, 0, &mut choice, &mut |edges| {
            if !spans_connected(nv, edges.iter().map(|&i| pairs[i])) {
                return;
            }
            for gs in &genera {
                let mut b = GraphBuilder::new();
                for &x in gs {
                    b.vertex(x);
                }
                for &i in edges {
                    b.edge(pairs[i].0, pairs[i].1);
                }
                let graph = b.build();
                if graph.is_stable() {
                    found.entry(graph.canonical_key()).or_insert(graph);
                }
            }
        });
    }
    found.into_values().collect()
}

fn spans_connected(nv: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut dsu = Dsu::new(nv);
    let mut comps = nv;
    for (a, b) in edges {
        if dsu.union(a, b) {
            comps -= 1;
        }
    }
    comps == 1
}

fn compositions(total: u32, parts: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        acc.push(total);
        out.push(acc.clone());
        acc.pop();
        return;
    }
    for x in 0..=total {
        acc.push(x);
        compositions(total - x, parts - 1, acc, out);
        acc.pop();
    }
}

fn multisets(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for i in start..n {
        acc.push(i);
        multisets(n, k, i, acc, f);
        acc.pop();
    }
}

/// Every valid p-cover of `graph` up to isomorphism, keyed canonically.
pub fn covers_of(graph: &WeightedGraph, p: u32) -> Result<BTreeMap<CoverKey, PCover>> {
    check_prime(p)?;
    let nv = graph.num_vertices();
    let found: Vec<(CoverKey, PCover)> = (0u32..1 << nv)
        .into_par_iter()
        .flat_map_iter(|mask| {
            let mut local = BTreeMap::new();
            covers_with_dilated_set(graph, p, mask, &mut local);
            local.into_iter()
        })
        .collect();
    Ok(found.into_iter().collect())
}

fn covers_with_dilated_set(graph: &WeightedGraph, p: u32, mask: u32, out: &mut BTreeMap<CoverKey, PCover>) {
    let nv = graph.num_vertices();
    let ne = graph.num_edges();
    let dilated: Vec<bool> = (0..nv).map(|v| mask >> v & 1 == 1).collect();
    let candidates: Vec<usize> = (0..ne)
        .filter(|&e| {
            let (a, b) = graph.edge_vertices(e);
            dilated[a] && dilated[b]
        })
        .collect();
    let source_genus = |v: usize, d: usize| -> i64 {
        let pi = p as i64;
        pi * (graph.genus_at(v) as i64 - 1) + 1 + d as i64 * (pi - 1) / 2
    };
    // prune dilated sets that cannot reach nonnegative source genus
    let max_degree = |v: usize| -> usize {
        graph.star(v).iter().filter(|&&h| candidates.contains(&graph.index_of(h))).count()
    };
    if (0..nv).any(|v| dilated[v] && source_genus(v, max_degree(v)) < 0) {
        return;
    }

    for sub in 0u32..1 << candidates.len() {
        let dil_edges: Vec<usize> =
            (0..candidates.len()).filter(|&i| sub >> i & 1 == 1).map(|i| candidates[i]).collect();
        let mut dilated_edge = vec![false; ne];
        for &e in &dil_edges {
            dilated_edge[e] = true;
        }
        let degree: Vec<usize> = (0..nv)
            .map(|v| graph.star(v).iter().filter(|&&h| dilated_edge[graph.index_of(h)]).count())
            .collect();
        if (0..nv).any(|v| dilated[v] && (degree[v] == 1 || source_genus(v, degree[v]) < 0)) {
            continue;
        }
        let mut flows = Vec::new();
        balanced_flows(graph, p, &dil_edges, &mut vec![0; graph.num_cells()], 0, &mut flows);
        for flow in flows {
            gains_and_collect(graph, p, &dilated, &dilated_edge, flow, out);
        }
    }
}

/// Backtracking over dilated edges; a vertex's balance is checked as soon as
/// its last dilated edge has a flow.
fn balanced_flows(
    graph: &WeightedGraph,
    p: u32,
    edges: &[usize],
    flow: &mut Vec<u32>,
    i: usize,
    out: &mut Vec<Vec<u32>>,
) {
    if i == edges.len() {
        out.push(flow.clone());
        return;
    }
    let e = edges[i];
    let [h0, h1] = graph.edge(e);
    let (a, b) = graph.edge_vertices(e);
    let closes = |v: usize| edges[i + 1..].iter().all(|&f| {
        let (x, y) = graph.edge_vertices(f);
        x != v && y != v
    });
    for x in 1..p {
        flow[h0] = x;
        flow[h1] = p - x;
        let balanced = |v: usize| graph.star(v).iter().map(|&h| flow[h]).sum::<u32>() % p == 0;
        if (!closes(a) || balanced(a)) && (!closes(b) || balanced(b)) {
            balanced_flows(graph, p, edges, flow, i + 1, out);
        }
    }
    flow[h0] = 0;
    flow[h1] = 0;
}

fn gains_and_collect(
    graph: &WeightedGraph,
    p: u32,
    dilated: &[bool],
    dilated_edge: &[bool],
    flow: Vec<u32>,
    out: &mut BTreeMap<CoverKey, PCover>,
) {
    let nv = graph.num_vertices();
    let free_free: Vec<usize> = (0..graph.num_edges())
        .filter(|&e| {
            let (a, b) = graph.edge_vertices(e);
            !dilated_edge[e] && !dilated[a] && !dilated[b]
        })
        .collect();
    // gauge fixed on a spanning forest: the remaining edges take every value
    let mut dsu = Dsu::new(nv);
    let varying: Vec<usize> = free_free
        .iter()
        .copied()
        .filter(|&e| {
            let (a, b) = graph.edge_vertices(e);
            !dsu.union(a, b)
        })
        .collect();
    let total = (p as u64).pow(varying.len() as u32);
    let mut gain = vec![0u32; graph.num_cells()];
    for code in 0..total {
        let mut c = code;
        for &e in &varying {
            let x = (c % p as u64) as u32;
            c /= p as u64;
            let [h0, h1] = graph.edge(e);
            gain[h0] = x;
            gain[h1] = (p - x) % p;
        }
        let cover = PCover::from_parts(
            p,
            graph.clone(),
            dilated.to_vec(),
            dilated_edge.to_vec(),
            flow.clone(),
            gain.clone(),
        )
        .expect("enumerated tables are well formed");
        if !cover.is_valid() {
            continue;
        }
        let key = cover.canonical_form().key;
        if !out.contains_key(&key) {
            out.insert(key, cover);
        }
    }
}

/// Resource caps for a census run.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_cells: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_cells: 1_000_000, deadline: None }
    }
}

impl Budget {
    fn check(&self, cells: usize) -> Result<()> {
        if cells > self.max_cells {
            return Err(Error::ResourceBudgetExceeded(format!(
                "{cells} cells exceed the cap of {}",
                self.max_cells
            )));
        }
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::ResourceBudgetExceeded("time cap reached".into()));
        }
        Ok(())
    }
}

/// One census representative: its canonical key and the decoded cover,
/// whose edge order is the canonical one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusCell {
    pub key: CoverKey,
    pub cover: PCover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusLevel {
    pub genus: u32,
    pub p: u32,
    pub dimension: usize,
    pub cells: Vec<CensusCell>,
}

impl CensusLevel {
    pub fn len(&self) -> usize {
        self.cells.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, key: &CoverKey) -> Option<usize> {
        self.cells.binary_search_by(|c| c.key.cmp(key)).ok()
    }

    /// Counts per (target type, family).
    pub fn counts(&self) -> BTreeMap<(String, String), usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry((target_type(c.cover.target()), family(&c.cover).to_string())).or_insert(0) += 1;
        }
        out
    }
}

/// Short name of the target graph's isomorphism type, built from its
/// canonical relabelling: vertex genera, then edges as position pairs.
pub fn target_type(graph: &WeightedGraph) -> String {
    let (_, perm) = graph.canonical_labeling(&vec![0; graph.num_cells()]);
    let canon = graph.relabel(&perm).expect("canonical relabelling is a bijection");
    let vs: Vec<String> = canon.vertex_genera().iter().map(|g| g.to_string()).collect();
    let es: Vec<String> = (0..canon.num_edges())
        .map(|e| {
            let (a, b) = canon.edge_vertices(e);
            format!("{a}{b}")
        })
        .collect();
    format!("g({}) e({})", vs.join(","), es.join(","))
}

/// `free` (no dilation), `dilated` (every cell dilated) or `mixed`.
pub fn family(cover: &PCover) -> &'static str {
    let g = cover.target();
    if cover.is_free() {
        "free"
    } else if (0..g.num_vertices()).all(|v| cover.is_dilated_vertex(v))
        && (0..g.num_edges()).all(|e| cover.edge_kind(e) == EdgeKind::Dilated)
    {
        "dilated"
    } else {
        "mixed"
    }
}

/// Census level of dimension `n` (covers with `n + 1` edges).
pub fn census_level(g: u32, p: u32, n: usize) -> Result<CensusLevel> {
    check_prime(p)?;
    let graphs = stable_weighted_graphs(g, n + 1);
    let per_graph: Vec<BTreeMap<CoverKey, PCover>> =
        graphs.par_iter().map(|gr| covers_of(gr, p)).collect::<Result<_>>()?;
    let mut all: BTreeMap<CoverKey, PCover> = BTreeMap::new();
    for m in per_graph {
        all.extend(m);
    }
    let cells = all
        .into_keys()
        .map(|key| {
            let cover = key.decode()?;
            Ok(CensusCell { key, cover })
        })
        .collect::<Result<_>>()?;
    Ok(CensusLevel { genus: g, p, dimension: n, cells })
}

/// Dimensions `0 ..= 3g − 4`.
pub fn top_dimension(g: u32) -> usize {
    3 * g as usize - 4
}

/// Full census for `(g, p)`.
pub fn all_cells(g: u32, p: u32, budget: Budget) -> Result<Vec<CensusLevel>> {
    all_cells_cached(g, p, budget, None).map(|(levels, _)| levels)
}

/// Full census, reading and writing the cache under `cache` when given.
/// Returns warnings about unusable cache entries alongside the levels.
pub fn all_cells_cached(
    g: u32,
    p: u32,
    budget: Budget,
    cache: Option<&Path>,
) -> Result<(Vec<CensusLevel>, Vec<String>)> {
    check_prime(p)?;
    if g < 2 {
        return Err(Error::MalformedGraph(format!("genus {g} is below 2")));
    }
    let mut levels = Vec::new();
    let mut warnings = Vec::new();
    let mut total = 0;
    for n in 0..=top_dimension(g) {
        let cached = match cache {
            Some(dir) => match load_level(dir, g, p, n) {
                Ok(level) => level,
                Err(e) => {
                    warnings.push(format!("ignoring cache entry for n={n}: {e}"));
                    None
                }
            },
            None => None,
        };
        let level = match cached {
            Some(level) => level,
            None => {
                let level = census_level(g, p, n)?;
                if let Some(dir) = cache {
                    if let Err(e) = store_level(dir, &level) {
                        warnings.push(format!("could not write cache entry for n={n}: {e}"));
                    }
                }
                level
            }
        };
        total += level.len();
        budget.check(total)?;
        levels.push(level);
    }
    Ok((levels, warnings))
}

pub const CACHE_VERSION: &str = concat!("census-v1-", env!("CARGO_PKG_VERSION"));

#[derive(Serialize, Deserialize)]
struct CachedLevel {
    version: String,
    genus: u32,
    p: u32,
    dimension: usize,
    keys: Vec<CoverKey>,
}

pub fn cache_path(dir: &Path, g: u32, p: u32, n: usize) -> PathBuf {
    dir.join("cache").join(format!("g{g}_p{p}")).join(format!("n{n}.json"))
}

/// `Ok(None)` when absent or written by a different version.
pub fn load_level(dir: &Path, g: u32, p: u32, n: usize) -> Result<Option<CensusLevel>> {
    let path = cache_path(dir, g, p, n);
    if !path.exists() {
        return Ok(None);
    }
    let c: CachedLevel = serde_json::from_str(&fs::read_to_string(path)?)?;
    if c.version != CACHE_VERSION {
        return Ok(None);
    }
    if (c.genus, c.p, c.dimension) != (g, p, n) {
        return Err(Error::MalformedCover("cache entry describes another census".into()));
    }
    let mut cells = Vec::with_capacity(c.keys.len());
    for key in c.keys {
        let cover = key.decode()?;
        if cover.p() != p || cover.target().num_edges() != n + 1 || cover.canonical_form().key != key {
            return Err(Error::MalformedCover("cache entry is not canonical".into()));
        }
        cells.push(CensusCell { key, cover });
    }
    if cells.windows(2).any(|w| w[0].key >= w[1].key) {
        return Err(Error::MalformedCover("cache entry is not sorted".into()));
    }
    Ok(Some(CensusLevel { genus: g, p, dimension: n, cells }))
}

pub fn store_level(dir: &Path, level: &CensusLevel) -> Result<()> {
    let path = cache_path(dir, level.genus, level.p, level.dimension);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let c = CachedLevel {
        version: CACHE_VERSION.to_string(),
        genus: level.genus,
        p: level.p,
        dimension: level.dimension,
        keys: level.cells.iter().map(|c| c.key.clone()).collect(),
    };
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&c)?)?;
    fs::rename(tmp, path)?;
    Ok(())
}

/// Per-cell JSON dump.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellRecord {
    pub dimension: usize,
    pub index: usize,
    pub key: CoverKey,
    pub target_type: String,
    pub family: String,
    pub cover: CoverSpec,
}

impl CensusLevel {
    pub fn records(&self) -> Vec<CellRecord> {
        self.cells
            .iter()
            .enumerate()
            .map(|(index, c)| CellRecord {
                dimension: self.dimension,
                index,
                key: c.key.clone(),
                target_type: target_type(c.cover.target()),
                family: family(&c.cover).to_string(),
                cover: c.cover.to_spec(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shapes;
    use crate::pcover::families::*;

    fn keys(gs: &[WeightedGraph]) -> Vec<GraphKey> {
        let mut k: Vec<GraphKey> = gs.iter().map(|g| g.canonical_key()).collect();
        k.sort();
        k
    }

    #[test]
    fn genus_two_graphs() {
        let mut expect = vec![shapes::theta().canonical_key(), shapes::dumbbell(0, 0).canonical_key()];
        expect.sort();
        assert_eq!(keys(&stable_weighted_graphs(2, 3)), expect);

        let mut b = GraphBuilder::new();
        let v = b.vertex(1);
        b.edge(v, v);
        let lp = b.build();
        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(1), b.vertex(1));
        b.edge(u, v);
        let br = b.build();
        let mut expect = vec![lp.canonical_key(), br.canonical_key()];
        expect.sort();
        assert_eq!(keys(&stable_weighted_graphs(2, 1)), expect);

        let mut b = GraphBuilder::new();
        let (u, v) = (b.vertex(0), b.vertex(1));
        b.edge(u, u);
        b.edge(u, v);
        let mut expect = vec![shapes::figure_eight(0).canonical_key(), b.build().canonical_key()];
        expect.sort();
        assert_eq!(keys(&stable_weighted_graphs(2, 2)), expect);
    }

    #[test]
    fn theta_covers_at_five() {
        let covers = covers_of(&shapes::theta(), 5).unwrap();
        assert_eq!(covers.len(), 8);
        assert!(covers.contains_key(&mixed_theta(5, 1).canonical_form().key));
        assert!(covers.contains_key(&dilated_theta(5, [1, 1, 3]).canonical_form().key));
        assert!(covers.values().all(|c| c.is_valid()));
    }

    #[test]
    fn theta_free_distinct_at_seven() {
        let covers = covers_of(&shapes::theta(), 7).unwrap();
        let distinct = covers
            .values()
            .filter(|c| {
                let mut gs: Vec<u32> = (0..3).map(|e| c.gain(c.target().edge(e)[0])).collect();
                gs.sort();
                gs.dedup();
                c.is_free() && gs.len() == 3
            })
            .count();
        assert_eq!(distinct, 4);
    }

    #[test]
    fn vertices_at_five() {
        let level = census_level(2, 5, 0).unwrap();
        let mut expect: Vec<CoverKey> = [
            butterfly(5, 2),
            bridge(5, 2, 1),
            parallel_bridge(5, 2, 1),
            spiral(5, 2, 1),
            spiral(5, 2, 2),
            ring(5, 2, 1),
            ring(5, 2, 2),
        ]
        .iter()
        .map(|c| c.canonical_form().key)
        .collect();
        expect.sort();
        let got: Vec<CoverKey> = level.cells.iter().map(|c| c.key.clone()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn maximal_cells_small_primes() {
        assert_eq!(census_level(2, 2, 2).unwrap().len(), 7);
        assert_eq!(census_level(2, 3, 2).unwrap().len(), 9);
        assert_eq!(census_level(2, 5, 2).unwrap().len(), 22);
    }

    #[test]
    fn budget_is_enforced() {
        let r = all_cells(2, 5, Budget { max_cells: 10, deadline: None });
        assert!(matches!(r, Err(Error::ResourceBudgetExceeded(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (a, w) = all_cells_cached(2, 3, Budget::default(), Some(dir.path())).unwrap();
        assert!(w.is_empty());
        assert!(cache_path(dir.path(), 2, 3, 2).exists());
        let (b, _) = all_cells_cached(2, 3, Budget::default(), Some(dir.path())).unwrap();
        assert_eq!(a, b);
        fs::write(cache_path(dir.path(), 2, 3, 1), "{not json").unwrap();
        let (c, w) = all_cells_cached(2, 3, Budget::default(), Some(dir.path())).unwrap();
        assert_eq!(a, c);
        assert_eq!(w.len(), 1);
    }
}
