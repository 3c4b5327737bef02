//! Randomised invariants of graphs, covers and the assembled complex.

mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::Index;

use tcov::census::{all_cells, stable_weighted_graphs, Budget, CensusCell, CensusLevel};
use tcov::complex::{DeltaComplex, LabeledCover, TieBreak};
use tcov::{PCover, WeightedGraph};

fn graphs() -> &'static Vec<WeightedGraph> {
    static G: OnceLock<Vec<WeightedGraph>> = OnceLock::new();
    G.get_or_init(|| {
        let mut out = Vec::new();
        for g in [2, 3] {
            for k in 1..=4 {
                out.extend(stable_weighted_graphs(g, k));
            }
        }
        out
    })
}

const SPACES: [(u32, u32); 5] = [(2, 3), (2, 5), (2, 7), (3, 2), (3, 3)];

fn censuses() -> &'static BTreeMap<(u32, u32), Vec<CensusLevel>> {
    static C: OnceLock<BTreeMap<(u32, u32), Vec<CensusLevel>>> = OnceLock::new();
    C.get_or_init(|| SPACES.iter().map(|&(g, p)| ((g, p), all_cells(g, p, Budget::default()).unwrap())).collect())
}

fn cells() -> &'static Vec<PCover> {
    static C: OnceLock<Vec<PCover>> = OnceLock::new();
    C.get_or_init(|| {
        censuses()
            .values()
            .flat_map(|levels| levels.iter().flat_map(|l| l.cells.iter().map(|c| c.cover.clone())))
            .collect()
    })
}

fn permute(n: usize, seeds: &[Index]) -> Vec<usize> {
    // Fisher–Yates driven by proptest indices so failures shrink
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = seeds[i % seeds.len()].index(i + 1);
        perm.swap(i, j);
    }
    perm
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&j| outer[j]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn graph_contractions_commute(gi: Index, ei: Index, fi: Index) {
        let g = gi.get(graphs());
        let n = g.num_edges();
        prop_assume!(n >= 2);
        let (e, f) = (ei.index(n), fi.index(n));
        prop_assume!(e != f);
        let ef = g.contract_edge(e).unwrap().contract_edge(f - usize::from(f > e)).unwrap();
        let fe = g.contract_edge(f).unwrap().contract_edge(e - usize::from(e > f)).unwrap();
        prop_assert_eq!(ef.canonical_key(), fe.canonical_key());
        prop_assert_eq!(ef.genus().unwrap(), g.genus().unwrap());
    }

    #[test]
    fn graph_key_ignores_labels(gi: Index, seeds in prop::collection::vec(any::<Index>(), 1..8)) {
        let g = gi.get(graphs());
        let h = g.relabel(&permute(g.num_cells(), &seeds)).unwrap();
        prop_assert_eq!(h.canonical_key(), g.canonical_key());
    }

    #[test]
    fn cut_pieces_add_up(gi: Index, vi: Index) {
        let g = gi.get(graphs());
        let v = vi.index(g.num_vertices());
        let comps = g.cut_components(v).unwrap();
        let total: i64 = comps.iter().map(|c| g.piece_genus(&c.vertices, &c.edges)).sum();
        let overlap = (comps.len() as i64 - 1) * g.genus_at(v) as i64;
        prop_assert_eq!(total - overlap, g.genus().unwrap() as i64);
        let edges: usize = comps.iter().map(|c| c.edges.len()).sum();
        prop_assert_eq!(edges, g.num_edges());
    }

    #[test]
    fn switching_keeps_the_class(ci: Index, shifts in prop::collection::vec(0u32..13, 4)) {
        let c = ci.get(cells());
        let mut s = c.clone();
        for v in 0..c.target().num_vertices() {
            if !c.is_dilated_vertex(v) {
                s = s.switch(v, shifts[v % shifts.len()]).unwrap();
            }
        }
        prop_assert!(s.is_valid());
        prop_assert_eq!(s.canonical_form().key, c.canonical_form().key);
        prop_assert!(common::brute_isomorphic(c, &s));
    }

    #[test]
    fn relabelled_covers_keep_their_key(ci: Index, seeds in prop::collection::vec(any::<Index>(), 1..8)) {
        let c = ci.get(cells());
        let r = c.relabel(&permute(c.target().num_cells(), &seeds)).unwrap();
        prop_assert_eq!(r.canonical_form().key, c.canonical_form().key);
    }

    #[test]
    fn sources_satisfy_riemann_hurwitz(ci: Index) {
        let c = ci.get(cells());
        let src = c.build_source().unwrap();
        let p = c.p() as i64;
        prop_assert_eq!(src.source.genus().unwrap() as i64, p * (c.target().genus().unwrap() as i64 - 1) + 1);
        prop_assert!(src.local_riemann_hurwitz(c));
        prop_assert!(src.quotient_matches(c));
    }

    #[test]
    fn cover_contractions_commute(ci: Index, ei: Index, fi: Index) {
        let c = ci.get(cells());
        let n = c.target().num_edges();
        prop_assume!(n >= 2);
        let (e, f) = (ei.index(n), fi.index(n));
        prop_assume!(e != f);
        let ef = c.contract(e).unwrap().contract(f - usize::from(f > e)).unwrap();
        let fe = c.contract(f).unwrap().contract(e - usize::from(e > f)).unwrap();
        prop_assert!(ef.is_valid());
        prop_assert_eq!(ef.canonical_form().key, fe.canonical_form().key);
        prop_assert_eq!(ef.canonical_form().key, c.contract_all(&[e, f]).unwrap().canonical_form().key);
    }

    #[test]
    fn faces_compose(ci: Index, picks in prop::collection::vec(any::<Index>(), 8), outer_seeds in prop::collection::vec(any::<Index>(), 1..6)) {
        let c = ci.get(cells());
        let n = c.target().num_edges();
        prop_assume!(n >= 2);
        // random injections [k] → [m] → [n] with k < m < n+1 allowed to be equal
        let m = 1 + picks[0].index(n);
        let k = 1 + picks[1].index(m);
        let mut theta = permute(n, &outer_seeds);
        theta.truncate(m);
        let mut psi = permute(m, &picks[2..]);
        psi.truncate(k);
        let labels = permute(n, &picks[4..]);
        let x = LabeledCover { cover: c.clone(), labels };
        let two_steps = x.face(&theta).unwrap().face(&psi).unwrap();
        let one_step = x.face(&compose(&theta, &psi)).unwrap();
        prop_assert_eq!(two_steps.labeled_key(), one_step.labeled_key());
    }
}

#[test]
fn boundary_does_not_depend_on_the_tie_break() {
    for (&(g, p), census) in censuses() {
        let reference = DeltaComplex::assemble(census).unwrap();
        for seed in [1, 7, 42] {
            let other = DeltaComplex::assemble_with(census, TieBreak::Seeded(seed)).unwrap();
            assert!(other.boundary_squares_to_zero(), "g={g} p={p} seed={seed}");
            assert_eq!(other.betti(), reference.betti(), "g={g} p={p} seed={seed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    /// Representatives may be presented differently (vertices renamed,
    /// edges reversed, gains switched) as long as the edge order stays the
    /// canonical one; the homology does not change.
    #[test]
    fn representatives_do_not_matter(space: Index, seeds in prop::collection::vec(any::<Index>(), 4..12), shift in 0u32..13) {
        let key = SPACES[space.index(SPACES.len())];
        let census = &censuses()[&key];
        let shuffled: Vec<CensusLevel> = census
            .iter()
            .map(|level| CensusLevel {
                cells: level
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let rotated: Vec<Index> = seeds.iter().cycle().skip(i % seeds.len()).take(seeds.len()).cloned().collect();
                        let t = c.cover.target();
                        let nv = t.num_vertices();
                        let mut perm = permute(nv, &rotated);
                        for e in 0..t.num_edges() {
                            let flip = rotated[e % rotated.len()].index(2) == 1;
                            let (a, b) = (nv + 2 * e, nv + 2 * e + 1);
                            perm.extend(if flip { [b, a] } else { [a, b] });
                        }
                        let mut cover = c.cover.relabel(&perm).unwrap();
                        let identity: Vec<usize> = (0..t.num_edges()).collect();
                        assert!(cover.canonical_form().edge_maps().any(|m| m == identity.as_slice()));
                        for v in 0..cover.target().num_vertices() {
                            if !cover.is_dilated_vertex(v) {
                                cover = cover.switch(v, shift + v as u32).unwrap();
                            }
                        }
                        CensusCell { key: c.key.clone(), cover }
                    })
                    .collect(),
                ..level.clone()
            })
            .collect();
        let a = DeltaComplex::assemble(census).unwrap();
        let b = DeltaComplex::assemble(&shuffled).unwrap();
        prop_assert!(b.boundary_squares_to_zero());
        prop_assert_eq!(a.betti(), b.betti());
    }
}
