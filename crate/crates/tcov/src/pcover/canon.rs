//! Canonical forms of covers up to isomorphism (graph isomorphism of the
//! targets preserving dilation data and flows, with gains up to switching).
//!
//! For every presentation of the target (see `present`), gains are brought
//! into a normal gauge: the free–free non-loop edges are scanned in
//! presentation order, the first ones closing no cycle form a spanning
//! forest, and switching makes every forest edge carry gain 0. Two gauged
//! presentations with equal encodings describe isomorphic covers, so the
//! lexicographically least encoding is a complete invariant.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CoverBuilder, EdgeKind, PCover};
use crate::error::{Error, Result};
use crate::graph::Dsu;
use crate::present::{for_each_presentation, Presentation};

const HEADER: usize = 3;
const VERTEX_WORDS: usize = 3;
const EDGE_WORDS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverKey(pub Vec<u32>);

impl CoverKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bad = || Error::MalformedCover(format!("bad key {s:?}"));
        if s.len() % 8 != 0 || !s.is_ascii() {
            return Err(bad());
        }
        let bytes: Vec<u8> = (0..s.len() / 2)
            .map(|i| u8::from_str_radix(&s[2 * i..2 * i + 2], 16).map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Ok(CoverKey(
            bytes.chunks(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect(),
        ))
    }

    pub fn num_edges(&self) -> usize {
        self.0[2] as usize
    }

    /// Rebuilds the representative described by the key. Its edge `i` is
    /// the edge at canonical position `i`.
    pub fn decode(&self) -> Result<PCover> {
        let k = &self.0;
        let bad = || Error::MalformedCover("truncated key".into());
        if k.len() < HEADER {
            return Err(bad());
        }
        let (p, nv, ne) = (k[0], k[1] as usize, k[2] as usize);
        if k.len() != HEADER + VERTEX_WORDS * nv + EDGE_WORDS * ne {
            return Err(bad());
        }
        let mut b = CoverBuilder::new(p);
        for i in 0..nv {
            let w = &k[HEADER + VERTEX_WORDS * i..];
            b.vertex(w[2], w[1] == 1);
        }
        let base = HEADER + VERTEX_WORDS * nv;
        for i in 0..ne {
            let w = &k[base + EDGE_WORDS * i..base + EDGE_WORDS * (i + 1)];
            let (t, s) = (w[0] as usize, w[1] as usize);
            if t >= nv || s >= nv {
                return Err(bad());
            }
            match w[3] {
                2 => b.dilated_edge(t, s, w[4]),
                _ => b.free_edge(t, s, w[5]),
            };
        }
        b.build()
    }
}

impl fmt::Display for CoverKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CoverKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CoverKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CoverKey::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// The least encoding together with every presentation attaining it.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CoverKey,
    minimisers: Vec<Presentation>,
}

impl CanonicalForm {
    /// Edge index -> canonical position, for the first minimiser.
    pub fn edge_map(&self) -> &[usize] {
        &self.minimisers[0].edge_pos
    }

    /// Vertex index -> canonical position, for the first minimiser.
    pub fn vertex_map(&self) -> &[usize] {
        &self.minimisers[0].vertex_pos
    }

    /// Edge maps of all minimisers; any two differ by an automorphism.
    pub fn edge_maps(&self) -> impl Iterator<Item = &[usize]> {
        self.minimisers.iter().map(|m| m.edge_pos.as_slice())
    }

    pub fn num_minimisers(&self) -> usize {
        self.minimisers.len()
    }

    /// Edge map of the `i`-th minimiser.
    pub fn edge_map_at(&self, i: usize) -> &[usize] {
        &self.minimisers[i].edge_pos
    }

    /// Vertex map of the `i`-th minimiser.
    pub fn vertex_map_at(&self, i: usize) -> &[usize] {
        &self.minimisers[i].vertex_pos
    }

    /// Stabiliser of the representative, as permutations of canonical edge
    /// positions. Sorted, deduplicated, contains the identity.
    pub fn stabilizer(&self) -> Vec<Vec<usize>> {
        let m0 = &self.minimisers[0].edge_pos;
        let m0_inv = crate::present::inverse(m0);
        let mut out: Vec<Vec<usize>> = self
            .minimisers
            .iter()
            .map(|m| m0_inv.iter().map(|&e| m.edge_pos[e]).collect())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl PCover {
    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_form_marked(None, None)
    }

    /// Canonical form where vertices and/or edges carry extra marks that
    /// isomorphisms must preserve.
    pub fn canonical_form_marked(&self, vertex_marks: Option<&[u32]>, edge_marks: Option<&[u32]>) -> CanonicalForm {
        let g = self.target();
        let nv = g.num_vertices();
        let ne = g.num_edges();
        let vmark = |v: usize| vertex_marks.map_or(0, |m| m[v]);
        let emark = |e: usize| edge_marks.map_or(0, |m| m[e]);

        let vsig: Vec<Vec<u32>> = (0..nv)
            .map(|v| {
                vec![
                    vmark(v),
                    self.is_dilated_vertex(v) as u32,
                    g.genus_at(v),
                    g.valence(v) as u32,
                    g.loops_at(v) as u32,
                    self.dilated_degree(v) as u32,
                ]
            })
            .collect();
        let esig: Vec<[Vec<u32>; 2]> = (0..ne)
            .map(|e| {
                let [h0, h1] = g.edge(e);
                let kind = kind_code(self.edge_kind(e));
                let lp = g.is_loop(e) && self.edge_kind(e) == EdgeKind::FreeFree;
                let sig = |h: usize| vec![emark(e), kind, self.flow(h), if lp { self.gain(h) } else { 0 }];
                [sig(h0), sig(h1)]
            })
            .collect();

        let mut best: Option<Vec<u32>> = None;
        let mut minimisers: Vec<Presentation> = Vec::new();
        let mut scratch = Scratch::new(nv);
        for_each_presentation(g, &vsig, &esig, &mut |pres| {
            let enc = self.encode(pres, &vmark, &emark, &mut scratch);
            match best.as_ref().map(|b| enc.cmp(b)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => minimisers.push(pres.clone()),
                _ => {
                    best = Some(enc);
                    minimisers.clear();
                    minimisers.push(pres.clone());
                }
            }
        });
        CanonicalForm { key: CoverKey(best.expect("at least one presentation")), minimisers }
    }

    fn encode(
        &self,
        pres: &Presentation,
        vmark: &dyn Fn(usize) -> u32,
        emark: &dyn Fn(usize) -> u32,
        scratch: &mut Scratch,
    ) -> Vec<u32> {
        let g = self.target();
        let p = self.p();
        let nv = g.num_vertices();
        let ne = g.num_edges();
        let potential = scratch.gauge(self, pres);

        let mut enc = Vec::with_capacity(HEADER + VERTEX_WORDS * nv + EDGE_WORDS * ne);
        enc.extend([p, nv as u32, ne as u32]);
        for &v in &pres.vertex_order {
            enc.extend([vmark(v), self.is_dilated_vertex(v) as u32, g.genus_at(v)]);
        }
        for &e in &pres.edge_order {
            let [h0, h1] = g.edge(e);
            let (t, s) = if pres.flipped[e] { (h1, h0) } else { (h0, h1) };
            let (a, b) = (g.vertex_of(t), g.vertex_of(s));
            let kind = self.edge_kind(e);
            let gain = if kind == EdgeKind::FreeFree {
                (self.gain(t) + potential[a] + p - potential[b]) % p
            } else {
                0
            };
            enc.extend([
                pres.vertex_pos[a] as u32,
                pres.vertex_pos[b] as u32,
                emark(e),
                kind_code(kind),
                self.flow(t),
                gain,
            ]);
        }
        enc
    }
}

fn kind_code(k: EdgeKind) -> u32 {
    match k {
        EdgeKind::FreeFree => 0,
        EdgeKind::FreeAtDilated => 1,
        EdgeKind::Dilated => 2,
    }
}

struct Scratch {
    potential: Vec<u32>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Scratch {
    fn new(nv: usize) -> Self {
        Self { potential: vec![0; nv], adj: vec![Vec::new(); nv] }
    }

    /// Switching function making the presentation's spanning-forest edges
    /// carry gain 0.
    fn gauge(&mut self, cover: &PCover, pres: &Presentation) -> &[u32] {
        let g = cover.target();
        let p = cover.p();
        let nv = g.num_vertices();
        for a in &mut self.adj {
            a.clear();
        }
        let mut dsu = Dsu::new(nv);
        for &e in &pres.edge_order {
            if cover.edge_kind(e) != EdgeKind::FreeFree || g.is_loop(e) {
                continue;
            }
            let [h0, h1] = g.edge(e);
            let (a, b) = (g.vertex_of(h0), g.vertex_of(h1));
            if dsu.union(a, b) {
                self.adj[a].push((b, h0));
                self.adj[b].push((a, h1));
            }
        }
        let mut done = vec![false; nv];
        let mut stack = Vec::new();
        for &r in &pres.vertex_order {
            if done[r] {
                continue;
            }
            done[r] = true;
            self.potential[r] = 0;
            stack.push(r);
            while let Some(u) = stack.pop() {
                for i in 0..self.adj[u].len() {
                    let (w, h) = self.adj[u][i];
                    if !done[w] {
                        done[w] = true;
                        // gain(h) + s(u) − s(w) = 0
                        self.potential[w] = (cover.gain(h) + self.potential[u]) % p;
                        stack.push(w);
                    }
                }
            }
        }
        &self.potential
    }
}
