//! Oracles shared by the integration tests. Nothing here goes through the
//! canonical-form code.
#![allow(dead_code)]

use std::collections::VecDeque;

use tcov::pcover::EdgeKind;
use tcov::PCover;

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Tries every edge bijection and orientation, then solves for a switching
/// that carries the gains of `a` onto those of `b`.
pub fn brute_isomorphic(a: &PCover, b: &PCover) -> bool {
    let (ga, gb) = (a.target(), b.target());
    let (nv, ne) = (ga.num_vertices(), ga.num_edges());
    if a.p() != b.p() || nv != gb.num_vertices() || ne != gb.num_edges() {
        return false;
    }
    if ne == 0 {
        return ga.genus_at(0) == gb.genus_at(0) && a.is_dilated_vertex(0) == b.is_dilated_vertex(0);
    }
    let p = a.p();
    for tau in permutations(ne) {
        'flip: for flips in 0u32..(1 << ne) {
            let mut hmap = vec![usize::MAX; ga.num_cells()];
            for e in 0..ne {
                let [x0, x1] = ga.edge(e);
                let [y0, y1] = gb.edge(tau[e]);
                let (y0, y1) = if flips >> e & 1 == 1 { (y1, y0) } else { (y0, y1) };
                hmap[x0] = y0;
                hmap[x1] = y1;
            }
            let mut vmap = vec![usize::MAX; nv];
            for e in 0..ne {
                for h in ga.edge(e) {
                    let (u, w) = (ga.vertex_of(h), gb.vertex_of(hmap[h]));
                    if vmap[u] == usize::MAX {
                        vmap[u] = w;
                    } else if vmap[u] != w {
                        continue 'flip;
                    }
                }
            }
            let mut hit = vec![false; nv];
            for v in 0..nv {
                let w = vmap[v];
                if hit[w] || ga.genus_at(v) != gb.genus_at(w) || a.is_dilated_vertex(v) != b.is_dilated_vertex(w) {
                    continue 'flip;
                }
                hit[w] = true;
            }
            for e in 0..ne {
                if a.edge_kind(e) != b.edge_kind(tau[e]) {
                    continue 'flip;
                }
                if a.edge_kind(e) == EdgeKind::Dilated && ga.edge(e).iter().any(|&h| a.flow(h) != b.flow(hmap[h])) {
                    continue 'flip;
                }
            }
            // c(root h) − c(root ιh) = gain_b(φh) − gain_a(h) on free edges
            let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); nv];
            for e in 0..ne {
                if a.edge_kind(e) != EdgeKind::FreeFree {
                    continue;
                }
                for h in ga.edge(e) {
                    let d = (b.gain(hmap[h]) + p - a.gain(h)) % p;
                    adj[ga.vertex_of(ga.involution(h))].push((ga.vertex_of(h), d));
                }
            }
            let mut c: Vec<Option<u32>> = vec![None; nv];
            for s in 0..nv {
                if c[s].is_some() {
                    continue;
                }
                c[s] = Some(0);
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &(w, d) in &adj[u] {
                        // c(w) − c(u) = d
                        let want = (c[u].unwrap() + d) % p;
                        match c[w] {
                            None => {
                                c[w] = Some(want);
                                queue.push_back(w);
                            }
                            Some(x) if x != want => continue 'flip,
                            _ => {}
                        }
                    }
                }
            }
            return true;
        }
    }
    false
}

/// Order of the full automorphism group of a free theta with gains read
/// from vertex 0: pairs (target automorphism, fibre shift) that commute
/// with the projection.
pub fn free_theta_aut_order(p: u32, gains: [u32; 3]) -> usize {
    let mut order = 0;
    for swap in [false, true] {
        for tau in permutations(3) {
            for c0 in 0..p {
                for c1 in 0..p {
                    let ok = (0..3).all(|e| {
                        // (v, x) ↦ (σv, x + c_v) carries edge e onto edge τe
                        let image = if swap { (p - gains[tau[e]]) % p } else { gains[tau[e]] };
                        (gains[e] + c1 + p - c0) % p == image
                    });
                    if ok {
                        order += 1;
                    }
                }
            }
        }
    }
    order
}
