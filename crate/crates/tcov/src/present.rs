//! Enumeration of vertex/edge orderings shared by the graph and cover
//! canonical forms.
//!
//! A *presentation* orders the vertices (respecting an isomorphism-invariant
//! vertex signature), orients every edge and orders the edges. Non-loop edges
//! point from the lower to the higher vertex position; loops take the
//! orientation with the smaller edge signature. Edges are sorted by
//! `(tail, head, signature)` and every permutation inside a run of equal keys
//! is produced, so that minimising any encoding over all presentations yields
//! both a canonical form and the complete set of minimisers.

use crate::graph::WeightedGraph;

#[derive(Clone, Debug)]
pub(crate) struct Presentation {
    /// position -> vertex index
    pub vertex_order: Vec<usize>,
    /// vertex index -> position
    pub vertex_pos: Vec<usize>,
    /// position -> edge index
    pub edge_order: Vec<usize>,
    /// edge index -> position
    pub edge_pos: Vec<usize>,
    /// edge index -> whether the canonical tail is the upper half-edge
    pub flipped: Vec<bool>,
}

pub(crate) fn for_each_presentation(
    g: &WeightedGraph,
    vertex_sig: &[Vec<u32>],
    edge_sig: &[[Vec<u32>; 2]],
    visit: &mut dyn FnMut(&Presentation),
) {
    let nv = g.num_vertices();
    let mut sorted: Vec<usize> = (0..nv).collect();
    sorted.sort_by(|&a, &b| vertex_sig[a].cmp(&vertex_sig[b]));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &sorted {
        match blocks.last_mut() {
            Some(b) if vertex_sig[b[0]] == vertex_sig[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let block_perms: Vec<Vec<Vec<usize>>> = blocks.iter().map(|b| permutations(b)).collect();

    for_each_product(&block_perms, &mut |choice| {
        let vertex_order: Vec<usize> = choice.iter().flat_map(|p| p.iter().copied()).collect();
        let mut vertex_pos = vec![0; nv];
        for (i, &v) in vertex_order.iter().enumerate() {
            vertex_pos[v] = i;
        }
        present_edges(g, edge_sig, vertex_order, vertex_pos, visit);
    });
}

fn present_edges(
    g: &WeightedGraph,
    edge_sig: &[[Vec<u32>; 2]],
    vertex_order: Vec<usize>,
    vertex_pos: Vec<usize>,
    visit: &mut dyn FnMut(&Presentation),
) {
    let ne = g.num_edges();
    let mut flipped = vec![false; ne];
    let mut keys: Vec<(usize, usize, &[u32])> = Vec::with_capacity(ne);
    for e in 0..ne {
        let (a, b) = g.edge_vertices(e);
        let (pa, pb) = (vertex_pos[a], vertex_pos[b]);
        let f = if pa != pb { pa > pb } else { edge_sig[e][1] < edge_sig[e][0] };
        flipped[e] = f;
        let s = &edge_sig[e][f as usize];
        keys.push((pa.min(pb), pa.max(pb), s.as_slice()));
    }
    let mut sorted: Vec<usize> = (0..ne).collect();
    sorted.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for &e in &sorted {
        match runs.last_mut() {
            Some(r) if keys[r[0]] == keys[e] => r.push(e),
            _ => runs.push(vec![e]),
        }
    }
    let run_perms: Vec<Vec<Vec<usize>>> = runs.iter().map(|r| permutations(r)).collect();
    let mut pres = Presentation {
        vertex_order,
        vertex_pos,
        edge_order: Vec::with_capacity(ne),
        edge_pos: vec![0; ne],
        flipped,
    };
    for_each_product(&run_perms, &mut |choice| {
        pres.edge_order.clear();
        pres.edge_order.extend(choice.iter().flat_map(|p| p.iter().copied()));
        for (i, &e) in pres.edge_order.iter().enumerate() {
            pres.edge_pos[e] = i;
        }
        visit(&pres);
    });
}

/// All permutations of `items` (Heap's algorithm, deterministic order).
pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    out.push(a.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn for_each_product(options: &[Vec<Vec<usize>>], f: &mut dyn FnMut(&[&Vec<usize>])) {
    fn rec<'a>(
        options: &'a [Vec<Vec<usize>>],
        acc: &mut Vec<&'a Vec<usize>>,
        f: &mut dyn FnMut(&[&Vec<usize>]),
    ) {
        if acc.len() == options.len() {
            f(acc);
            return;
        }
        for o in &options[acc.len()] {
            acc.push(o);
            rec(options, acc, f);
            acc.pop();
        }
    }
    rec(options, &mut Vec::with_capacity(options.len()), f);
}

/// Sign of a permutation given as `perm[i] = image of i`.
pub fn sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut s = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            s = -s;
        }
    }
    s
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `(a ∘ b)[i] = a[b[i]]`
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}
