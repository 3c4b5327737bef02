//! Named covers that recur in the census and in the checks.

use super::{CoverBuilder, PCover};

fn build(b: CoverBuilder) -> PCover {
    b.build().expect("family constructors use prime p")
}

/// Ring: a genus-(g−1) dilated vertex with a dilated loop of flow `i`.
pub fn ring(p: u32, g: u32, i: u32) -> PCover {
    let mut b = CoverBuilder::new(p);
    let v = b.vertex(g - 1, true);
    b.dilated_edge(v, v, i);
    build(b)
}

/// Butterfly: a genus-(g−1) dilated vertex with a free loop.
pub fn butterfly(p: u32, g: u32) -> PCover {
    let mut b = CoverBuilder::new(p);
    let v = b.vertex(g - 1, true);
    b.free_edge(v, v, 0);
    build(b)
}

/// Spiral: a genus-(g−1) free vertex with a loop of gain `a`.
pub fn spiral(p: u32, g: u32, a: u32) -> PCover {
    let mut b = CoverBuilder::new(p);
    let v = b.vertex(g - 1, false);
    b.free_edge(v, v, a);
    build(b)
}

/// Equivariant bridge: dilated side of genus g−h, free side of genus h.
pub fn bridge(p: u32, g: u32, h: u32) -> PCover {
    let mut b = CoverBuilder::new(p);
    let u = b.vertex(g - h, true);
    let v = b.vertex(h, false);
    b.free_edge(u, v, 0);
    build(b)
}

/// Free edge between two dilated vertices of genera h and g−h.
pub fn parallel_bridge(p: u32, g: u32, h: u32) -> PCover {
    let mut b = CoverBuilder::new(p);
    let u = b.vertex(h, true);
    let v = b.vertex(g - h, true);
    b.free_edge(u, v, 0);
    build(b)
}

/// Free theta with gains read from the first vertex to the second.
pub fn free_theta(p: u32, gains: [u32; 3]) -> PCover {
    let mut b = CoverBuilder::new(p);
    let u = b.vertex(0, false);
    let v = b.vertex(0, false);
    for x in gains {
        b.free_edge(u, v, x);
    }
    build(b)
}

/// Theta with both vertices dilated and dilated edges of the given flows
/// (read from the first vertex).
pub fn dilated_theta(p: u32, flows: [u32; 3]) -> PCover {
    let mut b = CoverBuilder::new(p);
    let u = b.vertex(0, true);
    let v = b.vertex(0, true);
    for x in flows {
        b.dilated_edge(u, v, x);
    }
    build(b)
}

/// Theta with both vertices dilated, two dilated edges of flows `i`, `−i`
/// and one free edge.
pub fn mixed_theta(p: u32, i: u32) -> PCover {
    let mut b = CoverBuilder::new(p);
    let u = b.vertex(0, true);
    let v = b.vertex(0, true);
    b.dilated_edge(u, v, i);
    b.dilated_edge(u, v, p - i);
    b.free_edge(u, v, 0);
    build(b)
}

/// Dumbbell: loops at both ends joined by a bridge. `None` makes a vertex
/// free with a loop of the given gain; `Some(flow)` makes it dilated with a
/// dilated loop of that flow.
pub fn dumbbell(p: u32, left: LoopEnd, right: LoopEnd) -> PCover {
    let mut b = CoverBuilder::new(p);
    let ends = [left, right];
    let vs: Vec<usize> = ends.iter().map(|e| b.vertex(0, e.is_dilated())).collect();
    for (v, e) in vs.iter().zip(ends) {
        match e {
            LoopEnd::Free(x) => b.free_edge(*v, *v, x),
            LoopEnd::DilatedLoop(x) => b.dilated_edge(*v, *v, x),
            LoopEnd::FreeLoopAtDilated => b.free_edge(*v, *v, 0),
        };
    }
    b.free_edge(vs[0], vs[1], 0);
    build(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopEnd {
    /// free vertex, free loop with this gain
    Free(u32),
    /// dilated vertex, dilated loop with this flow
    DilatedLoop(u32),
    /// dilated vertex, free loop
    FreeLoopAtDilated,
}

impl LoopEnd {
    fn is_dilated(self) -> bool {
        !matches!(self, LoopEnd::Free(_))
    }
}
