//! Graphviz output. Dilated cells are drawn bold, free cells thin; dilated
//! edges carry their flow and free edges between free vertices their gain,
//! both read along the arrow.

use std::io::{self, Write};

use tcov::pcover::EdgeKind;
use tcov::PCover;

pub fn write_cover(w: &mut impl Write, name: &str, cover: &PCover) -> io::Result<()> {
    let g = cover.target();
    writeln!(w, "digraph {name} {{")?;
    writeln!(w, "  label=\"{} (p = {})\";", cover.describe(), cover.p())?;
    writeln!(w, "  node [shape=circle];")?;
    for v in 0..g.num_vertices() {
        let style = if cover.is_dilated_vertex(v) { "bold" } else { "solid" };
        let width = if cover.is_dilated_vertex(v) { 3 } else { 1 };
        writeln!(w, "  v{v} [label=\"{}\", style={style}, penwidth={width}];", g.genus_at(v))?;
    }
    for e in 0..g.num_edges() {
        let [h, _] = g.edge(e);
        let (a, b) = g.edge_vertices(e);
        let attrs = match cover.edge_kind(e) {
            EdgeKind::Dilated => format!("label=\"{}\", style=bold, penwidth=3", cover.flow(h)),
            EdgeKind::FreeFree => format!("label=\"{}\", style=solid, penwidth=1", cover.gain(h)),
            EdgeKind::FreeAtDilated => "dir=none, style=solid, penwidth=1".to_string(),
        };
        writeln!(w, "  v{a} -> v{b} [{attrs}];")?;
    }
    writeln!(w, "}}")
}
