//! Graphviz export of incidence graphs, one fill color per type.

use std::fmt::Write;

use trigeom_core::incidence::IncidenceSystem;

const PALETTE: [&str; 6] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"];

pub fn to_dot(sys: &IncidenceSystem, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  node [style=filled, shape=circle];").unwrap();
    for x in 0..sys.len() {
        let t = sys.type_of(x);
        writeln!(
            out,
            "  {x} [label=\"{}\", type=\"{}\", fillcolor=\"{}\"];",
            escape(sys.label(x)),
            escape(&sys.types()[t]),
            PALETTE[t % PALETTE.len()]
        )
        .unwrap();
    }
    for (a, b) in sys.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
