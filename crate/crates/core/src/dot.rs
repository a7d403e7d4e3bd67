//! Graphviz DOT rendering. Output is fully determined by the graph: vertices
//! and edges are emitted in ascending id order.

use std::fmt::Write;

use crate::graph::Digraph;
use crate::process::{ProcessId, ProcessSet};
use crate::Round;

#[derive(Clone, Copy, Debug, Default)]
pub struct DotOptions {
    pub include_self_loops: bool,
}

/// Plain digraph, e.g. a skeleton.
pub fn digraph_to_dot(name: &str, g: &Digraph, opts: DotOptions) -> String {
    render(
        name,
        g.vertices(),
        g.edges().map(|(a, b)| (a, b, None)),
        opts,
    )
}

/// Round-labeled digraph, e.g. a process's skeleton approximation.
pub fn labeled_to_dot<I>(name: &str, vertices: ProcessSet, edges: I, opts: DotOptions) -> String
where
    I: IntoIterator<Item = (ProcessId, ProcessId, Round)>,
{
    render(
        name,
        vertices,
        edges.into_iter().map(|(a, b, r)| (a, b, Some(r))),
        opts,
    )
}

fn render<I>(name: &str, vertices: ProcessSet, edges: I, opts: DotOptions) -> String
where
    I: IntoIterator<Item = (ProcessId, ProcessId, Option<Round>)>,
{
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\"")).unwrap();
    for v in vertices {
        writeln!(out, "  {v};").unwrap();
    }
    for (from, to, label) in edges {
        if from == to && !opts.include_self_loops {
            continue;
        }
        match label {
            Some(r) => writeln!(out, "  {from} -> {to} [label=\"{r}\"];").unwrap(),
            None => writeln!(out, "  {from} -> {to};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}
