//! DIMACS ascii graph format: `p edge <V> <E>`, then `e <u> <v>` lines with
//! 1-based vertices; `c` lines are comments.

use std::fmt::Write as _;

use super::MisGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsGraph {
    pub graph: MisGraph,
    /// Edge count from the header.
    pub declared_edges: usize,
    /// Repeated `e` lines that were dropped.
    pub duplicate_edges: usize,
}

pub fn parse_dimacs(text: &str) -> Result<DimacsGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(tag) = tok.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(lineno, "duplicate header"));
                }
                match tok.next() {
                    Some("edge") | Some("col") => {}
                    _ => return Err(Error::parse(lineno, "expected `p edge <V> <E>`")),
                }
                let v = field(tok.next(), lineno, "vertex count")?;
                let e = field(tok.next(), lineno, "edge count")?;
                if tok.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens in header"));
                }
                if v > u32::MAX as usize {
                    return Err(Error::parse(lineno, "vertex count too large"));
                }
                header = Some((v, e));
                edges.reserve(e);
            }
            "e" => {
                let Some((nv, _)) = header else {
                    return Err(Error::parse(lineno, "edge before header"));
                };
                let u = field(tok.next(), lineno, "endpoint")?;
                let v = field(tok.next(), lineno, "endpoint")?;
                if tok.next().is_some() {
                    return Err(Error::parse(lineno, "trailing tokens in edge"));
                }
                for x in [u, v] {
                    if x == 0 || x > nv {
                        return Err(Error::parse(lineno, format!("vertex {x} outside 1..={nv}")));
                    }
                }
                if u == v {
                    return Err(Error::parse(lineno, format!("self-loop on vertex {u}")));
                }
                edges.push(((u - 1) as u32, (v - 1) as u32));
            }
            other => return Err(Error::parse(lineno, format!("unknown record `{other}`"))),
        }
    }
    let (nv, ne) = header.ok_or_else(|| Error::parse(0, "missing `p edge` header"))?;
    let (graph, duplicate_edges) = MisGraph::from_edges(nv, edges)?;
    Ok(DimacsGraph {
        graph,
        declared_edges: ne,
        duplicate_edges,
    })
}

/// Writes the header and sorted edges, 1-based.
pub fn emit_dimacs(graph: &MisGraph) -> String {
    let mut out = String::with_capacity(16 * graph.num_edges() + 32);
    let _ = writeln!(out, "p edge {} {}", graph.num_vertices(), graph.num_edges());
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

fn field(tok: Option<&str>, lineno: usize, what: &str) -> Result<usize> {
    let t = tok.ok_or_else(|| Error::parse(lineno, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| Error::parse(lineno, format!("bad {what} `{t}`")))
}
