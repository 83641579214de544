//! Maximum independent set formulation of a binary CSP.
//!
//! Vertex `v * d + a` stands for "variable `v` takes value `a`". Each
//! variable's `d` vertices form a clique, and every disallowed value pair is
//! an edge. An independent set of size `T` picks at most one value per
//! variable, so it is exactly a partial solution on `T` variables.

mod dimacs;

use std::collections::BTreeMap;

use crate::csp::{Assignment, Constraint, CspInstance, Value, Var};
use crate::error::{Error, Result};

pub use dimacs::{emit_dimacs, parse_dimacs, DimacsGraph};

/// Undirected simple graph, edges stored sorted as `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisGraph {
    num_vertices: usize,
    edges: Vec<(u32, u32)>,
    block_size: Option<usize>,
}

impl MisGraph {
    /// Builds a graph, dropping repeated edges. Returns the graph and the
    /// number of duplicates removed.
    pub fn from_edges(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<(Self, usize)> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop on vertex {u}")));
            }
            if u as usize >= num_vertices || v as usize >= num_vertices {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {num_vertices} vertices"
                )));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        let dups = before - list.len();
        Ok((
            MisGraph {
                num_vertices,
                edges: list,
                block_size: None,
            },
            dups,
        ))
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn block_size(&self) -> Option<usize> {
        self.block_size
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Whether no edge joins two vertices of `vertices`.
    pub fn is_independent(&self, vertices: &[u32]) -> bool {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.edges
            .iter()
            .all(|(u, v)| sorted.binary_search(u).is_err() || sorted.binary_search(v).is_err())
    }

    /// Number of edges with both ends in `vertices`.
    pub fn internal_edges(&self, vertices: &[u32]) -> usize {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.edges
            .iter()
            .filter(|(u, v)| sorted.binary_search(u).is_ok() && sorted.binary_search(v).is_ok())
            .count()
    }
}

#[inline]
pub fn vertex_of(var: Var, value: Value, d: usize) -> u32 {
    var * d as u32 + value
}

/// The MIS graph of `instance`, with `block_size = d`.
pub fn csp_to_mis(instance: &CspInstance) -> MisGraph {
    let d = instance.domain_size();
    let n = instance.num_vars();
    let mut edges = Vec::with_capacity(n * d * (d.saturating_sub(1)) / 2);
    for v in 0..n as Var {
        for a in 0..d as Value {
            for b in a + 1..d as Value {
                edges.push((vertex_of(v, a, d), vertex_of(v, b, d)));
            }
        }
    }
    for c in instance.constraints() {
        for &(a, b) in &c.disallowed {
            let (x, y) = (vertex_of(c.var_a, a, d), vertex_of(c.var_b, b, d));
            edges.push((x.min(y), x.max(y)));
        }
    }
    let (mut graph, _) = MisGraph::from_edges(n * d, edges).expect("instance yields a valid graph");
    graph.block_size = Some(d);
    graph
}

/// Recovers the CSP from a graph whose vertices come in consecutive blocks
/// of `d`, one block per variable.
///
/// Each block must be a clique. Cross-block edges are grouped by block pair;
/// each group becomes one constraint oriented `(lower block, higher block)`.
/// Constraints that were duplicated over the same pair before conversion
/// come back merged, and the result is marked deduplicated.
pub fn mis_to_csp(graph: &MisGraph, d: usize) -> Result<CspInstance> {
    if d == 0 || !graph.num_vertices.is_multiple_of(d) {
        return Err(Error::Structure(format!(
            "{} vertices do not split into blocks of {d}",
            graph.num_vertices
        )));
    }
    let n = graph.num_vertices / d;
    let mut intra = vec![0usize; n];
    let mut groups: BTreeMap<(Var, Var), Vec<(Value, Value)>> = BTreeMap::new();
    for &(u, v) in &graph.edges {
        let (bu, bv) = (u as usize / d, v as usize / d);
        let (au, av) = ((u as usize % d) as Value, (v as usize % d) as Value);
        if bu == bv {
            intra[bu] += 1;
        } else {
            // edges are stored with u < v, so bu < bv
            groups.entry((bu as Var, bv as Var)).or_default().push((au, av));
        }
    }
    let full = d * (d - 1) / 2;
    if let Some(block) = intra.iter().position(|&k| k != full) {
        return Err(Error::Structure(format!(
            "block {block} (vertices {}..{}) has {} of {full} clique edges",
            block * d,
            (block + 1) * d,
            intra[block]
        )));
    }
    let constraints = groups
        .into_iter()
        .map(|((a, b), pairs)| Constraint::new(a, b, pairs))
        .collect();
    Ok(CspInstance::new(n, d, constraints)?.mark_deduplicated())
}

/// Vertices `{v * d + x[v]}` for the variables in `subset`.
pub fn selection_vertices(assignment: &Assignment, subset: &[Var], d: usize) -> Vec<u32> {
    subset
        .iter()
        .map(|&v| vertex_of(v, assignment.get(v).expect("variable is set"), d))
        .collect()
}
