//! Source and sink elimination.
//!
//! Deleting a vertex with no incoming or no outgoing edges removes no
//! circuit, so the signed family count (and with it `det(I - A)`) is
//! unchanged.

use std::fmt;

use crate::circuits::{enumerate_circuits, Circuit};
use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, Relabeling, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Source,
    Sink,
    Isolated,
    Internal,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Source => "source",
            VertexKind::Sink => "sink",
            VertexKind::Isolated => "isolated",
            VertexKind::Internal => "internal",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A loop counts toward both degrees, so a looped vertex is never a source or
/// sink.
pub fn classify_vertex(g: &Multigraph, v: VertexId) -> Result<VertexKind> {
    if v >= g.vertex_count() {
        return Err(Error::domain(format!(
            "vertex {v} out of range for a graph with {} vertices",
            g.vertex_count()
        )));
    }
    Ok(match (g.in_degree(v), g.out_degree(v)) {
        (0, 0) => VertexKind::Isolated,
        (0, _) => VertexKind::Source,
        (_, 0) => VertexKind::Sink,
        _ => VertexKind::Internal,
    })
}

/// Deletes a source, sink or isolated vertex. Internal vertices are refused.
pub fn eliminate(g: &Multigraph, v: VertexId) -> Result<(Multigraph, Relabeling)> {
    match classify_vertex(g, v)? {
        VertexKind::Internal => Err(Error::domain(format!(
            "vertex {v} has both incoming and outgoing edges"
        ))),
        _ => g.delete_vertex(v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionStep {
    /// Index of the deleted vertex in the input graph.
    pub vertex: VertexId,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub reduced: Multigraph,
    /// Input vertices and edges to their indices in `reduced`.
    pub relabeling: Relabeling,
}

impl ReductionTrace {
    /// Re-applies the recorded deletions to `input`.
    pub fn replay(&self, input: &Multigraph) -> Result<Multigraph> {
        let mut current = input.clone();
        let mut to_current = Relabeling::identity(input);
        for step in &self.steps {
            let v = to_current
                .vertices
                .get(step.vertex)
                .copied()
                .flatten()
                .ok_or_else(|| Error::domain(format!("vertex {} is not present", step.vertex)))?;
            let (next, map) = current.delete_vertex(v)?;
            to_current = to_current.then(&map);
            current = next;
        }
        Ok(current)
    }

    /// Edge ids of `circuit` in the reduced graph, if all of its edges survived.
    pub fn map_circuit(&self, circuit: &Circuit) -> Option<Vec<usize>> {
        let mut ids = circuit
            .edge_ids()
            .iter()
            .map(|&e| self.relabeling.edges[e])
            .collect::<Option<Vec<_>>>()?;
        ids.sort_unstable();
        Some(ids)
    }

    /// True when the input's circuits correspond one-to-one with the reduced
    /// graph's circuits under the edge relabeling.
    pub fn preserves_circuits(&self, input: &Multigraph, cap: usize) -> Result<bool> {
        let before = enumerate_circuits(input, cap)?;
        let after = enumerate_circuits(&self.reduced, cap)?;
        let Some(mut mapped) = before
            .iter()
            .map(|c| self.map_circuit(c))
            .collect::<Option<Vec<_>>>()
        else {
            return Ok(false);
        };
        mapped.sort();
        let mut expected: Vec<Vec<usize>> = after.iter().map(|c| c.edge_ids().to_vec()).collect();
        expected.sort();
        Ok(mapped == expected)
    }
}

/// Repeatedly eliminates the lowest-indexed source, sink or isolated vertex
/// until every remaining vertex is internal.
pub fn reduce_to_closure(g: &Multigraph) -> ReductionTrace {
    let mut current = g.clone();
    let mut relabeling = Relabeling::identity(g);
    let mut original: Vec<VertexId> = (0..g.vertex_count()).collect();
    let mut steps = Vec::new();

    loop {
        let (ins, outs) = degrees(&current);
        let Some(v) = (0..current.vertex_count()).find(|&v| ins[v] == 0 || outs[v] == 0) else {
            break;
        };
        let kind = classify_vertex(&current, v).expect("vertex in range");
        let (next, map) = current.delete_vertex(v).expect("vertex in range");
        steps.push(ReductionStep {
            vertex: original[v],
            kind,
        });
        original.remove(v);
        relabeling = relabeling.then(&map);
        current = next;
    }

    ReductionTrace {
        steps,
        reduced: current,
        relabeling,
    }
}

fn degrees(g: &Multigraph) -> (Vec<usize>, Vec<usize>) {
    let mut ins = vec![0; g.vertex_count()];
    let mut outs = vec![0; g.vertex_count()];
    for e in g.edges() {
        outs[e.source] += 1;
        ins[e.target] += 1;
    }
    (ins, outs)
}
