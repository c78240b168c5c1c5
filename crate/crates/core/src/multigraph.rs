//! Finite directed multigraphs with dense vertex and edge indices.
//!
//! Parallel edges and loops are ordinary edge records, distinguished by their
//! position in the edge list.

use std::fmt;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linear::IntMatrix;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A directed multigraph on vertices `0..vertex_count`.
///
/// Edge `i` always has `id == i`; constructors renumber as needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn empty(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from `(source, target)` pairs; edge ids follow the order
    /// of the iterator.
    pub fn from_edges<I>(vertex_count: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut edges = Vec::new();
        for (id, (source, target)) in pairs.into_iter().enumerate() {
            if source >= vertex_count || target >= vertex_count {
                return Err(Error::domain(format!(
                    "edge {id} ({source} -> {target}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            edges.push(Edge { id, source, target });
        }
        Ok(Multigraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.source == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.target == v).count()
    }

    /// Outgoing edge ids per vertex, each list in increasing id order.
    pub fn out_edges(&self) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            out[e.source].push(e.id);
        }
        out
    }

    /// Entry `(i, j)` counts the edges from `i` to `j`.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count;
        let mut counts = vec![0u64; n * n];
        for e in &self.edges {
            counts[e.source * n + e.target] += 1;
        }
        IntMatrix::from_fn(n, |i, j| counts[i * n + j].into())
    }

    /// Removes `v` and every edge touching it. Surviving vertices keep their
    /// relative order, as do surviving edges.
    pub fn delete_vertex(&self, v: VertexId) -> Result<(Multigraph, Relabeling)> {
        if v >= self.vertex_count {
            return Err(Error::domain(format!(
                "vertex {v} out of range for a graph with {} vertices",
                self.vertex_count
            )));
        }
        let vertices = (0..self.vertex_count)
            .map(|w| match w.cmp(&v) {
                std::cmp::Ordering::Less => Some(w),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(w - 1),
            })
            .collect::<Vec<_>>();

        let mut edge_map = Vec::with_capacity(self.edges.len());
        let mut kept = Vec::new();
        for e in &self.edges {
            if e.source == v || e.target == v {
                edge_map.push(None);
            } else {
                edge_map.push(Some(kept.len()));
                kept.push(Edge {
                    id: kept.len(),
                    source: vertices[e.source].unwrap(),
                    target: vertices[e.target].unwrap(),
                });
            }
        }
        let graph = Multigraph {
            vertex_count: self.vertex_count - 1,
            edges: kept,
        };
        Ok((
            graph,
            Relabeling {
                vertices,
                edges: edge_map,
            },
        ))
    }

    /// Graph with every edge reversed; its adjacency matrix is the transpose.
    pub fn reversed(&self) -> Multigraph {
        Multigraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: e.id,
                    source: e.target,
                    target: e.source,
                })
                .collect(),
        }
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// # comment
    /// vertices 3
    /// edge 0 1
    /// edge 1 0
    /// ```
    ///
    /// Blank lines and `#` comment lines may appear anywhere.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut vertex_count: Option<usize> = None;
        let mut pairs = Vec::new();
        let mut last_line = 0;

        for (index, line) in reader.lines().enumerate() {
            let lineno = index + 1;
            last_line = lineno;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            match (tokens[0], vertex_count) {
                ("vertices", None) => {
                    if tokens.len() != 2 {
                        return Err(Error::parse(lineno, "expected `vertices <n>`"));
                    }
                    vertex_count = Some(parse_index(lineno, tokens[1])?);
                }
                ("vertices", Some(_)) => {
                    return Err(Error::parse(lineno, "duplicate `vertices` header"));
                }
                ("edge", None) => {
                    return Err(Error::parse(
                        lineno,
                        "missing `vertices <n>` header before first edge",
                    ));
                }
                ("edge", Some(n)) => {
                    if tokens.len() != 3 {
                        return Err(Error::parse(lineno, "expected `edge <src> <dst>`"));
                    }
                    let source = parse_index(lineno, tokens[1])?;
                    let target = parse_index(lineno, tokens[2])?;
                    for v in [source, target] {
                        if v >= n {
                            return Err(Error::parse(
                                lineno,
                                format!("vertex index {v} out of range (graph has {n} vertices)"),
                            ));
                        }
                    }
                    pairs.push((source, target));
                }
                (other, _) => {
                    return Err(Error::parse(lineno, format!("unknown directive `{other}`")));
                }
            }
        }

        let n = vertex_count
            .ok_or_else(|| Error::parse(last_line + 1, "missing `vertices <n>` header"))?;
        Multigraph::from_edges(n, pairs)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Multigraph::parse(text.as_bytes())
    }

    /// Inverse of [`Multigraph::parse`]; edges are written in id order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// A reproducible random multigraph.
    ///
    /// The vertex count is uniform on `0..=max_vertices`, the edge count
    /// uniform on `0..=max_edges` (zero when there are no vertices), and each
    /// endpoint is drawn independently and uniformly.
    pub fn random(max_vertices: usize, max_edges: usize, seed: u64) -> Multigraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=max_vertices);
        let m = if n == 0 {
            0
        } else {
            rng.gen_range(0..=max_edges)
        };
        let edges = (0..m)
            .map(|id| Edge {
                id,
                source: rng.gen_range(0..n),
                target: rng.gen_range(0..n),
            })
            .collect();
        Multigraph {
            vertex_count: n,
            edges,
        }
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertex_count)?;
        for e in &self.edges {
            writeln!(f, "edge {} {}", e.source, e.target)?;
        }
        Ok(())
    }
}

fn parse_index(line: usize, token: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("`{token}` is not a non-negative integer")))
}

/// Where each vertex and edge of an original graph ended up after deletions.
/// `None` marks something that was deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    pub vertices: Vec<Option<VertexId>>,
    pub edges: Vec<Option<EdgeId>>,
}

impl Relabeling {
    pub fn identity(g: &Multigraph) -> Self {
        Relabeling {
            vertices: (0..g.vertex_count()).map(Some).collect(),
            edges: (0..g.edge_count()).map(Some).collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Relabeling) -> Relabeling {
        Relabeling {
            vertices: self
                .vertices
                .iter()
                .map(|v| v.and_then(|v| next.vertices[v]))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| e.and_then(|e| next.edges[e]))
                .collect(),
        }
    }
}
