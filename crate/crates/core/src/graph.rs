//! Graph and gamble data model.
//!
//! Vertices are dense ids `0..n`. Adjacency lists are kept sorted and free of
//! duplicates and self-loops; the cop may always stay put, so every closed
//! neighborhood implicitly contains its own vertex.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

pub type VertexId = usize;

/// Absolute tolerance on the sum of a gamble.
pub const GAMBLE_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("instance has no vertices")]
    EmptyInstance,
    #[error("edge #{index} ({u}, {v}) has an endpoint outside 0..{n}")]
    EdgeOutOfRange {
        index: usize,
        u: VertexId,
        v: VertexId,
        n: usize,
    },
    #[error("vertex {v} is outside 0..{n}")]
    VertexOutOfRange { v: VertexId, n: usize },
    #[error("label table has {got} entries for {n} vertices")]
    LabelCount { got: usize, n: usize },
    #[error("gamble has {got} entries for {n} vertices")]
    GambleLength { got: usize, n: usize },
    #[error("probability at vertex {vertex} is {value}, outside [0, 1] (sum {sum})")]
    ProbabilityOutOfRange { vertex: VertexId, value: f64, sum: f64 },
    #[error("probabilities sum to {sum}, expected {expected}")]
    BadSum { sum: f64, expected: &'static str },
}

/// Directed or undirected simple graph with materialized in-adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    directed: bool,
    labels: Option<Vec<String>>,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
}

impl Graph {
    /// Builds a graph from an edge list, dropping self-loops and duplicate
    /// edges. Undirected edges are stored in both directions.
    pub fn build(
        directed: bool,
        vertex_count: usize,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Graph, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::EmptyInstance);
        }
        let mut out_adj: Vec<Vec<VertexId>> = (0..vertex_count).map(|_| Vec::new()).collect();
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::EdgeOutOfRange {
                    index,
                    u,
                    v,
                    n: vertex_count,
                });
            }
            if u == v {
                continue;
            }
            out_adj[u].push(v);
            if !directed {
                out_adj[v].push(u);
            }
        }
        for list in &mut out_adj {
            list.sort_unstable();
            list.dedup();
        }
        let in_adj = if directed {
            transpose(&out_adj)
        } else {
            out_adj.clone()
        };
        Ok(Graph {
            directed,
            labels: None,
            out_adj,
            in_adj,
        })
    }

    /// Attaches display names, one per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph, GraphError> {
        if labels.len() != self.vertex_count() {
            return Err(GraphError::LabelCount {
                got: labels.len(),
                n: self.vertex_count(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    /// Number of stored edges; undirected edges count once.
    pub fn edge_count(&self) -> usize {
        let arcs: usize = self.out_adj.iter().map(Vec::len).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(v)).map(String::as_str)
    }

    /// Sorted out-neighbors of `v`, excluding `v` itself.
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    /// Sorted in-neighbors of `v`, excluding `v` itself.
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out_adj
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Whether the cop may move from `v` to `u` in one round.
    pub fn can_move(&self, v: VertexId, u: VertexId) -> bool {
        v == u || self.has_edge(v, u)
    }

    /// `N(v)`: out-neighbors plus `v`, ascending.
    pub fn closed_neighborhood(&self, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        self.check_vertex(v)?;
        Ok(self.closed_iter(v).collect())
    }

    /// Allocation-free ascending walk over `N(v)`. Panics if `v` is out of range.
    pub fn closed_iter(&self, v: VertexId) -> ClosedNeighborhood<'_> {
        ClosedNeighborhood {
            center: Some(v),
            rest: self.out_adj[v].iter(),
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                v,
                n: self.vertex_count(),
            })
        }
    }

    /// Edge list in ascending order; undirected edges reported once with `u < v`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.out_adj.iter().enumerate() {
            for &v in list {
                if self.directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True when every vertex reaches every other along (out-)edges in an
    /// undirected graph, or along the underlying undirected graph otherwise.
    pub fn is_weakly_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in self.out_adj[v].iter().chain(self.in_adj[v].iter()) {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }
}

/// Ascending iterator over a closed neighborhood.
pub struct ClosedNeighborhood<'a> {
    center: Option<VertexId>,
    rest: core::slice::Iter<'a, VertexId>,
}

impl Iterator for ClosedNeighborhood<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        match (self.center, self.rest.as_slice().first()) {
            (Some(c), Some(&u)) if u < c => {
                self.rest.next();
                Some(u)
            }
            (Some(c), _) => {
                self.center = None;
                Some(c)
            }
            (None, _) => self.rest.next().copied(),
        }
    }
}

pub(crate) fn transpose(adj: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let mut t: Vec<Vec<VertexId>> = (0..adj.len()).map(|_| Vec::new()).collect();
    // Pushing in ascending source order keeps every list sorted.
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            t[v].push(u);
        }
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GambleMode {
    /// Probabilities must sum to 1.
    #[default]
    Strict,
    /// Probabilities may sum to anything up to 1.
    Permissive,
}

/// The gambler's per-vertex probabilities, used exactly as given.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamble {
    p: Vec<f64>,
    mode: GambleMode,
}

impl Gamble {
    /// Checks range and sum of `raw` for a graph with `vertex_count` vertices.
    pub fn new(vertex_count: usize, raw: Vec<f64>, mode: GambleMode) -> Result<Gamble, GraphError> {
        if raw.len() != vertex_count {
            return Err(GraphError::GambleLength {
                got: raw.len(),
                n: vertex_count,
            });
        }
        let sum: f64 = raw.iter().sum();
        if let Some((vertex, &value)) = raw
            .iter()
            .enumerate()
            .find(|(_, &x)| !(0.0..=1.0).contains(&x))
        {
            return Err(GraphError::ProbabilityOutOfRange { vertex, value, sum });
        }
        match mode {
            GambleMode::Strict if libm::fabs(sum - 1.0) > GAMBLE_SUM_TOLERANCE => {
                Err(GraphError::BadSum {
                    sum,
                    expected: "1",
                })
            }
            GambleMode::Permissive if sum > 1.0 + GAMBLE_SUM_TOLERANCE => Err(GraphError::BadSum {
                sum,
                expected: "at most 1",
            }),
            _ => Ok(Gamble { p: raw, mode }),
        }
    }

    /// Uniform distribution over `n` vertices.
    pub fn uniform(n: usize) -> Result<Gamble, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyInstance);
        }
        Gamble::new(n, alloc::vec![1.0 / n as f64; n], GambleMode::Strict)
    }

    pub fn p(&self, v: VertexId) -> f64 {
        self.p[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn mode(&self) -> GambleMode {
        self.mode
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Whether the probabilities form a full distribution.
    pub fn is_distribution(&self) -> bool {
        libm::fabs(self.sum() - 1.0) <= GAMBLE_SUM_TOLERANCE
    }
}

/// Validates a raw probability vector against `g`.
pub fn validate_gamble(g: &Graph, raw: &[f64], mode: GambleMode) -> Result<Gamble, GraphError> {
    Gamble::new(g.vertex_count(), raw.to_vec(), mode)
}
