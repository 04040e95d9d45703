//! Seeded random instances: Erdős–Rényi graphs laid over a uniform spanning
//! tree, and gambles of three shapes.

use crate::graph::{Gamble, GambleMode, Graph, GraphError, VertexId};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    /// Each vertex pair is an edge independently with this probability.
    Probability(f64),
    /// Exactly this many undirected edges.
    Edges(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("cannot generate a graph with no vertices")]
    Empty,
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("{m} edges requested but {n} vertices allow at most {max}")]
    TooManyEdges { m: usize, n: usize, max: usize },
    #[error("{m} edges cannot connect {n} vertices")]
    TooFewEdges { m: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GambleKind {
    Uniform,
    Dirichlet,
    SparseSupport,
}

impl GambleKind {
    pub const ALL: [GambleKind; 3] = [
        GambleKind::Uniform,
        GambleKind::Dirichlet,
        GambleKind::SparseSupport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GambleKind::Uniform => "uniform",
            GambleKind::Dirichlet => "dirichlet",
            GambleKind::SparseSupport => "sparse_support",
        }
    }

    pub fn from_name(name: &str) -> Option<GambleKind> {
        GambleKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for GambleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn max_edges(n: usize) -> usize {
    n * (n - 1) / 2
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Uniform spanning tree of the complete graph (Aldous–Broder walk).
fn random_spanning_tree<R: Rng>(n: usize, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    if n < 2 {
        return tree;
    }
    let mut visited = alloc::vec![false; n];
    let mut current = rng.random_range(0..n);
    visited[current] = true;
    let mut remaining = n - 1;
    while remaining > 0 {
        let mut next = rng.random_range(0..n - 1);
        if next >= current {
            next += 1;
        }
        if !visited[next] {
            visited[next] = true;
            tree.push(ordered(current, next));
            remaining -= 1;
        }
        current = next;
    }
    tree
}

/// Undirected random graph on `n` vertices, deterministic in `seed`.
pub fn gen_random_graph(
    n: usize,
    density: Density,
    ensure_connected: bool,
    seed: u64,
) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = if ensure_connected {
        random_spanning_tree(n, &mut rng)
    } else {
        Vec::new()
    };
    let edges = match density {
        Density::Probability(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::BadProbability(p));
            }
            let in_tree: BTreeSet<_> = tree.iter().copied().collect();
            let mut edges = tree;
            for u in 0..n {
                for v in u + 1..n {
                    if !in_tree.contains(&(u, v)) && rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        Density::Edges(m) => {
            let max = max_edges(n);
            if m > max {
                return Err(GenError::TooManyEdges { m, n, max });
            }
            if ensure_connected && m < n - 1 {
                return Err(GenError::TooFewEdges { m, n });
            }
            fill_edges(n, m, tree, &mut rng)
        }
    };
    Ok(Graph::build(false, n, &edges)?)
}

/// Adds distinct random edges to `edges` until there are `m`.
fn fill_edges<R: Rng>(
    n: usize,
    m: usize,
    mut edges: Vec<(VertexId, VertexId)>,
    rng: &mut R,
) -> Vec<(VertexId, VertexId)> {
    let mut present: BTreeSet<_> = edges.iter().copied().collect();
    let missing = m - edges.len();
    if 2 * m <= max_edges(n) {
        // Sparse target: rejection sampling hits a free pair at least half the time.
        while edges.len() < m {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && present.insert(ordered(u, v)) {
                edges.push(ordered(u, v));
            }
        }
    } else {
        let mut free: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !present.contains(e))
            .collect();
        let (chosen, _) = free.partial_shuffle(rng, missing);
        edges.extend_from_slice(chosen);
        present.clear();
    }
    edges
}

/// Symmetric Dirichlet(1) draw of length `k` via normalized exponentials.
fn dirichlet<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..k)
        .map(|_| {
            // 1 - U lies in (0, 1], so the logarithm is finite.
            let u = 1.0 - rng.random::<f64>();
            -libm::log(u)
        })
        .collect();
    let total: f64 = draws.iter().sum();
    if total > 0.0 {
        draws.iter().map(|x| x / total).collect()
    } else {
        alloc::vec![1.0 / k as f64; k]
    }
}

pub fn gen_random_gamble(n: usize, kind: GambleKind, seed: u64) -> Result<Gamble, GenError> {
    if n == 0 {
        return Err(GenError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = match kind {
        GambleKind::Uniform => alloc::vec![1.0 / n as f64; n],
        GambleKind::Dirichlet => dirichlet(n, &mut rng),
        GambleKind::SparseSupport => {
            let support = n.div_ceil(4);
            let mut ids: Vec<VertexId> = (0..n).collect();
            let (chosen, _) = ids.partial_shuffle(&mut rng, support);
            let weights = dirichlet(support, &mut rng);
            let mut p = alloc::vec![0.0; n];
            for (&v, w) in chosen.iter().zip(weights) {
                p[v] = w;
            }
            p
        }
    };
    Ok(Gamble::new(n, p, GambleMode::Strict)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_when_edges_equal_n_minus_one() {
        for seed in 0..20 {
            let g = gen_random_graph(4, Density::Edges(3), true, seed).unwrap();
            assert_eq!(g.edge_count(), 3);
            assert!(g.is_weakly_connected());
        }
    }

    #[test]
    fn complete_graph_at_probability_one() {
        for connected in [false, true] {
            let g = gen_random_graph(9, Density::Probability(1.0), connected, 4).unwrap();
            assert_eq!(g.edge_count(), 36);
        }
    }

    #[test]
    fn dense_edge_target() {
        let g = gen_random_graph(10, Density::Edges(40), true, 2).unwrap();
        assert_eq!(g.edge_count(), 40);
        assert!(g.is_weakly_connected());
    }

    #[test]
    fn sparse_connected_graphs() {
        // C(50, 2) * 0.1 = 122.5 expected extra edges, sd about 10.5; the tree adds 49.
        let mut total = 0usize;
        let seeds = 40;
        for seed in 0..seeds {
            let g = gen_random_graph(50, Density::Probability(0.1), true, seed).unwrap();
            assert!(g.is_weakly_connected());
            let m = g.edge_count();
            assert!(m >= 49);
            total += m;
        }
        let mean = total as f64 / seeds as f64;
        let expected = 49.0 + (1225.0 - 49.0) * 0.1;
        let sd = libm::sqrt((1225.0 - 49.0) * 0.1 * 0.9 / seeds as f64);
        assert!((mean - expected).abs() <= 4.0 * sd, "{mean} vs {expected}");
    }

    #[test]
    fn generation_errors() {
        assert_eq!(gen_random_graph(0, Density::Edges(0), false, 0), Err(GenError::Empty));
        assert_eq!(
            gen_random_graph(4, Density::Edges(2), true, 0),
            Err(GenError::TooFewEdges { m: 2, n: 4 })
        );
        assert_eq!(
            gen_random_graph(4, Density::Edges(7), false, 0),
            Err(GenError::TooManyEdges { m: 7, n: 4, max: 6 })
        );
        assert_eq!(
            gen_random_graph(4, Density::Probability(1.5), false, 0),
            Err(GenError::BadProbability(1.5))
        );
    }

    #[test]
    fn deterministic() {
        let a = gen_random_graph(30, Density::Probability(0.2), true, 77).unwrap();
        let b = gen_random_graph(30, Density::Probability(0.2), true, 77).unwrap();
        assert_eq!(a, b);
        let c = gen_random_gamble(30, GambleKind::Dirichlet, 5).unwrap();
        let d = gen_random_gamble(30, GambleKind::Dirichlet, 5).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn gamble_shapes() {
        let u = gen_random_gamble(4, GambleKind::Uniform, 0).unwrap();
        assert_eq!(u.as_slice(), &[0.25; 4]);
        for n in [1, 2, 7, 33] {
            let d = gen_random_gamble(n, GambleKind::Dirichlet, n as u64).unwrap();
            assert!((d.sum() - 1.0).abs() <= 1e-12);
            assert!(d.as_slice().iter().all(|&x| x > 0.0 && x <= 1.0));
        }
        let s = gen_random_gamble(8, GambleKind::SparseSupport, 3).unwrap();
        assert_eq!(s.as_slice().iter().filter(|&&x| x > 0.0).count(), 2);
        assert!((s.sum() - 1.0).abs() <= 1e-12);
    }
}
