//! Optimal chase times and strategies.
//!
//! The optimal expected chase time satisfies
//! `T(v) = 1 + (1 - p_v) * min_{u in N(v)} T(u)` at every vertex. Both solvers
//! start from the stay-forever values `1 / p_v` and only ever lower them.

use crate::graph::{Gamble, Graph, GraphError, VertexId};
use crate::heap::IndexedMinHeap;
use crate::time::ChaseTime;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

/// Tolerance used when comparing time vectors produced by different routes.
pub const AGREEMENT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("strategy has {got} entries for {n} vertices")]
    StrategyLength { got: usize, n: usize },
    #[error("strategy moves {vertex} to {target}, which is not in its closed neighborhood")]
    IllegalMove { vertex: VertexId, target: VertexId },
    #[error("following the strategy from {start} never reaches a fixed point (solver bug)")]
    ChaseCycle { start: VertexId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Iterative,
    Priority,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Iterative => "iterative",
            Algorithm::Priority => "priority",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Stationary cop strategy: where to go next from each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    next: Vec<VertexId>,
}

impl Strategy {
    /// The strategy that never moves.
    pub fn stay(n: usize) -> Strategy {
        Strategy {
            next: (0..n).collect(),
        }
    }

    /// Wraps a move table after checking every move is legal in `g`.
    pub fn new(g: &Graph, next: Vec<VertexId>) -> Result<Strategy, SolverError> {
        let s = Strategy { next };
        s.validate(g)?;
        Ok(s)
    }

    pub(crate) fn from_raw(next: Vec<VertexId>) -> Strategy {
        Strategy { next }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), SolverError> {
        if self.next.len() != g.vertex_count() {
            return Err(SolverError::StrategyLength {
                got: self.next.len(),
                n: g.vertex_count(),
            });
        }
        for (vertex, &target) in self.next.iter().enumerate() {
            if target >= g.vertex_count() || !g.can_move(vertex, target) {
                return Err(SolverError::IllegalMove { vertex, target });
            }
        }
        Ok(())
    }

    pub fn next(&self, v: VertexId) -> VertexId {
        self.next[v]
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.next
    }

    pub fn len(&self) -> usize {
        self.next.len()
    }

    pub fn is_empty(&self) -> bool {
        self.next.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub times: Vec<ChaseTime>,
    pub strategy: Strategy,
    /// Relaxation rounds for the iterative solver, settlements for the priority solver.
    pub iterations: usize,
    pub max_residual: f64,
    pub algorithm: Algorithm,
}

impl Solution {
    pub fn time(&self, v: VertexId) -> ChaseTime {
        self.times[v]
    }
}

/// Expected time of a cop who never leaves `v`.
pub fn evaluate_stay_forever(gamble: &Gamble, v: VertexId) -> Result<ChaseTime, GraphError> {
    if v >= gamble.len() {
        return Err(GraphError::VertexOutOfRange {
            v,
            n: gamble.len(),
        });
    }
    Ok(ChaseTime::stay(gamble.p(v)))
}

fn stay_vector(gamble: &Gamble) -> Vec<ChaseTime> {
    gamble.as_slice().iter().map(|&p| ChaseTime::stay(p)).collect()
}

/// Minimum of `times` over `N(v)`, ties to the smallest id.
fn best_neighbor(g: &Graph, times: &[ChaseTime], v: VertexId) -> (VertexId, ChaseTime) {
    let mut best = v;
    let mut best_time = times[v];
    for u in g.out_neighbors(v).iter().copied() {
        let ord = times[u].total_cmp(&best_time);
        if ord.is_lt() || (ord.is_eq() && u < best) {
            best = u;
            best_time = times[u];
        }
    }
    (best, best_time)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellmanStep {
    pub next: Vec<ChaseTime>,
    /// The minimizing neighbor wherever the value strictly improved.
    pub improved: Vec<Option<VertexId>>,
    pub changed: bool,
}

/// One synchronous relaxation round: every vertex is updated from `prev`.
pub fn bellman_update(g: &Graph, gamble: &Gamble, prev: &[ChaseTime]) -> BellmanStep {
    let n = g.vertex_count();
    assert_eq!(prev.len(), n, "time vector length mismatch");
    let mut next = prev.to_vec();
    let mut improved = vec![None; n];
    let mut changed = false;
    for v in 0..n {
        let (u, t) = best_neighbor(g, prev, v);
        let candidate = ChaseTime::step(gamble.p(v), t);
        if prev[v].improved_by(candidate) {
            next[v] = candidate;
            improved[v] = Some(u);
            changed = true;
        }
    }
    BellmanStep {
        next,
        improved,
        changed,
    }
}

/// Round-by-round relaxation from the stay-forever values until a round
/// changes nothing. Takes at most `n + 1` rounds.
pub fn solve_iterative(g: &Graph, gamble: &Gamble) -> Solution {
    let n = g.vertex_count();
    assert_eq!(gamble.len(), n, "gamble length mismatch");
    let mut times = stay_vector(gamble);
    let mut next: Vec<VertexId> = (0..n).collect();
    let mut rounds = 0;
    loop {
        let step = bellman_update(g, gamble, &times);
        rounds += 1;
        for (v, u) in step.improved.iter().enumerate() {
            if let Some(u) = *u {
                next[v] = u;
            }
        }
        times = step.next;
        if !step.changed {
            break;
        }
    }
    let max_residual = bellman_residual(g, gamble, &times);
    Solution {
        times,
        strategy: Strategy::from_raw(next),
        iterations: rounds,
        max_residual,
        algorithm: Algorithm::Iterative,
    }
}

/// Settles vertices in ascending chase time, relaxing in-neighbors of each
/// settled vertex.
pub fn solve_priority(g: &Graph, gamble: &Gamble) -> Solution {
    solve_priority_traced(g, gamble).0
}

/// [`solve_priority`] that also returns the settlement order.
pub fn solve_priority_traced(g: &Graph, gamble: &Gamble) -> (Solution, Vec<VertexId>) {
    let n = g.vertex_count();
    assert_eq!(gamble.len(), n, "gamble length mismatch");
    let mut times = stay_vector(gamble);
    let mut next: Vec<VertexId> = (0..n).collect();
    let mut queue = IndexedMinHeap::from_keys(times.clone());
    let mut order = Vec::with_capacity(n);
    while let Some((u, tu)) = queue.pop() {
        order.push(u);
        for &w in g.in_neighbors(u) {
            if !queue.contains(w) {
                continue;
            }
            let candidate = ChaseTime::step(gamble.p(w), tu);
            if times[w].improved_by(candidate) {
                times[w] = candidate;
                next[w] = u;
                queue.decrease_key(w, candidate);
            }
        }
    }
    let max_residual = bellman_residual(g, gamble, &times);
    let solution = Solution {
        times,
        strategy: Strategy::from_raw(next),
        iterations: n,
        max_residual,
        algorithm: Algorithm::Priority,
    };
    (solution, order)
}

pub fn solve(g: &Graph, gamble: &Gamble, algorithm: Algorithm) -> Solution {
    match algorithm {
        Algorithm::Iterative => solve_iterative(g, gamble),
        Algorithm::Priority => solve_priority(g, gamble),
    }
}

/// Largest deviation from the fixpoint equation over all vertices.
///
/// A vertex where exactly one side is infinite contributes `inf`.
pub fn bellman_residual(g: &Graph, gamble: &Gamble, times: &[ChaseTime]) -> f64 {
    assert_eq!(times.len(), g.vertex_count(), "time vector length mismatch");
    (0..g.vertex_count())
        .map(|v| {
            let (_, t) = best_neighbor(g, times, v);
            times[v].distance(ChaseTime::step(gamble.p(v), t))
        })
        .fold(0.0, f64::max)
}

/// Follows the strategy from `start` to the first vertex that stays put.
pub fn chase_path(g: &Graph, sol: &Solution, start: VertexId) -> Result<Vec<VertexId>, SolverError> {
    g.check_vertex(start)?;
    let n = g.vertex_count();
    let mut path = vec![start];
    let mut v = start;
    while sol.strategy.next(v) != v {
        v = sol.strategy.next(v);
        path.push(v);
        if path.len() > n {
            return Err(SolverError::ChaseCycle { start });
        }
    }
    Ok(path)
}

/// Coordinate-wise agreement within `tol`, with infinities matching exactly.
pub fn times_agree(a: &[ChaseTime], b: &[ChaseTime], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.distance(*y) <= tol)
}

/// Largest coordinate-wise distance between two time vectors.
pub fn max_distance(a: &[ChaseTime], b: &[ChaseTime]) -> f64 {
    assert_eq!(a.len(), b.len(), "time vector length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| x.distance(*y))
        .fold(0.0, f64::max)
}
