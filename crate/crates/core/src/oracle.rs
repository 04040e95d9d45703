//! Brute-force ground truth for small graphs.
//!
//! Every stationary strategy is enumerated and evaluated exactly. A fixed
//! strategy turns the game into a functional graph: each component is a
//! single cycle (possibly a fixed point) with trees hanging off it, so the
//! expected times solve in closed form with one scalar equation per cycle.

use crate::graph::{Gamble, Graph, VertexId};
use crate::solver::{SolverError, Strategy};
use crate::time::ChaseTime;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

/// Default bound on the number of strategies the oracle will enumerate.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Slack when deciding whether one evaluated strategy beats another.
const COMPARE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    InvalidStrategy(#[from] SolverError),
    #[error("instance has {count} stationary strategies, above the enumeration cap of {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("no enumerated strategy attains the optimum at every vertex")]
    NoDominantStrategy,
}

/// Exact expected times of one fixed strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyEvaluation {
    pub times: Vec<ChaseTime>,
    pub strategy: Strategy,
}

/// Number of stationary strategies, `prod |N(v)|`, saturating at `u128::MAX`.
pub fn strategy_count(g: &Graph) -> u128 {
    (0..g.vertex_count())
        .map(|v| g.out_neighbors(v).len() as u128 + 1)
        .fold(1u128, u128::saturating_mul)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Fresh,
    OnStack,
    Done,
}

/// Expected chase time from every vertex for a cop who always moves `v -> pi(v)`.
pub fn evaluate_stationary_strategy(
    g: &Graph,
    gamble: &Gamble,
    strategy: &Strategy,
) -> Result<StrategyEvaluation, OracleError> {
    strategy.validate(g)?;
    let n = g.vertex_count();
    let mut times = vec![ChaseTime::INFINITE; n];
    let mut mark = vec![Mark::Fresh; n];
    let mut stack: Vec<VertexId> = Vec::new();

    for root in 0..n {
        if mark[root] != Mark::Fresh {
            continue;
        }
        stack.clear();
        let mut v = root;
        while mark[v] == Mark::Fresh {
            mark[v] = Mark::OnStack;
            stack.push(v);
            v = strategy.next(v);
        }
        // Either we closed a new cycle at `v`, or we ran into solved territory.
        let mut tail = stack.len();
        if mark[v] == Mark::OnStack {
            let start = stack.iter().position(|&x| x == v).unwrap();
            solve_cycle(gamble, &stack[start..], &mut times);
            for &c in &stack[start..] {
                mark[c] = Mark::Done;
            }
            tail = start;
        }
        for &w in stack[..tail].iter().rev() {
            times[w] = ChaseTime::step(gamble.p(w), times[strategy.next(w)]);
            mark[w] = Mark::Done;
        }
    }
    Ok(StrategyEvaluation {
        times,
        strategy: strategy.clone(),
    })
}

/// `cycle[i + 1] = pi(cycle[i])` and `pi(cycle[k-1]) = cycle[0]`.
fn solve_cycle(gamble: &Gamble, cycle: &[VertexId], times: &mut [ChaseTime]) {
    if cycle.iter().all(|&c| gamble.p(c) == 0.0) {
        for &c in cycle {
            times[c] = ChaseTime::INFINITE;
        }
        return;
    }
    // Unrolling once around the cycle gives t0 = a + b * t0 with
    // a = sum_i prod_{j<i} (1 - p_j) and b = prod_j (1 - p_j).
    // 1 - b is formed from logs so that tiny probabilities keep their precision.
    let mut a = 0.0;
    let mut survive = 1.0;
    let mut log_b = 0.0;
    for &c in cycle {
        let p = gamble.p(c);
        a += survive;
        survive *= 1.0 - p;
        log_b += libm::log1p(-p);
    }
    let one_minus_b = -libm::expm1(log_b);
    let k = cycle.len();
    times[cycle[0]] = ChaseTime::new(a / one_minus_b).unwrap_or(ChaseTime::INFINITE);
    for i in (1..k).rev() {
        let succ = cycle[(i + 1) % k];
        times[cycle[i]] = ChaseTime::step(gamble.p(cycle[i]), times[succ]);
    }
}

/// Lexicographic enumeration of every stationary strategy of a graph; the
/// last vertex's choice varies fastest.
#[derive(Debug, Clone)]
pub struct StrategyEnumeration {
    choices: Vec<Vec<VertexId>>,
    index: Vec<usize>,
    done: bool,
}

impl Iterator for StrategyEnumeration {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        if self.done {
            return None;
        }
        let current = Strategy::from_raw(
            self.index
                .iter()
                .zip(&self.choices)
                .map(|(&i, c)| c[i])
                .collect(),
        );
        self.done = true;
        for v in (0..self.index.len()).rev() {
            self.index[v] += 1;
            if self.index[v] < self.choices[v].len() {
                self.done = false;
                break;
            }
            self.index[v] = 0;
        }
        Some(current)
    }
}

pub fn enumerate_strategies(g: &Graph, cap: u128) -> Result<StrategyEnumeration, OracleError> {
    let count = strategy_count(g);
    if count > cap {
        return Err(OracleError::TooLarge { count, cap });
    }
    let n = g.vertex_count();
    Ok(StrategyEnumeration {
        choices: (0..n).map(|v| g.closed_iter(v).collect()).collect(),
        index: vec![0; n],
        done: n == 0,
    })
}

/// Optimum over all stationary strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub times: Vec<ChaseTime>,
    pub best: Strategy,
    pub strategies_evaluated: u128,
}

fn not_worse(a: ChaseTime, b: ChaseTime) -> bool {
    b.is_infinite() || (a.is_finite() && a.value() <= b.value() + COMPARE_TOLERANCE)
}

fn strictly_better(a: ChaseTime, b: ChaseTime) -> bool {
    !not_worse(b, a)
}

/// Scans every strategy, keeping the per-vertex minima and the
/// lexicographically first strategy that attains all of them at once.
pub fn oracle_optimal(g: &Graph, gamble: &Gamble, cap: u128) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    let mut minima = vec![ChaseTime::INFINITE; n];
    let mut best: Option<StrategyEvaluation> = None;
    let mut count = 0u128;
    for strategy in enumerate_strategies(g, cap)? {
        count += 1;
        let eval = evaluate_stationary_strategy(g, gamble, &strategy)?;
        for (m, &t) in minima.iter_mut().zip(&eval.times) {
            if t.total_cmp(m).is_lt() {
                *m = t;
            }
        }
        let replace = match &best {
            None => true,
            Some(b) => {
                let dominates = eval.times.iter().zip(&b.times).all(|(&x, &y)| not_worse(x, y));
                let gains = eval
                    .times
                    .iter()
                    .zip(&b.times)
                    .any(|(&x, &y)| strictly_better(x, y));
                dominates && gains
            }
        };
        if replace {
            best = Some(eval);
        }
    }
    let best = best.ok_or(OracleError::NoDominantStrategy)?;
    let attains = best
        .times
        .iter()
        .zip(&minima)
        .all(|(&t, &m)| t.distance(m) <= COMPARE_TOLERANCE);
    if !attains {
        return Err(OracleError::NoDominantStrategy);
    }
    Ok(OracleResult {
        times: minima,
        best: best.strategy,
        strategies_evaluated: count,
    })
}
