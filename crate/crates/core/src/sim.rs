//! Seeded Monte Carlo play of the chase.
//!
//! Each round the gambler's vertex is drawn and compared with the cop's
//! current vertex before the cop moves, so a cop standing on a vertex with
//! `p = 1` is caught in round 1. Trial `t` draws from its own ChaCha stream
//! `(seed, t)`, which makes reports independent of execution order.

use crate::graph::{Gamble, GambleMode, Graph, GraphError, VertexId};
use crate::solver::{SolverError, Strategy};
use alloc::vec;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_ROUND_CAP: u64 = 10_000_000;

/// Name of the sampling method, carried in every report.
pub const SAMPLER: &str = "alias";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("gamble sums to {sum}; simulation needs a full distribution")]
    NotADistribution { sum: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Strategy(#[from] SolverError),
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("round cap must be at least 1")]
    ZeroRoundCap,
}

/// Vose alias table: O(1) draws from a fixed discrete distribution.
#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<VertexId>,
}

impl AliasTable {
    pub fn new(gamble: &Gamble) -> Result<AliasTable, SimError> {
        if gamble.mode() == GambleMode::Permissive && !gamble.is_distribution() {
            return Err(SimError::NotADistribution { sum: gamble.sum() });
        }
        let p = gamble.as_slice();
        let n = p.len();
        let sum: f64 = p.iter().sum();
        let mut scaled: Vec<f64> = p.iter().map(|&x| x * n as f64 / sum).collect();
        let mut prob = vec![0.0; n];
        let mut alias: Vec<VertexId> = (0..n).collect();
        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&l), Some(&g)) = (small.last(), large.last()) {
            small.pop();
            prob[l] = scaled[l];
            alias[l] = g;
            scaled[g] = (scaled[g] + scaled[l]) - 1.0;
            if scaled[g] < 1.0 {
                large.pop();
                small.push(g);
            }
        }
        // Leftovers are rounding residue. A zero-probability column must still
        // never emit itself, so it redirects to the heaviest vertex.
        let heaviest = (0..n)
            .max_by(|&a, &b| p[a].total_cmp(&p[b]).then(b.cmp(&a)))
            .unwrap_or(0);
        for i in large.into_iter().chain(small) {
            if p[i] > 0.0 {
                prob[i] = 1.0;
            } else {
                prob[i] = 0.0;
                alias[i] = heaviest;
            }
        }
        Ok(AliasTable { prob, alias })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> VertexId {
        let column = rng.random_range(0..self.prob.len());
        if rng.random::<f64>() < self.prob[column] {
            column
        } else {
            self.alias[column]
        }
    }
}

/// One draw of the gambler's vertex.
pub fn sample_gamble<R: Rng + ?Sized>(gamble: &Gamble, rng: &mut R) -> Result<VertexId, SimError> {
    Ok(AliasTable::new(gamble)?.sample(rng))
}

/// The rng for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub trials: u64,
    /// Average capture round over trials that finished within the cap.
    pub mean: f64,
    /// Sample standard deviation over `sqrt(completed trials)`.
    pub std_error: f64,
    pub truncated: u64,
    pub seed: u64,
    pub start: VertexId,
    pub sampler: &'static str,
}

impl SimReport {
    pub fn completed(&self) -> u64 {
        self.trials - self.truncated
    }
}

pub fn simulate_chase(
    g: &Graph,
    gamble: &Gamble,
    strategy: &Strategy,
    start: VertexId,
    trials: u64,
    seed: u64,
    round_cap: u64,
) -> Result<SimReport, SimError> {
    g.check_vertex(start)?;
    strategy.validate(g)?;
    if gamble.len() != g.vertex_count() {
        return Err(GraphError::GambleLength {
            got: gamble.len(),
            n: g.vertex_count(),
        }
        .into());
    }
    if trials == 0 {
        return Err(SimError::ZeroTrials);
    }
    if round_cap == 0 {
        return Err(SimError::ZeroRoundCap);
    }
    let table = AliasTable::new(gamble)?;

    // Integer accumulators keep the aggregate exact and order-independent.
    let mut sum: u128 = 0;
    let mut sum_sq: u128 = 0;
    let mut truncated = 0u64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        match play(&table, strategy, start, round_cap, &mut rng) {
            Some(round) => {
                sum += u128::from(round);
                sum_sq += u128::from(round) * u128::from(round);
            }
            None => truncated += 1,
        }
    }
    let k = u128::from(trials - truncated);
    let (mean, std_error) = if k == 0 {
        (f64::NAN, 0.0)
    } else {
        let mean = sum as f64 / k as f64;
        let se = if k < 2 {
            0.0
        } else {
            let spread = (k * sum_sq - sum * sum) as f64;
            let variance = spread / (k as f64 * (k - 1) as f64);
            libm::sqrt(variance / k as f64)
        };
        (mean, se)
    };
    Ok(SimReport {
        trials,
        mean,
        std_error,
        truncated,
        seed,
        start,
        sampler: SAMPLER,
    })
}

/// Capture round of a single chase, or `None` past the cap.
fn play<R: Rng + ?Sized>(
    table: &AliasTable,
    strategy: &Strategy,
    start: VertexId,
    round_cap: u64,
    rng: &mut R,
) -> Option<u64> {
    let mut cop = start;
    for round in 1..=round_cap {
        if table.sample(rng) == cop {
            return Some(round);
        }
        cop = strategy.next(cop);
    }
    None
}
