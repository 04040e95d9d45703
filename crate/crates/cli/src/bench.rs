//! Timing sweep over random instances, comparing the two solvers.
//!
//! Only the solve call is timed. Every instance is solved by each selected
//! algorithm and, when both run, the time vectors are cross-checked.

use cop_gambler_core::gen::{gen_random_gamble, gen_random_graph, Density, GambleKind, GenError};
use cop_gambler_core::solver::{self, times_agree, Algorithm, AGREEMENT_TOLERANCE};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;
use thiserror::Error;

pub const CSV_HEADER: &str = "n,m,gamble_mode,algorithm,wall_time_ns,iterations,max_residual,agreement";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensitySetting {
    /// Target edge count `round(k * n)`, clamped to a feasible range.
    EdgesPerVertex(f64),
    /// Independent edge probability.
    Probability(f64),
}

impl std::fmt::Display for DensitySetting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DensitySetting::EdgesPerVertex(k) => write!(f, "m~{k}n"),
            DensitySetting::Probability(p) => write!(f, "p={p}"),
        }
    }
}

impl DensitySetting {
    fn resolve(self, n: usize, connected: bool) -> Density {
        match self {
            DensitySetting::Probability(p) => Density::Probability(p),
            DensitySetting::EdgesPerVertex(k) => {
                let max = n * (n - 1) / 2;
                let min = if connected { n - 1 } else { 0 };
                let m = (k * n as f64).round().max(0.0) as usize;
                Density::Edges(m.clamp(min, max))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub densities: Vec<DensitySetting>,
    pub gamble_modes: Vec<GambleKind>,
    pub repetitions: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub ensure_connected: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![100, 500, 1000],
            densities: vec![
                DensitySetting::EdgesPerVertex(4.0),
                DensitySetting::Probability(0.5),
            ],
            gamble_modes: vec![GambleKind::Uniform, GambleKind::Dirichlet],
            repetitions: 1,
            seed: 1,
            algorithms: vec![Algorithm::Iterative, Algorithm::Priority],
            ensure_connected: true,
        }
    }
}

/// On-disk form of [`BenchConfig`]; omitted fields take the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    sizes: Option<Vec<usize>>,
    densities: Option<Vec<DensitySetting>>,
    gamble_modes: Option<Vec<String>>,
    repetitions: Option<usize>,
    seed: Option<u64>,
    algorithms: Option<Vec<String>>,
    ensure_connected: Option<bool>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("bad benchmark config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown gamble mode '{0}' (expected uniform, dirichlet or sparse_support)")]
    GambleMode(String),
    #[error("unknown algorithm '{0}' (expected iterative or priority)")]
    Algorithm(String),
    #[error("benchmark config is invalid: {0}")]
    Invalid(&'static str),
}

pub fn parse_algorithm(name: &str) -> Result<Algorithm, ConfigError> {
    match name {
        "iterative" => Ok(Algorithm::Iterative),
        "priority" => Ok(Algorithm::Priority),
        other => Err(ConfigError::Algorithm(other.to_owned())),
    }
}

pub fn parse_gamble_kind(name: &str) -> Result<GambleKind, ConfigError> {
    GambleKind::from_name(name).ok_or_else(|| ConfigError::GambleMode(name.to_owned()))
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<BenchConfig, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let d = BenchConfig::default();
        let config = BenchConfig {
            sizes: raw.sizes.unwrap_or(d.sizes),
            densities: raw.densities.unwrap_or(d.densities),
            gamble_modes: match raw.gamble_modes {
                Some(names) => names
                    .iter()
                    .map(|s| parse_gamble_kind(s))
                    .collect::<Result<_, _>>()?,
                None => d.gamble_modes,
            },
            repetitions: raw.repetitions.unwrap_or(d.repetitions),
            seed: raw.seed.unwrap_or(d.seed),
            algorithms: match raw.algorithms {
                Some(names) => names
                    .iter()
                    .map(|s| parse_algorithm(s))
                    .collect::<Result<_, _>>()?,
                None => d.algorithms,
            },
            ensure_connected: raw.ensure_connected.unwrap_or(d.ensure_connected),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(ConfigError::Invalid("sizes must be non-empty and positive"));
        }
        if self.repetitions == 0 {
            return Err(ConfigError::Invalid("repetitions must be positive"));
        }
        if self.densities.is_empty() || self.gamble_modes.is_empty() || self.algorithms.is_empty() {
            return Err(ConfigError::Invalid(
                "densities, gamble_modes and algorithms must be non-empty",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub gamble_mode: &'static str,
    pub algorithm: &'static str,
    pub wall_time_ns: u128,
    pub iterations: usize,
    pub max_residual: f64,
    /// Empty unless both algorithms ran on the instance.
    pub agreement: Option<bool>,
    #[serde(skip)]
    pub density: DensitySetting,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// One message per instance whose solvers disagreed.
    pub mismatches: Vec<String>,
}

impl BenchReport {
    pub fn all_agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_HEADER.split(','))?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Median solve time per (n, density, gamble mode) cell and algorithm,
    /// with the faster algorithm named where both ran.
    pub fn summary(&self) -> Vec<String> {
        let mut cells: Vec<(usize, DensitySetting, &str)> = Vec::new();
        for r in &self.rows {
            let key = (r.n, r.density, r.gamble_mode);
            if !cells.contains(&key) {
                cells.push(key);
            }
        }
        cells
            .into_iter()
            .map(|(n, density, mode)| {
                let in_cell = |r: &&BenchRow| r.n == n && r.density == density && r.gamble_mode == mode;
                let median = |alg: &str| {
                    let mut t: Vec<u128> = self
                        .rows
                        .iter()
                        .filter(in_cell)
                        .filter(|r| r.algorithm == alg)
                        .map(|r| r.wall_time_ns)
                        .collect();
                    t.sort_unstable();
                    t.get(t.len().wrapping_sub(1) / 2).copied()
                };
                let it = median("iterative");
                let pr = median("priority");
                let fmt = |x: Option<u128>| x.map_or("-".to_owned(), |v| format!("{v}ns"));
                let faster = match (it, pr) {
                    (Some(a), Some(b)) if a < b => " (iterative faster)",
                    (Some(a), Some(b)) if b < a => " (priority faster)",
                    _ => "",
                };
                let m = self.rows.iter().filter(in_cell).map(|r| r.m).max().unwrap_or(0);
                format!(
                    "n={n} m={m} ({density}) {mode}: iterative {} priority {}{faster}",
                    fmt(it),
                    fmt(pr)
                )
            })
            .collect()
    }
}

/// SplitMix64 finalizer, used to derive independent per-instance seeds.
fn mix(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport, GenError> {
    let mut report = BenchReport::default();
    let mut instance = 0u64;
    for &n in &config.sizes {
        for &density in &config.densities {
            for &kind in &config.gamble_modes {
                for _ in 0..config.repetitions {
                    let graph_seed = mix(config.seed, 2 * instance);
                    let gamble_seed = mix(config.seed, 2 * instance + 1);
                    instance += 1;
                    let g = gen_random_graph(
                        n,
                        density.resolve(n, config.ensure_connected),
                        config.ensure_connected,
                        graph_seed,
                    )?;
                    let p = gen_random_gamble(n, kind, gamble_seed)?;

                    let mut solved = Vec::with_capacity(config.algorithms.len());
                    for &alg in &config.algorithms {
                        let start = Instant::now();
                        let sol = solver::solve(&g, &p, alg);
                        let elapsed = start.elapsed().as_nanos();
                        solved.push((sol, elapsed));
                    }
                    let both = config.algorithms.contains(&Algorithm::Iterative)
                        && config.algorithms.contains(&Algorithm::Priority);
                    let agreement = both.then(|| {
                        solved
                            .windows(2)
                            .all(|w| times_agree(&w[0].0.times, &w[1].0.times, AGREEMENT_TOLERANCE))
                    });
                    if agreement == Some(false) {
                        report.mismatches.push(format!(
                            "solvers disagree on instance #{} (n={n}, m={}, {kind}, graph seed {graph_seed}, gamble seed {gamble_seed})",
                            instance - 1,
                            g.edge_count()
                        ));
                    }
                    for (sol, elapsed) in solved {
                        report.rows.push(BenchRow {
                            n,
                            m: g.edge_count(),
                            gamble_mode: kind.name(),
                            algorithm: sol.algorithm.name(),
                            wall_time_ns: elapsed,
                            iterations: sol.iterations,
                            max_residual: sol.max_residual,
                            agreement,
                            density,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}
