//! Optimal stationary cop strategies for the cop-versus-gambler pursuit game.
//!
//! The cop walks a graph (moving along an out-edge or staying put each round)
//! while the gambler re-draws a vertex every round from a fixed distribution
//! that the cop knows. This crate computes, for every starting vertex, the
//! minimum expected number of rounds until both stand on the same vertex,
//! together with a strategy that attains it.
//!
//! Two solvers are provided: [`solver::solve_iterative`] relaxes every vertex
//! each round until nothing improves, and [`solver::solve_priority`] settles
//! vertices in order of increasing chase time using a decrease-key heap.
//! [`oracle`] brute-forces every stationary strategy on small graphs and
//! [`sim`] plays the game with seeded Monte Carlo trials.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod gen;
pub mod graph;
pub mod heap;
pub mod oracle;
pub mod sim;
pub mod solver;
pub mod time;

pub use graph::{Gamble, GambleMode, Graph, GraphError, VertexId};
pub use oracle::{OracleError, StrategyEvaluation};
pub use sim::{AliasTable, SimError, SimReport};
pub use solver::{Algorithm, Solution, SolverError, Strategy};
pub use time::ChaseTime;
