//! Simulator and policy library for energy-aware mobility management in
//! edge-computing cellular networks.
//!
//! A mobile user generates computation tasks along an unknown trajectory.
//! Each task splits into sequential subtasks offloaded over the uplink to
//! one of the base stations covering the user, every BS doubling as an edge
//! compute server. Policies pick the serving BS per subtask to minimize
//! average delay under a long-term transmit-energy budget, paying a
//! one-time cost whenever consecutive subtasks switch BS.
//!
//! The library provides:
//!
//! - [`scenario`]: network layout, mobility, workloads, link and cost models;
//! - [`lyapunov`]: the virtual energy-deficit queue, drift-plus-penalty
//!   weighting and guaranteed delay/energy envelopes;
//! - [`bandit`]: UCB1 and volatile-UCB1 learners with stopping rules and
//!   regret accounting, for the local-state-information setting;
//! - [`policies`]: the online deciders, three greedy benchmarks and the
//!   exact frame-lookahead oracle;
//! - [`engine`]: the simulation loop, traces, replication and bound checks;
//! - [`config`]: the flat key-value run configuration;
//! - [`experiment`]: parameter sweeps and CSV emission.
//!
//! See the crate examples for runnable entry points to each capability, or
//! the `emm` binary for the `run`/`sweep`/`verify`/`dump-config` commands.

pub mod bandit;
pub mod config;
pub mod engine;
pub mod experiment;
pub mod lyapunov;
pub mod policies;
pub mod rng;
pub mod scenario;
