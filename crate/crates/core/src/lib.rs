//! Deterministic QUBO toolkit.
//!
//! The crate bundles everything needed to study quadratic unconstrained
//! binary optimization at desk scale:
//!
//! * [`qubo`] — the sparse QUBO model, exact energy evaluation, incremental
//!   single-flip deltas, and penalty dualization of equality systems;
//! * [`anneal`] — a digital-annealer-style stochastic solver with a normal
//!   (single trajectory, dynamic offset) and a parallel (replica exchange)
//!   mode;
//! * [`problems`] — instances, QUBO encoders, and solution decoders for the
//!   quadratic assignment, quadratic cycle partition, and selective graph
//!   coloring problems;
//! * [`reduce`] — the two-phase size-reduction heuristic for selective
//!   coloring;
//! * [`gen`] — seeded random instance generators;
//! * [`oracle`] — exhaustive exact solvers used as ground truth;
//! * [`metrics`] — comparison measures and experiment harnesses.
//!
//! Everything is a pure function of its inputs plus an explicit 64-bit seed;
//! see [`rng`] for the exact random-stream conventions that make results
//! bit-reproducible across platforms and thread counts.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std` feature
//! only adds wall-clock timing to annealing results and multi-threaded
//! replica execution.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod anneal;
pub mod gen;
pub mod metrics;
pub mod oracle;
pub mod problems;
pub mod qubo;
pub mod reduce;
pub mod rng;

pub use anneal::{anneal, AnnealConfig, AnnealResult, Mode};
pub use qubo::{BinaryState, EqualitySystem, QuboModel};
