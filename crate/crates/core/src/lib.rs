//! Packing colorings of subcubic graphs.
//!
//! A packing coloring with schedule `(s_1, ..., s_k)` partitions the vertices
//! into classes `V_1, ..., V_k` such that any two distinct vertices in `V_i`
//! are at distance greater than `s_i`. This crate provides:
//!
//! * graph plumbing: graph6 and edge-list I/O, distance queries, subdivision,
//!   small-graph enumeration, random cubic generation (`graph`, `graph6`,
//!   `generate`, `subdivision`);
//! * verification and exact backtracking search for arbitrary schedules
//!   (`coloring`, `exact`);
//! * a constructive solver for the schedule `(1,1,2,2)` on connected subcubic
//!   graphs, which succeeds on everything except the Petersen graph
//!   (`constructive`);
//! * a corpus runner that fans the constructive solver over graph families and
//!   emits a checksummed report (`corpus`).

pub mod bitset;
pub mod coloring;
pub mod constructive;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod schedule;
pub mod subdivision;

pub use coloring::{Certificate, PackingColoring, Verdict, Violation};
pub use error::Error;
pub use exact::{naive_solve, pcn, solve_exact, PcnResult, SolveOutcome};
pub use graph::{Graph, Vertex};
pub use schedule::PackingSchedule;
