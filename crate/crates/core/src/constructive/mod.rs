//! A constructive solver for packing (1,1,2,2)-colorings of connected
//! subcubic graphs.
//!
//! The search maintains a partition of the vertices into two independent
//! sides and a set of free vertices, and drives it through four phases:
//!
//! 1. **Growth** ([`improve`]): local moves that enlarge the two sides
//!    until every free vertex sees both sides and the free vertices form
//!    only single vertices and single edges; bounded switch sequences then
//!    merge free components without losing score. On small graphs an
//!    exhaustive certificate pins the best possible score.
//! 2. **Structure** ([`aux_graph`]): free vertices at graph distance at
//!    most two form the auxiliary graph; its cycle components are the
//!    obstacle, and each one embeds as a star (three frees around a hub)
//!    or a ring (frees alternating with colored middles, plus at most one
//!    adjacent pair).
//! 3. **Cycle removal** ([`rings`], [`eliminate`]): with two or more
//!    cycles the reduction step walks the nearest two structures together
//!    until they merge or break; the last cycle is then dissolved by a
//!    chain of switches, each consuming one path component and emitting
//!    another, never reusing an emitted one.
//! 4. **Read-off** ([`driver`]): a cycle-free state two-colors its free
//!    components into the radius-2 classes; sides A and B become the two
//!    radius-1 classes. The result is re-verified before it is returned.
//!
//! The driver restarts with fresh randomness whenever a phase stalls; the
//! Petersen graph, the one connected subcubic graph this cannot color, is
//! answered with a sentinel. [`audit`] re-checks recorded states against
//! the structural properties the phases assume.

pub mod audit;
pub mod aux_graph;
pub mod driver;
pub mod eliminate;
pub mod improve;
pub mod partition;
pub mod rings;

pub use audit::{audit as check_state, witness_json, AuditReport, AuditViolation};
pub use aux_graph::{embed_cycle, AuxGraph, Embedding, Shape};
pub use driver::{
    finalize_coloring, solve_1122, solve_1122_logged, PhaseTimings, RunLog, SolveResult,
    SolverOptions, TraceRecord,
};
pub use eliminate::{
    eliminate_last_cycle, has_clean_exit, reduce_cycle_count, Elimination, ReduceStep, TraceStep,
};
pub use improve::{
    certify_max_score, grow_to_fixpoint, merge_components, reach_fixed_point, SideCert,
};
pub use partition::{initial_partition, Partition, Side, SideAssignment};
pub use rings::{cycle_gap, exchange_ring, flip_hub, ring_geometry, rotate_pair_to, GapWitness};
