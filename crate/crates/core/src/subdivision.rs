//! 1-subdivisions and the coloring lift.
//!
//! Subdividing every edge doubles all original distances. That turns a
//! `(1,1,2,2)`-coloring of a subcubic graph into a `(1,2,3,4,5)`-coloring of
//! its subdivision: midpoints form an independent set (class 1), and the four
//! original classes move to classes 2..5, where the doubled distances clear
//! each radius with room to spare.

use crate::coloring::{verify, Certificate, LineageEntry, PackingColoring};
use crate::constructive::{solve_1122, SolverOptions, SolveResult};
use crate::error::{Error, Result};
use crate::exact::{solve_exact, SolveOutcome};
use crate::graph::{Graph, Vertex};
use crate::schedule::PackingSchedule;

/// A graph, its 1-subdivision, and the bookkeeping between them.
/// Subdivision vertex ids: originals keep `0..n`, midpoints take `n..n+m` in
/// the order of the lexicographically sorted edge list.
pub struct SubdivisionMap {
    pub original: Graph,
    pub subdivided: Graph,
    /// `(u, v)` with `u < v`, sorted; entry `i` is the edge whose midpoint is
    /// vertex `n + i`.
    pub edges: Vec<(Vertex, Vertex)>,
}

impl SubdivisionMap {
    pub fn midpoint_of(&self, u: Vertex, v: Vertex) -> Option<Vertex> {
        let key = (u.min(v), u.max(v));
        self.edges
            .binary_search(&key)
            .ok()
            .map(|i| self.original.vertex_count() + i)
    }

    /// One lineage entry per subdivision vertex.
    pub fn lineage(&self) -> Vec<LineageEntry> {
        let mut out: Vec<LineageEntry> = (0..self.original.vertex_count())
            .map(|v| LineageEntry::Original { original: v })
            .collect();
        out.extend(
            self.edges
                .iter()
                .map(|&(u, v)| LineageEntry::Midpoint { midpoint: (u, v) }),
        );
        out
    }
}

/// Replaces every edge `uv` by a path `u - m - v` through a fresh midpoint.
pub fn subdivide(g: &Graph) -> SubdivisionMap {
    let n = g.vertex_count();
    let edges = g.edges();
    let mut sub_edges = Vec::with_capacity(2 * edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        sub_edges.push((u, n + i));
        sub_edges.push((v, n + i));
    }
    let subdivided = Graph::from_edges(n + edges.len(), &sub_edges)
        .expect("subdivision of a simple graph is simple");
    SubdivisionMap {
        original: g.clone(),
        subdivided,
        edges,
    }
}

/// Lifts a valid `(1,1,2,2)`-coloring of the original graph to a
/// `(1,2,3,4,5)`-coloring of the subdivision: midpoints to class 1,
/// original class `i` to class `i+1`.
pub fn lift_coloring(map: &SubdivisionMap, coloring: &PackingColoring) -> Result<PackingColoring> {
    let expected = PackingSchedule::parse("1,1,2,2").expect("static schedule");
    if coloring.schedule() != &expected {
        return Err(Error::invalid(format!(
            "lift needs a (1,1,2,2)-coloring, got ({})",
            coloring.schedule()
        )));
    }
    match verify(&map.original, coloring)? {
        crate::coloring::Verdict::Valid => {}
        crate::coloring::Verdict::Invalid(v) => {
            return Err(Error::invalid(format!(
                "refusing to lift an invalid coloring: {v}"
            )));
        }
    }
    let n = map.original.vertex_count();
    let mut assignment = Vec::with_capacity(map.subdivided.vertex_count());
    for v in 0..n {
        assignment.push(coloring.class_of(v) + 1);
    }
    assignment.extend(std::iter::repeat_n(0, map.edges.len()));
    PackingColoring::new(PackingSchedule::standard(5)?, assignment)
}

/// How a `(1,2,3,4,5)`-coloring of the subdivision was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pcn5Route {
    /// Constructive `(1,1,2,2)`-coloring of the original, lifted.
    Lifted,
    /// The original is the Petersen graph: no `(1,1,2,2)`-coloring exists,
    /// so the subdivision was colored by direct exact search.
    ExactSearch,
}

pub struct Pcn5Output {
    pub map: SubdivisionMap,
    pub coloring: PackingColoring,
    pub route: Pcn5Route,
}

/// Produces a `(1,2,3,4,5)`-coloring of the 1-subdivision of any connected
/// subcubic graph: constructively via the lift, except for the Petersen
/// graph, whose subdivision is handed to the exact solver with `budget`
/// nodes.
pub fn pcn5_subdivision(g: &Graph, options: &SolverOptions, budget: u64) -> Result<Pcn5Output> {
    let map = subdivide(g);
    match solve_1122(g, options)? {
        SolveResult::Colored(coloring) => {
            let lifted = lift_coloring(&map, &coloring)?;
            debug_assert!(verify(&map.subdivided, &lifted)?.is_valid());
            Ok(Pcn5Output {
                map,
                coloring: lifted,
                route: Pcn5Route::Lifted,
            })
        }
        SolveResult::Petersen => {
            let schedule = PackingSchedule::standard(5)?;
            match solve_exact(&map.subdivided, &schedule, budget) {
                SolveOutcome::Sat(coloring) => Ok(Pcn5Output {
                    map,
                    coloring,
                    route: Pcn5Route::ExactSearch,
                }),
                SolveOutcome::Unsat => Err(Error::invalid(
                    "internal: the subdivided Petersen graph admits a (1,2,3,4,5)-coloring",
                )),
                SolveOutcome::OutOfBudget { nodes } => Err(Error::BudgetExhausted { nodes }),
            }
        }
    }
}

/// Certificate for a subdivision coloring, lineage included.
pub fn subdivision_certificate(out: &Pcn5Output) -> Result<Certificate> {
    let mut cert = Certificate::new(&out.map.subdivided, &out.coloring)?;
    cert.lineage = Some(out.map.lineage());
    Ok(cert)
}
