//! Exact solvers: a pruned backtracking search usable to a few dozen
//! vertices, and a brute-force enumerator that serves as its oracle at toy
//! sizes.

use crate::coloring::{verify, PackingColoring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, INFINITY};
use crate::schedule::PackingSchedule;

/// Assignment-space cap for [`naive_solve`]: refuse above `k^n` = 10^7.
pub const NAIVE_CAP: u128 = 10_000_000;

/// Default node budget for the backtracking search.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Sat(PackingColoring),
    Unsat,
    /// The search gave up; SAT and UNSAT are both still possible.
    OutOfBudget { nodes: u64 },
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat)
    }
}

/// Backtracking search for a packing coloring.
///
/// Vertices are processed in BFS order from a maximum-degree vertex (per
/// component), classes in schedule order. Placements are pruned through
/// per-class blocked counters maintained incrementally from precomputed
/// distance balls, and among classes of equal radius a later class may be
/// opened only once the earlier one is in use (a relabelling argument shows
/// this never flips SAT/UNSAT). Every search node costs one unit of budget;
/// exhaustion yields `OutOfBudget`, never a wrong `Unsat`.
pub fn solve_exact(g: &Graph, schedule: &PackingSchedule, budget: u64) -> SolveOutcome {
    let n = g.vertex_count();
    let k = schedule.len();
    let max_radius = schedule.radii().iter().copied().max().unwrap_or(0);
    let order = bfs_order(g);
    let balls = distance_balls(g, max_radius);
    let mut search = Search {
        schedule,
        order,
        balls,
        blocked: vec![vec![0u32; n]; k],
        class_size: vec![0usize; k],
        assignment: vec![usize::MAX; n],
        nodes: 0,
        budget,
    };
    match search.place(0) {
        Flow::Found => {
            let coloring = PackingColoring::new(schedule.clone(), search.assignment)
                .expect("search only assigns in-range classes");
            debug_assert!(verify(g, &coloring).unwrap().is_valid());
            SolveOutcome::Sat(coloring)
        }
        Flow::Exhausted => SolveOutcome::Unsat,
        Flow::OverBudget => SolveOutcome::OutOfBudget {
            nodes: search.nodes,
        },
    }
}

enum Flow {
    Found,
    Exhausted,
    OverBudget,
}

struct Search<'a> {
    schedule: &'a PackingSchedule,
    order: Vec<Vertex>,
    /// balls[v] = (w, d) for every w != v with d = d(v,w) <= max radius,
    /// ascending in d.
    balls: Vec<Vec<(Vertex, u32)>>,
    /// blocked[c][v] = number of placed class-c vertices within radius c of v.
    blocked: Vec<Vec<u32>>,
    class_size: Vec<usize>,
    assignment: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn place(&mut self, idx: usize) -> Flow {
        if self.nodes >= self.budget {
            return Flow::OverBudget;
        }
        self.nodes += 1;
        if idx == self.order.len() {
            return Flow::Found;
        }
        let v = self.order[idx];
        for c in 0..self.schedule.len() {
            if self.blocked[c][v] > 0 || !self.may_open(c) {
                continue;
            }
            self.assignment[v] = c;
            self.class_size[c] += 1;
            self.bump(c, v, 1);
            match self.place(idx + 1) {
                Flow::Exhausted => {}
                done => {
                    if matches!(done, Flow::OverBudget) {
                        self.bump(c, v, -1);
                        self.class_size[c] -= 1;
                        self.assignment[v] = usize::MAX;
                    }
                    return done;
                }
            }
            self.bump(c, v, -1);
            self.class_size[c] -= 1;
            self.assignment[v] = usize::MAX;
        }
        Flow::Exhausted
    }

    /// Equal-radius classes are interchangeable, so only the first unused one
    /// is worth trying.
    fn may_open(&self, c: usize) -> bool {
        c == 0
            || self.schedule.radius(c) != self.schedule.radius(c - 1)
            || self.class_size[c - 1] > 0
    }

    fn bump(&mut self, c: usize, v: Vertex, delta: i32) {
        let radius = self.schedule.radius(c);
        for &(w, d) in &self.balls[v] {
            if d > radius {
                break;
            }
            let cell = &mut self.blocked[c][w];
            *cell = cell.checked_add_signed(delta).expect("blocked counter underflow");
        }
    }
}

/// BFS order starting, in each component, from its maximum-degree vertex
/// (lowest id on ties).
fn bfs_order(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    loop {
        let start = (0..n)
            .filter(|&v| !seen[v])
            .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)));
        let Some(start) = start else { break };
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

fn distance_balls(g: &Graph, max_radius: u32) -> Vec<Vec<(Vertex, u32)>> {
    (0..g.vertex_count())
        .map(|v| {
            let mut ball: Vec<(Vertex, u32)> = g
                .bfs_distances(v)
                .into_iter()
                .enumerate()
                .filter(|&(w, d)| w != v && d != INFINITY && d <= max_radius)
                .map(|(w, d)| (w, d))
                .collect();
            ball.sort_unstable_by_key(|&(w, d)| (d, w));
            ball
        })
        .collect()
}

/// Tries every one of the `k^n` assignments in lexicographic order and
/// verifies each with the public verifier. No pruning, no shared logic with
/// [`solve_exact`] — this is the oracle the fast path is tested against.
/// Errors out above [`NAIVE_CAP`] assignments.
pub fn naive_solve(g: &Graph, schedule: &PackingSchedule) -> Result<SolveOutcome> {
    let n = g.vertex_count() as u32;
    let k = schedule.len() as u128;
    let space = k.checked_pow(n).filter(|&s| s <= NAIVE_CAP);
    if space.is_none() {
        return Err(Error::Unsupported(format!(
            "naive enumeration of {}^{} assignments is over the cap",
            k, n
        )));
    }
    let n = g.vertex_count();
    let k = schedule.len();
    let mut assignment = vec![0usize; n];
    loop {
        let candidate = PackingColoring::new(schedule.clone(), assignment.clone())?;
        if verify(g, &candidate)?.is_valid() {
            return Ok(SolveOutcome::Sat(candidate));
        }
        // Odometer increment, last vertex fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(SolveOutcome::Unsat);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < k {
                break;
            }
            assignment[i] = 0;
        }
    }
}

#[derive(Clone, Debug)]
pub enum PcnResult {
    /// The packing chromatic number is exactly `k`.
    Exact { k: usize, witness: PackingColoring },
    /// Every schedule up to `(1, ..., k_max)` is UNSAT.
    ExceedsLimit { k_max: usize },
    /// Some `k` at or below the final answer ran out of budget, so the exact
    /// value is not established. `stalled_at` is the smallest such `k`.
    Unknown { stalled_at: usize },
}

/// Packing chromatic number by increasing `k` with the standard schedule
/// `(1, ..., k)`. `budget` applies to each `k` separately. Budget exhaustion
/// at any smaller `k` poisons the answer (a later SAT only gives an upper
/// bound), so the result is `Unknown` rather than a guess.
pub fn pcn(g: &Graph, k_max: usize, budget: u64) -> Result<PcnResult> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let mut stalled_at = None;
    for k in 1..=k_max {
        let schedule = PackingSchedule::standard(k)?;
        match solve_exact(g, &schedule, budget) {
            SolveOutcome::Sat(witness) => {
                return Ok(match stalled_at {
                    Some(stalled_at) => PcnResult::Unknown { stalled_at },
                    None => PcnResult::Exact { k, witness },
                });
            }
            SolveOutcome::Unsat => {}
            SolveOutcome::OutOfBudget { .. } => {
                stalled_at.get_or_insert(k);
            }
        }
    }
    Ok(match stalled_at {
        Some(stalled_at) => PcnResult::Unknown { stalled_at },
        None => PcnResult::ExceedsLimit { k_max },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn sched(text: &str) -> PackingSchedule {
        PackingSchedule::parse(text).unwrap()
    }

    #[test]
    fn triangle_needs_three_distinct_classes() {
        let k3 = graph::complete(3);
        assert!(solve_exact(&k3, &sched("1,1"), 1 << 20).is_unsat());
        let out = solve_exact(&k3, &sched("1,1,2"), 1 << 20);
        match out {
            SolveOutcome::Sat(c) => assert!(verify(&k3, &c).unwrap().is_valid()),
            other => panic!("expected SAT, got {other:?}"),
        }
    }

    #[test]
    fn diameter_two_forces_singletons() {
        // P3 has diameter 2: a radius-2 class can hold one vertex, so two
        // such classes cannot cover three vertices.
        let p3 = graph::path(3).unwrap();
        assert!(solve_exact(&p3, &sched("2,2"), 1 << 20).is_unsat());
        assert!(solve_exact(&p3, &sched("2,2,2"), 1 << 20).is_sat());
    }

    #[test]
    fn matches_naive_on_assorted_small_graphs() {
        let graphs = vec![
            graph::path(4).unwrap(),
            graph::path(5).unwrap(),
            graph::cycle(4).unwrap(),
            graph::cycle(5).unwrap(),
            graph::complete(4),
            graph::Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap(),
        ];
        let schedules = ["1,1", "1,2", "1,1,2", "1,2,3", "1,1,2,2", "1,1,2,3"];
        for g in &graphs {
            for s in schedules {
                let s = sched(s);
                let fast = solve_exact(g, &s, 1 << 24);
                let slow = naive_solve(g, &s).unwrap();
                assert_eq!(
                    fast.is_sat(),
                    slow.is_sat(),
                    "disagreement on {g:?} with ({s})"
                );
                assert!(!matches!(fast, SolveOutcome::OutOfBudget { .. }));
                if let SolveOutcome::Sat(c) = &fast {
                    assert!(verify(g, c).unwrap().is_valid());
                }
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported_not_misreported() {
        let g = graph::petersen();
        match solve_exact(&g, &sched("1,1,2,2"), 10) {
            SolveOutcome::OutOfBudget { nodes } => assert!(nodes <= 10),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_witness() {
        let g = graph::prism(4).unwrap();
        let a = solve_exact(&g, &sched("1,1,2,2"), 1 << 24);
        let b = solve_exact(&g, &sched("1,1,2,2"), 1 << 24);
        match (a, b) {
            (SolveOutcome::Sat(x), SolveOutcome::Sat(y)) => assert_eq!(x, y),
            other => panic!("expected SAT twice, got {other:?}"),
        }
    }

    #[test]
    fn naive_cap_enforced() {
        let g = graph::cycle(30).unwrap();
        assert!(naive_solve(&g, &sched("1,2,3")).is_err());
    }

    #[test]
    fn pcn_small_values_match_naive() {
        // Expected values derived with the brute-force oracle inline.
        for (g, label) in [
            (graph::path(1).unwrap(), "k1"),
            (graph::path(2).unwrap(), "k2"),
            (graph::path(4).unwrap(), "p4"),
            (graph::cycle(4).unwrap(), "c4"),
            (graph::cycle(5).unwrap(), "c5"),
        ] {
            let expected = (1..=5)
                .find(|&k| {
                    naive_solve(&g, &PackingSchedule::standard(k).unwrap())
                        .unwrap()
                        .is_sat()
                })
                .expect("pcn of these graphs is at most 5");
            match pcn(&g, 5, 1 << 24).unwrap() {
                PcnResult::Exact { k, witness } => {
                    assert_eq!(k, expected, "pcn mismatch on {label}");
                    assert!(verify(&g, &witness).unwrap().is_valid());
                }
                other => panic!("expected exact pcn for {label}, got {other:?}"),
            }
        }
    }

    #[test]
    fn pcn_reports_unknown_under_budget_pressure() {
        let g = graph::petersen();
        // A 5-node budget still refutes k = 1 (two adjacent vertices cannot
        // share the lone radius-1 class), so the first stall is at k = 2.
        match pcn(&g, 6, 5).unwrap() {
            PcnResult::Unknown { stalled_at } => assert_eq!(stalled_at, 2),
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn pcn_exceeds_limit() {
        let g = graph::complete(4);
        match pcn(&g, 2, 1 << 20).unwrap() {
            PcnResult::ExceedsLimit { k_max } => assert_eq!(k_max, 2),
            other => panic!("expected exceeds-limit, got {other:?}"),
        }
    }
}
