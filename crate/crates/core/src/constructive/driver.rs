//! The end-to-end search: seeded greedy start, growth to a fixed point,
//! cycle reduction, last-cycle elimination, and the final read-off of a
//! four-class packing coloring. Attempts restart with fresh randomness
//! whenever a phase stalls; the log keeps every fixed point and phase
//! record an attempt produced.

use super::aux_graph::{embed_cycle, AuxGraph, Embedding, Shape};
use super::eliminate::{eliminate_last_cycle, reduce_cycle_count};
use super::improve::{certify_max_score, partition_from_mask, reach_fixed_point, SideCert};
use super::partition::{initial_partition, Partition, Side, SideAssignment};
use super::rings::{cycle_gap, ring_geometry};
use crate::bitset::BitSet;
use crate::coloring::{verify, PackingColoring, Verdict};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::schedule::PackingSchedule;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Base seed; each attempt derives its own stream from it.
    pub seed: u64,
    /// Attempts before giving up.
    pub restarts: u32,
    /// Longest switch sequence explored when merging free components.
    pub switch_depth: usize,
    /// Up to this many vertices, an exhaustive certificate pins the
    /// maximum two-side score and backstops the local search.
    pub exact_size_cap: usize,
    /// Work bound per component-merge search.
    pub merge_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seed: 1,
            restarts: 64,
            switch_depth: 3,
            exact_size_cap: 18,
            merge_cap: 50_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SolveResult {
    Colored(PackingColoring),
    /// The one connected subcubic graph the method provably cannot color.
    Petersen,
}

/// One line of the phase trace. Serialized shape is part of the CLI
/// contract: a `phase` tag plus that phase's scores and moves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum TraceRecord {
    Attempt {
        index: u32,
    },
    FixedPoint {
        score: usize,
        free_components: usize,
        cycles: usize,
        gap: Option<u32>,
    },
    Reduce {
        x: Vertex,
        y: Vertex,
        cycles: usize,
        gap: Option<u32>,
        rearranged: bool,
    },
    Eliminate {
        step: usize,
        x: Vertex,
        y: Vertex,
        consumed: Option<Vec<Vertex>>,
        emitted: Vec<Vertex>,
        rearranged: bool,
    },
    Stall {
        reason: String,
    },
    Finalize {
        class_sizes: Vec<usize>,
    },
}

/// Wall-clock totals per phase. Reporting only: timings stay out of the
/// trace records, so trace checksums agree across machines and thread
/// counts.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub fixpoint_ms: f64,
    pub reduce_ms: f64,
    pub eliminate_ms: f64,
    pub finalize_ms: f64,
}

#[derive(Clone, Debug, Default)]
pub struct RunLog {
    pub trace: Vec<TraceRecord>,
    /// Snapshot of every fixed point the search adopted: each one passed
    /// both the structural checks and the full lemma battery.
    pub fixed_points: Vec<SideAssignment>,
    pub attempts: u32,
    pub stalls: Vec<String>,
    pub timings: PhaseTimings,
}

/// Reads a four-class coloring off a cycle-free state: side A is class 0,
/// side B class 1, and each free component is two-colored into classes 2
/// and 3, lowest vertex first. Free vertices in the same class sit in
/// different components or on the same bipartition side, hence at pairwise
/// distance at least 3. Fails on a component with an odd cycle.
pub fn finalize_coloring(
    g: &Graph,
    p: &Partition,
    balls: &[BitSet],
) -> std::result::Result<PackingColoring, String> {
    let n = g.vertex_count();
    let aux = AuxGraph::build(p, balls);
    let mut assignment = vec![usize::MAX; n];
    for v in 0..n {
        match p.side_of(v) {
            Some(Side::A) => assignment[v] = 0,
            Some(Side::B) => assignment[v] = 1,
            None => {}
        }
    }
    for comp in aux.components() {
        assignment[comp[0]] = 2;
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(u) = queue.pop_front() {
            let other = if assignment[u] == 2 { 3 } else { 2 };
            for w in aux.neighbors_of(u).iter() {
                if assignment[w] == usize::MAX {
                    assignment[w] = other;
                    queue.push_back(w);
                } else if assignment[w] == assignment[u] {
                    return Err(format!(
                        "free component {comp:?} contains an odd cycle"
                    ));
                }
            }
        }
    }
    let schedule = PackingSchedule::new(vec![1, 1, 2, 2]).expect("static schedule");
    PackingColoring::new(schedule, assignment).map_err(|e| e.to_string())
}

/// Checks what every fixed point must satisfy before the cycle phases may
/// run: free vertices form single vertices or single edges in `G`, no
/// component of the distance-two graph tangles, and every cycle component
/// carries a star or ring structure with all middles on one side. Returns
/// the cycle components and their structure vertex sets.
#[allow(clippy::type_complexity)]
fn fixpoint_gate(
    g: &Graph,
    p: &Partition,
    aux: &AuxGraph,
    comps: &[Vec<Vertex>],
) -> std::result::Result<(Vec<Vec<Vertex>>, Vec<Vec<Vertex>>), String> {
    for comp in p.free_components(g) {
        if comp.len() > 2 {
            return Err(format!(
                "free vertices {comp:?} form a component larger than an edge"
            ));
        }
    }
    let mut cycles = Vec::new();
    let mut structures = Vec::new();
    for comp in comps {
        match aux.classify(comp) {
            Shape::Tangle => return Err(format!("component {comp:?} tangles")),
            Shape::Cycle => {
                let emb = embed_cycle(g, p, aux, comp)
                    .map_err(|e| format!("cycle component {comp:?}: {e}"))?;
                if matches!(emb, Embedding::Ring { .. }) {
                    ring_geometry(p, &emb).map_err(|e| format!("cycle component {comp:?}: {e}"))?;
                }
                structures.push(emb.structure_vertices());
                cycles.push(comp.clone());
            }
            Shape::Path | Shape::Tree => {}
        }
    }
    Ok((cycles, structures))
}

pub fn solve_1122(g: &Graph, opts: &SolverOptions) -> Result<SolveResult> {
    solve_1122_logged(g, opts).0
}

pub fn solve_1122_logged(g: &Graph, opts: &SolverOptions) -> (Result<SolveResult>, RunLog) {
    solve_inner(g, opts, true)
}

/// Runs the search with the Petersen fence open, so tests can confirm the
/// machinery itself gives up on the one graph it must not color.
#[doc(hidden)]
pub fn solve_unfenced(g: &Graph, opts: &SolverOptions) -> (Result<SolveResult>, RunLog) {
    solve_inner(g, opts, false)
}

fn solve_inner(g: &Graph, opts: &SolverOptions, fence: bool) -> (Result<SolveResult>, RunLog) {
    let mut log = RunLog::default();
    let n = g.vertex_count();
    if n == 0 {
        return (Err(Error::invalid("the graph has no vertices")), log);
    }
    if !g.is_connected() {
        return (Err(Error::invalid("the graph must be connected")), log);
    }
    if !g.is_subcubic() {
        return (
            Err(Error::invalid("a vertex has degree greater than 3")),
            log,
        );
    }
    if fence && g.is_petersen() {
        return (Ok(SolveResult::Petersen), log);
    }

    // Bipartite graphs (which covers every tree and everything on at most
    // two vertices) need only the two radius-1 classes.
    if let Some(sides) = g.bipartition() {
        let assignment: Vec<usize> = sides.iter().map(|&b| usize::from(b)).collect();
        let schedule = PackingSchedule::new(vec![1, 1, 2, 2]).expect("static schedule");
        let coloring = match PackingColoring::new(schedule, assignment) {
            Ok(c) => c,
            Err(e) => return (Err(e), log),
        };
        let t = Instant::now();
        let verdict = verify(g, &coloring);
        log.timings.finalize_ms += t.elapsed().as_secs_f64() * 1e3;
        match verdict {
            Ok(Verdict::Valid) => {}
            Ok(Verdict::Invalid(v)) => {
                return (
                    Err(Error::invalid(format!(
                        "bipartition two-coloring failed verification: {v:?}"
                    ))),
                    log,
                )
            }
            Err(e) => return (Err(e), log),
        }
        log.attempts = 1;
        log.trace.push(TraceRecord::Attempt { index: 0 });
        log.fixed_points.push(
            sides
                .iter()
                .map(|&b| Some(if b { Side::B } else { Side::A }))
                .collect(),
        );
        log.trace.push(TraceRecord::Finalize {
            class_sizes: coloring.classes().iter().map(Vec::len).collect(),
        });
        return (Ok(SolveResult::Colored(coloring)), log);
    }

    let balls = g.second_neighborhoods();
    let t = Instant::now();
    let cert: Option<SideCert> = (n <= opts.exact_size_cap).then(|| certify_max_score(g));
    log.timings.fixpoint_ms += t.elapsed().as_secs_f64() * 1e3;
    let attempts = opts.restarts.max(1);

    for attempt in 0..attempts {
        log.attempts = attempt + 1;
        log.trace.push(TraceRecord::Attempt { index: attempt });
        let mut rng = ChaCha8Rng::seed_from_u64(
            opts.seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let mut p = initial_partition(g, &mut rng);
        let mut seen: HashSet<SideAssignment> = HashSet::new();
        let mut topped_up = false;
        let mut stall: Option<String> = None;

        for _round in 0..4 * n + 64 {
            let t = Instant::now();
            reach_fixed_point(g, &mut p, opts.switch_depth, opts.merge_cap);
            if let Some(cert) = &cert {
                if p.score() < cert.max_score && !topped_up {
                    // The local search under-shot a score the exhaustive
                    // certificate knows is attainable: jump to one of the
                    // certified optima instead of grinding on.
                    topped_up = true;
                    let mask = cert.masks[rng.random_range(0..cert.masks.len())];
                    p = partition_from_mask(g, mask, &mut rng);
                    reach_fixed_point(g, &mut p, opts.switch_depth, opts.merge_cap);
                }
            }
            log.timings.fixpoint_ms += t.elapsed().as_secs_f64() * 1e3;
            let aux = AuxGraph::build(&p, &balls);
            let comps = aux.components();
            let (cycles, structures) = match fixpoint_gate(g, &p, &aux, &comps) {
                Ok(pair) => pair,
                Err(e) => {
                    stall = Some(format!("fixed point failed its structural checks: {e}"));
                    break;
                }
            };
            let snapshot = p.snapshot();
            // Bounded local moves cannot certify the global extremality the
            // cycle lemmas assume, so the deeper battery gates adoption: a
            // candidate that violates any lemma predicate is abandoned and
            // the attempt reseeds instead of building on it.
            let battery = super::audit::audit(g, &snapshot);
            if !battery.is_clean() {
                let mut rules: Vec<&str> = battery.violations.iter().map(|v| v.rule).collect();
                rules.sort_unstable();
                rules.dedup();
                stall = Some(format!(
                    "fixed point failed the lemma battery: {}",
                    rules.join(", ")
                ));
                break;
            }
            log.fixed_points.push(snapshot.clone());
            let gap = cycle_gap(g, &structures).map(|w| w.dist);
            log.trace.push(TraceRecord::FixedPoint {
                score: p.score(),
                free_components: p.free_component_count(g),
                cycles: cycles.len(),
                gap,
            });
            if !seen.insert(snapshot) {
                stall = Some("search revisited an earlier fixed point".into());
                break;
            }

            match cycles.len() {
                0 => {
                    let t = Instant::now();
                    let finished = finalize_coloring(g, &p, &balls).map(|c| (verify(g, &c), c));
                    log.timings.finalize_ms += t.elapsed().as_secs_f64() * 1e3;
                    match finished {
                        Ok((Ok(Verdict::Valid), coloring)) => {
                            log.trace.push(TraceRecord::Finalize {
                                class_sizes: coloring.classes().iter().map(Vec::len).collect(),
                            });
                            return (Ok(SolveResult::Colored(coloring)), log);
                        }
                        Ok((Ok(Verdict::Invalid(v)), _)) => {
                            stall = Some(format!("final coloring failed verification: {v:?}"));
                            break;
                        }
                        Ok((Err(e), _)) => return (Err(e), log),
                        Err(e) => {
                            stall = Some(format!("finalization failed: {e}"));
                            break;
                        }
                    }
                }
                1 => {
                    let salt = if attempt > 0 { Some(&mut rng) } else { None };
                    let t = Instant::now();
                    let elim = eliminate_last_cycle(g, &mut p, &balls, salt);
                    log.timings.eliminate_ms += t.elapsed().as_secs_f64() * 1e3;
                    for (i, s) in elim.steps.iter().enumerate() {
                        log.trace.push(TraceRecord::Eliminate {
                            step: i,
                            x: s.x,
                            y: s.y,
                            consumed: s.consumed.clone(),
                            emitted: s.emitted.clone(),
                            rearranged: s.rearranged,
                        });
                    }
                    if let Some(reason) = elim.stalled {
                        stall = Some(reason);
                        break;
                    }
                }
                _ => {
                    let salt = if attempt > 0 { Some(&mut rng) } else { None };
                    let t = Instant::now();
                    let step = reduce_cycle_count(g, &mut p, &balls, salt);
                    log.timings.reduce_ms += t.elapsed().as_secs_f64() * 1e3;
                    match step {
                        Ok(step) => log.trace.push(TraceRecord::Reduce {
                            x: step.x,
                            y: step.y,
                            cycles: step.cycles_after,
                            gap: step.gap_after,
                            rearranged: step.rearranged,
                        }),
                        Err(reason) => {
                            stall = Some(reason);
                            break;
                        }
                    }
                }
            }
        }

        let reason = stall.unwrap_or_else(|| "attempt exhausted its round budget".into());
        log.trace.push(TraceRecord::Stall {
            reason: reason.clone(),
        });
        log.stalls.push(reason);
    }

    let last_stall = log.stalls.last().cloned().unwrap_or_default();
    (
        Err(Error::RestartsExhausted {
            restarts: attempts,
            last_stall,
        }),
        log,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn assert_solves(g: &Graph) -> PackingColoring {
        let opts = SolverOptions::default();
        match solve_1122(g, &opts).unwrap() {
            SolveResult::Colored(c) => {
                assert!(matches!(verify(g, &c), Ok(Verdict::Valid)));
                c
            }
            SolveResult::Petersen => panic!("unexpected sentinel"),
        }
    }

    #[test]
    fn five_cycle_gets_four_classes() {
        let c = assert_solves(&graph::cycle(5).unwrap());
        let sizes: Vec<usize> = c.classes().iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 5);
        assert_eq!(sizes[0] + sizes[1], 4);
    }

    #[test]
    fn complete_graph_on_four_vertices() {
        assert_solves(&graph::complete(4));
    }

    #[test]
    fn bipartite_graphs_use_two_classes() {
        for g in [
            graph::k33(),
            graph::cycle(6).unwrap(),
            graph::path(7).unwrap(),
        ] {
            let c = assert_solves(&g);
            let sizes: Vec<usize> = c.classes().iter().map(Vec::len).collect();
            assert_eq!(sizes[2] + sizes[3], 0, "radius-2 classes unused");
        }
    }

    #[test]
    fn petersen_is_fenced() {
        let g = graph::petersen();
        assert!(matches!(
            solve_1122(&g, &SolverOptions::default()).unwrap(),
            SolveResult::Petersen
        ));
    }

    #[test]
    fn machinery_gives_up_on_petersen() {
        let g = graph::petersen();
        let opts = SolverOptions {
            restarts: 4,
            ..SolverOptions::default()
        };
        let (res, log) = solve_unfenced(&g, &opts);
        match res {
            Err(Error::RestartsExhausted { restarts, .. }) => assert_eq!(restarts, 4),
            other => panic!("expected restart exhaustion, got {other:?}"),
        }
        assert_eq!(log.attempts, 4);
        assert!(!log.stalls.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let disconnected = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap();
        assert!(solve_1122(&disconnected, &SolverOptions::default()).is_err());
        let k5 = graph::complete(5);
        assert!(solve_1122(&k5, &SolverOptions::default()).is_err());
    }

    #[test]
    fn trace_serialization_shape() {
        let (res, log) = solve_1122_logged(&graph::cycle(5).unwrap(), &SolverOptions::default());
        assert!(res.is_ok());
        assert!(!log.fixed_points.is_empty());
        let json: Vec<String> = log
            .trace
            .iter()
            .map(|r| serde_json::to_string(r).unwrap())
            .collect();
        assert!(json[0].contains("\"phase\":\"attempt\""));
        assert!(json.iter().any(|l| l.contains("\"phase\":\"fixed_point\"")));
        assert!(json.last().unwrap().contains("\"phase\":\"finalize\""));
    }
}
