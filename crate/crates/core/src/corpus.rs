//! Batch runs of the constructive solver over whole graph families, with a
//! report built for regression diffing: per-graph outcome records carry a
//! checksum of the phase trace, and the report checksum covers everything
//! *except* wall-clock timings, so two runs with the same seed agree
//! byte-for-byte no matter the machine or thread count.

use crate::coloring::{verify, Verdict};
use crate::constructive::{solve_1122_logged, PhaseTimings, SolveResult, SolverOptions, TraceRecord};
use crate::error::{Error, Result};
use crate::generate::{enumerate_connected_subcubic, generate_random_cubic};
use crate::graph::Graph;
use crate::graph6::{emit_graph6, parse_graph6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::time::Instant;

/// Where a corpus comes from.
#[derive(Clone, Debug)]
pub enum CorpusSource {
    /// Every connected graph of maximum degree 3 on `1..=up_to` vertices,
    /// one per isomorphism class.
    Enumerated { up_to: usize },
    /// Random connected cubic graphs; orders are drawn uniformly from the
    /// even values of at least 4 in `min_n..=max_n`.
    RandomCubic {
        count: usize,
        min_n: usize,
        max_n: usize,
        seed: u64,
    },
    /// graph6 text, one graph per line; blank lines and `#` comments skipped.
    Graph6Lines(String),
}

pub fn collect_graphs(source: &CorpusSource) -> Result<Vec<Graph>> {
    match source {
        CorpusSource::Enumerated { up_to } => {
            let mut out = Vec::new();
            for n in 1..=*up_to {
                out.extend(enumerate_connected_subcubic(n)?);
            }
            Ok(out)
        }
        CorpusSource::RandomCubic {
            count,
            min_n,
            max_n,
            seed,
        } => {
            let orders: Vec<usize> = (*min_n..=*max_n)
                .filter(|k| k % 2 == 0 && *k >= 4)
                .collect();
            if orders.is_empty() {
                return Err(Error::invalid(format!(
                    "no even order of at least 4 in {min_n}..={max_n}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    let n = orders[rng.random_range(0..orders.len())];
                    generate_random_cubic(n, rng.random())
                })
                .collect()
        }
        CorpusSource::Graph6Lines(text) => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(parse_graph6)
            .collect(),
    }
}

/// How one graph's run ended. Every record lands in exactly one bucket, so
/// `successes + petersen + failures.len()` always equals `size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Petersen,
    Failure { reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphRecord {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub outcome: Outcome,
    /// Attempts beyond the first; 0 when the first try lands.
    pub restarts_used: u32,
    pub timings: PhaseTimings,
    pub total_ms: f64,
    /// SHA-256 over the run's trace lines. Traces carry no timing, so this
    /// is stable across machines and thread counts.
    pub trace_checksum: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Percentiles {
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusReport {
    pub size: usize,
    pub successes: usize,
    pub petersen: usize,
    /// graph6 strings of the graphs whose runs failed.
    pub failures: Vec<String>,
    /// restarts_used value -> how many graphs needed exactly that many.
    pub restart_histogram: BTreeMap<u32, usize>,
    pub runtime_percentiles_ms: Percentiles,
    /// SHA-256 over every record's timing-free fields, in input order.
    pub checksum: String,
    pub records: Vec<GraphRecord>,
}

pub fn trace_checksum(trace: &[TraceRecord]) -> String {
    let mut h = Sha256::new();
    for rec in trace {
        h.update(serde_json::to_string(rec).expect("trace records serialize").as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn report_checksum(records: &[GraphRecord]) -> String {
    let mut h = Sha256::new();
    for r in records {
        h.update(r.graph6.as_bytes());
        h.update(b"|");
        h.update(
            serde_json::to_string(&r.outcome)
                .expect("outcomes serialize")
                .as_bytes(),
        );
        h.update(b"|");
        h.update(r.restarts_used.to_le_bytes());
        h.update(b"|");
        h.update(r.trace_checksum.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Decouples the graphs' random streams from their positions relative to
/// each other: each index gets its own well-mixed seed (splitmix64).
fn per_graph_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_one(g: &Graph, opts: &SolverOptions) -> Result<GraphRecord> {
    let graph6 = emit_graph6(g)?;
    let start = Instant::now();
    let (res, log) = solve_1122_logged(g, opts);
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    let outcome = match res {
        Ok(SolveResult::Colored(c)) => match verify(g, &c)? {
            Verdict::Valid => Outcome::Success,
            Verdict::Invalid(v) => Outcome::Failure {
                reason: format!("coloring failed re-verification: {v:?}"),
            },
        },
        Ok(SolveResult::Petersen) => Outcome::Petersen,
        // Bad inputs (disconnected, degree > 3) become failure records
        // rather than killing the whole batch.
        Err(e) => Outcome::Failure {
            reason: e.to_string(),
        },
    };
    Ok(GraphRecord {
        graph6,
        n: g.vertex_count(),
        m: g.edges().len(),
        outcome,
        restarts_used: log.attempts.saturating_sub(1),
        timings: log.timings,
        total_ms,
        trace_checksum: trace_checksum(&log.trace),
    })
}

/// Runs the solver over every graph and assembles the report. `jobs` is the
/// worker count (0 = one per core). Records keep input order and each graph
/// derives its seed from its index, so the thread count changes nothing but
/// the timing fields.
pub fn run_corpus(graphs: &[Graph], opts: &SolverOptions, jobs: usize) -> Result<CorpusReport> {
    let solve_all = || -> Result<Vec<GraphRecord>> {
        graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| {
                let per = SolverOptions {
                    seed: per_graph_seed(opts.seed, i),
                    ..opts.clone()
                };
                run_one(g, &per)
            })
            .collect()
    };
    let records = if jobs == 0 {
        solve_all()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::invalid(format!("could not build a {jobs}-thread pool: {e}")))?;
        pool.install(solve_all)?
    };
    Ok(assemble(records))
}

fn assemble(records: Vec<GraphRecord>) -> CorpusReport {
    let mut successes = 0;
    let mut petersen = 0;
    let mut failures = Vec::new();
    let mut restart_histogram: BTreeMap<u32, usize> = BTreeMap::new();
    for r in &records {
        match &r.outcome {
            Outcome::Success => successes += 1,
            Outcome::Petersen => petersen += 1,
            Outcome::Failure { .. } => failures.push(r.graph6.clone()),
        }
        *restart_histogram.entry(r.restarts_used).or_insert(0) += 1;
    }
    let mut times: Vec<f64> = records.iter().map(|r| r.total_ms).collect();
    times.sort_by(f64::total_cmp);
    let pct = |q: f64| {
        if times.is_empty() {
            0.0
        } else {
            times[((times.len() as f64 - 1.0) * q).round() as usize]
        }
    };
    let runtime_percentiles_ms = Percentiles {
        p50: pct(0.50),
        p90: pct(0.90),
        p99: pct(0.99),
        max: times.last().copied().unwrap_or(0.0),
    };
    let checksum = report_checksum(&records);
    CorpusReport {
        size: records.len(),
        successes,
        petersen,
        failures,
        restart_histogram,
        runtime_percentiles_ms,
        checksum,
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn counts_partition_the_corpus() {
        let mut graphs = collect_graphs(&CorpusSource::Enumerated { up_to: 5 }).unwrap();
        graphs.push(graph::petersen());
        let report = run_corpus(&graphs, &SolverOptions::default(), 1).unwrap();
        assert_eq!(report.size, graphs.len());
        assert_eq!(
            report.successes + report.petersen + report.failures.len(),
            report.size
        );
        assert_eq!(report.petersen, 1);
        assert!(report.failures.is_empty(), "failures: {:?}", report.failures);
        assert_eq!(
            report.restart_histogram.values().sum::<usize>(),
            report.size
        );
    }

    #[test]
    fn thread_count_changes_only_timing() {
        let mut graphs = collect_graphs(&CorpusSource::Enumerated { up_to: 5 }).unwrap();
        graphs.push(graph::cycle(7).unwrap());
        let serial = run_corpus(&graphs, &SolverOptions::default(), 1).unwrap();
        let parallel = run_corpus(&graphs, &SolverOptions::default(), 4).unwrap();
        assert_eq!(serial.checksum, parallel.checksum);
        for (a, b) in serial.records.iter().zip(&parallel.records) {
            assert_eq!(a.graph6, b.graph6);
            assert_eq!(a.outcome, b.outcome);
            assert_eq!(a.restarts_used, b.restarts_used);
            assert_eq!(a.trace_checksum, b.trace_checksum);
        }
    }

    #[test]
    fn graph6_lines_source_skips_comments_and_blanks() {
        let c5 = emit_graph6(&graph::cycle(5).unwrap()).unwrap();
        let k4 = emit_graph6(&graph::complete(4)).unwrap();
        let text = format!("# a comment\n{c5}\n\n{k4}\n");
        let graphs = collect_graphs(&CorpusSource::Graph6Lines(text)).unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(graphs[0].vertex_count(), 5);
        assert_eq!(graphs[1].vertex_count(), 4);
        assert!(collect_graphs(&CorpusSource::Graph6Lines("!!garbage".into())).is_err());
    }

    #[test]
    fn random_source_is_reproducible() {
        let src = CorpusSource::RandomCubic {
            count: 5,
            min_n: 8,
            max_n: 12,
            seed: 42,
        };
        let a = collect_graphs(&src).unwrap();
        let b = collect_graphs(&src).unwrap();
        let sig = |gs: &[Graph]| -> Vec<String> {
            gs.iter().map(|g| emit_graph6(g).unwrap()).collect()
        };
        assert_eq!(sig(&a), sig(&b));
        for g in &a {
            assert!(g.is_cubic());
            assert!(g.is_connected());
        }
    }

    #[test]
    fn bad_inputs_become_failure_records_not_batch_errors() {
        let disconnected =
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let report = run_corpus(
            &[disconnected, graph::complete(4)],
            &SolverOptions::default(),
            1,
        )
        .unwrap();
        assert_eq!(report.successes, 1);
        assert_eq!(report.failures.len(), 1);
        assert!(matches!(&report.records[0].outcome, Outcome::Failure { reason } if reason.contains("connected")));
    }
}
