//! Command-line surface. Exit codes are a stable contract:
//! 0 success (including the PETERSEN/UNSAT sentinels), 1 a check failed,
//! 2 input error, 3 restart exhaustion, 4 search budget exhausted.

use clap::{Args, Parser, Subcommand};
use packcolor::coloring::{verify, Certificate, Verdict};
use packcolor::constructive::{solve_1122_logged, RunLog, SolveResult, SolverOptions, TraceRecord};
use packcolor::corpus::{collect_graphs, run_corpus, CorpusReport, CorpusSource};
use packcolor::error::{Error, Result};
use packcolor::exact::{pcn, solve_exact, PcnResult, SolveOutcome, DEFAULT_BUDGET};
use packcolor::generate::{enumerate_connected_subcubic, generate_random_cubic};
use packcolor::graph::named_graph;
use packcolor::graph6::{emit_graph6, parse_graph6};
use packcolor::subdivision::{pcn5_subdivision, subdivide, subdivision_certificate};
use packcolor::{Graph, PackingColoring, PackingSchedule};

#[derive(Parser)]
#[command(
    name = "packcolor",
    version,
    about = "Packing colorings of subcubic graphs: constructive (1,1,2,2) solver, \
             exact search, verification, subdivisions, and corpus runs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Where one graph comes from: a graph6 file (`-` for stdin) or a built-in.
#[derive(Args)]
struct GraphInput {
    /// graph6 file path, or `-` to read standard input
    #[arg(value_name = "GRAPH", conflicts_with = "named", required_unless_present = "named")]
    path: Option<String>,
    /// built-in graph: petersen, k4, k33, cycle(k), path(k), prism(k)
    #[arg(long, value_name = "ID")]
    named: Option<String>,
}

impl GraphInput {
    fn load(&self) -> Result<Graph> {
        if let Some(id) = &self.named {
            return named_graph(id);
        }
        let text = read_input(self.path.as_deref().expect("clap enforces one source"))?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::invalid("input holds no graph6 line"))?;
        parse_graph6(line)
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        Ok(std::io::read_to_string(std::io::stdin())?)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a certificate file against a graph
    Verify {
        #[command(flatten)]
        input: GraphInput,
        /// certificate JSON file
        #[arg(long, value_name = "FILE")]
        coloring: String,
        /// require the certificate to use exactly this schedule, e.g. 1,1,2,2
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Find a (1,1,2,2)-coloring of a connected subcubic graph
    Solve {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        restarts: u32,
        /// write the phase trace as JSON lines to this file (`-` for stderr)
        #[arg(long, value_name = "FILE")]
        trace: Option<String>,
    },
    /// Exact backtracking search for any schedule
    Exact {
        #[command(flatten)]
        input: GraphInput,
        /// comma-separated radii, e.g. 1,1,2,2
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Smallest k such that a (1,2,...,k)-coloring exists
    Pcn {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Emit the 1-subdivision; with --color, also a (1,2,3,4,5) certificate
    Subdivide {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        color: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        restarts: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Random connected cubic graphs as graph6 lines
    Gen {
        /// vertex count (even, at least 4)
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Connected subcubic graphs of order n, one per isomorphism class
    Enum {
        n: usize,
        /// include every order from 1 up to n
        #[arg(long)]
        cumulative: bool,
    },
    /// Run the solver over a whole corpus; report JSON on stdout, table on stderr
    Corpus {
        /// worker threads (0 = one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        restarts: u32,
        #[command(subcommand)]
        source: SourceCmd,
    },
}

#[derive(Subcommand)]
enum SourceCmd {
    /// every connected subcubic graph with 1..=max-n vertices
    Enum {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
    /// random connected cubic graphs
    Random {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        min_n: usize,
        #[arg(long, default_value_t = 24)]
        max_n: usize,
    },
    /// graph6 lines from a file (`-` for stdin)
    File { path: String },
}

fn main() {
    // Rust ignores SIGPIPE by default, which turns `packcolor enum 20 | head`
    // into a panic with a backtrace. Line-oriented output is meant to be
    // piped, so die the way other Unix filters do when the reader goes away.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::RestartsExhausted { .. } => 3,
                Error::BudgetExhausted { .. } => 4,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

/// `--seed` wins, then the PACKCOLOR_SEED environment variable, then 1.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("PACKCOLOR_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::invalid(format!("PACKCOLOR_SEED is not a u64: {text:?}"))),
        Err(_) => Ok(1),
    }
}

/// Re-verifies and prints a certificate; never prints an invalid one.
fn print_certificate(g: &Graph, coloring: &PackingColoring) -> Result<i32> {
    if let Verdict::Invalid(v) = verify(g, coloring)? {
        eprintln!("refusing to print a certificate that fails verification: {v}");
        return Ok(1);
    }
    println!("{}", Certificate::new(g, coloring)?.to_json()?);
    Ok(0)
}

fn write_trace(target: &str, log: &RunLog) -> Result<()> {
    let mut lines = String::new();
    for rec in &log.trace {
        lines.push_str(&serde_json::to_string(rec)?);
        lines.push('\n');
    }
    if target == "-" {
        eprint!("{lines}");
    } else {
        std::fs::write(target, lines)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Verify {
            input,
            coloring,
            schedule,
        } => {
            let g = input.load()?;
            let cert = Certificate::from_json(&read_input(&coloring)?)?;
            let col = cert.to_coloring()?;
            if let Some(text) = schedule {
                let want = PackingSchedule::parse(&text)?;
                if col.schedule() != &want {
                    println!(
                        "certificate schedule ({}) does not match requested ({})",
                        col.schedule(),
                        want
                    );
                    return Ok(1);
                }
            }
            match verify(&g, &col)? {
                Verdict::Valid => {
                    println!("Valid");
                    Ok(0)
                }
                Verdict::Invalid(v) => {
                    println!("{v}");
                    Ok(1)
                }
            }
        }

        Cmd::Solve {
            input,
            seed,
            restarts,
            trace,
        } => {
            let g = input.load()?;
            let opts = SolverOptions {
                seed: resolve_seed(seed)?,
                restarts,
                ..SolverOptions::default()
            };
            let (res, log) = solve_1122_logged(&g, &opts);
            if let Some(target) = &trace {
                write_trace(target, &log)?;
            }
            match res {
                Ok(SolveResult::Petersen) => {
                    println!("PETERSEN");
                    Ok(0)
                }
                Ok(SolveResult::Colored(c)) => print_certificate(&g, &c),
                Err(e @ Error::RestartsExhausted { .. }) => {
                    eprintln!("error: {e}");
                    let best = log
                        .trace
                        .iter()
                        .filter_map(|r| match r {
                            TraceRecord::FixedPoint { score, .. } => Some(*score),
                            _ => None,
                        })
                        .max();
                    if let Some(score) = best {
                        eprintln!("best two-side score reached: {score} of {} vertices", g.vertex_count());
                    }
                    for (i, reason) in log.stalls.iter().enumerate() {
                        eprintln!("attempt {i}: {reason}");
                    }
                    Ok(3)
                }
                Err(e) => Err(e),
            }
        }

        Cmd::Exact {
            input,
            schedule,
            budget,
        } => {
            let g = input.load()?;
            let schedule = PackingSchedule::parse(&schedule)?;
            match solve_exact(&g, &schedule, budget) {
                SolveOutcome::Sat(c) => print_certificate(&g, &c),
                SolveOutcome::Unsat => {
                    println!("UNSAT");
                    Ok(0)
                }
                SolveOutcome::OutOfBudget { nodes } => {
                    println!("BUDGET");
                    eprintln!("gave up after {nodes} nodes; SAT and UNSAT both remain possible");
                    Ok(4)
                }
            }
        }

        Cmd::Pcn {
            input,
            k_max,
            budget,
        } => {
            let g = input.load()?;
            match pcn(&g, k_max, budget)? {
                PcnResult::Exact { k, witness } => {
                    if let Verdict::Invalid(v) = verify(&g, &witness)? {
                        eprintln!("refusing to print a certificate that fails verification: {v}");
                        return Ok(1);
                    }
                    let cert = Certificate::new(&g, &witness)?;
                    let doc = serde_json::json!({
                        "pcn": k,
                        "certificate": serde_json::to_value(&cert)?,
                    });
                    println!("{doc}");
                    Ok(0)
                }
                PcnResult::ExceedsLimit { k_max } => {
                    let doc = serde_json::json!({ "pcn": null, "exceeds_k_max": k_max });
                    println!("{doc}");
                    Ok(0)
                }
                PcnResult::Unknown { stalled_at } => {
                    println!("BUDGET");
                    eprintln!("search stalled at k = {stalled_at}; the exact value is unresolved");
                    Ok(4)
                }
            }
        }

        Cmd::Subdivide {
            input,
            color,
            seed,
            restarts,
            budget,
        } => {
            let g = input.load()?;
            if !color {
                println!("{}", emit_graph6(&subdivide(&g).subdivided)?);
                return Ok(0);
            }
            let opts = SolverOptions {
                seed: resolve_seed(seed)?,
                restarts,
                ..SolverOptions::default()
            };
            let out = pcn5_subdivision(&g, &opts, budget)?;
            println!("{}", emit_graph6(&out.map.subdivided)?);
            if let Verdict::Invalid(v) = verify(&out.map.subdivided, &out.coloring)? {
                eprintln!("refusing to print a certificate that fails verification: {v}");
                return Ok(1);
            }
            println!("{}", subdivision_certificate(&out)?.to_json()?);
            Ok(0)
        }

        Cmd::Gen { n, count, seed } => {
            let base = resolve_seed(seed)?;
            for i in 0..count {
                let g = generate_random_cubic(n, base.wrapping_add(i as u64))?;
                println!("{}", emit_graph6(&g)?);
            }
            Ok(0)
        }

        Cmd::Enum { n, cumulative } => {
            let lo = if cumulative { 1 } else { n };
            for order in lo..=n {
                for g in enumerate_connected_subcubic(order)? {
                    println!("{}", emit_graph6(&g)?);
                }
            }
            Ok(0)
        }

        Cmd::Corpus {
            jobs,
            seed,
            restarts,
            source,
        } => {
            let seed = resolve_seed(seed)?;
            let src = match source {
                SourceCmd::Enum { max_n } => CorpusSource::Enumerated { up_to: max_n },
                SourceCmd::Random {
                    count,
                    min_n,
                    max_n,
                } => CorpusSource::RandomCubic {
                    count,
                    min_n,
                    max_n,
                    seed,
                },
                SourceCmd::File { path } => CorpusSource::Graph6Lines(read_input(&path)?),
            };
            let graphs = collect_graphs(&src)?;
            let opts = SolverOptions {
                seed,
                restarts,
                ..SolverOptions::default()
            };
            let report = run_corpus(&graphs, &opts, jobs)?;
            print_report_table(&report);
            println!("{}", serde_json::to_string(&report)?);
            Ok(0)
        }
    }
}

fn print_report_table(report: &CorpusReport) {
    eprintln!("size        {}", report.size);
    eprintln!("successes   {}", report.successes);
    eprintln!("petersen    {}", report.petersen);
    eprintln!("failures    {}", report.failures.len());
    for g6 in &report.failures {
        eprintln!("  failed: {g6}");
    }
    let p = &report.runtime_percentiles_ms;
    eprintln!(
        "runtime ms  p50 {:.2} / p90 {:.2} / p99 {:.2} / max {:.2}",
        p.p50, p.p90, p.p99, p.max
    );
    let hist: Vec<String> = report
        .restart_histogram
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect();
    eprintln!("restarts    {}", hist.join(" "));
    eprintln!("checksum    {}", report.checksum);
}
