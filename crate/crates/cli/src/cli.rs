//! Command dispatch. Human-facing indices (printed orders, tours, paths)
//! are 1-based; file headers and trace documents are 0-based.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nowait_core::embed::{build_hardness_instance, embed_semimetric, extract_tour};
use nowait_core::flowshop::{makespan, FlowshopInstance, JobPermutation};
use nowait_core::graph::{
    atsp_tour_to_permutation, nwfs_to_atsp, path_cost, tour_cost, Kind, Tour, WeightMatrix,
};
use nowait_core::solve::{
    brute_force_nwfs, fgm_atsp, held_karp_path_limited, held_karp_tour_limited,
    nwfs_log_m_approx, DEFAULT_EXACT_LIMIT,
};
use nowait_core::transform::Fraction;

use crate::format::{
    parse_flowshop, parse_matrix, parse_solution, serialize_flowshop, serialize_matrix,
    ParseError,
};
use crate::trace::TraceDoc;

#[derive(Parser, Debug)]
#[command(
    name = "nowait",
    version,
    about = "No-wait flowshop scheduling and ATSP reductions: solvers, transformations, and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Solve a flowshop instance (exactly by default)
    SolveNwfs {
        file: PathBuf,
        /// Exhaustive search over job orders (up to 9 jobs)
        #[arg(long)]
        exact: bool,
        /// Cycle-cover approximation with a (ceil(log2 m)+1) guarantee
        #[arg(long)]
        approx: bool,
        /// Write the approximation run record as JSON
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Solve a distance-matrix instance (exactly by default)
    SolveAtsp {
        file: PathBuf,
        /// Subset dynamic programming (tour or path per the file header)
        #[arg(long)]
        exact: bool,
        /// Repeated cycle-cover approximation (tours only)
        #[arg(long)]
        fgm: bool,
        /// Vertex limit for the exact solver
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        limit: usize,
    },
    /// Instance reductions, each emitting a trace for `backmap`
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Map a solution of a reduced instance back through a trace
    Backmap { trace: PathBuf, solution: PathBuf },
    /// Encode a semimetric as flowshop jobs (gaps become distance + 1)
    Embed {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random instance generation
    #[command(subcommand)]
    Gen(GenCmd),
    /// Validate an instance file (semimetric checks for matrices)
    Verify { file: PathBuf },
    /// Run a measurement suite and emit a TSV report
    Bench {
        /// Suite name; `acceptance` runs the ten numbered checks
        #[arg(long)]
        suite: String,
        /// Write the TSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Flowshop to ATSP via a zero dummy job
    NwfsToAtsp {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// ATSP to flowshop via normalization, replication, splitting, and
    /// the job embedding
    AtspToNwfs {
        file: PathBuf,
        /// Accuracy parameter as an exact fraction `p/q`, at most 1
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenCmd {
    /// Random semimetric via shortest-path closure
    Atsp {
        #[arg(long)]
        n: usize,
        #[arg(long = "max-weight")]
        max_weight: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random flowshop instance
    Nwfs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "max-weight")]
        max_weight: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flag combinations or arguments: exit 1.
    Usage(String),
    /// Unreadable or malformed input files: exit 2.
    Parse { file: String, message: String },
    /// Structurally valid input failing a semantic check: exit 3.
    Validation(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Parse { file, message } => write!(f, "{file}: {message}"),
            CliError::Validation(m) => write!(f, "{m}"),
        }
    }
}

pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Usage(_) => 1,
        CliError::Parse { .. } => 2,
        CliError::Validation(_) => 3,
    }
}

/// Runs a command to completion, mapping errors to their exit codes and a
/// panic (a tripped internal invariant assertion) to exit 4.
pub fn guard<F>(f: F) -> i32
where
    F: FnOnce() -> Result<(), CliError>,
{
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(Ok(())) => 0,
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
        Err(_) => {
            eprintln!("error: internal invariant violation");
            4
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse {
        file: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_error(path: &Path, err: ParseError) -> CliError {
    CliError::Parse { file: path.display().to_string(), message: err.to_string() }
}

fn write_or_print(out: &mut dyn Write, target: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match target {
        Some(path) => fs::write(path, text).map_err(|e| {
            CliError::Validation(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::Validation(format!("cannot write output: {e}")))
        }
    }
}

fn load_flowshop(path: &Path) -> Result<FlowshopInstance, CliError> {
    parse_flowshop(&read(path)?).map_err(|e| parse_error(path, e))
}

fn load_matrix(path: &Path) -> Result<WeightMatrix, CliError> {
    parse_matrix(&read(path)?).map_err(|e| parse_error(path, e))
}

fn one_based(indices: &[usize]) -> String {
    let fields: Vec<String> = indices.iter().map(|&v| (v + 1).to_string()).collect();
    fields.join(" ")
}

fn parse_epsilon(text: &str) -> Result<Fraction, CliError> {
    let bad = || CliError::Usage(format!("epsilon must be a positive fraction p/q, got `{text}`"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.parse::<u64>().map_err(|_| bad())?, q.parse::<u64>().map_err(|_| bad())?),
        None => (text.parse::<u64>().map_err(|_| bad())?, 1),
    };
    Fraction::new(p, q).map_err(|_| bad())
}

fn save_trace(doc: &TraceDoc, path: &Path) -> Result<(), CliError> {
    doc.save(path)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::SolveNwfs { file, exact, approx, trace } => {
            if exact && approx {
                return Err(CliError::Usage("--exact and --approx are mutually exclusive".into()));
            }
            let inst = load_flowshop(&file)?;
            let (order, value) = if approx {
                let (order, run) = nwfs_log_m_approx(&inst);
                if let Some(path) = &trace {
                    let doc = TraceDoc::ApproxRun {
                        jobs: inst.n(),
                        machines: inst.machines(),
                        run: run.clone(),
                    };
                    save_trace(&doc, path)?;
                }
                (order, run.makespan)
            } else {
                if trace.is_some() {
                    return Err(CliError::Usage("--trace records approximation runs; use --approx".into()));
                }
                let (order, value) =
                    brute_force_nwfs(&inst).map_err(|e| CliError::Validation(e.to_string()))?;
                (order, value)
            };
            writeln!(out, "order: {}", one_based(order.order())).ok();
            writeln!(out, "makespan: {value}").ok();
            Ok(())
        }
        Cmd::SolveAtsp { file, exact, fgm, limit } => {
            if exact && fgm {
                return Err(CliError::Usage("--exact and --fgm are mutually exclusive".into()));
            }
            let m = load_matrix(&file)?;
            if fgm {
                if matches!(m.kind(), Kind::Atspp { .. }) {
                    return Err(CliError::Usage("--fgm solves tour instances only".into()));
                }
                let tour = fgm_atsp(&m);
                let tour = tour.rotated_to(0);
                writeln!(out, "tour: {}", one_based(tour.order())).ok();
                writeln!(out, "cost: {}", tour_cost(&m, &tour)).ok();
                return Ok(());
            }
            match m.kind() {
                Kind::Atsp => {
                    let tour = held_karp_tour_limited(&m, limit)
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    let tour = tour.rotated_to(0);
                    writeln!(out, "tour: {}", one_based(tour.order())).ok();
                    writeln!(out, "cost: {}", tour_cost(&m, &tour)).ok();
                }
                Kind::Atspp { endpoints } => {
                    let path = held_karp_path_limited(&m, endpoints, limit)
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    writeln!(out, "path: {}", one_based(path.order())).ok();
                    writeln!(out, "cost: {}", path_cost(&m, &path)).ok();
                }
            }
            Ok(())
        }
        Cmd::Reduce(ReduceCmd::NwfsToAtsp { file, out: target, trace }) => {
            let inst = load_flowshop(&file)?;
            let (matrix, dummy) = nwfs_to_atsp(&inst);
            write_or_print(out, &target, &serialize_matrix(&matrix))?;
            if let Some(path) = &trace {
                save_trace(&TraceDoc::NwfsToAtsp { instance: inst, dummy }, path)?;
            }
            Ok(())
        }
        Cmd::Reduce(ReduceCmd::AtspToNwfs { file, epsilon, out: target, trace }) => {
            let g = load_matrix(&file)?;
            let eps = parse_epsilon(&epsilon)?;
            if !eps.is_at_most_one() {
                return Err(CliError::Usage("epsilon must be at most 1".into()));
            }
            if matches!(g.kind(), Kind::Atspp { .. }) {
                return Err(CliError::Usage("the reduction takes tour instances".into()));
            }
            g.validate_semimetric()
                .map_err(|v| CliError::Validation(format!("not a semimetric: {v}")))?;
            let built =
                build_hardness_instance(&g, eps).map_err(|e| CliError::Validation(e.to_string()))?;
            write_or_print(out, &target, &serialize_flowshop(&built.flowshop))?;
            if let Some(path) = &trace {
                save_trace(&TraceDoc::AtspToNwfs { trace: Box::new(built.trace) }, path)?;
            }
            Ok(())
        }
        Cmd::Backmap { trace, solution } => {
            let doc = TraceDoc::load(&trace).map_err(|e| CliError::Parse {
                file: trace.display().to_string(),
                message: e,
            })?;
            let indices =
                parse_solution(&read(&solution)?).map_err(|e| parse_error(&solution, e))?;
            match doc {
                TraceDoc::NwfsToAtsp { instance, dummy } => {
                    let tour = Tour::new(indices).map_err(|e| {
                        CliError::Validation(format!("solution is not a tour: {e}"))
                    })?;
                    if tour.len() != instance.n() + 1 {
                        return Err(CliError::Validation(format!(
                            "tour covers {} vertices, the reduced instance has {}",
                            tour.len(),
                            instance.n() + 1
                        )));
                    }
                    let order = atsp_tour_to_permutation(&dummy, &tour);
                    writeln!(out, "order: {}", one_based(order.order())).ok();
                    writeln!(out, "makespan: {}", makespan(&instance, &order)).ok();
                }
                TraceDoc::AtspToNwfs { trace } => {
                    let trace = *trace;
                    let order = JobPermutation::new(indices).map_err(|e| {
                        CliError::Validation(format!("solution is not a job order: {e}"))
                    })?;
                    if order.len() != trace.job_count() {
                        return Err(CliError::Validation(format!(
                            "order covers {} jobs, the built instance has {}",
                            order.len(),
                            trace.job_count()
                        )));
                    }
                    let tour = extract_tour(&trace, &order);
                    writeln!(out, "tour: {}", one_based(tour.order())).ok();
                    writeln!(out, "cost: {}", tour_cost(&trace.original, &tour)).ok();
                }
                TraceDoc::ApproxRun { .. } => {
                    return Err(CliError::Usage(
                        "approximation-run traces carry no back-map".into(),
                    ));
                }
            }
            Ok(())
        }
        Cmd::Embed { file, out: target } => {
            let m = load_matrix(&file)?;
            let jobs = embed_semimetric(&m).map_err(|e| CliError::Validation(e.to_string()))?;
            let inst = FlowshopInstance::new(jobs).expect("embedding yields an instance");
            write_or_print(out, &target, &serialize_flowshop(&inst))?;
            Ok(())
        }
        Cmd::Gen(GenCmd::Atsp { n, max_weight, seed, out: target }) => {
            if n < 2 || max_weight < 1 {
                return Err(CliError::Usage("gen atsp needs --n >= 2 and --max-weight >= 1".into()));
            }
            let m = crate::gen::gen_random_semimetric(n, max_weight, seed);
            write_or_print(out, &target, &serialize_matrix(&m))?;
            Ok(())
        }
        Cmd::Gen(GenCmd::Nwfs { n, m, max_weight, seed, out: target }) => {
            if n < 1 || m < 1 {
                return Err(CliError::Usage("gen nwfs needs --n >= 1 and --m >= 1".into()));
            }
            let inst = crate::gen::gen_random_flowshop(n, m, max_weight, seed);
            write_or_print(out, &target, &serialize_flowshop(&inst))?;
            Ok(())
        }
        Cmd::Verify { file } => {
            let text = read(&file)?;
            match classify(&text) {
                FileKind::Flowshop => {
                    let inst = parse_flowshop(&text).map_err(|e| parse_error(&file, e))?;
                    writeln!(out, "ok: flowshop instance, {} jobs on {} machines", inst.n(), inst.machines()).ok();
                }
                FileKind::Matrix => {
                    let m = parse_matrix(&text).map_err(|e| parse_error(&file, e))?;
                    m.validate_semimetric().map_err(|v| {
                        CliError::Validation(format!("not a semimetric: {v}"))
                    })?;
                    let what = match m.kind() {
                        Kind::Atsp => "tour",
                        Kind::Atspp { .. } => "path",
                    };
                    writeln!(out, "ok: semimetric {what} instance on {} vertices", m.n()).ok();
                }
            }
            Ok(())
        }
        Cmd::Bench { suite, out: target } => {
            if suite != "acceptance" {
                return Err(CliError::Usage(format!("unknown suite `{suite}`; available: acceptance")));
            }
            let reports = crate::bench::run_acceptance();
            for report in &reports {
                eprintln!(
                    "criterion {:2} ({}): {}: {}",
                    report.id,
                    report.name,
                    if report.pass { "PASS" } else { "FAIL" },
                    report.detail
                );
            }
            write_or_print(out, &target, &crate::bench::tsv(&reports))?;
            let failed: Vec<usize> =
                reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "{} of {} criteria failed: {failed:?}",
                    failed.len(),
                    reports.len()
                )))
            }
        }
    }
}

enum FileKind {
    Flowshop,
    Matrix,
}

/// A flowshop header has two fields, a matrix header one (or an ATSPP tag).
fn classify(text: &str) -> FileKind {
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with("ATSPP") {
            return FileKind::Matrix;
        }
        return if line.split_whitespace().count() == 2 {
            FileKind::Flowshop
        } else {
            FileKind::Matrix
        };
    }
    FileKind::Matrix
}
