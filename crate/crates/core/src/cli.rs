//! The `valves` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 infeasible, 3 limit reached
//! (best found only), 4 solver/oracle mismatch.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::generate::{corpus, generate, GenParams};
use crate::isolation::Evaluator;
use crate::netmodel::{bundled, Network, Placement};
use crate::oracle::{brute_force, OracleError, DEFAULT_CAP};
use crate::pareto::{frontier_csv, sweep};
use crate::solver::{
    anytime_csv, BranchHeuristic, ProofStatus, RestartMode, Solution, SolveError, SolverOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "valves", version, about = "Minimax isolation valve placement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Score a placement against every single-pipe failure.
    Evaluate {
        /// Instance file, or a bundled name (fig1, fig2).
        instance: String,
        /// File of `edge:node` tokens.
        placement: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find the best placement of a given number of valves.
    Solve {
        instance: String,
        #[arg(long)]
        nv: usize,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write the incumbent history as CSV.
        #[arg(long)]
        anytime: Option<PathBuf>,
        /// Write the placement as `edge:node` tokens.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve a range of valve counts and keep the non-dominated points.
    Sweep {
        instance: String,
        /// Range such as `2..14` (inclusive) or a single count.
        #[arg(long, value_parser = parse_range)]
        nv: RangeInclusive<usize>,
        #[command(flatten)]
        solver: SolverFlags,
        /// Directory for one placement file per frontier point.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the solver with exhaustive enumeration.
    Check {
        /// Instance to check; omit with --corpus.
        instance: Option<String>,
        #[arg(long, value_parser = parse_range)]
        nv: RangeInclusive<usize>,
        /// Check this many generated instances instead.
        #[arg(long)]
        corpus: Option<usize>,
        /// Seed of the first corpus instance.
        #[arg(long, default_value_t = 1)]
        corpus_seed: u64,
        /// Largest number of placements the oracle may enumerate.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Write a random plane instance.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// List the faces used by the face rule.
    Faces { instance: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct SolverFlags {
    #[arg(long)]
    pub no_faces: bool,
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long)]
    pub no_bound: bool,
    #[arg(long)]
    pub no_reduced_cost: bool,
    /// Do not pre-assign valves at source nodes.
    #[arg(long)]
    pub no_source_valves: bool,
    /// Return to the root after each new incumbent.
    #[arg(long)]
    pub restart: bool,
    #[arg(long, default_value = "largest-sector")]
    pub heuristic: BranchHeuristic,
    /// Try leaving a slot empty before placing a valve.
    #[arg(long)]
    pub absent_first: bool,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub node_limit: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverFlags {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            face_constraints: !self.no_faces,
            symmetry: !self.no_symmetry,
            lb_prune: !self.no_bound,
            reduced_cost: !self.no_reduced_cost,
            source_valves: !self.no_source_valves,
            restart_mode: if self.restart {
                RestartMode::Restarting
            } else {
                RestartMode::Continuing
            },
            branch_heuristic: self.heuristic,
            present_first: !self.absent_first,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            node_limit: self.node_limit,
            seed: self.seed,
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(num(a)?..=num(b)?)
        }
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
    }
}

/// Summary of the instance a command ran on.
#[derive(Serialize)]
pub struct Digest {
    pub name: Option<String>,
    pub nodes: usize,
    pub edges: usize,
    pub sources: usize,
    pub total_demand: crate::netmodel::Demand,
}

impl Digest {
    pub fn of(net: &Network) -> Self {
        Digest {
            name: net.name().map(str::to_string),
            nodes: net.node_count(),
            edges: net.edge_count(),
            sources: net.sources().len(),
            total_demand: net.total_demand(),
        }
    }
}

/// Everything a command reports. `result` depends only on the instance,
/// flags and seed; timings live in `timing`.
#[derive(Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub instance: Option<Digest>,
    pub result: Value,
    pub timing: Value,
}

/// Loads a file, or a bundled instance when no such file exists.
pub fn load_instance(arg: &str) -> Result<Network, String> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(net) = bundled(arg) {
            return Ok(net);
        }
    }
    Network::load(path).map_err(|e| format!("{arg}: {e}"))
}

struct Ctx<'a> {
    argv: Vec<String>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn fail(&mut self, code: i32, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        code
    }

    fn report(&mut self, net: Option<&Network>, result: Value, timing: Value) {
        let r = RunReport {
            command: self.argv.clone(),
            instance: net.map(Digest::of),
            result,
            timing,
        };
        let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(&r).unwrap());
    }
}

/// Entry point of the `valves` binary.
pub fn main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    run_args(&argv, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_args(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        argv: argv.to_vec(),
        out,
        err,
    };
    run(cli.command, &mut ctx)
}

fn run(cmd: Command, ctx: &mut Ctx) -> i32 {
    match cmd {
        Command::Evaluate {
            instance,
            placement,
            format,
        } => evaluate(ctx, &instance, &placement, format),
        Command::Solve {
            instance,
            nv,
            solver,
            anytime,
            out,
            format,
        } => solve(ctx, &instance, nv, &solver.options(), anytime, out, format),
        Command::Sweep {
            instance,
            nv,
            solver,
            out_dir,
            format,
        } => sweep_cmd(ctx, &instance, nv, &solver.options(), out_dir, format),
        Command::Check {
            instance,
            nv,
            corpus,
            corpus_seed,
            cap,
            solver,
        } => check(
            ctx,
            instance,
            nv,
            corpus,
            corpus_seed,
            cap,
            &solver.options(),
        ),
        Command::Gen {
            nodes,
            edges,
            seed,
            out,
        } => gen(ctx, nodes, edges, seed, out),
        Command::Faces { instance } => faces(ctx, &instance),
    }
}

fn evaluate(ctx: &mut Ctx, instance: &str, placement: &Path, format: Format) -> i32 {
    let net = match load_instance(instance) {
        Ok(n) => n,
        Err(e) => return ctx.fail(EXIT_INPUT, e),
    };
    let text = match std::fs::read_to_string(placement) {
        Ok(t) => t,
        Err(e) => return ctx.fail(EXIT_INPUT, format!("{}: {e}", placement.display())),
    };
    let p = match Placement::parse(&net, &text) {
        Ok(p) => p,
        Err(e) => return ctx.fail(EXIT_INPUT, format!("{}: {e}", placement.display())),
    };
    let mut ev = Evaluator::new(&net);
    let (part, outcomes) = ev.evaluate_all(&p);
    let worst = ev.worst_case_ud(&p);
    let slot_list = |slots: &[crate::netmodel::SlotId]| {
        slots.iter().map(|&s| net.slot_label(s)).collect::<Vec<_>>()
    };
    let ud_text = |o: &crate::isolation::IsolationOutcome| {
        if o.feasible {
            o.undelivered.to_string()
        } else {
            "inf".to_string()
        }
    };
    match format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<10} {:>6} {:>10}  closed valves",
                "pipe", "sector", "ud"
            );
            for (e, o) in net.edge_ids().zip(&outcomes) {
                let _ = writeln!(
                    s,
                    "{:<10} {:>6} {:>10}  {}",
                    net.edge_label(e),
                    part.edge_sector[e.index()],
                    ud_text(o),
                    slot_list(&o.closed).join(" ")
                );
            }
            if worst.feasible {
                let _ = writeln!(
                    s,
                    "worst case {} l/s at {}",
                    worst.ud,
                    net.edge_label(worst.edge)
                );
            } else {
                let _ = writeln!(
                    s,
                    "infeasible: {} cannot be isolated",
                    net.edge_label(worst.edge)
                );
            }
            let _ = write!(ctx.out, "{s}");
        }
        Format::Csv => {
            let mut s = String::from("edge,sector,ud,closed\n");
            for (e, o) in net.edge_ids().zip(&outcomes) {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    net.edge_label(e),
                    part.edge_sector[e.index()],
                    ud_text(o),
                    slot_list(&o.closed).join(" ")
                );
            }
            let _ = write!(ctx.out, "{s}");
        }
        Format::Json => {
            let rows: Vec<Value> = net
                .edge_ids()
                .zip(&outcomes)
                .map(|(e, o)| {
                    json!({
                        "edge": net.edge_label(e),
                        "sector": part.edge_sector[e.index()],
                        "feasible": o.feasible,
                        "ud": o.feasible.then_some(o.undelivered),
                        "closed": slot_list(&o.closed),
                        "dewatered": o.dewatered.iter().map(|&x| net.edge_label(x)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let result = json!({
                "valves": p.count(),
                "feasible": worst.feasible,
                "worst_case": worst.feasible.then_some(worst.ud),
                "argmax": net.edge_label(worst.edge),
                "outcomes": rows,
            });
            ctx.report(Some(&net), result, json!({}));
        }
    }
    if worst.feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}

fn status_str(s: ProofStatus) -> &'static str {
    match s {
        ProofStatus::Optimal => "optimal",
        ProofStatus::BestFound => "best-found",
    }
}

fn solution_json(net: &Network, sol: &Solution) -> Value {
    json!({
        "budget": sol.budget,
        "ud": sol.ud,
        "argmax": net.edge_label(sol.argmax),
        "proof": status_str(sol.status),
        "placement": sol.placement.labels(net),
        "stats": sol.stats,
    })
}

fn solve_error(ctx: &mut Ctx, net: &Network, e: SolveError) -> i32 {
    match e {
        SolveError::InfeasibleBudget { budget, witness } => ctx.fail(
            EXIT_INFEASIBLE,
            format!(
                "infeasible budget: no placement of {budget} valves isolates every pipe \
                 ({} cannot be cut off from its source)",
                net.edge_label(witness)
            ),
        ),
        SolveError::BudgetOutOfRange { .. } => ctx.fail(EXIT_INPUT, e),
        SolveError::LimitReached => ctx.fail(EXIT_LIMIT, e),
        SolveError::Exhausted => ctx.fail(EXIT_INFEASIBLE, e),
    }
}

fn solve(
    ctx: &mut Ctx,
    instance: &str,
    nv: usize,
    opts: &SolverOptions,
    anytime: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Format,
) -> i32 {
    let net = match load_instance(instance) {
        Ok(n) => n,
        Err(e) => return ctx.fail(EXIT_INPUT, e),
    };
    let sol = match crate::solver::solve(&net, nv, opts) {
        Ok(s) => s,
        Err(e) => return solve_error(ctx, &net, e),
    };
    if let Some(path) = anytime {
        if let Err(e) = std::fs::write(&path, anytime_csv(&sol.anytime)) {
            return ctx.fail(EXIT_INPUT, format!("{}: {e}", path.display()));
        }
    }
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, sol.placement.to_text(&net)) {
            return ctx.fail(EXIT_INPUT, format!("{}: {e}", path.display()));
        }
    }
    let elapsed_ms = sol.stats.elapsed.as_secs_f64() * 1000.0;
    match format {
        Format::Text => {
            let st = &sol.stats;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{} valves: worst case {} l/s at {} ({})",
                nv,
                sol.ud,
                net.edge_label(sol.argmax),
                status_str(sol.status)
            );
            let _ = writeln!(s, "placement: {}", sol.placement.labels(&net).join(" "));
            let _ = writeln!(
                s,
                "nodes {} leaves {} incumbents {} restarts {}",
                st.nodes, st.leaves, st.incumbents, st.restarts
            );
            let _ = writeln!(
                s,
                "prunes: face {} bound {} counter {} conflict {}",
                st.prunes.face, st.prunes.bound, st.prunes.counter, st.prunes.conflict
            );
            let _ = writeln!(
                s,
                "fixed: symmetry {} source {} face {} reduced-cost {} counter {}",
                st.fixings.symmetry,
                st.fixings.source,
                st.fixings.face,
                st.fixings.reduced_cost,
                st.fixings.counter
            );
            let _ = writeln!(s, "elapsed {elapsed_ms:.3} ms");
            let _ = write!(ctx.out, "{s}");
        }
        Format::Csv => {
            let _ = writeln!(ctx.out, "nv,ud,proof,argmax,nodes,elapsed_ms");
            let _ = writeln!(
                ctx.out,
                "{},{},{},{},{},{:.3}",
                nv,
                sol.ud,
                status_str(sol.status),
                net.edge_label(sol.argmax),
                sol.stats.nodes,
                elapsed_ms
            );
        }
        Format::Json => {
            let timing = json!({ "elapsed_ms": elapsed_ms, "anytime": sol.anytime });
            ctx.report(Some(&net), solution_json(&net, &sol), timing);
        }
    }
    match sol.status {
        ProofStatus::Optimal => EXIT_OK,
        ProofStatus::BestFound => EXIT_LIMIT,
    }
}

fn sweep_cmd(
    ctx: &mut Ctx,
    instance: &str,
    range: RangeInclusive<usize>,
    opts: &SolverOptions,
    out_dir: Option<PathBuf>,
    format: Format,
) -> i32 {
    let net = match load_instance(instance) {
        Ok(n) => n,
        Err(e) => return ctx.fail(EXIT_INPUT, e),
    };
    let s = match sweep(&net, range, opts) {
        Ok(s) => s,
        Err(e) => return ctx.fail(EXIT_INPUT, e),
    };
    for note in &s.notes {
        let _ = writeln!(ctx.err, "note: {note}");
    }
    if let Some(dir) = out_dir {
        if let Err(e) = std::fs::create_dir_all(&dir) {
            return ctx.fail(EXIT_INPUT, format!("{}: {e}", dir.display()));
        }
        for p in &s.frontier {
            let path = dir.join(format!("nv{}.txt", p.nv));
            if let Err(e) = std::fs::write(&path, p.placement.to_text(&net)) {
                return ctx.fail(EXIT_INPUT, format!("{}: {e}", path.display()));
            }
        }
    }
    match format {
        Format::Csv => {
            let _ = write!(ctx.out, "{}", frontier_csv(&s));
        }
        Format::Text => {
            for p in &s.points {
                let mark = if s.frontier.iter().any(|f| f.nv == p.nv) {
                    "*"
                } else {
                    " "
                };
                let _ = writeln!(
                    ctx.out,
                    "{mark} {:>3} valves  {:>10} l/s  {:<10}  {}",
                    p.nv,
                    p.ud.to_string(),
                    status_str(p.status),
                    p.placement.labels(&net).join(" ")
                );
            }
        }
        Format::Json => {
            let pts = |v: &[crate::pareto::ParetoPoint]| -> Vec<Value> {
                v.iter()
                    .map(|p| {
                        json!({
                            "nv": p.nv,
                            "ud": p.ud,
                            "proof": status_str(p.status),
                            "nodes": p.nodes,
                            "placement": p.placement.labels(&net),
                        })
                    })
                    .collect()
            };
            let timing: Vec<Value> = s
                .points
                .iter()
                .map(|p| json!({"nv": p.nv, "elapsed_ms": p.elapsed.as_secs_f64() * 1000.0}))
                .collect();
            let result = json!({
                "points": pts(&s.points),
                "frontier": pts(&s.frontier),
                "notes": s.notes,
            });
            ctx.report(Some(&net), result, json!({ "points": timing }));
        }
    }
    if s.points.iter().any(|p| p.status == ProofStatus::BestFound) {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}

/// Solver and oracle agree: same optimum, or both find nothing feasible.
fn agree(
    solver: &Result<Solution, SolveError>,
    oracle: &Result<crate::oracle::OracleResult, OracleError>,
) -> Option<bool> {
    match (solver, oracle) {
        (_, Err(OracleError::CapExceeded { .. })) => None,
        (_, Err(OracleError::BudgetOutOfRange { .. })) => None,
        (Ok(s), Ok(o)) => Some(s.status == ProofStatus::Optimal && s.ud == o.ud),
        (Err(SolveError::InfeasibleBudget { .. }), Err(OracleError::AllInfeasible { .. })) => {
            Some(true)
        }
        _ => Some(false),
    }
}

fn check(
    ctx: &mut Ctx,
    instance: Option<String>,
    range: RangeInclusive<usize>,
    corpus_count: Option<usize>,
    corpus_seed: u64,
    cap: u64,
    opts: &SolverOptions,
) -> i32 {
    let nets: Vec<(String, Network)> = match (instance, corpus_count) {
        (Some(_), Some(_)) => {
            return ctx.fail(EXIT_INPUT, "give an instance or --corpus, not both")
        }
        (None, None) => return ctx.fail(EXIT_INPUT, "give an instance or --corpus"),
        (Some(i), None) => match load_instance(&i) {
            Ok(n) => vec![(i, n)],
            Err(e) => return ctx.fail(EXIT_INPUT, e),
        },
        (None, Some(k)) => corpus(k, corpus_seed)
            .into_iter()
            .map(|n| (n.name().unwrap_or("random").to_string(), n))
            .collect(),
    };
    let start = Instant::now();
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    let show = |r: Result<String, String>| r.unwrap_or_else(|e| e);
    for (name, net) in &nets {
        for nv in range.clone() {
            if nv > net.slot_count() {
                continue;
            }
            let s = crate::solver::solve(net, nv, opts);
            let o = brute_force(net, nv, cap);
            let verdict = agree(&s, &o);
            let s_txt = show(
                s.as_ref()
                    .map(|s| s.ud.to_string())
                    .map_err(|_| "infeasible".into()),
            );
            let o_txt = show(o.as_ref().map(|o| o.ud.to_string()).map_err(|e| match e {
                OracleError::AllInfeasible { .. } => "infeasible".into(),
                other => other.to_string(),
            }));
            let tag = match verdict {
                Some(true) => {
                    pass += 1;
                    "PASS"
                }
                Some(false) => {
                    fail += 1;
                    "FAIL"
                }
                None => {
                    skip += 1;
                    "SKIP"
                }
            };
            let _ = writeln!(
                ctx.out,
                "{tag} {name} nv={nv} solver={s_txt} oracle={o_txt}"
            );
        }
    }
    let _ = writeln!(
        ctx.out,
        "{pass} passed, {fail} failed, {skip} skipped in {:.1} s",
        start.elapsed().as_secs_f64()
    );
    if fail > 0 {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

fn gen(ctx: &mut Ctx, nodes: usize, edges: usize, seed: u64, out: Option<PathBuf>) -> i32 {
    let net = match generate(GenParams { nodes, edges, seed }) {
        Ok(n) => n,
        Err(e) => return ctx.fail(EXIT_INPUT, e),
    };
    let doc = net.to_document();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, doc) {
                return ctx.fail(EXIT_INPUT, format!("{}: {e}", path.display()));
            }
        }
        None => {
            let _ = write!(ctx.out, "{doc}");
        }
    }
    EXIT_OK
}

fn faces(ctx: &mut Ctx, instance: &str) -> i32 {
    let net = match load_instance(instance) {
        Ok(n) => n,
        Err(e) => return ctx.fail(EXIT_INPUT, e),
    };
    let _ = writeln!(
        ctx.out,
        "{} faces ({:?})",
        net.faces().len(),
        net.face_origin()
    );
    for f in net.faces() {
        let labels: Vec<&str> = f.iter().map(|&n| net.node_label(n)).collect();
        let _ = writeln!(ctx.out, "{}", labels.join(" "));
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..14").unwrap(), 2..=14);
        assert_eq!(parse_range("2..=5").unwrap(), 2..=5);
        assert_eq!(parse_range("6").unwrap(), 6..=6);
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn flags_map_to_options() {
        let cli = Cli::try_parse_from([
            "valves",
            "solve",
            "fig1",
            "--nv",
            "6",
            "--no-faces",
            "--restart",
            "--heuristic",
            "lex",
        ])
        .unwrap();
        let Command::Solve { solver, .. } = cli.command else {
            panic!()
        };
        let o = solver.options();
        assert!(!o.face_constraints && o.symmetry);
        assert_eq!(o.restart_mode, RestartMode::Restarting);
        assert_eq!(o.branch_heuristic, BranchHeuristic::Lex);
    }
}
