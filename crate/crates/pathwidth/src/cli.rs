//! Command-line front end.
//!
//! Every command returns an [`Outcome`] holding its exit code and the full
//! text for stdout and stderr; nothing is printed before the command ends.
//! Exit codes: 0 success, 1 negative answer, 2 input error, 3 capability.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pathwidth_core::decomposition::{tighten, validate};
use pathwidth_core::generate::Family;
use pathwidth_core::oracle::{vs_dp_with_order, vs_order_to_decomposition, VS_DP_LIMIT};
use pathwidth_core::pipeline::{approx_decomposition, Branch, LevelRecord, Outcome as LevelOutcome};
use pathwidth_core::reducer::{decrease_pathwidth_with, ReducerError, ReducerStats};
use pathwidth_core::{
    solve, Graph, Mode, PathDecomposition, ReducerConfig, SimplifyRule, SolveConfig, SolveError, Strategy, Violation,
};
use serde_json::{json, Value};

use crate::formats::{parse_decomposition, parse_graph, write_decomposition, write_graph, PdFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pathwidth", version, about = "Exact path-width of graphs in .gr format")]
pub struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for the breadth-first reducer; results do not depend
    /// on it.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Path-width and a witness decomposition.
    Solve(SolveArgs),
    /// Whether the path-width is at most k (exit 0 yes, 1 no).
    Decide(DecideArgs),
    /// Run the reducer on a given decomposition.
    Reduce(ReduceArgs),
    /// Check a decomposition against a graph (exit 0 iff valid).
    Verify(VerifyArgs),
    /// Path-width by the subset oracle (at most 24 vertices).
    Oracle(GraphArg),
    /// Write a generated graph in .gr format.
    Gen(GenArgs),
    /// Time the reducer over a family; CSV columns:
    /// family,n,m,k,rep,input_width,feasible,achieved_width,skeletons,max_layer,max_gap_len,seconds
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Depth,
    Breadth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Interval,
    Node,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Decide,
    Construct,
}

#[derive(Debug, Clone, Args)]
pub struct ReducerArgs {
    /// Search order of the reducer.
    #[arg(long, value_enum, default_value_t = StrategyArg::Depth)]
    pub strategy: StrategyArg,
    /// Which hidden events a skeleton drops.
    #[arg(long, value_enum, default_value_t = RuleArg::Interval)]
    pub rule: RuleArg,
}

impl ReducerArgs {
    fn config(&self, threads: Option<usize>) -> ReducerConfig {
        ReducerConfig {
            strategy: match self.strategy {
                StrategyArg::Depth => Strategy::Depth,
                StrategyArg::Breadth => Strategy::Breadth,
            },
            rule: match self.rule {
                RuleArg::Interval => SimplifyRule::Interval,
                RuleArg::Node => SimplifyRule::Node,
            },
            parallel: threads != Some(1),
            ..ReducerConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArg {
    /// Graph in .gr format; `-` reads stdin.
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: GraphArg,
    /// Also print every recursion level.
    #[arg(long)]
    pub trace: bool,
    /// Graphs up to this size go to the subset oracle.
    #[arg(long, default_value_t = 16)]
    pub base_size: usize,
    #[command(flatten)]
    pub reducer: ReducerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub input: GraphArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 16)]
    pub base_size: usize,
    #[command(flatten)]
    pub reducer: ReducerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: GraphArg,
    /// Decomposition in .pd format.
    pub decomposition: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Construct)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub reducer: ReducerArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: GraphArg,
    pub decomposition: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Path,
    Cycle,
    Complete,
    Grid,
    Tree,
    Gnp,
    Decorated,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Vertex count (all families but grid).
    #[arg(short, default_value_t = 0)]
    pub n: usize,
    /// Edge probability (gnp).
    #[arg(short, default_value_t = 0.5)]
    pub p: f64,
    /// Rows (grid).
    #[arg(short, default_value_t = 0)]
    pub r: usize,
    /// Columns (grid).
    #[arg(short, default_value_t = 0)]
    pub c: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl FamilyArgs {
    fn family(&self, n: usize) -> Family {
        match self.family {
            FamilyArg::Path => Family::Path { n },
            FamilyArg::Cycle => Family::Cycle { n },
            FamilyArg::Complete => Family::Complete { n },
            FamilyArg::Grid => Family::Grid { rows: self.r, cols: self.c },
            FamilyArg::Tree => Family::RandomTree { n, seed: self.seed },
            FamilyArg::Gnp => Family::Gnp { n, p: self.p, seed: self.seed },
            FamilyArg::Decorated => Family::Decorated { n },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Comma-separated vertex counts; `-n` alone when absent.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Target width handed to the reducer.
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[command(flatten)]
    pub reducer: ReducerArgs,
}

/// Exit code plus everything to print.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match cli.threads {
        Some(0) => Outcome::fail(EXIT_INPUT, "--threads must be positive"),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Outcome::fail(EXIT_CAPABILITY, e),
        },
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, cli),
        Command::Decide(a) => cmd_decide(a, cli),
        Command::Reduce(a) => cmd_reduce(a, cli),
        Command::Verify(a) => cmd_verify(a, cli),
        Command::Oracle(a) => cmd_oracle(a, cli),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a, cli),
    };
    result.unwrap_or_else(|o| o)
}

type CmdResult = Result<Outcome, Outcome>;

fn read(path: &Path) -> Result<String, Outcome> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Outcome::fail(EXIT_INPUT, format_args!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Outcome> {
    let text = read(path)?;
    parse_graph(&text).map_err(|e| Outcome::fail(EXIT_INPUT, format_args!("{}: {e}", path.display())))
}

fn load_decomposition(path: &Path, g: &Graph) -> Result<PdFile, Outcome> {
    let text = read(path)?;
    let pd = parse_decomposition(&text).map_err(|e| Outcome::fail(EXIT_INPUT, format_args!("{}: {e}", path.display())))?;
    if pd.vertex_count != g.vertex_count() {
        return Err(Outcome::fail(
            EXIT_INPUT,
            format_args!("decomposition is for {} vertices, graph has {}", pd.vertex_count, g.vertex_count()),
        ));
    }
    Ok(pd)
}

fn render(cli: &Cli, value: Value, text: String) -> String {
    if cli.json {
        let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        s.push('\n');
        s
    } else {
        text
    }
}

fn solve_config(base_size: usize, reducer: &ReducerArgs, cli: &Cli) -> SolveConfig {
    SolveConfig { base_size, reducer: reducer.config(cli.threads), ..SolveConfig::default() }
}

fn solve_failure(e: SolveError) -> Outcome {
    let code = match e {
        SolveError::Config(_) => EXIT_INPUT,
        SolveError::AboveMaxK { .. } => EXIT_NO,
        SolveError::Capability { .. } | SolveError::Reducer(_) => EXIT_CAPABILITY,
    };
    Outcome::fail(code, e)
}

fn cmd_solve(a: &SolveArgs, cli: &Cli) -> CmdResult {
    let g = load_graph(&a.input.graph)?;
    let cfg = solve_config(a.base_size, &a.reducer, cli);
    let s = solve(&g, &cfg).map_err(solve_failure)?;
    // never print a witness that does not check out
    if let Err(v) = validate(&s.witness, &g) {
        return Err(violation_failure(EXIT_CAPABILITY, "solver produced an invalid witness", &v));
    }
    if s.witness.width() != s.width {
        return Err(Outcome::fail(EXIT_CAPABILITY, "solver witness width differs from the answer"));
    }
    let pd = write_decomposition(&s.witness, g.vertex_count());
    let mut text = format!("pathwidth {}\n", s.width);
    if a.trace {
        for level in &s.trace.levels {
            writeln!(text, "c {}", level_line(level)).expect("writing to a string");
        }
    }
    text.push_str(&pd);
    let mut value = json!({
        "command": "solve",
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "pathwidth": s.width,
        "witness": pd,
    });
    if a.trace {
        value["trace"] = s.trace.levels.iter().map(level_json).collect();
    }
    Ok(Outcome::ok(render(cli, value, text)))
}

fn cmd_decide(a: &DecideArgs, cli: &Cli) -> CmdResult {
    let g = load_graph(&a.input.graph)?;
    let cfg = SolveConfig { max_k: Some(a.k), ..solve_config(a.base_size, &a.reducer, cli) };
    let answer = match solve(&g, &cfg) {
        Ok(s) => s.width <= a.k as i32,
        Err(SolveError::AboveMaxK { .. }) => false,
        Err(e) => return Err(solve_failure(e)),
    };
    let value = json!({ "command": "decide", "k": a.k, "answer": answer });
    let text = if answer { "yes\n" } else { "no\n" }.to_string();
    let code = if answer { EXIT_OK } else { EXIT_NO };
    Ok(Outcome { code, stdout: render(cli, value, text), stderr: String::new() })
}

fn violation_failure(code: i32, headline: &str, violations: &[Violation]) -> Outcome {
    let mut stderr = format!("error: {headline}\n");
    for v in violations {
        writeln!(stderr, "  {v}").expect("writing to a string");
    }
    Outcome { code, stdout: String::new(), stderr }
}

fn cmd_reduce(a: &ReduceArgs, cli: &Cli) -> CmdResult {
    let g = load_graph(&a.input.graph)?;
    let pd = load_decomposition(&a.decomposition, &g)?;
    let p = pd.decomposition;
    if let Err(v) = validate(&p, &g) {
        return Err(violation_failure(EXIT_INPUT, "input decomposition is invalid", &v));
    }
    let mode = match a.mode {
        ModeArg::Decide => Mode::Decide,
        ModeArg::Construct => Mode::Construct,
    };
    let report = decrease_pathwidth_with(&g, &p, a.k, mode, &a.reducer.config(cli.threads)).map_err(|e| match e {
        ReducerError::InvalidInput(v) => violation_failure(EXIT_INPUT, "input decomposition is invalid", &v),
        ReducerError::NeighborForgotten { .. } => Outcome::fail(EXIT_INPUT, e),
        ReducerError::BrokenWitness(v) => violation_failure(EXIT_CAPABILITY, "reducer produced an invalid witness", &v),
    })?;
    let witness = report.witness.as_ref().map(|w| write_decomposition(w, g.vertex_count()));
    let mut text = String::from(if report.feasible { "yes\n" } else { "no\n" });
    if let Some(w) = &witness {
        text.push_str(w);
    }
    let value = json!({
        "command": "reduce",
        "k": a.k,
        "mode": if mode == Mode::Construct { "construct" } else { "decide" },
        "input_width": p.width(),
        "feasible": report.feasible,
        "achieved_width": report.achieved_width,
        "witness": witness,
        "stats": stats_json(&report.stats),
    });
    let code = if report.feasible { EXIT_OK } else { EXIT_NO };
    Ok(Outcome { code, stdout: render(cli, value, text), stderr: String::new() })
}

fn cmd_verify(a: &VerifyArgs, cli: &Cli) -> CmdResult {
    let g = load_graph(&a.input.graph)?;
    let pd = load_decomposition(&a.decomposition, &g)?;
    let width = pd.decomposition.width();
    let mut text = String::new();
    let mut warnings = Vec::new();
    if pd.declared_width != i64::from(width) {
        warnings.push(format!("header width {} differs from the recomputed width {width}", pd.declared_width));
    }
    for w in &warnings {
        writeln!(text, "warning: {w}").expect("writing to a string");
    }
    let violations = validate(&pd.decomposition, &g).err().unwrap_or_default();
    if violations.is_empty() {
        writeln!(text, "valid width {width}").expect("writing to a string");
    } else {
        text.push_str("invalid\n");
        for v in &violations {
            writeln!(text, "{v}").expect("writing to a string");
        }
    }
    let value = json!({
        "command": "verify",
        "valid": violations.is_empty(),
        "width": width,
        "declared_width": pd.declared_width,
        "warnings": warnings,
        "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    let code = if violations.is_empty() { EXIT_OK } else { EXIT_NO };
    Ok(Outcome { code, stdout: render(cli, value, text), stderr: String::new() })
}

fn cmd_oracle(a: &GraphArg, cli: &Cli) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let (k, order) = vs_dp_with_order(&g).map_err(|e| Outcome::fail(EXIT_CAPABILITY, e))?;
    debug_assert!(g.vertex_count() <= VS_DP_LIMIT);
    let witness = vs_order_to_decomposition(&g, &order).expect("oracle order is a permutation");
    debug_assert_eq!(witness.width(), k);
    let value = json!({
        "command": "oracle",
        "vertices": g.vertex_count(),
        "pathwidth": k,
        "order": order.iter().map(|v| v + 1).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(render(cli, value, format!("pathwidth {k}\n"))))
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let g = a.family.family(a.family.n).build().map_err(|e| Outcome::fail(EXIT_INPUT, e))?;
    Ok(Outcome::ok(write_graph(&g)))
}

fn cmd_bench(a: &BenchArgs, cli: &Cli) -> CmdResult {
    let sizes = if a.sizes.is_empty() { vec![a.family.n] } else { a.sizes.clone() };
    let cfg = a.reducer.config(cli.threads);
    let name = format!("{:?}", a.family.family).to_lowercase();
    let mut csv = String::from(
        "family,n,m,k,rep,input_width,feasible,achieved_width,skeletons,max_layer,max_gap_len,seconds\n",
    );
    let mut rows = Vec::new();
    for &n in &sizes {
        let g = a.family.family(n).build().map_err(|e| Outcome::fail(EXIT_INPUT, e))?;
        let p = bench_input(&g, a.k);
        for rep in 0..a.reps {
            let start = Instant::now();
            let r = decrease_pathwidth_with(&g, &p, a.k, Mode::Construct, &cfg)
                .map_err(|e| Outcome::fail(EXIT_CAPABILITY, e))?;
            let seconds = start.elapsed().as_secs_f64();
            let achieved = r.achieved_width.map_or(String::new(), |w| w.to_string());
            writeln!(
                csv,
                "{name},{},{},{},{rep},{},{},{achieved},{},{},{},{seconds:.6}",
                g.vertex_count(),
                g.edge_count(),
                a.k,
                p.width(),
                r.feasible,
                r.stats.total_skeletons(),
                r.stats.max_layer(),
                r.stats.max_gap_len,
            )
            .expect("writing to a string");
            rows.push(json!({
                "family": name,
                "n": g.vertex_count(),
                "m": g.edge_count(),
                "k": a.k,
                "rep": rep,
                "input_width": p.width(),
                "feasible": r.feasible,
                "achieved_width": r.achieved_width,
                "stats": stats_json(&r.stats),
                "seconds": seconds,
            }));
        }
    }
    Ok(Outcome::ok(render(cli, json!({ "command": "bench", "rows": rows }), csv)))
}

/// The decomposition a bench row reduces: the pipeline's approximation at
/// `k` when it has one, otherwise the one-bag decomposition tightened.
pub fn bench_input(g: &Graph, k: usize) -> PathDecomposition {
    approx_decomposition(g, k, &SolveConfig::default())
        .unwrap_or_else(|_| tighten(&PathDecomposition::one_bag(g.vertex_count()), g))
}

fn stats_json(s: &ReducerStats) -> Value {
    json!({
        "layer_sizes": s.layer_sizes,
        "skeletons": s.total_skeletons(),
        "candidates": s.candidates,
        "duplicates": s.duplicates,
        "dominated": s.dominated,
        "dead_ends": s.dead_ends,
        "max_gap_len": s.max_gap_len,
        "skipped_forgets": s.skipped_forgets,
    })
}

fn branch_name(b: Branch) -> String {
    match b {
        Branch::Base => "base".into(),
        Branch::Degenerate => "degenerate".into(),
        Branch::Matching { edges } => format!("matching:{edges}"),
        Branch::Simplicial { removed } => format!("simplicial:{removed}"),
        Branch::LargeClique => "large-clique".into(),
        Branch::Fallback => "fallback".into(),
        Branch::GaveUp => "gave-up".into(),
    }
}

fn outcome_name(o: LevelOutcome) -> &'static str {
    match o {
        LevelOutcome::Feasible => "feasible",
        LevelOutcome::Infeasible => "infeasible",
        LevelOutcome::Capability => "capability",
    }
}

fn level_line(l: &LevelRecord) -> String {
    let approx = l.approx_width.map_or("-".to_string(), |w| w.to_string());
    let skeletons = l.stats.as_ref().map_or("-".to_string(), |s| s.total_skeletons().to_string());
    format!(
        "level depth={} k={} n={} added={} branch={} approx_width={approx} outcome={} skeletons={skeletons}",
        l.depth,
        l.k,
        l.n,
        l.edges_added,
        branch_name(l.branch),
        outcome_name(l.outcome),
    )
}

fn level_json(l: &LevelRecord) -> Value {
    json!({
        "depth": l.depth,
        "k": l.k,
        "n": l.n,
        "edges_added": l.edges_added,
        "branch": branch_name(l.branch),
        "approx_width": l.approx_width,
        "outcome": outcome_name(l.outcome),
        "stats": l.stats.as_ref().map(stats_json),
    })
}
