//! The `erasure` command-line tool.
//!
//! Exit codes: 0 success, 1 negative answer (not chordal, trace rejected),
//! 2 unreadable or unparsable input, 3 input that parses but violates a
//! contract, 4 oracle mismatch.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use edge_erasure::batch::{run_trials, Execution};
use edge_erasure::chordality::{first_peo_violation, random_connected_chordal_graph};
use edge_erasure::dot::{graph_to_dot, trace_to_dot};
use edge_erasure::erasure::{erasure_sequence_from_complete, erase_to_tree, verify_trace, Lexicographic, TraceVerdict};
use edge_erasure::generate::{random_metric, trial_seed, MetricKind};
use edge_erasure::io::{display_labels, Document, DocumentError, GraphDocument, MetricDocument, StepAnnotation, TraceDocument};
use edge_erasure::oracles::{find_induced_cycle_with, minimum_spanning_weight_with, OracleLimits};
use edge_erasure::weighted::{
    d_erasure_run, reverse_delete_mst, verify_d_erasure_trace, MetricMode, SpanningTree, WeightedError,
};
use edge_erasure::{
    classify_edges, maximum_cardinality_search, EdgeClass, ErasureError, ErasureTrace, Graph, Maintenance,
    MetricSpace, Rational,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "erasure", version, about = "Exposed-edge erasures on chordal graphs and d-erasure spanning trees")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide chordality, with a certificate either way.
    CheckChordal { file: PathBuf },
    /// Classify every edge as facet, exposed or shared.
    Exposed { file: PathBuf },
    /// Minimum spanning tree of a metric document.
    Mst(MstArgs),
    /// Erasure trace from a graph down to a tree, or from K_n up to it.
    EraseSequence(EraseArgs),
    /// Check an erasure trace, optionally as a d-erasure trace for a metric.
    VerifyTrace(VerifyArgs),
    /// Generate a random document.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Graphviz rendering of a graph or trace document.
    ToDot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded random MST trials, cross-checked against the oracle.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algorithm {
    DErasure,
    ReverseDelete,
}

#[derive(Debug, Args)]
struct MstArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "d-erasure")]
    algorithm: Algorithm,
    /// Write the erasure trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Compare the weight with the brute-force minimum.
    #[arg(long)]
    oracle: bool,
    /// Accept weights that violate the triangle inequality.
    #[arg(long)]
    raw_weights: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Direction {
    #[arg(long)]
    to_tree: bool,
    #[arg(long)]
    from_complete: bool,
}

#[derive(Debug, Args)]
struct EraseArgs {
    file: PathBuf,
    #[command(flatten)]
    direction: Direction,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Also require every step to erase a heaviest exposed edge.
    #[arg(long)]
    metric: Option<PathBuf>,
    #[arg(long)]
    raw_weights: bool,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Random connected chordal graph.
    Chordal {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random metric space.
    Metric {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "generic")]
        kind: MetricKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 7)]
    n: usize,
    #[arg(long, default_value = "generic")]
    kind: MetricKind,
    /// Run trials one after another instead of in parallel.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error("{0}")]
    Contract(String),
    #[error("{0}")]
    Oracle(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_INPUT,
            CliError::Document { source: DocumentError::Json(_) | DocumentError::Version(_), .. } => EXIT_INPUT,
            CliError::Document { .. } | CliError::Contract(_) => EXIT_CONTRACT,
            CliError::Oracle(_) => EXIT_ORACLE,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io { path: "<output>".into(), source }
    }
}

struct Context<'a> {
    json: bool,
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    limits: OracleLimits,
}

/// A command result with a human and a JSON rendering.
trait Report: Serialize {
    fn human(&self, out: &mut dyn Write) -> io::Result<()>;
}

impl Context<'_> {
    fn emit<R: Report>(&mut self, report: &R) -> Result<(), CliError> {
        if self.json {
            let text = serde_json::to_string_pretty(report).expect("reports serialize");
            writeln!(self.out, "{text}")?;
        } else {
            report.human(self.out)?;
        }
        Ok(())
    }

    fn read_text(&mut self, path: &Path) -> Result<String, CliError> {
        let mut text = String::new();
        let res = if path.as_os_str() == "-" {
            self.stdin.read_to_string(&mut text).map(|_| ())
        } else {
            std::fs::read_to_string(path).map(|t| text = t)
        };
        res.map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Ok(text)
    }

    fn read_document(&mut self, path: &Path) -> Result<Document, CliError> {
        let text = self.read_text(path)?;
        Document::from_json(&text).map_err(|source| doc_error(path, source))
    }

    /// Writes `text` to `path`, or to stdout when no path is given.
    fn write_text(&mut self, path: Option<&Path>, text: &str) -> Result<(), CliError> {
        match path {
            Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
            None => Ok(self.out.write_all(text.as_bytes())?),
        }
    }
}

fn doc_error(path: &Path, source: DocumentError) -> CliError {
    CliError::Document { path: path.display().to_string(), source }
}

fn weighted_error(e: WeightedError) -> CliError {
    CliError::Contract(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let mut ctx = Context {
        json: cli.json,
        stdin,
        out,
        limits: OracleLimits::from_env(),
    };
    let result = match cli.command {
        Command::CheckChordal { file } => check_chordal(&mut ctx, &file),
        Command::Exposed { file } => exposed(&mut ctx, &file),
        Command::Mst(args) => mst(&mut ctx, &args),
        Command::EraseSequence(args) => erase_sequence(&mut ctx, &args),
        Command::VerifyTrace(args) => verify(&mut ctx, &args),
        Command::Gen(cmd) => generate(&mut ctx, cmd),
        Command::ToDot { file, out } => to_dot(&mut ctx, &file, out.as_deref()),
        Command::Batch(args) => batch(&mut ctx, &args),
    };
    let _ = ctx.out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_graph(ctx: &mut Context<'_>, path: &Path) -> Result<(Graph, Vec<String>), CliError> {
    let (g, labels) = ctx.read_document(path)?.into_graph().map_err(|e| doc_error(path, e))?;
    let names = display_labels(g.vertex_count(), labels.as_deref());
    Ok((g, names))
}

fn read_metric(
    ctx: &mut Context<'_>,
    path: &Path,
    raw: bool,
) -> Result<(MetricSpace, Option<Vec<String>>), CliError> {
    let mode = if raw { MetricMode::Raw } else { MetricMode::Strict };
    ctx.read_document(path)?.into_metric(mode).map_err(|e| doc_error(path, e))
}

fn join(names: &[String], vertices: &[usize]) -> String {
    vertices.iter().map(|&v| names[v].as_str()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct PeoViolation {
    vertex: usize,
    position: usize,
    /// Two later neighbours of `vertex` that are not adjacent.
    witnesses: [usize; 2],
}

#[derive(Serialize)]
struct ChordalReport {
    chordal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ordering: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    induced_cycle: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<PeoViolation>,
    #[serde(skip)]
    names: Vec<String>,
}

impl Report for ChordalReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        if let Some(order) = &self.ordering {
            writeln!(out, "chordal")?;
            writeln!(out, "perfect elimination ordering: {}", join(&self.names, order))?;
        } else {
            writeln!(out, "not chordal")?;
            if let Some(cycle) = &self.induced_cycle {
                writeln!(out, "induced cycle: {}", join(&self.names, cycle))?;
            }
            if let Some(v) = &self.violation {
                writeln!(
                    out,
                    "search ordering fails at position {}: later neighbours {} and {} of {} are not adjacent",
                    v.position, self.names[v.witnesses[0]], self.names[v.witnesses[1]], self.names[v.vertex]
                )?;
            }
        }
        Ok(())
    }
}

fn check_chordal(ctx: &mut Context<'_>, path: &Path) -> Result<i32, CliError> {
    let (g, names) = read_graph(ctx, path)?;
    let order = maximum_cardinality_search(&g);
    let failure = first_peo_violation(&g, &order).expect("search ordering is a permutation");
    let mut report = ChordalReport { chordal: failure.is_none(), ordering: None, induced_cycle: None, violation: None, names };
    match failure {
        None => report.ordering = Some(order.into_vec()),
        Some(position) => match find_induced_cycle_with(&g, &ctx.limits) {
            Ok(cycle) => report.induced_cycle = cycle,
            Err(_) => {
                let seq = order.as_slice();
                let vertex = seq[position];
                let later: Vec<usize> = seq[position + 1..].iter().copied().filter(|&w| g.adjacent(vertex, w)).collect();
                let witnesses = later
                    .iter()
                    .enumerate()
                    .find_map(|(i, &a)| later[i + 1..].iter().find(|&&b| !g.adjacent(a, b)).map(|&b| [a.min(b), a.max(b)]))
                    .expect("a failing vertex has non-adjacent later neighbours");
                report.violation = Some(PeoViolation { vertex, position, witnesses });
            }
        },
    }
    ctx.emit(&report)?;
    Ok(if report.chordal { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct ClassifiedEdge {
    u: usize,
    v: usize,
    class: EdgeClass,
}

#[derive(Serialize)]
struct ExposedReport {
    edges: Vec<ClassifiedEdge>,
    #[serde(skip)]
    names: Vec<String>,
}

impl Report for ExposedReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        for e in &self.edges {
            writeln!(out, "{} {} {}", self.names[e.u], self.names[e.v], e.class)?;
        }
        Ok(())
    }
}

fn exposed(ctx: &mut Context<'_>, path: &Path) -> Result<i32, CliError> {
    let (g, names) = read_graph(ctx, path)?;
    let edges = classify_edges(&g)
        .into_iter()
        .map(|(e, class)| ClassifiedEdge { u: e.u(), v: e.v(), class })
        .collect();
    ctx.emit(&ExposedReport { edges, names })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct WeightedEdge {
    u: usize,
    v: usize,
    weight: Rational,
}

#[derive(Serialize)]
struct MstReport {
    algorithm: &'static str,
    edges: Vec<WeightedEdge>,
    weight: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_weight: Option<Rational>,
    #[serde(skip)]
    names: Vec<String>,
}

impl Report for MstReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "algorithm {}", self.algorithm)?;
        for e in &self.edges {
            writeln!(out, "{} {} {}", self.names[e.u], self.names[e.v], e.weight)?;
        }
        writeln!(out, "weight {}", self.weight)?;
        if let Some(w) = &self.oracle_weight {
            writeln!(out, "oracle weight {w}")?;
        }
        Ok(())
    }
}

fn mst(ctx: &mut Context<'_>, args: &MstArgs) -> Result<i32, CliError> {
    let (metric, labels) = read_metric(ctx, &args.file, args.raw_weights)?;
    let (tree, trace, steps, algorithm): (SpanningTree, ErasureTrace, Vec<StepAnnotation>, _) = match args.algorithm {
        Algorithm::DErasure => {
            let run = d_erasure_run(&metric, Maintenance::Incremental);
            let steps = run
                .erased_weights(&metric)
                .zip(&run.exposed_counts)
                .map(|(w, &k)| StepAnnotation { weight: Some(w.clone()), exposed: Some(k) })
                .collect();
            (run.tree, run.trace, steps, "d-erasure")
        }
        Algorithm::ReverseDelete => {
            let (tree, removed) = reverse_delete_mst(&metric);
            let steps = removed
                .iter()
                .map(|&e| StepAnnotation { weight: Some(metric.weight(e).clone()), exposed: None })
                .collect();
            (tree, ErasureTrace::new(metric.complete_graph(), removed), steps, "reverse-delete")
        }
    };
    let oracle_weight = if args.oracle {
        let best = minimum_spanning_weight_with(&metric, &ctx.limits).map_err(|e| CliError::Contract(e.to_string()))?;
        if &best != tree.weight() {
            return Err(CliError::Oracle(format!("{algorithm} weight {} but the minimum is {best}", tree.weight())));
        }
        Some(best)
    } else {
        None
    };
    if let Some(path) = &args.trace {
        let doc = Document::Trace(TraceDocument::from_trace(&trace, labels.clone(), Some(steps)));
        ctx.write_text(Some(path), &doc.to_json())?;
    }
    let report = MstReport {
        algorithm,
        edges: tree
            .edges()
            .iter()
            .map(|&e| WeightedEdge { u: e.u(), v: e.v(), weight: metric.weight(e).clone() })
            .collect(),
        weight: tree.weight().clone(),
        oracle_weight,
        names: display_labels(metric.point_count(), labels.as_deref()),
    };
    ctx.emit(&report)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct WrittenReport {
    path: String,
    erasures: usize,
}

impl Report for WrittenReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "wrote {} erasures to {}", self.erasures, self.path)
    }
}

#[derive(Serialize)]
struct NegativeReport {
    error: String,
}

impl Report for NegativeReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.error)
    }
}

fn erase_sequence(ctx: &mut Context<'_>, args: &EraseArgs) -> Result<i32, CliError> {
    let (g, labels) = ctx.read_document(&args.file)?.into_graph().map_err(|e| doc_error(&args.file, e))?;
    let result = if args.direction.to_tree {
        erase_to_tree(&g, &mut Lexicographic)
    } else {
        erasure_sequence_from_complete(&g)
    };
    let trace = match result {
        Ok(t) => t,
        Err(e @ (ErasureError::NotChordal | ErasureError::NotConnected)) => {
            ctx.emit(&NegativeReport { error: e.to_string() })?;
            return Ok(EXIT_NEGATIVE);
        }
        Err(e) => return Err(CliError::Contract(e.to_string())),
    };
    let text = Document::Trace(TraceDocument::from_trace(&trace, labels, None)).to_json();
    match &args.out {
        Some(path) => {
            ctx.write_text(Some(path), &text)?;
            ctx.emit(&WrittenReport { path: path.display().to_string(), erasures: trace.len() })?;
        }
        None => ctx.write_text(None, &text)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyReport {
    valid: bool,
    steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fault: Option<String>,
}

impl Report for VerifyReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        match (&self.step, &self.fault) {
            (Some(step), Some(fault)) => writeln!(out, "invalid at step {step}: {fault}"),
            _ => writeln!(out, "valid ({} erasures)", self.steps),
        }
    }
}

fn verify(ctx: &mut Context<'_>, args: &VerifyArgs) -> Result<i32, CliError> {
    let (trace, _) = ctx.read_document(&args.file)?.into_trace().map_err(|e| doc_error(&args.file, e))?;
    let verdict = match &args.metric {
        None => verify_trace(&trace),
        Some(path) => {
            let (metric, _) = read_metric(ctx, path, args.raw_weights)?;
            verify_d_erasure_trace(&metric, &trace).map_err(weighted_error)?
        }
    };
    let report = match verdict {
        TraceVerdict::Valid => VerifyReport { valid: true, steps: trace.len(), step: None, fault: None },
        TraceVerdict::Invalid { step, fault } => VerifyReport {
            valid: false,
            steps: trace.len(),
            step: Some(step),
            fault: Some(fault.to_string()),
        },
    };
    ctx.emit(&report)?;
    Ok(if report.valid { EXIT_OK } else { EXIT_NEGATIVE })
}

fn generate(ctx: &mut Context<'_>, cmd: GenCommand) -> Result<i32, CliError> {
    let (doc, out) = match cmd {
        GenCommand::Chordal { n, seed, density, out } => {
            let g = random_connected_chordal_graph(n, density, seed).map_err(|e| CliError::Contract(e.to_string()))?;
            (Document::Graph(GraphDocument::from_graph(&g, None)), out)
        }
        GenCommand::Metric { n, seed, kind, out } => {
            if n == 0 {
                return Err(CliError::Contract("a metric space needs at least one point".into()));
            }
            (Document::Metric(MetricDocument::from_metric(&random_metric(n, kind, seed), None)), out)
        }
    };
    ctx.write_text(out.as_deref(), &doc.to_json())?;
    Ok(EXIT_OK)
}

fn to_dot(ctx: &mut Context<'_>, path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let text = match ctx.read_document(path)? {
        Document::Graph(d) => {
            let g = d.to_graph().map_err(|e| doc_error(path, e))?;
            graph_to_dot(&g, d.labels.as_deref())
        }
        Document::Trace(d) => {
            let trace = d.to_trace().map_err(|e| doc_error(path, e))?;
            trace_to_dot(&trace, d.labels.as_deref())
        }
        Document::Metric(_) => return Err(CliError::Contract("to-dot takes a graph or erasure-trace document".into())),
    };
    ctx.write_text(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Trial {
    index: usize,
    seed: u64,
    d_erasure: Rational,
    reverse_delete: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Rational>,
    agree: bool,
}

#[derive(Serialize)]
struct BatchReport {
    n: usize,
    kind: String,
    trials: Vec<Trial>,
    mismatches: usize,
}

impl Report for BatchReport {
    fn human(&self, out: &mut dyn Write) -> io::Result<()> {
        for t in &self.trials {
            write!(out, "trial {} seed {} d-erasure {} reverse-delete {}", t.index, t.seed, t.d_erasure, t.reverse_delete)?;
            if let Some(w) = &t.oracle {
                write!(out, " oracle {w}")?;
            }
            writeln!(out, " {}", if t.agree { "ok" } else { "MISMATCH" })?;
        }
        writeln!(
            out,
            "{} trials, n = {}, {} metrics, {} mismatches",
            self.trials.len(),
            self.n,
            self.kind,
            self.mismatches
        )
    }
}

fn batch(ctx: &mut Context<'_>, args: &BatchArgs) -> Result<i32, CliError> {
    if args.n == 0 {
        return Err(CliError::Contract("trials need at least one point".into()));
    }
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let use_oracle = args.n <= ctx.limits.max_tree_vertices;
    let limits = ctx.limits;
    let trials = run_trials(args.trials, exec, |index| {
        let seed = trial_seed(args.seed, index as u64);
        let metric = random_metric(args.n, args.kind, seed);
        let d = d_erasure_run(&metric, Maintenance::Incremental).tree.weight().clone();
        let r = reverse_delete_mst(&metric).0.weight().clone();
        let oracle = use_oracle.then(|| minimum_spanning_weight_with(&metric, &limits).expect("within limits"));
        let agree = d == r && oracle.as_ref().is_none_or(|o| *o == d);
        Trial { index, seed, d_erasure: d, reverse_delete: r, oracle, agree }
    });
    let mismatches = trials.iter().filter(|t| !t.agree).count();
    ctx.emit(&BatchReport { n: args.n, kind: args.kind.to_string(), trials, mismatches })?;
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_ORACLE })
}
