use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graphwalk::graph::dot::to_dot;
use graphwalk::graph::json::{load_document, parse_vertex_set, write_graph};
use graphwalk::oracle::generate::{random_instance, GeneratorConfig};
use graphwalk::oracle::oracle_reports;
use graphwalk::report::{scp_report_json, stp_report_json};
use graphwalk::scp::{classify_scp, ScpMiner};
use graphwalk::stp::{classify_stp, StpMiner};
use graphwalk::{
    Classification, ColorProgram, DirectedGraph, Fidelity, MiningConfig, MiningReport, Mode, TosetProgram,
    Verdict, VertexSet,
};

#[derive(Parser)]
#[command(name = "graphwalk", version, about = "Mine and check graph-walking programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for programs leading from the source set to the target set.
    Mine(MineArgs),
    /// Classify one program and print its endpoint trace.
    Verify(VerifyArgs),
    /// Print the endpoint trace of one program.
    Simulate(SimulateArgs),
    /// Subdivide a multigraph into a simple graph.
    Convert(ConvertArgs),
    /// Write a seeded random graph with planted source and target.
    Gen(GenArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Graph document (JSON).
    #[arg(long, short)]
    graph: PathBuf,
    /// Source vertices: comma-separated ids, or @FILE with one id per line.
    /// Defaults to the document's `source`.
    #[arg(long, short)]
    source: Option<String>,
    /// Target vertices, same syntax. Defaults to the document's `target`.
    #[arg(long, short)]
    target: Option<String>,
    /// Categorical feature to use as the colour.
    #[arg(long)]
    color_feature: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Scp,
    Stp,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Feasible,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Feasible => Mode::Feasible,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FidelityArg {
    Repaired,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOrJson {
    Json,
    Text,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "scp")]
    engine: Engine,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    /// Cap on programs emitted per length.
    #[arg(long)]
    max_programs: Option<usize>,
    /// Cap on search states pushed per length.
    #[arg(long)]
    max_triples: Option<usize>,
    /// Wall-clock budget for the whole run, in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, value_enum, default_value = "repaired")]
    fidelity: FidelityArg,
    #[arg(long, value_enum, default_value = "json")]
    output: TextOrJson,
}

#[derive(Args)]
struct ProgramArgs {
    /// Program file: a JSON array of colour names, or of criteria.
    #[arg(long, short, conflicts_with = "colors", required_unless_present = "colors")]
    program: Option<PathBuf>,
    /// Inline colour program, e.g. `red,green`. An empty string is ε.
    #[arg(long)]
    colors: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Exact,
    Feasible,
    Infeasible,
    Halt,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    program: ProgramArgs,
    /// Exit 1 unless the verdict matches. `feasible` also accepts exact.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
    #[arg(long, value_enum, default_value = "text")]
    output: TextOrJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    program: ProgramArgs,
    #[arg(long, value_enum, default_value = "json")]
    output: TraceFormat,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, short)]
    graph: PathBuf,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    max_vertices: usize,
    #[arg(long, default_value_t = 4)]
    max_colors: usize,
    /// Ordered feature dimensions besides the colour.
    #[arg(long, default_value_t = 0)]
    ordered_dims: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Failure while reading or validating input; exits with status 2.
struct Fatal(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => mine(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Convert(a) => convert(a).map(|_| true),
        Command::Gen(a) => gen(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

struct Loaded {
    graph: DirectedGraph,
    source: VertexSet,
    target: Option<VertexSet>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn resolve_set(
    g: &DirectedGraph,
    flag: Option<&str>,
    from_doc: Option<&Vec<String>>,
    what: &str,
) -> Result<Option<VertexSet>> {
    let set = match (flag, from_doc) {
        (Some(spec), _) => match spec.strip_prefix('@') {
            Some(path) => parse_vertex_set(g, &read(Path::new(path))?)?,
            None => {
                let ids: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                g.vertex_set(&ids)?
            }
        },
        (None, Some(ids)) => g.vertex_set(ids)?,
        (None, None) => return Ok(None),
    };
    if set.is_empty() {
        bail!("{what} set is empty");
    }
    Ok(Some(set))
}

fn load(args: &GraphArgs, need_target: bool) -> Result<Loaded> {
    let doc = load_document(&read(&args.graph)?).with_context(|| format!("in {}", args.graph.display()))?;
    let mut graph = doc.graph.into_simple();
    if let Some(name) = &args.color_feature {
        graph.set_color_dimension(name)?;
    }
    let source = resolve_set(&graph, args.source.as_deref(), doc.source.as_ref(), "source")?
        .context("no source set: pass --source or add `source` to the document")?;
    let target = resolve_set(&graph, args.target.as_deref(), doc.target.as_ref(), "target")?;
    if need_target && target.is_none() {
        bail!("no target set: pass --target or add `target` to the document");
    }
    Ok(Loaded { graph, source, target })
}

fn emit<P>(
    out: &mut impl Write,
    format: TextOrJson,
    report: &MiningReport<P>,
    json: Value,
    render: impl Fn(&P) -> String,
) -> io::Result<()> {
    match format {
        TextOrJson::Json => writeln!(out, "{json}")?,
        TextOrJson::Text => {
            let status = if report.exhausted { "complete" } else { "truncated" };
            writeln!(out, "length {}: {} program(s), {status}", report.length, report.programs.len())?;
            for p in &report.programs {
                writeln!(out, "  {}", render(p))?;
            }
        }
    }
    out.flush()
}

fn mine(a: MineArgs) -> Result<bool, Fatal> {
    let Loaded { graph: g, source, target } = load(&a.graph, true)?;
    let target = target.expect("required above");
    let mode = Mode::from(a.mode);
    let mut config = MiningConfig::new(a.max_len).with_fidelity(match a.fidelity {
        FidelityArg::Repaired => Fidelity::Repaired,
        FidelityArg::Literal => Fidelity::Literal,
    });
    config.max_programs = a.max_programs;
    config.max_triples = a.max_triples;
    if let Some(secs) = a.time_budget {
        config.time_budget = Some(Duration::try_from_secs_f64(secs).context("invalid --time-budget")?);
    }

    let mut out = io::stdout().lock();
    let mut found = false;
    match a.engine {
        Engine::Scp => {
            for r in ScpMiner::new(&g, &source, &target, mode, config)? {
                found |= !r.programs.is_empty();
                emit(&mut out, a.output, &r, scp_report_json("scp", &g, &r), |p| p.display(&g).to_string())?;
            }
        }
        Engine::Oracle => {
            for r in oracle_reports(&g, &source, &target, mode, a.max_len)? {
                found |= !r.programs.is_empty();
                emit(&mut out, a.output, &r, scp_report_json("oracle", &g, &r), |p| {
                    p.display(&g).to_string()
                })?;
            }
        }
        Engine::Stp => {
            for r in StpMiner::new(&g, &source, &target, mode, config)? {
                found |= !r.programs.is_empty();
                emit(&mut out, a.output, &r, stp_report_json(&g, &r), |p| {
                    p.display(g.schema()).to_string()
                })?;
            }
        }
    }
    Ok(found)
}

enum Program {
    Colors(ColorProgram),
    Toset(TosetProgram),
}

fn load_program(g: &DirectedGraph, args: &ProgramArgs) -> Result<Program> {
    if let Some(list) = &args.colors {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        return Ok(Program::Colors(ColorProgram::parse(g, &names)?));
    }
    let path = args.program.as_ref().expect("clap requires one of the two");
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("in {}", path.display()))?;
    let Some(steps) = value.as_array() else {
        bail!("{}: a program is a JSON array", path.display());
    };
    if steps.iter().all(Value::is_string) {
        let names: Vec<&str> = steps.iter().filter_map(Value::as_str).collect();
        g.require_colors()?;
        Ok(Program::Colors(ColorProgram::parse(g, &names)?))
    } else {
        Ok(Program::Toset(TosetProgram::from_json(g.schema(), &value)?))
    }
}

fn trace_of(g: &DirectedGraph, source: &VertexSet, p: &Program) -> Result<Vec<VertexSet>> {
    Ok(match p {
        Program::Colors(p) => graphwalk::scp::simulate_scp(g, source, p).into_sets(),
        Program::Toset(p) => graphwalk::stp::simulate_stp(g, source, p)?.into_sets(),
    })
}

fn display_program(g: &DirectedGraph, p: &Program) -> String {
    match p {
        Program::Colors(p) => p.display(g).to_string(),
        Program::Toset(p) => p.display(g.schema()).to_string(),
    }
}

fn classification_json(g: &DirectedGraph, program: &str, c: &Classification) -> Value {
    let halt_step = match c.verdict {
        Verdict::CompleteHalt { step } => Some(step),
        _ => None,
    };
    json!({
        "program": program,
        "verdict": c.verdict.name(),
        "halt_step": halt_step,
        "partial_halts": c.partial_halts.iter().map(|h| json!({
            "step": h.step,
            "vertices": g.set_names(&h.vertices),
        })).collect::<Vec<_>>(),
        "trace": c.trace.sets().iter().map(|e| g.set_names(e)).collect::<Vec<_>>(),
    })
}

fn verify(a: VerifyArgs) -> Result<bool, Fatal> {
    let Loaded { graph: g, source, target } = load(&a.graph, true)?;
    let target = target.expect("required above");
    let program = load_program(&g, &a.program)?;
    let c = match &program {
        Program::Colors(p) => classify_scp(&g, &source, &target, p),
        Program::Toset(p) => classify_stp(&g, &source, &target, p)?,
    };
    let shown = display_program(&g, &program);
    let mut out = io::stdout().lock();
    match a.output {
        TextOrJson::Json => writeln!(out, "{}", classification_json(&g, &shown, &c))?,
        TextOrJson::Text => {
            writeln!(out, "program: {shown}")?;
            match c.verdict {
                Verdict::CompleteHalt { step } => writeln!(out, "verdict: halt at step {step}")?,
                v => writeln!(out, "verdict: {}", v.name())?,
            }
            for (i, e) in c.trace.sets().iter().enumerate() {
                writeln!(out, "E{i} = {{{}}}", g.set_names(e).join(", "))?;
            }
            for h in &c.partial_halts {
                writeln!(out, "partial halt at step {}: {{{}}}", h.step, g.set_names(&h.vertices).join(", "))?;
            }
        }
    }
    Ok(match a.expect {
        None => true,
        Some(Expect::Exact) => c.is_exact(),
        Some(Expect::Feasible) => c.is_feasible(),
        Some(Expect::Infeasible) => c.verdict == Verdict::Infeasible,
        Some(Expect::Halt) => matches!(c.verdict, Verdict::CompleteHalt { .. }),
    })
}

fn simulate(a: SimulateArgs) -> Result<(), Fatal> {
    let Loaded { graph: g, source, target } = load(&a.graph, false)?;
    let program = load_program(&g, &a.program)?;
    let trace = trace_of(&g, &source, &program)?;
    let text = match a.output {
        TraceFormat::Json => {
            let sets: Vec<_> = trace.iter().map(|e| g.set_names(e)).collect();
            format!("{}\n", json!({ "program": display_program(&g, &program), "trace": sets }))
        }
        TraceFormat::Dot => {
            let marks: Vec<(String, VertexSet)> =
                trace.into_iter().enumerate().map(|(i, e)| (format!("E{i}"), e)).collect();
            to_dot(&g, Some(&source), target.as_ref(), &marks)
        }
    };
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn convert(a: ConvertArgs) -> Result<(), Fatal> {
    let doc = load_document(&read(&a.graph)?).with_context(|| format!("in {}", a.graph.display()))?;
    let g = doc.graph.into_simple();
    let source = doc.source.as_ref().map(|ids| g.vertex_set(ids)).transpose()?;
    let target = doc.target.as_ref().map(|ids| g.vertex_set(ids)).transpose()?;
    write_out(a.out.as_deref(), &write_graph(&g, source.as_ref(), target.as_ref()))?;
    Ok(())
}

fn gen(a: GenArgs) -> Result<(), Fatal> {
    let cfg = GeneratorConfig {
        max_vertices: a.max_vertices.max(3),
        max_colors: a.max_colors,
        ordered_dims: a.ordered_dims,
        ..Default::default()
    };
    write_out(a.out.as_deref(), &random_instance(a.seed, &cfg).to_json())?;
    Ok(())
}
