//! `homnet`: generate networks, build complexes and filtrations, compute
//! persistent homology, and render barcodes. Every stage reads and writes
//! plain files so intermediates can be inspected.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use homnet::barcode_io::{export_json, import_json, render_ascii, render_svg};
use homnet::complex::{clique_complex, neighborhood_complex, open_neighborhood_complex, SimplicialComplex};
use homnet::filtration::{simplexwise_filtration, skeleton_filtration, validate, Filtration};
use homnet::graph::{load_edge_list, save_edge_list, Graph};
use homnet::netgen::{GeneratorParams, NetgenError, Variant};
use homnet::oracle::betti_of_prefix;
use homnet::persistence::{barcode, betti_at, Barcode};

#[derive(Parser, Serialize)]
#[command(name = "homnet", version, about = "Persistent homology of complex networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Generate a random network as an edge list
    Gen {
        #[command(subcommand)]
        model: GenModel,
    },
    /// Build a clique or neighborhood complex from an edge list
    Complex(ComplexArgs),
    /// Build a filtration from a complex file
    Filtration(FiltrationArgs),
    /// Compute persistence intervals (JSON) and print a summary
    Persist(PersistArgs),
    /// Print Betti numbers at one level
    Betti(BettiArgs),
    /// Render an intervals file as ASCII or SVG
    Barcode(BarcodeArgs),
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum GenModel {
    /// Erdős–Rényi G(n, p)
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        #[serde(flatten)]
        common: GenCommon,
    },
    /// Configuration model with exponential degree law
    Exp {
        #[arg(long)]
        n: usize,
        #[arg(long = "kstar")]
        k_star: f64,
        #[command(flatten)]
        #[serde(flatten)]
        common: GenCommon,
    },
    /// Growing scale-free network with modules
    Sfm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        #[serde(flatten)]
        common: GenCommon,
    },
}

#[derive(Args, Serialize)]
struct GenCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ComplexKindArg {
    Clique,
    Neighborhood,
    OpenNeighborhood,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum FiltrationArg {
    Skeleton,
    Simplexwise,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum InputArg {
    Graph,
    Complex,
    Filtration,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Engine {
    Persistence,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Ascii,
    Svg,
}

#[derive(Args, Serialize)]
struct BuildArgs {
    #[arg(long, value_enum, default_value = "clique")]
    kind: ComplexKindArg,
    /// Largest simplex dimension kept
    #[arg(long, default_value_t = 5)]
    max_dim: usize,
    /// Read the edge list as directed
    #[arg(long)]
    directed: bool,
}

#[derive(Args, Serialize)]
struct ComplexArgs {
    graph: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    build: BuildArgs,
    /// Also write the maximal-simplex incidence matrix as CSV
    #[arg(long)]
    incidence_csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct FiltrationArgs {
    complex: PathBuf,
    #[arg(long, value_enum, default_value = "skeleton")]
    kind: FiltrationArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SourceArgs {
    input: PathBuf,
    /// What the input file holds
    #[arg(long, value_enum, default_value = "graph")]
    from: InputArg,
    #[command(flatten)]
    #[serde(flatten)]
    build: BuildArgs,
    #[arg(long, value_enum, default_value = "skeleton")]
    filtration: FiltrationArg,
}

#[derive(Args, Serialize)]
struct PersistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: SourceArgs,
    /// Intervals JSON destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BettiArgs {
    #[command(flatten)]
    #[serde(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "persistence")]
    engine: Engine,
    /// Filtration level (defaults to the last)
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Args, Serialize)]
struct BarcodeArgs {
    intervals: PathBuf,
    #[arg(long, value_enum, default_value = "ascii")]
    format: Format,
    #[arg(long)]
    cursor: Option<usize>,
    /// ASCII width in columns
    #[arg(long, default_value_t = 80)]
    width: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Invalid arguments detected after parsing; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

/// The full invocation, recorded in every artifact.
#[derive(Serialize)]
struct RunConfig<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    cli: &'a Cli,
}

fn run_config(cli: &Cli) -> serde_json::Value {
    serde_json::to_value(RunConfig { tool: "homnet", version: env!("CARGO_PKG_VERSION"), cli })
        .expect("config serializes")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_usage = e.downcast_ref::<UsageError>().is_some()
                || matches!(e.downcast_ref::<NetgenError>(), Some(NetgenError::InvalidParams(_)));
            ExitCode::from(if is_usage { 2 } else { 1 })
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("HOMNET_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("HOMNET_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the worker pool")
}

fn run(cli: &Cli) -> Result<()> {
    let config = run_config(cli);
    match &cli.command {
        Command::Gen { model } => cmd_gen(model, &config),
        Command::Complex(args) => cmd_complex(args, &config),
        Command::Filtration(args) => cmd_filtration(args, &config),
        Command::Persist(args) => cmd_persist(args, &config),
        Command::Betti(args) => cmd_betti(args, &config),
        Command::Barcode(args) => cmd_barcode(args, &config),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing to stdout")?;
            stdout.flush().context("writing to stdout")
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn config_line(config: &serde_json::Value) -> String {
    format!("# config {config}\n")
}

fn cmd_gen(model: &GenModel, config: &serde_json::Value) -> Result<()> {
    let (variant, common) = match model {
        GenModel::Er { n, p, common } => (Variant::Er { n: *n, p: *p }, common),
        GenModel::Exp { n, k_star, common } => (Variant::Exp { n: *n, k_star: *k_star }, common),
        GenModel::Sfm { n, m, p0, alpha, common } => {
            (Variant::Sfm { n: *n, m: *m, p0: *p0, alpha: *alpha }, common)
        }
    };
    let params = GeneratorParams { variant, seed: common.seed };
    let generated = params.generate()?;
    let mut text = config_line(config);
    text.push_str(&format!("# generator {}\n", serde_json::to_string(&params)?));
    if let Some(modules) = generated.module_count() {
        text.push_str(&format!("# modules {modules}\n"));
    }
    text.push_str(&save_edge_list(&generated.graph));
    write_output(common.out.as_deref(), &text)
}

fn load_graph(path: &Path, directed: bool) -> Result<Graph> {
    let text = read_input(path)?;
    load_edge_list(&text, directed).with_context(|| format!("parsing {}", path.display()))
}

fn build_complex(g: &Graph, build: &BuildArgs) -> Result<SimplicialComplex> {
    let cap = Some(build.max_dim);
    match build.kind {
        ComplexKindArg::Clique => {
            if g.is_directed() {
                return Err(usage("clique complexes need an undirected graph; drop --directed"));
            }
            Ok(clique_complex(g, cap)?)
        }
        ComplexKindArg::Neighborhood => Ok(neighborhood_complex(g, cap)),
        ComplexKindArg::OpenNeighborhood => Ok(open_neighborhood_complex(g, cap)),
    }
}

fn cmd_complex(args: &ComplexArgs, config: &serde_json::Value) -> Result<()> {
    let g = load_graph(&args.graph, args.build.directed)?;
    let k = build_complex(&g, &args.build)?;
    if let Some(path) = &args.incidence_csv {
        write_output(Some(path), &k.incidence_matrix().to_csv())?;
    }
    let mut text = config_line(config);
    text.push_str(&k.to_text());
    write_output(args.out.as_deref(), &text)
}

fn filter(k: &SimplicialComplex, kind: FiltrationArg) -> Filtration {
    match kind {
        FiltrationArg::Skeleton => skeleton_filtration(k),
        FiltrationArg::Simplexwise => simplexwise_filtration(k),
    }
}

fn cmd_filtration(args: &FiltrationArgs, config: &serde_json::Value) -> Result<()> {
    let text = read_input(&args.complex)?;
    let k = SimplicialComplex::from_text(&text)
        .with_context(|| format!("parsing {}", args.complex.display()))?;
    let mut out = config_line(config);
    out.push_str(&filter(&k, args.kind).to_text());
    write_output(args.out.as_deref(), &out)
}

/// Loads whatever `source` points at and brings it to a filtration.
fn load_filtration(source: &SourceArgs) -> Result<(Filtration, String)> {
    let path = &source.input;
    match source.from {
        InputArg::Graph => {
            let g = load_graph(path, source.build.directed)?;
            let k = build_complex(&g, &source.build)?;
            Ok((filter(&k, source.filtration), k.kind().to_string()))
        }
        InputArg::Complex => {
            let k = SimplicialComplex::from_text(&read_input(path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            Ok((filter(&k, source.filtration), k.kind().to_string()))
        }
        InputArg::Filtration => {
            let f = Filtration::from_text(&read_input(path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            validate(&f).with_context(|| format!("{} is not a filtration", path.display()))?;
            Ok((f, "explicit".to_string()))
        }
    }
}

fn compute_barcode(source: &SourceArgs, config: &serde_json::Value) -> Result<(Filtration, Barcode)> {
    let (f, kind) = load_filtration(source)?;
    let mut b = barcode(&f)?;
    b.meta.complex = Some(kind);
    b.meta.config = Some(config.clone());
    Ok((f, b))
}

fn format_vector(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cmd_persist(args: &PersistArgs, config: &serde_json::Value) -> Result<()> {
    let (f, b) = compute_barcode(&args.source, config)?;
    let final_betti = match f.level_count() {
        0 => Vec::new(),
        levels => betti_at(&b, levels - 1)?,
    };
    let summary = format!(
        "simplices {}\nlevels {}\nbetti {}\ninfinite {}\n",
        f.len(),
        f.level_count(),
        format_vector(&final_betti),
        format_vector(&b.infinite_counts()),
    );
    write_output(args.out.as_deref(), &export_json(&b))?;
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

#[derive(Serialize)]
struct BettiReport<'a> {
    engine: Engine,
    level: Option<usize>,
    betti: Vec<usize>,
    config: &'a serde_json::Value,
}

fn cmd_betti(args: &BettiArgs, config: &serde_json::Value) -> Result<()> {
    let (f, _) = load_filtration(&args.source)?;
    let level = match (args.level, f.level_count()) {
        (Some(l), n) if l >= n => {
            return Err(usage(format!("level {l} out of range; the filtration has {n} levels")));
        }
        (Some(l), _) => Some(l),
        (None, 0) => None,
        (None, n) => Some(n - 1),
    };
    let betti = match (level, args.engine) {
        (None, _) => Vec::new(),
        (Some(l), Engine::Persistence) => betti_at(&barcode(&f)?, l)?,
        (Some(l), Engine::Oracle) => match f.exact_homology_dims() {
            0 => Vec::new(),
            dims => betti_of_prefix(&f, l, dims - 1)?,
        },
    };
    let report = BettiReport { engine: args.engine, level, betti, config };
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn cmd_barcode(args: &BarcodeArgs, config: &serde_json::Value) -> Result<()> {
    let text = read_input(&args.intervals)?;
    let mut b = import_json(&text).with_context(|| format!("parsing {}", args.intervals.display()))?;
    if let Some(l) = args.cursor {
        if l >= b.meta.level_count {
            return Err(usage(format!(
                "cursor {l} out of range; the barcode has {} levels",
                b.meta.level_count
            )));
        }
    }
    b.meta.config = Some(serde_json::json!({ "render": config, "source": b.meta.config.take() }));
    let rendered = match args.format {
        Format::Svg => render_svg(&b, args.cursor),
        Format::Ascii => {
            let mut out = config_line(config);
            out.push_str(&render_ascii(&b, args.width).map_err(|e| usage(e.to_string()))?);
            if let Some(l) = args.cursor {
                out.push_str(&format!("cursor {l}: betti {}\n", format_vector(&betti_at(&b, l)?)));
            }
            out
        }
    };
    write_output(args.out.as_deref(), &rendered)
}
