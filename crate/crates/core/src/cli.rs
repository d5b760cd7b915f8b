//! The `aquasub` command line: one subcommand per pipeline stage plus
//! queries and the HTTP server.
//!
//! Exit codes: 0 on success, 2 when arguments fail validation (before any
//! output is written), 1 when a stage fails at run time.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::align::{AlignError, LinkConfig, LinkTable, LINK_THRESHOLD};
use crate::graph::{load_snapshot, save_snapshot, Graph, Nutrient};
use crate::imputer::{impute_missing, loss_curve_csv, ImputerModel, TrainerConfig};
use crate::ingest::{parse_kgtk_edges, write_kgtk_edges, ParseMode};
use crate::pipeline::{align_edges, build_from_rows, ingest, IngestInputs, SourceDoc};
use crate::recommend::{analyze_recipe, apply_substitution, recommend, RecipeAnalysis, Resolver, Substitution};
use crate::service::{self, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "aquasub", version, about = "Water-footprint-aware ingredient substitution over a food knowledge graph")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse source files and merge them into one KGTK edge file.
    Ingest(IngestArgs),
    /// Link node names across sources onto canonical ids.
    Align(AlignArgs),
    /// Apply a link table to merged edges and write a graph snapshot.
    Build(BuildArgs),
    /// Train the imputation model on a snapshot's measured values.
    Train(TrainArgs),
    /// Fill missing values in a snapshot with model predictions.
    Impute(ImputeArgs),
    /// Print node, relation type and edge counts.
    Stats(StatsArgs),
    /// Rank lower-footprint substitutes for a recipe or one ingredient.
    Recommend(RecommendArgs),
    /// Serve the JSON API over a snapshot.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// N-Triples input.
    #[arg(long = "ntriples", value_name = "PATH")]
    pub ntriples: Vec<PathBuf>,
    /// KGTK edge file input.
    #[arg(long = "kgtk", value_name = "PATH")]
    pub kgtk: Vec<PathBuf>,
    /// Water-footprint CSV input.
    #[arg(long = "wf", value_name = "PATH")]
    pub wf: Vec<PathBuf>,
    /// Merged KGTK output.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Skip malformed N-Triples lines instead of failing.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long, value_name = "PATH")]
    pub edges: PathBuf,
    #[arg(long = "out-links", value_name = "PATH")]
    pub out_links: PathBuf,
    /// Minimum cosine for an embedding match.
    #[arg(long, default_value_t = LINK_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_name = "PATH")]
    pub edges: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub links: PathBuf,
    /// Snapshot output.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_name = "PATH")]
    pub snapshot: PathBuf,
    #[arg(long = "out-model", value_name = "PATH")]
    pub out_model: PathBuf,
    /// `epoch,mse` training report.
    #[arg(long = "loss-curve", value_name = "PATH")]
    pub loss_curve: Option<PathBuf>,
    #[arg(long, default_value_t = TrainerConfig::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = TrainerConfig::default().max_epochs)]
    pub epochs: usize,
    #[arg(long = "learning-rate", default_value_t = TrainerConfig::default().learning_rate)]
    pub learning_rate: f64,
    #[arg(long = "batch-size", default_value_t = TrainerConfig::default().batch_size)]
    pub batch_size: usize,
}

#[derive(Debug, Args)]
pub struct ImputeArgs {
    #[arg(long, value_name = "PATH")]
    pub snapshot: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, value_name = "PATH")]
    pub snapshot: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long, value_name = "PATH")]
    pub snapshot: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub links: Option<PathBuf>,
    /// Comma-separated ingredient names or ids.
    #[arg(long, value_delimiter = ',', required_unless_present = "ingredient", conflicts_with = "ingredient")]
    pub recipe: Vec<String>,
    /// A single ingredient id.
    #[arg(long)]
    pub ingredient: Option<String>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// `key=value` config file; `AQUASUB_*` variables and flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub snapshot: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub links: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    #[arg(long, value_name = "ADDR")]
    pub listen: Option<SocketAddr>,
    #[arg(long = "budget-ms")]
    pub budget_ms: Option<u64>,
}

#[derive(Debug)]
pub enum CliError {
    /// `--help` or `--version` text; not a failure.
    Info(String),
    /// Bad arguments; nothing was written.
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Info(m) | CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn require_files<'a>(paths: impl IntoIterator<Item = &'a PathBuf>) -> Result<(), CliError> {
    for p in paths {
        if !p.is_file() {
            return Err(CliError::Usage(format!("no such file: {}", p.display())));
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// Writes `contents` to a temporary file beside `path`, then renames it into
/// place, so a failed run never leaves a partial output.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| runtime(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    load_snapshot(&read(path)?).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// Parses `args` and runs the command, writing human output to `out`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    run(cli, out)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest(a) => cmd_ingest(a, out),
        Command::Align(a) => cmd_align(a, out),
        Command::Build(a) => cmd_build(a, out),
        Command::Train(a) => cmd_train(a, out),
        Command::Impute(a) => cmd_impute(a, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Recommend(a) => cmd_recommend(a, out),
        Command::Serve(a) => cmd_serve(a),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(runtime)
}

fn source_docs(v: &[(String, String)]) -> Vec<SourceDoc<'_>> {
    v.iter().map(|(name, text)| SourceDoc { name, text }).collect()
}

fn cmd_ingest(a: IngestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.ntriples.is_empty() && a.kgtk.is_empty() && a.wf.is_empty() {
        return Err(CliError::Usage("ingest needs at least one of --ntriples, --kgtk, --wf".into()));
    }
    require_files(a.ntriples.iter().chain(&a.kgtk).chain(&a.wf))?;
    let load = |paths: &[PathBuf]| -> Result<Vec<(String, String)>, CliError> {
        paths.iter().map(|p| Ok((p.display().to_string(), read(p)?))).collect()
    };
    let (nt, kg, wf) = (load(&a.ntriples)?, load(&a.kgtk)?, load(&a.wf)?);
    let (nt_docs, kg_docs, wf_docs) = (source_docs(&nt), source_docs(&kg), source_docs(&wf));
    let inputs = IngestInputs { ntriples: &nt_docs, kgtk: &kg_docs, wf: &wf_docs };
    let mode = if a.lenient { ParseMode::Lenient } else { ParseMode::Strict };
    let (rows, report) = ingest(inputs, mode).map_err(runtime)?;
    write_atomic(&a.out, &write_kgtk_edges(&rows))?;
    emit(out, &report.to_string())
}

fn cmd_align(a: AlignArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(a.threshold > 0.0 && a.threshold <= 1.0) {
        return Err(CliError::Usage(format!("--threshold must be in (0, 1], got {}", a.threshold)));
    }
    require_files([&a.edges])?;
    let rows = parse_kgtk_edges(&read(&a.edges)?).map_err(|e| runtime(format!("{}: {e}", a.edges.display())))?;
    let config = LinkConfig { threshold: a.threshold, ..LinkConfig::default() };
    let links = align_edges(&rows, config).map_err(|e| match e {
        AlignError::Ambiguous(list) => {
            let mut msg = String::from("ambiguous links:");
            for l in list {
                let _ = write!(msg, "\n  {l}");
            }
            CliError::Runtime(msg)
        }
        other => runtime(other),
    })?;
    write_atomic(&a.out_links, &links.to_csv())?;
    let mut by_method: BTreeMap<&str, usize> = BTreeMap::new();
    for e in links.iter() {
        *by_method.entry(e.method.as_str()).or_default() += 1;
    }
    let mut report = String::new();
    for (m, n) in by_method {
        let _ = writeln!(report, "{m}\t{n}");
    }
    let _ = writeln!(report, "total\t{}", links.len());
    emit(out, &report)
}

fn cmd_build(a: BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    require_files([&a.edges, &a.links])?;
    let rows = parse_kgtk_edges(&read(&a.edges)?).map_err(|e| runtime(format!("{}: {e}", a.edges.display())))?;
    let links = LinkTable::from_csv(&read(&a.links)?).map_err(|e| runtime(format!("{}: {e}", a.links.display())))?;
    let g = build_from_rows(&rows, &links).map_err(runtime)?;
    write_atomic(&a.out, &save_snapshot(&g))?;
    emit(out, &stats_text(&g))
}

fn cmd_train(a: TrainArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = TrainerConfig {
        seed: a.seed,
        max_epochs: a.epochs,
        learning_rate: a.learning_rate,
        batch_size: a.batch_size,
        ..TrainerConfig::default()
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    require_files([&a.snapshot])?;
    let g = load_graph(&a.snapshot)?;
    let (model, curve) = ImputerModel::fit(&g, &cfg).map_err(runtime)?;
    write_atomic(&a.out_model, &model.to_json())?;
    if let Some(p) = &a.loss_curve {
        write_atomic(p, &loss_curve_csv(&curve))?;
    }
    emit(
        out,
        &format!(
            "epochs\t{}\nmse_first\t{}\nmse_last\t{}\n",
            cfg.max_epochs,
            curve[0],
            curve.last().copied().unwrap_or(f64::NAN)
        ),
    )
}

fn cmd_impute(a: ImputeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    require_files([&a.snapshot, &a.model])?;
    let g = load_graph(&a.snapshot)?;
    let model = ImputerModel::from_json(&read(&a.model)?).map_err(|e| runtime(format!("{}: {e}", a.model.display())))?;
    let g2 = impute_missing(&g, &model).map_err(runtime)?;
    write_atomic(&a.out, &save_snapshot(&g2))?;
    emit(out, &format!("imputed\t{}\n{}", g2.edges().len() - g.edges().len(), stats_text(&g2)))
}

fn stats_text(g: &Graph) -> String {
    let s = g.stats();
    format!("nodes\t{}\nrelation_types\t{}\nedges\t{}\n", s.node_count, s.relation_type_count, s.edge_count)
}

fn cmd_stats(a: StatsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    require_files([&a.snapshot])?;
    let g = load_graph(&a.snapshot)?;
    if a.json {
        emit(out, &format!("{}\n", serde_json::to_string(&g.stats()).map_err(runtime)?))
    } else {
        emit(out, &stats_text(&g))
    }
}

fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn substitution_table(subs: &[Substitution]) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{:<5} {:<28} {:>14} {:>14} {:>11} imputed", "rank", "candidate", "wf m3/ton", "wf delta", "fat delta");
    for s in subs {
        let fat = s.nutrient_delta(Nutrient::Fat).map_or("n/a".to_string(), |d| fmt3(d.delta));
        let imputed = if s.imputed() || s.nutrient_deltas.iter().any(|d| d.imputed) { "yes" } else { "no" };
        let _ = writeln!(
            t,
            "{:<5} {:<28} {:>14} {:>14} {:>11} {imputed}",
            s.rank,
            s.candidate,
            fmt3(s.wf_candidate),
            fmt3(s.wf_delta),
            fat
        );
    }
    t
}

fn recipe_report(g: &Graph, a: &RecipeAnalysis) -> Result<String, CliError> {
    let mut t = String::new();
    let _ = writeln!(t, "recipe");
    for item in &a.items {
        let wf = item.profile.wf.map_or("no footprint".to_string(), |m| {
            format!("{} m3/ton{}", fmt3(m.value), if m.imputed() { " (imputed)" } else { "" })
        });
        let _ = writeln!(t, "  {:<28} {wf}", item.id);
    }
    for name in &a.unresolved {
        let _ = writeln!(t, "  {name:<28} unresolved");
    }
    let _ = writeln!(t, "total water footprint: {} m3/ton", fmt3(a.total_wf));
    for (id, subs) in &a.options {
        let _ = writeln!(t, "\nsubstitutes for {id}");
        if subs.is_empty() {
            let _ = writeln!(t, "  none with a lower water footprint");
        } else {
            t.push_str(&substitution_table(subs));
        }
    }
    match a.best_swap() {
        Some(best) => {
            let (after, report) = apply_substitution(g, a, &best.original, &best.candidate).map_err(runtime)?;
            let _ = writeln!(t, "\nbest swap: {} -> {}", best.original, best.candidate);
            let _ = writeln!(
                t,
                "total water footprint: {} -> {} m3/ton (delta {})",
                fmt3(report.wf_before),
                fmt3(after.total_wf),
                fmt3(report.wf_delta)
            );
            for d in &report.nutrients {
                let unit = if d.nutrient == Nutrient::Calories { "kcal" } else { "g" };
                let _ = writeln!(
                    t,
                    "{}: {} -> {} {unit}/100 g (delta {}){}",
                    d.nutrient,
                    fmt3(d.before),
                    fmt3(d.after),
                    fmt3(d.delta),
                    if d.imputed { " (imputed)" } else { "" }
                );
            }
        }
        None => {
            let _ = writeln!(t, "\nno substitution lowers the water footprint");
        }
    }
    Ok(t)
}

fn cmd_recommend(a: RecommendArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.ingredient.is_none() && a.recipe.iter().all(|n| n.trim().is_empty()) {
        return Err(CliError::Usage("--recipe needs at least one ingredient".into()));
    }
    require_files(std::iter::once(&a.snapshot).chain(a.links.as_ref()))?;
    let g = load_graph(&a.snapshot)?;
    if let Some(id) = &a.ingredient {
        let subs = recommend(&g, id).map_err(runtime)?;
        return emit(out, &substitution_table(&subs));
    }
    let links = match &a.links {
        Some(p) => LinkTable::from_csv(&read(p)?).map_err(|e| runtime(format!("{}: {e}", p.display())))?,
        None => LinkTable::default(),
    };
    let resolver = Resolver::new(&g, links);
    let names: Vec<&str> = a.recipe.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    let analysis = analyze_recipe(&g, &names, &resolver).map_err(runtime)?;
    emit(out, &recipe_report(&g, &analysis)?)
}

fn cmd_serve(a: ServeArgs) -> Result<(), CliError> {
    if let Some(p) = &a.config {
        require_files([p])?;
    }
    let file = a.config.as_deref().map(read).transpose()?;
    let mut env: Vec<(String, String)> = std::env::vars().collect();
    let mut flag = |key: &str, v: Option<String>| {
        if let Some(v) = v {
            env.push((format!("{}{key}", service::ENV_PREFIX), v));
        }
    };
    flag("SNAPSHOT", a.snapshot.map(|p| p.display().to_string()));
    flag("LINKS", a.links.map(|p| p.display().to_string()));
    flag("MODEL", a.model.map(|p| p.display().to_string()));
    flag("LISTEN", a.listen.map(|l| l.to_string()));
    flag("BUDGET_MS", a.budget_ms.map(|b| b.to_string()));
    let cfg = ServiceConfig::from_sources(file.as_deref(), env).map_err(|e| CliError::Usage(e.to_string()))?;
    cfg.check_paths().map_err(|e| CliError::Usage(e.to_string()))?;
    let _ = env_logger::Builder::new().parse_filters(&cfg.log_level).try_init();
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(runtime)?;
    rt.block_on(service::run(cfg)).map_err(runtime)
}

/// Entry point for the binary: runs the command and maps errors to exit codes.
pub fn main_exit_code() -> i32 {
    let mut stdout = std::io::stdout().lock();
    match run_from(std::env::args_os(), &mut stdout) {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = stdout.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
