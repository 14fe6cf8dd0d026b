//! `dvp` — reproducible experiments for neighbor-choice percolation.
//!
//! Every invocation prints one JSON document (or CSV rows with `--csv`)
//! echoing the inputs next to the results. Scalar physics flags accept
//! `start:stop[:step]` grids and emit one record per grid point. A
//! `--config key=value` file supplies defaults; flags override it; the
//! `DVP_SEED` environment variable supplies the default seed.

mod config;
mod events_dsl;
mod output;
mod sweep;

use clap::{Args, Parser, Subcommand};
use config::{or_default, parse, require, ConfigMap};
use dvp_core::cluster::Mode;
use dvp_core::error::Error as CoreError;
use dvp_core::events;
use dvp_core::exact;
use dvp_core::graph::{self, GraphKind, GraphWindow};
use dvp_core::mc::{self, Sampling, TreeLaw};
use dvp_core::prob::ProbVector;
use output::{emit_csv, emit_json, p_string, Record, RecordBuilder};
use std::path::PathBuf;
use std::process::ExitCode;

/// A reportable failure: usage problems exit 2, domain errors exit 3.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: "usage".into(), message: message.into(), exit: 2 }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError { code: e.code().into(), message: e.to_string(), exit: 3 }
    }
}

#[derive(Parser)]
#[command(name = "dvp", version, about = "Neighbor-choice percolation experiments")]
struct Cli {
    /// Emit CSV rows instead of the JSON document
    #[arg(long, global = true)]
    csv: bool,
    /// Emit the JSON document (the default)
    #[arg(long, global = true)]
    json: bool,
    /// Random seed (falls back to config, then $DVP_SEED, then 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for Monte Carlo trial fan-out
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key=value defaults mirroring the long flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed forms: chain cluster sizes, tree matrices and thresholds
    #[command(subcommand)]
    Exact(ExactCmd),
    /// Sufficient-condition checkers
    #[command(subcommand)]
    Check(CheckCmd),
    /// Monte Carlo estimators on finite windows
    #[command(subcommand)]
    Mc(McCmd),
    /// Exact finite-support event computations
    #[command(subcommand)]
    Events(EventsCmd),
    /// Self-avoiding walk counts
    #[command(subcommand)]
    Saw(SawCmd),
}

#[derive(Subcommand)]
enum ExactCmd {
    /// Mean weak/strong cluster size on the 2-regular chain
    T2Chi(T2ChiArgs),
    /// Connection probability to the vertex at distance n on the chain
    T2Connect(T2ConnectArgs),
    /// Critical point of the tree process
    TreeThreshold(TreeThresholdArgs),
    /// Mean matrix of the tree reduction with its spectral radius
    TreeMatrix(TreeMatrixArgs),
}

#[derive(Args)]
struct T2ChiArgs {
    /// Choice-size distribution, e.g. 0,1,0
    #[arg(long)]
    p: Option<String>,
}

#[derive(Args)]
struct T2ConnectArgs {
    #[arg(long)]
    p: Option<String>,
    /// Distance (sweepable: start:stop[:step])
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct TreeThresholdArgs {
    /// Tree degree (sweepable)
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    /// Size offset for the strong mix (p_k, p_{k+1})
    #[arg(long)]
    k: Option<String>,
}

#[derive(Args)]
struct TreeMatrixArgs {
    #[arg(long)]
    d: Option<String>,
    /// Mixing parameter (sweepable)
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    k: Option<String>,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// lambda(G) * alpha < 1 (weak) or lambda(G) * p2' < 1 (strong)
    Sub(CheckSubArgs),
    /// lambda(G*) * b^2 < 1 (weak) or lambda(G*) * b < 1 with p0+p1 < 1
    Super(CheckSuperArgs),
    /// Degree-bound rows, optionally with an exact dual constant
    Corollary(CheckCorollaryArgs),
}

#[derive(Args)]
struct CheckSubArgs {
    #[arg(long)]
    p: Option<String>,
    /// Connective constant of the graph; defaults to the d-1 bound of --graph
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct CheckSuperArgs {
    #[arg(long)]
    p: Option<String>,
    /// Dual connective constant; defaults to the catalog value of --graph
    #[arg(long = "lambda-dual")]
    lambda_dual: Option<String>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct CheckCorollaryArgs {
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    dstar: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    /// Exact dual constant for the catalog-aware variant
    #[arg(long = "lambda-dual")]
    lambda_dual: Option<String>,
}

#[derive(Subcommand)]
enum McCmd {
    /// Probability that the origin cluster reaches a shell
    Reach(McReachArgs),
    /// Mean cluster size of the origin
    Chi(McCommonArgs),
    /// Distribution of exact cluster sizes
    Sizes(McSizesArgs),
    /// Clusters per vertex, two estimators
    Kappa(McCommonArgs),
    /// Log-linear decay fit of shell-reach probabilities
    Decay(McDecayArgs),
    /// Survival of the tree frontier to a target generation
    TreeSurvival(McTreeArgs),
}

#[derive(Args)]
struct McCommonArgs {
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    trials: Option<String>,
}

#[derive(Args)]
struct McReachArgs {
    #[command(flatten)]
    common: McCommonArgs,
    /// Shell distance (sweepable)
    #[arg(long)]
    shell: Option<String>,
}

#[derive(Args)]
struct McSizesArgs {
    #[command(flatten)]
    common: McCommonArgs,
    /// Largest size bin
    #[arg(long = "m-max")]
    m_max: Option<String>,
}

#[derive(Args)]
struct McDecayArgs {
    #[command(flatten)]
    common: McCommonArgs,
    /// Shell grid start:stop[:step]
    #[arg(long)]
    shells: Option<String>,
}

#[derive(Args)]
struct McTreeArgs {
    #[arg(long)]
    d: Option<String>,
    /// Mixing parameter (sweepable)
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    generations: Option<String>,
    #[arg(long)]
    trials: Option<String>,
}

#[derive(Subcommand)]
enum EventsCmd {
    /// Product-vs-intersection gap of two events
    Fkg(EventsPairArgs),
    /// Directional derivative with finite-difference cross-check
    Russo(EventsRussoArgs),
    /// Disjoint occurrence against the product bound
    Box(EventsPairArgs),
}

#[derive(Args)]
struct EventsPairArgs {
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long = "event-a")]
    event_a: Option<String>,
    #[arg(long = "event-b")]
    event_b: Option<String>,
    /// Extra support vertices, comma-separated ids
    #[arg(long)]
    support: Option<String>,
    #[arg(long)]
    p: Option<String>,
}

#[derive(Args)]
struct EventsRussoArgs {
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    event: Option<String>,
    #[arg(long)]
    support: Option<String>,
    #[arg(long)]
    p: Option<String>,
    /// Tangent direction, d+1 comma-separated components summing to 0
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
}

#[derive(Subcommand)]
enum SawCmd {
    /// Exact self-avoiding walk counts from the origin
    Count(SawCountArgs),
}

#[derive(Args)]
struct SawCountArgs {
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    /// Walk length (sweepable)
    #[arg(long)]
    n: Option<String>,
}

/// Resolved global settings.
struct Ctx {
    cfg: ConfigMap,
    seed: u64,
    threads: usize,
}

impl Ctx {
    fn sampling(&self, trials: u64) -> Sampling {
        Sampling::new(trials, self.seed).with_threads(self.threads)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let doc = serde_json::json!({
                "error": { "code": e.code, "message": e.message }
            });
            eprintln!("{doc}");
            ExitCode::from(e.exit)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::default(),
    };
    if cli.csv && cli.json {
        return Err(CliError::usage("--csv and --json are mutually exclusive"));
    }
    let format_csv = if cli.csv {
        true
    } else if cli.json {
        false
    } else {
        matches!(cfg.get("format"), Some("csv"))
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match cfg.get("seed") {
            Some(raw) => parse::<u64>(raw, "seed")?,
            None => match std::env::var("DVP_SEED") {
                Ok(raw) => parse::<u64>(&raw, "seed (DVP_SEED)")?,
                Err(_) => 0,
            },
        },
    };
    let threads = match cli.threads {
        Some(t) => t.max(1),
        None => match cfg.get("threads") {
            Some(raw) => parse::<usize>(raw, "threads")?.max(1),
            None => 1,
        },
    };
    let ctx = Ctx { cfg, seed, threads };

    let (command, records) = dispatch(&cli.command, &ctx)?;
    if format_csv {
        print!("{}", emit_csv(&records));
    } else {
        println!("{}", emit_json(&command, &records));
    }
    Ok(())
}

fn dispatch(command: &Command, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    match command {
        Command::Exact(ExactCmd::T2Chi(a)) => cmd_t2_chi(a, ctx),
        Command::Exact(ExactCmd::T2Connect(a)) => cmd_t2_connect(a, ctx),
        Command::Exact(ExactCmd::TreeThreshold(a)) => cmd_tree_threshold(a, ctx),
        Command::Exact(ExactCmd::TreeMatrix(a)) => cmd_tree_matrix(a, ctx),
        Command::Check(CheckCmd::Sub(a)) => cmd_check_sub(a, ctx),
        Command::Check(CheckCmd::Super(a)) => cmd_check_super(a, ctx),
        Command::Check(CheckCmd::Corollary(a)) => cmd_check_corollary(a, ctx),
        Command::Mc(McCmd::Reach(a)) => cmd_mc_reach(a, ctx),
        Command::Mc(McCmd::Chi(a)) => cmd_mc_chi(a, ctx),
        Command::Mc(McCmd::Sizes(a)) => cmd_mc_sizes(a, ctx),
        Command::Mc(McCmd::Kappa(a)) => cmd_mc_kappa(a, ctx),
        Command::Mc(McCmd::Decay(a)) => cmd_mc_decay(a, ctx),
        Command::Mc(McCmd::TreeSurvival(a)) => cmd_mc_tree(a, ctx),
        Command::Events(EventsCmd::Fkg(a)) => cmd_events_pair(a, ctx, PairKind::Fkg),
        Command::Events(EventsCmd::Box(a)) => cmd_events_pair(a, ctx, PairKind::Box),
        Command::Events(EventsCmd::Russo(a)) => cmd_events_russo(a, ctx),
        Command::Saw(SawCmd::Count(a)) => cmd_saw_count(a, ctx),
    }
}

// ---- shared parsing helpers ------------------------------------------------

fn parse_p(raw: &str) -> Result<ProbVector, CliError> {
    let entries: Result<Vec<f64>, _> = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let entries = entries.map_err(|_| {
        CliError::usage(format!("--p: expected comma-separated decimals, got '{raw}'"))
    })?;
    if entries.is_empty() {
        return Err(CliError::usage("--p: empty"));
    }
    Ok(ProbVector::new(&entries)?)
}

fn parse_mode_arg(raw: &str) -> Result<Mode, CliError> {
    raw.parse::<Mode>().map_err(CliError::usage)
}

fn resolve_mode(flag: &Option<String>, ctx: &Ctx) -> Result<Mode, CliError> {
    parse_mode_arg(&or_default(flag.clone(), &ctx.cfg, "mode", "weak"))
}

fn resolve_graph(flag: &Option<String>, ctx: &Ctx) -> Result<GraphKind, CliError> {
    let raw = require(flag.clone(), &ctx.cfg, "graph")?;
    Ok(raw.parse::<GraphKind>()?)
}

fn resolve_window(
    graph_flag: &Option<String>,
    radius_flag: &Option<String>,
    ctx: &Ctx,
) -> Result<GraphWindow, CliError> {
    let kind = resolve_graph(graph_flag, ctx)?;
    let radius = parse::<u32>(&require(radius_flag.clone(), &ctx.cfg, "radius")?, "radius")?;
    if radius == 0 {
        return Err(CliError::usage("--radius must be at least 1"));
    }
    Ok(graph::build_window(&kind, radius)?)
}

fn resolve_trials(flag: &Option<String>, ctx: &Ctx) -> Result<u64, CliError> {
    let trials = parse::<u64>(&require(flag.clone(), &ctx.cfg, "trials")?, "trials")?;
    if trials == 0 {
        return Err(CliError::usage("--trials must be positive"));
    }
    Ok(trials)
}

// The thread count is deliberately not echoed: identical experiments must
// produce identical output for any --threads value.
fn mc_record(ctx: &Ctx, window: &GraphWindow, p: &ProbVector, mode: Mode, trials: u64) -> RecordBuilder {
    RecordBuilder::new()
        .str("graph", window.kind().name())
        .u64("radius", window.radius() as u64)
        .str("p", p_string(p.entries()))
        .str("mode", mode.name())
        .u64("trials", trials)
        .u64("seed", ctx.seed)
}

// ---- exact -----------------------------------------------------------------

fn cmd_t2_chi(args: &T2ChiArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let result = exact::t2_chi(&p)?;
    let record = RecordBuilder::new()
        .str("p", p_string(p.entries()))
        .f64("chi", result.chi)
        .f64("chi_tilde", result.chi_tilde)
        .build();
    Ok(("exact t2-chi".into(), vec![record]))
}

fn cmd_t2_connect(args: &T2ConnectArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    if p.degree() != 2 {
        return Err(CoreError::DegreeMismatch { left: p.degree(), right: 2 }.into());
    }
    let mode = resolve_mode(&args.mode, ctx)?;
    let ns = sweep::parse_u32(&require(args.n.clone(), &ctx.cfg, "n")?, "n")?;
    let records = ns
        .into_iter()
        .map(|n| {
            RecordBuilder::new()
                .str("p", p_string(p.entries()))
                .str("mode", mode.name())
                .u64("n", n as u64)
                .f64("probability", exact::t2_connection(&p, n, mode))
                .build()
        })
        .collect();
    Ok(("exact t2-connect".into(), records))
}

fn cmd_tree_threshold(
    args: &TreeThresholdArgs,
    ctx: &Ctx,
) -> Result<(String, Vec<Record>), CliError> {
    let mode = resolve_mode(&args.mode, ctx)?;
    let ds = sweep::parse_u64(&require(args.d.clone(), &ctx.cfg, "d")?, "d")?;
    let mut records = Vec::new();
    for d in ds {
        let d = d as usize;
        if d < 3 {
            return Err(CoreError::DegreeTooSmall { degree: d, min: 3 }.into());
        }
        let record = match mode {
            Mode::Weak => RecordBuilder::new()
                .u64("d", d as u64)
                .str("mode", mode.name())
                .f64("p_c", exact::tree_weak_threshold(d))
                .build(),
            Mode::Strong => {
                let k = parse::<usize>(&require(args.k.clone(), &ctx.cfg, "k")?, "k")?;
                let t = exact::tree_strong_threshold(d, k)?;
                RecordBuilder::new()
                    .u64("d", d as u64)
                    .u64("k", k as u64)
                    .str("mode", mode.name())
                    .f64("p_c", t.value)
                    .str(
                        "regime",
                        match t.regime {
                            exact::ThresholdRegime::Interior => "interior",
                            exact::ThresholdRegime::AlwaysPercolates => "always_percolates",
                            exact::ThresholdRegime::NeverPercolates => "never_percolates",
                        },
                    )
                    .build()
            }
        };
        records.push(record);
    }
    Ok(("exact tree-threshold".into(), records))
}

fn cmd_tree_matrix(args: &TreeMatrixArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let mode = resolve_mode(&args.mode, ctx)?;
    let d = parse::<usize>(&require(args.d.clone(), &ctx.cfg, "d")?, "d")?;
    if d < 3 {
        return Err(CoreError::DegreeTooSmall { degree: d, min: 3 }.into());
    }
    let ps = sweep::parse_f64(&require(args.p.clone(), &ctx.cfg, "p")?, "p")?;
    let mut records = Vec::new();
    for p in ps {
        if !(0.0..=1.0).contains(&p) {
            return Err(CoreError::ParameterOutOfRange { name: "p", value: p }.into());
        }
        let matrix = match mode {
            Mode::Weak => exact::tree_weak_matrix(d, p),
            Mode::Strong => {
                let k = parse::<usize>(&require(args.k.clone(), &ctx.cfg, "k")?, "k")?;
                exact::tree_strong_matrix(d, k, p)?
            }
        };
        let mut builder = RecordBuilder::new()
            .u64("d", d as u64)
            .str("mode", mode.name())
            .f64("p", p);
        if let Mode::Strong = mode {
            let k = parse::<usize>(&require(args.k.clone(), &ctx.cfg, "k")?, "k")?;
            builder = builder.u64("k", k as u64);
        }
        for j in 0..matrix.dim {
            for i in 0..matrix.dim {
                builder = builder.f64(&format!("m{}{}", j + 1, i + 1), matrix.entry(j, i));
            }
        }
        records.push(builder.f64("spectral_radius", matrix.spectral_radius).build());
    }
    Ok(("exact tree-matrix".into(), records))
}

// ---- check -----------------------------------------------------------------

fn cmd_check_sub(args: &CheckSubArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.mode, ctx)?;
    let (lambda, source) = match &args.lambda {
        Some(raw) => (parse::<f64>(raw, "lambda")?, "flag".to_string()),
        None => match args.graph.clone().or(ctx.cfg.get("graph").map(String::from)) {
            Some(graph_raw) => {
                let kind = graph_raw.parse::<GraphKind>()?;
                let entry = graph::catalog_entry(&kind);
                match entry.lambda_self_exact {
                    Some(v) => (v, format!("catalog:{}", entry.name)),
                    None => ((entry.degree - 1) as f64, format!("bound:{}", entry.name)),
                }
            }
            None => {
                return Err(CliError::usage("check sub needs --lambda or --graph"));
            }
        },
    };
    let verdict = exact::check_subcritical(&p, lambda, mode)?;
    let record = RecordBuilder::new()
        .str("p", p_string(p.entries()))
        .str("mode", mode.name())
        .f64("lambda", lambda)
        .str("lambda_source", source)
        .str("requirement", verdict.certificate.requirement.clone())
        .f64("factor", verdict.certificate.factor)
        .f64("product", verdict.certificate.product)
        .str("conclusion", verdict.conclusion.name())
        .build();
    Ok(("check sub".into(), vec![record]))
}

fn cmd_check_super(args: &CheckSuperArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.mode, ctx)?;
    let (lambda_dual, source) = match &args.lambda_dual {
        Some(raw) => (parse::<f64>(raw, "lambda-dual")?, "flag".to_string()),
        None => match args.graph.clone().or(ctx.cfg.get("graph").map(String::from)) {
            Some(graph_raw) => {
                let kind = graph_raw.parse::<GraphKind>()?;
                let entry = graph::catalog_entry(&kind);
                match entry.lambda_dual() {
                    Some(v) => (v, format!("catalog:{}", entry.name)),
                    None => {
                        return Err(CliError::usage(format!(
                            "graph {} has no dual entry; pass --lambda-dual",
                            entry.name
                        )));
                    }
                }
            }
            None => {
                return Err(CliError::usage("check super needs --lambda-dual or --graph"));
            }
        },
    };
    let verdict = exact::check_supercritical(&p, lambda_dual, mode)?;
    let record = RecordBuilder::new()
        .str("p", p_string(p.entries()))
        .str("mode", mode.name())
        .f64("lambda_dual", lambda_dual)
        .str("lambda_source", source)
        .str("requirement", verdict.certificate.requirement.clone())
        .f64("factor", verdict.certificate.factor)
        .f64("product", verdict.certificate.product)
        .str("conclusion", verdict.conclusion.name())
        .build();
    Ok(("check super".into(), vec![record]))
}

fn cmd_check_corollary(
    args: &CheckCorollaryArgs,
    ctx: &Ctx,
) -> Result<(String, Vec<Record>), CliError> {
    let d = parse::<usize>(&require(args.d.clone(), &ctx.cfg, "d")?, "d")?;
    let d_star = parse::<usize>(&require(args.dstar.clone(), &ctx.cfg, "dstar")?, "dstar")?;
    let k = parse::<usize>(&require(args.k.clone(), &ctx.cfg, "k")?, "k")?;
    let mode = resolve_mode(&args.mode, ctx)?;
    if !(2..=d).contains(&k) {
        return Err(CoreError::KOutOfRange { k, d }.into());
    }
    let degree_bound = exact::check_corollary_rows(d, d_star, k, mode);
    let mut builder = RecordBuilder::new()
        .u64("d", d as u64)
        .u64("dstar", d_star as u64)
        .u64("k", k as u64)
        .str("mode", mode.name())
        .bool("satisfied_degree_bound", degree_bound);
    if let Some(raw) = &args.lambda_dual {
        let lambda_dual = parse::<f64>(raw, "lambda-dual")?;
        builder = builder
            .f64("lambda_dual", lambda_dual)
            .bool(
                "satisfied_exact_lambda",
                exact::check_with_lambda_dual(d, k, lambda_dual, mode),
            );
    }
    Ok(("check corollary".into(), vec![builder.build()]))
}

// ---- mc --------------------------------------------------------------------

fn cmd_mc_reach(args: &McReachArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.common.graph, &args.common.radius, ctx)?;
    let p = parse_p(&require(args.common.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.common.mode, ctx)?;
    let trials = resolve_trials(&args.common.trials, ctx)?;
    let shells = sweep::parse_u32(&require(args.shell.clone(), &ctx.cfg, "shell")?, "shell")?;
    let sampling = ctx.sampling(trials);
    let mut records = Vec::new();
    for shell in shells {
        let est = mc::estimate_reach(&window, &p, shell, mode, &sampling)?;
        records.push(
            mc_record(ctx, &window, &p, mode, trials)
                .u64("shell", shell as u64)
                .f64("estimate", est.estimate)
                .f64("std_error", est.std_error)
                .f64("flagged_fraction", est.flagged_fraction)
                .build(),
        );
    }
    Ok(("mc reach".into(), records))
}

fn cmd_mc_chi(args: &McCommonArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.graph, &args.radius, ctx)?;
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.mode, ctx)?;
    let trials = resolve_trials(&args.trials, ctx)?;
    let est = mc::estimate_chi(&window, &p, mode, &ctx.sampling(trials))?;
    let record = mc_record(ctx, &window, &p, mode, trials)
        .f64("estimate", est.estimate)
        .f64("std_error", est.std_error)
        .f64("flagged_fraction", est.flagged_fraction)
        .bool("lower_bound_only", est.flagged_fraction > 0.0)
        .build();
    Ok(("mc chi".into(), vec![record]))
}

fn cmd_mc_sizes(args: &McSizesArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.common.graph, &args.common.radius, ctx)?;
    let p = parse_p(&require(args.common.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.common.mode, ctx)?;
    let trials = resolve_trials(&args.common.trials, ctx)?;
    let m_max = parse::<u32>(&require(args.m_max.clone(), &ctx.cfg, "m-max")?, "m-max")?;
    if m_max as usize >= window.vertex_count() {
        return Err(CliError::usage(format!(
            "--m-max must stay below the window size {}",
            window.vertex_count()
        )));
    }
    let dist = mc::estimate_size_distribution(&window, &p, mode, m_max, &ctx.sampling(trials))?;
    let records = dist
        .per_size
        .iter()
        .map(|&(m, probability)| {
            mc_record(ctx, &window, &p, mode, trials)
                .u64("m", m as u64)
                .f64("probability", probability)
                .f64("touching_fraction", dist.touching_fraction)
                .build()
        })
        .collect();
    Ok(("mc sizes".into(), records))
}

fn cmd_mc_kappa(args: &McCommonArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.graph, &args.radius, ctx)?;
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.mode, ctx)?;
    let trials = resolve_trials(&args.trials, ctx)?;
    let est = mc::estimate_kappa(&window, &p, mode, &ctx.sampling(trials))?;
    let record = mc_record(ctx, &window, &p, mode, trials)
        .f64("kappa_inverse", est.inverse_mean.estimate)
        .f64("kappa_inverse_std_error", est.inverse_mean.std_error)
        .f64("kappa_count", est.count.estimate)
        .f64("kappa_count_std_error", est.count.std_error)
        .f64("flagged_fraction", est.inverse_mean.flagged_fraction)
        .build();
    Ok(("mc kappa".into(), vec![record]))
}

fn cmd_mc_decay(args: &McDecayArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.common.graph, &args.common.radius, ctx)?;
    let p = parse_p(&require(args.common.p.clone(), &ctx.cfg, "p")?)?;
    let mode = resolve_mode(&args.common.mode, ctx)?;
    let trials = resolve_trials(&args.common.trials, ctx)?;
    let shells = sweep::parse_u32(&require(args.shells.clone(), &ctx.cfg, "shells")?, "shells")?;
    if shells.is_empty() {
        return Err(CliError::usage("--shells produced an empty grid"));
    }
    let est = mc::estimate_decay(&window, &p, mode, &shells, &ctx.sampling(trials))?;
    let records = est
        .per_shell
        .iter()
        .map(|pt| {
            let mut builder = mc_record(ctx, &window, &p, mode, trials)
                .u64("shell", pt.shell as u64)
                .u64("successes", pt.successes)
                .f64("estimate", pt.estimate)
                .f64("std_error", pt.std_error);
            if pt.estimate > 0.0 {
                builder = builder.f64("log_estimate", pt.estimate.ln());
            }
            builder
                .bool("in_fit", pt.in_fit)
                .f64("slope", est.slope)
                .f64("rate", est.rate)
                .build()
        })
        .collect();
    Ok(("mc decay".into(), records))
}

fn cmd_mc_tree(args: &McTreeArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let d = parse::<usize>(&require(args.d.clone(), &ctx.cfg, "d")?, "d")?;
    let mode = resolve_mode(&args.mode, ctx)?;
    let generation_grid = sweep::parse_u32(
        &require(args.generations.clone(), &ctx.cfg, "generations")?,
        "generations",
    )?;
    let trials = resolve_trials(&args.trials, ctx)?;
    let ps = sweep::parse_f64(&require(args.p.clone(), &ctx.cfg, "p")?, "p")?;
    let sampling = ctx.sampling(trials);
    let mut records = Vec::new();
    for p in &ps {
        for &generations in &generation_grid {
            let law = match mode {
                Mode::Weak => TreeLaw::Weak { p: *p },
                Mode::Strong => {
                    let k = parse::<usize>(&require(args.k.clone(), &ctx.cfg, "k")?, "k")?;
                    TreeLaw::Strong { k, p: *p }
                }
            };
            let est = mc::tree_survival(d, law, generations, &sampling)?;
            let mut builder = RecordBuilder::new()
                .str("graph", format!("tree:{d}"))
                .u64("d", d as u64);
            if let TreeLaw::Strong { k, .. } = law {
                builder = builder.u64("k", k as u64);
            }
            records.push(
                builder
                    .str("mode", mode.name())
                    .f64("p", *p)
                    .u64("generations", generations as u64)
                    .u64("trials", trials)
                    .u64("seed", ctx.seed)
                    .f64("estimate", est.estimate)
                    .f64("std_error", est.std_error)
                    .f64("capped_fraction", est.flagged_fraction)
                    .build(),
            );
        }
    }
    Ok(("mc tree-survival".into(), records))
}

// ---- events ----------------------------------------------------------------

enum PairKind {
    Fkg,
    Box,
}

fn parse_support(raw: &Option<String>) -> Result<Vec<u32>, CliError> {
    match raw {
        None => Ok(Vec::new()),
        Some(raw) => raw
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| CliError::usage(format!("--support: bad vertex id '{s}'")))
            })
            .collect(),
    }
}

fn cmd_events_pair(
    args: &EventsPairArgs,
    ctx: &Ctx,
    kind: PairKind,
) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.graph, &args.radius, ctx)?;
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let support = parse_support(&args.support)?;
    let event_a = events_dsl::parse_event(
        &window,
        &require(args.event_a.clone(), &ctx.cfg, "event-a")?,
        &support,
    )?;
    let event_b = events_dsl::parse_event(
        &window,
        &require(args.event_b.clone(), &ctx.cfg, "event-b")?,
        &support,
    )?;
    let base = RecordBuilder::new()
        .str("graph", window.kind().name())
        .u64("radius", window.radius() as u64)
        .str("p", p_string(p.entries()))
        .str("event_a", event_a.description.clone())
        .str("event_b", event_b.description.clone());
    let record = match kind {
        PairKind::Fkg => {
            let prob_a = events::exact_prob(&window, &event_a, &p)?;
            let prob_b = events::exact_prob(&window, &event_b, &p)?;
            let gap = events::fkg_gap(&window, &event_a, &event_b, &p)?;
            base.f64("prob_a", prob_a)
                .f64("prob_b", prob_b)
                .f64("prob_intersection", prob_a * prob_b - gap)
                .f64("gap", gap)
                .bool("fkg_holds", gap <= 0.0)
                .build()
        }
        PairKind::Box => {
            let result = events::box_prob(&window, &event_a, &event_b, &p)?;
            base.f64("box_prob", result.box_prob)
                .f64("product", result.product)
                .bool("reimer_holds", result.box_prob <= result.product + 1e-12)
                .build()
        }
    };
    let name = match kind {
        PairKind::Fkg => "events fkg",
        PairKind::Box => "events box",
    };
    Ok((name.into(), vec![record]))
}

fn cmd_events_russo(args: &EventsRussoArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.graph, &args.radius, ctx)?;
    let p = parse_p(&require(args.p.clone(), &ctx.cfg, "p")?)?;
    let support = parse_support(&args.support)?;
    let event = events_dsl::parse_event(
        &window,
        &require(args.event.clone(), &ctx.cfg, "event")?,
        &support,
    )?;
    let raw_direction = require(args.direction.clone(), &ctx.cfg, "direction")?;
    let direction: Result<Vec<f64>, _> = raw_direction
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let direction = direction.map_err(|_| {
        CliError::usage(format!("--direction: expected decimals, got '{raw_direction}'"))
    })?;
    let result = events::russo_derivative(&window, &event, &p, &direction)?;
    let record = RecordBuilder::new()
        .str("graph", window.kind().name())
        .u64("radius", window.radius() as u64)
        .str("p", p_string(p.entries()))
        .str("event", event.description.clone())
        .str("direction", p_string(&direction))
        .f64("formula_value", result.formula_value)
        .f64("finite_difference", result.finite_difference)
        .build();
    Ok(("events russo".into(), vec![record]))
}

// ---- saw -------------------------------------------------------------------

fn cmd_saw_count(args: &SawCountArgs, ctx: &Ctx) -> Result<(String, Vec<Record>), CliError> {
    let window = resolve_window(&args.graph, &args.radius, ctx)?;
    let ns = sweep::parse_u32(&require(args.n.clone(), &ctx.cfg, "n")?, "n")?;
    let mut records = Vec::new();
    for n in ns {
        let est = graph::lambda_estimate(&window, n)?;
        let mut builder = RecordBuilder::new()
            .str("graph", window.kind().name())
            .u64("radius", window.radius() as u64)
            .u64("n", n as u64)
            .u64("count", est.saw_count)
            .f64("root", est.root)
            .f64("trivial_bound", est.trivial_bound)
            .f64("lambda_estimate", est.estimate);
        if let Some(catalog) = est.catalog {
            builder = builder.f64("lambda_catalog", catalog);
        }
        records.push(builder.f64("lambda_preferred", est.preferred).build());
    }
    Ok(("saw count".into(), records))
}
