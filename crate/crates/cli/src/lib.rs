//! The `netgame` command-line harness.
//!
//! Every subcommand writes one JSON report (or a graph document) whose `meta`
//! block records the resolved inputs and seed, so an output file is enough to
//! replay the run. Exit status is 0 on success, 1 when a guard or validation
//! check rejects the input, and 2 for usage errors.

pub mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use netgame::dynamics::{self, InitialProfile};
use netgame::io::{self, GraphDocument, GraphMeta};
use netgame::local_sim::{distance_coloring, simulate_fair_rounds};
use netgame::oracle::{self, ENUMERATION_LIMIT};
use netgame::simgame::{build_simulation_game, greedy_mis_normal_form};
use netgame::{compile_lvl, rational, GraphicalGame, StrategyProfile};

pub use config::{load_config, ExperimentConfig, GameSpec, GraphSpec, Transform};
use output::Emitter;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] netgame::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "netgame",
    version,
    about = "Best-response dynamics, equilibria and LOCAL simulation on graphical games"
)]
struct Cli {
    /// Omit the wall-clock timestamp so identical inputs give identical files.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Longest profile list written in full; longer lists are truncated.
    #[arg(long, global = true, default_value_t = 100)]
    max_listed: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a network and write it as graph JSON.
    Gen(GenArgs),
    /// Run best-response dynamics.
    Run(RunArgs),
    /// Check a profile against the game's locally verifiable labeling.
    Verify(VerifyArgs),
    /// Price of anarchy by exhaustive enumeration.
    Poa(PoaArgs),
    /// Welfare after T rounds against the optimum upper bound.
    Ineff(IneffArgs),
    /// One fair round of the simulation game on a ring.
    Simgame(SimgameArgs),
    /// Search a torus for a frozen coloring equilibrium.
    Frozen(FrozenArgs),
    /// Replay fair rounds in the LOCAL model from a distance-2 coloring.
    LocalSim(LocalSimArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GraphKind {
    Ring,
    Path,
    Star,
    Complete,
    CompleteBipartite,
    Torus,
    RandomRegular,
    StarMatching,
}

#[derive(Args, Debug, Default, Serialize)]
struct GraphArgs {
    /// Read the network from graph JSON.
    #[arg(long, conflicts_with = "graph")]
    graph_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    graph: Option<GraphKind>,
    /// Nodes (ring, path, complete, random-regular) or side length (torus).
    #[arg(long)]
    n: Option<usize>,
    /// Degree (random-regular, star-matching).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    /// Number of stars (star-matching).
    #[arg(long)]
    stars: Option<usize>,
    /// Generator seed; defaults to --seed.
    #[arg(long)]
    graph_seed: Option<u64>,
    /// Take the bipartite double cover.
    #[arg(long)]
    double_cover: bool,
    /// Rewire until the girth is at least this value.
    #[arg(long)]
    girth: Option<usize>,
}

fn need(value: Option<usize>, flag: &str, graph: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--graph {graph} requires --{flag}")))
}

impl GraphArgs {
    fn is_empty(&self) -> bool {
        self.graph_file.is_none() && self.graph.is_none()
    }

    fn spec(&self) -> Result<(GraphSpec, Vec<Transform>), CliError> {
        let spec = match (&self.graph_file, self.graph) {
            (Some(path), _) => GraphSpec::File { path: path.clone() },
            (None, None) => {
                return Err(CliError::Usage(
                    "one of --graph or --graph-file is required".into(),
                ))
            }
            (None, Some(kind)) => {
                let name = kind.to_possible_value().unwrap().get_name().to_string();
                match kind {
                    GraphKind::Ring => GraphSpec::Ring {
                        n: need(self.n, "n", &name)?,
                    },
                    GraphKind::Path => GraphSpec::Path {
                        n: need(self.n, "n", &name)?,
                    },
                    GraphKind::Star => GraphSpec::Star {
                        leaves: need(self.leaves, "leaves", &name)?,
                    },
                    GraphKind::Complete => GraphSpec::Complete {
                        n: need(self.n, "n", &name)?,
                    },
                    GraphKind::CompleteBipartite => GraphSpec::CompleteBipartite {
                        a: need(self.a, "a", &name)?,
                        b: need(self.b, "b", &name)?,
                    },
                    GraphKind::Torus => GraphSpec::Torus {
                        n: need(self.n, "n", &name)?,
                    },
                    GraphKind::RandomRegular => GraphSpec::RandomRegular {
                        n: need(self.n, "n", &name)?,
                        d: need(self.d, "d", &name)?,
                        seed: self.graph_seed,
                    },
                    GraphKind::StarMatching => GraphSpec::StarMatching {
                        k: need(self.stars, "stars", &name)?,
                        d: need(self.d, "d", &name)?,
                        seed: self.graph_seed,
                    },
                }
            }
        };
        let mut transforms = Vec::new();
        if self.double_cover {
            transforms.push(Transform::DoubleCover);
        }
        if let Some(girth) = self.girth {
            transforms.push(Transform::CutShortCycles {
                girth,
                preserve_bipartition: self.double_cover,
            });
        }
        Ok((spec, transforms))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GameKindArg {
    Pgg,
    Minority,
    Coloring,
}

#[derive(Args, Debug, Default, Serialize)]
struct GameArgs {
    #[arg(long, value_enum)]
    game: Option<GameKindArg>,
    /// Public good cost as p/q with 0 < c < 1.
    #[arg(long)]
    c: Option<String>,
    /// Number of colors.
    #[arg(long)]
    k: Option<usize>,
}

fn parse_cost(text: &str) -> Result<rational::Rational, CliError> {
    rational::parse(text).map_err(|e| CliError::Usage(format!("--c: {e}")))
}

impl GameArgs {
    fn spec(&self) -> Result<GameSpec, CliError> {
        let spec = match self.game {
            None => return Err(CliError::Usage("--game is required".into())),
            Some(GameKindArg::Pgg) => GameSpec::Pgg {
                c: parse_cost(
                    self.c
                        .as_deref()
                        .ok_or_else(|| CliError::Usage("--game pgg requires --c".into()))?,
                )?,
            },
            Some(GameKindArg::Minority) => GameSpec::Minority,
            Some(GameKindArg::Coloring) => GameSpec::Coloring {
                k: self
                    .k
                    .ok_or_else(|| CliError::Usage("--game coloring requires --k".into()))?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PolicyArg {
    Random,
    Identity,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InitArg {
    Random,
    /// Every node plays action 0.
    Zero,
}

#[derive(Args, Debug, Serialize)]
struct RunArgs {
    /// Experiment config JSON; replaces the graph, game and dynamics flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectory CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report JSON; printed to stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Final profile JSON.
    #[arg(long)]
    profile_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    game: GameArgs,
    /// Profile JSON `{"profile": [...]}`.
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PoaFamily {
    /// Star-matching public goods instance with k stars of degree d.
    PggInstance,
    /// Minority game comparands on --graph-file.
    Minority,
    /// Enumerate the equilibria of --game on --graph-file.
    Enumerate,
}

#[derive(Args, Debug, Serialize)]
struct PoaArgs {
    #[arg(long, value_enum)]
    family: PoaFamily,
    #[arg(long)]
    d: Option<usize>,
    /// Stars for pgg-instance, colors for an enumerated coloring game.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long, value_enum)]
    game: Option<GameKindArg>,
    #[arg(long)]
    graph_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest profile space to enumerate.
    #[arg(long, default_value_t = ENUMERATION_LIMIT)]
    enum_limit: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct IneffArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    game: GameArgs,
    /// Rounds of best responses (T).
    #[arg(long)]
    rounds: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SimgameArgs {
    /// Ring size.
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value = "1/2")]
    c: String,
    /// Seed for a random fair-round order; the identity order is used without it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Projected base-game profile JSON.
    #[arg(long)]
    profile_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct FrozenArgs {
    /// Torus side length.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    profile_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LocalSimArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// status. Diagnostics go to stderr as a single line.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match with_pool(|| execute(cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!(
                "netgame: error: {}",
                e.to_string().lines().next().unwrap_or_default()
            );
            e.exit_code()
        }
    }
}

fn with_pool(job: impl FnOnce() -> Result<(), CliError> + Send) -> Result<(), CliError> {
    match std::env::var("NETGAME_THREADS") {
        Ok(text) => {
            let threads: usize = text.parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
                CliError::Invalid(format!(
                    "NETGAME_THREADS must be a positive integer, got {text:?}"
                ))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Invalid(format!("cannot build thread pool: {e}")))?;
            pool.install(job)
        }
        Err(_) => job(),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let emitter = Emitter {
        deterministic: cli.deterministic,
        max_listed: cli.max_listed,
    };
    match cli.command {
        Command::Gen(args) => gen(&emitter, args),
        Command::Run(args) => run(&emitter, args),
        Command::Verify(args) => verify(&emitter, args),
        Command::Poa(args) => poa(&emitter, args),
        Command::Ineff(args) => ineff(&emitter, args),
        Command::Simgame(args) => simgame(&emitter, args),
        Command::Frozen(args) => frozen(&emitter, args),
        Command::LocalSim(args) => local_sim(&emitter, args),
    }
}

fn gen(emitter: &Emitter, args: GenArgs) -> Result<(), CliError> {
    let (spec, transforms) = args.graph.spec()?;
    if matches!(spec, GraphSpec::File { .. }) {
        return Err(CliError::Usage(
            "gen needs --graph, not --graph-file".into(),
        ));
    }
    let net = config::build_network(&spec, &transforms, args.seed)?;
    let mut params = serde_json::to_value(&spec)?;
    let obj = params
        .as_object_mut()
        .expect("graph spec serializes to an object");
    obj.remove("generator");
    obj.remove("seed");
    if !transforms.is_empty() {
        obj.insert("transforms".into(), serde_json::to_value(&transforms)?);
    }
    obj.insert("tool".into(), emitter.tool_block("gen"));
    let doc = GraphDocument::new(
        &net,
        GraphMeta {
            generator: spec.name().to_string(),
            seed: spec.effective_seed(args.seed),
            params,
        },
    );
    emitter.write_json(&serde_json::to_value(&doc)?, args.out.as_deref())
}

fn resolve_run_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            if !args.graph.is_empty() || args.game.game.is_some() {
                return Err(CliError::Usage(
                    "--config cannot be combined with graph or game flags".into(),
                ));
            }
            load_config(path)?
        }
        None => {
            let (graph, transforms) = args.graph.spec()?;
            ExperimentConfig {
                seed: 0,
                graph,
                transforms,
                game: args.game.spec()?,
                dynamics: Default::default(),
                outputs: Default::default(),
            }
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(p) = args.policy {
        cfg.dynamics.policy = match p {
            PolicyArg::Random => config::PolicySpec::Random,
            PolicyArg::Identity => config::PolicySpec::Identity,
        };
    }
    if let Some(i) = args.init {
        cfg.dynamics.init = match i {
            InitArg::Random => config::InitSpec::Random,
            InitArg::Zero => config::InitSpec::Uniform(0),
        };
    }
    if args.max_rounds.is_some() {
        cfg.dynamics.max_rounds = args.max_rounds;
    }
    if let Some(t) = args.trials {
        cfg.dynamics.trials = t;
    }
    if args.out.is_some() {
        cfg.outputs.trajectory = args.out.clone();
    }
    if args.report.is_some() {
        cfg.outputs.report = args.report.clone();
    }
    if args.profile_out.is_some() {
        cfg.outputs.profile = args.profile_out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct TrialSummary {
    trial: usize,
    converged: bool,
    convergence_round: Option<usize>,
    rounds_executed: usize,
    #[serde(with = "rational::text")]
    final_welfare: rational::Rational,
}

fn run(emitter: &Emitter, args: RunArgs) -> Result<(), CliError> {
    let cfg = resolve_run_config(&args)?;
    let net = cfg.build_network()?;
    let game = cfg.game.build(net)?;
    let max_rounds = cfg
        .dynamics
        .max_rounds
        .unwrap_or_else(|| dynamics::default_max_rounds(game.node_count()));
    let meta = emitter.meta("run", serde_json::to_value(&cfg)?, cfg.seed);
    let header = json!({
        "game": game.name(),
        "n": game.node_count(),
        "edges": game.network().edge_count(),
        "max_rounds": max_rounds,
    });

    let mut report = header;
    if cfg.dynamics.trials == 1 {
        let (init, policy) = cfg.trial_dynamics(&game, 0)?;
        let trace = dynamics::run(&game, &init, &policy, max_rounds)?;
        if let Some(path) = &cfg.outputs.trajectory {
            let file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
            io::write_trajectory(&trace, std::io::BufWriter::new(file))?;
            let sidecar = sidecar_path(path);
            emitter.write_json(&json!({ "meta": meta }), Some(&sidecar))?;
        }
        if let Some(path) = &cfg.outputs.profile {
            let doc = output::with_meta(serde_json::to_value(&trace.final_profile)?, meta.clone());
            emitter.write_json(&doc, Some(path))?;
        }
        report["trace"] = serde_json::to_value(&trace)?;
    } else {
        let trials: Vec<TrialSummary> = (0..cfg.dynamics.trials)
            .into_par_iter()
            .map(|i| -> Result<TrialSummary, CliError> {
                let (init, policy) = cfg.trial_dynamics(&game, i)?;
                let trace = dynamics::run(&game, &init, &policy, max_rounds)?;
                Ok(TrialSummary {
                    trial: i,
                    converged: trace.converged,
                    convergence_round: trace.convergence_round,
                    rounds_executed: trace.rounds_executed,
                    final_welfare: *trace.welfare.last().expect("welfare has the initial entry"),
                })
            })
            .collect::<Result<_, _>>()?;
        report["all_converged"] = json!(trials.iter().all(|t| t.converged));
        report["max_convergence_round"] =
            json!(trials.iter().filter_map(|t| t.convergence_round).max());
        report["trials"] = serde_json::to_value(&trials)?;
    }
    emitter.write_json(
        &output::with_meta(report, meta),
        cfg.outputs.report.as_deref(),
    )
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn game_from_flags(
    graph: &GraphArgs,
    game: &GameArgs,
    seed: u64,
) -> Result<(GraphicalGame, Value), CliError> {
    let (spec, transforms) = graph.spec()?;
    let game_spec = game.spec()?;
    let net = config::build_network(&spec, &transforms, seed)?;
    let resolved = json!({ "graph": spec, "transforms": transforms, "game": game_spec });
    Ok((game_spec.build(net)?, resolved))
}

fn verify(emitter: &Emitter, args: VerifyArgs) -> Result<(), CliError> {
    let (game, resolved) = game_from_flags(&args.graph, &args.game, args.seed)?;
    let text = std::fs::read_to_string(&args.profile).map_err(|e| io_error(&args.profile, e))?;
    let profile: StrategyProfile = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", args.profile.display())))?;
    let verdict = compile_lvl(&game).verify(game.network(), &profile)?;
    let report = json!({
        "game": game.name(),
        "accepted": verdict.accepted,
        "violations": verdict.violations,
        "is_nash_equilibrium": oracle::is_nash_equilibrium(&game, &profile)?,
        "welfare": rational::to_text(&game.welfare(&profile)?),
    });
    let meta = emitter.meta(
        "verify",
        json!({ "resolved": resolved, "args": args }),
        args.seed,
    );
    emitter.write_json(&output::with_meta(report, meta), args.out.as_deref())
}

fn poa(emitter: &Emitter, args: PoaArgs) -> Result<(), CliError> {
    let graph_file = || {
        args.graph_file
            .clone()
            .ok_or_else(|| CliError::Usage("this --family requires --graph-file".into()))
    };
    let report = match args.family {
        PoaFamily::PggInstance => {
            let d = args
                .d
                .ok_or_else(|| CliError::Usage("--family pgg-instance requires --d".into()))?;
            let k = args
                .k
                .ok_or_else(|| CliError::Usage("--family pgg-instance requires --k".into()))?;
            let c =
                parse_cost(args.c.as_deref().ok_or_else(|| {
                    CliError::Usage("--family pgg-instance requires --c".into())
                })?)?;
            GameSpec::Pgg { c }.validate()?;
            serde_json::to_value(oracle::poa_pgg_instance(d, k, c, args.seed)?)?
        }
        PoaFamily::Minority => {
            let (net, _) = io::read_graph_file(&graph_file()?)?;
            serde_json::to_value(oracle::minority_comparands(&GraphicalGame::minority(net))?)?
        }
        PoaFamily::Enumerate => {
            let (net, _) = io::read_graph_file(&graph_file()?)?;
            let spec = GameArgs {
                game: args.game,
                c: args.c.clone(),
                k: args.k,
            }
            .spec()?;
            let game = spec.build(net)?;
            let mut v =
                serde_json::to_value(oracle::enumerate_ne_with_limit(&game, args.enum_limit)?)?;
            v["game"] = json!(game.name());
            v
        }
    };
    let meta = emitter.meta("poa", serde_json::to_value(&args)?, args.seed);
    emitter.write_json(&output::with_meta(report, meta), args.out.as_deref())
}

fn ineff(emitter: &Emitter, args: IneffArgs) -> Result<(), CliError> {
    let (game, resolved) = game_from_flags(&args.graph, &args.game, args.seed)?;
    let mut report = serde_json::to_value(oracle::measured_inefficiency(
        &game,
        args.rounds,
        args.trials,
        args.seed,
    )?)?;
    report["game"] = json!(game.name());
    let meta = emitter.meta(
        "ineff",
        json!({ "resolved": resolved, "args": args }),
        args.seed,
    );
    emitter.write_json(&output::with_meta(report, meta), args.out.as_deref())
}

fn simgame(emitter: &Emitter, args: SimgameArgs) -> Result<(), CliError> {
    let c = parse_cost(&args.c)?;
    GameSpec::Pgg { c }.validate()?;
    let base = GraphicalGame::public_goods(netgame::network::ring(args.n)?, c)?;
    let sim = build_simulation_game(base, greedy_mis_normal_form(2)?)?;
    let order = match args.seed {
        Some(seed) => dynamics::random_order(args.n, seed, 1),
        None => (0..args.n).collect(),
    };
    let (summary, profile) = sim.report(&order)?;
    let projection = sim.project(&profile)?;
    let meta = emitter.meta(
        "simgame",
        serde_json::to_value(&args)?,
        args.seed.unwrap_or(0),
    );
    if let Some(path) = &args.profile_out {
        emitter.write_json(
            &output::with_meta(serde_json::to_value(&projection)?, meta.clone()),
            Some(path),
        )?;
    }
    let mut report = serde_json::to_value(&summary)?;
    report["all_utilities_one"] = json!(sim.all_utilities_one(&profile));
    report["producers"] = json!(projection
        .iter()
        .filter(|&a| a == netgame::game::PRODUCE)
        .count());
    emitter.write_json(&output::with_meta(report, meta), args.out.as_deref())
}

fn frozen(emitter: &Emitter, args: FrozenArgs) -> Result<(), CliError> {
    let net = netgame::network::torus(args.n)?;
    let search = oracle::find_frozen_configuration(&net, args.k, args.seed, args.budget)?;
    let game = GraphicalGame::coloring(net, args.k)?;
    let mut report = serde_json::to_value(&search)?;
    report["found"] = json!(search.profile.is_some());
    if let Some(p) = &search.profile {
        let conflicted = game
            .network()
            .nodes()
            .filter(|&v| game.utility(v, p).is_ok_and(|u| u == rational::zero()))
            .count();
        report["accepted"] = json!(compile_lvl(&game).verify_own(p)?.accepted);
        report["conflicted_nodes"] = json!(conflicted);
    }
    let meta = emitter.meta("frozen", serde_json::to_value(&args)?, args.seed);
    if let (Some(path), Some(p)) = (&args.profile_out, &search.profile) {
        emitter.write_json(
            &output::with_meta(serde_json::to_value(p)?, meta.clone()),
            Some(path),
        )?;
    }
    emitter.write_json(&output::with_meta(report, meta), args.out.as_deref())
}

fn local_sim(emitter: &Emitter, args: LocalSimArgs) -> Result<(), CliError> {
    let (game, resolved) = game_from_flags(&args.graph, &args.game, args.seed)?;
    let coloring = distance_coloring(game.network(), 2)?;
    let init = InitialProfile::Random { seed: args.seed }.resolve(&game)?;
    let sim = simulate_fair_rounds(&game, &init, &coloring, args.rounds)?;
    let mut sequential = init.clone();
    for order in &sim.induced_orders {
        sequential = dynamics::fair_round(&game, &sequential, order)?;
    }
    let report = json!({
        "game": game.name(),
        "palette": coloring.palette,
        "coloring": coloring,
        "simulation": sim,
        "matches_sequential": sequential == sim.final_profile,
    });
    let meta = emitter.meta(
        "local-sim",
        json!({ "resolved": resolved, "args": args }),
        args.seed,
    );
    emitter.write_json(&output::with_meta(report, meta), args.out.as_deref())
}
