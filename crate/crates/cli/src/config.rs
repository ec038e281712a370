//! Experiment configuration files.

use std::path::{Path, PathBuf};

use netgame::dynamics::{InitialProfile, SchedulePolicy};
use netgame::network::{self, CycleCutConstraint};
use netgame::{
    rational, seed, ActionId, GraphicalGame, Network, NodeId, Rational, StrategyProfile,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A complete, replayable experiment: graph, game, dynamics and outputs, with
/// all randomness derived from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transforms: Vec<Transform>,
    pub game: GameSpec,
    #[serde(default)]
    pub dynamics: DynamicsSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Ring {
        n: usize,
    },
    Path {
        n: usize,
    },
    Star {
        leaves: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    Torus {
        n: usize,
    },
    RandomRegular {
        n: usize,
        d: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    StarMatching {
        k: usize,
        d: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    File {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Transform {
    CutShortCycles {
        girth: usize,
        #[serde(default)]
        preserve_bipartition: bool,
    },
    DoubleCover,
    Power {
        radius: usize,
    },
}

/// Game descriptor `{"game": "pgg" | "minority" | "coloring", "c": "p/q", "k": int}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GameDescriptor", into = "GameDescriptor")]
pub enum GameSpec {
    Pgg { c: Rational },
    Minority,
    Coloring { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum GameName {
    Pgg,
    Minority,
    Coloring,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDescriptor {
    game: GameName,
    #[serde(
        default,
        with = "rational::opt_text",
        skip_serializing_if = "Option::is_none"
    )]
    c: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
}

impl TryFrom<GameDescriptor> for GameSpec {
    type Error = String;

    fn try_from(d: GameDescriptor) -> Result<Self, String> {
        match (d.game, d.c, d.k) {
            (GameName::Pgg, Some(c), None) => Ok(GameSpec::Pgg { c }),
            (GameName::Pgg, None, _) => Err("pgg requires \"c\"".into()),
            (GameName::Minority, None, None) => Ok(GameSpec::Minority),
            (GameName::Coloring, None, Some(k)) => Ok(GameSpec::Coloring { k }),
            (GameName::Coloring, _, None) => Err("coloring requires \"k\"".into()),
            (_, Some(_), _) => Err("\"c\" applies only to pgg".into()),
            (_, _, Some(_)) => Err("\"k\" applies only to coloring".into()),
        }
    }
}

impl From<GameSpec> for GameDescriptor {
    fn from(spec: GameSpec) -> Self {
        match spec {
            GameSpec::Pgg { c } => GameDescriptor {
                game: GameName::Pgg,
                c: Some(c),
                k: None,
            },
            GameSpec::Minority => GameDescriptor {
                game: GameName::Minority,
                c: None,
                k: None,
            },
            GameSpec::Coloring { k } => GameDescriptor {
                game: GameName::Coloring,
                c: None,
                k: Some(k),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicySpec {
    /// A fresh uniform permutation every round.
    #[default]
    Random,
    Identity,
    Order(Vec<NodeId>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitSpec {
    #[default]
    Random,
    Uniform(ActionId),
    Profile(Vec<ActionId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    #[serde(default)]
    pub policy: PolicySpec,
    #[serde(default)]
    pub init: InitSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<usize>,
    #[serde(default = "one")]
    pub trials: usize,
}

fn one() -> usize {
    1
}

impl Default for DynamicsSpec {
    fn default() -> Self {
        DynamicsSpec {
            policy: PolicySpec::Random,
            init: InitSpec::Random,
            max_rounds: None,
            trials: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Trajectory CSV; single-trial runs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<PathBuf>,
    /// Report JSON; printed to stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Final profile JSON, single-trial runs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<PathBuf>,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        match segment {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1")))
            }
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Parses and validates a config. Relative graph paths are resolved against
/// `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<ExperimentConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner().to_string();
        CliError::Invalid(format!("{}: {inner}", pointer(e.path())))
    })?;
    if let GraphSpec::File { path } = &mut config.graph {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.game.validate()?;
        if let GraphSpec::File { path } = &self.graph {
            if !path.is_file() {
                return Err(CliError::Invalid(format!(
                    "/graph/path: graph file {} does not exist",
                    path.display()
                )));
            }
        }
        if self.dynamics.trials == 0 {
            return Err(CliError::Invalid("/dynamics/trials: must be >= 1".into()));
        }
        if self.dynamics.max_rounds == Some(0) {
            return Err(CliError::Invalid(
                "/dynamics/max_rounds: must be >= 1".into(),
            ));
        }
        if self.dynamics.trials > 1
            && (self.outputs.trajectory.is_some() || self.outputs.profile.is_some())
        {
            return Err(CliError::Invalid(
                "/outputs: trajectory and profile outputs need dynamics.trials = 1".into(),
            ));
        }
        Ok(())
    }

    pub fn build_network(&self) -> Result<Network, CliError> {
        build_network(&self.graph, &self.transforms, self.seed)
    }

    /// Initial profile and schedule for trial `trial`. A single-trial run uses
    /// the config seed itself.
    pub fn trial_dynamics(
        &self,
        game: &GraphicalGame,
        trial: usize,
    ) -> Result<(InitialProfile, SchedulePolicy), CliError> {
        let s = if self.dynamics.trials == 1 {
            self.seed
        } else {
            seed::split(self.seed, seed::stream::TRIAL, trial as u64)
        };
        let n = game.node_count();
        let init = match &self.dynamics.init {
            InitSpec::Random => InitialProfile::Random { seed: s },
            InitSpec::Uniform(a) => InitialProfile::Given {
                profile: StrategyProfile::uniform(n, *a),
            },
            InitSpec::Profile(p) => InitialProfile::Given {
                profile: p.clone().into(),
            },
        };
        let policy = match &self.dynamics.policy {
            PolicySpec::Random => SchedulePolicy::FreshRandomEachRound { seed: s },
            PolicySpec::Identity => SchedulePolicy::identity(n),
            PolicySpec::Order(order) => SchedulePolicy::FixedOrder {
                order: order.clone(),
            },
        };
        Ok((init, policy))
    }
}

impl GameSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            GameSpec::Pgg { c } if *c <= rational::zero() || *c >= rational::one() => {
                Err(CliError::Invalid(format!(
                    "/game/c: cost must satisfy 0 < c < 1, got {}",
                    rational::to_text(c)
                )))
            }
            GameSpec::Coloring { k } if *k < 2 => Err(CliError::Invalid(format!(
                "/game/k: coloring needs k >= 2, got {k}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn build(&self, network: Network) -> Result<GraphicalGame, CliError> {
        self.validate()?;
        Ok(match self {
            GameSpec::Pgg { c } => GraphicalGame::public_goods(network, *c)?,
            GameSpec::Minority => GraphicalGame::minority(network),
            GameSpec::Coloring { k } => GraphicalGame::coloring(network, *k)?,
        })
    }
}

impl GraphSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GraphSpec::Ring { .. } => "ring",
            GraphSpec::Path { .. } => "path",
            GraphSpec::Star { .. } => "star",
            GraphSpec::Complete { .. } => "complete",
            GraphSpec::CompleteBipartite { .. } => "complete_bipartite",
            GraphSpec::Torus { .. } => "torus",
            GraphSpec::RandomRegular { .. } => "random_regular",
            GraphSpec::StarMatching { .. } => "star_matching",
            GraphSpec::File { .. } => "file",
        }
    }

    /// The seed a randomized generator uses.
    pub fn effective_seed(&self, default: u64) -> u64 {
        match self {
            GraphSpec::RandomRegular { seed, .. } | GraphSpec::StarMatching { seed, .. } => {
                seed.unwrap_or(default)
            }
            _ => default,
        }
    }
}

pub fn build_network(
    spec: &GraphSpec,
    transforms: &[Transform],
    default_seed: u64,
) -> Result<Network, CliError> {
    let s = spec.effective_seed(default_seed);
    let mut net = match spec {
        GraphSpec::Ring { n } => network::ring(*n)?,
        GraphSpec::Path { n } => network::path(*n)?,
        GraphSpec::Star { leaves } => network::star(*leaves)?,
        GraphSpec::Complete { n } => network::complete(*n)?,
        GraphSpec::CompleteBipartite { a, b } => network::complete_bipartite(*a, *b)?,
        GraphSpec::Torus { n } => network::torus(*n)?,
        GraphSpec::RandomRegular { n, d, .. } => network::random_regular(*n, *d, s)?,
        GraphSpec::StarMatching { k, d, .. } => network::star_matching(*k, *d, s)?.network,
        GraphSpec::File { path } => netgame::io::read_graph_file(path)?.0,
    };
    for (i, t) in transforms.iter().enumerate() {
        net = match t {
            Transform::CutShortCycles {
                girth,
                preserve_bipartition,
            } => {
                let constraint = if *preserve_bipartition {
                    let sides = net.two_coloring().ok_or_else(|| {
                        CliError::Invalid(format!("/transforms/{i}: network is not bipartite"))
                    })?;
                    CycleCutConstraint::PreserveBipartition(sides)
                } else {
                    CycleCutConstraint::Unconstrained
                };
                let cut_seed = seed::split(default_seed, seed::stream::ATTEMPT, i as u64);
                network::cut_short_cycles(&net, *girth, &constraint, cut_seed)?.network
            }
            Transform::DoubleCover => network::bipartite_double_cover(&net),
            Transform::Power { radius } => network::power_graph(&net, *radius)?,
        };
    }
    Ok(net)
}
