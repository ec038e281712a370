//! Graphical games `(A, u, N)` and the three built-in families.
//!
//! Every node of a built-in game has the same ordered action list; the order
//! doubles as the fixed tie-breaking order.
//!
//! | game      | actions (index order) | utility of `v`                                   |
//! |-----------|-----------------------|--------------------------------------------------|
//! | public goods | `F`, `P`           | `P`: `1 - c`; `F`: 1 if a neighbor plays `P`, else 0 |
//! | minority  | `-1`, `+1`            | `1 + #differing - #same` over the open neighborhood |
//! | coloring  | `1..=k`               | 1 if no neighbor shares the color, else 0        |

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, NodeId};
use crate::rational::{self, Rational};

/// Index into a node's ordered action list.
pub type ActionId = usize;

pub const FREE_RIDE: ActionId = 0;
pub const PRODUCE: ActionId = 1;
pub const MINUS: ActionId = 0;
pub const PLUS: ActionId = 1;

/// One action per node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrategyProfile {
    profile: Vec<ActionId>,
}

impl StrategyProfile {
    pub fn new(actions: Vec<ActionId>) -> Self {
        StrategyProfile { profile: actions }
    }

    pub fn uniform(n: usize, action: ActionId) -> Self {
        StrategyProfile::new(vec![action; n])
    }

    pub fn len(&self) -> usize {
        self.profile.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profile.is_empty()
    }

    pub fn as_slice(&self) -> &[ActionId] {
        &self.profile
    }

    pub fn get(&self, v: NodeId) -> ActionId {
        self.profile[v]
    }

    pub fn set(&mut self, v: NodeId, a: ActionId) {
        self.profile[v] = a;
    }

    pub fn into_inner(self) -> Vec<ActionId> {
        self.profile
    }

    pub fn iter(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.profile.iter().copied()
    }
}

impl From<Vec<ActionId>> for StrategyProfile {
    fn from(v: Vec<ActionId>) -> Self {
        StrategyProfile::new(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameKind {
    /// Best-shot public goods with production cost `c` in `(0, 1)`.
    PublicGoods {
        cost: Rational,
    },
    Minority,
    Coloring {
        colors: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicalGame {
    network: Network,
    kind: GameKind,
}

impl GraphicalGame {
    pub fn public_goods(network: Network, cost: Rational) -> Result<Self> {
        if cost <= rational::zero() || cost >= rational::one() {
            return Err(Error::Precondition(format!(
                "public goods cost must lie in (0, 1), got {}",
                rational::to_text(&cost)
            )));
        }
        Ok(GraphicalGame {
            network,
            kind: GameKind::PublicGoods { cost },
        })
    }

    pub fn minority(network: Network) -> Self {
        GraphicalGame {
            network,
            kind: GameKind::Minority,
        }
    }

    pub fn coloring(network: Network, colors: usize) -> Result<Self> {
        if colors < 2 {
            return Err(Error::Precondition(format!(
                "coloring game needs k >= 2 colors, got {colors}"
            )));
        }
        Ok(GraphicalGame {
            network,
            kind: GameKind::Coloring { colors },
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn kind(&self) -> &GameKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GameKind::PublicGoods { cost } => format!("pgg(c={})", rational::to_text(cost)),
            GameKind::Minority => "minority".to_string(),
            GameKind::Coloring { colors } => format!("coloring(k={colors})"),
        }
    }

    pub fn node_count(&self) -> usize {
        self.network.node_count()
    }

    /// Size of `A_v`; identical for every node of the built-in families.
    pub fn action_count(&self, _v: NodeId) -> usize {
        match self.kind {
            GameKind::PublicGoods { .. } | GameKind::Minority => 2,
            GameKind::Coloring { colors } => colors,
        }
    }

    pub fn action_label(&self, a: ActionId) -> String {
        match self.kind {
            GameKind::PublicGoods { .. } => if a == PRODUCE { "P" } else { "F" }.to_string(),
            GameKind::Minority => if a == PLUS { "+1" } else { "-1" }.to_string(),
            GameKind::Coloring { .. } => (a + 1).to_string(),
        }
    }

    /// Utility of a labeled star: the center plays `own`, its neighbors play
    /// `neighbors`.
    pub fn payoff<I>(&self, own: ActionId, neighbors: I) -> Rational
    where
        I: IntoIterator<Item = ActionId>,
    {
        match &self.kind {
            GameKind::PublicGoods { cost } => {
                if own == PRODUCE {
                    rational::one() - cost
                } else if neighbors.into_iter().any(|a| a == PRODUCE) {
                    rational::one()
                } else {
                    rational::zero()
                }
            }
            GameKind::Minority => {
                let (mut differ, mut same) = (0i64, 0i64);
                for a in neighbors {
                    if a == own {
                        same += 1;
                    } else {
                        differ += 1;
                    }
                }
                rational::int(1 + differ - same)
            }
            GameKind::Coloring { .. } => {
                if neighbors.into_iter().any(|a| a == own) {
                    rational::zero()
                } else {
                    rational::one()
                }
            }
        }
    }

    /// Utility of `v` if it played `own`, reading `actions` only at `v`'s
    /// neighbors.
    pub fn local_utility(&self, v: NodeId, own: ActionId, actions: &[ActionId]) -> Rational {
        self.payoff(own, self.network.neighbors(v).iter().map(|&u| actions[u]))
    }

    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        let n = self.node_count();
        if profile.len() != n {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries, game has {n} nodes",
                profile.len()
            )));
        }
        for (v, a) in profile.iter().enumerate() {
            if a >= self.action_count(v) {
                return Err(Error::InvalidProfile(format!(
                    "action {a} out of range at node {v} ({} actions)",
                    self.action_count(v)
                )));
            }
        }
        Ok(())
    }

    pub fn utility(&self, v: NodeId, profile: &StrategyProfile) -> Result<Rational> {
        self.check_profile(profile)?;
        Ok(self.local_utility(v, profile.get(v), profile.as_slice()))
    }

    pub fn welfare(&self, profile: &StrategyProfile) -> Result<Rational> {
        self.check_profile(profile)?;
        Ok(self.welfare_unchecked(profile.as_slice()))
    }

    pub(crate) fn welfare_unchecked(&self, actions: &[ActionId]) -> Rational {
        self.network
            .nodes()
            .map(|v| self.local_utility(v, actions[v], actions))
            .sum()
    }

    /// All utility-maximizing actions of `v` against its neighbors' entries,
    /// in tie-break order.
    pub fn best_responses(&self, v: NodeId, profile: &StrategyProfile) -> Result<Vec<ActionId>> {
        self.check_profile(profile)?;
        Ok(self.best_responses_unchecked(v, profile.as_slice()))
    }

    pub(crate) fn best_responses_unchecked(
        &self,
        v: NodeId,
        actions: &[ActionId],
    ) -> Vec<ActionId> {
        let utilities: Vec<Rational> = (0..self.action_count(v))
            .map(|a| self.local_utility(v, a, actions))
            .collect();
        let best = *utilities.iter().max().expect("nonempty action set");
        (0..utilities.len())
            .filter(|&a| utilities[a] == best)
            .collect()
    }

    /// Uniform, independent draw per node in node order.
    pub fn random_profile<R: Rng + ?Sized>(&self, rng: &mut R) -> StrategyProfile {
        self.network
            .nodes()
            .map(|v| rng.gen_range(0..self.action_count(v)))
            .collect::<Vec<_>>()
            .into()
    }

    /// Number of edges whose endpoints play different actions.
    pub fn cut_edges(&self, actions: &[ActionId]) -> usize {
        self.network
            .edges()
            .into_iter()
            .filter(|&(u, v)| actions[u] != actions[v])
            .count()
    }
}
