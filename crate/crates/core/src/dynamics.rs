//! Fair-round best-response dynamics.
//!
//! A node that acts keeps its current action when that action is already a best
//! response and otherwise takes the first maximizer in action order, so a fair
//! round with zero switches happens exactly when the profile is an equilibrium.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionId, GameKind, GraphicalGame, StrategyProfile, PRODUCE};
use crate::network::NodeId;
use crate::rational::{self, Rational};
use crate::seed;

/// Size limits for [`worst_case_convergence`].
pub const WORST_CASE_MAX_NODES: usize = 6;
pub const WORST_CASE_MAX_BUDGET: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchedulePolicy {
    FixedOrder {
        order: Vec<NodeId>,
    },
    FreshRandomEachRound {
        seed: u64,
    },
    /// Round `r` (1-based) uses `orders[(r - 1) % orders.len()]`.
    Explicit {
        orders: Vec<Vec<NodeId>>,
    },
}

impl SchedulePolicy {
    pub fn identity(n: usize) -> Self {
        SchedulePolicy::FixedOrder {
            order: (0..n).collect(),
        }
    }

    /// The permutation for round `round` (1-based).
    pub fn order_for(&self, n: usize, round: usize) -> Vec<NodeId> {
        match self {
            SchedulePolicy::FixedOrder { order } => order.clone(),
            SchedulePolicy::FreshRandomEachRound { seed } => random_order(n, *seed, round as u64),
            SchedulePolicy::Explicit { orders } => orders[(round - 1) % orders.len()].clone(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            SchedulePolicy::FixedOrder { order } => check_permutation(order, n),
            SchedulePolicy::FreshRandomEachRound { .. } => Ok(()),
            SchedulePolicy::Explicit { orders } => {
                if orders.is_empty() {
                    return Err(Error::Precondition(
                        "explicit schedule has no orders".into(),
                    ));
                }
                orders.iter().try_for_each(|o| check_permutation(o, n))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialProfile {
    Given { profile: StrategyProfile },
    Random { seed: u64 },
}

impl InitialProfile {
    pub fn resolve(&self, game: &GraphicalGame) -> Result<StrategyProfile> {
        match self {
            InitialProfile::Given { profile } => {
                game.check_profile(profile)?;
                Ok(profile.clone())
            }
            InitialProfile::Random { seed } => Ok(random_init(game, *seed)),
        }
    }
}

/// Uniform random start drawn from the `INIT` stream of `seed`.
pub fn random_init(game: &GraphicalGame, seed: u64) -> StrategyProfile {
    game.random_profile(&mut seed::rng_for(seed, seed::stream::INIT, 0))
}

/// Uniformly random permutation of `0..n` for round `round`.
pub fn random_order(n: usize, seed: u64, round: u64) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(&mut seed::rng_for(seed, seed::stream::SCHEDULE, round));
    order
}

pub fn check_permutation(order: &[NodeId], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::NotAPermutation {
            n,
            reason: format!("length {}", order.len()),
        });
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::NotAPermutation {
                n,
                reason: format!("node {v} out of range"),
            });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotAPermutation {
                n,
                reason: format!("node {v} repeated"),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub rounds_executed: usize,
    pub converged: bool,
    pub convergence_round: Option<usize>,
    /// Welfare before round 1, then after each round.
    #[serde(with = "rational::vec_text")]
    pub welfare: Vec<Rational>,
    /// Switches in rounds `1..=rounds_executed`.
    pub switches: Vec<usize>,
    /// Cut size before round 1 and after each round; minority game only.
    pub cut_edges: Option<Vec<usize>>,
    /// Engine invariant failures; always zero unless the engine is broken.
    pub invariant_violations: usize,
    pub initial: StrategyProfile,
    #[serde(rename = "final")]
    pub final_profile: StrategyProfile,
}

/// The action `v` takes when it acts.
pub fn best_response_choice(game: &GraphicalGame, v: NodeId, actions: &[ActionId]) -> ActionId {
    let best = game.best_responses_unchecked(v, actions);
    if best.contains(&actions[v]) {
        actions[v]
    } else {
        best[0]
    }
}

pub fn step(game: &GraphicalGame, profile: &StrategyProfile, v: NodeId) -> Result<StrategyProfile> {
    game.check_profile(profile)?;
    if v >= game.node_count() {
        return Err(Error::Precondition(format!("node {v} out of range")));
    }
    let mut next = profile.clone();
    next.set(v, best_response_choice(game, v, profile.as_slice()));
    Ok(next)
}

pub fn fair_round(
    game: &GraphicalGame,
    profile: &StrategyProfile,
    order: &[NodeId],
) -> Result<StrategyProfile> {
    game.check_profile(profile)?;
    check_permutation(order, game.node_count())?;
    let mut actions = profile.as_slice().to_vec();
    apply_round(game, &mut actions, order, &mut RoundMonitor::none());
    Ok(actions.into())
}

/// Runs one fair round in place and returns the number of switches.
pub(crate) fn apply_round(
    game: &GraphicalGame,
    actions: &mut [ActionId],
    order: &[NodeId],
    monitor: &mut RoundMonitor,
) -> usize {
    let mut switches = 0;
    for &v in order {
        let next = best_response_choice(game, v, actions);
        if next != actions[v] {
            monitor.before_switch(game, v, actions, next);
            actions[v] = next;
            switches += 1;
        }
    }
    switches
}

/// Checks engine invariants as play proceeds.
pub(crate) struct RoundMonitor {
    enabled: bool,
    violations: usize,
}

impl RoundMonitor {
    pub(crate) fn none() -> Self {
        RoundMonitor {
            enabled: false,
            violations: 0,
        }
    }

    fn new() -> Self {
        RoundMonitor {
            enabled: true,
            violations: 0,
        }
    }

    fn before_switch(
        &mut self,
        game: &GraphicalGame,
        v: NodeId,
        actions: &[ActionId],
        next: ActionId,
    ) {
        if !self.enabled || !matches!(game.kind(), GameKind::Minority) {
            return;
        }
        // Flipping v changes the cut only on v's edges.
        let (mut gained, mut lost) = (0i64, 0i64);
        for &u in game.network().neighbors(v) {
            if actions[u] == actions[v] {
                gained += 1;
            }
            if actions[u] == next {
                lost += 1;
            }
        }
        if gained - lost < 1 {
            self.violations += 1;
        }
        debug_assert!(
            gained - lost >= 1,
            "minority switch at {v} did not grow the cut"
        );
    }

    fn after_round(&mut self, game: &GraphicalGame, round: usize, actions: &[ActionId]) {
        if !self.enabled || !matches!(game.kind(), GameKind::PublicGoods { .. }) {
            return;
        }
        let net = game.network();
        let producer = |u: NodeId| actions[u] == PRODUCE;
        let independent = net
            .nodes()
            .all(|v| !producer(v) || net.neighbors(v).iter().all(|&u| !producer(u)));
        let dominating = net
            .nodes()
            .all(|v| producer(v) || net.neighbors(v).iter().any(|&u| producer(u)));
        let ok = (round < 1 || independent) && (round < 2 || dominating);
        if !ok {
            self.violations += 1;
        }
        debug_assert!(ok, "public goods invariant failed after round {round}");
    }
}

/// `10 * ceil(log2(n + 1)) + 10`.
pub fn default_max_rounds(n: usize) -> usize {
    let bits = (usize::BITS - n.leading_zeros()) as usize;
    // ceil(log2(n + 1)) is the bit length of n
    10 * bits + 10
}

pub fn run(
    game: &GraphicalGame,
    init: &InitialProfile,
    policy: &SchedulePolicy,
    max_rounds: usize,
) -> Result<Trace> {
    if max_rounds == 0 {
        return Err(Error::Precondition("max_rounds must be >= 1".into()));
    }
    run_rounds(game, init, policy, max_rounds)
}

/// Like [`run`] but allows `rounds = 0`, which plays nothing.
pub fn run_truncated(
    game: &GraphicalGame,
    init: &InitialProfile,
    policy: &SchedulePolicy,
    rounds: usize,
) -> Result<Trace> {
    run_rounds(game, init, policy, rounds)
}

fn run_rounds(
    game: &GraphicalGame,
    init: &InitialProfile,
    policy: &SchedulePolicy,
    max_rounds: usize,
) -> Result<Trace> {
    let n = game.node_count();
    policy.validate(n)?;
    let initial = init.resolve(game)?;
    let minority = matches!(game.kind(), GameKind::Minority);
    let mut actions = initial.as_slice().to_vec();
    let mut welfare = vec![game.welfare_unchecked(&actions)];
    let mut cut = minority.then(|| vec![game.cut_edges(&actions)]);
    let mut switches = Vec::new();
    let mut monitor = RoundMonitor::new();
    let mut converged = false;

    for round in 1..=max_rounds {
        let order = policy.order_for(n, round);
        let s = apply_round(game, &mut actions, &order, &mut monitor);
        monitor.after_round(game, round, &actions);
        switches.push(s);
        welfare.push(game.welfare_unchecked(&actions));
        if let Some(c) = cut.as_mut() {
            c.push(game.cut_edges(&actions));
        }
        if s == 0 {
            converged = true;
            break;
        }
    }

    let rounds_executed = switches.len();
    let convergence_round = converged.then(|| rounds_executed - 1);
    Ok(Trace {
        rounds_executed,
        converged,
        convergence_round,
        welfare,
        switches,
        cut_edges: cut,
        invariant_violations: monitor.violations,
        initial,
        final_profile: actions.into(),
    })
}

/// Worst case over every sequence of fair-round orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorstCase {
    /// `confirming_round` is the first zero-switch round under the worst
    /// sequence; `convergence_round` is the last round with a switch.
    Converged {
        convergence_round: usize,
        confirming_round: usize,
    },
    /// Some order sequence still switches in every one of `budget` rounds.
    Exceeded { budget: usize },
}

pub fn worst_case_convergence(
    game: &GraphicalGame,
    init: &StrategyProfile,
    round_budget: usize,
) -> Result<WorstCase> {
    let n = game.node_count();
    if n > WORST_CASE_MAX_NODES || round_budget > WORST_CASE_MAX_BUDGET {
        return Err(Error::Guard(format!(
            "worst-case enumeration needs n <= {WORST_CASE_MAX_NODES} and budget <= {WORST_CASE_MAX_BUDGET} (got n = {n}, budget = {round_budget})"
        )));
    }
    game.check_profile(init)?;
    let orders = permutations(n);
    let mut memo = HashMap::new();
    Ok(
        match worst_first_quiet_round(game, init.as_slice(), round_budget, &orders, &mut memo) {
            Some(r) => WorstCase::Converged {
                convergence_round: r - 1,
                confirming_round: r,
            },
            None => WorstCase::Exceeded {
                budget: round_budget,
            },
        },
    )
}

/// Largest index of the first zero-switch round over all order sequences of
/// length `budget`, or `None` if some sequence never has one.
fn worst_first_quiet_round(
    game: &GraphicalGame,
    actions: &[ActionId],
    budget: usize,
    orders: &[Vec<NodeId>],
    memo: &mut HashMap<(Vec<ActionId>, usize), Option<usize>>,
) -> Option<usize> {
    if budget == 0 {
        return None;
    }
    if let Some(&hit) = memo.get(&(actions.to_vec(), budget)) {
        return hit;
    }
    let mut worst = Some(1);
    for order in orders {
        let mut next = actions.to_vec();
        if apply_round(game, &mut next, order, &mut RoundMonitor::none()) == 0 {
            continue;
        }
        match worst_first_quiet_round(game, &next, budget - 1, orders, memo) {
            None => {
                worst = None;
                break;
            }
            Some(r) => worst = worst.max(Some(r + 1)),
        }
    }
    memo.insert((actions.to_vec(), budget), worst);
    worst
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut current: Vec<NodeId> = (0..n).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}
