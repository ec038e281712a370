//! Simulation games.
//!
//! Given a base game `G` on `N` and a normal-form algorithm `F` with running
//! time `t`, the simulation game lives on the power graph of `N` with radius
//! `4t + 2`. An action of `v` is either empty or a coloring of its `t`-ball with
//! distinct colors from `1..=palette` together with the label `F` outputs for
//! that coloring. A node earns 1 when its coloring agrees with every non-empty
//! neighbor on shared nodes and no two colored nodes within `2t + 2` hops of a
//! node in its ball share a color.
//!
//! Action sets are never enumerated. Best responses are built greedily, walking
//! the ball in BFS order and taking a color already fixed by a neighbor or the
//! smallest color that is still free.

mod normal_form;

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

pub use normal_form::{
    greedy_mis_normal_form, reduction_schedule, Ball, GreedyMisNormalForm, NormalFormAlgorithm,
    ReductionRound,
};

use crate::dynamics::check_permutation;
use crate::error::{Error, Result};
use crate::game::{ActionId, GraphicalGame, StrategyProfile};
use crate::lvl::compile_lvl;
use crate::network::{Network, NodeId};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimulationAction {
    Empty,
    Simulation {
        coloring: BTreeMap<NodeId, u64>,
        output: ActionId,
    },
}

impl SimulationAction {
    pub fn is_empty(&self) -> bool {
        matches!(self, SimulationAction::Empty)
    }

    fn coloring(&self) -> Option<&BTreeMap<NodeId, u64>> {
        match self {
            SimulationAction::Empty => None,
            SimulationAction::Simulation { coloring, .. } => Some(coloring),
        }
    }
}

/// Everything node `v` knows: its `(4t+2)`-ball in `N`.
#[derive(Clone, Debug)]
pub struct LocalView {
    pub center: NodeId,
    /// Global ids in BFS order from the center.
    pub nodes: Vec<NodeId>,
    pub dist: Vec<usize>,
    /// Edges of `N` among view nodes, as local indices.
    pub adjacency: Vec<Vec<usize>>,
    index: HashMap<NodeId, usize>,
}

impl LocalView {
    fn gather(network: &Network, center: NodeId, radius: usize) -> Self {
        let ball = network.ball(center, radius);
        let index: HashMap<NodeId, usize> =
            ball.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
        let adjacency = ball
            .iter()
            .map(|&(v, _)| {
                network
                    .neighbors(v)
                    .iter()
                    .filter_map(|u| index.get(u).copied())
                    .collect()
            })
            .collect();
        LocalView {
            center,
            nodes: ball.iter().map(|&(v, _)| v).collect(),
            dist: ball.iter().map(|&(_, d)| d).collect(),
            adjacency,
            index,
        }
    }

    pub fn local(&self, v: NodeId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    /// Local indices within `limit` hops of local node `from`, excluding it.
    fn near(&self, from: usize, limit: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            if dist[x] == limit {
                continue;
            }
            for &y in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// Local indices of the `t`-ball (a BFS prefix of the view).
    fn ball_len(&self, t: usize) -> usize {
        self.dist.iter().take_while(|&&d| d <= t).count()
    }
}

pub struct SimulationGame<F: NormalFormAlgorithm = GreedyMisNormalForm> {
    base: GraphicalGame,
    algorithm: F,
    network: Network,
    views: Vec<LocalView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub t: usize,
    pub palette: u64,
    pub n_prime_degree: usize,
    pub one_round_converged: bool,
    pub projection_is_ne: bool,
}

pub fn build_simulation_game<F: NormalFormAlgorithm>(
    base: GraphicalGame,
    algorithm: F,
) -> Result<SimulationGame<F>> {
    let delta = base.network().max_degree();
    if delta > algorithm.max_degree() {
        return Err(Error::Precondition(format!(
            "network has max degree {delta}, algorithm was built for {}",
            algorithm.max_degree()
        )));
    }
    if !algorithm.supports(&base) {
        return Err(Error::Precondition(format!(
            "the normal-form algorithm does not solve {}",
            base.name()
        )));
    }
    let radius = 4 * algorithm.radius() + 2;
    let views: Vec<LocalView> = base
        .network()
        .nodes()
        .map(|v| LocalView::gather(base.network(), v, radius))
        .collect();
    // Each node lists its own neighbors in N' from its view.
    let edges = views.iter().flat_map(|view| {
        view.nodes[1..]
            .iter()
            .filter(move |&&u| view.center < u)
            .map(move |&u| (view.center, u))
    });
    let network = Network::from_edges(base.node_count(), edges)?;
    Ok(SimulationGame {
        base,
        algorithm,
        network,
        views,
    })
}

impl<F: NormalFormAlgorithm> SimulationGame<F> {
    pub fn base(&self) -> &GraphicalGame {
        &self.base
    }

    pub fn algorithm(&self) -> &F {
        &self.algorithm
    }

    /// The power graph `N'`.
    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn view(&self, v: NodeId) -> &LocalView {
        &self.views[v]
    }

    pub fn node_count(&self) -> usize {
        self.network.node_count()
    }

    fn t(&self) -> usize {
        self.algorithm.radius()
    }

    pub fn empty_profile(&self) -> Vec<SimulationAction> {
        vec![SimulationAction::Empty; self.node_count()]
    }

    fn ball_input(&self, v: NodeId, coloring: &BTreeMap<NodeId, u64>) -> Ball {
        let view = &self.views[v];
        let len = view.ball_len(self.t());
        Ball {
            nodes: view.nodes[..len].to_vec(),
            dist: view.dist[..len].to_vec(),
            adjacency: view.adjacency[..len]
                .iter()
                .map(|adj| adj.iter().copied().filter(|&w| w < len).collect())
                .collect(),
            colors: view.nodes[..len].iter().map(|w| coloring[w]).collect(),
        }
    }

    /// Checks that `action` belongs to `A'_v`.
    pub fn check_action(&self, v: NodeId, action: &SimulationAction) -> Result<()> {
        let SimulationAction::Simulation { coloring, output } = action else {
            return Ok(());
        };
        let view = &self.views[v];
        let ball = &view.nodes[..view.ball_len(self.t())];
        let invalid = |reason: String| Err(Error::InvalidAction { node: v, reason });
        if coloring.len() != ball.len() || ball.iter().any(|w| !coloring.contains_key(w)) {
            return invalid("coloring does not cover exactly the t-ball".into());
        }
        let mut seen: Vec<u64> = coloring.values().copied().collect();
        if seen.iter().any(|&c| c == 0 || c > self.algorithm.palette()) {
            return invalid(format!("color outside 1..={}", self.algorithm.palette()));
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return invalid("ball colors are not distinct".into());
        }
        let expected = self.algorithm.decide(&self.ball_input(v, coloring));
        if *output != expected {
            return invalid(format!(
                "output {output} but the algorithm outputs {expected}"
            ));
        }
        Ok(())
    }

    /// Colors fixed by the non-empty N'-neighbors of `v`, or `None` if two of
    /// them disagree.
    fn neighbor_colors(
        &self,
        v: NodeId,
        profile: &[SimulationAction],
    ) -> Option<HashMap<NodeId, u64>> {
        let mut fixed = HashMap::new();
        for &u in self.network.neighbors(v) {
            for (&w, &c) in profile[u].coloring().into_iter().flatten() {
                if *fixed.entry(w).or_insert(c) != c {
                    return None;
                }
            }
        }
        Some(fixed)
    }

    fn local_utility(
        &self,
        v: NodeId,
        action: &SimulationAction,
        profile: &[SimulationAction],
    ) -> bool {
        let Some(own) = action.coloring() else {
            return false;
        };
        // Compatibility: agree with each non-empty neighbor on shared nodes.
        for &u in self.network.neighbors(v) {
            if let Some(theirs) = profile[u].coloring() {
                if own
                    .iter()
                    .any(|(w, c)| theirs.get(w).is_some_and(|d| d != c))
                {
                    return false;
                }
            }
        }
        let Some(mut colors) = self.neighbor_colors(v, profile) else {
            return false;
        };
        colors.extend(own.iter().map(|(&w, &c)| (w, c)));
        // Properness around every node of the ball.
        let view = &self.views[v];
        let span = 2 * self.t() + 2;
        (0..view.ball_len(self.t())).all(|i| {
            let c = colors[&view.nodes[i]];
            view.near(i, span)
                .into_iter()
                .all(|j| colors.get(&view.nodes[j]).is_none_or(|&d| d != c))
        })
    }

    pub fn utility(&self, v: NodeId, profile: &[SimulationAction]) -> Result<Rational> {
        self.check_profile(profile)?;
        Ok(if self.local_utility(v, &profile[v], profile) {
            rational::one()
        } else {
            rational::zero()
        })
    }

    pub fn check_profile(&self, profile: &[SimulationAction]) -> Result<()> {
        if profile.len() != self.node_count() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries, game has {} nodes",
                profile.len(),
                self.node_count()
            )));
        }
        profile
            .iter()
            .enumerate()
            .try_for_each(|(v, a)| self.check_action(v, a))
    }

    /// Greedy action for `v` against the other non-empty strategies.
    pub fn construct_best_response(
        &self,
        v: NodeId,
        profile: &[SimulationAction],
    ) -> Result<SimulationAction> {
        let fixed = self.neighbor_colors(v, profile).ok_or_else(|| {
            Error::Internal(format!("neighbors of {v} hold incompatible colorings"))
        })?;
        let view = &self.views[v];
        let span = 2 * self.t() + 2;
        let mut colors = fixed.clone();
        let mut coloring = BTreeMap::new();
        for i in 0..view.ball_len(self.t()) {
            let w = view.nodes[i];
            let c = match fixed.get(&w) {
                Some(&c) => c,
                None => {
                    let mut used: Vec<u64> = view
                        .near(i, span)
                        .into_iter()
                        .filter_map(|j| colors.get(&view.nodes[j]).copied())
                        .collect();
                    used.sort_unstable();
                    used.dedup();
                    let c = used
                        .iter()
                        .enumerate()
                        .find(|&(k, &u)| u != k as u64 + 1)
                        .map_or(used.len() as u64 + 1, |(k, _)| k as u64 + 1);
                    if c > self.algorithm.palette() {
                        return Err(Error::Internal(format!("palette exhausted at node {w}")));
                    }
                    c
                }
            };
            colors.insert(w, c);
            coloring.insert(w, c);
        }
        let output = self.algorithm.decide(&self.ball_input(v, &coloring));
        Ok(SimulationAction::Simulation { coloring, output })
    }

    /// Keeps the current action when it already earns 1.
    pub fn best_response(
        &self,
        v: NodeId,
        profile: &[SimulationAction],
    ) -> Result<SimulationAction> {
        if self.local_utility(v, &profile[v], profile) {
            return Ok(profile[v].clone());
        }
        let candidate = self.construct_best_response(v, profile)?;
        if !self.local_utility(v, &candidate, profile) {
            return Err(Error::Internal(format!(
                "constructed action of node {v} does not earn 1"
            )));
        }
        Ok(candidate)
    }

    /// One fair round in `order`; returns the new profile and the switch count.
    pub fn fair_round(
        &self,
        profile: &[SimulationAction],
        order: &[NodeId],
    ) -> Result<(Vec<SimulationAction>, usize)> {
        self.check_profile(profile)?;
        check_permutation(order, self.node_count())?;
        let mut current = profile.to_vec();
        let mut switches = 0;
        for &v in order {
            let next = self.best_response(v, &current)?;
            if next != current[v] {
                current[v] = next;
                switches += 1;
            }
        }
        Ok((current, switches))
    }

    /// One fair round from the all-empty profile.
    pub fn play_simulation_round(&self, order: &[NodeId]) -> Result<Vec<SimulationAction>> {
        Ok(self.fair_round(&self.empty_profile(), order)?.0)
    }

    pub fn all_utilities_one(&self, profile: &[SimulationAction]) -> bool {
        (0..self.node_count()).all(|v| self.local_utility(v, &profile[v], profile))
    }

    /// Output labels as a base-game profile.
    pub fn project(&self, profile: &[SimulationAction]) -> Result<StrategyProfile> {
        profile
            .iter()
            .enumerate()
            .map(|(v, a)| match a {
                SimulationAction::Empty => Err(Error::InvalidProfile(format!(
                    "node {v} plays the empty action"
                ))),
                SimulationAction::Simulation { output, .. } => Ok(*output),
            })
            .collect::<Result<Vec<_>>>()
            .map(StrategyProfile::new)
    }

    /// The coloring of `N` obtained by merging all ball colorings. Fails if
    /// owners disagree or some node is uncolored.
    pub fn merged_coloring(&self, profile: &[SimulationAction]) -> Result<Vec<u64>> {
        let mut merged = vec![0u64; self.node_count()];
        for (v, a) in profile.iter().enumerate() {
            for (&w, &c) in a.coloring().into_iter().flatten() {
                if merged[w] != 0 && merged[w] != c {
                    return Err(Error::Internal(format!(
                        "owners disagree on node {w} ({} vs {c}, owner {v})",
                        merged[w]
                    )));
                }
                merged[w] = c;
            }
        }
        if let Some(w) = merged.iter().position(|&c| c == 0) {
            return Err(Error::InvalidProfile(format!("node {w} is not colored")));
        }
        Ok(merged)
    }

    /// Plays one round in `order` from all-empty and checks the outcome.
    pub fn report(&self, order: &[NodeId]) -> Result<(SimulationReport, Vec<SimulationAction>)> {
        let profile = self.play_simulation_round(order)?;
        let (_, second) = self.fair_round(&profile, order)?;
        let one_round_converged = self.all_utilities_one(&profile) && second == 0;
        let projection_is_ne = compile_lvl(&self.base)
            .verify_own(&self.project(&profile)?)?
            .accepted;
        Ok((
            SimulationReport {
                t: self.t(),
                palette: self.algorithm.palette(),
                n_prime_degree: self.network.max_degree(),
                one_round_converged,
                projection_is_ne,
            },
            profile,
        ))
    }
}
