//! Frozen colorings: equilibria of the coloring game that are not proper.
//!
//! A conflicted node earns 0 whatever it picks exactly when its neighbors
//! already show all `k` colors, so a profile is a frozen equilibrium iff some
//! edge is monochromatic and every conflicted node sees every color.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionId, GameKind, GraphicalGame, StrategyProfile};
use crate::network::{Network, NodeId};
use crate::seed;

/// Restarts happen after this many assignments without success.
const RESTART_STEPS: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenSearch {
    pub profile: Option<StrategyProfile>,
    pub steps: u64,
    pub restarts: u64,
    /// True when a restart explored its whole search tree, which proves that no
    /// frozen profile with a conflict at node 0 exists.
    pub exhausted: bool,
}

fn conflicted(network: &Network, colors: &[ActionId], v: NodeId) -> bool {
    network.neighbors(v).iter().any(|&u| colors[u] == colors[v])
}

fn sees_all(network: &Network, colors: &[ActionId], v: NodeId, k: usize) -> bool {
    let mut seen = vec![false; k];
    for &u in network.neighbors(v) {
        seen[colors[u]] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Checks the frozen predicate on a complete coloring.
pub fn is_frozen(game: &GraphicalGame, profile: &StrategyProfile) -> Result<bool> {
    let GameKind::Coloring { colors: k } = *game.kind() else {
        return Err(Error::Precondition(
            "frozen configurations are defined for the coloring game".into(),
        ));
    };
    game.check_profile(profile)?;
    let net = game.network();
    let c = profile.as_slice();
    let mut any = false;
    for v in net.nodes() {
        if conflicted(net, c, v) {
            any = true;
            if !sees_all(net, c, v, k) {
                return Ok(false);
            }
        }
    }
    Ok(any)
}

struct Search<'a> {
    network: &'a Network,
    k: usize,
    order: Vec<NodeId>,
    colors: Vec<Option<ActionId>>,
    steps: u64,
    cap: u64,
    aborted: bool,
}

impl Search<'_> {
    /// Rejects partial colorings that can no longer make `v` frozen-or-happy,
    /// and requires node 0 to end up conflicted.
    fn consistent(&self, v: NodeId) -> bool {
        let Some(cv) = self.colors[v] else {
            return true;
        };
        let mut seen = vec![false; self.k];
        let mut distinct = 0;
        let mut open = 0;
        let mut conflict = false;
        for &u in self.network.neighbors(v) {
            match self.colors[u] {
                Some(cu) => {
                    conflict |= cu == cv;
                    if !std::mem::replace(&mut seen[cu], true) {
                        distinct += 1;
                    }
                }
                None => open += 1,
            }
        }
        if v == 0 && open == 0 && !conflict {
            return false;
        }
        !conflict || distinct + open >= self.k
    }

    fn extend(&mut self, depth: usize, rng: &mut impl rand::Rng) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let mut palette: Vec<ActionId> = (0..self.k).collect();
        palette.shuffle(rng);
        for c in palette {
            if self.steps >= self.cap {
                self.aborted = true;
                return false;
            }
            self.steps += 1;
            self.colors[v] = Some(c);
            let ok = self.consistent(v)
                && self
                    .network
                    .neighbors(v)
                    .iter()
                    .all(|&u| self.consistent(u));
            if ok && self.extend(depth + 1, rng) {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        self.colors[v] = None;
        false
    }
}

/// Randomized backtracking for a frozen coloring with a conflict at node 0,
/// assigning nodes in BFS order from node 0. On vertex-transitive networks such
/// as tori, fixing the conflict at node 0 loses no generality.
pub fn find_frozen_configuration(
    network: &Network,
    k: usize,
    seed: u64,
    budget: u64,
) -> Result<FrozenSearch> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "coloring needs k >= 2, got {k}"
        )));
    }
    if network.node_count() == 0 {
        return Ok(FrozenSearch {
            profile: None,
            steps: 0,
            restarts: 0,
            exhausted: true,
        });
    }
    let order: Vec<NodeId> = {
        let mut o: Vec<NodeId> = network
            .ball(0, usize::MAX)
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        let mut inside = vec![false; network.node_count()];
        o.iter().for_each(|&v| inside[v] = true);
        o.extend(network.nodes().filter(|&v| !inside[v]));
        o
    };
    let mut steps = 0;
    let mut restarts = 0;
    while steps < budget {
        let mut rng = seed::rng_for(seed, seed::stream::RESTART, restarts);
        let mut search = Search {
            network,
            k,
            order: order.clone(),
            colors: vec![None; network.node_count()],
            steps: 0,
            cap: RESTART_STEPS.min(budget - steps),
            aborted: false,
        };
        let found = search.extend(0, &mut rng);
        steps += search.steps;
        if found {
            let profile =
                StrategyProfile::new(search.colors.into_iter().map(Option::unwrap).collect());
            return Ok(FrozenSearch {
                profile: Some(profile),
                steps,
                restarts,
                exhausted: false,
            });
        }
        if !search.aborted {
            return Ok(FrozenSearch {
                profile: None,
                steps,
                restarts,
                exhausted: true,
            });
        }
        restarts += 1;
    }
    Ok(FrozenSearch {
        profile: None,
        steps,
        restarts,
        exhausted: false,
    })
}

/// A proper `k`-coloring by plain backtracking in node order, if one exists.
pub fn find_proper_coloring(network: &Network, k: usize) -> Option<StrategyProfile> {
    fn go(network: &Network, k: usize, v: NodeId, colors: &mut Vec<ActionId>) -> bool {
        if v == network.node_count() {
            return true;
        }
        for c in 0..k {
            if network
                .neighbors(v)
                .iter()
                .all(|&u| u >= v || colors[u] != c)
            {
                colors[v] = c;
                if go(network, k, v + 1, colors) {
                    return true;
                }
            }
        }
        false
    }
    let mut colors = vec![0; network.node_count()];
    go(network, k, 0, &mut colors).then(|| colors.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{ring, torus};

    #[test]
    fn predicate() {
        let g = GraphicalGame::coloring(ring(4).unwrap(), 2).unwrap();
        // 0 and 1 share color 0; 0 sees {0, 1}, 1 sees {0, 1}
        assert!(is_frozen(&g, &vec![0, 0, 1, 1].into()).unwrap());
        assert!(!is_frozen(&g, &vec![0, 1, 0, 1].into()).unwrap());
        assert!(!is_frozen(&g, &vec![0, 0, 0, 1].into()).unwrap());
    }

    #[test]
    fn small_torus_searches() {
        let t = torus(4).unwrap();
        let r = find_frozen_configuration(&t, 3, 1, 200_000).unwrap();
        let g = GraphicalGame::coloring(t.clone(), 3).unwrap();
        assert!(is_frozen(&g, r.profile.as_ref().unwrap()).unwrap());
        let none = find_frozen_configuration(&t, 5, 1, 10_000).unwrap();
        assert!(none.profile.is_none() && none.exhausted);
    }

    #[test]
    fn proper_colorings() {
        assert!(find_proper_coloring(&torus(4).unwrap(), 2).is_some());
        assert!(find_proper_coloring(&torus(3).unwrap(), 2).is_none());
        assert!(find_proper_coloring(&torus(3).unwrap(), 3).is_some());
        assert!(find_proper_coloring(&ring(5).unwrap(), 2).is_none());
    }
}
