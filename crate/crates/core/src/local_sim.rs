//! LOCAL-model replay of best-response dynamics.
//!
//! A distance-2 coloring is used as a schedule: color classes act one after the
//! other, and all nodes of a class update at once. Two nodes of one class share
//! no neighbor, so their choices cannot influence each other and the result
//! equals a sequential fair round in color-major, index-minor order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::best_response_choice;
use crate::error::{Error, Result};
use crate::game::{ActionId, GraphicalGame, StrategyProfile};
use crate::network::{Network, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceColoring {
    pub radius: usize,
    pub palette: usize,
    /// Color of each node, starting at 1.
    pub colors: Vec<usize>,
}

impl DistanceColoring {
    /// Checks that nodes within `radius` hops have distinct colors in
    /// `1..=palette`.
    pub fn validate(&self, network: &Network) -> Result<()> {
        if self.colors.len() != network.node_count() {
            return Err(Error::Precondition(format!(
                "coloring covers {} nodes, network has {}",
                self.colors.len(),
                network.node_count()
            )));
        }
        for v in network.nodes() {
            let c = self.colors[v];
            if c == 0 || c > self.palette {
                return Err(Error::Precondition(format!(
                    "color {c} of node {v} outside 1..={}",
                    self.palette
                )));
            }
            for (u, _) in network.ball(v, self.radius).into_iter().skip(1) {
                if self.colors[u] == c {
                    return Err(Error::Precondition(format!(
                        "nodes {v} and {u} are within distance {} but share color {c}",
                        self.radius
                    )));
                }
            }
        }
        Ok(())
    }

    /// Nodes of each color class in ascending index; entry `i` holds color `i + 1`.
    pub fn classes(&self) -> Vec<Vec<NodeId>> {
        let mut classes = vec![Vec::new(); self.palette];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c - 1].push(v);
        }
        classes
    }
}

/// Greedy distance-`radius` coloring: nodes in ascending index take the
/// smallest color unused within `radius` hops.
pub fn distance_coloring(network: &Network, radius: usize) -> Result<DistanceColoring> {
    if radius == 0 {
        return Err(Error::Precondition(
            "distance coloring needs radius >= 1".into(),
        ));
    }
    let mut colors = vec![0usize; network.node_count()];
    let mut used = Vec::new();
    for v in network.nodes() {
        used.clear();
        used.extend(
            network
                .ball(v, radius)
                .into_iter()
                .map(|(u, _)| colors[u])
                .filter(|&c| c > 0),
        );
        used.sort_unstable();
        used.dedup();
        let mut c = 1;
        for &x in &used {
            if x == c {
                c += 1;
            } else if x > c {
                break;
            }
        }
        colors[v] = c;
    }
    let palette = colors.iter().copied().max().unwrap_or(0);
    Ok(DistanceColoring {
        radius,
        palette,
        colors,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSimulation {
    #[serde(rename = "final")]
    pub final_profile: StrategyProfile,
    /// The sequential order each simulated fair round is equivalent to.
    pub induced_orders: Vec<Vec<NodeId>>,
    /// `palette * rounds`; the cost of computing the coloring is not included.
    pub local_rounds: usize,
    pub switches: Vec<usize>,
}

pub fn simulate_fair_rounds(
    game: &GraphicalGame,
    init: &StrategyProfile,
    coloring: &DistanceColoring,
    rounds: usize,
) -> Result<LocalSimulation> {
    game.check_profile(init)?;
    if coloring.radius < 2 {
        return Err(Error::Precondition(format!(
            "schedule needs a distance-2 coloring, got radius {}",
            coloring.radius
        )));
    }
    coloring.validate(game.network())?;
    let classes = coloring.classes();
    let induced: Vec<NodeId> = classes.iter().flatten().copied().collect();

    let mut actions = init.as_slice().to_vec();
    let mut switches = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let mut switched = 0;
        for class in &classes {
            let snapshot = &actions;
            let updates: Vec<(NodeId, ActionId)> = class
                .par_iter()
                .map(|&v| (v, best_response_choice(game, v, snapshot)))
                .collect();
            for (v, a) in updates {
                if actions[v] != a {
                    actions[v] = a;
                    switched += 1;
                }
            }
        }
        switches.push(switched);
    }
    Ok(LocalSimulation {
        final_profile: actions.into(),
        induced_orders: vec![induced; rounds],
        local_rounds: coloring.palette * rounds,
        switches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{fair_round, random_init};
    use crate::game::FREE_RIDE as F;
    use crate::network::{random_regular, ring, torus};
    use crate::rational::Rational;

    #[test]
    fn greedy_traces() {
        let c = distance_coloring(&ring(6).unwrap(), 2).unwrap();
        assert_eq!(c.colors, vec![1, 2, 3, 1, 2, 3]);
        assert_eq!(c.palette, 3);
        let t = torus(4).unwrap();
        let c2 = distance_coloring(&t, 2).unwrap();
        c2.validate(&t).unwrap();
        assert!(c2.palette <= 17);
        let g = random_regular(40, 5, 2).unwrap();
        let c1 = distance_coloring(&g, 1).unwrap();
        c1.validate(&g).unwrap();
        assert!(c1.palette <= 6);
    }

    #[test]
    fn rejects_bad_schedules() {
        let net = ring(4).unwrap();
        let g = GraphicalGame::minority(net.clone());
        let one = distance_coloring(&net, 1).unwrap();
        assert!(simulate_fair_rounds(&g, &vec![0; 4].into(), &one, 1).is_err());
        let bad = DistanceColoring {
            radius: 2,
            palette: 3,
            colors: vec![1, 2, 1, 3],
        };
        assert!(simulate_fair_rounds(&g, &vec![0; 4].into(), &bad, 1).is_err());
    }

    #[test]
    fn matches_sequential_on_ring() {
        let net = ring(4).unwrap();
        let g = GraphicalGame::public_goods(net.clone(), Rational::new(1, 2)).unwrap();
        let col = distance_coloring(&net, 2).unwrap();
        let init = StrategyProfile::new(vec![F; 4]);
        let sim = simulate_fair_rounds(&g, &init, &col, 1).unwrap();
        let seq = fair_round(&g, &init, &sim.induced_orders[0]).unwrap();
        assert_eq!(sim.final_profile, seq);
        assert_eq!(
            simulate_fair_rounds(&g, &init, &col, 0)
                .unwrap()
                .final_profile,
            init
        );
    }

    #[test]
    fn intra_class_order_is_irrelevant() {
        let net = random_regular(50, 3, 9).unwrap();
        let g = GraphicalGame::coloring(net.clone(), 3).unwrap();
        let col = distance_coloring(&net, 2).unwrap();
        let init = random_init(&g, 4);
        let sim = simulate_fair_rounds(&g, &init, &col, 3).unwrap();
        let reversed: Vec<NodeId> = col
            .classes()
            .into_iter()
            .flat_map(|c| c.into_iter().rev())
            .collect();
        let mut p = init;
        for _ in 0..3 {
            p = fair_round(&g, &p, &reversed).unwrap();
        }
        assert_eq!(p, sim.final_profile);
        assert_eq!(sim.local_rounds, 3 * col.palette);
    }
}
