//! Radius-1 locally verifiable labelings compiled from graphical games.
//!
//! A labeling is a strategy profile. The configuration set is kept as a
//! predicate: a labeled star is accepted iff the center's label is one of its
//! best responses to the neighbor labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionId, GraphicalGame, StrategyProfile};
use crate::network::{Network, NodeId};

pub const RADIUS: usize = 1;

#[derive(Clone, Copy, Debug)]
pub struct LvlSpec<'g> {
    game: &'g GraphicalGame,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub accepted: bool,
    pub violations: Vec<NodeId>,
}

pub fn compile_lvl(game: &GraphicalGame) -> LvlSpec<'_> {
    LvlSpec { game }
}

impl<'g> LvlSpec<'g> {
    pub fn game(&self) -> &'g GraphicalGame {
        self.game
    }

    pub fn alphabet_size(&self, v: NodeId) -> usize {
        self.game.action_count(v)
    }

    /// Accepts the labeled star around `v` iff no label of `v` scores strictly
    /// more than `center` against `neighbors`.
    pub fn accept(&self, v: NodeId, center: ActionId, neighbors: &[ActionId]) -> bool {
        let own = self.game.payoff(center, neighbors.iter().copied());
        (0..self.game.action_count(v))
            .all(|a| self.game.payoff(a, neighbors.iter().copied()) <= own)
    }

    pub fn verify(&self, network: &Network, labels: &StrategyProfile) -> Result<Verdict> {
        if network.node_count() != self.game.node_count() {
            return Err(Error::InvalidProfile(format!(
                "network has {} nodes, labeling alphabet covers {}",
                network.node_count(),
                self.game.node_count()
            )));
        }
        self.game.check_profile(labels)?;
        let actions = labels.as_slice();
        let mut star = Vec::with_capacity(network.max_degree());
        let violations: Vec<NodeId> = network
            .nodes()
            .filter(|&v| {
                star.clear();
                star.extend(network.neighbors(v).iter().map(|&u| actions[u]));
                !self.accept(v, actions[v], &star)
            })
            .collect();
        Ok(Verdict {
            accepted: violations.is_empty(),
            violations,
        })
    }

    /// Verifies against the game's own network.
    pub fn verify_own(&self, labels: &StrategyProfile) -> Result<Verdict> {
        self.verify(self.game.network(), labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{FREE_RIDE as F, MINUS, PLUS, PRODUCE as P};
    use crate::network::{path, ring, star, torus};
    use crate::rational::Rational;
    use proptest::prelude::*;

    fn pgg(net: Network) -> GraphicalGame {
        GraphicalGame::public_goods(net, Rational::new(1, 2)).unwrap()
    }

    #[test]
    fn pgg_stars() {
        let g = pgg(star(3).unwrap());
        let l = compile_lvl(&g);
        assert!(!l.accept(0, P, &[F, P, F]));
        assert!(!l.accept(0, F, &[F, F, F]));
        assert!(l.accept(0, F, &[F, P, F]));
        assert!(l.accept(0, P, &[F, F, F]));
    }

    #[test]
    fn minority_star() {
        let g = GraphicalGame::minority(star(4).unwrap());
        let l = compile_lvl(&g);
        assert!(l.accept(0, PLUS, &[MINUS, MINUS, PLUS, PLUS]));
        assert!(l.accept(0, PLUS, &[MINUS, MINUS, MINUS, PLUS]));
        assert!(!l.accept(0, PLUS, &[MINUS, PLUS, PLUS, PLUS]));
    }

    #[test]
    fn path_verdicts() {
        let net = path(3).unwrap();
        let g = pgg(net.clone());
        let l = compile_lvl(&g);
        let ok = l.verify(&net, &vec![F, P, F].into()).unwrap();
        assert_eq!(
            ok,
            Verdict {
                accepted: true,
                violations: vec![]
            }
        );
        let bad = l.verify(&net, &vec![P, P, F].into()).unwrap();
        assert_eq!(bad.violations, vec![0, 1]);
        assert!(!bad.accepted);
        assert!(l.verify(&ring(4).unwrap(), &vec![F, P, F].into()).is_err());
    }

    #[test]
    fn proper_torus_coloring_is_accepted() {
        let net = torus(4).unwrap();
        let g = GraphicalGame::coloring(net.clone(), 4).unwrap();
        let colors: Vec<usize> = (0..16).map(|v| (v / 4 + v % 4) % 2).collect();
        assert!(compile_lvl(&g).verify_own(&colors.into()).unwrap().accepted);
    }

    #[test]
    fn verdict_json() {
        let v = Verdict {
            accepted: false,
            violations: vec![0, 1],
        };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"accepted":false,"violations":[0,1]}"#
        );
    }

    proptest! {
        // A node's verdict depends only on labels within distance 1.
        #[test]
        fn verify_is_label_local(seed in any::<u64>(), w in 0usize..25, x in 0usize..3) {
            let net = torus(5).unwrap();
            let g = GraphicalGame::coloring(net.clone(), 3).unwrap();
            let l = compile_lvl(&g);
            let a = g.random_profile(&mut crate::seed::rng(seed));
            let mut b = a.clone();
            b.set(w, x);
            let (va, vb) = (l.verify(&net, &a).unwrap(), l.verify(&net, &b).unwrap());
            for v in net.nodes().filter(|&v| net.distance(v, w).unwrap() >= 2) {
                prop_assert_eq!(va.violations.contains(&v), vb.violations.contains(&v));
            }
        }
    }
}
