//! Exhaustive and search-based ground truth.
//!
//! Everything here is brute force by design, guarded by hard size limits, and
//! written without reference to the verifier or the dynamics so it can be used
//! to check them.

mod frozen;
mod optima;
mod poa;
pub mod small_graphs;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use frozen::{find_frozen_configuration, find_proper_coloring, is_frozen, FrozenSearch};
pub use optima::{
    combinatorial_optima, measured_inefficiency, welfare_upper_bound, CombinatorialOptima,
    InefficiencyReport, OptimumSource,
};
pub use poa::{minority_comparands, poa_pgg_instance, MinorityComparands, PggPoaReport};

use crate::error::{Error, Result};
use crate::game::{ActionId, GraphicalGame, StrategyProfile};
use crate::rational::{self, Rational};

/// Default cap on the number of profiles an enumeration may visit.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Nash equilibrium by direct evaluation of the definition: no node gains by
/// replacing its own action while all others stay fixed.
pub fn is_nash_equilibrium(game: &GraphicalGame, profile: &StrategyProfile) -> Result<bool> {
    game.check_profile(profile)?;
    for v in game.network().nodes() {
        let current = game.utility(v, profile)?;
        for a in 0..game.action_count(v) {
            let mut deviated = profile.clone();
            deviated.set(v, a);
            if game.utility(v, &deviated)? > current {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_ne_scratch(game: &GraphicalGame, actions: &mut [ActionId]) -> bool {
    for v in game.network().nodes() {
        let own = actions[v];
        let current = game.local_utility(v, own, actions);
        for a in 0..game.action_count(v) {
            actions[v] = a;
            let better = game.local_utility(v, a, actions) > current;
            actions[v] = own;
            if better {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeReport {
    pub profiles_examined: u64,
    pub equilibrium_count: usize,
    /// Equilibria in profile-index order (node 0 is the least significant digit).
    pub equilibria: Vec<StrategyProfile>,
    #[serde(with = "rational::text")]
    pub best_welfare: Rational,
    #[serde(with = "rational::text")]
    pub worst_ne_welfare: Rational,
    #[serde(with = "rational::text")]
    pub best_ne_welfare: Rational,
    /// `best_welfare / worst_ne_welfare`; absent when the worst equilibrium has
    /// non-positive welfare.
    #[serde(with = "rational::opt_text")]
    pub poa: Option<Rational>,
}

/// Number of profiles, if it fits in `u64`.
pub fn profile_space(game: &GraphicalGame) -> Option<u64> {
    game.network()
        .nodes()
        .try_fold(1u64, |acc, v| acc.checked_mul(game.action_count(v) as u64))
}

fn check_space(game: &GraphicalGame, limit: u64) -> Result<u64> {
    match profile_space(game) {
        Some(size) if size <= limit => Ok(size),
        _ => Err(Error::Guard(format!(
            "{} has more than {limit} profiles on {} nodes",
            game.name(),
            game.node_count()
        ))),
    }
}

fn decode(game: &GraphicalGame, mut index: u64, out: &mut [ActionId]) {
    for (v, slot) in out.iter_mut().enumerate() {
        let k = game.action_count(v) as u64;
        *slot = (index % k) as ActionId;
        index /= k;
    }
}

pub fn enumerate_ne(game: &GraphicalGame) -> Result<NeReport> {
    enumerate_ne_with_limit(game, ENUMERATION_LIMIT)
}

struct Partial {
    equilibria: Vec<StrategyProfile>,
    best: Option<Rational>,
    worst_ne: Option<Rational>,
    best_ne: Option<Rational>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.equilibria.extend(other.equilibria);
        self.best = self.best.max(other.best);
        self.best_ne = self.best_ne.max(other.best_ne);
        self.worst_ne = match (self.worst_ne, other.worst_ne) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

const CHUNK: u64 = 1 << 14;

pub fn enumerate_ne_with_limit(game: &GraphicalGame, limit: u64) -> Result<NeReport> {
    let size = check_space(game, limit)?;
    let n = game.node_count();
    let chunks = size.div_ceil(CHUNK);
    let merged = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut part = Partial {
                equilibria: Vec::new(),
                best: None,
                worst_ne: None,
                best_ne: None,
            };
            let mut actions = vec![0; n];
            for index in chunk * CHUNK..((chunk + 1) * CHUNK).min(size) {
                decode(game, index, &mut actions);
                let w = game.welfare_unchecked(&actions);
                part.best = part.best.max(Some(w));
                if is_ne_scratch(game, &mut actions) {
                    part.best_ne = part.best_ne.max(Some(w));
                    part.worst_ne = Some(part.worst_ne.map_or(w, |x| x.min(w)));
                    part.equilibria.push(actions.clone().into());
                }
            }
            part
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            Partial {
                equilibria: Vec::new(),
                best: None,
                worst_ne: None,
                best_ne: None,
            },
            Partial::merge,
        );

    let best_welfare = merged.best.unwrap_or_else(rational::zero);
    let (worst, best_ne) = match (merged.worst_ne, merged.best_ne) {
        (Some(w), Some(b)) => (w, b),
        _ => {
            return Err(Error::Internal(format!(
                "{} has no pure equilibrium",
                game.name()
            )))
        }
    };
    let poa = (worst > rational::zero()).then(|| best_welfare / worst);
    Ok(NeReport {
        profiles_examined: size,
        equilibrium_count: merged.equilibria.len(),
        equilibria: merged.equilibria,
        best_welfare,
        worst_ne_welfare: worst,
        best_ne_welfare: best_ne,
        poa,
    })
}

/// Exact maximum welfare over all profiles.
pub fn max_welfare_with_limit(game: &GraphicalGame, limit: u64) -> Result<Rational> {
    let size = check_space(game, limit)?;
    let n = game.node_count();
    let best = (0..size.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut actions = vec![0; n];
            (chunk * CHUNK..((chunk + 1) * CHUNK).min(size))
                .map(|index| {
                    decode(game, index, &mut actions);
                    game.welfare_unchecked(&actions)
                })
                .max()
        })
        .max()
        .flatten();
    Ok(best.unwrap_or_else(rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{FREE_RIDE as F, PRODUCE as P};
    use crate::lvl::compile_lvl;
    use crate::network::{path, ring, Network};

    #[test]
    fn path_has_two_mis_equilibria() {
        let g = GraphicalGame::public_goods(path(3).unwrap(), Rational::new(1, 2)).unwrap();
        let r = enumerate_ne(&g).unwrap();
        assert_eq!(
            r.equilibria,
            vec![vec![F, P, F].into(), vec![P, F, P].into()]
        );
        assert_eq!(r.best_welfare, Rational::new(5, 2));
        assert_eq!(r.worst_ne_welfare, rational::int(2));
        assert_eq!(r.poa, Some(Rational::new(5, 4)));
    }

    #[test]
    fn minority_ring_four() {
        let g = GraphicalGame::minority(ring(4).unwrap());
        let r = enumerate_ne(&g).unwrap();
        assert_eq!(r.equilibrium_count, 6);
        let lvl = compile_lvl(&g);
        for p in &r.equilibria {
            assert!(lvl.verify_own(p).unwrap().accepted);
        }
    }

    #[test]
    fn coloring_single_edge() {
        let g = GraphicalGame::coloring(Network::from_edges(2, [(0, 1)]).unwrap(), 2).unwrap();
        assert_eq!(enumerate_ne(&g).unwrap().equilibrium_count, 2);
    }

    #[test]
    fn guard_trips() {
        let g = GraphicalGame::coloring(ring(21).unwrap(), 2).unwrap();
        assert!(matches!(enumerate_ne(&g), Err(Error::Guard(_))));
        assert!(enumerate_ne_with_limit(&g, 1 << 21).is_ok());
    }

    #[test]
    fn definitional_check_agrees_with_scratch() {
        let g = GraphicalGame::coloring(ring(5).unwrap(), 3).unwrap();
        let mut actions = vec![0; 5];
        for index in 0..243 {
            decode(&g, index, &mut actions);
            let p = StrategyProfile::new(actions.clone());
            assert_eq!(
                is_nash_equilibrium(&g, &p).unwrap(),
                is_ne_scratch(&g, &mut actions)
            );
        }
    }
}
