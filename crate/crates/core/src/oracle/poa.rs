use serde::{Deserialize, Serialize};

use super::{enumerate_ne_with_limit, NeReport, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::game::{GraphicalGame, StrategyProfile, FREE_RIDE, PRODUCE};
use crate::network::{bipartite_double_cover, star_matching};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PggPoaReport {
    pub d: usize,
    pub k: usize,
    #[serde(with = "rational::text")]
    pub c: Rational,
    pub n: usize,
    #[serde(flatten)]
    pub ne: NeReport,
    /// `(1 - c/(d+1)) / (1 - c/2)`.
    #[serde(with = "rational::text")]
    pub predicted_poa: Rational,
    #[serde(with = "rational::text")]
    pub predicted_best_ne_welfare: Rational,
    #[serde(with = "rational::text")]
    pub predicted_worst_ne_welfare: Rational,
    /// Both copies of every star center produce.
    pub perfect_dominating_ne_present: bool,
    /// Every node of the first copy produces.
    pub one_side_ne_present: bool,
}

/// Enumerates the public goods game on the double cover of
/// `star_matching(k, d)`.
pub fn poa_pgg_instance(d: usize, k: usize, c: Rational, seed: u64) -> Result<PggPoaReport> {
    let base = star_matching(k, d, seed)?;
    let half = base.network.node_count();
    let cover = bipartite_double_cover(&base.network);
    let n = cover.node_count();
    let game = GraphicalGame::public_goods(cover, c)?;
    let ne = enumerate_ne_with_limit(&game, ENUMERATION_LIMIT)?;

    let mut dominating = vec![FREE_RIDE; n];
    for &center in &base.centers {
        dominating[center] = PRODUCE;
        dominating[center + half] = PRODUCE;
    }
    let one_side: Vec<_> = (0..n)
        .map(|v| if v < half { PRODUCE } else { FREE_RIDE })
        .collect();
    let listed = |p: Vec<usize>| {
        ne.equilibria
            .binary_search_by(|q| profile_index_cmp(q, &p))
            .is_ok()
    };
    let perfect_dominating_ne_present = listed(dominating);
    let one_side_ne_present = listed(one_side);

    let nodes = rational::int(n as i64);
    let best = (rational::one() - c / rational::int(d as i64 + 1)) * nodes;
    let worst = (rational::one() - c / rational::int(2)) * nodes;
    Ok(PggPoaReport {
        d,
        k,
        c,
        n,
        ne,
        predicted_poa: best / worst,
        predicted_best_ne_welfare: best,
        predicted_worst_ne_welfare: worst,
        perfect_dominating_ne_present,
        one_side_ne_present,
    })
}

/// Orders profiles by enumeration index (last node most significant).
fn profile_index_cmp(a: &StrategyProfile, b: &[usize]) -> std::cmp::Ordering {
    a.as_slice().iter().rev().cmp(b.iter().rev())
}

/// Welfare comparands of the minority game on a regular graph next to the
/// stated price of anarchy `2(d+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorityComparands {
    pub n: usize,
    pub d: usize,
    pub bipartite: bool,
    #[serde(with = "rational::text")]
    pub max_welfare: Rational,
    /// `(d+1) n`, the welfare of a full cut.
    #[serde(with = "rational::text")]
    pub full_cut_welfare: Rational,
    #[serde(with = "rational::text")]
    pub worst_ne_welfare: Rational,
    #[serde(with = "rational::text")]
    pub best_ne_welfare: Rational,
    #[serde(with = "rational::opt_text")]
    pub derived_poa: Option<Rational>,
    #[serde(with = "rational::text")]
    pub stated_poa: Rational,
    /// Set when the enumerated ratio differs from `2(d+1)`.
    pub discrepancy: bool,
    pub equilibrium_count: usize,
}

pub fn minority_comparands(game: &GraphicalGame) -> Result<MinorityComparands> {
    let net = game.network();
    let d = net.max_degree();
    if !net.is_regular(d) {
        return Err(Error::Precondition(
            "minority comparands need a regular network".into(),
        ));
    }
    let ne = enumerate_ne_with_limit(game, ENUMERATION_LIMIT)?;
    let n = net.node_count();
    let stated = rational::int(2 * (d as i64 + 1));
    Ok(MinorityComparands {
        n,
        d,
        bipartite: net.is_bipartite(),
        max_welfare: ne.best_welfare,
        full_cut_welfare: rational::int(((d + 1) * n) as i64),
        worst_ne_welfare: ne.worst_ne_welfare,
        best_ne_welfare: ne.best_ne_welfare,
        derived_poa: ne.poa,
        discrepancy: ne.poa != Some(stated),
        stated_poa: stated,
        equilibrium_count: ne.equilibrium_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::complete_bipartite;

    #[test]
    fn index_order() {
        let a = StrategyProfile::new(vec![1, 0]);
        assert_eq!(profile_index_cmp(&a, &[0, 1]), std::cmp::Ordering::Less);
    }

    #[test]
    fn k33_comparands() {
        let g = GraphicalGame::minority(complete_bipartite(3, 3).unwrap());
        let r = minority_comparands(&g).unwrap();
        assert_eq!(r.max_welfare, rational::int(24));
        assert_eq!(r.full_cut_welfare, rational::int(24));
        assert!(r.discrepancy);
    }
}
