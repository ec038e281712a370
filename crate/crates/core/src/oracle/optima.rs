use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{max_welfare_with_limit, profile_space, ENUMERATION_LIMIT};
use crate::dynamics::{run_truncated, InitialProfile, SchedulePolicy};
use crate::error::{Error, Result};
use crate::game::{GameKind, GraphicalGame};
use crate::network::Network;
use crate::rational::{self, Rational};
use crate::seed;

pub const OPTIMA_MAX_NODES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialOptima {
    pub min_dominating: usize,
    pub max_independent: usize,
    pub max_cut: usize,
}

/// Exact optima by scanning all `2^n` node subsets.
pub fn combinatorial_optima(network: &Network) -> Result<CombinatorialOptima> {
    let n = network.node_count();
    if n > OPTIMA_MAX_NODES {
        return Err(Error::Guard(format!(
            "combinatorial optima scan 2^n subsets; n = {n} exceeds {OPTIMA_MAX_NODES}"
        )));
    }
    let open: Vec<u32> = network
        .nodes()
        .map(|v| network.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let closed: Vec<u32> = open.iter().enumerate().map(|(v, m)| m | 1 << v).collect();
    let edges = network.edges();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    let per_subset = |set: u32| {
        let mut covered = 0u32;
        let mut independent = true;
        let mut bits = set;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            covered |= closed[v];
            independent &= open[v] & set == 0;
        }
        let size = set.count_ones() as usize;
        let cut = edges
            .iter()
            .filter(|&&(u, v)| (set >> u & 1) != (set >> v & 1))
            .count();
        let dom = if covered == full { size } else { usize::MAX };
        let ind = if independent { size } else { 0 };
        (dom, ind, cut)
    };
    let (min_dominating, max_independent, max_cut) =
        (0..=full).into_par_iter().map(per_subset).reduce(
            || (usize::MAX, 0, 0),
            |a, b| (a.0.min(b.0), a.1.max(b.1), a.2.max(b.2)),
        );
    Ok(CombinatorialOptima {
        min_dominating,
        max_independent,
        max_cut,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumSource {
    Exhaustive,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InefficiencyReport {
    #[serde(rename = "T")]
    pub rounds: usize,
    #[serde(with = "rational::text")]
    pub optimum_upper_bound: Rational,
    pub optimum_source: OptimumSource,
    #[serde(with = "rational::text")]
    pub mean_br_welfare: Rational,
    pub trials: usize,
    /// `optimum_upper_bound / mean_br_welfare`; absent if the mean is not positive.
    #[serde(with = "rational::opt_text")]
    pub ratio_upper_bound: Option<Rational>,
    pub note: String,
}

/// An upper bound on the welfare of any profile, exact when the profile space
/// is within the enumeration limit.
pub fn welfare_upper_bound(game: &GraphicalGame) -> Result<(Rational, OptimumSource)> {
    if profile_space(game).is_some_and(|s| s <= ENUMERATION_LIMIT) {
        return Ok((
            max_welfare_with_limit(game, ENUMERATION_LIMIT)?,
            OptimumSource::Exhaustive,
        ));
    }
    let net = game.network();
    let n = net.node_count() as i64;
    let bound = match game.kind() {
        // Producers plus uncovered free riders dominate N, and each costs at least c.
        GameKind::PublicGoods { cost } => {
            let min_dom = (n as usize).div_ceil(net.max_degree() + 1) as i64;
            rational::int(n) - cost * rational::int(min_dom)
        }
        GameKind::Minority => rational::int(n + 2 * net.edge_count() as i64),
        GameKind::Coloring { .. } => rational::int(n),
    };
    Ok((bound, OptimumSource::ClosedForm))
}

/// Mean welfare after `rounds` fair rounds from uniform random starts, against
/// the global optimum as a stand-in for the best `rounds`-round algorithm.
pub fn measured_inefficiency(
    game: &GraphicalGame,
    rounds: usize,
    trials: usize,
    seed: u64,
) -> Result<InefficiencyReport> {
    if trials == 0 {
        return Err(Error::Precondition(
            "measured_inefficiency needs trials >= 1".into(),
        ));
    }
    let (optimum_upper_bound, optimum_source) = welfare_upper_bound(game)?;
    let finals = (0..trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = seed::split(seed, seed::stream::TRIAL, i as u64);
            let trace = run_truncated(
                game,
                &InitialProfile::Random { seed: trial_seed },
                &SchedulePolicy::FreshRandomEachRound { seed: trial_seed },
                rounds,
            )?;
            Ok(*trace.welfare.last().expect("welfare includes the start"))
        })
        .collect::<Result<Vec<Rational>>>()?;
    let mean_br_welfare = finals.into_iter().sum::<Rational>() / rational::int(trials as i64);
    let ratio_upper_bound =
        (mean_br_welfare > rational::zero()).then(|| optimum_upper_bound / mean_br_welfare);
    Ok(InefficiencyReport {
        rounds,
        optimum_upper_bound,
        optimum_source,
        mean_br_welfare,
        trials,
        ratio_upper_bound,
        note: "optimum is the best welfare over all profiles, an upper bound on what any rounds-limited algorithm achieves".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{complete_bipartite, ring, star_matching};

    #[test]
    fn small_optima() {
        let sm = star_matching(4, 3, 1).unwrap();
        assert_eq!(combinatorial_optima(&sm.network).unwrap().min_dominating, 4);
        let k33 = complete_bipartite(3, 3).unwrap();
        assert_eq!(combinatorial_optima(&k33).unwrap().max_cut, 9);
        let r5 = combinatorial_optima(&ring(5).unwrap()).unwrap();
        assert_eq!(
            r5,
            CombinatorialOptima {
                min_dominating: 2,
                max_independent: 2,
                max_cut: 4
            }
        );
        assert!(combinatorial_optima(&ring(25).unwrap()).is_err());
    }

    #[test]
    fn closed_form_bounds() {
        let g = GraphicalGame::minority(ring(30).unwrap());
        assert_eq!(
            welfare_upper_bound(&g).unwrap(),
            (rational::int(90), OptimumSource::ClosedForm)
        );
        let p = GraphicalGame::public_goods(ring(30).unwrap(), Rational::new(1, 2)).unwrap();
        assert_eq!(welfare_upper_bound(&p).unwrap().0, rational::int(25));
    }

    #[test]
    fn zero_rounds_is_the_random_start() {
        let g = GraphicalGame::coloring(ring(12).unwrap(), 3).unwrap();
        let r = measured_inefficiency(&g, 0, 4000, 5).unwrap();
        // each node avoids both neighbors' colors with probability 4/9
        let mean = rational::to_f64(&r.mean_br_welfare);
        let expected = 12.0 * 4.0 / 9.0;
        // welfare has standard deviation below 3, so the mean of 4000 is within 0.15
        assert!((mean - expected).abs() < 0.15, "{mean} vs {expected}");
        assert_eq!(r.optimum_source, OptimumSource::Exhaustive);
    }
}
