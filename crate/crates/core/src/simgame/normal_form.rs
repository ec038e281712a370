//! Normal-form algorithms: `t`-round algorithms that read a distance-`(2t+2)`
//! coloring of their `t`-ball.
//!
//! [`GreedyMisNormalForm`] computes a maximal independent set. It first shrinks
//! the input coloring with a few rounds of polynomial color reduction, then
//! lets color classes join the set one at a time. Every intermediate color is
//! a function of a fixed-radius neighborhood, so all nodes that evaluate it
//! from their own balls obtain the same value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionId, GameKind, GraphicalGame, FREE_RIDE, PRODUCE};
use crate::network::NodeId;

/// The input to a normal-form algorithm: the `t`-ball around a center in BFS
/// order with the colors of its nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    /// Global ids, center first.
    pub nodes: Vec<NodeId>,
    pub dist: Vec<usize>,
    /// Local indices; contains every edge of the network with both ends in the
    /// ball.
    pub adjacency: Vec<Vec<usize>>,
    /// Input color of each node, starting at 1.
    pub colors: Vec<u64>,
}

pub trait NormalFormAlgorithm {
    /// Degree bound the algorithm was built for.
    fn max_degree(&self) -> usize;
    /// Running time `t`.
    fn radius(&self) -> usize;
    /// Number of input colors, `Δ^(2t+2) + 1`.
    fn palette(&self) -> u64;
    fn supports(&self, game: &GraphicalGame) -> bool;
    /// Output label of the ball's center.
    fn decide(&self, ball: &Ball) -> ActionId;
}

/// One polynomial color-reduction round: colors below `from` are mapped into
/// `q * q` colors using polynomials of degree at most `degree` over `Z_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRound {
    pub from: u64,
    pub q: u64,
    pub degree: u32,
}

impl ReductionRound {
    pub fn to(&self) -> u64 {
        self.q * self.q
    }

    fn coefficients(&self, color: u64) -> Vec<u64> {
        let mut x = color;
        (0..=self.degree)
            .map(|_| {
                let d = x % self.q;
                x /= self.q;
                d
            })
            .collect()
    }

    fn eval(&self, coeffs: &[u64], z: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &a| (acc * z + a) % self.q)
    }

    /// New color of a node with 0-based `color` whose neighbors hold `others`.
    pub fn apply(&self, color: u64, others: &[u64]) -> u64 {
        let own = self.coefficients(color);
        let theirs: Vec<Vec<u64>> = others.iter().map(|&c| self.coefficients(c)).collect();
        for z in 0..self.q {
            let value = self.eval(&own, z);
            if theirs.iter().all(|p| self.eval(p, z) != value) {
                return z * self.q + value;
            }
        }
        unreachable!("q > Δ * degree leaves a free evaluation point")
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Smallest `k >= 1` with `q^(k+1) >= colors`.
fn degree_for(q: u64, colors: u64) -> u32 {
    let mut k = 1;
    while (q as u128).pow(k + 1) < colors as u128 {
        k += 1;
    }
    k
}

/// Best single round for `colors` input colors and degree bound `delta`, if
/// it strictly reduces the color count.
fn best_round(colors: u64, delta: usize) -> Option<ReductionRound> {
    let mut q = 2u64;
    while q.saturating_mul(q) < colors {
        if is_prime(q) {
            let k = degree_for(q, colors);
            if q > delta as u64 * k as u64 {
                return Some(ReductionRound {
                    from: colors,
                    q,
                    degree: k,
                });
            }
        }
        q += 1;
    }
    None
}

/// Rounds of polynomial reduction applied while they help.
pub fn reduction_schedule(colors: u64, delta: usize) -> Vec<ReductionRound> {
    let mut rounds = Vec::new();
    let mut current = colors;
    while let Some(r) = best_round(current, delta) {
        current = r.to();
        rounds.push(r);
    }
    rounds
}

/// Maximal independent set by color-class greedy over a reduced coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyMisNormalForm {
    pub delta: usize,
    pub t: usize,
    pub palette: u64,
    pub schedule: Vec<ReductionRound>,
    /// Colors left after the reduction rounds; one greedy phase each.
    pub phases: u64,
}

impl GreedyMisNormalForm {
    /// Picks the smallest `t` for which reduction plus greedy fits in `t`
    /// rounds given a `Δ^(2t+2) + 1` coloring.
    pub fn new(delta: usize) -> Result<Self> {
        if delta < 2 {
            return Err(Error::Precondition(format!(
                "normal form needs Δ >= 2, got {delta}"
            )));
        }
        for t in 1usize.. {
            let Some(palette) = (delta as u64)
                .checked_pow(2 * t as u32 + 2)
                .and_then(|p| p.checked_add(1))
            else {
                break;
            };
            let schedule = reduction_schedule(palette, delta);
            let phases = schedule.last().map_or(palette, ReductionRound::to);
            let needed = schedule.len() as u64 + phases - 1;
            if needed <= t as u64 {
                return Ok(GreedyMisNormalForm {
                    delta,
                    t,
                    palette,
                    schedule,
                    phases,
                });
            }
        }
        Err(Error::Precondition(format!(
            "for Δ = {delta} the palette Δ^(2t+2)+1 is not representable in 64 bits at the required t"
        )))
    }

    /// Rounds actually used: reduction rounds plus `phases - 1`.
    pub fn rounds_used(&self) -> usize {
        self.schedule.len() + self.phases as usize - 1
    }
}

pub fn greedy_mis_normal_form(delta: usize) -> Result<GreedyMisNormalForm> {
    GreedyMisNormalForm::new(delta)
}

impl NormalFormAlgorithm for GreedyMisNormalForm {
    fn max_degree(&self) -> usize {
        self.delta
    }

    fn radius(&self) -> usize {
        self.t
    }

    fn palette(&self) -> u64 {
        self.palette
    }

    fn supports(&self, game: &GraphicalGame) -> bool {
        matches!(game.kind(), GameKind::PublicGoods { .. })
    }

    fn decide(&self, ball: &Ball) -> ActionId {
        let size = ball.nodes.len();
        // Level j is known for nodes within t - j of the center.
        let mut color: Vec<u64> = ball.colors.iter().map(|&c| c - 1).collect();
        let mut reach = self.t;
        for round in &self.schedule {
            reach -= 1;
            let next: Vec<u64> = (0..size)
                .map(|u| {
                    if ball.dist[u] > reach {
                        return 0;
                    }
                    let others: Vec<u64> = ball.adjacency[u].iter().map(|&w| color[w]).collect();
                    round.apply(color[u], &others)
                })
                .collect();
            color = next;
        }
        let mut joined: Vec<bool> = (0..size)
            .map(|u| ball.dist[u] <= reach && color[u] == 0)
            .collect();
        for phase in 1..self.phases {
            reach -= 1;
            let next: Vec<bool> = (0..size)
                .map(|u| {
                    ball.dist[u] <= reach
                        && (joined[u]
                            || (color[u] == phase && ball.adjacency[u].iter().all(|&w| !joined[w])))
                })
                .collect();
            joined = next;
        }
        if joined[0] {
            PRODUCE
        } else {
            FREE_RIDE
        }
    }
}
