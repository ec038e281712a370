use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{normalize, Edge, Network, NodeId};
use crate::error::{Error, Result};
use crate::seed;

const REGULAR_ATTEMPTS: u64 = 1000;
const MATCHING_SHUFFLES: usize = 200;

/// Cycle on `n >= 3` nodes with edges `{i, i+1 mod n}`.
pub fn ring(n: usize) -> Result<Network> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "ring needs n >= 3 (n = {n} would repeat an edge or loop)"
        )));
    }
    Network::from_edges(n, (0..n).map(|i| normalize(i, (i + 1) % n)))
}

pub fn path(n: usize) -> Result<Network> {
    Network::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

/// Node 0 joined to `leaves` leaves `1..=leaves`.
pub fn star(leaves: usize) -> Result<Network> {
    Network::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

pub fn complete(n: usize) -> Result<Network> {
    Network::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// `K_{a,b}` with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Network> {
    Network::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

/// The `n x n` torus. Node `v_{i,j}` has index `i * n + j`.
pub fn torus(n: usize) -> Result<Network> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "torus needs n >= 3 (n = {n} makes wrap-around edges coincide)"
        )));
    }
    let id = |i: usize, j: usize| i * n + j;
    let mut edges = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            edges.push(normalize(id(i, j), id(i, (j + 1) % n)));
            edges.push(normalize(id(i, j), id((i + 1) % n, j)));
        }
    }
    Network::from_edges(n * n, edges)
}

/// Random `d`-regular simple graph from the configuration model. Pairings with
/// loops or repeated edges are discarded and redrawn from a fresh stream; after
/// 1000 rejected attempts the caller should retry with another seed.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Network> {
    if d < 3 {
        return Err(Error::Precondition(format!(
            "random_regular needs d >= 3, got {d}"
        )));
    }
    if n <= d {
        return Err(Error::Precondition(format!(
            "random_regular needs n > d (n = {n}, d = {d})"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::Precondition(format!(
            "n * d must be even (n = {n}, d = {d})"
        )));
    }
    let mut stubs: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for attempt in 0..REGULAR_ATTEMPTS {
        let mut rng = seed::rng_for(seed, seed::stream::ATTEMPT, attempt);
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert(normalize(u, v)) {
                continue 'attempt;
            }
        }
        return Network::from_edges(n, seen);
    }
    // Full rejection rarely succeeds for larger d; fall back to pairing with
    // local rejection.
    for attempt in REGULAR_ATTEMPTS..2 * REGULAR_ATTEMPTS {
        let mut rng = seed::rng_for(seed, seed::stream::ATTEMPT, attempt);
        if let Some(edges) = sequential_pairing(n, d, &mut rng) {
            return Network::from_edges(n, edges);
        }
    }
    Err(Error::Construction(format!(
        "no simple {d}-regular pairing on {n} nodes; retry with another seed"
    )))
}

/// Pairs random stubs one at a time, rejecting only the offending pair, and
/// gives up when no admissible pair remains.
fn sequential_pairing(n: usize, d: usize, rng: &mut impl Rng) -> Option<BTreeSet<Edge>> {
    let mut stubs: Vec<NodeId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut edges = BTreeSet::new();
    let admissible =
        |edges: &BTreeSet<Edge>, u: NodeId, v: NodeId| u != v && !edges.contains(&normalize(u, v));
    while !stubs.is_empty() {
        let m = stubs.len();
        let mut pick = None;
        for _ in 0..64 {
            let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
            if admissible(&edges, stubs[i], stubs[j]) {
                pick = Some((i, j));
                break;
            }
        }
        if pick.is_none() {
            let candidates: Vec<(usize, usize)> = (0..m)
                .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                .filter(|&(i, j)| admissible(&edges, stubs[i], stubs[j]))
                .collect();
            pick = Some(*candidates.choose(rng)?);
        }
        let (i, j) = pick?;
        edges.insert(normalize(stubs[i], stubs[j]));
        let (hi, lo) = (i.max(j), i.min(j));
        stubs.swap_remove(hi);
        stubs.swap_remove(lo);
    }
    Some(edges)
}

/// `k` disjoint stars on `d + 1` nodes whose leaves are joined by `d - 1`
/// disjoint perfect matchings, giving a `d`-regular graph in which the star
/// centers form a perfect dominating set.
#[derive(Clone, Debug)]
pub struct StarMatching {
    pub network: Network,
    /// Star centers; node `i * (d + 1)` is the center of star `i`.
    pub centers: Vec<NodeId>,
    /// The matching edges between leaves.
    pub leaf_edges: BTreeSet<Edge>,
}

pub fn star_matching(k: usize, d: usize, seed: u64) -> Result<StarMatching> {
    if d < 3 {
        return Err(Error::Precondition(format!(
            "star_matching needs d >= 3, got {d}"
        )));
    }
    if k == 0 {
        return Err(Error::Precondition("star_matching needs k >= 1".into()));
    }
    let leaf_count = k * d;
    if leaf_count % 2 == 1 {
        return Err(Error::Precondition(format!(
            "{leaf_count} leaves (k = {k}, d = {d}) cannot carry a perfect matching"
        )));
    }
    if leaf_count < d {
        return Err(Error::Precondition(format!(
            "{leaf_count} leaves cannot host {} disjoint perfect matchings",
            d - 1
        )));
    }
    let centers: Vec<NodeId> = (0..k).map(|i| i * (d + 1)).collect();
    let leaves: Vec<NodeId> = (0..k)
        .flat_map(|i| (1..=d).map(move |j| i * (d + 1) + j))
        .collect();
    let star_edges: Vec<Edge> = centers
        .iter()
        .flat_map(|&c| (1..=d).map(move |j| (c, c + j)))
        .collect();

    for attempt in 0..REGULAR_ATTEMPTS {
        let mut rng = seed::rng_for(seed, seed::stream::ATTEMPT, attempt);
        let mut leaf_edges = BTreeSet::new();
        let mut complete = true;
        for _ in 0..d - 1 {
            let mut placed = false;
            for _ in 0..MATCHING_SHUFFLES {
                let mut order = leaves.clone();
                order.shuffle(&mut rng);
                let matching: Vec<Edge> = order
                    .chunks_exact(2)
                    .map(|p| normalize(p[0], p[1]))
                    .collect();
                if matching.iter().all(|e| !leaf_edges.contains(e)) {
                    leaf_edges.extend(matching);
                    placed = true;
                    break;
                }
            }
            if !placed {
                complete = false;
                break;
            }
        }
        if complete {
            let network = Network::from_edges(
                k * (d + 1),
                star_edges.iter().copied().chain(leaf_edges.iter().copied()),
            )?;
            return Ok(StarMatching {
                network,
                centers,
                leaf_edges,
            });
        }
    }
    Err(Error::Construction(format!(
        "could not place {} disjoint leaf matchings for k = {k}, d = {d}",
        d - 1
    )))
}

/// Default girth target `floor(log_d n)`, never below 3.
pub fn auto_girth_target(n: usize, d: usize) -> usize {
    if d < 2 || n < 2 {
        return 3;
    }
    let mut g = 0;
    let mut power = 1usize;
    while let Some(next) = power.checked_mul(d) {
        if next > n {
            break;
        }
        power = next;
        g += 1;
    }
    g.max(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{girth, Girth};

    #[test]
    fn ring_shapes() {
        let r = ring(4).unwrap();
        assert_eq!(r.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(r.max_degree(), 2);
        assert_eq!(girth(&ring(3).unwrap()), Girth::Cycle(3));
        assert!(ring(2).is_err());
    }

    #[test]
    fn torus_shapes() {
        let t = torus(3).unwrap();
        assert_eq!(t.node_count(), 9);
        assert_eq!(t.edge_count(), 18);
        assert!(t.is_regular(4));
        assert!(torus(2).is_err());
        let t6 = torus(6).unwrap();
        assert_eq!((t6.node_count(), t6.edge_count()), (36, 72));
    }

    #[test]
    fn random_regular_handshake() {
        let g = random_regular(10, 3, 1).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_regular(3));
        g.validate().unwrap();
        assert!(random_regular(9, 3, 1).is_err());
        assert!(random_regular(3, 3, 1).is_err());
        assert_eq!(
            random_regular(20, 3, 5).unwrap(),
            random_regular(20, 3, 5).unwrap()
        );
    }

    #[test]
    fn star_matching_small() {
        for k in [2, 4, 6] {
            let sm = star_matching(k, 3, 11).unwrap();
            assert_eq!(sm.network.node_count(), 4 * k);
            assert!(sm.network.is_regular(3));
            assert_eq!(sm.centers.len(), k);
            assert!(sm.network.is_perfect_dominating_set(&sm.centers));
            assert_eq!(sm.leaf_edges.len(), k * 3);
        }
        assert!(star_matching(1, 3, 0).is_err());
        // K4 on the leaves splits into exactly three perfect matchings.
        assert!(star_matching(1, 4, 0).unwrap().network.is_regular(4));
    }

    #[test]
    fn auto_target() {
        assert_eq!(auto_girth_target(64, 3), 3);
        assert_eq!(auto_girth_target(1000, 3), 6);
        assert_eq!(auto_girth_target(10_000, 2), 13);
    }
}
