use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{normalize, Edge, Network, NodeId};
use crate::error::{Error, Result};

/// Shortest cycle length, or `Acyclic` for forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl Girth {
    pub fn at_least(self, g: usize) -> bool {
        match self {
            Girth::Cycle(len) => len >= g,
            Girth::Acyclic => true,
        }
    }
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Cycle(len) => write!(f, "{len}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

/// Exact girth from one truncated BFS per node.
pub fn girth(network: &Network) -> Girth {
    girth_of(&adjacency_sets(network))
}

fn girth_of(adj: &[BTreeSet<NodeId>]) -> Girth {
    let n = adj.len();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    touched.push(y);
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Cycle(best)
    }
}

/// The lexicographically smallest shortest cycle: written from its smallest
/// node in the direction of the smaller second node, minimal as a sequence.
pub fn shortest_cycle(network: &Network) -> Option<Vec<NodeId>> {
    let adj = adjacency_sets(network);
    match girth_of(&adj) {
        Girth::Cycle(len) => lex_min_cycle(&adj, len),
        Girth::Acyclic => None,
    }
}

fn lex_min_cycle(adj: &[BTreeSet<NodeId>], len: usize) -> Option<Vec<NodeId>> {
    let n = adj.len();
    for s in 0..n {
        // distances back to s inside the subgraph on nodes >= s
        let mut back = vec![usize::MAX; n];
        back[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if y > s && back[y] == usize::MAX {
                    back[y] = back[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![s];
        let mut on_path = vec![false; n];
        on_path[s] = true;
        if extend_cycle(adj, len, &back, &mut path, &mut on_path) {
            return Some(path);
        }
    }
    None
}

fn extend_cycle(
    adj: &[BTreeSet<NodeId>],
    len: usize,
    back: &[usize],
    path: &mut Vec<NodeId>,
    on_path: &mut [bool],
) -> bool {
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() == len {
        return adj[last].contains(&s);
    }
    for &y in &adj[last] {
        if y <= s || on_path[y] {
            continue;
        }
        // after adding y, len - path.len() - 1 more nodes plus the closing edge
        if back[y] == usize::MAX || back[y] > len - path.len() {
            continue;
        }
        path.push(y);
        on_path[y] = true;
        if extend_cycle(adj, len, back, path, on_path) {
            return true;
        }
        on_path[y] = false;
        path.pop();
    }
    false
}

/// Which edges cycle cutting may rewire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleCutConstraint {
    Unconstrained,
    /// Only these edges may be removed; the two replacement edges of a swap
    /// join the set.
    LeafEdgesOnly(BTreeSet<Edge>),
    /// Side of every node; removed and added edges all cross the partition.
    PreserveBipartition(Vec<bool>),
}

#[derive(Clone, Debug)]
pub struct CutOutcome {
    pub network: Network,
    /// The constraint after all swaps (updated leaf edge set when applicable).
    pub constraint: CycleCutConstraint,
    pub swaps: usize,
}

/// Removes every cycle shorter than `target` by repeated double-edge swaps.
///
/// Each step takes the lexicographically smallest shortest cycle and its
/// smallest eligible edge `e = {u, v}`, then looks for a partner edge
/// `f = {u', v'}` and replaces `e, f` by `{u, v'}, {u', v}`. Partners at edge
/// distance `>= target` are tried first, then nearer ones; in both passes a
/// swap is only taken if a BFS confirms neither new edge closes a cycle shorter
/// than `target`. Every accepted swap destroys at least one short cycle and
/// creates none, so the loop terminates. `seed` rotates the scan start among
/// candidate partners.
pub fn cut_short_cycles(
    network: &Network,
    target: usize,
    constraint: &CycleCutConstraint,
    seed: u64,
) -> Result<CutOutcome> {
    let n = network.node_count();
    let mut constraint = constraint.clone();
    match &constraint {
        CycleCutConstraint::LeafEdgesOnly(set) => {
            if let Some(e) = set.iter().find(|&&(u, v)| !network.has_edge(u, v)) {
                return Err(Error::Precondition(format!(
                    "designated edge {e:?} not in network"
                )));
            }
        }
        CycleCutConstraint::PreserveBipartition(side) => {
            if side.len() != n {
                return Err(Error::Precondition(format!(
                    "bipartition covers {} nodes, network has {n}",
                    side.len()
                )));
            }
        }
        CycleCutConstraint::Unconstrained => {}
    }
    let mut adj = adjacency_sets(network);
    let budget = 4 * network.edge_count() + 16;
    let mut swaps = 0;
    loop {
        let len = match girth_of(&adj) {
            Girth::Cycle(len) if len < target => len,
            _ => break,
        };
        if swaps >= budget {
            return Err(Error::Construction(format!(
                "swap budget {budget} exhausted with girth {len} < {target}"
            )));
        }
        let cycle = lex_min_cycle(&adj, len).expect("girth cycle exists");
        let e = (0..len)
            .map(|i| normalize(cycle[i], cycle[(i + 1) % len]))
            .filter(|&(u, v)| eligible(&constraint, u, v))
            .min()
            .ok_or_else(|| {
                Error::Construction(format!("shortest cycle {cycle:?} has no rewirable edge"))
            })?;
        let (old_f, added) = find_partner(&adj, &constraint, e, target, seed).ok_or_else(|| {
            Error::Construction(format!(
                "no partner edge for {e:?} avoids cycles shorter than {target}; target too large for n = {n}"
            ))
        })?;
        apply_swap(&mut adj, e, old_f, added);
        if let CycleCutConstraint::LeafEdgesOnly(set) = &mut constraint {
            set.remove(&e);
            set.remove(&old_f);
            set.insert(added[0]);
            set.insert(added[1]);
        }
        swaps += 1;
    }
    let network = Network::from_edges(
        n,
        adj.iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v))),
    )?;
    Ok(CutOutcome {
        network,
        constraint,
        swaps,
    })
}

fn eligible(constraint: &CycleCutConstraint, u: NodeId, v: NodeId) -> bool {
    match constraint {
        CycleCutConstraint::Unconstrained => true,
        CycleCutConstraint::LeafEdgesOnly(set) => set.contains(&normalize(u, v)),
        CycleCutConstraint::PreserveBipartition(side) => side[u] != side[v],
    }
}

fn find_partner(
    adj: &[BTreeSet<NodeId>],
    constraint: &CycleCutConstraint,
    e: Edge,
    target: usize,
    seed: u64,
) -> Option<(Edge, [Edge; 2])> {
    let (u, v) = e;
    let du = bfs(adj, u, None);
    let dv = bfs(adj, v, None);
    let edge_distance = |(a, b): Edge| du[a].min(du[b]).min(dv[a]).min(dv[b]);

    let candidates: Vec<Edge> = adj
        .iter()
        .enumerate()
        .flat_map(|(a, l)| l.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
        .filter(|&(a, b)| eligible(constraint, a, b))
        .filter(|&(a, b)| a != u && a != v && b != u && b != v)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let offset = (seed % candidates.len() as u64) as usize;
    let rotated = || {
        candidates[offset..]
            .iter()
            .chain(&candidates[..offset])
            .copied()
    };

    let far = rotated().filter(|&f| edge_distance(f) >= target);
    let near = rotated().filter(|&f| edge_distance(f) < target);
    for f in far.chain(near) {
        for added in rewirings(constraint, e, f) {
            if added.iter().any(|&(a, b)| adj[a].contains(&b)) {
                continue;
            }
            let mut trial = adj.to_vec();
            apply_swap(&mut trial, e, f, added);
            if added
                .iter()
                .all(|&(a, b)| !closes_short_cycle(&trial, a, b, target))
            {
                return Some((f, added));
            }
        }
    }
    None
}

fn rewirings(constraint: &CycleCutConstraint, e: Edge, f: Edge) -> Vec<[Edge; 2]> {
    let ((u, v), (x, y)) = (e, f);
    match constraint {
        CycleCutConstraint::PreserveBipartition(side) => {
            // orient both edges left -> right, then cross them
            let (ul, ur) = if !side[u] { (u, v) } else { (v, u) };
            let (xl, xr) = if !side[x] { (x, y) } else { (y, x) };
            vec![[normalize(ul, xr), normalize(xl, ur)]]
        }
        _ => vec![
            [normalize(u, y), normalize(x, v)],
            [normalize(u, x), normalize(v, y)],
        ],
    }
}

fn apply_swap(adj: &mut [BTreeSet<NodeId>], e: Edge, f: Edge, added: [Edge; 2]) {
    for (a, b) in [e, f] {
        adj[a].remove(&b);
        adj[b].remove(&a);
    }
    for (a, b) in added {
        adj[a].insert(b);
        adj[b].insert(a);
    }
}

/// True if edge `{a, b}` lies on a cycle of length `< target`.
fn closes_short_cycle(adj: &[BTreeSet<NodeId>], a: NodeId, b: NodeId, target: usize) -> bool {
    if target <= 3 {
        return false;
    }
    let limit = target - 2;
    let mut dist = vec![usize::MAX; adj.len()];
    dist[a] = 0;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= limit {
            continue;
        }
        for &y in &adj[x] {
            if x == a && y == b {
                continue;
            }
            if dist[y] == usize::MAX {
                if y == b {
                    return true;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    false
}

fn bfs(adj: &[BTreeSet<NodeId>], source: NodeId, limit: Option<usize>) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        if limit.is_some_and(|l| dist[x] >= l) {
            continue;
        }
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn adjacency_sets(network: &Network) -> Vec<BTreeSet<NodeId>> {
    network
        .nodes()
        .map(|v| network.neighbors(v).iter().copied().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{complete, path, random_regular, ring, star_matching, torus};

    #[test]
    fn girth_basics() {
        assert_eq!(girth(&ring(5).unwrap()), Girth::Cycle(5));
        assert_eq!(girth(&complete(4).unwrap()), Girth::Cycle(3));
        assert_eq!(girth(&path(3).unwrap()), Girth::Acyclic);
        assert_eq!(girth(&torus(4).unwrap()), Girth::Cycle(4));
        assert_eq!(girth(&torus(3).unwrap()), Girth::Cycle(3));
    }

    #[test]
    fn lexicographic_cycle() {
        let k4 = complete(4).unwrap();
        assert_eq!(shortest_cycle(&k4), Some(vec![0, 1, 2]));
        let r = ring(5).unwrap();
        assert_eq!(shortest_cycle(&r), Some(vec![0, 1, 2, 3, 4]));
        // two triangles; the one through 0 wins
        let g = Network::from_edges(6, [(3, 4), (4, 5), (3, 5), (0, 2), (2, 1), (0, 1)]).unwrap();
        assert_eq!(shortest_cycle(&g), Some(vec![0, 1, 2]));
        assert_eq!(shortest_cycle(&path(4).unwrap()), None);
    }

    #[test]
    fn cutting_preserves_degrees() {
        let g = random_regular(64, 3, 3).unwrap();
        let out = cut_short_cycles(&g, 5, &CycleCutConstraint::Unconstrained, 0).unwrap();
        assert!(girth(&out.network).at_least(5));
        assert_eq!(out.network.degree_sequence(), g.degree_sequence());
        assert_eq!(out.network.edge_count(), g.edge_count());
    }

    #[test]
    fn cutting_leaf_edges_keeps_domination() {
        let sm = star_matching(16, 3, 2).unwrap();
        let constraint = CycleCutConstraint::LeafEdgesOnly(sm.leaf_edges.clone());
        let out = cut_short_cycles(&sm.network, 5, &constraint, 0).unwrap();
        assert!(girth(&out.network).at_least(5));
        assert!(out.network.is_perfect_dominating_set(&sm.centers));
        assert!(out.network.is_regular(3));
    }

    #[test]
    fn impossible_target_is_an_error() {
        let g = complete(4).unwrap();
        assert!(cut_short_cycles(&g, 5, &CycleCutConstraint::Unconstrained, 0).is_err());
    }

    #[test]
    fn already_high_girth_is_untouched() {
        let r = ring(8).unwrap();
        let out = cut_short_cycles(&r, 5, &CycleCutConstraint::Unconstrained, 0).unwrap();
        assert_eq!(out.swaps, 0);
        assert_eq!(out.network, r);
    }
}
