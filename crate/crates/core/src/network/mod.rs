//! Simple undirected bounded-degree networks, generators and the graph
//! constructions used to build benchmark instances.

mod cycles;
mod generators;
mod transform;

use std::collections::VecDeque;

pub use cycles::{cut_short_cycles, girth, shortest_cycle, CutOutcome, CycleCutConstraint, Girth};
pub use generators::{
    auto_girth_target, complete, complete_bipartite, path, random_regular, ring, star,
    star_matching, torus, StarMatching,
};
pub use transform::{bipartite_double_cover, power_graph};

use crate::error::{Error, Result};

/// Dense node index in `0..node_count`.
pub type NodeId = usize;

/// Undirected edge stored as `(u, v)` with `u < v`.
pub type Edge = (NodeId, NodeId);

pub fn normalize(u: NodeId, v: NodeId) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph. Adjacency lists are sorted ascending, symmetric
/// and free of loops and repeats; `max_degree` is the true maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    adjacency: Vec<Vec<NodeId>>,
    max_degree: usize,
}

impl Network {
    /// Builds a network, rejecting self-loops, repeated edges (in either
    /// orientation) and out-of-range endpoints.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidNetwork(format!("self-loop at node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidNetwork(format!(
                    "repeated edge ({}, {})",
                    v.min(w[0]),
                    v.max(w[0])
                )));
            }
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Network {
            adjacency,
            max_degree,
        })
    }

    pub fn empty(node_count: usize) -> Self {
        Network {
            adjacency: vec![Vec::new(); node_count],
            max_degree: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adjacency.iter().all(|l| l.len() == d)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        seq.sort_unstable();
        seq
    }

    /// Hop distances from `source`, exploring at most `limit` hops.
    pub fn distances_from(&self, source: NodeId, limit: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            if limit.is_some_and(|l| dx >= l) {
                continue;
            }
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.distances_from(u, None)[v]
    }

    /// Nodes within `radius` hops of `center` in BFS order (center first,
    /// ties by ascending index), paired with their distance.
    pub fn ball(&self, center: NodeId, radius: usize) -> Vec<(NodeId, usize)> {
        let mut seen = vec![false; self.node_count()];
        seen[center] = true;
        let mut order = vec![(center, 0)];
        let mut head = 0;
        while head < order.len() {
            let (x, dx) = order[head];
            head += 1;
            if dx == radius {
                continue;
            }
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push((y, dx + 1));
                }
            }
        }
        order
    }

    /// A proper 2-coloring (`false`/`true` sides) if the graph is bipartite.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.node_count()];
        for start in self.nodes() {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].unwrap();
                for &y in &self.adjacency[x] {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Re-checks the structural invariants from scratch.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        for (v, list) in self.adjacency.iter().enumerate() {
            for (i, &u) in list.iter().enumerate() {
                if u >= n || u == v {
                    return Err(Error::InvalidNetwork(format!("bad neighbor {u} of {v}")));
                }
                if i > 0 && list[i - 1] >= u {
                    return Err(Error::InvalidNetwork(format!(
                        "adjacency of {v} not strictly sorted"
                    )));
                }
                if self.adjacency[u].binary_search(&v).is_err() {
                    return Err(Error::InvalidNetwork(format!(
                        "edge {v}->{u} not symmetric"
                    )));
                }
            }
        }
        let actual = self.adjacency.iter().map(Vec::len).max().unwrap_or(0);
        if actual != self.max_degree {
            return Err(Error::InvalidNetwork(format!(
                "max_degree {} but actual maximum is {actual}",
                self.max_degree
            )));
        }
        Ok(())
    }

    /// Every node outside `set` has exactly one neighbor in `set`, and `set` is
    /// independent.
    pub fn is_perfect_dominating_set(&self, set: &[NodeId]) -> bool {
        let mut member = vec![false; self.node_count()];
        for &v in set {
            member[v] = true;
        }
        self.nodes().all(|v| {
            let inside = self.adjacency[v].iter().filter(|&&u| member[u]).count();
            if member[v] {
                inside == 0
            } else {
                inside == 1
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_repeats() {
        assert!(Network::from_edges(3, [(0, 0)]).is_err());
        assert!(Network::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Network::from_edges(3, [(0, 3)]).is_err());
        let n = Network::from_edges(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(n.neighbors(0), &[1, 2]);
        assert_eq!(n.edges(), vec![(0, 1), (0, 2)]);
        assert_eq!(n.max_degree(), 2);
        n.validate().unwrap();
    }

    #[test]
    fn distances_and_balls() {
        let r = ring(6).unwrap();
        assert_eq!(r.distance(0, 3), Some(3));
        let ball: Vec<_> = r.ball(0, 2).into_iter().map(|(v, _)| v).collect();
        assert_eq!(ball, vec![0, 1, 5, 2, 4]);
        assert_eq!(r.distances_from(0, Some(1))[3], None);
    }

    #[test]
    fn bipartite_detection() {
        assert!(ring(6).unwrap().is_bipartite());
        assert!(!ring(5).unwrap().is_bipartite());
        assert!(torus(4).unwrap().is_bipartite());
        assert!(!torus(3).unwrap().is_bipartite());
    }

    #[test]
    fn perfect_domination() {
        let s = star(4).unwrap();
        assert!(s.is_perfect_dominating_set(&[0]));
        assert!(!s.is_perfect_dominating_set(&[1]));
    }
}
