//! Catalogue of small connected graphs, one per isomorphism class.

use crate::dynamics::permutations;
use crate::error::{Error, Result};
use crate::network::{Edge, Network};

pub const MAX_NODES: usize = 6;

fn pairs(n: usize) -> Vec<Edge> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn connected(n: usize, adjacency: &[u32]) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let mut next = 0;
        let mut bits = frontier;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= adjacency[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen.count_ones() as usize == n
}

/// Connected graphs on exactly `n` nodes, one per isomorphism class, ordered
/// by their canonical edge mask.
pub fn connected_graphs(n: usize) -> Result<Vec<Network>> {
    if n > MAX_NODES {
        return Err(Error::Guard(format!(
            "graph catalogue is limited to n <= {MAX_NODES}"
        )));
    }
    let all = pairs(n);
    let slot = |u: usize, v: usize| all.iter().position(|&e| e == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    // For each permutation, where each edge slot goes.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| all.iter().map(|&(u, v)| slot(p[u], p[v])).collect())
        .collect();
    let mut classes = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << all.len()) {
        let mut adjacency = vec![0u32; n];
        for (i, &(u, v)) in all.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adjacency[u] |= 1 << v;
                adjacency[v] |= 1 << u;
            }
        }
        if !connected(n, &adjacency) {
            continue;
        }
        let canonical = images
            .iter()
            .map(|image| {
                image
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .fold(0u64, |m, (_, &j)| m | 1 << j)
            })
            .min()
            .unwrap();
        classes.insert(canonical);
    }
    classes
        .into_iter()
        .map(|mask| {
            Network::from_edges(
                n,
                all.iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
        })
        .collect()
}

/// All classes for `1..=max_nodes`.
pub fn connected_graphs_up_to(max_nodes: usize) -> Result<Vec<Network>> {
    let mut out = Vec::new();
    for n in 1..=max_nodes {
        out.extend(connected_graphs(n)?);
    }
    Ok(out)
}
