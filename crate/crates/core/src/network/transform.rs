use super::Network;
use crate::error::{Error, Result};

/// Two copies of every node; copy 1 of `v` is `v`, copy 2 is `v + n`. Each edge
/// `{u, v}` becomes the crossed pair `{u1, v2}`, `{u2, v1}`.
pub fn bipartite_double_cover(network: &Network) -> Network {
    let n = network.node_count();
    let edges = network
        .edges()
        .into_iter()
        .flat_map(|(u, v)| [(u, v + n), (v, u + n)]);
    Network::from_edges(2 * n, edges).expect("double cover of a simple graph is simple")
}

/// Same node set; `u ~ v` iff `1 <= dist(u, v) <= radius`.
pub fn power_graph(network: &Network, radius: usize) -> Result<Network> {
    if radius == 0 {
        return Err(Error::Precondition("power_graph needs radius >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in network.nodes() {
        for (v, _) in network.ball(u, radius) {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Network::from_edges(network.node_count(), edges)
}
