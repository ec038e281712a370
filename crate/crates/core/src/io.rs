//! File formats: graph JSON, trajectory CSV, profile and coloring JSON.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::Trace;
use crate::error::{Error, Result};
use crate::network::Network;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphMeta {
    pub generator: String,
    pub seed: u64,
    pub params: serde_json::Value,
}

/// `{"n", "edges": [[u, v], ...], "max_degree", "meta"}` with `u < v` and
/// edges sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub max_degree: usize,
    pub meta: GraphMeta,
}

impl GraphDocument {
    pub fn new(network: &Network, meta: GraphMeta) -> Self {
        GraphDocument {
            n: network.node_count(),
            edges: network.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            max_degree: network.max_degree(),
            meta,
        }
    }

    /// Rebuilds the network, rejecting reversed, unsorted or repeated edges and
    /// a wrong `max_degree`.
    pub fn to_network(&self) -> Result<Network> {
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u >= v {
                return Err(Error::InvalidNetwork(format!(
                    "edge {i} is [{u}, {v}]; expected u < v"
                )));
            }
            if i > 0 && self.edges[i - 1] >= [u, v] {
                return Err(Error::InvalidNetwork(format!(
                    "edge {i} [{u}, {v}] is repeated or out of lexicographic order"
                )));
            }
        }
        let network = Network::from_edges(self.n, self.edges.iter().map(|&[u, v]| (u, v)))?;
        if network.max_degree() != self.max_degree {
            return Err(Error::InvalidNetwork(format!(
                "max_degree is {} but the edges give {}",
                self.max_degree,
                network.max_degree()
            )));
        }
        Ok(network)
    }
}

pub fn read_graph<R: Read>(reader: R) -> Result<(Network, GraphDocument)> {
    let doc: GraphDocument = serde_json::from_reader(reader)?;
    Ok((doc.to_network()?, doc))
}

pub fn read_graph_file(path: &Path) -> Result<(Network, GraphDocument)> {
    let file = std::fs::File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    read_graph(std::io::BufReader::new(file))
}

/// Header `round,welfare_num,welfare_den,switches,cut_edges`; round 0 is the
/// starting profile. `cut_edges` is empty outside the minority game.
pub fn write_trajectory<W: Write>(trace: &Trace, writer: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([
        "round",
        "welfare_num",
        "welfare_den",
        "switches",
        "cut_edges",
    ])?;
    for (round, w) in trace.welfare.iter().enumerate() {
        let switches = if round == 0 {
            0
        } else {
            trace.switches[round - 1]
        };
        let cut = trace
            .cut_edges
            .as_ref()
            .map_or(String::new(), |c| c[round].to_string());
        out.write_record([
            round.to_string(),
            w.numer().to_string(),
            w.denom().to_string(),
            switches.to_string(),
            cut,
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct TrajectoryRow {
    pub round: usize,
    pub welfare_num: i64,
    pub welfare_den: i64,
    pub switches: usize,
    pub cut_edges: Option<usize>,
}

pub fn read_trajectory<R: Read>(reader: R) -> Result<Vec<TrajectoryRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run, InitialProfile, SchedulePolicy};
    use crate::game::GraphicalGame;
    use crate::network::{ring, torus};

    fn meta() -> GraphMeta {
        GraphMeta {
            generator: "torus".into(),
            seed: 0,
            params: serde_json::json!({"n": 3}),
        }
    }

    #[test]
    fn graph_round_trip() {
        let t = torus(3).unwrap();
        let doc = GraphDocument::new(&t, meta());
        let text = serde_json::to_string(&doc).unwrap();
        let (back, doc2) = read_graph(text.as_bytes()).unwrap();
        assert_eq!(back, t);
        assert_eq!(doc2, doc);
        assert!(text.starts_with(r#"{"n":9,"edges":[[0,1],[0,2],[0,3]"#));
    }

    #[test]
    fn graph_reader_rejects_bad_edges() {
        let bad = |edges: &str| {
            let text = format!(
                r#"{{"n":3,"edges":{edges},"max_degree":1,"meta":{{"generator":"x","seed":0,"params":{{}}}}}}"#
            );
            read_graph(text.as_bytes()).is_err()
        };
        assert!(bad("[[1,0]]"));
        assert!(bad("[[0,1],[0,1]]"));
        assert!(bad("[[1,2],[0,1]]"));
        assert!(bad("[[0,1],[1,2]]"));
        assert!(!bad("[[0,1]]"));
    }

    #[test]
    fn trajectory_csv() {
        let g = GraphicalGame::minority(ring(4).unwrap());
        let t = run(
            &g,
            &InitialProfile::Given {
                profile: vec![1; 4].into(),
            },
            &SchedulePolicy::identity(4),
            5,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("round,welfare_num,welfare_den,switches,cut_edges\n0,-4,1,0,0\n"));
        let rows = read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), t.rounds_executed + 1);
        assert_eq!(rows[1].cut_edges, Some(4));
    }
}
