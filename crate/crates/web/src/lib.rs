//! Browser bindings. Every entry point returns a JSON string, either the
//! result or `{"error": "..."}`, so the page never has to catch exceptions.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use netgame::dynamics::{fair_round, random_init, SchedulePolicy};
use netgame::local_sim::{distance_coloring, simulate_fair_rounds};
use netgame::network::{ring, torus};
use netgame::oracle::{find_frozen_configuration, is_frozen};
use netgame::{compile_lvl, rational, GraphicalGame, Network, Rational};

const MAX_NODES: u32 = 2500;
const MAX_ROUNDS: u32 = 200;

#[derive(Serialize)]
struct Layout {
    /// Node positions in the unit square.
    positions: Vec<[f64; 2]>,
    edges: Vec<[usize; 2]>,
    /// Edges that wrap around the torus; drawn as short stubs.
    wrap: Vec<bool>,
}

fn layout(kind: &str, size: u32) -> Result<(Network, Layout), String> {
    let size = size as usize;
    let (net, positions): (Network, Vec<[f64; 2]>) = match kind {
        "ring" => {
            let net = ring(size).map_err(|e| e.to_string())?;
            let pos = (0..size)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / size as f64;
                    [0.5 + 0.42 * a.cos(), 0.5 + 0.42 * a.sin()]
                })
                .collect();
            (net, pos)
        }
        "torus" => {
            let net = torus(size).map_err(|e| e.to_string())?;
            let step = 1.0 / size as f64;
            let pos = (0..size * size)
                .map(|v| {
                    [
                        (v % size) as f64 * step + step / 2.0,
                        (v / size) as f64 * step + step / 2.0,
                    ]
                })
                .collect();
            (net, pos)
        }
        other => return Err(format!("unknown graph {other:?}; expected ring or torus")),
    };
    let edges: Vec<[usize; 2]> = net.edges().into_iter().map(|(u, v)| [u, v]).collect();
    let wrap = edges
        .iter()
        .map(|&[u, v]| {
            let (a, b) = (positions[u], positions[v]);
            (a[0] - b[0]).abs() > 0.5 || (a[1] - b[1]).abs() > 0.5
        })
        .collect();
    Ok((
        net,
        Layout {
            positions,
            edges,
            wrap,
        },
    ))
}

fn build_game(game: &str, net: Network, param: &str) -> Result<GraphicalGame, String> {
    match game {
        "pgg" => {
            let c = rational::parse(param).map_err(|e| e.to_string())?;
            GraphicalGame::public_goods(net, c).map_err(|e| e.to_string())
        }
        "minority" => Ok(GraphicalGame::minority(net)),
        "coloring" => {
            let k: usize = param
                .trim()
                .parse()
                .map_err(|_| format!("colors must be an integer, got {param:?}"))?;
            GraphicalGame::coloring(net, k).map_err(|e| e.to_string())
        }
        other => Err(format!(
            "unknown game {other:?}; expected pgg, minority or coloring"
        )),
    }
}

fn guard(size: u32, kind: &str) -> Result<(), String> {
    let nodes = if kind == "torus" {
        size.saturating_mul(size)
    } else {
        size
    };
    if nodes > MAX_NODES {
        return Err(format!(
            "{nodes} nodes is more than the demo allows ({MAX_NODES})"
        ));
    }
    Ok(())
}

fn respond(result: Result<serde_json::Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn text(r: &Rational) -> String {
    rational::to_text(r)
}

/// Best-response dynamics from a random start, one profile per round until
/// a round with no switch or `max_rounds`.
#[wasm_bindgen]
pub fn dynamics_demo(
    game: &str,
    graph: &str,
    size: u32,
    param: &str,
    seed: u32,
    max_rounds: u32,
) -> String {
    respond((|| {
        guard(size, graph)?;
        let (net, layout) = layout(graph, size)?;
        let game = build_game(game, net, param)?;
        let n = game.node_count();
        let policy = SchedulePolicy::FreshRandomEachRound { seed: seed as u64 };
        let mut profile = random_init(&game, seed as u64);
        let mut profiles = vec![profile.clone().into_inner()];
        let mut welfare = vec![text(&game.welfare(&profile).map_err(|e| e.to_string())?)];
        let mut switches = Vec::new();
        let mut converged = false;
        for round in 1..=max_rounds.clamp(1, MAX_ROUNDS) as usize {
            let next = fair_round(&game, &profile, &policy.order_for(n, round))
                .map_err(|e| e.to_string())?;
            let changed = next
                .iter()
                .zip(profile.iter())
                .filter(|(a, b)| a != b)
                .count();
            profile = next;
            profiles.push(profile.clone().into_inner());
            welfare.push(text(&game.welfare(&profile).map_err(|e| e.to_string())?));
            switches.push(changed);
            if changed == 0 {
                converged = true;
                break;
            }
        }
        let accepted = compile_lvl(&game)
            .verify_own(&profile)
            .map_err(|e| e.to_string())?
            .accepted;
        Ok(json!({
            "game": game.name(),
            "actions": game.action_count(0),
            "layout": layout,
            "profiles": profiles,
            "welfare": welfare,
            "switches": switches,
            "converged": converged,
            "equilibrium": accepted,
        }))
    })())
}

/// Searches `torus(size)` for a `k`-coloring equilibrium that is not proper.
#[wasm_bindgen]
pub fn frozen_demo(size: u32, k: u32, seed: u32, budget: u32) -> String {
    respond((|| {
        guard(size, "torus")?;
        let (net, layout) = layout("torus", size)?;
        let search = find_frozen_configuration(&net, k as usize, seed as u64, budget as u64)
            .map_err(|e| e.to_string())?;
        let game = GraphicalGame::coloring(net, k as usize).map_err(|e| e.to_string())?;
        let (conflicted, frozen) = match &search.profile {
            Some(p) => {
                let conflicted: Vec<usize> = game
                    .network()
                    .nodes()
                    .filter(|&v| {
                        game.network()
                            .neighbors(v)
                            .iter()
                            .any(|&u| p.get(u) == p.get(v))
                    })
                    .collect();
                (conflicted, is_frozen(&game, p).map_err(|e| e.to_string())?)
            }
            None => (Vec::new(), false),
        };
        Ok(json!({
            "layout": layout,
            "colors": k,
            "found": search.profile.is_some(),
            "profile": search.profile.map(|p| p.into_inner()),
            "conflicted": conflicted,
            "frozen": frozen,
            "steps": search.steps,
            "exhausted": search.exhausted,
        }))
    })())
}

/// Distance-2 coloring schedule and one LOCAL-simulated fair round of the
/// public goods game.
#[wasm_bindgen]
pub fn schedule_demo(graph: &str, size: u32, cost: &str, seed: u32) -> String {
    respond((|| {
        guard(size, graph)?;
        let (net, layout) = layout(graph, size)?;
        let coloring = distance_coloring(&net, 2).map_err(|e| e.to_string())?;
        let game = build_game("pgg", net, cost)?;
        let init = random_init(&game, seed as u64);
        let sim = simulate_fair_rounds(&game, &init, &coloring, 1).map_err(|e| e.to_string())?;
        let sequential =
            fair_round(&game, &init, &sim.induced_orders[0]).map_err(|e| e.to_string())?;
        Ok(json!({
            "layout": layout,
            "palette": coloring.palette,
            "classes": coloring.colors,
            "initial": init.into_inner(),
            "final": sim.final_profile.clone().into_inner(),
            "local_rounds": sim.local_rounds,
            "matches_sequential": sequential == sim.final_profile,
        }))
    })())
}
