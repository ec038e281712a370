//! Worked cases for each public operation.

use netgame::dynamics::{
    fair_round, run, step, worst_case_convergence, InitialProfile, SchedulePolicy, WorstCase,
};
use netgame::game::{FREE_RIDE as F, MINUS, PLUS, PRODUCE as P};
use netgame::local_sim::{distance_coloring, simulate_fair_rounds, DistanceColoring};
use netgame::network::{
    bipartite_double_cover, complete, complete_bipartite, cut_short_cycles, girth, path,
    power_graph, random_regular, ring, star_matching, torus, CycleCutConstraint, Girth,
};
use netgame::oracle::{
    combinatorial_optima, enumerate_ne, find_frozen_configuration, measured_inefficiency,
    poa_pgg_instance, OptimumSource,
};
use netgame::simgame::{build_simulation_game, greedy_mis_normal_form, SimulationAction};
use netgame::{compile_lvl, rational, GraphicalGame, Rational, StrategyProfile};

fn half() -> Rational {
    Rational::new(1, 2)
}

#[test]
fn network_generators() {
    assert_eq!(girth(&torus(4).unwrap()), Girth::Cycle(4));
    assert_eq!(girth(&ring(5).unwrap()), Girth::Cycle(5));
    assert_eq!(girth(&complete(4).unwrap()), Girth::Cycle(3));
    assert_eq!(girth(&path(3).unwrap()), Girth::Acyclic);
    let big = random_regular(1000, 3, 42).unwrap();
    big.validate().unwrap();
    assert!(big.is_regular(3) && girth(&big).at_least(3));
    let sm = star_matching(6, 3, 42).unwrap();
    assert_eq!(sm.network.node_count(), 24);
    assert!(sm.network.is_perfect_dominating_set(&sm.centers));
    assert_eq!(sm.centers.len(), 6);
}

#[test]
fn cycle_cutting_cases() {
    let k4_chain = random_regular(40, 3, 17).unwrap();
    let out = cut_short_cycles(&k4_chain, 5, &CycleCutConstraint::Unconstrained, 1).unwrap();
    assert!(girth(&out.network).at_least(5));
    assert_eq!(out.network.degree_sequence(), k4_chain.degree_sequence());
    assert_eq!(out.network.edge_count(), k4_chain.edge_count());

    let bip = bipartite_double_cover(&random_regular(20, 3, 4).unwrap());
    let side = bip.two_coloring().unwrap();
    let out = cut_short_cycles(
        &bip,
        6,
        &CycleCutConstraint::PreserveBipartition(side.clone()),
        2,
    )
    .unwrap();
    assert!(out.network.is_bipartite());
    for (u, v) in out.network.edges() {
        assert_ne!(side[u], side[v]);
    }
}

#[test]
fn power_graph_of_ring_for_simulation_radius() {
    let p = power_graph(&ring(64).unwrap(), 22).unwrap();
    assert!(p.is_regular(44));
    assert!(p.has_edge(0, 22) && !p.has_edge(0, 23));
}

#[test]
fn lvl_cases() {
    let net = path(3).unwrap();
    let g = GraphicalGame::public_goods(net.clone(), half()).unwrap();
    let lvl = compile_lvl(&g);
    assert!(lvl.verify(&net, &vec![F, P, F].into()).unwrap().accepted);
    assert_eq!(
        lvl.verify(&net, &vec![P, P, F].into()).unwrap().violations,
        vec![0, 1]
    );
    let m = GraphicalGame::minority(net.clone());
    assert!(compile_lvl(&m).accept(1, PLUS, &[MINUS, PLUS]));
}

#[test]
fn dynamics_cases() {
    let g = GraphicalGame::public_goods(ring(4).unwrap(), half()).unwrap();
    assert_eq!(step(&g, &vec![F; 4].into(), 2).unwrap().get(2), P);
    assert_eq!(
        fair_round(&g, &vec![F; 4].into(), &[0, 1, 2, 3])
            .unwrap()
            .as_slice(),
        &[P, F, P, F]
    );
    let m = GraphicalGame::minority(ring(4).unwrap());
    assert_eq!(
        fair_round(&m, &vec![PLUS; 4].into(), &[0, 1, 2, 3])
            .unwrap()
            .as_slice(),
        &[MINUS, PLUS, MINUS, PLUS]
    );
    let m5 = GraphicalGame::minority(ring(5).unwrap());
    match worst_case_convergence(&m5, &vec![PLUS; 5].into(), 3).unwrap() {
        WorstCase::Converged {
            confirming_round, ..
        } => assert!(confirming_round <= 3),
        WorstCase::Exceeded { .. } => panic!("ring(5) minority exceeded"),
    }
    for seed in 0..30 {
        let t = run(
            &g,
            &InitialProfile::Random { seed },
            &SchedulePolicy::FreshRandomEachRound { seed },
            10,
        )
        .unwrap();
        assert!(t.convergence_round.unwrap() <= 2);
    }
}

#[test]
fn local_sim_cases() {
    let c = distance_coloring(&torus(4).unwrap(), 2).unwrap();
    assert!(c.palette <= 17);
    let r1 = distance_coloring(&random_regular(30, 4, 1).unwrap(), 1).unwrap();
    assert!(r1.palette <= 5);
    let net = ring(4).unwrap();
    let g = GraphicalGame::public_goods(net.clone(), half()).unwrap();
    let schedule = DistanceColoring {
        radius: 2,
        palette: 3,
        colors: vec![1, 2, 3, 1],
    };
    assert!(schedule.validate(&net).is_err());
    let schedule = distance_coloring(&net, 2).unwrap();
    let sim = simulate_fair_rounds(&g, &vec![F; 4].into(), &schedule, 1).unwrap();
    assert_eq!(
        sim.final_profile,
        fair_round(&g, &vec![F; 4].into(), &sim.induced_orders[0]).unwrap()
    );
    assert_eq!(
        serde_json::to_string(&schedule).unwrap(),
        r#"{"radius":2,"palette":4,"colors":[1,2,3,4]}"#
    );
}

#[test]
fn simulation_game_cases() {
    let base = GraphicalGame::public_goods(ring(64).unwrap(), half()).unwrap();
    let sim = build_simulation_game(base.clone(), greedy_mis_normal_form(2).unwrap()).unwrap();
    let order: Vec<usize> = (0..64).collect();
    let p = sim.play_simulation_round(&order).unwrap();
    assert!(sim.all_utilities_one(&p));
    let (_, switches) = sim.fair_round(&p, &order).unwrap();
    assert_eq!(switches, 0);
    let proj = sim.project(&p).unwrap();
    let verdict = compile_lvl(&base).verify_own(&proj).unwrap();
    assert!(verdict.accepted);
    let json = serde_json::to_value(&SimulationAction::Empty).unwrap();
    assert_eq!(json, serde_json::json!({"kind": "empty"}));
}

#[test]
fn oracle_cases() {
    let g = GraphicalGame::minority(ring(4).unwrap());
    assert_eq!(enumerate_ne(&g).unwrap().equilibrium_count, 6);
    let r = poa_pgg_instance(3, 2, half(), 9).unwrap();
    assert_eq!(r.ne.poa, Some(Rational::new(7, 6)));
    assert_eq!(r.ne.best_ne_welfare, rational::int(14));
    assert_eq!(r.ne.worst_ne_welfare, rational::int(12));

    let opt = combinatorial_optima(&complete_bipartite(3, 4).unwrap()).unwrap();
    assert_eq!(opt.max_cut, 12);
    assert_eq!(combinatorial_optima(&ring(5).unwrap()).unwrap().max_cut, 4);
}

#[test]
fn inefficiency_cases() {
    let m = GraphicalGame::minority(complete_bipartite(4, 4).unwrap());
    let r = measured_inefficiency(&m, 5, 1000, 3).unwrap();
    let ratio = r.ratio_upper_bound.unwrap();
    assert!(ratio >= rational::one() && ratio <= rational::int(5));
    assert_eq!(r.optimum_source, OptimumSource::Exhaustive);

    // After two rounds the public goods game has converged in every trial.
    let g = GraphicalGame::public_goods(random_regular(12, 3, 5).unwrap(), Rational::new(1, 3))
        .unwrap();
    let two = measured_inefficiency(&g, 2, 50, 8).unwrap();
    let four = measured_inefficiency(&g, 4, 50, 8).unwrap();
    assert_eq!(two.mean_br_welfare, four.mean_br_welfare);
    assert_eq!(
        two.ratio_upper_bound.unwrap(),
        two.optimum_upper_bound / two.mean_br_welfare
    );
}

#[test]
fn frozen_cases() {
    let net = torus(6).unwrap();
    let found = find_frozen_configuration(&net, 4, 2, 1_000_000).unwrap();
    let profile: StrategyProfile = found.profile.unwrap();
    let game = GraphicalGame::coloring(net.clone(), 4).unwrap();
    let mut p = profile.clone();
    for _ in 0..100 {
        p = fair_round(&game, &p, &(0..36).rev().collect::<Vec<_>>()).unwrap();
    }
    assert_eq!(p, profile);
    assert!(game.welfare(&p).unwrap() < rational::int(36));
    assert!(find_frozen_configuration(&net, 5, 2, 1_000_000)
        .unwrap()
        .profile
        .is_none());
}
