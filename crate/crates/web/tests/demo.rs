use netgame_web::{dynamics_demo, frozen_demo, schedule_demo};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn pgg_dynamics_settle_in_two_rounds() {
    let v = parse(dynamics_demo("pgg", "torus", 8, "1/2", 3, 50));
    assert_eq!(v["converged"], true);
    assert_eq!(v["equilibrium"], true);
    // Initial profile plus at most two changing rounds and the confirming one.
    assert!(v["profiles"].as_array().unwrap().len() <= 4);
    assert_eq!(v["layout"]["positions"].as_array().unwrap().len(), 64);
    assert_eq!(v["layout"]["edges"].as_array().unwrap().len(), 128);
}

#[test]
fn minority_and_coloring_run_on_a_ring() {
    let v = parse(dynamics_demo("minority", "ring", 30, "", 1, 100));
    assert_eq!(v["converged"], true);
    let v = parse(dynamics_demo("coloring", "ring", 30, "3", 1, 100));
    assert_eq!(v["actions"], 3);
}

#[test]
fn frozen_search_on_small_torus() {
    let v = parse(frozen_demo(6, 4, 2, 1_000_000));
    assert_eq!(v["found"], true);
    assert_eq!(v["frozen"], true);
    assert!(!v["conflicted"].as_array().unwrap().is_empty());
    let v = parse(frozen_demo(6, 5, 2, 1_000_000));
    assert_eq!(v["found"], false);
}

#[test]
fn schedule_matches_sequential_round() {
    let v = parse(schedule_demo("torus", 6, "1/2", 9));
    assert_eq!(v["matches_sequential"], true);
    assert!(v["palette"].as_u64().unwrap() <= 17);
}

#[test]
fn bad_input_is_reported_not_thrown() {
    assert!(parse(dynamics_demo("pgg", "ring", 10, "3/2", 0, 5))["error"].is_string());
    assert!(parse(dynamics_demo("chess", "ring", 10, "", 0, 5))["error"].is_string());
    assert!(parse(dynamics_demo("pgg", "torus", 100, "1/2", 0, 5))["error"].is_string());
}
