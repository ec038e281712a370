use std::path::Path;
use std::process::Command;

use netgame_cli::{config::parse_config, dispatch, load_config, ExperimentConfig};
use serde_json::Value;

fn netgame(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_netgame"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn call(dir: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["netgame".to_string()];
    for a in args {
        // Paths are resolved against the temp dir so the test never touches the cwd.
        argv.push(if a.ends_with(".json") || a.ends_with(".csv") {
            dir.join(a).display().to_string()
        } else {
            a.to_string()
        });
    }
    dispatch(argv)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_torus_writes_graph_json() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        call(
            dir.path(),
            &["gen", "--graph", "torus", "--n", "6", "--out", "g.json"]
        ),
        0
    );
    let doc = read_json(&dir.path().join("g.json"));
    assert_eq!(doc["n"], 36);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 72);
    assert_eq!(doc["max_degree"], 4);
    assert_eq!(doc["meta"]["generator"], "torus");
    let (net, _) = netgame::io::read_graph_file(&dir.path().join("g.json")).unwrap();
    assert!(net.is_regular(4));
}

#[test]
fn run_pgg_converges_within_two_rounds() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        call(
            dir.path(),
            &["gen", "--graph", "torus", "--n", "6", "--out", "g.json"]
        ),
        0
    );
    let code = call(
        dir.path(),
        &[
            "run",
            "--game",
            "pgg",
            "--c",
            "1/2",
            "--graph-file",
            "g.json",
            "--policy",
            "random",
            "--seed",
            "7",
            "--out",
            "traj.csv",
            "--report",
            "report.json",
        ],
    );
    assert_eq!(code, 0);
    let rows =
        netgame::io::read_trajectory(std::fs::File::open(dir.path().join("traj.csv")).unwrap())
            .unwrap();
    let last_switch = rows
        .iter()
        .filter(|r| r.switches > 0)
        .map(|r| r.round)
        .max()
        .unwrap_or(0);
    assert!(last_switch <= 2);
    assert_eq!(rows.last().unwrap().switches, 0);
    let report = read_json(&dir.path().join("report.json"));
    assert!(report["trace"]["convergence_round"].as_u64().unwrap() <= 2);
    assert_eq!(report["meta"]["seed"], 7);
    assert!(dir.path().join("traj.csv.meta.json").is_file());
}

#[test]
fn poa_pgg_instance_reports_seven_sixths() {
    let dir = tempfile::tempdir().unwrap();
    let code = call(
        dir.path(),
        &[
            "poa",
            "--family",
            "pgg-instance",
            "--d",
            "3",
            "--k",
            "2",
            "--c",
            "1/2",
            "--out",
            "report.json",
        ],
    );
    assert_eq!(code, 0);
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["poa"], "7/6");
    assert_eq!(report["meta"]["command"], "poa");
}

#[test]
fn max_listed_truncates_equilibria() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        call(
            dir.path(),
            &["gen", "--graph", "ring", "--n", "6", "--out", "g.json"]
        ),
        0
    );
    let code = call(
        dir.path(),
        &[
            "poa",
            "--family",
            "enumerate",
            "--graph-file",
            "g.json",
            "--game",
            "coloring",
            "--k",
            "3",
            "--max-listed",
            "5",
            "--out",
            "r.json",
        ],
    );
    assert_eq!(code, 0);
    let r = read_json(&dir.path().join("r.json"));
    let count = r["equilibrium_count"].as_u64().unwrap();
    assert_eq!(r["equilibria"].as_array().unwrap().len(), 5);
    assert_eq!(r["equilibria_elided"].as_u64().unwrap(), count - 5);
}

#[test]
fn deterministic_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let code = call(
            dir.path(),
            &[
                "run",
                "--deterministic",
                "--game",
                "coloring",
                "--k",
                "3",
                "--graph",
                "random-regular",
                "--n",
                "40",
                "--d",
                "3",
                "--seed",
                "11",
                "--report",
                "r.json",
            ],
        );
        assert_eq!(code, 0);
        outputs.push(std::fs::read(dir.path().join("r.json")).unwrap());
    }
    let (a, b) = (outputs[0].clone(), outputs[1].clone());
    assert!(a == b, "reruns differ");
    assert!(!String::from_utf8(a).unwrap().contains("timestamp"));
}

#[test]
fn every_subcommand_succeeds_and_embeds_meta() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        call(
            d,
            &[
                "gen",
                "--graph",
                "random-regular",
                "--n",
                "20",
                "--d",
                "3",
                "--girth",
                "5",
                "--out",
                "g.json"
            ]
        ),
        0
    );
    std::fs::write(
        d.join("p.json"),
        r#"{"profile": [0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#,
    )
    .unwrap();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        (
            "verify.json",
            vec![
                "verify",
                "--graph-file",
                "g.json",
                "--game",
                "minority",
                "--profile",
                "p.json",
                "--out",
                "verify.json",
            ],
        ),
        (
            "ineff.json",
            vec![
                "ineff",
                "--graph-file",
                "g.json",
                "--game",
                "minority",
                "--rounds",
                "3",
                "--trials",
                "10",
                "--out",
                "ineff.json",
            ],
        ),
        (
            "sim.json",
            vec!["simgame", "--n", "64", "--seed", "3", "--out", "sim.json"],
        ),
        (
            "frozen.json",
            vec![
                "frozen",
                "--n",
                "6",
                "--k",
                "4",
                "--seed",
                "1",
                "--out",
                "frozen.json",
            ],
        ),
        (
            "local.json",
            vec![
                "local-sim",
                "--graph-file",
                "g.json",
                "--game",
                "pgg",
                "--c",
                "1/3",
                "--rounds",
                "2",
                "--out",
                "local.json",
            ],
        ),
        (
            "minority.json",
            vec![
                "poa",
                "--family",
                "minority",
                "--graph-file",
                "g.json",
                "--out",
                "minority.json",
            ],
        ),
    ];
    for (file, args) in runs {
        assert_eq!(call(d, &args), 0, "{args:?}");
        let v = read_json(&d.join(file));
        assert!(v["meta"]["config"].is_object(), "{file} lacks meta");
    }
    let verify = read_json(&d.join("verify.json"));
    assert_eq!(verify["accepted"], false);
    assert_eq!(verify["is_nash_equilibrium"], false);
    let sim = read_json(&d.join("sim.json"));
    assert_eq!(sim["one_round_converged"], true);
    assert_eq!(sim["projection_is_ne"], true);
    let frozen = read_json(&d.join("frozen.json"));
    assert_eq!(frozen["found"], true);
    assert_eq!(frozen["accepted"], true);
    assert_eq!(read_json(&d.join("local.json"))["matches_sequential"], true);
    assert_eq!(read_json(&d.join("minority.json"))["discrepancy"], true);
}

#[test]
fn exit_codes_distinguish_usage_from_validation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = netgame(
        d,
        &[
            "run", "--game", "pgg", "--c", "3/2", "--graph", "ring", "--n", "5",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    assert!(stderr.contains("0 < c < 1"));

    assert_eq!(
        netgame(d, &["run", "--no-such-flag"]).status.code(),
        Some(2)
    );
    assert_eq!(netgame(d, &["teleport"]).status.code(), Some(2));
    assert_eq!(
        netgame(d, &["run", "--game", "pgg", "--graph", "ring"])
            .status
            .code(),
        Some(2)
    );
    // 3^21 profiles exceed the enumeration guard.
    assert_eq!(
        call(
            d,
            &["gen", "--graph", "ring", "--n", "21", "--out", "big.json"]
        ),
        0
    );
    let out = netgame(
        d,
        &[
            "poa",
            "--family",
            "enumerate",
            "--graph-file",
            "big.json",
            "--game",
            "coloring",
            "--k",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("guard"));
    assert_eq!(netgame(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn thread_count_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_netgame"))
            .current_dir(dir.path())
            .env("NETGAME_THREADS", threads)
            .args([
                "ineff",
                "--deterministic",
                "--graph",
                "ring",
                "--n",
                "12",
                "--game",
                "minority",
                "--rounds",
                "2",
                "--out",
                "r.json",
            ])
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(run("1"), Some(0));
    let one = std::fs::read(dir.path().join("r.json")).unwrap();
    assert_eq!(run("4"), Some(0));
    assert!(
        one == std::fs::read(dir.path().join("r.json")).unwrap(),
        "thread count changed the output"
    );
    assert_eq!(run("zero"), Some(1));
}

const MINIMAL: &str =
    r#"{"seed": 3, "graph": {"generator": "ring", "n": 8}, "game": {"game": "pgg", "c": "1/2"}}"#;

#[test]
fn minimal_config_round_trips() {
    let cfg = parse_config(MINIMAL, Path::new(".")).unwrap();
    let text = serde_json::to_string(&cfg).unwrap();
    let again: ExperimentConfig = parse_config(&text, Path::new(".")).unwrap();
    assert_eq!(cfg, again);
    assert_eq!(cfg.dynamics.trials, 1);
}

#[test]
fn config_rejects_bad_cost_unknown_keys_and_missing_files() {
    let err = parse_config(&MINIMAL.replace("1/2", "3/2"), Path::new(".")).unwrap_err();
    assert!(err.to_string().contains("0 < c < 1"), "{err}");
    assert_eq!(err.exit_code(), 1);

    let err = parse_config(
        &MINIMAL.replace("\"seed\": 3", "\"seed\": 3, \"colour\": 1"),
        Path::new("."),
    )
    .unwrap_err();
    assert!(err.to_string().contains("colour"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"seed": 1, "graph": {"generator": "file", "path": "missing.json"}, "game": {"game": "minority"}}"#).unwrap();
    let err = load_config(&path).unwrap_err();
    assert!(err.to_string().contains("missing.json"), "{err}");
}

#[test]
fn config_driven_run_with_trials() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    std::fs::write(
        &path,
        r#"{
            "seed": 5,
            "graph": {"generator": "random_regular", "n": 200, "d": 3},
            "transforms": [{"op": "cut_short_cycles", "girth": 5}],
            "game": {"game": "pgg", "c": "1/3"},
            "dynamics": {"trials": 20},
            "outputs": {"report": "out.json"}
        }"#,
    )
    .unwrap();
    let out = netgame(
        dir.path(),
        &["run", "--deterministic", "--config", "exp.json"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = read_json(&dir.path().join("out.json"));
    assert_eq!(report["all_converged"], true);
    assert!(report["max_convergence_round"].as_u64().unwrap() <= 2);
    assert_eq!(report["trials"].as_array().unwrap().len(), 20);
    assert_eq!(report["meta"]["config"]["dynamics"]["trials"], 20);
}
