use std::path::PathBuf;
use std::process::{Command, Output as ProcOutput};

use serde::de::DeserializeOwned;
use serde::Serialize;
use weylhull::absorption::AbsorptionReport;
use weylhull::simulate::SimulationReport;
use weylhull::verify::Report;
use weylhull_cli::report::*;

fn weylhull(args: &[&str]) -> ProcOutput {
    Command::new(env!("CARGO_BIN_EXE_weylhull"))
        .args(args)
        .env_remove("WEYLHULL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &ProcOutput) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &ProcOutput) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Runs in-process and returns (exit code, stdout).
fn run(args: &[&str]) -> (u8, String) {
    let argv = std::iter::once("weylhull").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = weylhull_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

/// Parses `text` as `T` and checks that re-serializing reproduces it exactly.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) -> Output<T> {
    let parsed: Output<T> = serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, text);
    let reparsed: Output<T> = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, parsed);
    parsed
}

fn b3_file() -> PathBuf {
    let path = std::env::temp_dir().join(format!("weylhull-b3-{}.arr", std::process::id()));
    std::fs::write(&path, "# type B, rank 3\ndim 3\n1 0 0\n0 1 0\n0 0 1\n1 -1 0\n1 1 0\n1 0 -1\n1 0 1\n0 1 -1\n0 1 1\n").unwrap();
    path
}

#[test]
fn exact_json_for_walk_b() {
    let o = weylhull(&["exact", "--family", "walk-B", "--steps", "10", "--dim", "2", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc = round_trip::<AbsorptionReport>(&stdout(&o));
    let r = doc.result;
    assert_eq!((r.n, r.d), (10, 2));
    assert_eq!(r.absorb.to_rational().unwrap() + r.non_absorb.to_rational().unwrap(), weylhull::ExactRational::from_integer(1.into()));
    assert_eq!(doc.config["family"], "walk-B");

    let (code, text) = run(&["exact", "--family", "walk-B", "--steps", "2", "--dim", "1"]);
    assert_eq!(code, 0);
    let r = round_trip::<AbsorptionReport>(&text).result;
    assert_eq!((r.absorb.num.as_str(), r.absorb.den.as_str()), ("1", "4"));
}

#[test]
fn exact_float_mode_and_joint_steps() {
    let (code, text) = run(&["exact", "--family", "walk-B", "--steps", "100000", "--dim", "3", "--float"]);
    assert_eq!(code, 0);
    let r = round_trip::<FloatReport>(&text).result;
    assert!((r.absorb + r.non_absorb - 1.0).abs() < 1e-12);

    let (code, text) = run(&["exact", "--family", "joint-B", "--steps", "1,1,1", "--dim", "2"]);
    assert_eq!(code, 0);
    let joint = round_trip::<AbsorptionReport>(&text).result;
    let (_, text) = run(&["exact", "--family", "wendel", "--steps", "3", "--dim", "2"]);
    let wendel = round_trip::<AbsorptionReport>(&text).result;
    assert_eq!(joint.non_absorb, wendel.non_absorb);
    assert_eq!((wendel.non_absorb.num.as_str(), wendel.non_absorb.den.as_str()), ("3", "4"));
}

#[test]
fn simulate_matches_exact_value() {
    let o = weylhull(&[
        "simulate", "--model", "gaussian", "--family", "walk-B", "--steps", "3", "--dim", "1", "--samples", "100000",
        "--seed", "42",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# weylhull") && lines[0].contains("seed=42"));
    assert_eq!(lines[1], SimulationReport::CSV_HEADER);
    let fields: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(fields.len(), SimulationReport::CSV_HEADER.split(',').count());
    let p_hat: f64 = fields[6].parse().unwrap();
    let exact: f64 = fields[10].parse().unwrap();
    let z: f64 = fields[11].parse().unwrap();
    assert_eq!(exact, 0.375);
    assert!((p_hat - 0.375).abs() < 0.01);
    assert!(z.abs() < 4.0);
}

#[test]
fn simulate_json_round_trips() {
    let (code, text) = run(&[
        "simulate", "--model", "lattice-simple", "--family", "walk-B", "--steps", "6", "--dim", "2", "--samples", "2000",
        "--format", "json", "--seed", "0x2a",
    ]);
    assert_eq!(code, 0);
    let doc = round_trip::<SimulationReport>(&text);
    assert_eq!(doc.result.estimate.seed, 42);
    assert_eq!(doc.config["seed"], "42");
    assert!(doc.result.estimate.interior_fraction.is_some());
}

#[test]
fn simulate_from_matrix_file() {
    let path = std::env::temp_dir().join(format!("weylhull-matrix-{}.txt", std::process::id()));
    std::fs::write(&path, "1 2 -0.5\n0.3 -1 2\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, text) = run(&[
        "simulate", "--model", "matrix", "--matrix-file", p, "--family", "walk-B", "--steps", "3", "--dim", "2",
        "--samples", "500",
    ]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains(",matrix,"));
    let (code, _) = run(&["simulate", "--model", "matrix", "--family", "walk-B", "--steps", "3", "--dim", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn charpoly_of_b3() {
    let f = b3_file();
    let o = weylhull(&["arrangement", "charpoly", "--file", f.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l == "a: [15, 23, 9, 1]"), "{}", stdout(&o));

    let (_, text) = run(&["arrangement", "charpoly", "--reflection", "B3", "--format", "json"]);
    let r = round_trip::<CharpolyReport>(&text).result;
    assert_eq!(r.a, ["15", "23", "9", "1"]);
    assert_eq!(r.regions, "48");
}

#[test]
fn regions_and_intersections() {
    let f = b3_file();
    let (code, text) = run(&["arrangement", "regions", "--file", f.to_str().unwrap(), "--list", "--format", "json"]);
    assert_eq!(code, 0);
    let r = round_trip::<RegionsReport>(&text).result;
    assert_eq!(r.regions, 48);
    assert_eq!(r.zaslavsky, "48");
    assert_eq!(r.sign_vectors.unwrap().len(), 48);

    for codim in ["1", "2", "3"] {
        let (code, text) = run(&["arrangement", "intersect", "--reflection", "D4", "--codim", codim, "--format", "json"]);
        assert_eq!(code, 0);
        let r = round_trip::<IntersectReport>(&text).result;
        assert!(r.general_position);
        assert_eq!(r.count.to_string(), r.predicted);
    }
    // the diagonal line lies in several mirrors of B3
    let (code, text) =
        run(&["arrangement", "intersect", "--reflection", "B3", "--basis", "1,1,1", "--mode", "closed", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(!round_trip::<IntersectReport>(&text).result.general_position);
}

#[test]
fn cone_commands() {
    let (code, text) = run(&["cone", "volumes", "--type", "b", "--n", "3"]);
    assert_eq!(code, 0);
    let r = round_trip::<VolumesReport>(&text).result;
    let v: Vec<(&str, &str)> = r.volumes.iter().map(|x| (x.num.as_str(), x.den.as_str())).collect();
    assert_eq!(v, [("5", "16"), ("23", "48"), ("3", "16"), ("1", "48")]);
    assert_eq!((r.sum.num.as_str(), r.sum.den.as_str()), ("1", "1"));

    let (code, text) = run(&["cone", "volumes", "--halfspaces", "5", "--n", "3"]);
    assert_eq!(code, 0);
    round_trip::<VolumesReport>(&text);

    let (code, text) = run(&["cone", "steiner", "--type", "a", "--n", "3", "--samples", "5000", "--lambda", "0.25,1"]);
    assert_eq!(code, 0);
    let r = round_trip::<SteinerReport>(&text).result;
    assert_eq!(r.cdf.len(), 2);
    assert_eq!(r.cdf[1].value, 1.0);
    assert!(r.check.ks_distance < 0.05);

    let (code, text) = run(&["cone", "crofton", "--type", "b", "--n", "3", "--codim", "1", "--samples", "20000"]);
    assert_eq!(code, 0);
    let r = round_trip::<CroftonReport>(&text).result;
    assert_eq!((r.exact.num.as_str(), r.exact.den.as_str()), ("3", "16"));
    assert!(r.z_score.abs() < 4.0);
}

#[test]
fn asympt_tables() {
    let (code, text) = run(&["asympt", "--regime", "fixed", "--type", "a", "--dim", "2", "--ns", "100,1000"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "n,d,exact,asymptotic,ratio");
    assert_eq!(lines.len(), 4);

    for regime in [["--regime", "clt", "--a", "-1"], ["--regime", "ld", "--x", "0.5"]] {
        let mut args = vec!["asympt", "--format", "json", "--ns", "1000,10000"];
        args.extend(regime);
        let (code, text) = run(&args);
        assert_eq!(code, 0, "{text}");
        let r = round_trip::<AsymptReport>(&text).result;
        assert_eq!(r.rows.len(), 2);
    }
    let (code, _) = run(&["asympt", "--regime", "fixed", "--dim", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn coeffs_output() {
    let (code, text) = run(&["coeffs", "--family", "stirling", "--n", "4"]);
    assert_eq!(code, 0);
    let r = round_trip::<CoeffsReport>(&text).result;
    assert_eq!(r.coefficients, ["0", "6", "11", "6", "1"]);
    assert_eq!(r.total, "24");
    let (_, text) = run(&["coeffs", "--family", "d", "--n", "40", "--max-degree", "2"]);
    let r = round_trip::<CoeffsReport>(&text).result;
    assert_eq!(r.coefficients.len(), 3);
    assert!(r.coefficients[0].len() > 20, "big integers stay exact");
}

#[test]
fn usage_errors_exit_two() {
    let o = weylhull(&["exact", "--family", "walk-B", "--steps", "3", "--dim", "1", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("--bogus") && e.contains("Usage: weylhull exact"), "{e}");

    let o = weylhull(&["exact", "--family", "bridge-A", "--steps", "1", "--dim", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage: weylhull exact"));

    for args in [
        &["exact", "--family", "walk-Q", "--steps", "3", "--dim", "1"][..],
        &["simulate", "--family", "walk-B", "--steps", "3", "--dim", "1", "--seed", "soon"],
        &["simulate", "--family", "walk-B", "--steps", "3", "--dim", "1", "--format", "plain"],
        &["arrangement", "charpoly", "--reflection", "Q3"],
        &["arrangement", "charpoly", "--file", "/nonexistent/x.arr"],
        &["verify", "everything"],
        &["--threads", "0", "coeffs", "--family", "b", "--n", "3"],
    ] {
        let (code, _) = run(args);
        assert_eq!(code, 2, "{args:?}");
    }
    let o = weylhull(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("simulate"));
}

#[test]
fn threads_env_fallback() {
    let o = Command::new(env!("CARGO_BIN_EXE_weylhull"))
        .args(["coeffs", "--family", "b", "--n", "3"])
        .env("WEYLHULL_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--threads"));
}

#[test]
fn output_is_reproducible_and_thread_independent() {
    let base = ["simulate", "--family", "walk-D", "--steps", "5", "--dim", "2", "--samples", "3000", "--format", "json"];
    let a = weylhull(&base);
    let b = weylhull(&base);
    assert_eq!(a.stdout, b.stdout);
    let mut one = vec!["--threads", "1"];
    one.extend(base);
    let mut three = vec!["--threads", "3"];
    three.extend(base);
    assert_eq!(weylhull(&one).stdout, a.stdout);
    assert_eq!(weylhull(&three).stdout, a.stdout);
    let doc = round_trip::<SimulationReport>(&stdout(&a));
    assert_eq!(doc.config["seed"], weylhull::sampling::DEFAULT_SEED.to_string());
}

#[test]
fn random_seed_is_echoed_and_replayable() {
    let args = ["cone", "crofton", "--type", "a", "--n", "3", "--codim", "1", "--samples", "2000"];
    let mut random = args.to_vec();
    random.extend(["--seed", "random"]);
    let (_, text) = run(&random);
    let doc = round_trip::<CroftonReport>(&text);
    let seed = doc.config["seed"].clone();
    assert_eq!(doc.result.estimate.seed.to_string(), seed);
    let mut replay = args.to_vec();
    replay.extend(["--seed", seed.as_str()]);
    let (_, again) = run(&replay);
    assert_eq!(round_trip::<CroftonReport>(&again).result, doc.result);
}

#[test]
fn verify_exit_codes() {
    let o = weylhull(&["verify", "combinatorics"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[ 1]"));

    let (code, text) = run(&["verify", "arrangements", "--format", "json"]);
    assert_eq!(code, 0);
    let r: Output<Report> = serde_json::from_str(&text).unwrap();
    assert!(r.result.passed());
    assert!(r.result.checks.iter().any(|c| c.criterion == Some(3)));

    // the critical-window criterion fails at the required tolerance
    let o = weylhull(&["verify", "asymptotics"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL [11]")));
}
