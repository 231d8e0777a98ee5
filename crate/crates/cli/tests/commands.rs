use std::process::{Command, Output};

use serde_json::Value;

fn quasipolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasipolar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = quasipolar(&all);
    (
        o.status.code().unwrap(),
        serde_json::from_slice(&o.stdout).unwrap(),
    )
}

const SEED: [&str; 6] = ["--modulus", "12", "--v", "5", "--u", "2"];

fn seeded(command: &str, rest: &[&str]) -> Vec<String> {
    std::iter::once(command)
        .chain(SEED)
        .chain(rest.iter().copied())
        .map(String::from)
        .collect()
}

fn run(args: &[String]) -> Output {
    quasipolar(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn quasipolarities_of_twelve() {
    let o = quasipolar(&["quasipolarities", "--modulus", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("e^2.5 mod 12"));
    assert!(out.contains("count: 12"));
    assert_eq!(out.lines().filter(|l| l.starts_with("e^")).count(), 12);
}

#[test]
fn quasipolarities_of_odd_modulus_are_empty() {
    let o = quasipolar(&["quasipolarities", "--modulus", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count: 0"));
}

#[test]
fn quasipolarities_json() {
    let (code, doc) = json(&["quasipolarities", "--modulus", "12"]);
    assert_eq!(code, 0);
    assert_eq!(doc["command"], "quasipolarities");
    assert_eq!(doc["count"], 12);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 12);
    assert!(results.contains(&serde_json::json!({ "u": 2, "v": 5 })));
}

#[test]
fn zero_modulus_is_invalid() {
    let o = quasipolar(&["quasipolarities", "--modulus", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn lift_by_two() {
    let o = run(&seeded("lift", &["--prime", "2"]));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("e^4.17 mod 24"));
    assert!(out.contains("KPrimeOdd (k'=1)"));

    let (code, doc) = json(&[
        "lift",
        "--modulus",
        "12",
        "--v",
        "5",
        "--u",
        "2",
        "--prime",
        "2",
    ]);
    assert_eq!(code, 0);
    let c = &doc["results"][0];
    assert_eq!(
        (c["t"].as_u64(), c["r"].as_u64(), c["w"].as_u64()),
        (Some(1), Some(17), Some(4))
    );
    assert_eq!(c["k_prime"], 12);
    assert_eq!(doc["rejections"][0]["t"], 0);
    assert_eq!(doc["rejections"][0]["reason"], "KPrimeOdd");
    assert_eq!(doc["rejections"][0]["k_prime"], 1);
    assert!(doc.get("oracle_agreement").is_none());
}

#[test]
fn lift_by_five_with_oracle() {
    let args: Vec<String> = ["--json".to_string()]
        .into_iter()
        .chain(seeded("lift", &["--prime", "5", "--exhaustive-check"]))
        .collect();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rw: Vec<(u64, u64)> = doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["r"].as_u64().unwrap(), c["w"].as_u64().unwrap()))
        .collect();
    assert_eq!(rw, vec![(29, 10), (41, 10)]);
    assert_eq!(doc["oracle_agreement"]["agree"], true);
}

#[test]
fn lift_rejects_non_quasipolarity() {
    let o = quasipolar(&[
        "lift",
        "--modulus",
        "12",
        "--v",
        "5",
        "--u",
        "3",
        "--prime",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a quasipolarity"));
}

#[test]
fn lift_rejects_composite_prime() {
    let o = run(&seeded("lift", &["--prime", "6"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("6 is not prime"));
}

#[test]
fn lift_without_certificates_exits_one() {
    // e^1.3 on Z_4: t=0 has odd k', t=1 leaves e^2.3 with fixed points on Z_8.
    let o = quasipolar(&[
        "lift",
        "--modulus",
        "4",
        "--v",
        "3",
        "--u",
        "1",
        "--prime",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("certificates: 0"));
    assert!(out.contains("TargetHasFixedPoints"));
}

#[test]
fn verify_doubling_square() {
    let o = run(&seeded(
        "verify",
        &["--prime", "2", "--r", "17", "--w", "4"],
    ));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("true").count(), 3);
}

#[test]
fn verify_detects_non_commuting_square() {
    let args: Vec<String> = ["--json".to_string()]
        .into_iter()
        .chain(seeded(
            "verify",
            &["--prime", "2", "--r", "17", "--w", "16"],
        ))
        .collect();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["results"]["commutes"], false);
}

#[test]
fn verify_detects_fixed_points_in_target() {
    let args: Vec<String> = ["--json".to_string()]
        .into_iter()
        .chain(seeded("verify", &["--prime", "2", "--r", "5", "--w", "4"]))
        .collect();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["results"]["commutes"], true);
    assert_eq!(doc["results"]["target_is_quasipolarity"], false);
    assert_eq!(doc["results"]["source_is_quasipolarity"], true);
}

#[test]
fn verify_rejects_malformed_input() {
    let o = run(&seeded(
        "verify",
        &["--prime", "2", "--r", "abc", "--w", "4"],
    ));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&seeded("verify", &["--prime", "2", "--r", "2", "--w", "4"]));
    assert_eq!(o.status.code(), Some(2), "r = 2 is not a unit mod 24");
}

#[test]
fn dichotomies_with_given_polarity() {
    let o = quasipolar(&["dichotomies", "--modulus", "12", "--polarity", "2,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{0,3,4,7,8,9} mod 12"));
}

#[test]
fn dichotomies_of_two() {
    let (code, doc) = json(&["dichotomies", "--modulus", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["results"].as_array().unwrap().len(), 1);
    assert_eq!(doc["results"][0]["polarity"], "e^1.1 mod 2");
    assert_eq!(
        doc["results"][0]["dichotomies"],
        serde_json::json!(["{0} mod 2", "{1} mod 2"])
    );
}

#[test]
fn dichotomy_search_respects_cap() {
    assert_eq!(
        quasipolar(&["dichotomies", "--modulus", "40"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        quasipolar(&["dichotomies", "--modulus", "9"]).status.code(),
        Some(2)
    );
    let o = quasipolar(&["--cap", "10", "dichotomies", "--modulus", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(
        quasipolar(&["dichotomies", "--modulus", "12", "--polarity", "3,5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn parallel_output_matches_sequential() {
    let sequential = quasipolar(&["dichotomies", "--modulus", "16"]);
    let parallel = quasipolar(&["--parallel", "dichotomies", "--modulus", "16"]);
    assert_eq!(sequential.status.code(), Some(0));
    assert_eq!(sequential.stdout, parallel.stdout);
}

#[test]
fn tower_of_one_stage() {
    let (code, doc) = json(&[
        "tower",
        "--modulus",
        "12",
        "--v",
        "5",
        "--u",
        "2",
        "--primes",
        "2",
    ]);
    assert_eq!(code, 0);
    let stages = doc["results"].as_array().unwrap();
    assert_eq!(stages.len(), 1);
    let c = &stages[0]["branches"][0]["certificates"][0];
    assert_eq!((c["r"].as_u64(), c["w"].as_u64()), (Some(17), Some(4)));
}

#[test]
fn tower_five_then_two_is_oracle_validated() {
    let args: Vec<String> = ["--json".to_string()]
        .into_iter()
        .chain(seeded("tower", &["--primes", "5,2", "--exhaustive-check"]))
        .collect();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let stages = doc["results"].as_array().unwrap();
    let moduli: Vec<u64> = stages
        .iter()
        .map(|s| s["modulus"].as_u64().unwrap())
        .collect();
    assert_eq!(moduli, vec![60, 120]);
    assert_eq!(doc["oracle_agreement"]["agree"], true);
    let checked = doc["oracle_agreement"]["branches"]
        .as_array()
        .unwrap()
        .len();
    let branches: usize = stages
        .iter()
        .map(|s| s["branches"].as_array().unwrap().len())
        .sum();
    assert_eq!(checked, branches);
}

#[test]
fn tower_rejects_composite_entry() {
    let o = run(&seeded("tower", &["--primes", "4"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4 is not prime"));
}

#[test]
fn dead_tower_exits_one() {
    let o = quasipolar(&[
        "tower",
        "--modulus",
        "12",
        "--v",
        "7",
        "--u",
        "3",
        "--primes",
        "2,5",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = seeded("tower", &["--primes", "2,3,5"]);
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn unknown_command_is_a_usage_error() {
    assert_eq!(quasipolar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(quasipolar(&["--help"]).status.code(), Some(0));
}
