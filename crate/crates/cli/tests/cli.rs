use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partorder")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("partorder-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const L1: &str = "[2,2,2,2]";
const M1: &str = "[4,1,1,1,1,1,1,1,1]";
const M2: &str = "[3,3,3]";
const L2: &str = "[8,8,8,8,4,4,4,4]";
const M3: &str = r#"{"base":2,"counts":[16,16,0,0,1]}"#;
const L3: &str = "[4,2,2]";
const M4: &str = "[5,3]";

#[test]
fn stable_query_reports_catalyst() {
    let lhs = scratch("l1.json", L1);
    let rhs = scratch("m1.json", M1);
    let o = run(&["check", "stable", lhs.to_str().unwrap(), rhs.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("stable: HOLDS"), "{text}");
    assert!(text.contains("nu = [2,1,1]"), "{text}");
    assert!(text.starts_with("lhs l1\nrhs m1"), "{text}");

    let o = run(&["check", "stable", "--lhs", L1, "--rhs", M1, "--json"]);
    let v = json(&o);
    assert_eq!(v["stable"]["status"], "holds");
    assert_eq!(v["stable"]["nu"], serde_json::json!([2, 1, 1]));
    assert_eq!(v["stable"]["catalyst"], serde_json::json!({"base": 2, "counts": [2, 1]}));
}

#[test]
fn embedding_failure_exits_one() {
    let o = run(&["check", "embed", L1, M2]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("embed: FAILS"));
}

#[test]
fn bulk_equality_has_isolating_interval() {
    let o = run(&["check", "bulk", L2, M3, "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let eq = &v["bulk"]["equalities"][0];
    assert_eq!(eq["exact"], true);
    assert_eq!(eq["touch"], true);
    let cert = &eq["certificate"];
    assert_eq!(cert["factor"], serde_json::json!([-4, -2, 1]));
    assert_eq!(cert["verified"], true);
    let frac = |s: &str| {
        let (p, q) = s.split_once('/').unwrap();
        p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap()
    };
    let (lo, hi) = (frac(cert["lo"].as_str().unwrap()), frac(cert["hi"].as_str().unwrap()));
    let golden = 1.0 + 5f64.sqrt();
    assert!(lo <= golden && golden <= hi && hi - lo < 1e-9, "[{lo}, {hi}]");
    assert!((eq["s"].as_f64().unwrap() - golden.log2()).abs() < 1e-9);
}

#[test]
fn exit_codes_follow_verdicts_on_separating_pairs() {
    let cases: &[(&str, &str, &str, i32)] = &[
        ("stable", L1, M1, 0),
        ("supermajorize", L1, M1, 1),
        ("embed", L1, M1, 1),
        ("supermajorize", L1, M2, 0),
        ("embed", L1, M2, 1),
        ("bulk", L2, M3, 0),
        ("stable", L2, M3, 1),
        ("supermajorize", L2, M3, 1),
        ("supermajorize", L3, M4, 0),
        ("stable", L3, M4, 1),
        ("embed", "[3,2,2]", "[4,3]", 0),
        ("bulk", L1, M1, 0),
    ];
    for &(rel, l, m, want) in cases {
        let o = run(&["check", rel, l, m]);
        assert_eq!(code(&o), want, "check {rel} {l} {m}: {}", stdout(&o));
    }
}

#[test]
fn failing_threshold_and_refutations_are_reported() {
    let v = json(&run(&["check", "supermajorize", L1, M1, "--json"]));
    assert_eq!(v["supermajorize"]["failing_threshold"], 2);
    assert_eq!(v["supermajorize"]["lhs_tail"], 8);
    assert_eq!(v["supermajorize"]["rhs_tail"], 4);

    let v = json(&run(&["check", "stable", L3, M4, "--json"]));
    assert_eq!(v["stable"]["refutation"]["kind"], "tight_valuation");
    assert_eq!(v["stable"]["refutation"]["prime"], 2);

    let v = json(&run(&["check", "stable", L2, M3, "--json"]));
    assert_eq!(v["stable"]["refutation"]["kind"], "norm_equality");
}

#[test]
fn check_all_combines_the_four_relations() {
    let o = run(&["check", "all", L3, M4, "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    for key in ["embed", "supermajorize", "bulk", "stable"] {
        assert!(v[key]["status"].is_string(), "{key}");
    }
    let o = run(&["check", "all", "[3,2,2]", "[4,3]"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn budget_exhaustion_exits_two() {
    let o = run(&["check", "embed", "[4,4,3,3,2]", "[6,5,5]", "--budget", "1"]);
    assert_eq!(code(&o), 2);
    let o = run(&[
        "check",
        "stable",
        r#"{"base":2,"counts":[0,0,6,2]}"#,
        r#"{"base":2,"counts":[4,8,0,3]}"#,
        "--max-steps",
        "2",
        "--json",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["stable"]["unknown_reason"], "step budget exhausted");
    // no common base and no direct embedding
    assert_eq!(code(&run(&["check", "stable", L1, M2])), 2);
}

#[test]
fn input_and_usage_errors() {
    assert_eq!(code(&run(&["check", "embed", "[0,1]", "[1]"])), 65);
    assert_eq!(code(&run(&["check", "embed", "[-2]", "[1]"])), 65);
    assert_eq!(code(&run(&["check", "embed", r#"{"entries":[1],"counts":[1]}"#, "[1]"])), 65);
    assert_eq!(code(&run(&["check", "embed", "[1", "[1]"])), 65);
    assert_eq!(code(&run(&["check", "embed", "[3]", "[3]", "--base", "2"])), 65);
    assert_eq!(code(&run(&["check", "frobnicate", "[1]", "[1]"])), 64);
    assert_eq!(code(&run(&["check", "embed", "[1]"])), 64);
    assert_eq!(code(&run(&["check", "embed", "/no/such/file.json", "[1]"])), 64);
    assert_eq!(code(&run(&["check", "bulk", "[1]", "[1]", "--tol", "-1"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn repro_reproduces_every_claim() {
    let o = run(&["repro"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("10/10 claims reproduced"));
    let v = json(&run(&["repro", "--json"]));
    assert_eq!(v["total"], 10);
    assert_eq!(v["reproduced"], 10);
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["reproduced"] == true));
}

#[test]
fn generators_are_seeded_and_valid() {
    let a = stdout(&run(&["gen", "powerq", "--base", "2", "--levels", "4", "--seed", "7"]));
    let b = stdout(&run(&["gen", "powerq", "--base", "2", "--levels", "4", "--seed", "7"]));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(a.trim()).unwrap();
    assert_eq!(v["name"], "powerq-seed7-0");
    assert_eq!(v["base"], 2);
    assert_eq!(v["counts"].as_array().unwrap().len(), 4);

    let v: Value = serde_json::from_str(stdout(&run(&["gen", "divisible", "--len", "5", "--seed", "1"])).trim()).unwrap();
    let e: Vec<u64> = v["entries"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(e.len(), 5);
    assert!(e.windows(2).all(|w| w[0] % w[1] == 0), "{e:?}");

    let out = stdout(&run(&["gen", "random", "--max", "32", "--len", "6", "--count", "20"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 20);
    for l in lines {
        let v: Value = serde_json::from_str(l).unwrap();
        assert!(v["name"].as_str().unwrap().starts_with("random-seed"));
        let e = v["entries"].as_array().unwrap();
        assert!(!e.is_empty() && e.len() <= 6);
        assert!(e.iter().all(|x| (1..=32).contains(&x.as_u64().unwrap())));
        // every generated document is accepted back as input
        assert_eq!(code(&run(&["check", "embed", l, l])), 0);
    }
    assert_eq!(code(&run(&["gen", "powerq", "--base", "1"])), 64);
}

#[test]
fn conjecture_scan_filters_and_tabulates() {
    let empty = scratch("empty.ndjson", "");
    let o = run(&["conjecture-scan", empty.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["rows"], serde_json::json!([]));
    assert_eq!(v["counts"]["pairs"], 0);

    let corpus = format!(
        "{}\n{}\n",
        r#"{"name":"example","lhs":{"entries":[2,2,2,2]},"rhs":{"entries":[4,1,1,1,1,1,1,1,1]}}"#,
        r#"{"name":"tight","lhs":{"base":2,"counts":[0,2,1]},"rhs":{"entries":[4,4]}}"#
    );
    let path = scratch("corpus.ndjson", &corpus);
    let v = json(&run(&["conjecture-scan", path.to_str().unwrap(), "--json"]));
    assert_eq!(v["excluded"][0]["name"], "example");
    assert_eq!(v["excluded"][0]["reason"], "not tight at s=1: 8 vs 12");
    assert_eq!(v["rows"][0]["name"], "tight");
    assert_eq!(v["rows"][0]["status"], "holds");
    assert!(v["rows"][0]["steps"].is_u64());
    let text = stdout(&run(&["conjecture-scan", path.to_str().unwrap()]));
    assert!(text.contains("holds 1, fails 0, unknown 0"), "{text}");

    let bad = scratch("bad.ndjson", "{\"lhs\": [1]}\n");
    assert_eq!(code(&run(&["conjecture-scan", bad.to_str().unwrap()])), 65);
}
