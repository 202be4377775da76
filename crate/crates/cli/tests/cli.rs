use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn kingid(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kingid"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn kingid");
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(out)))
}

fn rational(v: &Value) -> (i64, i64) {
    (v["num"].as_i64().unwrap(), v["den"].as_i64().unwrap())
}

fn at_least(v: &Value, num: i64, den: i64) -> bool {
    let (n, d) = rational(v);
    n as i128 * den as i128 >= num as i128 * d as i128
}

fn construction() -> String {
    let out = kingid(&["gen", "diag", "--period", "7", "--residues", "1,3,6", "--width", "7", "--height", "7"], None);
    assert_eq!(code(&out), 0);
    stdout(&out)
}

fn empty_code(w: usize, h: usize) -> String {
    let mut s = format!("torus {w} {h}\n");
    for _ in 0..h {
        s.push_str(&".".repeat(w));
        s.push('\n');
    }
    s
}

#[test]
fn gen_pipes_into_verify() {
    let text = construction();
    let out = kingid(&["verify", "-"], Some(&text));
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("valid"));
}

#[test]
fn gen_output_round_trips() {
    let text = construction();
    assert_eq!(text.lines().count(), 8);
    let codewords: usize = text.lines().skip(1).map(|l| l.matches('#').count()).sum();
    assert_eq!(codewords, 21);
    // (x, y) with (x - y) mod 7 in {1, 3, 6}; the first row is y = 6.
    for (r, line) in text.lines().skip(1).enumerate() {
        let y = 6 - r as i64;
        for (x, ch) in line.chars().enumerate() {
            let member = [1, 3, 6].contains(&(x as i64 - y).rem_euclid(7));
            assert_eq!(ch == '#', member, "cell ({x}, {y})");
        }
    }
    let out = kingid(&["--json", "gen", "diag", "--period", "7", "--residues", "1,3,6", "--width", "7", "--height", "7"], None);
    assert_eq!(json(&out)["code"].as_str().unwrap(), text);
    let out = kingid(&["--json", "verify", "-"], Some(&text));
    let v = json(&out);
    assert_eq!(v["valid"], Value::Bool(true));
    assert_eq!(v["width"], 7);
}

#[test]
fn invalid_code_fails_verify() {
    let out = kingid(&["--json", "verify", "-"], Some(&empty_code(4, 5)));
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["valid"], Value::Bool(false));
    // Every position violates all three set kinds.
    assert_eq!(v["violations"].as_array().unwrap().len(), 3 * 20);
}

#[test]
fn malformed_file_reports_position() {
    let out = kingid(&["verify", "-"], Some("torus 4 4\n####\n##x#\n####\n####\n"));
    assert_eq!(code(&out), 64);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 3"), "{err}");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&kingid(&["bogus"], None)), 64);
    assert_eq!(code(&kingid(&["verify", "/nonexistent/file.code"], None)), 64);
    assert_eq!(code(&kingid(&["--jobs", "0", "audit"], None)), 64);
    assert_eq!(code(&kingid(&["discharge", "-", "--mode", "medium"], None)), 64);
    assert_eq!(code(&kingid(&["gen", "diag", "--period", "5", "--residues", "1", "--width", "7", "--height", "7"], None)), 64);
    assert_eq!(code(&kingid(&["lemma", "run", "no_such_lemma"], None)), 64);
    assert_eq!(code(&kingid(&["search", "--width", "3", "--height", "9"], None)), 64);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&kingid(&["--help"], None)), 0);
    assert_eq!(code(&kingid(&["--version"], None)), 0);
    assert_eq!(code(&kingid(&["lemma", "--help"], None)), 0);
}

#[test]
fn density_of_construction() {
    let out = kingid(&["--json", "density", "-"], Some(&construction()));
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(rational(&v["density"]), (3, 7));
    assert_eq!(rational(&v["frame_average"]), (36, 7));
    assert_eq!(rational(&v["bounds"]["bound_gap"]), (4, 777));
    assert_eq!(v["density"]["decimal"].as_str().unwrap(), "0.428571");
}

#[test]
fn discharge_full_certifies_construction() {
    let out = kingid(&["--json", "discharge", "-", "--mode", "full", "--dump-transfers"], Some(&construction()));
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(at_least(&v["min_charge"], 188, 37));
    assert!(at_least(&v["density_bound"], 47, 111));
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["transfers"].as_array().unwrap().len(), v["n_transfers"].as_u64().unwrap() as usize);
    assert!(v["anomalies"].as_array().unwrap().is_empty());

    let text = stdout(&kingid(&["discharge", "-", "--mode", "full"], Some(&construction())));
    assert!(text.contains("188/37"), "{text}");
    assert!(text.contains("47/111"), "{text}");
}

#[test]
fn discharge_simple_certifies_construction() {
    let out = kingid(&["--json", "discharge", "-", "--mode", "simple"], Some(&construction()));
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(at_least(&v["min_charge"], 5, 1));
    assert!(at_least(&v["density_bound"], 5, 12));
    assert!(v.get("transfers").is_none());
}

#[test]
fn discharge_invalid_code_fails() {
    let out = kingid(&["discharge", "-"], Some(&empty_code(6, 6)));
    assert_eq!(code(&out), 1);
}

#[test]
fn audit_json() {
    let out = kingid(&["--json", "audit"], None);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["all_hold"], Value::Bool(true));
    let value = |id: &str| {
        let item = v["items"].as_array().unwrap().iter().find(|i| i["id"] == id).unwrap_or_else(|| panic!("{id}"));
        rational(&item["value"])
    };
    assert_eq!(value("seven_two_four_frames"), (66, 37));
    assert_eq!(value("six_rule1a"), (67, 74));
    assert_eq!(value("density_bound"), (47, 111));
}

#[test]
fn lemma_run_obs_nc() {
    let out = kingid(&["lemma", "run", "obs_nc"], None);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Verified"));

    let out = kingid(&["--json", "lemma", "run", "obs_nc"], None);
    let v = json(&out);
    assert_eq!(v["all_passed"], Value::Bool(true));
    assert_eq!(v["scenarios"][0]["verdict"], "verified");
    assert_eq!(v["scenarios"][0]["variants"].as_array().unwrap().len(), 8);
}

#[test]
fn lemma_list_json() {
    let v = json(&kingid(&["--json", "lemma", "list"], None));
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    for id in ["lemma3_fourcorners", "obs_nc", "obs_co", "lemma4", "lemma5_A1", "lemma5_D", "lemma_1poor", "lemma_2poor"] {
        assert!(ids.contains(&id), "{id}");
    }
    assert_eq!(ids.iter().filter(|id| id.starts_with("lemma5_")).count(), 18);
}

#[test]
fn lemma_file_scenarios() {
    // A 4x4 window is a single frame: it always has four codewords, not always six.
    let weak = r#"{"id": "four", "window": {"x": 0, "y": 0, "w": 4, "h": 4},
        "conclusion": {"op": "count", "frame": [0, 0], "cmp": ">=", "k": 4}}"#;
    let out = kingid(&["lemma", "run", "--file", "-"], Some(weak));
    assert_eq!(code(&out), 0, "{}", stdout(&out));

    let strong = weak.replace("\"k\": 4", "\"k\": 6");
    let out = kingid(&["--json", "lemma", "run", "--file", "-"], Some(&strong));
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["scenarios"][0]["verdict"], "counterexample");

    let out = kingid(&["lemma", "run", "--file", "-"], Some("{\"id\": \"x\",\n \"conclusion\": 3}"));
    assert_eq!(code(&out), 64);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn lemma_budget_exhaustion_exits_2() {
    let out = kingid(&["--budget", "5", "lemma", "run", "lemma4"], None);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
}

#[test]
fn search_small_torus() {
    let out = kingid(&["--json", "search", "--width", "4", "--height", "4"], None);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["optimal"], Value::Bool(true));
    let lower = v["lower"].as_u64().unwrap();
    assert_eq!(v["upper"].as_u64(), Some(lower));
    let witness = v["witness"].as_str().unwrap();
    assert_eq!(witness.matches('#').count() as u64, lower);
    assert_eq!(code(&kingid(&["verify", "-"], Some(witness))), 0);

    let ub = (lower - 1).to_string();
    let out = kingid(&["search", "--width", "4", "--height", "4", "--ub", &ub], None);
    assert_eq!(code(&out), 1);

    let out = kingid(&["--budget", "1", "search", "--width", "6", "--height", "6"], None);
    assert_eq!(code(&out), 2);
}
