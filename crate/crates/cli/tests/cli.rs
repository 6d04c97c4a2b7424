use std::path::Path;
use std::process::{Command, Output};

fn tdi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = tdi(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn theta_values() {
    let o = tdi(&["theta", "--g6", "Dhc"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "value:"), "2.23606798");
    assert_eq!(field(&stdout(&tdi(&["theta", "--g6", "A_"])), "value:"), "1");
    assert_eq!(field(&stdout(&tdi(&["theta", "--g6", "C?"])), "value:"), "4");
    for variant in ["theta_prime", "theta_plus", "trace"] {
        let v = json(&["theta", "--g6", "Dhc", "--variant", variant]);
        let val = v["report"]["value"].as_f64().unwrap();
        assert!((val - 5f64.sqrt()).abs() < 1e-6, "{variant}: {val}");
    }
}

#[test]
fn theta_reports_dual_parts_and_primal() {
    let v = json(&["theta", "--g6", "Bw", "--show-primal"]);
    let r = &v["report"];
    assert!((r["dual"]["eta"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(r["dual"]["y"].as_array().unwrap().len(), 3);
    assert_eq!(r["primal"].as_array().unwrap().len(), 4);
    assert_eq!(v["config"]["command"], "theta");
}

#[test]
fn cover_values_and_certificate() {
    let o = tdi(&["cover", "--g6", "Dhc"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "cover value:"), "3");
    assert_eq!(field(&stdout(&o), "round trip:"), "true");
    let v = json(&["cover", "--g6", "Bw"]);
    assert_eq!(v["report"]["value"], 1);
    assert_eq!(v["report"]["certificate"]["eta"], 1);

    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.json", "[0, 0, 0, 0, 0]");
    let v = json(&["cover", "--g6", "Dhc", "--weights", &w]);
    assert_eq!(v["report"]["value"], 0);
}

#[test]
fn perfect_and_chain() {
    let v = json(&["perfect", "--g6", "Dhc"]);
    assert_eq!(v["report"]["perfect"], false);
    assert_eq!(v["report"]["chi"], 3);
    let v = json(&["chain", "--g6", "Dhc"]);
    let c = &v["report"]["chain"];
    assert_eq!(c["ordered"], true);
    assert_eq!(c["isdp"], 2.0);
    assert_eq!(c["isdd"], 3.0);
}

#[test]
fn tdi_audit_single_graphs() {
    let v = json(&["tdi-audit", "--g6", "Dhc"]);
    let t = &v["report"]["tdi"];
    assert_eq!(t["verdict"]["counterexample"]["w"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(t["agreement"], true);
    let v = json(&["tdi-audit", "--g6", "@"]);
    assert_eq!(v["report"]["tdi"]["verdict"], "tdi_on_box");
    let v = json(&["tdi-audit", "--g6", "Cr", "--integrality", "--samples", "5"]);
    assert_eq!(v["report"]["tdi"]["verdict"], "tdi_on_box");
    assert_eq!(v["report"]["all_integral"], true);
}

#[test]
fn tdi_audit_corpus_agrees_with_perfection() {
    let o = tdi(&["tdi-audit", "--corpus", "5", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = head.iter().position(|&h| h == "agreement").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1 + 1 + 2 + 6 + 21);
    assert!(rows.iter().all(|r| r.split(',').nth(col) == Some("true")));
}

#[test]
fn maxcut_examples() {
    let o = tdi(&["maxcut", "--g6", "Bw"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "sdp value:"), "2.25");
    assert!(field(&s, "max cut:").starts_with("2 "));
    assert_eq!(field(&s, "integer dual value:"), "3");
    assert_eq!(field(&s, "closed form matches:"), "true");

    let dir = tempfile::tempdir().unwrap();
    let neg = write(dir.path(), "neg.json", "[-1, -1, -1]");
    let v = json(&["maxcut", "--g6", "Ch", "--variant", "strengthened", "--weights", &neg]);
    assert!(v["report"]["sdp_value"].as_f64().unwrap() >= -0.75 - 1e-8);
    assert_eq!(v["report"]["max_cut"], -1);

    let zero = write(dir.path(), "zero.json", "[0, 0, 0]");
    let v = json(&["maxcut", "--g6", "Bw", "--weights", &zero, "--variant", "homog"]);
    assert!(v["report"]["sdp_value"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(v["report"]["max_cut"], 0);
    assert_eq!(v["report"]["integer_dual"]["value"], 0);

    let v = json(&["maxcut-dual", "--g6", "Ch", "--weights", &neg]);
    assert_eq!(v["report"]["y"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["report"]["closed_form_matches"], true);
}

#[test]
fn corpus_table() {
    let o = tdi(&["corpus", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("g6,n,edges,connected,perfect,alpha,theta,clique_cover_number\n"));
    assert_eq!(s.lines().count(), 1 + 10);
    assert_eq!(stdout(&tdi(&["corpus", "--max-n", "3", "--all"])).lines().count(), 1 + 7);
}

#[test]
fn edge_list_input_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.txt", "5\n1 2\n2 3\n3 4\n4 5\n5 1\n");
    let w = write(dir.path(), "w.txt", "1 2\n");
    let out = dir.path().join("r.txt");
    let o = tdi(&["theta", "--graph", &g, "--weights", &w, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(field(&text, "weights:"), "[2, 0, 0, 0, 0]");
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["tdi-audit", "--g6", "Dhc", "--samples", "7", "--seed", "3", "--json"],
        vec!["tdi-audit", "--corpus", "4", "--samples", "4", "--seed", "9"],
        vec!["theta", "--g6", "Dhc", "--json"],
    ] {
        let paths: Vec<String> = (0..2)
            .map(|k| dir.path().join(format!("r{k}")).to_str().unwrap().to_string())
            .collect();
        for p in &paths {
            let mut a = args.clone();
            a.extend(["--out", p]);
            assert_eq!(tdi(&a).status.code(), Some(0));
        }
        assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(tdi(&["theta", "--g6", "Dh"]).status.code(), Some(2));
    assert_eq!(tdi(&["theta"]).status.code(), Some(2));
    assert_eq!(tdi(&["theta", "--g6", "Dhc", "--box", "3..1"]).status.code(), Some(2));
    assert_eq!(tdi(&["theta", "--g6", "Dhc", "--tol-int", "-1"]).status.code(), Some(2));
    assert_eq!(tdi(&["theta", "--g6", "Dhc", "--graph", "x"]).status.code(), Some(2));
    assert_eq!(tdi(&["cover", "--graph", "/nonexistent/g.txt"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.json", "[1, 2]");
    assert_eq!(tdi(&["cover", "--g6", "Dhc", "--weights", &w]).status.code(), Some(2));
    // an unreachable gap target makes the solver give up
    assert_eq!(tdi(&["theta", "--g6", "Dhc", "--tol-gap", "1e-30"]).status.code(), Some(3));
}
