use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    json: Value,
    stdout: String,
}

fn medalg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_medalg"))
        .arg("--stable")
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        json: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stdout,
    }
}

fn write(dir: &TempDir, name: &str, body: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body.to_string()).unwrap();
    p
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let r = medalg(&[&["gen"], args].concat());
    assert_eq!(r.code, 0, "{}", r.stdout);
    let p = dir.path().join(name);
    std::fs::write(&p, &r.stdout).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn rank_both_on_hypercube3() {
    let dir = TempDir::new().unwrap();
    let q3 = gen(&dir, "q3.json", &["hypercube", "3"]);
    let r = medalg(&["rank", s(&q3), "--method", "both"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json, json!({"rank": 3, "agree": true}));
    assert_eq!(medalg(&["rank", s(&q3), "--method", "embed"]).json["rank"], 3);
}

#[test]
fn verify_broken_table_reports_m2() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", &json!({"format": "median-table", "n": 2, "table": vec![0; 8]}));
    let r = medalg(&["verify", s(&broken)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["failure"]["axiom"], "M2");
    assert_eq!(r.json["failure"]["witness"], json!([0, 1, 1]));
}

#[test]
fn malformed_table_names_the_index() {
    let dir = TempDir::new().unwrap();
    let mut table = vec![json!(0); 8];
    table[5] = json!(7);
    let bad = write(&dir, "bad.json", &json!({"format": "median-table", "n": 2, "table": table}));
    let r = medalg(&["verify", s(&bad)]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"]["message"].as_str().unwrap().contains("index 5"), "{}", r.stdout);
}

#[test]
fn input_and_usage_errors_exit_2() {
    assert_eq!(medalg(&["rank", "/nonexistent.json"]).code, 2);
    assert_eq!(medalg(&["rank"]).code, 2);
    assert_eq!(medalg(&["frobnicate"]).code, 2);
}

#[test]
fn refusal_exits_3() {
    let dir = TempDir::new().unwrap();
    let q8 = gen(&dir, "q8.json", &["hypercube", "8"]);
    let r = medalg(&["auts", s(&q8)]);
    assert_eq!(r.code, 3);
    assert_eq!(r.json["error"]["kind"], "refused");
    assert!(r.json["error"]["message"].as_str().unwrap().contains("MEDALG_"));
}

#[test]
fn refusal_limit_can_be_raised_by_environment() {
    let dir = TempDir::new().unwrap();
    let c13 = gen(&dir, "c13.json", &["chain", "13"]);
    assert_eq!(medalg(&["auts", s(&c13)]).code, 3);
    let out = Command::new(env!("CARGO_BIN_EXE_medalg"))
        .args(["--stable", "auts", s(&c13)])
        .env("MEDALG_AUT_MAX", "13")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 2);
}

#[test]
fn walls_json_shape() {
    let dir = TempDir::new().unwrap();
    let q2 = gen(&dir, "q2.json", &["hypercube", "2"]);
    let r = medalg(&["walls", s(&q2)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["halfspaces"].as_array().unwrap().len(), 4);
    assert_eq!(r.json["halfspaces"][0], json!({"members": [0, 1]}));
    assert_eq!(r.json["walls"].as_array().unwrap().len(), 2);
    assert_eq!(r.json["crossing_edges"], json!([[0, 1]]));
    assert_eq!(r.json["rank"], 2);
    assert_eq!(r.json["method"], "clique");
    let brute = medalg(&["walls", s(&q2), "--brute", "--method", "both"]);
    assert_eq!(brute.json["halfspaces"], r.json["halfspaces"]);
    assert_eq!(brute.json["agree"], true);
}

#[test]
fn ind_and_vc_on_set_systems() {
    let dir = TempDir::new().unwrap();
    // Two crossing splits of a four-point ground set.
    let sets = write(&dir, "s.json", &json!({"ground": 4, "sets": [[0, 1], [0, 2], [0]]}));
    let r = medalg(&["ind", "--sets", s(&sets)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["ind"], 2);
    assert_eq!(r.json["witness"], json!([0, 1]));
    // No pair of points is shattered: {1, 2} never appears as a trace.
    let vc = medalg(&["vc", "--sets", s(&sets)]);
    assert_eq!(vc.json["vc"], 1);
    let dual = medalg(&["vc", "--sets", s(&sets), "--dual"]);
    assert_eq!(dual.json["vc"], 2);
    assert_eq!(dual.json["dual_ground"], 3);
}

#[test]
fn ind_of_functions_reports_thresholds() {
    let dir = TempDir::new().unwrap();
    let fam = write(
        &dir,
        "f.json",
        &json!({"n": 4, "functions": [{"values": [0, 0, 1, 1]}, {"values": [0, 1, 0, [1, 1]]}]}),
    );
    let r = medalg(&["ind", "--functions", s(&fam)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["ind"], 2);
    assert_eq!(r.json["thresholds"], json!([[1, 4], [3, 4]]));
}

#[test]
fn variation_modes_on_the_grid_cut() {
    let dir = TempDir::new().unwrap();
    let grid = gen(&dir, "g.json", &["grid", "3", "3"]);
    let values: Vec<i64> = (0..9).map(|i| i64::from(i % 3 >= 2)).collect();
    let f = write(&dir, "f.json", &json!({"n": 9, "values": values}));
    let edge = medalg(&["variation", s(&grid), "--function", s(&f), "--mode", "edge"]);
    assert_eq!(edge.code, 0);
    assert_eq!(edge.json["value"], json!([3, 1]));
    let total = medalg(&["variation", s(&grid), "--function", s(&f), "--mode", "total"]);
    assert_eq!(total.json["value"], json!([3, 1]));
    assert_eq!(total.json["witness"]["lower_bound_only"], false);
    let x = medalg(&["variation", s(&grid), "--function", s(&f), "--halfspaces", "coord:0"]);
    assert_eq!(x.json["value"], json!([1, 1]));
    let t = &x.json["witness"]["transversal"];
    assert!(t.as_array().unwrap().len() >= 2);
    let bad = medalg(&["variation", s(&grid), "--function", s(&f), "--halfspaces", "rows"]);
    assert_eq!(bad.code, 2);
}

#[test]
fn variation_with_halfspace_file() {
    let dir = TempDir::new().unwrap();
    let c = gen(&dir, "c.json", &["chain", "4"]);
    let f = write(&dir, "f.json", &json!({"n": 4, "values": [0, 2, 1, 3]}));
    let hs = write(&dir, "h.json", &json!({"ground": 4, "sets": [[0], [0, 1, 2], [0, 1, 2, 3]]}));
    let arg = format!("file:{}", s(&hs));
    let r = medalg(&["variation", s(&c), "--function", s(&f), "--halfspaces", &arg]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    // Stages {0}, {1,2}, {3}: best transversal 0, 2, 3.
    assert_eq!(r.json["value"], json!([3, 1]));
    let all = medalg(&["variation", s(&c), "--function", s(&f)]);
    assert_eq!(all.json["value"], json!([5, 1]));
}

#[test]
fn auts_and_generated_groups() {
    let dir = TempDir::new().unwrap();
    let q2 = gen(&dir, "q2.json", &["hypercube", "2"]);
    let r = medalg(&["auts", s(&q2)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["order"], 8);
    assert_eq!(r.json["perms"].as_array().unwrap().len(), 8);
    let g = write(&dir, "g.json", &json!({"n": 4, "perms": [[1, 0, 3, 2]]}));
    let sub = medalg(&["auts", s(&q2), "--generators", s(&g)]);
    assert_eq!(sub.json["order"], 2);
    let not_aut = write(&dir, "bad.json", &json!({"n": 4, "perms": [[0, 3, 2, 1]]}));
    assert_eq!(medalg(&["auts", s(&q2), "--generators", s(&not_aut)]).code, 2);
}

#[test]
fn orbit_tameness_of_a_projection() {
    let dir = TempDir::new().unwrap();
    let q3 = gen(&dir, "q3.json", &["hypercube", "3"]);
    let values: Vec<i64> = (0..8).map(|x| x & 1).collect();
    let f = write(&dir, "f.json", &json!({"n": 8, "values": values}));
    let r = medalg(&["orbit", s(&q3), "--function", s(&f), "--check-tameness"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    // Coordinate flips are automorphisms too: x_i and 1 - x_i for each i.
    assert_eq!(r.json["size"], 6);
    assert_eq!(r.json["tameness"]["ind_orbit"], 3);
    assert_eq!(r.json["tameness"]["rank"], 3);
    assert_eq!(r.json["tameness"]["bounded"], true);
    // Parity is not median-preserving.
    let parity: Vec<i64> = (0..8).map(|x: i64| x.count_ones() as i64 % 2).collect();
    let p = write(&dir, "p.json", &json!({"n": 8, "values": parity}));
    assert_eq!(medalg(&["orbit", s(&q3), "--function", s(&p)]).json["size"], 2);
    assert_eq!(medalg(&["orbit", s(&q3), "--function", s(&p), "--check-tameness"]).code, 2);
}

#[test]
fn roller_on_a_tree() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.json", &json!({"n": 4, "edges": [[0, 1], [0, 2], [0, 3]]}));
    let t = gen(&dir, "t.json", &["graph", s(&star)]);
    let r = medalg(&["roller", s(&t)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json["dimension"], 6);
    for key in ["injective", "mp", "image_subalgebra", "equivariant"] {
        assert_eq!(r.json[key], true, "{key}");
    }
}

#[test]
fn report_hypercube3_rank_row() {
    let dir = TempDir::new().unwrap();
    let q3 = gen(&dir, "q3.json", &["hypercube", "3"]);
    let r = medalg(&["report", s(&q3)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(check(&r.json, "rank")["value"], json!({"crossing": 3, "embedding": 3, "ind": 3}));
    for c in r.json["checks"].as_array().unwrap() {
        assert_ne!(c["status"], "fail", "{c}");
    }
}

#[test]
fn report_chain5_rank_rows_are_one() {
    let dir = TempDir::new().unwrap();
    let c5 = gen(&dir, "c5.json", &["chain", "5"]);
    let r = medalg(&["report", s(&c5)]);
    assert_eq!(r.code, 0);
    assert_eq!(check(&r.json, "rank")["value"], json!({"crossing": 1, "embedding": 1, "ind": 1}));
    assert_eq!(check(&r.json, "rank_mp_maps")["value"]["ind"], 1);
}

#[test]
fn report_singleton_is_vacuous() {
    let dir = TempDir::new().unwrap();
    let one = gen(&dir, "one.json", &["chain", "1"]);
    let r = medalg(&["report", s(&one)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(check(&r.json, "rank")["value"], json!({"crossing": 0, "embedding": 0, "ind": 0}));
    assert_eq!(check(&r.json, "halfspace_methods")["value"]["walls"], 0);
    assert_eq!(medalg(&["walls", s(&one)]).json["walls"], json!([]));
}

#[test]
fn report_wedge_and_product() {
    let dir = TempDir::new().unwrap();
    let w = gen(&dir, "w.json", &["wedge", "1", "2", "3"]);
    let r = medalg(&["report", s(&w)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(check(&r.json, "wedge_cubes")["status"], "pass");
    assert_eq!(check(&r.json, "product_rank")["status"], "skipped");
    let a = gen(&dir, "a.json", &["chain", "3"]);
    let b = gen(&dir, "b.json", &["hypercube", "2"]);
    let p = gen(&dir, "p.json", &["product", s(&a), s(&b)]);
    let pr = medalg(&["report", s(&p)]);
    assert_eq!(pr.code, 0, "{}", pr.stdout);
    assert_eq!(check(&pr.json, "product_rank")["value"], json!({"product": 3, "left": 1, "right": 2}));
}

#[test]
fn report_on_a_broken_table_fails_and_skips() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", &json!({"format": "median-table", "n": 2, "table": vec![0; 8]}));
    let r = medalg(&["report", s(&broken)]);
    assert_eq!(r.code, 1);
    assert_eq!(check(&r.json, "axioms")["status"], "fail");
    assert_eq!(check(&r.json, "rank")["status"], "skipped");
}

#[test]
fn report_skips_oversized_checks() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "g.json", &["grid", "5", "5"]);
    let r = medalg(&["report", s(&g)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(check(&r.json, "halfspace_methods")["status"], "skipped");
    assert_eq!(check(&r.json, "rank")["status"], "pass");
}

#[test]
fn stable_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let w = gen(&dir, "w.json", &["wedge", "2", "2"]);
    assert_eq!(medalg(&["report", s(&w)]).stdout, medalg(&["report", s(&w)]).stdout);
    let timed = Command::new(env!("CARGO_BIN_EXE_medalg"))
        .args(["report", s(&w)])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["runtime_ms"].is_u64());
    assert!(v["checks"][0]["runtime_ms"].is_u64());
}

#[test]
fn gen_graph_rejects_the_six_cycle() {
    let dir = TempDir::new().unwrap();
    let edges: Vec<[usize; 2]> = (0..6).map(|i| [i, (i + 1) % 6]).collect();
    let c6 = write(&dir, "c6.json", &json!({"n": 6, "edges": edges}));
    let r = medalg(&["gen", "graph", s(&c6)]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"]["message"].as_str().unwrap().contains("triple"));
}

#[test]
fn gen_closure_is_deterministic_and_tables_round_trip() {
    let a = medalg(&["gen", "closure", "--d", "4", "--points", "5", "--seed", "9"]);
    let b = medalg(&["gen", "closure", "--d", "4", "--points", "5", "--seed", "9"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let dir = TempDir::new().unwrap();
    let t = gen(&dir, "t.json", &["--table", "chain", "3"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(v["format"], "median-table");
    assert_eq!(v["table"].as_array().unwrap().len(), 27);
    assert_eq!(medalg(&["rank", s(&t)]).json, json!({"rank": 1, "agree": true}));
    let explicit = medalg(&["gen", "closure", "--d", "3", "--vertices", "0", "3", "5", "6"]);
    assert_eq!(explicit.json["params"]["vertices"], json!([0, 3, 5, 6]));
}

#[test]
fn gen_corpus_writes_loadable_algebras() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("corpus");
    let r = medalg(&["gen", "corpus", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let names = r.json["written"].as_array().unwrap();
    assert!(names.len() >= 50);
    for name in names {
        let p = out.join(name.as_str().unwrap());
        assert_eq!(medalg(&["verify", s(&p)]).code, 0, "{p:?}");
    }
}
