//! End-to-end tests of the `gsx` binary: exit codes, JSON shapes, and the
//! input grammar (fixtures, graph6, @file edge lists).

use serde_json::Value;
use std::process::Command;

fn gsx(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gsx"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn gsx_json(args: &[&str]) -> (Option<i32>, Value) {
    let (code, stdout, stderr) = gsx(args);
    let v = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {stdout:?} stderr: {stderr:?}"));
    (code, v)
}

#[test]
fn compare_lc_equivalent_exits_10() {
    let (code, v) = gsx_json(&[
        "compare", "--graph", "star_4", "--graph2", "complete_4", "--json",
    ]);
    assert_eq!(code, Some(10));
    assert_eq!(v["status"], "LCEquivalent");
    assert_eq!(v["stage"], "lc-orbit");
}

#[test]
fn compare_lu_inequivalent_exits_11() {
    let (code, v) = gsx_json(&[
        "compare", "--graph", "cycle_7", "--graph2", "path_7", "--json",
    ]);
    assert_eq!(code, Some(11));
    assert_eq!(v["status"], "LUInequivalent");
    assert!(v["witness"].as_str().unwrap().contains("k=2"));
}

#[test]
fn compare_batch_order_runs_invariants_first() {
    let (code, v) = gsx_json(&[
        "compare", "--graph", "cycle_7", "--graph2", "path_7", "--batch", "--json",
    ]);
    assert_eq!(code, Some(11));
    assert_eq!(v["stages"][0]["name"], "invariants");
}

#[test]
fn compare_unlabeled_shared_signature_pair_is_inconclusive() {
    // the two 9-node classes with identical l_k/t_k signatures: the class
    // machinery alone cannot separate them, so unlabeled mode exits 12
    let (code, v) = gsx_json(&[
        "compare", "--graph", "H?BTQs{", "--graph2", "HKDnq]|",
        "--mode", "unlabeled", "--json",
    ]);
    assert_eq!(code, Some(12));
    assert_eq!(v["status"], "Inconclusive");
}

#[test]
fn compare_labeled_shared_signature_pair_is_scan_separated() {
    let (code, v) = gsx_json(&[
        "compare", "--graph", "H?BTQs{", "--graph2", "HKDnq]|", "--json",
    ]);
    assert_eq!(code, Some(11));
    assert_eq!(v["stage"], "lu-scan");
}

#[test]
fn dm_reports_dimension_rank_entropy() {
    let (code, v) = gsx_json(&["dm", "--graph", "path_4", "--set", "1,2", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["d"], 1);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["entropy"], 1);
    let (_, v) = gsx_json(&["dm", "--graph", "path_4", "--set", "1,2", "--elements", "--json"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn dm_rejects_out_of_range_nodes() {
    let (code, _, stderr) = gsx(&["dm", "--graph", "path_4", "--set", "1,5"]);
    assert_eq!(code, Some(1));
    assert!(stderr.starts_with("error:"), "stderr was {stderr:?}");
}

#[test]
fn condense_star_reports_rule_and_map() {
    let (code, v) = gsx_json(&[
        "condense", "--graph", "star_4", "--set", "2,3,4", "--json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(v["graph6"], "A_");
    assert_eq!(v["rules"][0]["rule"], "DimCMinus1");
    assert_eq!(v["rules"][0]["experimental"], false);
    assert_eq!(v["map"], serde_json::json!([1, 2, 2, 2]));
}

#[test]
fn condense_strict_rejects_uncertified_sets() {
    let (code, _, stderr) = gsx(&[
        "condense", "--graph", "cycle_6", "--set", "1,4", "--strict",
    ]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("not certified"), "stderr was {stderr:?}");
}

#[test]
fn orbit_counts_match_the_census() {
    let (code, v) = gsx_json(&["orbit", "--graph", "star_4", "--count", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["size"], 5);
    let (_, v) = gsx_json(&["orbit", "--graph", "star_7", "--count", "--json"]);
    assert_eq!(v["size"], 8);
    let (_, v) = gsx_json(&[
        "orbit", "--graph", "path_4", "--mode", "unlabeled", "--count", "--json",
    ]);
    assert_eq!(v["size"], 4);
}

#[test]
fn metagraph_agrees_with_dm() {
    let (code, v) = gsx_json(&["metagraph", "--graph", "path_4", "--set", "1,2", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["d"], 1);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn tables_small_n_matches_known_cells() {
    let (code, v) = gsx_json(&["tables", "--n", "4", "--invariant", "T", "--json"]);
    assert_eq!(code, Some(0));
    let rows = v.as_array().unwrap();
    assert_eq!(rows[0]["k"], 2);
    assert_eq!(rows[0]["r"], 1.0);
    assert_eq!(rows[0]["p"], 0.0);
    assert_eq!(rows[0]["counts"]["orbits"], 4);
}

#[test]
fn tables_large_n_requires_samples_then_samples_work() {
    let (code, _, stderr) = gsx(&["tables", "--n", "8", "--invariant", "T"]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("--samples"));
    let (code, v) = gsx_json(&[
        "tables", "--n", "8", "--invariant", "l", "--samples", "50", "--seed", "7", "--json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(v[0]["seed"], 7);
    assert!(v[0]["p"].as_f64().unwrap() >= 0.0);
}

#[test]
fn classes_roundtrip_through_a_saved_database() {
    let dir = std::env::temp_dir().join(format!("gsx-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let db = dir.join("n5.g6");
    let db = db.to_str().unwrap();
    let (code, v) = gsx_json(&[
        "classes", "--n", "5", "--mode", "unlabeled", "--out", db, "--json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(v["count"], 4);
    // ingest what we just wrote; the integrity check must accept it
    let (code, v) = gsx_json(&["classes", "--n", "5", "--source", db, "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["count"], 4);
    assert_eq!(v["provenance"]["ingested"]["path"], db);
    // a corrupted database (duplicate class) must be rejected
    let mut text = std::fs::read_to_string(db).unwrap();
    text.push_str("Dhc\n"); // cycle_5, equivalent to some representative
    let bad = dir.join("bad.g6");
    std::fs::write(&bad, text).unwrap();
    let (code, _, stderr) = gsx(&["classes", "--n", "5", "--source", bad.to_str().unwrap()]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("integrity"), "stderr was {stderr:?}");
}

#[test]
fn edge_list_files_and_graph6_agree() {
    let dir = std::env::temp_dir().join(format!("gsx-test-el-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("p4.txt");
    std::fs::write(&file, "1 2\n2 3\n3 4\n").unwrap();
    let arg = format!("@{}", file.display());
    let (code, v) = gsx_json(&["compare", "--graph", &arg, "--graph2", "path_4", "--json"]);
    assert_eq!(code, Some(10));
    assert_eq!(v["status"], "LCEquivalent");
}
