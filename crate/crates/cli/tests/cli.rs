use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gosset(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gosset"))
        .env("GOSSET_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn polytope_info_reports_counts_and_caches() {
    let dir = tempfile::tempdir().unwrap();
    let o = gosset(dir.path(), &["polytope", "info", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["facets"], 27);
    assert_eq!(v["ideal_vertices"], 27);
    assert_eq!(v["finite_vertices"], 72);
    assert_eq!(v["euler_characteristic"], "-1/8");
    assert_eq!(v["max_disjoint_facets"], 3);
    let cached: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached.len(), 1);

    // A second run reads the cache and agrees.
    let again = gosset(dir.path(), &["polytope", "info", "6", "--format", "json"]);
    assert_eq!(json(&again), v);
}

#[test]
fn corrupt_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    assert!(gosset(dir.path(), &["polytope", "info", "5"])
        .status
        .success());
    let entry = fs::read_dir(dir.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&entry).unwrap()).unwrap();
    doc["simplex_facets"].as_array_mut().unwrap().pop();
    fs::write(&entry, doc.to_string()).unwrap();
    let o = gosset(dir.path(), &["polytope", "info", "5", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["finite_vertices"], 16);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rebuilding"));
}

#[test]
fn manifold_csv_matches_published_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = gosset(dir.path(), &["manifold", "6", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("6,-64,18,183,411,207,26,0,0,27,"), "{row}");
}

#[test]
fn full_sum_agrees_with_symmetry_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let a = json(&gosset(dir.path(), &["manifold", "5", "--format", "json"]));
    let b = json(&gosset(
        dir.path(),
        &[
            "manifold",
            "5",
            "--full-sum",
            "--sequential",
            "--format",
            "json",
        ],
    ));
    assert_eq!(a["betti"], b["betti"]);
    assert_eq!(a["betti"], serde_json::json!([1, 24, 120, 136, 39, 0]));
}

#[test]
fn orbit_check_reproduces_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    for (n, verdict) in [("3", "OneLegal"), ("4", "Legal"), ("7", "OneLegal")] {
        let o = gosset(dir.path(), &["orbit", "check", n, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "n={n}");
        let v = json(&o);
        assert_eq!(v["verdict"], verdict);
        assert_eq!(v["euler"]["ascending"], v["euler"]["expected"]);
    }
    let v = json(&gosset(
        dir.path(),
        &["orbit", "check", "4", "--state-classes", "--format", "json"],
    ));
    assert_eq!(v["state_classes"], 4);
}

#[test]
fn orbit_check_with_state_file() {
    let dir = tempfile::tempdir().unwrap();
    // Every facet O: the ascending link of the identity is the whole nerve
    // and the descending link is empty, so the orbit is illegal.
    let statuses: serde_json::Map<String, Value> =
        (0..10).map(|i| (i.to_string(), Value::from("O"))).collect();
    let file = dir.path().join("state.json");
    fs::write(&file, Value::Object(statuses).to_string()).unwrap();
    let o = gosset(
        dir.path(),
        &[
            "orbit",
            "check",
            "4",
            "--state",
            file.to_str().unwrap(),
            "--format",
            "json",
        ],
    );
    let v = json(&o);
    assert!(v["verdict"]["Illegal"].is_object(), "{v}");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn colouring_validation_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let shown = gosset(dir.path(), &["colouring", "show", "5"]);
    assert!(shown.status.success());
    let good = dir.path().join("good.json");
    fs::write(&good, &shown.stdout).unwrap();
    let o = gosset(
        dir.path(),
        &["colouring", "validate", "5", good.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));

    // Same colour on two adjacent facets.
    let mut map: serde_json::Map<String, Value> = serde_json::from_slice(&shown.stdout).unwrap();
    let q = json(&gosset(
        dir.path(),
        &["polytope", "info", "5", "--format", "json"],
    ));
    assert_eq!(q["facets"], 16);
    let c0 = map["0"].clone();
    for k in 1..16 {
        map.insert(k.to_string(), c0.clone());
    }
    let bad = dir.path().join("bad.json");
    fs::write(&bad, Value::Object(map).to_string()).unwrap();
    let o = gosset(
        dir.path(),
        &["colouring", "validate", "5", bad.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let o = gosset(
        dir.path(),
        &["colouring", "validate", "5", missing.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn out_of_range_dimension_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        gosset(dir.path(), &["polytope", "info", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn cusps_and_volumes() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&gosset(dir.path(), &["cusps", "5", "--format", "json"]));
    assert_eq!(v["census"]["total"], 40);
    assert_eq!(v["restriction"]["null_homotopic"], 8);
    let out = stdout(&gosset(dir.path(), &["volumes", "--format", "csv"]));
    assert!(out.contains("5,224ζ(3),"), "{out}");
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn reproduce_command_light_tier() {
    let dir = tempfile::tempdir().unwrap();
    let o = gosset(dir.path(), &["reproduce-paper", "--skip-heavy"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(
        out.lines().filter(|l| l.starts_with("criterion")).count(),
        10
    );
    assert!(!out.contains("FAIL"));
}
