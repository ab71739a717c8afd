use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use zassenhaus::cli::{parse_spec, FiltrationRecord, GroupRecord, SeparationRecord, Workspace};
use zassenhaus::group::{build_group, GroupSpec};
use zassenhaus::multsys::MultSystem;
use zassenhaus::rep::Representation;

fn run(ws: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zassenhaus"))
        .arg("--workspace")
        .arg(ws)
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn filtration_three_way() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--format", "json", "filtration", "magnus(2,2,3)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "3-way agree");
    for alg in ["recursive", "lazard", "degree"] {
        assert_eq!(v["orders"][alg], serde_json::json!([32, 8, 1]));
    }
}

#[test]
fn verify_cyclic_is_established() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--format", "json", "verify", "cyclic(2,4)", "--rank-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdicts"]["overall"], "established");
    let reports: Vec<_> = fs::read_dir(dir.path().join("reports")).unwrap().collect();
    assert_eq!(reports.len(), 1);
}

#[test]
fn separate_commutator() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--format", "json", "separate", "magnus(2,2,4)", "[x1,x2]", "--rank-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rec: SeparationRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec.outcome, "found");
    assert!(rec.image.unwrap().iter().any(|&c| c != 0));

    // The stored representation reloads to a homomorphism with the same image.
    let g = build_group(&GroupSpec::Magnus { p: 2, d: 2, m: 4 }).unwrap();
    let rep = Representation::from_record(&g, rec.representation.as_ref().unwrap()).unwrap();
    let sigma = zassenhaus::group::parse_word(&g, "[x1,x2]").unwrap();
    assert_ne!(rep.image_code(sigma), 0);

    // Elements of G_(3) cannot be separated at rank 2.
    let out = run(dir.path(), &["--format", "json", "separate", "magnus(2,2,4)", "[[x1,x2],x1]", "--rank-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outcome"], "impossible");
}

#[test]
fn pairing_default_and_custom_subgroup() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--format", "json", "pairing", "magnus(2,2,4)", "--rank-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["rank"], 3);
    let out = run(
        dir.path(),
        &["--format", "json", "pairing", "magnus(2,2,4)", "--rank-n", "2", "--subgroup", "[x1,x2]"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["left_dim"], 1);
    assert_eq!(v["summary"]["rank"], 1);
}

#[test]
fn group_build_and_lookup_by_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--format", "json", "group", "build", "--p", "2", "--gens", "2", "--trunc", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rec: GroupRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec.order, 32);
    let out = run(dir.path(), &["--format", "json", "filtration", &rec.id[..12], "--algorithm", "recursive"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(
        dir.path(),
        &["--format", "json", "group", "build", "--spec", r#"{"kind":"cyclic","p":3,"order":9}"#],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["order"], 9);
}

#[test]
fn distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(dir.path(), args).status.code().unwrap();
    let parse = code(&["separate", "magnus(2,2,3)", "x1*(", "--rank-n", "2"]);
    let unknown = code(&["verify", "deadbeef", "--rank-n", "2"]);
    let too_large = code(&["group", "build", "--p", "2", "--gens", "3", "--trunc", "5"]);
    let bad_flag = code(&["verify", "--frobnicate"]);
    assert_eq!(parse, 3);
    assert_eq!(bad_flag, 3);
    assert_eq!(unknown, 5);
    assert_eq!(too_large, 4);
}

#[test]
fn records_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ws = Workspace::open(dir.path()).unwrap();
    for text in ["magnus(2,2,3)", "cyclic(3,9)", "unipotent(2,4)"] {
        let spec = parse_spec(text).unwrap();
        let (rec, g) = ws.store_group(&spec).unwrap();
        let (back, g2) = ws.load_group(&rec.id).unwrap();
        assert_eq!(back, rec);
        assert_eq!(g, g2);
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<GroupSpec>(&s).unwrap(), spec);
    }
    let sys = MultSystem::standard(3, 3).unwrap();
    let s = serde_json::to_string(&sys).unwrap();
    assert_eq!(serde_json::from_str::<MultSystem>(&s).unwrap(), sys);
}

#[test]
fn filtration_cache_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["filtration", "magnus(2,2,3)"]).status.code(), Some(0));
    let ws = Workspace::open(dir.path()).unwrap();
    let id = build_group(&parse_spec("magnus(2,2,3)").unwrap()).unwrap().digest().to_string();
    let mut cached: FiltrationRecord = ws.cached_filtration(&id).unwrap().unwrap();
    // Recomputation agrees with the cache.
    assert_eq!(run(dir.path(), &["filtration", "magnus(2,2,3)"]).status.code(), Some(0));
    assert_eq!(ws.cached_filtration(&id).unwrap().unwrap(), cached);
    // A corrupted cache is reported rather than silently replaced.
    cached.orders.insert("recursive".into(), vec![32, 16, 1]);
    ws.store_filtration(&cached).unwrap();
    assert_eq!(run(dir.path(), &["filtration", "magnus(2,2,3)"]).status.code(), Some(1));
}
