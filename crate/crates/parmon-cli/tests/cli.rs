//! End-to-end checks of the command-line surface and its exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parmon"))
}

struct Fixture {
    dir: PathBuf,
}

impl Fixture {
    fn new(tag: &str) -> Fixture {
        let dir = std::env::temp_dir().join(format!("parmon-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Fixture { dir }
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path = self.dir.join(name);
        fs::write(&path, contents).unwrap();
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Fixture {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn compose_figure2_and_error_paths() {
    let fx = Fixture::new("compose");
    let a = fx.file("a.json", "[[1,2,-4],[3],[4],[5,-2],[-1],[-3,-5]]");
    let b = fx.file("b.json", "[[1,2,-2,-3],[3,5],[4],[-1,-5],[-4]]");
    let out = bin().args(["compose", &a, &b]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "[[1,2],[3],[4],[-2,-3,5],[-1,-5],[-4]]"
    );

    let verified = bin().args(["compose", &a, &b, "--verify"]).output().unwrap();
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(stdout_json(&verified)["verify"], "pass");

    let id1 = fx.file("id1.json", "[[1,-1]]");
    let mismatch = bin().args(["compose", &a, &id1]).output().unwrap();
    assert_eq!(mismatch.status.code(), Some(2));

    let bad = fx.file("bad.json", "[[1],[1,-1]]");
    let parse = bin().args(["compose", &bad, &id1]).output().unwrap();
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("point 1 appears twice"));
}

#[test]
fn params_reports_figure1_values() {
    let fx = Fixture::new("params");
    let fig1 = fx.file("fig1.txt", "1 3 -4 | 2 4 | 5 6 -1 -6 | -2 -3 | -5");
    let out = bin().args(["params", &fig1]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["s"], 4);
    assert_eq!(report["sStar"], 4);
    assert_eq!(report["sh"], 1);
    assert_eq!(report["k"]["2"], 2);
    assert_eq!(report["dStarTotal"], 2);
    assert_eq!(report["inL"], false);

    let id_set = fx.file("idset.json", "[[1,-1],[2],[3,-3],[-2]]");
    let idem = bin().args(["params", &id_set]).output().unwrap();
    assert_eq!(stdout_json(&idem)["idempotent"], true);
}

#[test]
fn closure_streams_jsonl_and_flags_cap() {
    let fx = Fixture::new("closure");
    let gens = fx.file(
        "gens.json",
        "[[[1,-1,2,-2],[3,-3]],[[1,-2],[2,-3],[-1,3]],[[1,-1],[2,-2],[3],[-3]]]",
    );
    let out = bin().args(["closure", "--gens", &gens, "--verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["saturated"], true);
    assert_eq!(header["verified"], true);
    let count = header["count"].as_u64().unwrap() as usize;
    assert_eq!(lines.count(), count);

    let capped = bin().args(["closure", "--gens", &gens, "--cap", "10"]).output().unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn relrank_matches_the_finite_remarks() {
    let out = bin().args(["relrank", "--base", "s", "--n", "2", "--verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["rank"], 2);
    assert_eq!(cert["exhaustiveBelow"], true);
    assert_eq!(cert["verified"], true);

    let es = bin().args(["relrank", "--base", "es", "--n", "3"]).output().unwrap();
    assert_eq!(stdout_json(&es)["rank"], 0);

    let guard = bin().args(["relrank", "--base", "s", "--n", "4"]).output().unwrap();
    assert_eq!(guard.status.code(), Some(2));
}

#[test]
fn classify_exit_codes_reflect_the_verdict() {
    let fx = Fixture::new("classify");
    let alpha = fx.file(
        "alpha.json",
        r#"{"side":"L","ground":"aleph0","k":[["1","aleph0"]],"d":[["1","aleph0"]],"dTotal":"aleph0","inSide":true,"s":"aleph0"}"#,
    );
    let beta = fx.file(
        "beta.json",
        r#"{"side":"R","ground":"aleph0","k":[["1","aleph0"]],"d":[["1","aleph0"]],"dTotal":"aleph0","inSide":true,"s":"aleph0"}"#,
    );
    let out = bin()
        .args(["classify", "--alpha", &alpha, "--beta", &beta, "--verify"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["generates"], true);
    assert_eq!(verdict["clause"], "countable-ii");

    let weak = fx.file(
        "weak.json",
        r#"{"side":"L","ground":"aleph0","k":[["1","aleph0"]],"d":[["1","7"]],"dTotal":"7","inSide":true,"s":"aleph0"}"#,
    );
    let negative = bin().args(["classify", "--alpha", &weak, "--beta", &beta]).output().unwrap();
    assert_eq!(negative.status.code(), Some(1));
    assert_eq!(stdout_json(&negative)["clause"], "necessity-d-total");

    let finite = fx.file(
        "finite.json",
        r#"{"side":"L","ground":"4","k":[["1","4"]],"d":[["1","4"]],"dTotal":"4","inSide":true,"s":"4"}"#,
    );
    let rejected = bin().args(["classify", "--alpha", &finite, "--beta", &beta]).output().unwrap();
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn sierpinski_and_factorize_verify_their_identities() {
    let fx = Fixture::new("infinite");
    let targets = fx.file("targets.json", "[[[1,-2],[2,-1]],[[1,2,-1],[-2]]]");
    let out = bin()
        .args(["sierpinski", "--targets", &targets, "--n", "1", "--window", "32", "--fuel", "10000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let result = stdout_json(&out);
    assert_eq!(result["equalOnWindow"], true);
    assert_eq!(result["wordLength"], 8);

    let starved = bin()
        .args(["sierpinski", "--targets", &targets, "--n", "2", "--window", "32", "--fuel", "0"])
        .output()
        .unwrap();
    assert_eq!(starved.status.code(), Some(3));

    let gamma = fx.file("gamma.json", "[[1,3,-4],[2,4],[5,6,-1,-6],[-2,-3],[-5]]");
    let fact = bin().args(["factorize", "--gamma", &gamma, "--window", "32"]).output().unwrap();
    assert_eq!(fact.status.code(), Some(0));
    assert_eq!(stdout_json(&fact)["matches"], true);
}
