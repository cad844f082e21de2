//! End-to-end tests of the `strandalg` binary: exit codes, golden stdout,
//! JSON stability, and the spec-file round trip on the fixture corpus.

use std::path::PathBuf;
use std::process::{Command, Output};

use strandalg::dsl::parse_spec;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strandalg"))
        .args(args)
        .env_remove("STRANDALG_CAPS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn nerve_prints_the_partition() {
    let out = run(&["nerve", fixture("intro.qz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "V[1]={1,2,3} V[2]={4}\n");

    let out = run(&["nerve", fixture("running.qz").to_str().unwrap()]);
    assert_eq!(stdout(&out), "V[1]={1,2} V[2]={4,5,6}\n");
}

#[test]
fn check_exit_codes() {
    let out = run(&["check", fixture("intro.qz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("special pair: ok"));

    let out = run(&["check", fixture("broken_nonspecial.qz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("special pair: FAIL"));

    let out = run(&["check", fixture("broken_nonbiserial.qz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("biserial: FAIL"));
}

#[test]
fn primitives_requires_a_special_pair() {
    let out = run(&["primitives", fixture("broken_nonspecial.qz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("special"), "{err}");
}

#[test]
fn parse_errors_exit_with_input_code() {
    let dir = std::env::temp_dir();
    let path = dir.join("strandalg_bad_fixture.qz");
    std::fs::write(&path, "quiver bad\nvertices 1\narrows\n a: 1 -> 2\n").unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");

    let out = run(&["check", "/nonexistent/file.qz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes_follow_the_report() {
    for file in ["intro.qz", "mathieu.qz", "dvr3.qz", "running_equi.qz"] {
        let out = run(&["verify", fixture(file).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stdout(&out));
    }
    for file in [
        "broken_nonbiserial.qz",
        "broken_nonspecial.qz",
        "broken_arrow_relation.qz",
    ] {
        let out = run(&["verify", fixture(file).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{file}");
        assert!(stdout(&out).contains("FAIL"), "{file}");
    }
}

#[test]
fn reduce_prints_normal_forms() {
    let out = run(&["reduce", fixture("intro.qz").to_str().unwrap(), "p*e(1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("y*x*a + a*y*x\n"), "{}", stdout(&out));

    let out = run(&[
        "reduce",
        fixture("intro.qz").to_str().unwrap(),
        "t*e(4) - path(b)",
    ]);
    assert!(stdout(&out).starts_with("0\n"));

    let out = run(&["reduce", fixture("intro.qz").to_str().unwrap(), "p*e(99)"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_outputs_are_stable() {
    let file = fixture("running.qz");
    let a = run(&["ideal", file.to_str().unwrap(), "--json"]);
    let b = run(&["ideal", file.to_str().unwrap(), "--json"]);
    assert_eq!(stdout(&a), stdout(&b));
    let value: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let relations = value["relations"].as_array().unwrap();
    let mut sorted = relations.clone();
    sorted.sort_by_key(|v| v.as_str().unwrap().to_string());
    assert_eq!(relations, &sorted, "relations are emitted sorted");
    assert_eq!(value["caps"]["L"], serde_json::json!(30));

    let verify = run(&["verify", file.to_str().unwrap(), "--json"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&verify)).unwrap();
    assert_eq!(report["all_pass"], serde_json::json!(true));
    assert_eq!(report["special"]["kind"], serde_json::json!("structural"));
}

#[test]
fn truncdim_compares_dimensions() {
    let out = run(&["truncdim", fixture("dvr1.qz").to_str().unwrap(), "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("equal=true"));

    // mixed-characteristic model: not applicable -> input error
    let out = run(&["truncdim", fixture("intro.qz").to_str().unwrap(), "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn caps_override_via_env_and_flag() {
    let file = fixture("intro.qz");
    let out = Command::new(env!("CARGO_BIN_EXE_strandalg"))
        .args(["reduce", file.to_str().unwrap(), "p*e(1)"])
        .env("STRANDALG_CAPS", "8,4")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("caps: L=8 D=4"), "{}", stdout(&out));

    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_strandalg"))
        .args(["--caps", "10,6", "reduce", file.to_str().unwrap(), "p*e(1)"])
        .env("STRANDALG_CAPS", "8,4")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("caps: L=10 D=6"), "{}", stdout(&out));

    let out = Command::new(env!("CARGO_BIN_EXE_strandalg"))
        .args(["reduce", file.to_str().unwrap(), "p*e(1)"])
        .env("STRANDALG_CAPS", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_names_local_ring_shapes() {
    let out = run(&["report", fixture("intro.qz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("local ring at 5: k[c]/(c^3)"), "{text}");
    assert!(text.contains("local ring at 4: k[[b]]"), "{text}");

    let json = run(&["report", fixture("intro.qz").to_str().unwrap(), "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(value["pairs"].as_array().unwrap().len() == 25);
}

#[test]
fn fixture_corpus_round_trips() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("qz") {
            continue;
        }
        seen += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed = spec.to_string();
        let again = parse_spec(&printed).unwrap();
        assert_eq!(spec.quiver, again.quiver, "{}", path.display());
        assert_eq!(spec.model, again.model, "{}", path.display());
        assert_eq!(spec.params, again.params, "{}", path.display());
        let ours: Vec<String> = spec
            .zset
            .relations()
            .map(|r| r.render(&spec.quiver))
            .collect();
        let theirs: Vec<String> = again
            .zset
            .relations()
            .map(|r| r.render(&again.quiver))
            .collect();
        assert_eq!(ours, theirs, "{}", path.display());
    }
    assert_eq!(seen, 12, "all fixtures covered");
}
