mod common;

use std::path::PathBuf;
use std::process::Command as Process;

use clap::Parser;
use lesac::cli::{run, Command, Output, RunConfig};
use lesac::semantics::Semantics;

fn temp_kb(name: &str, source: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lesac-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, source).unwrap();
    path
}

fn explain_cfg(fixture: &str, target: &str) -> RunConfig {
    let mut cfg = RunConfig::new(Command::Explain, common::fixture(fixture));
    cfg.target = Some(target.into());
    cfg
}

#[test]
fn validate_reports_well_defined() {
    let out = run(&RunConfig::new(
        Command::Validate,
        common::fixture("ex3.lsc"),
    ));
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "well-defined\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn validate_lists_violations() {
    let path = temp_kb("bad.lsc", "fact a.\nstrict s: a -> ~b.\nfact b.\n");
    let out = run(&RunConfig::new(Command::Validate, &path));
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("AXIOM-INCONSISTENT"), "{}", out.stdout);
    let out = run(&RunConfig::new(Command::Conclusions, &path));
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("not well-defined"));
}

#[test]
fn explain_defaults_to_json() {
    let out = run(&explain_cfg("ex3.lsc", "O(Sober(Roger))"));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let norms: Vec<&str> = v["norms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["id"].as_str().unwrap())
        .collect();
    assert_eq!(norms, ["n4", "n5"]);
    assert_eq!(v["principles"][0]["id"], "p5");
    assert_eq!(v["target"], "O(Sober(Roger))");
}

#[test]
fn explain_text_and_verbose() {
    let mut cfg = explain_cfg("ex5.lsc", "O(HitTree(AV) & ~Damage(Lamp))");
    cfg.output = Some(Output::Text);
    cfg.semantics = Semantics::Complete;
    cfg.verbose = true;
    let out = run(&cfg);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out
        .stdout
        .starts_with("Exp(O(HitTree(AV) & ~Damage(Lamp))) = {\n"));
    assert!(out.stdout.contains("  p2 < p1\n"));
    assert!(
        out.stdout.contains("all principles: p1, p2, p3, p4"),
        "{}",
        out.stdout
    );
}

#[test]
fn explain_unaccepted_target_exits_2() {
    let out = run(&explain_cfg("ex3.lsc", "O(Fly(Roger))"));
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("not accepted"));
}

#[test]
fn explain_needs_a_target() {
    let out = run(&RunConfig::new(
        Command::Explain,
        common::fixture("ex3.lsc"),
    ));
    assert_eq!(out.code, 2);
}

#[test]
fn explain_against_a_chosen_extension() {
    let mut cfg = explain_cfg("ex3_aidriver.lsc", "O(Protect(Roger))");
    let exts = run(&{
        let mut c = RunConfig::new(Command::Conclusions, common::fixture("ex3_aidriver.lsc"));
        c.semantics = Semantics::Complete;
        c.output = Some(Output::Json);
        c
    });
    let v: serde_json::Value = serde_json::from_str(&exts.stdout).unwrap();
    let accepting = v["extensions"]
        .as_array()
        .unwrap()
        .iter()
        .position(|e| {
            e["conclusions"]
                .as_array()
                .unwrap()
                .iter()
                .any(|c| c == "O(Protect(Roger))")
        })
        .expect("some complete extension accepts it");
    cfg.extension_index = Some(accepting);
    assert_eq!(run(&cfg).code, 0);
    cfg.extension_index = Some(999);
    assert_eq!(run(&cfg).code, 2);
}

#[test]
fn parse_errors_exit_3() {
    let path = temp_kb("syntax.lsc", "fact a(\n");
    let out = run(&RunConfig::new(Command::Validate, &path));
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("syntax error at 1:"), "{}", out.stderr);

    let out = run(&explain_cfg("ex3.lsc", "O(("));
    assert_eq!(out.code, 3);

    let out = run(&RunConfig::new(Command::Validate, "/nonexistent/kb.lsc"));
    assert_eq!(out.code, 3);
}

#[test]
fn conclusions_text_lists_one_formula_per_line() {
    let out = run(&RunConfig::new(
        Command::Conclusions,
        common::fixture("ex3.lsc"),
    ));
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert!(lines.contains(&"O(Sober(Roger))"));
    assert!(lines.contains(&"~O(Protect(Pongo))"));
    assert!(!lines.contains(&"P(~Sober(Roger))"));
}

#[test]
fn json_output_is_reproducible() {
    for cmd in [
        Command::Conclusions,
        Command::Graph,
        Command::Check,
        Command::Validate,
    ] {
        let mut cfg = RunConfig::new(cmd, common::fixture("ex5.lsc"));
        cfg.output = Some(Output::Json);
        cfg.semantics = Semantics::Complete;
        let a = run(&cfg);
        let b = run(&cfg);
        assert_eq!(a, b);
        serde_json::from_str::<serde_json::Value>(&a.stdout).unwrap();
    }
    let a = run(&explain_cfg("ex5.lsc", "O(~HardBrake(AV))"));
    assert_eq!(a, run(&explain_cfg("ex5.lsc", "O(~HardBrake(AV))")));
}

#[test]
fn graph_dot_output() {
    let mut cfg = RunConfig::new(Command::Graph, common::fixture("ex3.lsc"));
    cfg.output = Some(Output::Dot);
    let out = run(&cfg);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("digraph"));
    assert!(out.stdout.trim_end().ends_with('}'));
}

#[test]
fn check_passes_on_fixtures() {
    for f in ["ex3.lsc", "ex3_aidriver.lsc", "ex5.lsc"] {
        for link in ["last", "weakest"] {
            for setcomp in ["eli", "dem"] {
                let path = common::fixture(f);
                let cfg = RunConfig::parse_from([
                    "lesac",
                    "check",
                    path.to_str().unwrap(),
                    "--link",
                    link,
                    "--setcomp",
                    setcomp,
                ]);
                let out = run(&cfg);
                assert_eq!(out.code, 0, "{f} {link} {setcomp}\n{}", out.stdout);
                assert!(out.stdout.ends_with("ordering: reasonable\n"));
            }
        }
    }
}

#[test]
fn flags_parse() {
    let cfg = RunConfig::parse_from([
        "lesac",
        "explain",
        "kb.lsc",
        "--target",
        "O(a)",
        "--semantics",
        "complete",
        "--stance",
        "credulous",
        "--extension",
        "1",
        "--output",
        "text",
    ]);
    assert_eq!(cfg.command, Command::Explain);
    assert_eq!(cfg.extension_index, Some(1));
    assert_eq!(cfg.output(), Output::Text);
    assert_eq!(
        RunConfig::parse_from(["lesac", "graph", "kb.lsc"]).output(),
        Output::Text
    );
}

#[test]
fn binary_honours_the_argument_cap() {
    let bin = env!("CARGO_BIN_EXE_lesac");
    let fixture = common::fixture("ex3.lsc");
    let out = Process::new(bin)
        .args(["validate"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "well-defined\n");

    let out = Process::new(bin)
        .args(["conclusions"])
        .arg(&fixture)
        .env("LESAC_ARG_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap of 10"));

    let out = Process::new(bin)
        .args(["explain", "--target", "O(Fly(Roger))"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
