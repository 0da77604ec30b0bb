use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::attack::{Link, Preference, SetComparison};
use crate::error::Error;
use crate::kb::{load_kb, parse_formula};
use crate::reasoner::Reasoner;
use crate::semantics::{Semantics, Stance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Conclusions,
    Explain,
    Graph,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
    Dot,
}

/// Deontic structured argumentation over `.lsc` knowledge bases.
#[derive(Debug, Clone, Parser)]
#[command(name = "lesac", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    pub kb_path: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub link: Link,
    #[arg(long, value_enum, default_value_t)]
    pub setcomp: SetComparison,
    #[arg(long, value_enum, default_value_t)]
    pub stance: Stance,
    #[arg(long, value_enum, default_value_t)]
    pub semantics: Semantics,
    /// Formula to explain, in `.lsc` syntax.
    #[arg(long)]
    pub target: Option<String>,
    /// Defaults to json for `explain` and text otherwise.
    #[arg(long, value_enum)]
    pub output: Option<Output>,
    /// Index into the sorted list of complete extensions.
    #[arg(long = "extension")]
    pub extension_index: Option<usize>,
    /// Also report every principle behind the explained argument.
    #[arg(long)]
    pub verbose: bool,
}

impl RunConfig {
    pub fn new(command: Command, kb_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            kb_path: kb_path.into(),
            link: Link::default(),
            setcomp: SetComparison::default(),
            stance: Stance::default(),
            semantics: Semantics::default(),
            target: None,
            output: None,
            extension_index: None,
            verbose: false,
        }
    }

    pub fn output(&self) -> Output {
        match (self.output, self.command) {
            (Some(o), _) => o,
            (None, Command::Explain) => Output::Json,
            (None, _) => Output::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::ExplosionGuard { .. } | Error::AttackGuard { .. } => 1,
        Error::NotAccepted { .. } | Error::EmptyInput => 2,
        _ => 3,
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// Runs one command. Exit codes: 0 success, 1 validation or check failure,
/// 2 query failure, 3 input error.
pub fn run(cfg: &RunConfig) -> Outcome {
    let source = match std::fs::read_to_string(&cfg.kb_path) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(3, format!("cannot read {}: {e}", cfg.kb_path.display())),
    };
    let kb = match load_kb(&source) {
        Ok(kb) => kb,
        Err(e) => return Outcome::fail(3, format!("{}: {e}", cfg.kb_path.display())),
    };
    let pref = Preference::new(cfg.link, cfg.setcomp);
    let reasoner = match Reasoner::new(kb, pref, crate::argument::arg_cap_from_env()) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(error_code(&e), e.to_string()),
    };

    let report = reasoner.validate();
    if cfg.command == Command::Validate {
        let stdout = match cfg.output() {
            Output::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
            _ => {
                let mut s = String::new();
                if report.well_defined {
                    s.push_str("well-defined\n");
                } else {
                    s.push_str("not well-defined\n");
                    for v in &report.violations {
                        let _ = writeln!(s, "{}: {}", v.code, v.message);
                    }
                }
                s
            }
        };
        return Outcome {
            code: if report.well_defined { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        };
    }
    if !report.well_defined {
        let mut s = String::from("knowledge base is not well-defined\n");
        for v in &report.violations {
            let _ = writeln!(s, "{}: {}", v.code, v.message);
        }
        return Outcome::fail(1, s);
    }

    match cfg.command {
        Command::Validate => unreachable!("handled above"),
        Command::Conclusions => conclusions(cfg, &reasoner),
        Command::Explain => explain(cfg, &reasoner),
        Command::Graph => graph(cfg, &reasoner),
        Command::Check => check(cfg, &reasoner),
    }
}

fn conclusions(cfg: &RunConfig, r: &Reasoner) -> Outcome {
    let concl = match r.conclusions(cfg.semantics, cfg.stance) {
        Ok(c) => c,
        Err(e) => return Outcome::fail(error_code(&e), e.to_string()),
    };
    match cfg.output() {
        Output::Json => {
            let exts: Vec<serde_json::Value> = r
                .extensions(cfg.semantics)
                .iter()
                .map(|e| {
                    json!({
                        "arguments": e.members.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                        "conclusions": e.conclusions.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Outcome::ok(pretty(&json!({
                "semantics": cfg.semantics,
                "stance": cfg.stance,
                "extensions": exts,
                "conclusions": concl.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            })))
        }
        _ => Outcome::ok(concl.iter().map(|f| format!("{f}\n")).collect()),
    }
}

fn explain(cfg: &RunConfig, r: &Reasoner) -> Outcome {
    let Some(text) = &cfg.target else {
        return Outcome::fail(2, "explain needs --target");
    };
    let target = match parse_formula(text) {
        Ok(f) => f,
        Err(e) => return Outcome::fail(3, format!("target: {e}")),
    };
    let result = match cfg.extension_index {
        Some(i) => {
            let exts = r.complete();
            match exts.get(i) {
                Some(ext) => r.explain(&target, ext, cfg.verbose),
                None => {
                    return Outcome::fail(
                        2,
                        format!(
                            "there are {} complete extensions, index {i} is out of range",
                            exts.len()
                        ),
                    )
                }
            }
        }
        None => r.explain_default(&target, cfg.semantics, cfg.verbose),
    };
    match result {
        Ok(e) => match cfg.output() {
            Output::Json => Outcome::ok(pretty(&e.to_json(&r.kb))),
            _ => Outcome::ok(e.render_text(&r.kb)),
        },
        Err(e) => Outcome::fail(error_code(&e), e.to_string()),
    }
}

fn graph(cfg: &RunConfig, r: &Reasoner) -> Outcome {
    match cfg.output() {
        Output::Dot => Outcome::ok(r.graph.to_dot(&r.args)),
        Output::Json => {
            let args: Vec<serde_json::Value> = r
                .args
                .iter()
                .map(|a| {
                    json!({
                        "id": a.id.to_string(),
                        "conclusion": r.args.conc(a.id).to_string(),
                        "norms": r.args.norm_ids(a.id),
                    })
                })
                .collect();
            let defeats: Vec<[String; 2]> = r
                .graph
                .defeats
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect();
            Outcome::ok(pretty(&json!({ "arguments": args, "defeats": defeats })))
        }
        Output::Text => {
            let mut s = String::new();
            for a in r.args.iter() {
                let _ = writeln!(s, "{}: {}", a.id, r.args.conc(a.id));
            }
            for (a, b) in &r.graph.defeats {
                let _ = writeln!(s, "{a} defeats {b}");
            }
            Outcome::ok(s)
        }
    }
}

fn check(cfg: &RunConfig, r: &Reasoner) -> Outcome {
    let reports = r.check_all_postulates();
    let ordering = r.check_ordering();
    let ok = reports.iter().all(|(_, p)| p.all_pass()) && ordering.is_reasonable();
    let stdout = match cfg.output() {
        Output::Json => {
            let exts: Vec<serde_json::Value> = reports
                .iter()
                .map(|(e, p)| {
                    json!({
                        "arguments": e.members.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                        "postulates": p,
                    })
                })
                .collect();
            pretty(&json!({ "extensions": exts, "ordering": ordering }))
        }
        _ => {
            let mut s = String::new();
            for (i, (_, p)) in reports.iter().enumerate() {
                for (name, c) in p.checks() {
                    match c {
                        crate::postulates::Check::Pass => {
                            let _ = writeln!(s, "extension {i}: {name}: pass");
                        }
                        crate::postulates::Check::Fail(w) => {
                            let _ = writeln!(s, "extension {i}: {name}: FAIL ({w})");
                        }
                    }
                }
            }
            if ordering.is_reasonable() {
                s.push_str("ordering: reasonable\n");
            } else {
                for v in &ordering.violations {
                    let _ = writeln!(s, "ordering: FAIL ({v})");
                }
            }
            s
        }
    };
    Outcome {
        code: if ok { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}
