//! Acceptance suite. Prints one line per criterion and exits nonzero if
//! any of them fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lesac::attack::Preference;
use lesac::formula::{find_inconsistency, Formula};
use lesac::kb::parse_formula;
use lesac::semantics::{complete_extensions, grounded, Semantics, Stance};
use lesac::Reasoner;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{fixture_source, oracle_complete, random_framework, well_defined_corpus};

const CORPUS_SIZE: usize = 200;
const GRAPHS: usize = 500;

fn f(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn timed_reasoner(name: &str) -> (Reasoner, Duration) {
    let start = Instant::now();
    let r =
        Reasoner::from_source(&fixture_source(name), Preference::default()).expect("fixture loads");
    (r, start.elapsed())
}

fn skeptical(r: &Reasoner, sem: Semantics) -> BTreeSet<Formula> {
    r.conclusions(sem, Stance::Skeptical)
        .expect("at least one extension")
}

fn expect_in(set: &BTreeSet<Formula>, wanted: &[&str], label: &str) -> Result<(), String> {
    for w in wanted {
        if !set.contains(&f(w)) {
            return Err(format!("{w} missing from {label} conclusions"));
        }
    }
    Ok(())
}

fn expect_out(set: &BTreeSet<Formula>, unwanted: &[&str], label: &str) -> Result<(), String> {
    for w in unwanted {
        if set.contains(&f(w)) {
            return Err(format!("{w} should not be among {label} conclusions"));
        }
    }
    Ok(())
}

fn explanation_matches(
    r: &Reasoner,
    sem: Semantics,
    target: &str,
    elements: &[&str],
    ordering: &[&str],
) -> Result<(), String> {
    let e = r
        .explain_default(&f(target), sem, false)
        .map_err(|e| e.to_string())?;
    let got = e.elements();
    let want: BTreeSet<String> = elements.iter().map(|s| s.to_string()).collect();
    if got != want {
        return Err(format!("Exp({target}) = {got:?}, expected {want:?}"));
    }
    let got_order = e.ordering_strings();
    if got_order != ordering {
        return Err(format!(
            "Exp({target}) ordering {got_order:?}, expected {ordering:?}"
        ));
    }
    Ok(())
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let (r, _) = timed_reasoner("ex3.lsc");
    let grounded = skeptical(&r, Semantics::Grounded);
    let elapsed = start.elapsed();
    let complete = skeptical(&r, Semantics::Complete);
    for (set, label) in [(&grounded, "grounded"), (&complete, "complete")] {
        expect_in(
            set,
            &["O(Sober(Roger))", "O(Protect(Roger))", "~O(Protect(Pongo))"],
            label,
        )?;
        expect_out(
            set,
            &[
                "P(~Sober(Roger))",
                "O(Protect(Pongo))",
                "O(~Protect(Pongo))",
            ],
            label,
        )?;
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} arguments, {elapsed:?}", r.args.len()))
}

fn criterion_2() -> Result<String, String> {
    let (r, _) = timed_reasoner("ex3.lsc");
    for sem in [Semantics::Grounded, Semantics::Complete] {
        explanation_matches(&r, sem, "O(Sober(Roger))", &["n4", "n5", "p5"], &[])?;
        explanation_matches(&r, sem, "O(Protect(Roger))", &["n1", "n7", "p1"], &[])?;
    }
    Ok("{n4, n5, p5} and {n1, n7, p1}".into())
}

fn criterion_3() -> Result<String, String> {
    let (r, _) = timed_reasoner("ex3_aidriver.lsc");
    let (base, _) = timed_reasoner("ex3.lsc");
    for sem in [Semantics::Grounded, Semantics::Complete] {
        expect_in(&skeptical(&base, sem), &["O(Protect(Roger))"], "baseline")?;
        expect_out(
            &skeptical(&r, sem),
            &["O(Protect(Roger))"],
            "counterfactual",
        )?;
    }
    Ok("O(Protect(Roger)) no longer skeptically justified".into())
}

fn criterion_4() -> Result<String, String> {
    let start = Instant::now();
    let (r, _) = timed_reasoner("ex5.lsc");
    let concl = skeptical(&r, Semantics::Complete);
    let elapsed = start.elapsed();
    expect_in(
        &concl,
        &["O(~HardBrake(AV))", "O(HitTree(AV) & ~Damage(Lamp))"],
        "complete",
    )?;
    expect_out(
        &concl,
        &["O(HardBrake(AV))", "O(HitLamp(AV) & ~Damage(AV))"],
        "complete",
    )?;
    explanation_matches(
        &r,
        Semantics::Complete,
        "O(~HardBrake(AV))",
        &["n1", "n2", "n9", "p1"],
        &[],
    )?;
    explanation_matches(
        &r,
        Semantics::Complete,
        "O(HitTree(AV) & ~Damage(Lamp))",
        &["n1", "n2", "n3", "n5", "n6", "n8", "n9", "p1", "p2"],
        &["p2 < p1"],
    )?;
    if elapsed >= Duration::from_secs(2) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} arguments, {elapsed:?}", r.args.len()))
}

struct Shared {
    reasoners: Vec<(String, Reasoner)>,
    generation: Duration,
    attempts: usize,
}

fn shared() -> Shared {
    let start = Instant::now();
    let corpus = well_defined_corpus(0x1e5ac, CORPUS_SIZE);
    let mut reasoners: Vec<(String, Reasoner)> = ["ex3.lsc", "ex3_aidriver.lsc", "ex5.lsc"]
        .iter()
        .map(|n| (n.to_string(), timed_reasoner(n).0))
        .collect();
    reasoners.extend(corpus.kbs);
    Shared {
        reasoners,
        generation: start.elapsed(),
        attempts: corpus.attempts,
    }
}

fn criterion_5(s: &Shared) -> Result<String, String> {
    let start = Instant::now();
    let mut extensions = 0;
    for (src, r) in &s.reasoners {
        for (i, (_, report)) in r.check_all_postulates().iter().enumerate() {
            extensions += 1;
            for (name, check) in report.checks() {
                if !check.passed() {
                    return Err(format!(
                        "{name} fails on extension {i} of:\n{src}\n{check:?}"
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed() + s.generation;
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "{} knowledge bases ({} drawn), {extensions} complete extensions, {elapsed:?}",
        s.reasoners.len(),
        s.attempts
    ))
}

fn criterion_6() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(6);
    let mut extensions = 0;
    for i in 0..GRAPHS {
        let fw = random_framework(&mut rng, 12);
        let oracle = oracle_complete(&fw);
        let got = complete_extensions(&fw);
        if got != oracle {
            return Err(format!("graph {i}: {got:?} vs oracle {oracle:?}"));
        }
        let g = grounded(&fw);
        if !oracle.contains(&g) || !oracle.iter().all(|e| g.is_subset(e)) {
            return Err(format!(
                "graph {i}: grounded {g:?} is not the least complete extension"
            ));
        }
        extensions += oracle.len();
    }
    Ok(format!(
        "{GRAPHS} graphs, {extensions} complete extensions, zero mismatches"
    ))
}

fn criterion_7(s: &Shared) -> Result<String, String> {
    let mut checked = 0;
    for (src, r) in &s.reasoners {
        for pref in Preference::all() {
            let report = r.with_preference(pref).check_ordering();
            if !report.is_reasonable() {
                return Err(format!("{pref:?}: {:?}\n{src}", report.violations));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (knowledge base, preference) pairs"))
}

fn criterion_8(s: &Shared) -> Result<String, String> {
    let mut obligations = 0;
    for (src, r) in &s.reasoners {
        for sem in [Semantics::Grounded, Semantics::Complete] {
            let concl = skeptical(r, sem);
            for c in &concl {
                if let Some(alpha) = c.as_obligation() {
                    obligations += 1;
                    if !concl.contains(&Formula::perm(alpha.clone())) {
                        return Err(format!("{c} without P({alpha}) under {sem:?}\n{src}"));
                    }
                }
            }
            if let Some((a, b)) = find_inconsistency(concl.iter(), &r.kb.incompatibilities) {
                return Err(format!("{a} and {b} both justified under {sem:?}\n{src}"));
            }
        }
    }
    Ok(format!(
        "{obligations} justified obligations, each with its permission"
    ))
}

fn report(n: usize, title: &str, result: std::thread::Result<Result<String, String>>) -> bool {
    let (ok, detail) = match result {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(p) => (
            false,
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()),
        ),
    };
    println!(
        "criterion {n} [{title}]: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() {
    let mut ok = true;
    ok &= report(1, "ex3 conclusions", catch_unwind(criterion_1));
    ok &= report(2, "ex3 explanations", catch_unwind(criterion_2));
    ok &= report(3, "AIdriver counterfactual", catch_unwind(criterion_3));
    ok &= report(
        4,
        "ex5 conclusions and explanations",
        catch_unwind(criterion_4),
    );
    let shared = catch_unwind(shared);
    match &shared {
        Ok(s) => {
            ok &= report(
                5,
                "postulates",
                catch_unwind(AssertUnwindSafe(|| criterion_5(s))),
            );
            ok &= report(6, "complete semantics oracle", catch_unwind(criterion_6));
            ok &= report(
                7,
                "reasonable ordering",
                catch_unwind(AssertUnwindSafe(|| criterion_7(s))),
            );
            ok &= report(
                8,
                "logic sanity",
                catch_unwind(AssertUnwindSafe(|| criterion_8(s))),
            );
        }
        Err(_) => {
            for (n, title) in [
                (5, "postulates"),
                (7, "reasonable ordering"),
                (8, "logic sanity"),
            ] {
                println!("criterion {n} [{title}]: FAIL (random corpus could not be built)");
            }
            report(6, "complete semantics oracle", catch_unwind(criterion_6));
            ok = false;
        }
    }
    if !ok {
        std::process::exit(1);
    }
}
