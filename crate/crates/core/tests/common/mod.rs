#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use lesac::argument::DEFAULT_ARG_CAP;
use lesac::attack::Preference;
use lesac::kb::load_kb;
use lesac::semantics::Framework;
use lesac::{Error, Reasoner};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture_source(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture exists")
}

pub fn reasoner(name: &str) -> Reasoner {
    Reasoner::from_source(&fixture_source(name), Preference::default()).expect("fixture loads")
}

const PREDICATES: [&str; 4] = ["Pa", "Pb", "Pc", "Pd"];

/// Source text of a random knowledge base: at most 8 norms, 6 strict
/// rules and 5 constants.
pub fn random_kb_source(rng: &mut StdRng) -> String {
    let n_consts = rng.gen_range(1..=5);
    let consts: Vec<String> = (0..n_consts).map(|i| format!("c{i}")).collect();
    let mut pool: Vec<String> = Vec::new();
    while pool.len() < 6 {
        let a = format!(
            "{}({})",
            PREDICATES.choose(rng).unwrap(),
            consts.choose(rng).unwrap()
        );
        if !pool.contains(&a) {
            pool.push(a);
        }
        if pool.len() == PREDICATES.len() * consts.len() {
            break;
        }
    }
    let literal = |rng: &mut StdRng| {
        let a = pool.choose(rng).unwrap().clone();
        if rng.gen_bool(0.4) {
            format!("~{a}")
        } else {
            a
        }
    };
    let deontic = |rng: &mut StdRng, lit: String| match rng.gen_range(0..6) {
        0..=2 => lit,
        3 | 4 => format!("O({lit})"),
        _ => format!("P({lit})"),
    };

    let mut s = String::new();
    let _ = writeln!(s, "const {}.", consts.join(", "));
    let n_prin = rng.gen_range(1..=4);
    let mut prins: Vec<String> = (0..n_prin).map(|i| format!("q{i}")).collect();
    for p in &prins {
        let _ = writeln!(s, "principle {p}");
    }
    prins.shuffle(rng);
    for w in prins.windows(2) {
        let op = if rng.gen_bool(0.65) { "<" } else { "~" };
        let _ = writeln!(s, "order {} {op} {}.", w[0], w[1]);
    }
    for _ in 0..rng.gen_range(1..=3) {
        let _ = writeln!(s, "fact {}.", pool.choose(rng).unwrap());
    }

    let n_norms = rng.gen_range(1..=8);
    let mut typed = 0;
    if n_consts > 1 && rng.gen_bool(0.3) {
        let (p, q) = (
            PREDICATES.choose(rng).unwrap(),
            PREDICATES.choose(rng).unwrap(),
        );
        let head = if rng.gen_bool(0.5) {
            format!("O({q}(x))")
        } else {
            format!("{q}(x)")
        };
        let _ = writeln!(
            s,
            "rule forall x: {p}(x) ~> {head} [{}].",
            prins.choose(rng).unwrap()
        );
        typed = 1;
    }
    // formulas some earlier rule or fact can produce, so that norms fire
    let mut available: Vec<String> = pool
        .iter()
        .filter(|a| s.contains(&format!("fact {a}.")))
        .cloned()
        .collect();
    for i in typed..n_norms {
        let ants: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|_| {
                if rng.gen_bool(0.75) {
                    available.choose(rng).unwrap().clone()
                } else {
                    let l = literal(rng);
                    deontic(rng, l)
                }
            })
            .collect();
        let cons = if rng.gen_bool(0.45) {
            let base = available.choose(rng).unwrap().clone();
            conflicting(rng, &base)
        } else {
            let l = literal(rng);
            deontic(rng, l)
        };
        let _ = writeln!(
            s,
            "norm n{i} [{}]: {} => {cons}.",
            prins.choose(rng).unwrap(),
            ants.join(", ")
        );
        available.push(cons);
    }
    for i in 0..rng.gen_range(0..=6) {
        let ants: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let a = available.choose(rng).unwrap();
                if rng.gen_bool(0.6) && !a.starts_with(['O', 'P']) {
                    a.clone()
                } else {
                    literal(rng)
                }
            })
            .collect();
        let _ = writeln!(s, "strict s{i}: {} -> {}.", ants.join(", "), literal(rng));
    }
    if rng.gen_bool(0.3) {
        let mut two: Vec<&String> = pool.choose_multiple(rng, 2).collect();
        if two.len() == 2 {
            let _ = writeln!(s, "incompatible {}, {}.", two[0], two[1]);
            if rng.gen_bool(0.5) {
                two.shuffle(rng);
                let _ = writeln!(s, "pref {} > {}.", two[0], two[1]);
            }
        }
    }
    s
}

fn flip(lit: &str) -> String {
    match lit.strip_prefix('~') {
        Some(a) => a.to_string(),
        None => format!("~{lit}"),
    }
}

/// A formula that conflicts with `f`, which is a literal or a deontic
/// literal.
fn conflicting(rng: &mut StdRng, f: &str) -> String {
    let inner = |f: &str| f[2..f.len() - 1].to_string();
    if f.starts_with("O(") {
        let l = inner(f);
        match rng.gen_range(0..3) {
            0 => format!("O({})", flip(&l)),
            1 => format!("P({})", flip(&l)),
            _ => format!("~O({l})"),
        }
    } else if f.starts_with("P(") {
        format!("O({})", flip(&inner(f)))
    } else {
        flip(f)
    }
}

pub struct Corpus {
    pub kbs: Vec<(String, Reasoner)>,
    pub attempts: usize,
}

/// Keeps drawing random knowledge bases until `count` of them are
/// well-defined under the default preference.
pub fn well_defined_corpus(seed: u64, count: usize) -> Corpus {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut kbs = Vec::new();
    let mut attempts = 0;
    while kbs.len() < count {
        attempts += 1;
        assert!(
            attempts < count * 50,
            "generator rarely yields well-defined knowledge bases"
        );
        let src = random_kb_source(&mut rng);
        let kb =
            load_kb(&src).unwrap_or_else(|e| panic!("generated source must parse: {e}\n{src}"));
        let r = match Reasoner::new(kb, Preference::default(), DEFAULT_ARG_CAP) {
            Ok(r) => r,
            Err(Error::ExplosionGuard { .. } | Error::AttackGuard { .. }) => continue,
            Err(e) => panic!("{e}\n{src}"),
        };
        if r.validate().well_defined {
            kbs.push((src, r));
        }
    }
    Corpus { kbs, attempts }
}

pub fn random_framework(rng: &mut StdRng, max_n: usize) -> Framework {
    let n = rng.gen_range(0..=max_n);
    let density: f64 = rng.gen_range(0.05..0.4);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Framework::new(n, edges)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    In,
    Out,
    Undec,
}

/// Every complete labelling, found by trying all 3^n assignments. A branch
/// is cut as soon as some node with all its attackers labelled is illegal.
pub fn oracle_complete(fw: &Framework) -> Vec<BTreeSet<usize>> {
    let n = fw.len();
    // nodes whose attackers are all labelled once position i is set
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        let last = fw.attackers(a).iter().copied().chain([a]).max().unwrap();
        ready[last].push(a);
    }
    let mut labels = vec![Label::Undec; n];
    let mut found = Vec::new();
    fn legal(fw: &Framework, labels: &[Label], a: usize) -> bool {
        let att = fw.attackers(a);
        let all_out = att.iter().all(|&b| labels[b] == Label::Out);
        let some_in = att.iter().any(|&b| labels[b] == Label::In);
        match labels[a] {
            Label::In => all_out,
            Label::Out => some_in,
            Label::Undec => !all_out && !some_in,
        }
    }
    fn go(
        fw: &Framework,
        ready: &[Vec<usize>],
        i: usize,
        labels: &mut Vec<Label>,
        found: &mut Vec<BTreeSet<usize>>,
    ) {
        if i == labels.len() {
            found.push(
                (0..labels.len())
                    .filter(|&a| labels[a] == Label::In)
                    .collect(),
            );
            return;
        }
        for l in [Label::In, Label::Out, Label::Undec] {
            labels[i] = l;
            if ready[i].iter().all(|&a| legal(fw, labels, a)) {
                go(fw, ready, i + 1, labels, found);
            }
        }
    }
    go(fw, &ready, 0, &mut labels, &mut found);
    found.sort();
    found
}
