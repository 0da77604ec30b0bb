//! Runtime checks for the rationality postulates on computed extensions and
//! for the reasonableness of the argument ordering.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::argument::{ArgId, ArgumentSet, PrinIdx};
use crate::attack::{set_compare_by, Preference};
use crate::formula::{find_inconsistency, Formula};
use crate::kb::{KnowledgeBase, StrictIndex, ValidationReport, ViolationCode};
use crate::semantics::Extension;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "witness", rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail(String),
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostulateReport {
    pub subargument_closure: Check,
    pub strict_rule_closure: Check,
    pub direct_consistency: Check,
    pub indirect_consistency: Check,
}

impl PostulateReport {
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed())
    }

    pub fn checks(&self) -> [(&'static str, &Check); 4] {
        [
            ("sub-argument closure", &self.subargument_closure),
            ("closure under strict rules", &self.strict_rule_closure),
            ("direct consistency", &self.direct_consistency),
            ("indirect consistency", &self.indirect_consistency),
        ]
    }
}

fn pair_witness(p: Option<(Formula, Formula)>) -> Check {
    match p {
        None => Check::Pass,
        Some((a, b)) => Check::Fail(format!("{a} conflicts with {b}")),
    }
}

/// Checks the four postulates on one extension.
pub fn check_postulates(
    ext: &Extension,
    args: &ArgumentSet,
    kb: &KnowledgeBase,
) -> PostulateReport {
    check_postulates_with(ext, args, kb, &StrictIndex::for_kb(kb))
}

/// As [`check_postulates`], reusing a prebuilt strict-rule index.
pub fn check_postulates_with(
    ext: &Extension,
    args: &ArgumentSet,
    kb: &KnowledgeBase,
    index: &StrictIndex<'_>,
) -> PostulateReport {
    let mut subargument_closure = Check::Pass;
    'outer: for &a in &ext.members {
        for &s in &args.get(a).sub {
            if !ext.contains(s) {
                subargument_closure = Check::Fail(format!(
                    "{a} is in the extension but its subargument {s} is not"
                ));
                break 'outer;
            }
        }
    }

    let closure = index.close(ext.conclusions.iter());
    let strict_rule_closure = match closure.iter().find(|f| !ext.conclusions.contains(*f)) {
        None => Check::Pass,
        Some(f) => Check::Fail(format!(
            "{f} follows strictly from the conclusions but is not one of them"
        )),
    };

    PostulateReport {
        subargument_closure,
        strict_rule_closure,
        direct_consistency: pair_witness(find_inconsistency(
            ext.conclusions.iter(),
            &kb.incompatibilities,
        )),
        indirect_consistency: pair_witness(find_inconsistency(
            closure.iter(),
            &kb.incompatibilities,
        )),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OrderingReport {
    pub violations: Vec<String>,
}

impl OrderingReport {
    pub fn is_reasonable(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Defeasible frontier: the topmost subarguments whose last rule is a norm.
fn frontier(
    args: &ArgumentSet,
    a: ArgId,
    memo: &mut BTreeMap<ArgId, BTreeSet<ArgId>>,
) -> BTreeSet<ArgId> {
    if let Some(f) = memo.get(&a) {
        return f.clone();
    }
    let arg = args.get(a);
    let f = if arg.defeasible_top {
        [a].into()
    } else {
        let mut f = BTreeSet::new();
        for s in &arg.subs {
            f.extend(frontier(args, *s, memo));
        }
        f
    };
    memo.insert(a, f.clone());
    f
}

/// Checks the reasonable-ordering conditions over the constructed arguments.
///
/// `A′` counts as a strict continuation of `A` when `A` is a subargument of
/// `A′` and both have the same defeasible frontier, i.e. only strict rules
/// were applied on top of `A`. Condition 2 is checked on up to four
/// arguments at a time, with the continuation of the others carrying the
/// union of their principle sets.
pub fn check_reasonable_ordering(args: &ArgumentSet, pref: Preference) -> OrderingReport {
    let mut report = OrderingReport::default();
    let lt = |x: &PrinIdx, y: &PrinIdx| args.prin_lt(*x, *y);
    let cmp = |g: &BTreeSet<PrinIdx>, h: &BTreeSet<PrinIdx>| set_compare_by(g, h, pref.mode, lt);
    let name = |s: &BTreeSet<PrinIdx>| {
        let v: Vec<&str> = s.iter().map(|&p| args.principles[p].as_str()).collect();
        format!("{{{}}}", v.join(", "))
    };

    // representatives per (strict?, S-set) class
    let mut classes: BTreeMap<(bool, BTreeSet<PrinIdx>), ArgId> = BTreeMap::new();
    for a in args.iter() {
        classes
            .entry((a.is_strict(), pref.principles(args, a.id).clone()))
            .or_insert(a.id);
    }
    let reps: Vec<(&(bool, BTreeSet<PrinIdx>), &ArgId)> = classes.iter().collect();

    for ((a_strict, sa), a) in &reps {
        if cmp(sa, sa) {
            report
                .violations
                .push(format!("{a} is strictly below itself"));
        }
        for ((b_strict, sb), b) in &reps {
            match (a_strict, b_strict) {
                (true, false) if !pref.prec(args, **b, **a) => report
                    .violations
                    .push(format!("normative {b} is not below strict {a}")),
                (true, true) if pref.prec(args, **b, **a) => report
                    .violations
                    .push(format!("strict {b} is below strict {a}")),
                _ => {}
            }
            for ((_, sc), c) in &reps {
                if cmp(sa, sb) && cmp(sb, sc) && !cmp(sa, sc) {
                    report.violations.push(format!(
                        "ordering not transitive through {a} {} < {b} {} < {c} {}",
                        name(sa),
                        name(sb),
                        name(sc)
                    ));
                }
            }
        }
    }

    // 1(c): strict continuations keep their relations
    let mut memo = BTreeMap::new();
    let class_sets: Vec<&BTreeSet<PrinIdx>> = reps.iter().map(|((_, s), _)| s).collect();
    for a2 in args.iter().filter(|a| !a.defeasible_top) {
        let f2 = frontier(args, a2.id, &mut memo);
        for &a in &a2.sub {
            if a == a2.id || frontier(args, a, &mut memo) != f2 {
                continue;
            }
            let (s1, s2) = (pref.principles(args, a), pref.principles(args, a2.id));
            if s1 == s2 {
                continue;
            }
            for sb in &class_sets {
                if (!cmp(s1, sb) && cmp(s2, sb)) || (!cmp(sb, s1) && cmp(sb, s2)) {
                    report.violations.push(format!(
                        "strict continuation {} of {a} changes its relation to {}",
                        a2.id,
                        name(sb)
                    ));
                }
            }
        }
    }

    // 2: no family where every member is beaten by the continuation of the rest
    let sets: Vec<BTreeSet<PrinIdx>> = class_sets
        .iter()
        .map(|s| (*s).clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = sets.len();
    let mut family: Vec<usize> = Vec::new();
    fn families(
        k: usize,
        start: usize,
        max: usize,
        family: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if family.len() >= 2 {
            f(family);
        }
        if family.len() == max {
            return;
        }
        for i in start..k {
            family.push(i);
            families(k, i, max, family, f);
            family.pop();
        }
    }
    let mut found: Option<Vec<usize>> = None;
    families(k, 0, 4, &mut family, &mut |fam| {
        if found.is_some() {
            return;
        }
        let all_beaten = (0..fam.len()).all(|i| {
            let rest: BTreeSet<PrinIdx> = fam
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .flat_map(|(_, &m)| sets[m].iter().copied())
                .collect();
            cmp(&rest, &sets[fam[i]])
        });
        if all_beaten {
            found = Some(fam.to_vec());
        }
    });
    if let Some(fam) = found {
        let parts: Vec<String> = fam.iter().map(|&m| name(&sets[m])).collect();
        report.violations.push(format!(
            "every member of [{}] is beaten by the others",
            parts.join(", ")
        ));
    }

    report
}

/// The guard on asserted action preferences: for `Pref(β, α)` no argument
/// for `O(β)` may be strictly below an argument for `O(α)`. Arguments that
/// use the preference itself as a premise are not considered.
pub fn check_pref_guard(
    args: &ArgumentSet,
    kb: &KnowledgeBase,
    pref: Preference,
    report: &mut ValidationReport,
) {
    for (beta, alpha) in &kb.action_prefs {
        let fact = Formula::pref(beta.clone(), alpha.clone());
        let independent = |x: &&ArgId| !args.prem(**x).contains(&fact);
        let bs: Vec<ArgId> = args
            .with_conclusion(&Formula::obl(beta.clone()))
            .iter()
            .filter(independent)
            .copied()
            .collect();
        let as_: Vec<ArgId> = args
            .with_conclusion(&Formula::obl(alpha.clone()))
            .iter()
            .filter(independent)
            .copied()
            .collect();
        'pairs: for &b in &bs {
            for &a in &as_ {
                if pref.prec(args, b, a) {
                    report.push(
                        ViolationCode::PrefGuard,
                        format!("{fact} is asserted but {b} for O({beta}) is weaker than {a} for O({alpha})"),
                        vec![fact.to_string(), b.to_string(), a.to_string()],
                    );
                    break 'pairs;
                }
            }
        }
    }
}
