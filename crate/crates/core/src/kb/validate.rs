use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::argument::ArgumentSet;
use crate::formula::{find_inconsistency, inconsistent_pair, Formula};

use super::closure::strict_closure;
use super::synth::pref_closure;
use super::{KnowledgeBase, RuleOrigin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ViolationCode {
    RuleOverlap,
    PrinMissing,
    AxiomInconsistent,
    ObligationNotCancellable,
    OrderNotPreorder,
    PrefCycle,
    PrefGuard,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationCode::RuleOverlap => "RULE-OVERLAP",
            ViolationCode::PrinMissing => "PRIN-MISSING",
            ViolationCode::AxiomInconsistent => "AXIOM-INCONSISTENT",
            ViolationCode::ObligationNotCancellable => "OBLIGATION-NOT-CANCELLABLE",
            ViolationCode::OrderNotPreorder => "ORDER-NOT-PREORDER",
            ViolationCode::PrefCycle => "PREF-CYCLE",
            ViolationCode::PrefGuard => "PREF-GUARD",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
    pub items: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub well_defined: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn push(&mut self, code: ViolationCode, message: impl Into<String>, items: Vec<String>) {
        self.violations.push(Violation {
            code,
            message: message.into(),
            items,
        });
        self.well_defined = false;
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

/// Static well-definedness checks on a prepared (ground, synthesized,
/// transposition-closed) knowledge base. Obligation cancellability and the
/// preference guard on `Pref` facts need the constructed arguments and are
/// checked separately.
pub fn validate_kb(kb: &KnowledgeBase) -> ValidationReport {
    let mut report = ValidationReport {
        well_defined: true,
        violations: Vec::new(),
    };

    let strict_shapes: BTreeSet<_> = kb.strict_rules.iter().map(|r| r.shape()).collect();
    for n in &kb.norms {
        if strict_shapes.contains(&n.shape()) {
            report.push(
                ViolationCode::RuleOverlap,
                format!("norm {} also occurs as a strict rule", n.id),
                vec![n.id.clone()],
            );
        }
    }

    for n in &kb.norms {
        match &n.principle {
            Some(p) if kb.principles.contains_key(p) => {}
            _ => report.push(
                ViolationCode::PrinMissing,
                format!("norm {} has no declared principle", n.id),
                vec![n.id.clone()],
            ),
        }
    }

    let closure = strict_closure(kb.facts.iter(), kb);
    if let Some((a, b)) = find_inconsistency(closure.iter(), &kb.incompatibilities) {
        report.push(
            ViolationCode::AxiomInconsistent,
            format!("the strict closure of the facts contains {a} and {b}"),
            vec![a.to_string(), b.to_string()],
        );
    }

    let collapsed = kb.principle_order.collapsed_strict_pairs();
    if !collapsed.is_empty() || !kb.principle_order.is_preorder() {
        report.push(
            ViolationCode::OrderNotPreorder,
            "declared strict principle orderings collapse into equivalences",
            collapsed
                .into_iter()
                .map(|(a, b)| format!("{a} < {b}"))
                .collect(),
        );
    }

    for (b, a) in pref_closure(&kb.action_prefs) {
        if b == a {
            report.push(
                ViolationCode::PrefCycle,
                format!("action preferences are cyclic through {a}"),
                vec![a.to_string()],
            );
        } else if kb.action_prefs.contains(&(a.clone(), b.clone())) && b < a {
            report.push(
                ViolationCode::PrefCycle,
                format!("both Pref({b}, {a}) and Pref({a}, {b}) are asserted"),
                vec![
                    Formula::pref(b.clone(), a.clone()).to_string(),
                    Formula::pref(a, b).to_string(),
                ],
            );
        }
    }

    report
}

/// Two conflicting conclusions must not both be reachable without a norm
/// as the last rule. Only facts and declared (or grounded) strict rules
/// count as strict tops here: A2 read right to left makes every obligation
/// the head of some synthesized strict rule, which no knowledge base with
/// conflicting obligations could satisfy.
pub fn check_obligation_cancellable(
    args: &ArgumentSet,
    kb: &KnowledgeBase,
    report: &mut ValidationReport,
) {
    let mut heads: BTreeMap<&Formula, bool> = BTreeMap::new();
    for a in args.iter() {
        let is_fact = match args.top_rule(a.id) {
            None => true,
            Some(r)
                if !r.is_defeasible()
                    && matches!(r.origin, RuleOrigin::Declared | RuleOrigin::Grounded { .. }) =>
            {
                false
            }
            Some(_) => continue,
        };
        *heads.entry(args.conc(a.id)).or_insert(is_fact) &= is_fact;
    }
    let heads: Vec<(&Formula, bool)> = heads.into_iter().collect();
    for (i, (a, a_fact)) in heads.iter().enumerate() {
        for (b, b_fact) in &heads[i + 1..] {
            if *a_fact && *b_fact {
                continue;
            }
            if inconsistent_pair(a, b, &kb.incompatibilities) {
                report.push(
                    ViolationCode::ObligationNotCancellable,
                    format!("{a} and {b} conflict but neither is only the head of a norm"),
                    vec![a.to_string(), b.to_string()],
                );
            }
        }
    }
}
