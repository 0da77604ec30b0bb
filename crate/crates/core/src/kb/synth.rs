//! Finite instantiation of the deontic axiom schemes and inference rules as
//! strict rules, plus transposition closure.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{negate, subformula_universe, Formula};

use super::{KnowledgeBase, Rule, RuleKind, RuleOrigin, Scheme};

struct Synth {
    shapes: BTreeSet<(Vec<Formula>, Formula)>,
    counters: BTreeMap<Scheme, usize>,
    out: Vec<Rule>,
}

impl Synth {
    fn new(existing: &[Rule]) -> Self {
        Synth {
            shapes: existing.iter().map(Rule::shape).collect(),
            counters: BTreeMap::new(),
            out: Vec::new(),
        }
    }

    fn add(&mut self, scheme: Scheme, antecedents: Vec<Formula>, consequent: Formula) {
        let mut key = antecedents.clone();
        key.sort();
        if !self.shapes.insert((key, consequent.clone())) {
            return;
        }
        let n = self.counters.entry(scheme).or_insert(0);
        *n += 1;
        self.out.push(Rule {
            id: format!("{scheme}-{n}"),
            antecedents,
            consequent,
            kind: RuleKind::Strict,
            principle: None,
            origin: RuleOrigin::Synthesized { scheme },
        });
    }
}

fn is_deontic(f: &Formula) -> bool {
    f.subformulas().iter().any(|g| {
        matches!(
            g,
            Formula::Obligation(_) | Formula::Permission(_) | Formula::Pref(..)
        )
    })
}

/// Transitive closure of the `Pref(β, α)` facts as `(β, α)` pairs.
pub(crate) fn pref_closure(prefs: &BTreeSet<(Formula, Formula)>) -> BTreeSet<(Formula, Formula)> {
    let mut closed = prefs.clone();
    loop {
        let mut added = Vec::new();
        for (a, b) in &closed {
            for (c, d) in &closed {
                if b == c && !closed.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return closed;
        }
        closed.extend(added);
    }
}

/// Adds the strict rules instantiated from the axiom schemes over the
/// subformula universe of the (ground) knowledge base.
pub fn synthesize_strict_rules(mut kb: KnowledgeBase) -> KnowledgeBase {
    let mut s = Synth::new(&kb.strict_rules);

    for d in &kb.incompatibilities {
        let (oa, ob) = (Formula::obl(d.left.clone()), Formula::obl(d.right.clone()));
        s.add(
            Scheme::Incompatibility,
            vec![oa.clone(), ob.clone()],
            Formula::or(Formula::not(oa.clone()), Formula::not(ob.clone())),
        );
        s.add(
            Scheme::IncompatibilityDirected,
            vec![oa.clone()],
            Formula::not(ob.clone()),
        );
        s.add(Scheme::IncompatibilityDirected, vec![ob], Formula::not(oa));
    }

    let prefs = pref_closure(&kb.action_prefs);
    for (b, a) in &prefs {
        let (ob, oa, pref) = (
            Formula::obl(b.clone()),
            Formula::obl(a.clone()),
            Formula::pref(b.clone(), a.clone()),
        );
        s.add(
            Scheme::A4,
            vec![ob.clone(), oa.clone(), pref.clone()],
            Formula::and(ob.clone(), Formula::not(oa.clone())),
        );
        s.add(
            Scheme::R2,
            vec![ob.clone(), pref.clone()],
            Formula::not(oa.clone()),
        );
        s.add(Scheme::A6, vec![pref], Formula::implies(oa, ob));
    }
    for (x, y) in &prefs {
        for (y2, z) in &prefs {
            if y == y2 && x != z {
                s.add(
                    Scheme::A5,
                    vec![
                        Formula::pref(x.clone(), y.clone()),
                        Formula::pref(y.clone(), z.clone()),
                    ],
                    Formula::pref(x.clone(), z.clone()),
                );
            }
        }
    }

    let formulas_of = |kb: &KnowledgeBase, extra: &[Rule]| {
        subformula_universe(
            kb.facts
                .iter()
                .chain(kb.rules().flat_map(Rule::formulas))
                .chain(extra.iter().flat_map(Rule::formulas)),
        )
    };

    let universe = formulas_of(&kb, &s.out);
    for f in &universe {
        if let Formula::Implies(a, b) = f {
            s.add(
                Scheme::ModusPonens,
                vec![f.clone(), (**a).clone()],
                (**b).clone(),
            );
            if !is_deontic(a) && !is_deontic(b) {
                s.add(
                    Scheme::R1,
                    vec![Formula::obl((**a).clone()), f.clone()],
                    Formula::obl((**b).clone()),
                );
            }
        }
    }

    let universe = formulas_of(&kb, &s.out);
    for f in &universe {
        if let Formula::And(a, b) = f {
            s.add(Scheme::AndElim, vec![f.clone()], (**a).clone());
            s.add(Scheme::AndElim, vec![f.clone()], (**b).clone());
        }
    }

    let mut actions: BTreeSet<Formula> = BTreeSet::new();
    for f in &universe {
        if let Formula::Obligation(a) | Formula::Permission(a) = f {
            actions.insert(negate(a));
            actions.insert((**a).clone());
        }
    }
    for a in &actions {
        let oa = Formula::obl(a.clone());
        let not_p_neg = Formula::not(Formula::perm(negate(a)));
        s.add(Scheme::A1, vec![oa.clone()], Formula::perm(a.clone()));
        s.add(Scheme::A2Forward, vec![oa.clone()], not_p_neg.clone());
        s.add(Scheme::A2Backward, vec![not_p_neg], oa);
    }

    kb.strict_rules.extend(s.out);
    kb
}

/// Adds every transposition `φ1..−ψ..φn → −φi` of every strict rule. One
/// pass reaches the fixpoint since transposing twice only yields rules of
/// the first pass again.
pub fn close_under_transposition(mut kb: KnowledgeBase) -> KnowledgeBase {
    let mut shapes: BTreeSet<(Vec<Formula>, Formula)> =
        kb.strict_rules.iter().map(Rule::shape).collect();
    let mut added = Vec::new();
    for r in &kb.strict_rules {
        for i in 0..r.antecedents.len() {
            let mut ants = r.antecedents.clone();
            ants[i] = negate(&r.consequent);
            let cons = negate(&r.antecedents[i]);
            let mut key = ants.clone();
            key.sort();
            if !shapes.insert((key, cons.clone())) {
                continue;
            }
            added.push(Rule {
                id: format!("{}^t{}", r.id, i + 1),
                antecedents: ants,
                consequent: cons,
                kind: RuleKind::Strict,
                principle: None,
                origin: RuleOrigin::Transposed {
                    rule: r.id.clone(),
                    position: i + 1,
                },
            });
        }
    }
    kb.strict_rules.extend(added);
    kb
}
