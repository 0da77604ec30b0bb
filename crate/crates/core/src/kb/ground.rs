use std::collections::BTreeSet;

use crate::error::Error;
use crate::formula::Formula;

use super::closure::StrictIndex;
use super::{KnowledgeBase, Quantifier, Rule, RuleKind, RuleOrigin, TypeRule};

/// Instantiate every quantified type rule over the constant pool.
///
/// Universal variables range over all known constants. An existential
/// variable is instantiated only with constants for which the substituted
/// antecedents already hold in `K` closed under the ground strict rules.
pub fn ground_kb(mut kb: KnowledgeBase) -> Result<KnowledgeBase, Error> {
    if kb.type_rules.is_empty() {
        return Ok(kb);
    }
    let type_rules = std::mem::take(&mut kb.type_rules);
    for t in &type_rules {
        check_bound(t)?;
    }
    let pool: Vec<String> = kb.constants.iter().cloned().collect();

    // strict universal rules first, so that existential instantiation can
    // see their consequences
    let (existential, universal): (Vec<&TypeRule>, Vec<&TypeRule>) = type_rules
        .iter()
        .partition(|t| t.binders.iter().any(|(q, _)| *q == Quantifier::Exists));
    let (strict_univ, defeasible_univ): (Vec<&TypeRule>, Vec<&TypeRule>) = universal
        .into_iter()
        .partition(|t| t.kind == RuleKind::Strict);

    for t in strict_univ.into_iter().chain(defeasible_univ) {
        for binding in bindings(t, &pool)? {
            push_instance(&mut kb, t, &binding);
        }
    }

    if !existential.is_empty() {
        let known = StrictIndex::for_kb(&kb).close(kb.facts.iter());
        for t in existential {
            for binding in bindings(t, &pool)? {
                let inst = instantiate(t, &binding);
                if inst.0.iter().all(|a| known.contains(a)) {
                    push_instance(&mut kb, t, &binding);
                }
            }
        }
    }
    Ok(kb)
}

fn check_bound(t: &TypeRule) -> Result<(), Error> {
    let bound: BTreeSet<&str> = t.binders.iter().map(|(_, v)| v.as_str()).collect();
    for f in t.antecedents.iter().chain([&t.consequent]) {
        if let Some(v) = f
            .variables()
            .into_iter()
            .find(|v| !bound.contains(v.as_str()))
        {
            return Err(Error::UnboundVariable {
                rule: t.id.clone(),
                var: v,
            });
        }
    }
    Ok(())
}

/// Cartesian product of the pool over the rule's binders.
fn bindings(t: &TypeRule, pool: &[String]) -> Result<Vec<Vec<(String, String)>>, Error> {
    if t.binders.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    if pool.is_empty() {
        return Err(Error::NoConstants { rule: t.id.clone() });
    }
    let mut out: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (_, var) in &t.binders {
        out = out
            .into_iter()
            .flat_map(|partial| {
                pool.iter().map(move |c| {
                    let mut next = partial.clone();
                    next.push((var.clone(), c.clone()));
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

fn instantiate(t: &TypeRule, binding: &[(String, String)]) -> (Vec<Formula>, Formula) {
    let apply = |f: &Formula| {
        binding
            .iter()
            .fold(f.clone(), |acc, (v, c)| acc.substitute(v, c))
    };
    (
        t.antecedents.iter().map(apply).collect(),
        apply(&t.consequent),
    )
}

fn push_instance(kb: &mut KnowledgeBase, t: &TypeRule, binding: &[(String, String)]) {
    let (antecedents, consequent) = instantiate(t, binding);
    let id = if binding.is_empty() {
        t.id.clone()
    } else {
        let consts: Vec<&str> = binding.iter().map(|(_, c)| c.as_str()).collect();
        format!("{}[{}]", t.id, consts.join(","))
    };
    let rule = Rule {
        id,
        antecedents,
        consequent,
        kind: t.kind,
        principle: if t.kind == RuleKind::Defeasible {
            t.principle.clone()
        } else {
            None
        },
        origin: RuleOrigin::Grounded {
            type_rule: t.id.clone(),
        },
    };
    match t.kind {
        RuleKind::Strict => kb.strict_rules.push(rule),
        RuleKind::Defeasible => kb.norms.push(rule),
    }
}
