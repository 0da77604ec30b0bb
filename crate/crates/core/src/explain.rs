//! Normative explanations for accepted conclusions.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::argument::{ArgId, ArgumentSet};
use crate::attack::DefeatGraph;
use crate::error::Error;
use crate::formula::Formula;
use crate::kb::{KnowledgeBase, Rule};
use crate::semantics::Extension;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub target: Formula,
    /// The argument for the target.
    pub argument: ArgId,
    /// Members of the extension that defeat the target's attackers.
    pub defenders: Vec<ArgId>,
    pub norms: Vec<Rule>,
    pub last_principles: BTreeSet<String>,
    /// Strict pairs `p < q` among the last principles.
    pub ordering: Vec<(String, String)>,
    /// Every principle behind the argument, filled in verbose mode only.
    pub all_principles: Option<BTreeSet<String>>,
}

impl Explanation {
    /// Norm ids and last principle ids as one flat set.
    pub fn elements(&self) -> BTreeSet<String> {
        self.norms
            .iter()
            .map(|n| n.id.clone())
            .chain(self.last_principles.iter().cloned())
            .collect()
    }

    pub fn ordering_strings(&self) -> Vec<String> {
        self.ordering
            .iter()
            .map(|(a, b)| format!("{a} < {b}"))
            .collect()
    }

    pub fn to_json(&self, kb: &KnowledgeBase) -> serde_json::Value {
        let norms: Vec<serde_json::Value> = self
            .norms
            .iter()
            .map(|n| {
                serde_json::json!({
                    "id": n.id,
                    "antecedents": n.antecedents.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    "consequent": n.consequent.to_string(),
                    "principle": n.principle,
                })
            })
            .collect();
        let principles: Vec<serde_json::Value> = self
            .last_principles
            .iter()
            .map(|p| {
                serde_json::json!({
                    "id": p,
                    "text": kb.principles.get(p).and_then(|pr| pr.text.clone()),
                })
            })
            .collect();
        let mut value = serde_json::json!({
            "target": self.target.to_string(),
            "norms": norms,
            "principles": principles,
            "ordering": self.ordering_strings(),
            "argument": self.argument.to_string(),
            "defenders": self.defenders.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        });
        if let Some(all) = &self.all_principles {
            value["all_principles"] = serde_json::json!(all);
        }
        value
    }

    pub fn render_text(&self, kb: &KnowledgeBase) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Exp({}) = {{", self.target);
        for n in &self.norms {
            let _ = writeln!(out, "  {n}");
        }
        for p in &self.last_principles {
            match kb.principles.get(p).and_then(|pr| pr.text.as_deref()) {
                Some(text) => {
                    let _ = writeln!(out, "  {p}: {text}");
                }
                None => {
                    let _ = writeln!(out, "  {p}");
                }
            }
        }
        for o in self.ordering_strings() {
            let _ = writeln!(out, "  {o}");
        }
        out.push_str("}\n");
        let defenders: Vec<String> = self.defenders.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            out,
            "argument {} defended by [{}]",
            self.argument,
            defenders.join(", ")
        );
        if let Some(all) = &self.all_principles {
            let all: Vec<&str> = all.iter().map(String::as_str).collect();
            let _ = writeln!(out, "all principles: {}", all.join(", "));
        }
        out
    }
}

/// Explains why `target` is accepted in `ext`.
///
/// The supporting argument is the member concluding `target` with the fewest
/// norms (ties by norm ids, then argument id). Every argument attacking it
/// on any subargument is answered by one member of `ext` that defeats the
/// attacker, preferring defenders that bring in the fewest extra norms.
pub fn explain(
    target: &Formula,
    ext: &Extension,
    graph: &DefeatGraph,
    args: &ArgumentSet,
    verbose: bool,
) -> Result<Explanation, Error> {
    let a = args
        .with_conclusion(target)
        .iter()
        .copied()
        .filter(|x| ext.contains(*x))
        .min_by_key(|x| {
            let ids: Vec<&str> = args.norm_ids(*x).into_iter().collect();
            (ids.len(), ids, *x)
        })
        .ok_or_else(|| Error::NotAccepted {
            target: target.to_string(),
        })?;
    let a_norms = &args.get(a).norms;

    let attackers: BTreeSet<ArgId> = graph
        .attacks
        .iter()
        .filter(|at| at.target == a)
        .map(|at| at.attacker)
        .collect();
    let mut defenders: BTreeSet<ArgId> = BTreeSet::new();
    for x in attackers {
        let best = ext
            .members
            .iter()
            .copied()
            .filter(|c| graph.defeats(*c, x))
            .min_by_key(|c| {
                let n = &args.get(*c).norms;
                (n.difference(a_norms).count(), n.len(), *c)
            });
        if let Some(c) = best {
            defenders.insert(c);
        }
    }

    let mut norm_idx: BTreeSet<usize> = a_norms.clone();
    let mut last = args.get(a).last_prin.clone();
    for d in &defenders {
        norm_idx.extend(&args.get(*d).norms);
        last.extend(&args.get(*d).last_prin);
    }
    let mut ordering = Vec::new();
    for &p in &last {
        for &q in &last {
            if args.prin_lt(p, q) {
                ordering.push((args.principles[p].clone(), args.principles[q].clone()));
            }
        }
    }
    ordering.sort();
    let mut norms: Vec<Rule> = norm_idx.iter().map(|&r| args.rules[r].clone()).collect();
    norms.sort_by_key(|n| natural_key(&n.id));

    Ok(Explanation {
        target: target.clone(),
        argument: a,
        defenders: defenders.into_iter().collect(),
        norms,
        last_principles: args.principle_names(&last),
        ordering,
        all_principles: verbose.then(|| args.prin(a)),
    })
}

/// Sort key that orders `n2` before `n10`.
fn natural_key(id: &str) -> (String, u64, String) {
    let prefix: String = id.chars().take_while(|c| !c.is_ascii_digit()).collect();
    let rest = &id[prefix.len()..];
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    let num = digits.parse().unwrap_or(0);
    (prefix, num, rest[digits.len()..].to_string())
}
