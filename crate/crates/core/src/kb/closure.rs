use std::collections::{BTreeSet, HashMap};

use crate::formula::Formula;

use super::{KnowledgeBase, Rule};

/// Forward-chaining index over a fixed set of strict rules.
///
/// Built once and reused when many closures are computed against the same
/// rule set (postulate checks do this per extension).
pub struct StrictIndex<'a> {
    rules: Vec<&'a Rule>,
    /// distinct antecedents per rule
    needs: Vec<usize>,
    by_antecedent: HashMap<&'a Formula, Vec<usize>>,
}

impl<'a> StrictIndex<'a> {
    pub fn new<I>(rules: I) -> Self
    where
        I: IntoIterator<Item = &'a Rule>,
    {
        let rules: Vec<&Rule> = rules.into_iter().filter(|r| !r.is_defeasible()).collect();
        let mut by_antecedent: HashMap<&Formula, Vec<usize>> = HashMap::new();
        let mut needs = Vec::with_capacity(rules.len());
        for (i, r) in rules.iter().enumerate() {
            let distinct: BTreeSet<&Formula> = r.antecedents.iter().collect();
            needs.push(distinct.len());
            for a in distinct {
                by_antecedent.entry(a).or_default().push(i);
            }
        }
        StrictIndex {
            rules,
            needs,
            by_antecedent,
        }
    }

    pub fn for_kb(kb: &'a KnowledgeBase) -> Self {
        Self::new(kb.strict_rules.iter())
    }

    /// Least superset of `q` closed under the indexed rules.
    pub fn close<'q, I>(&self, q: I) -> BTreeSet<Formula>
    where
        I: IntoIterator<Item = &'q Formula>,
    {
        let mut out: BTreeSet<Formula> = BTreeSet::new();
        let mut remaining = self.needs.clone();
        let mut queue: Vec<Formula> = Vec::new();
        for f in q {
            if out.insert(f.clone()) {
                queue.push(f.clone());
            }
        }
        for (i, &n) in self.needs.iter().enumerate() {
            if n == 0 {
                let c = &self.rules[i].consequent;
                if out.insert(c.clone()) {
                    queue.push(c.clone());
                }
            }
        }
        while let Some(f) = queue.pop() {
            let Some(hits) = self.by_antecedent.get(&f) else {
                continue;
            };
            for &i in hits {
                remaining[i] -= 1;
                if remaining[i] == 0 {
                    let c = &self.rules[i].consequent;
                    if out.insert(c.clone()) {
                        queue.push(c.clone());
                    }
                }
            }
        }
        out
    }
}

/// `Cl_Rs(Q)`: closure of `q` under the strict rules of `kb`.
pub fn strict_closure<'q, I>(q: I, kb: &KnowledgeBase) -> BTreeSet<Formula>
where
    I: IntoIterator<Item = &'q Formula>,
{
    StrictIndex::for_kb(kb).close(q)
}
