//! Argument construction: a forward-chaining fixpoint over facts and rules
//! that builds every argument tree exactly once.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::formula::Formula;
use crate::kb::{KnowledgeBase, Rule};

pub const DEFAULT_ARG_CAP: usize = 100_000;

/// Attacks allowed per argument of the cap before attack computation gives
/// up; attacks are counted per attacked super-argument, so they grow much
/// faster than arguments.
pub const ATTACKS_PER_ARG: usize = 20;

/// Cap from `LESAC_ARG_CAP`, falling back to [`DEFAULT_ARG_CAP`].
pub fn arg_cap_from_env() -> usize {
    std::env::var("LESAC_ARG_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ARG_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "String")]
pub struct ArgId(pub usize);

impl fmt::Display for ArgId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.0 + 1)
    }
}

impl From<ArgId> for String {
    fn from(a: ArgId) -> String {
        a.to_string()
    }
}

/// Index into [`ArgumentSet::rules`].
pub type RuleIdx = usize;
/// Index into [`ArgumentSet::principles`].
pub type PrinIdx = usize;
/// Index into the formula table.
pub type FormulaIdx = usize;

#[derive(Debug, Clone)]
pub struct Argument {
    pub id: ArgId,
    pub conc: FormulaIdx,
    /// `None` for a fact argument.
    pub top: Option<RuleIdx>,
    pub subs: Vec<ArgId>,
    pub prem: BTreeSet<FormulaIdx>,
    pub norms: BTreeSet<RuleIdx>,
    pub sr: BTreeSet<RuleIdx>,
    pub last_norms: BTreeSet<RuleIdx>,
    pub prin: BTreeSet<PrinIdx>,
    pub last_prin: BTreeSet<PrinIdx>,
    /// All subarguments, this argument included.
    pub sub: BTreeSet<ArgId>,
    /// Conclusions of all subarguments; the loop guard.
    below: BTreeSet<FormulaIdx>,
    pub defeasible_top: bool,
}

impl Argument {
    pub fn is_strict(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.top.is_none()
    }
}

/// The arena of all constructible arguments for a knowledge base.
#[derive(Debug, Clone)]
pub struct ArgumentSet {
    formulas: Vec<Formula>,
    formula_ids: HashMap<Formula, FormulaIdx>,
    pub rules: Vec<Rule>,
    pub principles: Vec<String>,
    /// `lt[p][q]` iff `p < q` in the principle order.
    lt: Vec<Vec<bool>>,
    args: Vec<Argument>,
    by_conc: HashMap<FormulaIdx, Vec<ArgId>>,
}

struct RuleEntry {
    ants: Vec<FormulaIdx>,
    cons: FormulaIdx,
    prin: Option<PrinIdx>,
    defeasible: bool,
}

impl ArgumentSet {
    /// Builds every argument. Fails with [`Error::ExplosionGuard`] once more
    /// than `cap` arguments exist.
    pub fn construct(kb: &KnowledgeBase, cap: usize) -> Result<Self, Error> {
        let principles: Vec<String> = kb.principles.keys().cloned().collect();
        let prin_idx: HashMap<String, PrinIdx> = principles
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let lt = principles
            .iter()
            .map(|p| {
                principles
                    .iter()
                    .map(|q| kb.principle_order.lt(p, q))
                    .collect()
            })
            .collect();
        let mut set = ArgumentSet {
            formulas: Vec::new(),
            formula_ids: HashMap::new(),
            rules: kb.rules().cloned().collect(),
            principles,
            lt,
            args: Vec::new(),
            by_conc: HashMap::new(),
        };

        let entries: Vec<RuleEntry> = set
            .rules
            .clone()
            .iter()
            .map(|r| RuleEntry {
                ants: r.antecedents.iter().map(|a| set.intern(a)).collect(),
                cons: set.intern(&r.consequent),
                prin: r
                    .principle
                    .as_deref()
                    .and_then(|p| prin_idx.get(p).copied()),
                defeasible: r.is_defeasible(),
            })
            .collect();
        // rules (with positions) keyed by antecedent formula
        let mut uses: HashMap<FormulaIdx, Vec<(RuleIdx, usize)>> = HashMap::new();
        for (ri, e) in entries.iter().enumerate() {
            for (pos, &a) in e.ants.iter().enumerate() {
                uses.entry(a).or_default().push((ri, pos));
            }
        }

        for fact in &kb.facts {
            let f = set.intern(fact);
            set.push_fact(f);
        }
        // rules without antecedents fire unconditionally
        for (ri, e) in entries.iter().enumerate() {
            if e.ants.is_empty() {
                set.try_push(ri, e, Vec::new(), cap)?;
            }
        }

        // Process arguments in creation order. When `x` is processed, every
        // rule combination whose newest member is `x` is built: positions
        // before the first occurrence of `x` take strictly older arguments,
        // positions after it take arguments no newer than `x`.
        let mut next = 0;
        while next < set.args.len() {
            let x = ArgId(next);
            next += 1;
            let xc = set.args[x.0].conc;
            let Some(hits) = uses.get(&xc) else {
                continue;
            };
            for &(ri, pos) in hits {
                let e = &entries[ri];
                let mut choices: Vec<Vec<ArgId>> = Vec::with_capacity(e.ants.len());
                let mut empty = false;
                for (j, &a) in e.ants.iter().enumerate() {
                    let c: Vec<ArgId> = if j == pos {
                        vec![x]
                    } else {
                        set.by_conc
                            .get(&a)
                            .map(|v| {
                                v.iter()
                                    .copied()
                                    .filter(|y| if j < pos { *y < x } else { *y <= x })
                                    .collect()
                            })
                            .unwrap_or_default()
                    };
                    if c.is_empty() {
                        empty = true;
                        break;
                    }
                    choices.push(c);
                }
                if empty {
                    continue;
                }
                for combo in cartesian(&choices) {
                    set.try_push(ri, e, combo, cap)?;
                }
            }
        }
        Ok(set)
    }

    fn intern(&mut self, f: &Formula) -> FormulaIdx {
        if let Some(&i) = self.formula_ids.get(f) {
            return i;
        }
        let i = self.formulas.len();
        self.formulas.push(f.clone());
        self.formula_ids.insert(f.clone(), i);
        i
    }

    fn push_fact(&mut self, f: FormulaIdx) {
        let id = ArgId(self.args.len());
        self.args.push(Argument {
            id,
            conc: f,
            top: None,
            subs: Vec::new(),
            prem: [f].into(),
            norms: BTreeSet::new(),
            sr: BTreeSet::new(),
            last_norms: BTreeSet::new(),
            prin: BTreeSet::new(),
            last_prin: BTreeSet::new(),
            sub: [id].into(),
            below: [f].into(),
            defeasible_top: false,
        });
        self.by_conc.entry(f).or_default().push(id);
    }

    fn try_push(
        &mut self,
        ri: RuleIdx,
        e: &RuleEntry,
        subs: Vec<ArgId>,
        cap: usize,
    ) -> Result<(), Error> {
        if subs.iter().any(|s| self.args[s.0].below.contains(&e.cons)) {
            return Ok(());
        }
        if self.args.len() >= cap {
            return Err(Error::ExplosionGuard { cap });
        }
        let id = ArgId(self.args.len());
        let mut a = Argument {
            id,
            conc: e.cons,
            top: Some(ri),
            subs: subs.clone(),
            prem: BTreeSet::new(),
            norms: BTreeSet::new(),
            sr: BTreeSet::new(),
            last_norms: BTreeSet::new(),
            prin: BTreeSet::new(),
            last_prin: BTreeSet::new(),
            sub: [id].into(),
            below: [e.cons].into(),
            defeasible_top: e.defeasible,
        };
        for s in &subs {
            let s = &self.args[s.0];
            a.prem.extend(&s.prem);
            a.norms.extend(&s.norms);
            a.sr.extend(&s.sr);
            a.prin.extend(&s.prin);
            a.sub.extend(&s.sub);
            a.below.extend(&s.below);
            if !e.defeasible {
                a.last_norms.extend(&s.last_norms);
                a.last_prin.extend(&s.last_prin);
            }
        }
        if e.defeasible {
            a.norms.insert(ri);
            a.last_norms.insert(ri);
            if let Some(p) = e.prin {
                a.prin.insert(p);
                a.last_prin.insert(p);
            }
        } else {
            a.sr.insert(ri);
        }
        self.args.push(a);
        self.by_conc.entry(e.cons).or_default().push(id);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Argument> {
        self.args.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = ArgId> {
        (0..self.args.len()).map(ArgId)
    }

    pub fn get(&self, id: ArgId) -> &Argument {
        &self.args[id.0]
    }

    pub fn formula(&self, idx: FormulaIdx) -> &Formula {
        &self.formulas[idx]
    }

    pub fn formula_idx(&self, f: &Formula) -> Option<FormulaIdx> {
        self.formula_ids.get(f).copied()
    }

    pub fn conc(&self, id: ArgId) -> &Formula {
        self.formula(self.args[id.0].conc)
    }

    pub fn prem(&self, id: ArgId) -> BTreeSet<&Formula> {
        self.args[id.0]
            .prem
            .iter()
            .map(|&f| self.formula(f))
            .collect()
    }

    pub fn norms(&self, id: ArgId) -> impl Iterator<Item = &Rule> {
        self.args[id.0].norms.iter().map(move |&r| &self.rules[r])
    }

    pub fn norm_ids(&self, id: ArgId) -> BTreeSet<&str> {
        self.norms(id).map(|r| r.id.as_str()).collect()
    }

    pub fn strict_rules_used(&self, id: ArgId) -> impl Iterator<Item = &Rule> {
        self.args[id.0].sr.iter().map(move |&r| &self.rules[r])
    }

    pub fn last_norms(&self, id: ArgId) -> impl Iterator<Item = &Rule> {
        self.args[id.0]
            .last_norms
            .iter()
            .map(move |&r| &self.rules[r])
    }

    pub fn principle_names(&self, set: &BTreeSet<PrinIdx>) -> BTreeSet<String> {
        set.iter().map(|&p| self.principles[p].clone()).collect()
    }

    pub fn last_prin(&self, id: ArgId) -> BTreeSet<String> {
        self.principle_names(&self.args[id.0].last_prin)
    }

    pub fn prin(&self, id: ArgId) -> BTreeSet<String> {
        self.principle_names(&self.args[id.0].prin)
    }

    /// `p < q` in the principle order, by index.
    pub fn prin_lt(&self, p: PrinIdx, q: PrinIdx) -> bool {
        self.lt[p][q]
    }

    /// Arguments concluding `f`, oldest first.
    pub fn with_conclusion(&self, f: &Formula) -> &[ArgId] {
        self.formula_idx(f)
            .and_then(|i| self.by_conc.get(&i))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn top_rule(&self, id: ArgId) -> Option<&Rule> {
        self.args[id.0].top.map(|r| &self.rules[r])
    }

    /// Tree rendering, one inference per line.
    pub fn render(&self, id: ArgId) -> String {
        let mut out = String::new();
        self.render_into(id, 0, &mut out);
        out
    }

    fn render_into(&self, id: ArgId, depth: usize, out: &mut String) {
        let a = &self.args[id.0];
        let how = match self.top_rule(id) {
            None => "fact".to_string(),
            Some(r) => r.id.clone(),
        };
        out.push_str(&format!(
            "{}{}: {} [{}]\n",
            "  ".repeat(depth),
            id,
            self.conc(id),
            how
        ));
        for s in &a.subs {
            self.render_into(*s, depth + 1, out);
        }
    }
}

fn cartesian(choices: &[Vec<ArgId>]) -> Vec<Vec<ArgId>> {
    let mut out: Vec<Vec<ArgId>> = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(*x);
                    v
                })
            })
            .collect();
    }
    out
}
