//! Normative knowledge base: facts, strict rules, norms, principles and the
//! principle ordering, together with the front-end pipeline that turns `.lsc`
//! source into a ground, rule-complete knowledge base.

mod closure;
mod ground;
mod order;
mod parse;
mod synth;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{subformula_universe, Formula, IncompatibilityDecl};

pub use closure::{strict_closure, StrictIndex};
pub use ground::ground_kb;
pub use order::PrincipleOrder;
pub use parse::{parse_formula, parse_kb};
pub use synth::{close_under_transposition, synthesize_strict_rules};
pub use validate::{
    check_obligation_cancellable, validate_kb, ValidationReport, Violation, ViolationCode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Strict,
    Defeasible,
}

/// Which axiom scheme or inference rule a synthesized strict rule instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// `O(α) → P(α)`
    A1,
    /// `O(α) → ¬P(¬α)`
    A2Forward,
    /// `¬P(¬α) → O(α)`
    A2Backward,
    /// `O(β), O(α), Pref(β, α) → O(β) ∧ ¬O(α)`
    A4,
    /// `Pref(α, β), Pref(β, γ) → Pref(α, γ)`
    A5,
    /// `Pref(β, α) → (O(α) → O(β))`
    A6,
    /// `O(α), α → β ⊢ O(β)`
    R1,
    /// `O(β), Pref(β, α) ⊢ ¬O(α)`
    R2,
    /// `O(α), O(β) → ¬O(α) ∨ ¬O(β)` for declared incompatible actions
    Incompatibility,
    /// `O(α) → ¬O(β)`, the disjunctive-syllogism form of the above
    IncompatibilityDirected,
    ModusPonens,
    AndElim,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scheme::A1 => "a1",
            Scheme::A2Forward => "a2f",
            Scheme::A2Backward => "a2b",
            Scheme::A4 => "a4",
            Scheme::A5 => "a5",
            Scheme::A6 => "a6",
            Scheme::R1 => "r1",
            Scheme::R2 => "r2",
            Scheme::Incompatibility => "inc",
            Scheme::IncompatibilityDirected => "incd",
            Scheme::ModusPonens => "mp",
            Scheme::AndElim => "ande",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleOrigin {
    Declared,
    /// Token rule instantiated from a quantified type rule.
    Grounded {
        type_rule: String,
    },
    Synthesized {
        scheme: Scheme,
    },
    /// Transposition of `rule` on its `position`-th antecedent.
    Transposed {
        rule: String,
        position: usize,
    },
}

/// A strict (`→`) or defeasible (`⇒`) rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub id: String,
    pub antecedents: Vec<Formula>,
    pub consequent: Formula,
    pub kind: RuleKind,
    pub principle: Option<String>,
    pub origin: RuleOrigin,
}

impl Rule {
    pub fn norm(
        id: impl Into<String>,
        antecedents: Vec<Formula>,
        consequent: Formula,
        principle: impl Into<String>,
    ) -> Self {
        Rule {
            id: id.into(),
            antecedents,
            consequent,
            kind: RuleKind::Defeasible,
            principle: Some(principle.into()),
            origin: RuleOrigin::Declared,
        }
    }

    pub fn strict(id: impl Into<String>, antecedents: Vec<Formula>, consequent: Formula) -> Self {
        Rule {
            id: id.into(),
            antecedents,
            consequent,
            kind: RuleKind::Strict,
            principle: None,
            origin: RuleOrigin::Declared,
        }
    }

    pub fn is_defeasible(&self) -> bool {
        self.kind == RuleKind::Defeasible
    }

    /// Shape key: antecedents as a sorted multiset plus the consequent.
    pub fn shape(&self) -> (Vec<Formula>, Formula) {
        let mut ants = self.antecedents.clone();
        ants.sort();
        (ants, self.consequent.clone())
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedents
            .iter()
            .chain(std::iter::once(&self.consequent))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.id)?;
        for (i, a) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        let arrow = if self.is_defeasible() { "=>" } else { "->" };
        write!(f, " {arrow} {}", self.consequent)?;
        if let Some(p) = &self.principle {
            write!(f, " [{p}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantifier {
    ForAll,
    Exists,
}

/// An un-grounded rule with a quantifier prefix, e.g.
/// `rule forall x: Dog(x) ~> Life(x) [p3].`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRule {
    pub id: String,
    pub binders: Vec<(Quantifier, String)>,
    pub antecedents: Vec<Formula>,
    pub consequent: Formula,
    pub kind: RuleKind,
    pub principle: Option<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Principle {
    pub id: String,
    pub text: Option<String>,
}

/// The knowledge base tuple: facts `K`, strict rules `R_s`, norms `N`,
/// principles `P` with `prin` carried on each norm, and the principle preorder.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub constants: BTreeSet<String>,
    pub principles: BTreeMap<String, Principle>,
    pub principle_order: PrincipleOrder,
    pub facts: BTreeSet<Formula>,
    pub strict_rules: Vec<Rule>,
    pub norms: Vec<Rule>,
    pub type_rules: Vec<TypeRule>,
    pub incompatibilities: BTreeSet<IncompatibilityDecl>,
    /// `(β, α)` for every `Pref(β, α)` fact.
    pub action_prefs: BTreeSet<(Formula, Formula)>,
}

impl KnowledgeBase {
    /// The `prin` map from norm id to principle id.
    pub fn prin(&self) -> BTreeMap<String, String> {
        self.norms
            .iter()
            .filter_map(|n| n.principle.clone().map(|p| (n.id.clone(), p)))
            .collect()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.strict_rules.iter().chain(self.norms.iter())
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules().find(|r| r.id == id)
    }

    /// Adds a fact; `Pref(β, α)` facts are also recorded as action preferences.
    pub fn add_fact(&mut self, fact: Formula) {
        if let Formula::Pref(b, a) = &fact {
            self.action_prefs.insert(((**b).clone(), (**a).clone()));
        }
        self.constants.extend(fact.constants());
        self.facts.insert(fact);
    }

    pub fn is_ground(&self) -> bool {
        self.type_rules.is_empty()
            && self.facts.iter().all(Formula::is_ground)
            && self.rules().all(|r| r.formulas().all(Formula::is_ground))
    }

    /// All formulas and subformulas occurring in `K` and in rule bodies.
    pub fn deontic_subformula_universe(&self) -> BTreeSet<Formula> {
        subformula_universe(
            self.facts
                .iter()
                .chain(self.rules().flat_map(Rule::formulas)),
        )
    }
}

/// Parse, ground, synthesize strict rules and close under transposition.
pub fn load_kb(source: &str) -> Result<KnowledgeBase, Error> {
    let kb = parse_kb(source)?;
    prepare_kb(kb)
}

/// Runs the post-parse front-end stages on an already parsed knowledge base.
pub fn prepare_kb(kb: KnowledgeBase) -> Result<KnowledgeBase, Error> {
    let kb = ground_kb(kb)?;
    let kb = synthesize_strict_rules(kb);
    Ok(close_under_transposition(kb))
}
