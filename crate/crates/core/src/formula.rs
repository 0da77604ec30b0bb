//! Ground deontic formulas and the syntactic inconsistency patterns used for
//! attack detection and consistency checking.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A term argument of an atomic formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Const(n) | Term::Var(n) => n,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

/// Deontic first-order formula tree.
///
/// Equality is purely syntactic: `a & b` and `b & a` are different formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom { pred: String, args: Vec<Term> },
    Falsum,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Obligation(Box<Formula>),
    Permission(Box<Formula>),
    Pref(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: &[&str]) -> Formula {
        Formula::Atom {
            pred: pred.into(),
            args: args.iter().map(|a| Term::Const((*a).to_string())).collect(),
        }
    }

    pub fn prop(pred: impl Into<String>) -> Formula {
        Formula::Atom {
            pred: pred.into(),
            args: Vec::new(),
        }
    }

    /// Negation with double negations collapsed, so that `¬¬φ` never
    /// occurs and [`negate`] is an involution.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn obl(f: Formula) -> Formula {
        Formula::Obligation(Box::new(f))
    }

    pub fn perm(f: Formula) -> Formula {
        Formula::Permission(Box::new(f))
    }

    pub fn pref(better: Formula, worse: Formula) -> Formula {
        Formula::Pref(Box::new(better), Box::new(worse))
    }

    /// True when no variable term and no quantifier occurs anywhere.
    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().all(Term::is_const),
            Formula::Falsum => true,
            Formula::Not(f) | Formula::Obligation(f) | Formula::Permission(f) => f.is_ground(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Pref(a, b) => a.is_ground() && b.is_ground(),
            Formula::ForAll(..) | Formula::Exists(..) => false,
        }
    }

    /// The obligated formula if this is `O(α)`.
    pub fn as_obligation(&self) -> Option<&Formula> {
        match self {
            Formula::Obligation(f) => Some(f),
            _ => None,
        }
    }

    /// The permitted formula if this is `P(α)`.
    pub fn as_permission(&self) -> Option<&Formula> {
        match self {
            Formula::Permission(f) => Some(f),
            _ => None,
        }
    }

    /// `α` if this is `¬P(α)`.
    fn as_negated_permission(&self) -> Option<&Formula> {
        match self {
            Formula::Not(inner) => inner.as_permission(),
            _ => None,
        }
    }

    /// Pre-order walk over this formula and all of its subformulas.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            match f {
                Formula::Atom { .. } | Formula::Falsum => {}
                Formula::Not(g)
                | Formula::Obligation(g)
                | Formula::Permission(g)
                | Formula::ForAll(_, g)
                | Formula::Exists(_, g) => stack.push(g),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Pref(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Replace every variable named `var` by the constant `value`.
    pub fn substitute(&self, var: &str, value: &str) -> Formula {
        let sub = |f: &Formula| Box::new(f.substitute(var, value));
        match self {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) if v == var => Term::Const(value.to_string()),
                        other => other.clone(),
                    })
                    .collect(),
            },
            Formula::Falsum => Formula::Falsum,
            Formula::Not(f) => Formula::Not(sub(f)),
            Formula::And(a, b) => Formula::And(sub(a), sub(b)),
            Formula::Or(a, b) => Formula::Or(sub(a), sub(b)),
            Formula::Implies(a, b) => Formula::Implies(sub(a), sub(b)),
            Formula::Obligation(f) => Formula::Obligation(sub(f)),
            Formula::Permission(f) => Formula::Permission(sub(f)),
            Formula::Pref(a, b) => Formula::Pref(sub(a), sub(b)),
            // inner binder shadows
            Formula::ForAll(v, _) | Formula::Exists(v, _) if v == var => self.clone(),
            Formula::ForAll(v, f) => Formula::ForAll(v.clone(), sub(f)),
            Formula::Exists(v, f) => Formula::Exists(v.clone(), sub(f)),
        }
    }

    /// Names of variable terms occurring in the formula.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for f in self.subformulas() {
            if let Formula::Atom { args, .. } = f {
                for t in args {
                    if let Term::Var(v) = t {
                        vars.insert(v.clone());
                    }
                }
            }
        }
        vars
    }

    /// Names of constant terms occurring in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            if let Formula::Atom { args, .. } = f {
                for t in args {
                    if let Term::Const(c) = t {
                        out.insert(c.clone());
                    }
                }
            }
        }
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

/// The `−` operator: strips one outer negation, otherwise adds one.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::Not(Box::new(other.clone())),
    }
}

/// An unordered pair of actions that cannot both be obligatory.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IncompatibilityDecl {
    pub left: Formula,
    pub right: Formula,
}

impl IncompatibilityDecl {
    /// Builds the declaration with its sides in canonical order.
    pub fn new(a: Formula, b: Formula) -> Self {
        if a <= b {
            IncompatibilityDecl { left: a, right: b }
        } else {
            IncompatibilityDecl { left: b, right: a }
        }
    }

    pub fn involves(&self, a: &Formula, b: &Formula) -> bool {
        (&self.left == a && &self.right == b) || (&self.left == b && &self.right == a)
    }
}

/// Does the set of declarations mark `α` and `β` as incompatible actions?
pub fn declared_incompatible(
    a: &Formula,
    b: &Formula,
    decls: &BTreeSet<IncompatibilityDecl>,
) -> bool {
    decls.contains(&IncompatibilityDecl::new(a.clone(), b.clone()))
}

/// Whether `φ` and `ψ` jointly imply ⊥ by one of the closed patterns:
/// direct negation, `O(α)/O(¬α)`, `O(α)/¬P(α)`, `¬P(¬α)/O(¬α)`,
/// `¬P(¬α)/¬P(α)`, or two obligations over declared-incompatible actions.
pub fn inconsistent_pair(
    phi: &Formula,
    psi: &Formula,
    decls: &BTreeSet<IncompatibilityDecl>,
) -> bool {
    inconsistent_directed(phi, psi, decls) || inconsistent_directed(psi, phi, decls)
}

fn inconsistent_directed(
    phi: &Formula,
    psi: &Formula,
    decls: &BTreeSet<IncompatibilityDecl>,
) -> bool {
    if *psi == negate(phi) {
        return true;
    }
    if let (Some(a), Some(b)) = (phi.as_obligation(), psi.as_obligation()) {
        if *b == negate(a) || declared_incompatible(a, b, decls) {
            return true;
        }
    }
    if let (Some(a), Some(b)) = (phi.as_obligation(), psi.as_negated_permission()) {
        // covers both O(α)/¬P(α) and O(¬α)/¬P(¬α)
        if a == b {
            return true;
        }
    }
    if let (Some(a), Some(b)) = (phi.as_negated_permission(), psi.as_negated_permission()) {
        if *b == negate(a) {
            return true;
        }
    }
    false
}

/// Every formula `ψ` with `inconsistent_pair(φ, ψ)`, restricted to the
/// shapes reachable from `φ` and the given declarations.
pub fn conflict_partners(phi: &Formula, decls: &BTreeSet<IncompatibilityDecl>) -> Vec<Formula> {
    let mut out = vec![negate(phi)];
    if let Some(a) = phi.as_obligation() {
        out.push(Formula::obl(negate(a)));
        out.push(Formula::not(Formula::perm(a.clone())));
        for d in decls {
            if &d.left == a {
                out.push(Formula::obl(d.right.clone()));
            }
            if &d.right == a {
                out.push(Formula::obl(d.left.clone()));
            }
        }
    }
    if let Some(a) = phi.as_negated_permission() {
        out.push(Formula::obl(a.clone()));
        out.push(Formula::not(Formula::perm(negate(a))));
    }
    out.sort();
    out.dedup();
    out
}

/// Attack classification for a conflicting pair (attacker conclusion first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictKind {
    Negation,
    BottomPair,
    DeonticConflict,
}

pub fn classify_conflict(
    phi: &Formula,
    psi: &Formula,
    decls: &BTreeSet<IncompatibilityDecl>,
) -> Option<ConflictKind> {
    if *psi == negate(phi) || *phi == negate(psi) {
        return Some(ConflictKind::Negation);
    }
    if let (Some(a), Some(b)) = (phi.as_obligation(), psi.as_obligation()) {
        if declared_incompatible(a, b, decls) && *b != negate(a) {
            return Some(ConflictKind::DeonticConflict);
        }
    }
    if inconsistent_pair(phi, psi, decls) {
        return Some(ConflictKind::BottomPair);
    }
    None
}

/// A set of formulas is directly consistent when no two members form an
/// inconsistent pair. Returns the first offending pair otherwise.
pub fn find_inconsistency<'a, I>(
    formulas: I,
    decls: &BTreeSet<IncompatibilityDecl>,
) -> Option<(Formula, Formula)>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let set: BTreeSet<&Formula> = formulas.into_iter().collect();
    for &phi in &set {
        for partner in conflict_partners(phi, decls) {
            if set.contains(&partner) {
                let (a, b) = if *phi <= partner {
                    (phi.clone(), partner)
                } else {
                    (partner, phi.clone())
                };
                return Some((a, b));
            }
        }
    }
    None
}

/// All subformulas of the given formulas. This is the finite basis over
/// which axiom schemes are instantiated.
pub fn subformula_universe<'a, I>(formulas: I) -> BTreeSet<Formula>
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = BTreeSet::new();
    for f in formulas {
        for g in f.subformulas() {
            out.insert(g.clone());
        }
    }
    out
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, parent_prec: u8) -> fmt::Result {
    if child.precedence() <= parent_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { pred, args } => {
                f.write_str(pred)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, t) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{t}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Falsum => f.write_str("false"),
            Formula::Not(inner) => {
                f.write_str("~")?;
                write_child(f, inner, 3)
            }
            Formula::And(a, b) => {
                write_child(f, a, 3)?;
                f.write_str(" & ")?;
                write_child(f, b, 3)
            }
            Formula::Or(a, b) => {
                write_child(f, a, 2)?;
                f.write_str(" | ")?;
                write_child(f, b, 2)
            }
            // implications are always bracketed so they never clash with rule arrows
            Formula::Implies(a, b) => {
                f.write_str("(")?;
                write_child(f, a, 1)?;
                f.write_str(" -> ")?;
                write_child(f, b, 1)?;
                f.write_str(")")
            }
            Formula::Obligation(inner) => write!(f, "O({inner})"),
            Formula::Permission(inner) => write!(f, "P({inner})"),
            Formula::Pref(a, b) => write!(f, "Pref({a}, {b})"),
            Formula::ForAll(v, inner) => write!(f, "(forall {v}. {inner})"),
            Formula::Exists(v, inner) => write!(f, "(exists {v}. {inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Formula {
        Formula::prop(name)
    }

    #[test]
    fn negate_unwraps_and_wraps() {
        assert_eq!(negate(&Formula::not(p("p"))), p("p"));
        assert_eq!(negate(&p("p")), Formula::not(p("p")));
        let oa = Formula::obl(p("a"));
        assert_eq!(negate(&oa), Formula::not(oa.clone()));
    }

    #[test]
    fn pattern_list() {
        let none = BTreeSet::new();
        let a = p("a");
        // A3
        assert!(inconsistent_pair(
            &Formula::obl(a.clone()),
            &Formula::obl(Formula::not(a.clone())),
            &none
        ));
        // O(a) with ~P(a)
        assert!(inconsistent_pair(
            &Formula::obl(a.clone()),
            &Formula::not(Formula::perm(a.clone())),
            &none
        ));
        // ~P(~a) with O(~a)
        let na = Formula::not(a.clone());
        assert!(inconsistent_pair(
            &Formula::not(Formula::perm(na.clone())),
            &Formula::obl(na.clone()),
            &none
        ));
        // ~P(~a) with ~P(a)
        assert!(inconsistent_pair(
            &Formula::not(Formula::perm(na)),
            &Formula::not(Formula::perm(a.clone())),
            &none
        ));
        assert!(!inconsistent_pair(&p("p"), &p("q"), &none));
        // O(a) with P(~a) is not a direct pattern
        assert!(!inconsistent_pair(
            &Formula::obl(a.clone()),
            &Formula::perm(Formula::not(a)),
            &none
        ));
    }

    #[test]
    fn declared_incompatibility() {
        let mut decls = BTreeSet::new();
        decls.insert(IncompatibilityDecl::new(p("b"), p("a")));
        let oa = Formula::obl(p("a"));
        let ob = Formula::obl(p("b"));
        assert!(inconsistent_pair(&oa, &ob, &decls));
        assert!(inconsistent_pair(&ob, &oa, &decls));
        assert_eq!(
            classify_conflict(&oa, &ob, &decls),
            Some(ConflictKind::DeonticConflict)
        );
        assert!(!inconsistent_pair(&p("a"), &p("b"), &decls));
    }

    #[test]
    fn display_reparses_shape() {
        let f = Formula::obl(Formula::and(
            Formula::atom("HitTree", &["AV"]),
            Formula::not(Formula::atom("Damage", &["Lamp"])),
        ));
        assert_eq!(f.to_string(), "O(HitTree(AV) & ~Damage(Lamp))");
        let g = Formula::not(Formula::or(p("a"), p("b")));
        assert_eq!(g.to_string(), "~(a | b)");
        let h = Formula::pref(p("a"), Formula::implies(p("b"), p("c")));
        assert_eq!(h.to_string(), "Pref(a, (b -> c))");
    }

    #[test]
    fn find_inconsistency_reports_pair() {
        let none = BTreeSet::new();
        let set = [p("p"), p("q"), Formula::not(p("p"))];
        assert_eq!(
            find_inconsistency(set.iter(), &none),
            Some((p("p"), Formula::not(p("p"))))
        );
        assert!(find_inconsistency([p("p"), p("q")].iter(), &none).is_none());
    }
}
