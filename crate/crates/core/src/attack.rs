//! Rebuttal attacks, principle-based argument preferences and the defeat graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::argument::{ArgId, ArgumentSet, PrinIdx};
use crate::error::Error;
use crate::formula::{classify_conflict, conflict_partners, ConflictKind, IncompatibilityDecl};
use crate::kb::PrincipleOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    #[default]
    Last,
    Weakest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SetComparison {
    #[default]
    #[value(name = "eli")]
    Elitist,
    #[value(name = "dem")]
    Democratic,
}

/// `Γ ◁ Γ′` for a strict order `lt` on the elements.
pub fn set_compare_by<T, F>(g: &BTreeSet<T>, g2: &BTreeSet<T>, mode: SetComparison, lt: F) -> bool
where
    F: Fn(&T, &T) -> bool,
{
    if g.is_empty() {
        return false;
    }
    if g2.is_empty() {
        return true;
    }
    match mode {
        SetComparison::Elitist => g.iter().any(|x| g2.iter().all(|y| lt(x, y))),
        SetComparison::Democratic => g.iter().all(|x| g2.iter().any(|y| lt(x, y))),
    }
}

/// Set comparison over principle ids.
pub fn set_compare(
    g: &BTreeSet<String>,
    g2: &BTreeSet<String>,
    mode: SetComparison,
    order: &PrincipleOrder,
) -> bool {
    set_compare_by(g, g2, mode, |x, y| order.lt(x, y))
}

/// Argument preference settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Preference {
    pub link: Link,
    pub mode: SetComparison,
}

impl Preference {
    pub fn new(link: Link, mode: SetComparison) -> Self {
        Preference { link, mode }
    }

    pub fn all() -> [Preference; 4] {
        [
            Preference::new(Link::Last, SetComparison::Elitist),
            Preference::new(Link::Last, SetComparison::Democratic),
            Preference::new(Link::Weakest, SetComparison::Elitist),
            Preference::new(Link::Weakest, SetComparison::Democratic),
        ]
    }

    pub fn principles<'a>(&self, args: &'a ArgumentSet, a: ArgId) -> &'a BTreeSet<PrinIdx> {
        let arg = args.get(a);
        match self.link {
            Link::Last => &arg.last_prin,
            Link::Weakest => &arg.prin,
        }
    }

    /// `A ≺ B`.
    pub fn prec(&self, args: &ArgumentSet, a: ArgId, b: ArgId) -> bool {
        set_compare_by(
            self.principles(args, a),
            self.principles(args, b),
            self.mode,
            |x, y| args.prin_lt(*x, *y),
        )
    }
}

/// `A ≺ B` under the given link principle and set comparison.
pub fn arg_prec(args: &ArgumentSet, a: ArgId, b: ArgId, pref: Preference) -> bool {
    pref.prec(args, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Attack {
    pub attacker: ArgId,
    pub target: ArgId,
    /// The attacked subargument of `target`; its top rule is a norm.
    pub on: ArgId,
    pub kind: ConflictKind,
}

/// Every rebuttal: `A` attacks `B` on each defeasible-topped `B′ ∈ sub(B)`
/// whose conclusion conflicts with `conc(A)`.
pub fn compute_attacks(args: &ArgumentSet, decls: &BTreeSet<IncompatibilityDecl>) -> Vec<Attack> {
    compute_attacks_capped(args, decls, usize::MAX).expect("uncapped")
}

/// As [`compute_attacks`], failing once more than `cap` attacks would be
/// produced.
pub fn compute_attacks_capped(
    args: &ArgumentSet,
    decls: &BTreeSet<IncompatibilityDecl>,
    cap: usize,
) -> Result<Vec<Attack>, Error> {
    let mut supers: BTreeMap<ArgId, Vec<ArgId>> = BTreeMap::new();
    for b in args.iter() {
        for s in &b.sub {
            supers.entry(*s).or_default().push(b.id);
        }
    }
    let mut out = Vec::new();
    for on in args.iter().filter(|a| a.defeasible_top) {
        let target_conc = args.conc(on.id);
        for partner in conflict_partners(target_conc, decls) {
            for &attacker in args.with_conclusion(&partner) {
                let Some(kind) = classify_conflict(&partner, target_conc, decls) else {
                    continue;
                };
                let targets = &supers[&on.id];
                if out.len() + targets.len() > cap {
                    return Err(Error::AttackGuard { cap });
                }
                for &target in targets {
                    out.push(Attack {
                        attacker,
                        target,
                        on: on.id,
                        kind,
                    });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Arguments with attacks and the defeats that survive the preference check.
#[derive(Debug, Clone)]
pub struct DefeatGraph {
    pub len: usize,
    pub attacks: Vec<Attack>,
    pub defeats: BTreeSet<(ArgId, ArgId)>,
    pub pref: Preference,
}

impl DefeatGraph {
    /// `A` defeats `B` when it attacks `B` on some `B′` with `A ⊀ B′`.
    ///
    /// The preference is checked against the attacked subargument, so a
    /// defeat on `B′` carries over to every argument containing `B′`.
    pub fn build(args: &ArgumentSet, attacks: Vec<Attack>, pref: Preference) -> Self {
        let defeats = attacks
            .iter()
            .filter(|at| !pref.prec(args, at.attacker, at.on))
            .map(|at| (at.attacker, at.target))
            .collect();
        DefeatGraph {
            len: args.len(),
            attacks,
            defeats,
            pref,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.defeats.iter().map(|(a, b)| (a.0, b.0))
    }

    pub fn defeats(&self, a: ArgId, b: ArgId) -> bool {
        self.defeats.contains(&(a, b))
    }

    pub fn defeaters_of(&self, b: ArgId) -> Vec<ArgId> {
        self.defeats
            .iter()
            .filter(|(_, t)| *t == b)
            .map(|(a, _)| *a)
            .collect()
    }

    /// Graphviz rendering: solid edges are defeats, dashed edges attacks
    /// that the preference check blocked.
    pub fn to_dot(&self, args: &ArgumentSet) -> String {
        let mut out = String::from("digraph defeats {\n  node [shape=box];\n");
        for a in args.iter() {
            let label = args.conc(a.id).to_string().replace('"', "\\\"");
            let _ = writeln!(out, "  {} [label=\"{}: {}\"];", a.id, a.id, label);
        }
        let attacked: BTreeSet<(ArgId, ArgId)> = self
            .attacks
            .iter()
            .map(|at| (at.attacker, at.target))
            .collect();
        for (a, b) in &attacked {
            if self.defeats.contains(&(*a, *b)) {
                let _ = writeln!(out, "  {a} -> {b};");
            } else {
                let _ = writeln!(out, "  {a} -> {b} [style=dashed];");
            }
        }
        out.push_str("}\n");
        out
    }
}
