//! Dung semantics over a defeat relation: grounded extension and complete
//! extension enumeration by three-valued labelling.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::argument::{ArgId, ArgumentSet};
use crate::attack::DefeatGraph;
use crate::error::Error;
use crate::formula::Formula;

/// Abstract argumentation framework over nodes `0..n`.
#[derive(Debug, Clone)]
pub struct Framework {
    n: usize,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl Framework {
    pub fn new<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        for (a, b) in edges {
            attackers[b].push(a);
            targets[a].push(b);
        }
        for v in attackers.iter_mut().chain(targets.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Framework {
            n,
            attackers,
            targets,
        }
    }

    pub fn from_graph(g: &DefeatGraph) -> Self {
        Framework::new(g.len, g.edges())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn attackers(&self, a: usize) -> &[usize] {
        &self.attackers[a]
    }

    pub fn targets(&self, a: usize) -> &[usize] {
        &self.targets[a]
    }

    /// Conflict-free, self-defending and containing all it defends.
    pub fn is_complete(&self, set: &BTreeSet<usize>) -> bool {
        let conflict_free = set
            .iter()
            .all(|&a| self.attackers[a].iter().all(|b| !set.contains(b)));
        conflict_free && (0..self.n).all(|a| self.defended(a, set) == set.contains(&a))
    }

    pub fn defended(&self, a: usize, set: &BTreeSet<usize>) -> bool {
        self.attackers[a]
            .iter()
            .all(|&b| self.attackers[b].iter().any(|c| set.contains(c)))
    }
}

/// Least fixpoint of the characteristic function.
pub fn grounded(fw: &Framework) -> BTreeSet<usize> {
    let n = fw.len();
    let mut label = vec![Lab::Undec; n];
    let mut out_attackers = vec![0usize; n];
    let mut queue: Vec<usize> = (0..n).filter(|&a| fw.attackers(a).is_empty()).collect();
    for &a in &queue {
        label[a] = Lab::In;
    }
    while let Some(a) = queue.pop() {
        for &b in fw.targets(a) {
            if label[b] != Lab::Undec {
                continue;
            }
            label[b] = Lab::Out;
            for &c in fw.targets(b) {
                out_attackers[c] += 1;
                if label[c] == Lab::Undec && out_attackers[c] == fw.attackers(c).len() {
                    label[c] = Lab::In;
                    queue.push(c);
                }
            }
        }
    }
    (0..n).filter(|&a| label[a] == Lab::In).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lab {
    In,
    Out,
    Undec,
}

const IN: u8 = 1;
const OUT: u8 = 2;
const UNDEC: u8 = 4;

/// Every complete extension, sorted by member list.
pub fn complete_extensions(fw: &Framework) -> Vec<BTreeSet<usize>> {
    let n = fw.len();
    let mut dom = vec![IN | OUT | UNDEC; n];
    // the grounded labelling is shared by every complete labelling
    let g = grounded(fw);
    for &a in &g {
        dom[a] = IN;
        for &b in fw.targets(a) {
            dom[b] = OUT;
        }
    }
    let mut out = Vec::new();
    search(fw, dom, &mut out);
    out.sort();
    out.dedup();
    out
}

fn search(fw: &Framework, mut dom: Vec<u8>, out: &mut Vec<BTreeSet<usize>>) {
    if !propagate(fw, &mut dom) {
        return;
    }
    let pick = (0..fw.len())
        .filter(|&a| dom[a].count_ones() > 1)
        .min_by_key(|&a| {
            (
                dom[a].count_ones(),
                std::cmp::Reverse(fw.attackers(a).len() + fw.targets(a).len()),
            )
        });
    match pick {
        None => {
            let set: BTreeSet<usize> = (0..fw.len()).filter(|&a| dom[a] == IN).collect();
            if fw.is_complete(&set) {
                out.push(set);
            }
        }
        Some(a) => {
            for v in [IN, OUT, UNDEC] {
                if dom[a] & v != 0 {
                    let mut next = dom.clone();
                    next[a] = v;
                    search(fw, next, out);
                }
            }
        }
    }
}

/// Narrow label domains until nothing changes. `false` on a wipe-out.
fn propagate(fw: &Framework, dom: &mut [u8]) -> bool {
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..fw.len() {
            let atts = fw.attackers(a);
            let mut allowed = 0u8;
            // IN needs every attacker OUT
            if atts.iter().all(|&b| dom[b] & OUT != 0) {
                allowed |= IN;
            }
            // OUT needs some attacker IN
            if atts.iter().any(|&b| dom[b] & IN != 0) {
                allowed |= OUT;
            }
            // UNDEC needs no attacker IN and some attacker UNDEC
            if atts.iter().all(|&b| dom[b] != IN) && atts.iter().any(|&b| dom[b] & UNDEC != 0) {
                allowed |= UNDEC;
            }
            let nd = dom[a] & allowed;
            if nd == 0 {
                return false;
            }
            if nd != dom[a] {
                dom[a] = nd;
                changed = true;
            }
            // backward pruning on the attackers
            match dom[a] {
                IN => {
                    for &b in atts {
                        if dom[b] != OUT {
                            dom[b] &= OUT;
                            if dom[b] == 0 {
                                return false;
                            }
                            changed = true;
                        }
                    }
                }
                OUT => {
                    let can_in: Vec<usize> =
                        atts.iter().copied().filter(|&b| dom[b] & IN != 0).collect();
                    if can_in.len() == 1 && dom[can_in[0]] != IN {
                        dom[can_in[0]] = IN;
                        changed = true;
                    }
                }
                UNDEC => {
                    for &b in atts {
                        if dom[b] & IN != 0 && dom[b] != IN {
                            dom[b] &= !IN;
                            changed = true;
                        }
                    }
                    let can_undec: Vec<usize> = atts
                        .iter()
                        .copied()
                        .filter(|&b| dom[b] & UNDEC != 0)
                        .collect();
                    if can_undec.len() == 1 && dom[can_undec[0]] != UNDEC {
                        dom[can_undec[0]] = UNDEC;
                        changed = true;
                    }
                }
                _ => {}
            }
        }
    }
    true
}

/// The ⊆-maximal members of a family of sets.
pub fn maximal(sets: &[BTreeSet<usize>]) -> Vec<BTreeSet<usize>> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    #[default]
    Grounded,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Stance {
    #[default]
    Skeptical,
    Credulous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub members: BTreeSet<ArgId>,
    pub semantics: Semantics,
    pub conclusions: BTreeSet<Formula>,
}

impl Extension {
    pub fn from_nodes(nodes: &BTreeSet<usize>, semantics: Semantics, args: &ArgumentSet) -> Self {
        let members: BTreeSet<ArgId> = nodes.iter().map(|&i| ArgId(i)).collect();
        let conclusions = members.iter().map(|&a| args.conc(a).clone()).collect();
        Extension {
            members,
            semantics,
            conclusions,
        }
    }

    pub fn contains(&self, a: ArgId) -> bool {
        self.members.contains(&a)
    }
}

pub fn grounded_extension(g: &DefeatGraph, args: &ArgumentSet) -> Extension {
    Extension::from_nodes(
        &grounded(&Framework::from_graph(g)),
        Semantics::Grounded,
        args,
    )
}

pub fn complete_extension_list(g: &DefeatGraph, args: &ArgumentSet) -> Vec<Extension> {
    complete_extensions(&Framework::from_graph(g))
        .iter()
        .map(|s| Extension::from_nodes(s, Semantics::Complete, args))
        .collect()
}

/// Intersection (skeptical) or union (credulous) of the extensions'
/// conclusions.
pub fn justified_conclusions(
    exts: &[Extension],
    stance: Stance,
) -> Result<BTreeSet<Formula>, Error> {
    let (first, rest) = exts.split_first().ok_or(Error::EmptyInput)?;
    let mut acc = first.conclusions.clone();
    for e in rest {
        match stance {
            Stance::Skeptical => acc.retain(|f| e.conclusions.contains(f)),
            Stance::Credulous => acc.extend(e.conclusions.iter().cloned()),
        }
    }
    Ok(acc)
}
