use std::collections::BTreeSet;

use crate::argument::{arg_cap_from_env, ArgumentSet, ATTACKS_PER_ARG};
use crate::attack::{compute_attacks_capped, Attack, DefeatGraph, Preference};
use crate::error::Error;
use crate::explain::{explain, Explanation};
use crate::formula::Formula;
use crate::kb::{
    check_obligation_cancellable, load_kb, validate_kb, KnowledgeBase, StrictIndex,
    ValidationReport,
};
use crate::postulates::{
    check_postulates_with, check_pref_guard, check_reasonable_ordering, OrderingReport,
    PostulateReport,
};
use crate::semantics::{
    complete_extensions, grounded, maximal, Extension, Framework, Semantics, Stance,
};

/// The whole pipeline for one knowledge base and one preference setting.
#[derive(Debug, Clone)]
pub struct Reasoner {
    pub kb: KnowledgeBase,
    pub args: ArgumentSet,
    pub graph: DefeatGraph,
    attacks: Vec<Attack>,
    fw: Framework,
}

impl Reasoner {
    /// `kb` must already be prepared (ground, synthesized, transposed).
    /// `cap` bounds the number of arguments, and `cap * ATTACKS_PER_ARG`
    /// the number of attacks.
    pub fn new(kb: KnowledgeBase, pref: Preference, cap: usize) -> Result<Self, Error> {
        let args = ArgumentSet::construct(&kb, cap)?;
        let attacks = compute_attacks_capped(
            &args,
            &kb.incompatibilities,
            cap.saturating_mul(ATTACKS_PER_ARG),
        )?;
        let graph = DefeatGraph::build(&args, attacks.clone(), pref);
        let fw = Framework::from_graph(&graph);
        Ok(Reasoner {
            kb,
            args,
            graph,
            attacks,
            fw,
        })
    }

    /// Loads `.lsc` source; the argument cap comes from `LESAC_ARG_CAP`.
    pub fn from_source(source: &str, pref: Preference) -> Result<Self, Error> {
        Reasoner::new(load_kb(source)?, pref, arg_cap_from_env())
    }

    /// Same arguments and attacks, different preference setting.
    pub fn with_preference(&self, pref: Preference) -> Reasoner {
        let graph = DefeatGraph::build(&self.args, self.attacks.clone(), pref);
        let fw = Framework::from_graph(&graph);
        Reasoner {
            kb: self.kb.clone(),
            args: self.args.clone(),
            graph,
            attacks: self.attacks.clone(),
            fw,
        }
    }

    pub fn preference(&self) -> Preference {
        self.graph.pref
    }

    pub fn framework(&self) -> &Framework {
        &self.fw
    }

    /// Static checks plus the argument-level ones: obligation
    /// cancellability and the preference guard on `Pref` facts.
    pub fn validate(&self) -> ValidationReport {
        let mut report = validate_kb(&self.kb);
        check_obligation_cancellable(&self.args, &self.kb, &mut report);
        check_pref_guard(&self.args, &self.kb, self.graph.pref, &mut report);
        report
    }

    pub fn grounded(&self) -> Extension {
        Extension::from_nodes(&grounded(&self.fw), Semantics::Grounded, &self.args)
    }

    pub fn complete(&self) -> Vec<Extension> {
        complete_extensions(&self.fw)
            .iter()
            .map(|s| Extension::from_nodes(s, Semantics::Complete, &self.args))
            .collect()
    }

    /// The ⊆-maximal complete extensions.
    pub fn maximal_complete(&self) -> Vec<Extension> {
        maximal(&complete_extensions(&self.fw))
            .iter()
            .map(|s| Extension::from_nodes(s, Semantics::Complete, &self.args))
            .collect()
    }

    pub fn extensions(&self, semantics: Semantics) -> Vec<Extension> {
        match semantics {
            Semantics::Grounded => vec![self.grounded()],
            Semantics::Complete => self.complete(),
        }
    }

    /// Justified conclusions. Under complete semantics the skeptical stance
    /// intersects the maximal complete extensions; intersecting all of them
    /// would always give the grounded conclusions.
    pub fn conclusions(
        &self,
        semantics: Semantics,
        stance: Stance,
    ) -> Result<BTreeSet<Formula>, Error> {
        let exts = match semantics {
            Semantics::Grounded => vec![self.grounded()],
            Semantics::Complete => self.maximal_complete(),
        };
        crate::semantics::justified_conclusions(&exts, stance)
    }

    pub fn explain(
        &self,
        target: &Formula,
        ext: &Extension,
        verbose: bool,
    ) -> Result<Explanation, Error> {
        explain(target, ext, &self.graph, &self.args, verbose)
    }

    /// Picks the extension to explain against: the grounded one under
    /// grounded semantics, else the first maximal complete extension that
    /// accepts the target.
    pub fn explain_default(
        &self,
        target: &Formula,
        semantics: Semantics,
        verbose: bool,
    ) -> Result<Explanation, Error> {
        match semantics {
            Semantics::Grounded => self.explain(target, &self.grounded(), verbose),
            Semantics::Complete => {
                let exts = self.maximal_complete();
                let ext = exts
                    .iter()
                    .find(|e| e.conclusions.contains(target))
                    .ok_or_else(|| Error::NotAccepted {
                        target: target.to_string(),
                    })?;
                self.explain(target, ext, verbose)
            }
        }
    }

    pub fn check_postulates(&self, ext: &Extension) -> PostulateReport {
        check_postulates_with(ext, &self.args, &self.kb, &StrictIndex::for_kb(&self.kb))
    }

    /// Postulate reports for every complete extension.
    pub fn check_all_postulates(&self) -> Vec<(Extension, PostulateReport)> {
        let index = StrictIndex::for_kb(&self.kb);
        self.complete()
            .into_iter()
            .map(|e| {
                let r = check_postulates_with(&e, &self.args, &self.kb, &index);
                (e, r)
            })
            .collect()
    }

    pub fn check_ordering(&self) -> OrderingReport {
        check_reasonable_ordering(&self.args, self.graph.pref)
    }
}
