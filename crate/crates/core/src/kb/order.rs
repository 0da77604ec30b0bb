use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Preorder `≤` over principle ids, stored as its reflexive-transitive closure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrincipleOrder {
    leq: BTreeSet<(String, String)>,
    /// Pairs declared with `<`; kept to detect collapse into equivalence.
    declared_strict: BTreeSet<(String, String)>,
}

impl PrincipleOrder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare `low < high`.
    pub fn declare_less(&mut self, low: &str, high: &str) {
        self.declared_strict
            .insert((low.to_string(), high.to_string()));
        self.leq.insert((low.to_string(), high.to_string()));
    }

    /// Declare `a ≈ b`.
    pub fn declare_equiv(&mut self, a: &str, b: &str) {
        self.leq.insert((a.to_string(), b.to_string()));
        self.leq.insert((b.to_string(), a.to_string()));
    }

    /// Reflexive-transitive closure over the given carrier.
    pub fn close<'a, I>(&mut self, carrier: I)
    where
        I: IntoIterator<Item = &'a String>,
    {
        for p in carrier {
            self.leq.insert((p.clone(), p.clone()));
        }
        for (a, b) in self.leq.clone() {
            self.leq.insert((a.clone(), a));
            self.leq.insert((b.clone(), b));
        }
        let elems: Vec<String> = self
            .leq
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // Warshall over the (small) carrier
        for k in &elems {
            for i in &elems {
                if !self.leq.contains(&(i.clone(), k.clone())) {
                    continue;
                }
                for j in &elems {
                    if self.leq.contains(&(k.clone(), j.clone())) {
                        self.leq.insert((i.clone(), j.clone()));
                    }
                }
            }
        }
    }

    pub fn leq(&self, a: &str, b: &str) -> bool {
        a == b || self.leq.contains(&(a.to_string(), b.to_string()))
    }

    /// `a < b` iff `a ≤ b` and not `b ≤ a`.
    pub fn lt(&self, a: &str, b: &str) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    pub fn equiv(&self, a: &str, b: &str) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.leq.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// Declared strict pairs that the closure collapsed into equivalences.
    pub fn collapsed_strict_pairs(&self) -> Vec<(String, String)> {
        self.declared_strict
            .iter()
            .filter(|(a, b)| self.leq(b, a))
            .cloned()
            .collect()
    }

    /// Reflexivity on elements mentioned and transitivity of the stored relation.
    pub fn is_preorder(&self) -> bool {
        let reflexive = self.leq.iter().all(|(a, b)| {
            self.leq.contains(&(a.clone(), a.clone())) && self.leq.contains(&(b.clone(), b.clone()))
        });
        let transitive = self.leq.iter().all(|(a, b)| {
            self.leq
                .iter()
                .filter(|(c, _)| c == b)
                .all(|(_, d)| self.leq.contains(&(a.clone(), d.clone())))
        });
        reflexive && transitive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_closes_transitively() {
        let mut o = PrincipleOrder::new();
        o.declare_less("p2", "p3");
        o.declare_less("p3", "p1");
        o.close(&["p4".to_string()]);
        assert!(o.lt("p2", "p1"));
        assert!(!o.lt("p1", "p2"));
        assert!(o.leq("p4", "p4"));
        assert!(!o.leq("p4", "p1") && !o.leq("p1", "p4"));
        assert!(o.is_preorder());
        assert!(o.collapsed_strict_pairs().is_empty());
    }

    #[test]
    fn equivalence_is_not_strict() {
        let mut o = PrincipleOrder::new();
        o.declare_less("p2", "p3");
        o.declare_equiv("p3", "p4");
        o.close(std::iter::empty());
        assert!(o.equiv("p3", "p4"));
        assert!(!o.lt("p3", "p4"));
        assert!(o.lt("p2", "p4"));
    }

    #[test]
    fn cycle_collapses_declared_strict_pair() {
        let mut o = PrincipleOrder::new();
        o.declare_less("a", "b");
        o.declare_less("b", "a");
        o.close(std::iter::empty());
        assert_eq!(o.collapsed_strict_pairs().len(), 2);
    }
}
