//! Deontic structured argumentation: a normative knowledge base of facts,
//! strict rules and principle-tagged norms is turned into arguments, conflicts
//! are resolved by principle orderings, and accepted conclusions come with
//! explanations.

pub mod argument;
pub mod attack;
pub mod cli;
pub mod error;
pub mod explain;
pub mod formula;
pub mod kb;
pub mod postulates;
pub mod reasoner;
pub mod semantics;

pub use error::{Error, Result};
pub use reasoner::Reasoner;
