//! Finite-model engine for stereotype-based nonmonotonic reasoning.
//!
//! A knowledge base pairs a finite world space with a list of stereotypes
//! (sets of worlds) and a distance function from information sets to
//! stereotypes. Inference jumps from the facts F to F ∩ S^F, where S^F is the
//! unique closest stereotype. On top of the engine sit exhaustive checkers
//! for the structural laws this kind of reasoning may or may not satisfy
//! (unique minima, the distance monotonicity law, the KLM rules, the two
//! selection-stability theorems) and a bounded search for consequence
//! relations no stereotype system can produce.

#![forbid(unsafe_code)]

pub mod check;
pub mod corpus;
pub mod distance;
pub mod info;
pub mod infer;
pub mod kb;
pub mod logic;
pub mod ratio;
pub mod represent;
pub mod space;

pub use distance::DistanceFamily;
pub use info::InfoSet;
pub use infer::{InferenceError, InferenceResult};
pub use kb::{KbDocument, KnowledgeBase, LoadError, Stereotype, Violation};
pub use logic::{parse_formula, Formula, ParseError};
pub use ratio::{DistanceValue, Ratio};
pub use space::{World, WorldSpace};
