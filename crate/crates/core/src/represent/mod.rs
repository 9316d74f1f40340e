//! Abstract selection functions and representability by stereotype systems.
//!
//! A selection function picks a nonempty subset f(F) ⊆ F for every nonempty
//! F; it is the set-level form of a consequence relation satisfying the basic
//! rules (reflexivity, left equivalence, right weakening, and). The question
//! this module tools up is which cumulative selection functions arise as
//! F ↦ F ∩ S^F from some stereotype set and a distance obeying the
//! monotonicity law with unique minima — and which provably cannot, relative
//! to an explicit candidate stereotype set.

mod graph;
mod search;

pub use graph::{ConstraintGraph, Linearization, StrictCycle};
pub use search::{
    is_representable, search_nonrepresentable, NoCertificate, NonRepresentable, Representability,
    SearchOutcome, SearchStats, SetVerdict, StereotypeModel,
};

use thiserror::Error;

use crate::check::{check_assumption_zero, Verdict};
use crate::infer::nm_consequences;
use crate::info::InfoSet;
use crate::kb::KnowledgeBase;
use crate::space::WorldSpace;

/// A total map from every nonempty information set to a nonempty subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionFunction {
    n_worlds: usize,
    /// Indexed by mask; entry 0 is unused.
    choice: Vec<InfoSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidSelection {
    #[error("choice table must have one entry per subset (2^{n_worlds})")]
    WrongSize { n_worlds: usize },
    #[error("f({f}) = {value} is not a nonempty subset of the argument")]
    NotASelection { f: InfoSet, value: InfoSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionOfError {
    #[error("no unique minimum at F = {f}: {} are co-minimal", tied.join(", "))]
    NoUniqueMinimum { f: InfoSet, tied: Vec<String> },
    #[error("inconsistent jump: F = {f} is disjoint from its selected stereotype")]
    InconsistentJump { f: InfoSet },
}

impl SelectionFunction {
    /// Validates totality and f(F) ⊆ F, f(F) ≠ ∅. `choice[mask]` is f of the
    /// set with that mask; `choice[0]` is ignored.
    pub fn from_choices(n_worlds: usize, choice: Vec<InfoSet>) -> Result<Self, InvalidSelection> {
        if choice.len() != 1usize << n_worlds {
            return Err(InvalidSelection::WrongSize { n_worlds });
        }
        for f in InfoSet::nonempty_subsets(n_worlds) {
            let value = choice[f.mask() as usize];
            if value.is_empty() || !value.is_subset_of(&f) {
                return Err(InvalidSelection::NotASelection { f, value });
            }
        }
        Ok(SelectionFunction { n_worlds, choice })
    }

    pub fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    pub fn get(&self, f: InfoSet) -> InfoSet {
        debug_assert!(!f.is_empty());
        self.choice[f.mask() as usize]
    }

    /// First pair breaking f(F) ⊆ G ⊆ F ⟹ f(G) = f(F), scanning F then G in
    /// ascending mask order.
    pub fn cumulativity_counterexample(&self) -> Option<(InfoSet, InfoSet)> {
        for f in InfoSet::nonempty_subsets(self.n_worlds) {
            let chosen = self.get(f);
            for g in f.subsets() {
                if g.is_empty() || !chosen.is_subset_of(&g) {
                    continue;
                }
                if self.get(g) != chosen {
                    return Some((f, g));
                }
            }
        }
        None
    }

    pub fn is_cumulative(&self) -> bool {
        self.cumulativity_counterexample().is_none()
    }

    /// JSON object mapping each nonempty set (comma-joined world names, mask
    /// order) to its selection, e.g. `{"w0,w1": ["w0"]}`.
    pub fn to_json(&self, space: &WorldSpace) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for f in InfoSet::nonempty_subsets(self.n_worlds) {
            map.insert(
                space.set_names(f).join(","),
                serde_json::json!(space.set_names(self.get(f))),
            );
        }
        serde_json::Value::Object(map)
    }
}

/// The selection function a knowledge base induces: F ↦ F ∩ S^F.
///
/// Fails when some set has no unique closest stereotype, or when a selected
/// stereotype is disjoint from its facts (the jump would be to nothing).
pub fn selection_of(kb: &KnowledgeBase) -> Result<SelectionFunction, SelectionOfError> {
    let zero = check_assumption_zero(kb);
    if zero.verdict != Verdict::Pass {
        // recover the first tie for the error payload
        for f in InfoSet::nonempty_subsets(kb.space().world_count()) {
            if let Err(crate::infer::InferenceError::NoUniqueMinimum { tied }) =
                crate::infer::best_stereotype(kb, f)
            {
                return Err(SelectionOfError::NoUniqueMinimum { f, tied });
            }
        }
        unreachable!("a failed unique-minimum check has a tie");
    }
    let n = kb.space().world_count();
    let mut choice = vec![InfoSet::EMPTY; 1usize << n];
    for f in InfoSet::nonempty_subsets(n) {
        let result = nm_consequences(kb, f).expect("unique minima");
        if result.consequences.is_empty() {
            return Err(SelectionOfError::InconsistentJump { f });
        }
        choice[f.mask() as usize] = result.consequences;
    }
    Ok(SelectionFunction { n_worlds: n, choice })
}
