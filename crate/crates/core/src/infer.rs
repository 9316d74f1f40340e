//! Best-stereotype selection and the induced nonmonotonic consequence
//! relation.
//!
//! Given facts F, the reasoner picks the unique stereotype at minimal
//! distance from F and jumps to the intersection F′ = F ∩ S^F. A formula β
//! follows nonmonotonically from α when every world of F′ satisfies β, for
//! F the models of α.
//!
//! Ties are never broken silently: a non-unique minimum is an error carrying
//! all co-minimal stereotypes, because the uniqueness assumption is what the
//! cumulativity results stand on. The empty set of facts short-circuits
//! selection entirely rather than forcing a meaningless choice.

use serde::Serialize;
use thiserror::Error;

use crate::info::InfoSet;
use crate::kb::KnowledgeBase;
use crate::logic::Formula;
use crate::ratio::DistanceValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("selection needs a nonempty information set")]
    EmptyInfoSet,
    #[error("no unique minimum: stereotypes {} are co-minimal", tied.join(", "))]
    NoUniqueMinimum { tied: Vec<String> },
}

/// One full inference step: the facts, the distance comparison, the chosen
/// stereotype, and the consequence set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceResult {
    pub given: InfoSet,
    /// Winning stereotype index, `None` for empty facts.
    pub chosen: Option<usize>,
    /// F ∩ S^F; always a subset of `given`.
    pub consequences: InfoSet,
    /// False exactly when nonempty facts picked a disjoint stereotype.
    pub consistent: bool,
    /// d(F, S) per stereotype, in declaration order; empty for empty facts.
    pub distances: Vec<DistanceValue>,
}

/// Serializable view of an [`InferenceResult`] with names resolved.
#[derive(Debug, Clone, Serialize)]
pub struct InferenceReport {
    pub given: Vec<String>,
    pub chosen: Option<String>,
    pub consequences: Vec<String>,
    pub consistent: bool,
    pub distances: serde_json::Map<String, serde_json::Value>,
}

impl InferenceResult {
    pub fn report(&self, kb: &KnowledgeBase) -> InferenceReport {
        let space = kb.space();
        let mut distances = serde_json::Map::new();
        for (s, value) in self.distances.iter().enumerate() {
            distances.insert(
                kb.stereotype(s).name().to_string(),
                serde_json::Value::String(value.to_string()),
            );
        }
        InferenceReport {
            given: space.set_names(self.given).into_iter().map(str::to_string).collect(),
            chosen: self.chosen.map(|s| kb.stereotype(s).name().to_string()),
            consequences: space
                .set_names(self.consequences)
                .into_iter()
                .map(str::to_string)
                .collect(),
            consistent: self.consistent,
            distances,
        }
    }
}

/// Index of the unique stereotype minimizing d(F, ·).
pub fn best_stereotype(kb: &KnowledgeBase, f: InfoSet) -> Result<usize, InferenceError> {
    if f.is_empty() {
        return Err(InferenceError::EmptyInfoSet);
    }
    let distances = distance_row(kb, f);
    unique_minimum(kb, &distances)
}

fn distance_row(kb: &KnowledgeBase, f: InfoSet) -> Vec<DistanceValue> {
    let extents = kb.extents();
    (0..kb.stereotype_count())
        .map(|s| kb.family().evaluate(&extents, f, s))
        .collect()
}

fn unique_minimum(kb: &KnowledgeBase, distances: &[DistanceValue]) -> Result<usize, InferenceError> {
    let min = distances.iter().min().expect("at least one stereotype");
    let tied: Vec<usize> = (0..distances.len()).filter(|&s| distances[s] == *min).collect();
    match tied.as_slice() {
        [one] => Ok(*one),
        many => Err(InferenceError::NoUniqueMinimum {
            tied: many.iter().map(|&s| kb.stereotype(s).name().to_string()).collect(),
        }),
    }
}

/// The consequence set F′ = F ∩ S^F with full diagnostics. Empty facts yield
/// an empty, vacuously consistent result with no stereotype chosen.
pub fn nm_consequences(kb: &KnowledgeBase, f: InfoSet) -> Result<InferenceResult, InferenceError> {
    if f.is_empty() {
        return Ok(InferenceResult {
            given: f,
            chosen: None,
            consequences: InfoSet::EMPTY,
            consistent: true,
            distances: Vec::new(),
        });
    }
    let distances = distance_row(kb, f);
    let chosen = unique_minimum(kb, &distances)?;
    let consequences = f & kb.stereotype(chosen).extent();
    Ok(InferenceResult {
        given: f,
        chosen: Some(chosen),
        consequences,
        consistent: !consequences.is_empty(),
        distances,
    })
}

/// α |~ β: every world of the consequence set of models(α) satisfies β.
pub fn nm_entails(
    kb: &KnowledgeBase,
    alpha: &Formula,
    beta: &Formula,
) -> Result<bool, InferenceError> {
    let space = kb.space();
    let result = nm_consequences(kb, space.models(alpha))?;
    let beta_models = space.models(beta);
    Ok(result.consequences.is_subset_of(&beta_models))
}

/// The canonical formula of the chosen stereotype's extent: one formula whose
/// classical consequences are the stereotypical theory for F.
pub fn stereotype_theory(kb: &KnowledgeBase, f: InfoSet) -> Result<Formula, InferenceError> {
    let chosen = best_stereotype(kb, f)?;
    Ok(kb.space().canonical_formula(kb.stereotype(chosen).extent()))
}

/// The canonical formula of the consequence set of models(α): its classical
/// consequences over the space are exactly the nonmonotonic closure of α.
pub fn consequence_closure(kb: &KnowledgeBase, alpha: &Formula) -> Result<Formula, InferenceError> {
    let space = kb.space();
    let result = nm_consequences(kb, space.models(alpha))?;
    Ok(space.canonical_formula(result.consequences))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::DistanceFamily;
    use crate::kb::Stereotype;
    use crate::logic::parse_formula;
    use crate::space::WorldSpace;

    fn constant_kb() -> KnowledgeBase {
        let space = WorldSpace::with_all_valuations(&["a", "b"]).unwrap();
        let full = space.full_set();
        KnowledgeBase::new(
            space,
            vec![Stereotype::new("s0", full)],
            DistanceFamily::Constant,
        )
        .unwrap()
    }

    fn all_subsets_cardinality_kb(atoms: &[&str]) -> KnowledgeBase {
        let space = WorldSpace::with_all_valuations(atoms).unwrap();
        let n = space.world_count();
        let stereotypes = InfoSet::nonempty_subsets(n)
            .map(|set| Stereotype::new(format!("s{}", set.mask()), set))
            .collect();
        KnowledgeBase::new(space, stereotypes, DistanceFamily::Cardinality).unwrap()
    }

    fn min_world_kb() -> KnowledgeBase {
        // six worlds, singleton stereotypes, rank(w_i) = i
        let space = WorldSpace::with_all_valuations(&["a", "b", "c"]).unwrap();
        let n = space.world_count();
        let stereotypes = (0..n)
            .map(|w| Stereotype::new(format!("s{}", w), InfoSet::singleton(w)))
            .collect();
        KnowledgeBase::new(
            space,
            stereotypes,
            DistanceFamily::MinWorld {
                rank: (0..n as u64).collect(),
            },
        )
        .unwrap()
    }

    #[test]
    fn single_stereotype_always_wins() {
        let kb = constant_kb();
        for f in InfoSet::nonempty_subsets(4) {
            assert_eq!(best_stereotype(&kb, f), Ok(0));
            let result = nm_consequences(&kb, f).unwrap();
            assert_eq!(result.consequences, f);
            assert!(result.consistent);
        }
    }

    #[test]
    fn cardinality_selects_the_facts_themselves() {
        let kb = all_subsets_cardinality_kb(&["a", "b"]);
        let f = InfoSet::from_indices([1, 3]);
        let chosen = best_stereotype(&kb, f).unwrap();
        assert_eq!(kb.stereotype(chosen).extent(), f);
    }

    #[test]
    fn min_world_selects_minimal_rank() {
        let kb = min_world_kb();
        let f = InfoSet::from_indices([3, 5]);
        let chosen = best_stereotype(&kb, f).unwrap();
        assert_eq!(kb.stereotype(chosen).extent(), InfoSet::singleton(3));
        let result = nm_consequences(&kb, f).unwrap();
        assert_eq!(result.consequences, InfoSet::singleton(3));
    }

    #[test]
    fn two_singleton_tie_is_an_error() {
        // d({w0,w1}, {w0}) = d({w0,w1}, {w1}) = 0 - 1 = -1
        let space = WorldSpace::with_all_valuations(&["a"]).unwrap();
        let kb = KnowledgeBase::new(
            space,
            vec![
                Stereotype::new("s_a", InfoSet::singleton(0)),
                Stereotype::new("s_b", InfoSet::singleton(1)),
            ],
            DistanceFamily::Cardinality,
        )
        .unwrap();
        assert_eq!(kb.distance(InfoSet::full(2), 0), DistanceValue::int(-1));
        assert_eq!(kb.distance(InfoSet::full(2), 1), DistanceValue::int(-1));
        match best_stereotype(&kb, InfoSet::full(2)) {
            Err(InferenceError::NoUniqueMinimum { tied }) => {
                assert_eq!(tied, vec!["s_a".to_string(), "s_b".to_string()]);
            }
            other => panic!("expected tie, got {:?}", other),
        }
    }

    #[test]
    fn empty_facts_short_circuit() {
        let kb = constant_kb();
        let result = nm_consequences(&kb, InfoSet::EMPTY).unwrap();
        assert_eq!(result.chosen, None);
        assert!(result.consequences.is_empty());
        assert!(result.consistent);
        assert!(result.distances.is_empty());
        assert_eq!(
            best_stereotype(&kb, InfoSet::EMPTY),
            Err(InferenceError::EmptyInfoSet)
        );
    }

    #[test]
    fn entailment_is_reflexive_and_classical_for_the_constant_base() {
        let kb = constant_kb();
        let space = kb.space();
        for alpha_set in InfoSet::all_subsets(4) {
            let alpha = space.canonical_formula(alpha_set);
            assert_eq!(nm_entails(&kb, &alpha, &alpha), Ok(true));
            for beta_set in InfoSet::all_subsets(4) {
                let beta = space.canonical_formula(beta_set);
                assert_eq!(
                    nm_entails(&kb, &alpha, &beta).unwrap(),
                    alpha_set.is_subset_of(&beta_set),
                    "alpha {} beta {}",
                    alpha_set,
                    beta_set
                );
            }
        }
    }

    #[test]
    fn unsatisfiable_premises_entail_everything() {
        let kb = constant_kb();
        let bottom = parse_formula("a & ~a", kb.space()).unwrap();
        let anything = parse_formula("b", kb.space()).unwrap();
        assert_eq!(nm_entails(&kb, &bottom, &anything), Ok(true));
        assert_eq!(
            consequence_closure(&kb, &bottom).unwrap(),
            Formula::False
        );
    }

    #[test]
    fn closure_is_equivalent_to_alpha_for_classical_bases() {
        let kb = all_subsets_cardinality_kb(&["a", "b"]);
        let space = kb.space();
        for alpha_set in InfoSet::nonempty_subsets(4) {
            let alpha = space.canonical_formula(alpha_set);
            let closed = consequence_closure(&kb, &alpha).unwrap();
            assert_eq!(space.models(&closed), alpha_set);
        }
    }

    #[test]
    fn stereotype_theory_names_the_chosen_extent() {
        let kb = min_world_kb();
        let f = InfoSet::from_indices([3, 5]);
        let theory = stereotype_theory(&kb, f).unwrap();
        assert_eq!(kb.space().models(&theory), InfoSet::singleton(3));
    }

    #[test]
    fn partition_demo_consequences_and_closure() {
        // pair partition over six worlds: {w0,w1,w2} is covered best by the
        // first pair, and the closure names exactly the surviving worlds
        let kb = crate::corpus::partition_kb(6);
        let f = InfoSet::from_indices([0, 1, 2]);
        let result = nm_consequences(&kb, f).unwrap();
        assert_eq!(kb.stereotype(result.chosen.unwrap()).name(), "s0");
        assert_eq!(result.consequences, InfoSet::from_indices([0, 1]));
        let alpha = kb.space().canonical_formula(f);
        let closed = consequence_closure(&kb, &alpha).unwrap();
        assert_eq!(kb.space().models(&closed), InfoSet::from_indices([0, 1]));
    }

    #[test]
    fn shrinking_the_facts_can_select_an_unrelated_stereotype() {
        // nothing forces F' ⊆ F to select a sub-stereotype: under ranks,
        // dropping the least world swings the choice to a disjoint singleton
        let kb = min_world_kb();
        let f = InfoSet::from_indices([0, 1]);
        let shrunk = InfoSet::singleton(1);
        let s_f = kb.stereotype(best_stereotype(&kb, f).unwrap()).extent();
        let s_shrunk = kb.stereotype(best_stereotype(&kb, shrunk).unwrap()).extent();
        assert!(shrunk.is_subset_of(&f));
        assert!(!s_shrunk.is_subset_of(&s_f));
    }
}
