//! The knowledge base: a world space, named stereotypes, and a distance
//! family, validated as a unit.

mod document;

pub use document::{DistanceSpecDoc, KbDocument, StereotypeDoc, TableEntryDoc, WorldDoc};

use std::fmt;

use thiserror::Error;

use crate::distance::DistanceFamily;
use crate::info::InfoSet;
use crate::ratio::DistanceValue;
use crate::space::{is_valid_identifier, WorldSpace};

/// A named set of worlds standing for a typical kind of situation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stereotype {
    name: String,
    extent: InfoSet,
}

impl Stereotype {
    pub fn new(name: impl Into<String>, extent: InfoSet) -> Stereotype {
        Stereotype {
            name: name.into(),
            extent,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn extent(&self) -> InfoSet {
        self.extent
    }
}

/// An invariant violation, reported as data rather than a failure so that a
/// document can be diagnosed in full.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{location}: invalid name `{name}`")]
    BadName { location: String, name: String },
    #[error("{location}: duplicate name `{name}`")]
    DuplicateName { location: String, name: String },
    #[error("worlds `{first}` and `{second}` have identical valuations")]
    DuplicateValuation { first: String, second: String },
    #[error("world `{world}`: no value for atom `{atom}`")]
    MissingAtomValue { world: String, atom: String },
    #[error("{location}: unknown atom `{atom}`")]
    UnknownAtom { location: String, atom: String },
    #[error("{location}: unknown world `{world}`")]
    UnknownWorld { location: String, world: String },
    #[error("{location}: unknown stereotype `{stereotype}`")]
    UnknownStereotype {
        location: String,
        stereotype: String,
    },
    #[error("stereotype `{name}` has an empty extent")]
    EmptyStereotype { name: String },
    #[error("{location}: {message}")]
    Malformed { location: String, message: String },
    #[error("{location}: formula error: {message}")]
    BadFormula { location: String, message: String },
    #[error("distance: {message}")]
    DistanceSpec { message: String },
}

/// Failure to load a knowledge base document.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("format error: {0}")]
    Format(String),
    #[error("invalid knowledge base: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A validated knowledge base. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    space: WorldSpace,
    stereotypes: Vec<Stereotype>,
    family: DistanceFamily,
}

impl KnowledgeBase {
    /// Validates the parts and assembles a knowledge base.
    pub fn new(
        space: WorldSpace,
        stereotypes: Vec<Stereotype>,
        family: DistanceFamily,
    ) -> Result<KnowledgeBase, Vec<Violation>> {
        let violations = validate_parts(&space, &stereotypes, &family);
        if violations.is_empty() {
            Ok(KnowledgeBase {
                space,
                stereotypes,
                family,
            })
        } else {
            Err(violations)
        }
    }

    pub fn space(&self) -> &WorldSpace {
        &self.space
    }

    pub fn stereotypes(&self) -> &[Stereotype] {
        &self.stereotypes
    }

    pub fn stereotype_count(&self) -> usize {
        self.stereotypes.len()
    }

    pub fn stereotype(&self, index: usize) -> &Stereotype {
        &self.stereotypes[index]
    }

    pub fn stereotype_index(&self, name: &str) -> Option<usize> {
        self.stereotypes.iter().position(|s| s.name() == name)
    }

    pub fn family(&self) -> &DistanceFamily {
        &self.family
    }

    pub fn extents(&self) -> Vec<InfoSet> {
        self.stereotypes.iter().map(|s| s.extent()).collect()
    }

    /// d(F, S) for the stereotype at `index`.
    pub fn distance(&self, f: InfoSet, index: usize) -> DistanceValue {
        // evaluate() indexes extents by stereotype; build once per call is
        // wasteful in sweeps, so the checkers use DistanceTable instead
        let extents = self.extents();
        self.family.evaluate(&extents, f, index)
    }

    /// Re-checks every invariant; empty for any base built through [`KnowledgeBase::new`]
    /// or the document loader.
    pub fn validate(&self) -> Vec<Violation> {
        validate_parts(&self.space, &self.stereotypes, &self.family)
    }

    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<KnowledgeBase, LoadError> {
        let doc: KbDocument =
            serde_json::from_str(text).map_err(|e| LoadError::Format(e.to_string()))?;
        doc.build()
    }

    /// Canonical JSON serialization: stereotypes as explicit world lists,
    /// table entries sorted by (set, stereotype). Loading the output yields
    /// an identical knowledge base.
    pub fn to_json(&self) -> String {
        let doc = self.to_document();
        let mut out = serde_json::to_string_pretty(&doc).expect("documents always serialize");
        out.push('\n');
        out
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {} stereotypes, {} distance",
            self.space,
            self.stereotype_count(),
            self.family.name()
        )
    }
}

fn validate_parts(
    space: &WorldSpace,
    stereotypes: &[Stereotype],
    family: &DistanceFamily,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    if stereotypes.is_empty() {
        violations.push(Violation::Malformed {
            location: "stereotypes".to_string(),
            message: "at least one stereotype is required".to_string(),
        });
    }
    let full = space.full_set();
    for (i, stereotype) in stereotypes.iter().enumerate() {
        let location = format!("stereotypes[{}]", i);
        if !is_valid_identifier(stereotype.name()) {
            violations.push(Violation::BadName {
                location: location.clone(),
                name: stereotype.name().to_string(),
            });
        }
        if stereotypes[..i].iter().any(|s| s.name() == stereotype.name()) {
            violations.push(Violation::DuplicateName {
                location: location.clone(),
                name: stereotype.name().to_string(),
            });
        }
        if stereotype.extent().is_empty() {
            violations.push(Violation::EmptyStereotype {
                name: stereotype.name().to_string(),
            });
        }
        if !stereotype.extent().is_subset_of(&full) {
            violations.push(Violation::Malformed {
                location,
                message: "extent mentions worlds outside the space".to_string(),
            });
        }
    }
    let extents: Vec<InfoSet> = stereotypes.iter().map(|s| s.extent()).collect();
    for message in family.check_against(space.world_count(), &extents) {
        violations.push(Violation::DistanceSpec { message });
    }
    violations
}

/// Precomputed d(F, S) for every subset and stereotype of a small base.
/// The exhaustive checkers walk millions of tuples; this keeps each probe a
/// single indexed read.
pub struct DistanceTable {
    values: Vec<DistanceValue>,
    stereotype_count: usize,
}

impl DistanceTable {
    /// Materializes the full table. Requires a desk-scale space (the caller
    /// gates on sweep limits first).
    pub fn build(kb: &KnowledgeBase) -> DistanceTable {
        let n = kb.space().world_count();
        let k = kb.stereotype_count();
        let extents = kb.extents();
        let mut values = Vec::with_capacity((1usize << n) * k);
        for mask in 0..(1u64 << n) {
            let f = InfoSet::from_mask(mask);
            for s in 0..k {
                values.push(kb.family().evaluate(&extents, f, s));
            }
        }
        DistanceTable {
            values,
            stereotype_count: k,
        }
    }

    pub fn get(&self, f: InfoSet, stereotype: usize) -> DistanceValue {
        self.values[f.mask() as usize * self.stereotype_count + stereotype]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_world_space() -> WorldSpace {
        WorldSpace::with_all_valuations(&["a"]).unwrap()
    }

    #[test]
    fn new_rejects_empty_extent_and_duplicate_names() {
        let space = two_world_space();
        let err = KnowledgeBase::new(
            space.clone(),
            vec![Stereotype::new("s0", InfoSet::EMPTY)],
            DistanceFamily::Constant,
        )
        .unwrap_err();
        assert!(err
            .iter()
            .any(|v| matches!(v, Violation::EmptyStereotype { name } if name == "s0")));

        let err = KnowledgeBase::new(
            space,
            vec![
                Stereotype::new("s0", InfoSet::singleton(0)),
                Stereotype::new("s0", InfoSet::singleton(1)),
            ],
            DistanceFamily::Constant,
        )
        .unwrap_err();
        assert!(err
            .iter()
            .any(|v| matches!(v, Violation::DuplicateName { .. })));
    }

    #[test]
    fn validate_is_empty_for_well_formed_bases() {
        let space = two_world_space();
        let kb = KnowledgeBase::new(
            space,
            vec![Stereotype::new("s0", InfoSet::full(2))],
            DistanceFamily::Constant,
        )
        .unwrap();
        assert!(kb.validate().is_empty());
    }

    #[test]
    fn distance_table_matches_direct_evaluation() {
        let space = WorldSpace::with_all_valuations(&["a", "b"]).unwrap();
        let kb = KnowledgeBase::new(
            space,
            vec![
                Stereotype::new("s0", InfoSet::from_indices([0, 1])),
                Stereotype::new("s1", InfoSet::from_indices([2, 3])),
            ],
            DistanceFamily::Cardinality,
        )
        .unwrap();
        let table = DistanceTable::build(&kb);
        for f in InfoSet::all_subsets(4) {
            for s in 0..2 {
                assert_eq!(table.get(f, s), kb.distance(f, s));
            }
        }
    }
}
