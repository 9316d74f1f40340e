//! The knowledge base file format.
//!
//! A single UTF-8 JSON document, unknown fields rejected:
//!
//! ```json
//! {
//!   "atoms": ["big", "striped"],
//!   "worlds": [
//!     {"name": "w0", "valuation": {"big": true, "striped": true}},
//!     {"name": "w1", "valuation": {"big": false, "striped": false}}
//!   ],
//!   "stereotypes": [
//!     {"name": "tiger", "formula": "big & striped"},
//!     {"name": "other", "worlds": ["w1"]}
//!   ],
//!   "distance": {"family": "cardinality"}
//! }
//! ```
//!
//! A stereotype declares its extent through exactly one of `worlds` or
//! `formula`. The `distance` object names one of the five families plus its
//! parameters: `rank` for `min-world`, `order` for `partition-cover`,
//! `entries` for `table`. Table entries key sets by world-name list and carry
//! values as exact literals (`"-1/2"`, `"3"`, `"inf"`).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{KnowledgeBase, LoadError, Stereotype, Violation};
use crate::distance::DistanceFamily;
use crate::info::InfoSet;
use crate::logic::parse_formula;
use crate::ratio::DistanceValue;
use crate::space::{is_valid_atom_name, is_valid_identifier, WorldSpace, MAX_ATOMS};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KbDocument {
    pub atoms: Vec<String>,
    pub worlds: Vec<WorldDoc>,
    pub stereotypes: Vec<StereotypeDoc>,
    pub distance: DistanceSpecDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldDoc {
    pub name: String,
    pub valuation: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StereotypeDoc {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worlds: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceSpecDoc {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<TableEntryDoc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntryDoc {
    pub info: Vec<String>,
    pub stereotype: String,
    pub value: DistanceValue,
}

const FAMILIES: [&str; 5] = [
    "constant",
    "cardinality",
    "min-world",
    "partition-cover",
    "table",
];

impl KbDocument {
    /// Every invariant violation in the document, in a deterministic order.
    /// Later phases that depend on a well-formed space are skipped once the
    /// space itself is broken.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = self.validate_space();
        if !violations.is_empty() {
            return violations;
        }
        let space = self.build_space().expect("space checks passed");
        let (stereotypes, mut stereo_violations) = self.resolve_stereotypes(&space);
        violations.append(&mut stereo_violations);
        if !violations.is_empty() {
            return violations;
        }
        let extents: Vec<InfoSet> = stereotypes.iter().map(|s| s.extent()).collect();
        violations.extend(self.validate_distance(&space, &stereotypes, &extents));
        violations
    }

    /// Validates and resolves the document into a knowledge base.
    pub fn build(&self) -> Result<KnowledgeBase, LoadError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(LoadError::Invalid(violations));
        }
        let space = self.build_space().expect("validated");
        let (stereotypes, _) = self.resolve_stereotypes(&space);
        let family = self.build_family(&space, &stereotypes).expect("validated");
        KnowledgeBase::new(space, stereotypes, family).map_err(LoadError::Invalid)
    }

    fn validate_space(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self.atoms.len() > MAX_ATOMS {
            violations.push(Violation::Malformed {
                location: "atoms".to_string(),
                message: format!("too many atoms ({}, maximum {})", self.atoms.len(), MAX_ATOMS),
            });
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if !is_valid_atom_name(atom) {
                violations.push(Violation::BadName {
                    location: format!("atoms[{}]", i),
                    name: atom.clone(),
                });
            }
            if self.atoms[..i].contains(atom) {
                violations.push(Violation::DuplicateName {
                    location: format!("atoms[{}]", i),
                    name: atom.clone(),
                });
            }
        }
        if self.worlds.is_empty() {
            violations.push(Violation::Malformed {
                location: "worlds".to_string(),
                message: "at least one world is required".to_string(),
            });
        }
        if self.worlds.len() > crate::info::MAX_WORLDS {
            violations.push(Violation::Malformed {
                location: "worlds".to_string(),
                message: format!(
                    "too many worlds ({}, maximum {})",
                    self.worlds.len(),
                    crate::info::MAX_WORLDS
                ),
            });
        }
        let atom_set: BTreeSet<&str> = self.atoms.iter().map(|a| a.as_str()).collect();
        for (i, world) in self.worlds.iter().enumerate() {
            let location = format!("worlds[{}]", i);
            if !is_valid_identifier(&world.name) {
                violations.push(Violation::BadName {
                    location: location.clone(),
                    name: world.name.clone(),
                });
            }
            if self.worlds[..i].iter().any(|w| w.name == world.name) {
                violations.push(Violation::DuplicateName {
                    location: location.clone(),
                    name: world.name.clone(),
                });
            }
            for atom in world.valuation.keys() {
                if !atom_set.contains(atom.as_str()) {
                    violations.push(Violation::UnknownAtom {
                        location: location.clone(),
                        atom: atom.clone(),
                    });
                }
            }
            for atom in &self.atoms {
                if !world.valuation.contains_key(atom) {
                    violations.push(Violation::MissingAtomValue {
                        world: world.name.clone(),
                        atom: atom.clone(),
                    });
                }
            }
            for earlier in &self.worlds[..i] {
                if earlier.valuation == world.valuation {
                    violations.push(Violation::DuplicateValuation {
                        first: earlier.name.clone(),
                        second: world.name.clone(),
                    });
                }
            }
        }
        violations
    }

    fn build_space(&self) -> Option<WorldSpace> {
        let rows = self
            .worlds
            .iter()
            .map(|w| (w.name.clone(), w.valuation.clone()))
            .collect();
        WorldSpace::new(self.atoms.clone(), rows).ok()
    }

    fn resolve_stereotypes(&self, space: &WorldSpace) -> (Vec<Stereotype>, Vec<Violation>) {
        let mut stereotypes = Vec::new();
        let mut violations = Vec::new();
        if self.stereotypes.is_empty() {
            violations.push(Violation::Malformed {
                location: "stereotypes".to_string(),
                message: "at least one stereotype is required".to_string(),
            });
        }
        for (i, doc) in self.stereotypes.iter().enumerate() {
            let location = format!("stereotypes[{}]", i);
            if !is_valid_identifier(&doc.name) {
                violations.push(Violation::BadName {
                    location: location.clone(),
                    name: doc.name.clone(),
                });
            }
            if self.stereotypes[..i].iter().any(|s| s.name == doc.name) {
                violations.push(Violation::DuplicateName {
                    location: location.clone(),
                    name: doc.name.clone(),
                });
            }
            let extent = match (&doc.worlds, &doc.formula) {
                (Some(names), None) => {
                    let mut extent = InfoSet::EMPTY;
                    let mut ok = true;
                    for name in names {
                        match space.world_index(name) {
                            Some(w) => extent = extent.with(w),
                            None => {
                                violations.push(Violation::UnknownWorld {
                                    location: location.clone(),
                                    world: name.clone(),
                                });
                                ok = false;
                            }
                        }
                    }
                    if ok {
                        Some(extent)
                    } else {
                        None
                    }
                }
                (None, Some(text)) => match parse_formula(text, space) {
                    Ok(formula) => Some(space.models(&formula)),
                    Err(err) => {
                        violations.push(Violation::BadFormula {
                            location: format!("{}.formula", location),
                            message: err.to_string(),
                        });
                        None
                    }
                },
                _ => {
                    violations.push(Violation::Malformed {
                        location: location.clone(),
                        message: "exactly one of `worlds` or `formula` is required".to_string(),
                    });
                    None
                }
            };
            if let Some(extent) = extent {
                if extent.is_empty() {
                    violations.push(Violation::EmptyStereotype {
                        name: doc.name.clone(),
                    });
                } else {
                    stereotypes.push(Stereotype::new(doc.name.clone(), extent));
                }
            }
        }
        (stereotypes, violations)
    }

    fn validate_distance(
        &self,
        space: &WorldSpace,
        stereotypes: &[Stereotype],
        extents: &[InfoSet],
    ) -> Vec<Violation> {
        let mut violations = Vec::new();
        let spec = &self.distance;
        if !FAMILIES.contains(&spec.family.as_str()) {
            violations.push(Violation::DistanceSpec {
                message: format!(
                    "unknown family `{}` (expected one of {})",
                    spec.family,
                    FAMILIES.join(", ")
                ),
            });
            return violations;
        }
        let requires = |field: &str| spec.family == "min-world" && field == "rank"
            || spec.family == "partition-cover" && field == "order"
            || spec.family == "table" && field == "entries";
        for (field, present) in [
            ("rank", spec.rank.is_some()),
            ("order", spec.order.is_some()),
            ("entries", spec.entries.is_some()),
        ] {
            if present && !requires(field) {
                violations.push(Violation::DistanceSpec {
                    message: format!("family `{}` takes no `{}` parameter", spec.family, field),
                });
            }
            if !present && requires(field) {
                violations.push(Violation::DistanceSpec {
                    message: format!("family `{}` requires `{}`", spec.family, field),
                });
            }
        }
        if !violations.is_empty() {
            return violations;
        }

        match spec.family.as_str() {
            "min-world" => {
                let rank = spec.rank.as_ref().unwrap();
                for name in rank.keys() {
                    if space.world_index(name).is_none() {
                        violations.push(Violation::UnknownWorld {
                            location: "distance.rank".to_string(),
                            world: name.clone(),
                        });
                    }
                }
                for world in space.worlds() {
                    if !rank.contains_key(world.name()) {
                        violations.push(Violation::DistanceSpec {
                            message: format!("rank is missing world `{}`", world.name()),
                        });
                    }
                }
            }
            "partition-cover" => {
                let order = spec.order.as_ref().unwrap();
                for name in order {
                    if stereotypes.iter().all(|s| s.name() != name) {
                        violations.push(Violation::UnknownStereotype {
                            location: "distance.order".to_string(),
                            stereotype: name.clone(),
                        });
                    }
                }
            }
            "table" => {
                let entries = spec.entries.as_ref().unwrap();
                let mut seen = BTreeSet::new();
                for (i, entry) in entries.iter().enumerate() {
                    let location = format!("distance.entries[{}]", i);
                    let mut resolved = true;
                    let mut mask = InfoSet::EMPTY;
                    for name in &entry.info {
                        match space.world_index(name) {
                            Some(w) => mask = mask.with(w),
                            None => {
                                violations.push(Violation::UnknownWorld {
                                    location: location.clone(),
                                    world: name.clone(),
                                });
                                resolved = false;
                            }
                        }
                    }
                    let stereo = stereotypes.iter().position(|s| s.name() == entry.stereotype);
                    if stereo.is_none() {
                        violations.push(Violation::UnknownStereotype {
                            location: location.clone(),
                            stereotype: entry.stereotype.clone(),
                        });
                        resolved = false;
                    }
                    if resolved && !seen.insert((mask.mask(), stereo.unwrap())) {
                        violations.push(Violation::DistanceSpec {
                            message: format!(
                                "duplicate entry for ({}, {})",
                                space.render_set(mask),
                                entry.stereotype
                            ),
                        });
                    }
                }
                let expected = (1u128 << space.world_count()) * stereotypes.len() as u128;
                if violations.is_empty() && (seen.len() as u128) != expected {
                    violations.push(Violation::DistanceSpec {
                        message: format!(
                            "table must be total: {} entries for {} (set, stereotype) pairs",
                            seen.len(),
                            expected
                        ),
                    });
                }
            }
            _ => {}
        }
        if violations.is_empty() {
            if let Some(family) = self.build_family(space, stereotypes) {
                for message in family.check_against(space.world_count(), extents) {
                    violations.push(Violation::DistanceSpec { message });
                }
            }
        }
        violations
    }

    fn build_family(
        &self,
        space: &WorldSpace,
        stereotypes: &[Stereotype],
    ) -> Option<DistanceFamily> {
        let spec = &self.distance;
        match spec.family.as_str() {
            "constant" => Some(DistanceFamily::Constant),
            "cardinality" => Some(DistanceFamily::Cardinality),
            "min-world" => {
                let rank_map = spec.rank.as_ref()?;
                let mut rank = vec![0u64; space.world_count()];
                for (name, &r) in rank_map {
                    rank[space.world_index(name)?] = r;
                }
                Some(DistanceFamily::MinWorld { rank })
            }
            "partition-cover" => {
                let order = spec.order.as_ref()?;
                let mut position = vec![usize::MAX; stereotypes.len()];
                for (i, name) in order.iter().enumerate() {
                    let s = stereotypes.iter().position(|st| st.name() == name)?;
                    position[s] = i;
                }
                Some(DistanceFamily::PartitionCover { position })
            }
            "table" => {
                let entries = spec.entries.as_ref()?;
                let k = stereotypes.len();
                let size = (1usize << space.world_count()) * k;
                let mut values = vec![None; size];
                for entry in entries {
                    let mut mask = InfoSet::EMPTY;
                    for name in &entry.info {
                        mask = mask.with(space.world_index(name)?);
                    }
                    let s = stereotypes.iter().position(|st| st.name() == entry.stereotype)?;
                    values[mask.mask() as usize * k + s] = Some(entry.value);
                }
                let values: Option<Vec<DistanceValue>> = values.into_iter().collect();
                Some(DistanceFamily::Table { values: values? })
            }
            _ => None,
        }
    }
}

impl KnowledgeBase {
    /// The canonical document form: extents as explicit world lists, table
    /// entries in (set, stereotype) order.
    pub fn to_document(&self) -> KbDocument {
        let space = self.space();
        let worlds = space
            .worlds()
            .iter()
            .map(|w| WorldDoc {
                name: w.name().to_string(),
                valuation: space
                    .atoms()
                    .iter()
                    .enumerate()
                    .map(|(i, atom)| (atom.clone(), w.atom_value(i)))
                    .collect(),
            })
            .collect();
        let stereotypes = self
            .stereotypes()
            .iter()
            .map(|s| StereotypeDoc {
                name: s.name().to_string(),
                worlds: Some(
                    space
                        .set_names(s.extent())
                        .into_iter()
                        .map(str::to_string)
                        .collect(),
                ),
                formula: None,
            })
            .collect();
        let distance = match self.family() {
            DistanceFamily::Constant => DistanceSpecDoc {
                family: "constant".to_string(),
                rank: None,
                order: None,
                entries: None,
            },
            DistanceFamily::Cardinality => DistanceSpecDoc {
                family: "cardinality".to_string(),
                rank: None,
                order: None,
                entries: None,
            },
            DistanceFamily::MinWorld { rank } => DistanceSpecDoc {
                family: "min-world".to_string(),
                rank: Some(
                    rank.iter()
                        .enumerate()
                        .map(|(w, &r)| (space.world(w).name().to_string(), r))
                        .collect(),
                ),
                order: None,
                entries: None,
            },
            DistanceFamily::PartitionCover { position } => {
                let mut order = vec![String::new(); position.len()];
                for (s, &p) in position.iter().enumerate() {
                    order[p] = self.stereotype(s).name().to_string();
                }
                DistanceSpecDoc {
                    family: "partition-cover".to_string(),
                    rank: None,
                    order: Some(order),
                    entries: None,
                }
            }
            DistanceFamily::Table { values } => {
                let k = self.stereotype_count();
                let entries = (0..(1u64 << space.world_count()))
                    .flat_map(|mask| (0..k).map(move |s| (mask, s)))
                    .map(|(mask, s)| {
                        let set = InfoSet::from_mask(mask);
                        TableEntryDoc {
                            info: space.set_names(set).into_iter().map(str::to_string).collect(),
                            stereotype: self.stereotype(s).name().to_string(),
                            value: values[mask as usize * k + s],
                        }
                    })
                    .collect();
                DistanceSpecDoc {
                    family: "table".to_string(),
                    rank: None,
                    order: None,
                    entries: Some(entries),
                }
            }
        };
        KbDocument {
            atoms: space.atoms().to_vec(),
            worlds,
            stereotypes,
            distance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "atoms": ["a"],
        "worlds": [
            {"name": "w0", "valuation": {"a": false}},
            {"name": "w1", "valuation": {"a": true}}
        ],
        "stereotypes": [{"name": "s0", "worlds": ["w0", "w1"]}],
        "distance": {"family": "constant"}
    }"#;

    #[test]
    fn minimal_document_loads() {
        let kb = KnowledgeBase::from_json(MINIMAL).unwrap();
        assert_eq!(kb.stereotype_count(), 1);
        assert_eq!(kb.stereotype(0).extent(), InfoSet::full(2));
    }

    #[test]
    fn formula_extents_resolve_via_models() {
        let text = r#"{
            "atoms": ["big", "striped"],
            "worlds": [
                {"name": "w0", "valuation": {"big": true, "striped": true}},
                {"name": "w1", "valuation": {"big": true, "striped": false}},
                {"name": "w2", "valuation": {"big": false, "striped": false}}
            ],
            "stereotypes": [{"name": "tiger", "formula": "big & striped"}],
            "distance": {"family": "constant"}
        }"#;
        let kb = KnowledgeBase::from_json(text).unwrap();
        assert_eq!(kb.stereotype(0).extent(), InfoSet::singleton(0));
    }

    #[test]
    fn contradictory_formula_is_an_empty_stereotype() {
        let text = r#"{
            "atoms": ["a"],
            "worlds": [{"name": "w0", "valuation": {"a": true}}],
            "stereotypes": [{"name": "s0", "formula": "a & ~a"}],
            "distance": {"family": "constant"}
        }"#;
        match KnowledgeBase::from_json(text) {
            Err(LoadError::Invalid(violations)) => {
                assert!(violations
                    .iter()
                    .any(|v| matches!(v, Violation::EmptyStereotype { name } if name == "s0")));
            }
            other => panic!("expected invalid, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = MINIMAL.replace("\"atoms\"", "\"extra\": 1, \"atoms\"");
        assert!(matches!(
            KnowledgeBase::from_json(&text),
            Err(LoadError::Format(_))
        ));
    }

    #[test]
    fn duplicate_valuations_are_reported_with_both_names() {
        let text = r#"{
            "atoms": ["a"],
            "worlds": [
                {"name": "w0", "valuation": {"a": true}},
                {"name": "w1", "valuation": {"a": true}}
            ],
            "stereotypes": [{"name": "s0", "worlds": ["w0"]}],
            "distance": {"family": "constant"}
        }"#;
        let doc: KbDocument = serde_json::from_str(text).unwrap();
        let violations = doc.validate();
        assert!(violations.iter().any(|v| matches!(
            v,
            Violation::DuplicateValuation { first, second } if first == "w0" && second == "w1"
        )));
    }

    #[test]
    fn unknown_world_in_extent_is_reported() {
        let text = MINIMAL.replace("\"w1\"]", "\"nowhere\"]");
        let doc: KbDocument = serde_json::from_str(&text).unwrap();
        assert!(doc
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::UnknownWorld { world, .. } if world == "nowhere")));
    }

    #[test]
    fn load_serialize_load_is_identity() {
        let texts = [
            MINIMAL.to_string(),
            r#"{
                "atoms": ["a", "b"],
                "worlds": [
                    {"name": "w0", "valuation": {"a": false, "b": false}},
                    {"name": "w1", "valuation": {"a": true, "b": false}}
                ],
                "stereotypes": [
                    {"name": "s0", "worlds": ["w0"]},
                    {"name": "s1", "worlds": ["w1"]}
                ],
                "distance": {"family": "min-world", "rank": {"w0": 3, "w1": 7}}
            }"#
            .to_string(),
        ];
        for text in texts {
            let kb = KnowledgeBase::from_json(&text).unwrap();
            let round = KnowledgeBase::from_json(&kb.to_json()).unwrap();
            assert_eq!(kb, round);
        }
    }

    #[test]
    fn table_totality_is_enforced() {
        let text = r#"{
            "atoms": ["a"],
            "worlds": [
                {"name": "w0", "valuation": {"a": false}},
                {"name": "w1", "valuation": {"a": true}}
            ],
            "stereotypes": [{"name": "s0", "worlds": ["w0"]}],
            "distance": {"family": "table", "entries": [
                {"info": [], "stereotype": "s0", "value": "0"},
                {"info": ["w0"], "stereotype": "s0", "value": "0"},
                {"info": ["w1"], "stereotype": "s0", "value": "1"}
            ]}
        }"#;
        match KnowledgeBase::from_json(text) {
            Err(LoadError::Invalid(violations)) => {
                assert!(violations
                    .iter()
                    .any(|v| matches!(v, Violation::DistanceSpec { message } if message.contains("total"))));
            }
            other => panic!("expected invalid, got {:?}", other.map(|_| ())),
        }
    }
}
