//! Worlds and world spaces.
//!
//! A world is a named, total valuation of the declared atoms; a world space
//! is an ordered list of pairwise-distinct worlds. Distinctness is what makes
//! every information set definable by a formula, so set-level and
//! formula-level statements about the consequence relation coincide.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::info::{InfoSet, MAX_WORLDS};
use crate::logic::Formula;

pub const MAX_ATOMS: usize = 64;

/// Names reserved by the formula grammar.
pub const RESERVED_WORDS: [&str; 2] = ["true", "false"];

pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    !RESERVED_WORDS.contains(&name)
}

pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A named world: one row of the valuation table, packed as atom-index bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    name: String,
    valuation: u64,
}

impl World {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn atom_value(&self, atom_index: usize) -> bool {
        self.valuation & (1u64 << atom_index) != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("invalid atom name `{0}`")]
    BadAtomName(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("too many atoms ({0}, maximum {MAX_ATOMS})")]
    TooManyAtoms(usize),
    #[error("invalid world name `{0}`")]
    BadWorldName(String),
    #[error("duplicate world name `{0}`")]
    DuplicateWorldName(String),
    #[error("worlds `{0}` and `{1}` have identical valuations")]
    DuplicateValuation(String, String),
    #[error("a world space needs at least one world")]
    NoWorlds,
    #[error("too many worlds ({0}, maximum {MAX_WORLDS})")]
    TooManyWorlds(usize),
    #[error("world `{world}` has no value for atom `{atom}`")]
    MissingAtomValue { world: String, atom: String },
    #[error("world `{world}` mentions undeclared atom `{atom}`")]
    UnknownAtom { world: String, atom: String },
}

/// The finite universe of worlds all sets and stereotypes live in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldSpace {
    atoms: Vec<String>,
    worlds: Vec<World>,
    atom_index: BTreeMap<String, usize>,
    world_index: BTreeMap<String, usize>,
}

impl WorldSpace {
    /// Builds a space from atom names and `(world name, valuation)` rows.
    /// Valuations are total maps from atom name to truth value.
    pub fn new(
        atoms: Vec<String>,
        worlds: Vec<(String, BTreeMap<String, bool>)>,
    ) -> Result<WorldSpace, SpaceError> {
        if atoms.len() > MAX_ATOMS {
            return Err(SpaceError::TooManyAtoms(atoms.len()));
        }
        let mut atom_index = BTreeMap::new();
        for (i, atom) in atoms.iter().enumerate() {
            if !is_valid_atom_name(atom) {
                return Err(SpaceError::BadAtomName(atom.clone()));
            }
            if atom_index.insert(atom.clone(), i).is_some() {
                return Err(SpaceError::DuplicateAtom(atom.clone()));
            }
        }
        if worlds.is_empty() {
            return Err(SpaceError::NoWorlds);
        }
        if worlds.len() > MAX_WORLDS {
            return Err(SpaceError::TooManyWorlds(worlds.len()));
        }

        let mut built: Vec<World> = Vec::with_capacity(worlds.len());
        let mut world_index = BTreeMap::new();
        for (i, (name, valuation)) in worlds.into_iter().enumerate() {
            if !is_valid_identifier(&name) {
                return Err(SpaceError::BadWorldName(name));
            }
            if world_index.insert(name.clone(), i).is_some() {
                return Err(SpaceError::DuplicateWorldName(name));
            }
            let mut bits = 0u64;
            for (atom, value) in &valuation {
                match atom_index.get(atom) {
                    Some(&idx) => {
                        if *value {
                            bits |= 1u64 << idx;
                        }
                    }
                    None => {
                        return Err(SpaceError::UnknownAtom {
                            world: name,
                            atom: atom.clone(),
                        })
                    }
                }
            }
            for atom in &atoms {
                if !valuation.contains_key(atom) {
                    return Err(SpaceError::MissingAtomValue {
                        world: name,
                        atom: atom.clone(),
                    });
                }
            }
            if let Some(dup) = built.iter().find(|w| w.valuation == bits) {
                return Err(SpaceError::DuplicateValuation(dup.name.clone(), name));
            }
            built.push(World {
                name,
                valuation: bits,
            });
        }
        Ok(WorldSpace {
            atoms,
            worlds: built,
            atom_index,
            world_index,
        })
    }

    /// Space with all `2^n` valuations of the given atoms, worlds named
    /// `w0, w1, ...` with the valuation of `wK` reading `K` in binary
    /// (first declared atom = least significant bit).
    pub fn with_all_valuations(atoms: &[&str]) -> Result<WorldSpace, SpaceError> {
        let n = atoms.len();
        assert!(n < 7, "all-valuation helper is for desk-scale spaces");
        let rows = (0..(1usize << n))
            .map(|k| {
                let valuation = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, atom)| (atom.to_string(), k & (1 << i) != 0))
                    .collect();
                (format!("w{}", k), valuation)
            })
            .collect();
        WorldSpace::new(atoms.iter().map(|a| a.to_string()).collect(), rows)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atom_index.get(name).copied()
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn world(&self, index: usize) -> &World {
        &self.worlds[index]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.world_index.get(name).copied()
    }

    pub fn full_set(&self) -> InfoSet {
        InfoSet::full(self.world_count())
    }

    /// Standard truth-table semantics at one world.
    pub fn eval(&self, formula: &Formula, world: usize) -> bool {
        let w = &self.worlds[world];
        self.eval_world(formula, w)
    }

    fn eval_world(&self, formula: &Formula, w: &World) -> bool {
        match formula {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(name) => {
                let idx = self
                    .atom_index(name)
                    .expect("formula must be well-formed over the space");
                w.atom_value(idx)
            }
            Formula::Not(inner) => !self.eval_world(inner, w),
            Formula::And(a, b) => self.eval_world(a, w) && self.eval_world(b, w),
            Formula::Or(a, b) => self.eval_world(a, w) || self.eval_world(b, w),
            Formula::Implies(a, b) => !self.eval_world(a, w) || self.eval_world(b, w),
            Formula::Iff(a, b) => self.eval_world(a, w) == self.eval_world(b, w),
        }
    }

    /// The set of declared worlds satisfying `formula`.
    pub fn models(&self, formula: &Formula) -> InfoSet {
        InfoSet::from_indices(
            (0..self.world_count()).filter(|&i| self.eval(formula, i)),
        )
    }

    /// A formula whose models are exactly `set`: the disjunction, in world
    /// declaration order, of each world's full literal description. The empty
    /// set yields `false`.
    pub fn canonical_formula(&self, set: InfoSet) -> Formula {
        let mut clauses = set.iter().map(|i| self.world_formula(i));
        match clauses.next() {
            None => Formula::False,
            Some(first) => clauses.fold(first, Formula::or),
        }
    }

    /// The full conjunction of literals describing one world's valuation.
    /// A space with no atoms yields `true`.
    pub fn world_formula(&self, world: usize) -> Formula {
        let w = &self.worlds[world];
        let mut literals = self.atoms.iter().enumerate().map(|(i, atom)| {
            if w.atom_value(i) {
                Formula::atom(atom)
            } else {
                Formula::not(Formula::atom(atom))
            }
        });
        match literals.next() {
            None => Formula::True,
            Some(first) => literals.fold(first, Formula::and),
        }
    }

    /// Renders a set as `{name, name, ...}` in declaration order.
    pub fn render_set(&self, set: InfoSet) -> String {
        let names: Vec<&str> = self.set_names(set);
        format!("{{{}}}", names.join(", "))
    }

    pub fn set_names(&self, set: InfoSet) -> Vec<&str> {
        set.iter().map(|i| self.worlds[i].name()).collect()
    }

    /// Resolves world names to a set; unknown names are reported verbatim.
    pub fn set_from_names<'a, I: IntoIterator<Item = &'a str>>(
        &self,
        names: I,
    ) -> Result<InfoSet, String> {
        let mut set = InfoSet::EMPTY;
        for name in names {
            match self.world_index(name) {
                Some(i) => set = set.with(i),
                None => return Err(name.to_string()),
            }
        }
        Ok(set)
    }
}

impl fmt::Display for WorldSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} atoms, {} worlds",
            self.atom_count(),
            self.world_count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn construction_rejects_duplicates() {
        let rows = vec![
            ("w0".to_string(), BTreeMap::from([("a".to_string(), true)])),
            ("w1".to_string(), BTreeMap::from([("a".to_string(), true)])),
        ];
        let err = WorldSpace::new(vec!["a".to_string()], rows).unwrap_err();
        assert_eq!(
            err,
            SpaceError::DuplicateValuation("w0".to_string(), "w1".to_string())
        );

        let err = WorldSpace::new(vec!["true".to_string()], vec![]).unwrap_err();
        assert_eq!(err, SpaceError::BadAtomName("true".to_string()));
    }

    #[test]
    fn eval_truth_tables() {
        let space = WorldSpace::with_all_valuations(&["a", "b"]).unwrap();
        // w2: a=false, b=true; w1: a=true, b=false
        let f = parse_formula("a & ~b", &space).unwrap();
        assert!(space.eval(&f, 1));
        assert!(!space.eval(&f, 2));
        let iff = parse_formula("a <-> b", &space).unwrap();
        assert!(!space.eval(&iff, 1));
        assert!(space.eval(&iff, 0));
        assert!(space.eval(&Formula::True, 3));
    }

    #[test]
    fn models_of_constants_and_atoms() {
        let space = WorldSpace::with_all_valuations(&["a", "b", "c"]).unwrap();
        assert_eq!(space.models(&Formula::True), space.full_set());
        assert_eq!(space.models(&Formula::False), InfoSet::EMPTY);
        let a = parse_formula("a", &space).unwrap();
        let models = space.models(&a);
        assert_eq!(models.len(), 4);
        for i in models.iter() {
            assert!(space.world(i).atom_value(0));
        }
    }

    #[test]
    fn canonical_formula_round_trips_all_sets_of_an_8_world_space() {
        let space = WorldSpace::with_all_valuations(&["a", "b", "c"]).unwrap();
        for set in InfoSet::all_subsets(space.world_count()) {
            let formula = space.canonical_formula(set);
            assert_eq!(space.models(&formula), set, "set {}", set);
        }
    }

    #[test]
    fn canonical_formula_of_tiny_spaces() {
        let space = WorldSpace::with_all_valuations(&["a"]).unwrap();
        assert_eq!(space.canonical_formula(InfoSet::EMPTY), Formula::False);
        let both = space.canonical_formula(space.full_set());
        assert_eq!(
            both,
            Formula::or(Formula::not(Formula::atom("a")), Formula::atom("a"))
        );
    }
}
