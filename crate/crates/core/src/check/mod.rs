//! Exhaustive law checkers.
//!
//! Each checker sweeps every instantiation of one structural law over a
//! concrete knowledge base and reports PASS, FAIL with a canonical witness
//! list, or NOT_APPLICABLE when the law's preconditions already fail.
//! Sweeps enumerate sets in ascending mask order and stereotypes in
//! declaration order, so reports are deterministic for a given base.

mod klm;
mod laws;

pub use klm::{check_klm, verify_theorem1, verify_theorem2, KlmProperty};
pub use laws::{check_assumption_four, check_assumption_zero, check_eq2, check_tree_structure};

use std::fmt;
use std::time::Instant;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::info::InfoSet;
use crate::kb::KnowledgeBase;
use crate::ratio::DistanceValue;
use crate::space::WorldSpace;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One counterexample: the tuple instantiating a failed condition, as
/// ordered, named parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    parts: Vec<(String, WitnessValue)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessValue {
    /// A set of worlds, by name, in declaration order.
    Worlds(Vec<String>),
    /// A stereotype (or other named object).
    Name(String),
    /// Several names, e.g. a co-minimal stereotype list.
    Names(Vec<String>),
    Distance(DistanceValue),
}

impl Witness {
    pub fn new() -> Witness {
        Witness { parts: Vec::new() }
    }

    pub fn set(mut self, key: &str, space: &WorldSpace, set: InfoSet) -> Witness {
        self.parts.push((
            key.to_string(),
            WitnessValue::Worlds(space.set_names(set).into_iter().map(str::to_string).collect()),
        ));
        self
    }

    pub fn name(mut self, key: &str, name: &str) -> Witness {
        self.parts.push((key.to_string(), WitnessValue::Name(name.to_string())));
        self
    }

    pub fn names(mut self, key: &str, names: Vec<String>) -> Witness {
        self.parts.push((key.to_string(), WitnessValue::Names(names)));
        self
    }

    pub fn distance(mut self, key: &str, value: DistanceValue) -> Witness {
        self.parts.push((key.to_string(), WitnessValue::Distance(value)));
        self
    }

    pub fn parts(&self) -> &[(String, WitnessValue)] {
        &self.parts
    }

    /// The named world-set part called `key`, if present.
    pub fn worlds(&self, key: &str) -> Option<&[String]> {
        self.parts.iter().find_map(|(k, v)| match v {
            WitnessValue::Worlds(names) if k == key => Some(names.as_slice()),
            _ => None,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (key, value) in &self.parts {
            let v = match value {
                WitnessValue::Worlds(names) => json!(names),
                WitnessValue::Name(name) => json!(name),
                WitnessValue::Names(names) => json!(names),
                WitnessValue::Distance(d) => json!(d.to_string()),
            };
            map.insert(key.clone(), v);
        }
        Value::Object(map)
    }
}

impl Default for Witness {
    fn default() -> Witness {
        Witness::new()
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (key, value) in &self.parts {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            match value {
                WitnessValue::Worlds(names) => write!(f, "{}={{{}}}", key, names.join(", "))?,
                WitnessValue::Name(name) => write!(f, "{}={}", key, name)?,
                WitnessValue::Names(names) => write!(f, "{}={{{}}}", key, names.join(", "))?,
                WitnessValue::Distance(d) => write!(f, "{}={}", key, d)?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    /// Quantification tuples examined.
    pub cases: u64,
    pub elapsed_ms: u64,
}

/// The outcome of one checker run.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub property: String,
    /// Human description of the quantification ranges (and of any skipped
    /// precondition for NOT_APPLICABLE verdicts).
    pub universe: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub stats: CheckStats,
}

impl CheckReport {
    fn finish(
        property: &str,
        universe: String,
        witnesses: Vec<Witness>,
        cases: u64,
        start: Instant,
    ) -> CheckReport {
        let verdict = if witnesses.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport {
            property: property.to_string(),
            universe,
            verdict,
            witnesses,
            stats: CheckStats {
                cases,
                elapsed_ms: start.elapsed().as_millis() as u64,
            },
        }
    }

    fn not_applicable(property: &str, reason: String, start: Instant) -> CheckReport {
        CheckReport {
            property: property.to_string(),
            universe: reason,
            verdict: Verdict::NotApplicable,
            witnesses: Vec::new(),
            stats: CheckStats {
                cases: 0,
                elapsed_ms: start.elapsed().as_millis() as u64,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "property": self.property,
            "universe": self.universe,
            "verdict": self.verdict.as_str(),
            "witnesses": self.witnesses.iter().map(Witness::to_json).collect::<Vec<_>>(),
            "stats": {
                "cases": self.stats.cases,
                "elapsed_ms": self.stats.elapsed_ms,
            },
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("property: {}\n", self.property));
        out.push_str(&format!("universe: {}\n", self.universe));
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str(&format!(
            "cases: {} ({} ms)\n",
            self.stats.cases, self.stats.elapsed_ms
        ));
        if !self.witnesses.is_empty() {
            out.push_str(&format!("witnesses ({}):\n", self.witnesses.len()));
            for witness in &self.witnesses {
                out.push_str(&format!("  {}\n", witness));
            }
        }
        out
    }
}

/// Bounds on exhaustive sweeps: a cap on quantification tuples per checker
/// run. The default admits every desk-scale base (all corpus shapes up to
/// six worlds sit far below it) while refusing runs that would grind for
/// hours.
#[derive(Clone, Debug)]
pub struct SweepLimits {
    /// Maximum quantification tuples per checker run.
    pub budget: u64,
    /// Runs the sweep no matter the estimate.
    pub override_scale_limit: bool,
}

impl Default for SweepLimits {
    fn default() -> SweepLimits {
        SweepLimits {
            budget: 100_000_000,
            override_scale_limit: false,
        }
    }
}

impl SweepLimits {
    pub fn unbounded() -> SweepLimits {
        SweepLimits {
            budget: u64::MAX,
            override_scale_limit: true,
        }
    }

    pub fn with_budget(budget: u64) -> SweepLimits {
        SweepLimits {
            budget,
            ..SweepLimits::default()
        }
    }

    fn admit(&self, property: &str, estimated: u64) -> Result<(), CheckError> {
        if !self.override_scale_limit && estimated > self.budget {
            return Err(CheckError::ScaleLimit {
                property: property.to_string(),
                reason: format!(
                    "estimated {} cases exceed the budget of {}; raise the budget \
                     or pass the override flag to sweep anyway",
                    estimated, self.budget
                ),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("scale limit for {property}: {reason}")]
    ScaleLimit { property: String, reason: String },
}

/// Distance table plus the selected stereotype per nonempty set, with every
/// tie recorded. Shared by the checkers so each sweep probe is a lookup.
pub(crate) struct Selection {
    pub table: crate::kb::DistanceTable,
    /// Winner by mask; meaningful where `ties` is empty.
    pub chosen: Vec<usize>,
    /// Sets with a non-unique minimum, ascending, with co-minimal indices.
    pub ties: Vec<(InfoSet, Vec<usize>)>,
}

impl Selection {
    pub fn build(kb: &KnowledgeBase) -> Selection {
        let n = kb.space().world_count();
        let k = kb.stereotype_count();
        let table = crate::kb::DistanceTable::build(kb);
        let mut chosen = vec![0usize; 1 << n];
        let mut ties = Vec::new();
        for f in InfoSet::nonempty_subsets(n) {
            let mut best = 0usize;
            let mut tied = vec![0usize];
            for s in 1..k {
                let d = table.get(f, s);
                match d.cmp(&table.get(f, best)) {
                    std::cmp::Ordering::Less => {
                        best = s;
                        tied = vec![s];
                    }
                    std::cmp::Ordering::Equal => tied.push(s),
                    std::cmp::Ordering::Greater => {}
                }
            }
            if tied.len() > 1 {
                ties.push((f, tied));
            }
            chosen[f.mask() as usize] = best;
        }
        Selection { table, chosen, ties }
    }

    /// F ∩ S^F under the empty-set convention.
    pub fn consequences(&self, kb: &KnowledgeBase, f: InfoSet) -> InfoSet {
        if f.is_empty() {
            InfoSet::EMPTY
        } else {
            f & kb.stereotype(self.chosen[f.mask() as usize]).extent()
        }
    }
}
