//! Representability decisions and the bounded counterexample search.
//!
//! `is_representable` asks whether one selection function arises from a given
//! candidate stereotype list under the monotonicity law with unique minima:
//! it enumerates assignments σ(F) among the stereotypes whose intersection
//! with F is exactly f(F), and checks each induced constraint graph for a
//! consistent order. `search_nonrepresentable` enumerates every cumulative
//! selection function on a small space and every candidate stereotype set
//! within a size bound, and returns the functions no candidate set can
//! realize, each with per-set refutation certificates.
//!
//! # Budget and workers
//!
//! The budget counts elementary steps: one per candidate selection function
//! enumerated, plus nodes-and-edges per feasibility run. The search runs
//! work items (one per cumulative selection function) on a small worker pool
//! with a shared atomic countdown. Items are claimed in canonical order and
//! the merge re-applies the budget sequentially, so output bytes depend only
//! on the bounds and budget, never on the worker count; workers may overrun
//! the budget by the items still in flight when it hits zero. Exhaustion
//! shows up as an UNKNOWN tail, never as silently missing results.

use std::sync::atomic::{AtomicI64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde_json::{json, Map, Value};

use super::graph::{GraphShape, StrictCycle};
use super::SelectionFunction;
use crate::distance::DistanceFamily;
use crate::info::InfoSet;
use crate::kb::{KnowledgeBase, Stereotype};
use crate::ratio::DistanceValue;
use crate::space::WorldSpace;

/// Outcome of one representability question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representability {
    Yes(StereotypeModel),
    No(NoCertificate),
    Unknown,
}

impl Representability {
    pub fn verdict_str(&self) -> &'static str {
        match self {
            Representability::Yes(_) => "YES",
            Representability::No(_) => "NO",
            Representability::Unknown => "UNKNOWN",
        }
    }
}

/// A realizing model: the stereotype assigned to each set and distance
/// levels consistent with every constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StereotypeModel {
    /// σ by mask (stereotype index); entry 0 is unused.
    pub assignment: Vec<usize>,
    /// Distance level per (mask, stereotype) node, mask-major.
    pub levels: Vec<u64>,
}

impl StereotypeModel {
    /// Materializes the model as a table-family knowledge base over the given
    /// space, stereotypes named `s0, s1, ...` in list order. The base selects
    /// exactly the represented function.
    pub fn to_table_kb(&self, space: &WorldSpace, stereotypes: &[InfoSet]) -> KnowledgeBase {
        let values = self
            .levels
            .iter()
            .map(|&level| DistanceValue::int(level as i64))
            .collect();
        let named = stereotypes
            .iter()
            .enumerate()
            .map(|(s, extent)| Stereotype::new(format!("s{}", s), *extent))
            .collect();
        KnowledgeBase::new(space.clone(), named, DistanceFamily::Table { values })
            .expect("linearized tables are well-formed")
    }
}

/// Why a candidate stereotype set cannot realize a selection function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoCertificate {
    /// Some set has no stereotype with F ∩ S = f(F): no assignment exists.
    NoCandidate { info_set: InfoSet },
    /// Every assignment leaves a strict edge inside a cycle; the example is
    /// from the first assignment tried.
    Infeasible {
        assignments_tried: u64,
        example: StrictCycle,
    },
}

impl NoCertificate {
    fn to_json(&self, space: &WorldSpace, stereotypes: &[InfoSet]) -> Value {
        match self {
            NoCertificate::NoCandidate { info_set } => json!({
                "reason": "no-candidate",
                "info_set": space.set_names(*info_set),
            }),
            NoCertificate::Infeasible {
                assignments_tried,
                example,
            } => json!({
                "reason": "strict-edge-in-cycle",
                "assignments_tried": assignments_tried,
                "info_set": space.set_names(example.f),
                "assigned": space.set_names(stereotypes[example.assigned]),
                "rival": space.set_names(stereotypes[example.rival]),
            }),
        }
    }
}

/// Decides whether `selection` is realizable with the given candidate
/// stereotypes (extents must be nonempty). `budget` caps elementary steps.
pub fn is_representable(
    selection: &SelectionFunction,
    stereotypes: &[InfoSet],
    budget: u64,
) -> Representability {
    let shape = GraphShape::build(selection.n_worlds(), stereotypes);
    let mut remaining = budget;
    representable_with_shape(selection, stereotypes, &shape, &mut remaining)
}

fn representable_with_shape(
    selection: &SelectionFunction,
    stereotypes: &[InfoSet],
    shape: &GraphShape,
    remaining: &mut u64,
) -> Representability {
    let n = selection.n_worlds();
    let masks = 1usize << n;

    // candidate stereotypes per set: exactly those meeting F in f(F)
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); masks];
    for f in InfoSet::nonempty_subsets(n) {
        let target = selection.get(f);
        let slot = &mut candidates[f.mask() as usize];
        for (s, extent) in stereotypes.iter().enumerate() {
            if f & *extent == target {
                slot.push(s);
            }
        }
        if slot.is_empty() {
            return Representability::No(NoCertificate::NoCandidate { info_set: f });
        }
    }

    // odometer over assignments, earlier masks most significant
    let nonempty: Vec<usize> = (1..masks).collect();
    let mut digit = vec![0usize; masks];
    let mut assignment = vec![usize::MAX; masks];
    let mut tried = 0u64;
    let mut first_cycle: Option<StrictCycle> = None;
    loop {
        if *remaining < shape.cost_per_run {
            return Representability::Unknown;
        }
        *remaining -= shape.cost_per_run;
        for &mask in &nonempty {
            assignment[mask] = candidates[mask][digit[mask]];
        }
        tried += 1;
        match shape.feasibility(&assignment) {
            Ok(lin) => {
                return Representability::Yes(StereotypeModel {
                    assignment,
                    levels: lin.levels,
                });
            }
            Err(cycle) => {
                if first_cycle.is_none() {
                    first_cycle = Some(cycle);
                }
            }
        }
        // advance the odometer from the least significant (largest mask) digit
        let mut pos = nonempty.len();
        loop {
            if pos == 0 {
                return Representability::No(NoCertificate::Infeasible {
                    assignments_tried: tried,
                    example: first_cycle.expect("at least one assignment failed"),
                });
            }
            pos -= 1;
            let mask = nonempty[pos];
            digit[mask] += 1;
            if digit[mask] < candidates[mask].len() {
                break;
            }
            digit[mask] = 0;
        }
    }
}

/// One candidate stereotype set's verdict for one selection function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetVerdict {
    pub stereotypes: Vec<InfoSet>,
    pub result: Representability,
}

/// A selection function no candidate set within the bound can realize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonRepresentable {
    pub selection: SelectionFunction,
    pub verdicts: Vec<SetVerdict>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Selection functions enumerated (cumulative or not).
    pub selection_functions: u64,
    /// Enumeration candidates never examined because the budget ran out.
    pub unexamined_selection_functions: u64,
    pub cumulative: u64,
    pub representable: u64,
    pub nonrepresentable: u64,
    /// Cumulative functions with no YES and at least one UNKNOWN verdict,
    /// plus items cut off by the budget tail.
    pub unknown: u64,
}

pub struct SearchOutcome {
    pub n_worlds: usize,
    pub max_stereotypes: usize,
    pub budget: u64,
    pub found: Vec<NonRepresentable>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    /// Deterministic evidence document; independent of the worker count.
    pub fn to_json(&self, space: &WorldSpace) -> Value {
        let found: Vec<Value> = self
            .found
            .iter()
            .map(|item| {
                let verdicts: Vec<Value> = item
                    .verdicts
                    .iter()
                    .map(|v| {
                        let mut entry = Map::new();
                        entry.insert(
                            "stereotypes".to_string(),
                            json!(v
                                .stereotypes
                                .iter()
                                .map(|s| space.set_names(*s))
                                .collect::<Vec<_>>()),
                        );
                        entry.insert("verdict".to_string(), json!(v.result.verdict_str()));
                        if let Representability::No(certificate) = &v.result {
                            entry.insert(
                                "certificate".to_string(),
                                certificate.to_json(space, &v.stereotypes),
                            );
                        }
                        Value::Object(entry)
                    })
                    .collect();
                json!({
                    "selection": item.selection.to_json(space),
                    "verdicts": verdicts,
                })
            })
            .collect();
        json!({
            "worlds": self.n_worlds,
            "max_stereotypes": self.max_stereotypes,
            "budget": self.budget,
            "found": found,
            "stats": {
                "selection_functions": self.stats.selection_functions,
                "unexamined_selection_functions": self.stats.unexamined_selection_functions,
                "cumulative": self.stats.cumulative,
                "representable": self.stats.representable,
                "nonrepresentable": self.stats.nonrepresentable,
                "unknown": self.stats.unknown,
            },
        })
    }
}

enum ItemStatus {
    Representable,
    NonRepresentable(Vec<SetVerdict>),
    Unknown,
}

/// Enumerates every selection function on the space, keeps the cumulative
/// ones, and tests each against every candidate stereotype set of size
/// 1..=`max_stereotypes` drawn from the nonempty subsets. Returns the
/// functions for which every candidate set is refuted.
pub fn search_nonrepresentable(
    space: &WorldSpace,
    max_stereotypes: usize,
    budget: u64,
    workers: usize,
) -> SearchOutcome {
    let n = space.world_count();
    assert!(n <= 4, "the selection-function lattice explodes past four worlds");
    let masks = 1usize << n;
    let mut stats = SearchStats::default();
    let mut budget_left = budget;

    // stage one: enumerate selection functions, keep the cumulative ones
    let total_candidates: u64 = (1..masks)
        .map(|mask| (1u64 << (mask as u64).count_ones()) - 1)
        .product();
    let mut items: Vec<SelectionFunction> = Vec::new();
    let mut digit: Vec<u64> = vec![0; masks];
    'enumerate: loop {
        if budget_left == 0 {
            stats.unexamined_selection_functions = total_candidates - stats.selection_functions;
            break;
        }
        budget_left -= 1;
        stats.selection_functions += 1;
        let mut choice = vec![InfoSet::EMPTY; masks];
        for mask in 1..masks {
            choice[mask] = nth_nonempty_subset(mask as u64, digit[mask]);
        }
        let candidate = SelectionFunction {
            n_worlds: n,
            choice,
        };
        if candidate.is_cumulative() {
            stats.cumulative += 1;
            items.push(candidate);
        }
        // advance, last mask fastest
        let mut pos = masks;
        loop {
            if pos <= 1 {
                break 'enumerate;
            }
            pos -= 1;
            digit[pos] += 1;
            if digit[pos] < subset_count(pos as u64) {
                break;
            }
            digit[pos] = 0;
        }
    }

    // stage two: candidate stereotype sets, shared across items
    let sets = candidate_sets(n, max_stereotypes);
    let shapes: Vec<GraphShape> = sets
        .iter()
        .map(|set| GraphShape::build(n, set))
        .collect();

    let results = run_items(&items, &sets, &shapes, budget, budget_left, workers);

    // deterministic merge: re-apply the budget in canonical item order
    let mut found = Vec::new();
    let mut spent = budget - budget_left;
    for (i, _item) in items.iter().enumerate() {
        if spent >= budget {
            stats.unknown += (items.len() - i) as u64;
            break;
        }
        let (status, cost) = results[i].as_ref().expect("claimed before the cutoff");
        spent = spent.saturating_add(*cost);
        match status {
            ItemStatus::Representable => stats.representable += 1,
            ItemStatus::Unknown => stats.unknown += 1,
            ItemStatus::NonRepresentable(verdicts) => {
                stats.nonrepresentable += 1;
                found.push(NonRepresentable {
                    selection: items[i].clone(),
                    verdicts: verdicts.clone(),
                });
            }
        }
    }

    SearchOutcome {
        n_worlds: n,
        max_stereotypes,
        budget,
        found,
        stats,
    }
}

fn subset_count(mask: u64) -> u64 {
    (1u64 << mask.count_ones()) - 1
}

/// The `index`-th nonempty subset of `mask`, ascending by value.
fn nth_nonempty_subset(mask: u64, index: u64) -> InfoSet {
    InfoSet::from_mask(mask)
        .subsets()
        .filter(|s| !s.is_empty())
        .nth(index as usize)
        .expect("index below the subset count")
}

/// All stereotype sets of size 1..=bound over the nonempty subsets, sizes
/// ascending, lexicographic within a size.
fn candidate_sets(n_worlds: usize, max_stereotypes: usize) -> Vec<Vec<InfoSet>> {
    let universe: Vec<InfoSet> = InfoSet::nonempty_subsets(n_worlds).collect();
    let bound = max_stereotypes.min(universe.len());
    let mut sets = Vec::new();
    for size in 1..=bound {
        let mut indices: Vec<usize> = (0..size).collect();
        'combinations: loop {
            sets.push(indices.iter().map(|&i| universe[i]).collect());
            let mut pos = size;
            while pos > 0 {
                pos -= 1;
                // indices[pos] tops out at |universe| - size + pos
                if indices[pos] < universe.len() - size + pos {
                    indices[pos] += 1;
                    for later in pos + 1..size {
                        indices[later] = indices[later - 1] + 1;
                    }
                    continue 'combinations;
                }
            }
            break;
        }
    }
    sets
}

fn evaluate_item(
    selection: &SelectionFunction,
    sets: &[Vec<InfoSet>],
    shapes: &[GraphShape],
    per_item_budget: u64,
) -> (ItemStatus, u64) {
    let mut verdicts = Vec::with_capacity(sets.len());
    let mut remaining = per_item_budget;
    let mut saw_unknown = false;
    for (set, shape) in sets.iter().zip(shapes) {
        let result = representable_with_shape(selection, set, shape, &mut remaining);
        match &result {
            Representability::Yes(_) => {
                return (ItemStatus::Representable, per_item_budget - remaining);
            }
            Representability::Unknown => saw_unknown = true,
            Representability::No(_) => {}
        }
        verdicts.push(SetVerdict {
            stereotypes: set.clone(),
            result,
        });
    }
    let cost = per_item_budget - remaining;
    if saw_unknown {
        (ItemStatus::Unknown, cost)
    } else {
        (ItemStatus::NonRepresentable(verdicts), cost)
    }
}

/// Claims items in canonical order off an atomic counter while a shared
/// countdown stays positive. Every item the deterministic merge will accept
/// is guaranteed to have been computed: claims are ordered, so when item i is
/// claimed the countdown has only been charged for items before i. Workers
/// may overrun the countdown by the items still in flight when it crosses
/// zero; the merge discards that excess.
fn run_items(
    items: &[SelectionFunction],
    sets: &[Vec<InfoSet>],
    shapes: &[GraphShape],
    per_item_budget: u64,
    stage_budget: u64,
    workers: usize,
) -> Vec<Option<(ItemStatus, u64)>> {
    let workers = workers.max(1);
    let results: Mutex<Vec<Option<(ItemStatus, u64)>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let countdown = AtomicI64::new(stage_budget.min(i64::MAX as u64) as i64);
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if countdown.load(Ordering::Acquire) <= 0 {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let outcome = evaluate_item(&items[i], sets, shapes, per_item_budget);
                countdown.fetch_sub(outcome.1.min(i64::MAX as u64) as i64, Ordering::Release);
                results.lock().expect("result lock")[i] = Some(outcome);
            });
        }
    });
    results.into_inner().expect("result lock")
}
