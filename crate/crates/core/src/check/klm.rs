//! Checkers for the consequence-relation laws (the KLM-style rules) and for
//! the two selection-stability theorems.
//!
//! Quantification is set-level: because worlds have pairwise-distinct
//! valuations, every set of worlds is the model set of some formula, so the
//! set sweeps cover exactly the formula-level statements. The left-equivalence
//! check still exercises the formula route end to end as a sanity path.
//!
//! All of these presuppose unique minima; when the unique-minimum check fails
//! the report is NOT_APPLICABLE rather than a vacuous PASS.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::{
    check_assumption_four, check_assumption_zero, check_eq2, CheckError, CheckReport, Selection,
    SweepLimits, Verdict, Witness,
};
use crate::infer::nm_consequences;
use crate::info::InfoSet;
use crate::kb::KnowledgeBase;
use crate::logic::Formula;

/// The consequence-relation properties the checker knows how to sweep.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum KlmProperty {
    Reflexivity,
    /// Left logical equivalence: equal model sets, identical results.
    Lle,
    /// Right weakening + and, as entailment transport through weakening.
    RwAnd,
    Cut,
    CautiousMonotony,
    /// Cut and cautious monotony jointly.
    Cumulativity,
    Or,
}

impl KlmProperty {
    pub const ALL: [KlmProperty; 7] = [
        KlmProperty::Reflexivity,
        KlmProperty::Lle,
        KlmProperty::RwAnd,
        KlmProperty::Cut,
        KlmProperty::CautiousMonotony,
        KlmProperty::Cumulativity,
        KlmProperty::Or,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            KlmProperty::Reflexivity => "reflexivity",
            KlmProperty::Lle => "lle",
            KlmProperty::RwAnd => "rw-and",
            KlmProperty::Cut => "cut",
            KlmProperty::CautiousMonotony => "cautious-monotony",
            KlmProperty::Cumulativity => "cumulativity",
            KlmProperty::Or => "or",
        }
    }

    fn property_id(&self) -> String {
        format!("klm:{}", self.name())
    }
}

impl fmt::Display for KlmProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KlmProperty {
    type Err = String;

    fn from_str(s: &str) -> Result<KlmProperty, String> {
        KlmProperty::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| {
                format!(
                    "unknown KLM property `{}` (expected one of {})",
                    s,
                    KlmProperty::ALL.map(|p| p.name()).join(", ")
                )
            })
    }
}

fn applicable_selection(
    kb: &KnowledgeBase,
    property: &str,
    start: Instant,
) -> Result<Selection, CheckReport> {
    let zero = check_assumption_zero(kb);
    if zero.verdict != Verdict::Pass {
        return Err(CheckReport::not_applicable(
            property,
            "skipped: the unique-minimum check fails on this base".to_string(),
            start,
        ));
    }
    Ok(Selection::build(kb))
}

/// Sweeps one consequence-relation property over every instantiation.
pub fn check_klm(
    kb: &KnowledgeBase,
    property: KlmProperty,
    limits: &SweepLimits,
) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let n = kb.space().world_count();
    let id = property.property_id();
    let estimated = match property {
        KlmProperty::Reflexivity | KlmProperty::Lle => 1u64 << n,
        KlmProperty::RwAnd => 1u64 << n.saturating_mul(3).min(63),
        KlmProperty::Cut | KlmProperty::CautiousMonotony | KlmProperty::Cumulativity => {
            3u64.saturating_pow(n as u32)
        }
        KlmProperty::Or => (1u64 << n).pow(2),
    };
    limits.admit(&id, estimated)?;

    let selection = match applicable_selection(kb, &id, start) {
        Ok(selection) => selection,
        Err(report) => return Ok(report),
    };
    let space = kb.space();
    let mut witnesses = Vec::new();
    let mut cases = 0u64;
    let universe;

    match property {
        KlmProperty::Reflexivity => {
            universe = format!("all {} nonempty information sets", (1u64 << n) - 1);
            for f in InfoSet::nonempty_subsets(n) {
                cases += 1;
                let conseq = selection.consequences(kb, f);
                if !conseq.is_subset_of(&f) {
                    witnesses.push(
                        Witness::new().set("F", space, f).set("F'", space, conseq),
                    );
                }
            }
        }
        KlmProperty::Lle => {
            // two syntactically different formulas per set, pushed through the
            // full inference path rather than the precomputed table
            universe = format!(
                "canonical and double-negated formulas for all {} nonempty sets",
                (1u64 << n) - 1
            );
            for f in InfoSet::nonempty_subsets(n) {
                cases += 1;
                let alpha = space.canonical_formula(f);
                let variant = Formula::not(Formula::not(alpha.clone()));
                let left = nm_consequences(kb, space.models(&alpha)).expect("unique minima");
                let right = nm_consequences(kb, space.models(&variant)).expect("unique minima");
                if left != right {
                    witnesses.push(
                        Witness::new()
                            .set("models", space, f)
                            .set("F' via alpha", space, left.consequences)
                            .set("F' via variant", space, right.consequences),
                    );
                }
            }
        }
        KlmProperty::RwAnd => {
            // entailment transport: F |~ B and B ⊆ C imply F |~ C; deductive
            // closure of the consequence set in set form
            universe = "all (F, B, C) with F nonempty, F' ⊆ B ⊆ C".to_string();
            for f in InfoSet::nonempty_subsets(n) {
                let conseq = selection.consequences(kb, f);
                for b in InfoSet::all_subsets(n) {
                    if !conseq.is_subset_of(&b) {
                        continue;
                    }
                    for c in InfoSet::all_subsets(n) {
                        if !b.is_subset_of(&c) {
                            continue;
                        }
                        cases += 1;
                        if !conseq.is_subset_of(&c) {
                            witnesses.push(
                                Witness::new()
                                    .set("F", space, f)
                                    .set("B", space, b)
                                    .set("C", space, c),
                            );
                        }
                    }
                }
            }
        }
        KlmProperty::Cut | KlmProperty::CautiousMonotony | KlmProperty::Cumulativity => {
            universe = "all (F, G) with F nonempty and F∩S^F ⊆ G ⊆ F".to_string();
            for f in InfoSet::nonempty_subsets(n) {
                let conseq_f = selection.consequences(kb, f);
                for g in f.subsets() {
                    if !conseq_f.is_subset_of(&g) {
                        continue;
                    }
                    cases += 1;
                    let conseq_g = selection.consequences(kb, g);
                    let cut_broken = !conseq_f.is_subset_of(&conseq_g);
                    let cm_broken = !conseq_g.is_subset_of(&conseq_f);
                    let broken = match property {
                        KlmProperty::Cut => cut_broken,
                        KlmProperty::CautiousMonotony => cm_broken,
                        _ => cut_broken || cm_broken,
                    };
                    if broken {
                        witnesses.push(
                            Witness::new()
                                .set("F", space, f)
                                .set("G", space, g)
                                .set("F∩S^F", space, conseq_f)
                                .set("G∩S^G", space, conseq_g),
                        );
                    }
                }
            }
        }
        KlmProperty::Or => {
            universe = "all pairs (F, G) of nonempty information sets".to_string();
            for f in InfoSet::nonempty_subsets(n) {
                let conseq_f = selection.consequences(kb, f);
                for g in InfoSet::nonempty_subsets(n) {
                    cases += 1;
                    let conseq_g = selection.consequences(kb, g);
                    let union = f | g;
                    let conseq_union = selection.consequences(kb, union);
                    if !conseq_union.is_subset_of(&(conseq_f | conseq_g)) {
                        witnesses.push(
                            Witness::new()
                                .set("F", space, f)
                                .set("G", space, g)
                                .set("F∩S^F", space, conseq_f)
                                .set("G∩S^G", space, conseq_g)
                                .set("(F∪G)∩S^(F∪G)", space, conseq_union),
                        );
                    }
                }
            }
        }
    }

    Ok(CheckReport::finish(&id, universe, witnesses, cases, start))
}

/// Selection stability under shrinking: for every nonempty F and every
/// nonempty F' between F∩S^F and F, the same stereotype must be selected.
pub fn verify_theorem1(
    kb: &KnowledgeBase,
    limits: &SweepLimits,
) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let n = kb.space().world_count();
    limits.admit("theorem-1", 3u64.saturating_pow(n as u32))?;
    let selection = match applicable_selection(kb, "theorem-1", start) {
        Ok(selection) => selection,
        Err(report) => return Ok(report),
    };
    let space = kb.space();
    let mut witnesses = Vec::new();
    let mut cases = 0u64;
    for f in InfoSet::nonempty_subsets(n) {
        let chosen = selection.chosen[f.mask() as usize];
        let conseq = f & kb.stereotype(chosen).extent();
        for f2 in f.subsets() {
            if f2.is_empty() || !conseq.is_subset_of(&f2) {
                continue;
            }
            cases += 1;
            let chosen2 = selection.chosen[f2.mask() as usize];
            if chosen2 != chosen {
                witnesses.push(
                    Witness::new()
                        .set("F", space, f)
                        .set("F'", space, f2)
                        .name("S^F", kb.stereotype(chosen).name())
                        .name("S^F'", kb.stereotype(chosen2).name()),
                );
            }
        }
    }
    Ok(CheckReport::finish(
        "theorem-1",
        "all (F, F') with F nonempty and F∩S^F ⊆ F' ⊆ F, F' nonempty".to_string(),
        witnesses,
        cases,
        start,
    ))
}

/// Selection stability under union: when two nonempty sets select the same
/// stereotype, so must their union. Presupposes the unique-minimum,
/// monotonicity, and union-law checks; reports NOT_APPLICABLE when any of
/// them fails.
pub fn verify_theorem2(
    kb: &KnowledgeBase,
    limits: &SweepLimits,
) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let n = kb.space().world_count();
    limits.admit("theorem-2", (1u64 << n).pow(2))?;

    let zero = check_assumption_zero(kb);
    if zero.verdict != Verdict::Pass {
        return Ok(CheckReport::not_applicable(
            "theorem-2",
            "skipped: the unique-minimum check fails on this base".to_string(),
            start,
        ));
    }
    for (precondition, report) in [
        ("eq2", check_eq2(kb, limits)?),
        ("assumption-four", check_assumption_four(kb, limits)?),
    ] {
        if report.verdict != Verdict::Pass {
            return Ok(CheckReport::not_applicable(
                "theorem-2",
                format!("skipped: the {} check fails on this base", precondition),
                start,
            ));
        }
    }

    let selection = Selection::build(kb);
    let space = kb.space();
    let mut witnesses = Vec::new();
    let mut cases = 0u64;
    for f in InfoSet::nonempty_subsets(n) {
        let chosen = selection.chosen[f.mask() as usize];
        for f2 in InfoSet::nonempty_subsets(n) {
            if selection.chosen[f2.mask() as usize] != chosen {
                continue;
            }
            cases += 1;
            let union = f | f2;
            let chosen_union = selection.chosen[union.mask() as usize];
            if chosen_union != chosen {
                witnesses.push(
                    Witness::new()
                        .set("F", space, f)
                        .set("F'", space, f2)
                        .name("S^F", kb.stereotype(chosen).name())
                        .name("S^(F∪F')", kb.stereotype(chosen_union).name()),
                );
            }
        }
    }
    Ok(CheckReport::finish(
        "theorem-2",
        "all pairs (F, F') of nonempty sets with S^F = S^F'".to_string(),
        witnesses,
        cases,
        start,
    ))
}
