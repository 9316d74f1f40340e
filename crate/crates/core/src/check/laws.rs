//! Checkers for the distance-side laws: unique minima, the combined
//! monotonicity law on d, its union/minimum strengthening, and the
//! tree-structure condition on stereotype sets.

use std::time::Instant;

use super::{CheckError, CheckReport, Selection, SweepLimits, Witness};
use crate::info::InfoSet;
use crate::kb::KnowledgeBase;

/// Unique-minimum check: every nonempty set must pick exactly one closest
/// stereotype. A witness lists the set and all co-minimal stereotypes.
pub fn check_assumption_zero(kb: &KnowledgeBase) -> CheckReport {
    let start = Instant::now();
    let n = kb.space().world_count();
    let selection = Selection::build(kb);
    let witnesses = selection
        .ties
        .iter()
        .map(|(f, tied)| {
            Witness::new().set("F", kb.space(), *f).names(
                "co-minimal",
                tied.iter()
                    .map(|&s| kb.stereotype(s).name().to_string())
                    .collect(),
            )
        })
        .collect();
    CheckReport::finish(
        "assumption-zero",
        format!("all {} nonempty information sets", (1u64 << n) - 1),
        witnesses,
        (1u64 << n) - 1,
        start,
    )
}

/// The combined monotonicity law on d: whenever F′∩S′ ⊆ F∩S and
/// S−F ⊆ S′−F′, the distance d(F, S) must not exceed d(F′, S′).
/// Quantifies over all subset pairs and all stereotype pairs.
pub fn check_eq2(kb: &KnowledgeBase, limits: &SweepLimits) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let n = kb.space().world_count();
    let k = kb.stereotype_count();
    let estimated = (1u64 << n).pow(2) * (k as u64).pow(2);
    limits.admit("eq2", estimated)?;

    let selection = Selection::build(kb);
    let extents = kb.extents();
    let space = kb.space();
    let mut witnesses = Vec::new();
    let mut cases = 0u64;
    for f in InfoSet::all_subsets(n) {
        for (s, s_extent) in extents.iter().enumerate() {
            let inter = f & *s_extent;
            let diff = *s_extent - f;
            let d_fs = selection.table.get(f, s);
            for f2 in InfoSet::all_subsets(n) {
                for (s2, s2_extent) in extents.iter().enumerate() {
                    cases += 1;
                    let inter2 = f2 & *s2_extent;
                    let diff2 = *s2_extent - f2;
                    if inter2.is_subset_of(&inter) && diff.is_subset_of(&diff2) {
                        let d_f2s2 = selection.table.get(f2, s2);
                        if d_fs > d_f2s2 {
                            witnesses.push(
                                Witness::new()
                                    .set("F", space, f)
                                    .name("S", kb.stereotype(s).name())
                                    .set("F'", space, f2)
                                    .name("S'", kb.stereotype(s2).name())
                                    .distance("d(F,S)", d_fs)
                                    .distance("d(F',S')", d_f2s2),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(CheckReport::finish(
        "eq2",
        format!(
            "all quadruples (F, S, F', S') over {} subsets and {} stereotypes",
            1u64 << n,
            k
        ),
        witnesses,
        cases,
        start,
    ))
}

/// The union law in its operational, distance-level form:
/// d(F ∪ F', S) = min(d(F, S), d(F', S)) for all subsets F, F' and
/// stereotypes S.
pub fn check_assumption_four(
    kb: &KnowledgeBase,
    limits: &SweepLimits,
) -> Result<CheckReport, CheckError> {
    let start = Instant::now();
    let n = kb.space().world_count();
    let k = kb.stereotype_count();
    let estimated = (1u64 << n).pow(2) * k as u64;
    limits.admit("assumption-four", estimated)?;

    let selection = Selection::build(kb);
    let space = kb.space();
    let mut witnesses = Vec::new();
    let mut cases = 0u64;
    for f in InfoSet::all_subsets(n) {
        for f2 in InfoSet::all_subsets(n) {
            let union = f | f2;
            for s in 0..k {
                cases += 1;
                let lhs = selection.table.get(union, s);
                let rhs = selection.table.get(f, s).min(selection.table.get(f2, s));
                if lhs != rhs {
                    witnesses.push(
                        Witness::new()
                            .set("F", space, f)
                            .set("F'", space, f2)
                            .name("S", kb.stereotype(s).name())
                            .distance("d(F∪F',S)", lhs)
                            .distance("min", rhs),
                    );
                }
            }
        }
    }
    Ok(CheckReport::finish(
        "assumption-four",
        format!(
            "all triples (F, F', S) over {} subsets and {} stereotypes",
            1u64 << n,
            k
        ),
        witnesses,
        cases,
        start,
    ))
}

/// Tree-structure condition: any two stereotypes with a nonempty
/// intersection must be comparable by inclusion.
pub fn check_tree_structure(kb: &KnowledgeBase) -> CheckReport {
    let start = Instant::now();
    let k = kb.stereotype_count();
    let mut witnesses = Vec::new();
    let mut cases = 0u64;
    for s in 0..k {
        for t in s + 1..k {
            cases += 1;
            let a = kb.stereotype(s).extent();
            let b = kb.stereotype(t).extent();
            if a.intersects(&b) && !a.is_subset_of(&b) && !b.is_subset_of(&a) {
                witnesses.push(
                    Witness::new()
                        .name("S", kb.stereotype(s).name())
                        .name("T", kb.stereotype(t).name()),
                );
            }
        }
    }
    CheckReport::finish(
        "tree-structure",
        format!("all {} unordered stereotype pairs", cases),
        witnesses,
        cases,
        start,
    )
}
