//! The distance function d(F, S) between information sets and stereotypes.
//!
//! Four built-in families plus an explicit table:
//!
//! * `constant` — d is 0 everywhere; any single-stereotype space.
//! * `cardinality` — d(F, S) = |S − F| − |S ∩ F|; may be negative.
//! * `min-world` — stereotypes are singletons `{w}`; d(F, {w}) is the rank
//!   of `w` when `w ∈ F` and infinite otherwise.
//! * `partition-cover` — stereotype extents partition the worlds and
//!   d(F, S_i) = |S_i − F| + i/k, where `i` is the stereotype's position in
//!   the declared tie-break order and `k` the number of stereotypes.
//! * `table` — explicit values for every (set, stereotype) pair.

use crate::info::InfoSet;
use crate::ratio::DistanceValue;

/// A validated distance family, resolved against a fixed knowledge base:
/// ranks and tie-break positions are stored by index, table values densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceFamily {
    Constant,
    Cardinality,
    MinWorld {
        /// Rank by world index; injective over the space.
        rank: Vec<u64>,
    },
    PartitionCover {
        /// Tie-break position by stereotype index.
        position: Vec<usize>,
    },
    Table {
        /// Value for `(set, stereotype)` at index `set.mask() * k + stereotype`.
        values: Vec<DistanceValue>,
    },
}

impl DistanceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DistanceFamily::Constant => "constant",
            DistanceFamily::Cardinality => "cardinality",
            DistanceFamily::MinWorld { .. } => "min-world",
            DistanceFamily::PartitionCover { .. } => "partition-cover",
            DistanceFamily::Table { .. } => "table",
        }
    }

    /// Evaluates d(F, S) for stereotype index `s` with extent `extents[s]`.
    ///
    /// Total for every subset of the space, including the empty set. The
    /// family invariants (checked at load) guarantee the table lookup and
    /// the singleton unwrap below cannot fail.
    pub fn evaluate(&self, extents: &[InfoSet], f: InfoSet, s: usize) -> DistanceValue {
        let extent = extents[s];
        match self {
            DistanceFamily::Constant => DistanceValue::int(0),
            DistanceFamily::Cardinality => {
                let excluded = (extent - f).len() as i64;
                let shared = (extent & f).len() as i64;
                DistanceValue::int(excluded - shared)
            }
            DistanceFamily::MinWorld { rank } => {
                let world = extent.iter().next().expect("min-world extents are singletons");
                if f.contains(world) {
                    DistanceValue::int(rank[world] as i64)
                } else {
                    DistanceValue::Infinity
                }
            }
            DistanceFamily::PartitionCover { position } => {
                let k = position.len() as i64;
                let i = position[s] as i64;
                let excluded = (extent - f).len() as i64;
                DistanceValue::finite(excluded * k + i, k)
            }
            DistanceFamily::Table { values } => {
                values[f.mask() as usize * extents.len() + s]
            }
        }
    }

    /// Structural invariants relative to a knowledge base shape. Messages are
    /// wrapped into violations by the caller.
    pub fn check_against(&self, world_count: usize, extents: &[InfoSet]) -> Vec<String> {
        let mut problems = Vec::new();
        match self {
            DistanceFamily::Constant | DistanceFamily::Cardinality => {}
            DistanceFamily::MinWorld { rank } => {
                if rank.len() != world_count {
                    problems.push(format!(
                        "rank must be total: {} entries for {} worlds",
                        rank.len(),
                        world_count
                    ));
                } else {
                    let mut seen = rank.clone();
                    seen.sort_unstable();
                    if seen.windows(2).any(|w| w[0] == w[1]) {
                        problems.push("rank must be injective".to_string());
                    }
                }
                for (s, extent) in extents.iter().enumerate() {
                    if extent.len() != 1 {
                        problems.push(format!(
                            "min-world requires singleton extents; stereotype #{} has {} worlds",
                            s,
                            extent.len()
                        ));
                    }
                }
                if rank.iter().any(|&r| r > i64::MAX as u64) {
                    problems.push("rank values must fit in a signed 64-bit distance".to_string());
                }
            }
            DistanceFamily::PartitionCover { position } => {
                if position.len() != extents.len() {
                    problems.push(format!(
                        "order must cover exactly the {} stereotypes",
                        extents.len()
                    ));
                } else {
                    let mut seen = position.clone();
                    seen.sort_unstable();
                    if seen.iter().enumerate().any(|(i, &p)| i != p) {
                        problems.push("order positions must be a permutation".to_string());
                    }
                }
                let mut union = InfoSet::EMPTY;
                let mut overlap = false;
                for extent in extents {
                    if union.intersects(extent) {
                        overlap = true;
                    }
                    union = union | *extent;
                }
                if overlap || union != InfoSet::full(world_count) {
                    problems.push("stereotype extents must partition the worlds".to_string());
                }
            }
            DistanceFamily::Table { values } => {
                let expected = (1u128 << world_count) * extents.len() as u128;
                if values.len() as u128 != expected {
                    problems.push(format!(
                        "table must be total: {} values for {} (set, stereotype) pairs",
                        values.len(),
                        expected
                    ));
                }
            }
        }
        problems
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::Ratio;

    fn set(indices: &[usize]) -> InfoSet {
        InfoSet::from_indices(indices.iter().copied())
    }

    #[test]
    fn cardinality_of_identical_sets_is_negated_size() {
        // d(F, F) = -|F|
        let extents = vec![set(&[1, 4])];
        let f = set(&[1, 4]);
        let d = DistanceFamily::Cardinality.evaluate(&extents, f, 0);
        assert_eq!(d, DistanceValue::int(-2));
    }

    #[test]
    fn min_world_rank_or_infinity() {
        // five singleton stereotypes over w1..w5 (indices 0..4), rank(wn) = n
        let extents: Vec<InfoSet> = (0..5).map(InfoSet::singleton).collect();
        let rank: Vec<u64> = (1..=5).collect();
        let family = DistanceFamily::MinWorld { rank };
        let f = set(&[2, 4]); // {w3, w5}
        assert_eq!(family.evaluate(&extents, f, 2), DistanceValue::int(3));
        assert_eq!(family.evaluate(&extents, f, 3), DistanceValue::Infinity);
    }

    #[test]
    fn partition_cover_demo_distances() {
        // S_0 = {w0,w1}, S_1 = {w2,w3}, S_2 = {w4,w5}; F = {w0,w1,w2}
        let extents = vec![set(&[0, 1]), set(&[2, 3]), set(&[4, 5])];
        let family = DistanceFamily::PartitionCover {
            position: vec![0, 1, 2],
        };
        let f = set(&[0, 1, 2]);
        // oracle: |S_i - F| + i/k computed by independent set arithmetic
        for (i, extent) in extents.iter().enumerate() {
            let excluded = (*extent - f).len() as i64;
            let expected =
                DistanceValue::Finite(Ratio::new(excluded, 1).add(&Ratio::new(i as i64, 3)));
            assert_eq!(family.evaluate(&extents, f, i), expected);
        }
        assert_eq!(family.evaluate(&extents, f, 0), DistanceValue::int(0));
        assert_eq!(family.evaluate(&extents, f, 1), DistanceValue::finite(4, 3));
        assert_eq!(family.evaluate(&extents, f, 2), DistanceValue::finite(8, 3));
    }

    #[test]
    fn partition_cover_values_never_collide_across_stereotypes() {
        let extents = vec![set(&[0]), set(&[1, 2]), set(&[3])];
        let family = DistanceFamily::PartitionCover {
            position: vec![0, 1, 2],
        };
        for f in InfoSet::all_subsets(4) {
            let values: Vec<DistanceValue> =
                (0..3).map(|s| family.evaluate(&extents, f, s)).collect();
            for a in 0..3 {
                for b in a + 1..3 {
                    assert_ne!(values[a], values[b], "F = {}", f);
                }
            }
        }
    }

    #[test]
    fn finiteness_guarantees_per_family() {
        // constant, cardinality, and partition-cover never reach infinity;
        // min-world is infinite exactly off the stereotype's world
        let extents = vec![set(&[0, 1]), set(&[2])];
        let partition = DistanceFamily::PartitionCover {
            position: vec![0, 1],
        };
        for f in InfoSet::all_subsets(3) {
            for s in 0..2 {
                assert!(DistanceFamily::Constant.evaluate(&extents, f, s).is_finite());
                assert!(DistanceFamily::Cardinality.evaluate(&extents, f, s).is_finite());
                assert!(partition.evaluate(&extents, f, s).is_finite());
            }
        }
        let singletons: Vec<InfoSet> = (0..3).map(InfoSet::singleton).collect();
        let ranked = DistanceFamily::MinWorld {
            rank: vec![0, 1, 2],
        };
        for f in InfoSet::all_subsets(3) {
            for (s, extent) in singletons.iter().enumerate() {
                let expect_infinite = !f.intersects(extent);
                assert_eq!(
                    ranked.evaluate(&singletons, f, s),
                    if expect_infinite {
                        DistanceValue::Infinity
                    } else {
                        DistanceValue::int(s as i64)
                    }
                );
            }
        }
    }

    #[test]
    fn structural_checks() {
        let extents = vec![set(&[0, 1]), set(&[1])];
        let family = DistanceFamily::PartitionCover {
            position: vec![0, 1],
        };
        assert!(!family.check_against(2, &extents).is_empty());

        let ok = DistanceFamily::PartitionCover {
            position: vec![1, 0],
        };
        assert!(ok.check_against(2, &[set(&[0]), set(&[1])]).is_empty());

        let bad_rank = DistanceFamily::MinWorld { rank: vec![1, 1] };
        assert!(!bad_rank.check_against(2, &[set(&[0]), set(&[1])]).is_empty());

        let short_table = DistanceFamily::Table {
            values: vec![DistanceValue::int(0); 7],
        };
        assert!(!short_table.check_against(2, &[set(&[0]), set(&[1])]).is_empty());
    }
}
