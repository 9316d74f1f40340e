//! Built-in demo knowledge bases and deterministic generators.
//!
//! The `corpus/` files at the repository root ship with the tool and are
//! addressable as `builtin:<name>` on the command line. The generator
//! functions reproduce the same four shapes at any desk-scale world count,
//! plus seeded random table bases for regression sweeps. Every generator is
//! deterministic in its arguments.

use std::collections::BTreeMap;

use crate::distance::DistanceFamily;
use crate::info::InfoSet;
use crate::kb::{KnowledgeBase, Stereotype};
use crate::ratio::DistanceValue;
use crate::space::WorldSpace;

const BUILTINS: [(&str, &str); 6] = [
    ("example1", include_str!("../../../corpus/example1.json")),
    ("example2", include_str!("../../../corpus/example2.json")),
    ("example3", include_str!("../../../corpus/example3.json")),
    ("example4", include_str!("../../../corpus/example4.json")),
    ("eq2-violation", include_str!("../../../corpus/eq2-violation.json")),
    ("tie", include_str!("../../../corpus/tie.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(name, _)| *name).collect()
}

pub fn builtin_json(name: &str) -> Option<&'static str> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

/// Loads a built-in base by name.
pub fn builtin(name: &str) -> Option<KnowledgeBase> {
    builtin_json(name).map(|text| {
        KnowledgeBase::from_json(text).expect("embedded corpus documents are valid")
    })
}

/// A space of `n` worlds named `w0..` over the fewest atoms that can tell
/// them apart; world `wK`'s valuation reads `K` in binary, first atom least
/// significant.
pub fn sized_space(n_worlds: usize) -> WorldSpace {
    assert!((1..=64).contains(&n_worlds));
    let atom_names = ["a", "b", "c", "d", "e", "f"];
    let n_atoms = atom_names
        .iter()
        .enumerate()
        .find(|(i, _)| 1usize << (i + 1) >= n_worlds)
        .map(|(i, _)| i + 1)
        .expect("64 worlds fit in six atoms");
    let atoms: Vec<String> = atom_names[..n_atoms].iter().map(|a| a.to_string()).collect();
    let worlds = (0..n_worlds)
        .map(|k| {
            let valuation: BTreeMap<String, bool> = atoms
                .iter()
                .enumerate()
                .map(|(i, atom)| (atom.clone(), k & (1 << i) != 0))
                .collect();
            (format!("w{}", k), valuation)
        })
        .collect();
    WorldSpace::new(atoms, worlds).expect("sized spaces are well-formed")
}

/// One all-covering stereotype under the constant distance: inference is
/// classical. The `builtin:example1` shape at any size.
pub fn constant_kb(n_worlds: usize) -> KnowledgeBase {
    let space = sized_space(n_worlds);
    let full = space.full_set();
    KnowledgeBase::new(
        space,
        vec![Stereotype::new("s0", full)],
        DistanceFamily::Constant,
    )
    .expect("well-formed")
}

/// Every nonempty subset as a stereotype under the cardinality distance:
/// each set selects itself. The `builtin:example2` shape at any size.
pub fn classical_kb(n_worlds: usize) -> KnowledgeBase {
    let space = sized_space(n_worlds);
    let stereotypes = InfoSet::nonempty_subsets(n_worlds)
        .map(|set| Stereotype::new(format!("s{}", set.mask()), set))
        .collect();
    KnowledgeBase::new(space, stereotypes, DistanceFamily::Cardinality).expect("well-formed")
}

/// Singleton stereotypes ranked by world index under the min-world distance:
/// every set jumps to its least world. The `builtin:example3` shape at any
/// size.
pub fn ranked_kb(n_worlds: usize) -> KnowledgeBase {
    let space = sized_space(n_worlds);
    let stereotypes = (0..n_worlds)
        .map(|w| Stereotype::new(format!("s{}", w), InfoSet::singleton(w)))
        .collect();
    KnowledgeBase::new(
        space,
        stereotypes,
        DistanceFamily::MinWorld {
            rank: (0..n_worlds as u64).collect(),
        },
    )
    .expect("well-formed")
}

/// Consecutive world pairs partition the space (a final singleton when the
/// count is odd) under the partition-cover distance with declaration-order
/// tie-breaks. The `builtin:example4` shape at any size.
pub fn partition_kb(n_worlds: usize) -> KnowledgeBase {
    let space = sized_space(n_worlds);
    let mut stereotypes: Vec<Stereotype> = Vec::new();
    let mut w = 0;
    while w < n_worlds {
        let extent = if w + 1 < n_worlds {
            InfoSet::from_indices([w, w + 1])
        } else {
            InfoSet::singleton(w)
        };
        stereotypes.push(Stereotype::new(format!("s{}", stereotypes.len()), extent));
        w += 2;
    }
    let position = (0..stereotypes.len()).collect();
    KnowledgeBase::new(
        space,
        stereotypes,
        DistanceFamily::PartitionCover { position },
    )
    .expect("well-formed")
}

/// The four demo shapes at one size, in builtin order.
pub fn demo_family(n_worlds: usize) -> Vec<KnowledgeBase> {
    vec![
        constant_kb(n_worlds),
        classical_kb(n_worlds),
        ranked_kb(n_worlds),
        partition_kb(n_worlds),
    ]
}

// SplitMix64: deterministic forever, no external dependency.
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Rng {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_extents(rng: &mut Rng, n_worlds: usize, n_stereotypes: usize) -> Vec<InfoSet> {
    let full = InfoSet::full(n_worlds).mask();
    let mut extents: Vec<InfoSet> = Vec::with_capacity(n_stereotypes);
    while extents.len() < n_stereotypes {
        let mask = 1 + rng.below(full);
        let set = InfoSet::from_mask(mask);
        if !extents.contains(&set) {
            extents.push(set);
        }
    }
    extents
}

/// A random table base with a unique minimum at every nonempty set: each
/// row gets pairwise-distinct values (occasionally crowned with an infinity).
/// No structural law beyond unique minima is guaranteed.
pub fn random_table_kb(seed: u64, n_worlds: usize, n_stereotypes: usize) -> KnowledgeBase {
    assert!((1..(1usize << n_worlds)).contains(&n_stereotypes));
    let mut rng = Rng::new(seed);
    let space = sized_space(n_worlds);
    let extents = random_extents(&mut rng, n_worlds, n_stereotypes);
    let k = n_stereotypes;
    let mut values = Vec::with_capacity((1usize << n_worlds) * k);
    for _mask in 0..(1u64 << n_worlds) {
        // a shuffled 0..k plus a common offset keeps rows duplicate-free
        let offset = rng.below(17) as i64 - 8;
        let den = 1 + rng.below(3) as i64;
        let mut row: Vec<i64> = (0..k as i64).collect();
        for i in (1..row.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            row.swap(i, j);
        }
        let crown_max = rng.below(8) == 0;
        for &v in &row {
            if crown_max && v == k as i64 - 1 {
                values.push(DistanceValue::Infinity);
            } else {
                values.push(DistanceValue::finite(v + offset, den));
            }
        }
    }
    let stereotypes = extents
        .into_iter()
        .enumerate()
        .map(|(s, extent)| Stereotype::new(format!("s{}", s), extent))
        .collect();
    KnowledgeBase::new(space, stereotypes, DistanceFamily::Table { values })
        .expect("well-formed")
}

/// A random table base satisfying the distance monotonicity law by
/// construction: d(F, S) adds a positive weight for every world missing from
/// F∩S and one for every world of S−F, so growing the intersection can only
/// shrink the distance and growing the leftover can only grow it. Seeds are
/// retried internally until the unique-minimum check also passes.
pub fn random_monotone_kb(seed: u64, n_worlds: usize, n_stereotypes: usize) -> KnowledgeBase {
    assert!((1..(1usize << n_worlds)).contains(&n_stereotypes));
    for attempt in 0..1000u64 {
        let mut rng = Rng::new(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(attempt));
        let space = sized_space(n_worlds);
        let extents = random_extents(&mut rng, n_worlds, n_stereotypes);
        let missing_weight: Vec<u64> = (0..n_worlds).map(|_| 1 + rng.below(997)).collect();
        let leftover_weight: Vec<u64> = (0..n_worlds).map(|_| 1 + rng.below(997)).collect();
        let k = n_stereotypes;
        let mut values = Vec::with_capacity((1usize << n_worlds) * k);
        for mask in 0..(1u64 << n_worlds) {
            let f = InfoSet::from_mask(mask);
            for extent in &extents {
                let inter = f & *extent;
                let missing: u64 = (0..n_worlds)
                    .filter(|&w| !inter.contains(w))
                    .map(|w| missing_weight[w])
                    .sum();
                let leftover: u64 = (*extent - f).iter().map(|w| leftover_weight[w]).sum();
                values.push(DistanceValue::int((missing + leftover) as i64));
            }
        }
        let stereotypes = extents
            .into_iter()
            .enumerate()
            .map(|(s, extent)| Stereotype::new(format!("s{}", s), extent))
            .collect();
        let kb = KnowledgeBase::new(space, stereotypes, DistanceFamily::Table { values })
            .expect("well-formed");
        if crate::check::check_assumption_zero(&kb).verdict == crate::check::Verdict::Pass {
            return kb;
        }
    }
    panic!("no tie-free weight assignment within the retry bound");
}
