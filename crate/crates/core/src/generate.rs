//! Named example posets, the circle family, exhaustive enumeration up to
//! isomorphism and seeded random posets.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poset::{ElemSet, Poset};

fn build(labels: &[&str], pairs: &[(&str, &str)]) -> Poset {
    Poset::from_covers(labels, pairs).expect("built-in example is a valid poset")
}

/// The ∨ poset: `q` below `p1` and `p2`.
pub fn vee() -> Poset {
    build(&["q", "p1", "p2"], &[("q", "p1"), ("q", "p2")])
}

/// The four-point circle: minima `x1`, `x3` below maxima `x2`, `x4`.
pub fn p4s1() -> Poset {
    build(
        &["x1", "x2", "x3", "x4"],
        &[("x1", "x2"), ("x1", "x4"), ("x3", "x2"), ("x3", "x4")],
    )
}

/// The six-point sphere: `x1, x3 ≺ x2, x4 ≺ x5, x6`, complete between layers.
pub fn p6s2() -> Poset {
    build(
        &["x1", "x2", "x3", "x4", "x5", "x6"],
        &[
            ("x1", "x2"),
            ("x1", "x4"),
            ("x3", "x2"),
            ("x3", "x4"),
            ("x2", "x5"),
            ("x2", "x6"),
            ("x4", "x5"),
            ("x4", "x6"),
        ],
    )
}

/// The forest `x1 ≺ x2 ≺ {x3, x4}`.
pub fn fork() -> Poset {
    build(
        &["x1", "x2", "x3", "x4"],
        &[("x1", "x2"), ("x2", "x3"), ("x2", "x4")],
    )
}

/// The chain `c1 ≺ c2 ≺ … ≺ cn`.
pub fn chain(n: usize) -> Poset {
    let labels: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Poset::from_index_pairs(labels, &pairs).expect("chain")
}

/// `n` pairwise incomparable points `a1 … an`.
pub fn antichain(n: usize) -> Poset {
    let labels: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    Poset::from_index_pairs(labels, &[]).expect("antichain")
}

/// The 2N-point circle: minima `m1..mN`, maxima `t1..tN`, with `mi` below
/// `ti` and `t(i-1)` cyclically. `circle(2)` is isomorphic to [`p4s1`].
pub fn circle(n: usize) -> Poset {
    assert!(n >= 2, "circle family starts at N = 2");
    let mut labels: Vec<String> = (1..=n).map(|i| format!("m{i}")).collect();
    labels.extend((1..=n).map(|i| format!("t{i}")));
    let mut pairs = Vec::new();
    for i in 0..n {
        pairs.push((i, n + i));
        pairs.push((i, n + (i + n - 1) % n));
    }
    Poset::from_index_pairs(labels, &pairs).expect("circle")
}

type Profile = (Vec<(usize, usize)>, usize);

/// One representative of every isomorphism class of posets on `n` points,
/// labelled `v1 … vn`.
///
/// Each poset on `n` points arises from one on `n − 1` points by adjoining a
/// new maximal element above a down-set, so classes are grown level by level
/// and deduplicated by isomorphism within invariant buckets.
pub fn all_posets_up_to_iso(n: usize) -> Vec<Poset> {
    let mut reps = vec![Poset::empty()];
    for size in 1..=n {
        let mut next: Vec<Poset> = Vec::new();
        // (profile, cover count) -> indices into `next`
        let mut buckets: HashMap<Profile, Vec<usize>> = HashMap::new();
        for q in &reps {
            for down in down_sets(q) {
                let cand = extend(q, &down, size);
                let key = (cand.profile(), cand.covers().len());
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().any(|&i| next[i].is_isomorphic(&cand)) {
                    continue;
                }
                bucket.push(next.len());
                next.push(cand);
            }
        }
        reps = next;
    }
    reps
}

fn down_sets(q: &Poset) -> Vec<ElemSet> {
    // down-sets are complements of up-sets
    q.all_closed_sets(usize::MAX)
        .expect("no bound")
        .sets
        .iter()
        .map(|s| q.complement(s))
        .collect()
}

fn extend(q: &Poset, down: &ElemSet, size: usize) -> Poset {
    let labels: Vec<String> = (1..=size).map(|i| format!("v{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = q.covers().to_vec();
    let new = size - 1;
    pairs.extend(down.iter().map(|&x| (x, new)));
    Poset::from_index_pairs(labels, &pairs).expect("extension by a maximal element")
}

/// `count` random posets with 1 to `max_n` points from a fixed seed.
///
/// Each poset orients a random graph along the index order and takes the
/// transitive closure; edge density varies per sample.
pub fn random_posets(seed: u64, count: usize, max_n: usize) -> Vec<Poset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let density: f64 = rng.gen_range(0.1..0.6);
            let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(density) {
                        pairs.push((i, j));
                    }
                }
            }
            Poset::from_index_pairs(labels, &pairs).expect("index order is acyclic")
        })
        .collect()
}

/// The named examples shipped with the toolkit.
pub fn named_examples() -> Vec<(&'static str, Poset)> {
    vec![
        ("vee", vee()),
        ("p4s1", p4s1()),
        ("p6s2", p6s2()),
        ("fork", fork()),
        ("chain3", chain(3)),
        ("antichain3", antichain(3)),
        ("circle3", circle(3)),
    ]
}
