//! From a finite poset to a Bratteli diagram whose primitive spectrum is
//! that poset.
//!
//! The closed sets are scheduled as `K1 = P, K2, …`. At level `n` the sets
//! `K1..Kn` cut the poset into atoms `Y(n, j)`, and `F(n, j)` is the smallest
//! member of the union/intersection closure `Kn′` containing `Y(n, j)`. Level
//! `n` has one block per atom; block `α` of level `n` feeds block `β` of
//! level `n + 1` (multiplicity 1) iff `Y(n, α)` meets `F(n + 1, β)`.
//!
//! Diagram level `k` (0-based) corresponds to `K_{k+1}`.

use std::collections::BTreeSet;

use crate::algebra::AlgebraExpr;
use crate::behncke_leptin;
use crate::bratteli::{Diagram, Tail};
use crate::error::{Error, Result};
use crate::poset::{ElemSet, Poset};

/// The data of one construction level, indexed like `K_n` (from 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelPartition {
    pub n: usize,
    pub kn: Vec<ElemSet>,
    pub kn_prime: Vec<ElemSet>,
    pub y: Vec<ElemSet>,
    pub f: Vec<ElemSet>,
}

/// `K1 = P`, then the closures of single points other than `P`, then every
/// other nonempty closed set; each group in canonical order.
///
/// Putting point closures first separates all points as early as the
/// closed sets allow.
pub fn closed_set_schedule(p: &Poset, bound: usize) -> Result<Vec<ElemSet>> {
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let all = p.all_closed_sets(bound)?;
    let whole = p.all();
    let mut points: Vec<ElemSet> = (0..p.len())
        .map(|x| p.closure(&[x].into()))
        .filter(|c| *c != whole)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    p.sort_canonical(&mut points);
    let mut schedule = vec![whole.clone()];
    schedule.extend(points.iter().cloned());
    for s in all.sets {
        if !s.is_empty() && s != whole && !points.contains(&s) {
            schedule.push(s);
        }
    }
    Ok(schedule)
}

/// Closes `base ∪ {new}` under union and nonempty intersection.
fn lattice_closure(base: &BTreeSet<ElemSet>, new: &ElemSet) -> BTreeSet<ElemSet> {
    let mut family = base.clone();
    let mut frontier = vec![new.clone()];
    while let Some(s) = frontier.pop() {
        if !family.insert(s.clone()) {
            continue;
        }
        let current: Vec<ElemSet> = family.iter().cloned().collect();
        for t in current {
            for c in [
                s.union(&t).copied().collect::<ElemSet>(),
                s.intersection(&t).copied().collect(),
            ] {
                if !c.is_empty() && !family.contains(&c) {
                    frontier.push(c);
                }
            }
        }
    }
    family
}

/// Splits each class into its part inside and outside `k`. Even-indexed
/// steps list the inside part first, odd-indexed steps the outside part.
fn refine(classes: &[ElemSet], k: &ElemSet, n: usize) -> Vec<ElemSet> {
    let mut out = Vec::new();
    for c in classes {
        let inside: ElemSet = c.intersection(k).copied().collect();
        let outside: ElemSet = c.difference(k).copied().collect();
        let pair = if n.is_multiple_of(2) {
            [inside, outside]
        } else {
            [outside, inside]
        };
        out.extend(pair.into_iter().filter(|s| !s.is_empty()));
    }
    out
}

/// Partitions for `n = 1 ..= upto`; past the end of the schedule no new
/// closed sets arrive and the last level repeats.
fn partitions(p: &Poset, schedule: &[ElemSet], upto: usize) -> Vec<LevelPartition> {
    let mut out: Vec<LevelPartition> = Vec::with_capacity(upto);
    let mut classes: Vec<ElemSet> = vec![p.all()];
    let mut lattice: BTreeSet<ElemSet> = BTreeSet::new();
    for n in 1..=upto {
        if n <= schedule.len() {
            let k = &schedule[n - 1];
            classes = refine(&classes, k, n);
            lattice = lattice_closure(&lattice, k);
        }
        let kn: Vec<ElemSet> = schedule[..n.min(schedule.len())].to_vec();
        let mut kn_prime: Vec<ElemSet> = lattice.iter().cloned().collect();
        p.sort_canonical(&mut kn_prime);
        let f = classes
            .iter()
            .map(|y| {
                lattice
                    .iter()
                    .filter(|s| y.is_subset(s))
                    .fold(p.all(), |acc, s| acc.intersection(s).copied().collect())
            })
            .collect();
        out.push(LevelPartition {
            n,
            kn,
            kn_prime,
            y: classes.clone(),
            f,
        });
    }
    out
}

/// The partition data at level `n` (1-based, at most the schedule length).
pub fn level_partition(p: &Poset, n: usize, bound: usize) -> Result<LevelPartition> {
    let schedule = closed_set_schedule(p, bound)?;
    if n == 0 || n > schedule.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: schedule.len(),
        });
    }
    Ok(partitions(p, &schedule, n).pop().expect("n ≥ 1"))
}

/// Everything computed while building the diagram of a poset.
#[derive(Clone, Debug)]
pub struct Construction {
    pub schedule: Vec<ElemSet>,
    /// Levels `n = 1 ..= stable + 1`.
    pub partitions: Vec<LevelPartition>,
    /// Smallest `n` at which every atom is a single point.
    pub n0: usize,
    /// Smallest `n` from which partitions and edge matrices repeat.
    pub stable: usize,
    pub diagram: Diagram,
}

impl Construction {
    pub fn partition(&self, n: usize) -> &LevelPartition {
        &self.partitions[n - 1]
    }
}

fn edge_matrix(from: &LevelPartition, to: &LevelPartition) -> Vec<Vec<u64>> {
    to.f.iter()
        .map(|f| {
            from.y
                .iter()
                .map(|y| u64::from(!y.is_disjoint(f)))
                .collect()
        })
        .collect()
}

/// Runs the construction.
pub fn construct(p: &Poset, bound: usize) -> Result<Construction> {
    let schedule = closed_set_schedule(p, bound)?;
    let len = schedule.len();
    let parts = partitions(p, &schedule, len + 1);
    let n0 = parts
        .iter()
        .find(|lp| lp.y.iter().all(|y| y.len() == 1))
        .map(|lp| lp.n)
        .expect("the full schedule separates points of a T0 space");
    let full = &parts[len - 1].kn_prime;
    let n_lattice = parts
        .iter()
        .find(|lp| &lp.kn_prime == full)
        .map(|lp| lp.n)
        .expect("lattice is complete at the end of the schedule");
    let stable = n0.max(n_lattice.saturating_sub(1)).max(1);
    let parts: Vec<LevelPartition> = parts.into_iter().take(stable + 1).collect();

    let edges: Vec<Vec<Vec<u64>>> = (0..stable)
        .map(|k| edge_matrix(&parts[k], &parts[k + 1]))
        .collect();
    let mut levels: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..stable {
        let prev = &levels[k - 1];
        let next = edges[k - 1]
            .iter()
            .map(|row| row.iter().zip(prev).map(|(&n, &d)| n * d).sum())
            .collect();
        levels.push(next);
    }
    let diagram = Diagram::new(
        levels,
        edges,
        Some(Tail {
            start: stable - 1,
            period: 1,
        }),
    )?;
    Ok(Construction {
        schedule,
        partitions: parts,
        n0,
        stable,
        diagram,
    })
}

/// The tailed diagram of a poset.
pub fn build_diagram(p: &Poset, bound: usize) -> Result<Diagram> {
    Ok(construct(p, bound)?.diagram)
}

/// Smallest `n` at which the atoms `Y(n, ·)` are single points.
pub fn stabilization_level(p: &Poset, bound: usize) -> Result<usize> {
    Ok(construct(p, bound)?.n0)
}

/// The limit algebra, read off the Behncke–Leptin construction with the
/// defector equal to 1 on maximal points and 0 elsewhere.
pub fn limit_algebra_expr(p: &Poset) -> Result<AlgebraExpr> {
    let d = behncke_leptin::Defector::canonical(p);
    Ok(behncke_leptin::algebra_of_poset(p, &d, false)?.fused())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bratteli::{prim_poset, validate};
    use crate::generate;

    fn sets(p: &Poset, v: &[ElemSet]) -> Vec<String> {
        v.iter().map(|s| p.format_set(s)).collect()
    }

    #[test]
    fn vee_schedule_and_partitions() {
        let p = generate::vee();
        let s = closed_set_schedule(&p, 20).unwrap();
        assert_eq!(sets(&p, &s), ["{p1, p2, q}", "{p1}", "{p2}", "{p1, p2}"]);
        let l2 = level_partition(&p, 2, 20).unwrap();
        assert_eq!(sets(&p, &l2.y), ["{p1}", "{p2, q}"]);
        assert_eq!(sets(&p, &l2.f), ["{p1}", "{p1, p2, q}"]);
        let l3 = level_partition(&p, 3, 20).unwrap();
        assert_eq!(sets(&p, &l3.y), ["{p1}", "{q}", "{p2}"]);
        assert_eq!(sets(&p, &l3.f), ["{p1}", "{p1, p2, q}", "{p2}"]);
        assert!(l3.kn_prime.contains(&p.set_of(&["p1", "p2"]).unwrap()));
        let l1 = level_partition(&p, 1, 20).unwrap();
        assert_eq!(l1.y, vec![p.all()]);
        assert_eq!(l1.f, vec![p.all()]);
        assert!(matches!(
            level_partition(&p, 5, 20),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn small_schedules() {
        let a = Poset::from_covers::<&str>(&["a"], &[]).unwrap();
        assert_eq!(closed_set_schedule(&a, 20).unwrap(), vec![a.all()]);
        let c = generate::chain(2);
        assert_eq!(
            sets(&c, &closed_set_schedule(&c, 20).unwrap()),
            ["{c1, c2}", "{c2}"]
        );
        assert!(matches!(
            closed_set_schedule(&Poset::empty(), 20),
            Err(Error::EmptyPoset)
        ));
    }

    #[test]
    fn stabilization_levels() {
        assert_eq!(stabilization_level(&generate::vee(), 20).unwrap(), 3);
        assert_eq!(stabilization_level(&generate::p4s1(), 20).unwrap(), 4);
        assert_eq!(stabilization_level(&generate::p6s2(), 20).unwrap(), 6);
        for k in 1..=5 {
            assert_eq!(stabilization_level(&generate::antichain(k), 20).unwrap(), k);
        }
    }

    #[test]
    fn vee_diagram_is_the_known_one() {
        let d = build_diagram(&generate::vee(), 20).unwrap();
        assert_eq!(d, crate::bratteli::vee_algebra());
    }

    #[test]
    fn singleton_is_a_single_column() {
        let a = Poset::from_covers::<&str>(&["a"], &[]).unwrap();
        assert_eq!(
            build_diagram(&a, 20).unwrap(),
            crate::bratteli::single_column()
        );
    }

    #[test]
    fn circle_stable_table() {
        let p = generate::p4s1();
        let c = construct(&p, 20).unwrap();
        let y = &c.partition(c.n0).y;
        let f = &c.partition(c.n0 + 1).f;
        assert_eq!(sets(&p, y), ["{x2}", "{x1}", "{x3}", "{x4}"]);
        assert_eq!(
            sets(&p, f),
            ["{x2}", "{x1, x2, x4}", "{x2, x3, x4}", "{x4}"]
        );
    }

    #[test]
    fn constructed_diagrams_are_valid_and_round_trip() {
        for (_, p) in generate::named_examples() {
            let d = build_diagram(&p, 20).unwrap();
            assert!(validate(&d, true).is_valid());
            assert!(prim_poset(&d, 16).unwrap().is_isomorphic(&p));
        }
    }

    #[test]
    fn partitions_refine_and_edges_are_total() {
        for p in generate::random_posets(11, 60, 6) {
            let c = construct(&p, 20).unwrap();
            for w in c.partitions.windows(2) {
                for y in &w[1].y {
                    assert!(w[0].y.iter().any(|x| y.is_subset(x)));
                }
            }
            for (k, m) in c.diagram.edges.iter().enumerate() {
                for j in 0..c.diagram.levels[k].len() {
                    assert!(m.iter().any(|row| row[j] > 0));
                }
            }
        }
    }
}
