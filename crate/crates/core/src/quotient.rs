//! Finite T0 quotients of covered spaces.
//!
//! A space is modelled by a finite sample of points together with named
//! subsets covering it. Points that no cover member tells apart are
//! identified; the quotient order is `[x] ⪯ [y]` iff every cover member
//! containing `y` also contains `x`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::poset::{sort_canonical, ElemSet, Poset, SubsetFamily};

/// A finite sample of a space with a distinguished cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveredSpace {
    points: Vec<String>,
    cover: Vec<(String, ElemSet)>,
}

impl CoveredSpace {
    /// Validates labels, cover membership and that the cover exhausts the points.
    pub fn new(points: Vec<String>, cover: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(p.clone()));
            }
        }
        let mut names = BTreeSet::new();
        let mut sets = Vec::new();
        let mut covered = ElemSet::new();
        for (name, members) in cover {
            if !names.insert(name.clone()) {
                return Err(Error::DuplicateLabel(name));
            }
            if members.is_empty() {
                return Err(Error::InvalidSpace(format!(
                    "cover member `{name}` is empty"
                )));
            }
            let mut set = ElemSet::new();
            for m in &members {
                let i = *index
                    .get(m.as_str())
                    .ok_or_else(|| Error::UnknownLabel(m.clone()))?;
                set.insert(i);
            }
            covered.extend(set.iter().copied());
            sets.push((name, set));
        }
        if covered.len() != points.len() {
            let missing: Vec<&str> = (0..points.len())
                .filter(|i| !covered.contains(i))
                .map(|i| points[i].as_str())
                .collect();
            return Err(Error::InvalidSpace(format!(
                "cover misses points {}",
                missing.join(" ")
            )));
        }
        Ok(CoveredSpace {
            points,
            cover: sets,
        })
    }

    /// The space underlying a poset, covered by the minimal open sets `O_x`.
    pub fn of_poset(p: &Poset) -> Self {
        let cover = (0..p.len())
            .map(|x| (format!("O_{}", p.label(x)), p.min_open(x)))
            .collect();
        CoveredSpace {
            points: p.labels().to_vec(),
            cover,
        }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn cover(&self) -> &[(String, ElemSet)] {
        &self.cover
    }

    /// Cover members with their points in declaration order.
    pub fn cover_labels(&self) -> Vec<(String, Vec<String>)> {
        self.cover
            .iter()
            .map(|(n, s)| {
                (
                    n.clone(),
                    s.iter().map(|&i| self.points[i].clone()).collect(),
                )
            })
            .collect()
    }

    /// Indices of cover members containing point `i`.
    pub fn fingerprint(&self, i: usize) -> BTreeSet<usize> {
        self.cover
            .iter()
            .enumerate()
            .filter(|(_, (_, s))| s.contains(&i))
            .map(|(k, _)| k)
            .collect()
    }
}

/// The topology generated by the cover: closure under finite unions and
/// intersections, with ∅ and the whole sample added.
pub fn topology_of(space: &CoveredSpace) -> SubsetFamily {
    let mut family: BTreeSet<ElemSet> = BTreeSet::new();
    family.insert(ElemSet::new());
    family.insert((0..space.points.len()).collect());
    for (_, s) in &space.cover {
        family.insert(s.clone());
    }
    loop {
        let current: Vec<ElemSet> = family.iter().cloned().collect();
        let before = family.len();
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                family.insert(a.union(b).copied().collect());
                family.insert(a.intersection(b).copied().collect());
            }
        }
        if family.len() == before {
            break;
        }
    }
    let mut sets: Vec<ElemSet> = family.into_iter().collect();
    sort_canonical(&space.points, &mut sets);
    SubsetFamily {
        ground: space.points.clone(),
        sets,
    }
}

/// The T0 quotient of a covered space.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub poset: Poset,
    /// `projection[i]` is the quotient element of sample point `i`.
    pub projection: Vec<usize>,
}

impl Quotient {
    /// Sample points mapped to each quotient element.
    pub fn fibers(&self) -> Vec<ElemSet> {
        let mut out = vec![ElemSet::new(); self.poset.len()];
        for (i, &c) in self.projection.iter().enumerate() {
            out[c].insert(i);
        }
        out
    }
}

/// Identifies points with equal cover fingerprints and orders the classes.
///
/// Classes appear in order of their first sample point and are labelled by
/// their lexicographically least member.
pub fn quotient_poset(space: &CoveredSpace) -> Quotient {
    let mut class_of_fp: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut fps: Vec<BTreeSet<usize>> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut projection = Vec::with_capacity(space.points.len());
    for i in 0..space.points.len() {
        let fp = space.fingerprint(i);
        let c = *class_of_fp.entry(fp.clone()).or_insert_with(|| {
            fps.push(fp);
            members.push(Vec::new());
            fps.len() - 1
        });
        members[c].push(i);
        projection.push(c);
    }
    let labels: Vec<String> = members
        .iter()
        .map(|m| {
            m.iter()
                .map(|&i| space.points[i].clone())
                .min()
                .expect("classes are nonempty")
        })
        .collect();
    let mut pairs = Vec::new();
    for x in 0..fps.len() {
        for y in 0..fps.len() {
            if x != y && fps[y].is_subset(&fps[x]) {
                pairs.push((x, y));
            }
        }
    }
    let poset = Poset::from_index_pairs(labels, &pairs)
        .expect("distinct fingerprints are ordered antisymmetrically");
    Quotient { poset, projection }
}

/// Renames quotient elements; `renames` maps current labels to new ones.
pub fn rename(q: &Quotient, renames: &HashMap<String, String>) -> Result<Quotient> {
    for old in renames.keys() {
        q.poset.index_of(old)?;
    }
    let labels = q
        .poset
        .labels()
        .iter()
        .map(|l| renames.get(l).cloned().unwrap_or_else(|| l.clone()))
        .collect();
    Ok(Quotient {
        poset: q.poset.relabeled(labels)?,
        projection: q.projection.clone(),
    })
}
