//! Bratteli diagrams and their ideal theory.
//!
//! Levels are numbered from 0. `edges[n][k][j]` is the multiplicity with
//! which block `j` of level `n` embeds into block `k` of level `n + 1`.
//! An optional tail `(start, period)` declares that from level `start` on the
//! node counts and edge matrices repeat with the given period; the stored
//! data then ends with the edge matrix leaving the last stored level.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

pub type Matrix = Vec<Vec<u64>>;

/// Periodic tail descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tail {
    pub start: usize,
    pub period: usize,
}

/// A Bratteli diagram, finite or eventually periodic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagram {
    pub levels: Vec<Vec<u64>>,
    pub edges: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Tail>,
}

/// A candidate ideal: one set of marked nodes per stored level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealMark {
    pub levels: Vec<BTreeSet<usize>>,
}

impl IdealMark {
    pub fn empty(d: &Diagram) -> Self {
        IdealMark {
            levels: vec![BTreeSet::new(); d.levels.len()],
        }
    }

    pub fn full(d: &Diagram) -> Self {
        IdealMark {
            levels: d.levels.iter().map(|l| (0..l.len()).collect()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(BTreeSet::is_empty)
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(BTreeSet::len).sum()
    }

    /// Levelwise inclusion.
    pub fn is_subset(&self, other: &IdealMark) -> bool {
        self.levels.len() == other.levels.len()
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.is_subset(b))
    }

    pub fn union(&self, other: &IdealMark) -> IdealMark {
        IdealMark {
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(a, b)| a.union(b).copied().collect())
                .collect(),
        }
    }

    pub fn intersection(&self, other: &IdealMark) -> IdealMark {
        IdealMark {
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(a, b)| a.intersection(b).copied().collect())
                .collect(),
        }
    }
}

impl fmt::Display for IdealMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|s| {
                let v: Vec<String> = s.iter().map(usize::to_string).collect();
                format!("{{{}}}", v.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// One problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EdgeCount {
        expected: usize,
        got: usize,
    },
    Rows {
        level: usize,
        expected: usize,
        got: usize,
    },
    Columns {
        level: usize,
        row: usize,
        expected: usize,
        got: usize,
    },
    EmptyLevel {
        level: usize,
    },
    ZeroDimension {
        level: usize,
        block: usize,
    },
    DimensionRule {
        level: usize,
        block: usize,
        expected: String,
        got: u64,
    },
    NoSuccessor {
        level: usize,
        block: usize,
    },
    Tail(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeCount { expected, got } => {
                write!(f, "expected {expected} edge matrices, found {got}")
            }
            Violation::Rows {
                level,
                expected,
                got,
            } => write!(
                f,
                "edge matrix {level}: expected {expected} rows (blocks of level {}), found {got}",
                level + 1
            ),
            Violation::Columns {
                level,
                row,
                expected,
                got,
            } => write!(
                f,
                "edge matrix {level}, row {row}: expected {expected} columns, found {got}"
            ),
            Violation::EmptyLevel { level } => write!(f, "level {level} has no blocks"),
            Violation::ZeroDimension { level, block } => {
                write!(
                    f,
                    "level {level}, block {block}: dimension must be positive"
                )
            }
            Violation::DimensionRule {
                level,
                block,
                expected,
                got,
            } => write!(
                f,
                "level {level}, block {block}: dimension rule gives {expected}, stored {got}"
            ),
            Violation::NoSuccessor { level, block } => write!(
                f,
                "level {level}, block {block}: no outgoing edge, embedding is not injective"
            ),
            Violation::Tail(msg) => write!(f, "tail: {msg}"),
        }
    }
}

/// Result of [`validate`]; dimension-rule problems become warnings for
/// non-unital diagrams.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

impl Diagram {
    pub fn new(levels: Vec<Vec<u64>>, edges: Vec<Matrix>, tail: Option<Tail>) -> Result<Self> {
        let d = Diagram {
            levels,
            edges,
            tail,
        };
        d.check_shape()?;
        Ok(d)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }

    /// JSON text with one level or edge matrix per line.
    pub fn to_json(&self) -> String {
        let row = |v: &[u64]| {
            let items: Vec<String> = v.iter().map(u64::to_string).collect();
            format!("[{}]", items.join(", "))
        };
        let levels: Vec<String> = self
            .levels
            .iter()
            .map(|l| format!("    {}", row(l)))
            .collect();
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|m| {
                let rows: Vec<String> = m.iter().map(|r| row(r)).collect();
                format!("    [{}]", rows.join(", "))
            })
            .collect();
        let mut s = format!(
            "{{\n  \"levels\": [\n{}\n  ],\n  \"edges\": [\n{}\n  ]",
            levels.join(",\n"),
            edges.join(",\n")
        );
        if self.edges.is_empty() {
            s = format!(
                "{{\n  \"levels\": [\n{}\n  ],\n  \"edges\": []",
                levels.join(",\n")
            );
        }
        if let Some(t) = self.tail {
            s.push_str(&format!(
                ",\n  \"tail\": {{\"start\": {}, \"period\": {}}}",
                t.start, t.period
            ));
        }
        s.push_str("\n}\n");
        s
    }

    /// Structural problems: counts of matrices, rows and columns, and the tail.
    fn shape_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let l = self.levels.len();
        for (k, lv) in self.levels.iter().enumerate() {
            if lv.is_empty() {
                out.push(Violation::EmptyLevel { level: k });
            }
        }
        let expected_edges = match self.tail {
            Some(_) => l,
            None => l.saturating_sub(1),
        };
        if let Some(t) = self.tail {
            if t.period == 0 {
                out.push(Violation::Tail("period must be at least 1".into()));
                return out;
            }
            if t.start + t.period > l {
                out.push(Violation::Tail(format!(
                    "levels {}..{} must be stored, only {l} present",
                    t.start,
                    t.start + t.period
                )));
                return out;
            }
        }
        if self.edges.len() != expected_edges {
            out.push(Violation::EdgeCount {
                expected: expected_edges,
                got: self.edges.len(),
            });
            return out;
        }
        for (k, m) in self.edges.iter().enumerate() {
            let rows = self.node_count(k + 1);
            if m.len() != rows {
                out.push(Violation::Rows {
                    level: k,
                    expected: rows,
                    got: m.len(),
                });
                continue;
            }
            for (r, row) in m.iter().enumerate() {
                if row.len() != self.levels[k].len() {
                    out.push(Violation::Columns {
                        level: k,
                        row: r,
                        expected: self.levels[k].len(),
                        got: row.len(),
                    });
                }
            }
        }
        if let Some(t) = self.tail {
            for k in t.start + t.period..l {
                if self.levels[k].len() != self.levels[k - t.period].len() {
                    out.push(Violation::Tail(format!(
                        "level {k} has {} blocks but level {} has {}",
                        self.levels[k].len(),
                        k - t.period,
                        self.levels[k - t.period].len()
                    )));
                } else if self.edges.get(k) != self.edges.get(k - t.period) {
                    out.push(Violation::Tail(format!(
                        "edge matrix {k} differs from edge matrix {}",
                        k - t.period
                    )));
                }
            }
        }
        out
    }

    /// Fails with `ShapeMismatch` on the first structural problem.
    pub fn check_shape(&self) -> Result<()> {
        match self.shape_violations().first() {
            Some(v) => Err(Error::ShapeMismatch(v.to_string())),
            None => Ok(()),
        }
    }

    /// Stored level holding the data of level `k`.
    pub fn stored_level(&self, k: usize) -> usize {
        match self.tail {
            Some(t) if k >= self.levels.len() => t.start + (k - t.start) % t.period,
            _ => k,
        }
    }

    /// Number of blocks at level `k` (any level when tailed).
    pub fn node_count(&self, k: usize) -> usize {
        self.levels[self.stored_level(k)].len()
    }

    /// Edge matrix from level `k` to level `k + 1`.
    pub fn edge(&self, k: usize) -> &Matrix {
        match self.tail {
            Some(t) if k >= self.edges.len() => &self.edges[t.start + (k - t.start) % t.period],
            _ => &self.edges[k],
        }
    }

    /// Whether level `k` has an outgoing edge matrix.
    pub fn has_next(&self, k: usize) -> bool {
        self.tail.is_some() || k + 1 < self.levels.len()
    }

    /// Blocks of level `k + 1` reached from block `j` of level `k`.
    pub fn successors(&self, k: usize, j: usize) -> Vec<usize> {
        self.edge(k)
            .iter()
            .enumerate()
            .filter(|(_, row)| row[j] > 0)
            .map(|(r, _)| r)
            .collect()
    }

    /// Number of levels covering one full pass through prefix and period.
    pub fn effective_levels(&self) -> usize {
        match self.tail {
            Some(t) => t.start + t.period,
            None => self.levels.len(),
        }
    }

    /// Block dimensions of levels `0..count`, extended past the stored levels
    /// with the dimension rule.
    pub fn dims_upto(&self, count: usize) -> Vec<Vec<BigUint>> {
        let mut out: Vec<Vec<BigUint>> = Vec::with_capacity(count);
        for k in 0..count {
            if k < self.levels.len() {
                out.push(self.levels[k].iter().map(|&d| BigUint::from(d)).collect());
            } else {
                if self.tail.is_none() {
                    break;
                }
                let prev = &out[k - 1];
                let m = self.edge(k - 1);
                let next = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(prev)
                            .map(|(&n, d)| d * BigUint::from(n))
                            .sum::<BigUint>()
                    })
                    .collect();
                out.push(next);
            }
        }
        out
    }

    /// Total node count of a mark pattern over one stored period.
    fn period_nodes(&self) -> usize {
        match self.tail {
            Some(t) => (t.start..t.start + t.period)
                .map(|k| self.levels[k].len())
                .sum(),
            None => 0,
        }
    }

    fn mark_at<'a>(&self, mark: &'a IdealMark, k: usize) -> &'a BTreeSet<usize> {
        &mark.levels[self.stored_level(k)]
    }

    fn check_mark(&self, mark: &IdealMark) -> Result<()> {
        self.check_shape()?;
        if mark.levels.len() != self.levels.len() {
            return Err(Error::ShapeMismatch(format!(
                "mark has {} levels, diagram stores {}",
                mark.levels.len(),
                self.levels.len()
            )));
        }
        for (k, s) in mark.levels.iter().enumerate() {
            if let Some(&j) = s.iter().find(|&&j| j >= self.levels[k].len()) {
                return Err(Error::ShapeMismatch(format!(
                    "mark names block {j} at level {k}, which has {} blocks",
                    self.levels[k].len()
                )));
            }
        }
        if let Some(t) = self.tail {
            for k in t.start + t.period..self.levels.len() {
                if mark.levels[k] != mark.levels[k - t.period] {
                    return Err(Error::ShapeMismatch(format!(
                        "mark is not periodic: level {k} differs from level {}",
                        k - t.period
                    )));
                }
            }
        }
        Ok(())
    }

    fn is_full(&self, mark: &IdealMark) -> bool {
        (0..self.effective_levels()).all(|k| self.mark_at(mark, k).len() == self.node_count(k))
    }
}

/// Checks shape, positivity, injectivity, the dimension rule and the tail.
pub fn validate(d: &Diagram, unital: bool) -> ValidationReport {
    let mut report = ValidationReport {
        errors: d.shape_violations(),
        warnings: Vec::new(),
    };
    if !report.errors.is_empty() {
        return report;
    }
    for (k, lv) in d.levels.iter().enumerate() {
        for (j, &dim) in lv.iter().enumerate() {
            if dim == 0 {
                report
                    .errors
                    .push(Violation::ZeroDimension { level: k, block: j });
            }
        }
    }
    for k in 0..d.levels.len() {
        if !d.has_next(k) {
            continue;
        }
        for j in 0..d.levels[k].len() {
            if d.successors(k, j).is_empty() {
                report
                    .errors
                    .push(Violation::NoSuccessor { level: k, block: j });
            }
        }
    }
    for k in 0..d.levels.len().saturating_sub(1) {
        for (r, row) in d.edges[k].iter().enumerate() {
            let mut sum: Option<u64> = Some(0);
            for (&n, &dim) in row.iter().zip(&d.levels[k]) {
                sum = sum.and_then(|s| n.checked_mul(dim).and_then(|p| s.checked_add(p)));
            }
            let got = d.levels[k + 1][r];
            if sum != Some(got) {
                let v = Violation::DimensionRule {
                    level: k + 1,
                    block: r,
                    expected: sum.map_or_else(|| "overflow".to_string(), |s| s.to_string()),
                    got,
                };
                if unital {
                    report.errors.push(v);
                } else {
                    report.warnings.push(v);
                }
            }
        }
    }
    report
}

/// Hereditary condition (i) and saturation condition (ii) on every level.
///
/// For a diagram without a tail, saturation is not imposed on the last
/// stored level, whose successors are unknown.
pub fn is_ideal(d: &Diagram, mark: &IdealMark) -> Result<bool> {
    d.check_mark(mark)?;
    for k in 0..d.levels.len() {
        if !d.has_next(k) {
            continue;
        }
        let here = d.mark_at(mark, k);
        let next = d.mark_at(mark, k + 1);
        for j in 0..d.levels[k].len() {
            let succ = d.successors(k, j);
            let all_marked = succ.iter().all(|s| next.contains(s));
            if here.contains(&j) != all_marked {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Primitivity condition (iii): for every level `n` some unmarked node at a
/// later level is reachable from every unmarked node of level `n`.
///
/// On a tailed diagram the levels of one prefix-plus-period pass stand for
/// all levels, and the forward search stops once a state repeats. Without a
/// tail the search runs to the last stored level, which itself is exempt.
/// The whole diagram is the improper ideal and is never primitive.
pub fn is_primitive(d: &Diagram, mark: &IdealMark) -> Result<bool> {
    if !is_ideal(d, mark)? {
        return Err(Error::NotAnIdeal);
    }
    if d.is_full(mark) {
        return Ok(false);
    }
    let last = match d.tail {
        Some(_) => d.effective_levels(),
        None => d.levels.len().saturating_sub(1),
    };
    for n in 0..last {
        if !common_successor_exists(d, mark, n) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn common_successor_exists(d: &Diagram, mark: &IdealMark, n: usize) -> bool {
    let unmarked = |k: usize| -> BTreeSet<usize> {
        let m = d.mark_at(mark, k);
        (0..d.node_count(k)).filter(|j| !m.contains(j)).collect()
    };
    let mut reach: Vec<BTreeSet<usize>> = unmarked(n).into_iter().map(|u| [u].into()).collect();
    let mut seen: HashSet<(usize, Vec<BTreeSet<usize>>)> = HashSet::new();
    let mut m = n;
    loop {
        if !d.has_next(m) {
            return false;
        }
        let free = unmarked(m + 1);
        reach = reach
            .iter()
            .map(|s| {
                s.iter()
                    .flat_map(|&j| d.successors(m, j))
                    .filter(|j| free.contains(j))
                    .collect()
            })
            .collect();
        m += 1;
        let common = reach
            .iter()
            .fold(free, |acc, s| acc.intersection(s).copied().collect());
        if !common.is_empty() {
            return true;
        }
        if d.tail.is_some() {
            let key = (d.stored_level(m), reach.clone());
            if m >= d.levels.len() && !seen.insert(key) {
                return false;
            }
        }
    }
}

/// Every period-invariant ideal of a tailed diagram.
///
/// Conditions (i) and (ii) together say a node is marked exactly when all its
/// successors are. Candidate marks on one period are filtered by that rule
/// (wrapping from the period's end to its start) and then completed
/// backwards through the prefix, where the rule determines the mark uniquely.
/// Output is ordered by the number of marked period nodes, then
/// lexicographically on their positions.
pub fn enumerate_ideals(d: &Diagram, bound: usize) -> Result<Vec<IdealMark>> {
    d.check_shape()?;
    let t = d.tail.ok_or(Error::NoTail)?;
    let period_nodes = d.period_nodes();
    if period_nodes > bound {
        return Err(Error::TooLarge {
            what: "ideal enumeration period",
            size: period_nodes,
            bound,
        });
    }
    let positions: Vec<(usize, usize)> = (t.start..t.start + t.period)
        .flat_map(|k| (0..d.levels[k].len()).map(move |j| (k, j)))
        .collect();
    let mut found: Vec<(Vec<usize>, IdealMark)> = Vec::new();
    for mask in 0u64..(1u64 << period_nodes) {
        let mut mark = IdealMark::empty(d);
        let mut chosen = Vec::new();
        for (bit, &(k, j)) in positions.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                mark.levels[k].insert(j);
                chosen.push(bit);
            }
        }
        let saturated = (t.start..t.start + t.period).all(|k| {
            let wrapped = if k + 1 == t.start + t.period {
                t.start
            } else {
                k + 1
            };
            (0..d.levels[k].len()).all(|j| {
                let next = &mark.levels[wrapped];
                mark.levels[k].contains(&j) == d.successors(k, j).iter().all(|s| next.contains(s))
            })
        });
        if !saturated {
            continue;
        }
        for k in (0..t.start).rev() {
            let forced: BTreeSet<usize> = (0..d.levels[k].len())
                .filter(|&j| {
                    d.successors(k, j)
                        .iter()
                        .all(|s| mark.levels[k + 1].contains(s))
                })
                .collect();
            mark.levels[k] = forced;
        }
        for k in t.start + t.period..d.levels.len() {
            mark.levels[k] = mark.levels[k - t.period].clone();
        }
        found.push((chosen, mark));
    }
    found.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    Ok(found.into_iter().map(|(_, m)| m).collect())
}

/// The primitive ideals labelled `I0, I1, …` in enumeration order, ordered by inclusion.
pub fn prim_marks(d: &Diagram, bound: usize) -> Result<Vec<IdealMark>> {
    let mut out = Vec::new();
    for m in enumerate_ideals(d, bound)? {
        if is_primitive(d, &m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// The primitive spectrum as a poset under inclusion of ideals.
pub fn prim_poset(d: &Diagram, bound: usize) -> Result<Poset> {
    let marks = prim_marks(d, bound)?;
    let labels: Vec<String> = (0..marks.len()).map(|i| format!("I{i}")).collect();
    let mut pairs = Vec::new();
    for (a, ma) in marks.iter().enumerate() {
        for (b, mb) in marks.iter().enumerate() {
            if a != b && ma.is_subset(mb) {
                pairs.push((a, b));
            }
        }
    }
    Poset::from_index_pairs(labels, &pairs)
}

/// Every block has dimension 1 and every block past the root receives
/// exactly one edge of multiplicity 1.
pub fn is_commutative(d: &Diagram) -> bool {
    if d.check_shape().is_err() {
        return false;
    }
    if d.levels.iter().flatten().any(|&x| x != 1) {
        return false;
    }
    d.edges
        .iter()
        .all(|m| m.iter().all(|row| row.iter().sum::<u64>() == 1))
}

/// DOT rendering of the first `truncate_at` levels; node labels are block
/// dimensions and parallel edges are drawn once per multiplicity.
pub fn diagram_dot(d: &Diagram, truncate_at: usize) -> String {
    let dims = d.dims_upto(truncate_at.max(1));
    let mut s = String::from("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
    for (k, lv) in dims.iter().enumerate() {
        s.push_str("  { rank=same;");
        for j in 0..lv.len() {
            s.push_str(&format!(" n{k}_{j};"));
        }
        s.push_str(" }\n");
        for (j, dim) in lv.iter().enumerate() {
            s.push_str(&format!("  n{k}_{j} [label=\"{dim}\"];\n"));
        }
    }
    for k in 0..dims.len().saturating_sub(1) {
        for (r, row) in d.edge(k).iter().enumerate() {
            for (c, &mult) in row.iter().enumerate() {
                for _ in 0..mult {
                    s.push_str(&format!("  n{k}_{c} -> n{}_{r};\n", k + 1));
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

/// The diagram of `ℂ·I1 ⊕ ℂ·I2 ⊕ K12`: outer columns of 1s around a central
/// column of dimensions 2, 4, 6, …
pub fn vee_algebra() -> Diagram {
    Diagram::new(
        vec![vec![1], vec![1, 1], vec![1, 2, 1]],
        vec![
            vec![vec![1], vec![1]],
            vec![vec![1, 0], vec![1, 1], vec![0, 1]],
            vec![vec![1, 0, 0], vec![1, 1, 1], vec![0, 0, 1]],
        ],
        Some(Tail {
            start: 2,
            period: 1,
        }),
    )
    .expect("well-formed")
}

/// The Penrose tiling diagram with Fibonacci block dimensions.
pub fn penrose() -> Diagram {
    let step = vec![vec![1, 1], vec![1, 0]];
    Diagram::new(
        vec![vec![1], vec![1, 1], vec![2, 1], vec![3, 2], vec![5, 3]],
        vec![
            vec![vec![1], vec![1]],
            step.clone(),
            step.clone(),
            step.clone(),
            step,
        ],
        Some(Tail {
            start: 1,
            period: 1,
        }),
    )
    .expect("well-formed")
}

/// The binary tree of 1s (continuous functions on the Cantor set), levels `0..=depth`.
pub fn cantor(depth: usize) -> Diagram {
    let levels: Vec<Vec<u64>> = (0..=depth).map(|k| vec![1; 1 << k]).collect();
    let edges = (0..depth)
        .map(|k| {
            let cols = 1usize << k;
            (0..2 * cols)
                .map(|r| (0..cols).map(|c| u64::from(r / 2 == c)).collect())
                .collect()
        })
        .collect();
    Diagram::new(levels, edges, None).expect("well-formed")
}

/// One block of dimension 1 per level, joined by single edges.
pub fn single_column() -> Diagram {
    Diagram::new(
        vec![vec![1]],
        vec![vec![vec![1]]],
        Some(Tail {
            start: 0,
            period: 1,
        }),
    )
    .expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn mark(levels: &[&[usize]]) -> IdealMark {
        IdealMark {
            levels: levels.iter().map(|l| l.iter().copied().collect()).collect(),
        }
    }

    #[test]
    fn named_diagrams_validate() {
        assert!(validate(&vee_algebra(), true).is_valid());
        assert!(validate(&penrose(), true).is_valid());
        assert!(validate(&cantor(5), true).is_valid());
        let dims = vee_algebra().dims_upto(6);
        let center: Vec<u64> = dims[2..]
            .iter()
            .map(|l| l[1].clone().try_into().unwrap())
            .collect();
        assert_eq!(center, vec![2, 4, 6, 8]);
    }

    #[test]
    fn dimension_rule_violation_is_reported() {
        let d = Diagram {
            levels: vec![vec![1], vec![3]],
            edges: vec![vec![vec![1]]],
            tail: None,
        };
        let r = validate(&d, true);
        assert_eq!(r.errors.len(), 1);
        assert!(matches!(
            r.errors[0],
            Violation::DimensionRule {
                level: 1,
                block: 0,
                got: 3,
                ..
            }
        ));
        let r = validate(&d, false);
        assert!(r.is_valid());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn shape_problems_are_reported() {
        let d = Diagram {
            levels: vec![vec![1], vec![1, 1]],
            edges: vec![vec![vec![1]]],
            tail: None,
        };
        assert!(!validate(&d, true).is_valid());
        assert!(matches!(d.check_shape(), Err(Error::ShapeMismatch(_))));
        let d = Diagram {
            levels: vec![vec![1]],
            edges: vec![],
            tail: Some(Tail {
                start: 0,
                period: 1,
            }),
        };
        assert!(!validate(&d, true).is_valid());
    }

    #[test]
    fn vee_ideals() {
        let d = vee_algebra();
        let ideals = enumerate_ideals(&d, 16).unwrap();
        assert_eq!(ideals.len(), 5);
        assert!(ideals[0].is_empty());
        assert_eq!(ideals[4], IdealMark::full(&d));
        // {c}, {l,c}, {c,r} on the stable level
        assert_eq!(ideals[1].levels[2], [1].into());
        assert_eq!(ideals[2].levels[2], [0, 1].into());
        assert_eq!(ideals[3].levels[2], [1, 2].into());
        let prim: Vec<bool> = ideals
            .iter()
            .map(|m| is_primitive(&d, m).unwrap())
            .collect();
        assert_eq!(prim, vec![true, false, true, true, false]);
        let top_only = mark(&[&[0], &[], &[]]);
        assert!(!is_ideal(&d, &top_only).unwrap());
    }

    #[test]
    fn vee_prim_is_vee() {
        let p = prim_poset(&vee_algebra(), 16).unwrap();
        assert!(p.is_isomorphic(&generate::vee()));
    }

    #[test]
    fn penrose_prim_is_a_point() {
        let d = penrose();
        assert_eq!(enumerate_ideals(&d, 16).unwrap().len(), 2);
        assert_eq!(prim_poset(&d, 16).unwrap().len(), 1);
        assert!(!is_commutative(&d));
    }

    #[test]
    fn cantor_is_commutative_and_zero_not_primitive() {
        for depth in 4..=10 {
            let d = cantor(depth);
            assert!(is_commutative(&d));
            assert!(!is_primitive(&d, &IdealMark::empty(&d)).unwrap());
        }
        assert!(!is_commutative(&vee_algebra()));
    }

    #[test]
    fn enumeration_needs_a_tail() {
        assert!(matches!(
            enumerate_ideals(&cantor(3), 16),
            Err(Error::NoTail)
        ));
        assert!(matches!(
            enumerate_ideals(&vee_algebra(), 2),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn single_column_has_two_ideals() {
        let d = single_column();
        assert_eq!(enumerate_ideals(&d, 16).unwrap().len(), 2);
        assert_eq!(prim_poset(&d, 16).unwrap().len(), 1);
    }

    #[test]
    fn non_ideal_is_rejected_by_primitivity() {
        let d = vee_algebra();
        let bad = mark(&[&[0], &[], &[]]);
        assert!(matches!(is_primitive(&d, &bad), Err(Error::NotAnIdeal)));
        let short = mark(&[&[]]);
        assert!(matches!(is_ideal(&d, &short), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn dot_node_counts() {
        let dot = diagram_dot(&vee_algebra(), 4);
        assert_eq!(dot.matches("[label=").count(), 9);
        let dot = diagram_dot(&penrose(), 2);
        assert_eq!(dot.matches("[label=").count(), 3);
        assert_eq!(dot.matches("->").count(), 2);
        let one = Diagram::new(vec![vec![1, 1]], vec![], None).unwrap();
        assert_eq!(diagram_dot(&one, 1).matches("->").count(), 0);
    }

    #[test]
    fn json_roundtrip() {
        for d in [vee_algebra(), penrose(), cantor(3), single_column()] {
            assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
        }
        assert!(Diagram::from_json("{\"levels\": [[1]]}").is_err());
    }
}
