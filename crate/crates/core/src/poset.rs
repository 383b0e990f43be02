//! Finite posets viewed as T0 spaces.
//!
//! The open sets are the down-sets, so the smallest open set around `x` is
//! `O_x = {y : y ⪯ x}` and the closed sets are the up-sets.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A set of element indices.
pub type ElemSet = BTreeSet<usize>;

/// Characters that may not appear in element labels.
pub const RESERVED_CHARS: &[char] = &['<', '#', ':', ',', '=', '(', ')', ';', '⊕', '⊗', '·'];

/// Checks that a label is nonempty and free of whitespace and reserved characters.
pub fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && !label
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c))
}

/// A finite partially ordered set.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.leq == other.leq
    }
}

impl Eq for Poset {}

/// A family of subsets of a labelled ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    pub ground: Vec<String>,
    pub sets: Vec<ElemSet>,
}

impl SubsetFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Member labels of every set, each sorted.
    pub fn labelled(&self) -> Vec<Vec<String>> {
        self.sets
            .iter()
            .map(|s| sorted_labels(&self.ground, s))
            .collect()
    }
}

/// Labels of `set` sorted lexicographically.
pub fn sorted_labels(ground: &[String], set: &ElemSet) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|&i| ground[i].clone()).collect();
    v.sort();
    v
}

/// Sorts sets by cardinality, then lexicographically on sorted member labels.
pub fn sort_canonical(ground: &[String], sets: &mut [ElemSet]) {
    sets.sort_by_cached_key(|s| (s.len(), sorted_labels(ground, s)));
}

/// Renders a set as `{a, b}` with labels in canonical order.
pub fn format_set(ground: &[String], set: &ElemSet) -> String {
    format!("{{{}}}", sorted_labels(ground, set).join(", "))
}

impl Poset {
    /// Builds a poset from labels and generating pairs `(lower, upper)`.
    /// Pairs implied by transitivity are dropped from the cover relation.
    pub fn from_covers<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut idx_pairs = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let a = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownLabel(a.as_ref().to_string()))?;
            let b = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownLabel(b.as_ref().to_string()))?;
            idx_pairs.push((a, b));
        }
        Self::from_index_pairs(labels, &idx_pairs)
    }

    /// Same as [`Poset::from_covers`] with pairs given as indices into `labels`.
    pub fn from_index_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange {
                    index: a.max(b) + 1,
                    len: n,
                });
            }
            if a == b {
                return Err(Error::Cycle {
                    witness: vec![labels[a].clone(), labels[a].clone()],
                });
            }
            succ[a].push(b);
        }
        if let Some(cycle) = find_cycle(&succ) {
            let mut witness: Vec<String> = cycle.iter().map(|&i| labels[i].clone()).collect();
            witness.push(labels[cycle[0]].clone());
            return Err(Error::Cycle { witness });
        }
        // reflexive-transitive closure by DFS from every vertex
        let mut leq = vec![vec![false; n]; n];
        for (s, row) in leq.iter_mut().enumerate() {
            let mut stack = vec![s];
            row[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &succ[v] {
                    if !row[w] {
                        row[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        let covers = transitive_reduction(&leq);
        Ok(Poset {
            labels,
            index,
            leq,
            covers,
        })
    }

    /// The empty poset.
    pub fn empty() -> Self {
        Poset {
            labels: Vec::new(),
            index: HashMap::new(),
            leq: Vec::new(),
            covers: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Resolves a list of labels to an element set.
    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElemSet> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq[x][y] || self.leq[y][x]
    }

    /// Cover pairs `(lower, upper)` sorted by index.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Cover pairs as labels.
    pub fn cover_labels(&self) -> Vec<(String, String)> {
        self.covers
            .iter()
            .map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
            .collect()
    }

    /// Elements covering `x`.
    pub fn covers_of(&self, x: usize) -> ElemSet {
        self.covers
            .iter()
            .filter(|&&(a, _)| a == x)
            .map(|&(_, b)| b)
            .collect()
    }

    /// Elements covered by `x`.
    pub fn covered_by(&self, x: usize) -> ElemSet {
        self.covers
            .iter()
            .filter(|&&(_, b)| b == x)
            .map(|&(a, _)| a)
            .collect()
    }

    pub fn all(&self) -> ElemSet {
        (0..self.len()).collect()
    }

    /// The smallest open set containing `x`: its down-set.
    pub fn min_open(&self, x: usize) -> ElemSet {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    /// The up-set of `x`.
    pub fn up_set(&self, x: usize) -> ElemSet {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    /// The smallest closed set containing `s`: its up-set.
    pub fn closure(&self, s: &ElemSet) -> ElemSet {
        (0..self.len())
            .filter(|&y| s.iter().any(|&x| self.leq[x][y]))
            .collect()
    }

    /// The largest open set inside `s`.
    pub fn interior(&self, s: &ElemSet) -> ElemSet {
        s.iter()
            .copied()
            .filter(|&x| self.min_open(x).is_subset(s))
            .collect()
    }

    pub fn is_closed(&self, s: &ElemSet) -> bool {
        s.iter()
            .all(|&x| (0..self.len()).all(|y| !self.leq[x][y] || s.contains(&y)))
    }

    pub fn is_open(&self, s: &ElemSet) -> bool {
        s.iter()
            .all(|&x| (0..self.len()).all(|y| !self.leq[y][x] || s.contains(&y)))
    }

    pub fn complement(&self, s: &ElemSet) -> ElemSet {
        (0..self.len()).filter(|x| !s.contains(x)).collect()
    }

    pub fn maximal_points(&self) -> ElemSet {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| !self.lt(x, y)))
            .collect()
    }

    pub fn minimal_points(&self) -> ElemSet {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| !self.lt(y, x)))
            .collect()
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(x, y))
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        (0..self.len()).all(|y| !self.lt(y, x))
    }

    /// Sorts sets in the canonical order of this poset's labels.
    pub fn sort_canonical(&self, sets: &mut [ElemSet]) {
        sort_canonical(&self.labels, sets);
    }

    pub fn format_set(&self, s: &ElemSet) -> String {
        format_set(&self.labels, s)
    }

    /// Every closed set (up-set), including ∅ and the whole poset, in canonical order.
    pub fn all_closed_sets(&self, bound: usize) -> Result<SubsetFamily> {
        if self.len() > bound {
            return Err(Error::TooLarge {
                what: "closed-set enumeration",
                size: self.len(),
                bound,
            });
        }
        // top-down order: an element is decided after everything above it
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| self.up_set(x).len());
        let mut out = Vec::new();
        let mut current = ElemSet::new();
        self.upsets_rec(&order, 0, &mut current, &mut out);
        sort_canonical(&self.labels, &mut out);
        Ok(SubsetFamily {
            ground: self.labels.clone(),
            sets: out,
        })
    }

    fn upsets_rec(&self, order: &[usize], k: usize, cur: &mut ElemSet, out: &mut Vec<ElemSet>) {
        if k == order.len() {
            out.push(cur.clone());
            return;
        }
        let x = order[k];
        self.upsets_rec(order, k + 1, cur, out);
        if self.covers_of(x).iter().all(|y| cur.contains(y)) {
            cur.insert(x);
            self.upsets_rec(order, k + 1, cur, out);
            cur.remove(&x);
        }
    }

    /// Maximal cover-chains, bottom to top, in depth-first index order.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for m in self.minimal_points() {
            let mut path = vec![m];
            self.chains_rec(&mut path, &mut out);
        }
        out
    }

    fn chains_rec(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let top = *path.last().expect("nonempty path");
        let ups = self.covers_of(top);
        if ups.is_empty() {
            out.push(path.clone());
            return;
        }
        for y in ups {
            path.push(y);
            self.chains_rec(path, out);
            path.pop();
        }
    }

    /// Every nonempty totally ordered subset, listed bottom to top.
    /// Fails once more than `bound` chains have been produced.
    pub fn all_chains(&self, bound: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        for x in 0..self.len() {
            path.push(x);
            self.all_chains_rec(&mut path, &mut out, bound)?;
            path.pop();
        }
        Ok(out)
    }

    fn all_chains_rec(
        &self,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        bound: usize,
    ) -> Result<()> {
        out.push(path.clone());
        if out.len() > bound {
            return Err(Error::TooLarge {
                what: "chain enumeration",
                size: out.len(),
                bound,
            });
        }
        let top = *path.last().expect("nonempty path");
        for y in 0..self.len() {
            if self.lt(top, y) {
                path.push(y);
                self.all_chains_rec(path, out, bound)?;
                path.pop();
            }
        }
        Ok(())
    }

    /// All order automorphisms as image vectors (`perm[x]` is the image of `x`),
    /// identity first.
    pub fn automorphisms(&self, bound: usize) -> Result<Vec<Vec<usize>>> {
        if self.len() > bound {
            return Err(Error::TooLarge {
                what: "automorphism search",
                size: self.len(),
                bound,
            });
        }
        let mut out = Vec::new();
        isomorphisms_into(self, self, false, &mut out);
        Ok(out)
    }

    /// An order isomorphism `self → other`, if one exists.
    pub fn isomorphism_to(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.covers.len() != other.covers.len() {
            return None;
        }
        if self.profile() != other.profile() {
            return None;
        }
        let mut out = Vec::new();
        isomorphisms_into(self, other, true, &mut out);
        out.into_iter().next()
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Sorted multiset of `(down-set size, up-set size)`, an isomorphism invariant.
    pub fn profile(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = (0..self.len())
            .map(|x| (self.min_open(x).len(), self.up_set(x).len()))
            .collect();
        v.sort();
        v
    }

    /// The subposet induced on `elems`, keeping labels.
    pub fn induced(&self, elems: &ElemSet) -> Poset {
        let list: Vec<usize> = elems.iter().copied().collect();
        let labels: Vec<String> = list.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &x) in list.iter().enumerate() {
            for (b, &y) in list.iter().enumerate() {
                if self.lt(x, y) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::from_index_pairs(labels, &pairs).expect("subposet of a poset is a poset")
    }

    /// Relabels elements; `new_labels[i]` replaces label `i`.
    pub fn relabeled(&self, new_labels: Vec<String>) -> Result<Poset> {
        if new_labels.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} labels, got {}",
                self.len(),
                new_labels.len()
            )));
        }
        Poset::from_index_pairs(new_labels, &self.covers)
    }

    /// Hasse diagram in DOT, drawn bottom to top.
    pub fn hasse_dot(&self) -> String {
        let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
        for l in &self.labels {
            s.push_str(&format!("  \"{}\";\n", dot_escape(l)));
        }
        for &(a, b) in &self.covers {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                dot_escape(&self.labels[a]),
                dot_escape(&self.labels[b])
            ));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn transitive_reduction(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut covers = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || !leq[x][y] {
                continue;
            }
            let skipped = (0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]);
            if !skipped {
                covers.push((x, y));
            }
        }
    }
    covers
}

/// Returns the vertices of some directed cycle, if any.
fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = succ.len();
    let mut state = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        state[s] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    1 => {
                        let mut cycle = vec![v];
                        let mut u = v;
                        while u != w {
                            u = parent[u];
                            cycle.push(u);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Backtracking search for order isomorphisms `a → b`.
fn isomorphisms_into(a: &Poset, b: &Poset, first_only: bool, out: &mut Vec<Vec<usize>>) {
    let n = a.len();
    let key_a: Vec<(usize, usize)> = (0..n)
        .map(|x| (a.min_open(x).len(), a.up_set(x).len()))
        .collect();
    let key_b: Vec<(usize, usize)> = (0..n)
        .map(|x| (b.min_open(x).len(), b.up_set(x).len()))
        .collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        a: &Poset,
        b: &Poset,
        ka: &[(usize, usize)],
        kb: &[(usize, usize)],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        first_only: bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        let n = a.len();
        if k == n {
            out.push(image.clone());
            return;
        }
        for c in 0..n {
            if used[c] || ka[k] != kb[c] {
                continue;
            }
            let consistent = (0..k)
                .all(|j| a.leq(j, k) == b.leq(image[j], c) && a.leq(k, j) == b.leq(c, image[j]));
            if !consistent {
                continue;
            }
            image[k] = c;
            used[c] = true;
            rec(k + 1, a, b, ka, kb, image, used, first_only, out);
            used[c] = false;
            image[k] = usize::MAX;
        }
    }
    rec(
        0, a, b, &key_a, &key_b, &mut image, &mut used, first_only, out,
    );
}
