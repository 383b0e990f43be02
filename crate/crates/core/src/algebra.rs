//! Symbolic Hilbert spaces and operator algebras given by generating blocks.
//!
//! Hilbert spaces are trees of direct sums and tensor products over the
//! atoms `C^d`, `H<name>` (an abstract infinite-dimensional component) and
//! `l<name>` (an ℓ² factor). An algebra is a set of generator blocks: scalar
//! identities `C·I(H)`, compacts `K(H)`, matrix blocks `M(n,C)`, products
//! `C·I(A) ⊗ K(B)` and diagonal couplings `Δ(A1; …; An) ⊗ K(B)`, the latter
//! standing for `⊕_r λ_r I(A_r) ⊗ k` with independent scalars and one
//! shared compact `k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Name of the ℓ² factor standing in for an infinite defector value.
pub const INFINITE_FACTOR: &str = "∞";

/// A symbolic Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HilbertExpr {
    Finite(u64),
    Named(String),
    Separable(String),
    Tensor(Vec<HilbertExpr>),
    Sum(Vec<HilbertExpr>),
}

/// A dimension in ℕ ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::Infinite => write!(f, "∞"),
        }
    }
}

impl HilbertExpr {
    pub fn finite(d: u64) -> Self {
        HilbertExpr::Finite(d)
    }

    pub fn named(n: impl Into<String>) -> Self {
        HilbertExpr::Named(n.into())
    }

    pub fn separable(n: impl Into<String>) -> Self {
        HilbertExpr::Separable(n.into())
    }

    /// Canonical tensor product of the factors.
    pub fn tensor(factors: Vec<HilbertExpr>) -> Self {
        HilbertExpr::Tensor(factors).canonical()
    }

    /// Canonical direct sum of the summands.
    pub fn sum(summands: Vec<HilbertExpr>) -> Self {
        HilbertExpr::Sum(summands).canonical()
    }

    pub fn zero() -> Self {
        HilbertExpr::Finite(0)
    }

    pub fn one() -> Self {
        HilbertExpr::Finite(1)
    }

    /// Canonical form: nested sums and tensors flattened, operands sorted,
    /// `C^0` summands and `C^1` factors removed, finite factors multiplied,
    /// and a `C^0` factor annihilating its product.
    pub fn canonical(&self) -> Self {
        match self {
            HilbertExpr::Finite(_) | HilbertExpr::Named(_) | HilbertExpr::Separable(_) => {
                self.clone()
            }
            HilbertExpr::Tensor(fs) => {
                let mut flat = Vec::new();
                let mut scalar: u64 = 1;
                for f in fs.iter().map(HilbertExpr::canonical) {
                    let parts = match f {
                        HilbertExpr::Tensor(inner) => inner,
                        other => vec![other],
                    };
                    for part in parts {
                        match part {
                            HilbertExpr::Finite(d) => scalar = scalar.saturating_mul(d),
                            other => flat.push(other),
                        }
                    }
                }
                if scalar == 0 {
                    return HilbertExpr::Finite(0);
                }
                if scalar != 1 {
                    flat.push(HilbertExpr::Finite(scalar));
                }
                flat.sort();
                match flat.len() {
                    0 => HilbertExpr::Finite(1),
                    1 => flat.pop().expect("one factor"),
                    _ => HilbertExpr::Tensor(flat),
                }
            }
            HilbertExpr::Sum(ss) => {
                let mut flat = Vec::new();
                for s in ss.iter().map(HilbertExpr::canonical) {
                    match s {
                        HilbertExpr::Finite(0) => {}
                        HilbertExpr::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                match flat.len() {
                    0 => HilbertExpr::Finite(0),
                    1 => flat.pop().expect("one summand"),
                    _ => HilbertExpr::Sum(flat),
                }
            }
        }
    }

    /// Canonical form after distributing tensor products over sums.
    pub fn expanded(&self) -> Self {
        fn terms(e: &HilbertExpr) -> Vec<Vec<HilbertExpr>> {
            match e {
                HilbertExpr::Sum(ss) => ss.iter().flat_map(terms).collect(),
                HilbertExpr::Tensor(fs) => {
                    let mut acc: Vec<Vec<HilbertExpr>> = vec![Vec::new()];
                    for f in fs {
                        let ft = terms(f);
                        let mut next = Vec::new();
                        for a in &acc {
                            for t in &ft {
                                let mut v = a.clone();
                                v.extend(t.iter().cloned());
                                next.push(v);
                            }
                        }
                        acc = next;
                    }
                    acc
                }
                atom => vec![vec![atom.clone()]],
            }
        }
        HilbertExpr::Sum(
            terms(&self.canonical())
                .into_iter()
                .map(HilbertExpr::Tensor)
                .collect(),
        )
        .canonical()
    }

    /// Dimension: additive over sums, multiplicative over tensors; abstract
    /// components and ℓ² factors are infinite, and a zero factor wins.
    pub fn total_dim(&self) -> Dim {
        match self {
            HilbertExpr::Finite(d) => Dim::Finite(*d),
            HilbertExpr::Named(_) | HilbertExpr::Separable(_) => Dim::Infinite,
            HilbertExpr::Tensor(fs) => {
                let dims: Vec<Dim> = fs.iter().map(HilbertExpr::total_dim).collect();
                if dims.contains(&Dim::Finite(0)) {
                    return Dim::Finite(0);
                }
                dims.into_iter()
                    .fold(Dim::Finite(1), |acc, d| match (acc, d) {
                        (Dim::Finite(a), Dim::Finite(b)) => {
                            a.checked_mul(b).map_or(Dim::Infinite, Dim::Finite)
                        }
                        _ => Dim::Infinite,
                    })
            }
            HilbertExpr::Sum(ss) => {
                ss.iter()
                    .map(HilbertExpr::total_dim)
                    .fold(Dim::Finite(0), |acc, d| match (acc, d) {
                        (Dim::Finite(a), Dim::Finite(b)) => {
                            a.checked_add(b).map_or(Dim::Infinite, Dim::Finite)
                        }
                        _ => Dim::Infinite,
                    })
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == Dim::Finite(0)
    }

    /// Names of the abstract components `H<name>`.
    pub fn named_components(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let HilbertExpr::Named(n) = e {
                out.insert(n.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&HilbertExpr)) {
        f(self);
        if let HilbertExpr::Tensor(v) | HilbertExpr::Sum(v) = self {
            for e in v {
                e.visit(f);
            }
        }
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> HilbertExpr {
        match self {
            HilbertExpr::Named(n) => {
                HilbertExpr::Named(map.get(n).cloned().unwrap_or_else(|| n.clone()))
            }
            HilbertExpr::Separable(n) => {
                HilbertExpr::Separable(map.get(n).cloned().unwrap_or_else(|| n.clone()))
            }
            HilbertExpr::Tensor(v) => {
                HilbertExpr::Tensor(v.iter().map(|e| e.rename(map)).collect())
            }
            HilbertExpr::Sum(v) => HilbertExpr::Sum(v.iter().map(|e| e.rename(map)).collect()),
            other => other.clone(),
        }
    }

    pub fn render(&self, style: Style) -> String {
        match self {
            HilbertExpr::Finite(d) => format!("C^{d}"),
            HilbertExpr::Named(n) => format!("H{n}"),
            HilbertExpr::Separable(n) if n == INFINITE_FACTOR => {
                format!("l{}", style.infinity())
            }
            HilbertExpr::Separable(n) => format!("l{n}"),
            HilbertExpr::Tensor(fs) => fs
                .iter()
                .map(|f| match f {
                    HilbertExpr::Sum(_) => format!("({})", f.render(style)),
                    _ => f.render(style),
                })
                .collect::<Vec<_>>()
                .join(&format!(" {} ", style.tensor())),
            HilbertExpr::Sum(ss) => ss
                .iter()
                .map(|s| s.render(style))
                .collect::<Vec<_>>()
                .join(&format!(" {} ", style.plus())),
        }
    }
}

/// Unicode or ASCII rendering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Style {
    #[default]
    Unicode,
    Ascii,
}

impl Style {
    fn plus(self) -> &'static str {
        match self {
            Style::Unicode => "⊕",
            Style::Ascii => "(+)",
        }
    }

    fn tensor(self) -> &'static str {
        match self {
            Style::Unicode => "⊗",
            Style::Ascii => "(x)",
        }
    }

    fn dot(self) -> &'static str {
        match self {
            Style::Unicode => "·",
            Style::Ascii => ".",
        }
    }

    fn delta(self) -> &'static str {
        match self {
            Style::Unicode => "Δ",
            Style::Ascii => "D",
        }
    }

    fn infinity(self) -> &'static str {
        match self {
            Style::Unicode => "∞",
            Style::Ascii => "inf",
        }
    }
}

/// One generating block of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraTerm {
    MatrixBlock(u64),
    ScalarIdentity(HilbertExpr),
    Compacts(HilbertExpr),
    IdentityTensorCompacts {
        identity: HilbertExpr,
        compact: HilbertExpr,
    },
    Diagonal {
        identities: Vec<HilbertExpr>,
        compact: HilbertExpr,
    },
}

impl AlgebraTerm {
    /// Normal forms; zero blocks vanish and a diagonal coupling over a
    /// one-dimensional compact factor splits into independent scalars.
    pub fn normalize(&self) -> Vec<AlgebraTerm> {
        match self {
            AlgebraTerm::MatrixBlock(0) => vec![],
            AlgebraTerm::MatrixBlock(n) => vec![AlgebraTerm::MatrixBlock(*n)],
            AlgebraTerm::ScalarIdentity(h) => {
                let h = h.canonical();
                match h.total_dim() {
                    Dim::Finite(0) => vec![],
                    Dim::Finite(1) => vec![AlgebraTerm::MatrixBlock(1)],
                    _ => vec![AlgebraTerm::ScalarIdentity(h)],
                }
            }
            AlgebraTerm::Compacts(h) => {
                let h = h.canonical();
                match h.total_dim() {
                    Dim::Finite(0) => vec![],
                    Dim::Finite(n) => vec![AlgebraTerm::MatrixBlock(n)],
                    Dim::Infinite => vec![AlgebraTerm::Compacts(h)],
                }
            }
            AlgebraTerm::IdentityTensorCompacts { identity, compact } => {
                let identity = identity.canonical();
                let compact = compact.canonical();
                if identity.is_zero() || compact.is_zero() {
                    vec![]
                } else if identity == HilbertExpr::Finite(1) {
                    AlgebraTerm::Compacts(compact).normalize()
                } else if compact.total_dim() == Dim::Finite(1) {
                    AlgebraTerm::ScalarIdentity(identity).normalize()
                } else {
                    vec![AlgebraTerm::IdentityTensorCompacts { identity, compact }]
                }
            }
            AlgebraTerm::Diagonal {
                identities,
                compact,
            } => {
                let compact = compact.canonical();
                let mut ids: Vec<HilbertExpr> = identities
                    .iter()
                    .map(HilbertExpr::canonical)
                    .filter(|h| !h.is_zero())
                    .collect();
                ids.sort();
                if ids.is_empty() || compact.is_zero() {
                    return vec![];
                }
                if compact.total_dim() == Dim::Finite(1) {
                    return ids
                        .into_iter()
                        .flat_map(|h| AlgebraTerm::ScalarIdentity(h).normalize())
                        .collect();
                }
                if ids.len() == 1 {
                    return AlgebraTerm::IdentityTensorCompacts {
                        identity: ids.pop().expect("one identity"),
                        compact,
                    }
                    .normalize();
                }
                vec![AlgebraTerm::Diagonal {
                    identities: ids,
                    compact,
                }]
            }
        }
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> AlgebraTerm {
        match self {
            AlgebraTerm::MatrixBlock(n) => AlgebraTerm::MatrixBlock(*n),
            AlgebraTerm::ScalarIdentity(h) => AlgebraTerm::ScalarIdentity(h.rename(map)),
            AlgebraTerm::Compacts(h) => AlgebraTerm::Compacts(h.rename(map)),
            AlgebraTerm::IdentityTensorCompacts { identity, compact } => {
                AlgebraTerm::IdentityTensorCompacts {
                    identity: identity.rename(map),
                    compact: compact.rename(map),
                }
            }
            AlgebraTerm::Diagonal {
                identities,
                compact,
            } => AlgebraTerm::Diagonal {
                identities: identities.iter().map(|h| h.rename(map)).collect(),
                compact: compact.rename(map),
            },
        }
    }

    fn spaces(&self) -> Vec<&HilbertExpr> {
        match self {
            AlgebraTerm::MatrixBlock(_) => vec![],
            AlgebraTerm::ScalarIdentity(h) | AlgebraTerm::Compacts(h) => vec![h],
            AlgebraTerm::IdentityTensorCompacts { identity, compact } => vec![identity, compact],
            AlgebraTerm::Diagonal {
                identities,
                compact,
            } => identities.iter().chain(std::iter::once(compact)).collect(),
        }
    }

    pub fn render(&self, style: Style) -> String {
        let dot = style.dot();
        let ten = style.tensor();
        match self {
            AlgebraTerm::MatrixBlock(n) => format!("M({n},C)"),
            AlgebraTerm::ScalarIdentity(h) => format!("C{dot}I({})", h.render(style)),
            AlgebraTerm::Compacts(h) => format!("K({})", h.render(style)),
            AlgebraTerm::IdentityTensorCompacts { identity, compact } => format!(
                "C{dot}I({}) {ten} K({})",
                identity.render(style),
                compact.render(style)
            ),
            AlgebraTerm::Diagonal {
                identities,
                compact,
            } => {
                let ids: Vec<String> = identities.iter().map(|h| h.render(style)).collect();
                format!(
                    "{}({}) {ten} K({})",
                    style.delta(),
                    ids.join("; "),
                    compact.render(style)
                )
            }
        }
    }
}

/// An algebra given by the union of its generating blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraExpr {
    pub terms: Vec<AlgebraTerm>,
}

impl AlgebraExpr {
    pub fn new(terms: Vec<AlgebraTerm>) -> Self {
        AlgebraExpr { terms }.canonical()
    }

    /// Normalized terms, sorted, duplicates merged.
    pub fn canonical(&self) -> Self {
        let mut terms: Vec<AlgebraTerm> =
            self.terms.iter().flat_map(AlgebraTerm::normalize).collect();
        terms.sort();
        terms.dedup();
        AlgebraExpr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Names of all abstract components.
    pub fn named_components(&self) -> BTreeSet<String> {
        self.terms
            .iter()
            .flat_map(|t| {
                t.spaces()
                    .into_iter()
                    .flat_map(HilbertExpr::named_components)
            })
            .collect()
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> AlgebraExpr {
        AlgebraExpr {
            terms: self.terms.iter().map(|t| t.rename(map)).collect(),
        }
    }

    pub fn render(&self, style: Style) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|t| t.render(style))
            .collect::<Vec<_>>()
            .join(&format!(" {} ", style.plus()))
    }
}

impl fmt::Display for AlgebraExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Unicode))
    }
}

impl fmt::Display for HilbertExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Unicode))
    }
}

/// Compares two algebras after renaming the components of the first.
///
/// `relabel` must be injective and name every abstract component of `e1`;
/// ℓ² factors are renamed only when listed.
pub fn equal_upto_relabeling(
    e1: &AlgebraExpr,
    e2: &AlgebraExpr,
    relabel: &BTreeMap<String, String>,
) -> Result<bool> {
    let missing: Vec<String> = e1
        .named_components()
        .into_iter()
        .filter(|n| !relabel.contains_key(n))
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteRelabeling(format!(
            "no image for {}",
            missing.join(", ")
        )));
    }
    let images: BTreeSet<&String> = relabel.values().collect();
    if images.len() != relabel.len() {
        return Err(Error::IncompleteRelabeling(
            "relabeling is not injective".into(),
        ));
    }
    Ok(e1.rename(relabel).canonical() == e2.canonical())
}

/// Searches all bijections between the component names of two algebras.
/// Returns the first relabeling under which they agree.
pub fn find_relabeling(e1: &AlgebraExpr, e2: &AlgebraExpr) -> Option<BTreeMap<String, String>> {
    find_joint_relabeling(&[(e1.clone(), e2.clone())])
}

/// One relabeling that makes every pair agree at once.
pub fn find_joint_relabeling(
    pairs: &[(AlgebraExpr, AlgebraExpr)],
) -> Option<BTreeMap<String, String>> {
    let a: Vec<String> = pairs
        .iter()
        .flat_map(|(x, _)| x.named_components())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let b: Vec<String> = pairs
        .iter()
        .flat_map(|(_, y)| y.named_components())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if a.len() != b.len() || a.len() > 8 {
        return None;
    }
    let targets: Vec<AlgebraExpr> = pairs.iter().map(|(_, y)| y.canonical()).collect();
    let mut used = vec![false; b.len()];
    let mut map = BTreeMap::new();
    fn rec(
        k: usize,
        a: &[String],
        b: &[String],
        used: &mut [bool],
        map: &mut BTreeMap<String, String>,
        pairs: &[(AlgebraExpr, AlgebraExpr)],
        targets: &[AlgebraExpr],
    ) -> bool {
        if k == a.len() {
            return pairs
                .iter()
                .zip(targets)
                .all(|((x, _), t)| x.rename(map).canonical() == *t);
        }
        for i in 0..b.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            map.insert(a[k].clone(), b[i].clone());
            if rec(k + 1, a, b, used, map, pairs, targets) {
                return true;
            }
            used[i] = false;
        }
        map.remove(&a[k]);
        false
    }
    if rec(0, &a, &b, &mut used, &mut map, pairs, &targets) {
        Some(map)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// parsing

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

const NAME_STOP: &[char] = &['(', ')', '⊕', '⊗', ';', ',', '·'];

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            msg: format!("{} at byte {}", msg.into(), self.pos),
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    fn eat_plus(&mut self) -> bool {
        self.eat("⊕") || self.eat("(+)")
    }

    fn eat_tensor(&mut self) -> bool {
        self.eat("⊗") || self.eat("(x)")
    }

    fn eat_dot(&mut self) -> bool {
        self.eat("·") || self.eat(".")
    }

    fn name(&mut self) -> Result<String> {
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(_, c)| c.is_whitespace() || NAME_STOP.contains(&c))
            .map_or(rest.len(), |(i, _)| i);
        if end == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(_, c)| !c.is_ascii_digit())
            .map_or(rest.len(), |(i, _)| i);
        let n = rest[..end]
            .parse()
            .map_err(|_| self.err("expected a number"))?;
        self.pos += end;
        Ok(n)
    }

    fn hilbert_sum(&mut self) -> Result<HilbertExpr> {
        let mut parts = vec![self.hilbert_tensor()?];
        while self.eat_plus() {
            parts.push(self.hilbert_tensor()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            HilbertExpr::Sum(parts)
        })
    }

    fn hilbert_tensor(&mut self) -> Result<HilbertExpr> {
        let mut parts = vec![self.hilbert_atom()?];
        while self.eat_tensor() {
            parts.push(self.hilbert_atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            HilbertExpr::Tensor(parts)
        })
    }

    fn hilbert_atom(&mut self) -> Result<HilbertExpr> {
        self.skip_ws();
        if self.eat("C^") {
            return Ok(HilbertExpr::Finite(self.number()?));
        }
        if self.rest().starts_with("(+)") || self.rest().starts_with("(x)") {
            return Err(self.err("operator where a space was expected"));
        }
        if self.eat("(") {
            let e = self.hilbert_sum()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("H") {
            return Ok(HilbertExpr::Named(self.name()?));
        }
        if self.eat("l") {
            let n = self.name()?;
            let n = if n == "inf" {
                INFINITE_FACTOR.to_string()
            } else {
                n
            };
            return Ok(HilbertExpr::Separable(n));
        }
        Err(self.err("expected `C^d`, `H<name>`, `l<name>` or `(`"))
    }

    fn term(&mut self) -> Result<AlgebraTerm> {
        self.skip_ws();
        if self.eat("M(") {
            let n = self.number()?;
            self.expect(",")?;
            self.expect("C")?;
            self.expect(")")?;
            return Ok(AlgebraTerm::MatrixBlock(n));
        }
        if self.eat("K(") {
            let h = self.hilbert_sum()?;
            self.expect(")")?;
            return Ok(AlgebraTerm::Compacts(h));
        }
        if self.eat("Δ(") || self.eat("D(") {
            let mut ids = vec![self.hilbert_sum()?];
            while self.eat(";") {
                ids.push(self.hilbert_sum()?);
            }
            self.expect(")")?;
            if !self.eat_tensor() {
                return Err(self.err("expected `⊗ K(...)` after a diagonal block"));
            }
            self.expect("K(")?;
            let compact = self.hilbert_sum()?;
            self.expect(")")?;
            return Ok(AlgebraTerm::Diagonal {
                identities: ids,
                compact,
            });
        }
        if self.eat("C") {
            if !self.eat_dot() {
                return Err(self.err("expected `·` after `C`"));
            }
            self.expect("I(")?;
            let identity = self.hilbert_sum()?;
            self.expect(")")?;
            let save = self.pos;
            if self.eat_tensor() {
                if self.eat("K(") {
                    let compact = self.hilbert_sum()?;
                    self.expect(")")?;
                    return Ok(AlgebraTerm::IdentityTensorCompacts { identity, compact });
                }
                self.pos = save;
                return Err(self.err("expected `K(` after `⊗`"));
            }
            return Ok(AlgebraTerm::ScalarIdentity(identity));
        }
        Err(self.err("expected a term `C·I(…)`, `K(…)`, `M(n,C)` or `Δ(…)`"))
    }
}

/// Parses an algebra in the text form produced by [`AlgebraExpr::render`]
/// (Unicode or ASCII). The result is not canonicalized.
pub fn parse_algebra(src: &str) -> Result<AlgebraExpr> {
    let mut p = Parser { src, pos: 0 };
    p.skip_ws();
    if p.rest().trim() == "0" {
        return Ok(AlgebraExpr::default());
    }
    let mut terms = vec![p.term()?];
    while p.eat_plus() {
        terms.push(p.term()?);
    }
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(p.err("trailing input"));
    }
    Ok(AlgebraExpr { terms })
}

/// Parses a Hilbert-space expression. The result is not canonicalized.
pub fn parse_hilbert(src: &str) -> Result<HilbertExpr> {
    let mut p = Parser { src, pos: 0 };
    let h = p.hilbert_sum()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(p.err("trailing input"));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(n: &str) -> HilbertExpr {
        HilbertExpr::named(n)
    }

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn compacts_on_finite_space_are_matrices() {
        let e = AlgebraExpr::new(vec![AlgebraTerm::Compacts(HilbertExpr::Finite(3))]);
        assert_eq!(e.terms, vec![AlgebraTerm::MatrixBlock(3)]);
        assert_eq!(e.render(Style::Unicode), "M(3,C)");
    }

    #[test]
    fn zero_summands_and_unit_factors_vanish() {
        let s = HilbertExpr::Sum(vec![HilbertExpr::Finite(0), h("1")]);
        assert_eq!(s.canonical(), h("1"));
        let t = HilbertExpr::Tensor(vec![HilbertExpr::separable("q"), HilbertExpr::Finite(1)]);
        assert_eq!(t.canonical(), HilbertExpr::separable("q"));
    }

    #[test]
    fn dimensions() {
        let t = HilbertExpr::Tensor(vec![HilbertExpr::separable("q"), HilbertExpr::Finite(2)]);
        assert_eq!(t.total_dim(), Dim::Infinite);
        let s = HilbertExpr::Sum(vec![HilbertExpr::Finite(2), HilbertExpr::Finite(3)]);
        assert_eq!(s.total_dim(), Dim::Finite(5));
        let z = HilbertExpr::Tensor(vec![HilbertExpr::separable("q"), HilbertExpr::Finite(0)]);
        assert_eq!(z.total_dim(), Dim::Finite(0));
    }

    #[test]
    fn relabeling() {
        let e1 = AlgebraExpr::new(vec![
            AlgebraTerm::ScalarIdentity(h("a")),
            AlgebraTerm::Compacts(HilbertExpr::sum(vec![h("a"), h("b")])),
        ]);
        let e2 = AlgebraExpr::new(vec![
            AlgebraTerm::ScalarIdentity(h("1")),
            AlgebraTerm::Compacts(HilbertExpr::sum(vec![h("1"), h("2")])),
        ]);
        assert!(equal_upto_relabeling(&e1, &e2, &map(&[("a", "1"), ("b", "2")])).unwrap());
        assert!(!equal_upto_relabeling(&e1, &e2, &map(&[("a", "2"), ("b", "1")])).unwrap());
        assert!(matches!(
            equal_upto_relabeling(&e1, &e2, &map(&[("a", "1")])),
            Err(Error::IncompleteRelabeling(_))
        ));
        assert!(matches!(
            equal_upto_relabeling(&e1, &e2, &map(&[("a", "1"), ("b", "1")])),
            Err(Error::IncompleteRelabeling(_))
        ));
        assert_eq!(
            find_relabeling(&e1, &e2),
            Some(map(&[("a", "1"), ("b", "2")]))
        );
    }

    #[test]
    fn render_and_parse() {
        let src = "C·I(H1) ⊕ C·I(H2) ⊕ K(H1 ⊕ H2)";
        let e = parse_algebra(src).unwrap();
        assert_eq!(e.canonical().render(Style::Unicode), src);
        assert_eq!(
            e.render(Style::Ascii),
            "C.I(H1) (+) C.I(H2) (+) K(H1 (+) H2)"
        );
        assert_eq!(parse_algebra(&e.render(Style::Ascii)).unwrap(), e);
        let d = "Δ(H1; H3) ⊗ K(lq ⊗ (H5 ⊕ H6)) ⊕ M(2,C)";
        let e = parse_algebra(d).unwrap();
        assert_eq!(e.render(Style::Unicode), d);
        assert_eq!(parse_algebra("0").unwrap(), AlgebraExpr::default());
        assert!(parse_algebra("K(H1").is_err());
        assert!(parse_algebra("K(H1) extra").is_err());
        assert!(parse_algebra("C·I()").is_err());
    }

    #[test]
    fn diagonal_normal_forms() {
        let one = AlgebraTerm::Diagonal {
            identities: vec![h("1")],
            compact: h("2"),
        };
        assert_eq!(
            one.normalize(),
            vec![AlgebraTerm::IdentityTensorCompacts {
                identity: h("1"),
                compact: h("2")
            }]
        );
        let scalar = AlgebraTerm::Diagonal {
            identities: vec![h("1"), h("3")],
            compact: HilbertExpr::Finite(1),
        };
        assert_eq!(
            scalar.normalize(),
            vec![
                AlgebraTerm::ScalarIdentity(h("1")),
                AlgebraTerm::ScalarIdentity(h("3"))
            ]
        );
        let dead = AlgebraTerm::Diagonal {
            identities: vec![h("1")],
            compact: HilbertExpr::Finite(0),
        };
        assert!(dead.normalize().is_empty());
    }

    #[test]
    fn expansion_distributes() {
        let e = HilbertExpr::Tensor(vec![
            HilbertExpr::separable("q"),
            HilbertExpr::Sum(vec![h("1"), HilbertExpr::Finite(2)]),
        ]);
        let want = HilbertExpr::sum(vec![
            HilbertExpr::tensor(vec![HilbertExpr::separable("q"), h("1")]),
            HilbertExpr::tensor(vec![HilbertExpr::separable("q"), HilbertExpr::Finite(2)]),
        ]);
        assert_eq!(e.expanded(), want);
    }

    fn arb_hilbert() -> impl Strategy<Value = HilbertExpr> {
        let leaf = prop_oneof![
            (0u64..4).prop_map(HilbertExpr::Finite),
            "[1-4]".prop_map(HilbertExpr::Named),
            "[a-c]".prop_map(HilbertExpr::Separable),
        ];
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..3).prop_map(HilbertExpr::Tensor),
                prop::collection::vec(inner, 0..3).prop_map(HilbertExpr::Sum),
            ]
        })
    }

    fn arb_term() -> impl Strategy<Value = AlgebraTerm> {
        prop_oneof![
            (0u64..4).prop_map(AlgebraTerm::MatrixBlock),
            arb_hilbert().prop_map(AlgebraTerm::ScalarIdentity),
            arb_hilbert().prop_map(AlgebraTerm::Compacts),
            (arb_hilbert(), arb_hilbert()).prop_map(|(identity, compact)| {
                AlgebraTerm::IdentityTensorCompacts { identity, compact }
            }),
            (prop::collection::vec(arb_hilbert(), 1..3), arb_hilbert()).prop_map(
                |(identities, compact)| AlgebraTerm::Diagonal {
                    identities,
                    compact
                }
            ),
        ]
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent(e in arb_hilbert()) {
            let c = e.canonical();
            prop_assert_eq!(c.canonical(), c.clone());
            prop_assert_eq!(c.total_dim(), e.total_dim());
        }

        #[test]
        fn canonical_ignores_operand_order(v in prop::collection::vec(arb_hilbert(), 0..4)) {
            let mut r = v.clone();
            r.reverse();
            prop_assert_eq!(HilbertExpr::sum(v.clone()), HilbertExpr::sum(r.clone()));
            prop_assert_eq!(HilbertExpr::tensor(v), HilbertExpr::tensor(r));
        }

        #[test]
        fn algebra_canonical_roundtrips_through_text(terms in prop::collection::vec(arb_term(), 0..4)) {
            let e = AlgebraExpr::new(terms);
            prop_assert_eq!(e.canonical(), e.clone());
            for style in [Style::Unicode, Style::Ascii] {
                let text = e.render(style);
                let back = parse_algebra(&text).unwrap();
                prop_assert_eq!(back.canonical(), e.clone());
            }
            let text = e.render(Style::Unicode);
            prop_assert_eq!(parse_algebra(&text).unwrap().render(Style::Unicode), text);
        }

        #[test]
        fn dims_are_additive_and_multiplicative(a in arb_hilbert(), b in arb_hilbert()) {
            let add = |x: Dim, y: Dim| match (x, y) {
                (Dim::Finite(p), Dim::Finite(q)) => Dim::Finite(p + q),
                _ => Dim::Infinite,
            };
            let mul = |x: Dim, y: Dim| match (x, y) {
                (Dim::Finite(0), _) | (_, Dim::Finite(0)) => Dim::Finite(0),
                (Dim::Finite(p), Dim::Finite(q)) => Dim::Finite(p * q),
                _ => Dim::Infinite,
            };
            let s = HilbertExpr::Sum(vec![a.clone(), b.clone()]);
            let t = HilbertExpr::Tensor(vec![a.clone(), b.clone()]);
            prop_assert_eq!(s.total_dim(), add(a.total_dim(), b.total_dim()));
            prop_assert_eq!(t.total_dim(), mul(a.total_dim(), b.total_dim()));
        }
    }
}
