//! The Behncke–Leptin algebras `A(P, d)` over a finite poset `P` with
//! defector `d : P → ℕ̄`.
//!
//! For a forest `F` every point `y` owns one chain space
//! `l_{x1} ⊗ … ⊗ l_{x(k−1)} ⊗ ℂ^{d(y)}` built from its down-chain
//! `x1 ≺ … ≺ x(k−1) ≺ y`. The point `x` acts on `H(x)`, the sum of the chain
//! spaces of all `y ⪰ x`, which factors as `H_x ⊗ H(F_x, d_x)` with `H_x` the
//! tensor product of the ℓ² factors strictly below `x`; its generator is
//! `R_x = ℂ·I(H_x) ⊗ K(H(F_x, d_x))`.
//!
//! A general poset is unfolded into its covering forest of ropes (cover
//! chains starting at a minimal point), the defector is pulled back along the
//! endpoint map `φ`, and the generators of all ropes ending at `x` are tied
//! together by one shared compact factor with independent scalars.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::algebra::{AlgebraExpr, AlgebraTerm, Dim, HilbertExpr, INFINITE_FACTOR};
use crate::error::{Error, Result};
use crate::poset::{ElemSet, Poset};

/// Most ropes a covering forest may have.
pub const MAX_ROPES: usize = 100_000;

/// Most defectors visited by the equivalence search.
pub const MAX_SEARCH_STATES: usize = 1_000_000;

// ---------------------------------------------------------------------------
// defectors

/// A map from the points of a poset to `{0, 1, 2, …, ∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Defector {
    values: Vec<Dim>,
}

/// Parses `x1=1, x2=inf` into label/value pairs without consulting a poset.
pub fn parse_defector_spec(src: &str) -> Result<Vec<(String, Dim)>> {
    let mut out = Vec::new();
    for item in src.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (label, value) = item.split_once('=').ok_or_else(|| {
            Error::InvalidDefector(format!("expected `label=value`, got `{item}`"))
        })?;
        let label = label.trim();
        let value = value.trim();
        if !crate::poset::valid_label(label) {
            return Err(Error::InvalidDefector(format!("invalid label `{label}`")));
        }
        let v = match value {
            "inf" | "∞" => Dim::Infinite,
            digits => Dim::Finite(digits.parse().map_err(|_| {
                Error::InvalidDefector(format!("`{digits}` is neither a natural number nor `inf`"))
            })?),
        };
        out.push((label.to_string(), v));
    }
    Ok(out)
}

impl Defector {
    /// A defector from one value per element, in element order.
    pub fn new(p: &Poset, values: Vec<Dim>) -> Result<Self> {
        if values.len() != p.len() {
            return Err(Error::InvalidDefector(format!(
                "{} values for {} points",
                values.len(),
                p.len()
            )));
        }
        Ok(Defector { values })
    }

    /// Parses `x1=1,x2=inf`; every point must be given exactly once.
    pub fn parse(p: &Poset, src: &str) -> Result<Self> {
        let mut values: Vec<Option<Dim>> = vec![None; p.len()];
        for (label, v) in parse_defector_spec(src)? {
            let i = p.index_of(&label)?;
            if values[i].replace(v).is_some() {
                return Err(Error::InvalidDefector(format!("`{label}` assigned twice")));
            }
        }
        let missing: Vec<&str> = (0..p.len())
            .filter(|&i| values[i].is_none())
            .map(|i| p.label(i))
            .collect();
        if !missing.is_empty() {
            return Err(Error::InvalidDefector(format!(
                "no value for {}",
                missing.join(", ")
            )));
        }
        Ok(Defector {
            values: values.into_iter().map(|v| v.expect("checked")).collect(),
        })
    }

    /// 1 on maximal points, 0 elsewhere.
    pub fn canonical(p: &Poset) -> Self {
        Defector {
            values: (0..p.len())
                .map(|x| Dim::Finite(u64::from(p.is_maximal(x))))
                .collect(),
        }
    }

    pub fn value(&self, x: usize) -> Dim {
        self.values[x]
    }

    pub fn values(&self) -> &[Dim] {
        &self.values
    }

    /// Positive on every maximal point.
    pub fn is_valid(&self, p: &Poset) -> bool {
        p.maximal_points()
            .iter()
            .all(|&x| self.values[x] != Dim::Finite(0))
    }

    /// `d ∘ φ` for a permutation given as an image vector.
    pub fn compose(&self, perm: &[usize]) -> Defector {
        Defector {
            values: perm.iter().map(|&i| self.values[i]).collect(),
        }
    }

    pub fn render(&self, p: &Poset) -> String {
        (0..p.len())
            .map(|i| format!("{}={}", p.label(i), render_dim(self.values[i])))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn max_finite(&self) -> u64 {
        self.values
            .iter()
            .filter_map(|v| match v {
                Dim::Finite(n) => Some(*n),
                Dim::Infinite => None,
            })
            .max()
            .unwrap_or(0)
    }
}

fn render_dim(d: Dim) -> String {
    match d {
        Dim::Finite(n) => n.to_string(),
        Dim::Infinite => "inf".to_string(),
    }
}

fn check_defector(p: &Poset, d: &Defector, override_51: bool) -> Result<()> {
    if d.values.len() != p.len() {
        return Err(Error::InvalidDefector("defector is not total".into()));
    }
    if !override_51 && !d.is_valid(p) {
        let bad: Vec<&str> = p
            .maximal_points()
            .iter()
            .filter(|&&x| d.values[x] == Dim::Finite(0))
            .map(|&x| p.label(x))
            .collect();
        return Err(Error::InvalidDefector(format!(
            "maximal points need positive values: {}",
            bad.join(", ")
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// forests

/// Every down-set is a chain.
pub fn is_forest(p: &Poset) -> bool {
    (0..p.len()).all(|z| {
        let below: Vec<usize> = p.min_open(z).into_iter().collect();
        below
            .iter()
            .all(|&x| below.iter().all(|&y| p.comparable(x, y)))
    })
}

/// The down-set of `x` in a forest, bottom to top.
fn down_chain(f: &Poset, x: usize) -> Vec<usize> {
    let mut v: Vec<usize> = f.min_open(x).into_iter().collect();
    v.sort_by_key(|&y| f.min_open(y).len());
    v
}

/// The forest `F′`: a copy `x^(1)` of every point and a copy `x^(2)` of
/// every non-maximal point; `x^(2)` is covered by `y^(1)` and `y^(2)` when
/// `y` covers `x`.
#[derive(Clone, Debug)]
pub struct AuxForest {
    pub poset: Poset,
    /// For each element of `F′`: the point of `F` and the superscript.
    pub back: Vec<(usize, u8)>,
}

pub fn auxiliary_forest(f: &Poset) -> Result<AuxForest> {
    if !is_forest(f) {
        return Err(Error::NotAForest);
    }
    let mut back = Vec::new();
    let mut slot: BTreeMap<(usize, u8), usize> = BTreeMap::new();
    for x in 0..f.len() {
        slot.insert((x, 1), back.len());
        back.push((x, 1));
        if !f.is_maximal(x) {
            slot.insert((x, 2), back.len());
            back.push((x, 2));
        }
    }
    let labels: Vec<String> = back
        .iter()
        .map(|&(x, s)| format!("{}^({s})", f.label(x)))
        .collect();
    let mut pairs = Vec::new();
    for &(x, y) in f.covers() {
        let lower = slot[&(x, 2)];
        pairs.push((lower, slot[&(y, 1)]));
        if let Some(&u) = slot.get(&(y, 2)) {
            pairs.push((lower, u));
        }
    }
    let poset = Poset::from_index_pairs(labels, &pairs).expect("auxiliary forest is acyclic");
    Ok(AuxForest { poset, back })
}

fn ell(name: &str) -> HilbertExpr {
    HilbertExpr::separable(name)
}

fn space_of(v: Dim) -> HilbertExpr {
    match v {
        Dim::Finite(n) => HilbertExpr::Finite(n),
        Dim::Infinite => HilbertExpr::separable(INFINITE_FACTOR),
    }
}

/// The space of a maximal chain of `F′`: one ℓ² factor per `x^(2)` and
/// `ℂ^{d(x)}` for the closing `x^(1)`.
pub fn chain_hilbert(f: &Poset, aux: &AuxForest, chain: &[usize], d: &Defector) -> HilbertExpr {
    let factors = chain
        .iter()
        .map(|&e| {
            let (x, s) = aux.back[e];
            if s == 2 {
                ell(f.label(x))
            } else {
                space_of(d.value(x))
            }
        })
        .collect();
    HilbertExpr::tensor(factors)
}

/// `H(F, d)`: the sum of all maximal-chain spaces of `F′`.
pub fn total_hilbert(f: &Poset, d: &Defector) -> Result<HilbertExpr> {
    let aux = auxiliary_forest(f)?;
    Ok(HilbertExpr::sum(
        aux.poset
            .maximal_chains()
            .iter()
            .map(|c| chain_hilbert(f, &aux, c, d))
            .collect(),
    ))
}

/// The forest data shared by the forest and covering-forest constructions.
struct ForestEngine<'a> {
    f: &'a Poset,
    values: Vec<Dim>,
    /// Name of the ℓ² factor contributed by each element.
    names: Vec<String>,
    order: Vec<usize>,
    component: Vec<HilbertExpr>,
    component_names: Vec<(String, usize)>,
}

impl<'a> ForestEngine<'a> {
    fn new(f: &'a Poset, values: Vec<Dim>, names: Vec<String>) -> Self {
        let mut order = Vec::with_capacity(f.len());
        fn dfs(f: &Poset, x: usize, order: &mut Vec<usize>) {
            order.push(x);
            for y in f.covers_of(x) {
                dfs(f, y, order);
            }
        }
        for m in f.minimal_points() {
            dfs(f, m, &mut order);
        }
        let mut engine = ForestEngine {
            f,
            values,
            names,
            order,
            component: Vec::new(),
            component_names: Vec::new(),
        };
        let mut component = vec![HilbertExpr::zero(); f.len()];
        let mut next = 1;
        for &x in &engine.order {
            let raw = engine.chain_space(x);
            component[x] = match raw.total_dim() {
                Dim::Infinite => {
                    let name = next.to_string();
                    engine.component_names.push((name.clone(), x));
                    next += 1;
                    HilbertExpr::named(name)
                }
                Dim::Finite(_) => raw,
            };
        }
        engine.component = component;
        engine
    }

    fn chain_space(&self, y: usize) -> HilbertExpr {
        let chain = down_chain(self.f, y);
        let mut factors: Vec<HilbertExpr> = chain[..chain.len() - 1]
            .iter()
            .map(|&z| ell(&self.names[z]))
            .collect();
        factors.push(space_of(self.values[y]));
        HilbertExpr::tensor(factors)
    }

    /// `H_x`: ℓ² factors strictly below `x`.
    fn h_below(&self, x: usize) -> HilbertExpr {
        let chain = down_chain(self.f, x);
        HilbertExpr::tensor(
            chain[..chain.len() - 1]
                .iter()
                .map(|&z| ell(&self.names[z]))
                .collect(),
        )
    }

    /// `H(F_x, d_x)`: chain spaces of the up-forest of `x`.
    fn upper(&self, x: usize) -> HilbertExpr {
        let summands = self
            .f
            .up_set(x)
            .into_iter()
            .map(|y| {
                let mut factors: Vec<HilbertExpr> = down_chain(self.f, y)
                    .into_iter()
                    .filter(|&z| z != y && self.f.leq(x, z))
                    .map(|z| ell(&self.names[z]))
                    .collect();
                factors.push(space_of(self.values[y]));
                HilbertExpr::Tensor(factors)
            })
            .collect();
        HilbertExpr::sum(summands)
    }

    /// `H(x)` summed directly over the chains through `x`.
    fn direct(&self, x: usize) -> HilbertExpr {
        HilbertExpr::sum(
            self.f
                .up_set(x)
                .into_iter()
                .map(|y| self.chain_space(y))
                .collect(),
        )
    }

    fn factorization(&self, x: usize) -> Result<PointSpace> {
        let h_x = self.h_below(x);
        let upper = self.upper(x);
        let direct = self.direct(x);
        let factored = HilbertExpr::tensor(vec![h_x.clone(), upper.clone()]);
        if factored.expanded() != direct.expanded() {
            return Err(Error::FactorizationMismatch(format!(
                "at {}: {} versus {}",
                self.f.label(x),
                direct,
                factored
            )));
        }
        Ok(PointSpace { h_x, upper, direct })
    }

    fn total(&self) -> HilbertExpr {
        HilbertExpr::sum(
            self.order
                .iter()
                .map(|&x| self.component[x].clone())
                .collect(),
        )
    }

    fn total_raw(&self) -> HilbertExpr {
        HilbertExpr::sum(self.order.iter().map(|&x| self.chain_space(x)).collect())
    }
}

/// `H(x)` with its factorization `H_x ⊗ H(F_x, d_x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpace {
    pub h_x: HilbertExpr,
    pub upper: HilbertExpr,
    pub direct: HilbertExpr,
}

/// `H(x)` of a forest, checked against its factorization.
pub fn point_subspace(f: &Poset, d: &Defector, x: usize) -> Result<PointSpace> {
    if !is_forest(f) {
        return Err(Error::NotAForest);
    }
    let e = ForestEngine::new(f, d.values.clone(), f.labels().to_vec());
    e.factorization(x)
}

/// `R_x` of a forest.
pub fn generator_algebra(f: &Poset, d: &Defector, x: usize) -> Result<AlgebraExpr> {
    let bl = algebra_of_forest(f, d, true)?;
    Ok(AlgebraExpr::new(bl.points[x].expanded.clone()))
}

// ---------------------------------------------------------------------------
// covering forest

/// Ropes of a poset ordered by extension, with the endpoint map.
#[derive(Clone, Debug)]
pub struct CoveringForest {
    pub ropes: Vec<Vec<usize>>,
    pub forest: Poset,
    pub phi: Vec<usize>,
}

impl CoveringForest {
    /// Ropes ending at `x`, in rope order.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        (0..self.ropes.len())
            .filter(|&r| self.phi[r] == x)
            .collect()
    }
}

/// Enumerates ropes depth-first from the minimal points.
pub fn covering_forest(p: &Poset) -> Result<CoveringForest> {
    let mut ropes: Vec<Vec<usize>> = Vec::new();
    let mut parents: Vec<Option<usize>> = Vec::new();
    fn dfs(
        p: &Poset,
        path: &mut Vec<usize>,
        parent: Option<usize>,
        ropes: &mut Vec<Vec<usize>>,
        parents: &mut Vec<Option<usize>>,
    ) -> Result<()> {
        if ropes.len() >= MAX_ROPES {
            return Err(Error::TooLarge {
                what: "covering forest",
                size: ropes.len() + 1,
                bound: MAX_ROPES,
            });
        }
        let me = ropes.len();
        ropes.push(path.clone());
        parents.push(parent);
        let top = *path.last().expect("rope is nonempty");
        for y in p.covers_of(top) {
            path.push(y);
            dfs(p, path, Some(me), ropes, parents)?;
            path.pop();
        }
        Ok(())
    }
    for m in p.minimal_points() {
        dfs(p, &mut vec![m], None, &mut ropes, &mut parents)?;
    }
    let labels: Vec<String> = ropes
        .iter()
        .map(|r| r.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join("-"))
        .collect();
    let pairs: Vec<(usize, usize)> = parents
        .iter()
        .enumerate()
        .filter_map(|(r, par)| par.map(|q| (q, r)))
        .collect();
    let forest = Poset::from_index_pairs(labels, &pairs).expect("rope extension is a forest");
    let phi = ropes.iter().map(|r| *r.last().expect("nonempty")).collect();
    Ok(CoveringForest { ropes, forest, phi })
}

// ---------------------------------------------------------------------------
// algebras

/// Generators attached to one point of the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointAlgebra {
    pub point: usize,
    pub fiber: Vec<usize>,
    /// Independent scalar per rope.
    pub expanded: Vec<AlgebraTerm>,
    /// Identity parts over the fiber fused into one block.
    pub fused: Vec<AlgebraTerm>,
}

/// `A(P, d)` together with everything needed to present it.
#[derive(Clone, Debug)]
pub struct BlAlgebra {
    pub poset: Poset,
    pub defector: Defector,
    pub cover: CoveringForest,
    /// `(name, rope, raw chain space)` for every infinite-dimensional component.
    pub legend: Vec<(String, usize, HilbertExpr)>,
    /// `H(P̄, d̄)` in component names.
    pub total: HilbertExpr,
    /// `H(P̄, d̄)` written out in ℓ² factors.
    pub total_raw: HilbertExpr,
    pub points: Vec<PointAlgebra>,
    /// Component (or finite space) of every rope.
    pub rope_component: Vec<HilbertExpr>,
    h_below: Vec<HilbertExpr>,
    upper: Vec<HilbertExpr>,
}

impl BlAlgebra {
    pub fn expanded(&self) -> AlgebraExpr {
        AlgebraExpr::new(
            self.points
                .iter()
                .flat_map(|p| p.expanded.clone())
                .collect(),
        )
    }

    pub fn fused(&self) -> AlgebraExpr {
        AlgebraExpr::new(self.points.iter().flat_map(|p| p.fused.clone()).collect())
    }

    /// For each point `x`: the generators of all `y ⪰ x`, cut down to the
    /// ropes that extend a rope ending at `x`.
    pub fn local_rows(&self) -> Vec<AlgebraExpr> {
        (0..self.poset.len())
            .map(|x| {
                let base: Vec<&Vec<usize>> = self.points[x]
                    .fiber
                    .iter()
                    .map(|&r| &self.cover.ropes[r])
                    .collect();
                let mut terms = Vec::new();
                for y in self.poset.up_set(x) {
                    let sub: Vec<usize> = self.points[y]
                        .fiber
                        .iter()
                        .copied()
                        .filter(|&s| base.iter().any(|b| self.cover.ropes[s].starts_with(b)))
                        .collect();
                    terms.extend(self.terms_for(&sub, false));
                }
                AlgebraExpr::new(terms)
            })
            .collect()
    }

    /// Generator blocks of a set of ropes sharing one endpoint.
    fn terms_for(&self, ropes: &[usize], fused: bool) -> Vec<AlgebraTerm> {
        let Some(&first) = ropes.first() else {
            return vec![];
        };
        let compact = &self.upper[first];
        match compact.total_dim() {
            Dim::Finite(0) => vec![],
            Dim::Finite(1) => {
                let comps: Vec<HilbertExpr> = ropes
                    .iter()
                    .map(|&r| self.rope_component[r].clone())
                    .collect();
                if fused {
                    vec![AlgebraTerm::ScalarIdentity(HilbertExpr::sum(comps))]
                } else {
                    comps.into_iter().map(AlgebraTerm::ScalarIdentity).collect()
                }
            }
            _ if ropes.len() == 1 && self.cover.ropes[first].len() == 1 => {
                let above: Vec<HilbertExpr> = self
                    .cover
                    .forest
                    .up_set(first)
                    .into_iter()
                    .map(|s| self.rope_component[s].clone())
                    .collect();
                vec![AlgebraTerm::Compacts(HilbertExpr::sum(above))]
            }
            _ => vec![AlgebraTerm::Diagonal {
                identities: ropes.iter().map(|&r| self.h_below[r].clone()).collect(),
                compact: compact.clone(),
            }],
        }
    }

    /// The ideal attached to a closed set: generators over its open complement.
    pub fn ideal_of_closed(&self, closed: &ElemSet) -> Result<IdealInfo> {
        if !self.poset.is_closed(closed) {
            return Err(Error::NotClosed(
                closed
                    .iter()
                    .map(|&x| self.poset.label(x).to_string())
                    .collect(),
            ));
        }
        let open = self.poset.complement(closed);
        let generators = AlgebraExpr::new(
            open.iter()
                .flat_map(|&x| self.points[x].expanded.clone())
                .collect(),
        );
        let primitive = (0..self.poset.len()).any(|x| self.poset.closure(&[x].into()) == *closed);
        Ok(IdealInfo {
            closed: closed.clone(),
            open,
            generators,
            primitive,
            proper: !closed.is_empty(),
        })
    }
}

/// An ideal `I_E` of `A(P, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealInfo {
    pub closed: ElemSet,
    pub open: ElemSet,
    pub generators: AlgebraExpr,
    pub primitive: bool,
    pub proper: bool,
}

/// `A(P, d)` for any finite poset.
///
/// With `override_51` the positivity of `d` on maximal points is not enforced.
pub fn algebra_of_poset(p: &Poset, d: &Defector, override_51: bool) -> Result<BlAlgebra> {
    check_defector(p, d, override_51)?;
    let cover = covering_forest(p)?;
    let values: Vec<Dim> = cover.phi.iter().map(|&x| d.value(x)).collect();
    let names: Vec<String> = cover.phi.iter().map(|&x| p.label(x).to_string()).collect();
    let engine = ForestEngine::new(&cover.forest, values, names);
    let mut h_below = Vec::with_capacity(cover.ropes.len());
    let mut upper = Vec::with_capacity(cover.ropes.len());
    for r in 0..cover.ropes.len() {
        let ps = engine.factorization(r)?;
        h_below.push(ps.h_x);
        upper.push(ps.upper);
    }
    let legend = engine
        .component_names
        .iter()
        .map(|(n, r)| (n.clone(), *r, engine.chain_space(*r)))
        .collect();
    let mut bl = BlAlgebra {
        poset: p.clone(),
        defector: d.clone(),
        total: engine.total(),
        total_raw: engine.total_raw(),
        rope_component: engine.component.clone(),
        legend,
        points: Vec::new(),
        h_below,
        upper,
        cover,
    };
    for x in 0..p.len() {
        let fiber = bl.cover.fiber(x);
        for w in fiber.windows(2) {
            if bl.upper[w[0]].total_dim() != bl.upper[w[1]].total_dim() {
                return Err(Error::FactorizationMismatch(format!(
                    "ropes ending at {} carry different compact factors",
                    p.label(x)
                )));
            }
        }
        let expanded = bl.terms_for(&fiber, false);
        let fused = bl.terms_for(&fiber, true);
        bl.points.push(PointAlgebra {
            point: x,
            fiber,
            expanded,
            fused,
        });
    }
    Ok(bl)
}

/// `A(F, d)` for a forest.
pub fn algebra_of_forest(f: &Poset, d: &Defector, override_51: bool) -> Result<BlAlgebra> {
    if !is_forest(f) {
        return Err(Error::NotAForest);
    }
    algebra_of_poset(f, d, override_51)
}

// ---------------------------------------------------------------------------
// equivalence

fn plus(a: Dim, b: Dim) -> Dim {
    match (a, b) {
        (Dim::Finite(x), Dim::Finite(y)) => x.checked_add(y).map_or(Dim::Infinite, Dim::Finite),
        _ => Dim::Infinite,
    }
}

/// Defectors agreeing off one non-maximal point `y`, where they differ by the
/// value of a point `z` covering `y` (`d(z) = d′(z) < ∞`), or where some
/// point covering `y` carries `∞`.
pub fn immediately_equivalent(d1: &Defector, d2: &Defector, p: &Poset) -> bool {
    let diff: Vec<usize> = (0..p.len())
        .filter(|&x| d1.value(x) != d2.value(x))
        .collect();
    match diff.as_slice() {
        [] => true,
        [y] => {
            let y = *y;
            if p.is_maximal(y) {
                return false;
            }
            p.covers_of(y).into_iter().any(|z| match d1.value(z) {
                Dim::Infinite => true,
                dz => d1.value(y) == plus(d2.value(y), dz) || d2.value(y) == plus(d1.value(y), dz),
            })
        }
        _ => false,
    }
}

/// Outcome of the bounded equivalence search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Connected by `moves` immediate moves up to an automorphism.
    Equivalent {
        moves: usize,
    },
    NotFoundWithinBound,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equivalence::Equivalent { moves } => write!(f, "equivalent ({moves} moves)"),
            Equivalence::NotFoundWithinBound => write!(f, "not found within bound"),
        }
    }
}

/// Default cap on finite values explored: largest finite value plus `|P|`.
pub fn default_bound(d1: &Defector, d2: &Defector, p: &Poset) -> u64 {
    d1.max_finite().max(d2.max_finite()) + p.len() as u64
}

fn neighbours(d: &Defector, p: &Poset, bound: u64) -> Vec<Defector> {
    let mut out = Vec::new();
    for y in 0..p.len() {
        if p.is_maximal(y) {
            continue;
        }
        let mut values: BTreeSet<Dim> = BTreeSet::new();
        for z in p.covers_of(y) {
            match (d.value(z), d.value(y)) {
                (Dim::Infinite, _) => {
                    values.extend((0..=bound).map(Dim::Finite));
                    values.insert(Dim::Infinite);
                }
                (Dim::Finite(dz), Dim::Finite(dy)) => {
                    if dy + dz <= bound {
                        values.insert(Dim::Finite(dy + dz));
                    }
                    if dy >= dz {
                        values.insert(Dim::Finite(dy - dz));
                    }
                }
                (Dim::Finite(_), Dim::Infinite) => {}
            }
        }
        values.remove(&d.value(y));
        for v in values {
            let mut next = d.clone();
            next.values[y] = v;
            out.push(next);
        }
    }
    out
}

/// Breadth-first search over immediate moves from `d1` towards any `d2 ∘ φ`
/// with `φ` an automorphism, keeping finite values at most `bound`.
pub fn equivalent_defectors(
    d1: &Defector,
    d2: &Defector,
    p: &Poset,
    bound: u64,
    automorphism_bound: usize,
) -> Result<Equivalence> {
    let targets: HashSet<Defector> = p
        .automorphisms(automorphism_bound)?
        .iter()
        .map(|phi| d2.compose(phi))
        .collect();
    let mut seen: HashSet<Defector> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(d1.clone());
    queue.push_back((d1.clone(), 0usize));
    while let Some((d, depth)) = queue.pop_front() {
        if targets.contains(&d) {
            return Ok(Equivalence::Equivalent { moves: depth });
        }
        for n in neighbours(&d, p, bound) {
            if seen.len() >= MAX_SEARCH_STATES {
                return Ok(Equivalence::NotFoundWithinBound);
            }
            if seen.insert(n.clone()) {
                queue.push_back((n, depth + 1));
            }
        }
    }
    Ok(Equivalence::NotFoundWithinBound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{equal_upto_relabeling, find_relabeling, parse_algebra, Style};
    use crate::generate;

    fn def(p: &Poset, s: &str) -> Defector {
        Defector::parse(p, s).unwrap()
    }

    fn render(e: &AlgebraExpr) -> String {
        e.render(Style::Unicode)
    }

    #[test]
    fn forest_check() {
        assert!(is_forest(&generate::vee()));
        assert!(!is_forest(&generate::p4s1()));
        assert!(is_forest(&generate::chain(4)));
        assert!(is_forest(&generate::fork()));
    }

    fn chain_labels(aux: &AuxForest) -> Vec<Vec<String>> {
        aux.poset
            .maximal_chains()
            .iter()
            .map(|c| c.iter().map(|&e| aux.poset.label(e).to_string()).collect())
            .collect()
    }

    #[test]
    fn auxiliary_forest_chains() {
        let aux = auxiliary_forest(&generate::fork()).unwrap();
        let mut chains = chain_labels(&aux);
        chains.sort();
        let mut want: Vec<Vec<String>> = vec![
            vec!["x1^(1)".into()],
            vec!["x1^(2)".into(), "x2^(1)".into()],
            vec!["x1^(2)".into(), "x2^(2)".into(), "x3^(1)".into()],
            vec!["x1^(2)".into(), "x2^(2)".into(), "x4^(1)".into()],
        ];
        want.sort();
        assert_eq!(chains, want);
        let aux = auxiliary_forest(&generate::vee()).unwrap();
        let mut chains = chain_labels(&aux);
        chains.sort();
        assert_eq!(
            chains,
            vec![
                vec!["q^(1)".to_string()],
                vec!["q^(2)".into(), "p1^(1)".into()],
                vec!["q^(2)".into(), "p2^(1)".into()],
            ]
        );
        assert!(matches!(
            auxiliary_forest(&generate::p4s1()),
            Err(Error::NotAForest)
        ));
    }

    #[test]
    fn vee_hilbert_spaces() {
        let p = generate::vee();
        let d = def(&p, "p1=1,p2=1,q=0");
        assert_eq!(
            total_hilbert(&p, &d).unwrap().render(Style::Unicode),
            "lq ⊕ lq"
        );
        let bl = algebra_of_forest(&p, &d, false).unwrap();
        assert_eq!(bl.total.render(Style::Unicode), "H1 ⊕ H2");
        let p1 = p.index_of("p1").unwrap();
        let ps = point_subspace(&p, &d, p1).unwrap();
        assert_eq!(ps.h_x, ell("q"));
        assert_eq!(ps.direct, ell("q"));
        let q = p.index_of("q").unwrap();
        let ps = point_subspace(&p, &d, q).unwrap();
        assert_eq!(ps.h_x, HilbertExpr::one());
        assert_eq!(ps.direct, total_hilbert(&p, &d).unwrap());
    }

    #[test]
    fn vee_algebra_matches() {
        let p = generate::vee();
        let d = def(&p, "p1=1,p2=1,q=0");
        let bl = algebra_of_forest(&p, &d, false).unwrap();
        assert_eq!(render(&bl.expanded()), "C·I(H1) ⊕ C·I(H2) ⊕ K(H1 ⊕ H2)");
        let q = p.index_of("q").unwrap();
        assert_eq!(render(&generator_algebra(&p, &d, q).unwrap()), "K(H1 ⊕ H2)");
        let p1 = p.index_of("p1").unwrap();
        assert_eq!(render(&generator_algebra(&p, &d, p1).unwrap()), "C·I(H1)");
    }

    #[test]
    fn single_point_is_a_matrix_algebra() {
        let p = Poset::from_covers::<&str>(&["a"], &[]).unwrap();
        let bl = algebra_of_forest(&p, &def(&p, "a=3"), false).unwrap();
        assert_eq!(render(&bl.expanded()), "M(3,C)");
        assert_eq!(
            total_hilbert(&p, &def(&p, "a=3")).unwrap(),
            HilbertExpr::Finite(3)
        );
    }

    #[test]
    fn two_chain() {
        let p = Poset::from_covers(&["a", "b"], &[("a", "b")]).unwrap();
        let d = def(&p, "a=0,b=1");
        assert_eq!(total_hilbert(&p, &d).unwrap(), ell("a"));
        let bl = algebra_of_forest(&p, &d, false).unwrap();
        assert_eq!(render(&bl.expanded()), "C·I(H1) ⊕ K(H1)");
    }

    #[test]
    fn circle_covering_forest() {
        let p = generate::p4s1();
        let c = covering_forest(&p).unwrap();
        assert_eq!(
            c.forest.labels(),
            ["x1", "x1-x2", "x1-x4", "x3", "x3-x2", "x3-x4"]
        );
        assert!(is_forest(&c.forest));
        assert_eq!(c.forest.minimal_points().len(), 2);
        let vee = covering_forest(&generate::vee()).unwrap();
        assert!(vee.forest.is_isomorphic(&generate::vee()));
    }

    #[test]
    fn circle_with_maximal_defector_reproduces_the_fused_form() {
        let p = generate::p4s1();
        let d = def(&p, "x1=0,x2=1,x3=0,x4=1");
        let bl = algebra_of_poset(&p, &d, false).unwrap();
        assert_eq!(
            render(&bl.fused()),
            "C·I(H1 ⊕ H3) ⊕ C·I(H2 ⊕ H4) ⊕ K(H1 ⊕ H2) ⊕ K(H3 ⊕ H4)"
        );
        assert_eq!(
            render(&bl.expanded()),
            "C·I(H1) ⊕ C·I(H2) ⊕ C·I(H3) ⊕ C·I(H4) ⊕ K(H1 ⊕ H2) ⊕ K(H3 ⊕ H4)"
        );
        let rows: Vec<String> = bl.local_rows().iter().map(render).collect();
        assert_eq!(rows[0], "C·I(H1) ⊕ C·I(H2) ⊕ K(H1 ⊕ H2)");
        assert_eq!(rows[1], "C·I(H1) ⊕ C·I(H3)");
        assert_eq!(rows[2], "C·I(H3) ⊕ C·I(H4) ⊕ K(H3 ⊕ H4)");
        assert_eq!(rows[3], "C·I(H2) ⊕ C·I(H4)");
    }

    #[test]
    fn forests_agree_with_their_covering_forest() {
        let f = generate::fork();
        let d = def(&f, "x1=2,x2=0,x3=1,x4=inf");
        let bl = algebra_of_forest(&f, &d, false).unwrap();
        assert!(bl.points.iter().all(|pa| pa.fiber.len() == 1));
        assert_eq!(bl.expanded(), bl.fused());
        let direct = total_hilbert(&f, &d).unwrap();
        assert_eq!(bl.total_raw.expanded(), direct.expanded());
    }

    #[test]
    fn invalid_defectors() {
        let p = generate::vee();
        let d = def(&p, "p1=1,p2=0,q=0");
        assert!(matches!(
            algebra_of_poset(&p, &d, false),
            Err(Error::InvalidDefector(_))
        ));
        assert!(algebra_of_poset(&p, &d, true).is_ok());
        assert!(Defector::parse(&p, "p1=1,q=0").is_err());
        assert!(Defector::parse(&p, "p1=1,p1=1,p2=1,q=0").is_err());
        assert!(Defector::parse(&p, "p1=x,p2=1,q=0").is_err());
        assert!(matches!(
            Defector::parse(&p, "z=1"),
            Err(Error::UnknownLabel(_))
        ));
        assert_eq!(def(&p, "p1=inf, p2=∞ ,q=0").render(&p), "q=0,p1=inf,p2=inf");
    }

    #[test]
    fn ideals_of_closed_sets() {
        let p = generate::vee();
        let bl = algebra_of_poset(&p, &def(&p, "p1=1,p2=1,q=0"), false).unwrap();
        let e = p.set_of(&["p1"]).unwrap();
        let i = bl.ideal_of_closed(&e).unwrap();
        assert!(i.primitive && i.proper);
        assert_eq!(render(&i.generators), "C·I(H2) ⊕ K(H1 ⊕ H2)");
        let whole = bl.ideal_of_closed(&p.all()).unwrap();
        assert!(whole.generators.is_zero());
        assert!(whole.primitive);
        let both = bl
            .ideal_of_closed(&p.set_of(&["p1", "p2"]).unwrap())
            .unwrap();
        assert!(!both.primitive);
        let empty = bl.ideal_of_closed(&ElemSet::new()).unwrap();
        assert!(!empty.proper);
        assert!(matches!(
            bl.ideal_of_closed(&p.set_of(&["q"]).unwrap()),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn immediate_equivalence() {
        let p = generate::vee();
        let d = def(&p, "p1=1,p2=1,q=0");
        let e = def(&p, "p1=1,p2=1,q=1");
        assert!(immediately_equivalent(&d, &e, &p));
        assert!(immediately_equivalent(&e, &d, &p));
        assert!(immediately_equivalent(&d, &d, &p));
        let c = generate::chain(3);
        let a = def(&c, "c1=0,c2=0,c3=1");
        let b = def(&c, "c1=5,c2=5,c3=1");
        assert!(!immediately_equivalent(&a, &b, &c));
        let inf = def(&c, "c1=0,c2=0,c3=inf");
        assert!(immediately_equivalent(
            &inf,
            &def(&c, "c1=0,c2=7,c3=inf"),
            &c
        ));
        assert_eq!(
            equivalent_defectors(&d, &e, &p, default_bound(&d, &e, &p), 12).unwrap(),
            Equivalence::Equivalent { moves: 1 }
        );
    }

    #[test]
    fn automorphic_defectors_are_equivalent() {
        let p = generate::vee();
        let d = def(&p, "p1=1,p2=2,q=0");
        let e = def(&p, "p1=2,p2=1,q=0");
        assert_eq!(
            equivalent_defectors(&d, &e, &p, 5, 12).unwrap(),
            Equivalence::Equivalent { moves: 0 }
        );
    }

    #[test]
    fn automorphic_defectors_give_relabeled_algebras() {
        let p = generate::p4s1();
        let d = def(&p, "x1=0,x2=1,x3=2,x4=3");
        for phi in p.automorphisms(12).unwrap() {
            let e = d.compose(&phi);
            let rename: BTreeMap<String, String> = (0..p.len())
                .map(|x| (p.label(phi[x]).to_string(), p.label(x).to_string()))
                .collect();
            let a = algebra_of_poset(&p, &d, false).unwrap().expanded();
            let b = algebra_of_poset(&p, &e, false)
                .unwrap()
                .expanded()
                .rename(&rename);
            assert!(find_relabeling(&b, &a).is_some(), "{a} vs {b}");
        }
    }

    #[test]
    fn different_matrix_sizes_are_not_equivalent() {
        let p = Poset::from_covers::<&str>(&["a"], &[]).unwrap();
        let d2 = def(&p, "a=2");
        let d3 = def(&p, "a=3");
        for bound in [1, 5, 20] {
            assert_eq!(
                equivalent_defectors(&d2, &d3, &p, bound, 12).unwrap(),
                Equivalence::NotFoundWithinBound
            );
        }
    }

    #[test]
    fn relabeled_expression_comparison() {
        let p = generate::vee();
        let bl = algebra_of_forest(&p, &def(&p, "p1=1,p2=1,q=0"), false).unwrap();
        let want = parse_algebra("C·I(Ha) ⊕ C·I(Hb) ⊕ K(Ha ⊕ Hb)").unwrap();
        let relabel: BTreeMap<String, String> = [("1", "a"), ("2", "b")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        assert!(equal_upto_relabeling(&bl.expanded(), &want, &relabel).unwrap());
        assert!(find_relabeling(&bl.expanded(), &want).is_some());
    }
}
