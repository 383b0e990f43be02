//! Integral simplicial homology of the order complex of a poset.
//!
//! Simplices are the nonempty chains; boundary matrices are reduced to Smith
//! normal form over `BigInt` so torsion coefficients come out exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::poset::Poset;

/// `H_k` as a rank and a list of torsion coefficients (all > 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Chains of the poset grouped by dimension (a chain of `k+1` points is a
/// `k`-simplex); each chain is listed bottom to top.
pub fn simplices(p: &Poset, bound: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    let chains = p.all_chains(bound)?;
    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    for c in chains {
        if c.is_empty() {
            continue;
        }
        let k = c.len() - 1;
        if by_dim.len() <= k {
            by_dim.resize(k + 1, Vec::new());
        }
        by_dim[k].push(c);
    }
    for level in &mut by_dim {
        level.sort();
    }
    Ok(by_dim)
}

/// The matrix of `∂_k : C_k → C_{k−1}` with rows indexed by `(k−1)`-simplices.
pub fn boundary_matrix(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); upper.len()]; lower.len()];
    for (j, s) in upper.iter().enumerate() {
        for drop in 0..s.len() {
            let mut face = s.clone();
            face.remove(drop);
            if let Ok(i) = lower.binary_search(&face) {
                m[i][j] = if drop % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
            }
        }
    }
    m
}

/// Diagonal of the Smith normal form, nonzero entries only, each dividing
/// the next.
pub fn smith_diagonal(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    done = false;
                    if a[i][t].abs() < a[t][t].abs() {
                        a.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    done = false;
                    if a[t][j].abs() < a[t][t].abs() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                }
            }
            if !done {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// `H_0, …, H_top` of the order complex.
pub fn homology(p: &Poset, bound: usize) -> Result<Vec<HomologyGroup>> {
    let simp = simplices(p, bound)?;
    let top = simp.len();
    let mut ranks = vec![0usize; top + 1];
    let mut diags: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for k in 1..top {
        let d = smith_diagonal(&boundary_matrix(&simp[k - 1], &simp[k]));
        ranks[k] = d.len();
        diags[k] = d;
    }
    Ok((0..top)
        .map(|k| {
            let cycles = simp[k].len() - ranks[k];
            HomologyGroup {
                rank: cycles - ranks[k + 1],
                torsion: diags[k + 1]
                    .iter()
                    .filter(|v| !v.is_one())
                    .cloned()
                    .collect(),
            }
        })
        .collect())
}

/// Betti numbers of the order complex.
pub fn betti(p: &Poset, bound: usize) -> Result<Vec<usize>> {
    Ok(homology(p, bound)?.iter().map(|g| g.rank).collect())
}

/// Alternating count of simplices.
pub fn euler_characteristic(p: &Poset, bound: usize) -> Result<i64> {
    Ok(simplices(p, bound)?
        .iter()
        .enumerate()
        .map(|(k, s)| {
            if k % 2 == 0 {
                s.len() as i64
            } else {
                -(s.len() as i64)
            }
        })
        .sum())
}
