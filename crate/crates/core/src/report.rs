//! Plain-text reports shared by the command line and the golden files.

use std::fmt::Write;

use crate::algebra::Style;
use crate::behncke_leptin::BlAlgebra;
use crate::bratteli::{Diagram, IdealMark};
use crate::construction::Construction;
use crate::error::Result;
use crate::homology::HomologyGroup;
use crate::poset::Poset;

fn labels_of(p: &Poset, xs: &[usize]) -> String {
    xs.iter()
        .map(|&x| p.label(x))
        .collect::<Vec<_>>()
        .join(" < ")
}

/// Closed sets in canonical order, one per line.
pub fn closed_sets(p: &Poset, bound: usize) -> Result<String> {
    let mut out = String::new();
    for s in &p.all_closed_sets(bound)?.sets {
        writeln!(out, "{}", p.format_set(s)).unwrap();
    }
    Ok(out)
}

/// Maximal chains, bottom to top.
pub fn maximal_chains(p: &Poset) -> String {
    p.maximal_chains()
        .iter()
        .map(|c| format!("{}\n", labels_of(p, c)))
        .collect()
}

/// Automorphisms in two-line notation.
pub fn automorphisms(p: &Poset, bound: usize) -> Result<String> {
    let mut out = String::new();
    for perm in p.automorphisms(bound)? {
        let images: Vec<String> = perm
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", p.label(x), p.label(y)))
            .collect();
        writeln!(out, "{}", images.join(" ")).unwrap();
    }
    Ok(out)
}

/// Matrices written row by row: `[1 0; 1 1]`.
fn matrix(m: &[Vec<u64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Level dimensions and embeddings for the first `levels` levels.
pub fn diagram_text(d: &Diagram, levels: usize) -> String {
    let mut out = String::new();
    let dims = d.dims_upto(levels);
    for (k, row) in dims.iter().enumerate() {
        let ds: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        write!(out, "level {k}: {}", ds.join(" ")).unwrap();
        if k + 1 < dims.len() {
            write!(out, "  edges {}", matrix(d.edge(k))).unwrap();
        }
        out.push('\n');
    }
    match d.tail {
        Some(t) => writeln!(out, "tail: start {}, period {}", t.start, t.period).unwrap(),
        None => writeln!(out, "tail: none").unwrap(),
    }
    out
}

/// The stable partition table: the atoms `Y(n0, j)` beside the closed sets
/// `F(n0+1, j)`.
pub fn partition_table(p: &Poset, c: &Construction) -> String {
    let y = &c.partition(c.n0).y;
    let f = &c.partition(c.n0 + 1).f;
    let left: Vec<String> = y
        .iter()
        .enumerate()
        .map(|(j, s)| format!("Y(n0,{}) = {}", j + 1, p.format_set(s)))
        .collect();
    let width = left.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (j, l) in left.iter().enumerate() {
        let pad = width - l.chars().count();
        let right = f
            .get(j)
            .map(|s| format!("F(n0+1,{}) = {}", j + 1, p.format_set(s)))
            .unwrap_or_default();
        writeln!(out, "{l}{}  {right}", " ".repeat(pad)).unwrap();
    }
    out
}

/// Everything `af build` prints in text mode.
pub fn af_build(p: &Poset, c: &Construction, levels: usize) -> String {
    let mut out = String::new();
    writeln!(out, "n0 = {}", c.n0).unwrap();
    writeln!(out, "stable from level {}", c.stable).unwrap();
    writeln!(out, "stable width = {}", c.partition(c.stable).y.len()).unwrap();
    out.push('\n');
    out.push_str(&partition_table(p, c));
    out.push('\n');
    out.push_str(&diagram_text(&c.diagram, levels));
    out
}

/// Ideal marks, flagged when primitive.
pub fn ideals(marks: &[(IdealMark, bool)]) -> String {
    marks
        .iter()
        .enumerate()
        .map(|(i, (m, prim))| format!("I{i} {m}{}\n", if *prim { "  primitive" } else { "" }))
        .collect()
}

/// `bl construct`: legend, per-point generators, local algebras, totals.
pub fn bl_construct(bl: &BlAlgebra, style: Style) -> String {
    let p = &bl.poset;
    let mut out = String::new();
    writeln!(out, "defector: {}", bl.defector.render(p)).unwrap();
    writeln!(out, "H = {}", bl.total.render(style)).unwrap();
    for (name, rope, raw) in &bl.legend {
        writeln!(
            out,
            "  H{name} = {}  [{}]",
            raw.render(style),
            bl.cover.forest.label(*rope)
        )
        .unwrap();
    }
    writeln!(out, "generators:").unwrap();
    for pa in &bl.points {
        let e = crate::algebra::AlgebraExpr::new(pa.expanded.clone());
        writeln!(out, "  R_{} = {}", p.label(pa.point), e.render(style)).unwrap();
    }
    writeln!(out, "local algebras:").unwrap();
    for (x, row) in bl.local_rows().iter().enumerate() {
        writeln!(out, "  A_{} = {}", p.label(x), row.render(style)).unwrap();
    }
    writeln!(out, "A = {}", bl.expanded().render(style)).unwrap();
    writeln!(out, "fused: {}", bl.fused().render(style)).unwrap();
    out
}

/// `H_k` rows with rank and torsion.
pub fn homology_table(groups: &[HomologyGroup]) -> String {
    let mut out = String::new();
    for (k, g) in groups.iter().enumerate() {
        let torsion: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
        writeln!(
            out,
            "H{k} = {}  betti {}  torsion [{}]",
            g,
            g.rank,
            torsion.join(", ")
        )
        .unwrap();
    }
    out
}
