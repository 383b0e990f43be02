//! Line-oriented text formats for posets and covered spaces.
//!
//! Poset files:
//!
//! ```text
//! # the ∨ poset
//! elements: q p1 p2
//! q < p1
//! q < p2
//! ```
//!
//! Covered-space files:
//!
//! ```text
//! points: a b c
//! open O1: a b
//! open O2: b c
//! ```

use crate::error::{Error, Result};
use crate::poset::{valid_label, Poset};
use crate::quotient::CoveredSpace;

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_labels(rest: &str, lineno: usize) -> Result<Vec<String>> {
    rest.split_whitespace()
        .map(|tok| {
            if valid_label(tok) {
                Ok(tok.to_string())
            } else {
                Err(parse_err(lineno, format!("invalid label `{tok}`")))
            }
        })
        .collect()
}

/// Parses the poset text format.
pub fn parse_poset(src: &str) -> Result<Poset> {
    let mut labels: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut seen_elements = false;
    for (i, raw) in src.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("elements:") {
            seen_elements = true;
            labels.extend(parse_labels(rest, lineno)?);
            continue;
        }
        let parts: Vec<&str> = line.split('<').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(parse_err(
                lineno,
                "expected `elements: ...` or a cover line `a < b`",
            ));
        }
        if !seen_elements {
            return Err(parse_err(lineno, "cover line before `elements:`"));
        }
        for p in &parts {
            if !valid_label(p) {
                return Err(parse_err(lineno, format!("invalid label `{p}`")));
            }
        }
        pairs.push((parts[0].to_string(), parts[1].to_string()));
    }
    Poset::from_covers(&labels, &pairs)
}

/// Writes the poset text format: all labels, then the cover pairs.
pub fn write_poset(p: &Poset) -> String {
    let mut s = format!("elements: {}\n", p.labels().join(" "));
    for (a, b) in p.cover_labels() {
        s.push_str(&format!("{a} < {b}\n"));
    }
    s
}

/// Parses the covered-space text format.
pub fn parse_covered_space(src: &str) -> Result<CoveredSpace> {
    let mut points: Option<Vec<String>> = None;
    let mut cover: Vec<(String, Vec<String>)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("points:") {
            if points.is_some() {
                return Err(parse_err(lineno, "duplicate `points:` line"));
            }
            points = Some(parse_labels(rest, lineno)?);
        } else if let Some(rest) = line.strip_prefix("open") {
            let (name, members) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(lineno, "expected `open NAME: p1 p2 ...`"))?;
            let name = name.trim();
            if !valid_label(name) {
                return Err(parse_err(lineno, format!("invalid open-set name `{name}`")));
            }
            cover.push((name.to_string(), parse_labels(members, lineno)?));
        } else {
            return Err(parse_err(lineno, "expected `points:` or `open NAME:`"));
        }
    }
    let points = points.ok_or_else(|| parse_err(0, "missing `points:` line"))?;
    CoveredSpace::new(points, cover)
}

/// Writes the covered-space text format.
pub fn write_covered_space(space: &CoveredSpace) -> String {
    let mut s = format!("points: {}\n", space.points().join(" "));
    for (name, members) in space.cover_labels() {
        s.push_str(&format!("open {name}: {}\n", members.join(" ")));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn parse_vee() {
        let p = parse_poset("# vee\nelements: q p1 p2\nq < p1\nq < p2 # right arm\n").unwrap();
        assert_eq!(p, generate::vee());
    }

    #[test]
    fn roundtrip_examples() {
        for p in [
            generate::vee(),
            generate::p4s1(),
            generate::p6s2(),
            generate::fork(),
        ] {
            assert_eq!(parse_poset(&write_poset(&p)).unwrap(), p);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_poset("elements: a b\na < b < c\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_poset("elements: a\na < z\n"),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            parse_poset("a < b\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_poset("elements: a b\na < b\nb < a\n"),
            Err(Error::Cycle { .. })
        ));
    }

    #[test]
    fn empty_input_is_empty_poset() {
        assert!(parse_poset("").unwrap().is_empty());
    }

    #[test]
    fn covered_space_roundtrip() {
        let src = "points: a b c\nopen U: a b\nopen V: b c\n";
        let s = parse_covered_space(src).unwrap();
        assert_eq!(write_covered_space(&s), src);
    }

    #[test]
    fn covered_space_errors() {
        assert!(parse_covered_space("open U: a\n").is_err());
        assert!(parse_covered_space("points: a b\nopen U: a\n").is_err());
        assert!(parse_covered_space("points: a\nopen U: z\n").is_err());
        assert!(parse_covered_space("points: a\nbogus\n").is_err());
    }
}
