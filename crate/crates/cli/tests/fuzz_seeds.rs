//! The fuzz corpus seeds exercise the same round trips as the fuzz targets,
//! and mutated inputs never panic the parsers.

use std::path::PathBuf;

use primspec::algebra::{parse_algebra, Style};
use primspec::behncke_leptin::{algebra_of_poset, parse_defector_spec, Defector};
use primspec::bratteli::{self, Diagram};
use primspec::{generate, quotient, text};
use proptest::prelude::*;

fn seeds(target: &str) -> Vec<String> {
    let dir: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fuzz",
        "corpus",
        target,
    ]
    .iter()
    .collect();
    let mut out: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn poset_round_trip(src: &str) -> bool {
    match text::parse_poset(src) {
        Ok(p) => {
            assert_eq!(text::parse_poset(&text::write_poset(&p)).unwrap(), p);
            true
        }
        Err(_) => false,
    }
}

fn space_round_trip(src: &str) -> bool {
    match text::parse_covered_space(src) {
        Ok(s) => {
            assert_eq!(
                text::parse_covered_space(&text::write_covered_space(&s)).unwrap(),
                s
            );
            let _ = quotient::quotient_poset(&s);
            true
        }
        Err(_) => false,
    }
}

fn diagram_round_trip(src: &str) -> bool {
    let Ok(d) = Diagram::from_json(src) else {
        return false;
    };
    let _ = bratteli::validate(&d, true);
    if d.check_shape().is_ok() {
        assert_eq!(Diagram::from_json(&d.to_json()).unwrap(), d);
        let _ = bratteli::diagram_dot(&d, 4);
    }
    true
}

fn algebra_round_trip(src: &str) -> bool {
    let Ok(e) = parse_algebra(src) else {
        return false;
    };
    let c = e.canonical();
    for style in [Style::Unicode, Style::Ascii] {
        assert_eq!(parse_algebra(&c.render(style)).unwrap().canonical(), c);
    }
    true
}

fn defector_round_trip(src: &str) -> bool {
    let _ = parse_defector_spec(src);
    let p = generate::p4s1();
    let Ok(d) = Defector::parse(&p, src) else {
        return false;
    };
    assert_eq!(Defector::parse(&p, &d.render(&p)).unwrap(), d);
    algebra_of_poset(&p, &d, true).unwrap();
    true
}

#[test]
fn seeds_round_trip() {
    let accepted: Vec<usize> = [
        ("poset_text", poset_round_trip as fn(&str) -> bool),
        ("covered_space_text", space_round_trip),
        ("diagram_json", diagram_round_trip),
        ("algebra_text", algebra_round_trip),
        ("defector_spec", defector_round_trip),
    ]
    .iter()
    .map(|(t, f)| seeds(t).iter().filter(|s| f(s)).count())
    .collect();
    // the cycle seed is the only one meant to be rejected
    assert_eq!(accepted, [4, 2, 4, 3, 3]);
}

proptest! {
    #[test]
    fn mutated_seeds_never_panic(pick in 0usize..64, cut in 0usize..200, junk in ".{0,6}") {
        let all: Vec<String> = ["poset_text", "covered_space_text", "diagram_json", "algebra_text", "defector_spec"]
            .iter()
            .flat_map(|t| seeds(t))
            .collect();
        let s = &all[pick % all.len()];
        let mut at = cut.min(s.len());
        while !s.is_char_boundary(at) {
            at -= 1;
        }
        let mutated = format!("{}{}{}", &s[..at], junk, &s[at..]);
        poset_round_trip(&mutated);
        space_round_trip(&mutated);
        diagram_round_trip(&mutated);
        algebra_round_trip(&mutated);
        defector_round_trip(&mutated);
    }
}
