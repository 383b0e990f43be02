use std::path::PathBuf;
use std::process::{Command, Output};

use primspec::bratteli::Diagram;
use primspec::text;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("primspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn af_build_vee() {
    let out = stdout(&["af", "build", &data("vee.poset")]);
    assert!(out.starts_with("n0 = 3\n"));
    assert!(out.contains("level 4: 1 6 1"));
}

#[test]
fn af_build_json_round_trips() {
    let json = stdout(&["af", "build", &data("p4s1.poset"), "--json"]);
    let d = Diagram::from_json(&json).unwrap();
    assert_eq!(d.to_json(), json);
    let dot = stdout(&["af", "build", &data("vee.poset"), "--dot", "--levels", "4"]);
    assert!(dot.starts_with("digraph"));
}

#[test]
fn af_prim_vee_algebra() {
    let out = stdout(&["af", "prim", &data("vee-algebra.json")]);
    let p = text::parse_poset(&out).unwrap();
    assert!(p.is_isomorphic(&primspec::generate::vee()));
}

#[test]
fn af_inspection_commands() {
    assert_eq!(
        stdout(&["af", "validate", &data("penrose.json")]),
        "valid\n"
    );
    assert_eq!(
        stdout(&["af", "commutative", &data("cantor.json")]),
        "true\n"
    );
    assert_eq!(
        stdout(&["af", "commutative", &data("penrose.json")]),
        "false\n"
    );
    let ideals = stdout(&["af", "ideals", &data("vee-algebra.json")]);
    assert_eq!(ideals.lines().count(), 5);
    assert_eq!(ideals.matches("primitive").count(), 3);
    assert!(stdout(&["af", "dot", &data("cantor.json"), "--levels", "3"]).contains("digraph"));
}

#[test]
fn homology_of_the_sphere() {
    let out = stdout(&["homology", &data("p6s2.poset")]);
    let groups: Vec<&str> = out.lines().map(|l| l.split("  ").next().unwrap()).collect();
    assert_eq!(groups, ["H0 = Z", "H1 = 0", "H2 = Z"]);
}

#[test]
fn poset_commands() {
    let shown = stdout(&["poset", "show", &data("p4s1.poset")]);
    assert_eq!(
        text::parse_poset(&shown).unwrap(),
        text::parse_poset(&std::fs::read_to_string(data("p4s1.poset")).unwrap()).unwrap()
    );
    assert_eq!(
        stdout(&["poset", "closed", &data("vee.poset")])
            .lines()
            .count(),
        5
    );
    assert_eq!(
        stdout(&["poset", "chains", &data("p4s1.poset")])
            .lines()
            .count(),
        4
    );
    assert_eq!(
        stdout(&["poset", "autos", &data("vee.poset")])
            .lines()
            .count(),
        2
    );
    assert!(stdout(&["poset", "dot", &data("vee.poset")]).contains("rankdir=BT"));
}

#[test]
fn quotient_of_the_sampled_circle() {
    let out = stdout(&[
        "quotient",
        &data("circle-cover.space"),
        "--rename",
        "a1=x1,b1=x2,c1=x3,d1=x4",
    ]);
    let p = text::parse_poset(&out).unwrap();
    assert_eq!(p, primspec::generate::p4s1());
}

#[test]
fn bl_commands() {
    let out = stdout(&[
        "bl",
        "construct",
        &data("p4s1.poset"),
        "--defector",
        "x1=0,x2=1,x3=0,x4=1",
        "--fused",
    ]);
    assert_eq!(
        out,
        "C·I(H1 ⊕ H3) ⊕ C·I(H2 ⊕ H4) ⊕ K(H1 ⊕ H2) ⊕ K(H3 ⊕ H4)\n"
    );
    let ascii = stdout(&[
        "--ascii",
        "bl",
        "construct",
        &data("vee.poset"),
        "--defector",
        "q=0,p1=1,p2=1",
        "--fused",
    ]);
    assert_eq!(ascii, "C.I(H1) (+) C.I(H2) (+) K(H1 (+) H2)\n");
    let full = stdout(&[
        "bl",
        "construct",
        &data("vee.poset"),
        "--defector",
        "q=0,p1=1,p2=1",
    ]);
    assert!(full.contains("A = C·I(H1) ⊕ C·I(H2) ⊕ K(H1 ⊕ H2)"));
    let eq = stdout(&[
        "bl",
        "equiv",
        &data("vee.poset"),
        "--d1",
        "q=0,p1=1,p2=1",
        "--d2",
        "q=1,p1=1,p2=1",
    ]);
    assert_eq!(eq, "equivalent (1 moves)\n");
}

#[test]
fn domain_errors_exit_with_one() {
    let cyclic = temp_file("cycle.poset", "elements: a b\na < b\nb < a\n");
    let out = run(&["poset", "show", &cyclic]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("CycleError"));
    let out = run(&[
        "bl",
        "construct",
        &data("p4s1.poset"),
        "--defector",
        "x1=1,x2=1,x3=0,x4=0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "bl",
        "construct",
        &data("p4s1.poset"),
        "--defector",
        "x1=1,x2=1,x3=0,x4=0",
        "--override-51",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        run(&["homology", "/nonexistent/file"]).status.code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["af", "build"]).status.code(), Some(2));
    let bad = temp_file("bad.toml", "[bounds]\nclosed_sets = 0\n");
    assert_eq!(
        run(&["--config", &bad, "poset", "show", &data("vee.poset")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_bounds_apply() {
    let cfg = temp_file("small.toml", "[bounds]\nclosed_sets = 2\n");
    let out = run(&["--config", &cfg, "poset", "closed", &data("vee.poset")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("closed-set enumeration"));
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&["af", "build", &data("p6s2.poset")]);
    let b = stdout(&["af", "build", &data("p6s2.poset")]);
    assert_eq!(a, b);
}
