//! End-to-end CLI tests: exit codes, byte determinism, traceability tags,
//! and the ring-file round trip through the binary.

use std::process::{Command, Output};

fn torelli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torelli"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_exit_codes() {
    // builtin P^3 is clean
    let out = torelli(&["validate", "--builtin", "p3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("valid: true"));

    // malformed file: exit 2
    let dir = std::env::temp_dir().join("torelli-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("malformed.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = torelli(&["validate", "--ring", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // duplicate basis names: exit 2 with the duplicate named
    let dup = dir.join("dup.json");
    std::fs::write(
        &dup,
        r#"{
        "real_dimension": 2,
        "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 2}, {"name": "a", "degree": 2}],
        "products": [],
        "integrate": [{"name": "a", "value": "1"}]
    }"#,
    )
    .unwrap();
    let out = torelli(&["validate", "--ring", dup.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`a`"));

    // missing integration: exit 2 naming the fundamental class
    let nofund = dir.join("nofund.json");
    std::fs::write(
        &nofund,
        r#"{
        "real_dimension": 2,
        "basis": [{"name": "1", "degree": 0}, {"name": "a", "degree": 2}],
        "products": [],
        "integrate": []
    }"#,
    )
    .unwrap();
    let out = torelli(&["validate", "--ring", nofund.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fundamental class"));

    // broken duality: parses but fails validation with exit 1 and the
    // violation named
    let broken = dir.join("broken-duality.json");
    std::fs::write(
        &broken,
        r#"{
        "real_dimension": 6,
        "basis": [
            {"name": "1", "degree": 0},
            {"name": "e1", "degree": 2}, {"name": "e2", "degree": 2},
            {"name": "F", "degree": 4}, {"name": "G", "degree": 4},
            {"name": "w", "degree": 6}
        ],
        "products": [
            {"left": "e2", "right": "e2", "result": [{"name": "F", "coeff_num": "1", "coeff_den": "1"}]},
            {"left": "e2", "right": "F", "result": [{"name": "w", "coeff_num": "1", "coeff_den": "1"}]}
        ],
        "integrate": [{"name": "w", "value": "1"}]
    }"#,
    )
    .unwrap();
    let out = torelli(&["validate", "--ring", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("Poincaré duality"));
}

#[test]
fn round_trip_through_files() {
    let dir = std::env::temp_dir().join("torelli-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["p2", "quintic", "sixfold:b2=2,b3=2", "u5-exterior"] {
        let ring = torelli::builtins::build(name).unwrap();
        let path = dir.join(format!("rt-{}.json", name.replace([':', ',', '='], "-")));
        std::fs::write(&path, torelli::ring_io::serialize(&ring)).unwrap();
        let out = torelli(&["validate", "--ring", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name} must validate through the file");
        let back = torelli::ring_io::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(ring, back, "{name} round trip");
    }
}

#[test]
fn byte_identical_reports() {
    for args in [
        vec!["charclass", "--hypersurface", "3", "1..10"],
        vec!["homotopy", "--builtin", "p2", "--max-degree", "5"],
        vec!["johnson", "--builtin", "quintic", "--format", "json"],
        vec!["lefschetz", "--builtin", "cubic-threefold"],
        vec!["sixfold", "--b2", "2", "--b3", "2", "--witness-surjectivity"],
    ] {
        let a = torelli(&args);
        let b = torelli(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&a), stdout(&b), "byte determinism of {args:?}");
    }
}

#[test]
fn charclass_range_and_values() {
    let out = torelli(&["charclass", "--hypersurface", "3", "5"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("1 + 10*w^2 - 40*w^3"));
    assert!(text.contains("euler characteristic: -200"));
    assert!(text.contains("middle primitive dimension: 204"));
    assert!(text.contains("InfiniteIndex"));

    // the quartic polynomial column for the whole range
    let out = torelli(&["charclass", "--hypersurface", "3", "1..10"]);
    let text = stdout(&out);
    for (d, r) in [(1i64, 0i64), (2, 0), (3, 10), (4, 60), (5, 204)] {
        let d64 = d;
        let poly = d64 * d64 * d64 * d64 - 5 * d64 * d64 * d64 + 10 * d64 * d64 - 10 * d64 + 4;
        assert_eq!(poly.max(0), r.max(poly.min(r)), "sanity");
        assert!(
            text.lines().any(|l| l.trim_start().starts_with(&format!("{d} "))
                && l.contains(&format!(" {r} "))),
            "row for d = {d} must report r = {r}"
        );
    }

    // ambient space row
    let out = torelli(&["charclass", "--ambient", "3"]);
    let text = stdout(&out);
    assert!(text.contains("euler characteristic: 4"));
    assert!(text.contains("1 + 4*w + 6*w^2 + 4*w^3"));

    // invalid multidegree
    let out = torelli(&["charclass", "--ambient", "3", "--degrees", "2,2,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn homotopy_values_and_guard() {
    let out = torelli(&["homotopy", "--builtin", "quintic", "--max-degree", "3"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("pi_2    1"));
    assert!(text.contains("pi_3    204"));

    // resource guard: tiny cap refuses with exit 3
    let out = torelli(&[
        "homotopy",
        "--builtin",
        "quintic",
        "--max-degree",
        "6",
        "--max-words",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    // the guard is also reachable through the environment variable
    let out = Command::new(env!("CARGO_BIN_EXE_torelli"))
        .args(["homotopy", "--builtin", "quintic", "--max-degree", "6"])
        .env("TORELLI_MAX_WORDS", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn homotopy_formality_labels() {
    // a ring file without --formal gets page labels, with --formal the
    // loop/homotopy labels
    let dir = std::env::temp_dir().join("torelli-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p2-file.json");
    let ring = torelli::builtins::build("p2").unwrap();
    std::fs::write(&path, torelli::ring_io::serialize(&ring)).unwrap();

    let out = torelli(&["homotopy", "--ring", path.to_str().unwrap(), "--max-degree", "4"]);
    let text = stdout(&out);
    assert!(text.contains("formality not asserted"));
    assert!(!text.contains("rational homotopy ranks"));

    let out = torelli(&[
        "homotopy",
        "--ring",
        path.to_str().unwrap(),
        "--max-degree",
        "4",
        "--formal",
    ]);
    let text = stdout(&out);
    assert!(text.contains("rational homotopy ranks"));
    assert!(text.contains("cite:formality-degeneration"));
}

#[test]
fn johnson_tables_and_citations() {
    let out = torelli(&["johnson", "--builtin", "quintic"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("dim Hom(H_3, Sym^2 H_2 / im Delta): 0"));
    assert!(text.contains("cite:kreck-su"));
    assert!(text.contains("cite:rank-lower-bound"));
    assert!(text.contains("204"));

    let out = torelli(&["johnson", "--builtin", "sixfold:b2=2,b3=2"]);
    let text = stdout(&out);
    assert!(text.contains("dim Hom(H_3, Sym^2 H_2 / im Delta): 2"));
    assert!(text.contains("closed-form lower bound (b2-1) b2 b3 / 2: 2"));

    let out = torelli(&["johnson", "--builtin", "cubic-threefold"]);
    let text = stdout(&out);
    assert!(text.contains("dim Hom(H_3, Sym^2 H_2 / im Delta): 0"));
    assert!(text.contains("dim D_M (indeterminacies vanish): 10"));

    // dimension refusal
    let out = torelli(&["johnson", "--builtin", "p2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("six-dimensional"));
}

#[test]
fn sixfold_chain_and_witnesses() {
    let dir = std::env::temp_dir().join("torelli-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let a_path = dir.join("a-simple.json");
    std::fs::write(&a_path, r#"{"entries": [{"k": 1, "s": 1, "t": 2, "value": "1"}]}"#).unwrap();
    let arg = format!("@{}", a_path.to_str().unwrap());
    let out = torelli(&[
        "sixfold", "--b2", "2", "--b3", "2", "--cubic", "fermat", "--a", &arg,
    ]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("[D,d] = 0: true"));
    assert!(text.contains("b_1^{2,-1} (forced)"));
    assert!(text.contains("e1·e2"));

    let out = torelli(&[
        "sixfold", "--b2", "2", "--b3", "2", "--witness-surjectivity",
    ]);
    let text = stdout(&out);
    assert!(text.contains("hit"));
    assert!(!text.contains("MISSED"));

    // degenerate cubic refused with witness, exit 1
    let cubic_path = dir.join("degenerate.json");
    std::fs::write(
        &cubic_path,
        r#"{"entries": [{"i": 2, "j": 2, "k": 2, "value": "1"}]}"#,
    )
    .unwrap();
    let arg = format!("@{}", cubic_path.to_str().unwrap());
    let out = torelli(&["sixfold", "--b2", "2", "--b3", "0", "--cubic", &arg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate cubic"));
}

#[test]
fn lefschetz_report_values() {
    let out = torelli(&["lefschetz", "--builtin", "cubic-threefold"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("dim g: 55"));
    assert!(text.contains("commutes with sl2: true"));
    assert!(text.contains("restricts injectively to primitives: true"));

    let out = torelli(&["lefschetz", "--builtin", "p3"]);
    let text = stdout(&out);
    assert!(text.contains("dim g: 0"));

    // no omega: exit 2
    let out = torelli(&["lefschetz", "--builtin", "s3xs3"]);
    assert_eq!(out.status.code(), Some(2));

    // hard Lefschetz failure: reported per level, exit 1
    let out = torelli(&["lefschetz", "--builtin", "sixfold:b2=2,b3=2,cubic=fermat"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("omega^1 iso on level 1: false"));

    // derivation basis dump names matrix entries
    let out = torelli(&["lefschetz", "--builtin", "sixfold:b2=1,b3=2", "--dump-derivations"]);
    let text = stdout(&out);
    assert!(text.contains("delta_0"));
    assert!(text.contains("z-1 <- z1: 1"));
}

#[test]
fn emit_model_dumps_brackets() {
    let out = torelli(&[
        "homotopy", "--builtin", "p2", "--max-degree", "3", "--emit-model",
    ]);
    let text = stdout(&out);
    assert!(text.contains("quadratic Lie model"));
    assert!(text.contains("1/2*[w,w]"));

    let out = torelli(&["sixfold", "--b2", "2", "--b3", "2", "--emit-model"]);
    let text = stdout(&out);
    assert!(text.contains("w (degree 5)"));
    assert!(text.contains("[e1,f1]"));
}

#[test]
fn quintic_lefschetz_dimension_matches_symplectic_algebra() {
    // dim g = b3 (b3 + 1) / 2 = 20910, exactly as printed
    let out = torelli(&["lefschetz", "--builtin", "quintic"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("dim g: 20910"));
}
