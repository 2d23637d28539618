//! Golden-file tests for the command-line contract. Set `UPDATE_GOLDEN=1` to
//! rewrite the files under `tests/golden` after an intended change.

mod common;

use std::fs;

use common::{fixtures, golden, names, run, run_in, schema};
use relfocus::io::{parse_csv, write_csv};
use relfocus::relation::join;
use serde_json::Value;

#[test]
fn entangled_pairs_goldens() {
    let f = golden("entangled_pairs.factorize", &["factorize", "entangled_pairs.csv"]);
    assert_eq!(names(&f["focus"]), r#"[["A","B","C","D"]]"#);
    assert_eq!(f["status"], "VERIFIED");
    assert_eq!(
        names(&f["trace"]["chain"]),
        r#"[[["A"],["B"],["C"],["D"]],[["A","B"],["C","D"]],[["A","B","C","D"]],[["A","B","C","D"]]]"#
    );

    let m = golden("entangled_pairs.mincors", &["mincors", "entangled_pairs.csv"]);
    let blocks: Vec<String> = m["mincors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| names(&e["blocks"]))
        .collect();
    assert_eq!(blocks, [r#"[["A"],["B"]]"#, r#"[["C"],["D"]]"#]);
    assert_eq!(names(&m["singletons"]), "[]");

    let t = golden(
        "entangled_pairs.alpha-trace",
        &["alpha-trace", "entangled_pairs.csv"],
    );
    assert_eq!(t["steps"].as_array().unwrap().len(), 3);
    assert_eq!(t["iterations"], 3);
    assert_eq!(names(&t["focus"]), r#"[["A","B","C","D"]]"#);

    let c = golden(
        "entangled_pairs.check",
        &["check", "entangled_pairs.csv", "--partition", "[[A,B],[C,D]]"],
    );
    assert_eq!(c["independent"], false);
    assert_eq!(names(&c["block_sizes"]), "[3,3]");
}

#[test]
fn separable_pairs_goldens() {
    let f = golden("separable_pairs.factorize", &["factorize", "separable_pairs.csv"]);
    assert_eq!(names(&f["focus"]), r#"[["A","B"],["C","D"]]"#);
    let tuples: Vec<u64> = f["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["tuples"].as_u64().unwrap())
        .collect();
    assert_eq!(tuples, [3, 3]);
    assert_eq!(
        (f["cells"]["flat"].as_u64(), f["cells"]["factorized"].as_u64()),
        (Some(36), Some(12))
    );

    golden("separable_pairs.mincors", &["mincors", "separable_pairs.csv"]);
    let t = golden(
        "separable_pairs.alpha-trace",
        &["alpha-trace", "separable_pairs.csv"],
    );
    assert_eq!(names(&t["focus"]), r#"[["A","B"],["C","D"]]"#);

    let c = golden(
        "separable_pairs.check",
        &["check", "separable_pairs.csv", "--partition", "[[A,B],[C,D]]"],
    );
    assert_eq!(c["independent"], true);
    assert_eq!(c["product"], 9);
}

#[test]
fn non_monotone_goldens() {
    let f = golden("non_monotone.factorize", &["factorize", "non_monotone.csv"]);
    assert_eq!(f["input"]["tuples"], 19);
    assert_eq!(names(&f["focus"]), r#"[["A","B","C","D","E"]]"#);

    let m = golden("non_monotone.mincors", &["mincors", "non_monotone.csv"]);
    let blocks: Vec<String> = m["mincors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| names(&e["blocks"]))
        .collect();
    assert!(blocks.contains(&r#"[["D"],["E"]]"#.to_string()));
    assert!(blocks.contains(&r#"[["A"],["B"],["C"]]"#.to_string()));

    let x2 = r#"[["A"],["B","D"],["C","E"]]"#;
    let m2 = golden(
        "non_monotone.mincors-x2",
        &["mincors", "non_monotone.csv", "--partition", x2],
    );
    let blocks: Vec<String> = m2["mincors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| names(&e["blocks"]))
        .collect();
    assert_eq!(blocks, [r#"[["B","D"],["C","E"]]"#]);

    golden("non_monotone.alpha-trace", &["alpha-trace", "non_monotone.csv"]);
    let c = golden(
        "non_monotone.check",
        &["check", "non_monotone.csv", "--partition", "[[A,B,C],[D,E]]"],
    );
    assert_eq!(c["independent"], false);
}

#[test]
fn text_output() {
    let r = run(&["alpha-trace", "entangled_pairs.csv"]);
    assert_eq!(r.code, 0);
    assert!(
        r.stdout
            .ends_with("fixed after 3 steps: [[\"A\",\"B\",\"C\",\"D\"]]\n"),
        "{}",
        r.stdout
    );
    let r = run(&["check", "separable_pairs.csv", "--partition", "[[A,B],[C,D]]"]);
    assert!(r.stdout.contains("independent: true"));
}

fn sorted_body(csv: &str) -> (String, Vec<String>) {
    let mut lines = csv.lines().map(str::to_string);
    let header = lines.next().unwrap();
    let mut body: Vec<String> = lines.collect();
    body.sort();
    (header, body)
}

#[test]
fn factor_files_rejoin_to_the_input() {
    for fixture in ["entangled_pairs.csv", "separable_pairs.csv", "non_monotone.csv"] {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("factors");
        let r = run(&["--json", "factorize", fixture, "--out", out.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let report: Value = serde_json::from_str(&r.stdout).unwrap();
        let parts: Vec<_> = report["factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| {
                let bytes = fs::read(out.join(f["file"].as_str().unwrap())).unwrap();
                parse_csv(&bytes).unwrap().relation
            })
            .collect();
        let input = fs::read_to_string(fixtures().join(fixture)).unwrap();
        let original = parse_csv(input.as_bytes()).unwrap().relation;
        let rejoined = join(&parts).unwrap().align_to(original.scheme()).unwrap();
        assert_eq!(
            sorted_body(&write_csv(&rejoined)),
            sorted_body(&input),
            "{fixture}"
        );
    }
}

#[test]
fn factor_file_names() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("in.csv"), "a b,a/b,c\n1,1,x\n1,1,y\n").unwrap();
    let r = run_in(dir.path(), &["--json", "factorize", "in.csv", "--out", "f"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let files: Vec<&str> = report["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["file"].as_str().unwrap())
        .collect();
    assert_eq!(files, ["a_b.csv", "a_b-2.csv", "c.csv"]);
    for f in &files {
        assert!(dir.path().join("f").join(f).is_file());
    }
}

#[test]
fn complete_relation_factorizes_into_singletons() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("X,Y,Z\n");
    for x in 0..2 {
        for y in 0..3 {
            for z in 0..2 {
                csv.push_str(&format!("{x},{y},{z}\n"));
            }
        }
    }
    fs::write(dir.path().join("full.csv"), csv).unwrap();
    let r = run_in(dir.path(), &["--json", "factorize", "full.csv"]);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(names(&report["focus"]), r#"[["X"],["Y"],["Z"]]"#);
}

#[test]
fn capped_search_is_reported_unverified() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("xor.csv"), "A,B,C\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n").unwrap();
    let r = run_in(
        dir.path(),
        &["--json", "factorize", "xor.csv", "--max-mincor-size", "2"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(schema().is_valid(&report));
    assert_eq!(report["status"], "UNVERIFIED");
    assert_eq!(report["trace"]["truncated"], true);
    let r = run_in(dir.path(), &["--json", "factorize", "xor.csv"]);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["status"], "VERIFIED");
    assert_eq!(names(&report["focus"]), r#"[["A","B","C"]]"#);
}

#[test]
fn duplicates_are_counted() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.csv"), "A,B\n1,2\n1,2\n3,4\n").unwrap();
    let r = run_in(
        dir.path(),
        &["--json", "check", "d.csv", "--partition", "[[A],[B]]"],
    );
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["input"]["duplicates_removed"], 1);
    assert_eq!(report["input"]["tuples"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("ragged.csv"), "A,B\n1,2\n3\n").unwrap();
    fs::write(d.join("ok.csv"), "A,B\n1,2\n").unwrap();

    let cases: &[(&[&str], i32)] = &[
        (&["factorize", "missing.csv"], 1),
        (&["factorize", "ragged.csv"], 1),
        (&["check", "ok.csv", "--partition", "[[A]]"], 1),
        (&["check", "ok.csv", "--partition", "[[A],[Q]]"], 1),
        (&["mincors", "ok.csv", "--partition", "{"], 1),
        (
            &[
                "gen",
                "--seed",
                "1",
                "--spec",
                "{\"kind\":\"nope\"}",
                "--out",
                "g.csv",
            ],
            1,
        ),
        (&["no-such-command"], 1),
        (&["factorize", "ok.csv", "--max-mincor-size", "1"], 1),
        (&["check", "ok.csv", "--partition", "[[A],[B]]"], 0),
        (&["--help"], 0),
    ];
    for (args, code) in cases {
        let r = run_in(d, args);
        assert_eq!(r.code, *code, "{args:?}: {}", r.stderr);
        if *code != 0 {
            assert!(r.stdout.is_empty(), "{args:?} wrote to stdout");
            assert!(!r.stderr.is_empty(), "{args:?} gave no diagnostic");
        }
    }
}

#[test]
fn guard_refusals_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let header: Vec<String> = (0..13).map(|i| format!("C{i}")).collect();
    let row = vec!["0"; 13].join(",");
    fs::write(
        dir.path().join("wide.csv"),
        format!("{}\n{row}\n", header.join(",")),
    )
    .unwrap();
    let r = run_in(dir.path(), &["oracle", "wide.csv"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stdout.is_empty());

    // 5 columns of 64 distinct values in lockstep: the join of the
    // singletons would hold 64^5 > 2^24 tuples
    let mut csv = String::from("A,B,C,D,E\n");
    for i in 0..64 {
        csv.push_str(&format!("{i},{i},{i},{i},{i}\n"));
    }
    fs::write(dir.path().join("diag.csv"), csv).unwrap();
    let r = run_in(
        dir.path(),
        &[
            "check",
            "diag.csv",
            "--partition",
            "[[A],[B],[C],[D],[E]]",
            "--paranoid",
        ],
    );
    assert_eq!(r.code, 2, "{}", r.stderr);
    let r = run_in(
        dir.path(),
        &["check", "diag.csv", "--partition", "[[A],[B],[C],[D],[E]]"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("independent: false"));
}

#[test]
fn oracle_agrees_on_the_fixtures() {
    for fixture in ["entangled_pairs.csv", "separable_pairs.csv", "non_monotone.csv"] {
        let o: Value = serde_json::from_str(&run(&["--json", "oracle", fixture]).stdout).unwrap();
        let f: Value = serde_json::from_str(&run(&["--json", "factorize", fixture]).stdout).unwrap();
        assert!(schema().is_valid(&o));
        assert_eq!(o["focus"], f["focus"], "{fixture}");
    }
}

#[test]
fn gen_is_reproducible_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"kind":"planted","blocks":[{"attributes":2,"tuples":3},{"attributes":2,"tuples":2}]}"#;
    let a = run_in(
        dir.path(),
        &["gen", "--seed", "7", "--spec", spec, "--out", "a.csv"],
    );
    let b = run_in(
        dir.path(),
        &["gen", "--seed", "7", "--spec", spec, "--out", "b.csv"],
    );
    assert_eq!((a.code, b.code), (0, 0), "{}", a.stderr);
    let ca = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(ca, fs::read(dir.path().join("b.csv")).unwrap());

    let side: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.seed.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 7);
    assert_eq!(side["tuples"], 6);
    assert_eq!(side["spec"]["kind"], "planted");
    assert_eq!(side["planted"].as_array().unwrap().len(), 2);

    let r = run_in(
        dir.path(),
        &[
            "--json",
            "check",
            "a.csv",
            "--partition",
            &names(&side["planted"]),
        ],
    );
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["independent"], true);
}
