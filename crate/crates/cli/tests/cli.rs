use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mtafrac::io::{parse_automaton_json, parse_gifs_json, parse_pcp_json, parse_pgm};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn mtafrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtafrac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Small bounds so the reduction automata stay quick.
const SMALL: [&str; 8] = [
    "--max-beliefs",
    "500",
    "--max-boxes",
    "20000",
    "--depth",
    "2",
    "--res",
    "64",
];

#[test]
fn reduce_abb_pair_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prefix.json");
    let o = mtafrac(&["reduce-pcp", p(&fixture("abb_pair.json")), "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reduced = parse_pcp_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(reduced.len(), 5);

    // re-reducing is not idempotent: the markers are already taken
    let again = dir.path().join("again.json");
    let o = mtafrac(&["reduce-pcp", p(&out), "-o", p(&again)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains('#'), "{}", stderr(&o));

    let o = mtafrac(&["reduce-pcp", p(&fixture("clash.json")), "-o", p(&again)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`#`"));
}

#[test]
fn build_emits_three_state_automata() {
    let dir = tempfile::tempdir().unwrap();
    for variant in ["universality", "universal-prefix"] {
        let out = dir.path().join(format!("{variant}.json"));
        let o = mtafrac(&[
            "build-automaton",
            p(&fixture("aa.json")),
            "--variant",
            variant,
            "-o",
            p(&out),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let (m, prov) = parse_automaton_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(m.states(), ["X", "U", "V"]);
        assert_eq!(m.tapes(), 2);
        assert_eq!(prov.unwrap().items.len(), m.transitions().len());
        if variant == "universality" {
            assert_eq!(m.transitions().len(), 5);
        }
    }
    let o = mtafrac(&[
        "build-automaton",
        p(&fixture("aa.json")),
        "--variant",
        "other",
        "-o",
        "x.json",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn padded_build_has_power_of_two_bases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let input = fixture("abb_pair.json");
    let args = [
        "build-automaton",
        p(&input),
        "--variant",
        "universality",
        "--pad-pow2",
    ];
    let o = mtafrac(&[&args[..], &["-o", p(&out)]].concat());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("powers of two"));
    let (m, prov) = parse_automaton_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(prov.is_none());
    assert!(m.alphabets().iter().all(|a| a.base().is_power_of_two()));
}

#[test]
fn check_worked_examples() {
    let xy = fixture("two_tape_xy.json");
    let o = mtafrac(&[
        "check",
        p(&xy),
        "--state",
        "X",
        "--query",
        "accepts",
        "--config",
        ":0|:2",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = mtafrac(&[
        "check",
        p(&xy),
        "--state",
        "Y",
        "--query",
        "accepts",
        "--config",
        ":0|:2",
    ]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let loops = fixture("one_tape_loops.json");
    let o = mtafrac(&[
        "check",
        p(&loops),
        "--state",
        "X",
        "--query",
        "universal",
        "--report-json",
        p(&report),
    ]);
    assert_eq!(code(&o), 1);
    let r = read_json(&report);
    assert_eq!(r["verdicts"][0]["verdict"], "no");
    assert_eq!(r["verdicts"][0]["witness"]["prefix"], "01");

    let args = [
        "check",
        p(&loops),
        "--state",
        "X",
        "--query",
        "universal-prefix",
        "--overhang-cap",
        "2",
    ];
    let o = mtafrac(&[&args[..], &["--report-json", p(&report)]].concat());
    assert_eq!(code(&o), 0);
    let r = read_json(&report);
    assert_eq!(r["verdicts"][0]["witness"]["kind"], "universal-prefix");
    assert_eq!(r["verdicts"][0]["witness"]["prefix"], "1");
    assert_eq!(r["bounds"]["overhang_cap"], 2);

    let o = mtafrac(&[&args[..], &["--prefix", "1"]].concat());
    assert_eq!(code(&o), 0);
    let o = mtafrac(&[&args[..], &["--prefix", "0"]].concat());
    assert_eq!(code(&o), 1);
}

#[test]
fn check_rejects_bad_input() {
    let loops = fixture("one_tape_loops.json");
    for args in [
        vec!["--state", "Z", "--query", "universal"],
        vec!["--state", "X", "--query", "accepts"],
        vec!["--state", "X", "--query", "accepts", "--config", "2"],
        vec!["--state", "X", "--query", "universal", "--prefix", "1"],
        vec!["--state", "X", "--query", "everything"],
    ] {
        let o = mtafrac(&[&["check", p(&loops)][..], &args].concat());
        assert_eq!(code(&o), 2, "{args:?}");
    }
    let o = mtafrac(&[
        "check",
        "/nonexistent.json",
        "--state",
        "X",
        "--query",
        "universal",
    ]);
    assert_eq!(code(&o), 2);
}

/// Pixels of a 512² image of the depth-9 cover: closed cells meeting a
/// dyadic square `(i, j)` with `i & j = 0`. Row 0 is the top.
fn sierpinski_oracle(n: i64) -> Vec<bool> {
    let inside = |i: i64, j: i64| (0..n).contains(&i) && (0..n).contains(&j) && i & j == 0;
    (0..n)
        .flat_map(|row| (0..n).map(move |col| (col, n - 1 - row)))
        .map(|(x, y)| (-1..=1).any(|dx| (-1..=1).any(|dy| inside(x + dx, y + dy))))
        .collect()
}

#[test]
fn compile_and_render_sierpinski() {
    let dir = tempfile::tempdir().unwrap();
    let gifs = dir.path().join("g.json");
    let o = mtafrac(&[
        "compile-gifs",
        p(&fixture("sierpinski.json")),
        "-o",
        p(&gifs),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let g = parse_gifs_json(&std::fs::read_to_string(&gifs).unwrap()).unwrap();
    assert_eq!(g.edges().len(), 3);

    let img = dir.path().join("s.pgm");
    let o = mtafrac(&[
        "render",
        p(&gifs),
        "--depth",
        "9",
        "--res",
        "512",
        "-o",
        p(&img),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let bm = parse_pgm(&std::fs::read(&img).unwrap()).unwrap();
    assert_eq!((bm.width, bm.height), (512, 512));
    assert_eq!(bm.bits, sierpinski_oracle(512));

    // the lower-left quarter at the same pixel size is a crop of the full image
    let quarter = dir.path().join("q.pgm");
    let o = mtafrac(&[
        "render",
        p(&gifs),
        "--depth",
        "9",
        "--res",
        "256",
        "--viewport",
        "0:1/2,0:1/2",
        "-o",
        p(&quarter),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let q = parse_pgm(&std::fs::read(&quarter).unwrap()).unwrap();
    let full = sierpinski_oracle(512);
    let crop: Vec<bool> = (256..512)
        .flat_map(|row| (0..256).map(move |col| row * 512 + col))
        .map(|i| full[i])
        .collect();
    assert_eq!(q.bits, crop);

    let o = mtafrac(&["render", p(&gifs), "--res", "16385", "-o", p(&img)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("16385"));
    let o = mtafrac(&["render", p(&gifs), "--viewport", "0:1", "-o", p(&img)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stats_follow_the_box_law() {
    let dir = tempfile::tempdir().unwrap();
    let gifs = dir.path().join("g.json");
    assert_eq!(
        code(&mtafrac(&[
            "compile-gifs",
            p(&fixture("sierpinski.json")),
            "-o",
            p(&gifs)
        ])),
        0
    );
    let o = mtafrac(&["stats", p(&gifs), "--depth", "10", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 11);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row["count"].as_u64(), Some(3u64.pow(k as u32)));
    }
    assert_eq!(rows[10]["count"], 59049);
    let dim = rows[10]["dim_estimate"].as_f64().unwrap();
    assert!((dim - 3f64.log2()).abs() < 0.01);

    let o = mtafrac(&["stats", p(&gifs), "--depth", "3"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.split_whitespace().take(2).eq(["3", "27"])));
}

/// Report with the only run-dependent field removed.
fn stable(mut r: Value) -> Value {
    for st in r["stages"].as_array_mut().unwrap() {
        st.as_object_mut().unwrap().remove("millis");
    }
    r
}

#[test]
fn demo_solvable_instance_is_not_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo");
    let input = fixture("aa.json");
    let args = [
        &["demo", p(&input), "--target", "equals-square", p(&out)][..],
        &SMALL,
    ]
    .concat();
    let o = mtafrac(&args);
    assert_eq!(code(&o), 1, "{}{}", stdout(&o), stderr(&o));
    let r = read_json(&out.join("report.json"));
    let last = r["verdicts"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["query"], "X_X = [0,1]^2");
    assert_eq!(last["verdict"], "no");
    assert_eq!(last["witness"]["kind"], "dead-prefix");
    assert_eq!(r["verdicts"][0]["verdict"], "yes");

    // every artifact parses, and parse ∘ emit is the identity
    let auto = std::fs::read_to_string(out.join("automaton.json")).unwrap();
    let (m, prov) = parse_automaton_json(&auto).unwrap();
    assert_eq!(mtafrac::io::automaton_to_json(&m, prov.as_ref()), auto);
    let gifs = std::fs::read_to_string(out.join("gifs.json")).unwrap();
    assert_eq!(
        mtafrac::io::gifs_to_json(&parse_gifs_json(&gifs).unwrap()),
        gifs
    );
    let pcp = std::fs::read_to_string(out.join("prefixpcp.json")).unwrap();
    assert_eq!(
        mtafrac::io::pcp_to_json(&parse_pcp_json(&pcp).unwrap()),
        pcp
    );
    let img = parse_pgm(&std::fs::read(out.join("attractor.pgm")).unwrap()).unwrap();
    assert_eq!(img.width, 64);
    assert!(out.join("report.txt").exists());

    // deterministic up to timings
    let first = stable(r);
    assert_eq!(code(&mtafrac(&args)), 1);
    assert_eq!(stable(read_json(&out.join("report.json"))), first);
}

#[test]
fn demo_unsolvable_instance_is_unknown_with_trend() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo");
    let input = fixture("ab.json");
    let args = [
        &[
            "demo",
            p(&input),
            "--target",
            "equals-square",
            p(&out),
            "--pad-pow2",
        ][..],
        &SMALL,
    ]
    .concat();
    let o = mtafrac(&args);
    assert_eq!(code(&o), 3, "{}{}", stdout(&o), stderr(&o));
    let r = read_json(&out.join("report.json"));
    let last = r["verdicts"].as_array().unwrap().last().unwrap();
    assert_eq!(last["verdict"], "unknown");
    assert_eq!(last["bounds"]["max_beliefs"], 500);
    assert!(!r["density_trend"].as_array().unwrap().is_empty());
    let notes = r["notes"].as_array().unwrap();
    assert!(notes
        .iter()
        .any(|n| n.as_str().unwrap().contains("powers of two")));
    let (m, _) =
        parse_automaton_json(&std::fs::read_to_string(out.join("automaton.json")).unwrap())
            .unwrap();
    assert!(m.alphabets().iter().all(|a| a.base().is_power_of_two()));
}

#[test]
fn demo_solvable_instance_has_empty_interior() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo");
    let input = fixture("aa.json");
    let args = [
        &["demo", p(&input), "--target", "empty-interior", p(&out)][..],
        &SMALL,
    ]
    .concat();
    let o = mtafrac(&args);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let r = read_json(&out.join("report.json"));
    let last = r["verdicts"].as_array().unwrap().last().unwrap();
    assert_eq!(last["query"], "X_X has empty interior");
    assert_eq!(last["witness"]["kind"], "prefix-pcp-solution");
    assert!(r["notes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|n| !n.as_str().unwrap().contains("powers of two")));
}
