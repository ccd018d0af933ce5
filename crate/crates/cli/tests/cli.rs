use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bipartite_resilience::extremal::PhaseDiagram;

fn bires(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bires"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bires(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no {key} line in {text:?}"))
}

#[test]
fn eval_examples() {
    assert_eq!(
        stdout(&["eval", "--graph", "kdd:2:1", "--mu", ".5", "--p", ".8"]),
        "0.7\n"
    );
    assert_eq!(
        stdout(&["eval", "--graph", "star:2", "--mu", ".55", "--p", ".4"]),
        "0.652465\n"
    );
    assert_eq!(
        stdout(&["eval", "--graph", "matching:3", "--mu", ".3", "--p", "0"]),
        "0.3\n"
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "eval", "--graph", "star:1", "--mu", ".55", "--p", ".4", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["method"], "exact");
    assert_eq!(json["value"], 0.649);
}

#[test]
fn eval_reads_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "# two pairs\n2 2\n0 0\n1 1\n").unwrap();
    let by_file = stdout(&[
        "eval",
        "--graph",
        path.to_str().unwrap(),
        "--mu",
        ".5",
        "--p",
        ".8",
    ]);
    assert_eq!(by_file, "0.7\n");
}

#[test]
fn exit_codes() {
    assert_eq!(
        bires(&["eval", "--graph", "star:2", "--mu", "1.5", "--p", ".4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bires(&["eval", "--graph", "kdd:4:x", "--mu", ".5", "--p", ".4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bires(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        bires(&["simulate", "--graph", "star:2", "--mu", ".5", "--p", ".4"])
            .status
            .code(),
        Some(2)
    );
    let big = ["eval", "--graph", "kdd:5:5", "--mu", ".3", "--p", ".3"];
    assert_eq!(bires(&big).status.code(), Some(3));
    let out = bires(&[&big[..], &["--mc", "--seed", "1", "--samples", "2000"]].concat());
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("2000 samples"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("host.txt");
    fs::write(&path, "# d=2\n2 2\n0 0\n1 0\n0 1\n").unwrap();
    let out = bires(&[
        "subnet",
        "--instance",
        path.to_str().unwrap(),
        "--mu",
        ".5",
        "--p",
        ".5",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn search_reports_the_matching() {
    let out = stdout(&["search", "--n", "4", "--d", "1", "--mu", ".3", "--p", ".5"]);
    assert_eq!(field(&out, "minimizers"), "1");
    assert!(out.contains("# minimizer 1: matching:4"));
    let out = stdout(&[
        "search", "--n", "4", "--d", "1", "--mu", ".9", "--p", ".9", "--format", "csv",
    ]);
    assert!(out.lines().nth(1).unwrap().starts_with("1,star:4,"));
}

fn write_cover(dir: &Path) -> String {
    let path = dir.join("cover.txt");
    fs::write(&path, "4 2\n0 1\n2 3\n1 2\n").unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn reduce_then_solve_meets_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cover = write_cover(dir.path());
    let inst = dir.path().join("inst.txt");
    stdout(&[
        "reduce",
        "exact-cover",
        &cover,
        "--out",
        inst.to_str().unwrap(),
    ]);
    let out = stdout(&[
        "subnet",
        "--instance",
        inst.to_str().unwrap(),
        "--isolation",
    ]);
    assert_eq!(field(&out, "certificate"), "1");
    assert_eq!(field(&out, "isolated_left"), "1");

    let local = stdout(&[
        "subnet",
        "--instance",
        inst.to_str().unwrap(),
        "--isolation",
        "--mode",
        "local",
        "--iterations",
        "0",
        "--seed",
        "5",
    ]);
    assert_eq!(field(&local, "evaluated"), "1");

    let pairs = dir.path().join("tri.txt");
    fs::write(&pairs, "3\n0 1\n1 2\n0 2\n").unwrap();
    let clique = stdout(&["reduce", "clique", pairs.to_str().unwrap(), "--d", "3"]);
    assert!(clique.starts_with("# d=3\n3 3\n"));
    assert_eq!(clique.lines().count(), 2 + 9);
}

#[test]
fn local_search_with_no_iterations_echoes_the_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("host.txt");
    fs::write(&inst, "# d=1\n3 3\n0 0\n1 0\n1 1\n2 1\n2 2\n0 2\n").unwrap();
    let args = |mode: &str| {
        vec![
            "subnet".to_string(),
            "--instance".into(),
            inst.to_str().unwrap().into(),
            "--mu".into(),
            ".6".into(),
            "--p".into(),
            ".7".into(),
            "--mode".into(),
            mode.into(),
            "--iterations".into(),
            "0".into(),
            "--seed".into(),
            "9".into(),
            "--format".into(),
            "json".into(),
        ]
    };
    let run = |mode: &str| {
        let a = args(mode);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        serde_json::from_str::<serde_json::Value>(&stdout(&refs)).unwrap()
    };
    let local = run("local");
    let exact = run("exact");
    assert_eq!(local["evaluated_count"], 1);
    assert!(local["value"].as_f64().unwrap() >= exact["value"].as_f64().unwrap() - 1e-12);
    // Greedy keeps, per R vertex, the edge to the lowest-index L vertex (all host degrees tie).
    assert_eq!(
        local["subnetwork"]["edges"],
        serde_json::json!([[0, 0], [0, 2], [1, 1]])
    );
}

#[test]
fn seeded_outputs_are_byte_identical() {
    let sim = [
        "simulate",
        "--graph",
        "kdn:5:2",
        "--mu",
        ".4",
        "--p",
        ".6",
        "--samples",
        "20000",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    assert_eq!(stdout(&sim), stdout(&sim));
    let one_thread = [&sim[..], &["--threads", "1"]].concat();
    assert_eq!(stdout(&sim), stdout(&one_thread));
    let dist = [
        "simulate",
        "--graph",
        "star:4",
        "--dist",
        "0:.6,1:.001,3:.399",
        "--samples",
        "5000",
        "--seed",
        "2",
        "--format",
        "csv",
    ];
    assert_eq!(stdout(&dist), stdout(&dist));
}

#[test]
fn csv_outputs_round_trip() {
    let curve = stdout(&[
        "star-curve",
        "--mu",
        ".55",
        "--p",
        ".4",
        "--k-max",
        "30",
        "--format",
        "csv",
    ]);
    let mut reader = csv::Reader::from_reader(curve.as_bytes());
    let mut rewritten = csv::Writer::from_writer(Vec::new());
    rewritten.write_record(["k", "expected_fraction"]).unwrap();
    for row in reader.records() {
        let row = row.unwrap();
        let k: usize = row[0].parse().unwrap();
        let v: f64 = row[1].parse().unwrap();
        rewritten
            .write_record([k.to_string(), bipartite_resilience::format::fmt_real(v)])
            .unwrap();
    }
    assert_eq!(
        String::from_utf8(rewritten.into_inner().unwrap()).unwrap(),
        curve
    );
    let mut lines = curve.lines().skip(1);
    assert_eq!(lines.next(), Some("1,0.649"));
    assert_eq!(lines.next(), Some("2,0.652465"));

    let phase = stdout(&["phase", "--d", "2", "--grid-steps", "10", "--format", "csv"]);
    let pd = PhaseDiagram::from_csv(2, &phase).unwrap();
    assert_eq!(pd.to_csv(), phase);
}

#[test]
fn star_curve_degenerate_columns() {
    for (mu, p, want) in [(".3", "0", "0.3"), ("1", ".4", "1")] {
        let out = stdout(&["star-curve", "--mu", mu, "--p", p, "--k-max", "8"]);
        assert!(
            out.lines()
                .skip(1)
                .all(|l| l.ends_with(&format!(",{want}"))),
            "{out}"
        );
    }
}

#[test]
fn phase_d1_splits_at_one_half() {
    let out = stdout(&[
        "phase",
        "--d",
        "1",
        "--grid-steps",
        "10",
        "--format",
        "json",
    ]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    let mu: Vec<f64> = serde_json::from_value(json["mu_grid"].clone()).unwrap();
    let cells: Vec<Vec<String>> = serde_json::from_value(json["cells"].clone()).unwrap();
    for (i, row) in cells.iter().enumerate() {
        for cell in &row[1..] {
            let want = match mu[i] {
                m if m == 0.0 || m == 1.0 || m == 0.5 => "TIE",
                m if m < 0.5 => "KDD",
                _ => "KDN",
            };
            assert_eq!(cell, want, "mu={}", mu[i]);
        }
    }
}

#[test]
fn svg_outputs_are_well_formed() {
    let curve = stdout(&["star-curve", "--mu", ".55", "--p", ".4", "--format", "svg"]);
    let doc = roxmltree::Document::parse(&curve).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let polylines = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .count();
    assert_eq!(polylines, 1);
    assert!(curve.contains(">k<") && curve.contains("expected infected fraction"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phase.svg");
    stdout(&[
        "phase",
        "--d",
        "2",
        "--grid-steps",
        "20",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    let raster = fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&raster).unwrap();
    let groups = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("raster"))
        .collect::<Vec<_>>();
    assert_eq!(groups.len(), 1);
    assert_eq!(
        groups[0]
            .children()
            .filter(|n| n.has_tag_name("rect"))
            .count(),
        21 * 21
    );

    assert_eq!(
        bires(&["search", "--n", "3", "--d", "1", "--mu", ".3", "--p", ".5", "--format", "svg"])
            .status
            .code(),
        Some(2)
    );
}
