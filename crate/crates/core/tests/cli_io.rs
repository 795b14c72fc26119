use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use spnet::io::{
    export_graph, load_dataset, load_graph_json, load_node_signals, read_matrix_csv, render_graph,
    render_matrix_csv, ExportFormat, GraphView, LoadedGraph, Manifest, ManifestOptions, NodeSpec,
    MANIFEST_SCHEMA,
};
use spnet::synth::{simulate_dataset, simulate_node_signals, PlantedEffect, SyntheticDesign};
use spnet::{threshold, BinaryGraph, Error, SquareMatrix, StudyDataset, WeightedGraph};
use tempfile::TempDir;

/// Writes `data` as a study directory and returns the manifest path.
fn write_study(dir: &Path, data: &StudyDataset, signals: Option<&str>) -> PathBuf {
    let mut files = BTreeMap::new();
    for (s, subject) in data.subject_ids().iter().enumerate() {
        let mut row = BTreeMap::new();
        for (c, condition) in data.condition_labels().iter().enumerate() {
            let name = format!("{subject}-{condition}.csv");
            fs::write(dir.join(&name), render_matrix_csv(data.matrix(s, c))).unwrap();
            row.insert(condition.clone(), PathBuf::from(name));
        }
        files.insert(subject.clone(), row);
    }
    if let Some(text) = signals {
        fs::write(dir.join("signals.csv"), text).unwrap();
    }
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        subjects: data.subject_ids().to_vec(),
        conditions: data.condition_labels().to_vec(),
        nodes: data
            .node_labels()
            .iter()
            .enumerate()
            .map(|(i, l)| NodeSpec {
                label: l.clone(),
                coords: Some([i as f64, -1.0, 0.5]),
            })
            .collect(),
        files,
        signals: signals.map(|_| PathBuf::from("signals.csv")),
        options: ManifestOptions::default(),
    };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    path
}

fn study(j: usize) -> StudyDataset {
    let design = SyntheticDesign::new(6, 8, j)
        .with_baseline(0.6)
        .plant(PlantedEffect::linear(0, 1, 1.2, j));
    simulate_dataset(&design, 5).unwrap()
}

fn spnet(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_spnet"))
        .args(args)
        .output()
        .unwrap()
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect()
}

#[test]
fn manifest_round_trip_preserves_matrices() {
    let tmp = TempDir::new().unwrap();
    let data = study(3);
    let loaded = load_dataset(&write_study(tmp.path(), &data, None)).unwrap();
    assert_eq!(loaded.subject_ids(), data.subject_ids());
    assert_eq!(loaded.condition_labels(), data.condition_labels());
    for s in 0..data.n_subjects() {
        for c in 0..data.n_conditions() {
            assert_eq!(loaded.matrix(s, c), data.matrix(s, c));
        }
    }
    assert_eq!(loaded.node_coords().unwrap()[2], [2.0, -1.0, 0.5]);
}

#[test]
fn missing_cell_is_an_incomplete_design() {
    let tmp = TempDir::new().unwrap();
    let path = write_study(tmp.path(), &study(2), None);
    let mut manifest = Manifest::from_path(&path).unwrap();
    manifest.files.get_mut("s3").unwrap().remove("c1");
    fs::write(&path, serde_json::to_string(&manifest).unwrap()).unwrap();
    match load_dataset(&path) {
        Err(Error::IncompleteDesign { subject, condition }) => {
            assert_eq!((subject.as_str(), condition.as_str()), ("s3", "c1"));
        }
        other => panic!("expected an incomplete design, got {other:?}"),
    }
}

#[test]
fn out_of_range_correlation_is_reported_with_location() {
    let tmp = TempDir::new().unwrap();
    let path = write_study(tmp.path(), &study(2), None);
    let bad = tmp.path().join("s0-c1.csv");
    let mut rows = read_matrix_csv(&bad).unwrap().to_rows();
    rows[1][3] = 1.5;
    rows[3][1] = 1.5;
    fs::write(
        &bad,
        render_matrix_csv(&SquareMatrix::from_rows(rows).unwrap()),
    )
    .unwrap();
    match load_dataset(&path) {
        Err(Error::Data {
            file,
            row,
            col,
            value,
            ..
        }) => {
            assert_eq!(file, bad);
            assert_eq!((row, col, value), (1, 3, 1.5));
        }
        other => panic!("expected a data error, got {other:?}"),
    }
}

#[test]
fn unknown_manifest_fields_and_schemas_are_rejected() {
    let tmp = TempDir::new().unwrap();
    let path = write_study(tmp.path(), &study(2), None);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("\"schema\": 1", "\"schema\": 2", 1)).unwrap();
    assert!(matches!(load_dataset(&path), Err(Error::Schema(_))));
    fs::write(&path, text.replacen("{", "{\"extra\": 0,", 1)).unwrap();
    assert!(matches!(load_dataset(&path), Err(Error::Schema(_))));
}

#[test]
fn json_export_round_trips_byte_for_byte() {
    let tmp = TempDir::new().unwrap();
    let g = WeightedGraph::new(
        SquareMatrix::from_upper_triangle(4, &[0.3, 0.0, 0.71, 0.2, 0.5, 0.125]).unwrap(),
    )
    .unwrap()
    .with_labels(vec!["a".into(), "b".into(), "c".into(), "d".into()])
    .unwrap();
    let first = tmp.path().join("g.json");
    export_graph(&g, ExportFormat::Json, &first).unwrap();
    let loaded = load_graph_json(&first).unwrap();
    assert_eq!(loaded, LoadedGraph::Weighted(g.clone()));
    let second = tmp.path().join("g2.json");
    export_graph(loaded.view(), ExportFormat::Json, &second).unwrap();
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());

    let b = BinaryGraph::from_edges(3, [(0, 2)]).unwrap();
    let coords = [[0.0, 1.0, 2.0], [3.0, 4.0, 5.0], [6.0, 7.0, 8.5]];
    let text = render_graph(
        GraphView::Binary {
            graph: &b,
            coords: Some(&coords),
        },
        ExportFormat::Json,
    )
    .unwrap();
    fs::write(&first, &text).unwrap();
    let back = load_graph_json(&first).unwrap();
    assert_eq!(render_graph(back.view(), ExportFormat::Json).unwrap(), text);
}

#[test]
fn csv_export_rethresholds_identically() {
    let tmp = TempDir::new().unwrap();
    let data = study(2);
    let g = spnet::io::weighted_from_association(
        data.matrix(0, 0),
        spnet::io::NegativePolicy::Absolute,
    )
    .unwrap();
    let path = tmp.path().join("w.csv");
    export_graph(&g, ExportFormat::Csv, &path).unwrap();
    let back = read_matrix_csv(&path).unwrap();
    assert_eq!(
        threshold(&back, 0.5).unwrap(),
        threshold(g.weights(), 0.5).unwrap()
    );
}

#[test]
fn dot_lists_every_node_and_edge() {
    let b = BinaryGraph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
    let dot = render_graph((&b).into(), ExportFormat::Dot).unwrap();
    assert!(dot.starts_with("graph G {\n") && dot.ends_with("}\n"));
    assert_eq!(dot.matches(" -- ").count(), 3);
    assert!(dot.contains("\"v3\" -- \"v4\";"));
    assert_eq!(dot.lines().count(), 2 + 5 + 3);
}

#[test]
fn node_signal_table() {
    let tmp = TempDir::new().unwrap();
    let data = study(3);
    let design = SyntheticDesign::new(6, 8, 3).plant(PlantedEffect::linear(2, 2, 1.5, 3));
    let signals = simulate_node_signals(&design, 1).unwrap();
    let mut text = String::from("subject,condition,n0,n1,n2,n3,n4,n5\n");
    for s in 0..8 {
        for c in 0..3 {
            let v: Vec<String> = signals.signal(s, c).iter().map(f64::to_string).collect();
            text.push_str(&format!("s{s},c{c},{}\n", v.join(",")));
        }
    }
    let path = write_study(tmp.path(), &data, Some(&text));
    let loaded = load_node_signals(&path).unwrap();
    assert_eq!(loaded.signal(4, 2), signals.signal(4, 2));

    let broken: String = text
        .lines()
        .filter(|l| !l.starts_with("s5,c1"))
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(tmp.path().join("signals.csv"), broken).unwrap();
    assert!(matches!(
        load_node_signals(&path),
        Err(Error::IncompleteDesign { .. })
    ));
}

#[test]
fn cli_runs_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let manifest = write_study(tmp.path(), &study(3), None);
    let m = manifest.to_str().unwrap();
    for out in ["r1", "r2"] {
        let dir = tmp.path().join(out);
        let o = spnet(&[
            "report",
            "--manifest",
            m,
            "--abs",
            "--out-dir",
            dir.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (
        read_tree(&tmp.path().join("r1")),
        read_tree(&tmp.path().join("r2")),
    );
    assert_eq!(a, b);
    for name in [
        "density_table.csv",
        "profiles.csv",
        "report.json",
        "diff_spn_plus.dot",
        "run.log",
    ] {
        assert!(a.contains_key(name), "missing {name}");
    }
    let log = String::from_utf8(a["run.log"].clone()).unwrap();
    assert!(log.contains("config base_rate = 0.05"));
    assert!(log.ends_with("exit 0\n"));

    for out in ["s1", "s2"] {
        let dir = tmp.path().join(out);
        let o = spnet(&[
            "simulate",
            "edges",
            "--nodes",
            "30",
            "--grid",
            "40,80",
            "--replicates",
            "5",
            "--seed",
            "9",
            "--out-dir",
            dir.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(
        read_tree(&tmp.path().join("s1")),
        read_tree(&tmp.path().join("s2"))
    );
}

#[test]
fn cli_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let manifest = write_study(tmp.path(), &study(3), None);
    let m = manifest.to_str().unwrap();
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();

    assert_eq!(
        spnet(&["spn", "diff", "--manifest", m, "--out-dir", out])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        spnet(&[
            "spn",
            "mean",
            "--manifest",
            m,
            "--format",
            "dot",
            "--condition",
            "c2",
            "--out-dir",
            out
        ])
        .status
        .code(),
        Some(0)
    );
    assert!(Path::new(out).join("mean_spn_2.dot").exists());
    assert_eq!(
        spnet(&[
            "spn",
            "diff",
            "--manifest",
            m,
            "--base-rate",
            "1.5",
            "--out-dir",
            out
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        spnet(&[
            "spn",
            "diff",
            "--manifest",
            "missing.json",
            "--out-dir",
            out
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        spnet(&["spn", "diff", "--manifest", m, "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(spnet(&["--help"]).status.code(), Some(0));

    // every subject identical across conditions: zero residual variance everywhere
    let flat = SquareMatrix::from_upper_triangle(3, &[0.2, 0.4, 0.6]).unwrap();
    let cells = vec![vec![flat.clone(); 2]; 3];
    let data = StudyDataset::new(
        cells,
        vec!["a".into(), "b".into(), "c".into()],
        vec!["x".into(), "y".into()],
        vec!["p".into(), "q".into(), "r".into()],
    )
    .unwrap();
    let flat_dir = tmp.path().join("flat");
    fs::create_dir(&flat_dir).unwrap();
    let fm = write_study(&flat_dir, &data, None);
    let fm = fm.to_str().unwrap();
    assert_eq!(
        spnet(&["spn", "diff", "--manifest", fm, "--out-dir", out])
            .status
            .code(),
        Some(0)
    );
    let strict = spnet(&[
        "--strict",
        "spn",
        "diff",
        "--manifest",
        fm,
        "--out-dir",
        out,
    ]);
    assert_eq!(strict.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("degenerate"));
}

#[test]
fn cli_graph_commands() {
    let tmp = TempDir::new().unwrap();
    let g = WeightedGraph::new(
        SquareMatrix::from_upper_triangle(4, &[0.9, 0.8, 0.7, 0.6, 0.5, 0.55]).unwrap(),
    )
    .unwrap();
    let csv = tmp.path().join("g.csv");
    export_graph(&g, ExportFormat::Csv, &csv).unwrap();
    let out = tmp.path().join("o");
    let o = spnet(&[
        "metrics",
        "--graph",
        csv.to_str().unwrap(),
        "--tau",
        "0.65",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("metrics.json")).unwrap()).unwrap();
    assert_eq!(report["weighted"]["spread_condition"], true);
    assert_eq!(report["binary"]["edges"], 3);

    let o = spnet(&[
        "density-profile",
        "--graph",
        csv.to_str().unwrap(),
        "--format",
        "csv",
        "--grid",
        "1,3,6",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let profile = fs::read_to_string(out.join("profile.csv")).unwrap();
    assert_eq!(profile.lines().count(), 4);
    assert!(profile.lines().last().unwrap().starts_with("6,1,"));
}
