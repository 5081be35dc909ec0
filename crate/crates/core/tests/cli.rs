use std::path::Path;
use std::process::Command;

use triarea::cli_io::{parse_graph, run, DrawingFile, EXIT_FAILURE, EXIT_USAGE};

fn triarea(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_triarea")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let mut full = vec!["triarea"];
    full.extend_from_slice(args);
    let code = run(full, &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn generate(dir: &Path, family: &[&str], name: &str) -> String {
    let path = p(dir, name);
    let mut args = vec!["generate"];
    args.extend_from_slice(family);
    args.extend_from_slice(&["-o", &path]);
    let (code, out, err) = in_process(&args);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("vertices"));
    path
}

#[test]
fn generate_vertex_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (family, n) in [
        (vec!["accordion", "3"], 9),
        (vec!["double-stacking", "2", "2"], 8),
        (vec!["k4"], 4),
        (vec!["octahedron"], 6),
        (vec!["stacked", "7", "2"], 7),
    ] {
        let path = generate(dir.path(), &family, "g.txt");
        let t = parse_graph(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(t.vertex_count(), n, "{family:?}");
    }
    let (code, out, _) = in_process(&["generate", "accordion", "1"]);
    assert_eq!(code, 0);
    assert_eq!(parse_graph(&out).unwrap().vertex_count(), 7);
}

#[test]
fn analyze_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 3] = [
        (&["accordion", "1"], "AREA-UNIVERSAL (degrees 3/3, crr, odd)"),
        (&["accordion", "2"], "NOT AREA-UNIVERSAL (Eulerian)"),
        (&["double-stacking", "3", "3"], "NOT AREA-UNIVERSAL (Eulerian)"),
    ];
    for (family, verdict) in cases {
        let g = generate(dir.path(), family, "g.txt");
        let (code, out, _) = triarea(&["analyze", &g]);
        assert_eq!(code, 0);
        assert!(out.contains(verdict), "{out}");
    }
    let g = generate(dir.path(), &["accordion", "3"], "a3.txt");
    let (code, out, _) = in_process(&["analyze", &g, "--json", "--samples", "2", "--seed", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "AreaUniversal");
    assert_eq!(v["samples_used"], 2);
}

#[test]
fn analyze_reports_missing_and_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = triarea(&["analyze", &p(dir.path(), "missing.txt")]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("missing.txt"));
    let bad = p(dir.path(), "bad.txt");
    std::fs::write(&bad, "vertices 4\nouter 0 2 1\nface 0 1 3\n").unwrap();
    let (code, _, err) = triarea(&["analyze", &bad]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("invalid triangulation"), "{err}");
    let (code, _, _) = triarea(&["analyze"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn realize_verify_render_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), &["accordion", "1"], "a1.txt");
    let areas = p(dir.path(), "areas.txt");
    let values: String = (0..9).map(|i| format!("{i} {}/{}\n", i + 1, 2 * i + 3)).collect();
    std::fs::write(&areas, values).unwrap();
    let drawing = p(dir.path(), "d.txt");
    let svg = p(dir.path(), "d.svg");
    let (code, out, err) = triarea(&["realize", &g, &areas, "-o", &drawing, "--svg", &svg, "--tol", "1e-9"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("sum identity: exact"));
    let file = DrawingFile::parse(&std::fs::read_to_string(&drawing).unwrap()).unwrap();
    let summary = file.summary.unwrap();
    assert!(summary.residual_faces.len() <= 2);
    assert!(summary.orientations_ok && summary.sum_identity);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let (code, out, _) = triarea(&["verify", &g, &areas, &drawing]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("OK"));

    let rendered = p(dir.path(), "r.svg");
    let (code, _, _) = triarea(&["render", &g, &drawing, "--svg", &rendered, "--areas", &areas]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&rendered).unwrap();
    assert_eq!(text.matches("<polygon").count(), 9);

    // move the last vertex far away
    let corrupted = p(dir.path(), "bad.txt");
    let text = std::fs::read_to_string(&drawing).unwrap();
    let text: String = text
        .lines()
        .map(|l| if l.starts_with("vertex 6 ") { "vertex 6 1000 -1000".to_string() } else { l.to_string() })
        .map(|l| l + "\n")
        .collect();
    std::fs::write(&corrupted, text).unwrap();
    let (code, out, _) = triarea(&["verify", &g, &areas, &corrupted]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("FAILED"));
    assert!(out.contains("sum identity: exact"));
}

#[test]
fn realize_k4_exact_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), &["k4"], "k4.txt");
    let areas = p(dir.path(), "areas.txt");
    std::fs::write(&areas, "0 1\n1 2\n2 3\n").unwrap();
    let (code, out, _) = in_process(&["realize", &g, &areas]);
    assert_eq!(code, 0);
    let file = DrawingFile::parse(&out).unwrap();
    let s = file.summary.unwrap();
    assert!(s.residual_faces.is_empty());
    assert!(num_traits::Zero::is_zero(&s.max_relative_residual));
}

#[test]
fn realize_rejects_mismatched_area_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), &["k4"], "k4.txt");
    let areas = p(dir.path(), "areas.txt");
    std::fs::write(&areas, "0 1\n1 2\n").unwrap();
    let (code, _, err) = in_process(&["realize", &g, &areas]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("2 areas"), "{err}");
    let (code, _, _) = in_process(&["realize", &g, &areas, "--tol", "-1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn realize_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), &["stacked", "6", "1"], "s.txt");
    let areas = p(dir.path(), "areas.txt");
    std::fs::write(&areas, (0..7).map(|i| format!("{i} 1\n")).collect::<String>()).unwrap();
    let (code, out, _) = in_process(&["realize", &g, &areas, "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    assert_eq!(v["report"]["sum_identity"], true);
}
