use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn kf(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinforge"))
        .current_dir(dir)
        .env_remove("KLEINFORGE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = kf(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn space_info_for_the_klein_bottle() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("spaces/standard_klein.json");
    let text = ok(dir.path(), &["space", "info", "--spec", s(&spec)]);
    for line in ["k1=1", "k2=1", "rank(B)=1", "hidden tori: none"] {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
}

#[test]
fn full_coupling_generators() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("spaces/full_coupling.json");
    let text = ok(dir.path(), &["space", "generators", "--spec", s(&spec)]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[5..],
        [
            "(x, y) ~ (x, y + e1 + e2)",
            "(x, y) ~ (x, y + e2 + e3)",
            "(x, y) ~ ((-,-) ⊙ x, y + e1)"
        ]
    );
}

#[test]
fn canon_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("spaces/standard_klein.json");
    let text = ok(dir.path(), &["space", "canon", "--spec", s(&spec), "--point", "-0.3,1.25"]);
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    let c: Vec<f64> = serde_json::from_value(v["canonical"].clone()).unwrap();
    assert!((c[0] - 0.3).abs() < 1e-12 && (c[1] - 0.25).abs() < 1e-12, "{c:?}");
}

#[test]
fn double_flip_basis_contains_the_sin_sin_mode() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("spaces/double_flip.json");
    ok(
        dir.path(),
        &["harmonics", "basis", "--spec", s(&spec), "--lmax", "1", "--zmax", "1", "--out", "basis.json"],
    );
    let text = std::fs::read_to_string(dir.path().join("basis.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["manifest"], "basis.json.manifest.json");
    assert!(dir.path().join("basis.json.manifest.json").exists());
    let section = &v["sections"][0];
    let block = section["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["zeta"] == serde_json::json!([1, 1]))
        .expect("a kernel at zeta = (1, 1)");
    assert_eq!(block["kernel_basis"], serde_json::json!([["1", "-1", "-1", "1"]]));

    // The realized cosine part is a multiple of sin(2πx1) sin(2πx2) cos(π(y1 + y2)).
    let f = section["functions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["zeta"] == serde_json::json!([1, 1]) && f["part"] == "cos")
        .unwrap();
    let eval = |x: [f64; 2], y: [f64; 2]| -> f64 {
        f["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| {
                let l: Vec<f64> = serde_json::from_value(t["lambda"].clone()).unwrap();
                let c: f64 = t["coeffs"][0].as_str().unwrap().parse().unwrap();
                c * (TAU * (l[0] * x[0] + l[1] * x[1]) + PI * (y[0] + y[1])).cos()
            })
            .sum()
    };
    let target = |x: [f64; 2], y: [f64; 2]| (TAU * x[0]).sin() * (TAU * x[1]).sin() * (PI * (y[0] + y[1])).cos();
    let (p, q) = (([0.13, 0.29], [0.41, 0.07]), ([0.61, 0.83], [1.37, 0.52]));
    let k = eval(p.0, p.1) / target(p.0, p.1);
    assert!(k.abs() > 0.5);
    assert!((eval(q.0, q.1) - k * target(q.0, q.1)).abs() < 1e-12);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = kf(dir.path(), &["space", "info", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = kf(dir.path(), &["space", "info", "--spec", "nope.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"k1":1,"k2":1,"mode":"diagonal","B":[[0]]}"#).unwrap();
    assert_eq!(kf(dir.path(), &["space", "info", "--spec", "bad.json"]).status.code(), Some(1));
    std::fs::write(dir.path().join("junk.json"), "not json").unwrap();
    assert_eq!(kf(dir.path(), &["space", "info", "--spec", "junk.json"]).status.code(), Some(1));

    // sin(2πx) is odd in x and so not a field on the Klein bottle.
    std::fs::write(
        dir.path().join("odd.json"),
        r#"{"kind":"scalar_series","terms":[{"lambda":[1],"zeta":[0],"sin":1.0}]}"#,
    )
    .unwrap();
    let spec = data("spaces/standard_klein.json");
    let out = kf(dir.path(), &["field", "check", "--spec", s(&spec), "--field", "odd.json"]);
    assert_eq!(out.status.code(), Some(1));
    let good = data("fields/klein_scalar.json");
    ok(dir.path(), &["field", "check", "--spec", s(&spec), "--field", s(&good)]);
}

#[test]
fn thread_settings() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("spaces/standard_klein.json");
    let out = Command::new(env!("CARGO_BIN_EXE_kleinforge"))
        .current_dir(dir.path())
        .env("KLEINFORGE_THREADS", "many")
        .args(["space", "info", "--spec", s(&spec)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_kleinforge"))
        .current_dir(dir.path())
        .env("KLEINFORGE_THREADS", "2")
        .args(["space", "info", "--spec", s(&spec)])
        .output()
        .unwrap();
    assert!(out.status.success());
    ok(dir.path(), &["--threads", "3", "space", "info", "--spec", s(&spec)]);
}

/// The documented pipeline, run from `dir` with relative output names.
fn pipeline(dir: &Path) -> Vec<&'static str> {
    let klein = data("spaces/standard_klein.json");
    let focus = data("fields/klein_focus.json");
    let scalar = data("fields/klein_scalar.json");
    let steps: Vec<Vec<&str>> = vec![
        vec!["sds", "generate", "--nodes", "30", "--density", "0.15", "--seed", "7", "--out", "g.json"],
        vec!["sds", "run", "--graph", "g.json", "--kick", "0", "--observe", "0", "--spikes", "400", "--out", "spikes.csv"],
        vec!["sds", "isi", "--spikes", "spikes.csv", "--node", "0", "--burn-in", "100", "--out", "isi.csv"],
        vec!["isi", "embed", "--in", "isi.csv", "--window", "4", "--dedup", "1e-12", "--out", "cloud.csv"],
        vec!["isi", "dim2nn", "--in", "cloud.csv", "--out", "dim.json"],
        vec!["isi", "rips", "--in", "cloud.csv", "--rmax", "2.0", "--out", "dgm.csv"],
        vec!["isi", "profile", "--in", "isi.csv", "--wmin", "2", "--wmax", "5", "--out", "profile.csv"],
        vec!["harmonics", "basis", "--spec", s(&klein), "--lmax", "2", "--zmax", "2", "--out", "basis.json"],
        vec![
            "flow", "streamlines", "--spec", s(&klein), "--field", s(&focus), "--grid", "3", "--steps", "300",
            "--out", "lines.csv",
        ],
        vec![
            "field", "sample-scalar", "--spec", s(&klein), "--field", s(&scalar), "--grid", "16", "--out",
            "grid.csv", "--svg", "heat.svg",
        ],
    ];
    for args in &steps {
        ok(dir, args);
    }
    vec![
        "g.json", "spikes.csv", "isi.csv", "cloud.csv", "dim.json", "dgm.csv", "profile.csv", "basis.json",
        "lines.csv", "grid.csv", "heat.svg",
    ]
}

fn without_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let files = pipeline(a.path());
    pipeline(b.path());
    for f in files {
        let fa = std::fs::read(a.path().join(f)).unwrap();
        let fb = std::fs::read(b.path().join(f)).unwrap();
        assert!(!fa.is_empty(), "{f} is empty");
        assert_eq!(fa, fb, "{f} differs between runs");
        let m = format!("{f}.manifest.json");
        let ma = std::fs::read_to_string(a.path().join(&m)).unwrap();
        let mb = std::fs::read_to_string(b.path().join(&m)).unwrap();
        assert_eq!(without_timestamp(&ma), without_timestamp(&mb), "{m}");
        let v: serde_json::Value = serde_json::from_str(&ma).unwrap();
        assert_eq!(v["tool"], "kleinforge");
        assert!(v["timestamp"].as_str().unwrap().ends_with('Z'));
    }
    let g: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("g.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(g["seeds"]["graph"], 7);
    assert_eq!(g["seeds"]["transit"], 8);
}

#[test]
fn rips_csv_uses_inf() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("sq.csv"), "0,0\n1,0\n1,1\n0,1\n").unwrap();
    ok(dir.path(), &["isi", "rips", "--in", "sq.csv", "--rmax", "2", "--out", "dgm.csv"]);
    let text = std::fs::read_to_string(dir.path().join("dgm.csv")).unwrap();
    assert_eq!(
        text,
        format!("degree,birth,death\n0,0,1\n0,0,1\n0,0,1\n0,0,inf\n1,1,{}\n", 2f64.sqrt())
    );
}

#[test]
fn json_outputs_name_their_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("spaces/standard_klein.json");
    let field = data("fields/klein_scalar.json");
    ok(dir.path(), &["field", "check", "--spec", s(&spec), "--field", s(&field), "--out", "report.json"]);
    let cloud: String = (0..40).map(|i| format!("{},{}\n", (i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect();
    std::fs::write(dir.path().join("cloud.csv"), cloud).unwrap();
    ok(dir.path(), &["isi", "dim2nn", "--in", "cloud.csv", "--out", "dim.json"]);
    for f in ["report.json", "dim.json"] {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(f)).unwrap()).unwrap();
        assert_eq!(v["manifest"], format!("{f}.manifest.json"));
        assert!(dir.path().join(format!("{f}.manifest.json")).exists());
    }
}
