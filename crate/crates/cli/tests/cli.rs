use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mandeldecor"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("MANDELDECOR_THREADS", t),
        None => cmd.env_remove("MANDELDECOR_THREADS"),
    };
    cmd.output().expect("spawn mandeldecor")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fit_constants_reports_b0() {
    let out = ok(&["fit-constants", "--c1=-1.25", "--p", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let table: toml::Table = text.parse().unwrap();
    let b0 = table["B0"].as_array().unwrap();
    assert!((b0[0].as_float().unwrap() + 4.0).abs() < 1e-6, "{text}");
    assert_eq!(table["nu"].as_integer(), Some(2));
}

#[test]
fn phase_law_table() {
    let out = ok(&["phase-law", "--eps", "1e-4,1e-6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!((r[2] - std::f64::consts::PI).abs() < 0.2, "{r:?}");
    }
}

#[test]
fn decorated_render_writes_ppm_and_model() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("d.ppm");
    let model = dir.path().join("m.toml");
    let out = ok(&[
        "render-decorated",
        "--pixels-x",
        "64",
        "--samples",
        "500",
        "--out",
        s(&img),
        "--model-out",
        s(&model),
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("# effective config for render-decorated"));
    assert!(stderr.contains("pixels_x = 64"));
    let bytes = std::fs::read(&img).unwrap();
    assert!(bytes.starts_with(b"P6\n64 64\n255\n"));
    assert_eq!(bytes.len(), 13 + 64 * 64 * 3);

    // Re-render from the saved model: same image.
    let img2 = dir.path().join("d2.ppm");
    ok(&["render-decorated", "--pixels-x", "64", "--model", s(&model), "--out", s(&img2)]);
    assert_eq!(std::fs::read(&img2).unwrap(), bytes);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    let img = dir.path().join("m.png");
    std::fs::write(&cfg, format!("pixels_x = 40\npixels_y = 30\nwidth = 3.5\nout = {:?}\n", s(&img))).unwrap();
    let out = ok(&["--config", s(&cfg), "render-mandel", "--pixels-x", "50"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("pixels_x = 50") && stderr.contains("pixels_y = 30"), "{stderr}");
    let decoded = image_size(&img);
    assert_eq!(decoded, (50, 30));
}

fn image_size(path: &Path) -> (u32, u32) {
    // PNG IHDR: width and height at bytes 16..24.
    let b = std::fs::read(path).unwrap();
    assert_eq!(&b[1..4], b"PNG");
    (u32::from_be_bytes(b[16..20].try_into().unwrap()), u32::from_be_bytes(b[20..24].try_into().unwrap()))
}

#[test]
fn invalid_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("x.ppm");
    assert!(!run(&["render-mandel", "--bogus", "1", "--out", s(&img)], None).status.success());
    assert!(!run(&["render-mandel"], None).status.success());
    assert!(!run(&["render-mandel", "--width", "-1", "--out", s(&img)], None).status.success());
    assert!(!run(&["render-mandel", "--out", s(&dir.path().join("x.gif"))], None).status.success());
    assert!(!run(&["render-julia", "--c", "abc", "--out", s(&img)], None).status.success());
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "unknown_key = 3\n").unwrap();
    let out = run(&["--config", s(&cfg), "render-mandel", "--out", s(&img)], None);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown"));
}

#[test]
fn output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut images = Vec::new();
    for t in ["1", "3", "8"] {
        let img = dir.path().join(format!("j{t}.ppm"));
        let out = run(&["render-julia", "--c=-0.12+0.75i", "--pixels-x", "150", "--out", s(&img)], Some(t));
        assert!(out.status.success());
        images.push(std::fs::read(&img).unwrap());
    }
    assert!(images.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn centers_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let constants = dir.path().join("k.toml");
    let centers = dir.path().join("s.csv");
    ok(&["fit-constants", "--c1=-1.25", "--p", "2", "--out", s(&constants)]);
    ok(&["find-centers", "--constants", s(&constants), "--n-range", "5..12", "--out", s(&centers)]);
    let text = std::fs::read_to_string(&centers).unwrap();
    assert_eq!(text.lines().count(), 9, "{text}");
    let out = ok(&["center-law", "--centers", s(&centers), "--constants", s(&constants)]);
    let report: toml::Table = String::from_utf8(out.stdout).unwrap().parse().unwrap();
    assert!(report["slope_relative_error"].as_float().unwrap() < 0.05);
    let img = dir.path().join("z.ppm");
    let out = ok(&[
        "zoom-copy",
        "--centers",
        s(&centers),
        "--n",
        "8",
        "--c1=-1.25",
        "--plain",
        "--pixels-x",
        "80",
        "--out",
        s(&img),
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().find(|l| l.starts_with("boundary pixels within")).unwrap();
    let count: usize = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(count > 0);
}
