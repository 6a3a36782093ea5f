use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sphermean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphermean"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path(dir: &Path, file: &str) -> String {
    dir.join(file).to_str().unwrap().to_owned()
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["transform", "--input", "f.bin", "--radius", "-1", "--output", "h.bin"][..],
        &["transform", "--input", "f.bin", "--radius", "0", "--output", "h.bin"],
        &["verify", "nope"],
        &["verify", "specfun", "--dim", "4"],
        &["verify", "specfun", "--radius", "0.5"],
        &["verify", "support", "--radius", "0.5"],
        &["bessel", "--order", "0"],
        &["phantom", "--kind", "gaussian", "--output", "x.bin", "--center", "0,0,0"],
        &["invert", "--input", "h.bin", "--radius", "0.7", "--output", "f.bin", "--policy", "wiener"],
        &["--frobnicate"],
    ] {
        let out = sphermean(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn missing_input_is_a_runtime_error() {
    let out = sphermean(&["transform", "--input", "/nonexistent/f.bin", "--radius", "0.7", "--output", "/tmp/h.bin"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_documents_the_flags() {
    let out = sphermean(&["transform", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--input", "--radius", "--method", "--output", "--truncate", "--verify", "--report"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }
    let out = sphermean(&["verify", "--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for suite in ["specfun", "abel", "local", "support", "rconvex", "rconvex-walk", "all"] {
        assert!(text.contains(suite), "{suite} missing from help");
    }
}

#[test]
fn bessel_zero_table() {
    let out = sphermean(&["bessel", "--order", "0.5", "--zeros", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,zero");
    let z: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((z - 2.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn seeded_phantoms_are_reproducible() {
    let dir = scratch("phantom");
    let run = |file: &str, seed: &str| {
        let out = sphermean(&[
            "phantom", "--kind", "bump", "--size", "0.3", "--random-center", "--seed", seed, "--shape", "32",
            "--output", &path(&dir, file),
        ]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(dir.join(file)).unwrap()
    };
    assert_eq!(run("a.bin", "3"), run("b.bin", "3"));
    assert_ne!(run("a.bin", "3"), run("c.bin", "4"));
    assert!(dir.join("a.bin.json").exists());
}

#[test]
fn transform_then_invert() {
    let dir = scratch("round_trip");
    let (f, h, g) = (path(&dir, "f.bin"), path(&dir, "h.bin"), path(&dir, "g.bin"));
    let ok = |args: &[&str]| {
        let out = sphermean(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out
    };
    ok(&["phantom", "--kind", "gaussian", "--sigma", "0.15", "--shape", "96", "--output", &f]);
    let out = ok(&["transform", "--input", &f, "--radius", "0.7", "--method", "fft", "--output", &h, "--verify"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["metrics"]["ring_maxima"].as_array().unwrap().len(), 3);
    ok(&["invert", "--input", &h, "--radius", "0.7", "--output", &g, "--report", &path(&dir, "inv.json")]);
    let read = |p: &str| -> Vec<f64> {
        std::fs::read(p)
            .unwrap()
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect()
    };
    let (a, b) = (read(&f), read(&g));
    let err: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(err / norm < 5e-2, "{}", err / norm);
}

#[test]
fn support_on_user_fields_reports_a_witness() {
    let dir = scratch("support");
    let (f, k) = (path(&dir, "f.bin"), path(&dir, "k.bin"));
    let common = ["--shape", "128", "--spacing", "0.046875"];
    let mut args = vec!["phantom", "--kind", "disk-mask", "--size", "1", "--output", &k];
    args.extend(common);
    assert_eq!(sphermean(&args).status.code(), Some(0));
    let mut args = vec!["phantom", "--kind", "bump", "--size", "0.25", "--center", "1.8,0.2", "--output", &f];
    args.extend(common);
    assert_eq!(sphermean(&args).status.code(), Some(0));
    let out = sphermean(&["verify", "support", "--field", &f, "--mask", &k, "--radius", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert!(!report["witnesses"].as_array().unwrap().is_empty());

    let out = sphermean(&["verify", "rconvex", "--mask", &k, "--radius", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn abel_profiles_round_trip() {
    let dir = scratch("abel");
    let (g, f, back) = (path(&dir, "g.csv"), path(&dir, "f.csv"), path(&dir, "back.csv"));
    let mut csv = String::from("r,value\n");
    for i in 0..65 {
        let p = i as f64 / 64.0;
        csv.push_str(&format!("{p},{}\n", 1.0 - 0.5 * p * p));
    }
    std::fs::write(&g, csv).unwrap();
    assert_eq!(sphermean(&["abel", "forward", "--input", &g, "--output", &f]).status.code(), Some(0));
    assert_eq!(sphermean(&["abel", "inverse", "--input", &f, "--output", &back]).status.code(), Some(0));
    let text = std::fs::read_to_string(&back).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[1] - 0.5).abs() < 1e-6, "{last:?}");
    // n = 2 needs the explicit flag
    assert_eq!(sphermean(&["abel", "forward", "--input", &g, "--output", &f, "--dim", "2"]).status.code(), Some(2));
}

#[test]
fn verify_specfun_passes() {
    let out = sphermean(&["verify", "specfun", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["suite"], "specfun");
    assert_eq!(report["pass"], true);
}
