use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use motionlab::config::MotionConfig;
use motionlab::io::{read_cloud_csv, write_cloud_csv};

const ASTALA: &str = r#"{"v":1,"kind":"astala","n":10,"harmonic":{"type":"affine","alpha":1,"beta":0,"gamma":1}}"#;
const COMPOSITE: &str = r#"{"v":1,"kind":"composite","component_ns":[10,10],
  "members":[{"type":"affine","alpha":0,"beta":0,"gamma":1.5},{"type":"affine","alpha":1,"beta":0,"gamma":1.5}]}"#;

fn motionlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motionlab"))
        .args(args)
        .env_remove("MOTIONLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn simdim_cantor() {
    let o = motionlab(&["simdim", "--ratios", "0.3333333333,0.3333333333"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.630930");
    let o = motionlab(&["--digits", "3", "simdim", "--ratios", "0.5,0.5,0.5,0.5"]);
    assert_eq!(stdout(&o).trim(), "2.000");
    let o = motionlab(&["simdim", "--ratios", "0.5,0.5", "--c", "3"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);
}

#[test]
fn bounds_examples() {
    assert_eq!(stdout(&motionlab(&["bounds", "smirnov", "--k", "0"])).trim(), "1");
    assert_eq!(stdout(&motionlab(&["bounds", "smirnov", "--k", "0.5"])).trim(), "1.25");
    let qs = stdout(&motionlab(&["bounds", "qs", "--delta", "1", "--k", "0.5"]));
    assert!(qs.starts_with("Δ=0.75 "), "{qs}");
    let area = stdout(&motionlab(&["bounds", "area", "--area", "0.7853981633974483", "--k", "0.3333333333333333"]));
    assert_eq!(area.trim(), "3.141593");
    let dim = stdout(&motionlab(&["bounds", "dim", "--dim", "1", "--k", "0"]));
    assert_eq!(dim.trim(), "1.000000 1.000000");
}

#[test]
fn bounds_sweep_csv() {
    let o = motionlab(&["bounds", "smirnov", "--sweep", "5"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,bound");
    assert_eq!(lines.len(), 6);
    for l in &lines[1..] {
        let (k, b) = l.split_once(',').unwrap();
        let (k, b): (f64, f64) = (k.parse().unwrap(), b.parse().unwrap());
        assert_eq!(b, 1.0 + k * k);
    }
    let o = motionlab(&["bounds", "qs", "--delta", "0.5", "--sweep", "4"]);
    assert!(stdout(&o).starts_with("k,lower,upper\n"));
}

#[test]
fn exit_codes() {
    let o = motionlab(&["simdim", "--ratios", "1.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("RatioOutOfRange"));
    let o = motionlab(&["bounds", "smirnov", "--k", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("KOutOfRange"));
    assert_eq!(motionlab(&["simdim"]).status.code(), Some(2));
    assert_eq!(motionlab(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.json", &ASTALA.replace("\"n\":10", "\"n\":3"));
    let o = motionlab(&["motion", "dim", "--config", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("InvalidInput"), "{}", stderr(&o));
    let cfg = write_config(dir.path(), "a.json", ASTALA);
    let o = motionlab(&["motion", "dim", "--config", &cfg, "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("PointOutsideDisk"));
}

#[test]
fn motion_build_dim_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.json", ASTALA);
    let built = dir.path().join("built.json");
    let o = motionlab(&["motion", "build", "--config", &cfg, "--out", built.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&built).unwrap();
    let parsed = MotionConfig::parse(&text).unwrap();
    assert_eq!(parsed.emit(), text);
    assert!(text.contains("\"centers\""));

    for (lambda, want) in [("0", "0.605872"), ("0.5", "0.465005"), ("-0.5", "0.869176")] {
        let o = motionlab(&["motion", "dim", "--config", built.to_str().unwrap(), "--lambda", lambda]);
        assert_eq!(stdout(&o).trim(), want, "lambda {lambda}");
    }
    let o = motionlab(&["motion", "dim", "--config", &cfg, "--grid", "5"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,dim_theory"));
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[0].hypot(v[1]) <= 0.95 + 1e-15);
        assert!(v[2] > 0.0 && v[2] <= 2.0);
    }
}

#[test]
fn render_estimate_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.json", ASTALA);
    let cloud = dir.path().join("c.csv");
    let cloud_s = cloud.to_str().unwrap();
    let o = motionlab(&["motion", "render", "--config", &cfg, "--lambda", "0", "--points", "50000", "--out", cloud_s]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&cloud).unwrap();
    let parsed = read_cloud_csv(&text).unwrap();
    assert_eq!(parsed.len(), 50_000);
    assert_eq!(parsed.meta.seed, Some(42));
    assert_eq!(write_cloud_csv(&parsed), text);

    let o = motionlab(&["dim", "estimate", "--cloud", cloud_s, "--packing"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let values: Vec<f64> = out
        .lines()
        .filter_map(|l| l.strip_prefix("value: "))
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 2);
    for v in values {
        assert!((v - 0.6058715).abs() < 0.1, "{out}");
    }
    let o = motionlab(&["dim", "estimate", "--cloud", cloud_s, "--kmin", "3", "--kmax", "9"]);
    assert!(stdout(&o).contains("window: 3..9"), "{}", stdout(&o));

    let svg = dir.path().join("c.svg");
    let svg_s = svg.to_str().unwrap();
    assert!(motionlab(&["plot", "--cloud", cloud_s, "--out", svg_s, "--size", "300"]).status.success());
    let first = fs::read_to_string(&svg).unwrap();
    assert!(first.contains("version=\"1.1\"") && first.contains("width=\"300\""));
    assert!(motionlab(&["plot", "--cloud", cloud_s, "--out", svg_s, "--size", "300"]).status.success());
    assert_eq!(fs::read_to_string(&svg).unwrap(), first);
}

#[test]
fn seed_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.json", ASTALA);
    let render = |out: &str, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_motionlab"));
        cmd.args(["motion", "render", "--config", &cfg, "--points", "500", "--out", out]);
        match env {
            Some(v) => cmd.env("MOTIONLAB_SEED", v),
            None => cmd.env_remove("MOTIONLAB_SEED"),
        };
        assert!(cmd.status().unwrap().success());
        fs::read_to_string(out).unwrap()
    };
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let default = render(&p("d.csv"), None);
    let seven = render(&p("s.csv"), Some("7"));
    assert!(default.starts_with("# motionlab cloud v1; seed=42;"));
    assert!(seven.starts_with("# motionlab cloud v1; seed=7;"));
    assert_ne!(default, seven);
    assert_eq!(render(&p("s2.csv"), Some("7")), seven);
}

#[test]
fn verify_checks_pass_and_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let astala = write_config(dir.path(), "a.json", ASTALA);
    let composite = write_config(dir.path(), "c.json", COMPOSITE);
    for cfg in [&astala, &composite] {
        for check in ["harnack", "sandwich", "qsh", "mean-value"] {
            let o = motionlab(&["verify", check, "--config", cfg]);
            assert!(o.status.success(), "{check}: {}{}", stdout(&o), stderr(&o));
            let out = stdout(&o);
            assert!(out.contains("status: PASS"));
            assert!(out.contains("check,param,residual,tolerance,passed"));
        }
    }
    let o = motionlab(&["verify", "diameter", "--config", &astala]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = motionlab(&["verify", "diameter", "--config", &astala, "--bound-rho", "3.6", "--address", "0,0:1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("status: FAIL"));
    let o = motionlab(&["verify", "diameter", "--config", &composite]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_report_csv_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.json", ASTALA);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = motionlab(&["verify", "harnack", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        fs::read(out).unwrap()
    };
    let a = run("r1.csv");
    assert_eq!(a, run("r2.csv"));
    assert!(String::from_utf8(a).unwrap().starts_with("check,param,residual,tolerance,passed\n"));
}
