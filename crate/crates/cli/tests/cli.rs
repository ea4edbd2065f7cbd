use flatamp_cli::report::validate_report;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("flatamp-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn flatamp(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatamp")).args(args).arg("--out-dir").arg(out).output().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn hecke_suite_passes_and_report_validates() {
    let d = scratch("hecke");
    let o = flatamp(&["hecke", "--primes", "2"], &d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(&d.join("hecke.json"));
    validate_report(&rep).unwrap();
    let ids: Vec<&str> = rep["records"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert!(["C1", "C2", "C3"].iter().all(|c| ids.contains(c)));
    let timings = read_json(&d.join("timings.json"));
    assert!(timings["C1"].as_f64().unwrap() < 60.0);
}

#[test]
fn amplifier_output_is_deterministic() {
    let (a, b, c) = (scratch("amp-a"), scratch("amp-b"), scratch("amp-c"));
    for (d, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        assert_eq!(flatamp(&["amplifier", "--seed", seed], d).status.code(), Some(0));
    }
    for f in ["amplifier.json", "amplifier_ledger.json"] {
        let (x, y, z) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), std::fs::read(c.join(f)).unwrap());
        assert_eq!(x, y, "{f}");
        assert_ne!(x, z, "{f}");
    }
    validate_report(&read_json(&a.join("amplifier.json"))).unwrap();
}

#[test]
fn resource_and_usage_errors_exit_2() {
    let d = scratch("errors");
    assert_eq!(flatamp(&["hecke", "--primes", "11"], &d).status.code(), Some(2));
    assert_eq!(flatamp(&["amplifier"], &d).status.code(), Some(2));
    assert_eq!(flatamp(&["lattice"], &d).status.code(), Some(2));
    assert_eq!(flatamp(&["nosuch"], &d).status.code(), Some(2));
    assert_eq!(flatamp(&["hecke", "--t", "8,16"], &d).status.code(), Some(2));
    assert_eq!(flatamp(&["hecke", "--bogus"], &d).status.code(), Some(2));
    let cfg = d.join("bad.conf");
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(flatamp(&["hecke", "--config", cfg.to_str().unwrap()], &d).status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let d = scratch("config");
    let cfg = d.join("run.conf");
    std::fs::write(&cfg, "# amplifier run\nseed = 3\nout = csv\nprimes = 2, 3\n").unwrap();
    let (from_file, overridden, flags_only) = (d.join("a"), d.join("b"), d.join("c"));
    let c = cfg.to_str().unwrap();
    assert_eq!(flatamp(&["amplifier", "--config", c], &from_file).status.code(), Some(0));
    assert_eq!(flatamp(&["amplifier", "--config", c, "--seed", "4"], &overridden).status.code(), Some(0));
    assert_eq!(flatamp(&["amplifier", "--seed", "4", "--out", "csv", "--primes", "2,3"], &flags_only).status.code(), Some(0));
    let read = |p: &Path| std::fs::read_to_string(p.join("amplifier.csv")).unwrap();
    assert!(read(&from_file).starts_with("id,anchor,status,measured,thresholds\n"));
    assert_eq!(read(&overridden), read(&flags_only));
    assert_ne!(read(&from_file), read(&overridden));
}

#[test]
fn lattice_witnesses_reparse() {
    let d = scratch("lattice");
    let o = flatamp(&["lattice", "--seed", "1"], &d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    validate_report(&read_json(&d.join("lattice.json"))).unwrap();
    let text = std::fs::read_to_string(d.join("lattice_witnesses.jsonl")).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r["det"].as_i64().unwrap().abs(), 2);
        assert_eq!(r["matrix"].as_array().unwrap().len(), 3);
        assert!(r["dist_to_MA"].as_f64().unwrap() >= 0.0);
    }
}
