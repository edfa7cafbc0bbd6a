//! Command-line contract: exit codes, sidecars, analysis artifacts, seed override.

use std::path::Path;
use std::process::{Command, Output};

use pngauss::cli::config::{load_sidecar, FamilyArg, GenerateOptions, RunConfig, SEED_OVERRIDE_ENV};
use pngauss::cli::read_samples;
use pngauss::galois::BinaryPolynomial;
use pngauss::lfsr::LfsrState;
use pngauss::sequences::m_sequence;

fn pngauss(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pngauss"))
        .args(args)
        .current_dir(dir)
        .env_remove(SEED_OVERRIDE_ENV)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn generate_single_term_blocks_reproduce_the_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let o = pngauss(dir.path(), &["generate", "--family", "m-sequence", "--poly", "x^3 + x + 1", "--M", "1", "--T", "7", "--out", "s.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let samples = read_samples(&dir.path().join("s.csv"), None).unwrap();
    let p: BinaryPolynomial = "x^3 + x + 1".parse().unwrap();
    let expected: Vec<f64> = m_sequence(&p, &LfsrState::default_seed(&p), 7).unwrap().symbols().iter().map(|&v| v as f64).collect();
    assert_eq!(samples, expected);
    assert_eq!(entries(dir.path()), ["s.csv", "s.csv.json"]);
}

#[test]
fn sidecar_reconstructs_the_run_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.bin");
    let o = pngauss(
        dir.path(),
        &["generate", "--family", "gold", "--poly", "x^17 + x^3 + 1", "--poly2", "x^17 + x^5 + 1", "--seed", "0x2b", "--seed2", "0x1f1", "--M", "16", "--T", "300", "--format", "bin", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sidecar = load_sidecar(&out).unwrap().expect("sidecar written");
    let opts = GenerateOptions {
        family: Some(FamilyArg::Gold),
        poly: Some("x^17 + x^3 + 1".into()),
        poly2: Some("x^17 + x^5 + 1".into()),
        seed: Some("0x2b".into()),
        seed2: Some("0x1f1".into()),
        block_len: Some(16),
        count: Some(300),
        format: Some(pngauss::cli::config::Format::Bin),
        output: Some(out.clone()),
        ..GenerateOptions::default()
    };
    let direct = RunConfig::resolve(&opts).unwrap();
    assert_eq!(sidecar.config, direct);
    assert_eq!(read_samples(&out, None).unwrap(), direct.generate().unwrap().samples);
}

#[test]
fn analyze_writes_three_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = pngauss(dir.path(), &["generate", "--family", "gold", "--poly", "x^17 + x^3 + 1", "--poly2", "x^17 + x^5 + 1", "--M", "16", "--T", "2000", "--out", "a.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = pngauss(dir.path(), &["analyze", "a.csv", "--window", "10", "--bins", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.moments.json")).unwrap()).unwrap();
    assert_eq!(doc["family"], "gold");
    assert_eq!(doc["M"], 16);
    assert_eq!(doc["T"], 2000);
    assert_eq!(doc["moments"].as_array().unwrap().len(), 4);
    assert_eq!(doc["seeds"].as_array().unwrap().len(), 2);

    let hist = std::fs::read_to_string(dir.path().join("a.histogram.csv")).unwrap();
    let mut lines = hist.lines();
    assert_eq!(lines.next(), Some("bin_lo,bin_hi,count"));
    let total: u64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 2000);

    let grid = std::fs::read_to_string(dir.path().join("a.grid.csv")).unwrap();
    let rows: Vec<&str> = grid.lines().collect();
    assert_eq!(rows.len(), 11);
    assert!(rows[0].starts_with("d1\\d2,0,1,"));
    assert!(rows.iter().all(|r| r.split(',').count() == 11));
}

#[test]
fn seed_override_replaces_both_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["generate", "--family", "gold", "--poly", "x^17 + x^3 + 1", "--poly2", "x^17 + x^5 + 1", "--M", "4", "--T", "50"];
    let with = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pngauss"));
        c.args(base).args(extra).current_dir(dir.path()).env_remove(SEED_OVERRIDE_ENV);
        if let Some(v) = env {
            c.env(SEED_OVERRIDE_ENV, v);
        }
        let o = c.output().unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    with(&["--seed", "0x3", "--seed2", "0x7", "--out", "o.csv"], Some("0x5"));
    with(&["--seed", "0x5", "--seed2", "0x5", "--out", "e.csv"], None);
    let o = load_sidecar(&dir.path().join("o.csv")).unwrap().unwrap();
    let e = load_sidecar(&dir.path().join("e.csv")).unwrap().unwrap();
    assert_eq!(o.config.seeds, e.config.seeds);
    assert_eq!(std::fs::read(dir.path().join("o.csv")).unwrap(), std::fs::read(dir.path().join("e.csv")).unwrap());
}

#[test]
fn configuration_errors_exit_1_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["generate", "--family", "m-sequence", "--poly", "x^5 + x^2 + 1", "--seed", "0x0", "--out", "z.csv"][..],
        &["generate", "--M", "0", "--out", "z.csv"],
        &["generate", "--poly", "x^4 + x^2 + 1", "--family", "m-sequence", "--out", "z.csv"],
        &["generate", "--model", "tausworthe", "--B", "0", "--out", "z.csv"],
        &["frobnicate"],
    ] {
        let o = pngauss(dir.path(), args);
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(entries(dir.path()).is_empty(), "{:?}", entries(dir.path()));
    assert_eq!(code(&pngauss(dir.path(), &["--help"])), 0);
}

#[test]
fn malformed_input_exits_3_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "0.5\n-1.0\nnope\n").unwrap();
    let o = pngauss(dir.path(), &["analyze", "bad.csv", "--family", "gold", "--model", "binary", "--M", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    std::fs::write(dir.path().join("short.bin"), [5u8, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3]).unwrap();
    let o = pngauss(dir.path(), &["analyze", "short.bin", "--family", "gold", "--model", "binary", "--M", "1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
}

#[test]
fn violated_bound_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = pngauss(dir.path(), &["verify-bounds", "--theorem", "t1", "--theta", "0"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let o = pngauss(dir.path(), &["verify-bounds", "--theorem", "t3", "--format", "csv", "--out", "b.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(csv.starts_with("theorem,family,N,M,T,k,theta_mode,theta_max,lhs,rhs,satisfied"));
}
