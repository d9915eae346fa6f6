use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlab"))
        .args(args)
        .env("VLAB_CACHE", cache)
        .output()
        .expect("vlab runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn theta_sweep_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = vlab(dir.path(), &["verify", "theta", "--t", "0.1:10:0.1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["formula"], "theta");
    assert!(r["abs_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["truncation"]["lhs_terms"], 100);
    for key in ["lhs", "rhs", "rel_residual", "runtime_ms", "convention_notes"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn poisson_self_dual_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = vlab(dir.path(), &["verify", "poisson", "--family", "gaussian", "--m", "0", "--t", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(json(&o)["rel_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn gl3_untwisted_example_reports_conventions() {
    let dir = tempfile::tempdir().unwrap();
    let o = vlab(dir.path(), &["verify", "gl3", "--q", "1", "--a", "0", "--c", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let notes = r["convention_notes"].as_str().unwrap();
    assert!(notes.contains("convention = even"), "{notes}");
    assert!(notes.contains("scan odd"), "{notes}");
    assert!(r["rel_residual"].as_f64().unwrap() < 1e-3);
}

#[test]
fn coefficient_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    assert_eq!(code(&vlab(&cache, &["coeffs", "build", "--kind", "tau", "--n", "2000"])), 0);
    let o = vlab(&cache, &["coeffs", "dump", "--kind", "tau", "--range", "1:3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "#kind=tau N=3\n1\t1\n2\t-24\n3\t252\n");

    let dumped = dir.path().join("tau.tsv");
    let o = vlab(&cache, &["coeffs", "dump", "--kind", "tau", "--range", "1:2000", "--out", dumped.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let before = std::fs::read(cache.join("tau-2000.tsv")).unwrap();
    for _ in 0..2 {
        let o = vlab(&cache, &["coeffs", "ingest", dumped.to_str().unwrap(), "--kind", "tau"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(std::fs::read(cache.join("tau-2000.tsv")).unwrap(), before);
    }

    let o = vlab(&cache, &["coeffs", "ingest", dumped.to_str().unwrap(), "--kind", "d"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("holds a tau table"), "{}", stderr(&o));
}

#[test]
fn sym2_build_needs_squared_tau_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&vlab(dir.path(), &["coeffs", "build", "--kind", "tau", "--n", "2000"])), 0);
    let o = vlab(dir.path(), &["coeffs", "build", "--kind", "sym2", "--n", "100"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("needs a cached tau table with N >= 10000"), "{}", stderr(&o));
    assert_eq!(code(&vlab(dir.path(), &["coeffs", "build", "--kind", "tau", "--n", "10000"])), 0);
    let o = vlab(dir.path(), &["coeffs", "build", "--kind", "sym2", "--n", "100"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = vlab(dir.path(), &["coeffs", "dump", "--kind", "sym2", "--range", "1:2"]);
    assert!(stdout(&o).starts_with("#kind=sym2 N=2\n1\t1.0\n"), "{}", stdout(&o));
}

#[test]
fn malformed_table_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    std::fs::write(&path, "#kind=tau N=3\n1\t1\n2\tminus24\n3\t252\n").unwrap();
    let o = vlab(dir.path(), &["coeffs", "ingest", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = vlab(dir.path(), &["coeffs", "dump", "--kind", "d", "--range", "1:5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("coeffs build --kind d"), "{}", stderr(&o));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        &["verify", "nonsense"][..],
        &["verify", "theta", "--t", "1:0:0.1"],
        &["verify", "poisson-zeta", "--sigma", "0.5"],
        &["verify", "theta", "--threads", "0"],
        &["verify", "theta", "--set", "tolerance.theta=-1"],
        &["coeffs", "build", "--kind", "zeta", "--n", "10"],
        &["experiment", "hardy", "--xmax", "10"],
    ] {
        assert_eq!(code(&vlab(dir.path(), bad)), 2, "{bad:?}");
    }
    let out = dir.path().join("report.json");
    let o = vlab(
        dir.path(),
        &["verify", "voronoi-circle", "--isolate", "5", "--set", "tolerance.voronoi-circle=1e-20", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code(&o), 1);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["formula"], "voronoi-circle");
    assert!(stderr(&o).contains("exceeds tolerance"));
}

#[test]
fn experiment_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = vlab(dir.path(), &["experiment", "circle", "--xmax", "1e6", "--fit"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let k = json(&o)["fitted_exponent"].as_f64().unwrap();
    assert!((0.20..=0.34).contains(&k), "{k}");

    let o = vlab(dir.path(), &["experiment", "hardy", "--xmax", "1e4"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["ratio"].as_f64().unwrap() >= 0.582);

    let o = vlab(dir.path(), &["experiment", "divisor", "--xmax", "1e5", "--fit", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("X,delta,B1,B2,B3,ratio_x14\n"));
    let last = text.lines().last().unwrap();
    let k: f64 = last.strip_prefix("# fitted_exponent=").unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(k <= 0.34, "{k}");

    let o = vlab(dir.path(), &["experiment", "smoothed", "--x", "1e4"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["rel_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn reports_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["verify", "gl2", "--a", "1", "--c", "3"],
        &["verify", "voronoi-divisor", "--isolate", "10"],
        &["experiment", "circle", "--xmax", "1e5", "--bounds", "--format", "csv"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for threads in ["1", "8", "8"] {
            let mut full = args.to_vec();
            full.extend(["--threads", threads, "--no-timing"]);
            let o = vlab(dir.path(), &full);
            assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
            outputs.push(o.stdout);
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn config_layers() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "format = csv\ntolerance.theta = 1e-20\n").unwrap();
    let o = vlab(dir.path(), &["verify", "theta", "--config", conf.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("formula,lhs,rhs"));
    let o = vlab(dir.path(), &["verify", "theta", "--t", "2", "--config", conf.to_str().unwrap(), "--format", "json", "--set", "tolerance.theta=1e-12"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["formula"], "theta");

    // --cache beats VLAB_CACHE
    let explicit = dir.path().join("explicit");
    let o = vlab(dir.path(), &["coeffs", "build", "--kind", "d", "--n", "10", "--cache", explicit.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(explicit.join("d-10.tsv").exists());
    assert!(!dir.path().join("d-10.tsv").exists());
}
