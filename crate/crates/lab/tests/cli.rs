use std::path::Path;
use std::process::{Command, Output};

fn orbclose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbclose")).args(args).output().expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.display().to_string()
}

#[test]
fn same_seed_gives_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let dir = tmp.path().join(name);
        let o = orbclose(&["map-scaling", "--seed", seed, "--pairs", "4", "--nmax", "512", "--out", &out_arg(&dir)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read(dir.join("pairs.csv")).unwrap(), std::fs::read(dir.join("summary.jsonl")).unwrap())
    };
    let a = run("a", "9");
    let b = run("b", "9");
    let c = run("c", "10");
    assert_eq!(a, b);
    assert_ne!(a.0, c.0);
}

#[test]
fn thread_count_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let dir = tmp.path().join(threads);
        let o = orbclose(&[
            "skew-scaling", "--pairs", "6", "--nmax", "256", "--threads", threads, "--out", &out_arg(&dir),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.join("pairs.csv")).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn config_file_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("lsv.cfg");
    std::fs::write(&cfg, "experiment = map_scaling\n# intermittent map\nsystem = lsv\nlsv.alpha = 0.25\npairs = 2\ngrid.max_exp = 8\n").unwrap();
    let dir = tmp.path().join("out");
    let o = orbclose(&["map-scaling", "--config", cfg.to_str().unwrap(), "--out", &out_arg(&dir)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.join("pairs.csv")).unwrap();
    assert!(csv.starts_with("pair_id,n,M_n,e_n\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 5);
    let summary = std::fs::read_to_string(dir.join("summary.jsonl")).unwrap();
    assert!(summary.lines().last().unwrap().contains("\"system\":\"lsv(0.25)\"") || summary.contains("lsv"));
}

#[test]
fn configuration_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = out_arg(tmp.path());
    for args in [
        vec!["map-scaling", "--set", "no.such.key=1", "--out", &dir],
        vec!["map-scaling", "--set", "system=henon", "--out", &dir],
        vec!["flow-scaling", "--set", "flow.delta=0.5", "--out", &dir],
        vec!["gamma", "--set", "gamma.source=rational", "--set", "gamma.rational=3/7", "--out", &dir],
        vec!["corr-dim", "--set", "measure=cantor", "--out", &dir],
    ] {
        let o = orbclose(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let wrong = tmp.path().join("wrong.cfg");
    std::fs::write(&wrong, "experiment = gamma\n").unwrap();
    let o = orbclose(&["map-scaling", "--config", wrong.to_str().unwrap(), "--out", &dir]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = orbclose(&["corr-dim", "--set", "m=5", "--out", &out_arg(tmp.path())]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("undersampled"));
}

#[test]
fn gamma_and_corr_dim_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let g = tmp.path().join("g");
    let o = orbclose(&["gamma", "--set", "gamma.source=golden", "--out", &out_arg(&g)]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(g.join("gamma.csv")).unwrap();
    assert!(csv.starts_with("k,a_k,q_k_digits,gamma_hat_k\n"));
    assert_eq!(csv.lines().count(), 21);

    let c = tmp.path().join("c");
    let o = orbclose(&["corr-dim", "--set", "m=2000", "--out", &out_arg(&c)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(c.join("correlation.csv")).unwrap();
    assert!(csv.starts_with("r,C_hat\n"));
    let json = std::fs::read_to_string(c.join("summary.json")).unwrap();
    assert!(json.contains("\"slope\"") && json.contains("\"gap\""));
}
