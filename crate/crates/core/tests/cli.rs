use std::fs;
use std::process::{Command, Output};

fn ptbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptbox")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_lists_every_level() {
    let o = ptbox(&["spectrum", "--potential", "xy", "--a", "1", "--M", "10", "--irrep", "all"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "irrep,index,re_E,im_E,residual");
    assert_eq!(lines.len(), 101);
    for row in &lines[1..] {
        let residual: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(residual <= 1e-10, "{row}");
    }
}

#[test]
fn perturb_prints_lowest_pair_coefficient() {
    let o = ptbox(&["perturb", "--potential", "xy", "--group", "1,2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let formula = s.lines().find(|l| l.starts_with("formula")).unwrap();
    assert!(formula.contains("1.29782294182676"), "{formula}");
    assert!(s.contains("phase BrokenAtOrigin"));
}

#[test]
fn unknown_potential_exits_one() {
    let o = ptbox(&["spectrum", "--potential", "x2y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("allowed: xy, xyy"));
}

#[test]
fn bad_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "potential=xy\nspeed=fast\n").unwrap();
    let o = ptbox(&["--config", cfg.to_str().unwrap(), "spectrum"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "potential=xy\nM=4\na=2.0\nirrep=A1\n").unwrap();
    let from_cfg = stdout(&ptbox(&["--config", cfg.to_str().unwrap(), "spectrum"]));
    let explicit = stdout(&ptbox(&["spectrum", "--potential", "xy", "--M", "4", "--a", "2", "--irrep", "A1"]));
    assert_eq!(from_cfg, explicit);
    let overridden = stdout(&ptbox(&["--config", cfg.to_str().unwrap(), "spectrum", "--M", "5"]));
    let five = stdout(&ptbox(&["spectrum", "--potential", "xy", "--M", "5", "--a", "2", "--irrep", "A1"]));
    assert_eq!(overridden, five);
    assert_ne!(overridden, from_cfg);
}

#[test]
fn output_path_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = ptbox(&["matelem", "--M", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let s = fs::read_to_string(&out).unwrap();
    assert_eq!(s.lines().next(), Some("p,k,m,closed_form,quadrature,abs_diff"));
    assert_eq!(s.lines().count(), 28);
}

#[test]
fn sweep_and_ep_headers() {
    let s = stdout(&ptbox(&["sweep", "--potential", "xyy", "--M", "6", "--a-min", "0", "--a-max", "1", "--step", "0.5"]));
    assert_eq!(s.lines().next(), Some("a,irrep,label,re_E,im_E"));
    let o = ptbox(&["ep", "--potential", "xy", "--M", "6", "--a-min", "0", "--a-max", "20", "--step", "0.5"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("irrep,label_pair,a_c,re_Ec,im_Ec,bracket_width"));
    assert!(s.lines().count() > 1);
}

#[test]
fn output_is_identical_across_runs_and_thread_counts() {
    let args = ["sweep", "--potential", "xy", "--M", "8", "--a-min", "0", "--a-max", "15", "--step", "0.5"];
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_ptbox")).args(args).env("PTBOX_THREADS", threads).output().unwrap();
        assert!(o.status.success());
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("2"));
}

#[test]
fn quick_check_passes() {
    let o = ptbox(&["check", "--only", "1,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("PASS")).count(), 3);
}
