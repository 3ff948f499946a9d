use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn slpin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slpin")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_shape(path: &Path) -> (usize, usize, String) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let cols = header.split(',').count();
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().all(|r| r.split(',').count() == cols));
    (rows.len(), cols, header)
}

fn summary_value(dir: &Path, key: &str) -> f64 {
    let text = std::fs::read_to_string(dir.join("summary.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .parse()
        .unwrap()
}

#[test]
fn simulate_fig1_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("fig1");
    let o = slpin(&["simulate", "--config", s(&configs().join("fig1.cfg")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (rows, cols, header) = csv_shape(&out.join("trajectory.csv"));
    assert_eq!((rows, cols), (5001, 121));
    assert!(header.starts_with("time,x_0,x_1,") && header.ends_with(",y_58,y_59"));
    assert!(out.join("meta.cfg").exists());

    let snap = tmp.path().join("snap.csv");
    let o = slpin(&[
        "plotdata",
        "--trajectory",
        s(&out.join("trajectory.csv")),
        "--kind",
        "snapshot",
        "--time",
        "50",
        "--out",
        s(&snap),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (rows, cols, header) = csv_shape(&snap);
    assert_eq!((rows, cols, header.as_str()), (60, 3, "node,x,y"));

    let series = tmp.path().join("series.csv");
    let o = slpin(&[
        "plotdata",
        "--trajectory",
        s(&out.join("trajectory.csv")),
        "--kind",
        "timeseries",
        "--nodes",
        "0-4",
        "--out",
        s(&series),
    ]);
    assert!(o.status.success());
    let (rows, cols, header) = csv_shape(&series);
    assert_eq!((rows, cols, header.as_str()), (5001, 6, "time,y_0,y_1,y_2,y_3,y_4"));

    let bad = tmp.path().join("bad.csv");
    let o = slpin(&[
        "plotdata",
        "--trajectory",
        s(&out.join("trajectory.csv")),
        "--kind",
        "snapshot",
        "--time",
        "99",
        "--out",
        s(&bad),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside the trajectory range"));
    assert!(!bad.exists());
}

#[test]
fn meta_cfg_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let o = slpin(&[
        "simulate",
        "--config",
        s(&configs().join("fig2.cfg")),
        "--out",
        s(&a),
        "--seed",
        "42",
    ]);
    assert!(o.status.success());
    let o = slpin(&["simulate", "--config", s(&a.join("meta.cfg")), "--out", s(&b)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let read = |d: &Path| std::fs::read(d.join("trajectory.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(
        std::fs::read_to_string(a.join("meta.cfg")).unwrap(),
        std::fs::read_to_string(b.join("meta.cfg")).unwrap()
    );
}

#[test]
fn phase_model_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("phase");
    let o = slpin(&[
        "simulate",
        "--config",
        s(&configs().join("fig1.cfg")),
        "--out",
        s(&out),
        "--model",
        "phase",
    ]);
    assert!(o.status.success());
    let (rows, cols, header) = csv_shape(&out.join("trajectory.csv"));
    assert_eq!((rows, cols), (5001, 61));
    assert!(header.starts_with("time,theta_0,"));
}

#[test]
fn compare_writes_all_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let weak = tmp.path().join("weak");
    let strong = tmp.path().join("strong");
    let phase = tmp.path().join("phase");
    for (cfg, out) in [("fig1.cfg", &weak), ("fig2.cfg", &strong), ("phase_equiv.cfg", &phase)] {
        let o = slpin(&["compare", "--config", s(&configs().join(cfg)), "--out", s(out)]);
        assert!(o.status.success(), "{cfg}: {}", String::from_utf8_lossy(&o.stderr));
        for f in [
            "trajectory_additive.csv",
            "trajectory_parametric.csv",
            "divergence.csv",
            "summary.txt",
            "meta.cfg",
        ] {
            assert!(out.join(f).exists(), "{cfg}: {f}");
        }
    }
    let (rows, cols, header) = csv_shape(&weak.join("divergence.csv"));
    assert_eq!(
        (rows, cols, header.as_str()),
        (5001, 3, "time,phase_divergence,state_divergence")
    );
    let d_weak = summary_value(&weak, "phase_divergence_mean");
    let d_strong = summary_value(&strong, "phase_divergence_mean");
    assert!(d_strong > d_weak);
    for node in 0..20 {
        let w = summary_value(&weak, &format!("omega_p.{node}"));
        assert!((w - 1.0).abs() < 0.1);
    }
    assert!(summary_value(&phase, "phase_divergence_max") <= 1e-12);
}

#[test]
fn invalid_config_exits_1_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "network.n = 60\nnetwork.k = 3\ncoupling.epsilon = 0.01\n").unwrap();
    let out = tmp.path().join("out");
    let o = slpin(&["simulate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("network.k"));
    assert!(!out.exists());

    std::fs::write(&cfg, "network.n = 10\ncoupling.epsilonn = 0.01\n").unwrap();
    let o = slpin(&["simulate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("coupling.epsilon"));

    std::fs::write(&cfg, "network.n = 10\ncoupling.epsilon = 0.01\n").unwrap();
    let o = slpin(&["compare", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn numerical_failure_exits_2_and_cleans_up() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("blowup.cfg");
    std::fs::write(
        &cfg,
        "network.n = 10\ncoupling.epsilon = 0.01\ninitial.phases = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]\noscillator.alpha = 50.0\nintegrator.dt = 1.0\nintegrator.horizon = 50.0\n",
    )
    .unwrap();
    let out = tmp.path().join("nested/out");
    let o = slpin(&["simulate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!tmp.path().join("nested").exists());
}

#[test]
fn sweep_matches_individual_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.cfg");
    std::fs::write(
        &cfg,
        "network.n = 12\ncoupling.epsilon = 0.02\nschedule.mode = \"additive\"\nschedule.n_pinned = 4\nschedule.t_p = 2.0\nschedule.scale = 0.1\nintegrator.horizon = 5.0\n",
    )
    .unwrap();
    let out = tmp.path().join("sweep");
    let o = slpin(&[
        "sweep",
        "--config",
        s(&cfg),
        "--out",
        s(&out),
        "--param",
        "coupling.epsilon=0.01,0.05",
        "--param",
        "schedule.scale=0.1,0.4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (rows, cols, header) = csv_shape(&out.join("sweep.csv"));
    assert_eq!((rows, cols), (4, 9));
    assert!(header.starts_with("point,coupling.epsilon,schedule.scale,"));

    std::fs::write(
        &cfg,
        std::fs::read_to_string(&cfg)
            .unwrap()
            .replace("0.02", "0.05")
            .replace("scale = 0.1", "scale = 0.4"),
    )
    .unwrap();
    let single = tmp.path().join("single");
    assert!(slpin(&["compare", "--config", s(&cfg), "--out", s(&single)])
        .status
        .success());
    assert_eq!(
        std::fs::read(single.join("divergence.csv")).unwrap(),
        std::fs::read(out.join("point_003/divergence.csv")).unwrap()
    );

    let o = slpin(&[
        "sweep",
        "--config",
        s(&cfg),
        "--out",
        s(&tmp.path().join("x")),
        "--param",
        "coupling.epsilonn=0.1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!tmp.path().join("x").exists());
}
