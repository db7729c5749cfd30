use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ptlattice(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptlattice"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn sorted_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn spectrum_reports_four_complex_levels() {
    let dir = tempfile::tempdir().unwrap();
    let o = ptlattice(
        &["spectrum", "--n", "21", "--alpha", "2", "--position", "closest", "--gamma-over-delta", "0.63", "--dump-matrix"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = read(dir.path(), "spectrum_summary.csv");
    let row: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..3], &["21", "2", "10"]);
    assert_eq!(row[6], "4");
    let spectrum = read(dir.path(), "spectrum.csv");
    assert!(spectrum.starts_with("# N=21,alpha=2,m0=10,"));
    assert_eq!(spectrum.lines().filter(|l| l.ends_with(",1")).count(), 4);
    assert_eq!(read(dir.path(), "hamiltonian.csv").lines().count(), 1 + 21 * 21);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["spectrum", "--alpha", "2", "--m0", "3", "--gamma", "0.1"][..],
        &["spectrum", "--n", "10", "--m0", "2", "--position", "closest", "--gamma", "0.1"],
        &["spectrum", "--n", "10", "--m0", "6", "--gamma", "0.1"],
        &["spectrum", "--n", "10", "--bogus"],
        &["wibble", "--n", "10"],
        &["--n", "10"],
    ] {
        let o = ptlattice(args, dir.path());
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(code(&ptlattice(&["--help"], dir.path())), 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "command = \"phase-diagram\"\nn = 16\nalpha = [0, 1]\nm0-values = [1, 2, 3]\n").unwrap();
    let out = dir.path().join("out");
    let o = ptlattice(&["--config", cfg.to_str().unwrap(), "--m0-values", "2,4"], &out);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for alpha in ["0", "1"] {
        let csv = read(&out, &format!("phase_curve_alpha{alpha}.csv"));
        let m0s: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(m0s, ["2", "4"]);
    }

    fs::write(&cfg, "command = \"spectrum\"\nn = 16\nfrobnicate = 1\n").unwrap();
    let o = ptlattice(&["--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("frobnicate"));
}

#[test]
fn output_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["phase-diagram", "--n", "24", "--alpha", "1,2"];
    let runs: Vec<_> = ["1", "4"]
        .iter()
        .map(|w| {
            let out = dir.path().join(format!("w{w}"));
            let mut args = base.to_vec();
            args.extend(["--workers", w]);
            assert_eq!(code(&ptlattice(&args, &out)), 0);
            out
        })
        .collect();
    for name in ["phase_curve_alpha1.csv", "phase_curve_alpha2.csv"] {
        assert_eq!(read(&runs[0], name), read(&runs[1], name));
    }
}

#[test]
fn manifest_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let o = ptlattice(
        &["evolve", "--n", "12", "--alpha", "1", "--m0", "3", "--gamma-over-delta", "0.2,0.4", "--horizon", "4", "--samples", "40", "--heatmap", "png", "--log-scale", "--shared-range"],
        &first,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = first.join("manifest.toml");
    let text = read(&first, "manifest.toml");
    assert!(text.contains("status = \"complete\""));

    let second = dir.path().join("b");
    let o = ptlattice(&["--config", manifest.to_str().unwrap()], &second);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let files = sorted_files(&first);
    assert_eq!(files, sorted_files(&second));
    assert_eq!(files.len(), 5);
    for f in files.iter().filter(|f| *f != "manifest.toml") {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn per_point_failures_and_keep_going() {
    let dir = tempfile::tempdir().unwrap();
    // the second strength overflows long before the horizon
    let args = ["evolve", "--n", "4", "--m0", "1", "--gamma", "0.1,500", "--horizon", "2000", "--samples", "20"];

    let strict = dir.path().join("strict");
    let o = ptlattice(&args, &strict);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(sorted_files(&strict), ["manifest.toml"]);
    assert!(read(&strict, "manifest.toml").contains("status = \"failed\""));

    let lenient = dir.path().join("lenient");
    let mut keep = args.to_vec();
    keep.push("--keep-going");
    let o = ptlattice(&keep, &lenient);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = read(&lenient, "manifest.toml");
    assert!(manifest.contains("status = \"partial\""));
    assert!(manifest.contains("1e300"), "{manifest}");
    assert_eq!(
        sorted_files(&lenient),
        ["heatmap_n4_alpha0_g0.1.pgm", "manifest.toml", "trace_n4_alpha0_g0.1.csv"]
    );
}

#[test]
fn ramp_run_writes_time_rows_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let o = ptlattice(
        &["evolve-ramp", "--n", "10", "--alpha", "1", "--position", "closest", "--gamma-l-over-delta", "1.2", "--tau-over-t", "2", "--horizon", "3", "--samples", "31"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let pgm = fs::read(dir.path().join("heatmap.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n10 31\n255\n"));
    let trace = read(dir.path(), "trace.csv");
    assert!(trace.starts_with("t_over_T_alpha,site_1,"));
    assert_eq!(trace.lines().count(), 32);
}

#[test]
fn scaling_and_staircase_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = ptlattice(
        &["scaling", "--n", "20,21,40,41,60,61,80,81,100,101", "--alpha", "1", "--position", "closest"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let fits = read(dir.path(), "scaling_fits.csv");
    let series: Vec<&str> = fits.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(series, ["even", "odd"]);
    assert!(dir.path().join("scaling_alpha1_even.csv").exists());

    let st = dir.path().join("st");
    let o = ptlattice(&["staircase", "--n", "12", "--alpha", "0", "--m0", "2", "--grid-points", "50"], &st);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let jumps = read(&st, "staircase_jumps.csv");
    let last = jumps.lines().last().unwrap();
    assert!(last.ends_with(",4"), "{jumps}");
}
