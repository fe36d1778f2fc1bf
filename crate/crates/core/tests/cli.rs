use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn greenrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greenrecon")).args(args).output().expect("binary runs")
}

/// Real coefficients `a_k`; `ζ_b` is set to `f(1) = Σ a_k`.
fn write_map(path: &Path, coeffs: &[f64]) {
    let mut text = format!("# test map\nzeta_o 0 0\nzeta_b {} 0\n", coeffs.iter().sum::<f64>());
    for (k, a) in coeffs.iter().enumerate() {
        text.push_str(&format!("{k} {a} 0\n"));
    }
    fs::write(path, text).unwrap();
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn forward_then_invert_recovers_the_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("f.map");
    write_map(&map, &[0.0, 1.0, 0.1]);
    let out = dir.path().join("fwd");
    let o = greenrecon(&["forward", "--map", s(&map), "--n", "256", "--out", s(&out), "--emit-plots"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["phi.txt", "phi_table.csv", "boundary.csv", "plot_fprime.dat", "plot_phi.dat"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let table = fs::read_to_string(out.join("phi_table.csv")).unwrap();
    assert!(table.starts_with("s,phi,theta\n"));

    let inv = dir.path().join("inv");
    let o = greenrecon(&["invert", "--data", s(&out.join("phi.txt")), "--out", s(&inv)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(inv.join("reconstructed.map")).unwrap();
    let a2: Vec<f64> = text
        .lines()
        .find(|l| l.starts_with("2 "))
        .unwrap()
        .split_whitespace()
        .skip(1)
        .map(|t| t.parse().unwrap())
        .collect();
    assert!((a2[0] - 0.1).abs() < 1e-10 && a2[1].abs() < 1e-10, "{a2:?}");
}

#[test]
fn roundtrip_and_hausdorff_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.map");
    let g = dir.path().join("g.map");
    write_map(&f, &[0.0, 1.0, 0.1]);
    write_map(&g, &[0.0, 1.0]);
    let o = greenrecon(&["roundtrip", "--map", s(&f), "--n", "256", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(dir.path().join("roundtrip.csv")).unwrap();
    let err: f64 = report.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(err < 1e-10, "{err}");

    let o = greenrecon(&["hausdorff", "--map", s(&f), "--map2", s(&g), "--n", "1024", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let report = fs::read_to_string(dir.path().join("hausdorff.csv")).unwrap();
    let d: f64 = report.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((d - 0.1).abs() < 1e-2, "{d}");
}

#[test]
fn check_writes_report_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.map");
    write_map(&f, &[0.0, 1.0, 0.1]);
    for theorem in ["raggi", "disco"] {
        let o = greenrecon(&["check", "--theorem", theorem, "--map", s(&f), "--n", "256", "--out", s(dir.path())]);
        assert_eq!(o.status.code(), Some(0), "{theorem}: {}", String::from_utf8_lossy(&o.stderr));
        let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
        assert!(report.starts_with("theorem,row,lhs,rhs,K,product,ratio,pass,"));
        assert!(report.lines().skip(1).all(|l| l.contains(",true,")), "{report}");
    }
    let g = dir.path().join("g.map");
    write_map(&g, &[0.0, 1.05, 0.0, 0.02]);
    let o = greenrecon(&["check", "--theorem", "ultimo", "--map", s(&f), "--map2", s(&g), "--n", "256", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "n = 256\n[sweep]\nthis is not a pair\n").unwrap();
    let o = greenrecon(&["--config", s(&cfg), "sweep"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3"), "{}", String::from_utf8_lossy(&o.stderr));

    assert_eq!(greenrecon(&["sweep", "--family", "disk", "--eps", "0:0.1:0.1", "--n", "100"]).status.code(), Some(1));
    assert_eq!(greenrecon(&["check", "--theorem", "nope"]).status.code(), Some(1));
    assert_eq!(greenrecon(&["forward", "--map", "/nonexistent.map"]).status.code(), Some(1));
    let bad = dir.path().join("bad.map");
    fs::write(&bad, "zeta_o 0 0\nzeta_b 1 0\n0 0 0\n1 x 0\n").unwrap();
    let o = greenrecon(&["forward", "--map", s(&bad), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_honours_config_and_env_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "[sweep]\nfamily = z+eps*z^2\neps = 0.05:0.1:0.05\ntheorem = disco\nn = 128\n").unwrap();
    let out = dir.path().join("s");
    let o = Command::new(env!("CARGO_BIN_EXE_greenrecon"))
        .args(["--config", s(&cfg), "sweep", "--out", s(&out), "--emit-plots"])
        .env("GREENRECON_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().contains(",disco,main,"));
    assert!(out.join("plot_ratio_disco_main.dat").is_file());
}
