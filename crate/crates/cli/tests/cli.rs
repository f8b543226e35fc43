use std::path::PathBuf;
use std::process::{Command, Output};

fn popzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_popzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("popzeta-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn enumerate_lists_members() {
    let o = popzeta(&["enumerate", "--list", "1:2", "--max", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let members: Vec<u64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(members, [1, 2, 4, 5, 8, 10, 11, 16, 17, 20, 22, 23, 25, 31, 32]);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["count", "--list", "1:3", "--max", "abc"][..],
        &["count", "--list", "3:2", "--max", "10"],
        &["count", "--list", "1:2", "--max", "10", "--bogus"],
        &["count", "--max", "10"],
        &["count", "--list", "1:2", "--primes", "3", "--max", "10"],
        &["identities", "--list", "1:2", "--max", "10", "--id", "no-such-identity"],
        &["mertens", "--primes", "2", "--grid", "10:100"],
        &["eval", "--list", "1:2", "--s", "0.5"],
        &["eval", "--list", "1:2", "--function", "perron", "--x", "20"],
    ] {
        let o = popzeta(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn oversized_tables_exit_3() {
    let o = popzeta(&["enumerate", "--list", "1:1", "--max", "1e12"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn identity_suites_pass() {
    let o = popzeta(&["identities", "--primes", "3,7", "--max", "500", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("identity_id,M,x,a,lhs,rhs,residual,pass"));
    assert_eq!(text.lines().count(), 15);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));

    let o = popzeta(&["identities", "--list", "1:2", "--max", "2000", "--all", "--a", "-2", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = popzeta(&["series-identities", "--list", "1:3", "--all", "--degree", "32"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn count_with_inclusion_exclusion() {
    let o = popzeta(&["count", "--list", "1:2", "--max", "1e4", "--inclusion-exclusion"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x,n_pop\n10000,2416\ninclusion_exclusion,agrees\n");
}

#[test]
fn outputs_are_deterministic() {
    let dir = scratch("determinism");
    let mut bytes = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("run{i}.csv"));
        let o = popzeta(&[
            "eval",
            "--list",
            "1:2",
            "--s",
            "2",
            "--s",
            "2,5",
            "--prime-cutoff",
            "1e5",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert!(String::from_utf8(bytes[0].clone()).unwrap().starts_with("re_s,im_s,re_val,im_val,err\n"));
}

#[test]
fn density_constant_summary() {
    let o = popzeta(&["estimate-a", "--list", "1:2", "--grid", "1e3:1e7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("constant,band_lo,band_hi,grid_max"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert!((0.636..=0.836).contains(&fields[0]));
    assert!(fields[1] <= fields[0] && fields[0] <= fields[2]);
    assert_eq!(fields[3], 1e7);
}

#[test]
fn perron_count() {
    let o = popzeta(&["eval", "--list", "1:2", "--function", "perron", "--x", "20.5", "--prime-cutoff", "1e5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert!((row[3] - 10.0).abs() <= 0.5);
}

#[test]
fn asymptotics_writes_dumps() {
    let dir = scratch("asymptotics");
    let o = popzeta(&[
        "asymptotics",
        "--list",
        "1:2",
        "--grid",
        "1e3:1e5",
        "--small-grid",
        "1e-3:1e-2",
        "--n-max",
        "1e5",
        "--output",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["density.csv", "harmonic.csv", "laplace.csv", "series_integral.csv", "laplace_identity.csv"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    assert!(stdout(&o).contains("laplace_identity_failures,0"));
}

#[test]
fn report_runs_every_check() {
    let o = popzeta(&[
        "report",
        "--list",
        "1:3",
        "--max",
        "300",
        "--degree",
        "24",
        "--prime-cutoff",
        "1e5",
        "--series-cutoff",
        "1e5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for id in ["sum-phi", "lambert-tau", "weierstrass", "shift", "power", "log-mobius", "gamma-integral", "abel-integral"] {
        assert!(text.contains(&format!("\n{id},")), "{id}");
    }
}
