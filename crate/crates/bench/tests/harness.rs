use std::process::Command;

use lie_transport_bench::{
    csv_io::write_records, read_csv, run_convergence, write_csv, BenchConfig, ConvergenceRecord,
    SchemeTag,
};

fn config(schemes: &[SchemeTag], n_grid: Vec<usize>, reference_steps: usize) -> BenchConfig {
    BenchConfig {
        schemes: schemes.to_vec(),
        n_grid,
        reference_steps,
        ..BenchConfig::default()
    }
}

fn errors(records: &[ConvergenceRecord], scheme: SchemeTag) -> Vec<(usize, f64)> {
    records
        .iter()
        .filter(|r| r.scheme == scheme)
        .map(|r| (r.n, r.error))
        .collect()
}

#[test]
fn reference_compared_with_itself_is_exact() {
    let records = run_convergence(&config(&[SchemeTag::Rk4], vec![500], 500)).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].error, 0.0);
}

#[test]
fn runs_are_deterministic() {
    let cfg = config(&SchemeTag::ALL, vec![10, 20, 40], 400);
    let strip = |mut records: Vec<ConvergenceRecord>| {
        for r in &mut records {
            r.wall_time_s = 0.0;
        }
        let mut out = Vec::new();
        write_records(&records, &mut out).unwrap();
        out
    };
    let first = strip(run_convergence(&cfg).unwrap());
    let second = strip(run_convergence(&cfg).unwrap());
    assert_eq!(first, second);
}

#[test]
fn rk2_error_drops_a_hundredfold_per_decade() {
    let records = run_convergence(&config(&[SchemeTag::Rk2], vec![10, 100], 2000)).unwrap();
    let e = errors(&records, SchemeTag::Rk2);
    let ratio = e[0].1 / e[1].1;
    assert!((60.0..160.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn errors_decrease_until_the_floor() {
    let grid = vec![10, 16, 25, 40, 63, 100, 158, 251];
    let records = run_convergence(&config(&[SchemeTag::Rk2, SchemeTag::Rk4], grid, 2000)).unwrap();
    for scheme in [SchemeTag::Rk2, SchemeTag::Rk4] {
        for pair in errors(&records, scheme).windows(2) {
            if pair[0].1 > 1e-12 {
                assert!(pair[1].1 < pair[0].1, "{scheme} rose at n={}", pair[1].0);
            }
        }
    }
}

#[test]
fn csv_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let records = run_convergence(&config(&SchemeTag::ALL, vec![10, 20], 100)).unwrap();
    write_csv(&records, &path).unwrap();
    assert_eq!(read_csv(&path).unwrap(), records);
}

fn bench(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bench"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn cli_writes_csv_and_checks_orders() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.csv");
    let path_str = path.to_str().unwrap();
    let (code, stdout) = bench(&[
        "--beta",
        "2",
        "--n-count",
        "8",
        "--output",
        path_str,
        "--assert-orders",
    ]);
    assert_eq!(code, Some(0), "{stdout}");
    assert!(stdout.contains("pole"));
    let records = read_csv(&path).unwrap();
    assert_eq!(records.len(), 3 * 8);
    assert!(records.iter().all(|r| r.beta == 2.0));
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.csv");
    let path_str = path.to_str().unwrap();

    // The last grid point coincides with the reference, leaving two usable points.
    let too_few = [
        "--schemes",
        "rk4",
        "--n-min",
        "10",
        "--n-max",
        "12",
        "--n-count",
        "3",
        "--reference-steps",
        "12",
        "--output",
        path_str,
    ];
    assert_eq!(bench(&too_few).0, Some(0));
    let asserted: Vec<&str> = too_few.iter().copied().chain(["--assert-orders"]).collect();
    assert_eq!(bench(&asserted).0, Some(1));

    assert_eq!(bench(&["--beta", "-1", "--output", path_str]).0, Some(2));
    assert_eq!(
        bench(&["--reference-steps", "50", "--output", path_str]).0,
        Some(2)
    );
    assert_eq!(
        bench(&["--n-min", "100", "--n-max", "10", "--output", path_str]).0,
        Some(2)
    );
}
