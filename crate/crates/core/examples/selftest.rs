use qcond::scenarios::run_selftest;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let report = run_selftest(seed, 20, 1e-9);
    for check in &report.checks {
        println!(
            "{:<24} {:>9.2e}  {}",
            check.name,
            check.max_deviation,
            if check.passed { "ok" } else { "FAILED" }
        );
    }
    std::process::exit(if report.passed { 0 } else { 1 });
}
