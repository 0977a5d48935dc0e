//! A small verification campaign with its report written as JSON and CSV.
//!
//! `cargo run --release --example campaign -- 20` runs 20 trials per
//! ensemble and dimension.

use opradius::harness::{default_campaign_sized, emit_report, run_campaign, PropertySelection, ReportFormat};

fn main() -> opradius::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let specs = default_campaign_sized(42, trials);
    let report = run_campaign(&specs, &PropertySelection::all());
    let s = &report.summary;
    println!(
        "{} trials, {} bound evaluations, {} violations, {} warnings, {} errors",
        s.trials, s.bound_evaluations, s.violation_count, s.warning_count, s.error_count
    );
    if let Some(t) = report.wall_time_seconds {
        println!("wall time {t:.1}s");
    }
    println!("\nmedian relative slack per bound:");
    for (id, q) in &s.relative_slack {
        println!("  {id:<22} {:.4}  (min {:.2e}, max {:.4})", q.median, q.min, q.max);
    }

    let dir = std::env::temp_dir();
    emit_report(&report, ReportFormat::Json, &dir.join("opradius_report.json"))?;
    emit_report(&report, ReportFormat::Csv, &dir.join("opradius_report.csv"))?;
    println!("\nreports written to {}", dir.display());
    Ok(())
}
