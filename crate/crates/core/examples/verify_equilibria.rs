//! Monte-Carlo equilibrium checks at one valuation, plus a perturbed
//! strategy that should fail the best-response test.
//!
//! cargo run --release --example verify_equilibria

use tullock::bench::verify::{max_best_response_gap, run, VerifyOptions};
use tullock::bench::Scenario;
use tullock::{ContestConfig, OpfSolution, Strategy};

fn main() -> tullock::Result<()> {
    let scenario = Scenario {
        nu: Some(1.0),
        nu_grid: None,
        trials: Some(200_000),
        ..Scenario::paper()
    };
    let report = run(&scenario, None, &VerifyOptions::default())?;
    for c in &report.checks {
        println!(
            "{:?} {:<28} value {:.3e} tol {:.1e}",
            c.status, c.name, c.value, c.tolerance
        );
    }
    println!("all passed: {}", report.passed);

    let config = ContestConfig::paper_scenario(1.0)?;
    let opf = OpfSolution::solve(&config)?;
    let s = opf.strategy.clone();
    let perturbed = move |c: f64| 1.5 * s.contribution(c);
    let probes: Vec<f64> = (0..6)
        .map(|k| 1.25 + 0.75 * (k as f64 + 0.5) / 6.0)
        .collect();
    let deviations: Vec<f64> = (0..64)
        .map(|k| 1.0 / 6.0 + (1.0 / 3.0) * k as f64 / 63.0)
        .collect();
    let (gap, detail) = max_best_response_gap(
        &config,
        &perturbed,
        &opf.prize,
        &probes,
        &deviations,
        200_000,
    )?;
    println!("strategy x 1.5: gap {gap:.4} ({detail})");
    Ok(())
}
