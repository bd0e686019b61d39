//! Grid search for the profit-maximizing fixed prize.
//!
//! cargo run --release --example benchmark_optimizer -- 2.0

use tullock::fixed_prize::{optimize, OptimizerSettings};
use tullock::ContestConfig;

fn main() -> tullock::Result<()> {
    let nu: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1.0);
    let sol = optimize(
        &ContestConfig::paper_scenario(nu)?,
        &OptimizerSettings::default(),
    )?;

    println!("nu = {nu}: swept {} prizes", sol.trajectory.len());
    for (v0, profit) in sol.trajectory.iter().rev().take(8).rev() {
        println!("  V0 = {v0:.2}  profit = {profit:.6}");
    }
    println!(
        "V0* = {:.2}, profit = {:.6}, revenue = {:.6}",
        sol.v0_star,
        sol.pi0_star,
        sol.revenue()
    );
    println!("welfare estimate = {:.6}", sol.welfare);
    let eq = &sol.equilibrium;
    println!(
        "equilibrium residual {:.2e} after {} Newton steps",
        eq.residual, eq.iterations
    );
    println!(
        "xi(c_lo) = {:.6}, xi(c_hi) = {:.6}",
        eq.xi[0],
        eq.xi[eq.xi.len() - 1]
    );
    Ok(())
}
