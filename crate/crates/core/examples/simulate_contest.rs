//! Seeded Monte-Carlo contests under the optimal prize function and the
//! optimized fixed prize.
//!
//! cargo run --release --example simulate_contest -- 1000000

use tullock::fixed_prize::{optimize, OptimizerSettings};
use tullock::simulate::run;
use tullock::{ContestConfig, OpfSolution, PrizeSchedule};

fn main() -> tullock::Result<()> {
    let trials: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(200_000);
    let config = ContestConfig::paper_scenario(1.0)?;
    let opf = OpfSolution::solve(&config)?;
    let fixed = optimize(&config, &OptimizerSettings::default())?;

    let a = run(&config, &opf.strategy, &opf.prize, trials)?;
    let b = run(
        &config,
        &fixed.equilibrium,
        &PrizeSchedule::constant(fixed.v0_star),
        trials,
    )?;
    println!("{trials} trials");
    println!(
        "optimal prize: profit {:.5} +- {:.5} (prizes paid {:.5}), welfare {:.5} +- {:.5}",
        a.mean_profit,
        a.std_err.profit,
        opf.profit_from_payments,
        a.mean_welfare,
        a.std_err.welfare
    );
    println!(
        "fixed prize:   profit {:.5} +- {:.5} (quadrature {:.5}), welfare {:.5} +- {:.5}",
        b.mean_profit, b.std_err.profit, fixed.pi0_star, b.mean_welfare, b.std_err.welfare
    );
    Ok(())
}
