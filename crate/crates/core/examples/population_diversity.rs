//! Profit and welfare of the optimal mechanism for a narrow ([1, 2]) and a
//! wide ([0.5, 2.5]) cost population with the same mean.
//!
//! cargo run --example population_diversity

use tullock::bench::population_study;
use tullock::{ContestConfig, CostDistribution, EffortTechnology};

fn main() -> tullock::Result<()> {
    let narrow = ContestConfig::paper_scenario(1.0)?;
    let wide = ContestConfig::new(
        2,
        1.0,
        CostDistribution::uniform(0.5, 2.5)?,
        EffortTechnology::power(0.5)?,
        0,
    )?;
    let rows = population_study(&wide, &narrow, &[2, 5, 10], &[1.0, 3.0, 5.0])?;
    println!(
        "{:>3} {:>4} {:>10} {:>10} {:>10} {:>10}",
        "n", "nu", "pi_wide", "pi_narrow", "U_wide", "U_narrow"
    );
    for r in rows {
        println!(
            "{:>3} {:>4} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            r.n, r.nu, r.profit_wide, r.profit_narrow, r.welfare_wide, r.welfare_narrow
        );
    }
    Ok(())
}
