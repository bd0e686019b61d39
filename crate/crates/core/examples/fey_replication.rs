//! Fixed-prize lottery contest with linear effort (`h(ξ) = ξ`) and costs on
//! [0.01, 1.01]: the discretized equilibrium is decreasing and convex.
//!
//! cargo run --example fey_replication

use tullock::fixed_prize::solve_equilibrium;
use tullock::{ContestConfig, CostDistribution, EffortTechnology};

fn main() -> tullock::Result<()> {
    let config = ContestConfig::new(
        2,
        1.0,
        CostDistribution::uniform(0.01, 1.01)?,
        EffortTechnology::power(1.0)?,
        0,
    )?;
    let eq = solve_equilibrium(&config, 1.0, 100)?;
    println!(
        "residual {:.2e}, {} Newton steps",
        eq.residual, eq.iterations
    );
    for (c, xi) in eq.samples().into_iter().step_by(10) {
        println!("c = {c:.2}  xi = {xi:.6}");
    }
    let convex = eq.xi.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-12);
    println!("decreasing: {}, convex: {convex}", eq.is_nonincreasing());
    Ok(())
}
