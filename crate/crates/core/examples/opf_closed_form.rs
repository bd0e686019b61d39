//! Optimal prize-function mechanism for uniform costs on [1, 2] and
//! `g(b) = √b`: strategy, prize schedule, profit and welfare.
//!
//! cargo run --example opf_closed_form -- 1.0

use tullock::{ContestConfig, OpfSolution};

fn main() -> tullock::Result<()> {
    let nu: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1.0);
    let solution = OpfSolution::solve(&ContestConfig::paper_scenario(nu)?)?;
    let s = &solution.strategy;

    println!(
        "nu = {nu}: contributions span [{:.6}, {:.6}]",
        s.xi_lo(),
        s.xi_hi()
    );
    println!("{:>6} {:>10} {:>10}", "c", "beta(c)", "nu/(4c-2)");
    for (c, b) in solution.strategy_samples(6)? {
        println!("{c:>6.2} {b:>10.6} {:>10.6}", nu / (4.0 * c - 2.0));
    }
    println!("\n{:>8} {:>10} {:>10}", "xi", "V*(xi)", "p(xi)");
    for (xi, v, p) in solution.prize_samples(6)? {
        println!("{xi:>8.4} {v:>10.6} {p:>10.6}");
    }
    let fit = solution.prize_fit;
    println!(
        "\nprize vs contribution: slope {:.4}, r^2 {:.6}",
        fit.slope, fit.r_squared
    );
    println!("profit (integral form)  {:.6}", solution.profit);
    println!(
        "profit (prizes paid)    {:.6}",
        solution.profit_from_payments
    );
    println!("welfare                 {:.6}", solution.welfare);
    Ok(())
}
