//! Seeded Monte-Carlo contest simulator and best-response oracle.
//!
//! Types are drawn by inverse-CDF sampling from counter-based streams keyed
//! by `(seed, trial, player)`. Trials are processed in fixed-size blocks in
//! parallel and the block statistics are merged by a pairwise tree in block
//! order, so a report depends only on its inputs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contest::{ContestConfig, PrizeSchedule, Strategy};
use crate::error::{Error, Result};
use crate::rng::{domain, CounterRng};
use crate::stats::{pairwise_reduce, Estimate, Moments};

const BLOCK: u64 = 8_192;
/// Trials whose `(cost, utility)` of player 0 are kept in the report.
pub const UTILITY_SAMPLES: usize = 256;

/// Per-field standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub revenue: f64,
    pub total_contribution: f64,
    pub prize_paid: f64,
    pub profit: f64,
    pub welfare: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub mean_revenue: f64,
    pub mean_total_contribution: f64,
    pub mean_prize_paid: f64,
    pub mean_profit: f64,
    pub mean_welfare: f64,
    pub std_err: StdErrors,
    /// Player 0's `(cost, realized payoff)` in the first trials.
    pub per_type_utility: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Totals {
    contribution: Moments,
    prize: Moments,
    profit: Moments,
    welfare: Moments,
}

impl Totals {
    fn merge(a: Totals, b: Totals) -> Totals {
        Totals {
            contribution: Moments::merge(a.contribution, b.contribution),
            prize: Moments::merge(a.prize, b.prize),
            profit: Moments::merge(a.profit, b.profit),
            welfare: Moments::merge(a.welfare, b.welfare),
        }
    }
}

fn contribution_of<S: Strategy + ?Sized>(strategy: &S, cost: f64) -> Result<f64> {
    let xi = strategy.contribution(cost);
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "strategy returned {xi} at cost {cost}"
        )));
    }
    Ok(xi)
}

/// Plays `trials` independent contests with every player following
/// `strategy` and the winner paid from `prize`.
pub fn run<S: Strategy + ?Sized>(
    config: &ContestConfig,
    strategy: &S,
    prize: &PrizeSchedule,
    trials: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let n = config.n;
    let rng = CounterRng::new(config.seed, domain::CONTEST);

    let blocks: Vec<(Totals, Vec<(f64, f64)>)> = (0..trials.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| -> Result<(Totals, Vec<(f64, f64)>)> {
            let mut totals = Totals::default();
            let mut samples = Vec::new();
            let mut costs = vec![0.0; n];
            let mut xi = vec![0.0; n];
            for trial in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                let mut stream = rng.stream(trial);
                for i in 0..n {
                    costs[i] = config.dist.inverse_cdf(stream.unit());
                    xi[i] = contribution_of(strategy, costs[i])?;
                }
                let total: f64 = xi.iter().sum();
                let draw = stream.unit() * total;
                let mut winner = None;
                if total > 0.0 {
                    let mut acc = 0.0;
                    for (i, x) in xi.iter().enumerate() {
                        acc += x;
                        if draw < acc {
                            winner = Some(i);
                            break;
                        }
                    }
                    // rounding can leave draw == total; the last positive bidder wins
                    winner = winner.or_else(|| xi.iter().rposition(|x| *x > 0.0));
                }
                let paid = match winner {
                    Some(w) => prize.value(xi[w])?,
                    None => 0.0,
                };
                let effort_cost: f64 = xi
                    .iter()
                    .zip(&costs)
                    .map(|(x, c)| config.tech.h(*x) * c)
                    .sum();
                totals.contribution.push(total);
                totals.prize.push(paid);
                totals.profit.push(config.nu * total - paid);
                totals.welfare.push(paid - effort_cost);
                if (trial as usize) < UTILITY_SAMPLES {
                    let own_prize = if winner == Some(0) { paid } else { 0.0 };
                    samples.push((costs[0], own_prize - config.tech.h(xi[0]) * costs[0]));
                }
            }
            Ok((totals, samples))
        })
        .collect::<Result<_>>()?;

    let mut per_type_utility = Vec::new();
    let mut block_totals = Vec::with_capacity(blocks.len());
    for (t, s) in blocks {
        block_totals.push(t);
        per_type_utility.extend(s);
    }
    let totals = pairwise_reduce(block_totals, Totals::merge).unwrap_or_default();
    let mean_total_contribution = totals.contribution.mean;
    let mean_prize_paid = totals.prize.mean;
    Ok(SimulationReport {
        trials,
        mean_revenue: config.nu * mean_total_contribution,
        mean_total_contribution,
        mean_prize_paid,
        mean_profit: config.nu * mean_total_contribution - mean_prize_paid,
        mean_welfare: totals.welfare.mean,
        std_err: StdErrors {
            revenue: config.nu * totals.contribution.std_err(),
            total_contribution: totals.contribution.std_err(),
            prize_paid: totals.prize.std_err(),
            profit: totals.profit.std_err(),
            welfare: totals.welfare.std_err(),
        },
        per_type_utility,
    })
}

/// Sums of the `n − 1` opponents' contributions, one per trial.
fn opponent_sums<S: Strategy + ?Sized>(
    config: &ContestConfig,
    strategy: &S,
    trials: u64,
    tag: u64,
) -> Result<Vec<f64>> {
    let rng = CounterRng::new(config.seed, tag);
    let blocks: Vec<Vec<f64>> = (0..trials.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            (b * BLOCK..((b + 1) * BLOCK).min(trials))
                .map(|trial| {
                    let mut stream = rng.stream(trial);
                    let mut sum = 0.0;
                    for _ in 1..config.n {
                        sum += contribution_of(strategy, config.dist.inverse_cdf(stream.unit()))?;
                    }
                    Ok(sum)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Monte-Carlo `u(c, ξ) = E[ξ/(ξ + S)] V(ξ) − h(ξ) c` over the sampled
/// opponent sums `S`, conditioning on types rather than drawing the lottery.
fn utility_estimate(
    config: &ContestConfig,
    sums: &[f64],
    prize: &PrizeSchedule,
    cost: f64,
    xi: f64,
) -> Result<Estimate> {
    let effort = config.tech.h(xi) * cost;
    if xi == 0.0 {
        return Ok(Estimate::exact(-effort));
    }
    let v = prize.value(xi)?;
    let blocks: Vec<Moments> = sums
        .par_chunks(BLOCK as usize)
        .map(|chunk| {
            let mut m = Moments::default();
            chunk
                .iter()
                .for_each(|s| m.push(if xi + s > 0.0 { xi / (xi + s) } else { 0.0 }));
            m
        })
        .collect();
    let win = pairwise_reduce(blocks, Moments::merge).unwrap_or_default();
    Ok(Estimate {
        value: win.mean * v - effort,
        std_err: win.std_err() * v,
    })
}

/// Result of a best-response probe at one type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponseGap {
    pub cost: f64,
    /// `max_dev û(c, ξ_dev) − û(c, β(c))`.
    pub gap: f64,
    pub best_deviation: f64,
    pub equilibrium_utility: f64,
}

/// Largest Monte-Carlo utility gain of type `cost` from deviating to a point
/// of `deviation_grid` while `n − 1` opponents follow `strategy`. All
/// candidates share the same opponent draws.
pub fn best_response_gap<S: Strategy + ?Sized>(
    config: &ContestConfig,
    strategy: &S,
    prize: &PrizeSchedule,
    cost: f64,
    deviation_grid: &[f64],
    trials: u64,
) -> Result<BestResponseGap> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    if let Some(bad) = deviation_grid.iter().find(|x| !prize.contains(**x)) {
        let (lo, hi) = prize.domain();
        return Err(Error::OutsidePrizeDomain { xi: *bad, lo, hi });
    }
    let sums = opponent_sums(config, strategy, trials, domain::DEVIATION)?;
    let own = contribution_of(strategy, cost)?;
    let equilibrium_utility = utility_estimate(config, &sums, prize, cost, own)?.value;
    let mut gap = f64::NEG_INFINITY;
    let mut best_deviation = own;
    for xi in deviation_grid {
        let u = utility_estimate(config, &sums, prize, cost, *xi)?.value;
        if u - equilibrium_utility > gap {
            gap = u - equilibrium_utility;
            best_deviation = *xi;
        }
    }
    Ok(BestResponseGap {
        cost,
        gap,
        best_deviation,
        equilibrium_utility,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityPoint {
    pub cost: f64,
    pub utility: f64,
    pub std_err: f64,
}

/// Monte-Carlo equilibrium utility `p(β(c)) V(β(c)) − h(β(c)) c` at each cost.
pub fn empirical_utility_curve<S: Strategy + ?Sized>(
    config: &ContestConfig,
    strategy: &S,
    prize: &PrizeSchedule,
    c_grid: &[f64],
    trials: u64,
) -> Result<Vec<UtilityPoint>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let sums = opponent_sums(config, strategy, trials, domain::UTILITY_CURVE)?;
    c_grid
        .iter()
        .map(|c| {
            let xi = contribution_of(strategy, *c)?;
            let est = utility_estimate(config, &sums, prize, *c, xi)?;
            Ok(UtilityPoint {
                cost: *c,
                utility: est.value,
                std_err: est.std_err,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn paper(nu: f64) -> ContestConfig {
        ContestConfig::paper_scenario(nu).unwrap()
    }

    #[test]
    fn constant_strategy_fixed_prize() {
        let cfg = paper(1.0).with_n(4).unwrap();
        let report = run(&cfg, &|_c: f64| 0.3, &PrizeSchedule::constant(0.7), 5_000).unwrap();
        assert_eq!(report.mean_prize_paid, 0.7);
        assert_eq!(report.std_err.prize_paid, 0.0);
        assert_abs_diff_eq!(report.mean_total_contribution, 1.2, epsilon = 1e-12);
    }

    #[test]
    fn zero_strategy_pays_nothing() {
        let report = run(
            &paper(1.0),
            &|_c: f64| 0.0,
            &PrizeSchedule::constant(1.0),
            100,
        )
        .unwrap();
        assert_eq!(report.mean_prize_paid, 0.0);
        assert_eq!(report.mean_welfare, 0.0);
    }

    #[test]
    fn accounting_identity_and_determinism() {
        let cfg = paper(2.0);
        let strategy = |c: f64| 2.0 / (4.0 * c - 2.0);
        let prize = PrizeSchedule::constant(0.4);
        let a = run(&cfg, &strategy, &prize, 20_000).unwrap();
        let b = run(&cfg, &strategy, &prize, 20_000).unwrap();
        assert_eq!(a, b);
        assert!(
            (a.mean_profit - (cfg.nu * a.mean_total_contribution - a.mean_prize_paid)).abs()
                <= 1e-12
        );
        assert_eq!(a.per_type_utility.len(), UTILITY_SAMPLES);
    }

    #[test]
    fn strategy_outside_prize_domain_is_an_error() {
        let prize = PrizeSchedule::function(0.2, 0.4, |x| x);
        assert!(matches!(
            run(&paper(1.0), &|_c: f64| 0.5, &prize, 10),
            Err(Error::OutsidePrizeDomain { .. })
        ));
        assert!(best_response_gap(&paper(1.0), &|_c: f64| 0.3, &prize, 1.5, &[0.5], 10).is_err());
    }

    #[test]
    fn std_err_halves_when_trials_quadruple() {
        let cfg = paper(1.0);
        let strategy = |c: f64| 1.0 / (4.0 * c - 2.0);
        let prize = PrizeSchedule::constant(0.1);
        let small = run(&cfg, &strategy, &prize, 40_000).unwrap();
        let large = run(&cfg, &strategy, &prize, 160_000).unwrap();
        let ratio = small.std_err.profit / large.std_err.profit;
        assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");
    }
}
