//! Equilibrium checks: individual rationality, best response, independence
//! of `n`, monotonicity, the envelope identity, the simulator's accounting
//! identity and convergence of the fixed-prize discretization.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::commands::TabulatedStrategy;
use super::scenario::Scenario;
use crate::contest::{ContestConfig, PrizeSchedule, Strategy};
use crate::error::{Error, Result};
use crate::fixed_prize::{optimize, solve_equilibrium_from, FixedPrizeSolution};
use crate::opf::{utility_sides, OpfSolution, OpfStrategy, OptimalPrize};
use crate::simulate::{self, best_response_gap};

pub const BEST_RESPONSE_TOL: f64 = 3e-3;
pub const PROBE_TYPES: usize = 10;
pub const DEVIATION_POINTS: usize = 64;
pub const N_AGNOSTIC_TOL: f64 = 1e-10;
pub const CONVERGENCE_TOL: f64 = 1e-3;
pub const ACCOUNTING_TOL: f64 = 1e-12;
pub const GRID_POINTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub nu: f64,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub trials: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Replaces the equilibrium strategy in the best-response check.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Scale the optimal strategy by this factor.
    pub perturb: Option<f64>,
    /// Read a `c,beta_c` table instead.
    pub strategy: Option<PathBuf>,
}

fn check(name: &str, nu: f64, passed: bool, value: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name: name.into(),
        nu,
        status: if passed { Status::Pass } else { Status::Fail },
        value,
        tolerance,
        detail,
    }
}

fn skipped(name: &str, nu: f64, detail: String) -> Check {
    Check {
        name: name.into(),
        nu,
        status: Status::Skipped,
        value: f64::NAN,
        tolerance: f64::NAN,
        detail,
    }
}

fn interior_probes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / count as f64)
        .collect()
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| {
            if k + 1 == points {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (points - 1) as f64
            }
        })
        .collect()
}

/// Largest best-response gap over the probe types. A probe whose own
/// contribution has no prize defined counts as an infinite gap.
pub fn max_best_response_gap<S: Strategy + ?Sized>(
    config: &ContestConfig,
    strategy: &S,
    prize: &PrizeSchedule,
    probes: &[f64],
    deviations: &[f64],
    trials: u64,
) -> Result<(f64, String)> {
    let mut worst = f64::NEG_INFINITY;
    let mut detail = String::new();
    for c in probes {
        match best_response_gap(config, strategy, prize, *c, deviations, trials) {
            Ok(g) if g.gap > worst => {
                worst = g.gap;
                detail = format!(
                    "worst at c = {c}: deviate to {} gains {}",
                    g.best_deviation, g.gap
                );
            }
            Ok(_) => {}
            Err(Error::OutsidePrizeDomain { xi, lo, hi }) => {
                return Ok((
                    f64::INFINITY,
                    format!("c = {c} plays {xi}, outside the prize domain [{lo}, {hi}]"),
                ));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((worst, detail))
}

fn opf_checks(
    config: &ContestConfig,
    opf: &OpfSolution,
    trials: u64,
    options: &VerifyOptions,
) -> Result<Vec<Check>> {
    let nu = config.nu;
    let d = &config.dist;
    let s = &opf.strategy;
    let mut out = Vec::new();

    let report = simulate::run(config, s, &opf.prize, trials)?;
    let gap =
        (report.mean_profit - (nu * report.mean_total_contribution - report.mean_prize_paid)).abs();
    out.push(check(
        "accounting_identity",
        nu,
        gap <= ACCOUNTING_TOL,
        gap,
        ACCOUNTING_TOL,
        String::new(),
    ));

    let mut costs: Vec<f64> = grid(d.lo(), d.hi(), 11);
    costs.pop();
    let curve = simulate::empirical_utility_curve(config, s, &opf.prize, &costs, trials)?;
    let worst = curve
        .iter()
        .map(|p| p.utility)
        .fold(f64::INFINITY, f64::min);
    out.push(check(
        "sir_interior",
        nu,
        worst > 0.0,
        worst,
        0.0,
        "minimum utility for c < c_hi".into(),
    ));
    let top = simulate::empirical_utility_curve(config, s, &opf.prize, &[d.hi()], trials)?[0];
    let bound = 3.0 * top.std_err;
    out.push(check(
        "sir_top_type",
        nu,
        top.utility.abs() <= bound,
        top.utility.abs(),
        bound,
        "|u(c_hi)| vs 3 std_err".into(),
    ));

    let probes = interior_probes(d.lo(), d.hi(), PROBE_TYPES);
    let deviations = grid(s.xi_lo(), s.xi_hi(), DEVIATION_POINTS);
    let (g, detail) = max_best_response_gap(config, s, &opf.prize, &probes, &deviations, trials)?;
    out.push(check(
        "best_response_opf",
        nu,
        g <= BEST_RESPONSE_TOL,
        g,
        BEST_RESPONSE_TOL,
        detail,
    ));

    let candidate: Option<(String, Box<dyn Strategy>)> = match (&options.strategy, options.perturb)
    {
        (Some(path), _) => Some((
            format!("table {}", path.display()),
            Box::new(TabulatedStrategy::load(path)?),
        )),
        (None, Some(f)) => {
            let s = s.clone();
            Some((
                format!("optimal strategy x {f}"),
                Box::new(move |c: f64| f * s.contribution(c)),
            ))
        }
        (None, None) => None,
    };
    if let Some((label, candidate)) = candidate {
        let (g, detail) = max_best_response_gap(
            config,
            candidate.as_ref(),
            &opf.prize,
            &probes,
            &deviations,
            trials,
        )?;
        out.push(check(
            "best_response_candidate",
            nu,
            g <= BEST_RESPONSE_TOL,
            g,
            BEST_RESPONSE_TOL,
            format!("{label}: {detail}"),
        ));
    }

    let costs = grid(d.lo(), d.hi(), GRID_POINTS);
    let mut spread: f64 = 0.0;
    let reference: Vec<f64> = costs.iter().map(|c| s.beta(*c)).collect::<Result<_>>()?;
    for n in [2, 5, 10] {
        let other = OpfStrategy::new(&config.with_n(n)?, Default::default())?;
        for (c, b) in costs.iter().zip(&reference) {
            spread = spread.max((other.beta(*c)? - b).abs());
        }
    }
    out.push(check(
        "n_agnostic",
        nu,
        spread <= N_AGNOSTIC_TOL,
        spread,
        N_AGNOSTIC_TOL,
        "n in {2, 5, 10}".into(),
    ));

    let decreasing = reference.windows(2).all(|w| w[1] < w[0]);
    out.push(check(
        "monotone_opf",
        nu,
        decreasing,
        0.0,
        0.0,
        "strictly decreasing on 50 points".into(),
    ));

    let prize = OptimalPrize::new(config, s)?;
    let mut worst: f64 = 0.0;
    for c in &costs {
        let sides = utility_sides(&prize, *c)?;
        worst = worst.max((sides.direct - sides.envelope).abs() / (1.0 + sides.envelope.abs()));
    }
    out.push(check(
        "envelope_identity",
        nu,
        worst <= 1e-3,
        worst,
        1e-3,
        "relative, 50 points".into(),
    ));
    Ok(out)
}

fn benchmark_checks(
    config: &ContestConfig,
    sol: &FixedPrizeSolution,
    trials: u64,
    settings_solver: &crate::numerics::SolverSettings,
) -> Result<Vec<Check>> {
    let nu = config.nu;
    let d = &config.dist;
    let eq = &sol.equilibrium;
    let mut out = Vec::new();

    let prize = PrizeSchedule::constant(sol.v0_star);
    let lo = eq.xi.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eq.xi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let probes = interior_probes(d.lo(), d.hi(), PROBE_TYPES);
    let (g, detail) = max_best_response_gap(
        config,
        eq,
        &prize,
        &probes,
        &grid(lo, hi, DEVIATION_POINTS),
        trials,
    )?;
    out.push(check(
        "best_response_benchmark",
        nu,
        g <= BEST_RESPONSE_TOL,
        g,
        BEST_RESPONSE_TOL,
        detail,
    ));

    out.push(check(
        "monotone_benchmark",
        nu,
        eq.is_nonincreasing(),
        0.0,
        0.0,
        format!("m = {}", eq.xi.len()),
    ));

    let m = eq.xi.len();
    let guess: Vec<f64> = (0..2 * m).map(|k| eq.xi[(k / 2).min(m - 1)]).collect();
    let fine = solve_equilibrium_from(config, sol.v0_star, 2 * m, &guess, settings_solver)?;
    let diff = (0..m)
        .map(|j| (eq.xi[j] - fine.xi[2 * j]).abs())
        .fold(0.0, f64::max);
    out.push(check(
        "discretization_convergence",
        nu,
        diff <= CONVERGENCE_TOL,
        diff,
        CONVERGENCE_TOL,
        format!("m = {m} vs {} at V0 = {}", 2 * m, sol.v0_star),
    ));
    Ok(out)
}

/// All suites at every valuation of `scenario`.
pub fn run(scenario: &Scenario, m: Option<usize>, options: &VerifyOptions) -> Result<VerifyReport> {
    let trials = scenario.trials();
    let settings = scenario.optimizer_settings(m)?;
    let mut checks = Vec::new();
    for nu in scenario.nu_values() {
        let config = scenario.config(nu)?;
        let opf = OpfSolution::solve(&config)?;
        checks.extend(opf_checks(&config, &opf, trials, options)?);
        if config.n == 2 {
            let sol = optimize(&config, &settings)?;
            checks.extend(benchmark_checks(&config, &sol, trials, &settings.solver)?);
        } else {
            checks.push(skipped(
                "fixed_prize",
                nu,
                format!("fixed-prize solver is two-player only, n = {}", config.n),
            ));
        }
    }
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(VerifyReport {
        trials,
        checks,
        passed,
    })
}
