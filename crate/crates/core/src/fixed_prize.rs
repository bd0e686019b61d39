//! Conventional fixed-prize Tullock contest, solved and optimized numerically.
//!
//! For two players the equilibrium condition is an integral equation in
//! `β₀`. On a uniform cost grid with spacing `Δ` it becomes the square system
//!
//! ```text
//! Δ Σ_j β₀(c_j) f(c_j) / [β₀(c_i) + β₀(c_j)]² − h'(β₀(c_i)) c_i / V₀ = 0
//! ```
//!
//! which is handed to the damped Newton solver. [`optimize`] sweeps `V₀` on a
//! grid and keeps the prize with the largest quadrature profit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contest::{ContestConfig, EffortTechnology, Strategy};
use crate::error::{Error, Result};
use crate::numerics::{find_root, solve_system, QuadratureGrid, SolverSettings};

/// Parameters of the prize sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub v0_lo: f64,
    pub v0_hi: f64,
    pub v0_step: f64,
    /// Quadrature points.
    pub m: usize,
    /// Stop after this many consecutive profit decreases.
    pub early_stop: usize,
    /// How many times `v0_hi` may be doubled when the peak sits on it.
    pub max_widenings: usize,
    pub solver: SolverSettings,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            v0_lo: 0.01,
            v0_hi: 5.0,
            v0_step: 0.01,
            m: 100,
            early_stop: 5,
            max_widenings: 3,
            solver: SolverSettings::default(),
        }
    }
}

/// Discretized fixed-prize equilibrium.
#[derive(Debug, Clone)]
pub struct FixedPrizeEquilibrium {
    pub grid: QuadratureGrid,
    /// Contribution at each grid point.
    pub xi: Vec<f64>,
    pub v0: f64,
    /// Max-norm residual of the discretized system at `xi`.
    pub residual: f64,
    pub iterations: usize,
    density: Vec<f64>,
    tech: EffortTechnology,
    n: usize,
    c_hi: f64,
}

fn require_two_players(config: &ContestConfig) -> Result<()> {
    if config.n != 2 {
        return Err(Error::Unsupported(format!(
            "the fixed-prize discretization is two-player only, got n = {}",
            config.n
        )));
    }
    Ok(())
}

fn fill_residuals(
    grid: &QuadratureGrid,
    density: &[f64],
    tech: &EffortTechnology,
    v0: f64,
    xi: &[f64],
    out: &mut [f64],
) {
    let delta = grid.weight();
    let points = grid.points();
    for i in 0..xi.len() {
        let own = xi[i];
        let mut sum = 0.0;
        for j in 0..xi.len() {
            let total = own + xi[j];
            sum += xi[j] * density[j] / (total * total);
        }
        out[i] = delta * sum - tech.h_prime(own) * points[i] / v0;
    }
}

/// Residuals of the discretized equilibrium system at `xi`.
pub fn residuals(
    grid: &QuadratureGrid,
    xi: &[f64],
    v0: f64,
    config: &ContestConfig,
) -> Result<Vec<f64>> {
    require_two_players(config)?;
    if xi.len() != grid.len() {
        return Err(Error::InvalidConfig(format!(
            "{} contributions for {} grid points",
            xi.len(),
            grid.len()
        )));
    }
    if xi.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::InvalidConfig(
            "contributions must be strictly positive".into(),
        ));
    }
    let density: Vec<f64> = grid.points().iter().map(|c| config.dist.pdf(*c)).collect();
    let mut out = vec![0.0; xi.len()];
    fill_residuals(grid, &density, &config.tech, v0, xi, &mut out);
    Ok(out)
}

/// Constant starting vector balancing the two sides of the system at the
/// highest cost: `ξ h'(ξ) = V₀ / (4 c̄)`, i.e. `√V₀ / 4` for `h = ξ²` on [1, 2].
pub fn initial_guess(config: &ContestConfig, v0: f64, m: usize) -> Result<Vec<f64>> {
    let target = v0 / (4.0 * config.dist.hi());
    let tech = &config.tech;
    let mut hi = 1.0;
    while hi * tech.h_prime(hi) < target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidConfig(
                "cannot bracket the initial guess".into(),
            ));
        }
    }
    let x = find_root(|x| x * tech.h_prime(x) - target, 0.0, hi, 1e-14 * hi)?;
    Ok(vec![x.max(f64::MIN_POSITIVE); m])
}

/// Solves the discretized system for prize `v0` on an `m`-point grid.
pub fn solve_equilibrium(
    config: &ContestConfig,
    v0: f64,
    m: usize,
) -> Result<FixedPrizeEquilibrium> {
    let guess = initial_guess(config, v0, m)?;
    solve_equilibrium_from(config, v0, m, &guess, &SolverSettings::default())
}

pub fn solve_equilibrium_from(
    config: &ContestConfig,
    v0: f64,
    m: usize,
    guess: &[f64],
    settings: &SolverSettings,
) -> Result<FixedPrizeEquilibrium> {
    require_two_players(config)?;
    if !(v0 > 0.0) || m < 2 {
        return Err(Error::InvalidConfig(format!(
            "need V0 > 0 and m >= 2, got V0 = {v0}, m = {m}"
        )));
    }
    let grid = QuadratureGrid::uniform(config.dist.lo(), config.dist.hi(), m)?;
    let density: Vec<f64> = grid.points().iter().map(|c| config.dist.pdf(*c)).collect();
    let tech = config.tech.clone();
    let solution = solve_system(
        |x, out| fill_residuals(&grid, &density, &tech, v0, x, out),
        guess,
        settings,
    )
    .map_err(|source| Error::FixedPrize { v0, m, source })?;
    Ok(FixedPrizeEquilibrium {
        grid,
        xi: solution.x,
        v0,
        residual: solution.residual,
        iterations: solution.iterations,
        density,
        tech,
        n: config.n,
        c_hi: config.dist.hi(),
    })
}

/// `n ν Δ Σ_j β₀(c_j) f(c_j) − V₀`.
pub fn profit_estimate(eq: &FixedPrizeEquilibrium, nu: f64) -> f64 {
    revenue_estimate(eq, nu) - eq.v0
}

/// `n ν Δ Σ_j β₀(c_j) f(c_j)`.
pub fn revenue_estimate(eq: &FixedPrizeEquilibrium, nu: f64) -> f64 {
    let mass: f64 = eq.xi.iter().zip(&eq.density).map(|(x, f)| x * f).sum();
    eq.n as f64 * nu * eq.grid.weight() * mass
}

/// `n Δ Σ_i f(c_i) (Δ Σ_{j ≥ i} h(β₀(c_j)))`.
pub fn welfare_estimate(eq: &FixedPrizeEquilibrium) -> f64 {
    let delta = eq.grid.weight();
    let mut tail = 0.0;
    let mut total = 0.0;
    for i in (0..eq.xi.len()).rev() {
        tail += eq.tech.h(eq.xi[i]);
        total += eq.density[i] * delta * tail;
    }
    eq.n as f64 * delta * total
}

impl FixedPrizeEquilibrium {
    pub fn tech(&self) -> &EffortTechnology {
        &self.tech
    }

    /// Largest gain any grid type gets from switching to another grid type's
    /// contribution, with opponents drawn from the grid with weights `Δ f`.
    pub fn discrete_best_response_gap(&self) -> f64 {
        let weights: Vec<f64> = self
            .density
            .iter()
            .map(|f| f * self.grid.weight())
            .collect();
        let win = |x: f64| -> f64 {
            weights
                .iter()
                .zip(&self.xi)
                .map(|(w, o)| w * x / (x + o))
                .sum()
        };
        let wins: Vec<f64> = self.xi.iter().map(|x| win(*x)).collect();
        let mut gap = f64::NEG_INFINITY;
        for (i, c) in self.grid.points().iter().enumerate() {
            let utility = |k: usize| self.v0 * wins[k] - self.tech.h(self.xi[k]) * c;
            let own = utility(i);
            for k in 0..self.xi.len() {
                gap = gap.max(utility(k) - own);
            }
        }
        gap
    }

    /// Max relative change of the contribution between neighbouring points.
    pub fn is_nonincreasing(&self) -> bool {
        self.xi.windows(2).all(|w| w[1] <= w[0])
    }

    /// `(c_i, ξ_i)` pairs.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.grid
            .points()
            .iter()
            .copied()
            .zip(self.xi.iter().copied())
            .collect()
    }
}

impl Strategy for FixedPrizeEquilibrium {
    /// Linear interpolation between grid points, extended linearly from the
    /// last two points up to `c̄`.
    fn contribution(&self, cost: f64) -> f64 {
        let pts = self.grid.points();
        let m = pts.len();
        let c = cost.clamp(pts[0], self.c_hi);
        let pos = (c - pts[0]) / self.grid.weight();
        let i = (pos.floor() as usize).min(m - 2);
        let t = pos - i as f64;
        self.xi[i] + t * (self.xi[i + 1] - self.xi[i])
    }
}

/// Optimized fixed prize for one valuation.
#[derive(Debug, Clone)]
pub struct FixedPrizeSolution {
    pub nu: f64,
    pub v0_star: f64,
    pub pi0_star: f64,
    pub welfare: f64,
    pub equilibrium: FixedPrizeEquilibrium,
    /// `(V₀, profit)` in sweep order.
    pub trajectory: Vec<(f64, f64)>,
    pub widenings: usize,
}

impl FixedPrizeSolution {
    pub fn revenue(&self) -> f64 {
        revenue_estimate(&self.equilibrium, self.nu)
    }
}

/// Sweeps `V₀ = v0_lo, v0_lo + step, …`, warm-starting each solve from the
/// previous equilibrium, and returns the profit-maximizing prize.
///
/// The sweep stops after `early_stop` consecutive profit decreases. If it
/// reaches `v0_hi` with the best prize on the boundary, `v0_hi` is doubled
/// and the sweep continues, at most `max_widenings` times.
pub fn optimize(
    config: &ContestConfig,
    settings: &OptimizerSettings,
) -> Result<FixedPrizeSolution> {
    require_two_players(config)?;
    let s = settings;
    if !(s.v0_lo > 0.0 && s.v0_hi > s.v0_lo && s.v0_step > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "prize sweep needs 0 < v0_lo < v0_hi and step > 0, got [{}, {}] step {}",
            s.v0_lo, s.v0_hi, s.v0_step
        )));
    }

    let mut v0_hi = s.v0_hi;
    let mut widenings = 0;
    let mut trajectory: Vec<(f64, f64)> = Vec::new();
    let mut best: Option<(usize, FixedPrizeEquilibrium)> = None;
    let mut guess = initial_guess(config, s.v0_lo, s.m)?;
    let mut decreasing = 0;
    let mut k = 0usize;

    loop {
        let v0 = s.v0_lo + k as f64 * s.v0_step;
        if v0 > v0_hi * (1.0 + 1e-12) {
            let best_idx = best.as_ref().map(|b| b.0).unwrap_or(0);
            if best_idx + 1 < trajectory.len() {
                break;
            }
            if widenings == s.max_widenings {
                return Err(Error::PeakAtBoundary {
                    v0: trajectory[best_idx].0,
                    lo: s.v0_lo,
                    hi: v0_hi,
                });
            }
            v0_hi *= 2.0;
            widenings += 1;
            continue;
        }

        let eq = solve_equilibrium_from(config, v0, s.m, &guess, &s.solver)?;
        let profit = profit_estimate(&eq, config.nu);
        guess.copy_from_slice(&eq.xi);
        if let Some(&(_, last)) = trajectory.last() {
            decreasing = if profit < last { decreasing + 1 } else { 0 };
        }
        trajectory.push((v0, profit));
        let improves = best
            .as_ref()
            .map(|(i, _)| profit > trajectory[*i].1)
            .unwrap_or(true);
        if improves {
            best = Some((trajectory.len() - 1, eq));
        }
        k += 1;
        if decreasing >= s.early_stop {
            break;
        }
    }

    let (best_idx, equilibrium) = best.expect("sweep evaluates at least one prize");
    if best_idx == 0 {
        return Err(Error::PeakAtBoundary {
            v0: s.v0_lo,
            lo: s.v0_lo,
            hi: v0_hi,
        });
    }
    let (v0_star, pi0_star) = trajectory[best_idx];
    Ok(FixedPrizeSolution {
        nu: config.nu,
        v0_star,
        pi0_star,
        welfare: welfare_estimate(&equilibrium),
        equilibrium,
        trajectory,
        widenings,
    })
}

/// [`optimize`] for each valuation in `nus`, run in parallel; results are in
/// the order of `nus`.
pub fn optimize_grid(
    config: &ContestConfig,
    nus: &[f64],
    settings: &OptimizerSettings,
) -> Result<Vec<FixedPrizeSolution>> {
    nus.par_iter()
        .map(|nu| optimize(&config.with_nu(*nu)?, settings))
        .collect()
}

/// True when successive differences change sign at most once, from rising to
/// falling, ignoring differences within `tol`.
pub fn is_unimodal(values: &[f64], tol: f64) -> bool {
    let mut falling = false;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d < -tol {
            falling = true;
        } else if d > tol && falling {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contest::{CostDistribution, EffortTechnology};
    use approx::assert_abs_diff_eq;

    fn paper(nu: f64) -> ContestConfig {
        ContestConfig::paper_scenario(nu).unwrap()
    }

    #[test]
    fn converged_residual_and_shape() {
        let cfg = paper(1.0);
        let eq = solve_equilibrium(&cfg, 1.0, 100).unwrap();
        assert!(eq.residual <= 1e-9);
        let r = residuals(&eq.grid, &eq.xi, 1.0, &cfg).unwrap();
        assert!(r.iter().all(|v| v.abs() <= 1e-8));
        assert!(eq.xi.iter().all(|x| *x > 0.0));
        assert!(eq.is_nonincreasing());
        assert_abs_diff_eq!(eq.grid.weight(), 0.01, epsilon = 1e-15);
    }

    #[test]
    fn doubled_contributions_give_negative_residuals() {
        let cfg = paper(1.0);
        let eq = solve_equilibrium(&cfg, 1.0, 100).unwrap();
        let doubled: Vec<f64> = eq.xi.iter().map(|x| 2.0 * x).collect();
        let r = residuals(&eq.grid, &doubled, 1.0, &cfg).unwrap();
        assert!(r.iter().all(|v| *v < 0.0));
    }

    #[test]
    fn more_players_unsupported() {
        let cfg = paper(1.0).with_n(3).unwrap();
        assert!(matches!(
            solve_equilibrium(&cfg, 1.0, 50),
            Err(Error::Unsupported(_))
        ));
        let grid = QuadratureGrid::uniform(1.0, 2.0, 4).unwrap();
        assert!(matches!(
            residuals(&grid, &[1.0; 4], 1.0, &cfg),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn initial_guess_for_square_technology() {
        let g = initial_guess(&paper(1.0), 0.64, 3).unwrap();
        assert_abs_diff_eq!(g[0], 0.8 / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn absurd_prize_loses_money() {
        let cfg = paper(1.0);
        let eq = solve_equilibrium(&cfg, 50.0, 50).unwrap();
        assert!(profit_estimate(&eq, 1.0) < 0.0);
    }

    #[test]
    fn welfare_of_constant_profile() {
        // all-equal ξ, uniform f = 1 on [1,2], m = 4, h = ξ²:
        // n Δ Σ_i Δ (m - i) ξ² = 2 · 0.25 · 0.25 · (4+3+2+1) · ξ²
        let cfg = paper(1.0);
        let mut eq = solve_equilibrium(&cfg, 1.0, 4).unwrap();
        eq.xi = vec![0.3; 4];
        assert_abs_diff_eq!(
            welfare_estimate(&eq),
            2.0 * 0.25 * 0.25 * 10.0 * 0.09,
            epsilon = 1e-15
        );
    }

    #[test]
    fn scaling_in_prize() {
        // For h = ξ², β₀ scales with √V₀.
        let cfg = paper(1.0);
        let a = solve_equilibrium(&cfg, 1.0, 60).unwrap();
        let b = solve_equilibrium(&cfg, 0.25, 60).unwrap();
        for (x, y) in a.xi.iter().zip(&b.xi) {
            assert_abs_diff_eq!(0.5 * x, *y, epsilon = 1e-9);
        }
    }

    #[test]
    fn discrete_best_response() {
        let eq = solve_equilibrium(&paper(1.0), 0.09, 100).unwrap();
        let gap = eq.discrete_best_response_gap();
        assert!(gap <= 1e-3, "gap {gap}");
        assert!(gap >= 0.0);
    }

    #[test]
    fn optimizer_at_unit_value() {
        let sol = optimize(&paper(1.0), &OptimizerSettings::default()).unwrap();
        assert_abs_diff_eq!(sol.pi0_star, 0.0853, epsilon = 2e-3);
        assert!((sol.v0_star - sol.pi0_star).abs() <= 0.01);
        let profits: Vec<f64> = sol.trajectory.iter().map(|t| t.1).collect();
        assert!(is_unimodal(&profits, 1e-6));
        assert_eq!(
            sol.pi0_star,
            profits.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        );
        // revenue is twice the prize at the optimum
        assert!((sol.revenue() - 2.0 * sol.v0_star).abs() <= 2.0 * 0.01);
    }

    #[test]
    fn widening_when_range_too_small() {
        let settings = OptimizerSettings {
            v0_hi: 0.05,
            ..OptimizerSettings::default()
        };
        let sol = optimize(&paper(1.0), &settings).unwrap();
        assert!(sol.widenings >= 1);
        assert!(sol.v0_star > 0.05);

        let stuck = OptimizerSettings {
            v0_hi: 0.02,
            max_widenings: 1,
            ..OptimizerSettings::default()
        };
        assert!(matches!(
            optimize(&paper(1.0), &stuck),
            Err(Error::PeakAtBoundary { .. })
        ));
    }

    #[test]
    fn lottery_technology_converges() {
        let cfg = ContestConfig::new(
            2,
            1.0,
            CostDistribution::uniform(0.01, 1.01).unwrap(),
            EffortTechnology::power(1.0).unwrap(),
            0,
        )
        .unwrap();
        let eq = solve_equilibrium(&cfg, 1.0, 100).unwrap();
        assert!(eq.residual < 1e-8);
        assert!(eq.is_nonincreasing());
        let second: Vec<f64> = eq.xi.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
        assert!(second.iter().all(|d| *d >= -1e-12));
    }

    #[test]
    fn unimodality_helper() {
        assert!(is_unimodal(&[1.0, 2.0, 3.0, 2.0, 1.0], 0.0));
        assert!(is_unimodal(&[1.0, 2.0, 3.0], 0.0));
        assert!(!is_unimodal(&[1.0, 2.0, 1.0, 2.0], 0.0));
    }

    #[test]
    fn interpolated_strategy() {
        let eq = solve_equilibrium(&paper(1.0), 1.0, 10).unwrap();
        assert_abs_diff_eq!(eq.contribution(1.0), eq.xi[0], epsilon = 1e-15);
        assert_abs_diff_eq!(eq.contribution(1.1), eq.xi[1], epsilon = 1e-12);
        let top = eq.contribution(2.0);
        assert!(top < eq.xi[9] && top > 0.0);
    }
}
