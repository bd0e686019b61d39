//! The optimal prize-function mechanism.
//!
//! Given the prior and the effort technology, the symmetric equilibrium
//! contribution solves `h'(β(c)) = ν / φ(c)` with `φ` the virtual cost, so it
//! does not depend on the number of players. The prize schedule is then
//!
//! ```text
//! V*(ξ) = [ β⁻¹(ξ) h(ξ) − ∫_{ξ_lo}^{ξ} h(t) dβ⁻¹(t) ] / p(ξ)
//! ```
//!
//! where `p(ξ)` is the probability that a contribution `ξ` wins against
//! `n − 1` opponents playing `β`. Every quantity below is evaluated through
//! the generic numeric path (root finding, quadrature, finite differences);
//! closed forms only enter through optional hooks.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contest::{
    ContestConfig, CostDistribution, EffortTechnology, PrizeSchedule, Strategy, PROBE_POINTS,
};
use crate::error::{Error, Result};
use crate::numerics::{find_root_with, integrate_1d, RootTolerance};
use crate::rng::{domain, CounterRng};
use crate::stats::{pairwise_reduce, Estimate, Moments};

pub const DEFAULT_MC_SAMPLES: usize = 1_000_000;
/// Interpolation nodes of the tabulated prize schedule.
pub const PRIZE_TABLE_NODES: usize = 513;
const MC_BLOCK: usize = 16_384;
const EXACT: RootTolerance = RootTolerance { x: 0.0, f: 0.0 };

/// Knobs for the generic numeric path.
#[derive(Clone)]
pub struct OpfOptions {
    /// Use the technology's closed-form `(h')⁻¹` when it has one.
    pub closed_form_slope_inverse: bool,
    /// Closed-form `dβ⁻¹/dξ`, replacing central differences.
    pub inverse_derivative: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    /// Monte-Carlo sample count for `p(ξ)` when `n > 2`.
    pub mc_samples: usize,
    /// Absolute tolerance for the smooth 1-D integrals.
    pub quad_tol: f64,
    /// Absolute tolerance for the Stieltjes integral in `V*`, whose integrand
    /// carries finite-difference noise.
    pub stieltjes_tol: f64,
}

impl Default for OpfOptions {
    fn default() -> Self {
        Self {
            closed_form_slope_inverse: true,
            inverse_derivative: None,
            mc_samples: DEFAULT_MC_SAMPLES,
            quad_tol: 1e-11,
            stieltjes_tol: 1e-9,
        }
    }
}

impl OpfOptions {
    /// Forces every `β` evaluation through the root finder.
    pub fn root_finding() -> Self {
        Self {
            closed_form_slope_inverse: false,
            ..Self::default()
        }
    }
}

impl fmt::Debug for OpfOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpfOptions")
            .field("closed_form_slope_inverse", &self.closed_form_slope_inverse)
            .field(
                "inverse_derivative",
                &self.inverse_derivative.as_ref().map(|_| "closed form"),
            )
            .field("mc_samples", &self.mc_samples)
            .field("quad_tol", &self.quad_tol)
            .field("stieltjes_tol", &self.stieltjes_tol)
            .finish()
    }
}

/// Solves `h'(ξ) = slope` for `ξ ≥ 0`.
fn invert_slope(tech: &EffortTechnology, slope: f64, closed_form: bool) -> Result<f64> {
    if closed_form {
        if let Some(xi) = tech.h_prime_inverse(slope) {
            return Ok(xi);
        }
    }
    let not_invertible = |reason: &str| Error::NotInvertible {
        slope,
        reason: reason.to_string(),
    };
    let gap = |x: f64| tech.h_prime(x) - slope;
    if !(gap(0.0) < 0.0) {
        return Err(not_invertible("h'(0) already reaches the target"));
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while gap(hi) < 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Err(not_invertible("h' never reaches the target"));
        }
    }
    Ok(find_root_with(gap, 0.0, hi, EXACT)?)
}

/// Equilibrium contribution `β` of the optimal mechanism and its inverse.
#[derive(Debug, Clone)]
pub struct OpfStrategy {
    dist: CostDistribution,
    tech: EffortTechnology,
    nu: f64,
    options: OpfOptions,
    xi_lo: f64,
    xi_hi: f64,
}

impl OpfStrategy {
    /// Builds `β` for `config`, failing fast when the virtual cost is not
    /// increasing or `β` is not strictly decreasing on the probe grid.
    pub fn new(config: &ContestConfig, options: OpfOptions) -> Result<Self> {
        config.dist.check_regular()?;
        let mut s = Self {
            dist: config.dist.clone(),
            tech: config.tech.clone(),
            nu: config.nu,
            options,
            xi_lo: f64::NAN,
            xi_hi: f64::NAN,
        };
        s.xi_lo = s.beta(s.dist.hi())?;
        s.xi_hi = s.beta(s.dist.lo())?;

        let (lo, hi) = (s.dist.lo(), s.dist.hi());
        let mut prev = f64::INFINITY;
        for k in 0..PROBE_POINTS {
            let c = if k + 1 == PROBE_POINTS {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (PROBE_POINTS - 1) as f64
            };
            let b = s.beta(c)?;
            if !(b < prev) {
                return Err(Error::NotRegular {
                    c,
                    name: s.dist.name(),
                });
            }
            prev = b;
        }
        if !(s.xi_lo > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "weakest type contributes {} (must be > 0)",
                s.xi_lo
            )));
        }
        Ok(s)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn dist(&self) -> &CostDistribution {
        &self.dist
    }

    pub fn tech(&self) -> &EffortTechnology {
        &self.tech
    }

    pub fn options(&self) -> &OpfOptions {
        &self.options
    }

    /// `β(c̄)`, the weakest type's contribution.
    pub fn xi_lo(&self) -> f64 {
        self.xi_lo
    }

    /// `β(c_lo)`, the strongest type's contribution.
    pub fn xi_hi(&self) -> f64 {
        self.xi_hi
    }

    pub fn beta(&self, c: f64) -> Result<f64> {
        let phi = self.dist.virtual_cost(c)?;
        invert_slope(
            &self.tech,
            self.nu / phi,
            self.options.closed_form_slope_inverse,
        )
    }

    fn check_domain(&self, xi: f64) -> Result<()> {
        let slack = 1e-9 * self.xi_hi;
        if xi < self.xi_lo - slack || xi > self.xi_hi + slack || xi.is_nan() {
            return Err(Error::OutsidePrizeDomain {
                xi,
                lo: self.xi_lo,
                hi: self.xi_hi,
            });
        }
        Ok(())
    }

    /// `β⁻¹(ξ)` by root finding on `β` over the cost support.
    pub fn beta_inv(&self, xi: f64) -> Result<f64> {
        self.check_domain(xi)?;
        if xi >= self.xi_hi {
            return Ok(self.dist.lo());
        }
        if xi <= self.xi_lo {
            return Ok(self.dist.hi());
        }
        let root = find_root_with(
            |c| self.beta(c).map(|b| b - xi).unwrap_or(f64::NAN),
            self.dist.lo(),
            self.dist.hi(),
            EXACT,
        )?;
        Ok(root)
    }

    /// `dβ⁻¹/dξ`, by the closed-form hook when set, else by finite
    /// differences with step `1e-6 ξ` (one-sided next to the domain ends).
    pub fn beta_inv_derivative(&self, xi: f64) -> Result<f64> {
        self.check_domain(xi)?;
        if let Some(d) = &self.options.inverse_derivative {
            return Ok(d(xi));
        }
        let d = 1e-6 * xi.abs();
        let f = |x: f64| self.beta_inv(x);
        if xi - d >= self.xi_lo && xi + d <= self.xi_hi {
            Ok((f(xi + d)? - f(xi - d)?) / (2.0 * d))
        } else if xi + 2.0 * d <= self.xi_hi {
            Ok((-3.0 * f(xi)? + 4.0 * f(xi + d)? - f(xi + 2.0 * d)?) / (2.0 * d))
        } else {
            Ok((3.0 * f(xi)? - 4.0 * f(xi - d)? + f(xi - 2.0 * d)?) / (2.0 * d))
        }
    }

    /// `β⁻¹(ξ) h(ξ) − ∫_{ξ_lo}^{ξ} h(t) dβ⁻¹(t)`: the expected prize income
    /// `p(ξ) V*(ξ)` of a player contributing `ξ`. Does not depend on `n`.
    pub fn prize_income(&self, xi: f64) -> Result<f64> {
        self.check_domain(xi)?;
        let xi = xi.clamp(self.xi_lo, self.xi_hi);
        let cost = self.beta_inv(xi)?;
        let stieltjes = integrate_1d(
            |t| {
                self.beta_inv_derivative(t)
                    .map(|d| self.tech.h(t) * d)
                    .unwrap_or(f64::NAN)
            },
            self.xi_lo,
            xi,
            self.options.stieltjes_tol,
        )?;
        Ok(cost * self.tech.h(xi) - stieltjes.value)
    }

    /// `∫_c^{c̄} h(β(t)) dt`, the equilibrium surplus of type `c`.
    pub fn surplus(&self, c: f64) -> Result<f64> {
        if !self.dist.contains(c) {
            return Err(Error::OutOfSupport {
                c,
                lo: self.dist.lo(),
                hi: self.dist.hi(),
            });
        }
        let r = integrate_1d(
            |t| self.beta(t).map(|b| self.tech.h(b)).unwrap_or(f64::NAN),
            c,
            self.dist.hi(),
            self.options.quad_tol,
        )?;
        Ok(r.value)
    }
}

impl Strategy for OpfStrategy {
    fn contribution(&self, cost: f64) -> f64 {
        self.beta(cost.clamp(self.dist.lo(), self.dist.hi()))
            .unwrap_or(f64::NAN)
    }
}

/// `β` for `config` with default options.
pub fn opf_strategy(config: &ContestConfig) -> Result<OpfStrategy> {
    OpfStrategy::new(config, OpfOptions::default())
}

enum WinMethod {
    Quadrature,
    /// Sampled sums of the `n − 1` opponents' contributions.
    MonteCarlo(Vec<f64>),
}

/// Evaluator for `p(ξ)`; the `n > 2` variant draws its opponent samples once
/// and reuses them for every `ξ`.
pub struct WinProbability<'a> {
    strategy: &'a OpfStrategy,
    method: WinMethod,
}

impl<'a> WinProbability<'a> {
    pub fn new(config: &ContestConfig, strategy: &'a OpfStrategy) -> Result<Self> {
        if config.n == 2 {
            return Ok(Self {
                strategy,
                method: WinMethod::Quadrature,
            });
        }
        let samples = strategy.options.mc_samples.max(1);
        let rng = CounterRng::new(config.seed, domain::WIN_PROBABILITY);
        let opponents = config.n - 1;
        let blocks: Vec<Vec<f64>> = (0..samples.div_ceil(MC_BLOCK))
            .into_par_iter()
            .map(|b| {
                let start = b * MC_BLOCK;
                let end = (start + MC_BLOCK).min(samples);
                (start..end)
                    .map(|k| {
                        let mut stream = rng.stream(k as u64);
                        (0..opponents)
                            .map(|_| {
                                strategy.contribution(strategy.dist.inverse_cdf(stream.unit()))
                            })
                            .sum::<f64>()
                    })
                    .collect()
            })
            .collect();
        let sums: Vec<f64> = blocks.into_iter().flatten().collect();
        if sums.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig(
                "strategy produced a non-finite contribution".into(),
            ));
        }
        Ok(Self {
            strategy,
            method: WinMethod::MonteCarlo(sums),
        })
    }

    pub fn eval(&self, xi: f64) -> Result<Estimate> {
        if !(xi > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "win probability needs xi > 0, got {xi}"
            )));
        }
        match &self.method {
            WinMethod::Quadrature => {
                let s = self.strategy;
                let r = integrate_1d(
                    |c| {
                        s.beta(c)
                            .map(|b| xi / (xi + b) * s.dist.pdf(c))
                            .unwrap_or(f64::NAN)
                    },
                    s.dist.lo(),
                    s.dist.hi(),
                    s.options.quad_tol,
                )?;
                Ok(Estimate::exact(r.value.min(1.0)))
            }
            WinMethod::MonteCarlo(sums) => {
                let blocks: Vec<Moments> = sums
                    .par_chunks(MC_BLOCK)
                    .map(|chunk| {
                        let mut m = Moments::default();
                        chunk.iter().for_each(|s| m.push(xi / (xi + s)));
                        m
                    })
                    .collect();
                Ok(pairwise_reduce(blocks, Moments::merge)
                    .unwrap_or_default()
                    .estimate())
            }
        }
    }
}

/// `p(ξ)`: probability that contribution `ξ` beats `n − 1` equilibrium
/// opponents.
pub fn win_prob(config: &ContestConfig, strategy: &OpfStrategy, xi: f64) -> Result<Estimate> {
    WinProbability::new(config, strategy)?.eval(xi)
}

/// Evaluator for `V*`, holding one [`WinProbability`].
pub struct OptimalPrize<'a> {
    strategy: &'a OpfStrategy,
    win: WinProbability<'a>,
}

impl<'a> OptimalPrize<'a> {
    pub fn new(config: &ContestConfig, strategy: &'a OpfStrategy) -> Result<Self> {
        Ok(Self {
            strategy,
            win: WinProbability::new(config, strategy)?,
        })
    }

    /// Numerator of `V*`; see [`OpfStrategy::prize_income`].
    pub fn numerator(&self, xi: f64) -> Result<f64> {
        self.strategy.prize_income(xi)
    }

    pub fn win_prob(&self, xi: f64) -> Result<Estimate> {
        self.win.eval(xi)
    }

    /// `V*(ξ)`.
    pub fn value(&self, xi: f64) -> Result<f64> {
        let numerator = self.numerator(xi)?;
        let p = self
            .win
            .eval(xi.clamp(self.strategy.xi_lo, self.strategy.xi_hi))?;
        Ok(numerator / p.value)
    }
}

/// `V*(ξ_w)` through the generic path.
pub fn opf_prize(config: &ContestConfig, strategy: &OpfStrategy, xi_w: f64) -> Result<f64> {
    OptimalPrize::new(config, strategy)?.value(xi_w)
}

/// Maximum profit in the closed integral form
/// `n ∫ [νβ − h(β)c + (F/f)(h(β(c̄)) − h(β))] dF`.
pub fn opf_profit(config: &ContestConfig) -> Result<f64> {
    profit_with(config, &opf_strategy(config)?)
}

pub fn profit_with(config: &ContestConfig, s: &OpfStrategy) -> Result<f64> {
    let h_top = s.tech.h(s.xi_lo);
    let d = &s.dist;
    let r = integrate_1d(
        |c| {
            s.beta(c)
                .map(|b| {
                    let hb = s.tech.h(b);
                    let ratio = d.cdf(c) / d.pdf(c);
                    (config.nu * b - hb * c + ratio * (h_top - hb)) * d.pdf(c)
                })
                .unwrap_or(f64::NAN)
        },
        d.lo(),
        d.hi(),
        s.options.quad_tol,
    )?;
    Ok(config.n as f64 * r.value)
}

/// Expected prize actually paid, `n E[p(β(c)) V*(β(c))]`, integrating the
/// numerator of `V*` over the prior.
pub fn expected_prize_paid(config: &ContestConfig, s: &OpfStrategy) -> Result<f64> {
    let d = &s.dist;
    let r = integrate_1d(
        |c| {
            s.beta(c)
                .and_then(|b| s.prize_income(b))
                .map(|income| income * d.pdf(c))
                .unwrap_or(f64::NAN)
        },
        d.lo(),
        d.hi(),
        1e-8,
    )?;
    Ok(config.n as f64 * r.value)
}

/// Expected revenue `n ν E[β(c)]`.
pub fn expected_revenue(config: &ContestConfig, s: &OpfStrategy) -> Result<f64> {
    let d = &s.dist;
    let r = integrate_1d(
        |c| s.beta(c).map(|b| b * d.pdf(c)).unwrap_or(f64::NAN),
        d.lo(),
        d.hi(),
        s.options.quad_tol,
    )?;
    Ok(config.n as f64 * config.nu * r.value)
}

/// Revenue minus the prize the schedule actually pays out in equilibrium.
pub fn opf_profit_from_payments(config: &ContestConfig) -> Result<f64> {
    let s = opf_strategy(config)?;
    Ok(expected_revenue(config, &s)? - expected_prize_paid(config, &s)?)
}

/// Social welfare `n ∫∫_{c}^{c̄} h(β(t)) dt dF(c)` by nested quadrature.
pub fn opf_welfare(config: &ContestConfig) -> Result<f64> {
    welfare_with(config, &opf_strategy(config)?)
}

pub fn welfare_with(config: &ContestConfig, s: &OpfStrategy) -> Result<f64> {
    let d = &s.dist;
    let inner_tol = 0.1 * s.options.quad_tol;
    let r = integrate_1d(
        |c| {
            integrate_1d(
                |t| s.beta(t).map(|b| s.tech.h(b)).unwrap_or(f64::NAN),
                c,
                d.hi(),
                inner_tol,
            )
            .map(|inner| inner.value * d.pdf(c))
            .unwrap_or(f64::NAN)
        },
        d.lo(),
        d.hi(),
        s.options.quad_tol,
    )?;
    Ok(config.n as f64 * r.value)
}

/// Both sides of the envelope identity at one type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilitySides {
    /// `p(β(c)) V*(β(c)) − h(β(c)) c`.
    pub direct: f64,
    /// `∫_c^{c̄} h(β(t)) dt`.
    pub envelope: f64,
}

impl UtilitySides {
    pub fn consistent(&self) -> bool {
        (self.direct - self.envelope).abs() <= 1e-3 * (1.0 + self.envelope.abs())
    }
}

pub fn utility_sides(prize: &OptimalPrize<'_>, c: f64) -> Result<UtilitySides> {
    let s = prize.strategy;
    let b = s.beta(c)?;
    let p = prize.win_prob(b)?.value;
    let v = prize.value(b)?;
    Ok(UtilitySides {
        direct: p * v - s.tech.h(b) * c,
        envelope: s.surplus(c)?,
    })
}

/// Equilibrium expected utility of type `c`; both sides of the envelope
/// identity are computed and must agree to `1e-3` relative.
pub fn expected_utility(config: &ContestConfig, strategy: &OpfStrategy, c: f64) -> Result<f64> {
    let prize = OptimalPrize::new(config, strategy)?;
    let sides = utility_sides(&prize, c)?;
    if !sides.consistent() {
        return Err(Error::Inconsistent {
            c,
            direct: sides.direct,
            envelope: sides.envelope,
        });
    }
    Ok(sides.envelope)
}

/// Piecewise cubic Hermite interpolant on a uniform grid.
#[derive(Debug, Clone)]
struct CubicTable {
    lo: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CubicTable {
    fn new(lo: f64, hi: f64, values: Vec<f64>) -> Self {
        let k = values.len();
        let step = (hi - lo) / (k - 1) as f64;
        let slopes = (0..k)
            .map(|i| {
                if i == 0 {
                    (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * step)
                } else if i == k - 1 {
                    (3.0 * values[k - 1] - 4.0 * values[k - 2] + values[k - 3]) / (2.0 * step)
                } else {
                    (values[i + 1] - values[i - 1]) / (2.0 * step)
                }
            })
            .collect();
        Self {
            lo,
            step,
            values,
            slopes,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let k = self.values.len();
        let pos = ((x - self.lo) / self.step).max(0.0);
        let i = (pos.floor() as usize).min(k - 2);
        let t = pos - i as f64;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[i]
            + h10 * self.step * self.slopes[i]
            + h01 * self.values[i + 1]
            + h11 * self.step * self.slopes[i + 1]
    }
}

/// Least-squares line through the tabulated prize schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    }
}

/// Solved optimal mechanism for one configuration.
#[derive(Debug, Clone)]
pub struct OpfSolution {
    pub config: ContestConfig,
    pub strategy: OpfStrategy,
    /// `V*` interpolated from [`PRIZE_TABLE_NODES`] generic-path evaluations.
    pub prize: PrizeSchedule,
    /// Profit from the closed integral form.
    pub profit: f64,
    /// Revenue minus expected prize actually paid.
    pub profit_from_payments: f64,
    pub welfare: f64,
    pub prize_fit: LinearFit,
}

impl OpfSolution {
    pub fn solve(config: &ContestConfig) -> Result<Self> {
        Self::solve_with(config, OpfOptions::default())
    }

    pub fn solve_with(config: &ContestConfig, options: OpfOptions) -> Result<Self> {
        let strategy = OpfStrategy::new(config, options)?;
        let evaluator = OptimalPrize::new(config, &strategy)?;
        let (lo, hi) = (strategy.xi_lo, strategy.xi_hi);
        let nodes: Vec<f64> = (0..PRIZE_TABLE_NODES)
            .map(|k| lo + (hi - lo) * k as f64 / (PRIZE_TABLE_NODES - 1) as f64)
            .collect();
        let values = nodes
            .par_iter()
            .map(|xi| evaluator.value(*xi))
            .collect::<Result<Vec<f64>>>()?;
        let prize_fit = linear_fit(&nodes, &values);
        let table = CubicTable::new(lo, hi, values);
        let prize = PrizeSchedule::function(lo, hi, move |xi| table.eval(xi));
        prize.validate(PRIZE_TABLE_NODES)?;

        let profit = profit_with(config, &strategy)?;
        let profit_from_payments =
            expected_revenue(config, &strategy)? - expected_prize_paid(config, &strategy)?;
        let welfare = welfare_with(config, &strategy)?;
        Ok(Self {
            config: config.clone(),
            strategy,
            prize,
            profit,
            profit_from_payments,
            welfare,
            prize_fit,
        })
    }

    /// `(c, β(c))` on `points` uniform costs including both ends.
    pub fn strategy_samples(&self, points: usize) -> Result<Vec<(f64, f64)>> {
        let d = &self.config.dist;
        (0..points)
            .map(|k| {
                let c = if k + 1 == points {
                    d.hi()
                } else {
                    d.lo() + (d.hi() - d.lo()) * k as f64 / (points - 1) as f64
                };
                Ok((c, self.strategy.beta(c)?))
            })
            .collect()
    }

    /// `(ξ, V*(ξ), p(ξ))` on `points` uniform contributions spanning the
    /// prize domain, through the generic path.
    pub fn prize_samples(&self, points: usize) -> Result<Vec<(f64, f64, f64)>> {
        let evaluator = OptimalPrize::new(&self.config, &self.strategy)?;
        let (lo, hi) = (self.strategy.xi_lo, self.strategy.xi_hi);
        (0..points)
            .into_par_iter()
            .map(|k| {
                let xi = if k + 1 == points {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (points - 1) as f64
                };
                let p = evaluator.win_prob(xi)?.value;
                Ok((xi, evaluator.numerator(xi)? / p, p))
            })
            .collect()
    }
}
