//! The five harness commands. Each computes its results in memory, writes
//! its artifacts under `out`, and returns the computed data.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{tag, write_json, Table};
use super::scenario::Scenario;
use super::verify::{self, VerifyOptions, VerifyReport};
use crate::contest::{ContestConfig, PrizeSchedule, Strategy};
use crate::error::Result;
use crate::fixed_prize::{optimize_grid, revenue_estimate, FixedPrizeSolution};
use crate::opf::{LinearFit, OpfSolution};
use crate::simulate::{self, SimulationReport, UtilityPoint};

/// Points on the cost grid of strategy artifacts.
pub const STRATEGY_POINTS: usize = 101;
/// Points on the contribution grid of prize artifacts.
pub const PRIZE_POINTS: usize = 101;
/// Points on the cost grid of utility curves.
pub const UTILITY_POINTS: usize = 21;

/// Command-line overrides shared by all commands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub m: Option<usize>,
    pub trials: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, scenario: &Scenario) -> Scenario {
        let mut s = scenario.clone();
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(trials) = self.trials {
            s.trials = Some(trials);
        }
        s
    }
}

fn uniform_points(lo: f64, hi: f64, points: usize) -> Vec<f64> {
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

/// Solves the optimal mechanism at every valuation of the scenario.
pub fn solve_opf_grid(scenario: &Scenario) -> Result<Vec<OpfSolution>> {
    scenario
        .nu_values()
        .par_iter()
        .map(|nu| OpfSolution::solve(&scenario.config(*nu)?))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpfSummary {
    pub nu: f64,
    pub n: usize,
    pub profit: f64,
    pub profit_from_payments: f64,
    pub welfare: f64,
    pub profit_over_nu2: f64,
    pub welfare_over_nu2: f64,
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub prize_fit: LinearFit,
}

impl OpfSummary {
    pub fn of(s: &OpfSolution) -> Self {
        let nu = s.config.nu;
        Self {
            nu,
            n: s.config.n,
            profit: s.profit,
            profit_from_payments: s.profit_from_payments,
            welfare: s.welfare,
            profit_over_nu2: s.profit / (nu * nu),
            welfare_over_nu2: s.welfare / (nu * nu),
            xi_lo: s.strategy.xi_lo(),
            xi_hi: s.strategy.xi_hi(),
            prize_fit: s.prize_fit,
        }
    }
}

/// Writes `opf_strategy_nu<ν>.csv`, `opf_prize_nu<ν>.csv` and
/// `opf_summary.json`.
pub fn solve_opf(scenario: &Scenario, out: &Path) -> Result<(Vec<OpfSummary>, Vec<PathBuf>)> {
    let solutions = solve_opf_grid(scenario)?;
    let mut files = Vec::new();
    for s in &solutions {
        let nu = tag(s.config.nu);
        let mut strategy = Table::new(&["c", "beta_c"]);
        for (c, b) in s.strategy_samples(STRATEGY_POINTS)? {
            strategy.row(&[c, b]);
        }
        files.push(strategy.write(&out.join(format!("opf_strategy_nu{nu}.csv")))?);
        let mut prize = Table::new(&["xi", "V_star", "p_xi"]);
        for (xi, v, p) in s.prize_samples(PRIZE_POINTS)? {
            prize.row(&[xi, v, p]);
        }
        files.push(prize.write(&out.join(format!("opf_prize_nu{nu}.csv")))?);
    }
    let summaries: Vec<OpfSummary> = solutions.iter().map(OpfSummary::of).collect();
    files.push(write_json(&out.join("opf_summary.json"), &summaries)?);
    Ok((summaries, files))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSummary {
    pub nu: f64,
    pub v0_star: f64,
    pub pi0_star: f64,
    pub welfare: f64,
    pub revenue: f64,
    pub residual: f64,
    pub widenings: usize,
    pub sweep_points: usize,
    pub m: usize,
}

impl BenchmarkSummary {
    pub fn of(s: &FixedPrizeSolution) -> Self {
        Self {
            nu: s.nu,
            v0_star: s.v0_star,
            pi0_star: s.pi0_star,
            welfare: s.welfare,
            revenue: revenue_estimate(&s.equilibrium, s.nu),
            residual: s.equilibrium.residual,
            widenings: s.widenings,
            sweep_points: s.trajectory.len(),
            m: s.equilibrium.xi.len(),
        }
    }
}

pub fn optimize_benchmark_grid(
    scenario: &Scenario,
    m: Option<usize>,
) -> Result<Vec<FixedPrizeSolution>> {
    let nus = scenario.nu_values();
    let config = scenario.config(nus[0])?;
    optimize_grid(&config, &nus, &scenario.optimizer_settings(m)?)
}

/// Writes `benchmark_trajectory.csv`, `benchmark_equilibrium_nu<ν>.csv` and
/// `benchmark_summary.json`.
pub fn optimize_benchmark(
    scenario: &Scenario,
    m: Option<usize>,
    out: &Path,
) -> Result<(Vec<BenchmarkSummary>, Vec<PathBuf>)> {
    let solutions = optimize_benchmark_grid(scenario, m)?;
    let files = write_benchmark(&solutions, out)?;
    Ok((solutions.iter().map(BenchmarkSummary::of).collect(), files))
}

fn write_benchmark(solutions: &[FixedPrizeSolution], out: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let mut trajectory = Table::new(&["nu", "V0", "profit"]);
    for s in solutions {
        for (v0, profit) in &s.trajectory {
            trajectory.row(&[s.nu, *v0, *profit]);
        }
        let mut eq = Table::new(&["c_i", "xi_i"]);
        for (c, xi) in s.equilibrium.samples() {
            eq.row(&[c, xi]);
        }
        files.push(eq.write(&out.join(format!("benchmark_equilibrium_nu{}.csv", tag(s.nu))))?);
    }
    files.push(trajectory.write(&out.join("benchmark_trajectory.csv"))?);
    let summaries: Vec<BenchmarkSummary> = solutions.iter().map(BenchmarkSummary::of).collect();
    files.push(write_json(&out.join("benchmark_summary.json"), &summaries)?);
    Ok(files)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub nu: f64,
    pub profit_benchmark: f64,
    pub profit_opf: f64,
    pub profit_ratio: f64,
    pub welfare_benchmark: f64,
    pub welfare_opf: f64,
    pub welfare_ratio: f64,
}

impl ComparisonRow {
    pub fn new(opf: &OpfSolution, benchmark: &FixedPrizeSolution) -> Self {
        Self {
            nu: opf.config.nu,
            profit_benchmark: benchmark.pi0_star,
            profit_opf: opf.profit,
            profit_ratio: opf.profit / benchmark.pi0_star,
            welfare_benchmark: benchmark.welfare,
            welfare_opf: opf.welfare,
            welfare_ratio: opf.welfare / benchmark.welfare,
        }
    }
}

/// Percentage increase of the optimal mechanism's contribution over the
/// fixed-prize one at the cheapest and the most expensive type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyUplift {
    pub nu: f64,
    pub at_c_lo: f64,
    pub at_c_hi: f64,
}

impl StrategyUplift {
    pub fn new(opf: &OpfSolution, benchmark: &FixedPrizeSolution) -> Result<Self> {
        let d = &opf.config.dist;
        let pct = |c: f64| -> Result<f64> {
            Ok(100.0 * (opf.strategy.beta(c)? / benchmark.equilibrium.contribution(c) - 1.0))
        };
        Ok(Self {
            nu: opf.config.nu,
            at_c_lo: pct(d.lo())?,
            at_c_hi: pct(d.hi())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub uplift: Vec<StrategyUplift>,
    pub opf: Vec<OpfSummary>,
    pub benchmark: Vec<BenchmarkSummary>,
}

/// Solves both mechanisms over the valuation grid, then writes
/// `comparison.csv`, `comparison.json`, the benchmark artifacts and the
/// figure tables `fig3a_strategy.csv`, `fig3b_prize.csv`,
/// `fig3c_profit.csv`, `fig4_welfare.csv` and `nu_scaling.csv`.
pub fn compare(
    scenario: &Scenario,
    m: Option<usize>,
    out: &Path,
) -> Result<(Comparison, Vec<PathBuf>)> {
    let opf = solve_opf_grid(scenario)?;
    let bench = optimize_benchmark_grid(scenario, m)?;
    let rows: Vec<ComparisonRow> = opf
        .iter()
        .zip(&bench)
        .map(|(o, b)| ComparisonRow::new(o, b))
        .collect();
    let uplift = opf
        .iter()
        .zip(&bench)
        .map(|(o, b)| StrategyUplift::new(o, b))
        .collect::<Result<Vec<_>>>()?;

    let mut files = write_benchmark(&bench, out)?;
    let mut table = Table::new(&[
        "nu",
        "profit_benchmark",
        "profit_opf",
        "profit_ratio",
        "welfare_benchmark",
        "welfare_opf",
        "welfare_ratio",
    ]);
    for r in &rows {
        table.row(&[
            r.nu,
            r.profit_benchmark,
            r.profit_opf,
            r.profit_ratio,
            r.welfare_benchmark,
            r.welfare_opf,
            r.welfare_ratio,
        ]);
    }
    files.push(table.write(&out.join("comparison.csv"))?);

    let mut fig3a = Table::new(&["nu", "c", "beta_opf", "beta_benchmark", "uplift_pct"]);
    let mut fig3b = Table::new(&["nu", "xi", "V_star", "V0_star"]);
    let mut fig3c = Table::new(&["nu", "profit_opf", "profit_benchmark", "V0_star"]);
    let mut fig4 = Table::new(&["nu", "welfare_opf", "welfare_benchmark"]);
    let mut scaling = Table::new(&[
        "nu",
        "profit_opf_over_nu2",
        "welfare_opf_over_nu2",
        "profit_benchmark_over_nu2",
        "welfare_benchmark_over_nu2",
    ]);
    for (o, b) in opf.iter().zip(&bench) {
        let nu = o.config.nu;
        for c in b.equilibrium.grid.points() {
            let beta = o.strategy.beta(*c)?;
            let beta0 = b.equilibrium.contribution(*c);
            fig3a.row(&[nu, *c, beta, beta0, 100.0 * (beta / beta0 - 1.0)]);
        }
        let (lo, hi) = o.prize.domain();
        for xi in uniform_points(lo, hi, PRIZE_POINTS) {
            fig3b.row(&[nu, xi, o.prize.value(xi)?, b.v0_star]);
        }
        fig3c.row(&[nu, o.profit, b.pi0_star, b.v0_star]);
        fig4.row(&[nu, o.welfare, b.welfare]);
        let nu2 = nu * nu;
        scaling.row(&[
            nu,
            o.profit / nu2,
            o.welfare / nu2,
            b.pi0_star / nu2,
            b.welfare / nu2,
        ]);
    }
    files.push(fig3a.write(&out.join("fig3a_strategy.csv"))?);
    files.push(fig3b.write(&out.join("fig3b_prize.csv"))?);
    files.push(fig3c.write(&out.join("fig3c_profit.csv"))?);
    files.push(fig4.write(&out.join("fig4_welfare.csv"))?);
    files.push(scaling.write(&out.join("nu_scaling.csv"))?);

    let comparison = Comparison {
        rows,
        uplift,
        opf: opf.iter().map(OpfSummary::of).collect(),
        benchmark: bench.iter().map(BenchmarkSummary::of).collect(),
    };
    files.push(write_json(&out.join("comparison.json"), &comparison)?);
    Ok((comparison, files))
}

/// Runs the verification suites at every valuation and writes
/// `verify_report.json`.
pub fn verify(
    scenario: &Scenario,
    m: Option<usize>,
    options: &VerifyOptions,
    out: &Path,
) -> Result<(VerifyReport, Vec<PathBuf>)> {
    let report = verify::run(scenario, m, options)?;
    let path = write_json(&out.join("verify_report.json"), &report)?;
    Ok((report, vec![path]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub nu: f64,
    pub opf: SimulationReport,
    pub opf_profit: f64,
    pub opf_profit_from_payments: f64,
    pub opf_welfare: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<SimulationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub benchmark_v0_star: Option<f64>,
}

fn utility_curve(
    config: &ContestConfig,
    opf: &OpfSolution,
    trials: u64,
) -> Result<Vec<(UtilityPoint, f64)>> {
    let d = &config.dist;
    let costs = uniform_points(d.lo(), d.hi(), UTILITY_POINTS);
    let curve =
        simulate::empirical_utility_curve(config, &opf.strategy, &opf.prize, &costs, trials)?;
    curve
        .into_iter()
        .map(|p| Ok((p, opf.strategy.surplus(p.cost)?)))
        .collect()
}

/// Monte-Carlo runs of both mechanisms at every valuation; writes
/// `simulation_nu<ν>.json` and `utility_curve_nu<ν>.csv`. The fixed-prize
/// run is skipped when `n ≠ 2`.
pub fn simulate(
    scenario: &Scenario,
    m: Option<usize>,
    out: &Path,
) -> Result<(Vec<SimulationSummary>, Vec<PathBuf>)> {
    let trials = scenario.trials();
    let opf = solve_opf_grid(scenario)?;
    let bench = if scenario.n == 2 {
        Some(optimize_benchmark_grid(scenario, m)?)
    } else {
        None
    };
    let mut summaries = Vec::new();
    let mut files = Vec::new();
    for (k, o) in opf.iter().enumerate() {
        let config = &o.config;
        let report = simulate::run(config, &o.strategy, &o.prize, trials)?;
        let (benchmark, benchmark_v0_star) = match &bench {
            Some(b) => {
                let b = &b[k];
                (
                    Some(simulate::run(
                        config,
                        &b.equilibrium,
                        &PrizeSchedule::constant(b.v0_star),
                        trials,
                    )?),
                    Some(b.v0_star),
                )
            }
            None => (None, None),
        };
        let summary = SimulationSummary {
            nu: config.nu,
            opf: report,
            opf_profit: o.profit,
            opf_profit_from_payments: o.profit_from_payments,
            opf_welfare: o.welfare,
            benchmark,
            benchmark_v0_star,
        };
        let nu = tag(config.nu);
        files.push(write_json(
            &out.join(format!("simulation_nu{nu}.json")),
            &summary,
        )?);
        let mut table = Table::new(&["c", "utility", "std_err", "envelope"]);
        for (p, env) in utility_curve(config, o, trials)? {
            table.row(&[p.cost, p.utility, p.std_err, env]);
        }
        files.push(table.write(&out.join(format!("utility_curve_nu{nu}.csv")))?);
        summaries.push(summary);
    }
    Ok((summaries, files))
}

/// Profit and welfare of the optimal mechanism for two type populations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationRow {
    pub n: usize,
    pub nu: f64,
    pub profit_wide: f64,
    pub profit_narrow: f64,
    pub welfare_wide: f64,
    pub welfare_narrow: f64,
}

/// Evaluates the optimal mechanism for `wide` and `narrow` type
/// populations over all `(n, ν)` pairs.
pub fn population_study(
    wide: &ContestConfig,
    narrow: &ContestConfig,
    ns: &[usize],
    nus: &[f64],
) -> Result<Vec<PopulationRow>> {
    let pairs: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|n| nus.iter().map(move |nu| (*n, *nu)))
        .collect();
    pairs
        .par_iter()
        .map(|(n, nu)| {
            let w = wide.with_n(*n)?.with_nu(*nu)?;
            let f = narrow.with_n(*n)?.with_nu(*nu)?;
            Ok(PopulationRow {
                n: *n,
                nu: *nu,
                profit_wide: crate::opf::opf_profit(&w)?,
                profit_narrow: crate::opf::opf_profit(&f)?,
                welfare_wide: crate::opf::opf_welfare(&w)?,
                welfare_narrow: crate::opf::opf_welfare(&f)?,
            })
        })
        .collect()
}

/// Strategy read from a `c,beta_c` CSV, linearly interpolated and held
/// constant beyond its end points.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedStrategy {
    points: Vec<(f64, f64)>,
}

impl TabulatedStrategy {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        use crate::error::Error;
        if points.len() < 2 {
            return Err(Error::InvalidConfig(
                "strategy table needs at least two rows".into(),
            ));
        }
        if points
            .iter()
            .any(|(c, x)| !c.is_finite() || !x.is_finite() || *x < 0.0)
        {
            return Err(Error::InvalidConfig(
                "strategy table has non-finite or negative entries".into(),
            ));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidConfig(
                "strategy costs must be strictly increasing".into(),
            ));
        }
        if points.iter().all(|(_, x)| *x == 0.0) {
            return Err(Error::InvalidConfig(
                "all-zero strategy is not an equilibrium: any positive contribution wins outright"
                    .into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        use crate::error::Error;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidConfig("empty strategy file".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["c", "beta_c"] {
            return Err(Error::InvalidConfig(format!(
                "strategy header must be `c,beta_c`, got `{header}`"
            )));
        }
        let points = lines
            .map(|line| {
                let cells: Vec<&str> = line.split(',').map(str::trim).collect();
                let parse = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|_| Error::InvalidConfig(format!("bad number `{s}` in `{line}`")))
                };
                match cells.as_slice() {
                    [c, x] => Ok((parse(c)?, parse(x)?)),
                    _ => Err(Error::InvalidConfig(format!(
                        "expected two columns in `{line}`"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| crate::error::Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_csv(&text)
    }
}

impl Strategy for TabulatedStrategy {
    fn contribution(&self, cost: f64) -> f64 {
        let p = &self.points;
        if cost <= p[0].0 {
            return p[0].1;
        }
        if cost >= p[p.len() - 1].0 {
            return p[p.len() - 1].1;
        }
        let i = p.partition_point(|(c, _)| *c <= cost) - 1;
        let (c0, x0) = p[i];
        let (c1, x1) = p[i + 1];
        x0 + (cost - c0) / (c1 - c0) * (x1 - x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_strategy() {
        let s = TabulatedStrategy::parse_csv("c,beta_c\n1,0.5\n2,0.1\n").unwrap();
        assert_eq!(s.contribution(0.5), 0.5);
        assert!((s.contribution(1.5) - 0.3).abs() < 1e-15);
        assert_eq!(s.contribution(3.0), 0.1);
    }

    #[test]
    fn tabulated_strategy_rejects() {
        for text in [
            "c,beta_c\n1,0\n2,0\n",
            "c,beta_c\n1,0.5\n",
            "x,y\n1,1\n2,1\n",
            "c,beta_c\n2,1\n1,1\n",
            "c,beta_c\n1,a\n2,1\n",
        ] {
            assert_eq!(
                TabulatedStrategy::parse_csv(text).unwrap_err().exit_code(),
                1,
                "{text}"
            );
        }
    }
}
