//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::process::ExitCode;

use tullock::bench::verify::{self, Status, VerifyOptions};
use tullock::bench::{population_study, Scenario};
use tullock::contest::{CostDistribution, EffortTechnology};
use tullock::fixed_prize::{
    optimize_grid, solve_equilibrium, FixedPrizeSolution, OptimizerSettings,
};
use tullock::opf::{opf_profit, opf_welfare, OpfOptions, OpfStrategy, OptimalPrize};
use tullock::{ContestConfig, OpfSolution};

const NUS: [f64; 10] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];
const OPF_PROFIT_ROW: [f64; 10] = [
    0.0756, 0.3024, 0.6805, 1.2097, 1.8902, 2.7219, 3.7048, 4.8389, 6.1242, 7.5608,
];
const OPF_WELFARE_ROW: [f64; 10] = [
    0.0135, 0.0540, 0.1215, 0.2160, 0.3375, 0.4859, 0.6614, 0.8639, 1.0934, 1.3498,
];
const BENCH_PROFIT_ROW: [f64; 10] = [
    0.0213, 0.0853, 0.1927, 0.3426, 0.5354, 0.7710, 1.0494, 1.3707, 1.7347, 2.1417,
];
const BENCH_WELFARE_ROW: [f64; 10] = [
    0.0019, 0.0058, 0.0155, 0.0271, 0.0407, 0.0600, 0.0813, 0.1065, 0.1336, 0.1666,
];
const PROFIT_RATIO_ROW: [f64; 10] = [
    3.5533, 3.5450, 3.5315, 3.5307, 3.5306, 3.5303, 3.5303, 3.5303, 3.5303, 3.5303,
];
const WELFARE_RATIO_ROW: [f64; 10] = [
    6.9693, 9.2924, 7.8404, 7.9649, 8.2968, 8.0934, 8.1308, 8.1097, 8.1813, 8.1038,
];

type Outcome = Result<String, String>;

const LN_3: f64 = 1.0986122886681098;

fn paper(nu: f64) -> ContestConfig {
    ContestConfig::paper_scenario(nu).unwrap()
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn c1_opf_profit() -> Outcome {
    let mut d_form: f64 = 0.0;
    let mut d_row: f64 = 0.0;
    for (nu, row) in NUS.iter().zip(OPF_PROFIT_ROW) {
        let p = opf_profit(&paper(*nu)).map_err(|e| e.to_string())?;
        d_form = d_form.max((p - (LN_3 / 4.0 + 1.0 / 36.0) * nu * nu).abs());
        d_row = d_row.max((p - row).abs());
    }
    verdict(
        d_form <= 1e-3 && d_row <= 1e-3,
        format!("max |diff| closed form {d_form:.2e}, table {d_row:.2e} (tol 1e-3)"),
    )
}

fn c2_opf_welfare() -> Outcome {
    let mut d_form: f64 = 0.0;
    let mut d_row: f64 = 0.0;
    for (nu, row) in NUS.iter().zip(OPF_WELFARE_ROW) {
        let u = opf_welfare(&paper(*nu)).map_err(|e| e.to_string())?;
        d_form = d_form.max((u - (LN_3 / 8.0 - 1.0 / 12.0) * nu * nu).abs());
        d_row = d_row.max((u - row).abs());
    }
    verdict(
        d_form <= 1e-3 && d_row <= 1e-3,
        format!("max |diff| closed form {d_form:.2e}, table {d_row:.2e} (tol 1e-3)"),
    )
}

fn p_closed(nu: f64, xi: f64) -> f64 {
    1.0 - nu / (4.0 * xi) * ((6.0 * xi + nu) / (2.0 * xi + nu)).ln()
}

fn v_closed(nu: f64, xi: f64) -> f64 {
    (xi * xi / 2.0 + nu * xi / 2.0 - nu * nu / 24.0) / p_closed(nu, xi)
}

fn c3_closed_form() -> Outcome {
    let mut d_beta: f64 = 0.0;
    let mut d_prize: f64 = 0.0;
    for nu in [1.0, 3.0] {
        let config = paper(nu);
        let s = OpfStrategy::new(&config, OpfOptions::root_finding()).map_err(|e| e.to_string())?;
        for k in 0..50 {
            let c = 1.0 + k as f64 / 49.0;
            d_beta =
                d_beta.max((s.beta(c).map_err(|e| e.to_string())? - nu / (4.0 * c - 2.0)).abs());
        }
        let prize = OptimalPrize::new(&config, &s).map_err(|e| e.to_string())?;
        let (lo, hi) = (nu / 6.0, nu / 2.0);
        for k in 0..20 {
            let xi = lo + (hi - lo) * (k as f64 + 0.5) / 20.0;
            d_prize =
                d_prize.max((prize.value(xi).map_err(|e| e.to_string())? - v_closed(nu, xi)).abs());
        }
    }
    verdict(
        d_beta <= 1e-6 && d_prize <= 1e-4,
        format!("beta {d_beta:.2e} (tol 1e-6), V* {d_prize:.2e} (tol 1e-4)"),
    )
}

fn c4_benchmark(bench: &[FixedPrizeSolution]) -> Outcome {
    let d_profit = worst(
        bench
            .iter()
            .zip(BENCH_PROFIT_ROW)
            .map(|(b, row)| (b.pi0_star - row).abs()),
    );
    let d_coincide = worst(bench.iter().map(|b| (b.v0_star - b.pi0_star).abs()));
    verdict(
        d_profit <= 5e-3 && d_coincide <= 0.01,
        format!("max |pi0* - table| {d_profit:.2e} (tol 5e-3), max |V0* - pi0*| {d_coincide:.2e} (tol 1e-2)"),
    )
}

fn c5_benchmark_welfare(bench: &[FixedPrizeSolution]) -> Outcome {
    let d = worst(
        bench
            .iter()
            .zip(BENCH_WELFARE_ROW)
            .map(|(b, row)| (b.welfare - row).abs()),
    );
    verdict(d <= 2e-3, format!("max |U0 - table| {d:.2e} (tol 2e-3)"))
}

fn c6_ratios(bench: &[FixedPrizeSolution], opf: &[(f64, f64)]) -> Outcome {
    let mut failures = Vec::new();
    let mut d_profit: f64 = 0.0;
    let mut d_welfare: f64 = 0.0;
    for (k, (b, (p, u))) in bench.iter().zip(opf).enumerate() {
        let pr = p / b.pi0_star;
        let wr = u / b.welfare;
        d_profit = d_profit.max((pr - PROFIT_RATIO_ROW[k]).abs());
        d_welfare = d_welfare.max((wr - WELFARE_RATIO_ROW[k]).abs());
        if !(3.50..=3.56).contains(&pr) || (pr - PROFIT_RATIO_ROW[k]).abs() > 0.05 {
            failures.push(format!("profit ratio {pr:.4} at nu={}", NUS[k]));
        }
        if !(6.9..=9.4).contains(&wr) || (wr - WELFARE_RATIO_ROW[k]).abs() > 0.4 {
            failures.push(format!(
                "welfare ratio {wr:.4} vs {} at nu={}",
                WELFARE_RATIO_ROW[k], NUS[k]
            ));
        }
    }
    let summary = format!(
        "max |ratio - table| profit {d_profit:.3} (tol 0.05), welfare {d_welfare:.3} (tol 0.4)"
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", failures.join(", ")))
    }
}

fn c7_properties() -> Outcome {
    let scenario = Scenario {
        trials: Some(1_000_000),
        ..Scenario::paper()
    };
    let report =
        verify::run(&scenario, None, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{} at nu={} ({})", c.name, c.nu, c.value))
        .collect();
    let gap = worst(
        report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("best_response"))
            .map(|c| c.value),
    );
    let summary = format!(
        "{} checks over {} valuations, max best-response gap {gap:.2e}",
        report.checks.len(),
        NUS.len()
    );
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; failed: {}", failed.join(", ")))
    }
}

fn c8_discretization(bench: &[FixedPrizeSolution]) -> Outcome {
    let mut d: f64 = 0.0;
    for b in bench {
        let coarse = &b.equilibrium;
        let fine = solve_equilibrium(&paper(b.nu), b.v0_star, 200).map_err(|e| e.to_string())?;
        for j in 0..coarse.xi.len() {
            d = d.max((coarse.xi[j] - fine.xi[2 * j]).abs());
        }
    }
    let fey = ContestConfig::new(
        2,
        1.0,
        CostDistribution::uniform(0.01, 1.01).map_err(|e| e.to_string())?,
        EffortTechnology::power(1.0).map_err(|e| e.to_string())?,
        0,
    )
    .map_err(|e| e.to_string())?;
    let eq = solve_equilibrium(&fey, 1.0, 100).map_err(|e| e.to_string())?;
    let decreasing = eq.xi.windows(2).all(|w| w[1] < w[0]);
    let convex = eq.xi.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-12);
    verdict(
        d <= 1e-3 && eq.residual < 1e-8 && decreasing && convex,
        format!(
            "m=100 vs 200 max diff {d:.2e} (tol 1e-3); lottery case residual {:.1e}, decreasing {decreasing}, convex {convex}",
            eq.residual
        ),
    )
}

fn c9_population() -> Outcome {
    let wide = ContestConfig::new(
        2,
        1.0,
        CostDistribution::uniform(0.5, 2.5).map_err(|e| e.to_string())?,
        EffortTechnology::power(0.5).map_err(|e| e.to_string())?,
        0,
    )
    .map_err(|e| e.to_string())?;
    let ns: Vec<usize> = (2..=10).collect();
    let rows = population_study(&wide, &paper(1.0), &ns, &[1.0, 2.0, 3.0, 4.0, 5.0])
        .map_err(|e| e.to_string())?;
    let rel = |x: f64, y: f64| ((x - y) / y).abs();
    let mut profit_order = 0;
    let mut welfare_order = 0;
    let mut forms = [0.0f64; 4];
    for r in &rows {
        let s = r.n as f64 * r.nu * r.nu;
        profit_order += (r.profit_wide <= r.profit_narrow) as usize;
        welfare_order += (r.welfare_wide <= r.welfare_narrow) as usize;
        forms[0] = forms[0].max(rel(r.profit_wide, (LN_3 / 8.0 + 2.0 / 81.0) * s));
        forms[1] = forms[1].max(rel(r.profit_narrow, (LN_3 / 8.0 + 1.0 / 72.0) * s));
        forms[2] = forms[2].max(rel(r.welfare_wide, (LN_3 / 16.0 - 1.0 / 36.0) * s));
        forms[3] = forms[3].max(rel(r.welfare_narrow, (LN_3 / 16.0 - 1.0 / 24.0) * s));
    }
    let first = rows[0];
    let ok = profit_order == 0 && welfare_order == 0 && forms.iter().all(|f| *f <= 1e-4);
    verdict(
        ok,
        format!(
            "profit G>F violated in {profit_order}/{n}, welfare G>F violated in {welfare_order}/{n}; \
             max rel diff to closed forms pi_G {:.2e}, pi_F {:.2e}, U_G {:.2e}, U_F {:.2e} (tol 1e-4); \
             pi_G/(n nu^2) = {:.6}",
            forms[0],
            forms[1],
            forms[2],
            forms[3],
            first.profit_wide / 2.0,
            n = rows.len(),
        ),
    )
}

fn c10_scaling(opf: &[(f64, f64)]) -> Outcome {
    let spread = |xs: Vec<f64>| {
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let p = spread(
        opf.iter()
            .zip(NUS)
            .map(|((p, _), nu)| p / (nu * nu))
            .collect(),
    );
    let u = spread(
        opf.iter()
            .zip(NUS)
            .map(|((_, u), nu)| u / (nu * nu))
            .collect(),
    );
    verdict(
        p <= 1e-6 && u <= 1e-6,
        format!("spread of profit/nu^2 {p:.2e}, welfare/nu^2 {u:.2e} (tol 1e-6)"),
    )
}

fn main() -> ExitCode {
    let bench = optimize_grid(&paper(1.0), &NUS, &OptimizerSettings::default());
    let opf: Result<Vec<(f64, f64)>, String> = NUS
        .iter()
        .map(|nu| {
            OpfSolution::solve(&paper(*nu))
                .map(|s| (s.profit, s.welfare))
                .map_err(|e| e.to_string())
        })
        .collect();
    let needs_bench = |f: &dyn Fn(&[FixedPrizeSolution]) -> Outcome| match &bench {
        Ok(b) => f(b),
        Err(e) => Err(format!("benchmark optimizer failed: {e}")),
    };
    let with_both =
        |f: &dyn Fn(&[FixedPrizeSolution], &[(f64, f64)]) -> Outcome| match (&bench, &opf) {
            (Ok(b), Ok(o)) => f(b, o),
            (Err(e), _) => Err(format!("benchmark optimizer failed: {e}")),
            (_, Err(e)) => Err(format!("optimal mechanism failed: {e}")),
        };

    let results: Vec<(&str, Outcome)> = vec![
        ("1 optimal-mechanism profit", c1_opf_profit()),
        ("2 optimal-mechanism welfare", c2_opf_welfare()),
        ("3 generic path vs closed form", c3_closed_form()),
        ("4 fixed-prize optimizer", needs_bench(&c4_benchmark)),
        ("5 fixed-prize welfare", needs_bench(&c5_benchmark_welfare)),
        ("6 profit and welfare ratios", with_both(&c6_ratios)),
        ("7 equilibrium properties", c7_properties()),
        (
            "8 discretization convergence",
            needs_bench(&c8_discretization),
        ),
        ("9 population diversity", c9_population()),
        (
            "10 valuation scaling",
            opf.as_ref()
                .map_err(|e| e.clone())
                .and_then(|o| c10_scaling(o)),
        ),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
