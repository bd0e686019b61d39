use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tullock::bench::{
    self, output::to_json, Overrides, Scenario, VerifyOptions, EXIT_CHECK_FAILED,
};

#[derive(Parser)]
#[command(
    name = "tullock",
    version,
    about = "Optimal prize-function vs fixed-prize Tullock contests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON; the built-in uniform [1,2], g(b) = sqrt(b) grid if omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature points of the fixed-prize solver.
    #[arg(long)]
    m: Option<usize>,
    /// Monte-Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium strategy, prize schedule, profit and welfare of the optimal mechanism.
    SolveOpf(Common),
    /// Profit-maximizing fixed prize by grid search.
    OptimizeBenchmark(Common),
    /// Both mechanisms side by side, plus figure tables.
    Compare(Common),
    /// Equilibrium and numerical checks; exits 3 if any fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Check the optimal strategy scaled by this factor instead.
        #[arg(long)]
        perturb: Option<f64>,
        /// Check a `c,beta_c` strategy table instead.
        #[arg(long)]
        strategy: Option<PathBuf>,
    },
    /// Monte-Carlo contests under both mechanisms.
    Simulate(Common),
}

fn load(common: &Common) -> tullock::Result<Scenario> {
    let scenario = match &common.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::paper(),
    };
    if common.trials == Some(0) || common.m.is_some_and(|m| m < 2) {
        return Err(tullock::Error::InvalidConfig(
            "--trials must be >= 1 and --m >= 2".into(),
        ));
    }
    Ok(Overrides {
        seed: common.seed,
        m: common.m,
        trials: common.trials,
    }
    .apply(&scenario))
}

fn run(cli: Cli) -> tullock::Result<i32> {
    let (files, json, code) = match cli.command {
        Command::SolveOpf(c) => {
            let (s, f) = bench::solve_opf(&load(&c)?, &c.out)?;
            (f, to_json(&s)?, 0)
        }
        Command::OptimizeBenchmark(c) => {
            let (s, f) = bench::optimize_benchmark(&load(&c)?, c.m, &c.out)?;
            (f, to_json(&s)?, 0)
        }
        Command::Compare(c) => {
            let (s, f) = bench::compare(&load(&c)?, c.m, &c.out)?;
            (f, to_json(&s.rows)?, 0)
        }
        Command::Verify {
            common,
            perturb,
            strategy,
        } => {
            let options = VerifyOptions { perturb, strategy };
            let (report, f) = bench::verify(&load(&common)?, common.m, &options, &common.out)?;
            for c in &report.checks {
                eprintln!(
                    "{:?} nu={} {} value={} tol={} {}",
                    c.status, c.nu, c.name, c.value, c.tolerance, c.detail
                );
            }
            let code = if report.passed { 0 } else { EXIT_CHECK_FAILED };
            (f, String::new(), code)
        }
        Command::Simulate(c) => {
            let (s, f) = bench::simulate(&load(&c)?, c.m, &c.out)?;
            (
                f,
                to_json(
                    &s.iter()
                        .map(|x| (x.nu, &x.opf.mean_profit, &x.opf.mean_welfare))
                        .collect::<Vec<_>>(),
                )?,
                0,
            )
        }
    };
    print!("{json}");
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
