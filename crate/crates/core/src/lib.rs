//! Tullock contests for crowdsourcing with an optimal prize function.
//!
//! The crate solves the equilibrium of a contest whose prize depends on the
//! winning contribution, evaluates the designer's profit and the contestants'
//! welfare, optimizes a conventional fixed-prize contest for comparison, and
//! checks both by Monte-Carlo simulation.
//!
//! ```
//! use tullock::{ContestConfig, OpfSolution};
//!
//! let config = ContestConfig::paper_scenario(1.0).unwrap();
//! let solution = OpfSolution::solve(&config).unwrap();
//! assert!((solution.strategy.beta(1.0).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod bench;
pub mod contest;
pub mod error;
pub mod fixed_prize;
pub mod numerics;
pub mod opf;
pub mod rng;
pub mod simulate;
pub mod stats;

pub use contest::{ContestConfig, CostDistribution, EffortTechnology, PrizeSchedule, Strategy};
pub use error::{Error, Result};
pub use fixed_prize::{optimize, FixedPrizeEquilibrium, FixedPrizeSolution, OptimizerSettings};
pub use opf::{OpfOptions, OpfSolution, OpfStrategy};
pub use simulate::SimulationReport;
pub use stats::Estimate;
