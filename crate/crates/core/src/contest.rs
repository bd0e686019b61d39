//! Problem-instance model: the common prior over marginal costs, the effort
//! technology, the contest configuration and the contest success function.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of uniform probe points used by the construction-time validators.
pub const PROBE_POINTS: usize = 512;

/// A continuous prior over marginal costs on a bounded support.
pub trait CostModel: Send + Sync + fmt::Debug {
    /// `(c_lo, c_hi)`.
    fn support(&self) -> (f64, f64);
    fn cdf(&self, c: f64) -> f64;
    fn pdf(&self, c: f64) -> f64;
    /// Needed for exact sampling in the simulator.
    fn inverse_cdf(&self, u: f64) -> f64;
    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    pub a: f64,
    pub b: f64,
}

impl CostModel for Uniform {
    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn cdf(&self, c: f64) -> f64 {
        ((c - self.a) / (self.b - self.a)).clamp(0.0, 1.0)
    }

    fn pdf(&self, c: f64) -> f64 {
        if c < self.a || c > self.b {
            0.0
        } else {
            1.0 / (self.b - self.a)
        }
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        self.a + u.clamp(0.0, 1.0) * (self.b - self.a)
    }

    fn name(&self) -> String {
        format!("uniform[{}, {}]", self.a, self.b)
    }
}

/// Validated cost distribution `F` on `[c_lo, c_hi]`.
#[derive(Clone)]
pub struct CostDistribution {
    model: Arc<dyn CostModel>,
    lo: f64,
    hi: f64,
}

impl fmt::Debug for CostDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostDistribution")
            .field("name", &self.model.name())
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish()
    }
}

impl CostDistribution {
    /// Wraps `model` after checking the support, the cdf end values and
    /// monotonicity, pdf positivity, and pdf/cdf consistency on the probe grid.
    pub fn new(model: impl CostModel + 'static) -> Result<Self> {
        let (lo, hi) = model.support();
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(Error::InvalidConfig(format!(
                "cost support must satisfy 0 < c_lo < c_hi, got [{lo}, {hi}]"
            )));
        }
        if model.cdf(lo).abs() > 1e-12 || (model.cdf(hi) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "{}: cdf must be 0 at c_lo and 1 at c_hi",
                model.name()
            )));
        }

        let step = (hi - lo) / (PROBE_POINTS - 1) as f64;
        let fd = 1e-6 * (hi - lo);
        let mut prev_cdf = f64::NEG_INFINITY;
        for k in 0..PROBE_POINTS {
            let c = lo + k as f64 * step;
            let cdf = model.cdf(c);
            let pdf = model.pdf(c);
            if cdf < prev_cdf {
                return Err(Error::InvalidConfig(format!(
                    "{}: cdf decreases near c = {c}",
                    model.name()
                )));
            }
            prev_cdf = cdf;
            if !(pdf > 0.0 && pdf.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{}: pdf not positive at c = {c}",
                    model.name()
                )));
            }
            // One-sided difference at the ends so the probe stays in the support.
            let (a, b) = ((c - fd).max(lo), (c + fd).min(hi));
            let slope = (model.cdf(b) - model.cdf(a)) / (b - a);
            if (slope - pdf).abs() > 1e-6 * pdf.max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{}: pdf {pdf} disagrees with cdf slope {slope} at c = {c}",
                    model.name()
                )));
            }
        }
        Ok(Self {
            model: Arc::new(model),
            lo,
            hi,
        })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(Uniform { a, b })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn cdf(&self, c: f64) -> f64 {
        self.model.cdf(c)
    }

    pub fn pdf(&self, c: f64) -> f64 {
        self.model.pdf(c)
    }

    pub fn inverse_cdf(&self, u: f64) -> f64 {
        self.model.inverse_cdf(u)
    }

    pub fn name(&self) -> String {
        self.model.name()
    }

    pub fn contains(&self, c: f64) -> bool {
        c >= self.lo && c <= self.hi
    }

    /// Virtual cost `φ(c) = c + F(c)/f(c)`.
    pub fn virtual_cost(&self, c: f64) -> Result<f64> {
        if !self.contains(c) {
            return Err(Error::OutOfSupport {
                c,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(c + self.model.cdf(c) / self.model.pdf(c))
    }

    /// Checks that the virtual cost is strictly increasing on the probe grid.
    pub fn check_regular(&self) -> Result<()> {
        let step = (self.hi - self.lo) / (PROBE_POINTS - 1) as f64;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..PROBE_POINTS {
            let c = if k + 1 == PROBE_POINTS {
                self.hi
            } else {
                self.lo + k as f64 * step
            };
            let phi = self.virtual_cost(c)?;
            if !(phi > prev) {
                return Err(Error::NotRegular {
                    c,
                    name: self.name(),
                });
            }
            prev = phi;
        }
        Ok(())
    }
}

/// Effort technology: `g` maps effort to contribution, `h = g⁻¹` maps a
/// contribution back to the effort it costs.
pub trait EffortModel: Send + Sync + fmt::Debug {
    fn g(&self, effort: f64) -> f64;
    fn h(&self, contribution: f64) -> f64;
    fn h_prime(&self, contribution: f64) -> f64;
    /// Closed-form `(h')⁻¹` when one exists. `None` means "root-find it".
    fn h_prime_inverse(&self, _slope: f64) -> Option<f64> {
        None
    }
    fn name(&self) -> String;
}

/// `g(b) = b^α` with `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub alpha: f64,
}

impl EffortModel for PowerLaw {
    fn g(&self, effort: f64) -> f64 {
        effort.max(0.0).powf(self.alpha)
    }

    fn h(&self, contribution: f64) -> f64 {
        if self.alpha == 0.5 {
            contribution * contribution
        } else {
            contribution.max(0.0).powf(1.0 / self.alpha)
        }
    }

    fn h_prime(&self, contribution: f64) -> f64 {
        if self.alpha == 0.5 {
            2.0 * contribution
        } else {
            let p = 1.0 / self.alpha;
            p * contribution.max(0.0).powf(p - 1.0)
        }
    }

    fn h_prime_inverse(&self, slope: f64) -> Option<f64> {
        if self.alpha >= 1.0 || !(slope >= 0.0) {
            // h' is constant for the linear technology.
            return None;
        }
        if self.alpha == 0.5 {
            return Some(slope / 2.0);
        }
        Some((self.alpha * slope).powf(self.alpha / (1.0 - self.alpha)))
    }

    fn name(&self) -> String {
        format!("power(alpha={})", self.alpha)
    }
}

/// Validated effort technology.
#[derive(Clone)]
pub struct EffortTechnology {
    model: Arc<dyn EffortModel>,
}

impl fmt::Debug for EffortTechnology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EffortTechnology")
            .field("name", &self.model.name())
            .finish()
    }
}

/// Effort range probed by the technology validator.
const EFFORT_PROBE_MAX: f64 = 4.0;

impl EffortTechnology {
    /// Wraps `model` after checking `g(0) = 0`, that `g` is strictly
    /// increasing and concave, that `h` inverts `g`, and that `h'` matches
    /// central differences of `h`.
    pub fn new(model: impl EffortModel + 'static) -> Result<Self> {
        let name = model.name();
        if model.g(0.0) != 0.0 {
            return Err(Error::InvalidConfig(format!("{name}: g(0) must be 0")));
        }
        let step = EFFORT_PROBE_MAX / PROBE_POINTS as f64;
        let values: Vec<f64> = (0..=PROBE_POINTS)
            .map(|k| model.g(k as f64 * step))
            .collect();
        for k in 1..values.len() {
            if !(values[k] > values[k - 1]) {
                return Err(Error::InvalidConfig(format!(
                    "{name}: g is not strictly increasing"
                )));
            }
        }
        for k in 1..values.len() - 1 {
            let second = values[k + 1] - 2.0 * values[k] + values[k - 1];
            if second > 1e-12 * values[k].abs().max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name}: g is not concave near b = {}",
                    k as f64 * step
                )));
            }
        }
        for k in 1..=PROBE_POINTS {
            let b = k as f64 * step;
            let xi = values[k];
            let back = model.h(xi);
            if (back - b).abs() > 1e-9 * b.max(1.0) {
                return Err(Error::InvalidConfig(format!("{name}: h(g({b})) = {back}")));
            }
            if xi < 1e-3 {
                continue;
            }
            let d = 1e-5 * xi;
            let fd = (model.h(xi + d) - model.h(xi - d)) / (2.0 * d);
            let hp = model.h_prime(xi);
            if (fd - hp).abs() > 1e-6 * hp.abs().max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name}: h'({xi}) = {hp} disagrees with finite difference {fd}"
                )));
            }
        }
        Ok(Self {
            model: Arc::new(model),
        })
    }

    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "power-law alpha must lie in (0, 1], got {alpha}"
            )));
        }
        Self::new(PowerLaw { alpha })
    }

    pub fn g(&self, effort: f64) -> f64 {
        self.model.g(effort)
    }

    pub fn h(&self, contribution: f64) -> f64 {
        self.model.h(contribution)
    }

    pub fn h_prime(&self, contribution: f64) -> f64 {
        self.model.h_prime(contribution)
    }

    pub fn h_prime_inverse(&self, slope: f64) -> Option<f64> {
        self.model.h_prime_inverse(slope)
    }

    pub fn name(&self) -> String {
        self.model.name()
    }
}

/// A full problem instance.
#[derive(Debug, Clone)]
pub struct ContestConfig {
    pub n: usize,
    /// Crowdsourcer's value per unit of contribution.
    pub nu: f64,
    pub dist: CostDistribution,
    pub tech: EffortTechnology,
    pub seed: u64,
}

impl ContestConfig {
    pub fn new(
        n: usize,
        nu: f64,
        dist: CostDistribution,
        tech: EffortTechnology,
        seed: u64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 players, got {n}"
            )));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "nu must be a positive finite number, got {nu}"
            )));
        }
        Ok(Self {
            n,
            nu,
            dist,
            tech,
            seed,
        })
    }

    /// Uniform costs on `[1, 2]`, `g(b) = √b`, two players.
    pub fn paper_scenario(nu: f64) -> Result<Self> {
        Self::new(
            2,
            nu,
            CostDistribution::uniform(1.0, 2.0)?,
            EffortTechnology::power(0.5)?,
            0,
        )
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.nu, self.dist.clone(), self.tech.clone(), self.seed)
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(self.n, nu, self.dist.clone(), self.tech.clone(), self.seed)
    }
}

/// A symmetric pure strategy: contribution as a function of own cost.
pub trait Strategy: Sync {
    fn contribution(&self, cost: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> Strategy for F {
    fn contribution(&self, cost: f64) -> f64 {
        self(cost)
    }
}

/// Lottery winning probability `ξ_i / Σ_j ξ_j`; nobody wins when every
/// contribution is zero.
pub fn csf_win_prob(contributions: &[f64], i: usize) -> f64 {
    let total: f64 = contributions.iter().sum();
    if total > 0.0 {
        contributions[i] / total
    } else {
        0.0
    }
}

/// A prize as a function of the winner's contribution.
#[derive(Clone)]
pub struct PrizeSchedule {
    domain: (f64, f64),
    kind: PrizeKind,
}

#[derive(Clone)]
pub enum PrizeKind {
    Constant(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PrizeSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            PrizeKind::Constant(v) => format!("constant({v})"),
            PrizeKind::Function(_) => "function".to_string(),
        };
        f.debug_struct("PrizeSchedule")
            .field("domain", &self.domain)
            .field("kind", &kind)
            .finish()
    }
}

/// Relative slack when checking a contribution against the schedule domain,
/// so that `β(c̄)` recomputed by a different path still counts as inside.
const DOMAIN_SLACK: f64 = 1e-9;

impl PrizeSchedule {
    /// Fixed prize, payable for any nonnegative contribution.
    pub fn constant(v0: f64) -> Self {
        Self {
            domain: (0.0, f64::INFINITY),
            kind: PrizeKind::Constant(v0),
        }
    }

    pub fn function(lo: f64, hi: f64, value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            domain: (lo, hi),
            kind: PrizeKind::Function(Arc::new(value)),
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn kind(&self) -> &PrizeKind {
        &self.kind
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, PrizeKind::Constant(_))
    }

    pub fn contains(&self, xi: f64) -> bool {
        let (lo, hi) = self.domain;
        let slack = if hi.is_finite() {
            DOMAIN_SLACK * hi.abs().max(lo.abs())
        } else {
            0.0
        };
        xi >= lo - slack && xi <= hi + slack
    }

    /// `V(ξ)`; contributions outside the domain are an error, never an
    /// extrapolation.
    pub fn value(&self, xi: f64) -> Result<f64> {
        if !self.contains(xi) {
            return Err(Error::OutsidePrizeDomain {
                xi,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        Ok(match &self.kind {
            PrizeKind::Constant(v) => *v,
            PrizeKind::Function(f) => f(xi.clamp(self.domain.0, self.domain.1)),
        })
    }

    /// Checks positivity (and, for functions, monotonicity) on `points`
    /// uniform probes of the domain.
    pub fn validate(&self, points: usize) -> Result<()> {
        match &self.kind {
            PrizeKind::Constant(v) if *v > 0.0 => Ok(()),
            PrizeKind::Constant(v) => Err(Error::InvalidConfig(format!(
                "fixed prize must be > 0, got {v}"
            ))),
            PrizeKind::Function(f) => {
                let (lo, hi) = self.domain;
                let mut prev = f64::NEG_INFINITY;
                for k in 0..points {
                    let xi = lo + (hi - lo) * k as f64 / (points - 1) as f64;
                    let v = f(xi);
                    if !(v > 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "prize V({xi}) = {v} is not positive"
                        )));
                    }
                    if v < prev - 1e-12 * prev.abs() {
                        return Err(Error::InvalidConfig(format!(
                            "prize decreases near xi = {xi}"
                        )));
                    }
                    prev = v;
                }
                Ok(())
            }
        }
    }
}

/// Player `i`'s lottery-expected ex-post payoff `P_i(ξ) V(ξ_i) − h(ξ_i) c_i`.
pub fn ex_post_payoff(
    config: &ContestConfig,
    cost: f64,
    contributions: &[f64],
    i: usize,
    prize: &PrizeSchedule,
) -> Result<f64> {
    if contributions.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::InvalidConfig(
            "contributions must be nonnegative".into(),
        ));
    }
    let xi = contributions[i];
    let p = csf_win_prob(contributions, i);
    let income = if p > 0.0 { p * prize.value(xi)? } else { 0.0 };
    Ok(income - config.tech.h(xi) * cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn virtual_cost_uniform() {
        let d = CostDistribution::uniform(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(d.virtual_cost(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(d.virtual_cost(2.0).unwrap(), 3.0);
        // φ(c) = 2c - 1 throughout
        for c in [1.1, 1.37, 1.5, 1.99] {
            assert_abs_diff_eq!(d.virtual_cost(c).unwrap(), 2.0 * c - 1.0, epsilon = 1e-12);
        }
        let wide = CostDistribution::uniform(0.5, 2.5).unwrap();
        assert_abs_diff_eq!(wide.virtual_cost(2.5).unwrap(), 4.5, epsilon = 1e-12);
        assert!(matches!(
            d.virtual_cost(2.5),
            Err(Error::OutOfSupport { .. })
        ));
        assert!(matches!(
            d.virtual_cost(0.99),
            Err(Error::OutOfSupport { .. })
        ));
    }

    #[test]
    fn regularity_of_builtins() {
        CostDistribution::uniform(1.0, 2.0)
            .unwrap()
            .check_regular()
            .unwrap();
        CostDistribution::uniform(0.01, 1.01)
            .unwrap()
            .check_regular()
            .unwrap();
    }

    #[derive(Debug)]
    struct MisscaledPdf;

    impl CostModel for MisscaledPdf {
        fn support(&self) -> (f64, f64) {
            (1.0, 2.0)
        }
        fn cdf(&self, c: f64) -> f64 {
            (c - 1.0).clamp(0.0, 1.0)
        }
        fn pdf(&self, _c: f64) -> f64 {
            2.0
        }
        fn inverse_cdf(&self, u: f64) -> f64 {
            1.0 + u
        }
        fn name(&self) -> String {
            "misscaled".into()
        }
    }

    #[test]
    fn inconsistent_pdf_rejected_at_construction() {
        assert!(CostDistribution::new(MisscaledPdf).is_err());
    }

    #[test]
    fn invalid_supports_rejected() {
        assert!(CostDistribution::uniform(0.0, 1.0).is_err());
        assert!(CostDistribution::uniform(2.0, 1.0).is_err());
    }

    #[derive(Debug)]
    struct Convex;

    impl EffortModel for Convex {
        fn g(&self, b: f64) -> f64 {
            b * b
        }
        fn h(&self, xi: f64) -> f64 {
            xi.sqrt()
        }
        fn h_prime(&self, xi: f64) -> f64 {
            0.5 / xi.sqrt()
        }
        fn name(&self) -> String {
            "convex".into()
        }
    }

    #[test]
    fn technology_validation() {
        EffortTechnology::power(0.5).unwrap();
        EffortTechnology::power(1.0).unwrap();
        EffortTechnology::power(0.3).unwrap();
        assert!(EffortTechnology::power(1.5).is_err());
        assert!(EffortTechnology::power(0.0).is_err());
        assert!(EffortTechnology::new(Convex).is_err());
    }

    #[test]
    fn power_law_inverse_slope() {
        let t = EffortTechnology::power(0.5).unwrap();
        assert_eq!(t.h_prime_inverse(1.0), Some(0.5));
        let lin = EffortTechnology::power(1.0).unwrap();
        assert_eq!(lin.h_prime_inverse(1.0), None);
        let t3 = PowerLaw { alpha: 0.3 };
        let xi = t3.h_prime_inverse(2.7).unwrap();
        assert_abs_diff_eq!(t3.h_prime(xi), 2.7, epsilon = 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(ContestConfig::paper_scenario(1.0)
            .unwrap()
            .with_n(1)
            .is_err());
        assert!(ContestConfig::paper_scenario(0.0).is_err());
        assert!(ContestConfig::paper_scenario(f64::NAN).is_err());
    }

    #[test]
    fn csf_examples() {
        assert_eq!(csf_win_prob(&[1.0, 1.0], 0), 0.5);
        assert_eq!(csf_win_prob(&[0.0, 0.0, 0.0], 1), 0.0);
        assert_eq!(csf_win_prob(&[3.0, 1.0, 0.0], 0), 0.75);
    }

    #[test]
    fn ex_post_payoff_examples() {
        let cfg = ContestConfig::paper_scenario(1.0).unwrap();
        let unit = PrizeSchedule::constant(1.0);
        assert_eq!(
            ex_post_payoff(&cfg, 1.0, &[0.0, 0.0], 0, &unit).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            ex_post_payoff(&cfg, 1.0, &[0.5, 0.5], 0, &unit).unwrap(),
            0.25,
            epsilon = 1e-15
        );

        let narrow = PrizeSchedule::function(0.2, 0.4, |x| x);
        assert!(matches!(
            ex_post_payoff(&cfg, 1.0, &[0.5, 0.3], 0, &narrow),
            Err(Error::OutsidePrizeDomain { .. })
        ));
        // A zero contribution never collects, so the domain is not consulted.
        assert_eq!(
            ex_post_payoff(&cfg, 1.0, &[0.0, 0.3], 0, &narrow).unwrap(),
            0.0
        );
    }

    #[test]
    fn prize_validation() {
        assert!(PrizeSchedule::constant(0.0).validate(10).is_err());
        assert!(PrizeSchedule::function(0.1, 0.5, |x| 1.0 - x)
            .validate(10)
            .is_err());
        PrizeSchedule::function(0.1, 0.5, |x| 1.0 + x)
            .validate(10)
            .unwrap();
    }

    proptest! {
        #[test]
        fn win_probs_sum_to_one(xs in proptest::collection::vec(0.0f64..10.0, 2..12)) {
            let total: f64 = (0..xs.len()).map(|i| csf_win_prob(&xs, i)).sum();
            if xs.iter().sum::<f64>() > 0.0 {
                prop_assert!((total - 1.0).abs() < 1e-12);
            } else {
                prop_assert_eq!(total, 0.0);
            }
        }

        #[test]
        fn virtual_cost_increasing_uniform(a in 0.1f64..3.0, w in 0.1f64..3.0) {
            let d = CostDistribution::uniform(a, a + w).unwrap();
            prop_assert!(d.check_regular().is_ok());
        }
    }
}
