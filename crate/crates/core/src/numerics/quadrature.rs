use super::{NumericsError, Result};

/// Subdivision budget for [`integrate_1d`].
pub const MAX_SUBINTERVALS: usize = 2000;

// 15-point Kronrod nodes (non-negative half) and weights, with the embedded
// 7-point Gauss weights for the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error (sum of per-subinterval estimates).
    pub abs_err: f64,
    pub subintervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFiniteIntegrand { x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = kronrod.abs();
    let mut samples = [0.0f64; 15];
    samples[7] = fc;
    for k in 0..7 {
        let dx = half * XGK[k];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        samples[k] = f1;
        samples[14 - k] = f2;
        kronrod += WGK[k] * (f1 + f2);
        abs_sum += WGK[k] * (f1.abs() + f2.abs());
        if k % 2 == 1 {
            gauss += WG[k / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for k in 0..7 {
        asc += WGK[k] * ((samples[k] - mean).abs() + (samples[14 - k] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { lo, hi, value, err })
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[lo, hi]`
/// to absolute tolerance `tol`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops to `tol`. Running out of budget returns
/// [`NumericsError::QuadratureNotConverged`] carrying the best estimate.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Integral> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(NumericsError::InvalidArgument(format!(
            "integration bounds must satisfy lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!(
            "tol must be > 0, got {tol}"
        )));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            abs_err: 0.0,
            subintervals: 0,
        });
    }

    let mut segments = vec![kronrod15(&f, lo, hi)?];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let abs_err: f64 = segments.iter().map(|s| s.err).sum();
        if abs_err <= tol {
            return Ok(Integral {
                value,
                abs_err,
                subintervals: segments.len(),
            });
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.total_cmp(&b.1.err))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments[worst];
        let mid = 0.5 * (seg.lo + seg.hi);
        let too_narrow = mid <= seg.lo || mid >= seg.hi;
        if segments.len() >= MAX_SUBINTERVALS || too_narrow {
            return Err(NumericsError::QuadratureNotConverged {
                estimate: value,
                error_bound: abs_err,
            });
        }
        segments[worst] = kronrod15(&f, seg.lo, mid)?;
        segments.push(kronrod15(&f, mid, seg.hi)?);
    }
}

/// Uniform left-endpoint grid on `[lo, hi)` with spacing `(hi - lo) / m`.
///
/// Point `j` is `lo + j * weight` for `j = 0..m`; the upper endpoint itself is
/// not a node.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    points: Vec<f64>,
    weight: f64,
}

impl QuadratureGrid {
    pub fn uniform(lo: f64, hi: f64, m: usize) -> Result<Self> {
        if m == 0 || !(lo.is_finite() && hi.is_finite()) || !(hi > lo) {
            return Err(NumericsError::InvalidArgument(format!(
                "uniform grid needs m >= 1 and lo < hi, got m = {m} on [{lo}, {hi}]"
            )));
        }
        let weight = (hi - lo) / m as f64;
        let points = (0..m).map(|j| lo + j as f64 * weight).collect();
        Ok(Self { points, weight })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Uniform spacing `Δ_m`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
