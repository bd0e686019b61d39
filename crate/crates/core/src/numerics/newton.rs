use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{NumericsError, Result};

const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    /// Convergence threshold on the max-norm of the residual.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Initial step length in (0, 1].
    pub damping: f64,
    /// Relative forward-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            residual_tol: 1e-9,
            max_iter: 200,
            damping: 1.0,
            fd_step: 1e-7,
        }
    }
}

impl SolverSettings {
    fn validate(&self) -> Result<()> {
        if !(self.residual_tol > 0.0) || self.max_iter == 0 {
            return Err(NumericsError::InvalidArgument(
                "solver settings need residual_tol > 0 and max_iter >= 1".into(),
            ));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(NumericsError::InvalidArgument(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if !(self.fd_step > 0.0) {
            return Err(NumericsError::InvalidArgument("fd_step must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSolution {
    pub x: Vec<f64>,
    /// Max-norm of the residual at `x`.
    pub residual: f64,
    pub iterations: usize,
}

fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Damped Newton iteration for `F(x) = 0` on the positive orthant.
///
/// `system(x, out)` writes `F(x)` into `out`. The Jacobian is built by forward
/// differences. Each Newton step is halved (up to 40 times) until the
/// candidate is strictly positive and reduces `||F||₂`.
pub fn solve_system<F>(system: F, x0: &[f64], settings: &SolverSettings) -> Result<SystemSolution>
where
    F: Fn(&[f64], &mut [f64]),
{
    settings.validate()?;
    let m = x0.len();
    if m == 0 {
        return Err(NumericsError::InvalidArgument("empty initial guess".into()));
    }
    if let Some(bad) = x0.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(NumericsError::InvalidArgument(format!(
            "initial guess must be strictly positive, found {bad}"
        )));
    }

    let mut x = x0.to_vec();
    let mut r = vec![0.0; m];
    system(&x, &mut r);
    if let Some(i) = r.iter().position(|v| !v.is_finite()) {
        return Err(NumericsError::NonFiniteFunction { x: x[i] });
    }
    let mut norm = max_norm(&r);

    let mut jac = DMatrix::<f64>::zeros(m, m);
    let mut probe = x.clone();
    let mut shifted = vec![0.0; m];
    let mut candidate = vec![0.0; m];
    let mut r_candidate = vec![0.0; m];

    for iteration in 0..settings.max_iter {
        if norm <= settings.residual_tol {
            return Ok(SystemSolution {
                x,
                residual: norm,
                iterations: iteration,
            });
        }

        probe.copy_from_slice(&x);
        for k in 0..m {
            let step = settings.fd_step * x[k].abs().max(1e-8);
            probe[k] = x[k] + step;
            let actual = probe[k] - x[k];
            system(&probe, &mut shifted);
            for i in 0..m {
                jac[(i, k)] = (shifted[i] - r[i]) / actual;
            }
            probe[k] = x[k];
        }

        let rhs = DVector::from_iterator(m, r.iter().map(|v| -v));
        let delta = jac
            .clone()
            .lu()
            .solve(&rhs)
            .filter(|d| d.iter().all(|v| v.is_finite()))
            .ok_or(NumericsError::SingularJacobian { iteration })?;

        let current = sum_sq(&r);
        let mut t = settings.damping;
        let mut any_positive = false;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            for i in 0..m {
                candidate[i] = x[i] + t * delta[i];
            }
            if candidate.iter().all(|v| *v > 0.0 && v.is_finite()) {
                any_positive = true;
                system(&candidate, &mut r_candidate);
                if r_candidate.iter().all(|v| v.is_finite()) && sum_sq(&r_candidate) < current {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(if any_positive {
                NumericsError::LineSearchStalled { residual: norm }
            } else {
                NumericsError::LeftPositiveOrthant { residual: norm }
            });
        }
        std::mem::swap(&mut x, &mut candidate);
        std::mem::swap(&mut r, &mut r_candidate);
        norm = max_norm(&r);
    }

    if norm <= settings.residual_tol {
        Ok(SystemSolution {
            x,
            residual: norm,
            iterations: settings.max_iter,
        })
    } else {
        Err(NumericsError::MaxIterations {
            iterations: settings.max_iter,
            residual: norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_system() {
        let target = [3.0, 0.25, 7.5];
        let sol = solve_system(
            |x, out| {
                for i in 0..3 {
                    out[i] = x[i] - target[i];
                }
            },
            &[1.0, 1.0, 1.0],
            &SolverSettings::default(),
        )
        .unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(sol.x[i], target[i], epsilon = 1e-9);
        }
        assert!(sol.residual <= 1e-9);
    }

    #[test]
    fn two_by_two_hand_solvable() {
        let f = |x: &[f64], out: &mut [f64]| {
            out[0] = x[0] * x[0] - 4.0;
            out[1] = x[0] * x[1] - 2.0;
        };
        let settings = SolverSettings::default();
        let sol = solve_system(f, &[1.0, 1.0], &settings).unwrap();
        assert_abs_diff_eq!(sol.x[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.x[1], 1.0, epsilon = 1e-9);

        let mut r = [0.0; 2];
        f(&sol.x, &mut r);
        assert!(max_norm(&r) <= settings.residual_tol);
    }

    #[test]
    fn iterates_stay_positive() {
        // Undamped Newton from x0 = 0.1 on 1/x - 0.2 jumps negative.
        let sol = solve_system(
            |x, out| out[0] = 1.0 / x[0] - 0.2,
            &[0.1],
            &SolverSettings::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(sol.x[0], 5.0, epsilon = 1e-6);
    }

    #[test]
    fn max_iter_reports_final_residual() {
        let settings = SolverSettings {
            max_iter: 1,
            ..SolverSettings::default()
        };
        let err =
            solve_system(|x, out| out[0] = x[0].powi(5) - 1e5, &[1.0], &settings).unwrap_err();
        match err {
            NumericsError::MaxIterations {
                iterations,
                residual,
            } => {
                assert_eq!(iterations, 1);
                assert!(residual > 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn root_outside_orthant_is_reported() {
        // Only root is at x = -1; every improving step leaves the orthant.
        let err = solve_system(
            |x, out| out[0] = x[0] + 1.0,
            &[0.5],
            &SolverSettings::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            NumericsError::LeftPositiveOrthant { .. } | NumericsError::LineSearchStalled { .. }
        ));
    }

    #[test]
    fn rejects_non_positive_start() {
        assert!(matches!(
            solve_system(
                |x, out| out[0] = x[0] - 1.0,
                &[0.0],
                &SolverSettings::default()
            ),
            Err(NumericsError::InvalidArgument(_))
        ));
    }
}
