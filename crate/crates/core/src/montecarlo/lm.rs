//! Damped Gauss-Newton minimization for small weighted least-squares
//! problems with analytic Jacobians.

use crate::error::FitError;

/// A model to fit: residuals r_i(theta) and the Jacobian dr_i/dtheta_j.
pub trait LeastSquares {
    fn nparams(&self) -> usize;
    fn npoints(&self) -> usize;
    fn residuals(&self, theta: &[f64], out: &mut [f64]);
    fn jacobian(&self, theta: &[f64], out: &mut [Vec<f64>]);
}

pub struct FitResult {
    pub theta: Vec<f64>,
    pub chi2: f64,
    pub iterations: u32,
}

/// Solve a small dense symmetric system by Gaussian elimination with
/// partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

fn chi2_of(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Levenberg-style damped Gauss-Newton iteration.
pub fn fit<M: LeastSquares>(model: &M, theta0: &[f64]) -> Result<FitResult, FitError> {
    let np = model.nparams();
    let n = model.npoints();
    if n < np {
        return Err(FitError::Degenerate(format!(
            "{n} points cannot determine {np} parameters"
        )));
    }
    let mut theta = theta0.to_vec();
    let mut r = vec![0.0; n];
    let mut jac: Vec<Vec<f64>> = vec![vec![0.0; np]; n];
    model.residuals(&theta, &mut r);
    let mut chi2 = chi2_of(&r);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    for _ in 0..400 {
        iterations += 1;
        model.jacobian(&theta, &mut jac);
        // normal equations with Levenberg damping
        let mut jtj = vec![vec![0.0; np]; np];
        let mut jtr = vec![0.0; np];
        for i in 0..n {
            for a in 0..np {
                jtr[a] += jac[i][a] * r[i];
                for b in a..np {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        for a in 0..np {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }
        let mut damped = jtj.clone();
        for a in 0..np {
            damped[a][a] += lambda * jtj[a][a].max(1e-12);
        }
        let rhs: Vec<f64> = jtr.iter().map(|x| -x).collect();
        let step = match solve(damped, rhs) {
            Some(s) => s,
            None => {
                lambda *= 10.0;
                continue;
            }
        };
        let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t + s).collect();
        let mut r_new = vec![0.0; n];
        model.residuals(&trial, &mut r_new);
        let chi2_new = chi2_of(&r_new);
        if chi2_new.is_finite() && chi2_new <= chi2 {
            let rel_step: f64 = step
                .iter()
                .zip(&theta)
                .map(|(s, t)| (s / (t.abs() + 1e-12)).abs())
                .fold(0.0, f64::max);
            let improvement = chi2 - chi2_new;
            theta = trial;
            r = r_new;
            chi2 = chi2_new;
            lambda = (lambda / 10.0).max(1e-14);
            if rel_step < 1e-12 || improvement <= 1e-16 * (1.0 + chi2) {
                return Ok(FitResult {
                    theta,
                    chi2,
                    iterations,
                });
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                return Ok(FitResult {
                    theta,
                    chi2,
                    iterations,
                });
            }
        }
    }
    Err(FitError::Diverged(format!(
        "no convergence after {iterations} iterations (chi2 = {chi2:.3e})"
    )))
}
