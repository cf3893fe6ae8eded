//! Threshold extraction from the crossing point of failure curves, via the
//! quadratic finite-size-scaling form
//! `p_fail = A + B x + C x^2` with `x = (p - p_th) L^(1/nu)`.

use super::lm::{self, LeastSquares};
use super::FailureCurve;
use crate::error::FitError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub p_th: f64,
    pub p_th_err: f64,
    pub nu: f64,
    pub nu_err: f64,
    pub coeffs: [f64; 3],
    pub residual_norm: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

struct ScalingPoint {
    p: f64,
    l: f64,
    y: f64,
    sigma: f64,
}

/// Outer nonlinear problem over (p_th, nu); the linear coefficients are
/// solved exactly for each parameter value (variable projection).
struct ScalingFit<'a> {
    pts: &'a [ScalingPoint],
}

impl ScalingFit<'_> {
    fn design(&self, theta: &[f64]) -> Vec<[f64; 3]> {
        let (p_th, nu) = (theta[0], theta[1]);
        self.pts
            .iter()
            .map(|pt| {
                let x = (pt.p - p_th) * pt.l.powf(1.0 / nu);
                [1.0, x, x * x]
            })
            .collect()
    }

    fn linear_solve(&self, theta: &[f64]) -> ([f64; 3], f64) {
        let design = self.design(theta);
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for (row, pt) in design.iter().zip(self.pts) {
            let w = 1.0 / (pt.sigma * pt.sigma);
            for a in 0..3 {
                atb[a] += w * row[a] * pt.y;
                for b in 0..3 {
                    ata[a][b] += w * row[a] * row[b];
                }
            }
        }
        // 3x3 solve
        let a = ata;
        let det = |m: [[f64; 3]; 3]| -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det(a);
        let mut coeffs = [0.0f64; 3];
        if d.abs() > 1e-300 {
            for idx in 0..3 {
                let mut m = a;
                for r in 0..3 {
                    m[r][idx] = atb[r];
                }
                coeffs[idx] = det(m) / d;
            }
        }
        let mut chi2 = 0.0;
        for (row, pt) in design.iter().zip(self.pts) {
            let model = coeffs[0] + coeffs[1] * row[1] + coeffs[2] * row[2];
            let r = (model - pt.y) / pt.sigma;
            chi2 += r * r;
        }
        (coeffs, chi2)
    }
}

impl LeastSquares for ScalingFit<'_> {
    fn nparams(&self) -> usize {
        2
    }
    fn npoints(&self) -> usize {
        self.pts.len()
    }
    fn residuals(&self, theta: &[f64], out: &mut [f64]) {
        let (coeffs, _) = self.linear_solve(theta);
        let design = self.design(theta);
        for (i, (row, pt)) in design.iter().zip(self.pts).enumerate() {
            let model = coeffs[0] + coeffs[1] * row[1] + coeffs[2] * row[2];
            out[i] = (model - pt.y) / pt.sigma;
        }
    }
    fn jacobian(&self, theta: &[f64], out: &mut [Vec<f64>]) {
        // finite differences of the projected residuals; the projection makes
        // analytic derivatives unwieldy and the problem is 2-dimensional
        let mut base = vec![0.0; self.npoints()];
        self.residuals(theta, &mut base);
        for j in 0..2 {
            let h = 1e-7 * (theta[j].abs() + 1e-4);
            let mut th = theta.to_vec();
            th[j] += h;
            let mut pert = vec![0.0; self.npoints()];
            self.residuals(&th, &mut pert);
            for i in 0..self.npoints() {
                out[i][j] = (pert[i] - base[i]) / h;
            }
        }
    }
}

fn collect_points(
    curves: &[FailureCurve],
    window: (f64, f64),
) -> Vec<ScalingPoint> {
    let mut pts = Vec::new();
    for curve in curves {
        for pt in &curve.points {
            if pt.p < window.0 - 1e-12 || pt.p > window.1 + 1e-12 {
                continue;
            }
            let n = pt.trials as f64;
            let y = pt.failures as f64 / n;
            let sigma = (y * (1.0 - y) / n).sqrt().max(0.5 / n);
            pts.push(ScalingPoint {
                p: pt.p,
                l: curve.l as f64,
                y,
                sigma,
            });
        }
    }
    pts
}

/// Check that at least one pair of distinct-size curves has an empirical
/// crossing inside the shared window.
fn curves_bracket_crossing(curves: &[FailureCurve], window: (f64, f64)) -> bool {
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            if curves[i].l == curves[j].l {
                continue;
            }
            let mut prev: Option<f64> = None;
            for a in &curves[i].points {
                if a.p < window.0 || a.p > window.1 {
                    continue;
                }
                if let Some(b) = curves[j]
                    .points
                    .iter()
                    .find(|b| (b.p - a.p).abs() < 1e-12)
                {
                    let diff = a.failures as f64 / a.trials as f64
                        - b.failures as f64 / b.trials as f64;
                    if let Some(p) = prev {
                        if p == 0.0 || diff == 0.0 || p.signum() != diff.signum() {
                            return true;
                        }
                    }
                    prev = Some(diff);
                }
            }
        }
    }
    false
}

/// Fit the crossing point of failure curves at different sizes.
pub fn find_threshold(
    curves: &[FailureCurve],
    window: Option<(f64, f64)>,
) -> Result<ThresholdEstimate, FitError> {
    let mut sizes: Vec<u32> = curves.iter().map(|c| c.l).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(FitError::NoCrossing(
            "need at least two curves with distinct sizes".into(),
        ));
    }
    let lo = curves
        .iter()
        .map(|c| c.points.first().map(|p| p.p).unwrap_or(f64::INFINITY))
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = curves
        .iter()
        .map(|c| c.points.last().map(|p| p.p).unwrap_or(f64::NEG_INFINITY))
        .fold(f64::INFINITY, f64::min);
    let window = window.unwrap_or((lo, hi));
    if window.0 >= window.1 {
        return Err(FitError::NoCrossing(
            "curves share no p-window".into(),
        ));
    }
    if !curves_bracket_crossing(curves, window) {
        return Err(FitError::NoCrossing(format!(
            "no curve pair changes order inside the window [{}, {}]",
            window.0, window.1
        )));
    }
    let pts = collect_points(curves, window);
    if pts.len() < 5 {
        return Err(FitError::Degenerate(format!(
            "only {} points in the fit window",
            pts.len()
        )));
    }
    let fitter = ScalingFit { pts: &pts };
    let p0 = 0.5 * (window.0 + window.1);
    let result = lm::fit(&fitter, &[p0, 1.0])?;
    let (coeffs, chi2) = fitter.linear_solve(&result.theta);

    // parametric bootstrap over the binomial point errors
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11_bee5);
    let mut boot_pth = Vec::new();
    let mut boot_nu = Vec::new();
    for _ in 0..200 {
        let resampled: Vec<ScalingPoint> = pts
            .iter()
            .map(|pt| {
                let noise: f64 = {
                    // Box-Muller from two uniforms
                    let u1: f64 = rng.gen::<f64>().max(1e-12);
                    let u2: f64 = rng.gen();
                    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                };
                ScalingPoint {
                    p: pt.p,
                    l: pt.l,
                    y: (pt.y + noise * pt.sigma).clamp(0.0, 1.0),
                    sigma: pt.sigma,
                }
            })
            .collect();
        let bf = ScalingFit { pts: &resampled };
        if let Ok(r) = lm::fit(&bf, &result.theta) {
            boot_pth.push(r.theta[0]);
            boot_nu.push(r.theta[1]);
        }
    }
    let sd = |xs: &[f64]| -> f64 {
        if xs.len() < 8 {
            return f64::NAN;
        }
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    };

    Ok(ThresholdEstimate {
        p_th: result.theta[0],
        p_th_err: sd(&boot_pth),
        nu: result.theta[1],
        nu_err: sd(&boot_nu),
        coeffs,
        residual_norm: chi2.sqrt(),
        window,
        n_points: pts.len(),
    })
}
