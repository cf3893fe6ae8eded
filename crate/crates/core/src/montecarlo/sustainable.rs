//! Sustainable-threshold extraction: fit the ansatz
//! `p_th(N) = p_sus * (1 - (1 - p_th(1)/p_sus) * N^(-gamma))`
//! to measured thresholds over the cycle count.

use super::lm::{self, LeastSquares};
use crate::error::FitError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub n_cyc: f64,
    pub p_th: f64,
    /// One-sigma uncertainty; used as the fit weight.
    pub p_th_err: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SustainableFit {
    pub p_sus: f64,
    pub p_sus_err: f64,
    pub gamma: f64,
    pub gamma_err: f64,
    pub p_th1: f64,
    pub p_th1_fixed: bool,
    pub residual_norm: f64,
}

impl SustainableFit {
    /// Evaluate the fitted ansatz at a cycle count.
    pub fn predict(&self, n_cyc: f64) -> f64 {
        ansatz(self.p_sus, self.gamma, self.p_th1, n_cyc)
    }
}

pub fn ansatz(p_sus: f64, gamma: f64, p_th1: f64, n: f64) -> f64 {
    p_sus * (1.0 - (1.0 - p_th1 / p_sus) * n.powf(-gamma))
}

struct AnsatzFit<'a> {
    pts: &'a [ThresholdPoint],
    /// Fixed value of p_th(1), or None to co-fit it as a third parameter.
    p_th1: Option<f64>,
}

impl AnsatzFit<'_> {
    fn unpack(&self, theta: &[f64]) -> (f64, f64, f64) {
        match self.p_th1 {
            Some(p1) => (theta[0], theta[1], p1),
            None => (theta[0], theta[1], theta[2]),
        }
    }
}

impl LeastSquares for AnsatzFit<'_> {
    fn nparams(&self) -> usize {
        if self.p_th1.is_some() {
            2
        } else {
            3
        }
    }
    fn npoints(&self) -> usize {
        self.pts.len()
    }
    fn residuals(&self, theta: &[f64], out: &mut [f64]) {
        let (p_sus, gamma, p1) = self.unpack(theta);
        for (i, pt) in self.pts.iter().enumerate() {
            out[i] = (ansatz(p_sus, gamma, p1, pt.n_cyc) - pt.p_th) / pt.p_th_err;
        }
    }
    fn jacobian(&self, theta: &[f64], out: &mut [Vec<f64>]) {
        let (p_sus, gamma, p1) = self.unpack(theta);
        for (i, pt) in self.pts.iter().enumerate() {
            let n = pt.n_cyc;
            let ng = n.powf(-gamma);
            let w = 1.0 / pt.p_th_err;
            // f = p_sus - (p_sus - p1) * n^-gamma
            let df_dpsus = 1.0 - ng;
            let df_dgamma = (p_sus - p1) * ng * n.ln();
            out[i][0] = w * df_dpsus;
            out[i][1] = w * df_dgamma;
            if self.p_th1.is_none() {
                out[i][2] = w * ng;
            }
        }
    }
}

/// Fit the sustainable threshold. `fixed_p_th1` pins p_th(1) to the measured
/// value (the point with the smallest cycle count, which must be 1).
pub fn fit_sustainable(
    points: &[ThresholdPoint],
    fix_p_th1: bool,
) -> Result<SustainableFit, FitError> {
    if points.len() < 3 {
        return Err(FitError::Degenerate(format!(
            "need at least 3 threshold points, got {}",
            points.len()
        )));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.n_cyc.partial_cmp(&b.n_cyc).unwrap());
    if (sorted[0].n_cyc - 1.0).abs() > 1e-9 {
        return Err(FitError::Degenerate(
            "the dataset must include the single-cycle threshold".into(),
        ));
    }
    let p1 = sorted[0].p_th;
    let fixed = fix_p_th1.then_some(p1);
    let fit_points: Vec<ThresholdPoint> = if fix_p_th1 {
        sorted[1..].to_vec()
    } else {
        sorted.clone()
    };
    if fit_points.len() < 2 {
        return Err(FitError::Degenerate("too few points after pinning".into()));
    }
    let model = AnsatzFit {
        pts: &fit_points,
        p_th1: fixed,
    };
    let p_sus0 = sorted.last().unwrap().p_th * 0.9;
    let theta0: Vec<f64> = if fix_p_th1 {
        vec![p_sus0, 0.8]
    } else {
        vec![p_sus0, 0.8, p1]
    };
    let result = lm::fit(&model, &theta0)?;
    let (p_sus, gamma, p_th1) = model.unpack(&result.theta);

    // parametric bootstrap over the stated point errors
    let mut rng = ChaCha8Rng::seed_from_u64(0x5005_9e37);
    let mut boot: Vec<(f64, f64)> = Vec::new();
    for _ in 0..200 {
        let resampled: Vec<ThresholdPoint> = fit_points
            .iter()
            .map(|pt| {
                let u1: f64 = rng.gen::<f64>().max(1e-12);
                let u2: f64 = rng.gen();
                let noise = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
                ThresholdPoint {
                    n_cyc: pt.n_cyc,
                    p_th: pt.p_th + noise * pt.p_th_err,
                    p_th_err: pt.p_th_err,
                }
            })
            .collect();
        let bm = AnsatzFit {
            pts: &resampled,
            p_th1: fixed,
        };
        if let Ok(r) = lm::fit(&bm, &result.theta) {
            let (ps, g, _) = bm.unpack(&r.theta);
            boot.push((ps, g));
        }
    }
    let sd = |xs: Vec<f64>| -> f64 {
        if xs.len() < 8 {
            return f64::NAN;
        }
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
    };
    let p_sus_err = sd(boot.iter().map(|b| b.0).collect());
    let gamma_err = sd(boot.iter().map(|b| b.1).collect());

    Ok(SustainableFit {
        p_sus,
        p_sus_err,
        gamma,
        gamma_err,
        p_th1,
        p_th1_fixed: fix_p_th1,
        residual_norm: result.chi2.sqrt(),
    })
}
