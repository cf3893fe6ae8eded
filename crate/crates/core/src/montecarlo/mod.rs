//! Failure-rate estimation, threshold crossing-point extraction, and the
//! sustainable-threshold ansatz fit.

pub mod lm;
pub mod seeding;
pub mod sustainable;
pub mod threshold;
pub mod wilson;

pub use sustainable::{fit_sustainable, SustainableFit, ThresholdPoint};
pub use threshold::{find_threshold, ThresholdEstimate};

use crate::lattices::Lattice;
use crate::noise::{run_memory_trial, NoiseParams};
use crate::sweep::Ruleset;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// Seed of this point's trial family.
    pub seed: u64,
}

/// Failure probabilities over an error-rate grid at fixed size and cycle
/// count. The grid is strictly increasing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailureCurve {
    pub lattice: String,
    pub l: u32,
    pub n_cyc: u32,
    pub points: Vec<CurvePoint>,
}

/// How measurement noise tracks the data noise in a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasNoise {
    /// Syndrome bits flip at the data rate.
    Equal,
    /// Perfect syndrome extraction.
    Perfect,
}

impl MeasNoise {
    pub fn params(self, p: f64, n_cyc: u32, sweeps_per_cycle: u32) -> NoiseParams {
        let mut np = match self {
            MeasNoise::Equal => NoiseParams::uniform(p, n_cyc),
            MeasNoise::Perfect => NoiseParams::perfect_measurement(p, n_cyc),
        };
        np.sweeps_per_cycle = sweeps_per_cycle;
        np
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvePlan {
    pub p_grid: Vec<f64>,
    pub n_cyc: u32,
    pub trials: u64,
    pub meas: MeasNoise,
    pub sweeps_per_cycle: u32,
    pub master_seed: u64,
    /// Confidence level of the Wilson intervals.
    pub confidence: f64,
}

impl CurvePlan {
    pub fn validate(&self) -> Result<(), String> {
        if self.trials == 0 {
            return Err("trials must be >= 1".into());
        }
        if self.p_grid.is_empty() {
            return Err("error-rate grid must not be empty".into());
        }
        for w in self.p_grid.windows(2) {
            if w[1] <= w[0] {
                return Err("error-rate grid must be strictly increasing".into());
            }
        }
        for &p in &self.p_grid {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("error rate {p} outside [0, 1]"));
            }
        }
        if !(0.0..1.0).contains(&self.confidence) || self.confidence <= 0.0 {
            return Err("confidence must be in (0, 1)".into());
        }
        Ok(())
    }
}

/// Estimate one failure curve. Trials run in parallel; the per-point seeds
/// are derived from the master seed and the point/trial indices, so results
/// are independent of worker count and identical across reruns.
pub fn estimate_curve(
    lat: &Lattice,
    ruleset: &Ruleset<'_>,
    plan: &CurvePlan,
) -> Result<FailureCurve, String> {
    plan.validate()?;
    let z = wilson::z_for_confidence(plan.confidence);
    let t_max = crate::decoder::default_t_max(lat);
    let mut points = Vec::with_capacity(plan.p_grid.len());
    for (pi, &p) in plan.p_grid.iter().enumerate() {
        let point_seed = seeding::derive_seed(
            plan.master_seed,
            &[lat.spec.size as u64, plan.n_cyc as u64, pi as u64],
        );
        let noise = plan.meas.params(p, plan.n_cyc, plan.sweeps_per_cycle);
        noise.validate()?;
        let failures: u64 = (0..plan.trials)
            .into_par_iter()
            .map(|trial| {
                let seed = seeding::derive_seed(point_seed, &[trial]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let record = run_memory_trial(lat, ruleset, &noise, t_max, seed, &mut rng);
                record.outcome.is_failure() as u64
            })
            .sum();
        let (lo, hi) = wilson::wilson_interval(failures, plan.trials, z);
        points.push(CurvePoint {
            p,
            trials: plan.trials,
            failures,
            wilson_low: lo,
            wilson_high: hi,
            seed: point_seed,
        });
    }
    Ok(FailureCurve {
        lattice: lat.spec.family.to_string(),
        l: lat.spec.size,
        n_cyc: plan.n_cyc,
        points,
    })
}

#[cfg(test)]
mod tests;
