//! Phenomenological noise model and the multi-cycle memory experiment.
//!
//! Each noisy cycle adds independent phase flips on qubits, measures the
//! syndrome with independently flipped bits, and applies the rule to the
//! observed wall; the flips are physically applied to the true error. After
//! the last cycle the exact syndrome is extracted and decoded to
//! termination. The rule only ever reads the observed wall; the true error
//! feeds nothing but the final classification.

use crate::bits::DenseBits;
use crate::complex::{Chain, Syndrome};
use crate::decoder::{self, DecodeStatus};
use crate::lattices::Lattice;
use crate::sweep::Ruleset;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Probability per qubit per cycle of a phase flip.
    pub p_data: f64,
    /// Probability per syndrome bit per cycle of a measurement flip.
    pub p_meas: f64,
    pub n_cyc: u32,
    /// Rule applications per noisy cycle.
    pub sweeps_per_cycle: u32,
}

impl NoiseParams {
    /// The standard model: measurement bits flip at the data rate.
    pub fn uniform(p: f64, n_cyc: u32) -> Self {
        NoiseParams {
            p_data: p,
            p_meas: p,
            n_cyc,
            sweeps_per_cycle: 1,
        }
    }

    /// Perfect syndrome extraction at the data rate.
    pub fn perfect_measurement(p: f64, n_cyc: u32) -> Self {
        NoiseParams {
            p_data: p,
            p_meas: 0.0,
            n_cyc,
            sweeps_per_cycle: 1,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, p) in [("p_data", self.p_data), ("p_meas", self.p_meas)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{name} = {p} outside [0, 1]"));
            }
        }
        if self.sweeps_per_cycle == 0 {
            return Err("sweeps_per_cycle must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "classes")]
pub enum TrialOutcome {
    Success,
    LogicalFailure(Vec<bool>),
    Timeout,
}

impl TrialOutcome {
    pub fn is_failure(&self) -> bool {
        !matches!(self, TrialOutcome::Success)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub outcome: TrialOutcome,
    pub cycles_run: u32,
    pub final_residual_weight: usize,
    pub decode_steps: u32,
}

/// Sample each cell of dimension `dim` independently with probability `p`,
/// using geometric skips.
fn sample_bits<R: Rng>(n: usize, p: f64, rng: &mut R) -> DenseBits {
    let mut bits = DenseBits::zeros(n);
    if p <= 0.0 {
        return bits;
    }
    if p >= 1.0 {
        for i in 0..n {
            bits.set(i as u32, true);
        }
        return bits;
    }
    let log_q = (1.0 - p).ln();
    let mut i = 0usize;
    loop {
        let u: f64 = rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor() as usize;
        i += skip;
        if i >= n {
            break;
        }
        bits.set(i as u32, true);
        i += 1;
    }
    bits
}

/// Independent phase flips on the k-cells.
pub fn sample_error<R: Rng>(lat: &Lattice, p: f64, rng: &mut R) -> Chain {
    let bits = sample_bits(lat.complex.ncells(lat.k()) as usize, p, rng);
    Chain::from_dense(&lat.complex, lat.k(), bits)
}

/// Independent measurement flips on the (k-1)-cells.
pub fn sample_meas_noise<R: Rng>(lat: &Lattice, p: f64, rng: &mut R) -> Syndrome {
    let bits = sample_bits(lat.complex.ncells(lat.k() - 1) as usize, p, rng);
    Chain::from_dense(&lat.complex, lat.k() - 1, bits)
}

/// Stateful multi-cycle memory experiment with injectable noise, so tests
/// can drive cycles with hand-built flip patterns.
pub struct TrialEngine<'a, 'l> {
    pub lattice: &'l Lattice,
    pub ruleset: &'a Ruleset<'l>,
    epsilon: DenseBits,
    sigma_true: DenseBits,
    step_counter: usize,
    cycles: u32,
}

impl<'a, 'l> TrialEngine<'a, 'l> {
    pub fn new(lattice: &'l Lattice, ruleset: &'a Ruleset<'l>) -> Self {
        let k = lattice.k();
        TrialEngine {
            lattice,
            ruleset,
            epsilon: DenseBits::zeros(lattice.complex.ncells(k) as usize),
            sigma_true: DenseBits::zeros(lattice.complex.ncells(k - 1) as usize),
            step_counter: 0,
            cycles: 0,
        }
    }

    fn bump_true_syndrome(&mut self, cells: &DenseBits) {
        let lat = self.lattice;
        let k = lat.k();
        for c in cells.iter_ones() {
            for &e in lat.complex.cell_boundary(k, c) {
                self.sigma_true.flip(e);
            }
        }
    }

    /// One noisy cycle with the given data and measurement flip patterns.
    pub fn noisy_cycle(&mut self, data_flips: &DenseBits, meas_flips: &DenseBits, sweeps: u32) {
        self.epsilon.xor_assign(data_flips);
        self.bump_true_syndrome(data_flips);
        // observed wall: true syndrome plus measurement noise, fixed for the
        // duration of the cycle
        let mut observed = self.sigma_true.clone();
        observed.xor_assign(meas_flips);
        let k = self.lattice.k();
        let mut rho = DenseBits::zeros(self.lattice.complex.ncells(k) as usize);
        for _ in 0..sweeps {
            self.ruleset
                .step_dense(&mut observed, &mut rho, self.step_counter);
            self.step_counter += 1;
            // flips are physically applied
            self.epsilon.xor_assign(&rho);
            self.bump_true_syndrome(&rho);
        }
        self.cycles += 1;
    }

    pub fn true_error(&self) -> Chain {
        Chain::from_dense(&self.lattice.complex, self.lattice.k(), self.epsilon.clone())
    }

    /// Perfect syndrome extraction and full decoding, then classification
    /// against the accumulated error.
    pub fn finish(self, t_max: u32, seed: u64) -> TrialRecord {
        let lat = self.lattice;
        let sigma = Chain::from_dense(&lat.complex, lat.k() - 1, self.sigma_true.clone());
        let out = decoder::decode(lat, self.ruleset, &sigma, t_max);
        let (outcome, residual_weight) = match out.status {
            DecodeStatus::Timeout => (TrialOutcome::Timeout, out.residual_syndrome_weight),
            _ => {
                let rho =
                    Chain::from_cells(&lat.complex, lat.k(), out.correction.iter().copied())
                        .unwrap();
                let eps = self.true_error();
                let classes = decoder::classify(lat, &eps, &rho)
                    .expect("corrected decode leaves a cycle");
                let residual = eps.xor(&rho).weight();
                if classes.iter().any(|&c| c) {
                    (TrialOutcome::LogicalFailure(classes), residual)
                } else {
                    (TrialOutcome::Success, residual)
                }
            }
        };
        TrialRecord {
            seed,
            outcome,
            cycles_run: self.cycles,
            final_residual_weight: residual_weight,
            decode_steps: out.steps_used,
        }
    }
}

/// Run one memory trial with sampled noise.
pub fn run_memory_trial<R: Rng>(
    lat: &Lattice,
    ruleset: &Ruleset<'_>,
    noise: &NoiseParams,
    t_max: u32,
    seed: u64,
    rng: &mut R,
) -> TrialRecord {
    let k = lat.k();
    let nq = lat.complex.ncells(k) as usize;
    let ns = lat.complex.ncells(k - 1) as usize;
    let mut engine = TrialEngine::new(lat, ruleset);
    for _ in 0..noise.n_cyc {
        let data = sample_bits(nq, noise.p_data, rng);
        let meas = sample_bits(ns, noise.p_meas, rng);
        engine.noisy_cycle(&data, &meas, noise.sweeps_per_cycle);
    }
    engine.finish(t_max, seed)
}

#[cfg(test)]
mod tests;
