use super::*;
use crate::decoder;
use crate::lattices::{self, LatticeFamily, LatticeSpec};
use crate::sweep::{Rule, Ruleset, SweepConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bcc(l: u32) -> lattices::Lattice {
    lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap()
}

#[test]
fn degenerate_rates_sample_nothing_or_everything() {
    let lat = bcc(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(sample_error(&lat, 0.0, &mut rng).is_empty());
    assert_eq!(
        sample_error(&lat, 1.0, &mut rng).weight(),
        lat.complex.ncells(2) as usize
    );
    assert!(sample_meas_noise(&lat, 0.0, &mut rng).is_empty());
    assert_eq!(
        sample_meas_noise(&lat, 1.0, &mut rng).weight(),
        lat.complex.ncells(1) as usize
    );
}

#[test]
fn sample_density_within_three_sigma_of_binomial() {
    let lat = bcc(4);
    let cells = lat.complex.ncells(2) as u64; // 1536 per draw
    let p = 0.01;
    let mut rng = ChaCha8Rng::seed_from_u64(0xbead);
    let reps = 660; // just over one million cells total
    let mut ones = 0u64;
    for _ in 0..reps {
        ones += sample_error(&lat, p, &mut rng).weight() as u64;
    }
    let n = (cells * reps) as f64;
    let mean = n * p;
    let sd = (n * p * (1.0 - p)).sqrt();
    assert!(
        (ones as f64 - mean).abs() < 3.0 * sd,
        "{ones} ones vs mean {mean:.1} (sd {sd:.1})"
    );
}

#[test]
fn zero_noise_always_succeeds() {
    let lat = bcc(3);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let noise = NoiseParams::uniform(0.0, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rec = run_memory_trial(&lat, &rs, &noise, 32, 2, &mut rng);
    assert_eq!(rec.outcome, TrialOutcome::Success);
    assert_eq!(rec.final_residual_weight, 0);
    assert_eq!(rec.cycles_run, 8);
}

#[test]
fn single_cycle_with_perfect_measurement_reduces_to_plain_decoding() {
    let lat = bcc(4);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let t_max = decoder::default_t_max(&lat);
    for seed in 0..20u64 {
        let noise = NoiseParams::perfect_measurement(0.03, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rec = run_memory_trial(&lat, &rs, &noise, t_max, seed, &mut rng);
        // replay the same sample and decode its exact syndrome directly
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
        let eps = sample_error(&lat, 0.03, &mut rng2);
        let out = decoder::decode_with_error(&lat, &rs, &eps, t_max);
        let expected = match out.status {
            decoder::DecodeStatus::Corrected => TrialOutcome::Success,
            decoder::DecodeStatus::LogicalFailure(c) => TrialOutcome::LogicalFailure(c),
            decoder::DecodeStatus::Timeout => TrialOutcome::Timeout,
        };
        assert_eq!(rec.outcome, expected, "seed {seed}");
    }
}

#[test]
fn engine_with_noise_only_in_the_first_cycle_matches_direct_iteration() {
    let lat = bcc(4);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let nq = lat.complex.ncells(2) as usize;
    let ns = lat.complex.ncells(1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let data = {
        let mut bits = crate::bits::DenseBits::zeros(nq);
        for c in sample_error(&lat, 0.02, &mut rng).iter() {
            bits.set(c, true);
        }
        bits
    };
    let zero_q = crate::bits::DenseBits::zeros(nq);
    let zero_s = crate::bits::DenseBits::zeros(ns);
    let extra_cycles = 5;
    let mut engine = TrialEngine::new(&lat, &rs);
    engine.noisy_cycle(&data, &zero_s, 1);
    for _ in 0..extra_cycles {
        engine.noisy_cycle(&zero_q, &zero_s, 1);
    }
    // direct noiseless iteration of the same rule
    let mut eps = data.clone();
    let mut sigma = crate::bits::DenseBits::zeros(ns);
    for c in data.iter_ones() {
        for &e in lat.complex.cell_boundary(2, c) {
            sigma.flip(e);
        }
    }
    let mut rho = crate::bits::DenseBits::zeros(nq);
    for step in 0..(1 + extra_cycles) {
        rs.step_dense(&mut sigma, &mut rho, step);
        eps.xor_assign(&rho);
    }
    assert_eq!(engine.true_error().support(), {
        let mut v: Vec<u32> = eps.iter_ones().collect();
        v.sort_unstable();
        v
    });
}

#[test]
fn failure_rate_is_monotone_in_p_within_confidence() {
    let lat = bcc(3);
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let t_max = decoder::default_t_max(&lat);
    let trials = 200;
    let mut rates = Vec::new();
    let mut cis = Vec::new();
    for (i, p) in [0.01, 0.05, 0.12].into_iter().enumerate() {
        let noise = NoiseParams::uniform(p, 4);
        let mut fails = 0;
        for t in 0..trials {
            let seed = (i * 10_000 + t) as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if run_memory_trial(&lat, &rs, &noise, t_max, seed, &mut rng)
                .outcome
                .is_failure()
            {
                fails += 1;
            }
        }
        let rate = fails as f64 / trials as f64;
        let half = 2.0 * (rate.max(0.01) * (1.0 - rate.max(0.01)) / trials as f64).sqrt();
        rates.push(rate);
        cis.push(half);
    }
    for i in 0..rates.len() - 1 {
        assert!(
            rates[i] <= rates[i + 1] + cis[i] + cis[i + 1],
            "rates {rates:?}"
        );
    }
}

#[test]
fn invalid_noise_params_are_rejected() {
    assert!(NoiseParams::uniform(1.5, 1).validate().is_err());
    assert!(NoiseParams {
        p_data: 0.1,
        p_meas: -0.1,
        n_cyc: 1,
        sweeps_per_cycle: 1
    }
    .validate()
    .is_err());
    assert!(NoiseParams {
        p_data: 0.1,
        p_meas: 0.1,
        n_cyc: 1,
        sweeps_per_cycle: 0
    }
    .validate()
    .is_err());
}
