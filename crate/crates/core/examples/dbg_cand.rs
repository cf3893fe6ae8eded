use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sweepdec::decoder::DecodeStatus;
use sweepdec::lattices::{self, LatticeFamily, LatticeSpec};
use sweepdec::montecarlo::{find_threshold, CurvePoint, FailureCurve};
use sweepdec::noise;
use sweepdec::sweep::{Rule, Ruleset, SweepConfig};
use rayon::prelude::*;

fn main() {
    let grid = [0.072, 0.076, 0.08, 0.084, 0.088];
    let trials = 500u64;
    for budget_mult in [3u32, 4, 6] {
        let mut curves = Vec::new();
        for l in [8u32, 12, 16] {
            let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap();
            let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
            let points: Vec<CurvePoint> = grid
                .iter()
                .map(|&p| {
                    let fails: u64 = (0..trials)
                        .into_par_iter()
                        .map(|seed| {
                            let mut rng = ChaCha8Rng::seed_from_u64(777 + seed * 13 + l as u64);
                            let eps = noise::sample_error(&lat, p, &mut rng);
                            let out = sweepdec::decoder::decode_with_error(
                                &lat,
                                &rs,
                                &eps,
                                budget_mult * l,
                            );
                            (out.status != DecodeStatus::Corrected) as u64
                        })
                        .sum();
                    CurvePoint {
                        p,
                        trials,
                        failures: fails,
                        wilson_low: 0.0,
                        wilson_high: 0.0,
                        seed: 0,
                    }
                })
                .collect();
            curves.push(FailureCurve {
                lattice: "bcc3d".into(),
                l,
                n_cyc: 1,
                points,
            });
        }
        match find_threshold(&curves, None) {
            Ok(est) => println!(
                "T_max = {budget_mult}L: p_th = {:.4} +/- {:.4} (nu {:.2})",
                est.p_th, est.p_th_err, est.nu
            ),
            Err(e) => println!("T_max = {budget_mult}L: {e}"),
        }
    }
}
