use super::*;
use crate::error::FitError;
use crate::lattices::{self, LatticeFamily, LatticeSpec};
use crate::sweep::{Rule, Ruleset, SweepConfig};

fn small_plan(p_grid: Vec<f64>, trials: u64) -> CurvePlan {
    CurvePlan {
        p_grid,
        n_cyc: 2,
        trials,
        meas: MeasNoise::Equal,
        sweeps_per_cycle: 1,
        master_seed: 99,
        confidence: 0.95,
    }
}

#[test]
fn zero_rate_point_never_fails() {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, 2)).unwrap();
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let curve = estimate_curve(&lat, &rs, &small_plan(vec![0.0, 0.05], 40)).unwrap();
    assert_eq!(curve.points[0].failures, 0);
}

#[test]
fn identical_seeds_give_bit_identical_curves() {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, 2)).unwrap();
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let plan = small_plan(vec![0.02, 0.05], 60);
    let a = estimate_curve(&lat, &rs, &plan).unwrap();
    let b = estimate_curve(&lat, &rs, &plan).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn plans_are_validated_before_any_work() {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, 2)).unwrap();
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    assert!(estimate_curve(&lat, &rs, &small_plan(vec![0.02], 0)).is_err());
    assert!(estimate_curve(&lat, &rs, &small_plan(vec![0.05, 0.02], 10)).is_err());
    assert!(estimate_curve(&lat, &rs, &small_plan(vec![], 10)).is_err());
}

fn synthetic_curves(p_th: f64, nu: f64, coeffs: [f64; 3]) -> Vec<FailureCurve> {
    let trials: u64 = 1_000_000_000;
    let sizes = [8u32, 12, 16];
    let grid: Vec<f64> = (0..9).map(|i| p_th - 0.004 + 0.001 * i as f64).collect();
    sizes
        .iter()
        .map(|&l| FailureCurve {
            lattice: "synthetic".into(),
            l,
            n_cyc: 1,
            points: grid
                .iter()
                .map(|&p| {
                    let x = (p - p_th) * (l as f64).powf(1.0 / nu);
                    let y = (coeffs[0] + coeffs[1] * x + coeffs[2] * x * x).clamp(0.0, 1.0);
                    let failures = (y * trials as f64).round() as u64;
                    CurvePoint {
                        p,
                        trials,
                        failures,
                        wilson_low: y,
                        wilson_high: y,
                        seed: 0,
                    }
                })
                .collect(),
        })
        .collect()
}

#[test]
fn exact_scaling_data_recovers_the_crossing_point() {
    let curves = synthetic_curves(0.02, 1.0, [0.4, 6.0, 40.0]);
    let est = find_threshold(&curves, None).unwrap();
    assert!(
        (est.p_th - 0.02).abs() < 1e-6,
        "p_th = {} (expected 0.02)",
        est.p_th
    );
    assert!((est.nu - 1.0).abs() < 1e-3, "nu = {}", est.nu);
    assert!(est.residual_norm < 1e-3);
}

#[test]
fn duplicated_sizes_are_rejected() {
    let mut curves = synthetic_curves(0.02, 1.0, [0.4, 6.0, 40.0]);
    for c in curves.iter_mut() {
        c.l = 8;
    }
    assert!(matches!(
        find_threshold(&curves, None),
        Err(FitError::NoCrossing(_))
    ));
}

#[test]
fn curves_without_a_crossing_are_rejected() {
    // strictly ordered curves: failure grows with size everywhere
    let sizes = [8u32, 16];
    let curves: Vec<FailureCurve> = sizes
        .iter()
        .map(|&l| FailureCurve {
            lattice: "synthetic".into(),
            l,
            n_cyc: 1,
            points: (0..6)
                .map(|i| {
                    let p = 0.01 + 0.002 * i as f64;
                    let y = (l as f64) * p;
                    CurvePoint {
                        p,
                        trials: 1_000_000,
                        failures: (y * 1e6) as u64,
                        wilson_low: y,
                        wilson_high: y,
                        seed: 0,
                    }
                })
                .collect(),
        })
        .collect();
    assert!(matches!(
        find_threshold(&curves, None),
        Err(FitError::NoCrossing(_))
    ));
}

#[test]
fn exact_ansatz_points_are_recovered_to_high_precision() {
    let (p_sus, gamma, p_th1) = (0.0099, 0.855, 0.0785);
    let points: Vec<ThresholdPoint> = (0..8)
        .map(|i| {
            let n = (1u64 << i) as f64;
            ThresholdPoint {
                n_cyc: n,
                p_th: sustainable::ansatz(p_sus, gamma, p_th1, n),
                p_th_err: 1e-5,
            }
        })
        .collect();
    let fit = fit_sustainable(&points, true).unwrap();
    assert!((fit.p_sus - p_sus).abs() < 1e-8, "p_sus = {}", fit.p_sus);
    assert!((fit.gamma - gamma).abs() < 1e-8, "gamma = {}", fit.gamma);
    assert_eq!(fit.p_th1, p_th1);
    // co-fitting the single-cycle threshold recovers it too
    let fit3 = fit_sustainable(&points, false).unwrap();
    assert!((fit3.p_th1 - p_th1).abs() < 1e-7);
    assert!((fit3.p_sus - p_sus).abs() < 1e-7);
}

#[test]
fn fitted_ansatz_is_decreasing_and_bounded_below_by_p_sus() {
    let (p_sus, gamma, p_th1) = (0.0099, 0.855, 0.0785);
    let points: Vec<ThresholdPoint> = (0..8)
        .map(|i| {
            let n = (1u64 << i) as f64;
            ThresholdPoint {
                n_cyc: n,
                p_th: sustainable::ansatz(p_sus, gamma, p_th1, n),
                p_th_err: 1e-4,
            }
        })
        .collect();
    let fit = fit_sustainable(&points, true).unwrap();
    let mut prev = f64::INFINITY;
    for i in 0..12 {
        let n = (1u64 << i) as f64;
        let v = fit.predict(n);
        assert!(v < prev, "ansatz not decreasing at N = {n}");
        assert!(v > fit.p_sus, "ansatz dips below p_sus at N = {n}");
        prev = v;
    }
}

#[test]
fn too_few_points_is_degenerate() {
    let points = vec![
        ThresholdPoint { n_cyc: 1.0, p_th: 0.08, p_th_err: 1e-3 },
        ThresholdPoint { n_cyc: 2.0, p_th: 0.05, p_th_err: 1e-3 },
    ];
    assert!(matches!(
        fit_sustainable(&points, true),
        Err(FitError::Degenerate(_))
    ));
}
