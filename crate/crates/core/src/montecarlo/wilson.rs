//! Wilson score intervals for binomial failure rates.

/// Two-sided Wilson score interval at normal quantile `z`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0);
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Normal quantile for confidence level `conf` (two-sided), via the
/// Acklam rational approximation (absolute error below 1.2e-9).
pub fn z_for_confidence(conf: f64) -> f64 {
    assert!(conf > 0.0 && conf < 1.0);
    probit(1.0 - (1.0 - conf) / 2.0)
}

fn probit(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let p_low = 0.02425;
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn interval_is_ordered_and_contains_the_point_estimate() {
        let z = z_for_confidence(0.95);
        assert!((z - 1.959964).abs() < 1e-5);
        for (f, n) in [(0u64, 100u64), (5, 100), (50, 100), (100, 100)] {
            let (lo, hi) = wilson_interval(f, n, z);
            let p = f as f64 / n as f64;
            assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn coverage_on_synthetic_bernoulli_data_meets_nominal() {
        // estimator consistency: coverage of the 95% interval over repeated
        // synthetic datasets with known failure probability
        let z = z_for_confidence(0.95);
        let q = 0.1;
        let n = 500u64;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut covered = 0;
        let reps = 2000;
        for _ in 0..reps {
            let fails = (0..n).filter(|_| rng.gen::<f64>() < q).count() as u64;
            let (lo, hi) = wilson_interval(fails, n, z);
            if lo <= q && q <= hi {
                covered += 1;
            }
        }
        let coverage = covered as f64 / reps as f64;
        assert!(coverage >= 0.93, "coverage {coverage}");
        // and the point estimate converges
        let mut total = 0u64;
        let big = 200_000u64;
        for _ in 0..big {
            if rng.gen::<f64>() < q {
                total += 1;
            }
        }
        let estimate = total as f64 / big as f64;
        assert!((estimate - q).abs() < 0.005);
    }
}
