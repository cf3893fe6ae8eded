//! Closed-form lower bound on the decoder threshold.

use crate::lattices::LatticeConstants;

/// `p*_th = (((2Q)^d * c_B)^2 * max_star_k)^(-1)`.
pub fn pth_lower_bound(constants: &LatticeConstants, q: u32) -> f64 {
    let two_q_d = (2 * q as i128).pow(constants.d as u32) as f64;
    let lambda = two_q_d * constants.c_ball;
    1.0 / (lambda * lambda * constants.max_star_k as f64)
}

/// The default chunk scale from the locally-Euclidean constants.
pub fn default_q(constants: &LatticeConstants) -> u32 {
    constants.chunk_scale()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::LatticeConstants;

    fn bcc_constants() -> LatticeConstants {
        LatticeConstants {
            d: 3,
            c_ball: 24.0,
            c_diameter: 2.0,
            c_path: 3.0,
            max_star_k: 36,
        }
    }

    #[test]
    fn bcc_bound_matches_the_closed_form() {
        let c = bcc_constants();
        assert_eq!(default_q(&c), 36);
        let p = pth_lower_bound(&c, 36);
        // ((72^3 * 24)^2 * 36)^-1
        let expected = 1.0 / ((72.0f64.powi(3) * 24.0).powi(2) * 36.0);
        assert!((p - expected).abs() / expected < 1e-12);
        assert!((p - 3.4616e-16).abs() / 3.4616e-16 < 1e-3);
        // an order of magnitude consistent with ~1e-15
        assert!(p > 1e-16 && p < 1e-14);
    }

    #[test]
    fn bound_is_monotone_in_each_argument() {
        let c = bcc_constants();
        let base = pth_lower_bound(&c, 36);
        // quadrupling c_B shrinks the bound by 16
        let mut c2 = c;
        c2.c_ball *= 4.0;
        let shrunk = pth_lower_bound(&c2, 36);
        assert!((base / shrunk - 16.0).abs() < 1e-9);
        // doubling Q shrinks it by 2^(2d) = 64
        let qd = pth_lower_bound(&c, 72);
        assert!((base / qd - 64.0).abs() < 1e-9);
        // more k-cells per vertex can only hurt
        let mut c3 = c;
        c3.max_star_k = 72;
        assert!(pth_lower_bound(&c3, 36) < base);
    }
}
