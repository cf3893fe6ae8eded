//! The decoding loop with termination control, plus success/failure
//! classification by homology.

use crate::bits::DenseBits;
use crate::complex::{Chain, Syndrome};
use crate::lattices::Lattice;
use crate::sweep::Ruleset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecoderError {
    #[error("residual has a nonzero syndrome; classification undefined")]
    NonzeroSyndrome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "classes")]
pub enum DecodeStatus {
    Corrected,
    LogicalFailure(Vec<bool>),
    Timeout,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Accumulated correction (sum of all per-step flips).
    pub correction: Vec<u32>,
    /// Exit value of the step counter.
    pub steps_used: u32,
    pub residual_syndrome_weight: usize,
    /// Set when the input wall is not the boundary of any error chain.
    pub invalid_syndrome: bool,
}

/// Step budget: four times the removal bound of a maximal local cluster,
/// proportional to the linear size.
pub fn default_t_max(lat: &Lattice) -> u32 {
    let c = &lat.constants;
    (4.0 * c.c_diameter * c.c_path * lat.spec.size as f64).ceil() as u32
}

/// Exact membership test for the image of the boundary operator: the wall
/// must be a cycle and have even overlap with every transverse parity mask.
pub fn syndrome_is_valid(lat: &Lattice, sigma: &Syndrome) -> bool {
    if sigma.dim() >= 1 {
        let b = lat.complex.boundary(sigma).unwrap();
        if !b.is_empty() {
            return false;
        }
    }
    lat.syndrome_masks.iter().all(|m| !m.overlap_parity(sigma))
}

/// Iterate the configured rule from `sigma`, accumulating the correction;
/// stops when the wall is removed or the step budget is exhausted.
pub fn decode(lat: &Lattice, ruleset: &Ruleset<'_>, sigma: &Syndrome, t_max: u32) -> DecodeOutcome {
    let invalid = !syndrome_is_valid(lat, sigma);
    let mut wall = sigma.to_dense_bits();
    let k = lat.k();
    let mut rho_acc = DenseBits::zeros(lat.complex.ncells(k) as usize);
    let mut rho = DenseBits::zeros(lat.complex.ncells(k) as usize);
    let mut t = 1u32;
    loop {
        if t > t_max || wall.is_empty() {
            break;
        }
        ruleset.step_dense(&mut wall, &mut rho, (t - 1) as usize);
        rho_acc.xor_assign(&rho);
        t += 1;
    }
    let status = if wall.is_empty() {
        DecodeStatus::Corrected
    } else {
        DecodeStatus::Timeout
    };
    DecodeOutcome {
        status,
        correction: rho_acc.iter_ones().collect(),
        steps_used: t,
        residual_syndrome_weight: wall.count_ones(),
        invalid_syndrome: invalid,
    }
}

/// Homology class vector of the residual `epsilon + rho`: one parity per
/// logical representative mask. All-zero means the residual is a product of
/// stabilizers.
pub fn classify(lat: &Lattice, epsilon: &Chain, rho: &Chain) -> Result<Vec<bool>, DecoderError> {
    let residual = epsilon.xor(rho);
    if !lat.complex.boundary(&residual).unwrap().is_empty() {
        return Err(DecoderError::NonzeroSyndrome);
    }
    Ok(lat.masks.iter().map(|m| m.overlap_parity(&residual)).collect())
}

/// Decode the syndrome of a known error and classify the outcome.
pub fn decode_with_error(
    lat: &Lattice,
    ruleset: &Ruleset<'_>,
    epsilon: &Chain,
    t_max: u32,
) -> DecodeOutcome {
    let sigma = lat.complex.boundary(epsilon).unwrap();
    let mut outcome = decode(lat, ruleset, &sigma, t_max);
    if outcome.status == DecodeStatus::Corrected {
        let rho = Chain::from_cells(&lat.complex, lat.k(), outcome.correction.iter().copied())
            .unwrap();
        let classes = classify(lat, epsilon, &rho).expect("corrected decode leaves a cycle");
        if classes.iter().any(|&c| c) {
            outcome.status = DecodeStatus::LogicalFailure(classes);
        }
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Chain;
    use crate::lattices::{self, LatticeFamily, LatticeSpec};
    use crate::sweep::{Rule, SweepConfig};

    fn bcc(l: u32) -> lattices::Lattice {
        lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap()
    }

    #[test]
    fn empty_syndrome_decodes_immediately() {
        let lat = bcc(2);
        let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
        let sigma = Chain::empty(&lat.complex, 1);
        let out = decode(&lat, &rs, &sigma, 10);
        assert_eq!(out.status, DecodeStatus::Corrected);
        assert!(out.correction.is_empty());
        assert_eq!(out.steps_used, 1);
        assert!(!out.invalid_syndrome);
    }

    #[test]
    fn correction_reproduces_the_syndrome() {
        let lat = bcc(4);
        let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
        let eps = Chain::from_cells(&lat.complex, 2, [10u32, 700, 701]).unwrap();
        let sigma = lat.complex.boundary(&eps).unwrap();
        let out = decode(&lat, &rs, &sigma, default_t_max(&lat));
        assert_eq!(out.status, DecodeStatus::Corrected);
        let rho = Chain::from_cells(&lat.complex, 2, out.correction).unwrap();
        assert_eq!(lat.complex.boundary(&rho).unwrap(), sigma);
    }

    #[test]
    fn decode_is_deterministic() {
        let lat = bcc(4);
        let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
        let eps = Chain::from_cells(&lat.complex, 2, [3u32, 500, 1200]).unwrap();
        let sigma = lat.complex.boundary(&eps).unwrap();
        let a = decode(&lat, &rs, &sigma, 64);
        let b = decode(&lat, &rs, &sigma, 64);
        assert_eq!(a.correction, b.correction);
        assert_eq!(a.steps_used, b.steps_used);
    }

    #[test]
    fn classify_examples() {
        let lat = bcc(3);
        // residual equal to a stabilizer boundary is trivial
        let cell = Chain::from_cells(&lat.complex, 3, [7u32]).unwrap();
        let stab = lat.complex.boundary(&cell).unwrap();
        let empty = Chain::empty(&lat.complex, 2);
        let classes = classify(&lat, &stab, &empty).unwrap();
        assert!(classes.iter().all(|&c| !c));
        // residual equal to a representative surface flips exactly its class
        for (j, s) in lat.surfaces.iter().enumerate() {
            let classes = classify(&lat, s, &empty).unwrap();
            for (i, &c) in classes.iter().enumerate() {
                assert_eq!(c, i == j);
            }
        }
        // identical error and correction leave the trivial class
        let eps = Chain::from_cells(&lat.complex, 2, [11u32, 12]).unwrap();
        assert!(classify(&lat, &eps, &eps).unwrap().iter().all(|&c| !c));
        // a residual with boundary is rejected
        let bad = Chain::from_cells(&lat.complex, 2, [11u32]).unwrap();
        assert!(classify(&lat, &bad, &empty).is_err());
    }

    #[test]
    fn invalid_syndrome_is_flagged() {
        let lat = bcc(3);
        let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
        let sigma = Chain::from_cells(&lat.complex, 1, [0u32]).unwrap();
        let out = decode(&lat, &rs, &sigma, 16);
        assert!(out.invalid_syndrome);
    }
}
