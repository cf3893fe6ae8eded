//! Deterministic seed derivation for parallel trials.
//!
//! The master seed is absorbed together with the index path (point index,
//! size index, trial index, ...) through iterated splitmix64 rounds. Trials
//! seeded this way are independent of execution order and of the number of
//! worker threads, making reruns byte-identical.

pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mix a master seed with an index path.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &x in path {
        state = splitmix64(state ^ x.wrapping_mul(0xff51afd7ed558ccd));
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_injective_enough() {
        let a = derive_seed(42, &[0, 1, 2]);
        assert_eq!(a, derive_seed(42, &[0, 1, 2]));
        assert_ne!(a, derive_seed(42, &[0, 2, 1]));
        assert_ne!(a, derive_seed(43, &[0, 1, 2]));
        // frozen value guards accidental scheme changes
        assert_eq!(derive_seed(0, &[]), splitmix64(0));
    }
}
