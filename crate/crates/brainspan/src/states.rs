//! Exact firing-state combinatorics for small networks.
//!
//! In a fully interconnected network every subset of firing neurons is a
//! distinct global state, so a network of N neurons has C(N, n) states with
//! exactly n firing and 2^N states in total — the total includes the n = 0
//! all-quiet state, without which the power-of-two identity cannot hold.
//!
//! Everything here is exact integer arithmetic in u128: C(64, 32) ≈ 1.8e18
//! needs 61 bits on its own, and the multiplicative formula's intermediate
//! products run past 64 bits well before that. These exact counts are the
//! ground truth the floating-point log-domain curve is checked against.

use crate::error::{Error, Result};

/// Largest network size for which exact binomials are supported.
pub const MAX_EXACT_NEURONS: u32 = 64;

/// Largest network size for which brute-force enumeration is reasonable.
pub const MAX_ENUMERATED_NEURONS: u32 = 24;

/// Exact per-firing-count state census of an N-neuron network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateHistogram {
    pub n_neurons: u32,
    /// counts[n] = number of states with exactly n neurons firing.
    pub counts: Vec<u128>,
}

impl StateHistogram {
    /// Total number of states, all firing counts included.
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }
}

/// C(N, n): number of states with exactly `firing` of `n_neurons` neurons
/// active, by the multiplicative formula. No floating point involved.
pub fn states_with_n_firing(n_neurons: u32, firing: u32) -> Result<u128> {
    if n_neurons > MAX_EXACT_NEURONS {
        return Err(Error::Domain {
            what: "states_with_n_firing",
            detail: format!("network size {n_neurons} exceeds exact limit {MAX_EXACT_NEURONS}"),
        });
    }
    if firing > n_neurons {
        return Err(Error::Domain {
            what: "states_with_n_firing",
            detail: format!("firing count {firing} exceeds network size {n_neurons}"),
        });
    }
    // Use the shorter symmetric side so at most 32 factors are multiplied.
    let k = firing.min(n_neurons - firing) as u128;
    let n = n_neurons as u128;
    let mut result: u128 = 1;
    for i in 1..=k {
        // result * (n - k + i) is always divisible by i: the running value
        // is itself the binomial C(n - k + i, i).
        result = result * (n - k + i) / i;
    }
    Ok(result)
}

/// Sum of C(N, n) over all firing counts n = 0..=N; equals 2^N exactly.
pub fn total_states(n_neurons: u32) -> Result<u128> {
    if n_neurons > MAX_EXACT_NEURONS {
        return Err(Error::Domain {
            what: "total_states",
            detail: format!("network size {n_neurons} exceeds exact limit {MAX_EXACT_NEURONS}"),
        });
    }
    let mut sum: u128 = 0;
    for firing in 0..=n_neurons {
        sum += states_with_n_firing(n_neurons, firing)?;
    }
    Ok(sum)
}

/// Walks all 2^N firing configurations and buckets them by firing count.
/// Brute force by construction — this is the oracle the closed-form
/// binomials are verified against, so it must not share their arithmetic.
pub fn enumerate_states(n_neurons: u32) -> Result<StateHistogram> {
    if n_neurons > MAX_ENUMERATED_NEURONS {
        return Err(Error::Domain {
            what: "enumerate_states",
            detail: format!(
                "network size {n_neurons} exceeds enumeration limit {MAX_ENUMERATED_NEURONS}; \
                 use total_states for the exact total"
            ),
        });
    }
    let mut counts = vec![0u128; n_neurons as usize + 1];
    for config in 0u64..(1u64 << n_neurons) {
        counts[config.count_ones() as usize] += 1;
    }
    Ok(StateHistogram { n_neurons, counts })
}
