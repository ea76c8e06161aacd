use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Number of multisets of size `size` drawn from `slots` kinds.
pub fn multiset_count(slots: u64, size: u64) -> BigUint {
    if size == 0 {
        return BigUint::one();
    }
    if slots == 0 {
        return BigUint::zero();
    }
    // binom(slots + size - 1, size), built incrementally so every step divides exactly
    let mut acc = BigUint::one();
    for i in 1..=size {
        acc *= slots - 1 + i;
        acc /= i;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinonCount {
    pub n_spinons: u64,
    /// `M + 1` with `M = (N - N_sp)/2`.
    pub orbitals: u64,
    pub states: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingReport {
    pub n_sites: u64,
    pub per_spinon_number: Vec<SpinonCount>,
    pub total: BigUint,
}

impl CountingReport {
    pub fn matches_two_to_the_n(&self) -> bool {
        self.total == BigUint::one() << self.n_sites
    }
}

/// Many-spinon states of an `N`-site chain: spin-1/2 bosons in `M + 1`
/// orbitals, summed over `N_sp ≡ N (mod 2)`.
pub fn hilbert_dimension(n_sites: u64) -> CountingReport {
    let per_spinon_number: Vec<SpinonCount> = (n_sites % 2..=n_sites)
        .step_by(2)
        .map(|n_sp| {
            let orbitals = (n_sites - n_sp) / 2 + 1;
            SpinonCount {
                n_spinons: n_sp,
                orbitals,
                states: multiset_count(2 * orbitals, n_sp),
            }
        })
        .collect();
    let total = per_spinon_number.iter().map(|c| &c.states).sum();
    CountingReport {
        n_sites,
        per_spinon_number,
        total,
    }
}
