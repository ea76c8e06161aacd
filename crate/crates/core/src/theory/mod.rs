//! Closed-form two-anyon theory: single-particle dispersions and group
//! velocities, statistically shifted momenta, pair energies and the
//! one-directional scattering between momentum basis states.
//!
//! Units: `ħ = 1`, lattice spacing 1, so a ring of `N` sites has length
//! `L = N` and momenta are quantised in multiples of `2π/N`. Exact momenta
//! are carried as rationals in those units.

mod counting;
mod quantize;

pub use counting::{hilbert_dimension, multiset_count, CountingReport, SpinonCount};
pub use quantize::{QuantizationKind, QuantizationRule, Quantum};

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exact statistical shift.
pub type Shift = Ratio<i64>;

/// `s = 1/4`, the shift of half-fermions (`θ = π/2`).
pub fn half_fermion_shift() -> Shift {
    Ratio::new(1, 4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Spinon,
    Holon,
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Species::Spinon => "spinon",
            Species::Holon => "holon",
        })
    }
}

/// Orbital labels `(m, n)` of a two-anyon momentum basis state on `N` sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairLabel {
    pub species: Species,
    pub m: i64,
    pub n: i64,
    pub n_sites: usize,
}

impl PairLabel {
    pub fn new(species: Species, m: i64, n: i64, n_sites: usize) -> Self {
        Self { species, m, n, n_sites }
    }

    pub fn spinon(m: i64, n: i64, n_sites: usize) -> Self {
        Self::new(Species::Spinon, m, n, n_sites)
    }

    pub fn holon(m: i64, n: i64, n_sites: usize) -> Self {
        Self::new(Species::Holon, m, n, n_sites)
    }

    /// `M = (N-2)/2`, the up-spin count of the two-anyon sector.
    pub fn liquid_size(&self) -> i64 {
        (self.n_sites as i64 - 2) / 2
    }

    pub fn is_valid(&self) -> bool {
        if self.n_sites < 2 || !self.n_sites.is_multiple_of(2) {
            return false;
        }
        let big_m = self.liquid_size();
        match self.species {
            Species::Spinon => big_m >= self.m && self.m >= self.n && self.n >= 0,
            Species::Holon => 0 <= self.n && self.n <= self.m && self.m <= big_m + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{self} is not a valid label")))
        }
    }

    pub fn with_orbitals(&self, m: i64, n: i64) -> Self {
        Self { m, n, ..*self }
    }

    /// Every valid label for `species` on `n_sites`, ordered by `(m, n)`.
    pub fn all_valid(species: Species, n_sites: usize) -> Vec<Self> {
        if n_sites < 2 || !n_sites.is_multiple_of(2) {
            return Vec::new();
        }
        let big_m = (n_sites as i64 - 2) / 2;
        let top = match species {
            Species::Spinon => big_m,
            Species::Holon => big_m + 1,
        };
        (0..=top)
            .flat_map(|m| (0..=m).map(move |n| PairLabel::new(species, m, n, n_sites)))
            .collect()
    }
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{}) N={}", self.species, self.m, self.n, self.n_sites)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersionPoint<T> {
    pub momentum: T,
    pub energy: T,
    pub velocity: T,
    /// False when the momentum lies outside the band the formulas describe.
    pub in_domain: bool,
}

/// Single-particle energy and group velocity.
///
/// Spinon: `ε(q) = q(π-q)/2 + π²/(8N²)`, `v = π/2 - q`, band `(0, π)`.
/// Holon: `ε(p) = p(π+p)/2 - π²/(8N²)`, `v = π/2 + p`, band
/// `[-π-π/(2N), π/(2N)]`.
pub fn dispersion<T: Real>(species: Species, momentum: T, n_sites: usize) -> DispersionPoint<T> {
    let pi = T::PI();
    let half = T::lit(0.5);
    let n = T::from_count(n_sites);
    let finite_size = pi * pi / (T::lit(8.0) * n * n);
    match species {
        Species::Spinon => DispersionPoint {
            momentum,
            energy: half * momentum * (pi - momentum) + finite_size,
            velocity: half * pi - momentum,
            in_domain: momentum > T::zero() && momentum < pi,
        },
        Species::Holon => {
            let edge = pi / (T::lit(2.0) * n);
            DispersionPoint {
                momentum,
                energy: half * momentum * (pi + momentum) - finite_size,
                velocity: half * pi + momentum,
                in_domain: momentum >= -pi - edge && momentum <= edge,
            }
        }
    }
}

/// `E_0 = -π²/(4N)`.
pub fn ground_state_energy<T: Real>(n_sites: usize) -> T {
    -T::PI() * T::PI() / (T::lit(4.0) * T::from_count(n_sites))
}

/// Momenta of the two anyons of one label.
///
/// `first` belongs to orbital `m`, `second` to orbital `n`. The `*_units`
/// fields hold the same momenta exactly, in units of `2π/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedMomenta<T> {
    pub species: Species,
    pub first: T,
    pub second: T,
    pub first_units: Ratio<i64>,
    pub second_units: Ratio<i64>,
    pub shift: Shift,
}

impl<T: Real> ShiftedMomenta<T> {
    /// Non-negative spacing between the two momenta in units of `2π/N`.
    pub fn spacing_units(&self) -> Ratio<i64> {
        let d = self.first_units - self.second_units;
        if d < Ratio::zero() {
            -d
        } else {
            d
        }
    }

    /// Exact band membership of both momenta: spinons in `(0, π)`, holons
    /// in `[-π-π/(2N), π/(2N)]`.
    pub fn within_band(&self, n_sites: usize) -> bool {
        let half_n = Ratio::new(n_sites as i64, 2);
        let quarter = Ratio::new(1, 4);
        let inside = |u: Ratio<i64>| match self.species {
            Species::Spinon => u > Ratio::zero() && u < half_n,
            Species::Holon => u >= -half_n - quarter && u <= quarter,
        };
        inside(self.first_units) && inside(self.second_units)
    }
}

fn momentum_units(label: &PairLabel, shift: Shift) -> (Ratio<i64>, Ratio<i64>) {
    let half_n = Ratio::new(label.n_sites as i64, 2);
    let half = Ratio::new(1, 2);
    let m = Ratio::from_integer(label.m);
    let n = Ratio::from_integer(label.n);
    match label.species {
        // q = π - (2π/N)(j + 1/2 ± s)
        Species::Spinon => (half_n - (m + half + shift), half_n - (n + half - shift)),
        // p = -π + (2π/N)(j ± s)
        Species::Holon => (-half_n + m + shift, -half_n + n - shift),
    }
}

fn units_to_momentum<T: Real>(units: Ratio<i64>, n_sites: usize) -> T {
    let x = T::from_int(*units.numer()) / T::from_int(*units.denom());
    T::TAU() * x / T::from_count(n_sites)
}

pub fn single_particle_momenta<T: Real>(label: &PairLabel, shift: Shift) -> Result<ShiftedMomenta<T>> {
    label.validate()?;
    let (a, b) = momentum_units(label, shift);
    Ok(ShiftedMomenta {
        species: label.species,
        first: units_to_momentum(a, label.n_sites),
        second: units_to_momentum(b, label.n_sites),
        first_units: a,
        second_units: b,
        shift,
    })
}

/// Momenta at a real-valued shift, as used when fitting `s`.
pub fn momenta_at_shift<T: Real>(label: &PairLabel, shift: T) -> Result<(T, T)> {
    label.validate()?;
    let n = T::from_count(label.n_sites);
    let step = T::TAU() / n;
    let pi = T::PI();
    let half = T::lit(0.5);
    let m = T::from_int(label.m);
    let nn = T::from_int(label.n);
    Ok(match label.species {
        Species::Spinon => (pi - step * (m + half + shift), pi - step * (nn + half - shift)),
        Species::Holon => (-pi + step * (m + shift), -pi + step * (nn - shift)),
    })
}

/// `E_0 + ε(k_m) + ε(k_n)` at an arbitrary real shift.
pub fn pair_energy_at_shift<T: Real>(label: &PairLabel, shift: T) -> Result<T> {
    let (a, b) = momenta_at_shift(label, shift)?;
    let n = label.n_sites;
    Ok(ground_state_energy::<T>(n) + dispersion(label.species, a, n).energy + dispersion(label.species, b, n).energy)
}

/// Pair energy at the half-fermion shift `s = 1/4`.
pub fn pair_energy<T: Real>(label: &PairLabel) -> Result<T> {
    let s = half_fermion_shift();
    pair_energy_at_shift(label, T::from_int(*s.numer()) / T::from_int(*s.denom()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringTerm<T> {
    pub l: i64,
    pub target: PairLabel,
    pub coefficient: T,
}

/// Off-diagonal terms of `H Ψ_mn = E_mn Ψ_mn + Σ_l V_l Ψ_target(l)`.
///
/// Spinons scatter to `(m+l, n-l)` for `l = 1..=min(M-m, n)` with
/// `V_l = -(2π²/N²)(m-n+2l)`; holons to `(m-l, n+l)` for
/// `l = 1..=⌊(m-n)/2⌋` with `V_l = (2π²/N²)(m-n)`.
pub fn scattering_terms<T: Real>(label: &PairLabel) -> Result<Vec<ScatteringTerm<T>>> {
    label.validate()?;
    let n_sites = T::from_count(label.n_sites);
    let g = T::lit(2.0) * T::PI() * T::PI() / (n_sites * n_sites);
    let (m, n) = (label.m, label.n);
    let terms = match label.species {
        Species::Spinon => {
            let l_max = (label.liquid_size() - m).min(n);
            (1..=l_max)
                .map(|l| ScatteringTerm {
                    l,
                    target: label.with_orbitals(m + l, n - l),
                    coefficient: -g * T::from_int(m - n + 2 * l),
                })
                .collect()
        }
        Species::Holon => {
            let l_max = (m - n) / 2;
            (1..=l_max)
                .map(|l| ScatteringTerm {
                    l,
                    target: label.with_orbitals(m - l, n + l),
                    coefficient: g * T::from_int(m - n),
                })
                .collect()
        }
    };
    Ok(terms)
}

/// Rational to nearest `f64`, for reporting.
pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
}
