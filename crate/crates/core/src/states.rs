//! Explicit polynomial wave functions evaluated on lattice configurations.
//!
//! Up-spin positions enter as `z_i = η_α` for every up site `α`; down spins
//! fill the remaining electron sites. All states are returned unnormalised.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::chain::{ChainGeometry, Configuration, SectorBasis, SectorKey, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::theory::{PairLabel, Species};

/// Relative threshold below which a state counts as identically zero.
pub const VANISHING_THRESHOLD: f64 = 1e-10;

/// [`VANISHING_THRESHOLD`], widened to `10³ ε` for scalars coarser than `f64`.
pub fn vanishing_threshold<T: Real>() -> T {
    T::lit(VANISHING_THRESHOLD).max(T::epsilon() * T::lit(1e3))
}

#[derive(Clone, Debug)]
pub struct ExplicitState<T: Real> {
    pub state: StateVector<T>,
    pub norm: T,
    /// Largest per-configuration sum of the magnitudes of the terms that
    /// make up an amplitude. Cancellation is judged relative to it.
    pub magnitude_bound: T,
}

impl<T: Real> ExplicitState<T> {
    pub fn vanishes(&self) -> bool {
        self.norm <= vanishing_threshold::<T>() * self.magnitude_bound
    }

    /// `‖Ψ‖ / bound`, zero when the bound is zero.
    pub fn relative_norm(&self) -> T {
        if self.magnitude_bound > T::zero() {
            self.norm / self.magnitude_bound
        } else {
            T::zero()
        }
    }
}

/// `η^e` with `η = exp(2πi/N)`, read off the exact site table.
fn root<T: Real>(geom: &ChainGeometry<T>, e: i64) -> Complex<T> {
    let n = geom.n_sites() as i64;
    let k = e.rem_euclid(n);
    if k == 0 {
        Complex::one()
    } else {
        geom.coords()[k as usize - 1]
    }
}

/// `Π_{i<j}(z_i - z_j)² Π_i z_i`.
fn jastrow<T: Real>(z: &[Complex<T>]) -> Complex<T> {
    let mut acc = Complex::one();
    for (i, &zi) in z.iter().enumerate() {
        acc *= zi;
        for &zj in &z[i + 1..] {
            let d = zi - zj;
            acc = acc * d * d;
        }
    }
    acc
}

/// `Π_i (w - z_i)`.
fn vandermonde_row<T: Real>(w: Complex<T>, z: &[Complex<T>]) -> Complex<T> {
    z.iter().fold(Complex::one(), |acc, &zi| acc * (w - zi))
}

fn up_coords<T: Real>(geom: &ChainGeometry<T>, config: Configuration) -> Vec<Complex<T>> {
    config.up_sites(geom.n_sites()).map(|a| geom.coords()[a - 1]).collect()
}

/// Evaluate `amp` on every configuration of a sector; `amp` returns the
/// amplitude and its term-magnitude bound.
fn build<T: Real>(
    sector: Arc<SectorBasis>,
    amp: impl Fn(Configuration) -> (Complex<T>, T) + Sync,
) -> Result<ExplicitState<T>> {
    let pairs: Vec<(Complex<T>, T)> = sector.configs().par_iter().map(|&c| amp(c)).collect();
    let bound = pairs.iter().map(|p| p.1).fold(T::zero(), T::max);
    let amplitudes = pairs.into_iter().map(|p| p.0).collect();
    let state = StateVector::from_amplitudes(sector, amplitudes)?;
    let norm = state.norm();
    Ok(ExplicitState {
        state,
        norm,
        magnitude_bound: bound,
    })
}

fn require_even<T: Real>(geom: &ChainGeometry<T>, what: &str) -> Result<()> {
    if !geom.n_sites().is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "{what} needs an even chain, got N={}",
            geom.n_sites()
        )));
    }
    Ok(())
}

fn require_label<T: Real>(geom: &ChainGeometry<T>, label: &PairLabel, species: Species) -> Result<()> {
    if label.species != species {
        return Err(Error::invalid(format!("expected a {species} label, got {label}")));
    }
    if label.n_sites != geom.n_sites() {
        return Err(Error::invalid(format!(
            "label {label} does not match a chain of {} sites",
            geom.n_sites()
        )));
    }
    Ok(())
}

/// Singlet ground state `Ψ₀ = Π_{i<j}(z_i - z_j)² Π_i z_i` with `N/2` up
/// spins and no holes.
pub fn ground_state<T: Real>(geom: &ChainGeometry<T>) -> Result<ExplicitState<T>> {
    require_even(geom, "the ground state")?;
    let n = geom.n_sites();
    let sector = SectorBasis::enumerate(n, SectorKey::new(0, n / 2))?;
    build(sector, |c| {
        let a = jastrow(&up_coords(geom, c));
        (a, a.norm())
    })
}

/// Two-spinon momentum basis state
/// `Σ_{α,β} η̄_α^m η̄_β^n Π_i(η_α - z_i)(η_β - z_i) Ψ₀[z]` in the sector with
/// no holes and `(N-2)/2` up spins.
///
/// Orbital labels outside `0..=M` are accepted: the sum is evaluated as
/// written and [`ExplicitState::vanishes`] reports whether it cancels.
pub fn two_spinon_state<T: Real>(geom: &ChainGeometry<T>, label: &PairLabel) -> Result<ExplicitState<T>> {
    require_even(geom, "a two-spinon state")?;
    require_label(geom, label, Species::Spinon)?;
    let n = geom.n_sites();
    let sector = SectorBasis::enumerate(n, SectorKey::new(0, (n - 2) / 2))?;
    let (m, nn) = (label.m, label.n);
    build(sector, |c| {
        let z = up_coords(geom, c);
        let psi0 = jastrow(&z);
        // The double sum factorises into f_m f_n.
        let mut fm = Complex::<T>::zero();
        let mut fn_ = Complex::<T>::zero();
        let mut mag = T::zero();
        for alpha in 1..=n as i64 {
            let p = vandermonde_row(root(geom, alpha), &z);
            fm += root(geom, -alpha * m) * p;
            fn_ += root(geom, -alpha * nn) * p;
            mag += p.norm();
        }
        (fm * fn_ * psi0, mag * mag * psi0.norm())
    })
}

/// Two-holon momentum basis state with two holes and `(N-2)/2` up spins.
///
/// For holes at sites `a < b` (`h₁ = η_a`, `h₂ = η_b`) the amplitude is
/// `(-1)^(a+b) φ_mn(h₁,h₂) Π_i(h₁ - z_i)(h₂ - z_i) Ψ₀[z]` with
/// `φ_mn = (h₁ - h₂)(h₁^m h₂^n + h₁^n h₂^m)`. The sign orders the holes
/// ahead of the electrons in the fermionic basis.
pub fn two_holon_state<T: Real>(geom: &ChainGeometry<T>, label: &PairLabel) -> Result<ExplicitState<T>> {
    require_even(geom, "a two-holon state")?;
    require_label(geom, label, Species::Holon)?;
    let n = geom.n_sites();
    let sector = SectorBasis::enumerate(n, SectorKey::new(2, (n - 2) / 2))?;
    let (m, nn) = (label.m, label.n);
    build(sector, |c| {
        let mut holes = c.hole_sites(n);
        let a = holes.next().expect("two holes") as i64;
        let b = holes.next().expect("two holes") as i64;
        let (h1, h2) = (root(geom, a), root(geom, b));
        let z = up_coords(geom, c);
        let phi = (h1 - h2) * (root(geom, a * m + b * nn) + root(geom, a * nn + b * m));
        let rest = vandermonde_row(h1, &z) * vandermonde_row(h2, &z) * jastrow(&z);
        let sign = if (a + b) % 2 == 0 { T::one() } else { -T::one() };
        let bound = T::lit(2.0) * (h1 - h2).norm() * rest.norm();
        (phi * rest * sign, bound)
    })
}

/// Single spinon or holon localised at site `alpha` on an odd chain.
///
/// Spinon: `Π_i(η_α - z_i) Ψ₀[z]` over `(N-1)/2` up spins and no holes.
/// Holon: the hole sits on `α` and the remaining spins carry the same
/// polynomial, with the fermionic ordering sign `(-1)^(α-1)`.
pub fn localized_state<T: Real>(geom: &ChainGeometry<T>, species: Species, alpha: usize) -> Result<ExplicitState<T>> {
    let n = geom.n_sites();
    if n.is_multiple_of(2) {
        return Err(Error::invalid(format!("localised states need an odd chain, got N={n}")));
    }
    let eta = geom.site_coordinate(alpha)?;
    let m_up = (n - 1) / 2;
    match species {
        Species::Spinon => {
            let sector = SectorBasis::enumerate(n, SectorKey::new(0, m_up))?;
            build(sector, |c| {
                let z = up_coords(geom, c);
                let a = vandermonde_row(eta, &z) * jastrow(&z);
                (a, a.norm())
            })
        }
        Species::Holon => {
            let sector = SectorBasis::enumerate(n, SectorKey::new(1, m_up))?;
            let sign = if alpha % 2 == 1 { T::one() } else { -T::one() };
            build(sector, |c| {
                if c.hole_sites(n).next() != Some(alpha) {
                    return (Complex::zero(), T::zero());
                }
                let z = up_coords(geom, c);
                let a = vandermonde_row(eta, &z) * jastrow(&z) * sign;
                (a, a.norm())
            })
        }
    }
}

/// `G[i][j] = ⟨state_i|state_j⟩`.
pub fn gram_matrix<T: Real>(states: &[StateVector<T>]) -> Result<Vec<Vec<Complex<T>>>> {
    if let Some(first) = states.first() {
        for s in &states[1..] {
            first.check_same_sector(s)?;
        }
    }
    let d = states.len();
    let mut g = vec![vec![Complex::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let v = states[i].inner(&states[j])?;
            g[i][j] = v;
            g[j][i] = v.conj();
        }
        g[i][i].im = T::zero();
    }
    Ok(g)
}
