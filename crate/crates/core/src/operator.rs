//! The supersymmetric `1/r²` t-J Hamiltonian
//!
//! ```text
//! H = -(2π²/N²) Σ_{α<β} P_αβ / |η_α - η_β|²
//! ```
//!
//! acting on site-ordered fermionic basis states. `P_αβ` is the graded
//! permutation: it exchanges the contents of the two sites, with a factor
//! `-1` when both hold electrons. When an electron trades places with a
//! hole it passes every electron strictly between the two sites, which
//! contributes `(-1)^(#electrons between)` in the site-ordered basis.
//!
//! Each unordered pair is counted once. With this normalisation the
//! half-filled ground state energy is `-π²/(4N)`; summing over ordered
//! pairs doubles every eigenvalue.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{
    apply_translation, chord_squared_by_separation, ChainGeometry, Configuration, SectorBasis, StateVector,
};
use crate::eigen::DenseMatrix;
use crate::error::{Error, Result};
use crate::report::{ModelDescriptor, ReportBuilder, VerificationReport};
use crate::scalar::Real;

pub const DEFAULT_DENSE_LIMIT: usize = 6000;

/// Tolerance on the three operator self-check defects.
pub const SELF_CHECK_TOLERANCE: f64 = 1e-12;

/// `w(δ) = 1/(4 sin²(πδ/N))` for separations `δ = 1..N-1`.
#[derive(Clone, Debug)]
pub struct CouplingTable<T: Real> {
    n_sites: usize,
    weights: Vec<T>,
}

impl<T: Real> CouplingTable<T> {
    pub fn new(n_sites: usize) -> Self {
        let weights = (0..n_sites)
            .map(|d| {
                if d == 0 {
                    T::zero()
                } else {
                    T::one() / chord_squared_by_separation::<T>(n_sites, d)
                }
            })
            .collect();
        Self { n_sites, weights }
    }

    /// Weight for separation `delta` in `1..N`.
    pub fn weight(&self, delta: usize) -> T {
        assert!(
            delta >= 1 && delta < self.n_sites,
            "separation {delta} out of range for N={}",
            self.n_sites
        );
        self.weights[delta]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairConvention {
    /// Each unordered pair once; reproduces `E_0 = -π²/(4N)`.
    UnorderedPairs,
    /// Literal ordered double sum; every matrix element doubled.
    OrderedPairs,
}

#[derive(Clone, Debug)]
pub struct KymOperator<T: Real> {
    geometry: ChainGeometry<T>,
    couplings: CouplingTable<T>,
    prefactor: T,
    convention: PairConvention,
    dense_limit: usize,
    /// Zero-based `(i, j, g·w)` for every `i < j`, convention factor included.
    pairs: Vec<(usize, usize, T)>,
}

impl<T: Real> KymOperator<T> {
    pub fn new(n_sites: usize) -> Result<Self> {
        Self::with_convention(n_sites, PairConvention::UnorderedPairs)
    }

    pub fn with_convention(n_sites: usize, convention: PairConvention) -> Result<Self> {
        let geometry = ChainGeometry::new(n_sites)?;
        let couplings = CouplingTable::new(n_sites);
        let n = T::from_count(n_sites);
        let prefactor = -T::lit(2.0) * T::PI() * T::PI() / (n * n);
        let factor = match convention {
            PairConvention::UnorderedPairs => T::one(),
            PairConvention::OrderedPairs => T::lit(2.0),
        };
        let mut pairs = Vec::with_capacity(n_sites * n_sites.saturating_sub(1) / 2);
        for i in 0..n_sites {
            for j in (i + 1)..n_sites {
                pairs.push((i, j, factor * prefactor * couplings.weight(j - i)));
            }
        }
        Ok(Self {
            geometry,
            couplings,
            prefactor,
            convention,
            dense_limit: DEFAULT_DENSE_LIMIT,
            pairs,
        })
    }

    pub fn with_dense_limit(mut self, limit: usize) -> Self {
        self.dense_limit = limit;
        self
    }

    pub fn geometry(&self) -> &ChainGeometry<T> {
        &self.geometry
    }

    pub fn couplings(&self) -> &CouplingTable<T> {
        &self.couplings
    }

    pub fn n_sites(&self) -> usize {
        self.geometry.n_sites()
    }

    /// `-2π²/N²`.
    pub fn prefactor(&self) -> T {
        self.prefactor
    }

    pub fn convention(&self) -> PairConvention {
        self.convention
    }

    pub fn dense_limit(&self) -> usize {
        self.dense_limit
    }

    fn check_sector(&self, sector: &SectorBasis) -> Result<()> {
        if sector.n_sites() != self.n_sites() {
            return Err(Error::invalid(format!(
                "operator on {} sites applied to a sector of {} sites",
                self.n_sites(),
                sector.n_sites()
            )));
        }
        Ok(())
    }

    /// Visit the matrix elements generated by `config`: one diagonal total
    /// and each off-diagonal `(target, element)`.
    #[inline]
    fn row_elements(&self, config: Configuration, mut off_diagonal: impl FnMut(Configuration, T)) -> T {
        let mut diag = T::zero();
        for &(i, j, g) in &self.pairs {
            let a = config.at(i);
            let b = config.at(j);
            if a == b {
                // σσ: P = -1 ; hole-hole: P = +1
                if a.is_electron() {
                    diag -= g;
                } else {
                    diag += g;
                }
            } else {
                let odd = if a.is_electron() && b.is_electron() {
                    true
                } else {
                    config.electrons_between(i, j) % 2 == 1
                };
                off_diagonal(config.swapped(i, j), if odd { -g } else { g });
            }
        }
        diag
    }

    /// `y = H x` over raw amplitude slices of `sector`. Rows are evaluated
    /// in parallel; each row sums its terms in a fixed pair order.
    pub fn apply_into<A>(&self, sector: &SectorBasis, x: &[A], y: &mut [A]) -> Result<()>
    where
        A: Copy + Send + Sync + Zero + Add<Output = A> + Mul<T, Output = A>,
    {
        self.check_sector(sector)?;
        if x.len() != sector.len() || y.len() != sector.len() {
            return Err(Error::invalid(format!(
                "vector lengths {}/{} do not match sector size {}",
                x.len(),
                y.len(),
                sector.len()
            )));
        }
        y.par_iter_mut().with_min_len(64).enumerate().for_each(|(row, out)| {
            let config = sector.config(row);
            let mut acc = A::zero();
            let diag = self.row_elements(config, |target, h| {
                let col = sector.index_of(target).expect("hopping conserves hole number and S_z");
                acc = acc + x[col] * h;
            });
            *out = x[row] * diag + acc;
        });
        Ok(())
    }

    pub fn apply(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        let mut out = vec![Complex::zero(); state.len()];
        self.apply_into(state.sector(), state.amplitudes(), &mut out)?;
        state.with_amplitudes(out)
    }

    /// Max absolute row sum, used as the scale of relative residuals.
    pub fn norm_estimate(&self, sector: &SectorBasis) -> T {
        sector
            .configs()
            .par_iter()
            .map(|&c| {
                let mut sum = T::zero();
                let diag = self.row_elements(c, |_, h| sum += h.abs());
                sum + diag.abs()
            })
            .reduce(T::zero, T::max)
    }

    pub fn build_dense(&self, sector: &SectorBasis) -> Result<DenseMatrix<T>> {
        self.check_sector(sector)?;
        let n = sector.len();
        if n > self.dense_limit {
            return Err(Error::Capacity {
                what: format!("dense matrix for sector {} of N={}", sector.key(), self.n_sites()),
                size: n,
                limit: self.dense_limit,
            });
        }
        let mut m = DenseMatrix::zeros(n);
        for row in 0..n {
            let mut upper = Vec::new();
            let diag = self.row_elements(sector.config(row), |target, h| {
                let col = sector.index_of(target).expect("sector closed under H");
                if col > row {
                    upper.push((col, h));
                }
            });
            m.set(row, row, diag);
            for (col, h) in upper {
                m.set(row, col, h);
                m.set(col, row, h);
            }
        }
        Ok(m)
    }

    /// Weight of `H v` landing outside the sector of `v`.
    fn leaked_norm(&self, state: &StateVector<T>) -> T {
        let sector = state.sector();
        let mut outside: HashMap<Configuration, Complex<T>> = HashMap::new();
        for (&c, &amp) in sector.configs().iter().zip(state.amplitudes()) {
            self.row_elements(c, |target, h| {
                if sector.index_of(target).is_none() {
                    *outside.entry(target).or_insert_with(Complex::zero) += amp * h;
                }
            });
        }
        outside.values().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }
}

/// Hermiticity, translation commutator and sector leakage on `trials`
/// seeded random vectors, each relative to `‖H‖` and the vector norms.
pub fn operator_self_checks<T: Real>(
    op: &KymOperator<T>,
    sector: &std::sync::Arc<SectorBasis>,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::invalid("self checks need at least one trial"));
    }
    op.check_sector(sector)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm_h = op.norm_estimate(sector);
    let scale = if norm_h > T::zero() { norm_h } else { T::one() };

    let mut herm = T::zero();
    let mut comm = T::zero();
    let mut leak = T::zero();
    for _ in 0..trials {
        let u = StateVector::<T>::random(sector.clone(), &mut rng);
        let v = StateVector::<T>::random(sector.clone(), &mut rng);
        let hu = op.apply(&u)?;
        let hv = op.apply(&v)?;
        let lhs = u.inner(&hv)?;
        let rhs = hu.inner(&v)?;
        herm = herm.max((lhs - rhs).norm() / (scale * u.norm() * v.norm()));

        let htv = op.apply(&apply_translation(&v))?;
        let mut thv = apply_translation(&hv);
        thv.axpy(Complex::new(-T::one(), T::zero()), &htv)?;
        comm = comm.max(thv.norm() / (scale * v.norm()));

        leak = leak.max(op.leaked_norm(&v) / (scale * v.norm()));
    }

    let model = ModelDescriptor::new(op.n_sites()).with_sector(sector.key());
    let mut report = ReportBuilder::new(model);
    let tol = SELF_CHECK_TOLERANCE;
    report.upper(
        "hermiticity",
        herm.to_f64_lossy(),
        tol,
        format!("max |<u|Hv> - <Hu|v>| / (|H||u||v|) over {trials} trials"),
    );
    report.upper(
        "translation_commutator",
        comm.to_f64_lossy(),
        tol,
        format!("max |(TH - HT)v| / (|H||v|) over {trials} trials"),
    );
    report.upper(
        "sector_leakage",
        leak.to_f64_lossy(),
        tol,
        format!("max |P_out H v| / (|H||v|) over {trials} trials"),
    );
    Ok(report.finish())
}
