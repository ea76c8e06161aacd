use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::dense::{symmetric_eigen, DenseMatrix};
use super::lanczos::{lowest_eigenpairs, LanczosOptions, LinearOperator};
use crate::chain::{translation_sign, SectorBasis};
use crate::error::{Error, Result};
use crate::operator::KymOperator;
use crate::scalar::Real;

/// Relative cluster width for grouping degenerate levels.
pub const CLUSTER_THRESHOLD: f64 = 1e-10;

/// Dense eigenpair residual bound, relative to `‖H‖`.
pub const DENSE_RESIDUAL_BOUND: f64 = 1e-11;

/// Iterative eigenpair residual bound, relative to `‖H‖`.
pub const ITERATIVE_RESIDUAL_BOUND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMode {
    /// Full spectrum; eigenvectors (and hence momenta) only on request.
    Dense { vectors: bool },
    /// The `k` lowest levels by Lanczos iteration.
    Lowest { k: usize },
}

#[derive(Clone, Debug)]
pub struct SpectrumResult<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Unit eigenvectors as columns, when computed.
    pub vectors: Option<Vec<Vec<T>>>,
    /// `‖Hv - λv‖/‖H‖` per eigenvector, empty without vectors.
    pub residuals: Vec<T>,
    /// Crystal momentum `K ∈ (-π, π]` with `T v = e^{-iK} v`, per
    /// eigenvector. `None` where a degenerate cluster is not closed under
    /// translation (possible for the last cluster of a truncated spectrum).
    pub momenta: Vec<Option<T>>,
    pub norm_estimate: T,
}

/// `H` restricted to a sector as a real linear map.
pub struct SectorOperator<'a, T: Real> {
    op: &'a KymOperator<T>,
    sector: &'a SectorBasis,
    norm: T,
}

impl<'a, T: Real> SectorOperator<'a, T> {
    pub fn new(op: &'a KymOperator<T>, sector: &'a SectorBasis) -> Self {
        let norm = op.norm_estimate(sector);
        Self { op, sector, norm }
    }
}

impl<T: Real> LinearOperator<T> for SectorOperator<'_, T> {
    fn dim(&self) -> usize {
        self.sector.len()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.op
            .apply_into(self.sector, x, y)
            .expect("sector operator built for matching geometry");
    }

    fn norm_estimate(&self) -> T {
        self.norm
    }
}

/// Translation applied to a real coefficient vector over `sector`.
pub(crate) fn translate_real<T: Real>(sector: &SectorBasis, x: &[T]) -> Vec<T> {
    let n = sector.n_sites();
    let mut out = vec![T::zero(); x.len()];
    for (&config, &amp) in sector.configs().iter().zip(x) {
        let target = sector
            .index_of(config.translated(n))
            .expect("translation preserves the sector");
        out[target] = if translation_sign(config, n) { -amp } else { amp };
    }
    out
}

pub fn sector_spectrum<T: Real>(
    op: &KymOperator<T>,
    sector: &Arc<SectorBasis>,
    mode: SpectrumMode,
) -> Result<SpectrumResult<T>> {
    sector_spectrum_with(op, sector, mode, &LanczosOptions::default())
}

pub fn sector_spectrum_with<T: Real>(
    op: &KymOperator<T>,
    sector: &Arc<SectorBasis>,
    mode: SpectrumMode,
    lanczos: &LanczosOptions<T>,
) -> Result<SpectrumResult<T>> {
    let linear = SectorOperator::new(op, sector);
    let scale = if linear.norm > T::zero() { linear.norm } else { T::one() };
    let (values, vectors, bound) = match mode {
        SpectrumMode::Dense { vectors } => {
            let m = op.build_dense(sector)?;
            let eig = symmetric_eigen(&m, vectors)?;
            (eig.values, eig.vectors, T::lit(DENSE_RESIDUAL_BOUND))
        }
        SpectrumMode::Lowest { k } => {
            if k >= sector.len() {
                return Err(Error::invalid(format!(
                    "iterative mode needs k < sector size, got k={k} for size {}",
                    sector.len()
                )));
            }
            let pairs = lowest_eigenpairs(&linear, k, lanczos)?;
            let values = pairs.iter().map(|p| p.value).collect();
            let vectors = pairs.into_iter().map(|p| p.vector).collect();
            (values, Some(vectors), T::lit(ITERATIVE_RESIDUAL_BOUND))
        }
    };

    let mut residuals = Vec::new();
    let mut momenta = Vec::new();
    if let Some(vecs) = &vectors {
        residuals = vecs
            .par_iter()
            .zip(values.par_iter())
            .map(|(v, &lambda)| {
                let mut hv = vec![T::zero(); v.len()];
                linear.apply(v, &mut hv);
                hv.iter()
                    .zip(v)
                    .map(|(&a, &b)| (a - lambda * b) * (a - lambda * b))
                    .sum::<T>()
                    .sqrt()
                    / scale
            })
            .collect();
        if let Some((k, r)) = residuals.iter().enumerate().find(|(_, r)| **r > bound) {
            return Err(Error::Convergence {
                iterations: 0,
                detail: format!("eigenpair {k} has relative residual {r}, bound {bound}"),
            });
        }
        momenta = resolve_momenta(sector, &values, vecs, scale)?;
    }
    Ok(SpectrumResult {
        values,
        vectors,
        residuals,
        momenta,
        norm_estimate: scale,
    })
}

/// Groups consecutive levels closer than `CLUSTER_THRESHOLD · ‖H‖`.
pub fn degenerate_clusters<T: Real>(values: &[T], scale: T) -> Vec<std::ops::Range<usize>> {
    let width = T::lit(CLUSTER_THRESHOLD) * scale;
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > width {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters
}

fn resolve_momenta<T: Real>(
    sector: &SectorBasis,
    values: &[T],
    vectors: &[Vec<T>],
    scale: T,
) -> Result<Vec<Option<T>>> {
    let n_sites = sector.n_sites();
    let mut momenta = vec![None; values.len()];
    for cluster in degenerate_clusters(values, scale) {
        let cols = &vectors[cluster.clone()];
        let translated: Vec<Vec<T>> = cols.iter().map(|v| translate_real(sector, v)).collect();
        let d = cols.len();
        let c = DenseMatrix::from_fn(d, |a, b| cols[a].iter().zip(&translated[b]).map(|(&x, &y)| x * y).sum());
        // C is orthogonal exactly when the cluster is translation invariant.
        let mut defect = T::zero();
        for a in 0..d {
            for b in 0..d {
                let ctc: T = (0..d).map(|r| c.get(r, a) * c.get(r, b)).sum();
                let id = if a == b { T::one() } else { T::zero() };
                defect = defect.max((ctc - id).abs());
            }
        }
        if defect > T::lit(1e-10) {
            continue;
        }
        if let Some(ks) = cluster_momenta(&c, n_sites) {
            for (slot, k) in cluster.zip(ks) {
                momenta[slot] = Some(k);
            }
        }
    }
    Ok(momenta)
}

/// Multiset of `K = 2πk/N` for an orthogonal `C` with `C^N = 1`, from the
/// traces of its powers. Sorted ascending in `(-π, π]`.
fn cluster_momenta<T: Real>(c: &DenseMatrix<T>, n_sites: usize) -> Option<Vec<T>> {
    let d = c.dim();
    let mut traces = Vec::with_capacity(n_sites);
    let mut power = DenseMatrix::from_fn(d, |i, j| if i == j { T::one() } else { T::zero() });
    for _ in 0..n_sites {
        traces.push((0..d).map(|i| power.get(i, i)).sum::<T>());
        power = DenseMatrix::from_fn(d, |i, j| (0..d).map(|r| power.get(i, r) * c.get(r, j)).sum());
    }
    let n = T::from_count(n_sites);
    let lo = -((n_sites as i64 - 1) / 2);
    let hi = n_sites as i64 / 2;
    let mut out = Vec::with_capacity(d);
    for k in lo..=hi {
        let kk = T::TAU() * T::from_int(k) / n;
        let weight: Complex<T> = traces
            .iter()
            .enumerate()
            .map(|(j, &tr)| Complex::from_polar(tr, kk * T::from_count(j)))
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
            / n;
        let count = weight.re.round();
        if (weight.re - count).abs() > T::lit(1e-8) || weight.im.abs() > T::lit(1e-8) {
            return None;
        }
        for _ in 0..count.to_usize().unwrap_or(0) {
            out.push(kk);
        }
    }
    (out.len() == d).then_some(out)
}
