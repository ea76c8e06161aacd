//! Lowest eigenpairs of a real symmetric operator by Lanczos iteration with
//! full reorthogonalisation.
//!
//! Eigenpairs are found one at a time. Each run starts from a seeded random
//! vector orthogonal to all locked vectors and keeps every Krylov vector
//! orthogonal to them, so the lowest Ritz pair of a run is the lowest
//! eigenpair of the remaining complement. Degenerate eigenvalues are
//! therefore returned with their full multiplicity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A real symmetric linear map.
pub trait LinearOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T], y: &mut [T]);
    /// Scale used for relative residuals.
    fn norm_estimate(&self) -> T;
}

impl<T: Real> LinearOperator<T> for super::DenseMatrix<T> {
    fn dim(&self) -> usize {
        super::DenseMatrix::dim(self)
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        y.copy_from_slice(&self.matvec(x));
    }

    fn norm_estimate(&self) -> T {
        self.max_row_sum()
    }
}

#[derive(Clone, Debug)]
pub struct LanczosOptions<T> {
    /// Relative residual `‖Av - θv‖/‖A‖` accepted as converged.
    pub tolerance: T,
    /// Krylov dimension cap per run.
    pub max_krylov: usize,
    /// Total operator applications allowed across all runs.
    pub max_applications: usize,
    pub seed: u64,
}

impl<T: Real> Default for LanczosOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-11),
            max_krylov: 400,
            max_applications: 200_000,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPair<T> {
    pub value: T,
    pub vector: Vec<T>,
    /// `‖Av - θv‖ / ‖A‖`.
    pub residual: T,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn orthogonalize<T: Real>(w: &mut [T], against: &[&[T]]) {
    // Two passes of classical Gram-Schmidt.
    for _ in 0..2 {
        for q in against {
            let c = dot(q, w);
            for (x, &y) in w.iter_mut().zip(q.iter()) {
                *x -= c * y;
            }
        }
    }
}

/// The `k` lowest eigenpairs of `op`, ascending.
pub fn lowest_eigenpairs<T: Real, Op: LinearOperator<T>>(
    op: &Op,
    k: usize,
    opts: &LanczosOptions<T>,
) -> Result<Vec<EigenPair<T>>> {
    let n = op.dim();
    if k >= n {
        return Err(Error::invalid(format!(
            "iterative solver needs k < dimension, got k={k} for dimension {n}"
        )));
    }
    let scale = {
        let s = op.norm_estimate();
        if s > T::zero() {
            s
        } else {
            T::one()
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<EigenPair<T>> = Vec::with_capacity(k);
    let mut applications = 0usize;
    let mut scratch = vec![T::zero(); n];

    while locked.len() < k {
        let free_dim = n - locked.len();
        let krylov_cap = opts.max_krylov.min(free_dim).max(1);

        let mut q0: Vec<T> = (0..n).map(|_| T::lit(rng.random_range(-1.0..1.0))).collect();
        {
            let refs: Vec<&[T]> = locked.iter().map(|p| p.vector.as_slice()).collect();
            orthogonalize(&mut q0, &refs);
        }
        let q0n = norm(&q0);
        for x in &mut q0 {
            *x /= q0n;
        }

        let mut basis: Vec<Vec<T>> = vec![q0];
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let mut found: Option<(T, Vec<T>)> = None;

        for j in 0..krylov_cap {
            if applications >= opts.max_applications {
                return Err(Error::Convergence {
                    iterations: applications,
                    detail: format!("{} of {k} eigenpairs converged", locked.len()),
                });
            }
            op.apply(&basis[j], &mut scratch);
            applications += 1;
            let mut w = scratch.clone();
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            {
                let refs: Vec<&[T]> = locked
                    .iter()
                    .map(|p| p.vector.as_slice())
                    .chain(basis.iter().map(|v| v.as_slice()))
                    .collect();
                orthogonalize(&mut w, &refs);
            }
            let beta = norm(&w);
            let last = j + 1 == krylov_cap;
            let exhausted = beta <= T::epsilon() * scale * T::lit(10.0);
            if j % 4 == 3 || last || exhausted {
                let eig = tridiagonal_eigen(&alphas, &betas, true)?;
                let theta = eig.values[0];
                let s = &eig.vectors.as_ref().expect("requested vectors")[0];
                let estimate = beta * s[j].abs() / scale;
                if estimate <= opts.tolerance || exhausted || last {
                    let mut y = vec![T::zero(); n];
                    for (coef, v) in s.iter().zip(&basis) {
                        for (yi, &vi) in y.iter_mut().zip(v) {
                            *yi += *coef * vi;
                        }
                    }
                    let yn = norm(&y);
                    for x in &mut y {
                        *x /= yn;
                    }
                    found = Some((theta, y));
                    break;
                }
            }
            for x in &mut w {
                *x /= beta;
            }
            basis.push(w);
            betas.push(beta);
        }

        let (theta, y) = found.expect("run terminates with a Ritz pair");
        op.apply(&y, &mut scratch);
        applications += 1;
        let value = dot(&y, &scratch);
        let residual = scratch
            .iter()
            .zip(&y)
            .map(|(&a, &b)| (a - value * b) * (a - value * b))
            .sum::<T>()
            .sqrt()
            / scale;
        if residual > opts.tolerance * T::lit(100.0) {
            return Err(Error::Convergence {
                iterations: applications,
                detail: format!(
                    "Ritz value {theta} stalled at relative residual {residual} after a Krylov space of {}",
                    basis.len()
                ),
            });
        }
        locked.push(EigenPair {
            value,
            vector: y,
            residual,
        });
    }
    locked.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite eigenvalues"));
    Ok(locked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{symmetric_eigen, DenseMatrix};

    fn random_symmetric(n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let x = rng.random_range(-1.0..1.0);
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        m
    }

    #[test]
    fn matches_dense_on_random_matrix() {
        let m = random_symmetric(50, 11);
        let dense = symmetric_eigen(&m, false).unwrap().values;
        let pairs = lowest_eigenpairs(&m, 5, &LanczosOptions::default()).unwrap();
        for (p, exact) in pairs.iter().zip(&dense) {
            assert!((p.value - exact).abs() < 1e-9, "{} vs {exact}", p.value);
            assert!(p.residual <= 1e-9);
        }
    }

    #[test]
    fn finds_degenerate_copies() {
        // Block diagonal with a doubly degenerate lowest level.
        let m = DenseMatrix::from_fn(30, |i, j| {
            if i == j {
                if i < 2 {
                    -5.0
                } else {
                    i as f64 * 0.1
                }
            } else if (i as i64 - j as i64).abs() == 1 && i >= 2 && j >= 2 {
                0.05
            } else {
                0.0
            }
        });
        let pairs = lowest_eigenpairs(&m, 3, &LanczosOptions::default()).unwrap();
        assert!((pairs[0].value + 5.0).abs() < 1e-10);
        assert!((pairs[1].value + 5.0).abs() < 1e-10);
        assert!(pairs[2].value > 0.0);
    }

    #[test]
    fn rejects_k_not_below_dimension() {
        let m = random_symmetric(4, 1);
        assert!(lowest_eigenpairs(&m, 4, &LanczosOptions::default()).is_err());
    }
}
