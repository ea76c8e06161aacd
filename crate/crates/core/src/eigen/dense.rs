//! Dense real symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by implicit-shift QL.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        self.data
            .par_chunks(self.n.max(1))
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_row_sum(&self) -> T {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.iter().map(|x| x.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }
}

/// Eigenvalues ascending; `vectors[k]` is the unit eigenvector of `values[k]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<Vec<T>>>,
}

const QL_MAX_SWEEPS: usize = 60;

/// Full spectrum of a symmetric matrix (the lower triangle is read).
pub fn symmetric_eigen<T: Real>(matrix: &DenseMatrix<T>, want_vectors: bool) -> Result<SymmetricEigen<T>> {
    let n = matrix.dim();
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: want_vectors.then(Vec::new),
        });
    }
    let mut a = matrix.data.clone();
    let (mut d, mut e, reflectors) = tridiagonalize(&mut a, n);
    drop(a);
    let mut z = if want_vectors {
        Some(accumulate_reflectors(n, &reflectors))
    } else {
        None
    };
    drop(reflectors);
    tridiagonal_ql(&mut d, &mut e, z.as_deref_mut())?;
    Ok(sort_pairs(d, z))
}

/// Spectrum of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i+1`).
pub fn tridiagonal_eigen<T: Real>(diag: &[T], off: &[T], want_vectors: bool) -> Result<SymmetricEigen<T>> {
    let n = diag.len();
    assert!(off.len() + 1 >= n, "off-diagonal too short");
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = want_vectors.then(|| {
        (0..n)
            .map(|c| {
                (0..n)
                    .map(|r| if r == c { T::one() } else { T::zero() })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    tridiagonal_ql(&mut d, &mut e, z.as_deref_mut())?;
    Ok(sort_pairs(d, z))
}

/// Eigenvalues of a Hermitian matrix given by rows, via the real symmetric
/// embedding `[[Re, -Im], [Im, Re]]` whose spectrum is each eigenvalue twice.
pub fn hermitian_eigenvalues<T: Real>(rows: &[Vec<Complex<T>>]) -> Result<Vec<T>> {
    let n = rows.len();
    let big = DenseMatrix::from_fn(2 * n, |i, j| {
        let z = rows[i % n][j % n];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let all = symmetric_eigen(&big, false)?.values;
    Ok(all.chunks(2).map(|p| (p[0] + p[1]) / T::lit(2.0)).collect())
}

fn sort_pairs<T: Real>(values: Vec<T>, vectors: Option<Vec<Vec<T>>>) -> SymmetricEigen<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vectors = vectors.map(|mut cols| order.iter().map(|&i| std::mem::take(&mut cols[i])).collect());
    SymmetricEigen {
        values: sorted,
        vectors,
    }
}

struct Reflector<T> {
    /// Acts on indices `offset..n`; `v[0] = 1`.
    offset: usize,
    v: Vec<T>,
    tau: T,
}

/// Householder reduction of the row-major symmetric `a`. Returns diagonal,
/// off-diagonal (last entry zero) and the reflectors `Q = H_0 H_1 ...`.
fn tridiagonalize<T: Real>(a: &mut [T], n: usize) -> (Vec<T>, Vec<T>, Vec<Reflector<T>>) {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    let two = T::lit(2.0);

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let x: Vec<T> = a[k * n + start..(k + 1) * n].to_vec();
        let alpha = x[0];
        let sigma: T = x[1..].iter().map(|&t| t * t).sum();
        if sigma == T::zero() {
            e[k] = alpha;
            continue;
        }
        let norm = (alpha * alpha + sigma).sqrt();
        let beta = if alpha >= T::zero() { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = T::one() / (alpha - beta);
        let mut v = x;
        v[0] = T::one();
        for t in &mut v[1..] {
            *t *= scale;
        }
        e[k] = beta;

        // p = tau B v over the trailing block B = a[start.., start..]
        let trailing = &mut a[start * n..];
        let p: Vec<T> = trailing
            .par_chunks(n)
            .map(|row| {
                let r = &row[start..];
                tau * r.iter().zip(&v).map(|(&b, &vv)| b * vv).sum::<T>()
            })
            .collect();
        let pv: T = p.iter().zip(&v).map(|(&a, &b)| a * b).sum();
        let kfac = -tau * pv / two;
        let w: Vec<T> = p.iter().zip(&v).map(|(&pi, &vi)| pi + kfac * vi).collect();
        trailing.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let vi = v[i];
            let wi = w[i];
            for (j, b) in row[start..].iter_mut().enumerate() {
                *b -= vi * w[j] + wi * v[j];
            }
        });
        debug_assert_eq!(w.len(), m);
        reflectors.push(Reflector { offset: start, v, tau });
    }
    for k in 0..n {
        d[k] = a[k * n + k];
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)];
    }
    e[n - 1] = T::zero();
    (d, e, reflectors)
}

/// Columns of `Q = H_0 H_1 ... H_{n-3}`.
fn accumulate_reflectors<T: Real>(n: usize, reflectors: &[Reflector<T>]) -> Vec<Vec<T>> {
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { T::one() } else { T::zero() }).collect())
        .collect();
    for h in reflectors.iter().rev() {
        cols.par_iter_mut().for_each(|col| {
            let seg = &mut col[h.offset..];
            let dot: T = seg.iter().zip(&h.v).map(|(&a, &b)| a * b).sum();
            if dot != T::zero() {
                let f = h.tau * dot;
                for (x, &vv) in seg.iter_mut().zip(&h.v) {
                    *x -= f * vv;
                }
            }
        });
    }
    cols
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. `e[i]` couples
/// `i` and `i+1`; `e[n-1]` is scratch. Rotations are applied to the
/// columns `z` when given.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T], mut z: Option<&mut [Vec<T>]>) -> Result<()> {
    let n = d.len();
    let eps = T::epsilon();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::Convergence {
                    iterations: sweeps,
                    detail: format!("tridiagonal QL stalled at eigenvalue {l}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(cols) = z.as_deref_mut() {
                    let (left, right) = cols.split_at_mut(i + 1);
                    let ci = &mut left[i];
                    let cj = &mut right[0];
                    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                        let f = *y;
                        *y = s * *x + c * f;
                        *x = c * *x - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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
    fn two_by_two() {
        let m = DenseMatrix::from_fn(2, |i, j| if i == j { 0.0f64 } else { 2.0 });
        let eig = symmetric_eigen(&m, true).unwrap();
        assert!((eig.values[0] + 2.0).abs() < 1e-15);
        assert!((eig.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn residuals_and_orthogonality() {
        for (n, seed) in [(1, 1), (3, 2), (17, 3), (60, 4)] {
            let m = random_symmetric(n, seed);
            let eig = symmetric_eigen(&m, true).unwrap();
            let vecs = eig.vectors.as_ref().unwrap();
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            let scale = m.max_row_sum();
            for (k, v) in vecs.iter().enumerate() {
                let mv = m.matvec(v);
                let res: f64 = mv
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a - eig.values[k] * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-13 * scale, "n={n} k={k} res={res}");
                for w in &vecs[..k] {
                    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                    assert!(dot.abs() < 1e-12);
                }
            }
            let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
            let sum: f64 = eig.values.iter().sum();
            assert!((trace - sum).abs() < 1e-12 * n as f64);
        }
    }

    #[test]
    fn values_only_matches_with_vectors() {
        let m = random_symmetric(40, 9);
        let a = symmetric_eigen(&m, false).unwrap();
        let b = symmetric_eigen(&m, true).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Diagonal with repeated entries hidden behind a rotation.
        let m = DenseMatrix::from_fn(4, |i, j| if i == j { [1.0, 1.0, 3.0, 3.0][i] } else { 0.0 });
        let eig = symmetric_eigen(&m, false).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0, 3.0, 3.0]);
    }

    #[test]
    fn tridiagonal_path() {
        // Free chain: eigenvalues 2cos(kπ/(n+1)).
        let n = 12;
        let eig = tridiagonal_eigen(&vec![0.0; n], &vec![1.0; n - 1], false).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
            .collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in eig.values.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_embedding() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let rows = vec![
            vec![Complex::new(2.0, 0.0), Complex::new(0.0, 1.0)],
            vec![Complex::new(0.0, -1.0), Complex::new(2.0, 0.0)],
        ];
        let ev: Vec<f64> = hermitian_eigenvalues(&rows).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn single_precision_instantiation() {
        let m = DenseMatrix::<f32>::from_fn(3, |i, j| if i == j { 2.0 } else { -1.0 });
        let eig = symmetric_eigen(&m, false).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-5);
        assert!((eig.values[2] - 3.0).abs() < 1e-5);
    }
}
