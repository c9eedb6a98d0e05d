use nalgebra::DMatrix;
use num_complex::Complex;

use super::{OperatorBundle, OperatorMeta};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::numerical_range::Symmetrizer;
use crate::scalar::{cis, lit, to_f64, Real};

fn spacing<T: Real>(modes: usize) -> T {
    T::two_pi() / lit((2 * modes + 1) as f64)
}

/// `x_j = 2 pi j / (2N + 1)` for `j = 0..2N`.
pub fn fourier_grid<T: Real>(modes: usize) -> Vec<T> {
    let h = spacing::<T>(modes);
    (0..2 * modes + 1).map(|j| h * lit(j as f64)).collect()
}

/// Spectral differentiation on `2N + 1` points: real antisymmetric, with
/// off-diagonal entries `(-1)^{j-k} / (2 sin((j - k) dx / 2))`.
pub fn fourier_differentiation<T: Real>(modes: usize) -> DMatrix<T> {
    let n = 2 * modes + 1;
    let half = spacing::<T>(modes) * lit(0.5);
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            return T::zero();
        }
        let d = j as i64 - k as i64;
        let sign = if d.rem_euclid(2) == 0 { T::one() } else { -T::one() };
        sign / ((half * lit(d as f64)).sin() * lit(2.0))
    })
}

/// `H = F diag((1 + k^2) / N^2) F*` with `F_{jk} = e^{i j k dx} / sqrt(2N + 1)`, `k = -N..N`.
pub fn h1_symmetrizer<T: Real>(modes: usize) -> Result<Symmetrizer<T>> {
    if modes == 0 {
        return Err(Error::InvalidParameter("h1_symmetrizer needs N >= 1".into()));
    }
    let n = 2 * modes + 1;
    let h = spacing::<T>(modes);
    let norm = T::one() / lit::<T>(n as f64).sqrt();
    let nn = lit::<T>((modes * modes) as f64);
    let wave = |c: usize| c as i64 - modes as i64;
    let weights: Vec<T> = (0..n)
        .map(|c| (T::one() + lit::<T>((wave(c) * wave(c)) as f64)) / nn)
        .collect();
    let f = DMatrix::from_fn(n, n, |j, c| cis(h * lit((j as i64 * wave(c)) as f64)) * norm);
    Symmetrizer::from_spectral(weights, f)
}

/// `diag(a(x_j)) D^F` with the H^1 weight.
pub fn fourier_method<T: Real>(modes: usize, a_samples: &[T]) -> Result<OperatorBundle<T>> {
    let n = 2 * modes + 1;
    if a_samples.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a_samples.len(),
        });
    }
    if modes == 0 {
        return Err(Error::InvalidParameter("fourier_method needs N >= 1".into()));
    }
    let d = fourier_differentiation::<T>(modes);
    let m = DMatrix::from_fn(n, n, |j, k| Complex::new(a_samples[j] * d[(j, k)], T::zero()));
    let amax = a_samples.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    OperatorBundle::new(
        ComplexMatrix::from_dmatrix(m)?,
        h1_symmetrizer(modes)?,
        OperatorMeta::new("fourier", n, &[("modes", modes as f64), ("a_max", to_f64(amax))]),
    )
}
