//! Dense complex matrices and the handful of factorizations the analysis needs.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs_c, is_finite_c, lit, Real};

/// Dense square complex matrix with finite entries.
///
/// Arithmetic through the operator impls does not re-check finiteness; the
/// constructors do.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    data: DMatrix<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn from_dmatrix(data: DMatrix<Complex<T>>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        for j in 0..data.ncols() {
            for i in 0..data.nrows() {
                if !is_finite_c(data[(i, j)]) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { data })
    }

    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[Complex<T>]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn from_real_row_major(n: usize, entries: &[T]) -> Result<Self> {
        let c: Vec<Complex<T>> = entries.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::from_row_major(n, &c)
    }

    pub fn from_real(m: &DMatrix<T>) -> Result<Self> {
        Self::from_dmatrix(m.map(|x| Complex::new(x, T::zero())))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn from_diagonal(d: &[Complex<T>]) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_diagonal(&DVector::from_row_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex<T>> {
        self.data
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex<T>> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            data: self.data.transpose(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        let s = Complex::new(s, T::zero());
        Self {
            data: self.data.map(|z| z * s),
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            data: self.data.map(|z| z * s),
        }
    }

    /// `A + s I`.
    pub fn shift(&self, s: Complex<T>) -> Self {
        let mut data = self.data.clone();
        for i in 0..self.dim() {
            data[(i, i)] += s;
        }
        Self { data }
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = Complex::new(lit::<T>(0.5), T::zero());
        Self {
            data: (&self.data + self.data.adjoint()).map(|z| z * half),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == T::zero())
    }

    pub fn real_part(&self) -> DMatrix<T> {
        self.data.map(|z| z.re)
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (j + 1..n).all(|i| self.data[(i, j)] == Complex::new(T::zero(), T::zero())))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.transpose().is_upper_triangular()
    }

    pub fn max_abs_entry(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &z| acc.max(abs_c(z)))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
            .sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        if self.is_real() {
            real_spectral_norm(&self.real_part())
        } else {
            complex_spectral_norm(&self.data)
        }
    }

    /// All eigenvalues of the (generally non-normal) matrix.
    ///
    /// Triangular matrices return their diagonal directly: defective blocks
    /// like `J_q` are too ill-conditioned for an iterative solver to recover
    /// the multiple eigenvalue accurately.
    pub fn eigenvalues(&self) -> Result<Vec<Complex<T>>> {
        let n = self.dim();
        if n == 0 {
            return Ok(Vec::new());
        }
        if self.is_upper_triangular() || self.is_lower_triangular() {
            return Ok((0..n).map(|i| self.data[(i, i)]).collect());
        }
        let cap = 200 * n + 1000;
        if self.is_real() {
            let schur = Schur::try_new(self.real_part(), T::default_epsilon(), cap)
                .ok_or_else(|| Error::Eigensolver("real Schur iteration did not converge".into()))?;
            Ok(schur.complex_eigenvalues().iter().copied().collect())
        } else {
            let schur = Schur::try_new(self.data.clone(), T::default_epsilon(), cap).ok_or_else(
                || Error::Eigensolver("complex Schur iteration did not converge".into()),
            )?;
            let ev = schur
                .eigenvalues()
                .ok_or_else(|| Error::Eigensolver("complex Schur form has 2x2 blocks".into()))?;
            Ok(ev.iter().copied().collect())
        }
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.data.clone().lu().try_inverse().map(|data| Self { data })
    }

    pub fn mul_vec(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        &self.data * v
    }
}

impl<'a, T: Real> Mul<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix {
            data: &self.data * &rhs.data,
        }
    }
}

impl<'a, T: Real> Add<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl<'a, T: Real> Sub<&'a ComplexMatrix<T>> for &'a ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &'a ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix { data: -&self.data }
    }
}

fn iteration_cap(n: usize) -> usize {
    100 * n + 1000
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen<T: Real>(m: &DMatrix<Complex<T>>) -> Result<(Vec<T>, DMatrix<Complex<T>>)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), T::default_epsilon(), iteration_cap(n))
        .ok_or_else(|| Error::Eigensolver("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
pub fn hermitian_max_eigenpair<T: Real>(
    m: &DMatrix<Complex<T>>,
) -> Result<(T, DVector<Complex<T>>)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), T::default_epsilon(), iteration_cap(n))
        .ok_or_else(|| Error::Eigensolver("Hermitian eigensolver did not converge".into()))?;
    let mut best = 0;
    for k in 1..n {
        if eig.eigenvalues[k] > eig.eigenvalues[best] {
            best = k;
        }
    }
    Ok((eig.eigenvalues[best], eig.eigenvectors.column(best).into_owned()))
}

pub fn hermitian_max_eigenvalue<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    if m.iter().all(|z| z.im == T::zero()) {
        return symmetric_max_eigenvalue(&m.map(|z| z.re));
    }
    m.symmetric_eigenvalues().max()
}

pub fn symmetric_max_eigenvalue<T: Real>(m: &DMatrix<T>) -> T {
    m.symmetric_eigenvalues().max()
}

pub fn real_spectral_norm<T: Real>(m: &DMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    let gram = m.transpose() * m;
    symmetric_max_eigenvalue(&gram).max(T::zero()).sqrt()
}

pub fn complex_spectral_norm<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    let gram = m.adjoint() * m;
    gram.symmetric_eigenvalues().max().max(T::zero()).sqrt()
}

/// Roots of the real polynomial `c[0] + c[1] x + ... + c[d] x^d` (`c[d] != 0`)
/// from the eigenvalues of its companion matrix.
pub fn polynomial_roots<T: Real>(c: &[T]) -> Result<Vec<Complex<T>>> {
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = c[d];
    if lead == T::zero() {
        return Err(Error::InvalidParameter("leading coefficient is zero".into()));
    }
    if d == 1 {
        return Ok(vec![Complex::new(-c[0] / lead, T::zero())]);
    }
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -c[d - 1 - j] / lead
        } else if i == j + 1 {
            T::one()
        } else {
            T::zero()
        }
    });
    let schur = Schur::try_new(companion, T::default_epsilon(), 200 * d + 1000)
        .ok_or_else(|| Error::Eigensolver("companion matrix Schur iteration failed".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}
