use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::scalar::{abs_c, conj_c, lit, to_f64, Real};

/// Hermitian positive-definite weight `H` defining `<u, v>_H = v* H u`.
///
/// Stores the principal square root and its inverse, both from a Hermitian
/// eigendecomposition (exact for diagonal `H`).
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrizer<T: Real> {
    matrix: ComplexMatrix<T>,
    sqrt: ComplexMatrix<T>,
    inv_sqrt: ComplexMatrix<T>,
    eigenvalues: Vec<T>,
    cond: T,
    identity: bool,
}

impl<T: Real> Symmetrizer<T> {
    pub fn identity(n: usize) -> Self {
        let i = ComplexMatrix::identity(n);
        Self {
            matrix: i.clone(),
            sqrt: i.clone(),
            inv_sqrt: i,
            eigenvalues: vec![T::one(); n],
            cond: T::one(),
            identity: true,
        }
    }

    /// Validates and factors `H`. Asymmetry up to `1e-12` (relative) is
    /// removed by averaging with the adjoint.
    pub fn new(h: ComplexMatrix<T>) -> Result<Self> {
        let n = h.dim();
        let scale = h.max_abs_entry().max(T::one());
        let asym = (&h - &h.adjoint()).max_abs_entry();
        if asym > lit::<T>(1e-12) * scale {
            return Err(Error::NotHermitian(to_f64(asym / scale)));
        }
        let h = h.hermitian_part();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || h.get(i, j) == Complex::new(T::zero(), T::zero())));
        let (values, vectors) = if diagonal {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| h.get(a, a).re.partial_cmp(&h.get(b, b).re).unwrap());
            let vals = order.iter().map(|&k| h.get(k, k).re).collect::<Vec<_>>();
            let vecs = DMatrix::from_fn(n, n, |i, j| {
                if i == order[j] {
                    Complex::new(T::one(), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            });
            (vals, vecs)
        } else {
            hermitian_eigen(h.as_dmatrix())?
        };
        Self::assemble(values, vectors, Some(h))
    }

    /// Weight `V diag(values) V*` from a known unitary eigenbasis.
    pub fn from_spectral(values: Vec<T>, vectors: DMatrix<Complex<T>>) -> Result<Self> {
        let n = values.len();
        if vectors.nrows() != n || vectors.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: vectors.nrows(),
            });
        }
        let defect = (vectors.adjoint() * &vectors - DMatrix::identity(n, n))
            .iter()
            .fold(T::zero(), |acc, z| acc.max(abs_c(*z)));
        if defect > lit(1e-10) {
            return Err(Error::InvalidParameter("eigenbasis is not unitary".into()));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let sorted: Vec<T> = order.iter().map(|&k| values[k]).collect();
        let basis = DMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
        Self::assemble(sorted, basis, None)
    }

    fn assemble(values: Vec<T>, vectors: DMatrix<Complex<T>>, h: Option<ComplexMatrix<T>>) -> Result<Self> {
        let n = values.len();
        let lmin = values.first().copied().unwrap_or(T::one());
        let lmax = values.last().copied().unwrap_or(T::one());
        if !(lmin > T::zero()) {
            return Err(Error::NotPositiveDefinite(to_f64(lmin)));
        }
        let build = |f: &dyn Fn(T) -> T| -> ComplexMatrix<T> {
            let mut out = DMatrix::zeros(n, n);
            for (k, &lam) in values.iter().enumerate() {
                let v = vectors.column(k);
                let w = Complex::new(f(lam), T::zero());
                for j in 0..n {
                    let vj = conj_c(v[j]) * w;
                    for i in 0..n {
                        out[(i, j)] += v[i] * vj;
                    }
                }
            }
            ComplexMatrix::from_dmatrix(out).expect("finite factor")
        };
        let matrix = match h {
            Some(h) => h,
            None => build(&|x: T| x),
        };
        let sqrt = build(&|x: T| x.sqrt());
        let inv_sqrt = build(&|x: T| T::one() / x.sqrt());
        let identity = matrix == ComplexMatrix::identity(n);
        Ok(Self {
            matrix,
            sqrt,
            inv_sqrt,
            cond: lmax.max(T::one() / lmin),
            eigenvalues: values,
            identity,
        })
    }

    /// Diagonal weight `diag(d)`.
    pub fn diagonal(d: &[T]) -> Result<Self> {
        let entries: Vec<Complex<T>> = d.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::new(ComplexMatrix::from_diagonal(&entries)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `C_H = max(lambda_max, 1 / lambda_min) >= 1`.
    pub fn cond(&self) -> T {
        self.cond
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or(T::one())
    }

    pub fn lambda_max(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or(T::one())
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn sqrt(&self) -> &ComplexMatrix<T> {
        &self.sqrt
    }

    pub fn inv_sqrt(&self) -> &ComplexMatrix<T> {
        &self.inv_sqrt
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// `H^{1/2} A H^{-1/2}`.
    pub fn transform(&self, a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        if self.identity {
            return Ok(a.clone());
        }
        Ok(&(&self.sqrt * a) * &self.inv_sqrt)
    }

    /// `|u|_H = sqrt(u* H u)`.
    pub fn norm(&self, u: &DVector<Complex<T>>) -> T {
        let hu = self.matrix.mul_vec(u);
        u.iter()
            .zip(hu.iter())
            .fold(T::zero(), |acc, (a, b)| acc + (conj_c(*a) * *b).re)
            .max(T::zero())
            .sqrt()
    }
}
