//! Stability experiments on `P_s(dt L)` and their verdicts.

mod cfl;
mod growth;
mod report;
mod resolvent;
mod scenarios;

pub use cfl::{verify_cfl, CflReport, CflRoute};
pub use growth::{power_growth, GrowthMeta, GrowthReport, DIVERGENCE_CUTOFF};
pub use report::{ScenarioReport, Series, Verdict};
pub use resolvent::{resolvent_constant, ResolventMode, ResolventReport, ResolventSample};
pub use scenarios::{run_scenario, scenario_defaults, SCENARIO_NAMES};

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::numerical_range::{support_on, Symmetrizer};
use crate::scalar::{abs_c, lit, to_f64, Real};
use crate::stability_polynomials::StabilityPolynomial;

/// `sum_k a_k A^k` by nested multiplication.
pub fn polynomial_of_matrix<T: Real>(coeffs: &[T], a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = a.dim();
    let mut acc = ComplexMatrix::zeros(n);
    let mut first = true;
    for &c in coeffs.iter().rev() {
        acc = if first {
            ComplexMatrix::identity(n).scale(c)
        } else {
            (&acc * a).shift(Complex::new(c, T::zero()))
        };
        first = false;
    }
    acc
}

/// `P_s(dt L)`.
pub fn rk_matrix<T: Real>(p: &StabilityPolynomial<T>, dt: T, l: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    polynomial_of_matrix(p.coeffs(), &l.scale(dt))
}

/// `theta = max_k |P(dt lambda_k(L))|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralCheck<T: Real> {
    pub theta: T,
    pub inside: bool,
}

pub fn spectral_check<T: Real>(
    p: &StabilityPolynomial<T>,
    dt: T,
    l: &ComplexMatrix<T>,
) -> Result<SpectralCheck<T>> {
    let theta = l
        .eigenvalues()?
        .iter()
        .map(|&lam| p.eval_abs(lam * dt))
        .fold(T::zero(), T::max);
    Ok(SpectralCheck {
        theta,
        inside: theta <= T::one() + lit(1e-10),
    })
}

/// Whether `||P||_H <= 1` up to `tol` on the squared norm.
pub fn strong_stability_check<T: Real>(p: &ComplexMatrix<T>, h: &Symmetrizer<T>, tol: T) -> Result<bool> {
    let norm = h.transform(p)?.spectral_norm();
    Ok(norm * norm <= T::one() + tol)
}

/// Maximum column sum of moduli.
pub fn l1_induced_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    (0..n)
        .map(|j| (0..n).fold(T::zero(), |acc, i| acc + abs_c(a.get(i, j))))
        .fold(T::zero(), T::max)
}

/// `||p(A~)|| / max |p(z)|` over `m` sampled boundary points of `W_H(A)`.
pub fn crouzeix_ratio<T: Real>(
    a: &ComplexMatrix<T>,
    h: &Symmetrizer<T>,
    p: &StabilityPolynomial<T>,
    m: usize,
) -> Result<T> {
    if m < 256 {
        return Err(Error::InvalidParameter("crouzeix_ratio needs m >= 256 angles".into()));
    }
    let b = h.transform(a)?;
    let num = polynomial_of_matrix(p.coeffs(), &b).spectral_norm();
    let step = T::two_pi() / lit(m as f64);
    let mut den = T::zero();
    for k in 0..m {
        let z = support_on(&b, step * lit(k as f64))?.witness;
        den = den.max(p.eval_abs(z));
    }
    if den < lit(1e-300) {
        return Err(Error::DegenerateRange(to_f64(den)));
    }
    Ok(num / den)
}
