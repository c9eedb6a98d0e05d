use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{real_spectral_norm, ComplexMatrix};
use crate::numerical_range::Symmetrizer;
use crate::scalar::{lit, Real};

/// Norms above this stop the recurrence.
pub const DIVERGENCE_CUTOFF: f64 = 1e100;

/// Labels attached to a power-growth run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GrowthMeta {
    pub polynomial: Option<String>,
    pub operator: Option<String>,
    pub dt: Option<f64>,
    pub cfl: Option<f64>,
}

/// `||P^n||_H` for `n = 0..` until `n_max` or the divergence cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport<T: Real> {
    pub norms: Vec<T>,
    pub sup_norm: T,
    pub threshold: T,
    /// Least `n` with `norms[n] > threshold`.
    pub first_exceed: Option<usize>,
    /// Set when a norm exceeded the threshold or the run was cut off.
    pub diverged: bool,
    /// Set when a norm exceeded [`DIVERGENCE_CUTOFF`]; `norms` stops there.
    pub truncated: bool,
    pub meta: GrowthMeta,
}

impl<T: Real> GrowthReport<T> {
    pub fn with_meta(mut self, meta: GrowthMeta) -> Self {
        self.meta = meta;
        self
    }

    /// `norms[n]` or `None` past truncation.
    pub fn norm(&self, n: usize) -> Option<T> {
        self.norms.get(n).copied()
    }
}

/// Accumulates `B <- P~ B` from `B = I` with `P~ = H^{1/2} P H^{-1/2}` and
/// records the spectral norm after every product. Real input runs in real
/// arithmetic.
pub fn power_growth<T: Real>(
    p: &ComplexMatrix<T>,
    n_max: usize,
    h: &Symmetrizer<T>,
    threshold: T,
) -> Result<GrowthReport<T>> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("power_growth needs n_max >= 1".into()));
    }
    if !(threshold > T::zero()) {
        return Err(Error::InvalidParameter("threshold must be positive".into()));
    }
    let pt = h.transform(p)?;
    let cutoff = lit::<T>(DIVERGENCE_CUTOFF);
    let mut norms = Vec::with_capacity(n_max + 1);
    norms.push(T::one());
    let mut truncated = false;

    let mut record = |norm: T, norms: &mut Vec<T>| -> bool {
        if !(norm <= cutoff) {
            truncated = true;
            return false;
        }
        norms.push(norm);
        true
    };

    if pt.is_real() {
        let pr = pt.real_part();
        let mut b = DMatrix::<T>::identity(pt.dim(), pt.dim());
        for _ in 0..n_max {
            b = &pr * &b;
            if !record(real_spectral_norm(&b), &mut norms) {
                break;
            }
        }
    } else {
        let mut b = ComplexMatrix::identity(pt.dim());
        for _ in 0..n_max {
            b = &pt * &b;
            if !record(b.spectral_norm(), &mut norms) {
                break;
            }
        }
    }

    let sup_norm = norms.iter().copied().fold(T::zero(), T::max);
    let first_exceed = norms.iter().position(|&v| v > threshold);
    Ok(GrowthReport {
        diverged: first_exceed.is_some() || truncated,
        norms,
        sup_norm,
        threshold,
        first_exceed,
        truncated,
        meta: GrowthMeta::default(),
    })
}
