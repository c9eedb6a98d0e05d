use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{abs_c, cis, lit, to_f64, Real};

/// Number of sampling circles `|z| = 1 + 2^{-j}`, `j = 1..=RADII`.
pub const RADII: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolventMode {
    /// Weight `|z| - 1` on circles outside the unit disc.
    Standard,
    /// Weight `|z - 1|` on the unit circle (minus `z = 1`) and the outer circles.
    Dissipative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventSample {
    pub z: [f64; 2],
    pub norm: f64,
    pub weight: f64,
}

/// Sampled resolvent constant. `constant` is a lower bound on the true supremum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventReport {
    pub mode: ResolventMode,
    pub samples: Vec<ResolventSample>,
    pub constant: f64,
    /// Sample points where `zI - P` was numerically singular.
    pub skipped: usize,
    pub lower_bound: bool,
}

/// `max weight(z) ||(zI - P)^{-1}||` over `samples` angles on each sampling circle.
pub fn resolvent_constant<T: Real>(
    p: &ComplexMatrix<T>,
    mode: ResolventMode,
    samples: usize,
) -> Result<ResolventReport> {
    if samples < 16 {
        return Err(Error::InvalidParameter("resolvent_constant needs samples >= 16".into()));
    }
    let mut radii: Vec<T> = (1..=RADII).map(|j| T::one() + lit(0.5f64.powi(j as i32))).collect();
    if mode == ResolventMode::Dissipative {
        radii.push(T::one());
    }
    let step = T::two_pi() / lit(samples as f64);
    let mut out = Vec::with_capacity(radii.len() * samples);
    let mut skipped = 0;
    let mut constant = 0.0f64;
    for &r in &radii {
        for k in 0..samples {
            // The unit circle is sampled at half-step offsets so z = 1 is never hit.
            let offset = if r == T::one() { lit(0.5) } else { T::zero() };
            let z: Complex<T> = cis(step * (lit::<T>(k as f64) + offset)) * r;
            let weight = match mode {
                ResolventMode::Standard => r - T::one(),
                ResolventMode::Dissipative => abs_c(z - T::one()),
            };
            let shifted = (-p).shift(z);
            let norm = match shifted.try_inverse() {
                Some(inv) => inv.spectral_norm(),
                None => {
                    skipped += 1;
                    continue;
                }
            };
            if !norm.is_finite() {
                skipped += 1;
                continue;
            }
            let (w, nv) = (to_f64(weight), to_f64(norm));
            constant = constant.max(w * nv);
            out.push(ResolventSample {
                z: [to_f64(z.re), to_f64(z.im)],
                norm: nv,
                weight: w,
            });
        }
    }
    Ok(ResolventReport {
        mode,
        samples: out,
        constant,
        skipped,
        lower_bound: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let r = resolvent_constant(&ComplexMatrix::<f64>::zeros(3), ResolventMode::Standard, 64).unwrap();
        assert!(r.constant <= 1.0);
        assert_eq!(r.samples.len(), RADII * 64);
        assert!(r.samples.iter().all(|s| (s.z[0].hypot(s.z[1])) > 1.0));
    }

    #[test]
    fn normal_matrix_in_unit_disc() {
        let d = ComplexMatrix::from_diagonal(&[
            Complex::new(1.0, 0.0),
            Complex::new(0.0, -1.0),
            Complex::new(0.3, 0.2),
        ])
        .unwrap();
        let r = resolvent_constant(&d, ResolventMode::Standard, 64).unwrap();
        assert!((r.constant - 1.0).abs() < 1e-12, "{}", r.constant);
    }

    #[test]
    fn dissipative_mode_skips_unit_point() {
        let d = ComplexMatrix::<f64>::from_diagonal(&[Complex::new(0.5, 0.0)]).unwrap();
        let r = resolvent_constant(&d, ResolventMode::Dissipative, 32).unwrap();
        assert_eq!(r.skipped, 0);
        assert!(r.samples.iter().all(|s| (s.z[0] - 1.0).hypot(s.z[1]) > 0.0));
        assert!(r.constant > 0.0 && r.constant <= 2.0);
        assert!(resolvent_constant(&d, ResolventMode::Standard, 8).is_err());
    }
}
