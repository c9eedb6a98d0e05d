//! Runge-Kutta stability polynomials and their stability regions.

mod region;
mod ssp;

pub use region::{fmt17, region_grid, Bbox, RegionGrid};
pub use ssp::{
    ssp_decomposition, ssp_expand, ssp_residual, ssp_weights_f64, taylor_coefficients, SspTerm,
};

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::polynomial_roots;
use crate::scalar::{cis, lit, norm_sqr_c, Real};

/// Default bisection tolerance for radii.
pub const BISECTION_TOL: f64 = 1e-8;
/// Default slack on `|P(z)| <= 1`.
pub const REGION_TOL: f64 = 1e-12;
/// Tolerance used to detect the Taylor prefix `a_k = 1/k!`.
pub const ORDER_TOL: f64 = 1e-12;
/// Samples per boundary piece in the semi-disc inclusion test.
pub const SEMIDISC_SAMPLES: usize = 4096;

/// Amplification polynomial `P(z) = a_0 + a_1 z + ... + a_s z^s` of an explicit RK method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityPolynomial<T: Real> {
    coeffs: Vec<T>,
    order: usize,
    label: String,
}

/// The closed left half-disc `{Re z <= 0, |z| <= radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiDisc<T: Real> {
    pub radius: T,
}

impl<T: Real> SemiDisc<T> {
    pub fn contains(&self, z: Complex<T>) -> bool {
        z.re <= T::zero() && norm_sqr_c(z) <= self.radius * self.radius
    }
}

fn factorial<T: Real>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * lit::<T>(j as f64))
}

impl<T: Real> StabilityPolynomial<T> {
    /// Builds a polynomial from `a_0..a_s`; the leading coefficient must be nonzero.
    pub fn new(coeffs: Vec<T>, label: impl Into<String>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter(
                "stability polynomial needs degree >= 1".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        if *coeffs.last().unwrap() == T::zero() {
            return Err(Error::InvalidParameter("leading coefficient a_s is zero".into()));
        }
        let order = detect_order(&coeffs);
        Ok(Self {
            coeffs,
            order,
            label: label.into(),
        })
    }

    /// `sum_{k<=s} z^k / k!`, the stability polynomial of every `s`-stage, order-`s` method.
    pub fn taylor(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter(
                "taylor polynomial needs s >= 1".into(),
            ));
        }
        let coeffs = (0..=s).map(|k| T::one() / factorial::<T>(k)).collect();
        Self::new(coeffs, format!("rk{s}"))
    }

    /// Resolves `rk1`..`rk4` (or `rkN`) to the corresponding Taylor polynomial.
    pub fn from_label(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let s = lower
            .strip_prefix("rk")
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&s| s >= 1)
            .ok_or_else(|| Error::UnknownMethod {
                name: name.to_string(),
            })?;
        Self::taylor(s)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest `r` with `a_k = 1/k!` for all `k <= r`; zero without a Taylor prefix.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc * z + a)
    }

    pub fn eval_abs(&self, z: Complex<T>) -> T {
        let w = self.eval(z);
        w.re.hypot(w.im)
    }

    pub fn in_region(&self, z: Complex<T>, tol: T) -> bool {
        self.eval_abs(z) <= T::one() + tol
    }

    /// Largest `R` with `|P(i sigma)| <= 1` on `[-R, R]`, or zero.
    ///
    /// `g(sigma) = |P(i sigma)|^2 - 1` is even, so it is handled as a polynomial
    /// `h(t)` in `t = sigma^2`. Low-order coefficients annihilated by the Taylor
    /// prefix are dropped, the positive real roots of the remaining factor come
    /// from a companion matrix, and the first sign change to positive is refined
    /// by bisection in `sigma`.
    pub fn imaginary_interval_radius(&self, tol: T) -> T {
        let h = self.interval_polynomial();
        let first = match h.iter().position(|&c| c != T::zero()) {
            Some(k) => k,
            None => return T::zero(),
        };
        let ht: Vec<T> = h[first..].to_vec();
        if ht[0] > T::zero() {
            return T::zero();
        }
        let eval_h = |t: T| ht.iter().rev().fold(T::zero(), |acc, &c| acc * t + c);

        let mut roots: Vec<T> = polynomial_roots(&ht)
            .unwrap_or_default()
            .into_iter()
            .filter(|z| z.re > T::zero() && z.im.abs() <= lit::<T>(1e-6) * (T::one() + z.re.abs()))
            .map(|z| z.re)
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots.dedup();

        // Bracket [t_lo, t_hi] with h(t_lo) <= 0 < h(t_hi) around the first crossing.
        let mut bracket = None;
        let mut left = T::zero();
        for (k, &t) in roots.iter().enumerate() {
            let right = match roots.get(k + 1) {
                Some(&next) => (t + next) * lit(0.5),
                None => t * lit(2.0) + T::one(),
            };
            if eval_h(right) > T::zero() {
                bracket = Some((left, right));
                break;
            }
            left = right;
        }
        let (t_lo, t_hi) = match bracket {
            Some(b) => b,
            None => {
                // Root extraction missed the crossing; h -> +inf, so double until positive.
                let mut hi = T::one();
                while eval_h(hi) <= T::zero() && hi < lit(1e30) {
                    hi *= lit(2.0);
                }
                (T::zero(), hi)
            }
        };

        let mut lo = t_lo.sqrt();
        let mut hi = t_hi.sqrt();
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = (lo + hi) * lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval_h(mid * mid) > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Coefficients of `h(t) = |P(i sqrt t)|^2 - 1` in powers of `t`, with
    /// entries at rounding level set to exactly zero.
    fn interval_polynomial(&self) -> Vec<T> {
        let s = self.degree();
        let mut re = vec![T::zero(); s + 1];
        let mut im = vec![T::zero(); s + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            match k % 4 {
                0 => re[k] = a,
                1 => im[k] = a,
                2 => re[k] = -a,
                _ => im[k] = -a,
            }
        }
        let mut g = vec![T::zero(); 2 * s + 1];
        let mut scale = vec![T::zero(); 2 * s + 1];
        for j in 0..=s {
            for l in 0..=s {
                let term = re[j] * re[l] + im[j] * im[l];
                g[j + l] += term;
                scale[j + l] += (re[j] * re[l]).abs() + (im[j] * im[l]).abs();
            }
        }
        g[0] -= T::one();
        scale[0] += T::one();
        let eps = T::default_epsilon() * lit(32.0);
        let mut h = Vec::with_capacity(s + 1);
        for j in 0..=s {
            let m = 2 * j;
            let keep = m > self.order && g[m].abs() > eps * scale[m];
            h.push(if keep { g[m] } else { T::zero() });
        }
        h
    }

    /// Sufficient-and-necessary sign test for a positive imaginary interval.
    ///
    /// Coefficients enter through `gamma_k = k! a_k`, the normalization under
    /// which the first non-vanishing term of `|P(i sigma)|^2 - 1` has the
    /// tested sign.
    pub fn interval_condition_analytic(&self) -> Result<bool> {
        let r = self.order;
        if r == 0 {
            return Err(Error::NoTaylorPrefix);
        }
        let gamma = |k: usize| -> T {
            self.coeffs
                .get(k)
                .map(|&a| a * factorial::<T>(k))
                .unwrap_or_else(T::zero)
        };
        let (sign_exp, value) = if r % 2 == 1 {
            ((r + 1) / 2, gamma(r + 1) - T::one())
        } else {
            (
                (r + 2) / 2,
                gamma(r + 2) - lit::<T>((r + 2) as f64) * gamma(r + 1) + lit((r + 1) as f64),
            )
        };
        let signed = if sign_exp % 2 == 0 { value } else { -value };
        Ok(signed < T::zero())
    }

    /// Maximum of `|P|` over the boundary of the left half-disc of radius `c`.
    ///
    /// Real coefficients make `|P|` conjugation-symmetric, so only the upper
    /// half of the segment and arc is sampled. Sampled local maxima are refined
    /// by golden-section search between their neighbours.
    pub fn semidisc_boundary_max(&self, c: T) -> T {
        let n = SEMIDISC_SAMPLES;
        let half_pi = T::frac_pi_2();
        let segment = |u: T| norm_sqr_c(self.eval(Complex::new(T::zero(), c * u)));
        let arc = |u: T| norm_sqr_c(self.eval(cis(half_pi + half_pi * u) * c));
        let best = sampled_max(&segment, n).max(sampled_max(&arc, n));
        best.sqrt()
    }

    /// Largest `c <= R` with the left half-disc of radius `c` inside the stability region.
    pub fn inscribed_semidisc(&self, tol: T) -> Result<SemiDisc<T>> {
        let r = self.imaginary_interval_radius(tol);
        if r <= T::zero() {
            return Err(Error::NoImaginaryInterval);
        }
        let limit = T::one() + lit(REGION_TOL);
        let fits = |c: T| self.semidisc_boundary_max(c) <= limit;
        if fits(r) {
            return Ok(SemiDisc { radius: r });
        }
        let (mut lo, mut hi) = (T::zero(), r);
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = (lo + hi) * lit(0.5);
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo <= T::zero() {
            return Err(Error::NoImaginaryInterval);
        }
        Ok(SemiDisc { radius: lo })
    }
}

/// `taylor_polynomial(s)` as a free function.
pub fn taylor_polynomial<T: Real>(s: usize) -> Result<StabilityPolynomial<T>> {
    StabilityPolynomial::taylor(s)
}

fn detect_order<T: Real>(coeffs: &[T]) -> usize {
    let tol = lit::<T>(ORDER_TOL).max(T::default_epsilon() * lit(16.0));
    let prefix = coeffs
        .iter()
        .enumerate()
        .take_while(|(k, &a)| (a - T::one() / factorial::<T>(*k)).abs() <= tol)
        .count();
    if prefix >= 2 {
        prefix - 1
    } else {
        0
    }
}

/// Max of a nonnegative `f` over `[0, 1]` from `n + 1` uniform samples plus golden-section
/// refinement of every sampled local maximum.
fn sampled_max<T: Real>(f: &impl Fn(T) -> T, n: usize) -> T {
    let step = T::one() / lit::<T>(n as f64);
    let vals: Vec<T> = (0..=n).map(|k| f(lit::<T>(k as f64) * step)).collect();
    let mut best = vals.iter().copied().fold(T::zero(), T::max);
    for k in 0..=n {
        let left = if k > 0 { vals[k - 1] } else { -T::one() };
        let right = if k < n { vals[k + 1] } else { -T::one() };
        if vals[k] >= left && vals[k] >= right {
            let a = lit::<T>(k.saturating_sub(1) as f64) * step;
            let b = (lit::<T>((k + 1).min(n) as f64)) * step;
            best = best.max(golden_max(f, a, b, 60));
        }
    }
    best
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub(crate) fn golden_max<T: Real>(f: &impl Fn(T) -> T, mut a: T, mut b: T, iters: usize) -> T {
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) * lit(0.5);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type P = StabilityPolynomial<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn taylor_coefficients_and_order() {
        assert_eq!(P::taylor(1).unwrap().coeffs(), &[1.0, 1.0]);
        assert_eq!(P::taylor(3).unwrap().coeffs(), &[1.0, 1.0, 0.5, 1.0 / 6.0]);
        assert_eq!(
            P::taylor(4).unwrap().coeffs(),
            &[1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]
        );
        assert_eq!(P::taylor(4).unwrap().order(), 4);
        assert!(P::taylor(0).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(P::new(vec![1.0], "c").is_err());
        assert!(P::new(vec![1.0, 0.0], "c").is_err());
        let p = P::new(vec![1.0, 1.0, 0.3], "x").unwrap();
        assert_eq!(p.order(), 1);
        let q = P::new(vec![0.0, 0.0, 0.0, 1.0], "z3").unwrap();
        assert_eq!(q.order(), 0);
    }

    #[test]
    fn eval_examples() {
        let rk1 = P::taylor(1).unwrap();
        assert_eq!(rk1.eval(c(-1.0, 0.0)), c(0.0, 0.0));
        let w = P::taylor(3).unwrap().eval(c(0.0, 3f64.sqrt()));
        assert_relative_eq!(w.re, -0.5, epsilon = 1e-14);
        assert_relative_eq!(w.im, 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_relative_eq!(w.norm(), 1.0, epsilon = 1e-14);
        let w = P::taylor(4).unwrap().eval(c(0.0, 2.0 * 2f64.sqrt()));
        assert_relative_eq!(w.re, -1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(w.im, -2.0 * 2f64.sqrt() / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn in_region_examples() {
        let rk1 = P::taylor(1).unwrap();
        assert!(rk1.in_region(c(0.0, 0.0), 0.0));
        assert!(!rk1.in_region(c(0.0, 0.01), 0.0));
        let rk4 = P::taylor(4).unwrap();
        assert!(rk4.in_region(c(-1.0, 0.0), 0.0));
        assert_relative_eq!(rk4.eval_abs(c(-1.0, 0.0)), 0.375, epsilon = 1e-15);
    }

    #[test]
    fn interval_radii() {
        let tol = BISECTION_TOL;
        assert_eq!(P::taylor(1).unwrap().imaginary_interval_radius(tol), 0.0);
        assert_eq!(P::taylor(2).unwrap().imaginary_interval_radius(tol), 0.0);
        assert!((P::taylor(3).unwrap().imaginary_interval_radius(tol) - 3f64.sqrt()).abs() <= tol);
        assert!(
            (P::taylor(4).unwrap().imaginary_interval_radius(tol) - 2.0 * 2f64.sqrt()).abs()
                <= tol
        );
    }

    #[test]
    fn analytic_criterion_examples() {
        assert!(!P::taylor(1).unwrap().interval_condition_analytic().unwrap());
        assert!(!P::taylor(2).unwrap().interval_condition_analytic().unwrap());
        assert!(P::taylor(3).unwrap().interval_condition_analytic().unwrap());
        assert!(P::taylor(4).unwrap().interval_condition_analytic().unwrap());
        let z3 = P::new(vec![0.0, 0.0, 0.0, 1.0], "z3").unwrap();
        assert_eq!(z3.interval_condition_analytic(), Err(Error::NoTaylorPrefix));
    }

    #[test]
    fn semidiscs() {
        let tol = BISECTION_TOL;
        let d3 = P::taylor(3).unwrap().inscribed_semidisc(tol).unwrap();
        assert!((d3.radius - 3f64.sqrt()).abs() <= 1e-6);
        let d4 = P::taylor(4).unwrap().inscribed_semidisc(tol).unwrap();
        assert!((d4.radius - 2.61).abs() <= 0.01, "{}", d4.radius);
        assert_eq!(
            P::taylor(1).unwrap().inscribed_semidisc(tol),
            Err(Error::NoImaginaryInterval)
        );
    }

    #[test]
    fn single_precision_radius() {
        let p = StabilityPolynomial::<f32>::taylor(4).unwrap();
        let r = p.imaginary_interval_radius(1e-5);
        assert!((r - 2.0 * 2f32.sqrt()).abs() < 1e-4, "{r}");
    }

    #[test]
    fn from_label() {
        assert_eq!(P::from_label("RK3").unwrap(), P::taylor(3).unwrap());
        assert!(matches!(P::from_label("dopri"), Err(Error::UnknownMethod { .. })));
    }
}
