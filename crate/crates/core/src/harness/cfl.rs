use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerical_range::{negativity_slack, radius_of, support_on, support_value};
use crate::operators::OperatorBundle;
use crate::scalar::{lit, to_f64, Real};
use crate::stability_polynomials::{StabilityPolynomial, BISECTION_TOL};

/// Which sufficient condition established the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CflRoute {
    /// Negative operator with `dt r_H(L) <= CFL_s`.
    SemiDisc,
    /// Every sampled point of `dt W_H(L)` maps into the stability region.
    Boundary,
    Both,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CflReport {
    pub polynomial: String,
    pub operator: String,
    pub dt: f64,
    /// `CFL_s`, absent when the method has no imaginary interval.
    pub radius_required: Option<f64>,
    /// `dt r_H(L)`.
    pub radius_measured: f64,
    pub negative: bool,
    /// Fraction of sampled boundary points `z` with `|P(dt z)| <= 1 + tol`.
    pub boundary_inside: f64,
    /// Largest `|P(dt z)|` over the sampled boundary.
    pub boundary_max: f64,
    pub route: CflRoute,
    pub pass: bool,
}

/// Checks `dt W_H(L)` against the stability region by both sufficient routes.
///
/// A method without a semi-disc (`R_s = 0`) is not an error here: the
/// boundary route can still succeed (forward Euler on dissipative operators),
/// and otherwise the report simply fails.
pub fn verify_cfl<T: Real>(
    p: &StabilityPolynomial<T>,
    dt: T,
    l: &OperatorBundle<T>,
    m: usize,
    tol: T,
) -> Result<CflReport> {
    if m < 64 {
        return Err(Error::InvalidParameter("verify_cfl needs m >= 64 angles".into()));
    }
    if !(dt > T::zero()) {
        return Err(Error::InvalidParameter("dt must be positive".into()));
    }
    let b = l.symmetrizer().transform(l.matrix())?;
    let negative = support_value(&b, T::zero()) * lit(2.0) <= negativity_slack(&b);
    let scale = b.frobenius_norm() + T::one();
    let radius = radius_of(&b, lit::<T>(1e-14) * scale) * dt;

    let required = match p.inscribed_semidisc(lit(BISECTION_TOL)) {
        Ok(d) => Some(d.radius),
        Err(Error::NoImaginaryInterval) => None,
        Err(e) => return Err(e),
    };

    let step = T::two_pi() / lit(m as f64);
    let mut inside = 0usize;
    let mut worst = T::zero();
    for k in 0..m {
        let z = support_on(&b, step * lit(k as f64))?.witness * dt;
        let v = p.eval_abs(z);
        worst = worst.max(v);
        if v <= T::one() + tol {
            inside += 1;
        }
    }

    // CFL_s itself is only known to the bisection tolerance.
    let slack = tol.max(lit(BISECTION_TOL));
    let semi = negative && required.is_some_and(|c| radius <= c + slack);
    let boundary = inside == m;
    let route = match (semi, boundary) {
        (true, true) => CflRoute::Both,
        (true, false) => CflRoute::SemiDisc,
        (false, true) => CflRoute::Boundary,
        (false, false) => CflRoute::None,
    };
    Ok(CflReport {
        polynomial: p.label().to_string(),
        operator: l.label().to_string(),
        dt: to_f64(dt),
        radius_required: required.map(to_f64),
        radius_measured: to_f64(radius),
        negative,
        boundary_inside: inside as f64 / m as f64,
        boundary_max: to_f64(worst),
        route,
        pass: semi || boundary,
    })
}
