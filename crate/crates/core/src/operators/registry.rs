use std::sync::Arc;

use super::{
    centered_difference, circulant, finite_element_4th, forward_difference, fourier_grid,
    fourier_method, ibvp_onesided, jordan_block, lax_wendroff, variable_circulant,
    OperatorBundle, Stencil,
};
use crate::error::{Error, Result};

/// Names accepted by [`build_operator`].
pub const OPERATOR_NAMES: [&str; 9] = [
    "jordan", "upwind", "centered", "centered4", "fe4", "lw", "var", "fourier", "ibvp1",
];

/// Parameters for the named operators. `n` is the matrix dimension except
/// for `fourier`, where it is the mode count `N` (dimension `2N + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorParams {
    pub n: usize,
    pub a: f64,
    /// Grid spacing; defaults to `1/n`.
    pub dx: Option<f64>,
    /// Mesh ratio `dt/dx`, required by `lw`.
    pub lambda: Option<f64>,
    /// Jordan parameter for `jordan`; modulation amplitude for `var`.
    pub q: Option<f64>,
}

impl Default for OperatorParams {
    fn default() -> Self {
        Self {
            n: 64,
            a: 1.0,
            dx: None,
            lambda: None,
            q: None,
        }
    }
}

impl OperatorParams {
    pub fn dx(&self) -> f64 {
        self.dx.unwrap_or(1.0 / self.n as f64)
    }
}

/// Builds one of [`OPERATOR_NAMES`] in double precision.
///
/// `var` is the upwind stencil with speed `a (1 + q sin 2 pi x)` (`q` defaults
/// to 0.5) and `fourier` uses `a(x) = a sin x`.
pub fn build_operator(name: &str, p: &OperatorParams) -> Result<OperatorBundle<f64>> {
    let dx = p.dx();
    let a = p.a;
    match name {
        "jordan" => jordan_block(p.n, p.q.unwrap_or(0.0)),
        "upwind" => forward_difference(p.n, a, dx),
        "centered" => centered_difference(p.n, a, dx),
        "centered4" => circulant(p.n, &Stencil::centered4(a, dx)?),
        "fe4" => Ok(finite_element_4th(p.n, dx)?.scaled(a)),
        "lw" => {
            let lambda = p.lambda.ok_or_else(|| {
                Error::InvalidParameter("lw needs the mesh ratio lambda = dt/dx".into())
            })?;
            lax_wendroff(p.n, a, lambda, dx)
        }
        "var" => {
            if p.dx.is_some_and(|d| (d * p.n as f64 - 1.0).abs() > 1e-12) {
                return Err(Error::InvalidParameter("var requires dx = 1/N".into()));
            }
            let amp = p.q.unwrap_or(0.5);
            let speed = move |x: f64| a * (1.0 + amp * (2.0 * std::f64::consts::PI * x).sin());
            let st = Stencil::variable(
                vec![
                    (0, Arc::new(move |x| -speed(x))),
                    (1, Arc::new(speed)),
                ],
                1.0 / p.n as f64,
            )?;
            Ok(variable_circulant(p.n, &st)?.0)
        }
        "fourier" => {
            let samples: Vec<f64> = fourier_grid::<f64>(p.n).iter().map(|&x| a * x.sin()).collect();
            fourier_method(p.n, &samples)
        }
        "ibvp1" => ibvp_onesided(p.n, a, dx),
        _ => Err(Error::UnknownOperator {
            name: name.to_string(),
            known: OPERATOR_NAMES.iter().map(|s| s.to_string()).collect(),
        }),
    }
}
