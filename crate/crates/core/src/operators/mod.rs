//! Discretization matrices and their symmetrizers.

mod fourier;
mod registry;
mod stencil;

pub use fourier::{fourier_differentiation, fourier_grid, fourier_method, h1_symmetrizer};
pub use registry::{build_operator, OperatorParams, OPERATOR_NAMES};
pub use stencil::{Coefficient, Stencil};

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::numerical_range::Symmetrizer;
use crate::scalar::{lit, to_f64, Real};
use crate::stability_polynomials::fmt17;

/// Construction label and parameters of an operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMeta {
    pub label: String,
    pub n: usize,
    pub params: BTreeMap<String, f64>,
}

impl OperatorMeta {
    fn new(label: &str, n: usize, params: &[(&str, f64)]) -> Self {
        Self {
            label: label.to_string(),
            n,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

/// An operator `L_N` together with the weight `H_N` it is analysed in.
#[derive(Debug, Clone)]
pub struct OperatorBundle<T: Real> {
    matrix: ComplexMatrix<T>,
    symmetrizer: Symmetrizer<T>,
    meta: OperatorMeta,
}

impl<T: Real> OperatorBundle<T> {
    pub fn new(matrix: ComplexMatrix<T>, symmetrizer: Symmetrizer<T>, meta: OperatorMeta) -> Result<Self> {
        if matrix.dim() != symmetrizer.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                found: symmetrizer.dim(),
            });
        }
        Ok(Self {
            matrix,
            symmetrizer,
            meta,
        })
    }

    /// Bundle with the identity weight.
    pub fn plain(matrix: ComplexMatrix<T>, meta: OperatorMeta) -> Self {
        let n = matrix.dim();
        Self {
            matrix,
            symmetrizer: Symmetrizer::identity(n),
            meta,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn symmetrizer(&self) -> &Symmetrizer<T> {
        &self.symmetrizer
    }

    pub fn meta(&self) -> &OperatorMeta {
        &self.meta
    }

    pub fn label(&self) -> &str {
        &self.meta.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn with_symmetrizer(self, symmetrizer: Symmetrizer<T>) -> Result<Self> {
        Self::new(self.matrix, symmetrizer, self.meta)
    }

    /// Multiplies the operator by `factor`, recorded as parameter `scale`.
    pub fn scaled(mut self, factor: T) -> Self {
        self.matrix = self.matrix.scale(factor);
        let prev = self.meta.params.get("scale").copied().unwrap_or(1.0);
        self.meta.params.insert("scale".into(), prev * to_f64(factor));
        self
    }

    /// JSON descriptor `{label, n, params}`.
    pub fn descriptor_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.meta).expect("operator descriptor serializes")
    }

    /// Dense dump, one CSV row per matrix row with `re,im` pairs per column.
    pub fn write_matrix_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.dim();
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (0..n)
            .flat_map(|j| [format!("re{j}"), format!("im{j}")])
            .collect();
        w.write_record(&header)?;
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .flat_map(|j| {
                    let z = self.matrix.get(i, j);
                    [fmt17(to_f64(z.re)), fmt17(to_f64(z.im))]
                })
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn real_matrix<T: Real>(m: DMatrix<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_real(&m).expect("finite operator entries")
}

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite")))
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("dimension must be at least {min}, got {n}")))
    }
}

/// `J_q`: `-q` on the diagonal, `1 + q` on the superdiagonal.
pub fn jordan_block<T: Real>(n: usize, q: T) -> Result<OperatorBundle<T>> {
    check_n(n, 1)?;
    if !q.is_finite() {
        return Err(Error::InvalidParameter("q must be finite".into()));
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            -q
        } else if j == i + 1 {
            T::one() + q
        } else {
            T::zero()
        }
    });
    Ok(OperatorBundle::plain(
        real_matrix(m),
        OperatorMeta::new("jordan", n, &[("q", to_f64(q))]),
    ))
}

/// `(a/dx)(J_0 - I)`, the upwind difference with the inflow value eliminated.
pub fn forward_difference<T: Real>(n: usize, a: T, dx: T) -> Result<OperatorBundle<T>> {
    check_n(n, 2)?;
    check_positive("a", a)?;
    check_positive("dx", dx)?;
    let c = a / dx;
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            -c
        } else if j == i + 1 {
            c
        } else {
            T::zero()
        }
    });
    Ok(OperatorBundle::plain(
        real_matrix(m),
        OperatorMeta::new("upwind", n, &[("a", to_f64(a)), ("dx", to_f64(dx))]),
    ))
}

/// `(a/2dx) tridiag(-1, 0, 1)` without wraparound; skew-symmetric.
pub fn centered_difference<T: Real>(n: usize, a: T, dx: T) -> Result<OperatorBundle<T>> {
    check_n(n, 2)?;
    check_positive("dx", dx)?;
    let c = a / (dx * lit(2.0));
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            c
        } else if i == j + 1 {
            -c
        } else {
            T::zero()
        }
    });
    Ok(OperatorBundle::plain(
        real_matrix(m),
        OperatorMeta::new("centered", n, &[("a", to_f64(a)), ("dx", to_f64(dx))]),
    ))
}

fn circulant_matrix<T: Real>(n: usize, st: &Stencil<T>, at: impl Fn(usize) -> T) -> Result<DMatrix<T>> {
    let width = st.left() + st.right() + 1;
    if n < width {
        return Err(Error::StencilTooWide { width, n });
    }
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let x = at(i);
        for (alpha, c) in st.iter() {
            let j = (i as i64 + alpha as i64).rem_euclid(n as i64) as usize;
            m[(i, j)] += c.at(x) / st.dx();
        }
    }
    Ok(m)
}

/// Periodic matrix of a constant-coefficient stencil.
pub fn circulant<T: Real>(n: usize, st: &Stencil<T>) -> Result<OperatorBundle<T>> {
    if !st.is_constant() {
        return Err(Error::VariableCoefficient);
    }
    let m = circulant_matrix(n, st, |_| T::zero())?;
    let mut params = vec![("dx", to_f64(st.dx()))];
    let offsets = st.offsets();
    let names: Vec<String> = offsets.iter().map(|a| format!("q[{a}]")).collect();
    for (name, &alpha) in names.iter().zip(&offsets) {
        params.push((name.as_str(), to_f64(st.coefficient(alpha).unwrap().at(T::zero()))));
    }
    Ok(OperatorBundle::plain(real_matrix(m), OperatorMeta::new("circulant", n, &params)))
}

/// Lax-Wendroff circulant for mesh ratio `lambda = dt/dx`.
pub fn lax_wendroff<T: Real>(n: usize, a: T, lambda: T, dx: T) -> Result<OperatorBundle<T>> {
    check_n(n, 5)?;
    check_positive("lambda", lambda)?;
    let st = Stencil::lax_wendroff(a, lambda, dx)?;
    let m = circulant_matrix(n, &st, |_| T::zero())?;
    Ok(OperatorBundle::plain(
        real_matrix(m),
        OperatorMeta::new(
            "lw",
            n,
            &[("a", to_f64(a)), ("lambda", to_f64(lambda)), ("dx", to_f64(dx))],
        ),
    ))
}

/// `M^{-1} C` with mass stencil `(1, 4, 1)/6` and `C = (1/2dx)(E - E^{-1})`.
pub fn finite_element_4th<T: Real>(n: usize, dx: T) -> Result<OperatorBundle<T>> {
    check_n(n, 5)?;
    let sixth = T::one() / lit(6.0);
    let mass = Stencil::constant(&[(-1, sixth), (0, sixth * lit(4.0)), (1, sixth)], T::one())?;
    let m = circulant_matrix(n, &mass, |_| T::zero())?;
    let c = circulant_matrix(n, &Stencil::centered(T::one(), dx)?, |_| T::zero())?;
    let l = m.lu().solve(&c).ok_or(Error::MassMatrixSingular)?;
    Ok(OperatorBundle::plain(
        real_matrix(l),
        OperatorMeta::new("fe4", n, &[("dx", to_f64(dx))]),
    ))
}

/// Symbol of [`finite_element_4th`]: `i sin(xi) / (dx (2 + cos xi) / 3)`.
pub fn finite_element_4th_symbol<T: Real>(xi: T, dx: T) -> Complex<T> {
    let mass = (lit::<T>(2.0) + xi.cos()) / lit(3.0);
    Complex::new(T::zero(), xi.sin() / (dx * mass))
}

/// Rows apply the stencil frozen at `x_v = v dx` with periodic wrap; `dx = 1/n`.
///
/// Also returns `dx sum_alpha alpha^2 max_x (|q| + |q'| + |q''|)` with the
/// derivatives taken by periodic central differences on the grid. This is an
/// estimate of the stencil's C^2 size, not a certified bound.
pub fn variable_circulant<T: Real>(n: usize, st: &Stencil<T>) -> Result<(OperatorBundle<T>, T)> {
    check_n(n, 3)?;
    let dx = st.dx();
    if (dx * lit(n as f64) - T::one()).abs() > lit(1e-12) {
        return Err(Error::InvalidParameter("variable_circulant needs dx = 1/n".into()));
    }
    let grid = |v: usize| dx * lit(v as f64);
    let m = circulant_matrix(n, st, grid)?;

    let mut locality = T::zero();
    for (alpha, c) in st.iter() {
        let q: Vec<T> = (0..n).map(|v| c.at(grid(v))).collect();
        let mut size = T::zero();
        for v in 0..n {
            let (prev, next) = (q[(v + n - 1) % n], q[(v + 1) % n]);
            let d1 = (next - prev) / (dx * lit(2.0));
            let d2 = (next - q[v] * lit(2.0) + prev) / (dx * dx);
            size = size.max(q[v].abs() + d1.abs() + d2.abs());
        }
        locality += lit::<T>((alpha * alpha) as f64) * size;
    }
    locality *= dx;
    let bundle = OperatorBundle::plain(real_matrix(m), OperatorMeta::new("var", n, &[("dx", to_f64(dx))]));
    Ok((bundle, locality))
}

/// One-sided outflow row, centered interior rows, and the closure whose last
/// row is `(..., -1/2, 0) a/dx`; weight `diag(1/2, 1, ..., 1)`.
pub fn ibvp_onesided<T: Real>(n: usize, a: T, dx: T) -> Result<OperatorBundle<T>> {
    check_n(n, 3)?;
    check_positive("a", a)?;
    check_positive("dx", dx)?;
    let c = a / dx;
    let h = c * lit(0.5);
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            match j {
                0 => -c,
                1 => c,
                _ => T::zero(),
            }
        } else if j == i + 1 {
            h
        } else if j + 1 == i {
            -h
        } else {
            T::zero()
        }
    });
    let mut weights = vec![T::one(); n];
    weights[0] = lit(0.5);
    let sym = Symmetrizer::diagonal(&weights)?;
    OperatorBundle::new(
        real_matrix(m),
        sym,
        OperatorMeta::new("ibvp1", n, &[("a", to_f64(a)), ("dx", to_f64(dx))]),
    )
}
