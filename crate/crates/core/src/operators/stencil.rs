use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cis, lit, Real};

type CoefficientFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A stencil coefficient `q_alpha`, fixed or depending on `x`.
#[derive(Clone)]
pub enum Coefficient<T: Real> {
    Constant(T),
    Variable(CoefficientFn<T>),
}

impl<T: Real> Coefficient<T> {
    pub fn at(&self, x: T) -> T {
        match self {
            Coefficient::Constant(c) => *c,
            Coefficient::Variable(f) => f(x),
        }
    }
}

impl<T: Real> fmt::Debug for Coefficient<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(c) => write!(f, "{c}"),
            Coefficient::Variable(_) => write!(f, "<fn>"),
        }
    }
}

/// Difference stencil `Q(E) = (1/dx) sum_alpha q_alpha E^alpha` with `(E u)_j = u_{j+1}`.
#[derive(Clone, Debug)]
pub struct Stencil<T: Real> {
    coeffs: BTreeMap<i32, Coefficient<T>>,
    dx: T,
}

impl<T: Real> Stencil<T> {
    fn check(coeffs: &BTreeMap<i32, Coefficient<T>>, dx: T) -> Result<()> {
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(Error::InvalidParameter("stencil spacing dx must be positive".into()));
        }
        let nonzero = coeffs.values().any(|c| match c {
            Coefficient::Constant(v) => *v != T::zero(),
            Coefficient::Variable(_) => true,
        });
        if !nonzero {
            return Err(Error::InvalidParameter("stencil needs a nonzero coefficient".into()));
        }
        Ok(())
    }

    pub fn constant(pairs: &[(i32, T)], dx: T) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for &(alpha, q) in pairs {
            if !q.is_finite() {
                return Err(Error::InvalidParameter("stencil coefficients must be finite".into()));
            }
            let entry = coeffs.entry(alpha).or_insert(Coefficient::Constant(T::zero()));
            if let Coefficient::Constant(v) = entry {
                *v += q;
            }
        }
        Self::check(&coeffs, dx)?;
        Ok(Self { coeffs, dx })
    }

    pub fn variable(pairs: Vec<(i32, CoefficientFn<T>)>, dx: T) -> Result<Self> {
        let coeffs: BTreeMap<i32, Coefficient<T>> = pairs
            .into_iter()
            .map(|(alpha, f)| (alpha, Coefficient::Variable(f)))
            .collect();
        Self::check(&coeffs, dx)?;
        Ok(Self { coeffs, dx })
    }

    /// `(a/dx)(E - I)`.
    pub fn one_sided(a: T, dx: T) -> Result<Self> {
        Self::constant(&[(0, -a), (1, a)], dx)
    }

    /// `(a/2dx)(E - E^{-1})`.
    pub fn centered(a: T, dx: T) -> Result<Self> {
        let h = a * lit(0.5);
        Self::constant(&[(-1, -h), (1, h)], dx)
    }

    /// `(a/12dx)(-E^2 + 8E - 8E^{-1} + E^{-2})`.
    pub fn centered4(a: T, dx: T) -> Result<Self> {
        let t = a / lit(12.0);
        Self::constant(
            &[(-2, t), (-1, -t * lit(8.0)), (1, t * lit(8.0)), (2, -t)],
            dx,
        )
    }

    /// Centered difference plus the `lambda a^2 / 2` second-difference correction.
    pub fn lax_wendroff(a: T, lambda: T, dx: T) -> Result<Self> {
        let half = lit::<T>(0.5);
        let d = lambda * a * a;
        Self::constant(
            &[(-1, -a * half + d * half), (0, -d), (1, a * half + d * half)],
            dx,
        )
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn offsets(&self) -> Vec<i32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn coefficient(&self, alpha: i32) -> Option<&Coefficient<T>> {
        self.coeffs.get(&alpha)
    }

    /// `l` in `alpha in [-l, r]` (zero if no negative offsets).
    pub fn left(&self) -> usize {
        self.coeffs.keys().next().map(|&a| (-a).max(0) as usize).unwrap_or(0)
    }

    pub fn right(&self) -> usize {
        self.coeffs.keys().next_back().map(|&a| a.max(0) as usize).unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.values().all(|c| matches!(c, Coefficient::Constant(_)))
    }

    /// `sum_alpha q_alpha`, zero for consistent first-derivative stencils.
    pub fn consistency_residual(&self) -> Option<T> {
        if !self.is_constant() {
            return None;
        }
        Some(self.coeffs.values().fold(T::zero(), |acc, c| acc + c.at(T::zero())))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &Coefficient<T>)> {
        self.coeffs.iter().map(|(&a, c)| (a, c))
    }

    /// `q^(xi) = (1/dx) sum_alpha q_alpha e^{i alpha xi}`.
    pub fn symbol(&self, xi: T) -> Result<Complex<T>> {
        if !self.is_constant() {
            return Err(Error::VariableCoefficient);
        }
        Ok(self.symbol_at(T::zero(), xi))
    }

    /// Symbol of the stencil frozen at `x`.
    pub fn symbol_at(&self, x: T, xi: T) -> Complex<T> {
        let sum = self
            .coeffs
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&alpha, c)| {
                acc + cis(xi * lit(alpha as f64)) * c.at(x)
            });
        sum / self.dx
    }

    /// The stencil with every coefficient evaluated at `x`.
    pub fn frozen(&self, x: T) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&a, c)| (a, Coefficient::Constant(c.at(x))))
                .collect(),
            dx: self.dx,
        }
    }
}
