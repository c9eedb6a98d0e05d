//! Convex combinations of forward-Euler powers reproducing the Taylor polynomials.

use num_rational::Rational64;
use num_traits::{Num, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One term `weight * (1 + z)^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SspTerm {
    #[serde(serialize_with = "ratio_as_string")]
    pub weight: Rational64,
    pub power: usize,
}

fn ratio_as_string<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Exact weights and powers with `sum b_j (1 + z)^{m_j} = sum_{k<=s} z^k / k!`.
pub fn ssp_decomposition(s: usize) -> Result<Vec<SspTerm>> {
    let t = |n: i64, d: i64, power: usize| SspTerm {
        weight: Rational64::new(n, d),
        power,
    };
    match s {
        2 => Ok(vec![t(1, 2, 0), t(1, 2, 2)]),
        3 => Ok(vec![t(1, 3, 0), t(1, 2, 1), t(1, 6, 3)]),
        4 => Ok(vec![t(3, 8, 0), t(1, 3, 1), t(1, 4, 2), t(1, 24, 4)]),
        _ => Err(Error::UnsupportedStages(s)),
    }
}

/// Coefficients of `sum w_j (1 + z)^{m_j}` in any numeric ring.
pub fn ssp_expand<T: Num + Clone>(terms: &[(T, usize)]) -> Vec<T> {
    let degree = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut out = vec![T::zero(); degree + 1];
    for (w, m) in terms {
        // Row m of Pascal's triangle, built by repeated multiplication by (1 + z).
        let mut row = vec![T::one()];
        for _ in 0..*m {
            let mut next = vec![T::zero(); row.len() + 1];
            for (k, c) in row.iter().enumerate() {
                next[k] = next[k].clone() + c.clone();
                next[k + 1] = next[k + 1].clone() + c.clone();
            }
            row = next;
        }
        for (k, c) in row.into_iter().enumerate() {
            out[k] = out[k].clone() + w.clone() * c;
        }
    }
    out
}

/// `1/k!` for `k = 0..=s` in any numeric field.
pub fn taylor_coefficients<T: Num + Clone>(s: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(s + 1);
    let mut c = T::one();
    let mut k = T::zero();
    out.push(c.clone());
    for _ in 1..=s {
        k = k + T::one();
        c = c / k.clone();
        out.push(c.clone());
    }
    out
}

/// Largest coefficient residual of the decomposition evaluated in floating point.
pub fn ssp_residual<T: Real>(s: usize) -> Result<T> {
    let terms: Vec<(T, usize)> = ssp_decomposition(s)?
        .iter()
        .map(|t| {
            let n = T::from_i64(*t.weight.numer()).unwrap();
            let d = T::from_i64(*t.weight.denom()).unwrap();
            (n / d, t.power)
        })
        .collect();
    let expanded = ssp_expand(&terms);
    let target: Vec<T> = taylor_coefficients(s);
    Ok(expanded
        .iter()
        .zip(&target)
        .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs())))
}

/// Decomposition weights as floating-point values.
pub fn ssp_weights_f64(s: usize) -> Result<Vec<(f64, usize)>> {
    Ok(ssp_decomposition(s)?
        .iter()
        .map(|t| (t.weight.to_f64().unwrap_or(f64::NAN), t.power))
        .collect())
}
