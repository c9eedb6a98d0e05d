//! Weighted numerical ranges by the rotation (support-function) method.

mod geometry;
mod symmetrizer;

pub use geometry::{convex_hull, distance_to_convex, hausdorff_distance};
pub use symmetrizer::Symmetrizer;

use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_max_eigenpair, hermitian_max_eigenvalue, ComplexMatrix};
use crate::scalar::{abs_c, cis, conj_c, lit, norm_sqr_c, to_f64, Real};
use crate::stability_polynomials::golden_max;

/// Default number of angles for boundary sampling.
pub const DEFAULT_ANGLES: usize = 720;
/// Coarse scan size used by [`numerical_radius`].
pub const RADIUS_SCAN: usize = 256;
/// Directions closer than this are treated as the same half-plane.
const ANGLE_MERGE: f64 = 1e-6;
const REFINE_ROUNDS: usize = 6;

/// Value of the support function in one direction and a boundary point attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support<T: Real> {
    pub value: T,
    pub witness: Complex<T>,
}

/// Sampled boundary of `W_H(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeBoundary<T: Real> {
    pub n: usize,
    pub cond_h: T,
    pub angles: Vec<T>,
    pub support: Vec<T>,
    pub points: Vec<Complex<T>>,
}

#[derive(Serialize)]
struct BoundaryJson {
    n: usize,
    #[serde(rename = "cond_H")]
    cond_h: f64,
    radius: f64,
    points: Vec<[f64; 2]>,
}

impl<T: Real> RangeBoundary<T> {
    /// Largest sampled support value; a lower bound on the numerical radius.
    pub fn radius(&self) -> T {
        self.support.iter().copied().fold(T::zero(), T::max)
    }

    /// Whether `z` satisfies every sampled half-plane constraint `Re(e^{i theta} z) <= s(theta) + slack`.
    pub fn outer_contains(&self, z: Complex<T>, slack: T) -> bool {
        self.angles
            .iter()
            .zip(&self.support)
            .all(|(&t, &s)| (cis(t) * z).re <= s + slack)
    }

    /// Vertices of the half-plane intersection, one per pair of consecutive angles.
    ///
    /// Requires angles sorted in `[0, 2 pi)` with gaps below `pi`.
    pub fn outer_polygon(&self) -> Vec<Complex<T>> {
        let m = self.angles.len();
        let mut out = Vec::with_capacity(m);
        for k in 0..m {
            let (t1, s1) = (self.angles[k], self.support[k]);
            let (t2, s2) = (self.angles[(k + 1) % m], self.support[(k + 1) % m]);
            // x cos t - y sin t = s for both lines.
            let (a1, b1) = (t1.cos(), -t1.sin());
            let (a2, b2) = (t2.cos(), -t2.sin());
            let det = a1 * b2 - a2 * b1;
            if det.abs() <= lit(ANGLE_MERGE) {
                continue;
            }
            let x = (s1 * b2 - s2 * b1) / det;
            let y = (a1 * s2 - a2 * s1) / det;
            out.push(Complex::new(x, y));
        }
        out
    }

    /// Convex hull of the boundary points, deduplicated; inner approximation of `W_H(A)`.
    pub fn inner_hull(&self) -> Vec<Complex<T>> {
        let scale = self.points.iter().map(|&z| abs_c(z)).fold(T::one(), T::max);
        convex_hull(&self.points, scale * lit(1e-13))
    }

    /// CSV with header `theta,support,re_z,im_z`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        use crate::stability_polynomials::fmt17;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "support", "re_z", "im_z"])?;
        for k in 0..self.angles.len() {
            w.write_record([
                fmt17(to_f64(self.angles[k])),
                fmt17(to_f64(self.support[k])),
                fmt17(to_f64(self.points[k].re)),
                fmt17(to_f64(self.points[k].im)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON record `{n, cond_H, radius, points}` with points as `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BoundaryJson {
            n: self.n,
            cond_h: to_f64(self.cond_h),
            radius: to_f64(self.radius()),
            points: self
                .points
                .iter()
                .map(|z| [to_f64(z.re), to_f64(z.im)])
                .collect(),
        })
        .expect("boundary record serializes")
    }
}

/// `H^{1/2} A H^{-1/2}`, whose plain numerical range is `W_H(A)`.
pub fn weighted_transform<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>) -> Result<ComplexMatrix<T>> {
    h.transform(a)
}

/// `lambda_max((e^{i theta} B + e^{-i theta} B*) / 2)` for an already transformed `B`.
pub(crate) fn support_value<T: Real>(b: &ComplexMatrix<T>, theta: T) -> T {
    rotated_hermitian_part(b, theta, |m| hermitian_max_eigenvalue(m))
}

fn rotated_hermitian_part<T: Real, R>(
    b: &ComplexMatrix<T>,
    theta: T,
    f: impl FnOnce(&nalgebra::DMatrix<Complex<T>>) -> R,
) -> R {
    let w = cis(theta);
    let half = lit::<T>(0.5);
    let m = b.as_dmatrix();
    let n = m.nrows();
    let rot = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        (w * m[(i, j)] + conj_c(w) * conj_c(m[(j, i)])) * half
    });
    f(&rot)
}

pub(crate) fn support_on<T: Real>(b: &ComplexMatrix<T>, theta: T) -> Result<Support<T>> {
    let (value, x) = rotated_hermitian_part(b, theta, |m| hermitian_max_eigenpair(m))?;
    let bx = b.mul_vec(&x);
    let witness = x.iter().zip(bx.iter()).fold(Complex::new(T::zero(), T::zero()), |acc, (xi, yi)| {
        acc + conj_c(*xi) * *yi
    });
    Ok(Support { value, witness })
}

pub fn support_function<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>, theta: T) -> Result<Support<T>> {
    let b = h.transform(a)?;
    support_on(&b, theta)
}

fn boundary_at_angles<T: Real>(b: &ComplexMatrix<T>, cond_h: T, angles: Vec<T>) -> Result<RangeBoundary<T>> {
    let mut support = Vec::with_capacity(angles.len());
    let mut points = Vec::with_capacity(angles.len());
    for &t in &angles {
        let s = support_on(b, t)?;
        support.push(s.value);
        points.push(s.witness);
    }
    Ok(RangeBoundary {
        n: b.dim(),
        cond_h,
        angles,
        support,
        points,
    })
}

fn uniform_angles<T: Real>(m: usize) -> Vec<T> {
    let step = T::two_pi() / lit(m as f64);
    (0..m).map(|k| step * lit(k as f64)).collect()
}

/// Boundary of `W_H(A)` sampled at `m` uniformly spaced angles.
pub fn range_boundary<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>, m: usize) -> Result<RangeBoundary<T>> {
    if m < 8 {
        return Err(Error::InvalidParameter("range_boundary needs m >= 8 angles".into()));
    }
    let b = h.transform(a)?;
    boundary_at_angles(&b, h.cond(), uniform_angles(m))
}

/// [`range_boundary`] plus the directions normal to every edge of the inner
/// hull, repeated while new edges appear. For polygonal ranges (normal
/// matrices, circulants) the extra half-planes make the outer approximation
/// coincide with the hull.
pub fn range_boundary_refined<T: Real>(
    a: &ComplexMatrix<T>,
    h: &Symmetrizer<T>,
    m: usize,
) -> Result<RangeBoundary<T>> {
    let mut current = range_boundary(a, h, m)?;
    let b = h.transform(a)?;
    let gap = lit::<T>(ANGLE_MERGE);
    let near = |x: T, y: T| {
        let d = (x - y).abs();
        d <= gap || T::two_pi() - d <= gap
    };
    for _ in 0..REFINE_ROUNDS {
        let mut normals = edge_normals(&current.inner_hull());
        normals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        normals.dedup_by(|x, y| near(*x, *y));
        normals.retain(|&t| !current.angles.iter().any(|&v| (v - t).abs() == T::zero()));
        if normals.is_empty() {
            break;
        }
        // Nearly parallel neighbours make the outer vertices ill-conditioned,
        // so samples too close to a new normal are replaced by it.
        let mut rows: Vec<(T, T, Complex<T>)> = (0..current.angles.len())
            .filter(|&k| !normals.iter().any(|&v| near(current.angles[k], v)))
            .map(|k| (current.angles[k], current.support[k], current.points[k]))
            .collect();
        for &t in &normals {
            let s = support_on(&b, t)?;
            rows.push((t, s.value, s.witness));
        }
        rows.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        current.angles = rows.iter().map(|r| r.0).collect();
        current.support = rows.iter().map(|r| r.1).collect();
        current.points = rows.iter().map(|r| r.2).collect();
    }
    Ok(current)
}

/// Outward normal angles in `[0, 2 pi)` of a counter-clockwise polygon.
///
/// Witnesses taken exactly at an edge normal land anywhere on that edge, so
/// vertices that are nearly collinear with their neighbours, or very close to
/// one, are dropped first: a normal computed from a tiny edge is inaccurate.
fn edge_normals<T: Real>(hull: &[Complex<T>]) -> Vec<T> {
    let scale = hull.iter().map(|&z| abs_c(z)).fold(T::one(), T::max);
    let short = scale * lit(1e-7);
    let flat = scale * lit(1e-11);
    let mut poly: Vec<Complex<T>> = hull.to_vec();
    loop {
        let n = poly.len();
        if n < 3 {
            break;
        }
        let drop = (0..n).find(|&k| {
            let (prev, cur, next) = (poly[(k + n - 1) % n], poly[k], poly[(k + 1) % n]);
            let base = next - prev;
            let len = abs_c(base);
            let off = ((cur.re - prev.re) * base.im - (cur.im - prev.im) * base.re).abs();
            abs_c(cur - prev) <= short || (len > T::zero() && off <= flat * len)
        });
        match drop {
            Some(k) => {
                poly.remove(k);
            }
            None => break,
        }
    }
    if poly.len() < 2 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(poly.len());
    for k in 0..poly.len() {
        let d = poly[(k + 1) % poly.len()] - poly[k];
        if abs_c(d) == T::zero() {
            continue;
        }
        // Outward normal (d.im, -d.re) equals (cos t, -sin t).
        let mut t = d.re.atan2(d.im);
        if t < T::zero() {
            t += T::two_pi();
        }
        out.push(t);
    }
    out
}

/// `r_H(A) = max_theta s(theta)`: coarse scan then golden-section refinement
/// of the best local maxima.
pub fn numerical_radius<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>, tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter("numerical_radius needs tol > 0".into()));
    }
    let b = h.transform(a)?;
    Ok(radius_of(&b, tol))
}

pub(crate) fn radius_of<T: Real>(b: &ComplexMatrix<T>, tol: T) -> T {
    if b.dim() == 0 {
        return T::zero();
    }
    let m = RADIUS_SCAN;
    let angles: Vec<T> = uniform_angles(m);
    let vals: Vec<T> = angles.iter().map(|&t| support_value(b, t)).collect();
    let mut best = vals.iter().copied().fold(lit::<T>(f64::NEG_INFINITY), T::max);

    let mut peaks: Vec<usize> = (0..m)
        .filter(|&k| vals[k] >= vals[(k + m - 1) % m] && vals[k] >= vals[(k + 1) % m])
        .collect();
    peaks.sort_by(|&x, &y| vals[y].partial_cmp(&vals[x]).unwrap().then(x.cmp(&y)));
    peaks.truncate(4);

    let step = T::two_pi() / lit(m as f64);
    let scale = b.frobenius_norm() + T::one();
    // The support function is smooth near an isolated maximum, so the value
    // error is about scale * width^2.
    let width_goal = (tol / scale).sqrt().max(T::default_epsilon().sqrt() * lit(1e-2));
    let iters = {
        let ratio = to_f64(width_goal) / to_f64(step * lit(2.0));
        let k = (ratio.ln() / 0.618_033_988_75f64.ln()).ceil();
        (k.max(0.0) as usize + 2).min(200)
    };
    for k in peaks {
        let centre = angles[k];
        let f = |t: T| support_value(b, t);
        best = best.max(golden_max(&f, centre - step, centre + step, iters));
    }
    best
}

/// Whether `lambda_max(A~ + A~*) <= tol`.
pub fn is_negative<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>, tol: T) -> Result<bool> {
    Ok(max_real_part(a, h)? * lit(2.0) <= tol)
}

/// `lambda_max((A~ + A~*) / 2) = max Re W_H(A)`.
pub fn max_real_part<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>) -> Result<T> {
    let b = h.transform(a)?;
    Ok(support_value(&b, T::zero()))
}

/// Slack used when a routine requires negativity as a precondition.
pub(crate) fn negativity_slack<T: Real>(b: &ComplexMatrix<T>) -> T {
    lit::<T>(1e-10) * b.frobenius_norm().max(T::one())
}

/// `beta = inf (-2 Re z) / |z|^2` over sampled nonzero boundary points.
///
/// The ratio only decreases when moving outwards along a ray from the origin,
/// so the infimum over the convex range sits on its boundary.
pub fn coercivity_constant<T: Real>(a: &ComplexMatrix<T>, h: &Symmetrizer<T>, m: usize) -> Result<T> {
    if m < 64 {
        return Err(Error::InvalidParameter("coercivity_constant needs m >= 64".into()));
    }
    let b = h.transform(a)?;
    let top = support_value(&b, T::zero());
    if top * lit(2.0) > negativity_slack(&b) {
        return Err(Error::NotNegative(to_f64(top * lit(2.0))));
    }
    let boundary = boundary_at_angles(&b, h.cond(), uniform_angles(m))?;
    let floor = lit::<T>(1e-12) * b.frobenius_norm();
    let beta = boundary
        .points
        .iter()
        .filter(|&&z| abs_c(z) > floor)
        .map(|&z| (-z.re * lit(2.0)).max(T::zero()) / norm_sqr_c(z))
        .fold(lit::<T>(f64::INFINITY), T::min);
    Ok(beta)
}
