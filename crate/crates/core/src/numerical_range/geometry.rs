//! Planar convex geometry on complex numbers.

use num_complex::Complex;

use crate::scalar::{abs_c, lit, Real};

fn cross<T: Real>(o: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (monotone chain). Nearly coincident and
/// collinear points are dropped, so a segment yields two vertices and a
/// point yields one.
pub fn convex_hull<T: Real>(points: &[Complex<T>], tol: T) -> Vec<Complex<T>> {
    let mut pts: Vec<Complex<T>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    pts.dedup_by(|a, b| abs_c(*a - *b) <= tol);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Complex<T>> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol * tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex<T>> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol * tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let d = b - a;
    let len2 = d.re * d.re + d.im * d.im;
    if len2 == T::zero() {
        return abs_c(p - a);
    }
    let t = (((p.re - a.re) * d.re + (p.im - a.im) * d.im) / len2)
        .max(T::zero())
        .min(T::one());
    abs_c(p - (a + d * t))
}

/// Distance from `p` to the convex polygon with counter-clockwise vertices `poly`.
pub fn distance_to_convex<T: Real>(p: Complex<T>, poly: &[Complex<T>]) -> T {
    match poly.len() {
        0 => lit(f64::INFINITY),
        1 => abs_c(p - poly[0]),
        n => {
            if n >= 3 && (0..n).all(|k| cross(poly[k], poly[(k + 1) % n], p) >= T::zero()) {
                return T::zero();
            }
            (0..n)
                .map(|k| segment_distance(p, poly[k], poly[(k + 1) % n]))
                .fold(lit(f64::INFINITY), T::min)
        }
    }
}

/// Hausdorff distance between two convex polygons given by their vertices.
///
/// The distance to a convex set is a convex function, so its maximum over the
/// other polygon is attained at a vertex.
pub fn hausdorff_distance<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let tiny = lit::<T>(0.0);
    let ha = convex_hull(a, tiny);
    let hb = convex_hull(b, tiny);
    let ab = ha
        .iter()
        .map(|&p| distance_to_convex(p, &hb))
        .fold(T::zero(), T::max);
    let ba = hb
        .iter()
        .map(|&p| distance_to_convex(p, &ha))
        .fold(T::zero(), T::max);
    ab.max(ba)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0), c(0.5, 0.5), c(0.5, 0.0)];
        let h = convex_hull(&pts, 1e-12);
        assert_eq!(h.len(), 4);
        assert_eq!(distance_to_convex(c(0.5, 0.5), &h), 0.0);
        assert!((distance_to_convex(c(2.0, 0.5), &h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_hulls() {
        let seg = convex_hull(&[c(0.0, -1.0), c(0.0, 0.0), c(0.0, 1.0)], 1e-12);
        assert_eq!(seg.len(), 2);
        assert!((distance_to_convex(c(1.0, 0.0), &seg) - 1.0).abs() < 1e-15);
        let pt = convex_hull(&[c(1.0, 1.0), c(1.0, 1.0)], 1e-12);
        assert_eq!(pt.len(), 1);
    }

    #[test]
    fn hausdorff_of_nested_squares() {
        let a = [c(0.0, 0.0), c(2.0, 0.0), c(2.0, 2.0), c(0.0, 2.0)];
        let b = [c(0.5, 0.5), c(1.5, 0.5), c(1.5, 1.5), c(0.5, 1.5)];
        let d = hausdorff_distance(&a, &b);
        assert!((d - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
    }
}
