use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use super::StabilityPolynomial;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Axis-aligned box `(re_min, re_max, im_min, im_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bbox<T: Real> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
}

impl<T: Real> Bbox<T> {
    pub fn new(re_min: T, re_max: T, im_min: T, im_max: T) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::InvalidParameter(
                "bounding box must be finite with re_min < re_max and im_min < im_max".into(),
            ));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }
}

/// `|P|` sampled on a uniform `nx x ny` grid, row-major with the imaginary
/// part constant along a row and rows ordered from `im_min` to `im_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionGrid<T: Real> {
    pub bbox: Bbox<T>,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<T>,
}

impl<T: Real> RegionGrid<T> {
    /// Grid node in row `i` (imaginary index) and column `j` (real index).
    pub fn node(&self, i: usize, j: usize) -> Complex<T> {
        let b = &self.bbox;
        let dx = (b.re_max - b.re_min) / lit::<T>((self.nx - 1) as f64);
        let dy = (b.im_max - b.im_min) / lit::<T>((self.ny - 1) as f64);
        Complex::new(
            b.re_min + dx * lit(j as f64),
            b.im_min + dy * lit(i as f64),
        )
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[i * self.nx + j]
    }

    /// Fraction of nodes inside the stability region.
    pub fn inside_fraction(&self) -> f64 {
        let inside = self.values.iter().filter(|&&v| v <= T::one()).count();
        inside as f64 / self.values.len() as f64
    }

    /// CSV with header `re,im,abs_p`, one row per node, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re", "im", "abs_p"])?;
        for i in 0..self.ny {
            for j in 0..self.nx {
                let z = self.node(i, j);
                w.write_record([
                    fmt17(to_f64(z.re)),
                    fmt17(to_f64(z.im)),
                    fmt17(to_f64(self.value(i, j))),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// 17-significant-digit scientific notation; round-trips any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn region_grid<T: Real>(
    p: &StabilityPolynomial<T>,
    bbox: Bbox<T>,
    nx: usize,
    ny: usize,
) -> Result<RegionGrid<T>> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidParameter("nx and ny must be at least 2".into()));
    }
    let mut grid = RegionGrid {
        bbox,
        nx,
        ny,
        values: Vec::with_capacity(nx * ny),
    };
    for i in 0..ny {
        for j in 0..nx {
            let v = p.eval_abs(grid.node(i, j));
            grid.values.push(v);
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk1_zero_at_minus_one() {
        let p = StabilityPolynomial::<f64>::taylor(1).unwrap();
        let g = region_grid(&p, Bbox::new(-2.5, 0.5, -1.5, 1.5).unwrap(), 7, 7).unwrap();
        // Column 3 is re = -1, row 3 is im = 0.
        assert_eq!(g.node(3, 3), Complex::new(-1.0, 0.0));
        assert_eq!(g.value(3, 3), 0.0);
        assert_eq!(g.values.len(), 49);
    }

    #[test]
    fn rk4_boundary_node_on_axis() {
        let p = StabilityPolynomial::<f64>::taylor(4).unwrap();
        let r = 2.0 * 2f64.sqrt();
        let g = region_grid(&p, Bbox::new(-4.0, 0.0, -r, r).unwrap(), 5, 3).unwrap();
        let z = g.node(2, 4);
        assert!((z.im - r).abs() < 1e-15 && z.re == 0.0);
        assert!((g.value(2, 4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rk3_outside_at_minus_three() {
        let p = StabilityPolynomial::<f64>::taylor(3).unwrap();
        let g = region_grid(&p, Bbox::new(-3.0, 1.0, -1.0, 1.0).unwrap(), 5, 3).unwrap();
        assert!((g.value(1, 0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn csv_layout() {
        let p = StabilityPolynomial::<f64>::taylor(1).unwrap();
        let g = region_grid(&p, Bbox::new(-1.0, 0.0, 0.0, 1.0).unwrap(), 2, 2).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "re,im,abs_p");
        assert_eq!(lines.len(), 5);
        assert_eq!(
            lines[1],
            "-1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0"
        );
        let parsed: f64 = lines[4].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(parsed, 2f64.sqrt());
    }

    #[test]
    fn rejects_degenerate_input() {
        let p = StabilityPolynomial::<f64>::taylor(1).unwrap();
        assert!(Bbox::new(0.0, 0.0, -1.0, 1.0).is_err());
        let b = Bbox::new(-1.0, 0.0, -1.0, 1.0).unwrap();
        assert!(region_grid(&p, b, 1, 5).is_err());
    }
}
