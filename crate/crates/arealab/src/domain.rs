//! Closed rectangular domains, oriented rectangles and grid subdivisions.

use crate::error::{Error, Result};

/// Closed axis-aligned rectangle `[x_lo, x_hi] × [y_lo, y_hi]` serving as a
/// field domain. The unit square is the default instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Domain {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        if !(x_lo < x_hi) || !(y_lo < y_hi) {
            return Err(Error::InvalidDomain(format!(
                "need x_lo < x_hi and y_lo < y_hi, got [{x_lo}, {x_hi}] × [{y_lo}, {y_hi}]"
            )));
        }
        if !(x_lo.is_finite() && x_hi.is_finite() && y_lo.is_finite() && y_hi.is_finite()) {
            return Err(Error::InvalidDomain("bounds must be finite".into()));
        }
        Ok(Domain {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    pub fn unit_square() -> Self {
        Domain {
            x_lo: 0.0,
            x_hi: 1.0,
            y_lo: 0.0,
            y_hi: 1.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi && y >= self.y_lo && y <= self.y_hi
    }

    pub fn contains_domain(&self, other: &Domain) -> bool {
        other.x_lo >= self.x_lo
            && other.x_hi <= self.x_hi
            && other.y_lo >= self.y_lo
            && other.y_hi <= self.y_hi
    }

    /// Concentric rectangle with every side inset by a quarter of its length
    /// (half-size, centered). Used by the mollification experiments.
    pub fn centered_subsquare(&self) -> Domain {
        let dx = self.width() / 4.0;
        let dy = self.height() / 4.0;
        Domain {
            x_lo: self.x_lo + dx,
            x_hi: self.x_hi - dx,
            y_lo: self.y_lo + dy,
            y_hi: self.y_hi - dy,
        }
    }

    /// Shrink all four sides by `h`. Fails unless `0 < h < min(side)/2`.
    pub fn shrink(&self, h: f64) -> Result<Domain> {
        if !(h > 0.0) || h >= self.width() / 2.0 || h >= self.height() / 2.0 {
            return Err(Error::InvalidParam(format!(
                "shrink radius h = {h} outside (0, {})",
                0.5 * self.width().min(self.height())
            )));
        }
        Domain::new(
            self.x_lo + h,
            self.x_hi - h,
            self.y_lo + h,
            self.y_hi - h,
        )
    }

    pub fn to_rect(&self) -> OrientedRect {
        OrientedRect {
            a: self.x_lo,
            b: self.x_hi,
            c: self.y_lo,
            d: self.y_hi,
        }
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::unit_square()
    }
}

/// Oriented rectangle `R = [a, b] × [c, d]`, `a < b`, `c < d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl OrientedRect {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a < b && c < d) {
            return Err(Error::InvalidDomain(format!(
                "oriented rectangle needs a < b, c < d; got [{a}, {b}] × [{c}, {d}]"
            )));
        }
        Ok(OrientedRect { a, b, c, d })
    }

    pub fn area(&self) -> f64 {
        (self.b - self.a) * (self.d - self.c)
    }

    pub fn diameter(&self) -> f64 {
        (self.b - self.a).hypot(self.d - self.c)
    }

    pub fn within(&self, dom: &Domain) -> bool {
        self.a >= dom.x_lo && self.b <= dom.x_hi && self.c >= dom.y_lo && self.d <= dom.y_hi
    }

    /// Interior overlap test (shared edges do not count).
    pub fn overlaps_interior(&self, other: &OrientedRect) -> bool {
        self.a.max(other.a) < self.b.min(other.b) && self.c.max(other.c) < self.d.min(other.d)
    }
}

/// Grid subdivision of a domain into nonoverlapping oriented rectangles,
/// given by strictly increasing cut lists along each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Subdivision {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        for cuts in [&xs, &ys] {
            if cuts.len() < 2 {
                return Err(Error::InvalidInput(
                    "subdivision needs at least two cuts per axis".into(),
                ));
            }
            if cuts.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidInput(
                    "subdivision cuts must be strictly increasing".into(),
                ));
            }
        }
        Ok(Subdivision { xs, ys })
    }

    /// Uniform `2^level × 2^level` subdivision of `dom`.
    pub fn dyadic(dom: &Domain, level: u32) -> Self {
        let n = 1usize << level;
        let xs = (0..=n)
            .map(|i| dom.x_lo + dom.width() * i as f64 / n as f64)
            .collect();
        let ys = (0..=n)
            .map(|j| dom.y_lo + dom.height() * j as f64 / n as f64)
            .collect();
        Subdivision { xs, ys }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn cell_count(&self) -> usize {
        (self.xs.len() - 1) * (self.ys.len() - 1)
    }

    pub fn max_diameter(&self) -> f64 {
        let wx = self
            .xs
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0f64, f64::max);
        let wy = self
            .ys
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0f64, f64::max);
        wx.hypot(wy)
    }

    pub fn spans(&self, dom: &Domain) -> bool {
        self.xs[0] == dom.x_lo
            && *self.xs.last().unwrap() == dom.x_hi
            && self.ys[0] == dom.y_lo
            && *self.ys.last().unwrap() == dom.y_hi
    }

    pub fn rects(&self) -> impl Iterator<Item = OrientedRect> + '_ {
        let nx = self.xs.len() - 1;
        let ny = self.ys.len() - 1;
        (0..ny).flat_map(move |j| {
            (0..nx).map(move |i| OrientedRect {
                a: self.xs[i],
                b: self.xs[i + 1],
                c: self.ys[j],
                d: self.ys[j + 1],
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_rejects_flipped_bounds() {
        assert!(Domain::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Domain::new(0.0, 1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn dyadic_subdivision_covers_domain() {
        let dom = Domain::unit_square();
        let d = Subdivision::dyadic(&dom, 3);
        assert_eq!(d.cell_count(), 64);
        assert!(d.spans(&dom));
        let total: f64 = d.rects().map(|r| r.area()).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn shrink_bounds_checked() {
        let dom = Domain::unit_square();
        assert!(dom.shrink(0.5).is_err());
        assert!(dom.shrink(0.0).is_err());
        let q = dom.shrink(0.1).unwrap();
        assert!((q.width() - 0.8).abs() < 1e-15);
    }
}
