//! Box integral means on the shrunken rectangle.
//!
//! The integral mean `f_h(x,y) = (1/4h²) ∬_{[−h,h]²} f(x+ξ, y+η) dξ dη` is
//! defined on the domain inset by `h` on every side. It is C¹ with partial
//! derivatives given by boundary-difference integrals, contracts the L¹
//! norm, and never increases the surface area estimate on the shrunken
//! domain.

use crate::domain::{Domain, OrientedRect};
use crate::error::{Error, Result};
use crate::field::{Regularity, ScalarField};
use crate::grid::GridField;
use crate::quad::{integrate_line, integrate_rect};
use rayon::prelude::*;

/// Window quadrature defaults: 4 Gauss panels of order 8 per axis, raised
/// to 16 panels for discontinuous sources (the integrand is non-smooth
/// inside the window).
pub fn default_window_panels(f: &ScalarField) -> usize {
    if f.regularity() == Regularity::Integrable {
        16
    } else {
        4
    }
}

pub const DEFAULT_WINDOW_ORDER: usize = 8;

/// Integral mean of `f` with radius `h`, evaluated by fresh window
/// quadrature at every point (no caching).
#[derive(Clone)]
pub struct MollifiedField {
    source: ScalarField,
    h: f64,
    panels: usize,
    order: usize,
    domain: Domain,
}

/// Build the integral mean `f_h` on the inset domain `Q_h`.
pub fn integral_mean(f: &ScalarField, h: f64, panels: usize, order: usize) -> Result<MollifiedField> {
    let domain = f.domain().shrink(h)?;
    Ok(MollifiedField {
        source: f.clone(),
        h,
        panels,
        order,
        domain,
    })
}

impl MollifiedField {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn source(&self) -> &ScalarField {
        &self.source
    }

    /// Window average at `(x, y) ∈ Q_h`.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let h = self.h;
        let window = OrientedRect {
            a: x - h,
            b: x + h,
            c: y - h,
            d: y + h,
        };
        let integral = integrate_rect(
            |u, v| self.source.value(u, v),
            &window,
            self.panels,
            self.order,
        )
        .expect("window quadrature parameters are validated at construction");
        integral / (4.0 * h * h)
    }

    /// The two partial derivatives at `(x, y)` via the boundary-difference
    /// integrals, each divided by `4h²`.
    pub fn partials(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if !self.domain.contains(x, y) {
            return Err(Error::OutOfDomain { x, y });
        }
        integral_mean_partials(&self.source, self.h, x, y, self.panels, self.order)
    }

    /// View as a scalar field: C¹ on `Q_h`, with the analytic partials.
    pub fn to_field(&self) -> ScalarField {
        let me = self.clone();
        let grad_me = self.clone();
        ScalarField::new(
            format!("mean(h={})[{}]", self.h, self.source.name()),
            self.domain,
            Regularity::C1,
            move |x, y| me.value(x, y),
        )
        .with_grad(move |x, y| {
            grad_me
                .partials(x, y)
                .expect("gradient evaluated inside Q_h")
        })
    }

    /// Precomputed-grid mode: sample `f_h` on a `(2^k + 1)²` grid and
    /// interpolate bilinearly. Trades exactness for speed in ladder
    /// experiments; callers should record the mode in reports.
    pub fn to_grid_field(&self, k: u32) -> Result<GridField> {
        let n = (1usize << k) + 1;
        let dom = self.domain;
        let values: Vec<f64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let i = idx % n;
                let j = idx / n;
                let x = dom.x_lo + dom.width() * i as f64 / (n - 1) as f64;
                let y = dom.y_lo + dom.height() * j as f64 / (n - 1) as f64;
                self.value(x, y)
            })
            .collect();
        GridField::new(dom, n, n, values)
    }
}

impl std::fmt::Debug for MollifiedField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MollifiedField")
            .field("source", &self.source.name())
            .field("h", &self.h)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Partial derivatives of the integral mean at `(x, y) ∈ Q_h`:
///
/// ```text
/// ∂f_h/∂x = (1/4h²) ∫_{−h}^{h} [f(x+h, y+η) − f(x−h, y+η)] dη
/// ∂f_h/∂y = (1/4h²) ∫_{−h}^{h} [f(x+ξ, y+h) − f(x+ξ, y−h)] dξ
/// ```
pub fn integral_mean_partials(
    f: &ScalarField,
    h: f64,
    x: f64,
    y: f64,
    panels: usize,
    order: usize,
) -> Result<(f64, f64)> {
    let inset = f.domain().shrink(h)?;
    if !inset.contains(x, y) {
        return Err(Error::OutOfDomain { x, y });
    }
    let norm = 4.0 * h * h;
    let dx = integrate_line(
        |eta| f.value(x + h, y + eta) - f.value(x - h, y + eta),
        -h,
        h,
        panels,
        order,
    )? / norm;
    let dy = integrate_line(
        |xi| f.value(x + xi, y + h) - f.value(x + xi, y - h),
        -h,
        h,
        panels,
        order,
    )? / norm;
    Ok((dx, dy))
}

/// `∫∫_R |f|` by tensor quadrature.
pub fn l1_norm(f: &ScalarField, r: &OrientedRect, panels: usize, order: usize) -> Result<f64> {
    if !r.within(&f.domain()) {
        return Err(Error::InvalidDomain(format!(
            "rectangle [{}, {}] × [{}, {}] outside the field domain",
            r.a, r.b, r.c, r.d
        )));
    }
    integrate_rect(|x, y| f.value(x, y).abs(), r, panels, order)
}
