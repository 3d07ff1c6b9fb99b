//! Scalar fields on rectangular domains.
//!
//! A [`ScalarField`] is an immutable, thread-safe evaluator together with an
//! optional analytic gradient and a regularity hint. All combinators build
//! new fields out of shared closures; evaluators hold no mutable state.

use crate::domain::Domain;
use crate::error::{Error, Result};
use std::sync::Arc;

/// Regularity hint for a field, ordered from strongest to weakest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regularity {
    /// Continuously differentiable on the domain.
    C1,
    /// Continuous but possibly nowhere differentiable.
    Continuous,
    /// Merely integrable; may be discontinuous.
    Integrable,
}

impl Regularity {
    /// Weaker of the two tags (used when combining fields).
    pub fn weaker(self, other: Regularity) -> Regularity {
        self.max(other)
    }
}

pub(crate) type EvalFn = dyn Fn(f64, f64) -> f64 + Send + Sync;
pub(crate) type GradFn = dyn Fn(f64, f64) -> (f64, f64) + Send + Sync;

/// Real-valued function on a closed rectangle.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    domain: Domain,
    regularity: Regularity,
    eval: Arc<EvalFn>,
    grad: Option<Arc<GradFn>>,
}

impl ScalarField {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        regularity: Regularity,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarField {
            name: name.into(),
            domain,
            regularity,
            eval: Arc::new(eval),
            grad: None,
        }
    }

    pub fn with_grad(
        mut self,
        grad: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn has_analytic_grad(&self) -> bool {
        self.grad.is_some()
    }

    /// Evaluate at a point of the domain. Total on the domain; behaviour
    /// outside it is the closure's business (catalog fields clamp or extend).
    pub fn value(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn analytic_grad(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        self.grad.as_ref().map(|g| g(x, y))
    }

    /// Same evaluator restricted to a sub-rectangle.
    pub fn restrict(&self, sub: Domain) -> Result<ScalarField> {
        if !self.domain.contains_domain(&sub) {
            return Err(Error::InvalidDomain(format!(
                "restriction {:?} not contained in {:?}",
                sub, self.domain
            )));
        }
        let mut f = self.clone();
        f.domain = sub;
        f.name = format!("{}|[{},{}]x[{},{}]", f.name, sub.x_lo, sub.x_hi, sub.y_lo, sub.y_hi);
        Ok(f)
    }

    /// Pointwise midpoint `(f + g)/2`, carrying the weaker regularity tag.
    pub fn midpoint(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
        let dom = intersect(&f.domain, &g.domain)?;
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let mut out = ScalarField::new(
            format!("mid({},{})", f.name, g.name),
            dom,
            f.regularity.weaker(g.regularity),
            move |x, y| 0.5 * (fe(x, y) + ge(x, y)),
        );
        if let (Some(fg), Some(gg)) = (f.grad.clone(), g.grad.clone()) {
            out = out.with_grad(move |x, y| {
                let (ax, ay) = fg(x, y);
                let (bx, by) = gg(x, y);
                (0.5 * (ax + bx), 0.5 * (ay + by))
            });
        }
        Ok(out)
    }

    /// Pointwise difference `f − g` on the common domain.
    pub fn difference(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
        let dom = intersect(&f.domain, &g.domain)?;
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        Ok(ScalarField::new(
            format!("diff({},{})", f.name, g.name),
            dom,
            f.regularity.weaker(g.regularity),
            move |x, y| fe(x, y) - ge(x, y),
        ))
    }
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("regularity", &self.regularity)
            .field("analytic_grad", &self.grad.is_some())
            .finish()
    }
}

fn intersect(a: &Domain, b: &Domain) -> Result<Domain> {
    Domain::new(
        a.x_lo.max(b.x_lo),
        a.x_hi.min(b.x_hi),
        a.y_lo.max(b.y_lo),
        a.y_hi.min(b.y_hi),
    )
    .map_err(|_| Error::InvalidDomain("fields have disjoint domains".into()))
}

/// Default finite-difference step; balances truncation against roundoff
/// in double precision.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Gradient at `(x, y)`: the analytic gradient when the field carries one,
/// otherwise central differences with step `h` (second-order one-sided
/// stencils within `h` of the boundary).
pub fn eval_grad(f: &ScalarField, x: f64, y: f64, h: f64) -> Result<(f64, f64)> {
    if !f.domain().contains(x, y) {
        return Err(Error::OutOfDomain { x, y });
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParam(format!("fd step must be positive, got {h}")));
    }
    if let Some(g) = f.analytic_grad(x, y) {
        return Ok(g);
    }
    let dom = f.domain();
    let gx = fd_1d(|t| f.value(t, y), x, dom.x_lo, dom.x_hi, h);
    let gy = fd_1d(|t| f.value(x, t), y, dom.y_lo, dom.y_hi, h);
    Ok((gx, gy))
}

fn fd_1d(g: impl Fn(f64) -> f64, t: f64, lo: f64, hi: f64, h: f64) -> f64 {
    if t - h >= lo && t + h <= hi {
        (g(t + h) - g(t - h)) / (2.0 * h)
    } else if t - h < lo {
        (-3.0 * g(t) + 4.0 * g(t + h) - g(t + 2.0 * h)) / (2.0 * h)
    } else {
        (3.0 * g(t) - 4.0 * g(t - h) + g(t - 2.0 * h)) / (2.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn plane() -> ScalarField {
        ScalarField::new("plane", Domain::unit_square(), Regularity::C1, |x, y| {
            x + 2.0 * y
        })
        .with_grad(|_, _| (1.0, 2.0))
    }

    #[test]
    fn analytic_grad_wins() {
        let f = plane();
        assert_eq!(eval_grad(&f, 0.3, 0.7, 1e-5).unwrap(), (1.0, 2.0));
    }

    #[test]
    fn fd_grad_on_plane_without_analytic() {
        let f = ScalarField::new("p", Domain::unit_square(), Regularity::C1, |x, y| {
            x + 2.0 * y
        });
        let (gx, gy) = eval_grad(&f, 0.5, 0.5, 1e-5).unwrap();
        assert_abs_diff_eq!(gx, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(gy, 2.0, epsilon = 1e-9);
        // one-sided at the corner
        let (gx, gy) = eval_grad(&f, 0.0, 1.0, 1e-5).unwrap();
        assert_abs_diff_eq!(gx, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(gy, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn paraboloid_gradient() {
        let f = ScalarField::new("parab", Domain::unit_square(), Regularity::C1, |x, y| {
            x * x + y * y
        })
        .with_grad(|x, y| (2.0 * x, 2.0 * y));
        let (gx, gy) = eval_grad(&f, 0.5, 0.5, 1e-5).unwrap();
        assert_abs_diff_eq!(gx, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(gy, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn outside_point_rejected() {
        assert!(matches!(
            eval_grad(&plane(), 1.5, 0.5, 1e-5),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn fd_matches_analytic_within_ten_h_squared() {
        // strip the analytic gradients so eval_grad takes the FD route
        let cases: Vec<(ScalarField, fn(f64, f64) -> (f64, f64))> = vec![
            (
                ScalarField::new("parab", Domain::unit_square(), Regularity::C1, |x, y| {
                    x * x + y * y
                }),
                |x, y| (2.0 * x, 2.0 * y),
            ),
            (
                ScalarField::new("cyl", Domain::unit_square(), Regularity::C1, |x, _| x * x),
                |x, _| (2.0 * x, 0.0),
            ),
            (
                ScalarField::new("wave", Domain::unit_square(), Regularity::C1, |x, y| {
                    (2.0 * x).sin() * (3.0 * y).cos()
                }),
                |x, y| {
                    (
                        2.0 * (2.0 * x).cos() * (3.0 * y).cos(),
                        -3.0 * (2.0 * x).sin() * (3.0 * y).sin(),
                    )
                },
            ),
        ];
        let h = 1e-5;
        let mut state = 0x2545f4914f6cdd1du64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for (f, grad) in &cases {
            for _ in 0..1000 {
                let x = 0.01 + 0.98 * rnd();
                let y = 0.01 + 0.98 * rnd();
                let (gx, gy) = eval_grad(f, x, y, h).unwrap();
                let (ex, ey) = grad(x, y);
                let err = (gx - ex).hypot(gy - ey);
                assert!(err <= 10.0 * h * h, "{}: err {err} at ({x}, {y})", f.name());
            }
        }
    }

    #[test]
    fn grid_sampled_plane_gradient() {
        // bilinear interpolation of affine data is exact, so finite
        // differences recover the gradient to quadrature precision
        let g = crate::grid::GridField::new(
            Domain::unit_square(),
            11,
            11,
            (0..121)
                .map(|k| {
                    let (i, j) = (k % 11, k / 11);
                    i as f64 / 10.0 + 2.0 * (j as f64 / 10.0)
                })
                .collect(),
        )
        .unwrap();
        let f = g.to_field();
        let (gx, gy) = eval_grad(&f, 0.437, 0.591, 1e-4).unwrap();
        assert_abs_diff_eq!(gx, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(gy, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn midpoint_takes_weaker_tag() {
        let a = plane();
        let b = ScalarField::new("step", Domain::unit_square(), Regularity::Integrable, |x, _| {
            if x <= 0.5 {
                0.0
            } else {
                1.0
            }
        });
        let m = ScalarField::midpoint(&a, &b).unwrap();
        assert_eq!(m.regularity(), Regularity::Integrable);
        assert_abs_diff_eq!(m.value(0.25, 0.0), 0.125, epsilon = 1e-15);
    }
}
