//! Composite Gauss–Legendre quadrature on lines and rectangles.
//!
//! Fixed-order rules (orders 2..=16) with uniform panels. Exact for
//! polynomials of degree `2·order − 1` per panel; error at least halves
//! when panels double for C² integrands.

use crate::domain::OrientedRect;
use crate::error::{Error, Result};
use std::sync::OnceLock;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 16;

/// Nodes and weights on [-1, 1].
struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn legendre_rules() -> &'static Vec<Rule> {
    static RULES: OnceLock<Vec<Rule>> = OnceLock::new();
    RULES.get_or_init(|| (MIN_ORDER..=MAX_ORDER).map(newton_legendre).collect())
}

/// Compute the order-n rule by Newton iteration on P_n with the
/// three-term recurrence. Plenty accurate for n <= 16.
fn newton_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_eval(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    Rule { nodes, weights }
}

fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule(order: usize) -> Result<&'static Rule> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParam(format!(
            "Gauss order {order} outside {MIN_ORDER}..={MAX_ORDER}"
        )));
    }
    Ok(&legendre_rules()[order - MIN_ORDER])
}

fn check_panels(panels: usize) -> Result<()> {
    if panels == 0 {
        return Err(Error::InvalidParam("panel count must be >= 1".into()));
    }
    Ok(())
}

/// Neumaier-compensated accumulator; rectangle sums add 10^5..10^6 terms
/// and plain summation loses ~1e-11 on them.
#[derive(Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Composite Gauss–Legendre approximation of `∫_a^b g`.
pub fn integrate_line(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::InvalidParam(format!("need a <= b, got [{a}, {b}]")));
    }
    check_panels(panels)?;
    let r = rule(order)?;
    if a == b {
        return Ok(0.0);
    }
    let h = (b - a) / panels as f64;
    let mut acc = KahanSum::new();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            acc.add(w * half * g(mid + half * x));
        }
    }
    Ok(acc.value())
}

/// Tensor-product composite Gauss–Legendre approximation of `∬_R F`.
pub fn integrate_rect(
    f: impl Fn(f64, f64) -> f64,
    r: &OrientedRect,
    panels: usize,
    order: usize,
) -> Result<f64> {
    integrate_rect_xy(f, r, panels, panels, order)
}

/// [`integrate_rect`] with separate panel counts per axis, for integrands
/// whose resolution needs differ along x and y.
pub fn integrate_rect_xy(
    f: impl Fn(f64, f64) -> f64,
    r: &OrientedRect,
    panels_x: usize,
    panels_y: usize,
    order: usize,
) -> Result<f64> {
    check_panels(panels_x)?;
    check_panels(panels_y)?;
    let rl = rule(order)?;
    let hx = (r.b - r.a) / panels_x as f64;
    let hy = (r.d - r.c) / panels_y as f64;
    let mut acc = KahanSum::new();
    for py in 0..panels_y {
        let ylo = r.c + py as f64 * hy;
        let ymid = ylo + 0.5 * hy;
        for (yn, yw) in rl.nodes.iter().zip(&rl.weights) {
            let y = ymid + 0.5 * hy * yn;
            let wy = yw * 0.5 * hy;
            for px in 0..panels_x {
                let xlo = r.a + px as f64 * hx;
                let xmid = xlo + 0.5 * hx;
                for (xn, xw) in rl.nodes.iter().zip(&rl.weights) {
                    acc.add(wy * xw * 0.5 * hx * f(xmid + 0.5 * hx * xn, y));
                }
            }
        }
    }
    Ok(acc.value())
}

/// `∫_a^b |t(x)| dx` with panels split at detected sign changes of `t`.
///
/// Sign changes are bracketed on the panel grid and located by bisection to
/// 1e-12 so the absolute value never folds a kink into a Gauss panel.
pub fn integrate_abs_line(
    t: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::InvalidParam(format!("need a <= b, got [{a}, {b}]")));
    }
    check_panels(panels)?;
    rule(order)?;
    if a == b {
        return Ok(0.0);
    }
    let n = panels.max(4);
    let h = (b - a) / n as f64;
    let mut breaks = vec![a];
    let mut prev = t(a);
    let mut prev_x = a;
    for i in 1..=n {
        let x = if i == n { b } else { a + i as f64 * h };
        let v = t(x);
        if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
            breaks.push(bisect_root(&t, prev_x, x, prev));
        }
        prev = v;
        prev_x = x;
    }
    breaks.push(b);

    let mut total = KahanSum::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        // keep panel density comparable to the requested resolution
        let share = (((hi - lo) / (b - a)) * panels as f64).ceil() as usize;
        let p = share.clamp(1, panels);
        total.add(integrate_line(|x| t(x).abs(), lo, hi, p, order)?);
    }
    Ok(total.value())
}

fn bisect_root(t: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let neg_lo = flo < 0.0;
    for _ in 0..80 {
        if hi - lo < 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = t(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
