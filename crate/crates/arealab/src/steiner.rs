//! Midpoint inequality for the area functional.
//!
//! For any two fields, the area of the midpoint `(f₁ + f₂)/2` is at most
//! the mean of the areas. At the rectangle-sum level this follows per
//! rectangle from the vector inequality `Σ‖vᵢ‖ ≥ ‖Σvᵢ‖`; at the
//! quasi-linear level it is the same inequality applied per triangle with
//! `v = (1/2, a/2, b/2)`. Equality forces the two gradients to agree, i.e.
//! the difference of the fields is constant — except that equality can also
//! hold for pairs whose sections carry purely singular variation.

use crate::domain::Subdivision;
use crate::error::{Error, Result};
use crate::field::{eval_grad, Regularity, ScalarField};
use crate::geocze::geocze_sum;
use crate::quad::KahanSum;
use crate::quasilinear::{common_mesh, lifted_tri_area, QuasiLinearFn};

/// `Σᵢ ‖vᵢ‖ ≥ ‖Σᵢ vᵢ‖` for 3-vectors. Returns (lhs, rhs, holds) with a
/// 1e-12 slack; equality holds exactly for pairwise parallel vectors.
pub fn vector_norm_superadditivity(vs: &[(f64, f64, f64)]) -> (f64, f64, bool) {
    let mut lhs = KahanSum::new();
    let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
    for &(a, b, c) in vs {
        lhs.add((a * a + b * b + c * c).sqrt());
        sx += a;
        sy += b;
        sz += c;
    }
    let lhs = lhs.value();
    let rhs = (sx * sx + sy * sy + sz * sz).sqrt();
    (lhs, rhs, lhs >= rhs - 1e-12)
}

/// Midpoint gap of the rectangle sums on a fixed subdivision:
/// `(G(f₁;D) + G(f₂;D))/2 − G((f₁+f₂)/2; D) ≥ 0` up to quadrature noise.
pub fn steiner_gap_subdivision(
    f1: &ScalarField,
    f2: &ScalarField,
    d: &Subdivision,
    panels: usize,
    order: usize,
) -> Result<f64> {
    if f1.domain() != f2.domain() {
        return Err(Error::InvalidDomain(
            "midpoint gap needs fields on the same domain".into(),
        ));
    }
    let mid = ScalarField::midpoint(f1, f2)?;
    let g1 = geocze_sum(f1, d, panels, order)?;
    let g2 = geocze_sum(f2, d, panels, order)?;
    let gm = geocze_sum(&mid, d, panels, order)?;
    Ok(0.5 * (g1 + g2) - gm)
}

/// Midpoint gap of elementary areas on a common triangulation:
/// `(a(Π₁) + a(Π₂))/2 − a((Π₁+Π₂)/2) ≥ 0` exactly (per-triangle vector
/// inequality with v = (1/2, a/2, b/2)). Grid-backed meshes are refined to
/// a common level first; other mesh mismatches are an error.
pub fn steiner_gap_quasilinear(p1: &QuasiLinearFn, p2: &QuasiLinearFn) -> Result<f64> {
    let (a, b) = common_mesh(p1, p2)?;
    let mid = a.midpoint_with(&b)?;
    let mut gap = KahanSum::new();
    for i in 0..a.triangles().len() {
        let t = &a.triangles()[i];
        let (a1, b1, _) = a.coeffs()[i];
        let (a2, b2, _) = b.coeffs()[i];
        let (am, bm, _) = mid.coeffs()[i];
        gap.add(
            0.5 * (lifted_tri_area(t, a1, b1) + lifted_tri_area(t, a2, b2))
                - lifted_tri_area(t, am, bm),
        );
    }
    Ok(gap.value())
}

/// Max over a uniform sample grid of `‖∇f₁ − ∇f₂‖`; near zero certifies the
/// equality-case conclusion (f₁ − f₂ constant) for C¹ pairs.
pub fn equality_flatness_residual(
    f1: &ScalarField,
    f2: &ScalarField,
    samples: usize,
    fd_step: f64,
) -> Result<f64> {
    if f1.domain() != f2.domain() {
        return Err(Error::InvalidDomain(
            "flatness residual needs fields on the same domain".into(),
        ));
    }
    if f1.regularity() != Regularity::C1 || f2.regularity() != Regularity::C1 {
        return Err(Error::InvalidInput(
            "flatness residual applies to C1 fields".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidParam("need at least one sample".into()));
    }
    let dom = f1.domain();
    let mut worst = 0.0f64;
    for j in 0..=samples {
        let y = dom.y_lo + dom.height() * j as f64 / samples as f64;
        for i in 0..=samples {
            let x = dom.x_lo + dom.width() * i as f64 / samples as f64;
            let (g1x, g1y) = eval_grad(f1, x, y, fd_step)?;
            let (g2x, g2y) = eval_grad(f2, x, y, fd_step)?;
            worst = worst.max((g1x - g2x).hypot(g1y - g2y));
        }
    }
    Ok(worst)
}
