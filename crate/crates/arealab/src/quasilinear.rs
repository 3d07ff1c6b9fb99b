//! Triangulations and piecewise-affine (quasi-linear) functions.
//!
//! A quasi-linear function is continuous and affine on each triangle of a
//! decomposition of the domain. Its elementary area is the total 3D area of
//! the lifted triangles, computed per triangle as `|T|·√(1 + a² + b²)`.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::field::{Regularity, ScalarField};
use crate::quad::KahanSum;
use std::collections::HashMap;
use std::sync::Arc;

/// Triangle in the plane, vertices in domain coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle2D {
    pub p1: (f64, f64),
    pub p2: (f64, f64),
    pub p3: (f64, f64),
}

impl Triangle2D {
    pub fn new(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64)) -> Self {
        Triangle2D { p1, p2, p3 }
    }

    pub fn vertices(&self) -> [(f64, f64); 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn centroid(&self) -> (f64, f64) {
        (
            (self.p1.0 + self.p2.0 + self.p3.0) / 3.0,
            (self.p1.1 + self.p2.1 + self.p3.1) / 3.0,
        )
    }

    fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        let s1 = orient(self.p1, self.p2, (x, y));
        let s2 = orient(self.p2, self.p3, (x, y));
        let s3 = orient(self.p3, self.p1, (x, y));
        let pos = s1 >= -tol && s2 >= -tol && s3 >= -tol;
        let neg = s1 <= tol && s2 <= tol && s3 <= tol;
        pos || neg
    }
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Planar area: half the absolute determinant of the vertex matrix.
pub fn tri_area_2d(t: &Triangle2D) -> f64 {
    0.5 * orient(t.p1, t.p2, t.p3).abs()
}

/// Area of the lift of `t` under an affine map with gradient `(a, b)`:
/// `|T|·√(1 + a² + b²)`.
pub fn lifted_tri_area(t: &Triangle2D, a: f64, b: f64) -> f64 {
    tri_area_2d(t) * (1.0 + a * a + b * b).sqrt()
}

/// 3D area of a triangle from its lifted vertices, by the cross product.
/// Independent route used to cross-check [`lifted_tri_area`].
pub fn tri_area_3d(p: [(f64, f64, f64); 3]) -> f64 {
    let u = (p[1].0 - p[0].0, p[1].1 - p[0].1, p[1].2 - p[0].2);
    let v = (p[2].0 - p[0].0, p[2].1 - p[0].1, p[2].2 - p[0].2);
    let cx = u.1 * v.2 - u.2 * v.1;
    let cy = u.2 * v.0 - u.0 * v.2;
    let cz = u.0 * v.1 - u.1 * v.0;
    0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
}

/// Which cell diagonal the interpolation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    /// Lower-left to upper-right (the default).
    Main,
    /// Upper-left to lower-right.
    Anti,
}

#[derive(Debug, Clone, Copy)]
struct GridInfo {
    ncx: usize,
    ncy: usize,
    diagonal: Diagonal,
}

/// Continuous piecewise-affine function over a triangulation of the domain.
///
/// Invariants checked at construction: triangles are nondegenerate, cover
/// the domain exactly (area bookkeeping within 1e-12·|domain|), and affine
/// pieces of triangles sharing an edge agree at the shared vertices.
#[derive(Clone)]
pub struct QuasiLinearFn {
    domain: Domain,
    triangles: Arc<Vec<Triangle2D>>,
    coeffs: Arc<Vec<(f64, f64, f64)>>,
    grid: Option<GridInfo>,
}

impl QuasiLinearFn {
    pub fn new(
        domain: Domain,
        triangles: Vec<Triangle2D>,
        coeffs: Vec<(f64, f64, f64)>,
    ) -> Result<Self> {
        Self::build(domain, triangles, coeffs, None)
    }

    fn build(
        domain: Domain,
        triangles: Vec<Triangle2D>,
        coeffs: Vec<(f64, f64, f64)>,
        grid: Option<GridInfo>,
    ) -> Result<Self> {
        if triangles.is_empty() || triangles.len() != coeffs.len() {
            return Err(Error::InvalidTriangulation(format!(
                "{} triangles with {} coefficient triples",
                triangles.len(),
                coeffs.len()
            )));
        }
        let dom_area = domain.area();
        let mut total = KahanSum::new();
        for (i, t) in triangles.iter().enumerate() {
            let area = tri_area_2d(t);
            if area < 1e-15 * dom_area {
                return Err(Error::InvalidTriangulation(format!(
                    "triangle {i} is degenerate (area {area:.3e})"
                )));
            }
            for (x, y) in t.vertices() {
                if !domain.contains(x, y) {
                    return Err(Error::InvalidTriangulation(format!(
                        "triangle {i} vertex ({x}, {y}) outside the domain"
                    )));
                }
            }
            total.add(area);
        }
        if (total.value() - dom_area).abs() > 1e-12 * dom_area.max(1.0) {
            return Err(Error::InvalidTriangulation(format!(
                "triangle areas sum to {} but the domain has area {dom_area}",
                total.value()
            )));
        }
        let ql = QuasiLinearFn {
            domain,
            triangles: Arc::new(triangles),
            coeffs: Arc::new(coeffs),
            grid,
        };
        ql.check_edge_agreement()?;
        Ok(ql)
    }

    /// Affine pieces of adjacent triangles must coincide on the shared edge;
    /// agreement at both endpoints of the edge is equivalent for affine maps.
    fn check_edge_agreement(&self) -> Result<()> {
        let scale = 1e-9
            * self
                .coeffs
                .iter()
                .map(|(a, b, c)| a.abs() + b.abs() + c.abs())
                .fold(1.0f64, f64::max);
        let key = |p: (f64, f64)| (p.0.to_bits(), p.1.to_bits());
        let mut edges: HashMap<_, Vec<usize>> = HashMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            let vs = t.vertices();
            for k in 0..3 {
                let (p, q) = (vs[k], vs[(k + 1) % 3]);
                let mut e = [key(p), key(q)];
                e.sort_unstable();
                edges.entry(e).or_default().push(i);
            }
        }
        for (edge, tris) in &edges {
            if tris.len() < 2 {
                continue;
            }
            for pair in tris.windows(2) {
                let (i, j) = (pair[0], pair[1]);
                for bits in edge {
                    let p = (f64::from_bits(bits.0), f64::from_bits(bits.1));
                    let vi = self.eval_tri(i, p.0, p.1);
                    let vj = self.eval_tri(j, p.0, p.1);
                    if (vi - vj).abs() > scale {
                        return Err(Error::InvalidTriangulation(format!(
                            "triangles {i} and {j} disagree at shared vertex ({}, {}): {vi} vs {vj}",
                            p.0, p.1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn eval_tri(&self, i: usize, x: f64, y: f64) -> f64 {
        let (a, b, c) = self.coeffs[i];
        a * x + b * y + c
    }

    fn locate(&self, x: f64, y: f64) -> usize {
        if let Some(g) = self.grid {
            let fx = (x - self.domain.x_lo) / self.domain.width() * g.ncx as f64;
            let fy = (y - self.domain.y_lo) / self.domain.height() * g.ncy as f64;
            let i = (fx.floor() as isize).clamp(0, g.ncx as isize - 1) as usize;
            let j = (fy.floor() as isize).clamp(0, g.ncy as isize - 1) as usize;
            let u = (fx - i as f64).clamp(0.0, 1.0);
            let v = (fy - j as f64).clamp(0.0, 1.0);
            let lower = match g.diagonal {
                Diagonal::Main => v <= u,
                Diagonal::Anti => v <= 1.0 - u,
            };
            return 2 * (j * g.ncx + i) + usize::from(!lower);
        }
        let mut best = 0usize;
        let mut best_score = f64::INFINITY;
        for (i, t) in self.triangles.iter().enumerate() {
            if t.contains(x, y, 1e-12) {
                return i;
            }
            let c = t.centroid();
            let d = (c.0 - x).hypot(c.1 - y);
            if d < best_score {
                best_score = d;
                best = i;
            }
        }
        best
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.eval_tri(self.locate(x, y), x, y)
    }

    /// Per-triangle gradient at a point (constant inside each triangle).
    pub fn gradient_at(&self, x: f64, y: f64) -> (f64, f64) {
        let (a, b, _) = self.coeffs[self.locate(x, y)];
        (a, b)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn triangles(&self) -> &[Triangle2D] {
        &self.triangles
    }

    pub fn coeffs(&self) -> &[(f64, f64, f64)] {
        &self.coeffs
    }

    /// Elementary area: the total lifted-triangle area. Always at least the
    /// planar area of the domain.
    pub fn elementary_area(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (t, &(a, b, _)) in self.triangles.iter().zip(self.coeffs.iter()) {
            acc.add(lifted_tri_area(t, a, b));
        }
        acc.value()
    }

    /// View as a scalar field (continuous, no analytic gradient).
    pub fn to_field(&self) -> ScalarField {
        let me = self.clone();
        ScalarField::new(
            "quasilinear",
            self.domain,
            Regularity::Continuous,
            move |x, y| me.value(x, y),
        )
    }

    pub fn grid_level(&self) -> Option<(usize, usize, Diagonal)> {
        self.grid.map(|g| (g.ncx, g.ncy, g.diagonal))
    }

    /// Same function re-interpolated on a finer grid of the same diagonal.
    /// Exact for grid-backed inputs when the new grid refines the old one.
    pub fn refine_to(&self, cells_per_axis: usize) -> Result<QuasiLinearFn> {
        let g = self.grid.ok_or(Error::IncompatibleMeshes)?;
        if cells_per_axis % g.ncx != 0 || cells_per_axis % g.ncy != 0 {
            return Err(Error::IncompatibleMeshes);
        }
        let me = self.clone();
        from_node_values(
            self.domain,
            cells_per_axis,
            cells_per_axis,
            g.diagonal,
            |x, y| me.value(x, y),
        )
    }

    /// Midpoint function `(Π₁ + Π₂)/2` on a shared mesh; grid-backed pairs
    /// are refined to the finer mesh first.
    pub fn midpoint_with(&self, other: &QuasiLinearFn) -> Result<QuasiLinearFn> {
        let (a, b) = common_mesh(self, other)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(&(a1, b1, c1), &(a2, b2, c2))| {
                (0.5 * (a1 + a2), 0.5 * (b1 + b2), 0.5 * (c1 + c2))
            })
            .collect();
        QuasiLinearFn::build(a.domain, a.triangles.as_ref().clone(), coeffs, a.grid)
    }

    /// Plain-text mesh dump: `x1 y1 x2 y2 x3 y3 a b c` per line.
    pub fn dump_mesh(&self) -> String {
        let mut out = String::new();
        for (t, (a, b, c)) in self.triangles.iter().zip(self.coeffs.iter()) {
            out.push_str(&format!(
                "{} {} {} {} {} {} {} {} {}\n",
                t.p1.0, t.p1.1, t.p2.0, t.p2.1, t.p3.0, t.p3.1, a, b, c
            ));
        }
        out
    }
}

impl std::fmt::Debug for QuasiLinearFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiLinearFn")
            .field("domain", &self.domain)
            .field("triangles", &self.triangles.len())
            .field("grid", &self.grid)
            .finish()
    }
}

/// Meshes usable for coefficient-wise arithmetic: identical triangle lists,
/// or nested grid meshes with the same diagonal.
pub(crate) fn common_mesh(
    a: &QuasiLinearFn,
    b: &QuasiLinearFn,
) -> Result<(QuasiLinearFn, QuasiLinearFn)> {
    if meshes_match(a, b) {
        return Ok((a.clone(), b.clone()));
    }
    match (a.grid, b.grid) {
        (Some(ga), Some(gb)) if ga.diagonal == gb.diagonal && a.domain == b.domain => {
            let n = lcm(ga.ncx.max(ga.ncy), gb.ncx.max(gb.ncy));
            Ok((a.refine_to(n)?, b.refine_to(n)?))
        }
        _ => Err(Error::IncompatibleMeshes),
    }
}

fn meshes_match(a: &QuasiLinearFn, b: &QuasiLinearFn) -> bool {
    a.domain == b.domain
        && a.triangles.len() == b.triangles.len()
        && a.triangles
            .iter()
            .zip(b.triangles.iter())
            .all(|(s, t)| s == t)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(mut a: usize, mut b: usize) -> usize {
        while b != 0 {
            let t = b;
            b = a % b;
            a = t;
        }
        a
    }
    a / gcd(a, b) * b
}

/// Interpolation triangulation: node values on an `(ncx+1)×(ncy+1)` grid,
/// each cell split by the chosen diagonal, affine pieces through the corner
/// values.
pub fn from_node_values(
    domain: Domain,
    ncx: usize,
    ncy: usize,
    diagonal: Diagonal,
    value_at: impl Fn(f64, f64) -> f64,
) -> Result<QuasiLinearFn> {
    if ncx == 0 || ncy == 0 {
        return Err(Error::InvalidInput("need at least one cell per axis".into()));
    }
    let xs: Vec<f64> = (0..=ncx)
        .map(|i| domain.x_lo + domain.width() * i as f64 / ncx as f64)
        .collect();
    let ys: Vec<f64> = (0..=ncy)
        .map(|j| domain.y_lo + domain.height() * j as f64 / ncy as f64)
        .collect();
    let z: Vec<Vec<f64>> = ys
        .iter()
        .map(|&y| xs.iter().map(|&x| value_at(x, y)).collect())
        .collect();

    let mut triangles = Vec::with_capacity(2 * ncx * ncy);
    let mut coeffs = Vec::with_capacity(2 * ncx * ncy);
    for j in 0..ncy {
        for i in 0..ncx {
            let (x0, x1) = (xs[i], xs[i + 1]);
            let (y0, y1) = (ys[j], ys[j + 1]);
            let (z00, z10, z01, z11) = (z[j][i], z[j][i + 1], z[j + 1][i], z[j + 1][i + 1]);
            let cells = match diagonal {
                Diagonal::Main => [
                    // lower: (x0,y0) (x1,y0) (x1,y1); upper: (x0,y0) (x1,y1) (x0,y1)
                    (
                        Triangle2D::new((x0, y0), (x1, y0), (x1, y1)),
                        [(x0, y0, z00), (x1, y0, z10), (x1, y1, z11)],
                    ),
                    (
                        Triangle2D::new((x0, y0), (x1, y1), (x0, y1)),
                        [(x0, y0, z00), (x1, y1, z11), (x0, y1, z01)],
                    ),
                ],
                Diagonal::Anti => [
                    // lower: (x0,y0) (x1,y0) (x0,y1); upper: (x1,y0) (x1,y1) (x0,y1)
                    (
                        Triangle2D::new((x0, y0), (x1, y0), (x0, y1)),
                        [(x0, y0, z00), (x1, y0, z10), (x0, y1, z01)],
                    ),
                    (
                        Triangle2D::new((x1, y0), (x1, y1), (x0, y1)),
                        [(x1, y0, z10), (x1, y1, z11), (x0, y1, z01)],
                    ),
                ],
            };
            for (tri, pts) in cells {
                triangles.push(tri);
                coeffs.push(affine_through(pts)?);
            }
        }
    }
    QuasiLinearFn::build(
        domain,
        triangles,
        coeffs,
        Some(GridInfo {
            ncx,
            ncy,
            diagonal,
        }),
    )
}

/// Affine coefficients (a, b, c) with a·x + b·y + c through three points,
/// by Cramer's rule.
fn affine_through(p: [(f64, f64, f64); 3]) -> Result<(f64, f64, f64)> {
    let [(x1, y1, z1), (x2, y2, z2), (x3, y3, z3)] = p;
    let det = orient((x1, y1), (x2, y2), (x3, y3));
    if det.abs() < 1e-300 {
        return Err(Error::InvalidTriangulation(
            "cannot fit an affine function through collinear points".into(),
        ));
    }
    let a = ((z2 - z1) * (y3 - y1) - (z3 - z1) * (y2 - y1)) / det;
    let b = ((x2 - x1) * (z3 - z1) - (x3 - x1) * (z2 - z1)) / det;
    let c = z1 - a * x1 - b * y1;
    Ok((a, b, c))
}

/// Uniform quasi-linear interpolant of `f` at refinement level `k`:
/// values at the `(2^k + 1)²` grid nodes, cells split by the main diagonal.
///
/// For continuous `f` the interpolants converge uniformly; the call is still
/// valid for discontinuous fields but no convergence is claimed.
pub fn interpolate_quasilinear(f: &ScalarField, k: u32) -> Result<QuasiLinearFn> {
    interpolate_quasilinear_with(f, k, Diagonal::Main)
}

pub fn interpolate_quasilinear_with(
    f: &ScalarField,
    k: u32,
    diagonal: Diagonal,
) -> Result<QuasiLinearFn> {
    if k > 12 {
        return Err(Error::SizeGuard(format!(
            "interpolation level {k} produces {} triangles",
            2u64 << (2 * k)
        )));
    }
    let n = 1usize << k;
    from_node_values(f.domain(), n, n, diagonal, |x, y| f.value(x, y))
}

/// Sampled sup-distance: max of |f − g| over the `(m+1)²` uniform grid on
/// the common domain. A lower bound on the true sup.
pub fn sup_distance(f: &ScalarField, g: &ScalarField, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParam("sample resolution must be >= 1".into()));
    }
    let df = f.domain();
    let dg = g.domain();
    let dom = Domain::new(
        df.x_lo.max(dg.x_lo),
        df.x_hi.min(dg.x_hi),
        df.y_lo.max(dg.y_lo),
        df.y_hi.min(dg.y_hi),
    )
    .map_err(|_| Error::InvalidDomain("fields share no domain".into()))?;
    let mut sup = 0.0f64;
    for j in 0..=m {
        let y = dom.y_lo + dom.height() * j as f64 / m as f64;
        for i in 0..=m {
            let x = dom.x_lo + dom.width() * i as f64 / m as f64;
            sup = sup.max((f.value(x, y) - g.value(x, y)).abs());
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_descriptor;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_right_triangle_area() {
        let t = Triangle2D::new((0.0, 0.0), (1.0, 0.0), (0.0, 1.0));
        assert_abs_diff_eq!(tri_area_2d(&t), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn collinear_triangle_has_zero_area() {
        let t = Triangle2D::new((0.0, 0.0), (0.5, 0.5), (1.0, 1.0));
        assert_eq!(tri_area_2d(&t), 0.0);
    }

    #[test]
    fn shoelace_oracle() {
        let t = Triangle2D::new((0.0, 0.0), (1.0, 0.0), (0.3, 0.7));
        assert_abs_diff_eq!(tri_area_2d(&t), 0.35, epsilon = 1e-15);
    }

    #[test]
    fn lifted_area_flat_and_tilted() {
        let t = Triangle2D::new((0.0, 0.0), (1.0, 0.0), (0.0, 1.0));
        assert_abs_diff_eq!(lifted_tri_area(&t, 0.0, 0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            lifted_tri_area(&t, 1.0, 0.0),
            0.5 * 2.0f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn lifted_area_matches_cross_product_oracle() {
        // 200 deterministic pseudo-random triangles and gradients
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let t = Triangle2D::new((rnd(), rnd()), (rnd(), rnd()), (rnd(), rnd()));
            if tri_area_2d(&t) < 1e-3 {
                continue;
            }
            let (a, b) = (4.0 * rnd() - 2.0, 4.0 * rnd() - 2.0);
            let c = rnd();
            let lift = |p: (f64, f64)| (p.0, p.1, a * p.0 + b * p.1 + c);
            let oracle = tri_area_3d([lift(t.p1), lift(t.p2), lift(t.p3)]);
            assert_abs_diff_eq!(lifted_tri_area(&t, a, b), oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_interpolant_has_domain_area() {
        let f = parse_descriptor("const(3)").unwrap();
        let ql = interpolate_quasilinear(&f, 3).unwrap();
        assert_abs_diff_eq!(ql.elementary_area(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn plane_interpolant_is_exact() {
        let f = parse_descriptor("plane(1,2,0)").unwrap();
        let expected = 6.0f64.sqrt();
        for k in [0u32, 1, 3, 5] {
            let ql = interpolate_quasilinear(&f, k).unwrap();
            assert_abs_diff_eq!(ql.elementary_area(), expected, epsilon = 1e-12);
            // reproduces the plane pointwise
            assert_abs_diff_eq!(ql.value(0.3, 0.77), 0.3 + 1.54, epsilon = 1e-12);
        }
    }

    #[test]
    fn paraboloid_interpolation_error_quarters_per_level() {
        let f = parse_descriptor("paraboloid").unwrap();
        let mut prev = f64::INFINITY;
        for k in 2..=6 {
            let ql = interpolate_quasilinear(&f, k).unwrap();
            let d = sup_distance(&f, &ql.to_field(), 512).unwrap();
            if prev.is_finite() {
                let ratio = prev / d;
                assert!(
                    (2.5..6.0).contains(&ratio),
                    "k={k} ratio={ratio} (expected ≈ 4)"
                );
            }
            prev = d;
        }
    }

    #[test]
    fn degenerate_triangles_rejected() {
        let tris = vec![
            Triangle2D::new((0.0, 0.0), (1.0, 0.0), (1.0, 1.0)),
            Triangle2D::new((0.0, 0.0), (1.0, 1.0), (0.0, 1.0)),
            Triangle2D::new((0.0, 0.0), (0.5, 0.5), (1.0, 1.0)),
        ];
        let coeffs = vec![(0.0, 0.0, 0.0); 3];
        assert!(matches!(
            QuasiLinearFn::new(Domain::unit_square(), tris, coeffs),
            Err(Error::InvalidTriangulation(_))
        ));
    }

    #[test]
    fn gapped_cover_rejected() {
        // single triangle covers half the square
        let tris = vec![Triangle2D::new((0.0, 0.0), (1.0, 0.0), (1.0, 1.0))];
        let coeffs = vec![(0.0, 0.0, 0.0)];
        assert!(matches!(
            QuasiLinearFn::new(Domain::unit_square(), tris, coeffs),
            Err(Error::InvalidTriangulation(_))
        ));
    }

    #[test]
    fn discontinuous_pieces_rejected() {
        let tris = vec![
            Triangle2D::new((0.0, 0.0), (1.0, 0.0), (1.0, 1.0)),
            Triangle2D::new((0.0, 0.0), (1.0, 1.0), (0.0, 1.0)),
        ];
        // second piece jumps by 1 across the shared diagonal
        let coeffs = vec![(0.0, 0.0, 0.0), (0.0, 0.0, 1.0)];
        assert!(matches!(
            QuasiLinearFn::new(Domain::unit_square(), tris, coeffs),
            Err(Error::InvalidTriangulation(_))
        ));
    }

    #[test]
    fn sup_distance_basics() {
        let f = parse_descriptor("const(0)").unwrap();
        let g = parse_descriptor("const(3)").unwrap();
        assert_abs_diff_eq!(sup_distance(&f, &f, 16).unwrap(), 0.0);
        assert_abs_diff_eq!(sup_distance(&f, &g, 16).unwrap(), 3.0);
    }

    #[test]
    fn interpolant_sup_distance_shrinks_with_level() {
        let f = parse_descriptor("paraboloid").unwrap();
        let d4 = sup_distance(
            &f,
            &interpolate_quasilinear(&f, 4).unwrap().to_field(),
            512,
        )
        .unwrap();
        let d5 = sup_distance(
            &f,
            &interpolate_quasilinear(&f, 5).unwrap().to_field(),
            512,
        )
        .unwrap();
        assert!(d4 > 0.0 && d5 < d4);
    }

    #[test]
    fn opposite_diagonals_agree_for_separable_fields() {
        // piecewise-linear separable data is affine on every cell, so both
        // diagonal choices decompose the same function
        let f = ScalarField::new(
            "separable",
            Domain::unit_square(),
            Regularity::Continuous,
            |x, y| (3.0 * x).sin().abs() + (2.0 * y).cos(),
        );
        let n = 8;
        let node = |i: usize| i as f64 / n as f64;
        let u: Vec<f64> = (0..=n).map(|i| f.value(node(i), 0.0)).collect();
        let v: Vec<f64> = (0..=n).map(|j| f.value(0.0, node(j)) - f.value(0.0, 0.0)).collect();
        let main = from_node_values(Domain::unit_square(), n, n, Diagonal::Main, |x, y| {
            let i = ((x * n as f64).round() as usize).min(n);
            let j = ((y * n as f64).round() as usize).min(n);
            u[i] + v[j]
        })
        .unwrap();
        let anti = from_node_values(Domain::unit_square(), n, n, Diagonal::Anti, |x, y| {
            let i = ((x * n as f64).round() as usize).min(n);
            let j = ((y * n as f64).round() as usize).min(n);
            u[i] + v[j]
        })
        .unwrap();
        assert_abs_diff_eq!(
            main.elementary_area(),
            anti.elementary_area(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn refine_preserves_function_and_area() {
        let f = parse_descriptor("paraboloid").unwrap();
        let coarse = interpolate_quasilinear(&f, 3).unwrap();
        let fine = coarse.refine_to(32).unwrap();
        assert_abs_diff_eq!(
            coarse.elementary_area(),
            fine.elementary_area(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            coarse.value(0.37, 0.21),
            fine.value(0.37, 0.21),
            epsilon = 1e-12
        );
    }

    #[test]
    fn random_quasilinear_matches_gradient_integral_oracle() {
        // the area integral of √(1 + Π_x² + Π_y²) over a piecewise-affine
        // function, integrated exactly per triangle, is the 3D area of the
        // lifted vertices; the oracle below uses only vertex evaluations
        // and cross products, never the stored coefficients
        let mut state = 0x6a09e667f3bcc909u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..20 {
            let nodes: Vec<f64> = (0..25).map(|_| rnd()).collect();
            let ql = from_node_values(Domain::unit_square(), 4, 4, Diagonal::Main, |x, y| {
                let i = ((x * 4.0).round() as usize).min(4);
                let j = ((y * 4.0).round() as usize).min(4);
                nodes[j * 5 + i]
            })
            .unwrap();
            let mut oracle = 0.0;
            for t in ql.triangles() {
                let lift = |p: (f64, f64)| (p.0, p.1, ql.value(p.0, p.1));
                oracle += tri_area_3d([lift(t.p1), lift(t.p2), lift(t.p3)]);
            }
            assert_abs_diff_eq!(ql.elementary_area(), oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn interpolation_ladder_below_area_integral() {
        // elementary areas of the interpolation ladder rise to the area
        // integral from below for the smooth catalog fields
        let cases = [
            ("paraboloid", 1.861564180753091),
            ("cylinder_sq", 1.4789428575445975),
        ];
        for (desc, oracle) in cases {
            let f = parse_descriptor(desc).unwrap();
            let mut prev = 0.0;
            for k in 2..=7u32 {
                let a = interpolate_quasilinear(&f, k).unwrap().elementary_area();
                assert!(a >= prev - 1e-12, "{desc} k={k}: {a} < {prev}");
                assert!(a <= oracle + 1e-9, "{desc} k={k}: {a} above {oracle}");
                prev = a;
            }
            assert!(oracle - prev < 1e-3, "{desc}: ladder tail {prev} vs {oracle}");
        }
    }

    #[test]
    fn elementary_area_never_below_domain_area() {
        for desc in ["const(5)", "plane(0.2,-0.4,1)", "paraboloid", "cantor(4)"] {
            let f = parse_descriptor(desc).unwrap();
            let ql = interpolate_quasilinear(&f, 4).unwrap();
            assert!(ql.elementary_area() >= f.domain().area() - 1e-12, "{desc}");
        }
    }
}
