//! Inscribed-cylinder polyhedra and their refinement-path limits.
//!
//! The unit cylinder (radius 1, height 1) is sliced into `m` bands and `n`
//! sectors; the inscribed polyhedron has `2mn` congruent triangles of area
//! `sin(π/n)·√((1 − cos(π/n))² + 1/m²)`. The total area converges to a
//! different value depending on how `(m, n) → ∞`: it can attain any value
//! in `[2π, +∞]`, which is exactly why "limit of inscribed polyhedral
//! areas" fails as a definition of surface area.

use crate::error::{Error, Result};
use crate::quad::KahanSum;
use std::f64::consts::PI;

/// Slice/sector counts of an inscribed polyhedron.
///
/// `m ≥ 1` bands and `n ≥ 2` sectors (`n = 2` degenerates to flat rhombi
/// but every formula below remains valid).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LanternSpec {
    m: u64,
    n: u64,
}

impl LanternSpec {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParam("slice count m must be >= 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParam("sector count n must be >= 2".into()));
        }
        Ok(LanternSpec { m, n })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn triangle_count(&self) -> u64 {
        2 * self.m * self.n
    }
}

/// Exact closed-form area of one inscribed triangle (no small-angle
/// approximation): `sin(π/n)·√((1 − cos(π/n))² + 1/m²)`.
pub fn lantern_triangle_area(spec: &LanternSpec) -> f64 {
    let n = spec.n as f64;
    let m = spec.m as f64;
    let theta = PI / n;
    theta.sin() * ((1.0 - theta.cos()).powi(2) + 1.0 / (m * m)).sqrt()
}

/// Total inscribed-polyhedron area `2mn · area(T(m,n))`.
pub fn lantern_area(spec: &LanternSpec) -> f64 {
    2.0 * spec.m as f64 * spec.n as f64 * lantern_triangle_area(spec)
}

/// Brute-force area: build all `2mn` triangles from explicit cylinder
/// vertices (adjacent rings offset by half a sector) and sum their 3D
/// cross-product areas. Independent of the closed formula.
pub fn lantern_vertex_oracle(spec: &LanternSpec) -> Result<f64> {
    if spec.m.saturating_mul(spec.n) > 1_000_000 {
        return Err(Error::SizeGuard(format!(
            "vertex oracle limited to m·n <= 10^6, got {}·{}",
            spec.m, spec.n
        )));
    }
    let (m, n) = (spec.m as usize, spec.n as usize);
    let vertex = |ring: usize, k: usize| -> (f64, f64, f64) {
        let offset = if ring % 2 == 1 { 0.5 } else { 0.0 };
        let angle = 2.0 * PI * (k as f64 + offset) / n as f64;
        (angle.cos(), angle.sin(), ring as f64 / m as f64)
    };
    let mut acc = KahanSum::new();
    for ring in 0..m {
        for k in 0..n {
            // upward triangle: two ring vertices and the offset vertex above
            let a = vertex(ring, k);
            let b = vertex(ring, k + 1);
            let e = vertex(ring + 1, if ring % 2 == 1 { k + 1 } else { k });
            acc.add(cross_area(a, b, e));
            // downward triangle: two upper vertices and the offset vertex below
            let c = vertex(ring + 1, k);
            let d = vertex(ring + 1, k + 1);
            let e = vertex(ring, if ring % 2 == 1 { k } else { k + 1 });
            acc.add(cross_area(c, d, e));
        }
    }
    Ok(acc.value())
}

fn cross_area(a: (f64, f64, f64), b: (f64, f64, f64), c: (f64, f64, f64)) -> f64 {
    let u = (b.0 - a.0, b.1 - a.1, b.2 - a.2);
    let v = (c.0 - a.0, c.1 - a.1, c.2 - a.2);
    let x = u.1 * v.2 - u.2 * v.1;
    let y = u.2 * v.0 - u.0 * v.2;
    let z = u.0 * v.1 - u.1 * v.0;
    0.5 * (x * x + y * y + z * z).sqrt()
}

/// Joint refinement paths for `(m, n) → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathKind {
    /// `n` doubles with `m = 1`; converges to `2π`.
    NFirst,
    /// `m = 100^t` with `n = 8` fixed; diverges.
    MFirst,
    /// `m = n = 2^t`; converges to `2π`.
    Diagonal,
    /// `n = 2^t`, `m = round(2c/π² · n²)`; converges to `2π·√(c² + 1)`.
    Parabolic(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct LanternPath {
    pub kind: PathKind,
    pub steps: u32,
}

impl LanternPath {
    pub fn new(kind: PathKind, steps: u32) -> Result<Self> {
        if steps == 0 || steps > 40 {
            return Err(Error::InvalidParam(format!(
                "path steps must be in 1..=40, got {steps}"
            )));
        }
        if let PathKind::Parabolic(c) = kind {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "parabolic coefficient must be a finite c >= 0, got {c}"
                )));
            }
        }
        Ok(LanternPath { kind, steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitClass {
    /// Tail stabilized; `limit` is the last value, `spread` the range of
    /// the last three values (an empirical error bar).
    Finite { limit: f64, spread: f64 },
    Divergent,
}

#[derive(Debug, Clone)]
pub struct LimitReport {
    pub points: Vec<(u64, u64, f64)>,
    pub class: LimitClass,
}

impl LimitReport {
    /// CSV rows `m,n,area` plus the trailing classification line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,area\n");
        for &(m, n, area) in &self.points {
            out.push_str(&format!("{m},{n},{area}\n"));
        }
        match self.class {
            LimitClass::Finite { limit, .. } => out.push_str(&format!("# limit={limit:.4}\n")),
            LimitClass::Divergent => out.push_str("# limit=divergent\n"),
        }
        out
    }
}

/// Evaluate the polyhedron area along a refinement path and classify the
/// tail: divergent when the last three values each exceed twice their
/// predecessor, finite with the last value as the limit otherwise.
pub fn lantern_limit(path: &LanternPath) -> Result<LimitReport> {
    let mut points = Vec::with_capacity(path.steps as usize);
    for t in 1..=path.steps {
        let (m, n) = match path.kind {
            PathKind::NFirst => (1u64, 1u64 << t.min(62)),
            PathKind::MFirst => (100u64.saturating_pow(t), 8u64),
            PathKind::Diagonal => (1u64 << t.min(62), 1u64 << t.min(62)),
            PathKind::Parabolic(c) => {
                let n = 1u64 << t.min(62);
                // rounding perturbs m by at most 1/2; the perturbation
                // vanishes in the limit and shows up in the emitted points
                let m = ((2.0 * c / (PI * PI)) * (n as f64) * (n as f64)).round();
                (if m < 1.0 { 1 } else { m as u64 }, n)
            }
        };
        let spec = LanternSpec::new(m, n)?;
        points.push((m, n, lantern_area(&spec)));
    }
    let class = classify(&points);
    Ok(LimitReport { points, class })
}

fn classify(points: &[(u64, u64, f64)]) -> LimitClass {
    let vals: Vec<f64> = points.iter().map(|p| p.2).collect();
    let window = vals.len().min(4);
    if window >= 2 {
        let tail = &vals[vals.len() - window..];
        let all_doubling = tail.windows(2).all(|w| w[1] > 2.0 * w[0]);
        if all_doubling {
            return LimitClass::Divergent;
        }
    }
    let last3 = &vals[vals.len().saturating_sub(3)..];
    let spread = last3.iter().cloned().fold(f64::MIN, f64::max)
        - last3.iter().cloned().fold(f64::MAX, f64::min);
    LimitClass::Finite {
        limit: *vals.last().unwrap(),
        spread,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn triangle_area_reference_value() {
        // frozen after confirmation against the vertex oracle
        let spec = LanternSpec::new(1, 4).unwrap();
        assert_abs_diff_eq!(
            lantern_triangle_area(&spec),
            0.7368128791039501,
            epsilon = 1e-15
        );
        assert_eq!(spec.triangle_count(), 8);
    }

    #[test]
    fn total_area_reference_value() {
        let spec = LanternSpec::new(4, 4).unwrap();
        assert_abs_diff_eq!(lantern_area(&spec), 8.713360778997695, epsilon = 1e-12);
    }

    #[test]
    fn oracle_agrees_with_formula() {
        for (m, n) in [(1, 3), (1, 4), (2, 5), (7, 12), (33, 9), (64, 64)] {
            let spec = LanternSpec::new(m, n).unwrap();
            let oracle = lantern_vertex_oracle(&spec).unwrap();
            assert_relative_eq!(lantern_area(&spec), oracle, max_relative = 1e-12);
        }
    }

    #[test]
    fn oracle_congruence_at_minimum() {
        // m=1, n=3: six congruent triangles with base 2·sin(π/3)
        let spec = LanternSpec::new(1, 3).unwrap();
        let oracle = lantern_vertex_oracle(&spec).unwrap();
        assert_relative_eq!(
            oracle,
            6.0 * lantern_triangle_area(&spec),
            max_relative = 1e-12
        );
    }

    #[test]
    fn per_triangle_area_decreases_in_n() {
        for m in [1u64, 5, 50] {
            let mut prev = f64::INFINITY;
            for n in [3u64, 4, 8, 16, 64, 256] {
                let a = lantern_triangle_area(&LanternSpec::new(m, n).unwrap());
                assert!(a < prev, "m={m} n={n}");
                prev = a;
            }
        }
    }

    #[test]
    fn asymptotic_triangle_area_at_fixed_m() {
        // area → (π/n)·(1/m) as n grows
        let spec = LanternSpec::new(1, 512).unwrap();
        let ratio = lantern_triangle_area(&spec) / (PI / 512.0);
        assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn area_increasing_in_m_past_threshold() {
        for n in [8u64, 32] {
            let threshold = ((n * n) as f64 / (PI * PI)).ceil() as u64;
            let mut prev = 0.0;
            for k in 0..6 {
                let m = threshold + k * threshold.max(1);
                let a = lantern_area(&LanternSpec::new(m, n).unwrap());
                assert!(a > prev, "n={n} m={m}");
                prev = a;
            }
        }
    }

    #[test]
    fn prism_lower_bound() {
        // inscribed prism lateral area 2n·sin(π/n) bounds every lantern
        for (m, n) in [(1u64, 3u64), (10, 16), (1000, 8), (512, 512)] {
            let spec = LanternSpec::new(m, n).unwrap();
            let prism = 2.0 * n as f64 * (PI / n as f64).sin();
            assert!(lantern_area(&spec) >= prism - 1e-12);
        }
    }

    #[test]
    fn diagonal_path_limit() {
        let report = lantern_limit(&LanternPath::new(PathKind::Diagonal, 9).unwrap()).unwrap();
        assert_eq!(report.points.len(), 9);
        assert_eq!(report.points.last().unwrap().1, 512);
        match report.class {
            LimitClass::Finite { limit, .. } => {
                assert_abs_diff_eq!(limit, 2.0 * PI, epsilon = 1e-3)
            }
            LimitClass::Divergent => panic!("diagonal path must converge"),
        }
    }

    #[test]
    fn n_first_path_limit() {
        let report = lantern_limit(&LanternPath::new(PathKind::NFirst, 10).unwrap()).unwrap();
        match report.class {
            LimitClass::Finite { limit, .. } => {
                assert_abs_diff_eq!(limit, 2.0 * PI, epsilon = 1e-3)
            }
            LimitClass::Divergent => panic!("n-first path must converge"),
        }
    }

    #[test]
    fn parabolic_path_limit() {
        let report =
            lantern_limit(&LanternPath::new(PathKind::Parabolic(1.0), 8).unwrap()).unwrap();
        let target = 2.0 * PI * 2.0f64.sqrt();
        match report.class {
            LimitClass::Finite { limit, .. } => assert_abs_diff_eq!(limit, target, epsilon = 1e-2),
            LimitClass::Divergent => panic!("parabolic path must converge"),
        }
    }

    #[test]
    fn m_first_path_diverges() {
        let report = lantern_limit(&LanternPath::new(PathKind::MFirst, 3).unwrap()).unwrap();
        assert_eq!(report.class, LimitClass::Divergent);
        let spec = LanternSpec::new(1_000_000, 8).unwrap();
        assert!(lantern_area(&spec) > 1e3);
    }

    #[test]
    fn csv_trailer() {
        let report = lantern_limit(&LanternPath::new(PathKind::Diagonal, 9).unwrap()).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("m,n,area\n2,2,"));
        assert!(csv.trim_end().ends_with("# limit=6.2834"));
    }

    #[test]
    fn guards() {
        assert!(LanternSpec::new(0, 4).is_err());
        assert!(LanternSpec::new(1, 1).is_err());
        assert!(lantern_vertex_oracle(&LanternSpec::new(2000, 2000).unwrap()).is_err());
        assert!(LanternPath::new(PathKind::Parabolic(-1.0), 4).is_err());
    }
}
