//! Property checks for the numerical invariants that hold on all inputs,
//! not just the catalog.

use arealab::catalog::cantor_exact;
use arealab::domain::{Domain, OrientedRect, Subdivision};
use arealab::geocze::{gamma, geocze_sum};
use arealab::quad::{integrate_abs_line, integrate_line};
use arealab::quasilinear::{
    from_node_values, lifted_tri_area, tri_area_2d, tri_area_3d, Diagonal, Triangle2D,
};
use arealab::steiner::{steiner_gap_quasilinear, vector_norm_superadditivity};
use arealab::tonelli::total_variation_1d;
use arealab::{Regularity, ScalarField};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    0.0..1.0f64
}

proptest! {
    #[test]
    fn lifted_area_equals_cross_product_route(
        (x1, y1, x2, y2, x3, y3) in (coord(), coord(), coord(), coord(), coord(), coord()),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        c in -1.0..1.0f64,
    ) {
        let t = Triangle2D::new((x1, y1), (x2, y2), (x3, y3));
        prop_assume!(tri_area_2d(&t) > 1e-6);
        let lift = |p: (f64, f64)| (p.0, p.1, a * p.0 + b * p.1 + c);
        let oracle = tri_area_3d([lift(t.p1), lift(t.p2), lift(t.p3)]);
        prop_assert!((lifted_tri_area(&t, a, b) - oracle).abs() <= 1e-12 * (1.0 + oracle));
    }

    #[test]
    fn norm_superadditivity_holds(vs in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64), 1..12)) {
        let (lhs, rhs, holds) = vector_norm_superadditivity(&vs);
        prop_assert!(holds, "lhs {lhs} < rhs {rhs}");
    }

    #[test]
    fn cantor_is_monotone_and_symmetric(x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(cantor_exact(lo) <= cantor_exact(hi));
        prop_assert!((cantor_exact(x) + cantor_exact(1.0 - x) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn quadrature_exact_on_cubics(c0 in -2.0..2.0f64, c1 in -2.0..2.0f64, c2 in -2.0..2.0f64, c3 in -2.0..2.0f64) {
        let g = |x: f64| c0 + x * (c1 + x * (c2 + x * c3));
        let exact = c0 + c1 / 2.0 + c2 / 3.0 + c3 / 4.0;
        let v = integrate_line(g, 0.0, 1.0, 2, 4).unwrap();
        prop_assert!((v - exact).abs() <= 1e-12);
    }

    #[test]
    fn abs_quadrature_dominates_plain(c0 in -1.0..1.0f64, freq in 1.0..8.0f64) {
        let g = move |x: f64| c0 + (freq * x).sin();
        let plain = integrate_line(g, 0.0, 1.0, 8, 8).unwrap();
        let absed = integrate_abs_line(g, 0.0, 1.0, 8, 8).unwrap();
        prop_assert!(absed >= plain.abs() - 1e-10);
        prop_assert!(absed >= 0.0);
    }

    #[test]
    fn variation_monotone_in_levels(a in -2.0..2.0f64, b in -2.0..2.0f64, freq in 0.5..20.0f64) {
        let g = move |x: f64| a * x + b * (freq * x).sin();
        let mut prev = 0.0;
        for levels in 0..10 {
            let v = total_variation_1d(g, 0.0, 1.0, levels);
            prop_assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn gamma_dominates_rect_area(a in 0.0..0.8f64, c in 0.0..0.8f64, alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let f = ScalarField::new("plane", Domain::unit_square(), Regularity::C1,
            move |x, y| alpha * x + beta * y);
        let r = OrientedRect::new(a, a + 0.2, c, c + 0.2).unwrap();
        let g = gamma(&f, &r, 4, 4).unwrap();
        prop_assert!(g >= r.area() - 1e-14);
    }

    #[test]
    fn geocze_sum_at_least_domain_area(cuts_x in prop::collection::vec(0.05..0.95f64, 0..4),
                                       cuts_y in prop::collection::vec(0.05..0.95f64, 0..4),
                                       freq in 0.5..6.0f64) {
        let f = ScalarField::new("wavy", Domain::unit_square(), Regularity::C1,
            move |x, y| (freq * x).sin() * (freq * y).cos());
        let mut xs = cuts_x;
        xs.extend([0.0, 1.0]);
        xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        xs.dedup_by(|p, q| (*p - *q).abs() < 1e-6);
        let mut ys = cuts_y;
        ys.extend([0.0, 1.0]);
        ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
        ys.dedup_by(|p, q| (*p - *q).abs() < 1e-6);
        let d = Subdivision::new(xs, ys).unwrap();
        let g = geocze_sum(&f, &d, 8, 6).unwrap();
        prop_assert!(g >= 1.0 - 1e-10);
    }

    #[test]
    fn refinement_preserves_quasilinear_area(values in prop::collection::vec(-1.0..1.0f64, 25)) {
        // a finer grid is another decomposition of linearity for the same
        // function, so the elementary area must not change
        let dom = Domain::unit_square();
        let vals = values.clone();
        let ql = from_node_values(dom, 4, 4, Diagonal::Main, move |x, y| {
            let i = ((x * 4.0).round() as usize).min(4);
            let j = ((y * 4.0).round() as usize).min(4);
            vals[j * 5 + i]
        }).unwrap();
        let fine = ql.refine_to(8).unwrap();
        prop_assert!((ql.elementary_area() - fine.elementary_area()).abs() <= 1e-12);
    }

    #[test]
    fn quasilinear_midpoint_gap_nonnegative(v1 in prop::collection::vec(-1.5..1.5f64, 25),
                                            v2 in prop::collection::vec(-1.5..1.5f64, 25)) {
        let dom = Domain::unit_square();
        let mk = |vals: Vec<f64>| {
            from_node_values(dom, 4, 4, Diagonal::Main, move |x, y| {
                let i = ((x * 4.0).round() as usize).min(4);
                let j = ((y * 4.0).round() as usize).min(4);
                vals[j * 5 + i]
            }).unwrap()
        };
        let gap = steiner_gap_quasilinear(&mk(v1), &mk(v2)).unwrap();
        prop_assert!(gap >= -1e-12);
    }
}
