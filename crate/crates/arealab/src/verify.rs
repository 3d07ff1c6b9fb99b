//! Named verification suites: each acceptance criterion is runnable on its
//! own (`verify --suite <name>`) and all of them together (`--suite all`).
//!
//! Every check pins its tolerance here; randomized suites draw from a
//! seeded generator so identical seeds give identical outcomes.

use crate::catalog::{cantor_exact, catalog_fields, parse_descriptor};
use crate::domain::{Domain, Subdivision};
use crate::error::{Error, Result};
use crate::field::{Regularity, ScalarField};
use crate::geocze::{geocze_area, geocze_sum, LadderParams};
use crate::grid::GridField;
use crate::lantern::{
    lantern_area, lantern_limit, lantern_vertex_oracle, LanternPath, LanternSpec, LimitClass,
    PathKind,
};
use crate::mollify::{default_window_panels, integral_mean, l1_norm, DEFAULT_WINDOW_ORDER};
use crate::quad::integrate_rect;
use crate::quasilinear::{from_node_values, interpolate_quasilinear, Diagonal};
use crate::steiner::{steiner_gap_quasilinear, steiner_gap_subdivision};
use crate::tonelli::{
    act_residual, default_fd_step, essential_derivative_gap, generalized_variation_1d,
    tonelli_lower_bound, tonelli_lower_bound_xy, v_t, DefectedFn1D, GapParams, VariationParams,
    SINGULAR_FD_STEP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

/// Reference value of `∬_Q √(1 + 4x² + 4y²)`; frozen after self-convergent
/// quadrature agreed to all printed digits from 32 to 128 panels, and
/// re-derived at run time by the smooth-area suite.
pub const PARABOLOID_AREA_ORACLE: f64 = 1.861564180753091;

/// `∫₀¹ √(1 + 4x²) dx = √5/2 + asinh(2)/4`.
pub fn cylinder_arc_oracle() -> f64 {
    5f64.sqrt() / 2.0 + 2f64.asinh() / 4.0
}

/// Result of one verification check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

pub const SUITE_NAMES: [&str; 15] = [
    "lantern-oracle",
    "lantern-diagonal",
    "lantern-parabolic",
    "lantern-divergence",
    "plane-exactness",
    "smooth-area",
    "cylinder-reduction",
    "refinement-monotonicity",
    "tonelli-inequality",
    "act-equality",
    "mollify-contraction",
    "mollify-area-monotonicity",
    "steiner",
    "generalized-variation",
    "decomposition-independence",
];

/// Run one named suite (or every suite for `"all"`).
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckOutcome>> {
    match name {
        "lantern-oracle" => Ok(lantern_oracle_suite()),
        "lantern-diagonal" => Ok(lantern_diagonal_suite()),
        "lantern-parabolic" => lantern_parabolic_suite(),
        "lantern-divergence" => lantern_divergence_suite(),
        "plane-exactness" => plane_exactness_suite(),
        "smooth-area" => smooth_area_suite(),
        "cylinder-reduction" => cylinder_reduction_suite(),
        "refinement-monotonicity" => monotonicity_suite(),
        "tonelli-inequality" => tonelli_inequality_suite(),
        "act-equality" => act_equality_suite(),
        "mollify-contraction" => mollify_contraction_suite(seed),
        "mollify-area-monotonicity" => mollify_monotonicity_suite(),
        "steiner" => steiner_suite(seed),
        "generalized-variation" => generalized_variation_suite(seed),
        "decomposition-independence" => decomposition_independence_suite(seed),
        "all" => {
            let mut out = Vec::new();
            for suite in SUITE_NAMES {
                out.extend(run_suite(suite, seed)?);
            }
            Ok(out)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown suite `{other}`; available: all, {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

fn lantern_oracle_suite() -> Vec<CheckOutcome> {
    let start = std::time::Instant::now();
    let mut worst = 0.0f64;
    let mut worst_at = (0u64, 0u64);
    for m in 1..=64u64 {
        for n in 3..=64u64 {
            let spec = LanternSpec::new(m, n).unwrap();
            let formula = lantern_area(&spec);
            let oracle = lantern_vertex_oracle(&spec).unwrap();
            let rel = (formula - oracle).abs() / oracle.abs();
            if rel > worst {
                worst = rel;
                worst_at = (m, n);
            }
        }
    }
    let elapsed = start.elapsed();
    vec![
        check(
            "lantern-oracle/agreement",
            worst <= 1e-12,
            format!(
                "max relative deviation {worst:.3e} at (m,n)=({},{}), bound 1e-12",
                worst_at.0, worst_at.1
            ),
        ),
        check(
            "lantern-oracle/runtime",
            elapsed.as_secs_f64() < 10.0,
            format!("{:.2}s for the 64×62 grid, bound 10s", elapsed.as_secs_f64()),
        ),
    ]
}

fn lantern_diagonal_suite() -> Vec<CheckOutcome> {
    let area = lantern_area(&LanternSpec::new(512, 512).unwrap());
    let err = (area - 2.0 * PI).abs();
    vec![check(
        "lantern-diagonal/limit",
        err <= 1e-3,
        format!("|area(512,512) − 2π| = {err:.3e}, bound 1e-3"),
    )]
}

fn lantern_parabolic_suite() -> Result<Vec<CheckOutcome>> {
    let report = lantern_limit(&LanternPath::new(PathKind::Parabolic(1.0), 8)?)?;
    let target = 2.0 * PI * 2f64.sqrt();
    let (m, n, area) = *report.points.last().unwrap();
    let err = (area - target).abs();
    Ok(vec![check(
        "lantern-parabolic/limit",
        err <= 1e-2 && matches!(report.class, LimitClass::Finite { .. }),
        format!("c=1 path reaches (m,n)=({m},{n}), |area − 2π√2| = {err:.3e}, bound 1e-2"),
    )])
}

fn lantern_divergence_suite() -> Result<Vec<CheckOutcome>> {
    let big = lantern_area(&LanternSpec::new(1_000_000, 8)?);
    let report = lantern_limit(&LanternPath::new(PathKind::MFirst, 3)?)?;
    Ok(vec![
        check(
            "lantern-divergence/magnitude",
            big > 1e3,
            format!("area(10^6, 8) = {big:.1}, must exceed 10^3"),
        ),
        check(
            "lantern-divergence/classifier",
            report.class == LimitClass::Divergent,
            format!("m-first path classified {:?}", report.class),
        ),
    ])
}

fn plane_exactness_suite() -> Result<Vec<CheckOutcome>> {
    let f = parse_descriptor("plane(1,2,0)")?;
    let expected = 6f64.sqrt();
    let mut worst_sum = 0.0f64;
    let mut worst_elem = 0.0f64;
    for level in 0..=8u32 {
        let d = Subdivision::dyadic(&f.domain(), level);
        let g = geocze_sum(&f, &d, 8, 6)?;
        worst_sum = worst_sum.max((g - expected).abs());
        let ql = interpolate_quasilinear(&f, level)?;
        worst_elem = worst_elem.max((ql.elementary_area() - expected).abs());
    }
    Ok(vec![
        check(
            "plane-exactness/geocze-sum",
            worst_sum <= 1e-12,
            format!("max |G − √6| over dyadic levels 0..8 = {worst_sum:.3e}, bound 1e-12"),
        ),
        check(
            "plane-exactness/elementary-area",
            worst_elem <= 1e-12,
            format!("max |a(Π) − √6| over levels 0..8 = {worst_elem:.3e}, bound 1e-12"),
        ),
    ])
}

fn smooth_area_suite() -> Result<Vec<CheckOutcome>> {
    let f = parse_descriptor("paraboloid")?;
    // independent quadrature route recomputed at run time
    let oracle = integrate_rect(
        |x, y| (1.0 + 4.0 * x * x + 4.0 * y * y).sqrt(),
        &f.domain().to_rect(),
        64,
        12,
    )?;
    let frozen_ok = (oracle - PARABOLOID_AREA_ORACLE).abs() <= 1e-9;
    let ladder = geocze_area(&f, &LadderParams::default().with_max_level(7))?;
    let elem = interpolate_quasilinear(&f, 7)?.elementary_area();
    let ladder_err = (ladder.estimate - oracle).abs();
    let elem_err = (elem - oracle).abs();
    let mutual = (ladder.estimate - elem).abs();
    Ok(vec![
        check(
            "smooth-area/oracle-stability",
            frozen_ok,
            format!(
                "quadrature oracle {oracle:.12} vs frozen {PARABOLOID_AREA_ORACLE:.12}, bound 1e-9"
            ),
        ),
        check(
            "smooth-area/geocze-ladder",
            ladder_err <= 1e-3,
            format!("|G(level 7) − oracle| = {ladder_err:.3e}, bound 1e-3"),
        ),
        check(
            "smooth-area/quasilinear",
            elem_err <= 1e-3,
            format!("|a(Π₇) − oracle| = {elem_err:.3e}, bound 1e-3"),
        ),
        check(
            "smooth-area/route-agreement",
            mutual <= 2e-3,
            format!("|G − a(Π₇)| = {mutual:.3e}, bound 2e-3"),
        ),
    ])
}

fn cylinder_reduction_suite() -> Result<Vec<CheckOutcome>> {
    let f = parse_descriptor("cylinder_sq")?;
    let ladder = geocze_area(&f, &LadderParams::default().with_max_level(8))?;
    let err = (ladder.estimate - cylinder_arc_oracle()).abs();
    Ok(vec![check(
        "cylinder-reduction/arc-length",
        err <= 1e-4 && ladder.converged,
        format!(
            "|estimate − (√5/2 + asinh(2)/4)| = {err:.3e}, bound 1e-4, converged = {}",
            ladder.converged
        ),
    )])
}

fn monotonicity_suite() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for f in catalog_fields() {
        let ladder = geocze_area(&f, &LadderParams::default().with_max_level(8))?;
        let mut worst = 0.0f64;
        for w in ladder.levels.windows(2) {
            worst = worst.max(w[0].sum - w[1].sum);
        }
        out.push(check(
            format!("refinement-monotonicity/{}", f.name()),
            worst <= 1e-9,
            format!("max level-to-level decrease {worst:.3e}, bound 1e-9"),
        ));
    }
    Ok(out)
}

fn tonelli_inequality_suite() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for f in catalog_fields() {
        let name = format!("tonelli-inequality/{}", f.name());
        let report = v_t(&f, &VariationParams::default())?;
        if report.divergent {
            out.push(check(
                name,
                true,
                "sectional variation divergent: no converged level exists, criterion vacuous",
            ));
            continue;
        }
        let ladder = geocze_area(&f, &LadderParams::default().with_max_level(8))?;
        // the depth-8 staircase concentrates |f_x| on 3^-8-wide intervals
        // with triadic endpoints; triadic panels keep the quadrature exact
        let lb = if f.name() == "cantor(8)" {
            tonelli_lower_bound_xy(&f, 6561, 4, 8, default_fd_step(&f))?
        } else {
            tonelli_lower_bound(&f, 16, 8, default_fd_step(&f))?
        };
        let margin = ladder.estimate - lb;
        out.push(check(
            name,
            margin >= -1e-3,
            format!(
                "estimate {est:.6} vs lower bound {lb:.6} (margin {margin:.3e}, bound −1e-3)",
                est = ladder.estimate
            ),
        ));
    }
    Ok(out)
}

fn act_equality_suite() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for desc in ["plane(1,2,0)", "paraboloid", "cylinder_sq"] {
        let f = parse_descriptor(desc)?;
        let report = act_residual(
            &f,
            &LadderParams::default().with_max_level(7),
            16,
            8,
            default_fd_step(&f),
        )?;
        out.push(check(
            format!("act-equality/{desc}"),
            report.residual.abs() <= 1e-3,
            format!("|residual| = {:.3e}, bound 1e-3", report.residual.abs()),
        ));
    }
    let f = parse_descriptor("steiner_f2")?;
    let report = act_residual(
        &f,
        &LadderParams::default().with_max_level(10),
        16,
        8,
        SINGULAR_FD_STEP,
    )?;
    let err = (report.residual - 2.0).abs();
    out.push(check(
        "act-equality/steiner_f2",
        err <= 0.1,
        format!(
            "residual {res:.4} (estimate {est:.4} − AC part {lb:.4}), target 2 ± 0.1",
            res = report.residual,
            est = report.ladder.estimate,
            lb = report.lower_bound
        ),
    ));
    Ok(out)
}

fn seeded_grid_field(rng: &mut ChaCha8Rng, nodes: usize) -> GridField {
    let values: Vec<f64> = (0..nodes * nodes)
        .map(|_| rng.gen_range(-2.0..2.0))
        .collect();
    GridField::new(Domain::unit_square(), nodes, nodes, values).unwrap()
}

fn mollify_contraction_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0usize;
    for _ in 0..50 {
        let f = seeded_grid_field(&mut rng, 9).to_field();
        let norm_f = l1_norm(&f, &f.domain().to_rect(), 16, 8)?;
        for h in [0.1, 0.05] {
            let m = integral_mean(&f, h, default_window_panels(&f), DEFAULT_WINDOW_ORDER)?;
            let mf = m.to_field();
            let norm_fh = l1_norm(&mf, &m.domain().to_rect(), 8, 8)?;
            let excess = norm_fh - norm_f;
            worst = worst.max(excess);
            if excess > 1e-6 {
                failures += 1;
            }
        }
    }
    Ok(vec![check(
        "mollify-contraction/l1",
        failures == 0,
        format!(
            "50 seeded grid fields × h ∈ {{0.1, 0.05}}: worst ‖f_h‖₁ − ‖f‖₁ = {worst:.3e}, bound 1e-6"
        ),
    )])
}

fn mollify_monotonicity_suite() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let h = 0.05;
    for f in catalog_fields() {
        let inner = f.domain().centered_subsquare();
        let m = integral_mean(&f, h, default_window_panels(&f), DEFAULT_WINDOW_ORDER)?;
        // precomputed-grid mode for ladder speed; recorded in the detail line
        let grid_level = if f.regularity() == Regularity::Integrable {
            7
        } else {
            8
        };
        let mollified = m.to_grid_field(grid_level)?.to_field().restrict(inner)?;
        let lhs = geocze_area(&mollified, &LadderParams::default().with_max_level(6))?;
        let rhs = geocze_area(&f, &LadderParams::default().with_max_level(8))?;
        let excess = lhs.estimate - rhs.estimate;
        out.push(check(
            format!("mollify-area-monotonicity/{}", f.name()),
            excess <= 1e-3,
            format!(
                "G(f_h on inner square) = {l:.6} [grid mode k={grid_level}] vs G(f) = {r:.6}, excess {excess:.3e}, bound 1e-3",
                l = lhs.estimate,
                r = rhs.estimate
            ),
        ));
    }
    Ok(out)
}

fn steiner_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    // per-triangle gaps on 100 seeded random pairs over a common 4×4 mesh
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA7);
    let dom = Domain::unit_square();
    let mut worst_ql = f64::INFINITY;
    for _ in 0..100 {
        let mut random_ql = || {
            let nodes: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.5..1.5)).collect();
            from_node_values(dom, 4, 4, Diagonal::Main, |x, y| {
                let i = ((x * 4.0).round() as usize).min(4);
                let j = ((y * 4.0).round() as usize).min(4);
                nodes[j * 5 + i]
            })
        };
        let p1 = random_ql()?;
        let p2 = random_ql()?;
        worst_ql = worst_ql.min(steiner_gap_quasilinear(&p1, &p2)?);
    }
    out.push(check(
        "steiner/quasilinear-gap",
        worst_ql >= -1e-12,
        format!("min gap over 100 seeded pairs = {worst_ql:.3e}, bound −1e-12"),
    ));

    // subdivision gaps for every same-domain catalog pair at dyadic levels 0..8
    let fields = catalog_fields();
    let mut worst_sub = f64::INFINITY;
    let mut worst_pair = String::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let (f1, f2) = (&fields[i], &fields[j]);
            if f1.domain() != f2.domain() {
                continue;
            }
            for level in 0..=8u32 {
                let d = Subdivision::dyadic(&f1.domain(), level);
                // every catalog trace difference is constant along its edge,
                // so a low-order rule is exact here
                let gap = steiner_gap_subdivision(f1, f2, &d, 4, 2)?;
                if gap < worst_sub {
                    worst_sub = gap;
                    worst_pair = format!("({}, {}) level {level}", f1.name(), f2.name());
                }
            }
        }
    }
    out.push(check(
        "steiner/subdivision-gap",
        worst_sub >= -1e-9,
        format!("min gap over catalog pairs × levels 0..8 = {worst_sub:.3e} at {worst_pair}, bound −1e-9"),
    ));

    // the singular equality pair: all three areas near 6 at ladder level 10
    let f1 = parse_descriptor("steiner_f1")?;
    let f2 = parse_descriptor("steiner_f2")?;
    let mid = ScalarField::midpoint(&f1, &f2)?;
    let params = LadderParams::default().with_max_level(10);
    let mut estimates = Vec::new();
    for (label, f) in [("f1", &f1), ("f2", &f2), ("midpoint", &mid)] {
        let ladder = geocze_area(f, &params)?;
        let err = (ladder.estimate - 6.0).abs();
        estimates.push(ladder.estimate);
        out.push(check(
            format!("steiner/equality-pair-{label}"),
            err <= 0.1,
            format!("estimate {:.4}, target 6 ± 0.1", ladder.estimate),
        ));
    }
    let spread = estimates.iter().cloned().fold(f64::MIN, f64::max)
        - estimates.iter().cloned().fold(f64::MAX, f64::min);
    out.push(check(
        "steiner/equality-pair-spread",
        spread <= 0.1,
        format!("spread of the three estimates {spread:.4}, bound 0.1"),
    ));
    Ok(out)
}

fn generalized_variation_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1);
    type Base = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
    let bases: Vec<(&str, Base)> = vec![
        ("linear", Arc::new(|x: f64| x)),
        ("parabola", Arc::new(|x: f64| x * (1.0 - x))),
        ("step", Arc::new(|x: f64| if x < 0.5 { 0.0 } else { 1.0 })),
        ("cantor", Arc::new(cantor_exact)),
    ];
    let mut out = Vec::new();
    for (name, base) in &bases {
        let defects: Vec<(f64, f64)> = (0..5)
            .map(|_| (rng.gen_range(0.001..0.999), rng.gen_range(-10.0..10.0)))
            .collect();
        let b = base.clone();
        let clean = DefectedFn1D::new(move |x| b(x), vec![])?;
        let b = base.clone();
        let defected = DefectedFn1D::new(move |x| b(x), defects)?;
        let v_clean = generalized_variation_1d(&clean, 14);
        let v_def = generalized_variation_1d(&defected, 14);
        out.push(check(
            format!("generalized-variation/invariance-{name}"),
            v_clean == v_def,
            format!(
                "variation {v_def} with 5 defects vs {v_clean} without (exact equality required)"
            ),
        ));
    }
    for (name, base, target, tol) in [
        ("linear", bases[0].1.clone(), 0.0, 1e-4),
        ("parabola", bases[1].1.clone(), 0.0, 1e-4),
        ("cantor", bases[3].1.clone(), 1.0, 0.05),
    ] {
        let f = DefectedFn1D::new(move |x| base(x), vec![])?;
        let r = essential_derivative_gap(&f, &GapParams::default())?;
        let err = (r.gap - target).abs();
        out.push(check(
            format!("generalized-variation/gap-{name}"),
            err <= tol,
            format!("gap {g:.6}, target {target} ± {tol}", g = r.gap),
        ));
    }
    Ok(out)
}

fn decomposition_independence_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xE2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        // separable node data u_i + v_j is affine on every grid cell, so
        // both diagonal splits decompose the same function
        let n = 1usize << rng.gen_range(2..=4u32);
        let u: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dom = Domain::unit_square();
        let node = |t: f64, k: usize| ((t * k as f64).round() as usize).min(k);
        let main = from_node_values(dom, n, n, Diagonal::Main, |x, y| {
            u[node(x, n)] + v[node(y, n)]
        })?;
        let anti = from_node_values(dom, n, n, Diagonal::Anti, |x, y| {
            u[node(x, n)] + v[node(y, n)]
        })?;
        worst = worst.max((main.elementary_area() - anti.elementary_area()).abs());
    }
    Ok(vec![check(
        "decomposition-independence/opposite-diagonals",
        worst <= 1e-10,
        format!("50 seeded separable instances: max |a_main − a_anti| = {worst:.3e}, bound 1e-10"),
    )])
}
