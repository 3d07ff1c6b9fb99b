//! Builtin field catalog and descriptor parsing.
//!
//! Descriptor grammar: `name(p1,p2,...)` with numeric parameters, plus the
//! keyword `exact` for `cantor(exact)`. Bare `name` is shorthand for `name()`.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::field::{Regularity, ScalarField};

/// A builtin parameter: a real number or a keyword token.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinParam {
    Number(f64),
    Keyword(String),
}

impl BuiltinParam {
    fn number(&self, name: &str) -> Result<f64> {
        match self {
            BuiltinParam::Number(v) => Ok(*v),
            BuiltinParam::Keyword(w) => Err(Error::InvalidParam(format!(
                "builtin `{name}` expects a number, got `{w}`"
            ))),
        }
    }
}

/// Exact Cantor function value via the base-3 digit expansion: emit binary
/// digits until a ternary digit 1 is seen or 64 digits are consumed. Ties at
/// endpoints of removed intervals resolve to the common value.
pub fn cantor_exact(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let mut value = 0.0;
    let mut scale = 0.5;
    let mut t = x;
    for _ in 0..64 {
        t *= 3.0;
        let mut d = t.floor();
        if d > 2.0 {
            d = 2.0;
        }
        t -= d;
        if d == 1.0 {
            value += scale;
            break;
        }
        if d == 2.0 {
            value += scale;
        }
        scale *= 0.5;
        if t == 0.0 {
            break;
        }
    }
    value
}

/// Depth-`k` staircase approximant of the Cantor function; converges
/// uniformly at rate 2^-k and is piecewise linear.
pub fn cantor_depth(x: f64, k: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let mut value = 0.0;
    let mut scale = 1.0;
    let mut t = x;
    for _ in 0..k {
        if t < 1.0 / 3.0 {
            t *= 3.0;
        } else if t <= 2.0 / 3.0 {
            return value + 0.5 * scale;
        } else {
            t = 3.0 * t - 2.0;
            value += 0.5 * scale;
        }
        scale *= 0.5;
    }
    value + scale * t
}

/// Construct a catalog field by name. See [`parse_descriptor`] for the
/// string form.
pub fn make_builtin(name: &str, params: &[BuiltinParam]) -> Result<ScalarField> {
    let arity = |expected: usize| -> Result<()> {
        if params.len() != expected {
            Err(Error::BadArity {
                name: name.into(),
                expected,
                got: params.len(),
            })
        } else {
            Ok(())
        }
    };
    let q = Domain::unit_square();
    match name {
        "const" => {
            arity(1)?;
            let c = params[0].number(name)?;
            Ok(
                ScalarField::new(format!("const({c})"), q, Regularity::C1, move |_, _| c)
                    .with_grad(|_, _| (0.0, 0.0)),
            )
        }
        "plane" => {
            arity(3)?;
            let alpha = params[0].number(name)?;
            let beta = params[1].number(name)?;
            let gamma = params[2].number(name)?;
            Ok(ScalarField::new(
                format!("plane({alpha},{beta},{gamma})"),
                q,
                Regularity::C1,
                move |x, y| alpha * x + beta * y + gamma,
            )
            .with_grad(move |_, _| (alpha, beta)))
        }
        "paraboloid" => {
            arity(0)?;
            Ok(
                ScalarField::new("paraboloid", q, Regularity::C1, |x, y| x * x + y * y)
                    .with_grad(|x, y| (2.0 * x, 2.0 * y)),
            )
        }
        "cylinder_sq" => {
            arity(0)?;
            Ok(
                ScalarField::new("cylinder_sq", q, Regularity::C1, |x, _| x * x)
                    .with_grad(|x, _| (2.0 * x, 0.0)),
            )
        }
        "step_x" => {
            arity(1)?;
            let s = params[0].number(name)?;
            if !(s > q.x_lo && s < q.x_hi) {
                return Err(Error::InvalidParam(format!(
                    "step location {s} must lie strictly inside ({}, {})",
                    q.x_lo, q.x_hi
                )));
            }
            // left limit value at the jump abscissa: f(s) = 0
            Ok(ScalarField::new(
                format!("step_x({s})"),
                q,
                Regularity::Integrable,
                move |x, _| if x <= s { 0.0 } else { 1.0 },
            ))
        }
        "cantor" => {
            arity(1)?;
            match &params[0] {
                BuiltinParam::Keyword(w) if w == "exact" => Ok(ScalarField::new(
                    "cantor(exact)",
                    q,
                    Regularity::Continuous,
                    |x, _| cantor_exact(x),
                )),
                BuiltinParam::Number(v) => {
                    if *v < 0.0 || v.fract() != 0.0 || *v > 60.0 {
                        return Err(Error::InvalidParam(format!(
                            "cantor depth must be an integer in 0..=60, got {v}"
                        )));
                    }
                    let k = *v as u32;
                    Ok(ScalarField::new(
                        format!("cantor({k})"),
                        q,
                        Regularity::Continuous,
                        move |x, _| cantor_depth(x, k),
                    ))
                }
                BuiltinParam::Keyword(w) => Err(Error::InvalidParam(format!(
                    "cantor expects a depth or `exact`, got `{w}`"
                ))),
            }
        }
        "cantor_sheet" => {
            arity(0)?;
            Ok(ScalarField::new(
                "cantor_sheet",
                q,
                Regularity::Continuous,
                |x, _| cantor_exact(x),
            ))
        }
        "steiner_f1" => {
            arity(0)?;
            let dom = Domain::new(0.0, 2.0, 0.0, 2.0)?;
            Ok(ScalarField::new(
                "steiner_f1",
                dom,
                Regularity::Continuous,
                |x, _| if x <= 1.0 { 0.0 } else { cantor_exact(x - 1.0) },
            ))
        }
        "steiner_f2" => {
            arity(0)?;
            let dom = Domain::new(0.0, 2.0, 0.0, 2.0)?;
            Ok(ScalarField::new(
                "steiner_f2",
                dom,
                Regularity::Continuous,
                |x, _| if x <= 1.0 { cantor_exact(x) } else { 1.0 },
            ))
        }
        "bvt_counterexample" => {
            arity(0)?;
            // sections x ↦ sin(1/x) have unbounded variation; f(0, y) = 0
            Ok(ScalarField::new(
                "bvt_counterexample",
                q,
                Regularity::Integrable,
                |x, _| if x > 0.0 { (1.0 / x).sin() } else { 0.0 },
            ))
        }
        _ => Err(Error::UnknownBuiltin(name.into())),
    }
}

/// Parse `name(p1,p2,...)` (or bare `name`) into a catalog field.
pub fn parse_descriptor(desc: &str) -> Result<ScalarField> {
    let desc = desc.trim();
    if desc.is_empty() {
        return Err(Error::BadDescriptor("<empty>".into()));
    }
    let (name, params) = match desc.find('(') {
        None => (desc, Vec::new()),
        Some(open) => {
            if !desc.ends_with(')') {
                return Err(Error::BadDescriptor(desc.into()));
            }
            let name = &desc[..open];
            let inner = &desc[open + 1..desc.len() - 1];
            let params = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|tok| {
                        let tok = tok.trim();
                        if let Ok(v) = tok.parse::<f64>() {
                            Ok(BuiltinParam::Number(v))
                        } else if !tok.is_empty()
                            && tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        {
                            Ok(BuiltinParam::Keyword(tok.to_string()))
                        } else {
                            Err(Error::BadDescriptor(tok.into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            (name, params)
        }
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::BadDescriptor(name.into()));
    }
    make_builtin(name, &params)
}

/// Every builtin exercised by the property and acceptance suites.
pub fn catalog_fields() -> Vec<ScalarField> {
    [
        "const(1)",
        "plane(1,2,0)",
        "paraboloid",
        "cylinder_sq",
        "step_x(0.5)",
        "cantor(exact)",
        "cantor(8)",
        "cantor_sheet",
        "steiner_f1",
        "steiner_f2",
        "bvt_counterexample",
    ]
    .iter()
    .map(|d| parse_descriptor(d).expect("catalog descriptor"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn const_and_plane_values() {
        let c = parse_descriptor("const(1)").unwrap();
        assert_eq!(c.value(0.3, 0.9), 1.0);
        let p = parse_descriptor("plane(1,2,0)").unwrap();
        // α·x + β·y + γ at (0.5, 0.5)
        assert_abs_diff_eq!(p.value(0.5, 0.5), 1.5, epsilon = 1e-15);
        assert_eq!(p.analytic_grad(0.1, 0.2), Some((1.0, 2.0)));
    }

    #[test]
    fn cantor_exact_reference_points() {
        assert_abs_diff_eq!(cantor_exact(1.0 / 3.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(cantor_exact(0.25), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cantor_exact(2.0 / 3.0), 0.5, epsilon = 1e-15);
        assert_eq!(cantor_exact(0.0), 0.0);
        assert_eq!(cantor_exact(1.0), 1.0);
        // constant on removed middle third
        assert_eq!(cantor_exact(0.4), 0.5);
        assert_eq!(cantor_exact(0.6), 0.5);
    }

    #[test]
    fn cantor_depth_converges_uniformly() {
        // ‖φ_k − φ‖∞ ≤ 2^-k, checked on a sample grid
        for k in [2u32, 4, 8] {
            let bound = 0.5f64.powi(k as i32);
            for i in 0..=1000 {
                let x = i as f64 / 1000.0;
                assert!(
                    (cantor_depth(x, k) - cantor_exact(x)).abs() <= bound + 1e-12,
                    "k={k} x={x}"
                );
            }
        }
    }

    #[test]
    fn cantor_symmetry() {
        // φ is Hölder with exponent log2/log3, so the half-ulp rounding of
        // 1 − x can move the value by ~2^-34; tolerance sized accordingly.
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert_abs_diff_eq!(
                cantor_exact(x) + cantor_exact(1.0 - x),
                1.0,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn step_takes_left_limit_at_jump() {
        let f = parse_descriptor("step_x(0.5)").unwrap();
        assert_eq!(f.value(0.5, 0.3), 0.0);
        assert_eq!(f.value(0.5 + 1e-12, 0.3), 1.0);
        assert_eq!(f.regularity(), Regularity::Integrable);
    }

    #[test]
    fn steiner_pair_continuous_on_seam() {
        let f1 = parse_descriptor("steiner_f1").unwrap();
        let f2 = parse_descriptor("steiner_f2").unwrap();
        assert_eq!(f1.value(1.0, 0.5), 0.0);
        // φ(ε) ~ ε^(log2/log3), so a 1e-12 step past the seam moves f1 by ~3e-8
        assert_abs_diff_eq!(f1.value(1.0 + 1e-12, 0.5), 0.0, epsilon = 1e-7);
        assert_eq!(f2.value(1.0, 0.5), 1.0);
        assert_eq!(f2.domain().x_hi, 2.0);
    }

    #[test]
    fn descriptor_errors() {
        assert!(matches!(
            parse_descriptor("nope(1)"),
            Err(Error::UnknownBuiltin(_))
        ));
        assert!(matches!(
            parse_descriptor("plane(1,2)"),
            Err(Error::BadArity { .. })
        ));
        assert!(matches!(
            parse_descriptor("step_x(1.5)"),
            Err(Error::InvalidParam(_))
        ));
        assert!(matches!(
            parse_descriptor("plane(1,2,0"),
            Err(Error::BadDescriptor(_))
        ));
        assert!(matches!(
            parse_descriptor("cantor(exact extra)"),
            Err(Error::BadDescriptor(_))
        ));
    }
}
