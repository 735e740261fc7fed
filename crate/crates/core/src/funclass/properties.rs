//! Scalar properties: finite-difference complete-monotonicity checks,
//! sub/superadditivity, geometric concavity of `1 - e^{-x}`, and the
//! additive-vs-geometric gap comparison for each class.

use serde::Serialize;

use super::{ClassTag, ScalarFunctionSpec};
use crate::error::{Error, Result};
use crate::ineq::Direction;

pub const MAX_DIFFERENCE_ORDER: usize = 5;

/// Relative finite-difference step, `h = x · STEP_REL`.
const STEP_REL: f64 = 1e-2;

/// Worst deviation from `(-1)^n f^{(n)}(x) ≥ 0` over a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CmReport {
    /// Minimum over grid points and orders of `(-1)^n f^{(n)}(x)` divided by
    /// `max(|f^{(n)}(x)|, |f(x)|)`; negative values are violations.
    pub worst_normalized: f64,
    /// The unnormalized signed value at the worst point.
    pub worst_signed: f64,
    pub at_x: f64,
    pub order: usize,
    pub checked: usize,
}

impl CmReport {
    pub fn violates(&self, rel_tol: f64) -> bool {
        self.worst_normalized < -rel_tol
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn central_difference(f: &dyn Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
    let half = n as f64 / 2.0;
    let sum: f64 = (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, i) * f(x + (half - i as f64) * h)
        })
        .sum();
    sum / h.powi(n as i32)
}

/// `n`-th derivative estimate by a central difference with step `h`,
/// refined once by Richardson extrapolation (error `O(h^4)`).
pub fn derivative_estimate(f: &dyn Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
    let coarse = central_difference(f, x, n, h);
    let fine = central_difference(f, x, n, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

pub fn check_cm_by_differences(
    f: &ScalarFunctionSpec,
    grid: &[f64],
    order_max: usize,
) -> Result<CmReport> {
    if order_max == 0 || order_max > MAX_DIFFERENCE_ORDER {
        return Err(Error::invalid(format!(
            "difference order must be in 1..={MAX_DIFFERENCE_ORDER}, got {order_max}"
        )));
    }
    if grid.is_empty() || grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::invalid("CM check needs a non-empty positive grid"));
    }
    let eval = |x: f64| f.eval(x).unwrap_or(f64::NAN);
    let mut report = CmReport {
        worst_normalized: f64::INFINITY,
        worst_signed: f64::INFINITY,
        at_x: grid[0],
        order: 1,
        checked: 0,
    };
    for &x in grid {
        let fx = f.eval(x)?;
        for n in 1..=order_max {
            let d = derivative_estimate(&eval, x, n, x * STEP_REL);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let signed = sign * d;
            let scale = d.abs().max(fx.abs()).max(f64::MIN_POSITIVE);
            let normalized = signed / scale;
            report.checked += 1;
            if normalized < report.worst_normalized {
                report.worst_normalized = normalized;
                report.worst_signed = signed;
                report.at_x = x;
                report.order = n;
            }
        }
    }
    Ok(report)
}

/// `g(a+b) - g(a) - g(b)` and `g(2√(ab)) - 2 g(√(ab))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapPair {
    pub gap_add: f64,
    pub gap_geo: f64,
    /// Largest magnitude among the function values involved (at least 1).
    pub scale: f64,
}

pub fn scalar_gap_pair(g: &ScalarFunctionSpec, a: f64, b: f64) -> Result<GapPair> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::invalid(format!("gap pair needs a, b >= 0, got {a}, {b}")));
    }
    let gm = (a * b).sqrt();
    let vals = [
        g.eval(a + b)?,
        g.eval(a)?,
        g.eval(b)?,
        g.eval(2.0 * gm)?,
        g.eval(gm)?,
    ];
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok(GapPair {
        gap_add: vals[0] - vals[1] - vals[2],
        gap_geo: vals[3] - 2.0 * vals[4],
        scale,
    })
}

/// `f(√(xy)) - √(f(x) f(y))` for `f(x) = 1 - e^{-x}`; non-negative.
pub fn check_geometric_concavity(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::invalid(format!(
            "geometric concavity check needs x, y > 0, got {x}, {y}"
        )));
    }
    let f = |v: f64| -(-v).exp_m1();
    Ok(f((x * y).sqrt()) - (f(x) * f(y)).sqrt())
}

/// How `gap_add` compares with `gap_geo`: `Le` for CM0 and BF1, `Ge` for
/// BF0 and BF2, `Eq` for quadratics. Other classes carry no statement.
pub fn cmf1_direction(class: ClassTag) -> Option<Direction> {
    match class {
        ClassTag::Cm0 | ClassTag::Bf(1) => Some(Direction::Le),
        ClassTag::Bf(0) | ClassTag::Bf(2) => Some(Direction::Ge),
        ClassTag::Quadratic => Some(Direction::Eq),
        _ => None,
    }
}

/// The direction the alternating kernel sign `(-1)^{k+1}` in front of
/// `e^{-xt}` would give for BFk if the degree-`k` polynomial part were
/// harmless: `Le` for odd `k`, `Ge` for even `k`.
pub fn extrapolated_cmf1_direction(k: u32) -> Direction {
    if k % 2 == 1 {
        Direction::Le
    } else {
        Direction::Ge
    }
}

/// `Le` (subadditive) for CM0 and BF0, `Ge` (superadditive) for BFk, k ≥ 1.
pub fn subadditivity_direction(class: ClassTag) -> Option<Direction> {
    match class {
        ClassTag::Cm0 | ClassTag::Bf(0) => Some(Direction::Le),
        ClassTag::Bf(_) => Some(Direction::Ge),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainCheck {
    pub gaps: GapPair,
    /// `gap_add` vs `gap_geo` per [`cmf1_direction`].
    pub comparison_holds: bool,
    /// Sign of `gap_add` per [`subadditivity_direction`] (sub- or
    /// superadditivity).
    pub additivity_holds: bool,
    /// Sign of `gap_geo` where the chain bounds it by zero (CM0: ≤ 0,
    /// BF2: ≥ 0); true for the other classes.
    pub geometric_sign_holds: bool,
}

impl ChainCheck {
    pub fn holds(&self) -> bool {
        self.comparison_holds && self.additivity_holds && self.geometric_sign_holds
    }
}

/// Checks the two-sided chain for one `(a, b)` pair:
///
/// ```text
/// CM0:      gap_add ≤ gap_geo ≤ 0
/// BF0:  0 ≥ gap_add ≥ gap_geo
/// BF1:  0 ≤ gap_add ≤ gap_geo
/// BF2:      gap_add ≥ gap_geo ≥ 0
/// ```
///
/// Quadratics must give `gap_add = gap_geo`. Every comparison allows
/// `rel_tol * scale`.
pub fn check_scalar_chain(
    g: &ScalarFunctionSpec,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<ChainCheck> {
    let class = g.class_tag();
    let direction = cmf1_direction(class).ok_or_else(|| Error::UnsupportedClass {
        class: class.to_string(),
        case: "scalar chain".into(),
    })?;
    let gaps = scalar_gap_pair(g, a, b)?;
    let tol = rel_tol * gaps.scale;
    let comparison_holds = direction.holds(gaps.gap_add, gaps.gap_geo, tol);
    let additivity_holds = match subadditivity_direction(class) {
        Some(Direction::Le) => gaps.gap_add <= tol,
        Some(Direction::Ge) => gaps.gap_add >= -tol,
        _ => true,
    };
    let geometric_sign_holds = match class {
        ClassTag::Cm0 => gaps.gap_geo <= tol,
        ClassTag::Bf(2) => gaps.gap_geo >= -tol,
        _ => true,
    };
    Ok(ChainCheck {
        gaps,
        comparison_holds,
        additivity_holds,
        geometric_sign_holds,
    })
}
