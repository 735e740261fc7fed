//! Scalar function classes: bare completely monotone functions (CM0), bare
//! Bernstein functions (BF0) and their k-fold primitives (BFk), with
//! pointwise evaluation from finite discrete measures, quadrature of the
//! power-function integral representations, and the scalar inequalities
//! that the matrix results lift.

pub mod properties;
pub mod quadrature;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::Domain;

pub use properties::{
    check_cm_by_differences, check_geometric_concavity, check_scalar_chain, cmf1_direction,
    extrapolated_cmf1_direction, scalar_gap_pair, subadditivity_direction, ChainCheck, CmReport,
    GapPair,
};
pub use quadrature::{gamma_fn, integrate, integrate_half_line, power_via_quadrature, QuadResult};

/// Class membership of a scalar function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Cm0,
    /// `Bf(0)` is BF0; `Bf(k)` are k-fold primitives of BF0 members.
    Bf(u32),
    /// Polynomials of degree ≤ 2: the equality cases.
    Quadratic,
    None,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Cm0 => write!(f, "CM0"),
            ClassTag::Bf(k) => write!(f, "BF{k}"),
            ClassTag::Quadratic => write!(f, "QUADRATIC"),
            ClassTag::None => write!(f, "NONE"),
        }
    }
}

impl Serialize for ClassTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Class of `x ↦ x^q`: CM0 for `q < 0`, BF0 on `(0, 1)`, BFk on `(k, k+1)`,
/// Quadratic at `q ∈ {0, 1, 2}` and None at the integers `q ≥ 3`.
pub fn classify_power(q: f64) -> ClassTag {
    if !q.is_finite() {
        ClassTag::None
    } else if q < 0.0 {
        ClassTag::Cm0
    } else if q == 0.0 || q == 1.0 || q == 2.0 {
        ClassTag::Quadratic
    } else if q.fract() == 0.0 {
        ClassTag::None
    } else {
        ClassTag::Bf(q.floor() as u32)
    }
}

/// `Some(q)` when `q` is an integer `≥ 3`: a class boundary that the
/// classifier leaves unclassified.
pub fn power_boundary(q: f64) -> Option<u32> {
    (q.is_finite() && q >= 3.0 && q.fract() == 0.0).then_some(q as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Variant {
    PowerFunction { q: f64 },
    /// `sign = 1` gives `e^{-xt}`, `sign = -1` gives `1 - e^{-xt}`.
    ExpKernel { t: f64, sign: i8 },
    Quadratic { c0: f64, c1: f64, c2: f64 },
    /// `Σ w_i e^{-x t_i}`.
    DiscreteMeasureCm0 { nodes: Vec<f64>, weights: Vec<f64> },
    /// `Σ w_i K_k(x t_i) / t_i^k` with the alternating BFk kernel.
    DiscreteMeasureBfk {
        k: u32,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
}

/// A scalar function `g` together with its class. Immutable after
/// construction; all constructors validate their parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct ScalarFunctionSpec {
    variant: Variant,
}

impl ScalarFunctionSpec {
    pub fn power(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::invalid(format!("power exponent {q}")));
        }
        Ok(Self::from_variant(Variant::PowerFunction { q }))
    }

    pub fn exp_kernel(t: f64, sign: i8) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("kernel rate must be >= 0, got {t}")));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::invalid(format!("kernel sign must be ±1, got {sign}")));
        }
        Ok(Self::from_variant(Variant::ExpKernel { t, sign }))
    }

    pub fn quadratic(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        if ![c0, c1, c2].iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("non-finite quadratic coefficient"));
        }
        Ok(Self::from_variant(Variant::Quadratic { c0, c1, c2 }))
    }

    pub fn cm0_discrete(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        check_measure(&nodes, &weights)?;
        Ok(Self::from_variant(Variant::DiscreteMeasureCm0 { nodes, weights }))
    }

    pub fn bfk_discrete(k: u32, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        check_measure(&nodes, &weights)?;
        if k > 20 {
            return Err(Error::invalid(format!("BFk order {k} is out of range")));
        }
        Ok(Self::from_variant(Variant::DiscreteMeasureBfk { k, nodes, weights }))
    }

    fn from_variant(variant: Variant) -> Self {
        ScalarFunctionSpec { variant }
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn class_tag(&self) -> ClassTag {
        match &self.variant {
            Variant::PowerFunction { q } => classify_power(*q),
            Variant::ExpKernel { t, .. } if *t == 0.0 => ClassTag::Quadratic,
            Variant::ExpKernel { sign: 1, .. } => ClassTag::Cm0,
            Variant::ExpKernel { .. } => ClassTag::Bf(0),
            Variant::Quadratic { .. } => ClassTag::Quadratic,
            Variant::DiscreteMeasureCm0 { .. } => ClassTag::Cm0,
            Variant::DiscreteMeasureBfk { k, .. } => ClassTag::Bf(*k),
        }
    }

    /// The power `q` for power functions.
    pub fn exponent(&self) -> Option<f64> {
        match self.variant {
            Variant::PowerFunction { q } => Some(q),
            _ => None,
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.variant {
            Variant::PowerFunction { q } if *q < 0.0 => Domain::Positive,
            Variant::PowerFunction { q } if q.fract() != 0.0 => Domain::NonNegative,
            Variant::DiscreteMeasureBfk { .. } => Domain::NonNegative,
            _ => Domain::Real,
        }
    }

    pub fn label(&self) -> String {
        match &self.variant {
            Variant::PowerFunction { q } => format!("x^{q}"),
            Variant::ExpKernel { t, sign: 1 } => format!("exp(-{t}x)"),
            Variant::ExpKernel { t, .. } => format!("1-exp(-{t}x)"),
            Variant::Quadratic { c0, c1, c2 } => format!("{c0}+{c1}x+{c2}x^2"),
            Variant::DiscreteMeasureCm0 { nodes, .. } => format!("cm0_discrete[{}]", nodes.len()),
            Variant::DiscreteMeasureBfk { k, nodes, .. } => {
                format!("bf{k}_discrete[{}]", nodes.len())
            }
        }
    }

    /// Pointwise value `g(x)`; errors outside the function's domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let ok = match self.domain() {
            Domain::Real => x.is_finite(),
            Domain::NonNegative => x >= 0.0,
            Domain::Positive => x > 0.0,
        };
        if !ok {
            return Err(Error::DomainViolation {
                function: self.label(),
                value: x,
                floor: 0.0,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        match &self.variant {
            Variant::PowerFunction { q } => {
                if q.fract() == 0.0 && q.abs() <= 64.0 {
                    x.powi(*q as i32)
                } else {
                    x.powf(*q)
                }
            }
            Variant::ExpKernel { t, sign: 1 } => (-x * t).exp(),
            Variant::ExpKernel { t, .. } => -(-x * t).exp_m1(),
            Variant::Quadratic { c0, c1, c2 } => c0 + x * (c1 + x * c2),
            Variant::DiscreteMeasureCm0 { nodes, weights } => nodes
                .iter()
                .zip(weights)
                .map(|(t, w)| w * (-x * t).exp())
                .sum(),
            Variant::DiscreteMeasureBfk { k, nodes, weights } => nodes
                .iter()
                .zip(weights)
                .map(|(t, w)| w * bfk_kernel(*k, x * t) / t.powi(*k as i32))
                .sum(),
        }
    }
}

/// `eval_scalar(f, x)`, the free-function form of [`ScalarFunctionSpec::eval`].
pub fn eval_scalar(f: &ScalarFunctionSpec, x: f64) -> Result<f64> {
    f.eval(x)
}

fn check_measure(nodes: &[f64], weights: &[f64]) -> Result<()> {
    if nodes.is_empty() || nodes.len() != weights.len() {
        return Err(Error::invalid(format!(
            "discrete measure needs matching non-empty nodes/weights, got {} and {}",
            nodes.len(),
            weights.len()
        )));
    }
    if !nodes.iter().chain(weights).all(|v| *v > 0.0 && v.is_finite()) {
        return Err(Error::invalid(
            "discrete measure nodes and weights must be finite and strictly positive",
        ));
    }
    Ok(())
}

/// `(-1)^{k+1} (e^{-u} - Σ_{j=0}^{k} (-u)^j / j!)`.
///
/// For small `u` the tail series `Σ_{j>k} (-1)^{j-k-1} u^j / j!` is summed
/// instead, since the direct form cancels catastrophically there.
pub fn bfk_kernel(k: u32, u: f64) -> f64 {
    if k == 0 {
        return -(-u).exp_m1();
    }
    if u < 2.0 {
        let mut term = 1.0;
        for j in 1..=(k + 1) {
            term *= u / j as f64;
        }
        let mut sum = 0.0;
        let mut j = k + 1;
        loop {
            sum += term;
            j += 1;
            term *= -u / j as f64;
            if term.abs() <= 1e-17 * sum.abs() || j > k + 60 {
                break;
            }
        }
        sum
    } else {
        let mut poly = 0.0;
        let mut term = 1.0;
        for j in 0..=k {
            if j > 0 {
                term *= -u / j as f64;
            }
            poly += term;
        }
        let sign = if (k + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * ((-u).exp() - poly)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
enum SpecRepr {
    Power { q: f64 },
    ExpKernel { t: f64, sign: i8 },
    Quadratic { c0: f64, c1: f64, c2: f64 },
    Cm0Discrete { nodes: Vec<f64>, weights: Vec<f64> },
    BfkDiscrete { k: u32, nodes: Vec<f64>, weights: Vec<f64> },
}

impl TryFrom<SpecRepr> for ScalarFunctionSpec {
    type Error = Error;

    fn try_from(r: SpecRepr) -> Result<Self> {
        match r {
            SpecRepr::Power { q } => Self::power(q),
            SpecRepr::ExpKernel { t, sign } => Self::exp_kernel(t, sign),
            SpecRepr::Quadratic { c0, c1, c2 } => Self::quadratic(c0, c1, c2),
            SpecRepr::Cm0Discrete { nodes, weights } => Self::cm0_discrete(nodes, weights),
            SpecRepr::BfkDiscrete { k, nodes, weights } => Self::bfk_discrete(k, nodes, weights),
        }
    }
}

impl From<ScalarFunctionSpec> for SpecRepr {
    fn from(s: ScalarFunctionSpec) -> Self {
        match s.variant {
            Variant::PowerFunction { q } => SpecRepr::Power { q },
            Variant::ExpKernel { t, sign } => SpecRepr::ExpKernel { t, sign },
            Variant::Quadratic { c0, c1, c2 } => SpecRepr::Quadratic { c0, c1, c2 },
            Variant::DiscreteMeasureCm0 { nodes, weights } => {
                SpecRepr::Cm0Discrete { nodes, weights }
            }
            Variant::DiscreteMeasureBfk { k, nodes, weights } => {
                SpecRepr::BfkDiscrete { k, nodes, weights }
            }
        }
    }
}
