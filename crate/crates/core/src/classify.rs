//! Exact decision procedure for properness, length and finiteness of the
//! total curvature on each half-line, from root data alone.
//!
//! Comparisons are exact on user-supplied roots. For roots produced by the
//! numeric root finder the spec carries its cluster tolerance, and real
//! parts within that tolerance compare equal; any verdict that depended on
//! such a comparison is flagged `tolerance_resolved`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::charpoly::{spectral_extremes, RootSpec};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];

    /// `+1` for `[0, ∞)`, `-1` for `(-∞, 0]`.
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Plus => "PLUS",
            Side::Minus => "MINUS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Finiteness {
    Finite,
    Infinite,
    NotDecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecidingRule {
    Thm12RealDominant,
    Thm12ComplexDominant,
    Thm14CaseI,
    Thm14CaseII,
    Thm14CaseIiiFinite,
    Thm14CaseIiiInfinite,
    HypothesisFailed,
}

impl DecidingRule {
    pub fn is_finite_case(self) -> bool {
        matches!(
            self,
            DecidingRule::Thm12RealDominant
                | DecidingRule::Thm14CaseI
                | DecidingRule::Thm14CaseIiiFinite
        )
    }
}

/// Why a half-line is (or is not) known to be properly embedded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProperReason {
    /// Extreme real part strictly of the right sign: exponential growth.
    ExponentialGrowth,
    /// Extreme real part zero, attained by a repeated root: `x^μ` growth.
    PolynomialGrowth,
    NotEstablished,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Properness {
    pub proper: bool,
    pub infinite_length: bool,
    pub reason: ProperReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub half_line: Side,
    pub proper_embedding: bool,
    pub infinite_length: bool,
    pub proper_reason: ProperReason,
    pub kappa_finite: Finiteness,
    pub deciding_rule: DecidingRule,
    /// Gap between the dominant real root and the next real part on this
    /// side; present for finite verdicts whenever such a root exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral_gap: Option<f64>,
    /// Multiplicity of the dominant real root (finite verdicts only). At 1
    /// the integrand decays like `e^{-gap·|x|}`; above 1 only algebraically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant_multiplicity: Option<u32>,
    pub tolerance_resolved: bool,
}

/// Root data seen from one side: real parts multiplied by `side.sign()`, so
/// "dominant" always means "largest".
struct Oriented {
    real: Vec<(f64, u32)>,
    complex: Vec<(f64, u32)>,
    tol: f64,
}

impl Oriented {
    fn new(spec: &RootSpec, side: Side) -> Self {
        let s = side.sign();
        Oriented {
            real: spec
                .real_roots()
                .iter()
                .map(|r| (s * r.value, r.multiplicity))
                .collect(),
            complex: spec
                .complex_pairs()
                .iter()
                .map(|c| (s * c.re, c.multiplicity))
                .collect(),
            tol: spec.resolution_tol().unwrap_or(0.0),
        }
    }

    fn extreme(&self) -> f64 {
        self.real
            .iter()
            .chain(self.complex.iter())
            .map(|r| r.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn top_real(&self) -> Option<(f64, u32)> {
        self.real
            .iter()
            .copied()
            .max_by(|a, b| a.0.total_cmp(&b.0))
    }

    fn top_complex(&self) -> Option<f64> {
        self.complex
            .iter()
            .map(|c| c.0)
            .max_by(|a, b| a.total_cmp(b))
    }
}

/// Three-way comparison honoring the resolution tolerance. The flag is set
/// when the outcome was "equal" only thanks to the tolerance.
fn compare(a: f64, b: f64, tol: f64, flagged: &mut bool) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    let d = a - b;
    if d == 0.0 {
        Equal
    } else if d.abs() <= tol {
        *flagged = true;
        Equal
    } else if d > 0.0 {
        Greater
    } else {
        Less
    }
}

/// Properness and infinite length of one half-line.
pub fn classify_properness(spec: &RootSpec, side: Side) -> Properness {
    let o = Oriented::new(spec, side);
    let extreme = o.extreme();
    let mut flagged = false;
    let reason = match compare(extreme, 0.0, o.tol, &mut flagged) {
        std::cmp::Ordering::Greater => ProperReason::ExponentialGrowth,
        std::cmp::Ordering::Equal => {
            let repeated_at_zero = o
                .real
                .iter()
                .chain(o.complex.iter())
                .any(|&(v, m)| m >= 2 && compare(v, 0.0, o.tol, &mut flagged).is_eq());
            if repeated_at_zero {
                ProperReason::PolynomialGrowth
            } else {
                ProperReason::NotEstablished
            }
        }
        std::cmp::Ordering::Less => ProperReason::NotEstablished,
    };
    let proper = reason != ProperReason::NotEstablished;
    Properness {
        proper,
        infinite_length: proper,
        reason,
    }
}

/// Outcome of one decision rule, before it is packaged into a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleOutcome {
    pub finiteness: Finiteness,
    pub rule: DecidingRule,
    pub tolerance_resolved: bool,
}

fn hypothesis_holds(o: &Oriented, flagged: &mut bool) -> bool {
    compare(o.extreme(), 0.0, o.tol, flagged).is_gt()
}

fn not_decided(flagged: bool) -> RuleOutcome {
    RuleOutcome {
        finiteness: Finiteness::NotDecided,
        rule: DecidingRule::HypothesisFailed,
        tolerance_resolved: flagged,
    }
}

/// The simple-roots rule: finite iff the dominant real root strictly
/// exceeds every complex real part (vacuous without complex roots).
pub fn simple_roots_rule(spec: &RootSpec, side: Side) -> RuleOutcome {
    let o = Oriented::new(spec, side);
    let mut flagged = false;
    if !hypothesis_holds(&o, &mut flagged) {
        return not_decided(flagged);
    }
    let finite = match (o.top_real(), o.top_complex()) {
        (Some(_), None) => true,
        (None, _) => false,
        (Some((s, _)), Some(a)) => compare(s, a, o.tol, &mut flagged).is_gt(),
    };
    RuleOutcome {
        finiteness: if finite {
            Finiteness::Finite
        } else {
            Finiteness::Infinite
        },
        rule: if finite {
            DecidingRule::Thm12RealDominant
        } else {
            DecidingRule::Thm12ComplexDominant
        },
        tolerance_resolved: flagged,
    }
}

/// The multiplicity-aware rule: finite iff the dominant real root attains
/// the extreme real part and its multiplicity exceeds that of every complex
/// root sharing its real part.
pub fn multiplicity_rule(spec: &RootSpec, side: Side) -> RuleOutcome {
    let o = Oriented::new(spec, side);
    let mut flagged = false;
    if !hypothesis_holds(&o, &mut flagged) {
        return not_decided(flagged);
    }
    let (finiteness, rule) = match (o.top_real(), o.top_complex()) {
        (Some(_), None) => (Finiteness::Finite, DecidingRule::Thm14CaseI),
        (None, Some(_)) => (Finiteness::Infinite, DecidingRule::Thm14CaseII),
        (None, None) => unreachable!("order >= 2"),
        (Some((s, nu)), Some(a)) => match compare(s, a, o.tol, &mut flagged) {
            std::cmp::Ordering::Greater => (Finiteness::Finite, DecidingRule::Thm14CaseI),
            std::cmp::Ordering::Less => (Finiteness::Infinite, DecidingRule::Thm14CaseII),
            std::cmp::Ordering::Equal => {
                let rival = o
                    .complex
                    .iter()
                    .filter(|&&(re, _)| compare(re, s, o.tol, &mut flagged).is_eq())
                    .map(|c| c.1)
                    .max()
                    .unwrap_or(0);
                if nu > rival {
                    (Finiteness::Finite, DecidingRule::Thm14CaseIiiFinite)
                } else {
                    (Finiteness::Infinite, DecidingRule::Thm14CaseIiiInfinite)
                }
            }
        },
    };
    RuleOutcome {
        finiteness,
        rule,
        tolerance_resolved: flagged,
    }
}

/// Gap from the dominant real root to the nearest strictly smaller real
/// part on this side (roots within the tolerance count as equal and are
/// skipped).
fn spectral_gap(o: &Oriented) -> Option<f64> {
    let (s, _) = o.top_real()?;
    o.real
        .iter()
        .chain(o.complex.iter())
        .map(|&(v, _)| s - v)
        .filter(|&d| d > o.tol)
        .min_by(|a, b| a.total_cmp(b))
}

/// Verdict for one half-line. Simple-root specs use the simple-roots rule,
/// everything else the multiplicity-aware rule.
pub fn classify_kappa(spec: &RootSpec, side: Side) -> Verdict {
    let prop = classify_properness(spec, side);
    let outcome = if spec.is_simple() {
        simple_roots_rule(spec, side)
    } else {
        multiplicity_rule(spec, side)
    };
    let o = Oriented::new(spec, side);
    let finite = outcome.finiteness == Finiteness::Finite;
    Verdict {
        half_line: side,
        proper_embedding: prop.proper,
        infinite_length: prop.infinite_length,
        proper_reason: prop.reason,
        kappa_finite: outcome.finiteness,
        deciding_rule: outcome.rule,
        spectral_gap: if finite { spectral_gap(&o) } else { None },
        dominant_multiplicity: if finite {
            o.top_real().map(|r| r.1)
        } else {
            None
        },
        tolerance_resolved: outcome.tolerance_resolved,
    }
}

/// Verdict under an arbitrary basis `Θ σ`. `Θ` is validated and then plays
/// no further role: the verdict depends on the solution space only.
pub fn classify_with_basis(spec: &RootSpec, theta: &DMatrix<f64>, side: Side) -> Result<Verdict> {
    let n = spec.order();
    if theta.nrows() != n || theta.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: theta.nrows(),
        });
    }
    if !linalg::is_invertible(theta) {
        return Err(Error::InvalidBasis("change of basis is singular".into()));
    }
    Ok(classify_kappa(spec, side))
}

/// `(r_plus, r_minus)`, re-exported for convenience next to the verdicts.
pub fn extremes(spec: &RootSpec) -> (f64, f64) {
    spectral_extremes(spec)
}
