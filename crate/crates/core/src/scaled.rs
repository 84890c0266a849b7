//! Log-scaled reals.
//!
//! A [`Scaled`] value stands for `mantissa * exp(log_scale)`. Curve jets far
//! out on a half-line carry factors like `exp(2 s x)` that leave the double
//! range long before the ratios built from them do, so every product and sum
//! in the curvature pipeline is carried in this form and only collapsed to a
//! plain `f64` at the end.

use serde::{Deserialize, Serialize};

/// `mantissa * exp(log_scale)`. Zero is `(0.0, 0.0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        log_scale: 0.0,
    };

    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 {
            Self::ZERO
        } else {
            Scaled {
                mantissa,
                log_scale,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        Self::new(v, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Rebase so that `|mantissa|` lies in `[1, e)`.
    pub fn normalized(self) -> Self {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return self;
        }
        let ln = self.mantissa.abs().ln();
        Scaled {
            mantissa: self.mantissa.signum() * (ln - ln.floor()).exp(),
            log_scale: self.log_scale + ln.floor(),
        }
    }

    /// Natural log of `|self|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.log_scale
        }
    }

    /// Collapse to a double. May underflow to zero or overflow to infinity;
    /// that is the caller's decision to make.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa * self.log_scale.exp()
        }
    }

    pub fn abs(self) -> Self {
        Scaled {
            mantissa: self.mantissa.abs(),
            log_scale: self.log_scale,
        }
    }

    pub fn signum(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(self.mantissa * c, self.log_scale)
    }

    pub fn sqrt_abs(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        let n = self.normalized();
        Scaled {
            mantissa: n.mantissa.abs().sqrt(),
            log_scale: 0.5 * n.log_scale,
        }
    }

    pub fn powf_abs(self, p: f64) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        let n = self.normalized();
        Scaled::new(n.mantissa.abs().powf(p), p * n.log_scale).normalized()
    }

}

impl std::ops::Mul for Scaled {
    type Output = Scaled;

    fn mul(self, other: Scaled) -> Scaled {
        Scaled::new(
            self.mantissa * other.mantissa,
            self.log_scale + other.log_scale,
        )
        .normalized()
    }
}

impl std::ops::Div for Scaled {
    type Output = Scaled;

    fn div(self, other: Scaled) -> Scaled {
        Scaled::new(
            self.mantissa / other.mantissa,
            self.log_scale - other.log_scale,
        )
        .normalized()
    }
}

impl std::ops::Add for Scaled {
    type Output = Scaled;

    fn add(self, other: Scaled) -> Scaled {
        sum([self, other])
    }
}

/// Outcome of a scaled summation, keeping the scale of the largest term so
/// callers can measure cancellation.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSum {
    pub value: Scaled,
    /// `|sum| / max |term|`, or 0 when every term was zero.
    pub relative: f64,
}

impl ScaledSum {
    /// A plain sum `value` of terms whose largest magnitude was
    /// `largest_term`, all sharing the factor `e^{log_scale}`.
    pub fn from_parts(value: f64, largest_term: f64, log_scale: f64) -> Self {
        ScaledSum {
            value: Scaled::new(value, log_scale).normalized(),
            relative: if largest_term > 0.0 {
                value.abs() / largest_term
            } else {
                0.0
            },
        }
    }
}

/// Sum terms after factoring out the largest scale present.
pub fn sum_tracked<I: IntoIterator<Item = Scaled>>(terms: I) -> ScaledSum {
    let terms: Vec<Scaled> = terms.into_iter().filter(|t| !t.is_zero()).collect();
    if terms.is_empty() {
        return ScaledSum {
            value: Scaled::ZERO,
            relative: 0.0,
        };
    }
    let top = terms
        .iter()
        .map(|t| t.mantissa.abs().ln() + t.log_scale)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut acc = 0.0;
    for t in &terms {
        acc += t.mantissa * (t.log_scale - top).exp();
    }
    ScaledSum {
        value: Scaled::new(acc, top).normalized(),
        relative: acc.abs(),
    }
}

pub fn sum<I: IntoIterator<Item = Scaled>>(terms: I) -> Scaled {
    sum_tracked(terms).value
}
