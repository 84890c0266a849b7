//! Solution bases `x^μ e^{ax}·{1, cos bx, sin bx}` and their closed-form jets.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charpoly::RootSpec;
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Trig {
    None,
    Cos,
    Sin,
}

/// `x^power · e^{rate x} · trig(freq x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisFunction {
    pub power: u32,
    pub rate: f64,
    pub freq: f64,
    pub trig: Trig,
}

impl BasisFunction {
    pub fn new(power: u32, rate: f64, freq: f64, trig: Trig) -> Result<Self> {
        let ok = match trig {
            Trig::None => freq == 0.0,
            Trig::Cos | Trig::Sin => freq > 0.0,
        };
        if !ok || !rate.is_finite() || !freq.is_finite() {
            return Err(Error::InvalidBasis(format!(
                "inconsistent basis function: power {power}, rate {rate}, freq {freq}, {trig:?}"
            )));
        }
        Ok(BasisFunction {
            power,
            rate,
            freq,
            trig,
        })
    }

    pub fn exp_poly(power: u32, rate: f64) -> Self {
        BasisFunction {
            power,
            rate,
            freq: 0.0,
            trig: Trig::None,
        }
    }

    /// `λ = rate + i·freq`, the root this function belongs to.
    pub fn root(&self) -> Complex64 {
        Complex64::new(self.rate, self.freq)
    }

    fn pick(&self, z: Complex64) -> f64 {
        match self.trig {
            Trig::None | Trig::Cos => z.re,
            Trig::Sin => z.im,
        }
    }

    /// Plain double evaluation; overflows for large `|rate x|`.
    pub fn value(&self, x: f64) -> f64 {
        let j = eval_jet(self, x);
        j.value * j.log_scale.exp()
    }
}

/// Value and first two derivatives with `e^{log_scale}` factored out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub log_scale: f64,
}

/// Closed-form jet of `f` at `x`; `log_scale = rate · x`.
///
/// With `λ = a + ib` and `f = Re/Im(x^μ e^{λx})`:
/// `f' = Re/Im((λ x^μ + μ x^{μ-1}) e^{λx})`,
/// `f'' = Re/Im((λ² x^μ + 2λμ x^{μ-1} + μ(μ-1) x^{μ-2}) e^{λx})`.
pub fn eval_jet(f: &BasisFunction, x: f64) -> FunctionJet {
    jet_with_power_scale(f, x, false)
}

/// Same jet, but for `|x| > 1` the factor `|x|^μ` is also moved into the
/// log scale so the mantissas stay O(1) at any distance.
pub(crate) fn eval_jet_compact(f: &BasisFunction, x: f64) -> FunctionJet {
    jet_with_power_scale(f, x, true)
}

fn jet_with_power_scale(f: &BasisFunction, x: f64, compact: bool) -> FunctionJet {
    let mu = f.power as i32;
    let lambda = f.root();
    // x^{μ-k} for k = 0, 1, 2, optionally divided by |x|^μ.
    let (pow, extra_log) = if compact && x.abs() > 1.0 && mu > 0 {
        let s = x.signum();
        let ax = x.abs();
        let p = |k: i32| -> f64 {
            if mu - k < 0 {
                0.0
            } else {
                s.powi(mu - k) * ax.powi(-k)
            }
        };
        ([p(0), p(1), p(2)], mu as f64 * ax.ln())
    } else {
        let p = |k: i32| -> f64 {
            if mu - k < 0 {
                0.0
            } else {
                x.powi(mu - k)
            }
        };
        ([p(0), p(1), p(2)], 0.0)
    };
    let m = mu as f64;
    let p0 = Complex64::new(pow[0], 0.0);
    let p1 = lambda * pow[0] + m * pow[1];
    let p2 = lambda * lambda * pow[0] + 2.0 * m * lambda * pow[1] + m * (m - 1.0) * pow[2];
    let phase = if f.freq == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let (s, c) = (f.freq * x).sin_cos();
        Complex64::new(c, s)
    };
    FunctionJet {
        value: f.pick(p0 * phase),
        d1: f.pick(p1 * phase),
        d2: f.pick(p2 * phase),
        log_scale: f.rate * x + extra_log,
    }
}

/// Ordered basis of the solution space, with an optional change of basis
/// `Θ` applied at evaluation time: `σ_Ψ = Θ ∘ σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBasis {
    functions: Vec<BasisFunction>,
    theta: Option<DMatrix<f64>>,
    theta_compound: Option<DMatrix<f64>>,
}

impl SolutionBasis {
    /// A basis from explicit functions, without `Θ`.
    pub fn from_functions(functions: Vec<BasisFunction>) -> Result<Self> {
        if functions.len() < 2 {
            return Err(Error::InvalidBasis(format!(
                "need at least two functions, got {}",
                functions.len()
            )));
        }
        Ok(SolutionBasis {
            functions,
            theta: None,
            theta_compound: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn theta(&self) -> Option<&DMatrix<f64>> {
        self.theta.as_ref()
    }

    pub(crate) fn theta_compound(&self) -> Option<&DMatrix<f64>> {
        self.theta_compound.as_ref()
    }

    /// Largest frequency present; drives the panel density of the quadrature.
    pub fn max_freq(&self) -> f64 {
        self.functions.iter().fold(0.0, |m, f| m.max(f.freq))
    }
}

/// Standard basis: real roots first (decreasing value, increasing power),
/// then complex pairs (non-increasing real part; all cosines of a pair by
/// increasing power, then all sines).
pub fn standard_basis(spec: &RootSpec) -> SolutionBasis {
    let mut functions = Vec::with_capacity(spec.order());
    for r in spec.real_roots() {
        for mu in 0..r.multiplicity {
            functions.push(BasisFunction::exp_poly(mu, r.value));
        }
    }
    for c in spec.complex_pairs() {
        for trig in [Trig::Cos, Trig::Sin] {
            for mu in 0..c.multiplicity {
                functions.push(BasisFunction {
                    power: mu,
                    rate: c.re,
                    freq: c.im,
                    trig,
                });
            }
        }
    }
    SolutionBasis {
        functions,
        theta: None,
        theta_compound: None,
    }
}

/// Compose a change of basis: the result evaluates `theta · Θ_old · σ`.
pub fn apply_theta(basis: &SolutionBasis, theta: &DMatrix<f64>) -> Result<SolutionBasis> {
    let n = basis.dim();
    if theta.nrows() != n || theta.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if theta.nrows() != n {
                theta.nrows()
            } else {
                theta.ncols()
            },
        });
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidBasis("change of basis has non-finite entries".into()));
    }
    if !linalg::is_invertible(theta) {
        return Err(Error::InvalidBasis("change of basis is singular".into()));
    }
    let composed = match &basis.theta {
        Some(old) => theta * old,
        None => theta.clone(),
    };
    let compound = linalg::second_compound(&composed);
    Ok(SolutionBasis {
        functions: basis.functions.clone(),
        theta: Some(composed),
        theta_compound: Some(compound),
    })
}

/// `max_x |P(f)(x)| / (1 + |f(x)|)`, applying `∏ (d/dx - λ)` to the closed
/// form of `f` exactly.
///
/// `f = Re/Im(q(x) e^{λ₀ x})` with `q` a complex polynomial, and
/// `(d/dx - λ)(q e^{λ₀ x}) = (q' + (λ₀ - λ) q) e^{λ₀ x}`, so each factor maps
/// the family to itself. `P` has real coefficients, so it commutes with
/// taking the real or imaginary part.
pub fn ode_residual(spec: &RootSpec, f: &BasisFunction, xs: &[f64]) -> f64 {
    let lambda0 = f.root();
    let mut q: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); f.power as usize + 1];
    q[f.power as usize] = Complex64::new(1.0, 0.0);
    for root in spec.all_roots() {
        let shift = lambda0 - root;
        let mut next: Vec<Complex64> = q.iter().map(|c| c * shift).collect();
        for k in 1..q.len() {
            next[k - 1] += q[k] * k as f64;
        }
        q = next;
    }
    xs.iter()
        .map(|&x| {
            let qx = q
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
            let phase = Complex64::from_polar(1.0, f.freq * x);
            let residual = f.pick(qx * phase).abs();
            let jet = eval_jet(f, x);
            // |r| e^{ax} / (1 + |v| e^{ax}) without forming e^{ax}.
            residual / ((-jet.log_scale).exp() + jet.value.abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{ComplexPair, RealRoot};
    use std::f64::consts::PI;

    #[test]
    fn standard_basis_examples() {
        let b = standard_basis(&RootSpec::simple(&[1.0, -1.0], &[]).unwrap());
        assert_eq!(
            b.functions(),
            &[BasisFunction::exp_poly(0, 1.0), BasisFunction::exp_poly(0, -1.0)]
        );

        let n = 4;
        let b = standard_basis(
            &RootSpec::new(
                vec![RealRoot {
                    value: 0.0,
                    multiplicity: n,
                }],
                vec![],
            )
            .unwrap(),
        );
        let powers: Vec<u32> = b.functions().iter().map(|f| f.power).collect();
        assert_eq!(powers, vec![0, 1, 2, 3]);
        assert!(b.functions().iter().all(|f| f.rate == 0.0));

        let b = standard_basis(&RootSpec::simple(&[], &[(-1.0, 1.0)]).unwrap());
        assert_eq!(b.functions()[0].trig, Trig::Cos);
        assert_eq!(b.functions()[1].trig, Trig::Sin);
        assert!(b.functions().iter().all(|f| f.rate == -1.0 && f.freq == 1.0));
    }

    #[test]
    fn multiplicity_ordering() {
        let spec = RootSpec::new(
            vec![RealRoot {
                value: 2.0,
                multiplicity: 2,
            }],
            vec![ComplexPair {
                re: -1.0,
                im: 3.0,
                multiplicity: 2,
            }],
        )
        .unwrap();
        let b = standard_basis(&spec);
        let shape: Vec<(u32, Trig)> = b.functions().iter().map(|f| (f.power, f.trig)).collect();
        assert_eq!(
            shape,
            vec![
                (0, Trig::None),
                (1, Trig::None),
                (0, Trig::Cos),
                (1, Trig::Cos),
                (0, Trig::Sin),
                (1, Trig::Sin)
            ]
        );
    }

    #[test]
    fn jet_examples() {
        let j = eval_jet(&BasisFunction::exp_poly(0, 1.0), 0.0);
        assert_eq!((j.value, j.d1, j.d2, j.log_scale), (1.0, 1.0, 1.0, 0.0));

        let j = eval_jet(&BasisFunction::exp_poly(1, 0.0), 3.0);
        assert_eq!((j.value, j.d1, j.d2), (3.0, 1.0, 0.0));

        let cos = BasisFunction::new(0, 0.0, 1.0, Trig::Cos).unwrap();
        let j = eval_jet(&cos, PI);
        assert!((j.value + 1.0).abs() < 1e-15);
        assert!(j.d1.abs() < 1e-15);
        assert!((j.d2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn compact_jet_matches_plain() {
        let f = BasisFunction::new(3, 0.5, 2.0, Trig::Sin).unwrap();
        for x in [-7.5, -1.0, 0.3, 4.0, 11.0] {
            let a = eval_jet(&f, x);
            let b = eval_jet_compact(&f, x);
            let k = (b.log_scale - a.log_scale).exp();
            for (u, v) in [(a.value, b.value), (a.d1, b.d1), (a.d2, b.d2)] {
                assert!((u - v * k).abs() <= 1e-12 * (1.0 + u.abs()));
            }
        }
    }

    #[test]
    fn invalid_functions_rejected() {
        assert!(BasisFunction::new(0, 1.0, 1.0, Trig::None).is_err());
        assert!(BasisFunction::new(0, 1.0, 0.0, Trig::Cos).is_err());
    }

    #[test]
    fn theta_examples() {
        let b = standard_basis(&RootSpec::simple(&[1.0, -1.0], &[]).unwrap());
        let id = apply_theta(&b, &DMatrix::identity(2, 2)).unwrap();
        assert_eq!(id.functions(), b.functions());
        assert_eq!(id.theta().unwrap(), &DMatrix::identity(2, 2));

        let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = apply_theta(&b, &swap).unwrap();
        let both = apply_theta(&s, &swap).unwrap();
        assert_eq!(both.theta().unwrap(), &DMatrix::identity(2, 2));

        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            apply_theta(&b, &singular),
            Err(Error::InvalidBasis(_))
        ));
        assert!(matches!(
            apply_theta(&b, &DMatrix::identity(3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let spec = RootSpec::simple(&[1.0, -1.0], &[]).unwrap();
        let r = ode_residual(&spec, &BasisFunction::exp_poly(0, 1.0), &[-1.0, 0.0, 1.0]);
        assert!(r < 1e-15);

        let spec = RootSpec::new(
            vec![RealRoot {
                value: 0.0,
                multiplicity: 3,
            }],
            vec![],
        )
        .unwrap();
        assert!(ode_residual(&spec, &BasisFunction::exp_poly(2, 0.0), &[0.0, 5.0]) < 1e-15);

        let spec = RootSpec::simple(&[], &[(0.0, 1.0)]).unwrap();
        let cos = BasisFunction::new(0, 0.0, 1.0, Trig::Cos).unwrap();
        assert!(ode_residual(&spec, &cos, &[0.0, 1.0, 2.0]) <= 1e-12);
    }

    #[test]
    fn residual_detects_foreign_function() {
        let spec = RootSpec::simple(&[1.0, -1.0], &[]).unwrap();
        let r = ode_residual(&spec, &BasisFunction::exp_poly(0, 2.0), &[0.0, 1.0]);
        assert!(r > 0.1);
    }
}
