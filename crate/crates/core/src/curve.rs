//! Jets of `σ(x) = Θ (φ_1(x), ..., φ_n(x))` and the curvature integrand.
//!
//! The wedge `σ̇ ∧ σ̈` is assembled from 2×2 minors of the *standard* basis
//! jets, each carrying its own scale `e^{(a_k + a_l) x}`, and only then
//! pushed through the second compound of `Θ`. Building it from the already
//! mixed components instead would let a subdominant factor such as
//! `e^{-3x}` underflow before it meets the `e^{3x}` it has to multiply.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::basis::{eval_jet_compact, FunctionJet, SolutionBasis};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scaled::{Scaled, ScaledSum};

/// Symmetric bilinear form on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Euclidean,
    Gram {
        gram: DMatrix<f64>,
        compound: DMatrix<f64>,
    },
}

impl Metric {
    pub fn euclidean() -> Self {
        Metric::Euclidean
    }

    /// A non-degenerate, exactly symmetric Gram matrix.
    pub fn gram(g: DMatrix<f64>) -> Result<Self> {
        if g.nrows() != g.ncols() {
            return Err(Error::InvalidMetric(format!(
                "Gram matrix must be square, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMetric("Gram matrix has non-finite entries".into()));
        }
        if g != g.transpose() {
            return Err(Error::InvalidMetric("Gram matrix is not symmetric".into()));
        }
        if g.determinant() == 0.0 {
            return Err(Error::InvalidMetric("Gram matrix is degenerate".into()));
        }
        let compound = linalg::second_compound(&g);
        Ok(Metric::Gram { gram: g, compound })
    }

    /// 2×2 form `[[α, β], [β, γ]]`.
    pub fn gram_2x2(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::gram(DMatrix::from_row_slice(2, 2, &[alpha, beta, beta, gamma]))
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, Metric::Euclidean)
    }

    pub fn gram_matrix(&self) -> Option<&DMatrix<f64>> {
        match self {
            Metric::Euclidean => None,
            Metric::Gram { gram, .. } => Some(gram),
        }
    }

    /// `(p, q)`: counts of positive and negative eigenvalues. `None` for
    /// the Euclidean metric, whose dimension is not fixed.
    pub fn signature(&self) -> Option<(usize, usize)> {
        let g = self.gram_matrix()?;
        let eig = SymmetricEigen::new(g.clone());
        let p = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let q = eig.eigenvalues.iter().filter(|&&l| l < 0.0).count();
        Some((p, q))
    }

    pub fn dim(&self) -> Option<usize> {
        self.gram_matrix().map(|g| g.nrows())
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != n => Err(Error::DimensionMismatch { expected: n, got: d }),
            _ => Ok(()),
        }
    }

    fn form(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match self {
            Metric::Euclidean => u.dot(v),
            Metric::Gram { gram, .. } => u.dot(&(gram * v)),
        }
    }
}

/// Position, velocity and acceleration of the curve at one point, as
/// mantissas times `e^{log_scale}`.
#[derive(Debug, Clone)]
pub struct CurveJet {
    pub position: DVector<f64>,
    pub velocity: DVector<f64>,
    pub acceleration: DVector<f64>,
    pub log_scale: f64,
    parts: Vec<FunctionJet>,
    theta: Option<DMatrix<f64>>,
    theta_compound: Option<DMatrix<f64>>,
}

impl CurveJet {
    /// A jet from raw vectors, in an orthonormal frame with no `Θ`.
    pub fn from_vectors(
        position: DVector<f64>,
        velocity: DVector<f64>,
        acceleration: DVector<f64>,
    ) -> Result<Self> {
        let n = position.len();
        for v in [&velocity, &acceleration] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let parts = (0..n)
            .map(|i| {
                normalize_part(FunctionJet {
                    value: position[i],
                    d1: velocity[i],
                    d2: acceleration[i],
                    log_scale: 0.0,
                })
            })
            .collect::<Vec<_>>();
        Ok(assemble(parts, None, None))
    }

    pub fn dim(&self) -> usize {
        self.position.len()
    }
}

fn normalize_part(mut j: FunctionJet) -> FunctionJet {
    let m = j.value.abs().max(j.d1.abs()).max(j.d2.abs());
    if m > 0.0 && m.is_finite() {
        j.value /= m;
        j.d1 /= m;
        j.d2 /= m;
        j.log_scale += m.ln();
    }
    j
}

fn parts_at(basis: &SolutionBasis, x: f64) -> Vec<FunctionJet> {
    basis
        .functions()
        .iter()
        .map(|f| normalize_part(eval_jet_compact(f, x)))
        .collect()
}

fn assemble(
    parts: Vec<FunctionJet>,
    theta: Option<DMatrix<f64>>,
    theta_compound: Option<DMatrix<f64>>,
) -> CurveJet {
    let n = parts.len();
    let top = parts
        .iter()
        .filter(|p| p.value != 0.0 || p.d1 != 0.0 || p.d2 != 0.0)
        .map(|p| p.log_scale)
        .fold(f64::NEG_INFINITY, f64::max);
    let top = if top.is_finite() { top } else { 0.0 };
    let rebased = |sel: fn(&FunctionJet) -> f64| -> DVector<f64> {
        let raw = DVector::from_fn(n, |i, _| sel(&parts[i]) * (parts[i].log_scale - top).exp());
        match &theta {
            Some(t) => t * raw,
            None => raw,
        }
    };
    let mut position = rebased(|p| p.value);
    let mut velocity = rebased(|p| p.d1);
    let mut acceleration = rebased(|p| p.d2);

    let max = position
        .amax()
        .max(velocity.amax())
        .max(acceleration.amax());
    // Prefer an unscaled presentation whenever it fits in [1e-8, 1e8].
    let unscaled = max * top.exp();
    let (factor, log_scale) = if max == 0.0 {
        (1.0, 0.0)
    } else if unscaled.is_finite() && (1e-8..=1e8).contains(&unscaled) {
        (top.exp(), 0.0)
    } else {
        (1.0 / max, top + max.ln())
    };
    position *= factor;
    velocity *= factor;
    acceleration *= factor;
    CurveJet {
        position,
        velocity,
        acceleration,
        log_scale,
        parts,
        theta,
        theta_compound,
    }
}

/// Jet of the curve at `x`, with `Θ` applied when the basis carries one.
pub fn jet_at(basis: &SolutionBasis, x: f64) -> CurveJet {
    assemble(
        parts_at(basis, x),
        basis.theta().cloned(),
        basis.theta_compound().cloned(),
    )
}

/// Rebase scaled entries onto their largest scale: plain mantissas plus one
/// shared log. Entries more than ~745 e-folds below the top become zero,
/// which is below the rounding of anything they could be added to.
fn rebase(entries: &[(f64, f64)]) -> (Vec<f64>, f64) {
    let top = entries
        .iter()
        .filter(|e| e.0 != 0.0)
        .map(|e| e.1)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return (vec![0.0; entries.len()], 0.0);
    }
    (
        entries.iter().map(|&(m, l)| m * (l - top).exp()).collect(),
        top,
    )
}

fn quadratic_form(m: Option<&DMatrix<f64>>, v: &DVector<f64>) -> (f64, f64) {
    // Returns the value and the largest |term| for cancellation tracking.
    match m {
        None => (v.norm_squared(), v.norm_squared()),
        Some(g) => {
            let mut acc = 0.0;
            let mut big = 0.0f64;
            for i in 0..v.len() {
                for j in 0..v.len() {
                    let t = g[(i, j)] * v[i] * v[j];
                    acc += t;
                    big = big.max(t.abs());
                }
            }
            (acc, big)
        }
    }
}

fn speed_sq_parts(
    parts: &[FunctionJet],
    theta: Option<&DMatrix<f64>>,
    metric: &Metric,
) -> ScaledSum {
    let entries: Vec<(f64, f64)> = parts.iter().map(|p| (p.d1, p.log_scale)).collect();
    let (raw, top) = rebase(&entries);
    let mut u = DVector::from_vec(raw);
    if let Some(t) = theta {
        u = t * u;
    }
    let (value, big) = quadratic_form(metric.gram_matrix(), &u);
    ScaledSum::from_parts(value, big, 2.0 * top)
}

fn wedge_sq_parts(
    parts: &[FunctionJet],
    theta_compound: Option<&DMatrix<f64>>,
    metric: &Metric,
) -> Scaled {
    let minors: Vec<(f64, f64)> = linalg::pair_indices(parts.len())
        .into_iter()
        .map(|(k, l)| {
            let (a, b) = (&parts[k], &parts[l]);
            (a.d1 * b.d2 - b.d1 * a.d2, a.log_scale + b.log_scale)
        })
        .collect();
    let (raw, top) = rebase(&minors);
    let mut w = DVector::from_vec(raw);
    if let Some(c) = theta_compound {
        w = c * w;
    }
    let compound = match metric {
        Metric::Euclidean => None,
        Metric::Gram { compound, .. } => Some(compound),
    };
    let (value, _) = quadratic_form(compound, &w);
    Scaled::new(value, 2.0 * top).normalized()
}

/// `⟨σ̇, σ̇⟩`. Can be zero or negative under an indefinite metric.
pub fn speed_sq(jet: &CurveJet, m: &Metric) -> Result<Scaled> {
    m.check_dim(jet.dim())?;
    Ok(speed_sq_parts(&jet.parts, jet.theta.as_ref(), m).value)
}

/// `⟨σ̇∧σ̈, σ̇∧σ̈⟩`: the sum of squared 2×2 minors for the Euclidean
/// metric, and the induced form on bivectors for a Gram matrix (negative
/// for signature (1,1)).
pub fn wedge_norm_sq(jet: &CurveJet, m: &Metric) -> Result<Scaled> {
    m.check_dim(jet.dim())?;
    Ok(wedge_sq_parts(&jet.parts, jet.theta_compound.as_ref(), m))
}

/// `⟨u,u⟩⟨v,v⟩ - ⟨u,v⟩²` on the jet's presented vectors. Agrees with
/// [`wedge_norm_sq`] wherever the presented mantissas hold every component,
/// i.e. away from extreme scale separation.
pub fn lagrange_wedge_norm_sq(jet: &CurveJet, m: &Metric) -> Result<Scaled> {
    m.check_dim(jet.dim())?;
    let (u, v) = (&jet.velocity, &jet.acceleration);
    let value = m.form(u, u) * m.form(v, v) - m.form(u, v).powi(2);
    Ok(Scaled::new(value, 4.0 * jet.log_scale).normalized())
}

/// Precomputed evaluator of `κ‖σ̇‖ = |⟨σ̇∧σ̈,σ̇∧σ̈⟩|^{1/2} / |⟨σ̇,σ̇⟩|`.
#[derive(Debug, Clone)]
pub struct Integrand<'a> {
    basis: &'a SolutionBasis,
    metric: &'a Metric,
}

/// Values below this fraction of the largest contributing term count as a
/// null tangent.
pub const NULL_SPEED_REL: f64 = 1e-300;

impl<'a> Integrand<'a> {
    pub fn new(basis: &'a SolutionBasis, metric: &'a Metric) -> Result<Self> {
        metric.check_dim(basis.dim())?;
        Ok(Integrand { basis, metric })
    }

    pub fn basis(&self) -> &SolutionBasis {
        self.basis
    }

    pub fn metric(&self) -> &Metric {
        self.metric
    }

    /// `(⟨σ̇,σ̇⟩, ⟨σ̇∧σ̈,σ̇∧σ̈⟩)` at `x`.
    pub fn forms(&self, x: f64) -> (ScaledSum, Scaled) {
        let parts = parts_at(self.basis, x);
        let speed = speed_sq_parts(&parts, self.basis.theta(), self.metric);
        let wedge = wedge_sq_parts(&parts, self.basis.theta_compound(), self.metric);
        (speed, wedge)
    }

    /// Sign of `⟨σ̇,σ̇⟩` at `x` (0 for a null tangent).
    pub fn speed_sign(&self, x: f64) -> f64 {
        let (s, _) = self.forms(x);
        if s.relative < NULL_SPEED_REL {
            0.0
        } else {
            s.value.signum()
        }
    }

    pub fn scaled(&self, x: f64) -> Result<Scaled> {
        let (s, w) = self.forms(x);
        if s.relative < NULL_SPEED_REL || s.value.is_zero() {
            return Err(Error::NullVelocity { x });
        }
        Ok(w.sqrt_abs() / s.value.abs())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.scaled(x).map(|v| v.to_f64())
    }

    /// `κ = |wedge|^{1/2} / |speed²|^{3/2}`.
    pub fn kappa_scaled(&self, x: f64) -> Result<Scaled> {
        let (s, w) = self.forms(x);
        if s.relative < NULL_SPEED_REL || s.value.is_zero() {
            return Err(Error::NullVelocity { x });
        }
        Ok(w.sqrt_abs() / s.value.powf_abs(1.5))
    }
}

/// Total-curvature integrand `κ‖σ̇‖` at `x` as a plain double.
pub fn curvature_integrand(basis: &SolutionBasis, m: &Metric, x: f64) -> Result<f64> {
    Integrand::new(basis, m)?.eval(x)
}

/// Same integrand, kept in scaled form so it survives where the double
/// would underflow.
pub fn curvature_integrand_scaled(basis: &SolutionBasis, m: &Metric, x: f64) -> Result<Scaled> {
    Integrand::new(basis, m)?.scaled(x)
}

pub fn curvature_kappa(basis: &SolutionBasis, m: &Metric, x: f64) -> Result<f64> {
    Integrand::new(basis, m)?.kappa_scaled(x).map(|v| v.to_f64())
}
