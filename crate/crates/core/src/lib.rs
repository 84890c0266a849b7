//! Curves traced by the solution basis of a constant-coefficient linear
//! ODE: root finding, basis construction, the total first curvature
//! integrand, exact finiteness verdicts and half-line quadrature.

pub mod basis;
pub mod charpoly;
pub mod classify;
pub mod curve;
pub mod error;
pub mod job;
pub mod linalg;
pub mod presets;
pub mod quad;
pub mod scaled;

pub use basis::{apply_theta, standard_basis, BasisFunction, SolutionBasis, Trig};
pub use charpoly::{from_roots, roots_of, spectral_extremes, ComplexPair, Polynomial, RealRoot, RootSpec};
pub use classify::{
    classify_kappa, classify_properness, classify_with_basis, DecidingRule, Finiteness, Properness,
    Side, Verdict,
};
pub use curve::{curvature_integrand, curvature_kappa, jet_at, CurveJet, Integrand, Metric};
pub use error::{Error, Result};
pub use quad::{integrate_half_line, QuadConfig, QuadStatus, QuadratureResult, Window};
pub use scaled::Scaled;
pub use job::{run_job, JobError, JobSpec, Outcome, Report};
pub use presets::{builtin_examples, preset};
