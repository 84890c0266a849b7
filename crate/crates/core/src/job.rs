//! Job files, reports and sample tracks.
//!
//! A job is a TOML document naming the ODE (by coefficients or by roots),
//! an optional change of basis and Gram matrix, and the tasks to run. The
//! report echoes the job verbatim so that re-running the echo reproduces
//! the report byte for byte.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::basis::{apply_theta, standard_basis, SolutionBasis};
use crate::charpoly::{
    roots_of, spectral_extremes, ComplexPair, Polynomial, RealRoot, RootSpec, DEFAULT_CLUSTER_TOL,
};
use crate::classify::{classify_properness, classify_with_basis, Finiteness, Properness, Side, Verdict};
use crate::curve::{jet_at, Integrand, Metric};
use crate::error::Error;
use crate::linalg::from_rows;
use crate::quad::{
    integrate_half_line_with, verify_properness, QuadConfig, QuadStatus, QuadratureResult,
    DEFAULT_K_MAX, DEFAULT_TOL,
};

pub const TOOL: &str = "odecurve";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Checkpoint horizon for the numeric properness witness.
pub const PROPERNESS_X_MAX: f64 = 16_777_216.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classify,
    Integrate,
    Sample,
    Properness,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsInput {
    /// `[value, multiplicity]`
    #[serde(default)]
    pub real: Vec<(f64, u32)>,
    /// `[re, im, multiplicity]` with `im > 0`; the conjugate is implied.
    #[serde(default)]
    pub complex: Vec<(f64, f64, u32)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    /// `c_0, ..., c_{n-1}` of the monic characteristic polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsInput>,
}

impl Input {
    pub fn coeffs(c: Vec<f64>) -> Self {
        Input {
            coeffs: Some(c),
            roots: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub gram: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl std::str::FromStr for SampleRange {
    type Err = String;

    /// `LO:HI:N`
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected LO:HI:N, got {s:?}"));
        }
        let num = |p: &str, what: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("{what} {p:?}: {e}"))
        };
        Ok(SampleRange {
            lo: num(parts[0], "LO")?,
            hi: num(parts[1], "HI")?,
            count: parts[2]
                .trim()
                .parse()
                .map_err(|e| format!("N {:?}: {e}", parts[2]))?,
        })
    }
}

fn default_tasks() -> Vec<Task> {
    vec![Task::Classify]
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_k_max() -> u32 {
    DEFAULT_K_MAX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<Task>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    /// Clustering tolerance for numerically found roots.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_tol: Option<f64>,
    pub input: Input,
    /// Rows of `Θ`; the curve uses the basis `Θ φ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleRange>,
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec {
            name: None,
            note: None,
            tasks: default_tasks(),
            tol: DEFAULT_TOL,
            k_max: DEFAULT_K_MAX,
            cluster_tol: None,
            input: Input::default(),
            theta: None,
            metric: None,
            sample: None,
        }
    }
}

/// Why a job could not run. The two kinds map to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("invalid job: {0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Validation(_) => 2,
            JobError::Solver(_) => 4,
        }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        match e {
            Error::SolverFailure { .. } | Error::AmbiguousCluster(_) => {
                JobError::Solver(e.to_string())
            }
            _ => JobError::Validation(e.to_string()),
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> JobError {
    JobError::Validation(format!("{field}: {msg}"))
}

/// Everything a job resolves to before any task runs.
pub struct Prepared {
    pub spec: RootSpec,
    pub numeric_roots: bool,
    pub theta: Option<DMatrix<f64>>,
    pub basis: SolutionBasis,
    pub metric: Metric,
}

impl JobSpec {
    pub fn from_toml(text: &str) -> Result<Self, JobError> {
        let job: JobSpec = toml::from_str(text).map_err(|e| JobError::Validation(e.to_string()))?;
        job.validate()?;
        Ok(job)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("job specs always serialize")
    }

    /// Field-level checks that do not need the roots.
    pub fn validate(&self) -> Result<(), JobError> {
        match (&self.input.coeffs, &self.input.roots) {
            (Some(_), Some(_)) => return Err(invalid("input", "give either coeffs or roots, not both")),
            (None, None) => return Err(invalid("input", "one of coeffs or roots is required")),
            _ => {}
        }
        if self.tasks.is_empty() {
            return Err(invalid("tasks", "at least one task is required"));
        }
        if !(1e-12..=1e-2).contains(&self.tol) {
            return Err(invalid("tol", format!("{} outside [1e-12, 1e-2]", self.tol)));
        }
        if self.k_max < 3 || self.k_max > crate::quad::MAX_K_MAX {
            return Err(invalid("k_max", format!("{} outside [3, 40]", self.k_max)));
        }
        if let Some(t) = self.cluster_tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(invalid("cluster_tol", format!("{t} outside (0, 1)")));
            }
        }
        if self.tasks.contains(&Task::Sample) {
            let s = self
                .sample
                .ok_or_else(|| invalid("sample", "task `sample` needs a [sample] table"))?;
            if !(s.lo.is_finite() && s.hi.is_finite() && s.lo <= s.hi) {
                return Err(invalid("sample", format!("bad range {}..{}", s.lo, s.hi)));
            }
            if s.count == 0 || s.count > 10_000_000 {
                return Err(invalid("sample.count", format!("{} outside [1, 1e7]", s.count)));
            }
        }
        Ok(())
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol.unwrap_or(DEFAULT_CLUSTER_TOL)
    }

    /// Resolve roots, basis and metric, checking dimensions against the order.
    pub fn prepare(&self) -> Result<Prepared, JobError> {
        self.validate()?;
        let (spec, numeric_roots) = match (&self.input.coeffs, &self.input.roots) {
            (Some(c), _) => {
                let p = Polynomial::new(c.clone()).map_err(|e| invalid("input.coeffs", e))?;
                (roots_of(&p, self.cluster_tol())?, true)
            }
            (_, Some(r)) => {
                let real = r
                    .real
                    .iter()
                    .map(|&(value, multiplicity)| RealRoot {
                        value,
                        multiplicity,
                    })
                    .collect();
                let complex = r
                    .complex
                    .iter()
                    .map(|&(re, im, multiplicity)| ComplexPair {
                        re,
                        im,
                        multiplicity,
                    })
                    .collect();
                (
                    RootSpec::new(real, complex).map_err(|e| invalid("input.roots", e))?,
                    false,
                )
            }
            (None, None) => unreachable!("validated"),
        };
        let n = spec.order();
        let square = |field: &str, rows: &Vec<Vec<f64>>| -> Result<DMatrix<f64>, JobError> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
                return Err(invalid(
                    field,
                    format!("expected a {n}x{n} matrix for order {n}, got row lengths {shape:?}"),
                ));
            }
            from_rows(rows).ok_or_else(|| invalid(field, "ragged matrix"))
        };
        let theta = self.theta.as_ref().map(|t| square("theta", t)).transpose()?;
        let base = standard_basis(&spec);
        let basis = match &theta {
            Some(t) => apply_theta(&base, t).map_err(|e| invalid("theta", e))?,
            None => base,
        };
        let metric = match &self.metric {
            Some(m) => Metric::gram(square("metric.gram", &m.gram)?)
                .map_err(|e| invalid("metric.gram", e))?,
            None => Metric::Euclidean,
        };
        Ok(Prepared {
            spec,
            numeric_roots,
            theta,
            basis,
            metric,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootTable {
    pub source: String,
    pub real: Vec<RealRoot>,
    pub complex: Vec<ComplexPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericProperness {
    pub x_max: f64,
    pub witnessed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    pub side: Side,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properness: Option<Properness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_properness: Option<NumericProperness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub job: JobSpec,
    pub order: usize,
    pub roots: RootTable,
    pub r_plus: f64,
    pub r_minus: f64,
    /// `(positive, negative)` eigenvalue counts of the Gram matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_signature: Option<(usize, usize)>,
    pub sides: Vec<SideReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_curvature: Option<f64>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, JobError> {
        serde_json::from_str(text).map_err(|e| JobError::Validation(e.to_string()))
    }

    pub fn side(&self, side: Side) -> &SideReport {
        self.sides
            .iter()
            .find(|s| s.side == side)
            .expect("both sides are always reported")
    }

    /// Some requested integration ended INCONCLUSIVE.
    pub fn inconclusive(&self) -> bool {
        self.sides.iter().any(|s| {
            s.quadrature
                .as_ref()
                .is_some_and(|q| q.status == QuadStatus::Inconclusive)
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.inconclusive() {
            3
        } else {
            0
        }
    }
}

/// A finished job: the report plus the CSV track when sampling was asked.
pub struct Outcome {
    pub report: Report,
    pub samples: Option<String>,
}

fn side_report(job: &JobSpec, p: &Prepared, side: Side) -> Result<SideReport, JobError> {
    let wants = |t: Task| job.tasks.contains(&t);
    let euclidean = p.metric.is_euclidean();
    let identity = DMatrix::identity(p.spec.order(), p.spec.order());
    let theta = p.theta.as_ref().unwrap_or(&identity);
    let verdict = if wants(Task::Classify) || wants(Task::Integrate) {
        Some(classify_with_basis(&p.spec, theta, side)?)
    } else {
        None
    };
    let properness = (wants(Task::Classify) || wants(Task::Properness))
        .then(|| classify_properness(&p.spec, side));
    let numeric_properness = if wants(Task::Properness) {
        Some(NumericProperness {
            x_max: PROPERNESS_X_MAX,
            witnessed: verify_properness(&p.basis, side, PROPERNESS_X_MAX)?,
        })
    } else {
        None
    };
    let quadrature = if wants(Task::Integrate) {
        let cfg = QuadConfig::default()
            .with_tol(job.tol)
            .with_k_max(job.k_max);
        // Verdicts are statements about the Euclidean metric only.
        let gate = if euclidean { verdict.as_ref() } else { None };
        Some(integrate_half_line_with(&p.basis, &p.metric, side, &cfg, gate)?)
    } else {
        None
    };
    Ok(SideReport {
        side,
        properness,
        numeric_properness,
        verdict: if wants(Task::Classify) { verdict } else { None },
        quadrature,
    })
}

fn warnings(job: &JobSpec, p: &Prepared, sides: &[SideReport]) -> Vec<String> {
    let mut w = Vec::new();
    if !p.metric.is_euclidean() && job.tasks.contains(&Task::Classify) {
        w.push("verdicts refer to the Euclidean metric; the Gram metric is checked numerically only".into());
    }
    for s in sides {
        let label = s.side.label();
        if let Some(v) = &s.verdict {
            if v.tolerance_resolved {
                w.push(format!(
                    "{label}: verdict relies on equalities resolved within cluster_tol {}",
                    job.cluster_tol()
                ));
            }
            if v.kappa_finite == Finiteness::NotDecided {
                w.push(format!("{label}: curvature finiteness not decided from the roots"));
            }
        }
        if let Some(q) = &s.quadrature {
            match q.status {
                QuadStatus::Inconclusive => w.push(format!(
                    "{label}: quadrature INCONCLUSIVE at k_max {}",
                    q.k_max
                )),
                QuadStatus::Divergent if q.numeric_only => w.push(format!(
                    "{label}: divergence called numerically, without an exact verdict"
                )),
                _ => {}
            }
            for (a, b) in &q.null_windows {
                w.push(format!("{label}: null-speed window [{a:.17e}, {b:.17e}] excluded"));
            }
            if q.null_hits > 0 {
                w.push(format!(
                    "{label}: {} integrand samples hit a null tangent and were taken as 0",
                    q.null_hits
                ));
            }
        }
        if let (Some(pr), Some(np)) = (&s.properness, &s.numeric_properness) {
            if pr.proper != np.witnessed {
                w.push(format!(
                    "{label}: numeric properness witness ({}) differs from the root-based call ({})",
                    np.witnessed, pr.proper
                ));
            }
        }
    }
    w
}

/// Run every task of a job. Both half-lines run concurrently.
pub fn run_job(job: &JobSpec) -> Result<Outcome, JobError> {
    let p = job.prepare()?;
    let (plus, minus) = rayon::join(
        || side_report(job, &p, Side::Plus),
        || side_report(job, &p, Side::Minus),
    );
    let sides = vec![plus?, minus?];
    let (r_plus, r_minus) = spectral_extremes(&p.spec);
    let total_curvature = match (&sides[0].quadrature, &sides[1].quadrature) {
        (Some(a), Some(b)) => a.value.zip(b.value).map(|(x, y)| x + y),
        _ => None,
    };
    let warnings = warnings(job, &p, &sides);
    let report = Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        job: job.clone(),
        order: p.spec.order(),
        roots: RootTable {
            source: if p.numeric_roots { "numeric" } else { "exact" }.into(),
            real: p.spec.real_roots().to_vec(),
            complex: p.spec.complex_pairs().to_vec(),
            resolution_tol: p.spec.resolution_tol(),
        },
        r_plus,
        r_minus,
        metric_signature: p.metric.signature(),
        sides,
        total_curvature,
        warnings,
    };
    let samples = if job.tasks.contains(&Task::Sample) {
        Some(sample_csv(&p.basis, &p.metric, job.sample.expect("validated"))?)
    } else {
        None
    };
    Ok(Outcome { report, samples })
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV track `x, sigma_1..sigma_n, speed, kappa, integrand`. Curvature
/// columns are left empty where the tangent is null.
pub fn sample_csv(basis: &SolutionBasis, m: &Metric, range: SampleRange) -> Result<String, JobError> {
    let n = basis.dim();
    let integrand = Integrand::new(basis, m)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["x".to_string()];
    header.extend((1..=n).map(|i| format!("sigma_{i}")));
    header.extend(["speed", "kappa", "integrand"].map(String::from));
    let csv_err = |e: csv::Error| JobError::Solver(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..range.count {
        let x = if range.count == 1 {
            range.lo
        } else {
            range.lo + (range.hi - range.lo) * i as f64 / (range.count - 1) as f64
        };
        let jet = jet_at(basis, x);
        let scale = jet.log_scale.exp();
        let mut row = vec![fmt(x)];
        row.extend(jet.position.iter().map(|v| fmt(v * scale)));
        let (speed_sq, _) = integrand.forms(x);
        row.push(fmt(speed_sq.value.abs().sqrt_abs().to_f64()));
        match (integrand.kappa_scaled(x), integrand.scaled(x)) {
            (Ok(k), Ok(f)) => {
                row.push(fmt(k.to_f64()));
                row.push(fmt(f.to_f64()));
            }
            _ => {
                row.push(String::new());
                row.push(String::new());
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| JobError::Solver(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// A short human summary of a report, one line per side.
pub fn summary(r: &Report) -> String {
    let mut s = String::new();
    let name = r.job.name.as_deref().unwrap_or("job");
    let _ = writeln!(s, "{name}: order {}, r+ = {}, r- = {}", r.order, r.r_plus, r.r_minus);
    for side in &r.sides {
        let _ = write!(s, "  {}:", side.side.label());
        if let Some(v) = &side.verdict {
            let _ = write!(s, " kappa {:?} ({:?})", v.kappa_finite, v.deciding_rule);
        }
        if let Some(q) = &side.quadrature {
            let _ = write!(s, " quadrature {:?}", q.status);
            if let Some(v) = q.value {
                let _ = write!(s, " = {v:.12} ± {:.1e}", q.abs_err_estimate);
            }
        }
        if let Some(p) = &side.properness {
            let _ = write!(s, " proper {} ({:?})", p.proper, p.reason);
        }
        s.push('\n');
    }
    for w in &r.warnings {
        let _ = writeln!(s, "  warning: {w}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    const COSH: &str = r#"
name = "cosh"
tasks = ["classify", "integrate"]
[input.roots]
real = [[1, 1], [-1, 1]]
"#;

    #[test]
    fn cosh_job_is_pi_over_four_each_side() {
        let job = JobSpec::from_toml(COSH).unwrap();
        let out = run_job(&job).unwrap();
        for side in Side::BOTH {
            let s = out.report.side(side);
            assert_eq!(s.verdict.as_ref().unwrap().kappa_finite, Finiteness::Finite);
            let q = s.quadrature.as_ref().unwrap();
            assert_eq!(q.status, QuadStatus::Converged);
            assert!((q.value.unwrap() - FRAC_PI_4).abs() < 1e-8);
        }
        assert_eq!(out.report.exit_code(), 0);
    }

    #[test]
    fn unity_coeffs_job() {
        let job = JobSpec::from_toml("input.coeffs = [-1, 0, 0, 0, 0]\n").unwrap();
        let r = run_job(&job).unwrap().report;
        assert_eq!(r.side(Side::Plus).verdict.as_ref().unwrap().kappa_finite, Finiteness::Finite);
        assert_eq!(r.side(Side::Minus).verdict.as_ref().unwrap().kappa_finite, Finiteness::Infinite);
        assert_eq!(r.roots.source, "numeric");
    }

    #[test]
    fn straight_line_integrates_to_zero() {
        let job = JobSpec::from_toml(
            "tasks = [\"classify\", \"integrate\"]\n[input.roots]\nreal = [[0, 2]]\n",
        )
        .unwrap();
        let r = run_job(&job).unwrap().report;
        for side in Side::BOTH {
            let s = r.side(side);
            assert_eq!(s.verdict.as_ref().unwrap().kappa_finite, Finiteness::NotDecided);
            let q = s.quadrature.as_ref().unwrap();
            assert_eq!(q.status, QuadStatus::Converged);
            assert_eq!(q.value, Some(0.0));
        }
    }

    #[test]
    fn validation_errors() {
        let cases = [
            ("input.coeffs = [1]\n[input.roots]\nreal = [[1, 1]]\n", "both"),
            ("tasks = []\ninput.coeffs = [1, 2]\n", "tasks"),
            ("tol = 1.0\ninput.coeffs = [1, 2]\n", "tol"),
            ("input.coeffs = [1, 2]\nbogus = 3\n", "bogus"),
            ("input.coeffs = [1, 2]\ntheta = [[1, 0]]\n", "theta"),
            ("input.coeffs = [1, 2]\nmetric.gram = [[1, 2], [3, 4]]\n", "metric.gram"),
            ("tasks = [\"sample\"]\ninput.coeffs = [1, 2]\n", "sample"),
            ("tasks = [\"fly\"]\ninput.coeffs = [1, 2]\n", "fly"),
        ];
        for (text, needle) in cases {
            let err = JobSpec::from_toml(text).and_then(|j| j.prepare().map(|_| ()));
            let err = err.err().unwrap_or_else(|| panic!("accepted {text:?}"));
            assert_eq!(err.exit_code(), 2);
            assert!(err.to_string().contains(needle), "{err} lacks {needle}");
        }
    }

    #[test]
    fn toml_roundtrip() {
        for job in crate::presets::builtin_examples() {
            let again = JobSpec::from_toml(&job.to_toml()).unwrap();
            assert_eq!(again, job);
        }
    }

    #[test]
    fn sample_range_parse() {
        let r: SampleRange = "-1.5:2:11".parse().unwrap();
        assert_eq!((r.lo, r.hi, r.count), (-1.5, 2.0, 11));
        assert!("1:2".parse::<SampleRange>().is_err());
        assert!("a:2:3".parse::<SampleRange>().is_err());
    }

    #[test]
    fn csv_marks_null_rows() {
        let spec = RootSpec::simple(&[1.0, -1.0], &[]).unwrap();
        let g = Metric::gram_2x2(2.0, 1.0, 0.0).unwrap();
        let csv = sample_csv(
            &standard_basis(&spec),
            &g,
            SampleRange {
                lo: -1.0,
                hi: 1.0,
                count: 3,
            },
        )
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,sigma_1,sigma_2,speed,kappa,integrand");
        assert!(lines[2].ends_with(",,"), "{}", lines[2]);
        assert!(!lines[1].ends_with(",,"));
    }
}
