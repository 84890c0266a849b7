//! Characteristic polynomials, their roots, and the root multiset.
//!
//! Roots are found with simultaneous (Aberth–Ehrlich) iteration and then
//! clustered into a [`RootSpec`]: real roots and conjugate pairs, each with a
//! multiplicity. Clustering is only as good as the tolerance it is given, so
//! every entry point that classifies curves also accepts a `RootSpec`
//! directly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 500;

/// Monic real polynomial `λ^n + c_{n-1} λ^{n-1} + ... + c_0`.
///
/// Only the non-leading coefficients are stored, lowest degree first, so the
/// degree is `coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidPolynomial(format!(
                "degree must be at least 2, got {}",
                coeffs.len()
            )));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient c_{i} is not finite"
            )));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_0 .. c_{n-1}`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative, plus a running bound on the rounding error
    /// of the value.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut bound = 1.0;
        let az = z.norm();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            bound = bound * az + c.abs();
        }
        (p, dp, bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: u32,
}

/// The conjugate pair `re ± i im`, `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
}

impl ComplexPair {
    pub fn root(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Multiset of roots of a real characteristic polynomial.
///
/// Real roots are kept strictly decreasing; complex pairs non-increasing in
/// the real part (ties broken by increasing imaginary part).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSpec {
    real: Vec<RealRoot>,
    complex: Vec<ComplexPair>,
    /// Set when the roots came out of [`roots_of`]; comparisons between real
    /// parts are then only meaningful up to this tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    resolution_tol: Option<f64>,
}

impl RootSpec {
    pub fn new(mut real: Vec<RealRoot>, mut complex: Vec<ComplexPair>) -> Result<Self> {
        for r in &real {
            if !r.value.is_finite() {
                return Err(Error::InvalidRootSpec("real root is not finite".into()));
            }
            if r.multiplicity == 0 {
                return Err(Error::InvalidRootSpec(format!(
                    "real root {} has multiplicity 0",
                    r.value
                )));
            }
        }
        for c in &complex {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidRootSpec("complex root is not finite".into()));
            }
            if c.im <= 0.0 {
                return Err(Error::InvalidRootSpec(format!(
                    "complex pair {} ± {}i needs a positive imaginary part",
                    c.re, c.im
                )));
            }
            if c.multiplicity == 0 {
                return Err(Error::InvalidRootSpec(format!(
                    "complex pair {} ± {}i has multiplicity 0",
                    c.re, c.im
                )));
            }
        }
        real.sort_by(|a, b| b.value.total_cmp(&a.value));
        if let Some(w) = real.windows(2).find(|w| w[0].value == w[1].value) {
            return Err(Error::InvalidRootSpec(format!(
                "real root {} listed twice; use its multiplicity",
                w[0].value
            )));
        }
        complex.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
        if let Some(w) = complex
            .windows(2)
            .find(|w| w[0].re == w[1].re && w[0].im == w[1].im)
        {
            return Err(Error::InvalidRootSpec(format!(
                "complex pair {} ± {}i listed twice; use its multiplicity",
                w[0].re, w[0].im
            )));
        }
        let spec = RootSpec {
            real,
            complex,
            resolution_tol: None,
        };
        if spec.order() < 2 {
            return Err(Error::InvalidRootSpec(format!(
                "order must be at least 2, got {}",
                spec.order()
            )));
        }
        Ok(spec)
    }

    /// All roots simple, given as plain values.
    pub fn simple(real: &[f64], complex: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            real.iter()
                .map(|&value| RealRoot {
                    value,
                    multiplicity: 1,
                })
                .collect(),
            complex
                .iter()
                .map(|&(re, im)| ComplexPair {
                    re,
                    im,
                    multiplicity: 1,
                })
                .collect(),
        )
    }

    pub fn real_roots(&self) -> &[RealRoot] {
        &self.real
    }

    pub fn complex_pairs(&self) -> &[ComplexPair] {
        &self.complex
    }

    pub fn resolution_tol(&self) -> Option<f64> {
        self.resolution_tol
    }

    pub fn with_resolution_tol(mut self, tol: Option<f64>) -> Self {
        self.resolution_tol = tol;
        self
    }

    /// Order of the ODE, i.e. the number of roots counted with multiplicity.
    pub fn order(&self) -> usize {
        self.real.iter().map(|r| r.multiplicity as usize).sum::<usize>()
            + self
                .complex
                .iter()
                .map(|c| 2 * c.multiplicity as usize)
                .sum::<usize>()
    }

    pub fn is_simple(&self) -> bool {
        self.real.iter().all(|r| r.multiplicity == 1)
            && self.complex.iter().all(|c| c.multiplicity == 1)
    }

    /// Every root with multiplicity, conjugates included.
    pub fn all_roots(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.order());
        for r in &self.real {
            for _ in 0..r.multiplicity {
                out.push(Complex64::new(r.value, 0.0));
            }
        }
        for c in &self.complex {
            for _ in 0..c.multiplicity {
                out.push(c.root());
                out.push(c.root().conj());
            }
        }
        out
    }

    /// Replace every real part by its negative. Mirrors the curve through
    /// `x -> -x`.
    pub fn reflected(&self) -> Self {
        let real = self
            .real
            .iter()
            .map(|r| RealRoot {
                value: -r.value,
                multiplicity: r.multiplicity,
            })
            .collect();
        let complex = self
            .complex
            .iter()
            .map(|c| ComplexPair {
                re: -c.re,
                ..*c
            })
            .collect();
        Self::new(real, complex)
            .expect("reflection preserves validity")
            .with_resolution_tol(self.resolution_tol)
    }
}

/// Find and cluster the roots of `p`.
pub fn roots_of(p: &Polynomial, cluster_tol: f64) -> Result<RootSpec> {
    if cluster_tol.is_nan() || cluster_tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "cluster tolerance must be positive, got {cluster_tol}"
        )));
    }
    let raw = aberth(p)?;
    Ok(polish(p, cluster(&raw, cluster_tol)?))
}

/// Coefficients (ascending, including the leading 1) of the `k`-th
/// derivative of `p`.
fn derivative_coeffs(p: &Polynomial, k: u32) -> Vec<f64> {
    let full: Vec<f64> = p.coeffs().iter().copied().chain([1.0]).collect();
    (k as usize..full.len())
        .map(|j| {
            let falling: f64 = (0..k).map(|i| (j - i as usize) as f64).product();
            full[j] * falling
        })
        .collect()
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Refine each clustered root of multiplicity `m` by Newton steps on
/// `p^{(m-1)}`, where it is a simple root. A step that leaves the cluster
/// tolerance is discarded.
fn polish(p: &Polynomial, spec: RootSpec) -> RootSpec {
    let tol = spec.resolution_tol().unwrap_or(DEFAULT_CLUSTER_TOL);
    let refine = |z0: Complex64, m: u32| -> Complex64 {
        if m < 2 {
            return z0;
        }
        let f = derivative_coeffs(p, m - 1);
        let df = derivative_coeffs(p, m);
        let mut z = z0;
        for _ in 0..8 {
            let d = horner(&df, z);
            if d.norm() == 0.0 {
                break;
            }
            let step = horner(&f, z) / d;
            z -= step;
            if step.norm() <= f64::EPSILON * (1.0 + z.norm()) {
                break;
            }
        }
        if (z - z0).norm() < tol && z.re.is_finite() && z.im.is_finite() {
            z
        } else {
            z0
        }
    };
    let real = spec
        .real_roots()
        .iter()
        .map(|r| RealRoot {
            value: refine(Complex64::new(r.value, 0.0), r.multiplicity).re,
            multiplicity: r.multiplicity,
        })
        .collect();
    let complex = spec
        .complex_pairs()
        .iter()
        .map(|c| {
            let z = refine(c.root(), c.multiplicity);
            ComplexPair {
                re: z.re,
                im: z.im.abs(),
                multiplicity: c.multiplicity,
            }
        })
        .collect();
    match RootSpec::new(real, complex) {
        Ok(s) => s.with_resolution_tol(spec.resolution_tol()),
        Err(_) => spec,
    }
}

/// Simultaneous Aberth–Ehrlich iteration. Returns all `n` roots.
pub fn aberth(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let radius = 1.0 + p.max_abs_coeff();
    // The offset keeps the start set off the real axis and away from any
    // symmetric configuration of the roots.
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; n];

    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dp, bound) = p.eval_with_derivative(z[i]);
            // Value indistinguishable from rounding noise: nothing left to do.
            if pv.norm() <= 4.0 * n as f64 * f64::EPSILON * bound {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = dp - pv * repulsion;
            let step = if denom.norm() == 0.0 {
                // Nudge off a stationary point.
                Complex64::new(1e-8 * (1.0 + z[i].norm()), 1e-8)
            } else {
                pv / denom
            };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            if rel < 1e-13 {
                done[i] = true;
            }
            max_step = max_step.max(rel);
        }
        if done.iter().all(|&d| d) || max_step < 1e-13 {
            return Ok(z);
        }
    }
    let residuals = z.iter().map(|&r| p.eval(r).norm()).collect();
    Err(Error::SolverFailure {
        iterations: MAX_ITERATIONS,
        residuals,
    })
}

/// Snap, pair and merge raw roots into a `RootSpec`.
pub fn cluster(raw: &[Complex64], tol: f64) -> Result<RootSpec> {
    let mut reals: Vec<f64> = Vec::new();
    let mut upper: Vec<Complex64> = Vec::new();
    let mut lower: Vec<Complex64> = Vec::new();
    for &r in raw {
        if r.im.abs() < tol {
            reals.push(r.re);
        } else if r.im > 0.0 {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::AmbiguousCluster(format!(
            "{} roots above the real axis but {} below",
            upper.len(),
            lower.len()
        )));
    }

    // Pair each upper root with its nearest unused mirrored lower root.
    let mut used = vec![false; lower.len()];
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(upper.len());
    for u in &upper {
        let best = lower
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|(_, a), (_, b)| (a.conj() - u).norm().total_cmp(&(b.conj() - u).norm()))
            .map(|(j, _)| j)
            .expect("counts checked above");
        used[best] = true;
        let l = lower[best];
        pairs.push((0.5 * (u.re + l.re), 0.5 * (u.im - l.im)));
    }

    reals.sort_by(|a, b| b.total_cmp(a));
    let real_clusters = merge_chain(&reals, tol);
    let complex_clusters = merge_pairs(&pairs, tol);

    for r in &real_clusters {
        for c in &complex_clusters {
            if Complex64::new(r.value - c.re, -c.im).norm() <= tol {
                return Err(Error::AmbiguousCluster(format!(
                    "real root {} lies within {tol} of complex pair {} ± {}i",
                    r.value, c.re, c.im
                )));
            }
        }
    }
    Ok(RootSpec::new(real_clusters, complex_clusters)?.with_resolution_tol(Some(tol)))
}

/// Single-linkage clustering of sorted (decreasing) reals.
fn merge_chain(sorted: &[f64], tol: f64) -> Vec<RealRoot> {
    let mut out = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for &v in sorted {
        if let Some(&last) = group.last() {
            if (last - v).abs() > tol {
                out.push(centroid_real(&group));
                group.clear();
            }
        }
        group.push(v);
    }
    if !group.is_empty() {
        out.push(centroid_real(&group));
    }
    out
}

fn centroid_real(group: &[f64]) -> RealRoot {
    RealRoot {
        value: group.iter().sum::<f64>() / group.len() as f64,
        multiplicity: group.len() as u32,
    }
}

fn merge_pairs(pairs: &[(f64, f64)], tol: f64) -> Vec<ComplexPair> {
    // Union-find over the (small) set of pairs.
    let n = pairs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = Complex64::new(pairs[i].0 - pairs[j].0, pairs[i].1 - pairs[j].1).norm();
            if d <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut index: Vec<Option<usize>> = vec![None; n];
    for (i, &pair) in pairs.iter().enumerate() {
        let r = find(&mut parent, i);
        let slot = *index[r].get_or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(pair);
    }
    groups
        .into_iter()
        .map(|g| {
            let k = g.len() as f64;
            ComplexPair {
                re: g.iter().map(|p| p.0).sum::<f64>() / k,
                im: g.iter().map(|p| p.1).sum::<f64>() / k,
                multiplicity: g.len() as u32,
            }
        })
        .collect()
}

/// Expand `∏ (λ - root)` into a monic real polynomial.
pub fn from_roots(spec: &RootSpec) -> Polynomial {
    // Ascending coefficients including the leading one.
    let mut c = vec![1.0];
    let mul = |c: &mut Vec<f64>, factor: &[f64]| {
        let mut out = vec![0.0; c.len() + factor.len() - 1];
        for (i, a) in c.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        *c = out;
    };
    for r in spec.real_roots() {
        for _ in 0..r.multiplicity {
            mul(&mut c, &[-r.value, 1.0]);
        }
    }
    for p in spec.complex_pairs() {
        let quad = [p.re * p.re + p.im * p.im, -2.0 * p.re, 1.0];
        for _ in 0..p.multiplicity {
            mul(&mut c, &quad);
        }
    }
    c.pop();
    Polynomial { coeffs: c }
}

/// `(r_plus, r_minus)`: the largest and smallest real part over all roots.
pub fn spectral_extremes(spec: &RootSpec) -> (f64, f64) {
    spec.real_roots()
        .iter()
        .map(|r| r.value)
        .chain(spec.complex_pairs().iter().map(|c| c.re))
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), v| {
            (hi.max(v), lo.min(v))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn difference_of_squares() {
        let p = Polynomial::new(vec![-1.0, 0.0]).unwrap();
        let spec = roots_of(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert!(spec.complex_pairs().is_empty());
        let r = spec.real_roots();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - 1.0).abs() < 1e-14 && r[0].multiplicity == 1);
        assert!((r[1].value + 1.0).abs() < 1e-14 && r[1].multiplicity == 1);
    }

    #[test]
    fn roots_of_unity_are_simple() {
        for n in 2..=8 {
            let mut c = vec![0.0; n];
            c[0] = -1.0;
            let spec = roots_of(&Polynomial::new(c).unwrap(), DEFAULT_CLUSTER_TOL).unwrap();
            assert_eq!(spec.order(), n);
            assert!(spec.is_simple());
            for root in spec.all_roots() {
                let z = root.powu(n as u32);
                assert!((z - 1.0).norm() < 1e-12, "n={n} root={root}");
            }
            let real_count = if n % 2 == 0 { 2 } else { 1 };
            assert_eq!(spec.real_roots().len(), real_count);
        }
    }

    #[test]
    fn double_root_at_zero() {
        let p = Polynomial::new(vec![0.0, 0.0]).unwrap();
        let spec = roots_of(&p, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(spec.real_roots().len(), 1);
        assert_eq!(spec.real_roots()[0].multiplicity, 2);
        assert!(spec.real_roots()[0].value.abs() < 1e-12);
    }

    #[test]
    fn expansion_examples() {
        let spec = RootSpec::simple(&[1.0, -1.0], &[]).unwrap();
        assert_eq!(from_roots(&spec).coeffs(), &[-1.0, 0.0]);

        // (λ-(-1+i))(λ-(-1-i)) = λ² + 2λ + 2
        let spec = RootSpec::simple(&[], &[(-1.0, 1.0)]).unwrap();
        assert_eq!(from_roots(&spec).coeffs(), &[2.0, 2.0]);

        let spec = RootSpec::new(
            vec![RealRoot {
                value: 0.0,
                multiplicity: 3,
            }],
            vec![],
        )
        .unwrap();
        assert_eq!(from_roots(&spec).coeffs(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn extremes() {
        let n = 6;
        let real: Vec<f64> = (1..=n - 2).map(|k| k as f64).collect();
        let spec = RootSpec::simple(&real, &[(-1.0, 1.0)]).unwrap();
        assert_eq!(spectral_extremes(&spec), ((n - 2) as f64, -1.0));

        let spec = RootSpec::simple(&[1.0, -1.0], &[]).unwrap();
        assert_eq!(spectral_extremes(&spec), (1.0, -1.0));

        // 5th roots of unity, max/min real part by brute force over cos(2πk/5).
        let parts: Vec<f64> = (0..5).map(|k| (2.0 * PI * k as f64 / 5.0).cos()).collect();
        let hi = parts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = parts.iter().cloned().fold(f64::INFINITY, f64::min);
        let p = Polynomial::new(vec![-1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let (rp, rm) = spectral_extremes(&roots_of(&p, DEFAULT_CLUSTER_TOL).unwrap());
        assert!((rp - hi).abs() < 1e-12);
        assert!((rm - lo).abs() < 1e-12);
        assert!((lo - (4.0 * PI / 5.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Polynomial::new(vec![1.0]).is_err());
        assert!(Polynomial::new(vec![f64::NAN, 0.0]).is_err());
        assert!(RootSpec::simple(&[1.0], &[]).is_err());
        assert!(RootSpec::simple(&[1.0, 1.0], &[]).is_err());
        assert!(RootSpec::simple(&[], &[(0.0, -1.0)]).is_err());
        let p = Polynomial::new(vec![-1.0, 0.0]).unwrap();
        assert!(roots_of(&p, 0.0).is_err());
    }

    #[test]
    fn unpaired_root_is_ambiguous() {
        let raw = [Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(cluster(&raw, 1e-8), Err(Error::AmbiguousCluster(_))));
    }

    #[test]
    fn repeated_factor_clusters_with_loose_tolerance() {
        // (λ-1)²(λ²-2λ+2): double real root next to a pair with the same real part.
        let spec = RootSpec::new(
            vec![RealRoot {
                value: 1.0,
                multiplicity: 2,
            }],
            vec![ComplexPair {
                re: 1.0,
                im: 1.0,
                multiplicity: 1,
            }],
        )
        .unwrap();
        let p = from_roots(&spec);
        let found = roots_of(&p, 1e-5).unwrap();
        assert_eq!(found.real_roots().len(), 1);
        assert_eq!(found.real_roots()[0].multiplicity, 2);
        assert!((found.real_roots()[0].value - 1.0).abs() < 1e-10, "{:?}", found);
        assert_eq!(found.complex_pairs().len(), 1);
    }

    #[test]
    fn reflection_swaps_extremes() {
        let spec = RootSpec::simple(&[3.0, -0.5], &[(1.0, 2.0)]).unwrap();
        let (hi, lo) = spectral_extremes(&spec);
        let (rhi, rlo) = spectral_extremes(&spec.reflected());
        assert_eq!((rhi, rlo), (-lo, -hi));
    }
}
