use std::f64::consts::{FRAC_PI_4, PI};

use odecurve::curve::Integrand;
use odecurve::quad::{
    integrate_half_line, integrate_half_line_with, integrate_interval, verify_properness,
    windowed_growth_profile, QuadConfig,
};
use odecurve::{
    classify_kappa, standard_basis, Finiteness, Metric, QuadStatus, RealRoot, RootSpec, Side,
    SolutionBasis,
};

fn cosh() -> SolutionBasis {
    standard_basis(&RootSpec::simple(&[1.0, -1.0], &[]).unwrap())
}

fn spiral() -> SolutionBasis {
    standard_basis(&RootSpec::simple(&[], &[(1.0, 1.0)]).unwrap())
}

fn powers(n: u32) -> SolutionBasis {
    standard_basis(
        &RootSpec::new(
            vec![RealRoot {
                value: 0.0,
                multiplicity: n,
            }],
            vec![],
        )
        .unwrap(),
    )
}

#[test]
fn sech_tail_converges_to_pi_over_four() {
    for side in Side::BOTH {
        let r = integrate_half_line(&cosh(), &Metric::Euclidean, side, 1e-8).unwrap();
        assert_eq!(r.status, QuadStatus::Converged);
        assert!((r.value.unwrap() - FRAC_PI_4).abs() <= 1e-8);
        let last = &r.tail_windows[r.tail_windows.len() - 3..];
        assert!(last.iter().all(|w| w.integral.abs() < 1e-9));
        assert!(r.abs_err_estimate <= 1e-8);
    }
}

#[test]
fn parabola_turns_through_pi() {
    let b = powers(3);
    let cfg = QuadConfig::default().with_k_max(40);
    let total: f64 = Side::BOTH
        .iter()
        .map(|&s| {
            let r = integrate_half_line_with(&b, &Metric::Euclidean, s, &cfg, None).unwrap();
            assert_eq!(r.status, QuadStatus::Converged);
            r.value.unwrap()
        })
        .sum();
    assert!((total - PI).abs() <= 1e-6, "{total}");
}

#[test]
fn spiral_diverges_with_and_without_verdict() {
    let spec = RootSpec::simple(&[], &[(1.0, 1.0)]).unwrap();
    let v = classify_kappa(&spec, Side::Plus);
    assert_eq!(v.kappa_finite, Finiteness::Infinite);
    let cfg = QuadConfig::default();
    let backed =
        integrate_half_line_with(&spiral(), &Metric::Euclidean, Side::Plus, &cfg, Some(&v)).unwrap();
    assert_eq!(backed.status, QuadStatus::Divergent);
    assert!(!backed.numeric_only);
    let bare = integrate_half_line(&spiral(), &Metric::Euclidean, Side::Plus, 1e-8).unwrap();
    assert_eq!(bare.status, QuadStatus::Divergent);
    assert!(bare.numeric_only);
    let last = &bare.tail_windows[bare.tail_windows.len() - 3..];
    assert!(last.iter().all(|w| w.integral >= bare.divergence_floor));
}

#[test]
fn finite_verdict_blocks_a_divergence_call() {
    // A verdict claiming finiteness keeps a growing profile from being
    // called divergent; the honest outcome is INCONCLUSIVE.
    let finite = classify_kappa(&RootSpec::simple(&[1.0, -1.0], &[]).unwrap(), Side::Plus);
    let cfg = QuadConfig::default().with_k_max(8);
    let r = integrate_half_line_with(&spiral(), &Metric::Euclidean, Side::Plus, &cfg, Some(&finite))
        .unwrap();
    assert_eq!(r.status, QuadStatus::Inconclusive);
    assert!(r.value.is_none());
}

#[test]
fn halving_the_tolerance_is_stable() {
    let coarse = integrate_half_line(&cosh(), &Metric::Euclidean, Side::Plus, 1e-6).unwrap();
    let fine = integrate_half_line(&cosh(), &Metric::Euclidean, Side::Plus, 1e-8).unwrap();
    let (a, b) = (coarse.value.unwrap(), fine.value.unwrap());
    assert!((a - b).abs() < 1e-6);
    assert!((b - FRAC_PI_4).abs() <= 1e-8);
}

#[test]
fn interval_additivity() {
    for basis in [cosh(), spiral(), powers(3)] {
        let m = Metric::Euclidean;
        let (whole, _) = integrate_interval(&basis, &m, 0.0, 4.0, 1e-13).unwrap();
        let (a, _) = integrate_interval(&basis, &m, 0.0, 2.0, 1e-13).unwrap();
        let (b, _) = integrate_interval(&basis, &m, 2.0, 4.0, 1e-13).unwrap();
        assert!((whole - (a + b)).abs() <= 1e-12 * whole.abs(), "{whole} vs {}", a + b);
    }
}

#[test]
fn divergent_windows_stay_above_the_uniform_bound() {
    let b = spiral();
    let m = Metric::Euclidean;
    let f = Integrand::new(&b, &m).unwrap();
    for w in windowed_growth_profile(&b, &m, Side::Plus, 12).unwrap().iter().skip(1) {
        let min = (0..=256)
            .map(|i| f.eval(w.lo + (w.hi - w.lo) * i as f64 / 256.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(w.integral >= 0.9 * min * (w.hi - w.lo));
    }
}

#[test]
fn growth_profiles() {
    let m = Metric::Euclidean;
    let decay = windowed_growth_profile(&cosh(), &m, Side::Plus, 5).unwrap();
    assert!(decay[4].integral / decay[3].integral < 1e-3);
    let line = windowed_growth_profile(&powers(2), &m, Side::Minus, 20).unwrap();
    assert!(line.iter().all(|w| w.integral == 0.0));
    assert!(windowed_growth_profile(&cosh(), &m, Side::Plus, 41).is_err());
}

#[test]
fn properness_witness() {
    assert!(verify_properness(&cosh(), Side::Plus, 64.0).unwrap());
    let circle = standard_basis(&RootSpec::simple(&[], &[(0.0, 1.0)]).unwrap());
    assert!(!verify_properness(&circle, Side::Plus, 64.0).unwrap());
    assert!(verify_properness(&powers(4), Side::Plus, 2f64.powi(24)).unwrap());
}

#[test]
fn results_are_reproducible() {
    let a = integrate_half_line(&spiral(), &Metric::Euclidean, Side::Minus, 1e-8).unwrap();
    let b = integrate_half_line(&spiral(), &Metric::Euclidean, Side::Minus, 1e-8).unwrap();
    assert_eq!(a, b);
    let a = windowed_growth_profile(&cosh(), &Metric::Euclidean, Side::Minus, 10).unwrap();
    let b = windowed_growth_profile(&cosh(), &Metric::Euclidean, Side::Minus, 10).unwrap();
    assert_eq!(a, b);
}

#[test]
fn null_speed_is_excluded_and_reported() {
    // ⟨σ̇,σ̇⟩ = αe^{2x} - 2β for G = [[α, β], [β, 0]] vanishes at
    // x = ln(2β/α)/2, here x = 3.
    let beta = 1.0;
    let alpha = 2.0 * beta * (-6.0f64).exp();
    let m = Metric::gram_2x2(alpha, beta, 0.0).unwrap();
    let r = integrate_half_line(&cosh(), &m, Side::Plus, 1e-6).unwrap();
    assert_eq!(r.null_windows.len(), 1);
    let (lo, hi) = r.null_windows[0];
    assert!(lo < 3.0 && 3.0 < hi);
}
