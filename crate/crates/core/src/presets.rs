//! Built-in example jobs and the example root families they come from.

use std::f64::consts::TAU;

use crate::charpoly::{RealRoot, RootSpec};
use crate::error::{Error, Result};
use crate::job::{Input, JobSpec, MetricSpec, RootsInput, Task};

/// The small parameter used by the indefinite-metric presets.
pub const GRAM_EPSILON: f64 = 0.01;

/// Root set of example family `id` (1 to 6) at order `n`.
///
/// 1. roots of `λ^n - 1`
/// 2. `{1, ..., n-2, -1 ± i}`, `n ≥ 3`
/// 3. `{-1, ..., 2-n, 1 ± i}`, `n ≥ 3`
/// 4. `{1, ..., n-1, -1}`, `n ≥ 2`
/// 5. `{1 ± i, -1 ± i, ..., -(k-1) ± i}`, `n = 2k ≥ 4`
/// 6. `{0, 1 ± i, -1 ± i, ..., -(k-1) ± i}`, `n = 2k+1 ≥ 5`
pub fn example_family(id: u8, n: usize) -> Result<RootSpec> {
    let bad = |why: &str| Err(Error::InvalidArgument(format!("family {id}, n = {n}: {why}")));
    match id {
        1 => {
            if n < 2 {
                return bad("need n >= 2");
            }
            let mut real = vec![1.0];
            let mut complex = Vec::new();
            if n.is_multiple_of(2) {
                real.push(-1.0);
            }
            for k in 1..n.div_ceil(2) {
                let t = TAU * k as f64 / n as f64;
                complex.push((t.cos(), t.sin()));
            }
            RootSpec::simple(&real, &complex)
        }
        2 | 3 => {
            if n < 3 {
                return bad("need n >= 3");
            }
            let s = if id == 2 { 1.0 } else { -1.0 };
            let real: Vec<f64> = (1..=n - 2).map(|k| s * k as f64).collect();
            RootSpec::simple(&real, &[(-s, 1.0)])
        }
        4 => {
            if n < 2 {
                return bad("need n >= 2");
            }
            let mut real: Vec<f64> = (1..n).map(|k| k as f64).collect();
            real.push(-1.0);
            RootSpec::simple(&real, &[])
        }
        5 | 6 => {
            let odd = id == 6;
            if (odd && (n < 5 || n.is_multiple_of(2))) || (!odd && (n < 4 || !n.is_multiple_of(2))) {
                return bad(if odd { "need odd n >= 5" } else { "need even n >= 4" });
            }
            let k = n / 2;
            let mut complex = vec![(1.0, 1.0)];
            complex.extend((1..k).map(|j| (-(j as f64), 1.0)));
            let real: &[f64] = if odd { &[0.0] } else { &[] };
            RootSpec::simple(real, &complex)
        }
        _ => bad("unknown family"),
    }
}

fn roots_input(spec: &RootSpec) -> Input {
    Input {
        coeffs: None,
        roots: Some(RootsInput {
            real: spec
                .real_roots()
                .iter()
                .map(|r| (r.value, r.multiplicity))
                .collect(),
            complex: spec
                .complex_pairs()
                .iter()
                .map(|c| (c.re, c.im, c.multiplicity))
                .collect(),
        }),
    }
}

fn job(name: &str, note: Option<String>, input: Input, tasks: &[Task]) -> JobSpec {
    JobSpec {
        name: Some(name.to_string()),
        note,
        input,
        tasks: tasks.to_vec(),
        ..JobSpec::default()
    }
}

/// `λ^n - 1` as a coefficient list `c_0, ..., c_{n-1}`.
fn unity_coeffs(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    c[0] = -1.0;
    c
}

const EXACT: &[Task] = &[Task::Classify, Task::Integrate, Task::Properness];

/// Every built-in preset, in a fixed order.
pub fn builtin_examples() -> Vec<JobSpec> {
    let family = |id: u8, n: usize| roots_input(&example_family(id, n).expect("valid family"));
    let mut out = vec![
        job(
            "ex4.1-odd-n5",
            Some("characteristic polynomial λ^5 - 1".into()),
            Input::coeffs(unity_coeffs(5)),
            EXACT,
        ),
        job(
            "ex4.1-even-n4",
            Some("characteristic polynomial λ^4 - 1".into()),
            Input::coeffs(unity_coeffs(4)),
            EXACT,
        ),
        job("ex4.2-n4", None, family(2, 4), EXACT),
        job("ex4.3-n4", None, family(3, 4), EXACT),
        job("ex4.4-n4", None, family(4, 4), EXACT),
        job("ex4.5-n4", None, family(5, 4), EXACT),
        job("ex4.6-n5", None, family(6, 5), EXACT),
    ];
    for n in [2u32, 3] {
        let spec = RootSpec::new(
            vec![RealRoot {
                value: 0.0,
                multiplicity: n,
            }],
            vec![],
        )
        .expect("valid spec");
        let mut j = job(
            &format!("sec6-n{n}"),
            Some(format!("y^({n}) = 0, polynomial basis; slow algebraic tail needs k_max = 40")),
            roots_input(&spec),
            EXACT,
        );
        j.k_max = 40;
        out.push(j);
    }
    let e = GRAM_EPSILON;
    let triples = [(0.0, -1.0, 0.0), (e, -1.0, e), (e, -1.0, 0.0), (0.0, -1.0, e)];
    let cosh = roots_input(&RootSpec::simple(&[1.0, -1.0], &[]).expect("valid spec"));
    for (i, (a, b, g)) in triples.into_iter().enumerate() {
        let mut j = job(
            &format!("sec7-ex{}", i + 1),
            Some(format!(
                "basis [e^x, e^-x] under the Gram form (alpha, beta, gamma) = ({a}, {b}, {g}); epsilon = {e}"
            )),
            cosh.clone(),
            &[Task::Integrate],
        );
        j.metric = Some(MetricSpec {
            gram: vec![vec![a, b], vec![b, g]],
        });
        out.push(j);
    }
    let line = RootSpec::new(
        vec![RealRoot {
            value: 0.0,
            multiplicity: 2,
        }],
        vec![],
    )
    .expect("valid spec");
    let mut j = job(
        "ex-straight-line",
        Some("basis [1, x]".into()),
        roots_input(&line),
        &[Task::Classify, Task::Sample],
    );
    j.sample = Some(crate::job::SampleRange {
        lo: -10.0,
        hi: 10.0,
        count: 201,
    });
    out.push(j);
    out
}

pub fn preset(name: &str) -> Option<JobSpec> {
    builtin_examples()
        .into_iter()
        .find(|j| j.name.as_deref() == Some(name))
}

pub fn preset_names() -> Vec<String> {
    builtin_examples()
        .into_iter()
        .filter_map(|j| j.name)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_orders() {
        for (id, n) in [(1, 5), (1, 4), (2, 4), (3, 4), (4, 4), (5, 4), (6, 5), (5, 8), (6, 7)] {
            assert_eq!(example_family(id, n).unwrap().order(), n, "family {id}");
        }
        assert!(example_family(5, 5).is_err());
        assert!(example_family(6, 6).is_err());
        assert!(example_family(2, 2).is_err());
        assert!(example_family(7, 4).is_err());
    }

    #[test]
    fn presets_cover_the_suite() {
        let names = preset_names();
        assert!(names.len() >= 11);
        for n in ["ex4.5-n4", "sec7-ex2", "sec6-n2", "ex-straight-line"] {
            assert!(names.iter().any(|x| x == n), "{n}");
        }
        let p = preset("ex4.5-n4").unwrap();
        let r = p.input.roots.unwrap();
        assert!(r.real.is_empty());
        assert_eq!(r.complex, vec![(1.0, 1.0, 1), (-1.0, 1.0, 1)]);
        let g = preset("sec7-ex2").unwrap().metric.unwrap().gram;
        assert_eq!(g, vec![vec![0.01, -1.0], vec![-1.0, 0.01]]);
        let r = preset("sec6-n2").unwrap().input.roots.unwrap();
        assert_eq!(r.real, vec![(0.0, 2)]);
    }

    #[test]
    fn presets_validate() {
        for p in builtin_examples() {
            p.validate().unwrap();
        }
    }
}
