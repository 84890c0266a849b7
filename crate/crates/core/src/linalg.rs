//! Small dense helpers on top of nalgebra.

use nalgebra::DMatrix;

/// Index pairs `(i, j)`, `i < j`, in lexicographic order. This is the
/// coordinate order used for bivectors throughout the crate.
pub fn pair_indices(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

/// Second compound matrix: the action of `a` on bivectors,
/// `(a u) ∧ (a v) = C2(a) (u ∧ v)`, and for a symmetric form the induced
/// form on bivectors.
pub fn second_compound(a: &DMatrix<f64>) -> DMatrix<f64> {
    let pairs = pair_indices(a.nrows());
    let m = pairs.len();
    DMatrix::from_fn(m, m, |r, c| {
        let (i, j) = pairs[r];
        let (k, l) = pairs[c];
        a[(i, k)] * a[(j, l)] - a[(i, l)] * a[(j, k)]
    })
}

/// `|det a| > 1e-12 * ∏ ||row_i||`.
pub fn is_invertible(a: &DMatrix<f64>) -> bool {
    let scale: f64 = a.row_iter().map(|r| r.norm()).product();
    scale > 0.0 && a.determinant().abs() > 1e-12 * scale
}

pub fn from_rows(rows: &[Vec<f64>]) -> Option<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return None;
    }
    Some(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

pub fn to_rows(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    a.row_iter().map(|r| r.iter().copied().collect()).collect()
}
