//! Sign canonicalization and tolerance-based vector matching.
//!
//! Root systems are sign-symmetric, so `{v, -v}` is represented by the copy
//! whose first coordinate with magnitude above `eps` is positive. Matching is
//! coordinatewise with absolute tolerance.

use nalgebra::{DMatrix, DVector};

/// Sign-canonical representative of `{v, -v}`.
pub(crate) fn sign_canonical(v: &DVector<f64>, eps: f64) -> DVector<f64> {
    for &x in v.iter() {
        if x.abs() > eps {
            return if x < 0.0 { -v } else { v.clone() };
        }
    }
    v.clone()
}

/// Every coordinate of `a - b` within `eps`.
pub(crate) fn coords_match(a: &DVector<f64>, b: &DVector<f64>, eps: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= eps)
}

/// First index in `set` matching `target` coordinatewise.
pub(crate) fn find_match(set: &[DVector<f64>], target: &DVector<f64>, eps: f64) -> Option<usize> {
    set.iter().position(|v| coords_match(v, target, eps))
}

/// First index matching `target` or `-target`.
pub(crate) fn find_match_up_to_sign(
    set: &[DVector<f64>],
    target: &DVector<f64>,
    eps: f64,
) -> Option<usize> {
    let negated = -target;
    set.iter()
        .position(|v| coords_match(v, target, eps) || coords_match(v, &negated, eps))
}

/// Integer grid key for hash-based dedup of canonical vectors.
pub(crate) fn grid_key(v: &DVector<f64>, grid: f64) -> Vec<i64> {
    v.iter().map(|&x| (x / grid).round() as i64).collect()
}

pub(crate) fn max_abs_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}
