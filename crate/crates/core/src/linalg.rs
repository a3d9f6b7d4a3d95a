//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Matrix = DMatrix<Scalar>;

/// Width of the indeterminacy band around a rank threshold.
pub const GUARD_FACTOR: f64 = 10.0;

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `rank_tol * scale`.
///
/// A singular value within a factor [`GUARD_FACTOR`] of the threshold makes
/// the count indeterminate.
pub fn numerical_rank(m: &Matrix, scale: f64, rank_tol: f64) -> Result<usize> {
    let threshold = rank_tol * scale;
    let mut rank = 0;
    for sigma in singular_values(m) {
        if sigma > threshold * GUARD_FACTOR {
            rank += 1;
        } else if sigma > threshold / GUARD_FACTOR {
            return Err(Error::RankIndeterminate { sigma, threshold });
        }
    }
    Ok(rank)
}

pub fn eigenvalues(m: &Matrix) -> Result<Vec<Scalar>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let schur = m.clone().try_schur(1e-15, 10_000).ok_or(Error::EigenFailure)?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

pub fn determinant(m: &Matrix) -> Scalar {
    m.clone().determinant()
}

/// Largest distance between greedily matched elements of two multisets.
///
/// Pairs are taken in order of increasing distance; `None` when the sizes
/// differ.
pub fn match_multisets(a: &[Scalar], b: &[Scalar]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst = 0.0f64;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn rank_and_guard_band() {
        let m = Matrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(numerical_rank(&m, 5.0, 1e-9).unwrap(), 1);
        let mut n = Matrix::from_diagonal_element(2, 2, c(1.0, 0.0));
        n[(1, 1)] = c(2e-9, 0.0);
        assert!(matches!(numerical_rank(&n, 1.0, 1e-9), Err(Error::RankIndeterminate { .. })));
        assert_eq!(numerical_rank(&Matrix::zeros(1, 1), 1.0, 1e-9).unwrap(), 0);
    }

    #[test]
    fn complex_eigenvalues() {
        let m = Matrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let ev = eigenvalues(&m).unwrap();
        assert!(match_multisets(&ev, &[c(0.0, 1.0), c(0.0, -1.0)]).unwrap() < 1e-12);
        let u = Matrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(3.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)]);
        let ev = eigenvalues(&u).unwrap();
        assert!(match_multisets(&ev, &[c(2.0, -1.0), c(1.0, 1.0)]).unwrap() < 1e-12);
    }

    #[test]
    fn greedy_matching() {
        assert_eq!(match_multisets(&[c(1.0, 0.0)], &[]), None);
        let d = match_multisets(&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.1, 0.0), c(0.05, 0.0)]).unwrap();
        assert!((d - 0.1).abs() < 1e-12);
        assert!((spectral_norm(&identity(3)) - 1.0).abs() < 1e-14);
    }
}
