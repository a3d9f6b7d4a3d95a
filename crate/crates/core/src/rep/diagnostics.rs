use nalgebra::DMatrix;

use crate::error::Result;
use crate::linalg::{eigenvalues, identity, numerical_rank, spectral_norm, Matrix};
use crate::roots::{RootVector, Sign};
use crate::scalar::{Params, Scalar, Tolerance};

use super::operators::quadratic_residual;
use super::Rep;

/// Normalized residuals of the five defining relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationResiduals {
    pub t0: f64,
    pub t1: f64,
    pub t0v: f64,
    pub t1v: f64,
    /// `T1v T1 T0 T0v - q^{-1/2}`.
    pub product: f64,
}

impl RelationResiduals {
    pub fn as_array(&self) -> [(&'static str, f64); 5] {
        [("T0", self.t0), ("T1", self.t1), ("T0v", self.t0v), ("T1v", self.t1v), ("product", self.product)]
    }

    pub fn worst(&self) -> (&'static str, f64) {
        self.as_array().into_iter().fold(("T0", 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    pub fn max(&self) -> f64 {
        self.worst().1
    }
}

pub fn verify_relations(r: &Rep, p: &Params) -> RelationResiduals {
    let prod = &r.t1v * &r.t1 * &r.t0 * &r.t0v;
    let id = identity(r.dim());
    let scale: f64 = r.generators().iter().map(|m| spectral_norm(m)).product();
    let product = spectral_norm(&(prod - id * p.q_half.inv())) / scale.max(f64::MIN_POSITIVE);
    RelationResiduals {
        t0: quadratic_residual(&r.t0, p.k0),
        t1: quadratic_residual(&r.t1, p.k1),
        t0v: quadratic_residual(&r.t0v, p.u0),
        t1v: quadratic_residual(&r.t1v, p.u1),
        product,
    }
}

/// `(dim V, rank(T0 - k0), rank(T1 - k1), rank(T0v - u0), rank(T1v - u1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimVector(pub [usize; 5]);

impl DimVector {
    pub fn as_root(&self) -> RootVector {
        RootVector(self.0.map(|x| x as u32))
    }
}

fn image_rank(m: &Matrix, t: Scalar, tol: &Tolerance) -> Result<usize> {
    let shifted = m - identity(m.nrows()) * t;
    numerical_rank(&shifted, spectral_norm(m) + t.norm(), tol.rank_tol())
}

pub fn dim_vector(r: &Rep, p: &Params) -> Result<DimVector> {
    Ok(DimVector([
        r.dim(),
        image_rank(&r.t0, p.k0, &p.tol)?,
        image_rank(&r.t1, p.k1, &p.tol)?,
        image_rank(&r.t0v, p.u0, &p.tol)?,
        image_rank(&r.t1v, p.u1, &p.tol)?,
    ]))
}

/// `dim Ker(T - t)` for `T0, T1, T0v, T1v`.
pub fn kernel_dims(r: &Rep, p: &Params) -> Result<[usize; 4]> {
    let d = dim_vector(r, p)?.0;
    Ok([d[0] - d[1], d[0] - d[2], d[0] - d[3], d[0] - d[4]])
}

/// Eigenvalues of `Z = q^{1/2} T0 T0v`.
pub fn spectrum_of_z(r: &Rep, p: &Params) -> Result<Vec<Scalar>> {
    eigenvalues(&((&r.t0 * &r.t0v) * p.q_half))
}

/// `rho_i = eps0 del0 k0^{±eps0} u0^{±del0} q^{1/2 + i}`, with the upper
/// signs for `i >= 0` and the lower ones for `i < 0`.
pub fn rho(i: i32, eps0: Sign, del0: Sign, p: &Params) -> Scalar {
    let sign = (eps0.value() * del0.value()) as f64;
    let (k, u) = if i >= 0 {
        (p.k0.powi(eps0.value()), p.u0.powi(del0.value()))
    } else {
        (p.k0.powi(-eps0.value()), p.u0.powi(-del0.value()))
    };
    k * u * sign * p.q_half.powi(1 + 2 * i)
}

/// `rho_{-n}, ..., rho_n`.
pub fn rho_spectrum(n: u32, eps0: Sign, del0: Sign, p: &Params) -> Vec<Scalar> {
    let n = n as i32;
    (-n..=n).map(|i| rho(i, eps0, del0, p)).collect()
}

/// Dimension of the space of matrices commuting with all four generators.
pub fn commutant_dim(r: &Rep, tol: &Tolerance) -> Result<usize> {
    let n = r.dim();
    let id = identity(n);
    let mut stacked: DMatrix<Scalar> = DMatrix::zeros(4 * n * n, n * n);
    for (b, t) in r.generators().into_iter().enumerate() {
        // vec(T X - X T) = (I ⊗ T - T^T ⊗ I) vec(X)
        let block = id.kronecker(t) - t.transpose().kronecker(&id);
        stacked.view_mut((b * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    let scale = spectral_norm(&stacked).max(f64::MIN_POSITIVE);
    let rank = numerical_rank(&stacked, scale, tol.rank_tol())?;
    Ok(n * n - rank)
}

/// Dimension count `2 (1 - n^2 + sum d_i (n - d_i))` of the moduli of
/// irreducibles with kernel dimensions `d`.
pub fn rigidity_d(n: u32, d: [u32; 4]) -> i64 {
    let n = n as i64;
    let s: i64 = d.iter().map(|&di| di as i64 * (n - di as i64)).sum();
    2 * (1 - n * n + s)
}

/// `2 d (n - d)`, the dimension of a conjugacy class with eigenvalue
/// multiplicities `d` and `n - d`.
pub fn conjugacy_class_dim(n: u32, d: u32) -> u64 {
    2 * d as u64 * (n - d) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn scalar_rep(vals: [f64; 4]) -> Rep {
        let m = |x: f64| Matrix::from_element(1, 1, r(x));
        Rep::from_matrices(m(vals[0]), m(vals[1]), m(vals[2]), m(vals[3])).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(rigidity_d(3, [2, 2, 2, 2]), 0);
        assert_eq!(rigidity_d(2, [1, 1, 1, 1]), 2);
        assert_eq!(rigidity_d(1, [0, 1, 0, 1]), 0);
        assert_eq!(conjugacy_class_dim(2, 1), 2);
        assert_eq!(conjugacy_class_dim(7, 7), 0);
        assert_eq!(conjugacy_class_dim(5, 2), 12);
    }

    #[test]
    fn scalar_rep_diagnostics() {
        let p = Params::new(r(2.0), r(3.0), r(5.0), r(1.0 / 60.0), r(2.0)).unwrap();
        let one = scalar_rep([2.0, 3.0, 5.0, 1.0 / 60.0]);
        assert!(verify_relations(&one, &p).max() < 1e-12);
        assert_eq!(dim_vector(&one, &p).unwrap(), DimVector([1, 0, 0, 0, 0]));
        assert_eq!(commutant_dim(&one, &p.tol).unwrap(), 1);
        let z = spectrum_of_z(&one, &p).unwrap();
        assert!((z[0] - rho(0, Sign::Plus, Sign::Plus, &p)).norm() < 1e-12);
        assert!((z[0] - r(20.0)).norm() < 1e-12);
    }

    #[test]
    fn direct_sum_commutant() {
        // k0 u0 = 1 admits two one-dimensional reps: flip both T0 and T0v
        let p = Params::new(r(2.0), r(3.0), r(0.5), r(1.0 / 6.0), r(2.0)).unwrap();
        let a = scalar_rep([2.0, 3.0, 0.5, 1.0 / 6.0]);
        let b = scalar_rep([-0.5, 3.0, -2.0, 1.0 / 6.0]);
        assert!(verify_relations(&a, &p).max() < 1e-12);
        assert!(verify_relations(&b, &p).max() < 1e-12);
        let sum = a.direct_sum(&b);
        assert!(verify_relations(&sum, &p).max() < 1e-12);
        assert_eq!(commutant_dim(&sum, &p.tol).unwrap(), 2);
    }

    #[test]
    fn perturbation_breaks_quadratic() {
        let p = Params::new(r(2.0), r(3.0), r(5.0), r(1.0 / 60.0), r(2.0)).unwrap();
        let mut one = scalar_rep([2.0, 3.0, 5.0, 1.0 / 60.0]);
        one.t0[(0, 0)] += r(1e-3);
        assert!(verify_relations(&one, &p).t0 >= 1e-4);
    }
}
