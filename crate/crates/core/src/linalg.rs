//! Dense float linear algebra for finite GNS representations.
//!
//! Operators are given as matrices in a (non-orthonormal) diagram basis
//! whose inner product is the gram matrix `G`. With `G = L L^T`, the
//! coordinates `z = L^T x` are orthonormal and an operator `M` becomes
//! `L^T M L^{-T}`.

use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Clone, Debug)]
pub struct GramGeometry {
    lower: DMatrix<f64>,
    lower_inv: DMatrix<f64>,
}

impl GramGeometry {
    /// `None` when `gram` is not numerically positive definite.
    pub fn new(gram: &DMatrix<f64>) -> Option<Self> {
        if gram.nrows() == 0 {
            return Some(Self {
                lower: DMatrix::zeros(0, 0),
                lower_inv: DMatrix::zeros(0, 0),
            });
        }
        let sym = symmetrize(gram);
        let chol = sym.cholesky()?;
        let lower = chol.l();
        let lower_inv = lower.clone().try_inverse()?;
        Some(Self { lower, lower_inv })
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    pub fn orthonormal(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.lower.transpose() * m * self.lower_inv.transpose()
    }

    /// Largest singular value of the operator in the gram geometry.
    pub fn operator_norm(&self, m: &DMatrix<f64>) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let n = self.orthonormal(m);
        n.singular_values().max()
    }

    /// Eigenvalues, ascending, of an operator that is self-adjoint for the
    /// gram inner product.
    pub fn self_adjoint_spectrum(&self, m: &DMatrix<f64>) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        symmetric_eigenvalues(&self.orthonormal(m))
    }
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigenvalues of the symmetric part of `m`, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = SymmetricEigen::new(symmetrize(m)).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_in_skewed_geometry() {
        // gram diag(4, 1): the vector e1 has length 2
        let gram = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        let geo = GramGeometry::new(&gram).unwrap();
        // maps e2 -> e1, which scales lengths by 2
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!((geo.operator_norm(&m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn indefinite_gram_rejected() {
        let gram = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(GramGeometry::new(&gram).is_none());
        assert!(min_eigenvalue(&gram) < 0.0);
    }
}
