//! Wick operator on `C^{n+m} ⊗ C^{n+m}`: `T u⊗v = q v⊗u`, `T v⊗u = q̄ u⊗v`,
//! zero on same-type pairs. Basis vectors `0..n` are of `u` type.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::SparseOp;

pub fn wick_t(n: usize, m: usize, q0: Complex64) -> SparseOp {
    let d = n + m;
    let mut t = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let coeff = match (a < n, b < n) {
                (true, false) => q0,
                (false, true) => q0.conj(),
                _ => continue,
            };
            t.push((b * d + a, a * d + b, coeff));
        }
    }
    SparseOp::from_triplets(d * d, d * d, t)
}

/// Largest singular value.
pub fn wick_norm(t: &SparseOp) -> f64 {
    if t.nrows() == 0 {
        return 0.0;
    }
    t.to_dense().singular_values().max()
}

/// Operator-norm residuals of two braid identities on `(C^d)^{⊗3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BraidResiduals {
    /// `(1⊗T)(T⊗1)(1⊗T) − (T⊗1)(1⊗T)(T⊗1)`.
    pub standard: f64,
    /// `(1⊗T)(T⊗1)(1⊗T) − (T⊗1)(1⊗T)(1⊗T)`.
    pub variant: f64,
}

pub fn braid_residuals(t: &SparseOp) -> BraidResiduals {
    let d = (t.nrows() as f64).sqrt().round() as usize;
    let dense = t.to_dense();
    let id = DMatrix::<Complex64>::identity(d, d);
    let left = id.kronecker(&dense);
    let right = dense.kronecker(&id);
    let norm = |x: DMatrix<Complex64>| if x.is_empty() { 0.0 } else { x.singular_values().max() };
    let lhs = &left * &right * &left;
    BraidResiduals {
        standard: norm(&lhs - &right * &left * &right),
        variant: norm(&lhs - &right * &left * &left),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn real_parameter_entries() {
        let q = Complex64::new(0.5, 0.0);
        let t = wick_t(1, 1, q);
        // e₁⊗e₂ is index 1, e₂⊗e₁ is index 2
        assert_eq!(t.get(2, 1), q);
        assert_eq!(t.get(1, 2), q);
        assert_eq!(t.nnz(), 2);
        assert!((wick_norm(&t) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_parameter() {
        let t = wick_t(2, 1, Complex64::new(0.0, 0.0));
        assert_eq!(t.nnz(), 0);
        assert_eq!(braid_residuals(&t).standard, 0.0);
    }

    #[test]
    fn unimodular_norm_and_braid() {
        let q = Complex64::from_polar(1.0, 2.0 * PI * 0.3);
        let t = wick_t(2, 2, q);
        assert!((wick_norm(&t) - 1.0).abs() < 1e-12);
        assert!(braid_residuals(&t).standard < 1e-12);
    }

    #[test]
    fn interior_parameter_norm() {
        let q = Complex64::from_polar(0.7, 1.1);
        assert!((wick_norm(&wick_t(2, 3, q)) - 0.7).abs() < 1e-12);
    }
}
