//! Dense complex matrix helpers shared by the operator and verification code.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Complex product through four real products.
///
/// nalgebra's generic complex kernel is an order of magnitude slower than the
/// real `matrixmultiply` path, and the verification suite performs a few
/// thousand products at dimension ~140.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions must agree");
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    DMatrix::from_fn(re.nrows(), re.ncols(), |r, k| {
        Complex64::new(re[(r, k)], im[(r, k)])
    })
}

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    mul(a, b) - mul(b, a)
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    mul(a, b) + mul(b, a)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖lhs − rhs‖_F / max(1, ‖lhs‖_F, ‖rhs‖_F)`.
pub fn relative_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    let diff = frobenius(&(lhs - rhs));
    diff / 1.0_f64.max(frobenius(lhs)).max(frobenius(rhs))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn zeros(dim: usize) -> CMatrix {
    CMatrix::zeros(dim, dim)
}

pub fn diagonal(values: &[f64]) -> CMatrix {
    let mut m = zeros(values.len());
    for (k, v) in values.iter().enumerate() {
        m[(k, k)] = c(*v);
    }
    m
}

/// `diag(d) · m`.
pub fn diag_mul(d: &[f64], m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| m[(r, k)] * d[r])
}

/// `m · diag(d)`.
pub fn mul_diag(m: &CMatrix, d: &[f64]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| m[(r, k)] * d[k])
}

/// Leading principal block of size `n`.
pub fn leading_block(m: &CMatrix, n: usize) -> CMatrix {
    m.view((0, 0), (n, n)).into_owned()
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_product_matches_generic_product() {
        let a = CMatrix::from_fn(5, 4, |r, k| Complex64::new(r as f64 - 1.5, (k * r) as f64 * 0.3));
        let b = CMatrix::from_fn(4, 3, |r, k| Complex64::new((r + k) as f64, -(k as f64)));
        let fast = mul(&a, &b);
        let slow = &a * &b;
        assert!(frobenius(&(fast - slow)) < 1e-12);
    }

    #[test]
    fn residual_is_scale_free_for_zero_targets() {
        let z = zeros(3);
        let small = identity(3) * c(1e-3);
        assert!((relative_residual(&small, &z) - 1e-3 * 3f64.sqrt()).abs() < 1e-15);
        let big = identity(3) * c(10.0);
        assert!((relative_residual(&big, &(big.clone() * c(1.1))) - 0.1 / 1.1).abs() < 1e-12);
    }
}
