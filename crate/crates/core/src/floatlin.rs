//! Floating-point matrix helpers shared by the numerical modules.
//!
//! Symmetric eigendecompositions come from nalgebra; on top of that we build
//! the SPD transcendentals (log, exp, powers) used by the symmetric-space
//! geometry, plus a principal square root for near-identity matrices.

use crate::exactlin::RationalMatrix;
use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloatLinError {
    #[error("matrix is not positive definite (eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("square root iteration did not converge")]
    SqrtDiverged,
}

/// Convert an exact matrix to floating point.
pub fn to_f64(m: &RationalMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        m.at(i, j).to_f64().expect("rational out of f64 range")
    })
}

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Apply `f` to the eigenvalues of a symmetric matrix.
fn sym_map(
    m: &DMatrix<f64>,
    f: impl Fn(f64) -> Result<f64, FloatLinError>,
) -> Result<DMatrix<f64>, FloatLinError> {
    let eig = symmetrize(m).symmetric_eigen();
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        d[(i, i)] = f(l)?;
    }
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

pub fn spd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FloatLinError> {
    sym_map(m, |l| {
        if l <= 0.0 {
            Err(FloatLinError::NotPositive(l))
        } else {
            Ok(l.sqrt())
        }
    })
}

pub fn spd_inv_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FloatLinError> {
    sym_map(m, |l| {
        if l <= 0.0 {
            Err(FloatLinError::NotPositive(l))
        } else {
            Ok(1.0 / l.sqrt())
        }
    })
}

pub fn spd_log(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FloatLinError> {
    sym_map(m, |l| {
        if l <= 0.0 {
            Err(FloatLinError::NotPositive(l))
        } else {
            Ok(l.ln())
        }
    })
}

pub fn sym_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
    sym_map(m, |l| Ok(l.exp())).expect("exp never fails")
}

pub fn min_eigenvalue_sym(m: &DMatrix<f64>) -> f64 {
    symmetrize(m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FloatLinError> {
    m.clone().try_inverse().ok_or(FloatLinError::Singular)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = m.norm();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m * 2f64.powi(-s);
    let n = m.nrows();
    let mut term = DMatrix::identity(n, n);
    let mut acc = DMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &a / k as f64;
        acc += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

/// Principal square root by the Denman-Beavers iteration. Intended for
/// matrices near the identity (no eigenvalues on the closed negative real
/// axis); the caller enforces a step cap before getting here.
pub fn sqrtm_near_identity(m: &DMatrix<f64>) -> Result<DMatrix<f64>, FloatLinError> {
    let n = m.nrows();
    let mut y = m.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..60 {
        let y_inv = inverse(&y)?;
        let z_inv = inverse(&z)?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        y = y_next;
        z = z_next;
        let residual = (&y * &y - m).norm();
        if residual < 1e-13 * (1.0 + m.norm()) {
            return Ok(y);
        }
    }
    Err(FloatLinError::SqrtDiverged)
}
