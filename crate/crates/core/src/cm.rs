//! Closed-form invariant complex structures for cyclic groups acting by
//! cyclotomic companion matrices.
//!
//! The cyclic group of order m acting on Z^φ(m) through the companion matrix
//! C of the m-th cyclotomic polynomial carries a complex structure that is a
//! polynomial in C: pick one embedding out of each conjugate pair of
//! primitive m-th roots (a CM type) and interpolate the value ±i across the
//! chosen roots. For m = 3, 4, 6 the polynomial has closed form with at
//! worst a single square root — those cases are certified exactly — and the
//! general case is produced in floating point. Either way the structure
//! commutes with the full cyclic group by construction, independently of the
//! numerical decision pipeline, which makes it a useful cross-check.

use crate::decide::{signature_of, ComplexStructure, Decision, KahlerCertificate};
use crate::exactlin::{rat, RationalMatrix};
use crate::floatlin;
use crate::matgroup::FiniteMatrixGroup;
use crate::siegel::{siegel_distance, SiegelBase, SiegelPoint};
use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CmError {
    #[error("order {0} is too small: the cyclotomic dimension must be even, so m >= 3")]
    OrderTooSmall(u32),
    #[error("cyclotomic dimension is odd")]
    OddPhi,
    #[error("CM type must pick exactly one embedding from each conjugate pair")]
    BadCmType,
}

/// Euler totient.
pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u32
}

/// Exact division in Z[x]; panics if the division leaves a remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den.last().expect("nonzero divisor");
    assert!(rem.len() > dd);
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / lead;
        assert_eq!(&c * lead, rem[k + dd], "non-exact polynomial division");
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let v = &rem[k + i] - &c * d;
            rem[k + i] = v;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
    quot
}

/// Coefficients of the m-th cyclotomic polynomial, ascending degree:
/// divide x^m - 1 by the cyclotomic polynomials of the proper divisors.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    if m == 1 {
        return vec![BigInt::from(-1), BigInt::one()];
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    let mut result = num;
    for d in 1..m {
        if m.is_multiple_of(d) {
            result = poly_div_exact(&result, &cyclotomic_polynomial(d));
        }
    }
    result
}

/// Companion matrix of a monic integer polynomial (ascending coefficients).
pub fn companion_matrix(coeffs: &[BigInt]) -> RationalMatrix {
    let deg = coeffs.len() - 1;
    assert!(coeffs[deg].is_one(), "polynomial must be monic");
    RationalMatrix::from_fn(deg, deg, |i, j| {
        if j + 1 == deg {
            -crate::exactlin::Rational::from_integer(coeffs[i].clone())
        } else if i == j + 1 {
            rat(1)
        } else {
            rat(0)
        }
    })
}

/// A cyclic group of order m acting on Z^φ(m) by the companion matrix of
/// the m-th cyclotomic polynomial, together with a CM type: one embedding
/// index from each conjugate pair {k, m-k} of primitive residues.
#[derive(Debug, Clone)]
pub struct CyclotomicAction {
    order: u32,
    dimension: usize,
    generator: RationalMatrix,
    cm_type: Vec<u32>,
}

impl CyclotomicAction {
    /// Default CM type: the embeddings with positive imaginary part, i.e.
    /// the primitive residues below m/2.
    pub fn new(order: u32) -> Result<Self, CmError> {
        let units: Vec<u32> = (1..order).filter(|k| k.gcd(&order) == 1).collect();
        let cm_type = units.iter().copied().filter(|&k| 2 * k < order).collect();
        Self::with_cm_type(order, cm_type)
    }

    pub fn with_cm_type(order: u32, cm_type: Vec<u32>) -> Result<Self, CmError> {
        if order < 3 {
            return Err(CmError::OrderTooSmall(order));
        }
        let phi = euler_phi(order) as usize;
        if phi % 2 == 1 {
            // unreachable for m >= 3; kept as a guard
            return Err(CmError::OddPhi);
        }
        for &k in &cm_type {
            if k == 0 || k >= order || k.gcd(&order) != 1 {
                return Err(CmError::BadCmType);
            }
            if cm_type.contains(&(order - k)) {
                return Err(CmError::BadCmType);
            }
        }
        if cm_type.len() != phi / 2 {
            return Err(CmError::BadCmType);
        }
        let generator = companion_matrix(&cyclotomic_polynomial(order));
        Ok(Self {
            order,
            dimension: phi,
            generator,
            cm_type,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generator(&self) -> &RationalMatrix {
        &self.generator
    }

    pub fn cm_type(&self) -> &[u32] {
        &self.cm_type
    }

    /// The cyclic matrix group generated by the companion matrix.
    pub fn group(&self) -> Arc<FiniteMatrixGroup> {
        FiniteMatrixGroup::close_group(vec![self.generator.clone()], 4 * self.order as usize + 4)
            .expect("companion matrix of a cyclotomic polynomial generates a finite group")
    }
}

/// A matrix of the shape `coeff / sqrt(surd)` with exact rational `coeff`.
/// With surd = 1 the value itself is rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdMatrix {
    pub coeff: RationalMatrix,
    pub surd: u32,
}

/// The CM complex structure, with the exact surd presentation when the
/// order admits one (m = 3, 4, 6).
#[derive(Debug, Clone)]
pub struct CmStructure {
    pub exact: Option<SurdMatrix>,
    pub structure: ComplexStructure,
}

/// Build the invariant complex structure attached to the CM type: the unique
/// real polynomial in the generator taking the value ±i at each primitive
/// root according to the chosen embeddings.
///
/// For m = 3, 4, 6 the closed forms are C, (2C+I)/√3 and (2C-I)/√3 (up to
/// the orientation fixed by the CM type) and the output is certified
/// exactly: the surd numerator squares to -surd·I and commutes with the
/// generator in exact arithmetic.
pub fn cm_complex_structure(action: &CyclotomicAction) -> Result<CmStructure, CmError> {
    let n = action.dimension;
    let c = &action.generator;
    // orientation: +1 when the positive-imaginary embedding is the chosen
    // one (only meaningful for the phi = 2 closed forms)
    let positive = action.cm_type.iter().any(|&k| 2 * k < action.order);
    let sign = if positive { rat(1) } else { rat(-1) };
    let exact = match action.order {
        4 => Some(SurdMatrix {
            coeff: c.scale(&sign),
            surd: 1,
        }),
        3 => {
            let m = c.scale(&rat(2)).add(&RationalMatrix::identity(2));
            Some(SurdMatrix {
                coeff: m.scale(&sign),
                surd: 3,
            })
        }
        6 => {
            let m = c.scale(&rat(2)).sub(&RationalMatrix::identity(2));
            Some(SurdMatrix {
                coeff: m.scale(&sign),
                surd: 3,
            })
        }
        _ => None,
    };
    if let Some(surd) = &exact {
        let square = surd.coeff.mul(&surd.coeff);
        let expected = RationalMatrix::identity(n).scale(&rat(-(surd.surd as i64)));
        assert_eq!(square, expected, "surd numerator must square to -surd*I");
        assert_eq!(surd.coeff.mul(c), c.mul(&surd.coeff));
        let structure = if surd.surd == 1 {
            ComplexStructure::Exact(surd.coeff.clone())
        } else {
            ComplexStructure::Float {
                matrix: floatlin::to_f64(&surd.coeff) / (surd.surd as f64).sqrt(),
                tolerance: 1e-12,
            }
        };
        return Ok(CmStructure { exact, structure });
    }

    // general order: Lagrange interpolation of ±i over the primitive roots,
    // evaluated on the companion matrix
    let m = action.order;
    let units: Vec<u32> = (1..m).filter(|k| k.gcd(&m) == 1).collect();
    let tau = 2.0 * std::f64::consts::PI;
    let nodes: Vec<Complex<f64>> = units
        .iter()
        .map(|&k| Complex::new(0.0, tau * k as f64 / m as f64).exp())
        .collect();
    let values: Vec<Complex<f64>> = units
        .iter()
        .map(|&k| {
            if action.cm_type.contains(&k) {
                Complex::new(0.0, 1.0)
            } else {
                Complex::new(0.0, -1.0)
            }
        })
        .collect();
    let mut poly = vec![Complex::new(0.0, 0.0); n];
    for (j, (zj, vj)) in nodes.iter().zip(&values).enumerate() {
        let mut term = vec![Complex::new(1.0, 0.0)];
        let mut denom = Complex::new(1.0, 0.0);
        for (l, zl) in nodes.iter().enumerate() {
            if l == j {
                continue;
            }
            // multiply by (x - z_l)
            let mut next = vec![Complex::new(0.0, 0.0); term.len() + 1];
            for (d, coef) in term.iter().enumerate() {
                next[d] -= coef * zl;
                next[d + 1] += coef;
            }
            term = next;
            denom *= zj - zl;
        }
        for (d, coef) in term.iter().enumerate() {
            poly[d] += vj * coef / denom;
        }
    }
    // the interpolant of conjugate-symmetric data has real coefficients
    let coeffs: Vec<f64> = poly
        .iter()
        .map(|z| {
            debug_assert!(z.im.abs() < 1e-9, "imaginary residue {:.3e}", z.im);
            z.re
        })
        .collect();
    let cf = floatlin::to_f64(c);
    let mut j = DMatrix::<f64>::zeros(n, n);
    for &a in coeffs.iter().rev() {
        j = &j * &cf;
        for d in 0..n {
            j[(d, d)] += a;
        }
    }
    Ok(CmStructure {
        exact: None,
        structure: ComplexStructure::Float {
            matrix: j,
            tolerance: 1e-12,
        },
    })
}

/// Agreement report between the CM construction and the decision pipeline
/// on the same cyclic group.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub decider_decision: Decision,
    pub both_kahler: bool,
    pub decider_signature: Option<(usize, usize)>,
    pub cm_signature: Option<(usize, usize)>,
    pub signatures_agree: bool,
    pub siegel_distance: Option<f64>,
}

/// Compare the CM structure with a decision certificate computed on the same
/// group: both routes must find the group Kähler, the two structures must
/// have equal signature against the certificate's invariant form (the
/// conjugacy criterion inside its symplectic group), and when both lie in
/// the positive Siegel space of that form their distance is reported.
pub fn cross_check_with_decider(
    action: &CyclotomicAction,
    cert: &KahlerCertificate,
) -> Result<CrossCheckReport, CmError> {
    let cm = cm_complex_structure(action)?;
    let both_kahler = cert.decision == Decision::Kahler;
    let (mut decider_signature, mut cm_signature) = (None, None);
    let mut distance = None;
    if let (Some(omega), Some(j_dec)) = (&cert.omega, &cert.j) {
        decider_signature = signature_of(omega, j_dec).ok();
        // inertia is scale-invariant, so the surd numerator certifies the
        // signature exactly when present
        cm_signature = match &cm.exact {
            Some(surd) => {
                let gram = surd.coeff.transpose().mul(&omega.matrix);
                gram.ldlt_signature()
                    .ok()
                    .filter(|&(_, _, zero)| zero == 0)
                    .map(|(pos, neg, _)| (pos, neg))
            }
            None => signature_of(omega, &cm.structure).ok(),
        };
        let n = action.dimension;
        if decider_signature == Some((n, 0)) && cm_signature == Some((n, 0)) {
            if let Ok(base) = SiegelBase::from_rational(&omega.matrix) {
                let p_dec = SiegelPoint::from_structure(&j_dec.to_float(), &base);
                let p_cm = SiegelPoint::from_structure(&cm.structure.to_float(), &base);
                if let (Ok(p), Ok(q)) = (p_dec, p_cm) {
                    distance = siegel_distance(&p, &q).ok();
                }
            }
        }
    }
    let signatures_agree = decider_signature.is_some() && decider_signature == cm_signature;
    Ok(CrossCheckReport {
        decider_decision: cert.decision,
        both_kahler,
        decider_signature,
        cm_signature,
        signatures_agree,
        siegel_distance: distance,
    })
}
