//! Kähler/projective decision procedures and exact certificates.
//!
//! The decision pipeline: search the exact invariant alternating space for a
//! nondegenerate integral form ω, build the invariant positive form S, derive
//! the compatible invariant complex structure J from the pair (S, ω) by the
//! polar construction, compute a rational symplectic basis for ω, and bundle
//! everything with an independently re-checkable verification report.

use crate::exactlin::{rat, Rational, RationalMatrix, RationalVector};
use crate::floatlin::{self, FloatLinError};
use crate::matgroup::{
    invariant_form_space, invariant_positive_form, BilinearForm, FiniteMatrixGroup, FormKind,
};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecideError {
    #[error("alternating form is degenerate")]
    Degenerate,
    #[error("symmetric form is not positive definite")]
    NotPositive,
    #[error("gram matrix fails symmetry beyond tolerance: residual {0:.3e}")]
    NotCompatible(f64),
    #[error("form is not integral on the lattice")]
    NotIntegral,
    #[error("inputs have mismatched dimensions")]
    DimensionMismatch,
    #[error("form has the wrong symmetry kind for this operation")]
    WrongKind,
    #[error(transparent)]
    Float(#[from] FloatLinError),
}

/// A linear complex structure J with J² = -I, either exact over the
/// rationals or floating with a stated tolerance.
#[derive(Debug, Clone)]
pub enum ComplexStructure {
    Exact(RationalMatrix),
    Float {
        matrix: DMatrix<f64>,
        tolerance: f64,
    },
}

impl ComplexStructure {
    pub fn dimension(&self) -> usize {
        match self {
            ComplexStructure::Exact(m) => m.rows(),
            ComplexStructure::Float { matrix, .. } => matrix.nrows(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexStructure::Exact(_))
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            ComplexStructure::Exact(_) => 0.0,
            ComplexStructure::Float { tolerance, .. } => *tolerance,
        }
    }

    pub fn to_float(&self) -> DMatrix<f64> {
        match self {
            ComplexStructure::Exact(m) => floatlin::to_f64(m),
            ComplexStructure::Float { matrix, .. } => matrix.clone(),
        }
    }

    /// Frobenius norm of J² + I in floating point.
    pub fn square_residual(&self) -> f64 {
        let j = self.to_float();
        let n = j.nrows();
        (&j * &j + DMatrix::<f64>::identity(n, n)).norm()
    }
}

/// Why no invariant symplectic form exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonexistenceWitness {
    /// Alternating forms on an odd-dimensional space are always degenerate.
    OddDimension { dimension: usize },
    /// The space of invariant alternating forms is exactly zero.
    ZeroInvariantAlternatingSpace,
    /// Every probe of the invariant alternating space had zero determinant.
    /// With `exact` set, a full interpolation grid certified that the
    /// generic determinant polynomial vanishes identically; otherwise the
    /// failure probability of the randomized search is at most
    /// 2^log2_failure_bound.
    GenericDegeneracy {
        probes: u32,
        exact: bool,
        log2_failure_bound: Option<i32>,
    },
}

/// Outcome of the invariant symplectic form search.
#[derive(Debug, Clone)]
pub enum SymplecticSearch {
    Found(BilinearForm),
    NotFound(NonexistenceWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Kahler,
    NotKahler,
}

/// One re-checked invariant with its residual. Exact checks report a zero
/// residual when they hold; numeric checks report the floating violation.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub exact: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push_exact(&mut self, name: &str, ok: bool, residual: f64) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            residual,
            exact: true,
            pass: ok,
        });
    }

    fn push_numeric(&mut self, name: &str, residual: f64, bound: f64) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            residual,
            exact: false,
            pass: residual <= bound,
        });
    }
}

/// A verified polarisation: an integral alternating form together with the
/// metric witness for a given structure. The three conditions are
/// integrality of ω on the lattice, compatibility ω(J·, J·) = ω, and
/// positivity of the Gram matrix Jᵀ Ω.
#[derive(Debug, Clone)]
pub struct Polarisation {
    pub omega: BilinearForm,
    /// Violation of ω(J·, J·) = ω; exactly zero for exact structures.
    pub compat_residual: f64,
    /// Smallest eigenvalue of the Gram matrix.
    pub min_gram_eigenvalue: f64,
}

impl Polarisation {
    pub fn certify(
        omega: &BilinearForm,
        j: &ComplexStructure,
        tolerance: f64,
    ) -> Result<Self, DecideError> {
        let n = omega.dimension();
        if j.dimension() != n {
            return Err(DecideError::DimensionMismatch);
        }
        if omega.kind != FormKind::Alternating {
            return Err(DecideError::WrongKind);
        }
        if !omega.matrix.is_integral() {
            return Err(DecideError::NotIntegral);
        }
        let of = floatlin::to_f64(&omega.matrix);
        let jf = j.to_float();
        let compat_residual = match j {
            ComplexStructure::Exact(m) => {
                if m.transpose().mul(&omega.matrix).mul(m) != omega.matrix {
                    return Err(DecideError::NotCompatible(f64::INFINITY));
                }
                0.0
            }
            ComplexStructure::Float { .. } => {
                let res = (jf.transpose() * &of * &jf - &of).norm();
                let bound = tolerance * n as f64 * of.norm().max(1.0);
                if res > bound {
                    return Err(DecideError::NotCompatible(res));
                }
                res
            }
        };
        let min_gram_eigenvalue = floatlin::min_eigenvalue_sym(&(jf.transpose() * &of));
        let positive = match j {
            ComplexStructure::Exact(m) => {
                m.transpose().mul(&omega.matrix).ldlt_signature() == Ok((n, 0, 0))
            }
            ComplexStructure::Float { .. } => min_gram_eigenvalue > 1e3 * compat_residual,
        };
        if !positive {
            return Err(DecideError::NotPositive);
        }
        Ok(Self {
            omega: omega.clone(),
            compat_residual,
            min_gram_eigenvalue,
        })
    }
}

/// The full witness bundle for one decision.
#[derive(Debug, Clone)]
pub struct KahlerCertificate {
    pub decision: Decision,
    pub omega: Option<BilinearForm>,
    pub s: Option<BilinearForm>,
    pub j: Option<ComplexStructure>,
    pub conjugator: Option<RationalMatrix>,
    pub signature: Option<(usize, usize)>,
    pub witness: Option<NonexistenceWitness>,
    pub verification: VerificationReport,
    pub seed: u64,
}

/// The standard alternating form [[0, I], [-I, 0]] on 2k coordinates,
/// in the paired ordering e_1..e_k, f_1..f_k.
pub fn standard_symplectic(k: usize) -> RationalMatrix {
    let n = 2 * k;
    RationalMatrix::from_fn(n, n, |i, j| {
        if j == i + k {
            rat(1)
        } else if i == j + k {
            rat(-1)
        } else {
            rat(0)
        }
    })
}

const PROBE_LIMIT: u32 = 64;
const PROBE_HEIGHT: i64 = 1 << 16;
/// Above this product of (basis dimension) x (matrix dimension) the exact
/// interpolation-grid verdict is skipped and nonexistence stays
/// probabilistic.
const EXACT_GRID_LIMIT: usize = 24;

fn combination(basis: &[BilinearForm], coeffs: &[Rational]) -> RationalMatrix {
    let n = basis[0].dimension();
    let mut acc = RationalMatrix::zeros(n, n);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&b.matrix.scale(c));
        }
    }
    acc
}

/// Normalize a nonzero alternating rational matrix to a primitive integral
/// one with the first nonzero entry of the strict lower triangle positive
/// (row-major scan). Fixing the sign makes the searched form canonical for
/// one-dimensional invariant spaces.
fn normalize_alternating(m: &RationalMatrix) -> RationalMatrix {
    let (mut p, _) = m.integer_primitive();
    let n = p.rows();
    'scan: for i in 0..n {
        for j in 0..i {
            let e = p.at(i, j);
            if !e.is_zero() {
                if e.is_negative() {
                    p = p.neg();
                }
                break 'scan;
            }
        }
    }
    p
}

/// Search the invariant alternating space for a nondegenerate element and
/// return it as a primitive integral invariant form.
///
/// One-dimensional spaces are decided exactly without randomness. Otherwise
/// up to 64 integer coefficient vectors with entries in [-2^16, 2^16] are
/// probed; if all fail and the space is small enough, a full evaluation grid
/// decides exactly whether the generic determinant vanishes identically.
pub fn find_invariant_symplectic(group: &Arc<FiniteMatrixGroup>, seed: u64) -> SymplecticSearch {
    let n = group.dimension();
    if n % 2 == 1 {
        return SymplecticSearch::NotFound(NonexistenceWitness::OddDimension { dimension: n });
    }
    let basis = invariant_form_space(group, FormKind::Alternating);
    if basis.is_empty() {
        return SymplecticSearch::NotFound(NonexistenceWitness::ZeroInvariantAlternatingSpace);
    }
    let dim = basis.len();
    let found = |matrix: RationalMatrix| {
        let normalized = normalize_alternating(&matrix);
        SymplecticSearch::Found(
            BilinearForm::with_invariance(normalized, FormKind::Alternating, group.clone())
                .expect("combination of invariant forms is invariant"),
        )
    };

    if dim == 1 {
        let m = &basis[0].matrix;
        if !m.det().expect("square").is_zero() {
            return found(m.clone());
        }
        return SymplecticSearch::NotFound(NonexistenceWitness::GenericDegeneracy {
            probes: 0,
            exact: true,
            log2_failure_bound: None,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PROBE_LIMIT {
        let coeffs: Vec<Rational> = (0..dim)
            .map(|_| rat(rng.random_range(-PROBE_HEIGHT..=PROBE_HEIGHT)))
            .collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let candidate = combination(&basis, &coeffs);
        if !candidate.det().expect("square").is_zero() {
            return found(candidate);
        }
    }

    if dim * n <= EXACT_GRID_LIMIT {
        // determinant of a generic combination has degree <= n in each of
        // the dim coordinates, so vanishing on the grid {0..n}^dim proves it
        // vanishes identically
        let mut point = vec![0usize; dim];
        loop {
            let coeffs: Vec<Rational> = point.iter().map(|&c| rat(c as i64)).collect();
            if !coeffs.iter().all(|c| c.is_zero()) {
                let candidate = combination(&basis, &coeffs);
                if !candidate.det().expect("square").is_zero() {
                    return found(candidate);
                }
            }
            let mut idx = 0;
            loop {
                if idx == dim {
                    return SymplecticSearch::NotFound(NonexistenceWitness::GenericDegeneracy {
                        probes: PROBE_LIMIT,
                        exact: true,
                        log2_failure_bound: None,
                    });
                }
                if point[idx] < n {
                    point[idx] += 1;
                    break;
                }
                point[idx] = 0;
                idx += 1;
            }
        }
    }

    SymplecticSearch::NotFound(NonexistenceWitness::GenericDegeneracy {
        probes: PROBE_LIMIT,
        exact: false,
        log2_failure_bound: Some(-64),
    })
}

/// Best-effort upgrade of a floating complex structure to an exact rational
/// one: round the entries to small-denominator rationals and keep the result
/// only if every defining identity holds exactly.
pub(crate) fn try_exact_structure(
    j: &DMatrix<f64>,
    omega: &BilinearForm,
    group: Option<&Arc<FiniteMatrixGroup>>,
) -> Option<RationalMatrix> {
    let n = j.nrows();
    for log_den in [1u32, 4, 8, 16, 26] {
        let bound = BigInt::from(1u64 << log_den);
        let candidate = RationalMatrix::from_fn(n, n, |r, c| {
            crate::exactlin::best_rational_approx(
                &Rational::from_float(j[(r, c)]).unwrap_or_else(Rational::zero),
                &bound,
            )
        });
        let close = (floatlin::to_f64(&candidate) - j).norm() <= 1e-6 * n as f64;
        if !close {
            continue;
        }
        let square_ok = candidate.mul(&candidate) == RationalMatrix::identity(n).neg();
        if !square_ok {
            continue;
        }
        let compat_ok = candidate.transpose().mul(&omega.matrix).mul(&candidate) == omega.matrix;
        if !compat_ok {
            continue;
        }
        let gram = candidate.transpose().mul(&omega.matrix);
        if gram.ldlt_signature() != Ok((n, 0, 0)) {
            continue;
        }
        if let Some(g) = group {
            let commutes = g
                .generators()
                .iter()
                .all(|gen| gen.mul(&candidate) == candidate.mul(gen));
            if !commutes {
                continue;
            }
        }
        return Some(candidate);
    }
    None
}

/// Canonical compatible complex structure for an invariant pair (S, ω):
/// J = A (-A²)^{-1/2} with A = S⁻¹ Ω, the polar factor of A in the
/// S-inner product. A commutes with every group element fixing both forms,
/// so J inherits the invariance; J² = -I and ω(J·, J·) = ω by construction,
/// and the Gram matrix Jᵀ Ω is positive definite.
///
/// Numerically the square root is taken after symmetrizing with S^{1/2},
/// where K = S^{-1/2} Ω S^{-1/2} is antisymmetric and -K² is symmetric
/// positive definite. An exact rational J is attempted on top and returned
/// when the rounding verifies exactly.
pub fn compatible_complex_structure(
    s: &BilinearForm,
    omega: &BilinearForm,
    tolerance: f64,
) -> Result<ComplexStructure, DecideError> {
    if s.kind != FormKind::Symmetric || omega.kind != FormKind::Alternating {
        return Err(DecideError::WrongKind);
    }
    let n = s.dimension();
    if omega.dimension() != n {
        return Err(DecideError::DimensionMismatch);
    }
    if s.matrix.ldlt_signature() != Ok((n, 0, 0)) {
        return Err(DecideError::NotPositive);
    }
    if omega.matrix.det().expect("square").is_zero() {
        return Err(DecideError::Degenerate);
    }

    let sf = floatlin::to_f64(&s.matrix);
    let of = floatlin::to_f64(&omega.matrix);
    let s_sqrt = floatlin::spd_sqrt(&sf)?;
    let s_inv_sqrt = floatlin::spd_inv_sqrt(&sf)?;
    let k = &s_inv_sqrt * &of * &s_inv_sqrt;
    let minus_k2 = -(&k * &k);
    let root_inv = floatlin::spd_inv_sqrt(&minus_k2)?;
    let j_sym = &k * &root_inv;
    let j = &s_inv_sqrt * j_sym * &s_sqrt;

    let stamp = omega.invariance_group().or_else(|| s.invariance_group());
    if let Some(exact) = try_exact_structure(&j, omega, stamp) {
        return Ok(ComplexStructure::Exact(exact));
    }
    Ok(ComplexStructure::Float {
        matrix: j,
        tolerance,
    })
}

fn pairing(om: &RationalMatrix, x: &[Rational], y: &[Rational]) -> Rational {
    let oy = om.mul_vec(y);
    x.iter()
        .zip(&oy)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Rational symplectic basis for a nondegenerate alternating form: returns
/// B ∈ GL(n, Q) with Bᵀ Ω B equal to the standard block form, via symplectic
/// Gram-Schmidt. Every matrix preserving Ω is conjugated by B into the
/// standard symplectic group over Q.
pub fn symplectic_basis(omega: &BilinearForm) -> Result<RationalMatrix, DecideError> {
    if omega.kind != FormKind::Alternating {
        return Err(DecideError::WrongKind);
    }
    let om = &omega.matrix;
    let n = om.rows();
    if n % 2 == 1 || om.det().expect("square").is_zero() {
        return Err(DecideError::Degenerate);
    }
    let mut work: Vec<RationalVector> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { rat(1) } else { rat(0) })
                .collect()
        })
        .collect();
    let mut e_vectors = Vec::with_capacity(n / 2);
    let mut f_vectors = Vec::with_capacity(n / 2);
    while !work.is_empty() {
        let u = work.remove(0);
        let pos = work
            .iter()
            .position(|w| !pairing(om, &u, w).is_zero())
            .ok_or(DecideError::Degenerate)?;
        let v_raw = work.remove(pos);
        let scale = pairing(om, &u, &v_raw);
        let v: RationalVector = v_raw.iter().map(|x| x / &scale).collect();
        for w in &mut work {
            let a = pairing(om, &v, w);
            let b = pairing(om, &u, w);
            // w + ω(v,w)·u - ω(u,w)·v kills both pairings
            for i in 0..n {
                w[i] = &w[i] + &a * &u[i] - &b * &v[i];
            }
        }
        e_vectors.push(u);
        f_vectors.push(v);
    }
    let k = e_vectors.len();
    let columns: Vec<RationalVector> = e_vectors.into_iter().chain(f_vectors).collect();
    let b = RationalMatrix::from_fn(n, n, |i, j| columns[j][i].clone());
    debug_assert_eq!(b.transpose().mul(om).mul(&b), standard_symplectic(k));
    Ok(b)
}

/// Inertia (pos, neg) of the Gram matrix Jᵀ Ω. The Gram matrix is symmetric
/// exactly when J preserves ω, so a symmetry failure beyond the structure's
/// precision reports `NotCompatible`.
pub fn signature_of(
    omega: &BilinearForm,
    j: &ComplexStructure,
) -> Result<(usize, usize), DecideError> {
    let n = omega.dimension();
    if j.dimension() != n {
        return Err(DecideError::DimensionMismatch);
    }
    match j {
        ComplexStructure::Exact(m) => {
            let gram = m.transpose().mul(&omega.matrix);
            if !gram.is_symmetric() {
                return Err(DecideError::NotCompatible(f64::INFINITY));
            }
            let (pos, neg, zero) = gram.ldlt_signature().expect("symmetric checked");
            if zero > 0 {
                return Err(DecideError::NotCompatible(0.0));
            }
            Ok((pos, neg))
        }
        ComplexStructure::Float { matrix, tolerance } => {
            let gram = matrix.transpose() * floatlin::to_f64(&omega.matrix);
            let scale = gram.norm().max(1.0);
            let asym = (&gram - gram.transpose()).norm();
            let bound = tolerance.max(1e-12) * n as f64 * scale;
            if asym > bound {
                return Err(DecideError::NotCompatible(asym));
            }
            let eigs = floatlin::symmetrize(&gram).symmetric_eigen().eigenvalues;
            let mut pos = 0;
            let mut neg = 0;
            for &l in eigs.iter() {
                if l.abs() <= bound {
                    return Err(DecideError::NotCompatible(l.abs()));
                }
                if l > 0.0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            Ok((pos, neg))
        }
    }
}

/// Decide the Kähler/projective property and emit the certificate. The
/// decision is deterministic given the input group and the seed.
pub fn decide_kahler(
    group: &Arc<FiniteMatrixGroup>,
    seed: u64,
    tolerance: f64,
) -> Result<KahlerCertificate, DecideError> {
    match find_invariant_symplectic(group, seed) {
        SymplecticSearch::NotFound(witness) => {
            let mut cert = KahlerCertificate {
                decision: Decision::NotKahler,
                omega: None,
                s: None,
                j: None,
                conjugator: None,
                signature: None,
                witness: Some(witness),
                verification: VerificationReport::default(),
                seed,
            };
            cert.verification = verify_certificate(group, &cert, tolerance);
            Ok(cert)
        }
        SymplecticSearch::Found(omega) => certify_with_omega(group, omega, None, seed, tolerance),
    }
}

/// Assemble and verify a kahler certificate around a given invariant
/// integral symplectic form. When `j_override` is absent the compatible
/// structure is built by the polar construction.
pub(crate) fn certify_with_omega(
    group: &Arc<FiniteMatrixGroup>,
    omega: BilinearForm,
    j_override: Option<ComplexStructure>,
    seed: u64,
    tolerance: f64,
) -> Result<KahlerCertificate, DecideError> {
    let s = invariant_positive_form(group);
    let j = match j_override {
        Some(j) => j,
        None => compatible_complex_structure(&s, &omega, tolerance)?,
    };
    // ω is integral by construction; this gates on compatibility and the
    // positivity of the Gram matrix before a certificate is issued
    Polarisation::certify(&omega, &j, tolerance)?;
    let conjugator = symplectic_basis(&omega)?;
    let signature = signature_of(&omega, &j)?;
    let mut cert = KahlerCertificate {
        decision: Decision::Kahler,
        omega: Some(omega),
        s: Some(s),
        j: Some(j),
        conjugator: Some(conjugator),
        signature: Some(signature),
        witness: None,
        verification: VerificationReport::default(),
        seed,
    };
    cert.verification = verify_certificate(group, &cert, tolerance);
    Ok(cert)
}

/// Re-check every certified invariant against the group, exact identities
/// exactly and numerical ones with residuals. Failures are report entries,
/// never errors.
pub fn verify_certificate(
    group: &Arc<FiniteMatrixGroup>,
    cert: &KahlerCertificate,
    tolerance: f64,
) -> VerificationReport {
    let mut report = VerificationReport::default();
    let n = group.dimension();
    match cert.decision {
        Decision::Kahler => {
            let present = cert.omega.is_some()
                && cert.s.is_some()
                && cert.j.is_some()
                && cert.conjugator.is_some()
                && cert.signature.is_some();
            report.push_exact(
                "witnesses_present",
                present,
                if present { 0.0 } else { 1.0 },
            );
            if !present {
                return report;
            }
            let omega = cert.omega.as_ref().unwrap();
            let s = cert.s.as_ref().unwrap();
            let j = cert.j.as_ref().unwrap();
            let b = cert.conjugator.as_ref().unwrap();
            let shapes_ok = omega.dimension() == n
                && s.dimension() == n
                && j.dimension() == n
                && b.rows() == n
                && b.cols() == n;
            report.push_exact(
                "dimensions_match",
                shapes_ok,
                if shapes_ok { 0.0 } else { 1.0 },
            );
            if !shapes_ok {
                return report;
            }

            report.push_exact("omega_alternating", omega.matrix.is_alternating(), 0.0);
            report.push_exact("omega_integral", omega.matrix.is_integral(), 0.0);
            report.push_exact(
                "omega_invariant",
                group.leaves_form_invariant(&omega.matrix),
                0.0,
            );
            report.push_exact(
                "omega_nondegenerate",
                !omega.matrix.det().expect("square").is_zero(),
                0.0,
            );
            report.push_exact("s_symmetric", s.matrix.is_symmetric(), 0.0);
            report.push_exact("s_invariant", group.leaves_form_invariant(&s.matrix), 0.0);
            report.push_exact(
                "s_positive_definite",
                s.matrix.ldlt_signature() == Ok((n, 0, 0)),
                0.0,
            );

            let omega_std = standard_symplectic(n / 2);
            report.push_exact(
                "conjugator_normalizes_omega",
                b.transpose().mul(&omega.matrix).mul(b) == omega_std,
                0.0,
            );
            let mut conjugated_ok = true;
            if let Ok(b_inv) = b.inverse() {
                for g in group.generators() {
                    let h = b_inv.mul(g).mul(b);
                    if h.transpose().mul(&omega_std).mul(&h) != omega_std {
                        conjugated_ok = false;
                        break;
                    }
                }
            } else {
                conjugated_ok = false;
            }
            report.push_exact("conjugated_generators_symplectic", conjugated_ok, 0.0);

            // structure checks, exact or numeric by grade
            let of = floatlin::to_f64(&omega.matrix);
            let jf = j.to_float();
            let scale = of.norm().max(1.0);
            let bound = tolerance * n as f64 * scale;
            match j {
                ComplexStructure::Exact(m) => {
                    report.push_exact(
                        "j_square",
                        m.mul(m) == RationalMatrix::identity(n).neg(),
                        0.0,
                    );
                    report.push_exact(
                        "j_invariant",
                        group.generators().iter().all(|g| g.mul(m) == m.mul(g)),
                        0.0,
                    );
                    report.push_exact(
                        "j_compatible",
                        m.transpose().mul(&omega.matrix).mul(m) == omega.matrix,
                        0.0,
                    );
                    report.push_exact(
                        "gram_positive",
                        m.transpose().mul(&omega.matrix).ldlt_signature() == Ok((n, 0, 0)),
                        0.0,
                    );
                }
                ComplexStructure::Float { .. } => {
                    let id = DMatrix::<f64>::identity(n, n);
                    let square_res = (&jf * &jf + &id).norm();
                    report.push_numeric("j_square", square_res, bound);
                    let mut inv_res: f64 = 0.0;
                    for g in group.generators() {
                        let gf = floatlin::to_f64(g);
                        inv_res = inv_res.max((&gf * &jf - &jf * &gf).norm());
                    }
                    report.push_numeric("j_invariant", inv_res, bound);
                    let compat_res = (jf.transpose() * &of * &jf - &of).norm();
                    report.push_numeric("j_compatible", compat_res, bound);
                    let gram = jf.transpose() * &of;
                    let min_eig = floatlin::min_eigenvalue_sym(&gram);
                    // positivity is an open condition: demand a margin of
                    // 10^3 over the worst structure residual
                    let worst = square_res.max(inv_res).max(compat_res);
                    let margin = 1e3 * worst;
                    report.checks.push(CheckResult {
                        name: "gram_positive_margin".to_string(),
                        residual: min_eig,
                        exact: false,
                        pass: min_eig > margin,
                    });
                }
            }

            let recomputed = signature_of(omega, j);
            report.push_exact(
                "signature_consistent",
                recomputed.ok() == cert.signature,
                0.0,
            );
        }
        Decision::NotKahler => {
            let Some(witness) = &cert.witness else {
                report.push_exact("witness_present", false, 1.0);
                return report;
            };
            report.push_exact("witness_present", true, 0.0);
            match witness {
                NonexistenceWitness::OddDimension { dimension } => {
                    report.push_exact("witness_odd_dimension", *dimension == n && n % 2 == 1, 0.0);
                }
                NonexistenceWitness::ZeroInvariantAlternatingSpace => {
                    let dim = invariant_form_space(group, FormKind::Alternating).len();
                    report.push_exact("witness_zero_invariant_space", dim == 0, 0.0);
                }
                NonexistenceWitness::GenericDegeneracy {
                    exact,
                    log2_failure_bound,
                    ..
                } => {
                    if *exact {
                        // cheap to re-run: the exact path is only taken on
                        // small spaces
                        let rerun = matches!(
                            find_invariant_symplectic(group, cert.seed),
                            SymplecticSearch::NotFound(NonexistenceWitness::GenericDegeneracy {
                                exact: true,
                                ..
                            })
                        );
                        report.push_exact("witness_generic_degeneracy_exact", rerun, 0.0);
                    } else {
                        let ok = log2_failure_bound.is_some_and(|b| b <= -64);
                        report.push_exact("witness_probabilistic_bound", ok, 0.0);
                    }
                }
            }
        }
    }
    report
}
