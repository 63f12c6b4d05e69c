//! Numerical geometry of the space of complex structures sharing a fixed
//! symplectic form, realized inside the positive-definite matrices.
//!
//! A structure J compatible with the base form Ω₀ is encoded by its Gram
//! matrix P = Jᵀ Ω₀, a symmetric positive-definite matrix satisfying
//! P Ω₀⁻¹ P = -Ω₀ (which encodes J² = -I). That constraint set is the fixed
//! locus of the isometric involution P ↦ Ω₀ᵀ P⁻¹ Ω₀ of the affine-invariant
//! metric, hence a totally geodesic submanifold: ambient geodesic and
//! distance formulas restrict to it verbatim. Floating drift off the
//! constraint is removed after every step by the canonical polar correction.

use crate::decide::{self, ComplexStructure, DecideError, KahlerCertificate};
use crate::exactlin::{best_rational_approx, rat, Rational, RationalMatrix};
use crate::floatlin::{self, FloatLinError};
use crate::matgroup::{
    form_coordinates, invariant_form_space, BilinearForm, FiniteMatrixGroup, FormKind,
};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SiegelError {
    #[error("points refer to different base forms")]
    MixedBaseForms,
    #[error("gram matrix is not positive definite (eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("matrix does not preserve the base form (residual {0:.3e})")]
    NotSymplectic(f64),
    #[error("barycenter iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("form is degenerate")]
    Degenerate,
    #[error("consecutive forms too far apart for the lifting step (update distance {0:.3e})")]
    StepTooLarge(f64),
    #[error("segment toward the rational form stayed degenerate after all retries")]
    DegenerateOnSegment,
    #[error("no rational form found within the requested radius")]
    RadiusTooSmall,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Float(#[from] FloatLinError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

const KARCHER_TOL: f64 = 1e-10;
const KARCHER_MAX_ITERS: usize = 200;
const LIFT_STEP_CAP: f64 = 0.5;
const SYMPLECTIC_GATE: f64 = 1e-6;
const DEFAULT_DENOM_BOUND: u64 = 16;
const SEGMENT_RETRY_LIMIT: u32 = 40;
const SAMPLE_STEPS: usize = 16;
const SAMPLE_PROBE_LIMIT: u32 = 64;

/// Shared reference form Ω₀ for a family of Siegel points.
#[derive(Debug, Clone)]
pub struct SiegelBase {
    omega: Arc<DMatrix<f64>>,
    omega_inv: Arc<DMatrix<f64>>,
}

impl SiegelBase {
    pub fn from_float(omega: DMatrix<f64>) -> Result<Self, SiegelError> {
        let omega_inv = floatlin::inverse(&omega).map_err(|_| SiegelError::Degenerate)?;
        Ok(Self {
            omega: Arc::new(omega),
            omega_inv: Arc::new(omega_inv),
        })
    }

    pub fn from_rational(omega: &RationalMatrix) -> Result<Self, SiegelError> {
        Self::from_float(floatlin::to_f64(omega))
    }

    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn dimension(&self) -> usize {
        self.omega.nrows()
    }

    fn same(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.omega, &other.omega) || *self.omega == *other.omega
    }
}

/// A compatible complex structure encoded by its positive Gram matrix
/// P = Jᵀ Ω₀; the structure is recovered as J = -Ω₀⁻¹ P.
#[derive(Debug, Clone)]
pub struct SiegelPoint {
    gram: DMatrix<f64>,
    base: SiegelBase,
}

/// Pull a Gram candidate back onto the constraint set: with X the symmetric
/// positive part and K = X^{1/2} Ω₀⁻¹ X^{1/2}, the corrected Gram matrix is
/// X^{1/2} (-K²)^{-1/2} X^{1/2}, which is the polar correction
/// J ← J'(-J'²)^{-1/2} expressed on Gram matrices.
fn project_gram(gram: &DMatrix<f64>, base: &SiegelBase) -> Result<DMatrix<f64>, SiegelError> {
    let x = floatlin::symmetrize(gram);
    let x_sqrt = floatlin::spd_sqrt(&x).map_err(|e| match e {
        FloatLinError::NotPositive(l) => SiegelError::NotPositive(l),
        other => SiegelError::Float(other),
    })?;
    let k = &x_sqrt * base.omega_inv.as_ref() * &x_sqrt;
    let minus_k2 = -(&k * &k);
    let r = floatlin::spd_inv_sqrt(&minus_k2)?;
    Ok(floatlin::symmetrize(&(&x_sqrt * r * &x_sqrt)))
}

impl SiegelPoint {
    /// Encode a complex structure; the Gram matrix is symmetrized, checked
    /// for positivity, and projected onto the constraint set.
    pub fn from_structure(j: &DMatrix<f64>, base: &SiegelBase) -> Result<Self, SiegelError> {
        let gram = j.transpose() * base.omega.as_ref();
        Self::from_gram(gram, base)
    }

    pub fn from_gram(gram: DMatrix<f64>, base: &SiegelBase) -> Result<Self, SiegelError> {
        let projected = project_gram(&gram, base)?;
        Ok(Self {
            gram: projected,
            base: base.clone(),
        })
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn base(&self) -> &SiegelBase {
        &self.base
    }

    /// The complex structure J = -Ω₀⁻¹ P.
    pub fn structure(&self) -> DMatrix<f64> {
        -(self.base.omega_inv.as_ref() * &self.gram)
    }

    /// Frobenius norm of P Ω₀⁻¹ P + Ω₀.
    pub fn constraint_residual(&self) -> f64 {
        (&self.gram * self.base.omega_inv.as_ref() * &self.gram + self.base.omega.as_ref()).norm()
    }
}

/// Affine-invariant distance ‖log(P^{-1/2} Q P^{-1/2})‖_F restricted to the
/// constraint set.
pub fn siegel_distance(p: &SiegelPoint, q: &SiegelPoint) -> Result<f64, SiegelError> {
    if !p.base.same(&q.base) {
        return Err(SiegelError::MixedBaseForms);
    }
    let p_inv_sqrt = floatlin::spd_inv_sqrt(&p.gram).map_err(|e| match e {
        FloatLinError::NotPositive(l) => SiegelError::NotPositive(l),
        other => SiegelError::Float(other),
    })?;
    let middle = &p_inv_sqrt * &q.gram * &p_inv_sqrt;
    let log = floatlin::spd_log(&middle)?;
    Ok(log.norm())
}

/// Conjugation action of the symplectic group of the base form: J ↦ A J A⁻¹,
/// which on Gram matrices is the congruence P ↦ A⁻ᵀ P A⁻¹ and therefore an
/// isometry of the affine-invariant metric.
pub fn sp_action(a: &DMatrix<f64>, p: &SiegelPoint) -> Result<SiegelPoint, SiegelError> {
    let omega = p.base.omega.as_ref();
    let residual = (a.transpose() * omega * a - omega).norm();
    if residual > SYMPLECTIC_GATE * omega.norm().max(1.0) {
        return Err(SiegelError::NotSymplectic(residual));
    }
    let a_inv = floatlin::inverse(a).map_err(|_| SiegelError::Degenerate)?;
    let gram = a_inv.transpose() * &p.gram * &a_inv;
    SiegelPoint::from_gram(gram, &p.base)
}

/// Karcher barycenter of a finite point set by the standard fixed-point
/// iteration: average the logs in the tangent space at the current iterate,
/// exponentiate back, and re-project onto the constraint set. Nonpositive
/// curvature makes the minimizer of Σ d²(q, pᵢ) unique; iteration stops when
/// the tangent mean norm drops below `tolerance`.
pub fn karcher_barycenter(
    points: &[SiegelPoint],
    init: &SiegelPoint,
    tolerance: f64,
) -> Result<SiegelPoint, SiegelError> {
    if points.is_empty() {
        return Err(SiegelError::InvalidInput("empty point list".into()));
    }
    for p in points {
        if !p.base.same(&init.base) {
            return Err(SiegelError::MixedBaseForms);
        }
    }
    let mut current = init.clone();
    for _ in 0..KARCHER_MAX_ITERS {
        let x_sqrt = floatlin::spd_sqrt(&current.gram)?;
        let x_inv_sqrt = floatlin::spd_inv_sqrt(&current.gram)?;
        let n = current.gram.nrows();
        let mut tangent = DMatrix::<f64>::zeros(n, n);
        for p in points {
            let middle = &x_inv_sqrt * &p.gram * &x_inv_sqrt;
            tangent += floatlin::spd_log(&middle)?;
        }
        tangent /= points.len() as f64;
        let gradient_norm = tangent.norm();
        if gradient_norm <= tolerance {
            return Ok(current);
        }
        let updated = &x_sqrt * floatlin::sym_exp(&tangent) * &x_sqrt;
        current = SiegelPoint::from_gram(updated, &current.base)?;
    }
    Err(SiegelError::NoConvergence(KARCHER_MAX_ITERS))
}

/// Continuous lift of a sampled curve of nondegenerate forms: returns
/// factors A_t with A_tᵀ Ω_base A_t = Ω_t and A at the first sample equal to
/// `a0` (so Ω_base = a0⁻ᵀ Ω_first a0⁻¹). Each step multiplies by the
/// principal square root of Ω_t⁻¹ Ω_{t+1}, which is the valid factor closest
/// to the previous one; consecutive samples must stay within the step cap.
pub fn lift_form_path(
    omegas: &[DMatrix<f64>],
    a0: &DMatrix<f64>,
) -> Result<Vec<DMatrix<f64>>, SiegelError> {
    if omegas.is_empty() {
        return Err(SiegelError::InvalidInput("empty form path".into()));
    }
    let mut lifts = Vec::with_capacity(omegas.len());
    lifts.push(a0.clone());
    let mut current = a0.clone();
    for window in omegas.windows(2) {
        let here = &window[0];
        let next = &window[1];
        let here_inv = floatlin::inverse(here).map_err(|_| SiegelError::Degenerate)?;
        let n = here_inv * next;
        let dim = n.nrows();
        let step = (&n - DMatrix::<f64>::identity(dim, dim)).norm();
        if step > LIFT_STEP_CAP {
            return Err(SiegelError::StepTooLarge(step));
        }
        let root = floatlin::sqrtm_near_identity(&n)?;
        current *= root;
        lifts.push(current.clone());
    }
    Ok(lifts)
}

/// A sampled deformation from a start Kähler pair to a rational endpoint,
/// with the barycenter curve and per-sample diagnostics. The endpoint form
/// is exact, integral and primitive; its certificate is verified.
#[derive(Debug, Clone)]
pub struct DeformationPath {
    pub times: Vec<f64>,
    pub forms: Vec<DMatrix<f64>>,
    pub lifts: Vec<DMatrix<f64>>,
    pub structures: Vec<DMatrix<f64>>,
    pub barycenters: Vec<SiegelPoint>,
    /// Distance between consecutive barycenters; entry k is the step from
    /// sample k to k+1.
    pub step_distances: Vec<f64>,
    pub compat_residuals: Vec<f64>,
    pub min_gram_eigenvalues: Vec<f64>,
    pub endpoint_form: BilinearForm,
    pub endpoint_structure: ComplexStructure,
    pub endpoint_certificate: KahlerCertificate,
}

impl DeformationPath {
    pub fn max_step_distance(&self) -> f64 {
        self.step_distances.iter().copied().fold(0.0, f64::max)
    }

    /// CSV rows `t, step_distance, compat_residual, min_gram_eigenvalue`;
    /// the step distance on the first row is zero.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,step_distance,compat_residual,min_gram_eigenvalue\n");
        for (k, t) in self.times.iter().enumerate() {
            let step = if k == 0 {
                0.0
            } else {
                self.step_distances[k - 1]
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                t, step, self.compat_residuals[k], self.min_gram_eigenvalues[k]
            ));
        }
        out
    }
}

fn check_deform_preconditions(
    group: &Arc<FiniteMatrixGroup>,
    j0: &DMatrix<f64>,
    omega0: &BilinearForm,
) -> Result<(), SiegelError> {
    let n = group.dimension();
    if omega0.dimension() != n || j0.nrows() != n {
        return Err(SiegelError::InvalidInput("dimension mismatch".into()));
    }
    if omega0.kind != FormKind::Alternating {
        return Err(SiegelError::InvalidInput(
            "start form must be alternating".into(),
        ));
    }
    if !group.leaves_form_invariant(&omega0.matrix) {
        return Err(SiegelError::InvalidInput(
            "start form is not exactly invariant".into(),
        ));
    }
    if omega0.matrix.det().expect("square").is_zero() {
        return Err(SiegelError::Degenerate);
    }
    let of = floatlin::to_f64(&omega0.matrix);
    let scale = of.norm().max(1.0);
    let mut inv_res: f64 = 0.0;
    for g in group.generators() {
        let gf = floatlin::to_f64(g);
        inv_res = inv_res.max((&gf * j0 - j0 * &gf).norm());
    }
    if inv_res > SYMPLECTIC_GATE * scale {
        return Err(SiegelError::InvalidInput(format!(
            "start structure is not invariant (residual {inv_res:.3e})"
        )));
    }
    let compat = (j0.transpose() * &of * j0 - &of).norm();
    if compat > SYMPLECTIC_GATE * scale {
        return Err(SiegelError::InvalidInput(format!(
            "start form is not compatible with the start structure (residual {compat:.3e})"
        )));
    }
    let min_eig = floatlin::min_eigenvalue_sym(&(j0.transpose() * &of));
    if min_eig <= 0.0 {
        return Err(SiegelError::NotPositive(min_eig));
    }
    Ok(())
}

/// Exact coordinates of an invariant form in the invariant-space basis.
fn coordinates_in_basis(
    basis: &[BilinearForm],
    omega: &BilinearForm,
) -> Result<Vec<Rational>, SiegelError> {
    let coords = form_coordinates(&omega.matrix, FormKind::Alternating);
    let d = basis.len();
    let system = RationalMatrix::from_fn(coords.len(), d, |i, j| {
        form_coordinates(&basis[j].matrix, FormKind::Alternating)[i].clone()
    });
    system
        .solve(&coords)
        .ok_or_else(|| SiegelError::InvalidInput("form not in the invariant space".into()))
}

fn combine(basis: &[BilinearForm], coeffs: &[Rational]) -> RationalMatrix {
    let n = basis[0].dimension();
    let mut acc = RationalMatrix::zeros(n, n);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&b.matrix.scale(c));
        }
    }
    acc
}

/// Deform an invariant Kähler pair (J₀, ω₀) to a polarisable endpoint: round
/// the coordinates of ω₀ to a nearby rational invariant form ω₁, join by the
/// straight segment, lift the segment, follow the barycenters of the
/// conjugated orbits, and certify the endpoint with denominators cleared.
pub fn deform_to_polarisable(
    group: &Arc<FiniteMatrixGroup>,
    j0: &ComplexStructure,
    omega0: &BilinearForm,
    steps: usize,
    seed: u64,
) -> Result<DeformationPath, SiegelError> {
    deform_with_denominator_bound(group, j0, omega0, steps, seed, DEFAULT_DENOM_BOUND)
}

fn deform_with_denominator_bound(
    group: &Arc<FiniteMatrixGroup>,
    j0: &ComplexStructure,
    omega0: &BilinearForm,
    steps: usize,
    seed: u64,
    denom_bound: u64,
) -> Result<DeformationPath, SiegelError> {
    let j0f = j0.to_float();
    check_deform_preconditions(group, &j0f, omega0)?;
    let n = group.dimension();

    // choose the rational target by continued-fraction rounding of the
    // coordinates, doubling the denominator bound until the whole segment
    // stays nondegenerate
    let basis = invariant_form_space(group, FormKind::Alternating);
    let coords = coordinates_in_basis(&basis, omega0)?;
    let sample_times: Vec<Rational> = if steps == 0 {
        vec![rat(0)]
    } else {
        (0..=steps)
            .map(|k| Rational::new(BigInt::from(k), BigInt::from(steps)))
            .collect()
    };
    let mut chosen: Option<Vec<RationalMatrix>> = None;
    let mut bound = BigInt::from(denom_bound);
    for _ in 0..SEGMENT_RETRY_LIMIT {
        let rounded: Vec<Rational> = if steps == 0 {
            coords.clone()
        } else {
            coords
                .iter()
                .map(|c| best_rational_approx(c, &bound))
                .collect()
        };
        let segment: Vec<RationalMatrix> = sample_times
            .iter()
            .map(|t| {
                let mixed: Vec<Rational> = coords
                    .iter()
                    .zip(&rounded)
                    .map(|(c0, c1)| (Rational::one() - t) * c0 + t * c1)
                    .collect();
                combine(&basis, &mixed)
            })
            .collect();
        if segment.iter().all(|m| !m.det().expect("square").is_zero()) {
            chosen = Some(segment);
            break;
        }
        bound *= BigInt::from(2);
    }
    let segment = chosen.ok_or(SiegelError::DegenerateOnSegment)?;

    // lift the float image of the segment, starting at the identity
    let forms: Vec<DMatrix<f64>> = segment.iter().map(floatlin::to_f64).collect();
    let identity = DMatrix::<f64>::identity(n, n);
    let lifts = lift_form_path(&forms, &identity)?;

    // barycenter curve of the conjugated orbits in the fixed Siegel space
    let base = SiegelBase::from_rational(&omega0.matrix)?;
    let start = SiegelPoint::from_structure(&j0f, &base)?;
    let elements_f: Vec<DMatrix<f64>> = group.elements().iter().map(floatlin::to_f64).collect();
    let mut barycenters = Vec::with_capacity(segment.len());
    let mut step_distances = Vec::new();
    barycenters.push(start.clone());
    for a in lifts.iter().skip(1) {
        let a_inv = floatlin::inverse(a).map_err(|_| SiegelError::Degenerate)?;
        let mut orbit = Vec::with_capacity(elements_f.len());
        for g in &elements_f {
            let conj = a * g * &a_inv;
            let moved =
                &conj * &j0f * floatlin::inverse(&conj).map_err(|_| SiegelError::Degenerate)?;
            orbit.push(SiegelPoint::from_structure(&moved, &base)?);
        }
        let previous = barycenters.last().expect("seeded with the start point");
        let center = karcher_barycenter(&orbit, previous, KARCHER_TOL)?;
        step_distances.push(siegel_distance(previous, &center)?);
        barycenters.push(center);
    }

    // pull the barycenters back to structures for the deforming forms
    let mut structures = Vec::with_capacity(segment.len());
    let mut compat_residuals = Vec::with_capacity(segment.len());
    let mut min_gram_eigenvalues = Vec::with_capacity(segment.len());
    for ((a, c), form) in lifts.iter().zip(&barycenters).zip(&forms) {
        let a_inv = floatlin::inverse(a).map_err(|_| SiegelError::Degenerate)?;
        let j_t = a_inv * c.structure() * a;
        compat_residuals.push((j_t.transpose() * form * &j_t - form).norm());
        min_gram_eigenvalues.push(floatlin::min_eigenvalue_sym(&(j_t.transpose() * form)));
        structures.push(j_t);
    }

    // exact integral endpoint: clearing denominators is a positive rescale,
    // so the endpoint stays in the same Kähler cone
    let (endpoint_matrix, _) = segment.last().expect("nonempty").integer_primitive();
    let endpoint_form =
        BilinearForm::with_invariance(endpoint_matrix, FormKind::Alternating, group.clone())
            .expect("segment forms are invariant combinations");
    let endpoint_structure = if steps == 0 {
        j0.clone()
    } else {
        let j_end = structures.last().expect("nonempty").clone();
        match decide::try_exact_structure(&j_end, &endpoint_form, Some(group)) {
            Some(exact) => ComplexStructure::Exact(exact),
            None => ComplexStructure::Float {
                matrix: j_end,
                tolerance: 1e-9,
            },
        }
    };
    let endpoint_certificate = decide::certify_with_omega(
        group,
        endpoint_form.clone(),
        Some(endpoint_structure.clone()),
        seed,
        1e-9,
    )?;

    Ok(DeformationPath {
        times: sample_times
            .iter()
            .map(|t| t.to_f64().expect("sample time in [0, 1]"))
            .collect(),
        forms,
        lifts,
        structures,
        barycenters,
        step_distances,
        compat_residuals,
        min_gram_eigenvalues,
        endpoint_form,
        endpoint_structure,
        endpoint_certificate,
    })
}

/// A polarisable structure found near a start pair, with its exact
/// certificate and the symmetric-space distance from the start.
#[derive(Debug, Clone)]
pub struct PolarisableSample {
    pub structure: ComplexStructure,
    pub omega: BilinearForm,
    pub certificate: KahlerCertificate,
    pub distance: f64,
}

/// Find a polarisable invariant structure within `radius` of (J₀, ω₀): run
/// the deformation toward rational targets of increasing denominator bound
/// and measure the barycenter displacement in the Siegel space of ω₀ (the
/// endpoint structure conjugated back along the lift). Denominator bounds
/// double per probe, so the targets converge to ω₀ and the displacement to
/// zero.
pub fn sample_polarisable_near(
    group: &Arc<FiniteMatrixGroup>,
    j0: &ComplexStructure,
    omega0: &BilinearForm,
    radius: f64,
    seed: u64,
) -> Result<PolarisableSample, SiegelError> {
    let mut bound = DEFAULT_DENOM_BOUND;
    for _ in 0..SAMPLE_PROBE_LIMIT {
        let path = deform_with_denominator_bound(group, j0, omega0, SAMPLE_STEPS, seed, bound)?;
        let distance = siegel_distance(
            path.barycenters.first().expect("nonempty"),
            path.barycenters.last().expect("nonempty"),
        )?;
        if distance <= radius {
            return Ok(PolarisableSample {
                structure: path.endpoint_structure.clone(),
                omega: path.endpoint_form.clone(),
                certificate: path.endpoint_certificate,
                distance,
            });
        }
        bound = bound.saturating_mul(2);
    }
    Err(SiegelError::RadiusTooSmall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn std_base(k: usize) -> SiegelBase {
        SiegelBase::from_rational(&decide::standard_symplectic(k)).unwrap()
    }

    fn point_from_gram(g: DMatrix<f64>, base: &SiegelBase) -> SiegelPoint {
        SiegelPoint::from_gram(g, base).unwrap()
    }

    #[test]
    fn distance_to_self_is_zero() {
        let base = std_base(1);
        let p = point_from_gram(DMatrix::identity(2, 2), &base);
        assert!(siegel_distance(&p, &p).unwrap() < 1e-12);
    }

    #[test]
    fn distance_of_diagonal_stretch() {
        // Q = diag(e, 1/e) satisfies the constraint against the standard
        // form; log eigenvalues are ±1 so the distance from I is √2
        let base = std_base(1);
        let p = point_from_gram(DMatrix::identity(2, 2), &base);
        let q_mat = dmatrix![std::f64::consts::E, 0.0; 0.0, 1.0 / std::f64::consts::E];
        let q = point_from_gram(q_mat.clone(), &base);
        assert!((q.gram() - &q_mat).norm() < 1e-12, "already on constraint");
        let d = siegel_distance(&p, &q).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-10);
        assert!((siegel_distance(&q, &p).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn action_of_identity_and_center_fix_points() {
        let base = std_base(1);
        let q = point_from_gram(dmatrix![2.0, 0.5; 0.5, 0.625], &base);
        let id = DMatrix::<f64>::identity(2, 2);
        let fixed = sp_action(&id, &q).unwrap();
        assert!((fixed.gram() - q.gram()).norm() < 1e-12);
        let minus_id = -id;
        let fixed2 = sp_action(&minus_id, &q).unwrap();
        assert!((fixed2.gram() - q.gram()).norm() < 1e-12);
    }

    #[test]
    fn action_rejects_non_symplectic() {
        let base = std_base(1);
        let p = point_from_gram(DMatrix::identity(2, 2), &base);
        let a = dmatrix![2.0, 0.0; 0.0, 2.0];
        assert!(matches!(
            sp_action(&a, &p),
            Err(SiegelError::NotSymplectic(_))
        ));
    }

    #[test]
    fn barycenter_of_single_point() {
        let base = std_base(1);
        let p = point_from_gram(dmatrix![3.0, 1.0; 1.0, 0.7], &base);
        let b = karcher_barycenter(std::slice::from_ref(&p), &p, 1e-12).unwrap();
        assert!((b.gram() - p.gram()).norm() < 1e-10);
    }

    #[test]
    fn barycenter_of_two_points_is_geometric_mean() {
        // closed-form oracle: P₁ # P₂ = P₁^{1/2}(P₁^{-1/2}P₂P₁^{-1/2})^{1/2}P₁^{1/2}
        let base = std_base(1);
        let p1 = point_from_gram(dmatrix![2.0, 0.0; 0.0, 0.5], &base);
        let p2 = point_from_gram(dmatrix![1.25, 0.5; 0.5, 1.0], &base);
        let mean = karcher_barycenter(&[p1.clone(), p2.clone()], &p1, 1e-12).unwrap();
        let s = floatlin::spd_sqrt(p1.gram()).unwrap();
        let si = floatlin::spd_inv_sqrt(p1.gram()).unwrap();
        let inner = floatlin::spd_sqrt(&(&si * p2.gram() * &si)).unwrap();
        let oracle = &s * inner * &s;
        assert!((mean.gram() - oracle).norm() < 1e-8);
    }

    #[test]
    fn lift_constant_path_is_identity() {
        let om = floatlin::to_f64(&decide::standard_symplectic(1));
        let path = vec![om.clone(), om.clone(), om];
        let lifts = lift_form_path(&path, &DMatrix::identity(2, 2)).unwrap();
        for a in &lifts {
            assert!((a - DMatrix::<f64>::identity(2, 2)).norm() < 1e-12);
        }
    }

    #[test]
    fn lift_scalar_path_is_scalar_root() {
        let om = floatlin::to_f64(&decide::standard_symplectic(1));
        let samples = 9;
        let path: Vec<DMatrix<f64>> = (0..=samples)
            .map(|k| &om * (1.0 + k as f64 / samples as f64))
            .collect();
        let lifts = lift_form_path(&path, &DMatrix::identity(2, 2)).unwrap();
        for (k, a) in lifts.iter().enumerate() {
            let t = k as f64 / samples as f64;
            let expected = DMatrix::<f64>::identity(2, 2) * (1.0 + t).sqrt();
            assert!((a - expected).norm() < 1e-10, "sample {k}");
        }
    }

    #[test]
    fn lift_residuals_on_smooth_path() {
        // a smooth wiggle of the standard form through scalar and shear parts
        let om0 = floatlin::to_f64(&decide::standard_symplectic(1));
        let samples = 24;
        let path: Vec<DMatrix<f64>> = (0..=samples)
            .map(|k| {
                let t = k as f64 / samples as f64;
                let g = dmatrix![1.0 + 0.2 * t, 0.1 * t; 0.0, 1.0 / (1.0 + 0.2 * t)];
                g.transpose() * &om0 * g
            })
            .collect();
        let lifts = lift_form_path(&path, &DMatrix::identity(2, 2)).unwrap();
        for (a, w) in lifts.iter().zip(&path) {
            assert!((a.transpose() * &om0 * a - w).norm() < 1e-9);
        }
    }

    #[test]
    fn lift_rejects_big_steps() {
        let om = floatlin::to_f64(&decide::standard_symplectic(1));
        let path = vec![om.clone(), om * 3.0];
        assert!(matches!(
            lift_form_path(&path, &DMatrix::identity(2, 2)),
            Err(SiegelError::StepTooLarge(_))
        ));
    }
}
