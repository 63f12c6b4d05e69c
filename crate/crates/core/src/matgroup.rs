//! Finite integer matrix groups: closure from generators, the Reynolds
//! averaging operator, and exact solvers for invariant bilinear forms.

use crate::exactlin::{rat, Rational, RationalMatrix};
use num_traits::{One, Signed};
use std::collections::HashSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator is not square or dimensions disagree")]
    DimensionMismatch,
    #[error("generator has a non-integer entry")]
    NonIntegral,
    #[error("generator determinant is not +1 or -1")]
    NonUnimodular,
    #[error("group closure exceeded max_order = {0}; generators may generate an infinite group")]
    OrderExceeded(usize),
    #[error("form matrix does not match the declared kind")]
    BadFormKind,
    #[error("form is not exactly invariant under the group")]
    NotInvariant,
}

/// Symmetry class of a bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Symmetric,
    Alternating,
}

/// A finite subgroup of GL(n, Z), stored with its complete element list.
///
/// Elements are enumerated breadth-first from the identity: each discovered
/// element is multiplied on the right by the generators in index order, and
/// new products are appended in discovery order. The list is therefore
/// deterministic for a fixed generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMatrixGroup {
    dimension: usize,
    generators: Vec<RationalMatrix>,
    elements: Vec<RationalMatrix>,
    order: usize,
}

impl FiniteMatrixGroup {
    /// Enumerate the group generated by integer matrices of determinant ±1.
    /// Fails with `OrderExceeded` instead of hanging when the generators do
    /// not generate a finite group.
    pub fn close_group(
        generators: Vec<RationalMatrix>,
        max_order: usize,
    ) -> Result<Arc<Self>, GroupError> {
        let dimension = match generators.first() {
            Some(g) => g.rows(),
            None => return Err(GroupError::DimensionMismatch),
        };
        for g in &generators {
            if !g.is_square() || g.rows() != dimension {
                return Err(GroupError::DimensionMismatch);
            }
            if !g.is_integral() {
                return Err(GroupError::NonIntegral);
            }
            let det = g.det().expect("square by construction");
            if det != rat(1) && det != rat(-1) {
                return Err(GroupError::NonUnimodular);
            }
        }
        let identity = RationalMatrix::identity(dimension);
        let mut elements = vec![identity.clone()];
        let mut seen: HashSet<RationalMatrix> = HashSet::from([identity]);
        let mut cursor = 0;
        while cursor < elements.len() {
            let current = elements[cursor].clone();
            for g in &generators {
                let product = current.mul(g);
                if seen.insert(product.clone()) {
                    if elements.len() == max_order {
                        return Err(GroupError::OrderExceeded(max_order));
                    }
                    elements.push(product);
                }
            }
            cursor += 1;
        }
        let order = elements.len();
        Ok(Arc::new(Self {
            dimension,
            generators,
            elements,
            order,
        }))
    }

    /// The trivial group acting on Z^n.
    pub fn trivial(dimension: usize) -> Arc<Self> {
        Self::close_group(vec![RationalMatrix::identity(dimension)], 1)
            .expect("trivial group closes")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[RationalMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[RationalMatrix] {
        &self.elements
    }

    /// Exact invariance of a form under the congruence action: gᵀ F g = F
    /// for every generator (and hence for every element).
    pub fn leaves_form_invariant(&self, f: &RationalMatrix) -> bool {
        self.generators
            .iter()
            .all(|g| g.transpose().mul(f).mul(g) == *f)
    }
}

/// Reynolds average of a matrix of bilinear-form coefficients:
/// (1/|G|) Σ_{g∈G} gᵀ F g. The result is exactly invariant.
pub fn reynolds_average(
    group: &FiniteMatrixGroup,
    f: &RationalMatrix,
) -> Result<RationalMatrix, GroupError> {
    let n = group.dimension();
    if f.rows() != n || f.cols() != n {
        return Err(GroupError::DimensionMismatch);
    }
    let mut acc = RationalMatrix::zeros(n, n);
    for g in group.elements() {
        acc = acc.add(&g.transpose().mul(f).mul(g));
    }
    Ok(acc.scale(&Rational::new(1.into(), group.order().into())))
}

/// A bilinear form with symmetry kind and optional invariance metadata.
/// `invariant_under` is only ever set by constructors that have verified the
/// invariance exactly.
#[derive(Debug, Clone)]
pub struct BilinearForm {
    pub matrix: RationalMatrix,
    pub kind: FormKind,
    invariant_under: Option<Arc<FiniteMatrixGroup>>,
}

impl BilinearForm {
    pub fn new(matrix: RationalMatrix, kind: FormKind) -> Result<Self, GroupError> {
        let ok = match kind {
            FormKind::Symmetric => matrix.is_symmetric(),
            FormKind::Alternating => matrix.is_alternating(),
        };
        if !ok {
            return Err(GroupError::BadFormKind);
        }
        Ok(Self {
            matrix,
            kind,
            invariant_under: None,
        })
    }

    /// As `new`, but additionally verifies exact invariance and records the
    /// group.
    pub fn with_invariance(
        matrix: RationalMatrix,
        kind: FormKind,
        group: Arc<FiniteMatrixGroup>,
    ) -> Result<Self, GroupError> {
        if !group.leaves_form_invariant(&matrix) {
            return Err(GroupError::NotInvariant);
        }
        let mut form = Self::new(matrix, kind)?;
        form.invariant_under = Some(group);
        Ok(form)
    }

    pub fn invariance_group(&self) -> Option<&Arc<FiniteMatrixGroup>> {
        self.invariant_under.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    /// Rescale by a positive rational; invariance metadata survives.
    pub fn rescaled(&self, s: &Rational) -> Self {
        assert!(s.is_positive());
        Self {
            matrix: self.matrix.scale(s),
            kind: self.kind,
            invariant_under: self.invariant_under.clone(),
        }
    }
}

/// Index of the free coordinates for a form of the given kind: pairs (i, j)
/// with i < j for alternating forms, i <= j for symmetric ones, scanned in
/// row-major order. This fixed ordering makes the solver's basis
/// reproducible.
fn coordinate_pairs(n: usize, kind: FormKind) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n {
        let start = match kind {
            FormKind::Symmetric => i,
            FormKind::Alternating => i + 1,
        };
        for j in start..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Materialize a coordinate vector into a form matrix.
fn form_from_coordinates(n: usize, kind: FormKind, coords: &[Rational]) -> RationalMatrix {
    let pairs = coordinate_pairs(n, kind);
    assert_eq!(pairs.len(), coords.len());
    let mut m = RationalMatrix::zeros(n, n);
    for ((i, j), c) in pairs.iter().zip(coords) {
        match kind {
            FormKind::Symmetric => {
                m.set(*i, *j, c.clone());
                if i != j {
                    m.set(*j, *i, c.clone());
                }
            }
            FormKind::Alternating => {
                m.set(*i, *j, c.clone());
                m.set(*j, *i, -c.clone());
            }
        }
    }
    m
}

/// Coordinates of a form matrix with respect to `coordinate_pairs` ordering.
pub(crate) fn form_coordinates(m: &RationalMatrix, kind: FormKind) -> Vec<Rational> {
    coordinate_pairs(m.rows(), kind)
        .iter()
        .map(|&(i, j)| m.at(i, j).clone())
        .collect()
}

/// Exact rational basis of the space of G-invariant forms of the given kind,
/// computed as the kernel of the stacked linear system gᵀ F g - F = 0 over
/// the free coordinates (one block of equations per generator).
pub fn invariant_form_space(group: &Arc<FiniteMatrixGroup>, kind: FormKind) -> Vec<BilinearForm> {
    let n = group.dimension();
    let pairs = coordinate_pairs(n, kind);
    let p = pairs.len();
    let gens = group.generators();
    let mut system = RationalMatrix::zeros(gens.len() * p, p);
    for (gi, g) in gens.iter().enumerate() {
        for (row, &(i, j)) in pairs.iter().enumerate() {
            // entry (i, j) of gᵀ F g - F as a linear function of the
            // coordinates x_(a,b)
            for (col, &(a, b)) in pairs.iter().enumerate() {
                let mut coeff = match kind {
                    FormKind::Symmetric => {
                        if a == b {
                            g.at(a, i) * g.at(a, j)
                        } else {
                            g.at(a, i) * g.at(b, j) + g.at(b, i) * g.at(a, j)
                        }
                    }
                    FormKind::Alternating => g.at(a, i) * g.at(b, j) - g.at(b, i) * g.at(a, j),
                };
                if col == row {
                    coeff -= Rational::one();
                }
                system.set(gi * p + row, col, coeff);
            }
        }
    }
    system
        .kernel_basis()
        .into_iter()
        .map(|coords| {
            let matrix = form_from_coordinates(n, kind, &coords);
            BilinearForm::with_invariance(matrix, kind, group.clone())
                .expect("kernel vectors are exactly invariant")
        })
        .collect()
}

/// The canonical invariant positive form S = Σ_{g∈G} gᵀ g. The unnormalized
/// integer sum is used so that S stays integral; invariance and positivity
/// are unaffected by the scalar.
pub fn invariant_positive_form(group: &Arc<FiniteMatrixGroup>) -> BilinearForm {
    let n = group.dimension();
    let mut acc = RationalMatrix::zeros(n, n);
    for g in group.elements() {
        acc = acc.add(&g.transpose().mul(g));
    }
    debug_assert_eq!(acc.ldlt_signature(), Ok((n, 0, 0)));
    BilinearForm::with_invariance(acc, FormKind::Symmetric, group.clone())
        .expect("gram sum is exactly invariant")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;

    pub(crate) fn c4_rotation() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&[&[0, -1], &[1, 0]])
    }

    pub(crate) fn s3_generators() -> Vec<RationalMatrix> {
        vec![
            RationalMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]),
            RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]),
        ]
    }

    /// Independent closure oracle: saturate the set of products pair by pair
    /// until it stabilizes, with no queue discipline.
    fn brute_force_order(generators: &[RationalMatrix], cap: usize) -> usize {
        let n = generators[0].rows();
        let mut set: HashSet<RationalMatrix> = HashSet::new();
        set.insert(RationalMatrix::identity(n));
        for g in generators {
            set.insert(g.clone());
        }
        loop {
            let snapshot: Vec<_> = set.iter().cloned().collect();
            let before = set.len();
            for a in &snapshot {
                for b in &snapshot {
                    set.insert(a.mul(b));
                    assert!(set.len() <= cap, "oracle exceeded cap");
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn close_group_negative_identity() {
        let g =
            FiniteMatrixGroup::close_group(vec![RationalMatrix::identity(2).neg()], 100).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn close_group_c4() {
        let g = FiniteMatrixGroup::close_group(vec![c4_rotation()], 100).unwrap();
        assert_eq!(g.order(), 4);
        // powers of the rotation matrix
        let c = c4_rotation();
        let mut power = RationalMatrix::identity(2);
        for _ in 0..4 {
            assert!(g.elements().contains(&power));
            power = power.mul(&c);
        }
    }

    #[test]
    fn close_group_s3_matches_brute_force() {
        let gens = s3_generators();
        let g = FiniteMatrixGroup::close_group(gens.clone(), 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(brute_force_order(&gens, 100), 6);
    }

    #[test]
    fn close_group_rejects_bad_input() {
        let nonintegral =
            RationalMatrix::from_rows(vec![vec![ratio(1, 2), rat(0)], vec![rat(0), rat(1)]]);
        assert_eq!(
            FiniteMatrixGroup::close_group(vec![nonintegral], 10).unwrap_err(),
            GroupError::NonIntegral
        );
        let detfour = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]);
        assert_eq!(
            FiniteMatrixGroup::close_group(vec![detfour], 10).unwrap_err(),
            GroupError::NonUnimodular
        );
        let shear = RationalMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            FiniteMatrixGroup::close_group(vec![shear], 64).unwrap_err(),
            GroupError::OrderExceeded(64)
        );
    }

    #[test]
    fn reynolds_fixes_forms_under_plus_minus_identity() {
        let g =
            FiniteMatrixGroup::close_group(vec![RationalMatrix::identity(2).neg()], 10).unwrap();
        let f = RationalMatrix::from_i64_rows(&[&[3, 1], &[-2, 5]]);
        assert_eq!(reynolds_average(&g, &f).unwrap(), f);
    }

    #[test]
    fn reynolds_c4_averages_diagonal() {
        // conjugates of diag(2,0) under the four rotations sum to diag(4,4)
        let g = FiniteMatrixGroup::close_group(vec![c4_rotation()], 10).unwrap();
        let f = RationalMatrix::diagonal(&[rat(2), rat(0)]);
        assert_eq!(
            reynolds_average(&g, &f).unwrap(),
            RationalMatrix::identity(2)
        );
    }

    #[test]
    fn reynolds_preserves_alternation() {
        let g = FiniteMatrixGroup::close_group(s3_generators(), 100).unwrap();
        let f = RationalMatrix::from_i64_rows(&[&[0, 3], &[-3, 0]]);
        let avg = reynolds_average(&g, &f).unwrap();
        assert!(avg.is_alternating());
    }

    #[test]
    fn invariant_alternating_space_c4() {
        let g = FiniteMatrixGroup::close_group(vec![c4_rotation()], 10).unwrap();
        let basis = invariant_form_space(&g, FormKind::Alternating);
        assert_eq!(basis.len(), 1);
        let m = &basis[0].matrix;
        // spanned by the standard form up to scale
        let std = RationalMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        assert!(m == &std || *m == std.neg());
    }

    #[test]
    fn invariant_alternating_space_s3_is_zero() {
        // the order-2 generator has determinant -1 and negates any
        // alternating form in dimension 2
        let g = FiniteMatrixGroup::close_group(s3_generators(), 100).unwrap();
        assert!(invariant_form_space(&g, FormKind::Alternating).is_empty());
    }

    #[test]
    fn invariant_alternating_space_trivial_dim4() {
        let g = FiniteMatrixGroup::trivial(4);
        assert_eq!(invariant_form_space(&g, FormKind::Alternating).len(), 6);
    }

    #[test]
    fn invariant_symmetric_space_dimensions() {
        // the quarter rotation only fixes multiples of the identity
        let g = FiniteMatrixGroup::close_group(vec![c4_rotation()], 10).unwrap();
        let basis = invariant_form_space(&g, FormKind::Symmetric);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].matrix, RationalMatrix::identity(2));
        assert_eq!(
            invariant_form_space(&FiniteMatrixGroup::trivial(3), FormKind::Symmetric).len(),
            6
        );
    }

    #[test]
    fn positive_form_trivial_group() {
        let g = FiniteMatrixGroup::trivial(3);
        assert_eq!(
            invariant_positive_form(&g).matrix,
            RationalMatrix::identity(3)
        );
    }

    #[test]
    fn positive_form_plus_minus_identity() {
        let g =
            FiniteMatrixGroup::close_group(vec![RationalMatrix::identity(2).neg()], 10).unwrap();
        assert_eq!(
            invariant_positive_form(&g).matrix,
            RationalMatrix::identity(2).scale(&rat(2))
        );
    }

    #[test]
    fn positive_form_s3() {
        let g = FiniteMatrixGroup::close_group(s3_generators(), 100).unwrap();
        let s = invariant_positive_form(&g);
        assert!(s.matrix.is_integral());
        assert_eq!(s.matrix.ldlt_signature().unwrap(), (2, 0, 0));
        assert!(g.leaves_form_invariant(&s.matrix));
    }
}
