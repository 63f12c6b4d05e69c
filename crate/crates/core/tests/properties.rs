//! Cross-module invariants, exercised with proptest where the statement is
//! universally quantified and with deterministic sweeps over the corpus
//! otherwise.

mod common;

use common::*;
use kahler_core::decide::{
    decide_kahler, find_invariant_symplectic, ComplexStructure, Decision, NonexistenceWitness,
    SymplecticSearch,
};
use kahler_core::exactlin::{rat, RationalMatrix};
use kahler_core::floatlin::to_f64;
use kahler_core::matgroup::{
    invariant_form_space, invariant_positive_form, reynolds_average, FiniteMatrixGroup, FormKind,
};
use kahler_core::siegel::{
    karcher_barycenter, siegel_distance, sp_action, SiegelBase, SiegelPoint,
};
use num_traits::Zero;
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols)
        .prop_map(move |v| RationalMatrix::from_fn(rows, cols, |i, j| rat(v[i * cols + j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(n in 2usize..=4, seed_a in any::<[i64; 16]>(), seed_b in any::<[i64; 16]>()) {
        let a = RationalMatrix::from_fn(n, n, |i, j| rat(seed_a[i * n + j] % 10));
        let b = RationalMatrix::from_fn(n, n, |i, j| rat(seed_b[i * n + j] % 10));
        prop_assert_eq!(a.mul(&b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn inverse_is_exact(m in int_matrix(4, 4)) {
        prop_assume!(!m.det().unwrap().is_zero());
        let inv = m.inverse().unwrap();
        prop_assert_eq!(m.mul(&inv), RationalMatrix::identity(4));
    }

    #[test]
    fn rank_nullity(rows in 1usize..=4, cols in 1usize..=5, entries in prop::collection::vec(-9i64..=9, 20)) {
        let m = RationalMatrix::from_fn(rows, cols, |i, j| rat(entries[i * cols + j]));
        let (_, rank) = m.rref();
        prop_assert_eq!(rank + m.kernel_basis().len(), cols);
    }

    #[test]
    fn sylvester_law_of_inertia(n in 2usize..=6, a in prop::collection::vec(-5i64..=5, 36), s in prop::collection::vec(-3i64..=3, 36)) {
        let raw = RationalMatrix::from_fn(n, n, |i, j| rat(a[i * n + j]));
        let sym = raw.add(&raw.transpose());
        let cong = RationalMatrix::from_fn(n, n, |i, j| rat(s[i * n + j]));
        prop_assume!(!cong.det().unwrap().is_zero());
        let before = sym.ldlt_signature().unwrap();
        let after = cong.transpose().mul(&sym).mul(&cong).ldlt_signature().unwrap();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn corpus_groups_are_closed() {
    for (name, group) in corpus() {
        if group.order() > 48 {
            continue;
        }
        let elements = group.elements();
        for a in elements {
            for b in elements {
                assert!(
                    elements.contains(&a.mul(b)),
                    "{name}: product escapes the element list"
                );
            }
        }
        for a in elements {
            assert!(
                elements.contains(&a.inverse().unwrap()),
                "{name}: inverse escapes the element list"
            );
        }
    }
}

#[test]
fn reynolds_is_idempotent_on_invariant_forms() {
    for (name, group) in corpus() {
        for form in invariant_form_space(&group, FormKind::Alternating) {
            let averaged = reynolds_average(&group, &form.matrix).unwrap();
            assert_eq!(averaged, form.matrix, "{name}");
        }
    }
}

#[test]
fn invariant_basis_elements_are_exactly_invariant() {
    for (name, group) in corpus() {
        for kind in [FormKind::Alternating, FormKind::Symmetric] {
            for form in invariant_form_space(&group, kind) {
                assert!(
                    group.leaves_form_invariant(&form.matrix),
                    "{name}: basis element not invariant"
                );
            }
        }
    }
}

#[test]
fn positive_form_has_full_positive_inertia() {
    for (name, group) in corpus() {
        let s = invariant_positive_form(&group);
        let n = group.dimension();
        assert_eq!(
            s.matrix.ldlt_signature().unwrap(),
            (n, 0, 0),
            "{name}: wrong inertia"
        );
        assert!(s.matrix.is_integral(), "{name}");
    }
}

#[test]
fn decision_is_conjugation_invariant() {
    let mut rng = seeded_rng(7);
    for (name, group) in corpus() {
        let n = group.dimension();
        let tries = if n > 4 { 1 } else { 2 };
        let baseline = decide_kahler(&group, 0, 1e-9).unwrap().decision;
        for _ in 0..tries {
            let u = random_unimodular(n, &mut rng);
            let u_inv = u.inverse().unwrap();
            let conjugated: Vec<RationalMatrix> = group
                .generators()
                .iter()
                .map(|g| u.mul(g).mul(&u_inv))
                .collect();
            let other = FiniteMatrixGroup::close_group(conjugated, 20000).unwrap();
            let decision = decide_kahler(&other, 0, 1e-9).unwrap().decision;
            assert_eq!(
                decision, baseline,
                "{name}: conjugation changed the decision"
            );
        }
    }
}

#[test]
fn exact_structures_satisfy_exact_identities() {
    let mut exact_seen = 0;
    for (name, group) in corpus() {
        let cert = decide_kahler(&group, 0, 1e-9).unwrap();
        if cert.decision != Decision::Kahler {
            continue;
        }
        if let Some(ComplexStructure::Exact(j)) = &cert.j {
            exact_seen += 1;
            let n = group.dimension();
            assert_eq!(
                j.mul(j),
                RationalMatrix::identity(n).neg(),
                "{name}: J^2 != -I"
            );
            for g in group.generators() {
                assert_eq!(g.mul(j), j.mul(g), "{name}: J does not commute");
            }
        }
    }
    assert!(exact_seen >= 2, "expected several exact-grade structures");
}

#[test]
fn nonexistence_witnesses_are_seed_independent() {
    for (name, group) in corpus() {
        let outcomes: Vec<Option<NonexistenceWitness>> = [0u64, 1, 12345]
            .iter()
            .map(|&seed| match find_invariant_symplectic(&group, seed) {
                SymplecticSearch::NotFound(w) => Some(w),
                SymplecticSearch::Found(_) => None,
            })
            .collect();
        if outcomes[0].is_some() {
            assert_eq!(outcomes[0], outcomes[1], "{name}");
            assert_eq!(outcomes[0], outcomes[2], "{name}");
        }
    }
}

#[test]
fn sp_action_is_an_isometry() {
    let mut rng = seeded_rng(11);
    for k in [1usize, 2] {
        let base = SiegelBase::from_rational(&kahler_core::decide::standard_symplectic(k)).unwrap();
        for _ in 0..6 {
            let p = random_point(&base, &mut rng);
            let q = random_point(&base, &mut rng);
            let a = random_symplectic(base.omega(), &mut rng, 0.4);
            let d_before = siegel_distance(&p, &q).unwrap();
            let d_after =
                siegel_distance(&sp_action(&a, &p).unwrap(), &sp_action(&a, &q).unwrap()).unwrap();
            assert!(
                (d_before - d_after).abs() <= 1e-10,
                "dim {}: isometry violated by {:.3e}",
                2 * k,
                (d_before - d_after).abs()
            );
        }
    }
}

#[test]
fn barycenter_is_equivariant() {
    let mut rng = seeded_rng(13);
    for k in [1usize, 2] {
        let base = SiegelBase::from_rational(&kahler_core::decide::standard_symplectic(k)).unwrap();
        for _ in 0..3 {
            let points: Vec<SiegelPoint> = (0..3).map(|_| random_point(&base, &mut rng)).collect();
            let a = random_symplectic(base.omega(), &mut rng, 0.3);
            let center = karcher_barycenter(&points, &points[0], 1e-12).unwrap();
            let moved_points: Vec<SiegelPoint> =
                points.iter().map(|p| sp_action(&a, p).unwrap()).collect();
            let center_of_moved =
                karcher_barycenter(&moved_points, &moved_points[0], 1e-12).unwrap();
            let moved_center = sp_action(&a, &center).unwrap();
            let gap = siegel_distance(&center_of_moved, &moved_center).unwrap();
            assert!(gap <= 1e-8, "dim {}: equivariance gap {:.3e}", 2 * k, gap);
        }
    }
}

#[test]
fn orbit_barycenter_is_group_fixed() {
    let mut rng = seeded_rng(17);
    let cases: Vec<_> = vec![
        ("c4", group(vec![c4_generator()])),
        ("c4_plus_c4", c4_plus_c4()),
    ];
    for (name, grp) in cases {
        let cert = decide_kahler(&grp, 0, 1e-9).unwrap();
        let omega = cert.omega.as_ref().unwrap();
        let base = SiegelBase::from_rational(&omega.matrix).unwrap();
        let n = grp.dimension();
        let start = random_point(&base, &mut rng);
        let orbit: Vec<SiegelPoint> = grp
            .elements()
            .iter()
            .map(|g| sp_action(&to_f64(g), &start).unwrap())
            .collect();
        let center = karcher_barycenter(&orbit, &start, 1e-12).unwrap();
        for g in grp.elements() {
            let moved = sp_action(&to_f64(g), &center).unwrap();
            let displacement = siegel_distance(&center, &moved).unwrap();
            assert!(
                displacement <= 1e-8,
                "{name}: displacement {displacement:.3e}"
            );
        }
        assert!(
            center.constraint_residual() <= 1e-8 * n as f64,
            "{name}: constraint residual"
        );
    }
}

#[test]
fn cm_route_agrees_with_decider_for_small_totients() {
    use kahler_core::cm::{euler_phi, CyclotomicAction};
    for m in 3..=30u32 {
        if euler_phi(m) > 8 {
            continue;
        }
        let action = CyclotomicAction::new(m).unwrap();
        let cert = decide_kahler(&action.group(), 0, 1e-9).unwrap();
        assert_eq!(
            cert.decision,
            Decision::Kahler,
            "m = {m}: the closed-form structure exists, the decider must agree"
        );
    }
}

#[test]
fn deformation_of_scaled_form_keeps_structure_constant() {
    use kahler_core::exactlin::Rational;
    use kahler_core::matgroup::BilinearForm;
    use kahler_core::siegel::deform_to_polarisable;

    // a one-dimensional invariant space: every form on the segment is a
    // positive multiple of the base one, so the deformed structure never
    // moves even though the form does
    let grp = group(vec![c4_generator()]);
    let cert = decide_kahler(&grp, 0, 1e-9).unwrap();
    let base = cert.omega.as_ref().unwrap();
    let pi = Rational::from_float(std::f64::consts::PI).unwrap();
    let omega0 =
        BilinearForm::with_invariance(base.matrix.scale(&pi), FormKind::Alternating, grp.clone())
            .unwrap();
    let s = invariant_positive_form(&grp);
    let j0 = kahler_core::decide::compatible_complex_structure(&s, &omega0, 1e-9).unwrap();
    let path = deform_to_polarisable(&grp, &j0, &omega0, 8, 0).unwrap();
    assert_eq!(path.times.len(), 9);
    assert!(
        path.max_step_distance() <= 1e-9,
        "{}",
        path.max_step_distance()
    );
    assert!(path.endpoint_form.matrix.is_integral());
    assert!(path.endpoint_certificate.verification.pass());
    // the rounded target is a small-denominator multiple, so the integral
    // endpoint is a modest rescale of the base form
    let (primitive, _) = path.endpoint_form.matrix.integer_primitive();
    assert_eq!(primitive, base.matrix);
}

#[test]
fn polarisable_samples_within_unit_radius_on_kahler_corpus() {
    use kahler_core::siegel::sample_polarisable_near;
    for (name, grp) in corpus() {
        if grp.dimension() > 4 {
            continue;
        }
        let cert = decide_kahler(&grp, 0, 1e-9).unwrap();
        if cert.decision != Decision::Kahler {
            continue;
        }
        let (j0, omega0) = perturbed_start(&grp, cert.omega.as_ref().unwrap(), 0.04);
        let sample = sample_polarisable_near(&grp, &j0, &omega0, 1.0, 0)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(sample.distance <= 1.0, "{name}");
        assert!(sample.certificate.verification.pass(), "{name}");
    }
}

#[test]
fn sampling_with_rational_start_returns_the_start() {
    use kahler_core::siegel::sample_polarisable_near;
    let grp = group(vec![c4_generator()]);
    let cert = decide_kahler(&grp, 0, 1e-9).unwrap();
    let omega0 = cert.omega.clone().unwrap();
    let j0 = cert.j.clone().unwrap();
    let sample = sample_polarisable_near(&grp, &j0, &omega0, 1.0, 0).unwrap();
    assert!(sample.distance <= 1e-10, "distance {:.3e}", sample.distance);
    let (primitive, _) = sample.omega.matrix.integer_primitive();
    assert_eq!(primitive, omega0.matrix);
}

#[test]
fn produced_points_stay_on_the_constraint() {
    let mut rng = seeded_rng(19);
    for k in [1usize, 2] {
        let base = SiegelBase::from_rational(&kahler_core::decide::standard_symplectic(k)).unwrap();
        for _ in 0..8 {
            let p = random_point(&base, &mut rng);
            assert!(p.constraint_residual() <= 1e-8 * (2 * k) as f64);
        }
    }
}
