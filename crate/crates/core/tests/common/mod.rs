//! Shared corpus and generators for the integration suites.
#![allow(dead_code)]

use kahler_core::cm::CyclotomicAction;
use kahler_core::decide::{compatible_complex_structure, ComplexStructure};
use kahler_core::exactlin::{rat, Rational, RationalMatrix};
use kahler_core::matgroup::{
    invariant_form_space, invariant_positive_form, BilinearForm, FiniteMatrixGroup, FormKind,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn group(gens: Vec<RationalMatrix>) -> Arc<FiniteMatrixGroup> {
    FiniteMatrixGroup::close_group(gens, 20000).expect("corpus group closes")
}

pub fn c4_generator() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&[&[0, -1], &[1, 0]])
}

pub fn block_diag(blocks: &[&RationalMatrix]) -> RationalMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut m = RationalMatrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(offset + i, offset + j, b.at(i, j).clone());
            }
        }
        offset += b.rows();
    }
    m
}

/// Cyclic permutation of the coordinates with an optional sign on the wrap.
pub fn cycle_matrix(n: usize, signed: bool) -> RationalMatrix {
    RationalMatrix::from_fn(n, n, |i, j| {
        if i == (j + 1) % n && j + 1 < n {
            rat(1)
        } else if i == 0 && j == n - 1 {
            if signed {
                rat(-1)
            } else {
                rat(1)
            }
        } else {
            rat(0)
        }
    })
}

pub fn s3_doubled() -> Arc<FiniteMatrixGroup> {
    let r = RationalMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]);
    let s = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
    group(vec![block_diag(&[&r, &r]), block_diag(&[&s, &s])])
}

pub fn c4_plus_c4() -> Arc<FiniteMatrixGroup> {
    let c = c4_generator();
    let id = RationalMatrix::identity(2);
    group(vec![block_diag(&[&c, &id]), block_diag(&[&id, &c])])
}

/// The test corpus: cyclotomic actions of order up to 12, signed permutation
/// groups in dimensions 2 to 6, and direct sums.
pub fn corpus() -> Vec<(String, Arc<FiniteMatrixGroup>)> {
    let mut out: Vec<(String, Arc<FiniteMatrixGroup>)> = Vec::new();
    out.push(("cyclotomic_1".into(), FiniteMatrixGroup::trivial(1)));
    out.push((
        "cyclotomic_2".into(),
        group(vec![RationalMatrix::from_i64_rows(&[&[-1]])]),
    ));
    for m in 3..=12u32 {
        let action = CyclotomicAction::new(m).expect("m >= 3");
        out.push((format!("cyclotomic_{m}"), action.group()));
    }
    out.push((
        "swap_2".into(),
        group(vec![RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])]),
    ));
    out.push(("cycle_3".into(), group(vec![cycle_matrix(3, false)])));
    out.push(("signed_cycle_3".into(), group(vec![cycle_matrix(3, true)])));
    let swap = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
    out.push((
        "pair_swaps_4".into(),
        group(vec![block_diag(&[&swap, &swap])]),
    ));
    out.push(("signed_cycle_4".into(), group(vec![cycle_matrix(4, true)])));
    let flip = RationalMatrix::diagonal(&[rat(-1), rat(1), rat(1), rat(1)]);
    out.push((
        "hyperoctahedral_4".into(),
        group(vec![cycle_matrix(4, true), flip]),
    ));
    out.push(("cycle_5".into(), group(vec![cycle_matrix(5, false)])));
    out.push(("signed_cycle_6".into(), group(vec![cycle_matrix(6, true)])));
    out.push(("s3_doubled".into(), s3_doubled()));
    out.push(("c4_plus_c4".into(), c4_plus_c4()));
    let c3 = RationalMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]);
    let id = RationalMatrix::identity(2);
    out.push((
        "c3_plus_c3".into(),
        group(vec![block_diag(&[&c3, &id]), block_diag(&[&id, &c3])]),
    ));
    out.push((
        "c3_plus_c4".into(),
        group(vec![
            block_diag(&[&c3, &id]),
            block_diag(&[&id, &c4_generator()]),
        ]),
    ));
    out
}

/// Random unimodular integer matrix: a short product of elementary row
/// additions, sign flips and transpositions.
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> RationalMatrix {
    if n == 1 {
        return RationalMatrix::from_i64_rows(&[&[if rng.random_range(0..2) == 0 {
            1
        } else {
            -1
        }]]);
    }
    let mut u = RationalMatrix::identity(n);
    for _ in 0..2 * n + 2 {
        let kind = rng.random_range(0..3u32);
        let mut e = RationalMatrix::identity(n);
        match kind {
            0 => {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n);
                if i == j {
                    j = (j + 1) % n;
                }
                e.set(i, j, rat(rng.random_range(-2..=2i64)));
            }
            1 => {
                let i = rng.random_range(0..n);
                e.set(i, i, rat(-1));
            }
            _ => {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n);
                if i == j {
                    j = (j + 1) % n;
                }
                e.set(i, i, rat(0));
                e.set(j, j, rat(0));
                e.set(i, j, rat(1));
                e.set(j, i, rat(1));
            }
        }
        u = u.mul(&e);
    }
    u
}

/// An exactly invariant rational start pair (J0, ω0) whose form has large
/// ("irrational-looking") denominators: the certificate form perturbed along
/// the invariant basis by float-derived coefficients.
pub fn perturbed_start(
    group: &Arc<FiniteMatrixGroup>,
    omega: &BilinearForm,
    magnitude: f64,
) -> (ComplexStructure, BilinearForm) {
    let basis = invariant_form_space(group, FormKind::Alternating);
    for attempt in 0..8 {
        let eps = magnitude / (1 << attempt) as f64;
        let mut matrix = omega.matrix.clone();
        for (i, b) in basis.iter().enumerate() {
            let wiggle = eps * (1.0 + i as f64) * std::f64::consts::SQRT_2;
            let coeff = Rational::from_float(wiggle).expect("finite");
            matrix = matrix.add(&b.matrix.scale(&coeff));
        }
        if matrix.det().expect("square").is_zero() {
            continue;
        }
        let form = BilinearForm::with_invariance(matrix, FormKind::Alternating, group.clone())
            .expect("perturbation stays in the invariant space");
        let s = invariant_positive_form(group);
        let j0 = compatible_complex_structure(&s, &form, 1e-9)
            .expect("polar construction on a nondegenerate invariant pair");
        return (j0, form);
    }
    panic!("could not build a nondegenerate perturbed form");
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// exp(Ω⁻¹ S) preserves Ω for any symmetric S.
pub fn random_symplectic(
    omega: &nalgebra::DMatrix<f64>,
    rng: &mut impl Rng,
    scale: f64,
) -> nalgebra::DMatrix<f64> {
    let n = omega.nrows();
    let inv = omega.clone().try_inverse().unwrap();
    let mut sym = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = rng.random_range(-scale..scale);
            sym[(i, j)] = v;
            sym[(j, i)] = v;
        }
    }
    kahler_core::floatlin::expm(&(inv * sym))
}

pub fn random_point(
    base: &kahler_core::siegel::SiegelBase,
    rng: &mut impl Rng,
) -> kahler_core::siegel::SiegelPoint {
    let n = base.dimension();
    let id_point =
        kahler_core::siegel::SiegelPoint::from_gram(nalgebra::DMatrix::identity(n, n), base)
            .unwrap();
    let a = random_symplectic(base.omega(), rng, 0.4);
    kahler_core::siegel::sp_action(&a, &id_point).unwrap()
}
