//! Exact dense linear algebra over the rationals.
//!
//! Everything here is computed with arbitrary-precision rational arithmetic:
//! no rounding, no tolerances. Dense storage only; the intended scale is
//! matrices of dimension at most ~20.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational number, always reduced with positive denominator.
pub type Rational = BigRational;

/// A vector of exact rationals.
pub type RationalVector = Vec<Rational>;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// taken from the continued-fraction convergents. Returns `x` itself when
/// its denominator is already within the bound.
pub fn best_rational_approx(x: &Rational, max_den: &BigInt) -> Rational {
    assert!(max_den >= &BigInt::one());
    if x.denom() <= max_den {
        return x.clone();
    }
    let mut p_prev = BigInt::one();
    let mut q_prev = BigInt::zero();
    let a0 = x.floor().to_integer();
    let mut p_curr = a0.clone();
    let mut q_curr = BigInt::one();
    let mut frac = x - BigRational::from_integer(a0);
    while !frac.is_zero() {
        let rec = frac.recip();
        let a = rec.floor().to_integer();
        frac = rec - BigRational::from_integer(a.clone());
        let p_next = &a * &p_curr + &p_prev;
        let q_next = &a * &q_curr + &q_prev;
        if &q_next > max_den {
            break;
        }
        p_prev = p_curr;
        q_prev = q_curr;
        p_curr = p_next;
        q_curr = q_next;
    }
    BigRational::new(p_curr, q_curr)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactLinError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "product shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = self.at(i, k);
                if !a.is_zero() {
                    acc += a * other.at(k, j);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RationalVector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (k, x)| acc + self.at(i, k) * x)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_alternating(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.at(i, i).is_zero() && (0..i).all(|j| *self.at(i, j) == -self.at(j, i))
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Smallest positive rational `s` such that `s * self` is integral with
    /// entry gcd 1. Returns the scaled matrix and `s`; the zero matrix is
    /// returned unchanged with scale 1.
    pub fn integer_primitive(&self) -> (Self, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let mut den_lcm = BigInt::one();
        for x in &self.data {
            den_lcm = den_lcm.lcm(x.denom());
        }
        let mut num_gcd = BigInt::zero();
        for x in &self.data {
            let scaled = x * BigRational::from_integer(den_lcm.clone());
            num_gcd = num_gcd.gcd(scaled.numer());
        }
        let s = BigRational::new(den_lcm, num_gcd);
        (self.scale(&s), s)
    }

    /// Reduced row echelon form together with the rank. Exact Gauss-Jordan
    /// elimination; pivots are the first nonzero entry of each column.
    pub fn rref(&self) -> (Self, usize) {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, found);
            let inv = m.at(pivot_row, col).recip();
            for j in col..m.cols {
                let v = m.at(pivot_row, j) * &inv;
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                if r != pivot_row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for j in col..m.cols {
                        let v = m.at(r, j) - &factor * m.at(pivot_row, j);
                        m.set(r, j, v);
                    }
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right null space `{ v : self * v = 0 }`. The basis is
    /// the canonical one read off the reduced row echelon form: one vector
    /// per free column, with a 1 in the free coordinate.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        let (r, rank) = self.rref();
        let mut pivot_cols = Vec::with_capacity(rank);
        let mut row = 0;
        for col in 0..r.cols {
            if row < rank && r.at(row, col).is_one() {
                // first nonzero of row `row` is at `col` iff everything left is 0
                if (0..col).all(|j| r.at(row, j).is_zero()) {
                    pivot_cols.push(col);
                    row += 1;
                }
            }
        }
        let mut basis = Vec::new();
        for free in 0..r.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); r.cols];
            v[free] = Rational::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -r.at(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact determinant by rational Gaussian elimination.
    pub fn det(&self) -> Result<Rational, ExactLinError> {
        if !self.is_square() {
            return Err(ExactLinError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(found) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Ok(Rational::zero());
            };
            if found != col {
                m.swap_rows(col, found);
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col) / &pivot;
                for j in col..n {
                    let v = m.at(r, j) - &factor * m.at(col, j);
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse via Gauss-Jordan on the augmented matrix.
    pub fn inverse(&self) -> Result<Self, ExactLinError> {
        if !self.is_square() {
            return Err(ExactLinError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (reduced, _) = aug.rref();
        let left_is_identity = (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    reduced.at(i, j).is_one()
                } else {
                    reduced.at(i, j).is_zero()
                }
            })
        });
        if !left_is_identity {
            return Err(ExactLinError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| reduced.at(i, j + n).clone()))
    }

    /// Exact inertia `(pos, neg, zero)` of a symmetric matrix, computed by a
    /// symmetric pivoted LDLᵀ-style reduction. When every diagonal entry of
    /// the active block vanishes, a 2x2 off-diagonal pivot `[[0,a],[a,0]]`
    /// (inertia (1,1)) is used, so alternating-form-derived matrices with
    /// zero diagonals are handled exactly.
    pub fn ldlt_signature(&self) -> Result<(usize, usize, usize), ExactLinError> {
        if !self.is_square() {
            return Err(ExactLinError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Err(ExactLinError::NotSymmetric);
        }
        let mut a: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
        while !a.is_empty() {
            let k = a.len();
            if a.iter().all(|row| row.iter().all(|x| x.is_zero())) {
                zero += k;
                break;
            }
            if let Some(i) = (0..k).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, 0, i);
                let d = a[0][0].clone();
                if d.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                let mut b = vec![vec![Rational::zero(); k - 1]; k - 1];
                for r in 1..k {
                    for c in 1..k {
                        b[r - 1][c - 1] = &a[r][c] - &a[r][0] * &a[0][c] / &d;
                    }
                }
                a = b;
            } else {
                // all diagonals zero, some off-diagonal nonzero
                let (i, j) = (0..k)
                    .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero())
                    .expect("nonzero matrix with zero diagonal has a nonzero off-diagonal");
                swap_sym(&mut a, 0, i);
                let j = if j == 0 { i } else { j };
                swap_sym(&mut a, 1, j);
                let p = a[0][1].clone();
                pos += 1;
                neg += 1;
                let mut b = vec![vec![Rational::zero(); k - 2]; k - 2];
                for r in 2..k {
                    for c in 2..k {
                        b[r - 2][c - 2] =
                            &a[r][c] - (&a[r][0] * &a[1][c] + &a[r][1] * &a[0][c]) / &p;
                    }
                }
                a = b;
            }
        }
        Ok((pos, neg, zero))
    }

    /// Solve `self * x = b` exactly. Returns `None` when the system is
    /// inconsistent; underdetermined systems get the solution with zero free
    /// coordinates.
    pub fn solve(&self, b: &[Rational]) -> Option<RationalVector> {
        assert_eq!(self.rows, b.len());
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, _) = aug.rref();
        let mut x = vec![Rational::zero(); self.cols];
        for i in 0..self.rows {
            let lead = (0..self.cols).find(|&j| !r.at(i, j).is_zero());
            match lead {
                Some(j) => {
                    // in rref the pivot row reads x_j + (free terms) = rhs,
                    // and the free coordinates are pinned to zero
                    x[j] = r.at(i, self.cols).clone();
                }
                None => {
                    if !r.at(i, self.cols).is_zero() {
                        return None;
                    }
                }
            }
        }
        Some(x)
    }
}

fn swap_sym(a: &mut [Vec<Rational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
