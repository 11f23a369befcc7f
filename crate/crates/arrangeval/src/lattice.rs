//! Exact integer lattice algebra: Hermite and Smith normal forms.
//!
//! Flats of rational arrangements are governed by integer data: conormal
//! lattices (integer row spans), direction lattices (integer kernels), and
//! congruence systems solved through the Smith normal form. This module
//! provides those tools over `BigInt`, with canonical outputs:
//!
//! - [`hnf`] returns the unique row-style Hermite normal form of a row
//!   lattice (positive pivots, entries above a pivot reduced into
//!   `[0, pivot)`, zero rows dropped), so two generating sets span the same
//!   lattice iff their HNFs are identical matrices.
//! - [`smith`] returns `U · A · V = D` with unimodular `U`, `V` and diagonal
//!   `D` whose entries are nonnegative and form a divisibility chain.
//! - [`kernel_lattice`] and [`row_saturation`] derive the integer kernel and
//!   the saturation of a row lattice from the Smith data; both come back in
//!   canonical HNF form.

use crate::linalg::Matrix;
use crate::rational::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Matrix from a list of equally long rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix from machine-integer rows (test convenience).
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Borrow row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Transposed copy.
    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += t;
                }
            }
        }
        m
    }

    /// Matrix-vector product over `BigInt`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "inner dimensions differ");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    acc += a * x;
                }
                acc
            })
            .collect()
    }

    /// Matrix-vector product with a rational vector.
    pub fn mul_qvec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "inner dimensions differ");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc += Q::from_integer(a.clone()) * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact rational copy.
    pub fn to_rational(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            Q::from_integer(self[(i, j)].clone())
        })
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.to_rational().rank()
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -self[(i, j)].clone();
            self[(i, j)] = x;
        }
    }

    /// row_i -= f * row_src
    fn sub_scaled_row(&mut self, i: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = f * &self[(src, j)];
            self[(i, j)] -= t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// col_j -= f * col_src
    fn sub_scaled_col(&mut self, j: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = f * &self[(i, src)];
            self[(i, j)] -= t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Canonical row-style Hermite normal form of the lattice spanned by the
/// rows of `a`. Pivots are positive, entries above each pivot lie in
/// `[0, pivot)`, zero rows are dropped, and the result is unique for the
/// row lattice.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclidean reduction in column c among rows r..: shrink until one
        // nonzero entry remains, then move it to row r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if m[(i, c)].abs() < m[(b, c)].abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            m.swap_rows(r, b);
            let mut others = false;
            for i in (r + 1)..rows {
                if !m[(i, c)].is_zero() {
                    let q = div_round(&m[(i, c)], &m[(r, c)]);
                    m.sub_scaled_row(i, r, &q);
                    if !m[(i, c)].is_zero() {
                        others = true;
                    }
                }
            }
            if !others {
                break;
            }
        }
        if m[(r, c)].is_zero() {
            continue;
        }
        if m[(r, c)].is_negative() {
            m.negate_row(r);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = m[(i, c)].div_floor(&m[(r, c)]);
            m.sub_scaled_row(i, r, &q);
        }
        r += 1;
    }
    IntMatrix::from_rows(m.to_rows().into_iter().take(r).collect()).normalized_empty(a.ncols())
}

impl IntMatrix {
    /// Keep column count meaningful for matrices with zero rows.
    fn normalized_empty(self, cols: usize) -> IntMatrix {
        if self.rows == 0 {
            IntMatrix::zero(0, cols)
        } else {
            self
        }
    }
}

/// Rounded division: the integer nearest to `a / b` (ties toward zero bias
/// are irrelevant for the Euclidean descent; any consistent choice works).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    // Adjust so that |a - q*b| <= |b|/2 when possible.
    let two_r: BigInt = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form data: `u * a * v = d`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Unimodular row transform.
    pub u: IntMatrix,
    /// Diagonal matrix with a nonnegative divisibility chain.
    pub d: IntMatrix,
    /// Unimodular column transform.
    pub v: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Smith {
    /// The nonzero diagonal entries `d_1 | d_2 | …`.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form of an integer matrix.
///
/// Deterministic: pivot selection scans row-major for a minimal-magnitude
/// nonzero entry. The diagonal entries are nonnegative and each divides the
/// next; `u` and `v` are unimodular with `u * a * v = d`.
pub fn smith(a: &IntMatrix) -> Smith {
    let mut d = a.clone();
    let (rows, cols) = (d.nrows(), d.ncols());
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows && t < cols {
        // Find a minimal-magnitude nonzero entry in the trailing submatrix.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if d[(i, j)].abs() < d[(bi, bj)].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            // Clear column t below the pivot.
            for i in (t + 1)..rows {
                if !d[(i, t)].is_zero() {
                    let q = div_round(&d[(i, t)], &d[(t, t)]);
                    d.sub_scaled_row(i, t, &q);
                    u.sub_scaled_row(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        // Remainder is strictly smaller: promote it to pivot.
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            // Clear row t beyond the pivot.
            for j in (t + 1)..cols {
                if !d[(t, j)].is_zero() {
                    let q = div_round(&d[(t, j)], &d[(t, t)]);
                    d.sub_scaled_col(j, t, &q);
                    v.sub_scaled_col(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let mut fixed = true;
            'scan: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        // Fold row i into row t and restart the reduction.
                        let minus_one = -BigInt::one();
                        d.sub_scaled_row(t, i, &minus_one);
                        u.sub_scaled_row(t, i, &minus_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { u, d, v, rank: t }
}

/// Canonical HNF basis (rows) of the integer kernel `{x ∈ Z^cols : a·x = 0}`.
///
/// The kernel of an integer matrix is automatically saturated.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let n = a.ncols();
    let rows: Vec<Vec<BigInt>> = (s.rank..n).map(|j| s.v.transpose().row(j).to_vec()).collect();
    if rows.is_empty() {
        IntMatrix::zero(0, n)
    } else {
        hnf(&IntMatrix::from_rows(rows))
    }
}

/// Canonical HNF basis of the saturation of the row lattice of `a`:
/// `(Q-span of the rows) ∩ Z^cols`.
pub fn row_saturation(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    if s.rank == 0 {
        return IntMatrix::zero(0, a.ncols());
    }
    // U·A·V = D, so span_Q(rows of A) = span_Q(first r rows of V^{-1});
    // V^{-1} is integer unimodular, hence those rows form a saturated basis.
    let vinv = s
        .v
        .to_rational()
        .inverse()
        .expect("column transform is unimodular");
    let rows: Vec<Vec<BigInt>> = (0..s.rank)
        .map(|i| {
            vinv.row(i)
                .iter()
                .map(|x| {
                    debug_assert!(crate::rational::is_integer(x));
                    x.numer().clone()
                })
                .collect()
        })
        .collect();
    hnf(&IntMatrix::from_rows(rows))
}

/// Membership of `x` in the row lattice given by a canonical HNF basis.
pub fn lattice_member(hnf_basis: &IntMatrix, x: &[BigInt]) -> bool {
    assert_eq!(hnf_basis.ncols(), x.len(), "ambient mismatch");
    let mut x = x.to_vec();
    for i in 0..hnf_basis.nrows() {
        let pc = (0..hnf_basis.ncols())
            .find(|&j| !hnf_basis[(i, j)].is_zero())
            .expect("HNF basis has no zero rows");
        if x[pc].is_zero() {
            continue;
        }
        let (q, r) = x[pc].div_rem(&hnf_basis[(i, pc)]);
        if !r.is_zero() {
            return false;
        }
        for j in 0..x.len() {
            let t = &q * &hnf_basis[(i, j)];
            x[j] -= t;
        }
    }
    x.iter().all(Zero::is_zero)
}

/// True when the row lattice of `sub` (HNF) is contained in that of `sup` (HNF).
pub fn lattice_contains(sup_hnf: &IntMatrix, sub_hnf: &IntMatrix) -> bool {
    (0..sub_hnf.nrows()).all(|i| lattice_member(sup_hnf, sub_hnf.row(i)))
}

/// A particular rational solution `t` of the congruence system
/// `a · t ≡ r (mod 1)`, or `None` when none exists.
///
/// Deterministic: through the Smith form `u·a·v = d`, the transformed
/// variables are set to `(u·r)_i / d_i` on the diagonal and zero on the free
/// coordinates; solvability requires the trailing entries of `u·r` to be
/// integers.
pub fn solve_mod1(a: &IntMatrix, r: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(a.nrows(), r.len(), "row/right-hand-side mismatch");
    let s = smith(a);
    let ur = s.u.mul_qvec(r);
    if !ur[s.rank..].iter().all(|x| x.denom().is_one()) {
        return None;
    }
    let mut y = vec![Q::zero(); a.ncols()];
    for (i, d) in s.divisors().iter().enumerate() {
        y[i] = &ur[i] / Q::from_integer(d.clone());
    }
    Some(s.v.mul_qvec(&y))
}

/// Greatest common divisor of a slice (nonnegative; zero for all-zero input).
pub fn gcd_vec(xs: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
    }
    g
}

/// Divide an integer vector by the gcd of its entries (no sign change).
/// Returns the zero vector unchanged.
pub fn primitive_vector(xs: &[BigInt]) -> Vec<BigInt> {
    let g = gcd_vec(xs);
    if g.is_zero() || g.is_one() {
        return xs.to_vec();
    }
    xs.iter().map(|x| x / &g).collect()
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction (and the same sign pattern). Zero maps to zero.
pub fn primitive_integer_direction(xs: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = xs
        .iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect();
    primitive_vector(&ints)
}

/// Flip the sign so the first nonzero entry is positive (identity on zero).
pub fn lex_positive(xs: &[BigInt]) -> Vec<BigInt> {
    match xs.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => xs.iter().map(|v| -v).collect(),
        _ => xs.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_abs(a: &IntMatrix) -> Q {
        let d = a.to_rational().det();
        if d < Q::zero() {
            -d
        } else {
            d
        }
    }

    #[test]
    fn hnf_is_canonical_for_the_row_lattice() {
        let a = IntMatrix::from_i64(&[vec![2, 3, 6], vec![4, 8, 10]]);
        let h = hnf(&a);
        assert_eq!(h, IntMatrix::from_i64(&[vec![2, 1, 8], vec![0, 2, -2]]));
        // Another generating set of the same lattice.
        let b = IntMatrix::from_i64(&[vec![2, 5, 4], vec![2, 3, 6]]);
        assert_eq!(hnf(&b), h);
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let a = IntMatrix::from_i64(&[vec![1, 2], vec![2, 4], vec![3, 6]]);
        let h = hnf(&a);
        assert_eq!(h, IntMatrix::from_i64(&[vec![1, 2]]));
        let z = hnf(&IntMatrix::from_i64(&[vec![0, 0]]));
        assert_eq!(z.nrows(), 0);
        assert_eq!(z.ncols(), 2);
    }

    #[test]
    fn smith_form_of_known_matrix() {
        let a = IntMatrix::from_i64(&[vec![2, 4], vec![6, 8]]);
        let s = smith(&a);
        assert_eq!(s.rank, 2);
        assert_eq!(s.divisors(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(det_abs(&s.u), Q::one());
        assert_eq!(det_abs(&s.v), Q::one());
    }

    #[test]
    fn smith_invariants_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let a = IntMatrix::from_rows(
                (0..rows)
                    .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect())
                    .collect(),
            );
            let s = smith(&a);
            assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "U·A·V = D");
            assert_eq!(det_abs(&s.u), Q::one(), "U unimodular");
            assert_eq!(det_abs(&s.v), Q::one(), "V unimodular");
            let divs = s.divisors();
            for w in divs.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "divisor chain");
            }
            assert!(divs.iter().all(|d| d.is_positive()));
            if rows == cols {
                assert_eq!(det_abs(&a), det_abs(&s.d), "|det| preserved");
            }
            assert_eq!(s.rank, a.rank(), "rank matches rational rank");
        }
    }

    #[test]
    fn kernel_lattice_annihilates_and_is_saturated() {
        let a = IntMatrix::from_i64(&[vec![1, 2, 3]]);
        let k = kernel_lattice(&a);
        assert_eq!(k.nrows(), 2);
        for i in 0..k.nrows() {
            let prod = a.mul_vec(k.row(i));
            assert!(prod.iter().all(Zero::is_zero));
        }
        // A kernel is its own saturation.
        assert_eq!(row_saturation(&k), k);
    }

    #[test]
    fn row_saturation_divides_out_multiplicity() {
        let a = IntMatrix::from_i64(&[vec![2, 4]]);
        assert_eq!(row_saturation(&a), IntMatrix::from_i64(&[vec![1, 2]]));
        let b = IntMatrix::from_i64(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(row_saturation(&b), IntMatrix::identity(2));
        // Index-2 sublattice of a line in Z^3.
        let c = IntMatrix::from_i64(&[vec![2, 2, 4]]);
        assert_eq!(row_saturation(&c), IntMatrix::from_i64(&[vec![1, 1, 2]]));
    }

    #[test]
    fn lattice_membership_via_hnf() {
        let basis = hnf(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]));
        assert!(lattice_member(&basis, &[BigInt::from(4), BigInt::from(-3)]));
        assert!(!lattice_member(&basis, &[BigInt::from(1), BigInt::from(0)]));
        let sub = hnf(&IntMatrix::from_i64(&[vec![4, 0], vec![0, 6]]));
        assert!(lattice_contains(&basis, &sub));
        assert!(!lattice_contains(&sub, &basis));
    }

    #[test]
    fn primitive_direction_from_rationals() {
        use crate::rational::q;
        let v = vec![q(1, 2), q(-3, 4), q(0, 1)];
        assert_eq!(
            primitive_integer_direction(&v),
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]
        );
        assert_eq!(
            lex_positive(&[BigInt::from(-2), BigInt::from(1)]),
            vec![BigInt::from(2), BigInt::from(-1)]
        );
    }
}
