//! Dense exact linear algebra over the rationals.
//!
//! Everything here is deterministic and exact: reduced row echelon form is
//! the *canonical* RREF (unique for a given row space), kernels come with a
//! canonical basis (one vector per free column, free coordinate one, other
//! free coordinates zero), and subspaces are represented by their RREF bases
//! so that equality of subspaces is literal equality of matrices.

use crate::rational::{sign, Q};
use num_traits::{One, Zero};
use std::fmt;

/// Construct a [`Matrix`] from integer literals: `qmat![[1, 2], [3, 4]]`.
#[macro_export]
macro_rules! qmat {
    ($([$($x:expr),* $(,)?]),* $(,)?) => {
        $crate::linalg::Matrix::from_rows(vec![
            $(vec![$($crate::rational::qi($x)),*]),*
        ])
    };
}

/// Construct a `Vec<Q>` from integer literals: `qvec![1, 2, 3]`.
#[macro_export]
macro_rules! qvec {
    ($($x:expr),* $(,)?) => {
        vec![$($crate::rational::qi($x)),*]
    };
}

/// Errors from exact linear algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    /// Operand shapes are incompatible.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A linear system has no solution.
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
}

/// A dense matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Matrix from a list of equally long rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix with the given shape whose entries come from `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut m = Matrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
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
    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of column `j`.
    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Q::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
            }
            acc
        })
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "inner dimensions differ");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Stack `other` below `self`. Panics unless column counts match.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Concatenate `other` to the right of `self`. Panics unless row counts match.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// In-place reduction to canonical reduced row echelon form.
    ///
    /// Returns the pivot columns in increasing order. The result is the
    /// unique RREF of the row space, so two matrices have equal row spaces
    /// iff their RREFs (with zero rows dropped) are identical.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            // Find the first row at or below `r` with a nonzero entry in column c.
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            self.scale_row(r, &inv);
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    self.sub_scaled_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Determinant of a square matrix (Gaussian elimination, exact).
    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            m.scale_row(c, &inv);
            for i in (c + 1)..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    m.sub_scaled_row(i, c, &f);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, if nonsingular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(n));
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, f: &Q) {
        for j in 0..self.cols {
            if !self[(i, j)].is_zero() {
                self[(i, j)] *= f.clone();
            }
        }
    }

    /// row_i -= f * row_src
    fn sub_scaled_row(&mut self, i: usize, src: usize, f: &Q) {
        for j in 0..self.cols {
            if !self[(src, j)].is_zero() {
                let t = f * &self[(src, j)];
                self[(i, j)] -= t;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(crate::rational::format_q).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dot product of two equally long vectors.
pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len(), "dot of unequal lengths");
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Componentwise `a + b`.
pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Componentwise `a - b`.
pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scalar multiple `f * a`.
pub fn vec_scale(f: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| f * x).collect()
}

/// True when every component is zero.
pub fn vec_is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Canonical kernel basis of `m` (one vector per free column).
///
/// For each non-pivot column `j` of the RREF, the basis vector has a `1` in
/// coordinate `j`, zeros in the other free coordinates, and pivot coordinates
/// determined by back-substitution. Vectors are ordered by `j`.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Q>> {
    let mut r = m.clone();
    let pivots = r.rref();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.ncols()];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for j in 0..m.ncols() {
        if is_pivot[j] {
            continue;
        }
        let mut v = vec![Q::zero(); m.ncols()];
        v[j] = Q::one();
        for (pi, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(pi, j)].clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of `a x = b` with all free coordinates zero, or `None` if
/// the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(a.nrows(), b.len(), "rhs length mismatch");
    let rhs = Matrix::from_rows(b.iter().map(|x| vec![x.clone()]).collect());
    let mut aug = a.hstack(&rhs);
    let pivots = aug.rref();
    if pivots.contains(&a.ncols()) {
        return None;
    }
    let mut x = vec![Q::zero(); a.ncols()];
    for (pi, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[(pi, a.ncols())].clone();
    }
    Some(x)
}

/// A linear subspace of `Q^ambient`, stored as its canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Subspace spanned by the given vectors.
    pub fn from_rows(ambient: usize, rows: &[Vec<Q>]) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient), "ragged spanning set");
        if rows.is_empty() {
            return Subspace {
                ambient,
                basis: Matrix::zero(0, ambient),
            };
        }
        let mut m = Matrix::from_rows(rows.to_vec());
        let pivots = m.rref();
        let basis = Matrix::from_fn(pivots.len(), ambient, |i, j| m[(i, j)].clone());
        Subspace { ambient, basis }
    }

    /// The zero subspace of `Q^ambient`.
    pub fn zero(ambient: usize) -> Self {
        Subspace::from_rows(ambient, &[])
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// The canonical RREF basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Pivot column of each basis row (the coordinates that parametrize the
    /// subspace: a member is determined by its values there).
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.basis.nrows())
            .map(|i| {
                (0..self.ambient)
                    .find(|&j| !self.basis[(i, j)].is_zero())
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    /// Membership test.
    pub fn contains(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector/ambient mismatch");
        // Reduce v against the RREF basis; membership iff remainder is zero.
        let mut v = v.to_vec();
        for i in 0..self.basis.nrows() {
            let pc = (0..self.ambient)
                .find(|&j| self.basis[(i, j)].is_one())
                .expect("RREF row has a pivot");
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for (j, vj) in v.iter_mut().enumerate() {
                    let t = &f * &self.basis[(i, j)];
                    *vj -= t;
                }
            }
        }
        vec_is_zero(&v)
    }

    /// True when `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Subspace) -> bool {
        (0..self.basis.nrows()).all(|i| other.contains(self.basis.row(i)))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Subspace::from_rows(self.ambient, &rows)
    }

    /// The annihilator `{u : u·v = 0 for all v in self}` as a subspace of the
    /// dual copy of `Q^ambient`.
    pub fn annihilator(&self) -> Subspace {
        Subspace::from_rows(self.ambient, &kernel_basis(&self.basis))
    }
}

/// Exact equality of subspaces (identical canonical bases).
pub fn subspace_equal(a: &Subspace, b: &Subspace) -> bool {
    a.ambient() == b.ambient() && a.basis() == b.basis()
}

/// Sign of the determinant of the square matrix expressing the rows of `a`
/// in terms of the rows of `b` (both must have the same row space dimension
/// and `a`'s rows must lie in `b`'s row space).
///
/// Returns an error when the row spaces differ.
pub fn relative_orientation(a: &Matrix, b: &Matrix) -> Result<i8, LinalgError> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(LinalgError::ShapeMismatch(format!(
            "relative orientation of {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let k = a.nrows();
    // Solve M · b = a row-wise: for each row of a, express it in the rows of b.
    let bt = b.transpose();
    let mut m = Matrix::zero(k, k);
    for i in 0..k {
        let coeffs = solve(&bt, a.row(i)).ok_or_else(|| {
            LinalgError::Inconsistent("row not in the reference row space".to_string())
        })?;
        for (j, c) in coeffs.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    let d = m.det();
    if d.is_zero() {
        return Err(LinalgError::Inconsistent(
            "row spaces have different dimension".to_string(),
        ));
    }
    Ok(sign(&d))
}

/// Input to [`lambda_diagonal_lift`]: a family of identical-shaped linear
/// systems `maps[λ] · u_λ = targets[λ]` coupled only by scalar block
/// relations `Σ_λ relations[r][λ] · u_λ = 0`.
#[derive(Debug, Clone)]
pub struct LambdaDiagonalProblem {
    /// Dimension of every block unknown `u_λ`.
    pub u_dim: usize,
    /// Dimension of every block target `v_λ`.
    pub v_dim: usize,
    /// One `v_dim × u_dim` map per block.
    pub maps: Vec<Matrix>,
    /// One `v_dim` target per block.
    pub targets: Vec<Vec<Q>>,
    /// Scalar relations among whole blocks: rows are relations, columns are
    /// blocks, and row `r` demands `Σ_λ relations[r][λ] · u_λ = 0`.
    pub relations: Matrix,
}

/// Solve a block-diagonal family of linear systems subject to scalar
/// block-coupling relations.
///
/// The relations matrix is put in RREF; non-pivot ("free") blocks receive the
/// canonical minimal solution of their own system (free coordinates zero),
/// and each pivot block is determined from its relation row. The combined
/// assignment is then verified against every per-block system and every
/// relation; verification can only fail when the targets themselves violate
/// the image of a relation, which is reported as an inconsistency.
pub fn lambda_diagonal_lift(p: &LambdaDiagonalProblem) -> Result<Vec<Vec<Q>>, LinalgError> {
    let nblocks = p.maps.len();
    if p.targets.len() != nblocks || p.relations.ncols() != nblocks {
        return Err(LinalgError::ShapeMismatch(format!(
            "{} maps, {} targets, {} relation columns",
            nblocks,
            p.targets.len(),
            p.relations.ncols()
        )));
    }
    for (l, (m, t)) in p.maps.iter().zip(&p.targets).enumerate() {
        if m.nrows() != p.v_dim || m.ncols() != p.u_dim || t.len() != p.v_dim {
            return Err(LinalgError::ShapeMismatch(format!(
                "block {l}: map {}x{}, target length {}",
                m.nrows(),
                m.ncols(),
                t.len()
            )));
        }
    }

    let mut rel = p.relations.clone();
    let pivots = rel.rref();
    let pivot_of: Vec<Option<usize>> = {
        // pivot_of[block] = Some(rref row) when the block is a pivot column
        let mut v = vec![None; nblocks];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };

    let mut u: Vec<Option<Vec<Q>>> = vec![None; nblocks];
    // Free blocks first: canonical particular solutions.
    for l in 0..nblocks {
        if pivot_of[l].is_none() {
            let sol = solve(&p.maps[l], &p.targets[l]).ok_or_else(|| {
                LinalgError::Inconsistent(format!("block {l}: map does not reach its target"))
            })?;
            u[l] = Some(sol);
        }
    }
    // Pivot blocks from their relation rows: u_pivot = -Σ_free coeff · u_free.
    for (r, &c) in pivots.iter().enumerate() {
        let mut acc = vec![Q::zero(); p.u_dim];
        for l in 0..nblocks {
            if l == c || rel[(r, l)].is_zero() {
                continue;
            }
            let block = u[l].as_ref().ok_or_else(|| {
                LinalgError::Inconsistent(
                    "relation couples two pivot blocks after RREF".to_string(),
                )
            })?;
            for (a, x) in acc.iter_mut().zip(block) {
                *a += &rel[(r, l)] * x;
            }
        }
        u[c] = Some(acc.iter().map(|x| -x).collect());
    }

    let u: Vec<Vec<Q>> = u.into_iter().map(Option::unwrap).collect();

    // Verification: every per-block system and every original relation.
    for (l, block) in u.iter().enumerate() {
        if p.maps[l].mul_vec(block) != p.targets[l] {
            return Err(LinalgError::Inconsistent(format!(
                "block {l}: targets violate the image of a block relation"
            )));
        }
    }
    for r in 0..p.relations.nrows() {
        let mut acc = vec![Q::zero(); p.u_dim];
        for (l, block) in u.iter().enumerate() {
            if p.relations[(r, l)].is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(block) {
                *a += &p.relations[(r, l)] * x;
            }
        }
        if !vec_is_zero(&acc) {
            return Err(LinalgError::Inconsistent(format!(
                "relation {r} not satisfied by the lifted blocks"
            )));
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn rref_is_canonical() {
        let mut a = qmat![[2, 4, 6], [1, 2, 4]];
        let p = a.rref();
        assert_eq!(p, vec![0, 2]);
        assert_eq!(a, qmat![[1, 2, 0], [0, 0, 1]]);
        // A different spanning set of the same row space reduces identically.
        let mut b = qmat![[3, 6, 10], [1, 2, 4], [4, 8, 14]];
        b.rref();
        assert_eq!(b.row(0), a.row(0));
        assert_eq!(b.row(1), a.row(1));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = qmat![[1, 2, 3], [0, 1, 1]];
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&k[0])));
        assert_eq!(k[0], vec![qi(-1), qi(-1), qi(1)]);
    }

    #[test]
    fn solve_picks_free_coordinates_zero() {
        let a = qmat![[1, 1]];
        let x = solve(&a, &[qi(1)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(0)]);
        assert!(solve(&qmat![[0, 0]], &[qi(1)]).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let a = qmat![[2, 1], [1, 1]];
        assert_eq!(a.det(), qi(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(qmat![[1, 2], [2, 4]].det(), qi(0));
        assert!(qmat![[1, 2], [2, 4]].inverse().is_none());
    }

    #[test]
    fn subspace_equality_is_representation_free() {
        let s1 = Subspace::from_rows(3, &[qvec![1, 0, 1], qvec![0, 1, 1]]);
        let s2 = Subspace::from_rows(3, &[qvec![1, 1, 2], qvec![1, -1, 0]]);
        assert!(subspace_equal(&s1, &s2));
        assert_eq!(s1.dim(), 2);
        assert!(s1.contains(&[qi(2), qi(3), qi(5)]));
        assert!(!s1.contains(&[qi(0), qi(0), qi(1)]));
    }

    #[test]
    fn double_annihilator_is_identity() {
        let s = Subspace::from_rows(4, &[qvec![1, 2, 0, 1], qvec![0, 0, 1, 3]]);
        let back = s.annihilator().annihilator();
        assert!(subspace_equal(&s, &back));
        assert_eq!(s.annihilator().dim(), 2);
    }

    #[test]
    fn relative_orientation_matches_two_dimensional_cross_products() {
        // In the plane, orientation of a 2-frame against the identity frame
        // is the sign of the cross product.
        let id = Matrix::identity(2);
        for (ax, ay, bx, by) in [(1i64, 0i64, 0i64, 1i64), (2, 1, 1, 1), (0, 1, 1, 0)] {
            let f = qmat![[ax, ay], [bx, by]];
            let cross = ax * by - ay * bx;
            assert_eq!(
                relative_orientation(&f, &id).unwrap() as i64,
                cross.signum()
            );
        }
        // Mismatched row spaces are an error.
        let bad = relative_orientation(&qmat![[1, 0]], &qmat![[0, 1]]);
        assert!(bad.is_err());
    }

    #[test]
    fn lambda_diagonal_lift_matches_worked_example() {
        // Two blocks U = Q^2, V = Q^1, f = coordinate sum, targets (1, 1),
        // one relation u_1 - u_2 = 0. Expected lift: both blocks (1, 0).
        let p = LambdaDiagonalProblem {
            u_dim: 2,
            v_dim: 1,
            maps: vec![qmat![[1, 1]], qmat![[1, 1]]],
            targets: vec![vec![qi(1)], vec![qi(1)]],
            relations: qmat![[1, -1]],
        };
        let u = lambda_diagonal_lift(&p).unwrap();
        assert_eq!(u, vec![vec![qi(1), qi(0)], vec![qi(1), qi(0)]]);
    }

    #[test]
    fn lambda_diagonal_lift_rejects_inconsistent_targets() {
        // Same relation, but targets violate its image: v_1 - v_2 = 1 ≠ 0.
        let p = LambdaDiagonalProblem {
            u_dim: 2,
            v_dim: 1,
            maps: vec![qmat![[1, 1]], qmat![[1, 1]]],
            targets: vec![vec![qi(2)], vec![qi(1)]],
            relations: qmat![[1, -1]],
        };
        assert!(matches!(
            lambda_diagonal_lift(&p),
            Err(LinalgError::Inconsistent(_))
        ));
    }

    #[test]
    fn lambda_diagonal_lift_handles_fractional_relations() {
        let p = LambdaDiagonalProblem {
            u_dim: 1,
            v_dim: 1,
            maps: vec![qmat![[1]], qmat![[2]], qmat![[1]]],
            targets: vec![vec![qi(3)], vec![qi(4)], vec![q(1, 1)]],
            relations: qmat![[1, 0, -3]],
        };
        let u = lambda_diagonal_lift(&p).unwrap();
        assert_eq!(u[0], vec![qi(3)]);
        assert_eq!(u[1], vec![qi(2)]);
        assert_eq!(u[2], vec![qi(1)]);
    }
}
