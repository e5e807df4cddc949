//! Dense exact linear algebra.
//!
//! Matrices are row-major and small (every object in this crate is desk
//! scale), so everything reduces to one reduced-row-echelon routine.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {op} of {lhs:?} and {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
struct Echelon<F> {
    m: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| F::random(rng)).collect(),
        }
    }

    /// A uniformly-ish random invertible `n × n` matrix by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// A random matrix of the given shape and exact rank.
    pub fn random_with_rank<R: Rng + ?Sized>(rows: usize, cols: usize, rank: usize, rng: &mut R) -> Self {
        assert!(rank <= rows.min(cols));
        let left = Self::random_invertible(rows, rng);
        let right = Self::random_invertible(cols, rng);
        let mut core = Self::zeros(rows, cols);
        for i in 0..rank {
            core[(i, i)] = F::one();
        }
        left.mul(&core).mul(&right)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "product",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix product. Panics on shape mismatch; use [`Matrix::try_mul`] for checked use.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("matrix product shape")
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, "sum", F::add)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.zip_with(rhs, "difference", F::sub)
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&F, &F) -> F) -> Result<Self, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::DimensionMismatch {
                op,
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(s)).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = &self[(r1, c1)];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        out[(r1 * rhs.rows + r2, c1 * rhs.cols + c2)] = a.mul(&rhs[(r2, c2)]);
                    }
                }
            }
        }
        out
    }

    /// Block diagonal `[[self, 0], [0, rhs]]`.
    pub fn block_diag(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, rhs);
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    /// Copies out the sub-block of the given size starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out[(r, c)] = self[(r0 + r, c0 + c)].clone();
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row count");
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, rhs);
        out
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack column count");
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, rhs);
        out
    }

    fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].mul(&inv);
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let delta = factor.mul(&m[(row, c)]);
                    m[(r, c)] = m[(r, c)].sub(&delta);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { m, pivots }
    }

    /// Rank by exact Gaussian elimination; 0 for empty matrices.
    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.echelon().pivots.len()
    }

    /// Columns form a basis of the null space (`cols − rank` of them).
    pub fn kernel_basis(&self) -> Self {
        let Echelon { m, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = m[(i, f)].neg();
            }
        }
        basis
    }

    /// Some `x` with `self · x = b`, or [`LinalgError::NoSolution`].
    pub fn solve(&self, b: &Self) -> Result<Self, LinalgError> {
        if self.rows != b.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                lhs: self.shape(),
                rhs: b.shape(),
            });
        }
        let Echelon { m, pivots } = self.hstack(b).echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::NoSolution);
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x[(p, c)] = m[(i, self.cols + c)].clone();
            }
        }
        Ok(x)
    }

    /// A full-row-rank surjection `q` from the codomain with `q · self = 0`,
    /// i.e. the quotient map onto `codomain / im(self)`.
    pub fn cokernel_projection(&self) -> Self {
        self.transpose().kernel_basis().transpose()
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Singular);
        }
        self.solve(&Self::identity(self.rows)).and_then(|x| {
            if self.rank() == self.rows {
                Ok(x)
            } else {
                Err(LinalgError::Singular)
            }
        })
    }
}
