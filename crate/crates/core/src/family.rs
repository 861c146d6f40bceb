//! Doubly indexed matrix families `{A_ij}` and their block-matrix assembly.
//!
//! Indices are 0-based in the Rust API. Files, error messages and JSON
//! reports use 1-based indices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank, TolerancePolicy};
use crate::matrix::{Matrix, QMatrix};
use crate::report::one_based_pairs;
use crate::scalar::{GaussRational, Scalar};

/// `K x K` grid of blocks, block `(i, j)` of size `n_i x n_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledFamily<T> {
    dims: Vec<usize>,
    blocks: Vec<Matrix<T>>,
}

pub type CFamily = CoupledFamily<num_complex::Complex64>;
pub type QFamily = CoupledFamily<GaussRational>;

impl<T: Scalar> CoupledFamily<T> {
    /// Blocks in row-major `(i, j)` order; shapes are validated.
    pub fn new(dims: Vec<usize>, blocks: Vec<Matrix<T>>) -> Result<Self> {
        let f = Self { dims, blocks };
        f.validate()?;
        Ok(f)
    }

    /// Construct without validation; [`CoupledFamily::validate`] reports problems.
    pub fn new_unchecked(dims: Vec<usize>, blocks: Vec<Matrix<T>>) -> Self {
        Self { dims, blocks }
    }

    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(usize, usize) -> Matrix<T>) -> Result<Self> {
        let k = dims.len();
        let blocks = (0..k * k).map(|idx| f(idx / k, idx % k)).collect();
        Self::new(dims, blocks)
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let k = dims.len();
        let blocks = (0..k * k).map(|idx| Matrix::zeros(dims[idx / k], dims[idx % k])).collect();
        Self { dims, blocks }
    }

    /// First offending block is reported with 1-based indices.
    pub fn validate(&self) -> Result<()> {
        let k = self.dims.len();
        if k == 0 {
            return Err(Error::Shape("a family needs at least one index".into()));
        }
        if let Some(i) = self.dims.iter().position(|&n| n == 0) {
            return Err(Error::Shape(format!("dimension n_{} must be positive", i + 1)));
        }
        if self.blocks.len() != k * k {
            return Err(Error::Shape(format!("{} blocks given for K = {k}", self.blocks.len())));
        }
        for i in 0..k {
            for j in 0..k {
                let b = &self.blocks[i * k + j];
                if b.shape() != (self.dims[i], self.dims[j]) {
                    return Err(Error::BlockShape {
                        i: i + 1,
                        j: j + 1,
                        got_rows: b.rows(),
                        got_cols: b.cols(),
                        want_rows: self.dims[i],
                        want_cols: self.dims[j],
                    });
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `N = sum n_i`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|&n| {
                let o = acc;
                acc += n;
                o
            })
            .collect()
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.blocks[i * self.k() + j]
    }

    pub fn set_block(&mut self, i: usize, j: usize, m: Matrix<T>) -> Result<()> {
        if m.shape() != (self.dims[i], self.dims[j]) {
            return Err(Error::BlockShape {
                i: i + 1,
                j: j + 1,
                got_rows: m.rows(),
                got_cols: m.cols(),
                want_rows: self.dims[i],
                want_cols: self.dims[j],
            });
        }
        let k = self.k();
        self.blocks[i * k + j] = m;
        Ok(())
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize, &Matrix<T>)> {
        let k = self.k();
        self.blocks.iter().enumerate().map(move |(idx, b)| (idx / k, idx % k, b))
    }

    /// The `N x N` matrix with block `(i, j)` in block position `(i, j)`.
    pub fn assemble(&self) -> Matrix<T> {
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = Matrix::zeros(n, n);
        for (i, j, b) in self.blocks() {
            out.set_block(off[i], off[j], b);
        }
        out
    }

    /// Slice an assembled matrix back into blocks.
    pub fn from_assembled(m: &Matrix<T>, dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().sum();
        if m.shape() != (n, n) {
            return Err(Error::Shape(format!("assembled matrix is {:?}, dims sum to {n}", m.shape())));
        }
        let mut off = vec![0; dims.len()];
        for i in 1..dims.len() {
            off[i] = off[i - 1] + dims[i - 1];
        }
        let d = dims.clone();
        Self::from_fn(dims, |i, j| m.block(off[i], off[j], d[i], d[j]))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&Matrix<T>) -> Matrix<U>) -> CoupledFamily<U> {
        CoupledFamily { dims: self.dims.clone(), blocks: self.blocks.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> CFamily {
        self.map(Matrix::to_c64)
    }

    /// Exact copy holding the binary value of every floating entry.
    pub fn to_exact(&self) -> QFamily {
        self.map(Matrix::to_exact)
    }

    /// Blockwise `T_i^{-1} A_ij T_j`.
    pub fn apply_coupled_similarity(&self, w: &SimilarityWitness<T>, pol: &TolerancePolicy) -> Result<Self> {
        if w.transforms.len() != self.k() {
            return Err(Error::IndexCountMismatch(self.k(), w.transforms.len()));
        }
        for (i, t) in w.transforms.iter().enumerate() {
            if t.shape() != (self.dims[i], self.dims[i]) {
                return Err(Error::Shape(format!("T_{} is {:?}, expected {}x{}", i + 1, t.shape(), self.dims[i], self.dims[i])));
            }
        }
        let inv = w.inverses(pol)?;
        Self::from_fn(self.dims.clone(), |i, j| &(&inv[i] * self.block(i, j)) * &w.transforms[j])
    }

    /// Checks `A_ij* A_ij = A_ji A_ji*` for all `i, j`.
    pub fn is_coupled_normal(&self, pol: &TolerancePolicy) -> CoupledNormality {
        let k = self.k();
        let mut violations = Vec::new();
        let mut max_residual: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let a = self.block(i, j);
                let b = self.block(j, i);
                let diff = &(&a.adjoint() * a) - &(b * &b.adjoint());
                let scale = a.frobenius_norm().powi(2).max(b.frobenius_norm().powi(2)).max(1.0);
                let residual = diff.frobenius_norm() / scale;
                max_residual = max_residual.max(residual);
                let ok = if T::EXACT { diff.is_zero_within(0.0) } else { residual <= pol.equality_atol };
                if !ok {
                    violations.push((i, j));
                }
            }
        }
        CoupledNormality { normal: violations.is_empty(), violations, max_residual }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoupledNormality {
    pub normal: bool,
    #[serde(serialize_with = "one_based_pairs")]
    pub violations: Vec<(usize, usize)>,
    pub max_residual: f64,
}

/// Nonsingular `T_1, ..., T_K` realising a coupled similarity.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityWitness<T> {
    pub transforms: Vec<Matrix<T>>,
}

impl<T: Scalar> SimilarityWitness<T> {
    pub fn new(transforms: Vec<Matrix<T>>, pol: &TolerancePolicy) -> Result<Self> {
        for (i, t) in transforms.iter().enumerate() {
            if !t.is_square() {
                return Err(Error::NotSquare(t.rows(), t.cols()));
            }
            if rank(t, pol) < t.rows() {
                return Err(Error::Singular(format!("T_{} is singular", i + 1)));
            }
        }
        Ok(Self { transforms })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self { transforms: dims.iter().map(|&n| Matrix::identity(n)).collect() }
    }

    pub fn inverses(&self, pol: &TolerancePolicy) -> Result<Vec<Matrix<T>>> {
        self.transforms
            .iter()
            .enumerate()
            .map(|(i, t)| inverse(t, pol).map_err(|_| Error::Singular(format!("T_{} is singular", i + 1))))
            .collect()
    }

    pub fn inverse(&self, pol: &TolerancePolicy) -> Result<Self> {
        Ok(Self { transforms: self.inverses(pol)? })
    }

    /// `T = T_1 (+) ... (+) T_K`.
    pub fn block_diag(&self) -> Matrix<T> {
        Matrix::block_diag(&self.transforms)
    }
}

impl CFamily {
    /// Hermitian assembly: `A_ji = A_ij*`.
    pub fn is_hermitian_assembled(&self, atol: f64) -> bool {
        let a = self.assemble();
        a.approx_eq(&a.adjoint(), atol)
    }
}

impl QFamily {
    pub fn from_integer_blocks(dims: Vec<usize>, blocks: &[&[&[i64]]]) -> Result<Self> {
        Self::new(dims, blocks.iter().map(|b| QMatrix::from_i64_rows(b)).collect())
    }
}
