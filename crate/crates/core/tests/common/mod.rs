//! Independent oracles: none of these call into the crate's linear algebra.
#![allow(dead_code)]

use coupled_core::{CFamily, CMatrix, Complex64, QMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Rank over Q(i) via the real `2m x 2n` form `[[re, -im], [im, re]]`,
/// whose rank is twice the complex rank. Rows are cleared of denominators
/// and reduced by fraction-free (Bareiss) elimination over the integers.
pub fn oracle_rank(m: &QMatrix) -> usize {
    let (r, c) = m.shape();
    let mut q: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); 2 * c]; 2 * r];
    for i in 0..r {
        for j in 0..c {
            let z = &m[(i, j)];
            q[i][j] = z.re.clone();
            q[i][j + c] = -z.im.clone();
            q[i + r][j] = z.im.clone();
            q[i + r][j + c] = z.re.clone();
        }
    }
    let mut a: Vec<Vec<BigInt>> = q
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.into_iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let (rows, cols) = (2 * r, 2 * c);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    assert!(rank % 2 == 0);
    rank / 2
}

/// Nearest multiple of `1/den` in each real and imaginary part.
pub fn round_q(z: Complex64, den: i64) -> coupled_core::GaussRational {
    let q = |x: f64| BigRational::new(BigInt::from((x * den as f64).round() as i64), BigInt::from(den));
    coupled_core::GaussRational::new(q(z.re), q(z.im))
}

pub fn rationalize(f: &CFamily, den: i64) -> coupled_core::QFamily {
    f.map(|m| m.map(|z| round_q(*z, den)))
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `(I_{m_j} ⊗ A_ij)` on `vec X_j` minus `(B_ij^T ⊗ I_{n_i})` on `vec X_i`,
/// assembled row block by row block.
pub fn kron_operator(a: &CFamily, b: &CFamily) -> CMatrix {
    let k = a.k();
    let n = a.dims();
    let m = b.dims();
    let offs: Vec<usize> = (0..k).scan(0, |acc, i| {
        let o = *acc;
        *acc += n[i] * m[i];
        Some(o)
    }).collect();
    let cols: usize = (0..k).map(|i| n[i] * m[i]).sum();
    let mut rows = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let mut blk = CMatrix::zeros(n[i] * m[j], cols);
            let left = kron(&CMatrix::identity(m[j]), a.block(i, j));
            let right = kron(&b.block(i, j).transpose(), &CMatrix::identity(n[i]));
            for r in 0..n[i] * m[j] {
                for c in 0..n[j] * m[j] {
                    blk[(r, offs[j] + c)] += left[(r, c)];
                }
                for c in 0..n[i] * m[i] {
                    blk[(r, offs[i] + c)] -= right[(r, c)];
                }
            }
            rows.push(blk);
        }
    }
    rows.iter().skip(1).fold(rows[0].clone(), |acc, r| acc.vstack(r))
}

fn naive_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|t| a[(i, t)] * b[(t, j)]).sum())
}

/// Frobenius norm of all `A_ij X_j - X_i B_ij`, by explicit loops.
pub fn direct_residual(a: &CFamily, b: &CFamily, x: &[CMatrix]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.k() {
        for j in 0..a.k() {
            let l = naive_mul(a.block(i, j), &x[j]);
            let r = naive_mul(&x[i], b.block(i, j));
            for p in 0..l.rows() {
                for q in 0..l.cols() {
                    s += (l[(p, q)] - r[(p, q)]).norm_sqr();
                }
            }
        }
    }
    s.sqrt()
}

pub fn vec_stack(x: &[CMatrix]) -> CMatrix {
    let v: Vec<Complex64> = x.iter().flat_map(|m| (0..m.cols()).flat_map(move |c| (0..m.rows()).map(move |r| m[(r, c)]))).collect();
    CMatrix::new(v.len(), 1, v).unwrap()
}

pub fn is_abs_le(r: &BigRational, bound: i64) -> bool {
    r.abs() <= BigRational::from_integer(bound.into())
}

pub fn small_complex() -> impl Strategy<Value = Complex64> {
    (-4i32..=4, -4i32..=4).prop_map(|(a, b)| Complex64::new(a as f64, b as f64))
}

pub fn gaussian_complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

pub fn cmatrix(rows: usize, cols: usize, entry: impl Strategy<Value = Complex64>) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(entry, rows * cols).prop_map(move |v| CMatrix::new(rows, cols, v).unwrap())
}

/// Integer-entried matrix of rank at most `r`, as a product of integer factors.
pub fn low_rank_int(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    (0..=rows.min(cols)).prop_flat_map(move |r| {
        (cmatrix(rows, r, small_complex()), cmatrix(r, cols, small_complex())).prop_map(move |(p, q)| {
            if r == 0 {
                CMatrix::zeros(rows, cols)
            } else {
                &p * &q
            }
        })
    })
}

pub fn cfamily(dims: Vec<usize>, entry: impl Strategy<Value = Complex64>) -> impl Strategy<Value = CFamily> {
    let total: usize = dims.iter().sum();
    cmatrix(total, total, entry).prop_map(move |m| CFamily::from_assembled(&m, dims.clone()).unwrap())
}

pub fn dims_strategy(max_k: usize, max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1..=max_n, 1..=max_k)
}

pub fn seeded_matrix(rng: &mut rand_chacha::ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    use rand::Rng;
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Unitary from modified Gram-Schmidt on the columns of a random matrix.
pub fn seeded_unitary(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> CMatrix {
    let mut q = seeded_matrix(rng, n, n);
    for j in 0..n {
        for p in 0..j {
            let d: Complex64 = (0..n).map(|r| q[(r, p)].conj() * q[(r, j)]).sum();
            for r in 0..n {
                let v = q[(r, p)];
                q[(r, j)] -= d * v;
            }
        }
        let norm = (0..n).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            q[(r, j)] /= norm;
        }
    }
    q
}

pub fn diag(v: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(v.len(), v.len(), |i, j| if i == j { v[i] } else { Complex64::new(0.0, 0.0) })
}
