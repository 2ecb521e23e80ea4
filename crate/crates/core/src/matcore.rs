//! Dense complex matrix primitives.
//!
//! Everything in the crate is built on [`ComplexMatrix`], a dense
//! `nalgebra` matrix of `Complex64`. Tensor products follow one fixed
//! convention: in `kron(a, b)` the first factor is the slow (outer) index,
//! so basis vector `|i⟩ ⊗ |j⟩` sits at position `i * dim(b) + j`. Every
//! partial trace, partial transpose and factor swap in the crate assumes
//! that layout.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative eigenvalue cutoff used for ranks, supports and generalized inverses.
pub const RANK_TOL: f64 = 1e-10;

/// Absolute floor below which an eigenvalue is zero regardless of scale.
pub const ZERO_FLOOR: f64 = 1e-14;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// One factor of a bipartite tensor product. `A` is the first (slow) factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::InvalidArgument(format!("unknown side {other:?}"))),
        }
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(n, n)
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = zeros(n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = real(v);
    }
    m
}

/// Builds a matrix from row-major complex entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            found: entries.len(),
        });
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, entries))
}

/// Builds a matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<ComplexMatrix> {
    let e: Vec<Complex64> = entries.iter().map(|&x| real(x)).collect();
    from_rows(rows, cols, &e)
}

/// Outer product `|u⟩⟨v|`.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff on mismatched shapes");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entry-wise modulus of `m`.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest entry-wise modulus of `m - m†`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

fn require_square(m: &ComplexMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.nrows())
    } else {
        Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        })
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; each eigenvector column is rotated so
/// that its first non-negligible component is real and positive.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Cutoff below which an eigenvalue counts as zero.
    pub fn cutoff(&self, rank_tol: f64) -> f64 {
        (rank_tol * self.max_eigenvalue().abs()).max(ZERO_FLOOR)
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        let cut = self.cutoff(rank_tol);
        self.eigenvalues.iter().filter(|&&l| l > cut).count()
    }

    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let s = f(l);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    pub fn eigenvector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j).iter().copied().collect()
    }
}

/// Hermitian eigendecomposition. The input is symmetrized before solving
/// when it is Hermitian within `tol`.
pub fn herm_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenSystem> {
    let n = require_square(m)?;
    let dev = hermitian_deviation(m);
    if dev.is_nan() || dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    if n == 0 {
        return Ok(EigenSystem {
            eigenvalues: vec![],
            eigenvectors: zeros(0),
        });
    }
    let h = hermitian_part(m);
    let eig = SymmetricEigen::try_new(h, EIG_EPS, EIG_MAX_ITER).ok_or(Error::NoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut vectors = zeros(n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let pivot = col.iter().copied().find(|z| z.norm() > 1e-12);
        let phase = match pivot {
            Some(z) => z.conj() / z.norm(),
            None => real(1.0),
        };
        for i in 0..n {
            vectors[(i, dst)] = col[i] * phase;
        }
    }
    Ok(EigenSystem {
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(herm_eig(m, tol)?.min_eigenvalue())
}

fn check_positive(eig: &EigenSystem, floor: f64) -> Result<()> {
    let min = eig.min_eigenvalue();
    if min < -floor {
        Err(Error::NotPositive { min_eigenvalue: min })
    } else {
        Ok(())
    }
}

/// Tolerance used for the positivity precondition of the rank-based routines.
fn relative_floor(eig: &EigenSystem, rank_tol: f64) -> f64 {
    eig.cutoff(rank_tol)
}

/// Unique positive semidefinite square root. Eigenvalues at the level of
/// rounding noise (below `ZERO_FLOOR` relative to the largest) map to zero,
/// so the root of a rank-deficient matrix keeps its support.
pub fn mat_sqrt(p: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(p, tol)?;
    check_positive(&eig, tol)?;
    let floor = eig.cutoff(ZERO_FLOOR);
    Ok(eig.map_spectrum(|l| if l > floor { l.sqrt() } else { 0.0 }))
}

/// Generalized inverse square root: eigenvalues above the rank cutoff map
/// to `λ^{-1/2}`, the rest to zero.
pub fn gen_inv_sqrt(p: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(p, rank_tol.max(ZERO_FLOOR))?;
    let cut = relative_floor(&eig, rank_tol);
    check_positive(&eig, cut)?;
    Ok(eig.map_spectrum(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Square root and generalized inverse square root from one decomposition.
pub fn sqrt_and_inv_sqrt(p: &ComplexMatrix, rank_tol: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let eig = herm_eig(p, rank_tol.max(ZERO_FLOOR))?;
    let cut = relative_floor(&eig, rank_tol);
    check_positive(&eig, cut)?;
    let root = eig.map_spectrum(|l| if l > cut { l.sqrt() } else { 0.0 });
    let inv = eig.map_spectrum(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
    Ok((root, inv))
}

/// Orthogonal projector onto the eigenvectors whose eigenvalue exceeds the
/// rank cutoff.
pub fn support_projector(p: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(p, rank_tol.max(ZERO_FLOOR))?;
    let cut = relative_floor(&eig, rank_tol);
    check_positive(&eig, cut)?;
    Ok(eig.map_spectrum(|l| if l > cut { 1.0 } else { 0.0 }))
}

/// Number of eigenvalues above the rank cutoff.
pub fn rank(p: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    Ok(herm_eig(p, rank_tol.max(ZERO_FLOOR))?.rank(rank_tol))
}

/// Kronecker product, first factor slow.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Traces out one factor of a matrix on `C^dim_a ⊗ C^dim_b`, keeping `keep`.
pub fn partial_trace(m: &ComplexMatrix, dim_a: usize, dim_b: usize, keep: Side) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.nrows().max(m.ncols()),
        });
    }
    Ok(match keep {
        Side::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Side::B => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum()
        }),
    })
}

/// Reorders `C^dim_a ⊗ C^dim_b` into `C^dim_b ⊗ C^dim_a`.
pub fn swap_factors(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.nrows().max(m.ncols()),
        });
    }
    let perm = |idx: usize| {
        let (a, b) = (idx / dim_b, idx % dim_b);
        b * dim_a + a
    };
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(perm(i), perm(j))] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Entry-wise transpose (no conjugation).
pub fn transpose(m: &ComplexMatrix) -> ComplexMatrix {
    m.transpose()
}

/// Largest deviation of `p` from being an orthogonal projector: the worse
/// of `|p² − p|` and `|p − p†|`.
pub fn projector_deviation(p: &ComplexMatrix) -> f64 {
    max_abs_diff(&(p * p), p).max(hermitian_deviation(p))
}
