//! Density operators on algebras and on bipartite tensor products.
//!
//! States are validated on construction: Hermitian, positive, unit trace and
//! supported on the block-diagonal subalgebra. Algorithms that produce
//! states from already-valid inputs use the `new_unchecked` constructors.

use crate::algebra::{self, AlgebraShape};
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, Side};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const BLOCK_SUPPORT_TOL: f64 = 1e-12;

/// Validates a density matrix against the block pattern `labels` and
/// returns its Hermitian, block-masked form.
fn validate_density(matrix: &ComplexMatrix, labels: &[usize]) -> Result<ComplexMatrix> {
    let n = labels.len();
    if matrix.nrows() != n || matrix.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if matrix.nrows() != n {
                matrix.nrows()
            } else {
                matrix.ncols()
            },
        });
    }
    let herm = matcore::hermitian_deviation(matrix);
    if herm > HERMITIAN_TOL {
        return Err(Error::InvariantViolation {
            invariant: "hermitian",
            deviation: herm,
        });
    }
    let off = algebra::off_block_magnitude(matrix, labels);
    if off > BLOCK_SUPPORT_TOL {
        return Err(Error::InvariantViolation {
            invariant: "block_support",
            deviation: off,
        });
    }
    let tr = matcore::trace(matrix).re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvariantViolation {
            invariant: "trace",
            deviation: (tr - 1.0).abs(),
        });
    }
    let m = algebra::mask_by_labels(&matcore::hermitian_part(matrix), labels);
    let min = matcore::min_eigenvalue(&m, HERMITIAN_TOL)?;
    if min < -POSITIVITY_TOL {
        return Err(Error::InvariantViolation {
            invariant: "positivity",
            deviation: -min,
        });
    }
    Ok(m)
}

/// A density operator on a single algebra, in embedded form.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    shape: AlgebraShape,
    matrix: ComplexMatrix,
}

impl State {
    pub fn new(shape: AlgebraShape, matrix: ComplexMatrix) -> Result<Self> {
        let matrix = validate_density(&matrix, &shape.block_labels())?;
        Ok(Self { shape, matrix })
    }

    /// Skips validation. The caller guarantees the state invariants up to
    /// numerical drift.
    pub fn new_unchecked(shape: AlgebraShape, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), shape.total_dim());
        Self { shape, matrix }
    }

    /// `I / totalDim`.
    pub fn maximally_mixed(shape: &AlgebraShape) -> Self {
        let d = shape.total_dim();
        Self::new_unchecked(shape.clone(), matcore::identity(d).unscale(d as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn from_diagonal(shape: AlgebraShape, probabilities: &[f64]) -> Result<Self> {
        Self::new(shape, matcore::diag(probabilities))
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(shape: AlgebraShape, psi: &[num_complex::Complex64]) -> Result<Self> {
        Self::new(shape, matcore::outer(psi, psi))
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.shape.total_dim()
    }

    /// Re-runs the constructor checks.
    pub fn validate(&self) -> Result<()> {
        validate_density(&self.matrix, &self.shape.block_labels()).map(|_| ())
    }
}

/// A density operator on `𝔄_A ⊗ 𝔄_B`, stored on the Kronecker layout.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    shape_a: AlgebraShape,
    shape_b: AlgebraShape,
    matrix: ComplexMatrix,
}

impl JointState {
    pub fn new(shape_a: AlgebraShape, shape_b: AlgebraShape, matrix: ComplexMatrix) -> Result<Self> {
        let matrix = validate_density(&matrix, &algebra::tensor_labels(&shape_a, &shape_b))?;
        Ok(Self {
            shape_a,
            shape_b,
            matrix,
        })
    }

    pub fn new_unchecked(shape_a: AlgebraShape, shape_b: AlgebraShape, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), shape_a.total_dim() * shape_b.total_dim());
        Self {
            shape_a,
            shape_b,
            matrix,
        }
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &State, b: &State) -> Self {
        Self::new_unchecked(a.shape.clone(), b.shape.clone(), matcore::kron(&a.matrix, &b.matrix))
    }

    pub fn shape_a(&self) -> &AlgebraShape {
        &self.shape_a
    }

    pub fn shape_b(&self) -> &AlgebraShape {
        &self.shape_b
    }

    pub fn shape(&self, side: Side) -> &AlgebraShape {
        match side {
            Side::A => &self.shape_a,
            Side::B => &self.shape_b,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.shape_a.total_dim(), self.shape_b.total_dim())
    }

    /// The same state with the tensor factors exchanged.
    pub fn swapped(&self) -> Self {
        let (da, db) = self.dims();
        let m = matcore::swap_factors(&self.matrix, da, db).expect("dimensions are consistent");
        Self::new_unchecked(self.shape_b.clone(), self.shape_a.clone(), m)
    }

    pub fn validate(&self) -> Result<()> {
        validate_density(&self.matrix, &algebra::tensor_labels(&self.shape_a, &self.shape_b)).map(|_| ())
    }
}

/// Reduced state on the kept side.
pub fn reduce(j: &JointState, keep: Side) -> State {
    let (da, db) = j.dims();
    let m = matcore::partial_trace(&j.matrix, da, db, keep).expect("dimensions are consistent");
    let shape = j.shape(keep).clone();
    let m = algebra::mask_by_labels(&matcore::hermitian_part(&m), &shape.block_labels());
    State::new_unchecked(shape, m)
}

/// Transpose in the embedding basis.
pub fn transpose_in_basis(s: &State) -> State {
    State::new_unchecked(s.shape.clone(), s.matrix.transpose())
}

/// True when every off-diagonal entry is at most `tol` in modulus.
pub fn is_classical(s: &State, tol: f64) -> bool {
    let m = &s.matrix;
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() <= tol))
}
