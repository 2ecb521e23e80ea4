//! Conditional density operators.
//!
//! For a joint state `ρ_AB` the conditional state of `B` given `A` is
//!
//! ```text
//! ρ_{B|A} = (ρ_A^{-1/2} ⊗ I_B) ρ_AB (ρ_A^{-1/2} ⊗ I_B)
//! ```
//!
//! with the generalized inverse on the support of `ρ_A`. It is positive,
//! and its partial trace over `B` is the support projector of `ρ_A`. For
//! diagonal states it reduces to the matrix of conditional probabilities.
//!
//! A [`ConditionalState`] always stores its matrix with the conditioning
//! system as the FIRST tensor factor, whatever the letters: `ρ_{B|A}` lives
//! on `A ⊗ B` and `ρ_{A|B}` on `B ⊗ A`.

use crate::algebra::{self, AlgebraShape};
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, Side, RANK_TOL};
use crate::states::{self, JointState, State};

pub const POSITIVITY_TOL: f64 = 1e-10;
pub const PROJECTOR_TOL: f64 = 1e-9;
pub const RANK_INTEGER_TOL: f64 = 1e-6;
/// Largest trace defect tolerated when recombining a marginal with a conditional.
pub const RECOMBINE_TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    conditioning: AlgebraShape,
    conditioned: AlgebraShape,
    matrix: ComplexMatrix,
}

/// The trace of the conditioning marginal rounded to the nearest integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankReport {
    pub trace: f64,
    pub rank: usize,
    pub deviation: f64,
}

impl RankReport {
    pub fn is_integral(&self) -> bool {
        self.deviation <= RANK_INTEGER_TOL
    }
}

impl ConditionalState {
    /// Validates positivity, block support, and that the partial trace over
    /// the conditioned system is a projector of integral trace.
    pub fn new(conditioning: AlgebraShape, conditioned: AlgebraShape, matrix: ComplexMatrix) -> Result<Self> {
        let labels = algebra::tensor_labels(&conditioning, &conditioned);
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
        let herm = matcore::hermitian_deviation(&matrix);
        if herm > POSITIVITY_TOL {
            return Err(Error::InvariantViolation {
                invariant: "hermitian",
                deviation: herm,
            });
        }
        let off = algebra::off_block_magnitude(&matrix, &labels);
        if off > states::BLOCK_SUPPORT_TOL {
            return Err(Error::InvariantViolation {
                invariant: "block_support",
                deviation: off,
            });
        }
        let matrix = algebra::mask_by_labels(&matcore::hermitian_part(&matrix), &labels);
        let min = matcore::min_eigenvalue(&matrix, POSITIVITY_TOL)?;
        if min < -POSITIVITY_TOL {
            return Err(Error::InvariantViolation {
                invariant: "positivity",
                deviation: -min,
            });
        }
        let cond = Self {
            conditioning,
            conditioned,
            matrix,
        };
        let proj_dev = matcore::projector_deviation(&cond.conditioning_marginal());
        if proj_dev > PROJECTOR_TOL {
            return Err(Error::InvariantViolation {
                invariant: "marginal_projector",
                deviation: proj_dev,
            });
        }
        let report = cond.rank_report();
        if !report.is_integral() {
            return Err(Error::InvariantViolation {
                invariant: "integer_rank",
                deviation: report.deviation,
            });
        }
        Ok(cond)
    }

    pub fn new_unchecked(conditioning: AlgebraShape, conditioned: AlgebraShape, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), conditioning.total_dim() * conditioned.total_dim());
        Self {
            conditioning,
            conditioned,
            matrix,
        }
    }

    pub fn conditioning(&self) -> &AlgebraShape {
        &self.conditioning
    }

    pub fn conditioned(&self) -> &AlgebraShape {
        &self.conditioned
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.conditioning.total_dim(), self.conditioned.total_dim())
    }

    /// Partial trace over the conditioned system: the support projector of
    /// the conditioning marginal.
    pub fn conditioning_marginal(&self) -> ComplexMatrix {
        let (da, db) = self.dims();
        matcore::partial_trace(&self.matrix, da, db, Side::A).expect("dimensions are consistent")
    }

    pub fn rank_report(&self) -> RankReport {
        let trace = matcore::trace(&self.matrix).re;
        let rounded = trace.round().max(0.0);
        RankReport {
            trace,
            rank: rounded as usize,
            deviation: (trace - rounded).abs(),
        }
    }

    /// Diagonal entries arranged as `table[j][k] = (ρ_{B|A})_{jk,jk}`:
    /// for classical states, the probability of `k` given `j`.
    pub fn conditional_probabilities(&self) -> Vec<Vec<f64>> {
        let (da, db) = self.dims();
        (0..da)
            .map(|j| (0..db).map(|k| self.matrix[(j * db + k, j * db + k)].re).collect())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.conditioning.clone(), self.conditioned.clone(), self.matrix.clone()).map(|_| ())
    }
}

/// Conditional state of the other system given `condition_on`.
pub fn conditional_from_joint(j: &JointState, condition_on: Side) -> ConditionalState {
    let oriented;
    let j = match condition_on {
        Side::A => j,
        Side::B => {
            oriented = j.swapped();
            &oriented
        }
    };
    let marginal = states::reduce(j, Side::A);
    let inv_sqrt = matcore::gen_inv_sqrt(marginal.matrix(), RANK_TOL).expect("reduced states are positive");
    let x = matcore::kron(&inv_sqrt, &matcore::identity(j.shape_b().total_dim()));
    let m = &x * j.matrix() * &x;
    let labels = algebra::tensor_labels(j.shape_a(), j.shape_b());
    let m = algebra::mask_by_labels(&matcore::hermitian_part(&m), &labels);
    ConditionalState::new_unchecked(j.shape_a().clone(), j.shape_b().clone(), m)
}

/// Recombines a marginal on the conditioning system with a conditional
/// state. The result has the conditioning system as its `A` factor.
pub fn joint_from_conditional(marginal: &State, cond: &ConditionalState) -> Result<JointState> {
    if marginal.shape() != cond.conditioning() {
        return Err(Error::shape_mismatch(cond.conditioning(), marginal.shape()));
    }
    let root = matcore::mat_sqrt(marginal.matrix(), states::POSITIVITY_TOL)?;
    let x = matcore::kron(&root, &matcore::identity(cond.conditioned().total_dim()));
    let m = &x * cond.matrix() * &x;
    let tr = matcore::trace(&m).re;
    if (tr - 1.0).abs() > RECOMBINE_TRACE_TOL {
        return Err(Error::SupportMismatch {
            deviation: (tr - 1.0).abs(),
        });
    }
    let labels = algebra::tensor_labels(cond.conditioning(), cond.conditioned());
    let m = algebra::mask_by_labels(&matcore::hermitian_part(&m), &labels);
    Ok(JointState::new_unchecked(
        cond.conditioning().clone(),
        cond.conditioned().clone(),
        m,
    ))
}

/// Turns `ρ_{A|B}` into `ρ_{B|A}`:
///
/// ```text
/// ρ_{B|A} = (ρ_A^{-1/2} ⊗ ρ_B^{1/2}) ρ_{A|B} (ρ_A^{-1/2} ⊗ ρ_B^{1/2})
/// ```
///
/// `marg_a` lives on the conditioned system of `cond_a_given_b` and
/// `marg_b` on its conditioning system, which must have full rank.
pub fn bayes_invert(cond_a_given_b: &ConditionalState, marg_a: &State, marg_b: &State) -> Result<ConditionalState> {
    if marg_a.shape() != cond_a_given_b.conditioned() {
        return Err(Error::shape_mismatch(cond_a_given_b.conditioned(), marg_a.shape()));
    }
    if marg_b.shape() != cond_a_given_b.conditioning() {
        return Err(Error::shape_mismatch(cond_a_given_b.conditioning(), marg_b.shape()));
    }
    let eig_b = matcore::herm_eig(marg_b.matrix(), states::HERMITIAN_TOL)?;
    if eig_b.rank(RANK_TOL) < eig_b.dim() {
        return Err(Error::SupportMismatch {
            deviation: eig_b.min_eigenvalue().abs(),
        });
    }
    let root_b = eig_b.map_spectrum(|l| l.max(0.0).sqrt());
    let inv_sqrt_a = matcore::gen_inv_sqrt(marg_a.matrix(), RANK_TOL)?;

    let (db, da) = cond_a_given_b.dims();
    // reorder from B ⊗ A to A ⊗ B
    let on_ab = matcore::swap_factors(cond_a_given_b.matrix(), db, da)?;
    let x = matcore::kron(&inv_sqrt_a, &root_b);
    let m = &x * on_ab * &x;
    let labels = algebra::tensor_labels(marg_a.shape(), marg_b.shape());
    let m = algebra::mask_by_labels(&matcore::hermitian_part(&m), &labels);
    Ok(ConditionalState::new_unchecked(
        marg_a.shape().clone(),
        marg_b.shape().clone(),
        m,
    ))
}
