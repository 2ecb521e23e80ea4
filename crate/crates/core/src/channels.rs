//! Trace-preserving completely positive maps and their conditional states.
//!
//! A [`Channel`] is kept in Kraus form. Its conditional state is obtained
//! by letting the channel act on the second half of the (projected)
//! unnormalized maximally entangled operator
//!
//! ```text
//! ρ̃⁺ = Σ_{j,k in the same block} |j⟩⟨k| ⊗ |j⟩⟨k|
//! ```
//!
//! which for an irreducible input algebra is `|Φ⁺⟩⟨Φ⁺|` with
//! `|Φ⁺⟩ = Σⱼ |jj⟩`. The conditioning (input) system is the first tensor
//! factor of every conditional state, so the conditional state of a channel
//! `E` is `Σ |j⟩⟨k| ⊗ E(|j⟩⟨k|)` over same-block pairs. All of this is
//! relative to the standard embedding basis.

use crate::algebra::{self, AlgebraShape};
use crate::conditional::{self, ConditionalState};
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, Side, RANK_TOL};
use crate::states::{self, State};

/// Tolerance on `Σ K†K = I`.
pub const TP_TOL: f64 = 1e-9;
/// Tolerance on outputs leaving the output algebra.
pub const OUTPUT_ALGEBRA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    shape_in: AlgebraShape,
    shape_out: AlgebraShape,
    kraus: Vec<ComplexMatrix>,
    support: Option<ComplexMatrix>,
}

impl Channel {
    pub fn new(shape_in: AlgebraShape, shape_out: AlgebraShape, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let ch = Self::build(shape_in, shape_out, kraus, None)?;
        let dev = ch.tp_deviation();
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(ch)
    }

    /// A channel that is trace preserving only on the range of `support`,
    /// i.e. `Σ K†K = support` for an orthogonal projector `support`.
    pub fn with_support(
        shape_in: AlgebraShape,
        shape_out: AlgebraShape,
        kraus: Vec<ComplexMatrix>,
        support: ComplexMatrix,
    ) -> Result<Self> {
        let pdev = matcore::projector_deviation(&support);
        if pdev > conditional::PROJECTOR_TOL {
            return Err(Error::InvariantViolation {
                invariant: "support_projector",
                deviation: pdev,
            });
        }
        let ch = Self::build(shape_in, shape_out, kraus, Some(support))?;
        let dev = matcore::max_abs_diff(&ch.kraus_sum(), ch.support.as_ref().unwrap());
        if dev > TP_TOL {
            return Err(Error::NotTracePreserving { deviation: dev });
        }
        Ok(ch)
    }

    fn build(
        shape_in: AlgebraShape,
        shape_out: AlgebraShape,
        kraus: Vec<ComplexMatrix>,
        support: Option<ComplexMatrix>,
    ) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument(
                "a channel needs at least one Kraus operator".into(),
            ));
        }
        let (din, dout) = (shape_in.total_dim(), shape_out.total_dim());
        for k in &kraus {
            if k.nrows() != dout {
                return Err(Error::DimensionMismatch {
                    expected: dout,
                    found: k.nrows(),
                });
            }
            if k.ncols() != din {
                return Err(Error::DimensionMismatch {
                    expected: din,
                    found: k.ncols(),
                });
            }
        }
        let ch = Self {
            shape_in,
            shape_out,
            kraus,
            support,
        };
        let off = ch.output_algebra_deviation();
        if off > OUTPUT_ALGEBRA_TOL {
            return Err(Error::InvariantViolation {
                invariant: "output_algebra",
                deviation: off,
            });
        }
        Ok(ch)
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::new(shape.clone(), shape.clone(), vec![matcore::identity(shape.total_dim())])
            .expect("identity is a channel")
    }

    /// `ρ ↦ U ρ U†` on an irreducible algebra.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch {
                expected: u.nrows(),
                found: u.ncols(),
            });
        }
        let shape = AlgebraShape::irreducible(u.nrows());
        Self::new(shape.clone(), shape, vec![u])
    }

    /// `ρ ↦ V ρ V†` for an isometry `V: C^din → C^dout` between irreducible algebras.
    pub fn isometry(v: ComplexMatrix) -> Result<Self> {
        let (dout, din) = v.shape();
        Self::new(AlgebraShape::irreducible(din), AlgebraShape::irreducible(dout), vec![v])
    }

    /// The constant map `ρ ↦ Tr(ρ) I/d` on `B(C^d)`.
    pub fn completely_depolarizing(d: usize) -> Self {
        let scale = 1.0 / (d as f64).sqrt();
        let kraus = (0..d)
            .flat_map(|i| {
                (0..d).map(move |j| {
                    let mut k = matcore::zeros(d);
                    k[(i, j)] = matcore::real(scale);
                    k
                })
            })
            .collect();
        let shape = AlgebraShape::irreducible(d);
        Self::new(shape.clone(), shape, kraus).expect("depolarizing channel is trace preserving")
    }

    /// Classical channel from a row-stochastic matrix, `rows[j][k] = P(k | j)`.
    pub fn from_stochastic_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let din = rows.len();
        let dout = rows.first().map(Vec::len).unwrap_or(0);
        if din == 0 || dout == 0 {
            return Err(Error::InvalidArgument("empty stochastic matrix".into()));
        }
        let mut kraus = Vec::new();
        for (j, row) in rows.iter().enumerate() {
            if row.len() != dout {
                return Err(Error::DimensionMismatch {
                    expected: dout,
                    found: row.len(),
                });
            }
            for (k, &p) in row.iter().enumerate() {
                if p < 0.0 {
                    return Err(Error::InvalidArgument(format!("negative transition probability {p}")));
                }
                if p > 0.0 {
                    let mut m = ComplexMatrix::zeros(dout, din);
                    m[(k, j)] = matcore::real(p.sqrt());
                    kraus.push(m);
                }
            }
        }
        Self::new(AlgebraShape::classical(din), AlgebraShape::classical(dout), kraus)
    }

    pub fn shape_in(&self) -> &AlgebraShape {
        &self.shape_in
    }

    pub fn shape_out(&self) -> &AlgebraShape {
        &self.shape_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Projector (in the input basis) on which the channel is trace
    /// preserving, when that is a proper subspace.
    pub fn support(&self) -> Option<&ComplexMatrix> {
        self.support.as_ref()
    }

    pub fn is_support_restricted(&self) -> bool {
        self.support.is_some()
    }

    /// `Σ K†K`.
    pub fn kraus_sum(&self) -> ComplexMatrix {
        let din = self.shape_in.total_dim();
        self.kraus
            .iter()
            .fold(matcore::zeros(din), |acc, k| acc + k.adjoint() * k)
    }

    /// Largest entry of `Σ K†K − I`.
    pub fn tp_deviation(&self) -> f64 {
        matcore::max_abs_diff(&self.kraus_sum(), &matcore::identity(self.shape_in.total_dim()))
    }

    fn output_algebra_deviation(&self) -> f64 {
        let choi = choi_matrix(self);
        algebra::off_block_magnitude(&choi, &algebra::tensor_labels(&self.shape_in, &self.shape_out))
    }

    /// `Σ K m K†` on an arbitrary input-sized matrix.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let dout = self.shape_out.total_dim();
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(dout, dout), |acc, k| acc + k * m * k.adjoint())
    }

    pub fn apply(&self, s: &State) -> Result<State> {
        if s.shape() != &self.shape_in {
            return Err(Error::shape_mismatch(&self.shape_in, s.shape()));
        }
        let out = self.apply_matrix(s.matrix());
        if self.support.is_some() {
            let tr = matcore::trace(&out).re;
            if (tr - 1.0).abs() > conditional::RECOMBINE_TRACE_TOL {
                return Err(Error::SupportMismatch {
                    deviation: (tr - 1.0).abs(),
                });
            }
        }
        let out = algebra::mask_by_labels(&matcore::hermitian_part(&out), &self.shape_out.block_labels());
        Ok(State::new_unchecked(self.shape_out.clone(), out))
    }

    /// For classical channels, `rows[j][k] = ⟨k|E(|j⟩⟨j|)|k⟩`.
    pub fn stochastic_matrix(&self) -> Vec<Vec<f64>> {
        let (din, dout) = (self.shape_in.total_dim(), self.shape_out.total_dim());
        (0..din)
            .map(|j| {
                let mut e = matcore::zeros(din);
                e[(j, j)] = matcore::real(1.0);
                let out = self.apply_matrix(&e);
                (0..dout).map(|k| out[(k, k)].re).collect()
            })
            .collect()
    }

    /// Equivalent channel with the minimal Kraus set read off the Choi
    /// spectrum.
    pub fn canonical(&self) -> Channel {
        let kraus = kraus_from_choi(
            &choi_matrix(self),
            self.shape_in.total_dim(),
            self.shape_out.total_dim(),
        );
        Channel {
            shape_in: self.shape_in.clone(),
            shape_out: self.shape_out.clone(),
            kraus,
            support: self.support.clone(),
        }
    }

    /// Number of operators in the minimal Kraus decomposition.
    pub fn kraus_rank(&self) -> usize {
        matcore::rank(&choi_matrix(self), RANK_TOL).expect("Choi matrices are Hermitian")
    }
}

/// `ρ̃⁺` on `A ⊗ A′` in embedded form.
pub fn max_ent_matrix(shape: &AlgebraShape) -> ComplexMatrix {
    let d = shape.total_dim();
    let labels = shape.block_labels();
    let mut m = matcore::zeros(d * d);
    for j in 0..d {
        for k in 0..d {
            if labels[j] == labels[k] {
                m[(j * d + j, k * d + k)] = matcore::real(1.0);
            }
        }
    }
    m
}

/// The maximally entangled conditional state, projected onto the algebra
/// when it has more than one block. Its conditioning marginal is `I`.
pub fn max_ent_conditional(shape: &AlgebraShape) -> ConditionalState {
    ConditionalState::new_unchecked(shape.clone(), shape.clone(), max_ent_matrix(shape))
}

/// `(𝒾 ⊗ E)(ρ̃⁺)` on the `in ⊗ out` layout.
pub fn choi_matrix(c: &Channel) -> ComplexMatrix {
    let din = c.shape_in.total_dim();
    let dout = c.shape_out.total_dim();
    let phi = max_ent_matrix(&c.shape_in);
    let id = matcore::identity(din);
    c.kraus.iter().fold(matcore::zeros(din * dout), |acc, k| {
        let x = matcore::kron(&id, k);
        acc + &x * &phi * x.adjoint()
    })
}

/// Conditional state of the output given the input.
pub fn choi_conditional(c: &Channel) -> ConditionalState {
    let m = matcore::hermitian_part(&choi_matrix(c));
    ConditionalState::new_unchecked(c.shape_in.clone(), c.shape_out.clone(), m)
}

/// Conditional state of an arbitrary linear map given by its action on
/// input matrices. Used to inspect maps that have no Kraus form.
pub fn choi_of_map(
    shape_in: &AlgebraShape,
    dim_out: usize,
    map: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> ComplexMatrix {
    let din = shape_in.total_dim();
    let labels = shape_in.block_labels();
    let mut choi = matcore::zeros(din * dim_out);
    for j in 0..din {
        for k in 0..din {
            if labels[j] != labels[k] {
                continue;
            }
            let mut e = matcore::zeros(din);
            e[(j, k)] = matcore::real(1.0);
            let out = map(&e);
            for a in 0..dim_out {
                for b in 0..dim_out {
                    choi[(j * dim_out + a, k * dim_out + b)] = out[(a, b)];
                }
            }
        }
    }
    choi
}

/// Minimal Kraus set of the CP map with Choi matrix `choi` (`in ⊗ out`
/// layout): one operator per eigenvalue above `RANK_TOL · λ_max`.
pub fn kraus_from_choi(choi: &ComplexMatrix, din: usize, dout: usize) -> Vec<ComplexMatrix> {
    let eig = matcore::herm_eig(&matcore::hermitian_part(choi), 1e-9).expect("Hermitian part is Hermitian");
    let cut = eig.cutoff(RANK_TOL);
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cut)
        .map(|(idx, &l)| {
            let s = l.sqrt();
            let v = eig.eigenvectors.column(idx);
            ComplexMatrix::from_fn(dout, din, |b, j| v[j * dout + b] * s)
        })
        .collect()
}

/// Recovers the channel whose conditional state is `cond`.
///
/// When the conditioning marginal is a proper projector the returned
/// channel is flagged as support restricted.
pub fn channel_from_conditional(cond: &ConditionalState) -> Result<Channel> {
    let marginal = cond.conditioning_marginal();
    let pdev = matcore::projector_deviation(&marginal);
    if pdev > conditional::PROJECTOR_TOL {
        return Err(Error::NotTracePreserving { deviation: pdev });
    }
    let (din, dout) = cond.dims();
    let kraus = kraus_from_choi(cond.matrix(), din, dout);
    let shape_in = cond.conditioning().clone();
    let shape_out = cond.conditioned().clone();
    let full = matcore::max_abs_diff(&marginal, &matcore::identity(din)) <= TP_TOL;
    if kraus.is_empty() {
        return Err(Error::NotTracePreserving { deviation: 1.0 });
    }
    if full {
        Channel::new(shape_in, shape_out, kraus)
    } else {
        Channel::with_support(
            shape_in,
            shape_out,
            kraus,
            matcore::hermitian_part(&marginal.transpose()),
        )
    }
}

/// Action of the channel encoded by `cond` on `sigma`, evaluated directly as
///
/// ```text
/// Tr_{AA′}[(ρ̃⁺_{A′|A} ⊗ I_B)(σ_A ⊗ ρ_{B|A′})]
/// ```
///
/// on `A ⊗ A′ ⊗ B`, without extracting Kraus operators.
pub fn apply_via_conditional(cond: &ConditionalState, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (da, db) = cond.dims();
    if sigma.nrows() != da || sigma.ncols() != da {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: sigma.nrows(),
        });
    }
    let phi = max_ent_matrix(cond.conditioning());
    let left = matcore::kron(&phi, &matcore::identity(db));
    let right = matcore::kron(sigma, cond.matrix());
    matcore::partial_trace(&(left * right), da * da, db, Side::B)
}

/// Diagnostics for a candidate channel.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelReport {
    /// Largest entry of `Σ K†K − I` (or of `Tr_out C − I` for a bare Choi matrix).
    pub tp_deviation: f64,
    /// Smallest eigenvalue of the Choi matrix.
    pub choi_min_eigenvalue: f64,
    /// Largest Choi entry outside the `in ⊗ out` block pattern.
    pub block_support_deviation: f64,
    pub tol: f64,
}

impl ChannelReport {
    pub fn is_trace_preserving(&self) -> bool {
        self.tp_deviation <= self.tol
    }

    pub fn is_completely_positive(&self) -> bool {
        self.choi_min_eigenvalue >= -self.tol
    }

    pub fn is_block_supported(&self) -> bool {
        self.block_support_deviation <= self.tol
    }

    pub fn passes(&self) -> bool {
        self.is_trace_preserving() && self.is_completely_positive() && self.is_block_supported()
    }
}

pub fn validate_channel(c: &Channel, tol: f64) -> ChannelReport {
    let mut report = validate_choi(&choi_matrix(c), &c.shape_in, &c.shape_out, tol);
    report.tp_deviation = c.tp_deviation();
    report
}

/// Checks a linear map given only by its Choi matrix.
pub fn validate_choi(
    choi: &ComplexMatrix,
    shape_in: &AlgebraShape,
    shape_out: &AlgebraShape,
    tol: f64,
) -> ChannelReport {
    let (din, dout) = (shape_in.total_dim(), shape_out.total_dim());
    let marginal = matcore::partial_trace(choi, din, dout, Side::A).expect("Choi matrix has in*out dimension");
    let tp_deviation = matcore::max_abs_diff(&marginal, &matcore::identity(din));
    let choi_min_eigenvalue = matcore::herm_eig(&matcore::hermitian_part(choi), f64::INFINITY)
        .map(|e| e.min_eigenvalue())
        .unwrap_or(f64::NEG_INFINITY);
    let block_support_deviation = algebra::off_block_magnitude(choi, &algebra::tensor_labels(shape_in, shape_out));
    ChannelReport {
        tp_deviation,
        choi_min_eigenvalue,
        block_support_deviation,
        tol,
    }
}

/// True when the conditional state of `c` is pure: one eigenvalue equal to
/// its trace and the rest zero, within `tol`.
pub fn is_isometry(c: &Channel, tol: f64) -> bool {
    let cond = choi_conditional(c);
    let trace = matcore::trace(cond.matrix()).re;
    let eig = match matcore::herm_eig(cond.matrix(), states::HERMITIAN_TOL) {
        Ok(e) => e,
        Err(_) => return false,
    };
    let mut values = eig.eigenvalues.iter();
    match values.next() {
        Some(&top) => (top - trace).abs() <= tol && values.all(|l| l.abs() <= tol),
        None => false,
    }
}

/// An isometry between equal irreducible algebras.
pub fn is_unitary(c: &Channel, tol: f64) -> bool {
    c.shape_in == c.shape_out && c.shape_in.is_irreducible() && is_isometry(c, tol)
}
