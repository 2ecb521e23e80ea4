//! POVMs as measurements and as preparations.
//!
//! A POVM `{Mⱼ}` measures a state `ρ` with outcome probabilities
//! `Tr(Mⱼ ρ)`. Read the other way it prepares `ρ`: draw `j` with the same
//! probabilities and emit `√ρ Mⱼ √ρ / Tr(Mⱼ ρ)`. Every ensemble
//! decomposition of `ρ` arises this way, and [`povm_from_ensemble`]
//! recovers the POVM.

use rand::Rng;

use crate::algebra::{self, AlgebraShape};
use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, RANK_TOL};
use crate::states::{self, State};

pub const POSITIVITY_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Outcomes less likely than this are dropped from prepared ensembles.
pub const ZERO_PROBABILITY: f64 = 1e-12;
pub const ENSEMBLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    shape: AlgebraShape,
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(shape: AlgebraShape, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("a POVM needs at least one element".into()));
        }
        let n = shape.total_dim();
        let labels = shape.block_labels();
        let mut sum = matcore::zeros(n);
        let mut cleaned = Vec::with_capacity(elements.len());
        for e in &elements {
            if e.nrows() != n || e.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if e.nrows() != n { e.nrows() } else { e.ncols() },
                });
            }
            let herm = matcore::hermitian_deviation(e);
            if herm > POSITIVITY_TOL {
                return Err(Error::InvariantViolation {
                    invariant: "hermitian",
                    deviation: herm,
                });
            }
            let off = algebra::off_block_magnitude(e, &labels);
            if off > states::BLOCK_SUPPORT_TOL {
                return Err(Error::InvariantViolation {
                    invariant: "block_support",
                    deviation: off,
                });
            }
            let e = algebra::mask_by_labels(&matcore::hermitian_part(e), &labels);
            let min = matcore::min_eigenvalue(&e, POSITIVITY_TOL)?;
            if min < -POSITIVITY_TOL {
                return Err(Error::InvariantViolation {
                    invariant: "positivity",
                    deviation: -min,
                });
            }
            sum += &e;
            cleaned.push(e);
        }
        let dev = matcore::max_abs_diff(&sum, &matcore::identity(n));
        if dev > COMPLETENESS_TOL {
            return Err(Error::InvariantViolation {
                invariant: "completeness",
                deviation: dev,
            });
        }
        Ok(Self {
            shape,
            elements: cleaned,
        })
    }

    pub fn new_unchecked(shape: AlgebraShape, elements: Vec<ComplexMatrix>) -> Self {
        Self { shape, elements }
    }

    /// `{I}`.
    pub fn trivial(shape: &AlgebraShape) -> Self {
        Self::new_unchecked(shape.clone(), vec![matcore::identity(shape.total_dim())])
    }

    /// Projectors onto the embedding basis vectors.
    pub fn computational(shape: &AlgebraShape) -> Self {
        let n = shape.total_dim();
        let elements = (0..n)
            .map(|j| {
                let mut p = matcore::zeros(n);
                p[(j, j)] = matcore::real(1.0);
                p
            })
            .collect();
        Self::new_unchecked(shape.clone(), elements)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element-wise transpose in the embedding basis.
    pub fn transposed(&self) -> Self {
        Self::new_unchecked(
            self.shape.clone(),
            self.elements.iter().map(|e| e.transpose()).collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.shape.clone(), self.elements.clone()).map(|_| ())
    }
}

/// Weighted list of states. `outcomes[i]` records which POVM element
/// produced member `i` when the ensemble comes from [`prepare`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    members: Vec<State>,
    outcomes: Vec<usize>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, members: Vec<State>) -> Result<Self> {
        let outcomes = (0..members.len()).collect();
        Self::with_outcomes(weights, members, outcomes)
    }

    pub fn with_outcomes(weights: Vec<f64>, members: Vec<State>, outcomes: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("empty ensemble".into()));
        }
        if weights.len() != members.len() {
            return Err(Error::DimensionMismatch {
                expected: members.len(),
                found: weights.len(),
            });
        }
        if outcomes.len() != members.len() {
            return Err(Error::DimensionMismatch {
                expected: members.len(),
                found: outcomes.len(),
            });
        }
        if let Some(&w) = weights.iter().find(|&&w| w.is_nan() || w < 0.0) {
            return Err(Error::InvariantViolation {
                invariant: "nonnegative_weights",
                deviation: -w,
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > ENSEMBLE_TOL {
            return Err(Error::InvariantViolation {
                invariant: "weights_sum",
                deviation: (total - 1.0).abs(),
            });
        }
        let shape = members[0].shape();
        if let Some(m) = members.iter().find(|m| m.shape() != shape) {
            return Err(Error::shape_mismatch(shape, m.shape()));
        }
        Ok(Self {
            weights,
            members,
            outcomes,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[State] {
        &self.members
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.members[0].shape()
    }

    /// `Σ pⱼ ρⱼ`.
    pub fn average(&self) -> ComplexMatrix {
        let n = self.shape().total_dim();
        self.weights
            .iter()
            .zip(&self.members)
            .fold(matcore::zeros(n), |acc, (&p, m)| acc + m.matrix().scale(p))
    }

    /// Largest entry of `Σ pⱼ ρⱼ − ρ`.
    pub fn decomposition_deviation(&self, s: &State) -> f64 {
        matcore::max_abs_diff(&self.average(), s.matrix())
    }
}

fn check_shapes(m: &Povm, s: &State) -> Result<()> {
    if m.shape() != s.shape() {
        return Err(Error::shape_mismatch(m.shape(), s.shape()));
    }
    Ok(())
}

/// Outcome probabilities `Tr(Mⱼ ρ)`.
pub fn measure(m: &Povm, s: &State) -> Result<Vec<f64>> {
    check_shapes(m, s)?;
    Ok(m.elements
        .iter()
        .map(|e| matcore::trace_of_product(e, s.matrix()).re)
        .collect())
}

/// The `M`-preparation of `s`. Outcomes with probability at most
/// [`ZERO_PROBABILITY`] are dropped.
pub fn prepare(m: &Povm, s: &State) -> Result<Ensemble> {
    let probs = measure(m, s)?;
    let root = matcore::mat_sqrt(s.matrix(), states::POSITIVITY_TOL)?;
    let labels = s.shape().block_labels();
    let mut weights = Vec::new();
    let mut members = Vec::new();
    let mut outcomes = Vec::new();
    for (j, (e, &p)) in m.elements.iter().zip(&probs).enumerate() {
        if p <= ZERO_PROBABILITY {
            continue;
        }
        let rho = (&root * e * &root).unscale(p);
        let rho = algebra::mask_by_labels(&matcore::hermitian_part(&rho), &labels);
        weights.push(p);
        members.push(State::new_unchecked(s.shape().clone(), rho));
        outcomes.push(j);
    }
    Ok(Ensemble {
        weights,
        members,
        outcomes,
    })
}

/// The POVM whose preparation of `s` yields `e`:
/// `Mⱼ = s^{-1/2} pⱼ ρⱼ s^{-1/2}`, plus the completion `I − Π_supp(s)`
/// as a final element when `s` is rank deficient.
pub fn povm_from_ensemble(e: &Ensemble, s: &State) -> Result<Povm> {
    if e.shape() != s.shape() {
        return Err(Error::shape_mismatch(s.shape(), e.shape()));
    }
    let dev = e.decomposition_deviation(s);
    if dev > ENSEMBLE_TOL {
        return Err(Error::InvariantViolation {
            invariant: "ensemble_average",
            deviation: dev,
        });
    }
    let support = matcore::support_projector(s.matrix(), RANK_TOL)?;
    for member in &e.members {
        let inside = &support * member.matrix() * &support;
        let leak = matcore::max_abs_diff(&inside, member.matrix());
        if leak > ENSEMBLE_TOL {
            return Err(Error::SupportViolation { deviation: leak });
        }
    }
    let inv_sqrt = matcore::gen_inv_sqrt(s.matrix(), RANK_TOL)?;
    let labels = s.shape().block_labels();
    let mut elements: Vec<ComplexMatrix> = e
        .weights
        .iter()
        .zip(&e.members)
        .map(|(&p, member)| {
            let m = (&inv_sqrt * member.matrix() * &inv_sqrt).scale(p);
            algebra::mask_by_labels(&matcore::hermitian_part(&m), &labels)
        })
        .collect();
    let n = s.shape().total_dim();
    let complement = matcore::identity(n) - &support;
    if matcore::max_abs(&complement) > COMPLETENESS_TOL {
        elements.push(algebra::mask_by_labels(&matcore::hermitian_part(&complement), &labels));
    }
    Ok(Povm::new_unchecked(s.shape().clone(), elements))
}

/// `n` independent outcomes drawn by inverse CDF over the outcome order;
/// returns the count of each outcome.
pub fn sample<R: Rng + ?Sized>(m: &Povm, s: &State, rng: &mut R, n: usize) -> Result<Vec<usize>> {
    let probs = measure(m, s)?;
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let mut counts = vec![0; probs.len()];
    for _ in 0..n {
        let u = rng.gen::<f64>() * total;
        let idx = cdf.iter().position(|&c| u < c).unwrap_or(probs.len() - 1);
        counts[idx] += 1;
    }
    Ok(counts)
}
