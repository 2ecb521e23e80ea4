//! Noisy-gate teleportation through the conditional state of a channel.
//!
//! Alice holds `σ_A`; Alice and Bob share `ρ_{A′B} = ρ_{B|A′} / d`, the
//! normalized Choi state of the channel. Alice measures `A A′` with effects
//! `Eᵢ`, and Bob is left with
//!
//! ```text
//! Tr_{AA′}[(Eᵢ ⊗ I_B)(σ_A ⊗ ρ_{A′B})] / pᵢ
//! ```
//!
//! For the maximally entangled effect this is `E(σ_A)` with `pᵢ = 1/d²`.
//! On non-irreducible algebras, effects whose images under the block
//! projection of `A′` coincide are grouped into one outcome; for a bit
//! this turns the Bell measurement into a parity measurement and the
//! protocol into a one-time pad.

use serde::Serialize;

use crate::algebra::{self, AlgebraShape};
use crate::channels::{self, Channel};
use crate::error::{Error, Result};
use crate::matcore::{self, c, ComplexMatrix, Side, RANK_TOL};
use crate::povm::{Povm, ZERO_PROBABILITY};
use crate::states::State;

/// Matching tolerance for recognising the maximally entangled effect and
/// for grouping effects with the same projected image.
pub const EFFECT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TeleportBranch {
    /// Indices into the measurement basis merged into this outcome.
    pub effects: Vec<usize>,
    pub probability: f64,
    /// `None` when the outcome has zero probability.
    pub bob_state: Option<State>,
    /// Bob's state after the outcome-dependent correction, when one exists.
    pub corrected_state: Option<State>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TeleportReport {
    pub success_probability: f64,
    /// One entry per branch, in branch order.
    pub outcome_probabilities: Vec<f64>,
    pub bob_state_on_success: State,
    pub grouping_used: bool,
    pub branches: Vec<TeleportBranch>,
    /// `max |bob_on_success − E(σ)|`.
    pub success_deviation: f64,
    /// Worst `max |corrected − E(σ)|` over corrected branches.
    pub correction_deviation: Option<f64>,
}

impl TeleportReport {
    pub fn success_branch(&self) -> &TeleportBranch {
        &self.branches[0]
    }

    pub fn probability_sum_deviation(&self) -> f64 {
        (self.outcome_probabilities.iter().sum::<f64>() - 1.0).abs()
    }
}

/// `|Φ⁺⟩ = Σⱼ |jj⟩ / √d` as a projector on `C^d ⊗ C^d`.
pub fn max_entangled_projector(d: usize) -> ComplexMatrix {
    bell_projector(d, 0, 0)
}

/// Generalized Bell projectors `(I ⊗ XᵃZᵇ)|Φ⁺⟩⟨Φ⁺|(I ⊗ XᵃZᵇ)†`, listed with
/// index `a·d + b`. For `d = 2` the order is `Φ⁺, Φ⁻, Ψ⁺, Ψ⁻`.
pub fn bell_basis(d: usize) -> Vec<ComplexMatrix> {
    (0..d)
        .flat_map(|a| (0..d).map(move |b| bell_projector(d, a, b)))
        .collect()
}

fn bell_projector(d: usize, a: usize, b: usize) -> ComplexMatrix {
    let norm = 1.0 / (d as f64).sqrt();
    let mut psi = vec![c(0.0, 0.0); d * d];
    for j in 0..d {
        let phase = 2.0 * std::f64::consts::PI * (b * j) as f64 / d as f64;
        psi[j * d + (j + a) % d] = c(phase.cos(), phase.sin()) * norm;
    }
    matcore::outer(&psi, &psi)
}

/// Teleportation over an irreducible input algebra with one outcome per
/// effect. `basis` must be a POVM on `A ⊗ A′` containing `|Φ⁺⟩⟨Φ⁺|`.
pub fn teleport(c: &Channel, input: &State, basis: &[ComplexMatrix]) -> Result<TeleportReport> {
    if !c.shape_in().is_irreducible() {
        return Err(Error::shape_mismatch(
            format!("({})", c.shape_in().total_dim()),
            c.shape_in(),
        ));
    }
    run(c, input, basis, false)
}

/// Teleportation on any input algebra, grouping effects whose images under
/// `I ⊗ P_{A′}` coincide. On an irreducible algebra no two Bell effects
/// coincide and the result matches [`teleport`].
pub fn teleport_general(c: &Channel, input: &State, basis: &[ComplexMatrix]) -> Result<TeleportReport> {
    run(c, input, basis, true)
}

/// Grouped Bell-basis teleportation of classical bits.
pub fn teleport_classical(c: &Channel, input: &State) -> Result<TeleportReport> {
    if !c.shape_in().is_classical() {
        return Err(Error::shape_mismatch(
            AlgebraShape::classical(c.shape_in().total_dim()),
            c.shape_in(),
        ));
    }
    teleport_general(c, input, &bell_basis(c.shape_in().total_dim()))
}

fn run(c: &Channel, input: &State, basis: &[ComplexMatrix], group: bool) -> Result<TeleportReport> {
    let shape = c.shape_in();
    if input.shape() != shape {
        return Err(Error::shape_mismatch(shape, input.shape()));
    }
    let d = shape.total_dim();
    let db = c.shape_out().total_dim();

    Povm::new(AlgebraShape::irreducible(d * d), basis.to_vec()).map_err(|e| Error::BasisNotPovm(e.to_string()))?;
    let phi = max_entangled_projector(d);
    let success = basis
        .iter()
        .position(|e| matcore::max_abs_diff(e, &phi) <= EFFECT_TOL)
        .ok_or_else(|| Error::BasisNotPovm("no maximally entangled effect".into()))?;

    let groups = if group {
        group_effects(basis, shape, success)
    } else {
        let mut order: Vec<Vec<usize>> = vec![vec![success]];
        order.extend((0..basis.len()).filter(|&i| i != success).map(|i| vec![i]));
        order
    };
    let grouping_used = groups.iter().any(|g| g.len() > 1);

    let resource = choi_resource(c);
    let target = c.apply_matrix(input.matrix());
    let identity_channel = is_identity(c);

    let mut branches = Vec::with_capacity(groups.len());
    let mut correction_deviation: Option<f64> = None;
    for effects in groups {
        let effect = effects.iter().fold(matcore::zeros(d * d), |acc, &i| acc + &basis[i]);
        let unnorm = branch_output(&effect, input.matrix(), &resource, db)?;
        let probability = matcore::trace(&unnorm).re;
        let bob_state = (probability > ZERO_PROBABILITY).then(|| normalized(c.shape_out(), &unnorm, probability));

        let mut corrected_state = None;
        if identity_channel {
            if let (Some(bob), Some(fix)) = (&bob_state, correction(shape, &effect, &resource)?) {
                let out = fix.apply_matrix(bob.matrix());
                let dev = matcore::max_abs_diff(&out, &target);
                correction_deviation = Some(correction_deviation.map_or(dev, |m: f64| m.max(dev)));
                corrected_state = Some(normalized(c.shape_out(), &out, matcore::trace(&out).re));
            }
        }
        branches.push(TeleportBranch {
            effects,
            probability,
            bob_state,
            corrected_state,
        });
    }

    let bob_state_on_success = branches[0].bob_state.clone().ok_or(Error::NoConvergence)?;
    let success_deviation = matcore::max_abs_diff(bob_state_on_success.matrix(), &target);
    Ok(TeleportReport {
        success_probability: branches[0].probability,
        outcome_probabilities: branches.iter().map(|b| b.probability).collect(),
        bob_state_on_success,
        grouping_used,
        branches,
        success_deviation,
        correction_deviation,
    })
}

/// `ρ_{A′B} = ρ_{B|A′} / d`.
fn choi_resource(c: &Channel) -> ComplexMatrix {
    let d = c.shape_in().total_dim() as f64;
    channels::choi_matrix(c).unscale(d)
}

/// `Tr_{AA′}[(E ⊗ I_B)(σ ⊗ ρ_{A′B})]` on `A ⊗ A′ ⊗ B`.
fn branch_output(
    effect: &ComplexMatrix,
    sigma: &ComplexMatrix,
    resource: &ComplexMatrix,
    db: usize,
) -> Result<ComplexMatrix> {
    let d2 = effect.nrows();
    let joint = matcore::kron(sigma, resource);
    let lifted = matcore::kron(effect, &matcore::identity(db));
    matcore::partial_trace(&(lifted * joint), d2, db, Side::B)
}

fn normalized(shape: &AlgebraShape, m: &ComplexMatrix, p: f64) -> State {
    let out = algebra::mask_by_labels(&matcore::hermitian_part(&m.unscale(p)), &shape.block_labels());
    State::new_unchecked(shape.clone(), out)
}

/// Groups effects by their image under `I ⊗ P_{A′}`; the group holding
/// `success` comes first, the rest keep basis order.
fn group_effects(basis: &[ComplexMatrix], shape: &AlgebraShape, success: usize) -> Vec<Vec<usize>> {
    let d = shape.total_dim();
    let la = shape.block_labels();
    let labels: Vec<usize> = (0..d * d).map(|k| la[k % d]).collect();
    let images: Vec<ComplexMatrix> = basis.iter().map(|e| algebra::mask_by_labels(e, &labels)).collect();

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, img) in images.iter().enumerate() {
        match groups
            .iter_mut()
            .find(|g| matcore::max_abs_diff(&images[g[0]], img) <= EFFECT_TOL)
        {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let pos = groups
        .iter()
        .position(|g| g.contains(&success))
        .expect("success effect is grouped");
    let first = groups.remove(pos);
    groups.insert(0, first);
    groups
}

fn is_identity(c: &Channel) -> bool {
    c.shape_in() == c.shape_out()
        && matcore::max_abs_diff(&channels::choi_matrix(c), &channels::max_ent_matrix(c.shape_in())) <= EFFECT_TOL
}

/// Bob's correction for one branch of identity-channel teleportation.
///
/// The branch map `σ ↦ Tr_{AA′}[(E ⊗ I)(σ ⊗ ρ_{A′B})]` is rescaled to be
/// trace preserving. On a classical algebra it is corrected when it permutes
/// the basis; otherwise when it is conjugation by a single unitary.
fn correction(shape: &AlgebraShape, effect: &ComplexMatrix, resource: &ComplexMatrix) -> Result<Option<Channel>> {
    let d = shape.total_dim();
    let choi = channels::choi_of_map(shape, d, |x| {
        branch_output(effect, x, resource, d).expect("dimensions agree by construction")
    });
    let scale = matcore::trace(&choi).re / d as f64;
    if scale <= ZERO_PROBABILITY {
        return Ok(None);
    }
    let choi = choi.unscale(scale);

    if shape.is_classical() {
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|j| (0..d).map(|k| choi[(j * d + k, j * d + k)].re).collect())
            .collect();
        let Some(perm) = as_permutation(&rows) else {
            return Ok(None);
        };
        let mut inverse = vec![vec![0.0; d]; d];
        for (j, &k) in perm.iter().enumerate() {
            inverse[k][j] = 1.0;
        }
        return Channel::from_stochastic_matrix(&inverse).map(Some);
    }

    let kraus = channels::kraus_from_choi(&choi, d, d);
    if !shape.is_irreducible() || kraus.len() != 1 {
        return Ok(None);
    }
    let v = &kraus[0];
    if matcore::max_abs_diff(&(v.adjoint() * v), &matcore::identity(d)) > EFFECT_TOL.max(RANK_TOL) {
        return Ok(None);
    }
    Channel::unitary(v.adjoint()).map(Some)
}

fn as_permutation(rows: &[Vec<f64>]) -> Option<Vec<usize>> {
    let perm: Vec<usize> = rows
        .iter()
        .map(|row| row.iter().position(|&p| (p - 1.0).abs() <= EFFECT_TOL))
        .collect::<Option<_>>()?;
    let mut seen = vec![false; rows.len()];
    for &k in &perm {
        if std::mem::replace(&mut seen[k], true) {
            return None;
        }
    }
    Some(perm)
}
