//! Local measurements on a joint state versus prepare-evolve-measure.
//!
//! For a joint state `ρ_AB`, POVMs `N` on `A` and `M` on `B`:
//!
//! ```text
//! Tr[(Nⱼ ⊗ Mₖ) ρ_AB] = Tr[Mₖ E(√(ρ_Aᵀ) Nⱼᵀ √(ρ_Aᵀ))]
//! ```
//!
//! where `E` is the channel whose conditional state is `ρ_{B|A}` and `ᵀ` is
//! the transpose in the embedding basis used for that correspondence.

use serde::Serialize;

use crate::channels;
use crate::conditional;
use crate::error::{Error, Result};
use crate::matcore::{self, Side};
use crate::povm::Povm;
use crate::states::{self, JointState};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    /// `lhs[j][k] = Tr[(Nⱼ ⊗ Mₖ) ρ_AB]`.
    pub lhs: Vec<Vec<f64>>,
    /// `rhs[j][k] = Tr[Mₖ E(√(ρᵀ) Nⱼᵀ √(ρᵀ))]`.
    pub rhs: Vec<Vec<f64>>,
    pub max_deviation: f64,
    /// Set when `ρ_A` is rank deficient and the channel was rebuilt on its support only.
    pub support_restricted: bool,
    pub marginal_rank: usize,
}

impl TheoremReport {
    /// Worst violation of "nonnegative entries summing to one" over both tables.
    pub fn distribution_deviation(&self) -> f64 {
        [&self.lhs, &self.rhs]
            .iter()
            .map(|t| {
                let total: f64 = t.iter().flatten().sum();
                let neg = t.iter().flatten().fold(0.0f64, |acc, &p| acc.max(-p));
                (total - 1.0).abs().max(neg)
            })
            .fold(0.0, f64::max)
    }
}

pub fn verify_theorem(j: &JointState, n: &Povm, m: &Povm) -> Result<TheoremReport> {
    if n.shape() != j.shape_a() {
        return Err(Error::shape_mismatch(j.shape_a(), n.shape()));
    }
    if m.shape() != j.shape_b() {
        return Err(Error::shape_mismatch(j.shape_b(), m.shape()));
    }

    let lhs: Vec<Vec<f64>> = n
        .elements()
        .iter()
        .map(|nj| {
            m.elements()
                .iter()
                .map(|mk| matcore::trace_of_product(&matcore::kron(nj, mk), j.matrix()).re)
                .collect()
        })
        .collect();

    let rho_a = states::reduce(j, Side::A);
    let rho_t = states::transpose_in_basis(&rho_a);
    let root_t = matcore::mat_sqrt(rho_t.matrix(), states::POSITIVITY_TOL)?;
    let cond = conditional::conditional_from_joint(j, Side::A);
    let channel = channels::channel_from_conditional(&cond)?;

    let rhs: Vec<Vec<f64>> = n
        .elements()
        .iter()
        .map(|nj| {
            let prepared = &root_t * nj.transpose() * &root_t;
            let evolved = channel.apply_matrix(&prepared);
            m.elements()
                .iter()
                .map(|mk| matcore::trace_of_product(mk, &evolved).re)
                .collect()
        })
        .collect();

    let max_deviation = lhs
        .iter()
        .flatten()
        .zip(rhs.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    Ok(TheoremReport {
        lhs,
        rhs,
        max_deviation,
        support_restricted: channel.is_support_restricted(),
        marginal_rank: cond.rank_report().rank,
    })
}
