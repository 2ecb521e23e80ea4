//! Conditioning a joint state on one of its factors and recombining it.

use qcond::conditional;
use qcond::matcore::{self, Side};
use qcond::scenarios::random;
use qcond::states::{self, JointState};
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    // a classical joint distribution p(a, b) stored on the diagonal
    let bit = AlgebraShape::classical(2);
    let p = [0.1, 0.3, 0.2, 0.4];
    let joint = JointState::new(bit.clone(), bit.clone(), matcore::diag(&p))?;
    let cond = conditional::conditional_from_joint(&joint, Side::A);
    for (a, row) in cond.conditional_probabilities().iter().enumerate() {
        println!("p(b | a={a}) = {row:?}");
    }

    // quantum, with a rank-deficient marginal: the partial trace of the
    // conditional state is the support projector of the marginal
    let mut rng = random::rng_from_seed(3);
    let qutrit = AlgebraShape::irreducible(3);
    let joint = random::random_joint_state_with_marginal_rank(&qutrit, &bit, 2, &mut rng)?;
    let cond = conditional::conditional_from_joint(&joint, Side::A);
    let report = cond.rank_report();
    println!("Tr(ρ_B|A) = {:.12} (rank {})", report.trace, report.rank);

    let back = conditional::joint_from_conditional(&states::reduce(&joint, Side::A), &cond)?;
    println!(
        "recombination error {:.1e}",
        matcore::max_abs_diff(back.matrix(), joint.matrix())
    );
    Ok(())
}
