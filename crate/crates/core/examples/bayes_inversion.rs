use qcond::conditional;
use qcond::matcore::{self, Side};
use qcond::scenarios::random;
use qcond::states;
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let mut rng = random::rng_from_seed(5);
    let qubit = AlgebraShape::irreducible(2);
    let joint = random::random_joint_state(&qubit, &qubit, &mut rng);
    let (rho_a, rho_b) = (states::reduce(&joint, Side::A), states::reduce(&joint, Side::B));

    let a_given_b = conditional::conditional_from_joint(&joint, Side::B);
    let b_given_a = conditional::bayes_invert(&a_given_b, &rho_a, &rho_b)?;
    let direct = conditional::conditional_from_joint(&joint, Side::A);
    println!(
        "ρ_B|A from Bayes vs direct: {:.1e}",
        matcore::max_abs_diff(b_given_a.matrix(), direct.matrix())
    );
    Ok(())
}
