//! Gate teleportation through a channel's conditional state, and its
//! classical shadow, the one-time pad.

use qcond::channels::Channel;
use qcond::scenarios::{bell_basis, random, teleport, teleport_classical};
use qcond::states::State;
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let mut rng = random::rng_from_seed(7);
    let qubit = AlgebraShape::irreducible(2);
    let input = random::random_state(&qubit, &mut rng);

    let report = teleport(&Channel::identity(&qubit), &input, &bell_basis(2))?;
    println!(
        "identity qubit channel: success probability {:.4}",
        report.success_probability
    );
    for (i, branch) in report.branches.iter().enumerate() {
        println!(
            "  outcome {i}: p = {:.4}, corrected: {}",
            branch.probability,
            branch.corrected_state.is_some()
        );
    }
    println!(
        "  worst corrected deviation {:.1e}",
        report.correction_deviation.unwrap_or(f64::NAN)
    );

    let qutrit = AlgebraShape::irreducible(3);
    let noisy = random::random_channel(&qutrit, &qubit, 2, &mut rng)?;
    let r = teleport(&noisy, &random::random_state(&qutrit, &mut rng), &bell_basis(3))?;
    println!(
        "noisy qutrit channel: success {:.6} (1/9 = {:.6})",
        r.success_probability,
        1.0 / 9.0
    );

    let bit = AlgebraShape::classical(2);
    let zero = State::from_diagonal(bit.clone(), &[1.0, 0.0])?;
    let pad = teleport_classical(&Channel::identity(&bit), &zero)?;
    println!(
        "classical bit: success {:.2}, grouped {}",
        pad.success_probability, pad.grouping_used
    );
    for branch in &pad.branches {
        let bob = branch.bob_state.as_ref().expect("both parities occur");
        let fixed = branch
            .corrected_state
            .as_ref()
            .expect("identity channel is correctable");
        println!(
            "  effects {:?}: Bob holds diag({:.1}, {:.1}), after correction diag({:.1}, {:.1})",
            branch.effects,
            bob.matrix()[(0, 0)].re,
            bob.matrix()[(1, 1)].re,
            fixed.matrix()[(0, 0)].re,
            fixed.matrix()[(1, 1)].re
        );
    }
    Ok(())
}
