//! Measuring a POVM on a state prepares an ensemble, and every ensemble
//! averaging to the state comes from some POVM.

use qcond::povm::{self, Povm};
use qcond::scenarios::random;
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let mut rng = random::rng_from_seed(11);
    let qutrit = AlgebraShape::irreducible(3);
    let rho = random::random_state(&qutrit, &mut rng);
    let m = random::random_povm(&qutrit, 4, &mut rng);

    let probs = povm::measure(&m, &rho)?;
    println!("outcome probabilities {probs:.4?}");

    let ensemble = povm::prepare(&m, &rho)?;
    println!("Σ pⱼ ρⱼ - ρ: {:.1e}", ensemble.decomposition_deviation(&rho));

    let recovered: Povm = povm::povm_from_ensemble(&ensemble, &rho)?;
    let worst = recovered
        .elements()
        .iter()
        .zip(m.elements())
        .map(|(a, b)| qcond::matcore::max_abs_diff(a, b))
        .fold(0.0, f64::max);
    println!("recovered POVM deviation {worst:.1e}");

    let counts = povm::sample(&m, &rho, &mut rng, 10_000)?;
    println!("10000 samples: {counts:?}");
    Ok(())
}
