//! Channels and conditional states are two views of the same object.

use qcond::channels::{self, Channel};
use qcond::matcore;
use qcond::scenarios::random;
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let mut rng = random::rng_from_seed(2024);
    let input = AlgebraShape::new(vec![2, 1])?;
    let output = AlgebraShape::irreducible(2);

    let ch = random::random_channel(&input, &output, 3, &mut rng)?;
    println!(
        "random channel {} -> {} with {} Kraus operators",
        input,
        output,
        ch.kraus().len()
    );

    let cond = channels::choi_conditional(&ch);
    println!("conditional state valid: {}", cond.validate().is_ok());

    let back = channels::channel_from_conditional(&cond)?;
    let sigma = random::random_state(&input, &mut rng);
    let a = ch.apply(&sigma)?;
    let b = back.apply(&sigma)?;
    let c = channels::apply_via_conditional(&cond, sigma.matrix())?;
    println!(
        "Kraus route deviation {:.1e}",
        matcore::max_abs_diff(a.matrix(), b.matrix())
    );
    println!("trace route deviation {:.1e}", matcore::max_abs_diff(a.matrix(), &c));

    let unitary = random::random_unitary_channel(2, &mut rng);
    println!(
        "unitary Kraus rank {}, noisy Kraus rank {}",
        unitary.kraus_rank(),
        ch.kraus_rank()
    );

    // classical channels are stochastic matrices
    let bsc = Channel::from_stochastic_matrix(&[vec![0.9, 0.1], vec![0.2, 0.8]])?;
    println!(
        "P(b|a) from the conditional state: {:?}",
        channels::choi_conditional(&bsc).conditional_probabilities()
    );
    println!("report: {:?}", channels::validate_channel(&bsc, 1e-9));
    Ok(())
}
