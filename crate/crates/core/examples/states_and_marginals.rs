use qcond::matcore::{self, c, Side};
use qcond::states::{self, JointState, State};
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let qubit = AlgebraShape::irreducible(2);

    let h = 0.5f64.sqrt();
    let bell = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
    let joint = JointState::new(qubit.clone(), qubit.clone(), matcore::outer(&bell, &bell))?;

    let alice = states::reduce(&joint, Side::A);
    println!("Alice's marginal of a Bell pair: {}", alice.matrix());
    println!("classical? {}", states::is_classical(&alice, 1e-12));

    let plus_i = State::pure(qubit, &[c(h, 0.0), c(0.0, h)])?;
    let transposed = states::transpose_in_basis(&plus_i);
    println!("|+i><+i| = {}", plus_i.matrix());
    println!("its transpose = {}", transposed.matrix());

    match State::from_diagonal(AlgebraShape::classical(2), &[0.5, 0.4]) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
