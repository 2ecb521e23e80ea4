//! Block-diagonal algebras, their projections, and composite block patterns.

use qcond::algebra::{self, AlgebraShape};
use qcond::matcore;

fn main() -> qcond::Result<()> {
    // B(C^2) ⊕ B(C): a qubit next to a classical flag
    let shape = AlgebraShape::new(vec![2, 1])?;
    println!("shape {shape}, total dimension {}", shape.total_dim());

    let full = matcore::from_real_rows(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0])?;
    let element = algebra::project(&full, &shape)?;
    for (j, block) in element.blocks().iter().enumerate() {
        println!("block {j}: {block}");
    }
    println!("embedded back: {}", algebra::embed(&element));

    let bit = AlgebraShape::classical(2);
    let composite = algebra::tensor_shape(&shape, &bit);
    println!("{shape} x {bit} = {composite}");
    println!(
        "per-basis-vector block labels: {:?}",
        algebra::tensor_labels(&shape, &bit)
    );
    Ok(())
}
