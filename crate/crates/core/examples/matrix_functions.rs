//! Spectral helpers: square roots, generalized inverses, partial traces.

use qcond::matcore::{self, c, Side, RANK_TOL};

fn main() -> qcond::Result<()> {
    let p = matcore::from_rows(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])?;
    let eig = matcore::herm_eig(&p, 1e-12)?;
    println!("eigenvalues of p: {:?}", eig.eigenvalues);

    let root = matcore::mat_sqrt(&p, 1e-10)?;
    println!("|sqrt(p)^2 - p| = {:.1e}", matcore::max_abs_diff(&(&root * &root), &p));

    // a rank-one matrix has a generalized inverse on its support only
    let rank_one = matcore::diag(&[1.0, 0.0]);
    let inv = matcore::gen_inv_sqrt(&rank_one, RANK_TOL)?;
    println!("gen_inv_sqrt(diag(1, 0)) = {inv}");

    let joint = matcore::kron(&matcore::diag(&[0.25, 0.75]), &matcore::diag(&[0.5, 0.5]));
    let reduced = matcore::partial_trace(&joint, 2, 2, Side::A)?;
    println!("Tr_B[diag(.25,.75) x I/2] = {reduced}");
    Ok(())
}
