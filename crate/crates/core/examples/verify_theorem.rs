//! Local POVMs on a bipartite state give the same statistics as preparing
//! an ensemble on A, sending it through the conditional channel and
//! measuring on B.

use qcond::scenarios::{random, verify_theorem};
use qcond::AlgebraShape;

fn main() -> qcond::Result<()> {
    let mut rng = random::rng_from_seed(42);
    let a = AlgebraShape::irreducible(2);
    let b = AlgebraShape::irreducible(3);

    for rank in [2, 1] {
        let joint = random::random_joint_state_with_marginal_rank(&a, &b, rank, &mut rng)?;
        let n = random::random_povm(&a, 3, &mut rng);
        let m = random::random_povm(&b, 2, &mut rng);
        let report = verify_theorem(&joint, &n, &m)?;
        println!("marginal rank {rank}: support restricted {}", report.support_restricted);
        for (l, r) in report.lhs.iter().zip(&report.rhs) {
            println!("  lhs {l:.6?}  rhs {r:.6?}");
        }
        println!("  max deviation {:.1e}", report.max_deviation);
    }
    Ok(())
}
