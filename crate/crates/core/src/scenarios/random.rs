//! Seeded random instances: states, channels, POVMs and unitaries.
//!
//! All generators take any `rand::Rng`; the crate's reproducible choice is
//! [`SeededRng`] (ChaCha8) built with [`rng_from_seed`]. Complex Gaussian
//! entries have independent standard normal real and imaginary parts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{self, AlgebraShape};
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{self, c, ComplexMatrix, RANK_TOL};
use crate::povm::Povm;
use crate::states::{JointState, State};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `G G†` masked to the block pattern `labels`, then normalized to unit trace.
fn random_density_on<R: Rng + ?Sized>(labels: &[usize], rng: &mut R) -> ComplexMatrix {
    let n = labels.len();
    let g = gaussian_matrix(n, n, rng);
    let p = algebra::mask_by_labels(&(&g * g.adjoint()), labels);
    let tr = matcore::trace(&p).re;
    matcore::hermitian_part(&p.unscale(tr))
}

pub fn random_state<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> State {
    State::new_unchecked(shape.clone(), random_density_on(&shape.block_labels(), rng))
}

/// Random state of the given rank. The rank is spread over the blocks at
/// random, at most `dⱼ` per block.
pub fn random_state_with_rank<R: Rng + ?Sized>(shape: &AlgebraShape, rank: usize, rng: &mut R) -> Result<State> {
    let n = shape.total_dim();
    if rank == 0 || rank > n {
        return Err(Error::InvalidArgument(format!("rank {rank} outside 1..={n}")));
    }
    let mut slots: Vec<usize> = shape.block_labels();
    slots.shuffle(rng);
    let mut per_block = vec![0usize; shape.num_blocks()];
    for &b in &slots[..rank] {
        per_block[b] += 1;
    }
    let mut m = matcore::zeros(n);
    for ((&d, start), &r) in shape.block_dims().iter().zip(shape.block_offsets()).zip(&per_block) {
        if r == 0 {
            continue;
        }
        let g = gaussian_matrix(d, r, rng);
        m.view_mut((start, start), (d, d)).copy_from(&(&g * g.adjoint()));
    }
    let tr = matcore::trace(&m).re;
    Ok(State::new_unchecked(
        shape.clone(),
        matcore::hermitian_part(&m.unscale(tr)),
    ))
}

pub fn random_joint_state<R: Rng + ?Sized>(a: &AlgebraShape, b: &AlgebraShape, rng: &mut R) -> JointState {
    JointState::new_unchecked(
        a.clone(),
        b.clone(),
        random_density_on(&algebra::tensor_labels(a, b), rng),
    )
}

/// Random joint state whose `A` marginal has rank `rank_a`.
pub fn random_joint_state_with_marginal_rank<R: Rng + ?Sized>(
    a: &AlgebraShape,
    b: &AlgebraShape,
    rank_a: usize,
    rng: &mut R,
) -> Result<JointState> {
    let support_state = random_state_with_rank(a, rank_a, rng)?;
    let proj = matcore::support_projector(support_state.matrix(), RANK_TOL)?;
    let x = matcore::kron(&proj, &matcore::identity(b.total_dim()));
    let base = random_joint_state(a, b, rng);
    let m = &x * base.matrix() * &x;
    let tr = matcore::trace(&m).re;
    Ok(JointState::new_unchecked(
        a.clone(),
        b.clone(),
        matcore::hermitian_part(&m.unscale(tr)),
    ))
}

/// Haar-random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    orthonormalize(gaussian_matrix(dim, dim, rng))
}

/// Random isometry `C^din → C^dout` (`dout × din`, orthonormal columns).
pub fn random_isometry<R: Rng + ?Sized>(din: usize, dout: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dout >= din, "an isometry needs dout >= din");
    orthonormalize(gaussian_matrix(dout, din, rng))
}

/// Modified Gram–Schmidt on the columns.
fn orthonormalize(mut m: ComplexMatrix) -> ComplexMatrix {
    for j in 0..m.ncols() {
        for k in 0..j {
            let proj = m.column(k).dotc(&m.column(j));
            let col_k = m.column(k).into_owned();
            let mut col_j = m.column_mut(j);
            col_j -= col_k * proj;
        }
        let norm = m.column(j).norm();
        m.column_mut(j).unscale_mut(norm);
    }
    m
}

/// Random channel from a random isometry into `out ⊗ environment`, with the
/// environment traced out. For non-irreducible shapes the map is sandwiched
/// between the input and output block projections, and the Kraus set is
/// reduced to its minimal form.
pub fn random_channel<R: Rng + ?Sized>(
    shape_in: &AlgebraShape,
    shape_out: &AlgebraShape,
    env_dim: usize,
    rng: &mut R,
) -> Result<Channel> {
    let (din, dout) = (shape_in.total_dim(), shape_out.total_dim());
    if env_dim == 0 || dout * env_dim < din {
        return Err(Error::InvalidArgument(format!(
            "environment dimension {env_dim} too small for {din} -> {dout}"
        )));
    }
    let v = random_isometry(din, dout * env_dim, rng);
    let stinespring: Vec<ComplexMatrix> = (0..env_dim)
        .map(|e| ComplexMatrix::from_fn(dout, din, |b, i| v[(b * env_dim + e, i)]))
        .collect();
    let in_blocks: Vec<ComplexMatrix> = (0..shape_in.num_blocks())
        .map(|j| shape_in.block_projector(j))
        .collect();
    let out_blocks: Vec<ComplexMatrix> = (0..shape_out.num_blocks())
        .map(|j| shape_out.block_projector(j))
        .collect();
    let mut kraus = Vec::with_capacity(stinespring.len() * in_blocks.len() * out_blocks.len());
    for k in &stinespring {
        for p_in in &in_blocks {
            for p_out in &out_blocks {
                kraus.push(p_out * k * p_in);
            }
        }
    }
    let ch = Channel::new(shape_in.clone(), shape_out.clone(), kraus)?;
    if shape_in.is_irreducible() && shape_out.is_irreducible() {
        Ok(ch)
    } else {
        Ok(ch.canonical())
    }
}

/// Random unitary channel on `B(C^d)`.
pub fn random_unitary_channel<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Channel {
    Channel::unitary(random_unitary(d, rng)).expect("random unitaries are unitary")
}

/// Random `k`-outcome POVM: `Mⱼ = S^{-1/2} Aⱼ S^{-1/2}` with random
/// block-supported positive `Aⱼ` and `S = Σ Aⱼ`.
pub fn random_povm<R: Rng + ?Sized>(shape: &AlgebraShape, k: usize, rng: &mut R) -> Povm {
    assert!(k >= 1, "a POVM needs at least one element");
    let labels = shape.block_labels();
    let n = shape.total_dim();
    let raw: Vec<ComplexMatrix> = (0..k)
        .map(|_| {
            let g = gaussian_matrix(n, n, rng);
            algebra::mask_by_labels(&(&g * g.adjoint()), &labels)
        })
        .collect();
    let total = raw.iter().fold(matcore::zeros(n), |acc, a| acc + a);
    let inv = matcore::gen_inv_sqrt(&total, RANK_TOL).expect("sum of Gram matrices is positive");
    let elements = raw
        .iter()
        .map(|a| algebra::mask_by_labels(&matcore::hermitian_part(&(&inv * a * &inv)), &labels))
        .collect();
    Povm::new_unchecked(shape.clone(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::validate_channel;
    use crate::matcore::max_abs_diff;

    fn shapes() -> Vec<AlgebraShape> {
        [vec![2], vec![3], vec![2, 1], vec![1, 1], vec![1, 2, 1]]
            .into_iter()
            .map(|d| AlgebraShape::new(d).unwrap())
            .collect()
    }

    #[test]
    fn states_pass_validation_over_many_seeds() {
        for seed in 0..1000u64 {
            let mut rng = rng_from_seed(seed);
            for s in shapes() {
                random_state(&s, &mut rng).validate().unwrap();
            }
        }
    }

    #[test]
    fn channels_pass_validation_over_many_seeds() {
        let pairs = [(vec![2], vec![2]), (vec![2, 1], vec![1, 1]), (vec![1, 1], vec![3])];
        for seed in 0..1000u64 {
            let mut rng = rng_from_seed(seed);
            let (si, so) = &pairs[(seed % 3) as usize];
            let (si, so) = (
                AlgebraShape::new(si.clone()).unwrap(),
                AlgebraShape::new(so.clone()).unwrap(),
            );
            let ch = random_channel(&si, &so, 2, &mut rng).unwrap();
            assert!(validate_channel(&ch, 1e-9).passes(), "seed {seed}");
        }
    }

    #[test]
    fn seeded_outputs_are_identical() {
        let s = AlgebraShape::new(vec![2, 1]).unwrap();
        let a = random_state(&s, &mut rng_from_seed(5));
        let b = random_state(&s, &mut rng_from_seed(5));
        assert_eq!(a, b);
        let u1 = random_unitary(3, &mut rng_from_seed(8));
        let u2 = random_unitary(3, &mut rng_from_seed(8));
        assert_eq!(u1, u2);
    }

    #[test]
    fn unitaries_and_isometries() {
        let mut rng = rng_from_seed(1);
        let u = random_unitary(4, &mut rng);
        assert!(max_abs_diff(&(u.adjoint() * &u), &matcore::identity(4)) < 1e-12);
        let v = random_isometry(2, 5, &mut rng);
        assert!(max_abs_diff(&(v.adjoint() * &v), &matcore::identity(2)) < 1e-12);
    }

    #[test]
    fn rank_controlled_states() {
        let mut rng = rng_from_seed(2);
        for s in shapes() {
            for r in 1..=s.total_dim() {
                let st = random_state_with_rank(&s, r, &mut rng).unwrap();
                st.validate().unwrap();
                assert_eq!(matcore::rank(st.matrix(), RANK_TOL).unwrap(), r);
            }
        }
        assert!(random_state_with_rank(&AlgebraShape::irreducible(2), 3, &mut rng).is_err());
    }

    #[test]
    fn povms_are_valid() {
        let mut rng = rng_from_seed(3);
        for s in shapes() {
            for k in 1..=5 {
                random_povm(&s, k, &mut rng).validate().unwrap();
            }
        }
    }

    #[test]
    fn env_too_small() {
        let mut rng = rng_from_seed(4);
        let err = random_channel(
            &AlgebraShape::irreducible(3),
            &AlgebraShape::irreducible(2),
            1,
            &mut rng,
        );
        assert!(err.is_err());
    }
}
