use proptest::prelude::*;

use qcond::algebra::{self, AlgebraShape};
use qcond::channels::{self, Channel};
use qcond::conditional;
use qcond::matcore::{self, c, max_abs_diff, ComplexMatrix, Side, RANK_TOL};
use qcond::povm;
use qcond::scenarios::random::{self, SeededRng};
use qcond::states::{self, JointState, State};

fn shape_strategy() -> impl Strategy<Value = AlgebraShape> {
    prop_oneof![
        Just(vec![2]),
        Just(vec![3]),
        Just(vec![2, 1]),
        Just(vec![1, 1]),
        Just(vec![1, 2]),
        Just(vec![1, 1, 1]),
    ]
    .prop_map(|d| AlgebraShape::new(d).unwrap())
}

fn complex_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| c(v[i * n + j].0, v[i * n + j].1)))
}

fn psd(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_matrix(n).prop_map(|g| matcore::hermitian_part(&(&g * g.adjoint())))
}

/// PSD matrix of rank at most `r`.
fn low_rank_psd(n: usize, r: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * r).prop_map(move |v| {
        let g = ComplexMatrix::from_fn(n, r, |i, j| c(v[i * r + j].0, v[i * r + j].1));
        matcore::hermitian_part(&(&g * g.adjoint()))
    })
}

fn rng(seed: u64) -> SeededRng {
    random::rng_from_seed(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sqrt_squares_back(p in psd(4)) {
        let r = matcore::mat_sqrt(&p, 1e-10).unwrap();
        prop_assert!(max_abs_diff(&(&r * &r), &p) < 1e-9);
    }

    #[test]
    fn inverse_sqrt_sandwich_is_support_projector(p in low_rank_psd(4, 2)) {
        prop_assume!(matcore::max_abs(&p) > 1e-3);
        let inv = matcore::gen_inv_sqrt(&p, RANK_TOL).unwrap();
        let proj = matcore::support_projector(&p, RANK_TOL).unwrap();
        prop_assert!(max_abs_diff(&(&inv * &p * &inv), &proj) < 1e-9);
    }

    #[test]
    fn partial_trace_preserves_trace(m in complex_matrix(6), keep_a in any::<bool>()) {
        let keep = if keep_a { Side::A } else { Side::B };
        let r = matcore::partial_trace(&m, 2, 3, keep).unwrap();
        prop_assert!((matcore::trace(&r) - matcore::trace(&m)).norm() < 1e-12);
    }

    #[test]
    fn kron_associative_and_mixed_product(
        a in complex_matrix(2), b in complex_matrix(2), cc in complex_matrix(2), d in complex_matrix(2)
    ) {
        let left = matcore::kron(&matcore::kron(&a, &b), &cc);
        let right = matcore::kron(&a, &matcore::kron(&b, &cc));
        prop_assert!(max_abs_diff(&left, &right) < 1e-12);
        let mixed = matcore::kron(&a, &b) * matcore::kron(&cc, &d);
        prop_assert!(max_abs_diff(&mixed, &matcore::kron(&(&a * &cc), &(&b * &d))) < 1e-12);
    }

    #[test]
    fn project_embed_identity(shape in shape_strategy(), seed in any::<u64>()) {
        let n = shape.total_dim();
        let m = random::gaussian_matrix(n, n, &mut rng(seed));
        let e = algebra::project(&m, &shape).unwrap();
        let again = algebra::project(&algebra::embed(&e), &shape).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn projection_is_linear_positive_trace_preserving_idempotent(shape in shape_strategy(), seed in any::<u64>(), s in -2.0f64..2.0) {
        let n = shape.total_dim();
        let mut r = rng(seed);
        let x = random::gaussian_matrix(n, n, &mut r);
        let y = random::gaussian_matrix(n, n, &mut r);
        let p = |m: &ComplexMatrix| algebra::project_matrix(m, &shape).unwrap();
        prop_assert!(max_abs_diff(&p(&(&x + y.scale(s))), &(p(&x) + p(&y).scale(s))) < 1e-12);
        prop_assert!(max_abs_diff(&p(&p(&x)), &p(&x)) < 1e-12);
        prop_assert!((matcore::trace(&p(&x)) - matcore::trace(&x)).norm() < 1e-12);
        let pos = &x * x.adjoint();
        prop_assert!(matcore::min_eigenvalue(&p(&pos), 1e-9).unwrap() > -1e-12);
    }

    #[test]
    fn tensor_shape_dimension(a in shape_strategy(), b in shape_strategy()) {
        prop_assert_eq!(algebra::tensor_shape(&a, &b).total_dim(), a.total_dim() * b.total_dim());
    }

    #[test]
    fn reductions_are_states(a in shape_strategy(), b in shape_strategy(), seed in any::<u64>()) {
        let j = random::random_joint_state(&a, &b, &mut rng(seed));
        for side in [Side::A, Side::B] {
            let r = states::reduce(&j, side);
            r.validate().unwrap();
            prop_assert!((matcore::trace(r.matrix()).re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn transpose_is_spectrum_preserving_involution(shape in shape_strategy(), seed in any::<u64>()) {
        let s = random::random_state(&shape, &mut rng(seed));
        let t = states::transpose_in_basis(&s);
        prop_assert_eq!(states::transpose_in_basis(&t), s.clone());
        let e1 = matcore::herm_eig(s.matrix(), 1e-10).unwrap().eigenvalues;
        let e2 = matcore::herm_eig(t.matrix(), 1e-10).unwrap().eigenvalues;
        for (x, y) in e1.iter().zip(&e2) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn conditional_marginal_is_support_projector(a in shape_strategy(), b in shape_strategy(), seed in any::<u64>(), rank in 1usize..=3) {
        let mut r = rng(seed);
        let j = random::random_joint_state_with_marginal_rank(&a, &b, rank.min(a.total_dim()), &mut r).unwrap();
        let cond = conditional::conditional_from_joint(&j, Side::A);
        let proj = matcore::support_projector(states::reduce(&j, Side::A).matrix(), RANK_TOL).unwrap();
        prop_assert!(max_abs_diff(&cond.conditioning_marginal(), &proj) < 1e-9);
    }

    #[test]
    fn conditional_round_trips(a in shape_strategy(), b in shape_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = random::random_joint_state(&a, &b, &mut r);
        let ra = states::reduce(&j, Side::A);
        let cond = conditional::conditional_from_joint(&j, Side::A);
        let back = conditional::joint_from_conditional(&ra, &cond).unwrap();
        prop_assert!(max_abs_diff(back.matrix(), j.matrix()) < 1e-9);
        let again = conditional::conditional_from_joint(&back, Side::A);
        prop_assert!(max_abs_diff(again.matrix(), cond.matrix()) < 1e-9);
    }

    #[test]
    fn bayes_involution(a in shape_strategy(), b in shape_strategy(), seed in any::<u64>()) {
        let j = random::random_joint_state(&a, &b, &mut rng(seed));
        let (ra, rb) = (states::reduce(&j, Side::A), states::reduce(&j, Side::B));
        let a_given_b = conditional::conditional_from_joint(&j, Side::B);
        let b_given_a = conditional::bayes_invert(&a_given_b, &ra, &rb).unwrap();
        let back = conditional::bayes_invert(&b_given_a, &rb, &ra).unwrap();
        prop_assert!(max_abs_diff(back.matrix(), a_given_b.matrix()) < 1e-9);
    }

    #[test]
    fn isomorphism_round_trip(a in shape_strategy(), b in shape_strategy(), seed in any::<u64>(), env in 2usize..4) {
        let mut r = rng(seed);
        let ch = random::random_channel(&a, &b, env, &mut r).unwrap();
        let cond = channels::choi_conditional(&ch);
        let back = channels::channel_from_conditional(&cond).unwrap();
        prop_assert!(max_abs_diff(&channels::choi_matrix(&back), cond.matrix()) < 1e-9);
        let sigma = random::random_state(&a, &mut r);
        let direct = ch.apply_matrix(sigma.matrix());
        prop_assert!(max_abs_diff(&back.apply_matrix(sigma.matrix()), &direct) < 1e-9);
        let traced = channels::apply_via_conditional(&cond, sigma.matrix()).unwrap();
        prop_assert!(max_abs_diff(&traced, &direct) < 1e-9);
    }

    #[test]
    fn choi_with_full_rank_marginal_is_joint_state(a in shape_strategy(), b in shape_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let ch = random::random_channel(&a, &b, 2, &mut r).unwrap();
        let marginal = random::random_state(&a, &mut r);
        let j = conditional::joint_from_conditional(&marginal, &channels::choi_conditional(&ch)).unwrap();
        JointState::new(j.shape_a().clone(), j.shape_b().clone(), j.matrix().clone()).unwrap();
    }

    #[test]
    fn classical_channel_is_stochastic_matrix(rows in prop::collection::vec(prop::collection::vec(0.01f64..1.0, 3), 2)) {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| { let s: f64 = r.iter().sum(); r.iter().map(|x| x / s).collect() }).collect();
        let ch = Channel::from_stochastic_matrix(&rows).unwrap();
        let table = channels::choi_conditional(&ch).conditional_probabilities();
        for (row, expect) in table.iter().zip(&rows) {
            for (x, y) in row.iter().zip(expect) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn preparation_lemma_round_trip(shape in shape_strategy(), seed in any::<u64>(), k in 1usize..=5) {
        let mut r = rng(seed);
        let s = random::random_state(&shape, &mut r);
        let m = random::random_povm(&shape, k, &mut r);
        let e = povm::prepare(&m, &s).unwrap();
        prop_assert!(e.decomposition_deviation(&s) < 1e-9);
        let recovered = povm::povm_from_ensemble(&e, &s).unwrap();
        prop_assert_eq!(recovered.len(), m.len());
        for (x, y) in recovered.elements().iter().zip(m.elements()) {
            prop_assert!(max_abs_diff(x, y) < 1e-9);
        }
        let again = povm::prepare(&recovered, &s).unwrap();
        for (x, y) in again.members().iter().zip(e.members()) {
            prop_assert!(max_abs_diff(x.matrix(), y.matrix()) < 1e-9);
        }
    }

    #[test]
    fn measurement_gives_distribution(shape in shape_strategy(), seed in any::<u64>(), k in 1usize..=5) {
        let mut r = rng(seed);
        let s = random::random_state(&shape, &mut r);
        let p = povm::measure(&random::random_povm(&shape, k, &mut r), &s).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|&x| x > -1e-12));
    }

    #[test]
    fn classical_preparation_is_bayesian_conditioning(
        probs in prop::collection::vec(0.01f64..1.0, 3),
        likelihood in prop::collection::vec(0.0f64..1.0, 3),
    ) {
        let total: f64 = probs.iter().sum();
        let p: Vec<f64> = probs.iter().map(|x| x / total).collect();
        let shape = AlgebraShape::classical(3);
        let s = State::from_diagonal(shape.clone(), &p).unwrap();
        let rest: Vec<f64> = likelihood.iter().map(|l| 1.0 - l).collect();
        let m = povm::Povm::new(shape, vec![matcore::diag(&likelihood), matcore::diag(&rest)]).unwrap();
        let e = povm::prepare(&m, &s).unwrap();
        for (w, (member, &outcome)) in e.weights().iter().zip(e.members().iter().zip(e.outcomes())) {
            let lik = if outcome == 0 { &likelihood } else { &rest };
            let expect_w: f64 = p.iter().zip(lik).map(|(a, b)| a * b).sum();
            prop_assert!((w - expect_w).abs() < 1e-12);
            for i in 0..3 {
                prop_assert!((member.matrix()[(i, i)].re - p[i] * lik[i] / expect_w).abs() < 1e-12);
            }
        }
    }
}
