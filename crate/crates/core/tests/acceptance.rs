//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use qcond::algebra::AlgebraShape;
use qcond::channels::{self, Channel};
use qcond::conditional;
use qcond::matcore::{self, max_abs_diff, Side, RANK_TOL};
use qcond::povm::{self, Ensemble};
use qcond::scenarios::random::{self, SeededRng};
use qcond::scenarios::{teleport, theorem};
use qcond::states::{self, JointState, State};

struct Outcome {
    passed: bool,
    detail: String,
}

fn shape(dims: &[usize]) -> AlgebraShape {
    AlgebraShape::new(dims.to_vec()).unwrap()
}

fn rng(seed: u64) -> SeededRng {
    random::rng_from_seed(seed)
}

fn isomorphism_round_trip() -> Outcome {
    const CHANNELS: usize = 200;
    const STATES: usize = 10;
    let start = Instant::now();
    let ins = [shape(&[2]), shape(&[3]), shape(&[2, 1]), shape(&[1, 1])];
    let outs = [shape(&[2]), shape(&[3]), shape(&[1, 1])];
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for si in &ins {
        for so in &outs {
            for k in 0..CHANNELS {
                let ch = random::random_channel(si, so, 1 + k % 4, &mut r)
                    .or_else(|_| random::random_channel(si, so, 4, &mut r))
                    .unwrap();
                let back = channels::channel_from_conditional(&channels::choi_conditional(&ch)).unwrap();
                for _ in 0..STATES {
                    let sigma = random::random_state(si, &mut r);
                    let a = ch.apply(&sigma).unwrap();
                    let b = back.apply(&sigma).unwrap();
                    worst = worst.max(max_abs_diff(a.matrix(), b.matrix()));
                }
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: worst < 1e-9 && elapsed < Duration::from_secs(60),
        detail: format!(
            "{count} channels x {STATES} states, max deviation {worst:.2e}, {:.1} s",
            elapsed.as_secs_f64()
        ),
    }
}

fn main_theorem() -> Outcome {
    const INSTANCES: usize = 200;
    const DEFICIENT: usize = 40;
    let configs = [
        (shape(&[2]), shape(&[2])),
        (shape(&[2]), shape(&[3])),
        (shape(&[1, 1]), shape(&[2])),
        (shape(&[2, 1]), shape(&[1, 1])),
    ];
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let mut total = 0;
    let mut deficient = 0;
    let mut flagged = true;
    for (a, b) in &configs {
        for k in 0..INSTANCES + DEFICIENT {
            let j = if k < INSTANCES {
                random::random_joint_state(a, b, &mut r)
            } else {
                let rank = 1 + k % (a.total_dim() - 1);
                random::random_joint_state_with_marginal_rank(a, b, rank, &mut r).unwrap()
            };
            let n = random::random_povm(a, 1 + k % 5, &mut r);
            let m = random::random_povm(b, 1 + (k / 5) % 5, &mut r);
            let rep = theorem::verify_theorem(&j, &n, &m).unwrap();
            worst = worst.max(rep.max_deviation).max(rep.distribution_deviation());
            if k >= INSTANCES {
                deficient += 1;
                flagged &= rep.support_restricted;
            }
            total += 1;
        }
    }
    Outcome {
        passed: worst < 1e-9 && flagged,
        detail: format!(
            "{total} instances ({deficient} rank-deficient, all flagged: {flagged}), max deviation {worst:.2e}"
        ),
    }
}

fn teleportation_numbers() -> Outcome {
    let mut r = rng(3);
    let mut worst_quantum = 0.0f64;
    for d in 2..=4 {
        let s = AlgebraShape::irreducible(d);
        let basis = teleport::bell_basis(d);
        for k in 0..50 {
            let out = AlgebraShape::irreducible(1 + k % 4);
            let env = d.div_ceil(out.total_dim()) + k % 2;
            let ch = random::random_channel(&s, &out, env, &mut r).unwrap();
            let input = random::random_state(&s, &mut r);
            let rep = teleport::teleport(&ch, &input, &basis).unwrap();
            worst_quantum = worst_quantum
                .max((rep.success_probability - 1.0 / (d * d) as f64).abs())
                .max(rep.success_deviation);
        }
    }

    let bit = AlgebraShape::classical(2);
    let mut worst_classical = 0.0f64;
    for _ in 0..50 {
        let ch = random::random_channel(&bit, &bit, 2, &mut r).unwrap();
        let input = random::random_state(&bit, &mut r);
        let rep = teleport::teleport_classical(&ch, &input).unwrap();
        worst_classical = worst_classical.max((rep.success_probability - 0.5).abs());
    }

    let id = Channel::identity(&bit);
    let mut pad_ok = true;
    let mut pad_worst = 0.0f64;
    let mut inputs = vec![
        State::from_diagonal(bit.clone(), &[1.0, 0.0]).unwrap(),
        State::from_diagonal(bit.clone(), &[0.0, 1.0]).unwrap(),
    ];
    inputs.extend((0..20).map(|_| random::random_state(&bit, &mut r)));
    for input in &inputs {
        let rep = teleport::teleport_classical(&id, input).unwrap();
        for b in &rep.branches {
            match &b.corrected_state {
                Some(fixed) => pad_worst = pad_worst.max(max_abs_diff(fixed.matrix(), input.matrix())),
                None => pad_ok = false,
            }
        }
        pad_ok &= rep.branches.len() == 2;
    }

    Outcome {
        passed: worst_quantum < 1e-9 && worst_classical < 1e-12 && pad_ok && pad_worst < 1e-12,
        detail: format!(
            "|p - 1/d^2| and Bob deviation {worst_quantum:.2e} (d=2,3,4 x 50); grouped bit |p - 1/2| {worst_classical:.2e}; one-time pad deviation {pad_worst:.2e}"
        ),
    }
}

fn conditional_invariants() -> Outcome {
    let shapes = [shape(&[2]), shape(&[3]), shape(&[2, 1]), shape(&[1, 1]), shape(&[1, 2])];
    let mut r = rng(4);
    let mut worst = 0.0f64;
    let mut integral = true;
    let mut count = 0;
    let mut deficient = 0;
    for k in 0..600 {
        let a = &shapes[k % shapes.len()];
        let b = &shapes[(k / shapes.len()) % shapes.len()];
        let rank = if k % 3 == 0 {
            1 + k % a.total_dim()
        } else {
            a.total_dim()
        };
        let j = random::random_joint_state_with_marginal_rank(a, b, rank, &mut r).unwrap();
        let cond = conditional::conditional_from_joint(&j, Side::A);
        let marg = cond.conditioning_marginal();
        let expect_rank = matcore::rank(states::reduce(&j, Side::A).matrix(), RANK_TOL).unwrap();
        let report = cond.rank_report();
        worst = worst.max(matcore::projector_deviation(&marg));
        integral &= report.is_integral() && report.rank == expect_rank && expect_rank == rank;
        if rank < a.total_dim() {
            deficient += 1;
        }
        count += 1;
    }

    // classical: (ρ_{B|A})_{jk,jk} = p(j,k) / p(j), rows summing to one
    let mut classical_worst = 0.0f64;
    for k in 0..100 {
        let (na, nb) = (2 + k % 3, 2 + (k / 3) % 3);
        let (a, b) = (AlgebraShape::classical(na), AlgebraShape::classical(nb));
        let j = random::random_joint_state(&a, &b, &mut r);
        let p: Vec<Vec<f64>> = (0..na)
            .map(|x| (0..nb).map(|y| j.matrix()[(x * nb + y, x * nb + y)].re).collect())
            .collect();
        let table = conditional::conditional_from_joint(&j, Side::A).conditional_probabilities();
        for x in 0..na {
            let px: f64 = p[x].iter().sum();
            let row_sum: f64 = table[x].iter().sum();
            classical_worst = classical_worst.max((row_sum - 1.0).abs());
            for y in 0..nb {
                classical_worst = classical_worst.max((table[x][y] - p[x][y] / px).abs());
            }
        }
    }

    Outcome {
        passed: worst < 1e-9 && integral && classical_worst < 1e-12,
        detail: format!(
            "{count} joints ({deficient} rank-deficient): projector deviation {worst:.2e}, trace = rank: {integral}; classical rows {classical_worst:.2e}"
        ),
    }
}

fn lemma_round_trip() -> Outcome {
    let shapes = [shape(&[2]), shape(&[3]), shape(&[2, 1]), shape(&[1, 1, 1])];
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut recon = 0.0f64;
    for k in 0..200 {
        let s_shape = &shapes[k % shapes.len()];
        let s = random::random_state(s_shape, &mut r);

        // POVM -> ensemble -> POVM
        let m = random::random_povm(s_shape, 1 + k % 5, &mut r);
        let e = povm::prepare(&m, &s).unwrap();
        recon = recon.max(e.decomposition_deviation(&s));
        let back = povm::povm_from_ensemble(&e, &s).unwrap();
        for (x, y) in back.elements().iter().zip(m.elements()) {
            worst = worst.max(max_abs_diff(x, y));
        }

        // ensemble -> POVM -> ensemble
        let members: Vec<State> = (0..1 + k % 4).map(|_| random::random_state(s_shape, &mut r)).collect();
        let raw: Vec<f64> = (0..members.len()).map(|i| 1.0 + i as f64).collect();
        let total: f64 = raw.iter().sum();
        let e2 = Ensemble::new(raw.iter().map(|w| w / total).collect(), members).unwrap();
        let s2 = State::new(s_shape.clone(), matcore::hermitian_part(&e2.average())).unwrap();
        let m2 = povm::povm_from_ensemble(&e2, &s2).unwrap();
        let e3 = povm::prepare(&m2, &s2).unwrap();
        for (i, (w, member)) in e2.weights().iter().zip(e2.members()).enumerate() {
            let k3 = e3.outcomes().iter().position(|&o| o == i).unwrap();
            worst = worst
                .max((e3.weights()[k3] - w).abs())
                .max(max_abs_diff(e3.members()[k3].matrix(), member.matrix()));
        }
    }
    // Σ pⱼ ρⱼ = ρ also for rank-deficient states
    for k in 0..100 {
        let s_shape = &shapes[k % shapes.len()];
        let s = random::random_state_with_rank(s_shape, 1 + k % s_shape.total_dim(), &mut r).unwrap();
        let e = povm::prepare(&random::random_povm(s_shape, 1 + k % 5, &mut r), &s).unwrap();
        recon = recon.max(e.decomposition_deviation(&s));
    }
    Outcome {
        passed: worst < 1e-9 && recon < 1e-9,
        detail: format!("200 full-rank instances both directions {worst:.2e}; reconstruction {recon:.2e}"),
    }
}

fn purity_isometry() -> Outcome {
    let mut r = rng(6);
    let mut unitary_ok = 0;
    let mut noisy_ok = 0;
    for k in 0..100 {
        let ch = random::random_unitary_channel(2 + k % 3, &mut r);
        if ch.kraus_rank() == 1 && ch.canonical().kraus().len() == 1 {
            unitary_ok += 1;
        }
    }
    for k in 0..100 {
        let s = AlgebraShape::irreducible(2 + k % 3);
        let ch = random::random_channel(&s, &s, 2 + k % 2, &mut r).unwrap();
        let canonical = ch.canonical().kraus().len();
        if canonical >= 2 && ch.kraus_rank() >= 2 && !channels::is_isometry(&ch, 1e-9) {
            noisy_ok += 1;
        }
    }
    Outcome {
        passed: unitary_ok == 100 && noisy_ok == 100,
        detail: format!("unitaries with Choi rank 1: {unitary_ok}/100; noisy channels with rank >= 2: {noisy_ok}/100"),
    }
}

fn bayes_rule() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    let mut count = 0;
    for s in [AlgebraShape::irreducible(2), AlgebraShape::classical(2)] {
        for _ in 0..200 {
            let j: JointState = random::random_joint_state(&s, &s, &mut r);
            let (ra, rb) = (states::reduce(&j, Side::A), states::reduce(&j, Side::B));
            let a_given_b = conditional::conditional_from_joint(&j, Side::B);
            let b_given_a = conditional::bayes_invert(&a_given_b, &ra, &rb).unwrap();
            let direct = conditional::conditional_from_joint(&j, Side::A);
            worst = worst.max(max_abs_diff(b_given_a.matrix(), direct.matrix()));
            count += 1;
        }
    }
    Outcome {
        passed: worst < 1e-9,
        detail: format!("{count} instances (qubit x qubit, bit x bit), max deviation {worst:.2e}"),
    }
}

fn selftest_cli() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_qcond"))
        .args(["selftest", "--seed", "42", "--trials", "50"])
        .output()
        .expect("qcond runs");
    let elapsed = start.elapsed();
    let code = out.status.code();
    Outcome {
        passed: code == Some(0) && elapsed < Duration::from_secs(120),
        detail: format!("exit {code:?} in {:.1} s", elapsed.as_secs_f64()),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("isomorphism round trip", isomorphism_round_trip),
        ("local-measurement theorem", main_theorem),
        ("teleportation numbers", teleportation_numbers),
        ("conditional-state invariants", conditional_invariants),
        ("preparation round trip", lemma_round_trip),
        ("purity and isometry", purity_isometry),
        ("Bayes inversion", bayes_rule),
        ("selftest --seed 42 --trials 50", selftest_cli),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.passed {
            failures += 1;
        }
        println!(
            "criterion {}: {:<32} {}  {}",
            i + 1,
            name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
