//! Randomized invariant suite behind `qcond selftest`.
//!
//! Each check draws its own generator from the seed and the check index, so
//! adding a check never changes the instances drawn by another.

use serde::Serialize;

use super::random::{self, SeededRng};
use super::{teleport, theorem};
use crate::algebra::AlgebraShape;
use crate::channels::{self, Channel};
use crate::conditional;
use crate::error::Result;
use crate::matcore::{self, Side, RANK_TOL};
use crate::povm;
use crate::states;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub name: &'static str,
    pub trials: usize,
    pub max_deviation: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelftestReport {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub max_deviation: f64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

type Check = fn(&mut SeededRng, usize) -> Result<f64>;

const CHECKS: [(&str, Check); 9] = [
    ("isomorphism_round_trip", isomorphism_round_trip),
    ("conditional_marginal", conditional_marginal),
    ("joint_round_trip", joint_round_trip),
    ("bayes_inversion", bayes_inversion),
    ("preparation_round_trip", preparation_round_trip),
    ("theorem", theorem_check),
    ("teleport_success", teleport_success),
    ("one_time_pad", one_time_pad),
    ("purity_isometry", purity_isometry),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run_selftest(seed: u64, trials: usize, tol: f64) -> SelftestReport {
    let checks: Vec<CheckResult> = CHECKS
        .iter()
        .enumerate()
        .map(|(idx, (name, check))| {
            let mut rng = random::rng_from_seed(seed ^ (idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut max_deviation = 0.0f64;
            let mut error = None;
            for t in 0..trials {
                match check(&mut rng, t) {
                    Ok(dev) => max_deviation = max_deviation.max(dev),
                    Err(e) => {
                        error = Some(format!("trial {t}: {e}"));
                        break;
                    }
                }
            }
            CheckResult {
                name,
                trials,
                max_deviation,
                passed: error.is_none() && max_deviation < tol,
                error,
            }
        })
        .collect();
    SelftestReport {
        seed,
        trials,
        tol,
        max_deviation: checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn shape(dims: &[usize]) -> AlgebraShape {
    AlgebraShape::new(dims.to_vec()).expect("fixed shapes are valid")
}

fn isomorphism_round_trip(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let ins = [shape(&[2]), shape(&[3]), shape(&[2, 1]), shape(&[1, 1])];
    let outs = [shape(&[2]), shape(&[3]), shape(&[1, 1])];
    let (si, so) = (&ins[t % ins.len()], &outs[(t / ins.len()) % outs.len()]);
    let ch = random::random_channel(si, so, 2 + t % 2, rng)?;
    let back = channels::channel_from_conditional(&channels::choi_conditional(&ch))?;
    let sigma = random::random_state(si, rng);
    let direct = ch.apply_matrix(sigma.matrix());
    let via_kraus = back.apply_matrix(sigma.matrix());
    let via_trace = channels::apply_via_conditional(&channels::choi_conditional(&ch), sigma.matrix())?;
    Ok(matcore::max_abs_diff(&direct, &via_kraus).max(matcore::max_abs_diff(&direct, &via_trace)))
}

fn random_joint(rng: &mut SeededRng, t: usize) -> Result<states::JointState> {
    let pairs = [
        (shape(&[2]), shape(&[2])),
        (shape(&[2]), shape(&[3])),
        (shape(&[1, 1]), shape(&[2])),
        (shape(&[2, 1]), shape(&[1, 1])),
    ];
    let (a, b) = &pairs[t % pairs.len()];
    if t % 3 == 2 {
        let rank = 1 + (t / 3) % (a.total_dim() - 1).max(1);
        random::random_joint_state_with_marginal_rank(a, b, rank.min(a.total_dim()), rng)
    } else {
        Ok(random::random_joint_state(a, b, rng))
    }
}

fn conditional_marginal(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let j = random_joint(rng, t)?;
    let mut worst = 0.0f64;
    for side in [Side::A, Side::B] {
        let cond = conditional::conditional_from_joint(&j, side);
        cond.validate()?;
        let marginal = cond.conditioning_marginal();
        let rank = matcore::rank(states::reduce(&j, side).matrix(), RANK_TOL)?;
        let report = cond.rank_report();
        worst = worst
            .max(matcore::projector_deviation(&marginal))
            .max((report.trace - rank as f64).abs());
    }
    Ok(worst)
}

fn joint_round_trip(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let j = random_joint(rng, t)?;
    let cond = conditional::conditional_from_joint(&j, Side::A);
    let back = conditional::joint_from_conditional(&states::reduce(&j, Side::A), &cond)?;
    Ok(matcore::max_abs_diff(back.matrix(), j.matrix()))
}

fn bayes_inversion(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let s = if t.is_multiple_of(2) {
        shape(&[2])
    } else {
        shape(&[1, 1])
    };
    let j = random::random_joint_state(&s, &s, rng);
    let a_given_b = conditional::conditional_from_joint(&j, Side::B);
    let inverted = conditional::bayes_invert(&a_given_b, &states::reduce(&j, Side::A), &states::reduce(&j, Side::B))?;
    let expected = conditional::conditional_from_joint(&j, Side::A);
    Ok(matcore::max_abs_diff(inverted.matrix(), expected.matrix()))
}

fn preparation_round_trip(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let shapes = [shape(&[2]), shape(&[3]), shape(&[2, 1]), shape(&[1, 1, 1])];
    let s = &shapes[t % shapes.len()];
    let rho = if t.is_multiple_of(2) {
        random::random_state(s, rng)
    } else {
        random::random_state_with_rank(s, 1 + t % s.total_dim(), rng)?
    };
    let m = random::random_povm(s, 1 + t % 5, rng);
    let ens = povm::prepare(&m, &rho)?;
    let recovered = povm::povm_from_ensemble(&ens, &rho)?;
    recovered.validate()?;
    let again = povm::prepare(&recovered, &rho)?;
    let mut worst = ens.decomposition_deviation(&rho);
    for (i, (w, member)) in ens.weights().iter().zip(ens.members()).enumerate() {
        worst = worst.max(match again.outcomes().iter().position(|&o| o == i) {
            Some(k) => (again.weights()[k] - w)
                .abs()
                .max(matcore::max_abs_diff(again.members()[k].matrix(), member.matrix())),
            None => 1.0,
        });
    }
    Ok(worst)
}

fn theorem_check(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let j = random_joint(rng, t)?;
    let n = random::random_povm(j.shape_a(), 1 + t % 5, rng);
    let m = random::random_povm(j.shape_b(), 1 + (t / 5) % 5, rng);
    let r = theorem::verify_theorem(&j, &n, &m)?;
    Ok(r.max_deviation.max(r.distribution_deviation()))
}

fn teleport_success(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let d = 2 + t % 3;
    let s = AlgebraShape::irreducible(d);
    let ch = random::random_channel(&s, &AlgebraShape::irreducible(2 + (t / 3) % 2), 2 + t % 2, rng)?;
    let input = random::random_state(&s, rng);
    let r = teleport::teleport(&ch, &input, &teleport::bell_basis(d))?;
    let expected = 1.0 / (d * d) as f64;
    Ok((r.success_probability - expected)
        .abs()
        .max(r.success_deviation)
        .max(r.probability_sum_deviation()))
}

fn one_time_pad(rng: &mut SeededRng, _t: usize) -> Result<f64> {
    let bit = AlgebraShape::classical(2);
    let input = random::random_state(&bit, rng);
    let r = teleport::teleport_classical(&Channel::identity(&bit), &input)?;
    let corrected = r
        .branches
        .iter()
        .map(|b| match &b.corrected_state {
            Some(c) => matcore::max_abs_diff(c.matrix(), input.matrix()),
            None => 1.0,
        })
        .fold(0.0, f64::max);
    Ok(corrected.max((r.success_probability - 0.5).abs()))
}

fn purity_isometry(rng: &mut SeededRng, t: usize) -> Result<f64> {
    let d = 2 + t % 2;
    let s = AlgebraShape::irreducible(d);
    let pure = random::random_unitary_channel(d, rng);
    let noisy = random::random_channel(&s, &s, 2 + t % 2, rng)?;
    let pure_ok = pure.kraus_rank() == 1 && channels::is_unitary(&pure, 1e-9);
    let noisy_ok = noisy.kraus_rank() >= 2 && !channels::is_isometry(&noisy, 1e-9);
    let purity = |c: &Channel| -> f64 {
        let ch = channels::choi_matrix(c).unscale(d as f64);
        matcore::trace(&(&ch * &ch)).re
    };
    let pure_dev = (purity(&pure) - 1.0).abs();
    Ok(if pure_ok && noisy_ok { pure_dev } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = run_selftest(1, 8, 1e-9);
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(r.passed);
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_selftest(5, 3, 1e-9), run_selftest(5, 3, 1e-9));
    }

    #[test]
    fn impossible_tolerance_fails() {
        assert!(!run_selftest(1, 2, 0.0).passed);
    }
}
