//! Randomized certification driver: generates instances of one kind, runs
//! the matching decision procedure, and checks the decision against the
//! theorem's criterion plus every exact identity along the way. Negative
//! verdicts over GF(2) at n <= 4 can be cross-checked against the exhaustive
//! oracle. Identical (algebra, kind, trials, seed) inputs produce identical
//! reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::Scalar;
use crate::idempotent::classify_idempotent;
use crate::involution::{AltShiftSet, InvolutionAlgebra, InvolutionClass};
use crate::matrix::Matrix;
use crate::quaternion::{
    invariant_quat_for_hyperbolic, invariant_quat_for_metabolic, invariant_quat_for_skew_element,
    invariant_quat_for_symmetric_char2, skew_to_alt_idempotent, skew_to_metabolic,
    split_quaternion_containing, validate_quaternion_subalgebra, QuatOutcome, QuaternionSubalgebra,
};

use super::generate::{random_square_central, InstanceGenerator};
use super::oracle::brute_force_quat_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzKind {
    /// Split-subalgebra criterion for plain square-central elements.
    SquareCentral,
    /// Invariant-subalgebra criterion for metabolic idempotents.
    Metabolic,
    /// Unconditional construction for hyperbolic idempotents.
    Hyperbolic,
    /// Skew square-central pipeline (all involution types).
    Skew,
    /// Char-2 orthogonal symmetric-element criterion.
    Symmetric,
}

impl FuzzKind {
    pub fn name(&self) -> &'static str {
        match self {
            FuzzKind::SquareCentral => "square-central",
            FuzzKind::Metabolic => "metabolic",
            FuzzKind::Hyperbolic => "hyperbolic",
            FuzzKind::Skew => "skew",
            FuzzKind::Symmetric => "symmetric",
        }
    }

    pub fn parse(s: &str) -> Option<FuzzKind> {
        match s {
            "square-central" => Some(FuzzKind::SquareCentral),
            "metabolic" => Some(FuzzKind::Metabolic),
            "hyperbolic" => Some(FuzzKind::Hyperbolic),
            "skew" => Some(FuzzKind::Skew),
            "symmetric" => Some(FuzzKind::Symmetric),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub kind: &'static str,
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_run: usize,
    pub constructed: usize,
    pub none_by_theorem: usize,
    pub oracle_checked: usize,
    /// Metabolic-but-not-hyperbolic witnesses seen away from characteristic 2
    /// (they exist in all characteristics; the first one found is recorded).
    pub metabolic_not_hyperbolic: usize,
    pub sample_witness: Option<String>,
    pub infeasible: Option<String>,
    pub violations: Vec<String>,
}

impl FuzzReport {
    fn new(kind: FuzzKind, seed: u64, trials: usize) -> FuzzReport {
        FuzzReport {
            kind: kind.name(),
            seed,
            trials_requested: trials,
            trials_run: 0,
            constructed: 0,
            none_by_theorem: 0,
            oracle_checked: 0,
            metabolic_not_hyperbolic: 0,
            sample_witness: None,
            infeasible: None,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn fixed_scalars(alg: &InvolutionAlgebra) -> Vec<Scalar> {
    let field = alg.field();
    match field.elements() {
        Some(elems) => elems.into_iter().filter(|s| alg.fixes_scalar(s)).collect(),
        None => vec![
            field.zero(),
            field.one(),
            field.from_integer(2),
            field.from_integer(-1),
            field.from_ratio(1, 2),
        ],
    }
}

fn oracle_applicable(alg: &InvolutionAlgebra) -> bool {
    alg.field().order() == Some(2) && (alg.side() == 2 || alg.side() == 4)
}

fn revalidate(
    alg: &InvolutionAlgebra,
    q: &QuaternionSubalgebra,
    required: &[(String, Matrix)],
) -> bool {
    validate_quaternion_subalgebra(Some(alg), &q.basis, &q.split_witness.idempotent, required).passed()
}

/// Runs `trials` certification rounds of the given kind against the algebra.
pub fn run_fuzz(
    alg: &InvolutionAlgebra,
    kind: FuzzKind,
    trials: usize,
    seed: u64,
    oracle_cross_check: bool,
) -> FuzzReport {
    let mut report = FuzzReport::new(kind, seed, trials);
    let mut gen = InstanceGenerator::new(alg, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    let n = alg.side();
    let field = alg.field().clone();
    let lambdas = fixed_scalars(alg);
    let char2 = alg.char2();
    let class = alg.classify();

    for trial in 0..trials {
        report.trials_run += 1;
        match kind {
            FuzzKind::SquareCentral => {
                let lambda = lambdas[rng.gen_range(0..lambdas.len())].clone();
                let u = random_square_central(&field, n, &lambda, &mut rng);
                let criterion =
                    2 * u.add(&Matrix::scalar(&field, n, &lambda)).rank() == n;
                match split_quaternion_containing(&u, Some(&lambda)) {
                    Ok(QuatOutcome::Found(q)) => {
                        report.constructed += 1;
                        if !criterion {
                            report.violations.push(format!("trial {trial}: constructed despite failing criterion"));
                        }
                        let members = vec![("u".to_string(), u.clone())];
                        if !validate_quaternion_subalgebra(None, &q.basis, &q.split_witness.idempotent, &members).passed() {
                            report.violations.push(format!("trial {trial}: output failed validation"));
                        }
                    }
                    Ok(QuatOutcome::NoneByTheorem { .. }) => {
                        report.none_by_theorem += 1;
                        if criterion {
                            report.violations.push(format!("trial {trial}: refused despite criterion holding"));
                        }
                    }
                    Err(e) => report.violations.push(format!("trial {trial}: unexpected error {e}")),
                }
            }
            FuzzKind::Metabolic => {
                let e = match gen.metabolic() {
                    Ok(e) => e,
                    Err(Error::Infeasible { reason, .. }) => {
                        report.infeasible = Some(reason);
                        break;
                    }
                    Err(e) => {
                        report.violations.push(format!("trial {trial}: generator error {e}"));
                        continue;
                    }
                };
                let rep = classify_idempotent(alg, &e);
                if !char2 && !rep.is_hyperbolic() {
                    report.metabolic_not_hyperbolic += 1;
                    if report.sample_witness.is_none() {
                        report.sample_witness = Some(format!("{e:?}"));
                    }
                }
                let criterion = rep.is_hyperbolic() || 2 * rep.e_sigma_e.rank() == n;
                match invariant_quat_for_metabolic(alg, &e) {
                    Ok(QuatOutcome::Found(q)) => {
                        report.constructed += 1;
                        if !criterion {
                            report.violations.push(format!("trial {trial}: constructed despite failing criterion"));
                        }
                        if !revalidate(alg, &q, &[("e".to_string(), e.clone())]) {
                            report.violations.push(format!("trial {trial}: output failed validation"));
                        }
                    }
                    Ok(QuatOutcome::NoneByTheorem { .. }) => {
                        report.none_by_theorem += 1;
                        if criterion {
                            report.violations.push(format!("trial {trial}: refused despite criterion holding"));
                        }
                        if oracle_cross_check && oracle_applicable(alg) {
                            report.oracle_checked += 1;
                            match brute_force_quat_oracle(alg, &e, None) {
                                Ok(None) => {}
                                Ok(Some(_)) => report
                                    .violations
                                    .push(format!("trial {trial}: oracle found a subalgebra the theorem denies")),
                                Err(err) => report.violations.push(format!("trial {trial}: oracle error {err}")),
                            }
                        }
                    }
                    Err(e) => report.violations.push(format!("trial {trial}: unexpected error {e}")),
                }
            }
            FuzzKind::Hyperbolic => {
                let e = match gen.hyperbolic() {
                    Ok(e) => e,
                    Err(Error::Infeasible { reason, .. }) => {
                        report.infeasible = Some(reason);
                        break;
                    }
                    Err(e) => {
                        report.violations.push(format!("trial {trial}: generator error {e}"));
                        continue;
                    }
                };
                match invariant_quat_for_hyperbolic(alg, &e) {
                    Ok(q) => {
                        report.constructed += 1;
                        if !revalidate(alg, &q, &[("e".to_string(), e.clone())]) {
                            report.violations.push(format!("trial {trial}: output failed validation"));
                        }
                    }
                    Err(e) => report.violations.push(format!("trial {trial}: construction failed: {e}")),
                }
            }
            FuzzKind::Skew => {
                let lambda = lambdas[rng.gen_range(0..lambdas.len())].clone();
                let u = match gen.skew_square_central(&lambda) {
                    Ok(u) => u,
                    Err(Error::Infeasible { reason, .. }) => {
                        report.infeasible = Some(reason);
                        break;
                    }
                    Err(e) => {
                        report.violations.push(format!("trial {trial}: generator error {e}"));
                        continue;
                    }
                };
                // exact identity chain shared by all branches
                if let Err(e) = check_skew_identities(alg, &u, &lambda) {
                    report.violations.push(format!("trial {trial}: {e}"));
                }
                let expect_exceptional = char2 && class == InvolutionClass::Orthogonal;
                match invariant_quat_for_skew_element(alg, &u, &lambda) {
                    Ok(QuatOutcome::Found(q)) => {
                        if expect_exceptional {
                            report.violations.push(format!("trial {trial}: constructed inside the exceptional case"));
                        }
                        report.constructed += 1;
                        if !revalidate(alg, &q, &[("u".to_string(), u.clone())]) {
                            report.violations.push(format!("trial {trial}: output failed validation"));
                        }
                    }
                    Ok(QuatOutcome::NoneByTheorem { .. }) => {
                        report.violations.push(format!("trial {trial}: unexpected negative outside the exceptional case"));
                    }
                    Err(Error::ExceptionalCase(_)) => {
                        if expect_exceptional {
                            report.none_by_theorem += 1;
                        } else {
                            report.violations.push(format!("trial {trial}: spurious exceptional case"));
                        }
                    }
                    Err(e) => report.violations.push(format!("trial {trial}: unexpected error {e}")),
                }
            }
            FuzzKind::Symmetric => {
                let lambda = lambdas[rng.gen_range(0..lambdas.len())].clone();
                let u = match gen.symmetric_square_central(&lambda) {
                    Ok(u) => u,
                    Err(Error::Infeasible { reason, .. }) => {
                        report.infeasible = Some(reason);
                        break;
                    }
                    Err(e) => {
                        report.violations.push(format!("trial {trial}: generator error {e}"));
                        continue;
                    }
                };
                let criterion = match alg.alt_shifts(&u) {
                    AltShiftSet::Empty => false,
                    AltShiftSet::Single(a) => a != lambda,
                    AltShiftSet::All { .. } => true,
                };
                match invariant_quat_for_symmetric_char2(alg, &u, &lambda) {
                    Ok(QuatOutcome::Found(q)) => {
                        report.constructed += 1;
                        if !criterion {
                            report.violations.push(format!("trial {trial}: constructed despite failing criterion"));
                        }
                        if !revalidate(alg, &q, &[("u".to_string(), u.clone())]) {
                            report.violations.push(format!("trial {trial}: output failed validation"));
                        }
                    }
                    Ok(QuatOutcome::NoneByTheorem { .. }) => {
                        report.none_by_theorem += 1;
                        if criterion {
                            report.violations.push(format!("trial {trial}: refused despite criterion holding"));
                        }
                        if oracle_cross_check && oracle_applicable(alg) {
                            report.oracle_checked += 1;
                            match brute_force_quat_oracle(alg, &u, None) {
                                Ok(None) => {}
                                Ok(Some(_)) => report
                                    .violations
                                    .push(format!("trial {trial}: oracle found a subalgebra the theorem denies")),
                                Err(err) => report.violations.push(format!("trial {trial}: oracle error {err}")),
                            }
                        }
                    }
                    Err(e) => report.violations.push(format!("trial {trial}: unexpected error {e}")),
                }
            }
        }
    }
    report
}

/// The exact identities of the skew pipeline: the metabolic generator's
/// product identity e u sigma(e) = lambda e sigma(e) + lambda + u - 2 lambda e,
/// and for nonzero lambda with alternating u the difference identity
/// e' - sigma(e') = lambda^-1 u (plus its char-2 product form, re-verified by
/// the construction itself).
fn check_skew_identities(alg: &InvolutionAlgebra, u: &Matrix, lambda: &Scalar) -> crate::error::Result<()> {
    let n = alg.side();
    let field = alg.field().clone();
    let (e, _) = skew_to_metabolic(alg, u, lambda)?;
    let se = alg.apply(&e);
    let lhs = e.mul(u).mul(&se);
    let rhs = e
        .mul(&se)
        .scale(lambda)
        .add(&Matrix::scalar(&field, n, lambda))
        .add(u)
        .sub(&e.scale(lambda).add(&e.scale(lambda)));
    if lhs != rhs {
        return Err(Error::InvariantViolated(
            "identity e u sigma(e) = lambda e sigma(e) + lambda + u - 2 lambda e failed".into(),
        ));
    }
    if !lambda.is_zero() && alg.in_alt(u) {
        let out = skew_to_alt_idempotent(alg, u, lambda)?;
        let diff = out.idempotent.sub(&alg.apply(&out.idempotent));
        if diff != u.scale(&lambda.inv()) {
            return Err(Error::InvariantViolated("e' - sigma(e') = lambda^-1 u failed".into()));
        }
    }
    Ok(())
}
