//! The two worked counterexamples, rebuilt over every supported coefficient
//! field, with every claimed property asserted exactly.
//!
//! The first: a metabolic idempotent of M_4(F) under sigma = Int(s) o t with
//! s = diag(1,-1,1,-1) that lies in no sigma-invariant quaternion subalgebra
//! (its product e sigma(e) has a rank-1, not half-dimensional, right ideal).
//! The second: over char-2 fields, a symmetric u in (M_4(F), t) with
//! u^2 = lambda^2 and half-dimensional (lambda+u)A that admits no alternating
//! shift, hence again no invariant quaternion subalgebra.

use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::idempotent::classify_idempotent;
use crate::involution::{AltShiftSet, InvolutionAlgebra, InvolutionKind};
use crate::matrix::Matrix;
use crate::quaternion::{invariant_quat_for_metabolic, invariant_quat_for_symmetric_char2};

use super::oracle::brute_force_quat_oracle;

/// The 4x4 metabolic-but-not-hyperbolic instance and its algebra.
pub fn metabolic_counterexample(field: &Field) -> Result<(InvolutionAlgebra, Matrix)> {
    let g = Matrix::from_i64(
        field,
        &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]],
    );
    let alg = InvolutionAlgebra::new(field, 4, InvolutionKind::First, g)?;
    let e = Matrix::from_i64(
        field,
        &[&[1, 0, 0, 0], &[1, 0, 0, 0], &[1, -1, 1, 0], &[1, -1, 1, 0]],
    );
    Ok((alg, e))
}

/// The rank-one product e sigma(e) of the metabolic counterexample, as it is
/// usually displayed: every row equal to (1, -1, 1, -1).
pub fn metabolic_counterexample_product(field: &Field) -> Matrix {
    Matrix::from_i64(
        field,
        &[&[1, -1, 1, -1], &[1, -1, 1, -1], &[1, -1, 1, -1], &[1, -1, 1, -1]],
    )
}

/// The char-2 symmetric element with no alternating shift, scaled by lambda.
pub fn symmetric_counterexample(field: &Field, lambda: &Scalar) -> Result<(InvolutionAlgebra, Matrix)> {
    let alg = InvolutionAlgebra::transpose(field, 4);
    let pattern = Matrix::from_i64(
        field,
        &[&[1, 0, 1, 1], &[0, 1, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]],
    );
    Ok((alg, pattern.scale(lambda)))
}

#[derive(Debug, Clone)]
pub struct ClaimResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExampleReport {
    pub claims: Vec<ClaimResult>,
}

impl ExampleReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&ClaimResult> {
        self.claims.iter().filter(|c| !c.pass).collect()
    }

    fn claim(&mut self, name: String, pass: bool, detail: String) {
        self.claims.push(ClaimResult { name, pass, detail });
    }
}

/// Rebuilds both counterexamples over their fields and asserts every claimed
/// property; negatives are cross-checked against the exhaustive oracle over
/// GF(2) when `run_oracle` is set.
pub fn verify_examples(run_oracle: bool) -> ExampleReport {
    let mut report = ExampleReport::default();

    let fields: Vec<(String, Field)> = vec![
        ("GF(2)".into(), Field::prime(2).unwrap()),
        ("GF(3)".into(), Field::prime(3).unwrap()),
        ("GF(5)".into(), Field::prime(5).unwrap()),
        ("Q".into(), Field::rationals()),
    ];
    for (fname, field) in &fields {
        let tag = |claim: &str| format!("metabolic-instance/{fname}/{claim}");
        match metabolic_counterexample(field) {
            Err(e) => report.claim(tag("construct"), false, e.to_string()),
            Ok((alg, e)) => {
                let rep = classify_idempotent(&alg, &e);
                report.claim(tag("idempotent"), rep.is_idempotent, String::new());
                report.claim(tag("metabolic"), rep.is_metabolic(), format!("{:?}", rep.class));
                report.claim(tag("not-hyperbolic"), !rep.is_hyperbolic(), String::new());
                report.claim(tag("dim-eA"), rep.dim_right_ideal == 8, format!("{}", rep.dim_right_ideal));
                let printed = metabolic_counterexample_product(field);
                report.claim(
                    tag("product-matrix"),
                    rep.e_sigma_e == printed,
                    "e sigma(e) must equal the displayed rank-one matrix".into(),
                );
                let prod_dim = rep.e_sigma_e.right_ideal_dim();
                report.claim(tag("dim-product-ideal"), prod_dim == 4, format!("{prod_dim}"));
                match invariant_quat_for_metabolic(&alg, &e) {
                    Ok(out) => report.claim(
                        tag("decision-none"),
                        !out.is_found(),
                        "constructor must answer none-by-theorem".into(),
                    ),
                    Err(err) => report.claim(tag("decision-none"), false, err.to_string()),
                }
                if run_oracle && field.order() == Some(2) {
                    match brute_force_quat_oracle(&alg, &e, None) {
                        Ok(found) => report.claim(
                            tag("oracle-agrees"),
                            found.is_none(),
                            "exhaustive search must find nothing".into(),
                        ),
                        Err(err) => report.claim(tag("oracle-agrees"), false, err.to_string()),
                    }
                }
            }
        }
    }

    let char2_fields: Vec<(String, Field)> =
        vec![("GF(2)".into(), Field::prime(2).unwrap()), ("GF(4)".into(), crate::field::gf4())];
    for (fname, field) in &char2_fields {
        let tag = |claim: &str| format!("symmetric-instance/{fname}/{claim}");
        let lambda = field.one();
        match symmetric_counterexample(field, &lambda) {
            Err(e) => report.claim(tag("construct"), false, e.to_string()),
            Ok((alg, u)) => {
                report.claim(tag("symmetric"), alg.apply(&u) == u, String::new());
                let sq = u.mul(&u);
                report.claim(
                    tag("square"),
                    sq == Matrix::scalar(field, 4, &lambda.square()),
                    "u^2 = lambda^2".into(),
                );
                let shifted = u.add(&Matrix::scalar(field, 4, &lambda));
                report.claim(
                    tag("half-dimension"),
                    shifted.right_ideal_dim() == 8,
                    format!("{}", shifted.right_ideal_dim()),
                );
                report.claim(
                    tag("no-alt-shift"),
                    matches!(alg.alt_shifts(&u), AltShiftSet::Empty),
                    "u + alpha must escape Alt(A, sigma) for every alpha".into(),
                );
                match invariant_quat_for_symmetric_char2(&alg, &u, &lambda) {
                    Ok(out) => report.claim(
                        tag("decision-none"),
                        !out.is_found(),
                        "constructor must answer none-by-theorem".into(),
                    ),
                    Err(err) => report.claim(tag("decision-none"), false, err.to_string()),
                }
                if run_oracle && field.order() == Some(2) {
                    match brute_force_quat_oracle(&alg, &u, None) {
                        Ok(found) => report.claim(
                            tag("oracle-agrees"),
                            found.is_none(),
                            "exhaustive search must find nothing".into(),
                        ),
                        Err(err) => report.claim(tag("oracle-agrees"), false, err.to_string()),
                    }
                }
            }
        }
    }

    report
}
