//! Idempotent classification (plain / metabolic / hyperbolic), right-ideal
//! orthogonal complements, idempotent generators of right ideals, and the
//! metabolic-to-hyperbolic transforms.

use crate::error::{Error, Result};
use crate::involution::{InvolutionAlgebra, InvolutionKind};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdempotentClass {
    Plain,
    /// sigma(e) e = 0 and dim eA = (dim A)/2.
    Metabolic,
    /// sigma(e) = 1 - e.
    Hyperbolic,
}

impl IdempotentClass {
    pub fn name(&self) -> &'static str {
        match self {
            IdempotentClass::Plain => "plain",
            IdempotentClass::Metabolic => "metabolic",
            IdempotentClass::Hyperbolic => "hyperbolic",
        }
    }
}

/// Full classification of a candidate idempotent, with the witnesses tests
/// assert against. `class` is None when the input is not idempotent.
#[derive(Debug, Clone)]
pub struct IdempotentReport {
    pub is_idempotent: bool,
    pub dim_right_ideal: usize,
    pub sigma_e_e_zero: bool,
    /// Whether (1-e)(1-sigma(e)) = 0, the equivalent metabolicity condition.
    pub complement_product_zero: bool,
    pub e_sigma_e: Matrix,
    pub class: Option<IdempotentClass>,
}

impl IdempotentReport {
    pub fn is_metabolic(&self) -> bool {
        matches!(self.class, Some(IdempotentClass::Metabolic | IdempotentClass::Hyperbolic))
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.class, Some(IdempotentClass::Hyperbolic))
    }
}

pub fn classify_idempotent(alg: &InvolutionAlgebra, e: &Matrix) -> IdempotentReport {
    let n = alg.side();
    let is_idempotent = e.mul(e) == *e;
    let se = alg.apply(e);
    let dim_right_ideal = e.right_ideal_dim();
    let sigma_e_e_zero = se.mul(e).is_zero();
    let one = alg.one();
    let complement_product_zero = one.sub(e).mul(&one.sub(&se)).is_zero();
    let e_sigma_e = e.mul(&se);
    let half = n * n / 2;
    let class = if !is_idempotent {
        None
    } else if se == one.sub(e) {
        Some(IdempotentClass::Hyperbolic)
    } else if sigma_e_e_zero && dim_right_ideal == half {
        Some(IdempotentClass::Metabolic)
    } else {
        Some(IdempotentClass::Plain)
    };
    // cross-check: a metabolic idempotent is hyperbolic iff e sigma(e) = 0
    if matches!(class, Some(IdempotentClass::Metabolic | IdempotentClass::Hyperbolic)) {
        debug_assert_eq!(e_sigma_e.is_zero(), se == one.sub(e));
        debug_assert!(complement_product_zero);
    }
    IdempotentReport {
        is_idempotent,
        dim_right_ideal,
        sigma_e_e_zero,
        complement_product_zero,
        e_sigma_e,
        class,
    }
}

/// Orthogonal complement of the right ideal I = xA with respect to sigma:
/// I_perp = { z : sigma(z) y = 0 for all y in I }. It is again a right ideal,
/// returned as a basis of its column space together with dim_F I_perp;
/// always dim I + dim I_perp = dim A.
pub fn orth_complement_ideal(alg: &InvolutionAlgebra, x: &Matrix) -> (Matrix, usize) {
    let n = alg.side();
    // sigma(z) x = 0 reduces to the columns of z lying in one kernel:
    // first kind:  z^t (g^-1 x) = 0  <=>  (g^-1 x)^t z = 0
    // unitary:     conj(z)^t (g^-1 x) = 0  <=>  conj((g^-1 x)^t) z = 0
    let m = alg.gram().mul(x);
    let op = match alg.kind() {
        InvolutionKind::First => m.transpose(),
        InvolutionKind::Unitary => m.transpose().conj_entries().expect("unitary field"),
    };
    let kernel = op.kernel_basis();
    let dim = n * kernel.len();
    (Matrix::from_columns(alg.field(), n, &kernel), dim)
}

/// An idempotent e with eA = xA: the projection onto col(x) along the
/// complement spanned by the standard basis vectors away from the pivot rows.
/// Satisfies e x = x exactly.
pub fn idempotent_generator(x: &Matrix) -> Matrix {
    let field = x.field();
    let n = x.side();
    let cols = x.column_space_basis();
    let r = cols.len();
    let pivot_rows: Vec<usize> = cols
        .iter()
        .map(|v| v.iter().position(|s| !s.is_zero()).expect("nonzero basis vector"))
        .collect();
    let mut columns = cols.clone();
    for j in 0..n {
        if !pivot_rows.contains(&j) {
            let mut unit = vec![field.zero(); n];
            unit[j] = field.one();
            columns.push(unit);
        }
    }
    let b = Matrix::from_columns(field, n, &columns);
    let b_inv = b.inverse().expect("projection basis is invertible");
    let mut proj = Matrix::zero(field, n, n);
    for i in 0..r {
        proj.set(i, i, field.one());
    }
    let e = b.mul(&proj).mul(&b_inv);
    debug_assert_eq!(e.mul(&e), e);
    debug_assert_eq!(e.mul(x), *x);
    debug_assert_eq!(e.rank(), r);
    e
}

/// Column spaces of two matrices agree (as right ideals, xA = yA).
pub fn same_column_space(x: &Matrix, y: &Matrix) -> bool {
    let rx = x.rank();
    if rx != y.rank() {
        return false;
    }
    let mut joined = Matrix::zero(x.field(), x.rows(), x.cols() + y.cols());
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            joined.set(i, j, x.get(i, j).clone());
        }
        for j in 0..y.cols() {
            joined.set(i, x.cols() + j, y.get(i, j).clone());
        }
    }
    joined.rank() == rx
}

/// Converts a metabolic idempotent into a hyperbolic one via a half-unit x:
/// e' = e - e x sigma(e). Fails with ExceptionalCase when char F = 2 and
/// sigma is orthogonal, where no half-unit (and no hyperbolic idempotent)
/// exists.
pub fn hyperbolize_metabolic(alg: &InvolutionAlgebra, e: &Matrix) -> Result<Matrix> {
    let report = classify_idempotent(alg, e);
    if !report.is_metabolic() {
        return Err(Error::NotMetabolic);
    }
    let x = alg
        .half_unit()
        .ok_or(Error::ExceptionalCase("char F = 2 with orthogonal involution admits no half-unit"))?;
    let e_prime = e.sub(&e.mul(&x).mul(&alg.apply(e)));
    if alg.apply(&e_prime) != alg.one().sub(&e_prime) || e_prime.mul(&e_prime) != e_prime {
        return Err(Error::InvariantViolated("hyperbolized idempotent failed certification".into()));
    }
    Ok(e_prime)
}

/// e' = e - e x sigma(e) for arbitrary x: again metabolic, generating the
/// same right ideal. Both facts are verified before returning.
pub fn twist_metabolic(alg: &InvolutionAlgebra, e: &Matrix, x: &Matrix) -> Result<Matrix> {
    let report = classify_idempotent(alg, e);
    if !report.is_metabolic() {
        return Err(Error::NotMetabolic);
    }
    let e_prime = e.sub(&e.mul(x).mul(&alg.apply(e)));
    let rp = classify_idempotent(alg, &e_prime);
    if !rp.is_metabolic() {
        return Err(Error::InvariantViolated("twisted idempotent is not metabolic".into()));
    }
    if e.mul(&e_prime) != e_prime || e_prime.mul(e) != *e || !same_column_space(e, &e_prime) {
        return Err(Error::InvariantViolated("twisted idempotent changed the right ideal".into()));
    }
    Ok(e_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::involution::InvolutionKind;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    /// The 4x4 metabolic-but-not-hyperbolic instance under
    /// sigma = Int(diag(1,-1,1,-1)) o t.
    fn metabolic_witness(field: &Field) -> (InvolutionAlgebra, Matrix) {
        let g = Matrix::from_i64(
            field,
            &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]],
        );
        let alg = InvolutionAlgebra::new(field, 4, InvolutionKind::First, g).unwrap();
        let e = Matrix::from_i64(
            field,
            &[&[1, 0, 0, 0], &[1, 0, 0, 0], &[1, -1, 1, 0], &[1, -1, 1, 0]],
        );
        (alg, e)
    }

    #[test]
    fn metabolic_witness_classification() {
        for field in [gf(3), gf(5), Field::rationals()] {
            let (alg, e) = metabolic_witness(&field);
            let report = classify_idempotent(&alg, &e);
            assert!(report.is_idempotent);
            assert_eq!(report.class, Some(IdempotentClass::Metabolic));
            assert_eq!(report.dim_right_ideal, 8);
            assert!(!report.e_sigma_e.is_zero());
            assert_eq!(report.e_sigma_e.right_ideal_dim(), 4);
        }
    }

    #[test]
    fn swap_form_hyperbolic() {
        let f = gf(3);
        let g = Matrix::from_i64(&f, &[&[0, 1], &[1, 0]]);
        let alg = InvolutionAlgebra::new(&f, 2, InvolutionKind::First, g).unwrap();
        let e = Matrix::unit(&f, 2, 0, 0);
        let report = classify_idempotent(&alg, &e);
        assert_eq!(report.class, Some(IdempotentClass::Hyperbolic));
    }

    #[test]
    fn identity_is_plain() {
        let alg = InvolutionAlgebra::transpose(&gf(3), 2);
        let report = classify_idempotent(&alg, &alg.one());
        assert_eq!(report.class, Some(IdempotentClass::Plain));
        assert_eq!(report.dim_right_ideal, 4);
    }

    #[test]
    fn non_idempotent_flagged() {
        let alg = InvolutionAlgebra::transpose(&gf(3), 2);
        let m = Matrix::from_i64(&gf(3), &[&[1, 1], &[0, 1]]);
        let report = classify_idempotent(&alg, &m);
        assert!(!report.is_idempotent);
        assert_eq!(report.class, None);
    }

    #[test]
    fn orth_complement_extremes() {
        let alg = InvolutionAlgebra::transpose(&gf(3), 4);
        let (_, dim) = orth_complement_ideal(&alg, &alg.zero());
        assert_eq!(dim, 16);
        let (_, dim) = orth_complement_ideal(&alg, &alg.one());
        assert_eq!(dim, 0);
    }

    #[test]
    fn self_orthogonal_ideal_char2() {
        let f = gf(2);
        let alg = InvolutionAlgebra::transpose(&f, 4);
        let u = Matrix::from_i64(
            &f,
            &[&[1, 0, 1, 1], &[0, 1, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0]],
        );
        let x = alg.one().add(&u);
        let (basis, dim) = orth_complement_ideal(&alg, &x);
        assert_eq!(dim, 8);
        assert_eq!(x.right_ideal_dim() + dim, 16);
        assert!(same_column_space(&x, &basis));
    }

    #[test]
    fn generator_examples() {
        let f = gf(3);
        let x = Matrix::from_i64(&f, &[&[2, 0], &[0, 0]]);
        assert_eq!(idempotent_generator(&x), Matrix::unit(&f, 2, 0, 0));

        // an idempotent input regenerates its own column space
        let e = Matrix::from_i64(&gf(2), &[&[1, 0], &[1, 0]]);
        let e2 = idempotent_generator(&e);
        assert_eq!(e2.mul(&e2), e2);
        assert!(same_column_space(&e, &e2));
    }

    #[test]
    fn generator_of_skew_shift_ideal() {
        // symplectic M_2(GF(3)), u = diag(1,-1), lambda = 1
        let f = gf(3);
        let g = Matrix::from_i64(&f, &[&[0, 1], &[-1, 0]]);
        let alg = InvolutionAlgebra::new(&f, 2, InvolutionKind::First, g).unwrap();
        let u = Matrix::from_i64(&f, &[&[1, 0], &[0, -1]]);
        let shifted = alg.one().add(&u);
        let e = idempotent_generator(&shifted);
        assert_eq!(e, Matrix::unit(&f, 2, 0, 0));
        assert_eq!(e.mul(&shifted), shifted);
        assert_eq!(u.mul(&e), e.scale(&f.one()));
    }

    #[test]
    fn hyperbolize_symplectic_char2() {
        let f = gf(2);
        let g = Matrix::from_i64(&f, &[&[0, 1], &[1, 0]]);
        let alg = InvolutionAlgebra::new(&f, 2, InvolutionKind::First, g).unwrap();
        let e = Matrix::from_i64(&f, &[&[1, 0], &[1, 0]]);
        let e_prime = hyperbolize_metabolic(&alg, &e).unwrap();
        assert_eq!(alg.apply(&e_prime), alg.one().sub(&e_prime));
    }

    #[test]
    fn hyperbolize_exceptional_case() {
        let (alg, e) = {
            let f = gf(2);
            let alg = InvolutionAlgebra::transpose(&f, 4);
            let e = Matrix::from_i64(
                &f,
                &[&[1, 0, 0, 0], &[1, 0, 0, 0], &[1, 1, 1, 0], &[1, 1, 1, 0]],
            );
            (alg, e)
        };
        assert!(classify_idempotent(&alg, &e).is_metabolic());
        assert!(matches!(hyperbolize_metabolic(&alg, &e), Err(Error::ExceptionalCase(_))));
    }

    #[test]
    fn hyperbolize_keeps_hyperbolic() {
        let f = gf(3);
        let g = Matrix::from_i64(&f, &[&[0, 1], &[1, 0]]);
        let alg = InvolutionAlgebra::new(&f, 2, InvolutionKind::First, g).unwrap();
        let e = Matrix::unit(&f, 2, 0, 0);
        let e_prime = hyperbolize_metabolic(&alg, &e).unwrap();
        assert_eq!(alg.apply(&e_prime), alg.one().sub(&e_prime));
    }

    #[test]
    fn twist_examples() {
        let (alg, e) = metabolic_witness(&gf(5));
        assert_eq!(twist_metabolic(&alg, &e, &alg.zero()).unwrap(), e);
        let x = Matrix::unit(&gf(5), 4, 0, 1);
        let e_prime = twist_metabolic(&alg, &e, &x).unwrap();
        let report = classify_idempotent(&alg, &e_prime);
        assert_eq!(report.class, Some(IdempotentClass::Metabolic));
        assert!(same_column_space(&e, &e_prime));
    }

    #[test]
    fn twist_requires_metabolic() {
        let alg = InvolutionAlgebra::transpose(&gf(3), 2);
        let err = twist_metabolic(&alg, &alg.one(), &alg.zero()).unwrap_err();
        assert_eq!(err, Error::NotMetabolic);
    }

    #[test]
    fn complement_dimension_formula_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for field in [gf(2), gf(3), gf(5)] {
            let alg = InvolutionAlgebra::transpose(&field, 4);
            let elems = field.elements().unwrap();
            for _ in 0..1000 {
                let x = Matrix::from_fn(&field, 4, 4, |_, _| {
                    elems[rng.gen_range(0..elems.len())].clone()
                });
                let (_, dim) = orth_complement_ideal(&alg, &x);
                assert_eq!(x.right_ideal_dim() + dim, 16);
            }
        }
    }
}
