//! Exact scalar arithmetic over the supported coefficient fields.
//!
//! Supported fields are the prime fields GF(p) for p <= 13, the extension
//! fields GF(4), GF(8), GF(9) (polynomial representation with an explicit
//! irreducible modulus), and the rationals. Extension fields of even degree
//! may designate their order-2 automorphism x -> x^(p^(k/2)), which is what
//! unitary involutions restrict to on the center.
//!
//! Every operation is exact; scalars are kept in canonical reduced form so
//! equality is structural.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

const SUPPORTED_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Description of a coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    /// GF(p).
    Prime { p: u64 },
    /// GF(p^deg) = GF(p)[t] / (modulus), modulus monic of degree `deg`,
    /// coefficients stored constant-first.
    Extension { p: u64, deg: usize, modulus: Vec<u64> },
    /// The rational numbers.
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Marks the designated order-2 automorphism x -> x^(p^(deg/2)).
    /// Only legal on extension fields of even degree.
    pub unitary: bool,
}

/// Shared handle to a field; cheap to clone and safe to send across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

fn check_prime(p: u64) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::UnsupportedField(format!("p = {p} (supported primes: 2,3,5,7,11,13)")))
    }
}

/// Trial factorization: `modulus` (monic, constant-first) has no monic factor
/// of degree 1..deg-1 over GF(p). Degrees here are at most 3, so checking all
/// lower-degree monic polynomials is immediate.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..deg {
        // all monic degree-d polynomials
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut rem = idx;
            for _ in 0..d {
                f.push(rem % p);
                rem /= p;
            }
            f.push(1);
            if poly_rem(p, modulus, &f).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` modulo monic `m` over GF(p); both constant-first.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.to_vec();
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for i in 0..=dm {
                let t = (m[i] * lead) % p;
                let pos = shift + i;
                r[pos] = (r[pos] + p * p - t) % p;
            }
        }
        r.pop();
    }
    r.iter_mut().for_each(|c| *c %= p);
    r
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        check_prime(p)?;
        Ok(Field(Arc::new(FieldSpec { kind: FieldKind::Prime { p }, unitary: false })))
    }

    /// Extension field GF(p^deg) with the given monic modulus (constant-first,
    /// length deg+1). Irreducibility is verified by trial factorization.
    pub fn extension(p: u64, deg: usize, modulus: &[u64]) -> Result<Field> {
        check_prime(p)?;
        if !matches!((p, deg), (2, 2) | (2, 3) | (3, 2)) {
            return Err(Error::UnsupportedField(format!(
                "GF({p}^{deg}) (supported extensions: GF(4), GF(8), GF(9))"
            )));
        }
        if modulus.len() != deg + 1 || modulus[deg] % p != 1 {
            return Err(Error::BadDescriptor("modulus must be monic of the stated degree".into()));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !is_irreducible(p, &modulus) {
            return Err(Error::ReducibleModulus);
        }
        Ok(Field(Arc::new(FieldSpec { kind: FieldKind::Extension { p, deg, modulus }, unitary: false })))
    }

    pub fn rationals() -> Field {
        Field(Arc::new(FieldSpec { kind: FieldKind::Rational, unitary: false }))
    }

    /// Designates the order-2 automorphism x -> x^(p^(deg/2)).
    pub fn with_unitary(&self) -> Result<Field> {
        match self.0.kind {
            FieldKind::Extension { deg, .. } if deg % 2 == 0 => Ok(Field(Arc::new(FieldSpec {
                kind: self.0.kind.clone(),
                unitary: true,
            }))),
            _ => Err(Error::NoAutomorphism),
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn has_unitary(&self) -> bool {
        self.0.unitary
    }

    pub fn characteristic(&self) -> u64 {
        match self.0.kind {
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => p,
            FieldKind::Rational => 0,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self.0.kind {
            FieldKind::Prime { p } => Some(p),
            FieldKind::Extension { p, deg, .. } => Some(p.pow(deg as u32)),
            FieldKind::Rational => None,
        }
    }

    pub fn name(&self) -> String {
        match &self.0.kind {
            FieldKind::Prime { p } => format!("GF({p})"),
            FieldKind::Extension { p, deg, .. } => {
                let q = p.pow(*deg as u32);
                if self.0.unitary {
                    format!("GF({q})+conj")
                } else {
                    format!("GF({q})")
                }
            }
            FieldKind::Rational => "Q".into(),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_integer(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    /// Image of an integer under the canonical ring map Z -> F.
    pub fn from_integer(&self, v: i64) -> Scalar {
        let repr = match &self.0.kind {
            FieldKind::Prime { p } => Repr::Residue(v.rem_euclid(*p as i64) as u64),
            FieldKind::Extension { p, deg, .. } => {
                let mut coeffs = vec![0u64; *deg];
                coeffs[0] = v.rem_euclid(*p as i64) as u64;
                Repr::Coeffs(coeffs)
            }
            FieldKind::Rational => Repr::Ratio(BigRational::from_integer(BigInt::from(v))),
        };
        Scalar { field: self.clone(), repr }
    }

    /// Rational a/b; panics if b = 0.
    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        match self.0.kind {
            FieldKind::Rational => Scalar {
                field: self.clone(),
                repr: Repr::Ratio(BigRational::new(BigInt::from(num), BigInt::from(den))),
            },
            _ => {
                let d = self.from_integer(den);
                self.from_integer(num).div(&d)
            }
        }
    }

    /// Extension-field element from coefficients (constant-first).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Scalar> {
        match &self.0.kind {
            FieldKind::Extension { p, deg, .. } => {
                if coeffs.len() > *deg {
                    return Err(Error::BadDescriptor("too many coefficients".into()));
                }
                let mut c = vec![0u64; *deg];
                for (i, v) in coeffs.iter().enumerate() {
                    c[i] = v.rem_euclid(*p as i64) as u64;
                }
                Ok(Scalar { field: self.clone(), repr: Repr::Coeffs(c) })
            }
            _ => Err(Error::BadDescriptor("coefficient arrays are extension-field scalars".into())),
        }
    }

    /// All field elements in a fixed enumeration order; `None` for the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match &self.0.kind {
            FieldKind::Prime { p } => Some(
                (0..*p).map(|r| Scalar { field: self.clone(), repr: Repr::Residue(r) }).collect(),
            ),
            FieldKind::Extension { p, deg, .. } => {
                let q = p.pow(*deg as u32);
                let mut out = Vec::with_capacity(q as usize);
                for idx in 0..q {
                    let mut coeffs = vec![0u64; *deg];
                    let mut rem = idx;
                    for c in coeffs.iter_mut() {
                        *c = rem % p;
                        rem /= p;
                    }
                    out.push(Scalar { field: self.clone(), repr: Repr::Coeffs(coeffs) });
                }
                Some(out)
            }
            FieldKind::Rational => None,
        }
    }

    /// The generator t of an extension field (the class of the variable).
    pub fn generator(&self) -> Result<Scalar> {
        match &self.0.kind {
            FieldKind::Extension { deg, .. } => {
                let mut c = vec![0u64; *deg];
                c[1] = 1;
                Ok(Scalar { field: self.clone(), repr: Repr::Coeffs(c) })
            }
            _ => Err(Error::BadDescriptor("generator only exists for extension fields".into())),
        }
    }

    /// GF(p) inside GF(p^k); the field itself for GF(p) and the rationals.
    pub fn prime_subfield(&self) -> Field {
        match self.0.kind {
            FieldKind::Extension { p, .. } => Field::prime(p).unwrap(),
            _ => self.clone(),
        }
    }

    /// Degree over the prime subfield (1 for GF(p) and the rationals).
    pub fn extension_degree(&self) -> usize {
        match self.0.kind {
            FieldKind::Extension { deg, .. } => deg,
            _ => 1,
        }
    }

    /// Image of an exact fraction of big integers; errors on zero
    /// denominators and on denominators that vanish in the field.
    pub fn from_bigint_ratio(&self, num: BigInt, den: BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.0.kind {
            FieldKind::Rational => Ok(Scalar {
                field: self.clone(),
                repr: Repr::Ratio(BigRational::new(num, den)),
            }),
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => {
                let p_big = BigInt::from(*p);
                let reduce = |v: &BigInt| -> i64 {
                    let r = ((v % &p_big) + &p_big) % &p_big;
                    i64::try_from(r).expect("residue fits")
                };
                let n = self.from_integer(reduce(&num));
                let d = self.from_integer(reduce(&den));
                let d_inv = d.try_inv().ok_or(Error::DivisionByZero)?;
                Ok(n.mul(&d_inv))
            }
        }
    }

    /// Rebuilds a scalar from its prime-subfield components (constant-first).
    pub fn from_components(&self, comps: &[Scalar]) -> Scalar {
        match &self.0.kind {
            FieldKind::Extension { deg, .. } => {
                assert!(comps.len() <= *deg);
                let mut coeffs = vec![0u64; *deg];
                for (i, c) in comps.iter().enumerate() {
                    coeffs[i] = c.residue().expect("component must be a prime-field scalar");
                }
                Scalar { field: self.clone(), repr: Repr::Coeffs(coeffs) }
            }
            _ => {
                assert_eq!(comps.len(), 1);
                assert!(comps[0].field() == self);
                comps[0].clone()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Residue(u64),
    Coeffs(Vec<u64>),
    Ratio(BigRational),
}

/// An exact field element, canonically reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    field: Field,
    repr: Repr,
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert!(self.field == other.field, "scalars from different fields");
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Residue(r) => *r == 0,
            Repr::Coeffs(c) => c.iter().all(|&x| x == 0),
            Repr::Ratio(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Residue(a), Repr::Residue(b)) => {
                let p = self.field.characteristic();
                Repr::Residue((a + b) % p)
            }
            (Repr::Coeffs(a), Repr::Coeffs(b)) => {
                let p = self.field.characteristic();
                Repr::Coeffs(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (Repr::Ratio(a), Repr::Ratio(b)) => Repr::Ratio(a + b),
            _ => unreachable!("mixed representations"),
        };
        Scalar { field: self.field.clone(), repr }
    }

    pub fn neg(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Residue(a) => {
                let p = self.field.characteristic();
                Repr::Residue((p - a) % p)
            }
            Repr::Coeffs(a) => {
                let p = self.field.characteristic();
                Repr::Coeffs(a.iter().map(|x| (p - x) % p).collect())
            }
            Repr::Ratio(a) => Repr::Ratio(-a),
        };
        Scalar { field: self.field.clone(), repr }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Residue(a), Repr::Residue(b)) => {
                let p = self.field.characteristic();
                Repr::Residue((a * b) % p)
            }
            (Repr::Coeffs(a), Repr::Coeffs(b)) => {
                let (p, modulus) = match &self.field.0.kind {
                    FieldKind::Extension { p, modulus, .. } => (*p, modulus),
                    _ => unreachable!(),
                };
                let deg = a.len();
                let mut prod = vec![0u64; 2 * deg - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(p, &prod, modulus);
                r.resize(deg, 0);
                Repr::Coeffs(r)
            }
            (Repr::Ratio(a), Repr::Ratio(b)) => Repr::Ratio(a * b),
            _ => unreachable!("mixed representations"),
        };
        Scalar { field: self.field.clone(), repr }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn try_inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match &self.repr {
            Repr::Ratio(a) => Some(Scalar { field: self.field.clone(), repr: Repr::Ratio(a.recip()) }),
            _ => {
                // a^(q-2) over a field of q elements
                let q = self.field.order().unwrap();
                Some(self.pow(q - 2))
            }
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        self.try_inv().expect("division by zero")
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn square(&self) -> Scalar {
        self.mul(self)
    }

    /// The designated order-2 automorphism x -> x^(p^(deg/2)).
    pub fn conj(&self) -> Result<Scalar> {
        match &self.field.0.kind {
            FieldKind::Extension { p, deg, .. } if self.field.0.unitary => {
                Ok(self.pow(p.pow((*deg / 2) as u32)))
            }
            _ => Err(Error::NoAutomorphism),
        }
    }

    /// A square root if one exists: enumeration for the tiny finite fields,
    /// exact integer square roots of numerator and denominator for rationals.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match &self.repr {
            Repr::Ratio(r) => {
                if r.is_negative() {
                    return None;
                }
                let num = r.numer();
                let den = r.denom();
                let sn = num.sqrt();
                let sd = den.sqrt();
                if &(&sn * &sn) == num && &(&sd * &sd) == den {
                    Some(Scalar {
                        field: self.field.clone(),
                        repr: Repr::Ratio(BigRational::new(sn, sd)),
                    })
                } else {
                    None
                }
            }
            _ => self
                .field
                .elements()
                .unwrap()
                .into_iter()
                .find(|x| x.square() == *self),
        }
    }

    /// Coordinates over the prime subfield (constant-first); a singleton for
    /// prime-field and rational scalars.
    pub fn components(&self) -> Vec<Scalar> {
        match &self.repr {
            Repr::Coeffs(c) => {
                let sub = self.field.prime_subfield();
                c.iter().map(|&x| sub.from_integer(x as i64)).collect()
            }
            _ => vec![self.clone()],
        }
    }

    /// The residue of a prime-field scalar.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue(r) => Some(*r),
            _ => None,
        }
    }

    /// Residue / coefficient / num-den view for serialization.
    pub fn to_json_value(&self) -> serde_json::Value {
        match &self.repr {
            Repr::Residue(r) => serde_json::Value::String(r.to_string()),
            Repr::Coeffs(c) => serde_json::Value::Array(
                c.iter().map(|&x| serde_json::Value::from(x)).collect(),
            ),
            Repr::Ratio(r) => {
                if r.denom().is_one() {
                    serde_json::Value::String(r.numer().to_string())
                } else {
                    serde_json::Value::String(format!("{}/{}", r.numer(), r.denom()))
                }
            }
        }
    }
}

fn fmt_scalar(s: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &s.repr {
        Repr::Residue(r) => write!(f, "{r}"),
        Repr::Coeffs(c) => {
            let mut parts = Vec::new();
            for (i, &x) in c.iter().enumerate() {
                if x != 0 {
                    parts.push(match i {
                        0 => format!("{x}"),
                        1 if x == 1 => "t".into(),
                        1 => format!("{x}t"),
                        _ if x == 1 => format!("t^{i}"),
                        _ => format!("{x}t^{i}"),
                    });
                }
            }
            if parts.is_empty() {
                write!(f, "0")
            } else {
                write!(f, "{}", parts.join("+"))
            }
        }
        Repr::Ratio(r) => write!(f, "{r}"),
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_scalar(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_scalar(self, f)
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}
impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}
impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}
impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// GF(4) = GF(2)[t]/(t^2+t+1).
pub fn gf4() -> Field {
    Field::extension(2, 2, &[1, 1, 1]).unwrap()
}

/// GF(8) = GF(2)[t]/(t^3+t+1).
pub fn gf8() -> Field {
    Field::extension(2, 3, &[1, 1, 0, 1]).unwrap()
}

/// GF(9) = GF(3)[t]/(t^2+1).
pub fn gf9() -> Field {
    Field::extension(3, 2, &[1, 0, 1]).unwrap()
}
