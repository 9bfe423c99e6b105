//! Exact scalars: rationals and elements of a simple algebraic extension
//! `Q[a]/(p(a))`.
//!
//! An algebraic element whose residue is constant is always demoted to the
//! rational variant, so equality and zero tests are structural.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::uni::UniPoly;
use super::PolyError;

/// A number field `Q[a]/(p(a))` given by a monic irreducible `p` of degree >= 2.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    modulus: UniPoly,
}

impl NumberField {
    /// Builds the field defined by `minpoly`, which is made monic.
    ///
    /// Fails when the polynomial has non-rational coefficients, degree below 2,
    /// or is reducible over Q.
    pub fn new(minpoly: &UniPoly) -> Result<Arc<NumberField>, PolyError> {
        if !minpoly.is_rational() {
            return Err(PolyError::InvalidModulus("coefficients must be rational".into()));
        }
        match minpoly.degree() {
            Some(d) if d >= 2 => {}
            _ => return Err(PolyError::InvalidModulus("degree must be at least 2".into())),
        }
        let modulus = minpoly.monic();
        let factors = crate::linalg::factor_rational(&modulus)
            .map_err(|e| PolyError::InvalidModulus(e.to_string()))?;
        if factors.factors.len() != 1 || factors.factors[0].1 != 1 {
            return Err(PolyError::InvalidModulus(format!(
                "{} is reducible over Q",
                modulus.display_in("t")
            )));
        }
        Ok(Arc::new(NumberField { modulus }))
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    /// The class of `a`, a root of the modulus.
    pub fn generator(self: &Arc<Self>) -> Scalar {
        Scalar::algebraic(self, UniPoly::monomial(Scalar::one(), 1))
    }

    fn reduce(&self, p: &UniPoly) -> UniPoly {
        p.rem(&self.modulus)
    }
}

/// Element of a number field; the residue has rational coefficients and
/// degree below the field degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    residue: UniPoly,
}

impl AlgebraicNumber {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn residue(&self) -> &UniPoly {
        &self.residue
    }

    /// Matrix of multiplication by this element on the power basis.
    fn multiplication_matrix(&self) -> crate::linalg::Matrix {
        let n = self.field.degree();
        let mut m = crate::linalg::Matrix::zeros(n, n);
        for j in 0..n {
            let col = self
                .field
                .reduce(&self.residue.mul(&UniPoly::monomial(Scalar::one(), j)));
            for i in 0..n {
                m.set(i, j, col.coeff(i));
            }
        }
        m
    }
}

/// Exact scalar: a rational or an element of a number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar::Rational(BigRational::from_integer(n))
    }

    pub fn from_frac(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(q: BigRational) -> Scalar {
        Scalar::Rational(q)
    }

    fn algebraic(field: &Arc<NumberField>, residue: UniPoly) -> Scalar {
        let residue = field.reduce(&residue);
        match residue.degree() {
            None => Scalar::zero(),
            Some(0) => residue.coeff(0),
            Some(_) => Scalar::Algebraic(AlgebraicNumber {
                field: Arc::clone(field),
                residue,
            }),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Algebraic(_) => None,
        }
    }

    /// The number field this scalar lives in, if it is not rational.
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Algebraic(a) => Some(&a.field),
        }
    }

    /// `true` for a negative rational; algebraic elements have no sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Algebraic(a) => {
                let (g, s, _) = a.residue.ext_gcd(&a.field.modulus);
                // g is a nonzero constant since the modulus is irreducible
                let g0 = g.coeff(0).inv()?;
                Some(Scalar::algebraic(&a.field, s.scale(&g0)))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Characteristic polynomial over Q of multiplication by this scalar
    /// (`t - q` for a rational `q`).
    pub fn charpoly_over_q(&self) -> UniPoly {
        match self {
            Scalar::Rational(q) => UniPoly::new(vec![Scalar::Rational(-q.clone()), Scalar::one()]),
            Scalar::Algebraic(a) => crate::linalg::charpoly(&a.multiplication_matrix())
                .expect("multiplication matrix is square"),
        }
    }

    fn field_check(a: &AlgebraicNumber, b: &AlgebraicNumber) {
        assert!(
            Arc::ptr_eq(&a.field, &b.field) || a.field == b.field,
            "scalar domain mismatch: elements of different number fields"
        );
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Rational(q), Scalar::Algebraic(a)) | (Scalar::Algebraic(a), Scalar::Rational(q)) => {
                let c = UniPoly::constant(Scalar::Rational(q.clone()));
                Scalar::algebraic(&a.field, a.residue.add(&c))
            }
            (Scalar::Algebraic(a), Scalar::Algebraic(b)) => {
                Scalar::field_check(a, b);
                Scalar::algebraic(&a.field, a.residue.add(&b.residue))
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(q), Scalar::Algebraic(a)) | (Scalar::Algebraic(a), Scalar::Rational(q)) => {
                Scalar::algebraic(&a.field, a.residue.scale(&Scalar::Rational(q.clone())))
            }
            (Scalar::Algebraic(a), Scalar::Algebraic(b)) => {
                Scalar::field_check(a, b);
                Scalar::algebraic(&a.field, a.residue.mul(&b.residue))
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            _ => self * &rhs.inv().expect("division by zero"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Algebraic(a) => Scalar::Algebraic(AlgebraicNumber {
                field: Arc::clone(&a.field),
                residue: a.residue.neg(),
            }),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", fmt_rational(q)),
            Scalar::Algebraic(a) => write!(f, "({})", a.residue.display_in("a")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2_field() -> Arc<NumberField> {
        // a^2 - 2
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        NumberField::new(&p).unwrap()
    }

    #[test]
    fn algebraic_arithmetic() {
        let k = sqrt2_field();
        let a = k.generator();
        assert_eq!(&a * &a, Scalar::from_int(2));
        let b = &a + &Scalar::one();
        let inv = b.inv().unwrap();
        assert_eq!(&b * &inv, Scalar::one());
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn reducible_modulus_rejected() {
        let p = UniPoly::from_ints(&[-4, 0, 1]);
        assert!(NumberField::new(&p).is_err());
        assert!(NumberField::new(&UniPoly::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn charpoly_of_generator_is_modulus() {
        let k = sqrt2_field();
        let cp = k.generator().charpoly_over_q();
        assert_eq!(cp, UniPoly::from_ints(&[-2, 0, 1]));
        let cp = Scalar::from_int(3).charpoly_over_q();
        assert_eq!(cp, UniPoly::from_ints(&[-3, 1]));
    }

    #[test]
    fn rational_text_round_trip() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(fmt_rational(&q), "-3/2");
        assert!(parse_rational("1/0").is_none());
    }
}
