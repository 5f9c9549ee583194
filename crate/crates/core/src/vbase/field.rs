use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KanError, Result};

/// Matrix entries. Over a prime field the value is an integer in `0..p`.
pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(KanError::InvalidField(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    fn modulus(&self) -> Option<BigInt> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(BigInt::from(*p)),
        }
    }

    fn reduce_int(&self, v: BigInt) -> Scalar {
        match self.modulus() {
            None => Scalar::from_integer(v),
            Some(m) => Scalar::from_integer(v.mod_floor(&m)),
        }
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.reduce_int(BigInt::from(v))
    }

    /// Canonical representative of a rational number; fails when the
    /// denominator is not invertible in the field.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(v.clone()),
            Field::Prime(p) => {
                let m = BigInt::from(*p);
                let den = v.denom().mod_floor(&m);
                if den.is_zero() {
                    return Err(KanError::InvalidField(format!(
                        "denominator of {v} is zero mod {p}"
                    )));
                }
                let inv = modinv(&den, &m);
                Ok(self.reduce_int(v.numer() * inv))
            }
        }
    }

    pub fn is_canonical(&self, v: &Scalar) -> bool {
        match self {
            Field::Rationals => true,
            Field::Prime(p) => {
                v.is_integer() && !v.is_negative() && v.numer() < &BigInt::from(*p)
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => a + b,
            Field::Prime(_) => self.reduce_int(a.numer() + b.numer()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => a - b,
            Field::Prime(_) => self.reduce_int(a.numer() - b.numer()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Field::Rationals => -a,
            Field::Prime(_) => self.reduce_int(-a.numer()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rationals => a * b,
            Field::Prime(_) => self.reduce_int(a.numer() * b.numer()),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self.modulus() {
            None => Some(a.recip()),
            Some(m) => Some(Scalar::from_integer(modinv(a.numer(), &m))),
        }
    }

    /// Render an entry the way bundles store it.
    pub fn render(&self, v: &Scalar) -> String {
        if v.is_integer() {
            v.numer().to_string()
        } else {
            format!("{}/{}", v.numer(), v.denom())
        }
    }

    pub fn to_u64(&self, v: &Scalar) -> Option<u64> {
        v.to_integer().to_u64()
    }
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Parse `"p/q"` or `"p"` into a reduced rational. `q` must be nonzero.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator in `{s}`"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator in `{s}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Field::prime(5).unwrap();
        let six = f5.mul(&f5.from_int(2), &f5.from_int(3));
        assert_eq!(six, f5.from_int(1));
        assert_eq!(f5.from_int(-1), f5.from_int(4));
        let inv2 = f5.inv(&f5.from_int(2)).unwrap();
        assert_eq!(inv2, f5.from_int(3));
        let half = f5.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half, f5.from_int(3));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn half_undefined_in_f2() {
        let f2 = Field::prime(2).unwrap();
        assert!(f2.from_rational(&BigRational::new(1.into(), 2.into())).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("2/4").unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
