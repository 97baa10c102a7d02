//! Base-field scalars: exact rationals and prime-field elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// The coefficient field at the bottom of every tower: either the rationals
/// or a prime field of odd or even characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    /// Constructs the prime field, trial-checking primality.
    pub fn prime(p: u64) -> Result<BaseField> {
        if !is_prime_trial(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(BaseField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Q(BigRational::zero()),
            BaseField::Prime(p) => Scalar::Fp { p: *p, val: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Q(BigRational::one()),
            BaseField::Prime(p) => Scalar::Fp { p: *p, val: 1 },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Q(BigRational::from(BigInt::from(n))),
            BaseField::Prime(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { p: *p, val: r }
            }
        }
    }

    /// All elements of the field, ascending; only for prime fields.
    pub fn enumerate(&self) -> Option<Vec<Scalar>> {
        match self {
            BaseField::Rationals => None,
            BaseField::Prime(p) => Some((0..*p).map(|v| Scalar::Fp { p: *p, val: v }).collect()),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact scalar carrying its own field tag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, val: u64 },
}

impl Scalar {
    pub fn base(&self) -> BaseField {
        match self {
            Scalar::Q(_) => BaseField::Rationals,
            Scalar::Fp { p, .. } => BaseField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "scalar fields differ");
                Scalar::Fp {
                    p: *p,
                    val: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("scalar fields differ"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) => {
                assert_eq!(p, q, "scalar fields differ");
                Scalar::Fp {
                    p: *p,
                    val: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("scalar fields differ"),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: mod_inv(*val, *p),
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.base().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// p-th root in a prime field (the identity map, by Fermat); errors over Q.
    pub fn char_root(&self) -> Result<Scalar> {
        match self {
            Scalar::Q(_) => Err(Error::UnsupportedField),
            Scalar::Fp { .. } => Ok(self.clone()),
        }
    }

    pub fn from_bigint(base: &BaseField, n: &BigInt) -> Scalar {
        match base {
            BaseField::Rationals => Scalar::Q(BigRational::from(n.clone())),
            BaseField::Prime(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let (_, digits) = r.to_u64_digits();
                Scalar::Fp {
                    p: *p,
                    val: digits.first().copied().unwrap_or(0),
                }
            }
        }
    }

    /// Exposes the rational value when over Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on signed 128-bit; p is prime and a != 0 mod p
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "not invertible");
    (t0.rem_euclid(p as i128)) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

/// Sign-free content data for rational scalars: gcd of numerators over lcm of
/// denominators, used to keep polynomial gcd computations primitive.
pub fn rational_content(vals: &[&Scalar]) -> Option<BigRational> {
    use num_integer::Integer;
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for v in vals {
        let r = v.as_rational()?;
        num_gcd = num_gcd.gcd(r.numer());
        den_lcm = den_lcm.lcm(r.denom());
    }
    if num_gcd.is_zero() {
        return Some(BigRational::zero());
    }
    Some(BigRational::new(num_gcd.abs(), den_lcm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(BaseField::prime(2).is_ok());
        assert!(BaseField::prime(7919).is_ok());
        assert_eq!(BaseField::prime(1), Err(Error::NotPrime(1)));
        assert_eq!(BaseField::prime(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn inverse_in_f5() {
        let f5 = BaseField::prime(5).unwrap();
        let two = f5.from_i64(2);
        assert_eq!(two.inv().unwrap(), f5.from_i64(3));
        assert!(f5.zero().inv().is_err());
    }

    #[test]
    fn rational_arithmetic() {
        let q = BaseField::Rationals;
        let half = q.from_i64(1).div(&q.from_i64(2)).unwrap();
        assert_eq!(half.add(&half), q.one());
    }
}
