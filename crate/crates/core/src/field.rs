//! Exact scalar arithmetic over the rationals or a prime field.
//!
//! A session works over a single field; values from different fields must
//! never meet in an arithmetic operation. Constructors of compound values
//! (matrices, complexes) return [`crate::Error::FieldMismatch`] when handed
//! mixed scalars; the arithmetic itself panics on a mix since reaching that
//! point means a validated invariant was broken upstream.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// The ground field of a session: the rationals or integers mod a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { p: *p, val: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { p: *p, val: 1 % *p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(v))),
            Field::Fp(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp { p: *p, val: m }
            }
        }
    }

    /// Checks the modulus of an `Fp` field is a prime ≥ 2.
    pub fn validate(&self) -> Result<(), Error> {
        match self {
            Field::Q => Ok(()),
            Field::Fp(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(Error::NotPrime(*p))
                }
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the session field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, val: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) if p == q => Scalar::Fp {
                p: *p,
                val: (a + b) % p,
            },
            _ => panic!("scalar arithmetic across different fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) if p == q => Scalar::Fp {
                p: *p,
                val: mulmod(*a, *b, *p),
            },
            _ => panic!("scalar arithmetic across different fields"),
        }
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

    /// Multiplicative inverse. Panics on zero; division by zero is always an
    /// upstream logic error here (pivots are checked nonzero first).
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { p, val } => {
                assert!(*val != 0, "inverse of zero");
                Scalar::Fp {
                    p: *p,
                    val: powmod(*val, p - 2, *p),
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    /// Canonical form: `a/b` with `b > 0` and `gcd(a,b) = 1`, plain `a` when
    /// `b = 1`; residues `0..p-1` for a prime field.
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

/// Parses the canonical decimal-string scalar grammar for the given field.
pub fn parse_scalar(field: Field, s: &str) -> Result<Scalar, Error> {
    let bad = || Error::ScalarParse(s.to_string());
    match field {
        Field::Q => {
            if let Some((num, den)) = s.split_once('/') {
                let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if d.is_zero() || d.is_negative() {
                    return Err(bad());
                }
                Ok(Scalar::Q(BigRational::new(n, d)))
            } else {
                let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                Ok(Scalar::Q(BigRational::from(n)))
            }
        }
        Field::Fp(p) => {
            let v = u64::from_str(s.trim()).map_err(|_| bad())?;
            if v >= p {
                return Err(bad());
            }
            Ok(Scalar::Fp { p, val: v })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip() {
        let f = Field::Q;
        let x = parse_scalar(f, "-4/6").unwrap();
        assert_eq!(x.to_string(), "-2/3");
        assert_eq!(parse_scalar(f, "7").unwrap().to_string(), "7");
        assert!(parse_scalar(f, "1/0").is_err());
        assert!(parse_scalar(f, "1/-2").is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::Fp(7);
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(a.mul(&b), f.from_i64(1));
        assert_eq!(a.inv(), f.from_i64(5));
        assert_eq!(f.from_i64(-1), f.from_i64(6));
    }

    #[test]
    fn prime_check() {
        assert!(Field::Fp(2).validate().is_ok());
        assert!(Field::Fp(101).validate().is_ok());
        assert!(Field::Fp(1).validate().is_err());
        assert!(Field::Fp(91).validate().is_err());
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixing_fields_panics() {
        let _ = Field::Q.one().add(&Field::Fp(5).one());
    }
}
