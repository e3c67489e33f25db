use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// The two default word-sized primes (both below 2^31).
pub const PRIME_A: u64 = 2_147_483_647;
pub const PRIME_B: u64 = 2_147_483_629;

/// Where ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(PRIME_A)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("q"),
            Field::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") || s.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = s.strip_prefix("p:").unwrap_or(s);
        let p: u64 = digits.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad field `{s}`") })?;
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::Precondition(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }
}

/// A coefficient: exact rational or residue modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(Rational),
    Fp { value: u64, p: u64 },
}

impl Scalar {
    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::Q(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn fp(value: i64, p: u64) -> Self {
        Scalar::Fp { value: reduce_i64(value, p), p }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q(a + b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Ok(Scalar::Fp { value: (a + b) % p, p: *p })
            }
            _ => Err(Error::Precondition("mixed scalar fields".into())),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Ok(Scalar::Q(a * b)),
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => {
                Ok(Scalar::Fp { value: mul_mod(*a, *b, *p), p: *p })
            }
            _ => Err(Error::Precondition("mixed scalar fields".into())),
        }
    }

    /// Image of a rational in F_p; fails when p divides the denominator.
    pub fn to_fp(q: &Rational, p: u64) -> Result<u64> {
        let num = bigint_mod(q.numer(), p);
        let den = bigint_mod(q.denom(), p);
        if den == 0 {
            return Err(Error::Precondition(format!("denominator divisible by {p}")));
        }
        Ok(mul_mod(num, inv_mod(den, p), p))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, p } => write!(f, "{value} mod {p}"),
        }
    }
}

pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i64().unwrap();
    reduce_i64(r, p)
}

#[inline]
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic primality test by trial division (adequate for word-sized inputs).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Parse `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("bad rational `{s}`") };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
