//! Exact scalars over the rationals or a prime field, and the matrix kernels
//! built on them.

mod matrix;
mod rational;
mod subspace;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use matrix::ExactMatrix;
pub use rational::Rational;
pub use subspace::ColumnSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("operands live over different fields ({0} vs {1})")]
    MixedField(FieldSpec, FieldSpec),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("cannot parse field specification `{0}`")]
    BadFieldSpec(String),
    #[error("cannot parse scalar `{0}`")]
    BadScalar(String),
    #[error("denominator of `{0}` vanishes in {1}")]
    DenominatorVanishes(String, FieldSpec),
}

/// The ground field every scalar of one computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(Rational::ZERO),
            FieldSpec::Prime(p) => Scalar::Fp { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(Rational::from_integer(n)),
            FieldSpec::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(*p as i64) as u32,
                modulus: *p,
            },
        }
    }

    /// Maps an exact rational into this field.
    pub fn from_rational(&self, q: &Rational) -> Result<Scalar, FieldError> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Q(q.clone())),
            FieldSpec::Prime(p) => {
                let (n, d) = q.numer_denom();
                let pb = BigInt::from(*p);
                let n = n.mod_floor(&pb).to_u64().unwrap_or(0);
                let d = d.mod_floor(&pb).to_u64().unwrap_or(0);
                if d == 0 {
                    return Err(FieldError::DenominatorVanishes(q.to_string(), *self));
                }
                let num = Scalar::Fp { value: n as u32, modulus: *p };
                let den = Scalar::Fp { value: d as u32, modulus: *p };
                Ok(num.mul(&den.inv().expect("nonzero residue")))
            }
        }
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let q = Rational::parse(text).ok_or_else(|| FieldError::BadScalar(text.to_string()))?;
        self.from_rational(&q)
    }

    /// A uniformly random small scalar, used for seeded searches.
    pub fn random_small<R: Rng>(&self, rng: &mut R, magnitude: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => self.from_i64(rng.gen_range(-magnitude..=magnitude)),
            FieldSpec::Prime(p) => Scalar::Fp {
                value: rng.gen_range(0..*p),
                modulus: *p,
            },
        }
    }

    pub fn check_same(&self, other: &FieldSpec) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::MixedField(*self, *other))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `Q`, `GF(p)` and the shorthand `GFp`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| FieldError::BadFieldSpec(s.to_string()))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| FieldError::BadFieldSpec(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field element. Residues carry their modulus so that mixing
/// fields is detected rather than silently producing garbage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    Fp { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch: {:?} + {:?}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch: {:?} * {:?}", self.field(), other.field()),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(a) => a.inv().map(Scalar::Q),
            Scalar::Fp { value, modulus } => {
                if *value == 0 {
                    return None;
                }
                // Fermat: a^(p-2)
                let p = *modulus as u64;
                let mut base = *value as u64;
                let mut exp = p - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Some(Scalar::Fp { value: acc as u32, modulus: *modulus })
            }
        }
    }

    /// Sign used when printing relations: negative rationals print with `-`.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.signum() < 0,
            Scalar::Fp { .. } => false,
        }
    }

    /// Lossy projection to a signed machine integer, for reports.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(Rational::Small { num, den: 1 }) => Some(*num),
            Scalar::Q(Rational::Big(b)) if b.is_integer() => b.numer().abs().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp { value, .. } => Some(*value as i64),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
