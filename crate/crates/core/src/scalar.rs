//! Coefficient rings used by forms, quaternions and matrices.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GeomError, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses "p/q" or an integer string.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| GeomError::Parse(format!("bad rational '{s}'")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(GeomError::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Q::new(parse_int(n)?, d))
        }
        None => Ok(Q::from_integer(parse_int(s)?)),
    }
}

/// Renders a rational as "p/q" (or "p" when integral).
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter storing a list of rationals as "p/q" strings.
pub mod q_list {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_q, parse_q, Q};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_q(t).map_err(D::Error::custom))
            .collect()
    }
}

/// Serde adapter storing a rational as a "p/q" string.
pub mod q_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_q, parse_q, Q};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        parse_q(&String::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Exact rational approximation of a binary64 value (exact conversion).
pub fn q_from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Commutative ring of coefficients.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(x: &Q) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&qi(n))
    }

    /// Size used for pivoting and tolerance checks.
    fn magnitude(&self) -> f64;

    /// Whether the coefficient varies with coordinate `var`.
    fn depends_on(&self, _var: usize) -> bool {
        false
    }

    /// Moves coordinate variable v to `map[v]` (constants are unchanged).
    fn rename_vars(&self, _map: &[usize]) -> Self {
        self.clone()
    }
}

/// Scalars with exact or floating division.
pub trait Field: Scalar + Div<Output = Self> {
    /// Nearest f64.
    fn approx(&self) -> f64;
}

impl Scalar for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Field for Q {
    fn approx(&self) -> f64 {
        to_f64(self)
    }
}

impl Scalar for f64 {
    fn from_q(x: &Q) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Field for f64 {
    fn approx(&self) -> f64 {
        *self
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * qi(k))
}
