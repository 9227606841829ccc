//! Exact scalar helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Z = BigInt;
pub type Q = BigRational;

pub fn z(n: i64) -> Z {
    BigInt::from(n)
}

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qz(n: &Z) -> Q {
    BigRational::from_integer(n.clone())
}

pub fn factorial(n: u32) -> Z {
    (1..=n).fold(Z::one(), |acc, k| acc * Z::from(k))
}

/// Binomial coefficient with an arbitrary integer top entry:
/// `top (top-1) ... (top-k+1) / k!`.
pub fn binomial(top: i64, k: u32) -> Z {
    let mut num = Z::one();
    for j in 0..k as i64 {
        num *= Z::from(top - j);
    }
    num / factorial(k)
}

/// Returns the integer value of `x`, or an invariant error naming `what`.
pub fn to_integer(x: &Q, what: &str) -> Result<Z> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::invariant(format!("{what} is not an integer: {x}")))
    }
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Z>) -> Z {
    values.into_iter().fold(Z::zero(), |acc, v| acc.gcd(v))
}

pub fn to_i64(x: &Z) -> Option<i64> {
    x.to_i64()
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Z = n.trim().parse().map_err(|_| bad())?;
            let d: Z = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(qz(&s.parse::<Z>().map_err(|_| bad())?)),
    }
}

pub fn abs(x: &Z) -> Z {
    x.abs()
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(super::q(n)),
            Raw::Str(s) => parse_q(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// Serde adapter for arbitrary-precision integers, accepting JSON numbers or
/// decimal strings and writing numbers when they fit in an `i64`.
pub mod serde_z {
    use super::Z;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Z, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(n) => n.serialize(s),
            None => s.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Z, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Z::from(n)),
            Raw::Str(s) => s.trim().parse().map_err(serde::de::Error::custom),
        }
    }

    pub mod vec {
        use super::Z;
        use serde::{Deserialize, Deserializer, Serializer};

        #[derive(serde::Serialize, Deserialize)]
        struct W(#[serde(with = "super")] Z);

        pub fn serialize<S: Serializer>(v: &[Z], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| W(x.clone())))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Z>, D::Error> {
            Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }

    pub mod mat {
        use super::Z;
        use serde::{Deserialize, Deserializer, Serializer};

        #[derive(serde::Serialize, Deserialize)]
        struct Row(#[serde(with = "super::vec")] Vec<Z>);

        pub fn serialize<S: Serializer>(m: &[Vec<Z>], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(m.iter().map(|r| Row(r.clone())))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Z>>, D::Error> {
            Ok(Vec::<Row>::deserialize(d)?.into_iter().map(|r| r.0).collect())
        }
    }
}
