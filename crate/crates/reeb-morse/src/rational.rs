//! Exact rational heights: parsing, formatting and serde glue.
//!
//! Heights appear in JSON either as plain integers or as strings of the
//! form `"p"` / `"p/q"`. They serialize back to an integer when the
//! denominator is one and to `"p/q"` otherwise, so round-trips are
//! byte-identical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Unexpected};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

/// Parse `"p"` or `"p/q"` with optional leading minus.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().ok()?;
            let d: BigInt = den.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// JSON value that is either a number or a `"p/q"` string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Str(String),
}

pub fn serialize<S: Serializer>(r: &Rational, ser: S) -> Result<S::Ok, S::Error> {
    if r.denom().is_one() {
        if let Ok(n) = i64::try_from(r.numer().clone()) {
            return ser.serialize_i64(n);
        }
    }
    ser.serialize_str(&format_rational(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
    match RationalRepr::deserialize(de)? {
        RationalRepr::Int(n) => Ok(Rational::from_integer(BigInt::from(n))),
        RationalRepr::Str(s) => parse_rational(&s)
            .ok_or_else(|| de::Error::invalid_value(Unexpected::Str(&s), &"a rational `p` or `p/q`")),
    }
}

/// Same codec for `Option<Rational>` fields.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, ser: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => super::serialize(r, ser),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Rational>, D::Error> {
        let repr = Option::<RationalRepr>::deserialize(de)?;
        match repr {
            None => Ok(None),
            Some(RationalRepr::Int(n)) => Ok(Some(Rational::from_integer(BigInt::from(n)))),
            Some(RationalRepr::Str(s)) => parse_rational(&s).map(Some).ok_or_else(|| {
                de::Error::invalid_value(Unexpected::Str(&s), &"a rational `p` or `p/q`")
            }),
        }
    }
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Strictly monotone integer check helper used by tests.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-7", "3/4", "-22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(parse_rational("4/8").map(|r| format_rational(&r)).as_deref(), Some("1/2"));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("a").is_none());
    }
}
