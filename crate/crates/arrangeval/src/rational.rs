//! Exact rational scalars and their canonical text form.
//!
//! Every quantity in this crate is an arbitrary-precision rational. The
//! canonical text form is `"p/q"` with `q > 0` and `gcd(p, q) = 1`, where the
//! `/q` part is omitted when the denominator is one, e.g. `"3"`, `"-1/2"`.
//! That form is used in all JSON input and output, so that reports are
//! byte-stable and exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// The scalar type: an arbitrary-precision rational number.
///
/// `BigRational` keeps itself reduced with a positive denominator, which is
/// exactly the canonical form this crate relies on for equality and hashing
/// of derived keys.
pub type Q = num_rational::BigRational;

/// Rational from a numerator/denominator pair of machine integers.
///
/// Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn qi(num: i64) -> Q {
    BigRational::from_integer(BigInt::from(num))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_q(x: &Q) -> String {
    let mut s = String::new();
    if x.denom().is_one() {
        let _ = write!(s, "{}", x.numer());
    } else {
        let _ = write!(s, "{}/{}", x.numer(), x.denom());
    }
    s
}

/// Parse the canonical text form. Accepts optional sign, `"p"` or `"p/q"`.
pub fn parse_q(s: &str) -> Result<Q, QParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| QParseError::BadRational(s.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| QParseError::BadRational(s.to_string()))?;
    if den.is_zero() {
        return Err(QParseError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Errors produced when reading rationals from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QParseError {
    /// The string is not of the form `p` or `p/q` with integer parts.
    #[error("not a rational: {0:?} (expected \"p\" or \"p/q\")")]
    BadRational(String),
    /// The denominator part is zero.
    #[error("zero denominator in rational {0:?}")]
    ZeroDenominator(String),
}

/// Sign of a rational as `-1`, `0`, or `1`.
pub fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Largest integer `m` with `m <= x`, as a `BigInt`.
pub fn floor_int(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Fractional part `x - floor(x)`, lying in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - Q::from_integer(floor_int(x))
}

/// True when `x` is an integer.
pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Serde adapters mapping `Q` to its canonical string form.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Serialize a rational as its canonical string.
    pub fn serialize<S: Serializer>(x: &Q, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_q(x))
    }

    /// Deserialize a rational from its canonical string.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Q, D::Error> {
        let s = String::deserialize(de)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapters for vectors of rationals.
pub mod serde_qvec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Serialize a vector of rationals as canonical strings.
    pub fn serialize<S: Serializer>(xs: &[Q], ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_q(x))?;
        }
        seq.end()
    }

    /// Deserialize a vector of rationals from canonical strings.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Q>, D::Error> {
        let ss = Vec::<String>::deserialize(de)?;
        ss.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapters for matrices (vectors of vectors) of rationals.
pub mod serde_qmat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Serialize rows of rationals as rows of canonical strings.
    pub fn serialize<S: Serializer>(xs: &[Vec<Q>], ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(xs.len()))?;
        for row in xs {
            let row: Vec<String> = row.iter().map(format_q).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    /// Deserialize rows of rationals from rows of canonical strings.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let ss = Vec::<Vec<String>>::deserialize(de)?;
        ss.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_q(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_round_trips() {
        for (num, den, text) in [(1, 2, "1/2"), (-3, 6, "-1/2"), (4, 2, "2"), (0, 5, "0")] {
            let x = q(num, den);
            assert_eq!(format_q(&x), text);
            assert_eq!(parse_q(text).unwrap(), x);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_q("a/b"), Err(QParseError::BadRational(_))));
        assert!(matches!(
            parse_q("1/0"),
            Err(QParseError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn floor_and_frac_agree() {
        let x = q(-7, 2); // -3.5
        assert_eq!(floor_int(&x), BigInt::from(-4));
        assert_eq!(frac(&x), q(1, 2));
        assert_eq!(frac(&qi(3)), qi(0));
    }
}
