//! Helpers for exact rational values.
//!
//! Exact fractions are serialized as strings (`"1/3"`, `"2"`) so that JSON
//! output is unambiguous and byte-stable.

use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};

/// Exact rational used for probabilities, weights, and identities.
pub type Rational = Ratio<i64>;

pub fn rational(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}

/// Render in lowest terms: `"2"` when integral, else `"num/den"`.
pub fn fmt_rational(r: Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse an exact rational from `"2"`, `"-1/8"`, or a finite decimal
/// like `"0.25"` (at most 12 fractional digits).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseDistribution(format!("invalid rational {s:?}"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int == "-" || int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int.unsigned_abs() as i64 * scale + frac;
        let num = if negative || int < 0 { -magnitude } else { magnitude };
        return Ok(Ratio::new(num, scale));
    }
    let num: i64 = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(num))
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn is_nonnegative(r: Rational) -> bool {
    // Ratio normalizes the sign into the numerator.
    *r.numer() >= 0
}

/// Serde adapter: a single rational as a string.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&fmt_rational(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a fixed array of rationals as strings.
pub mod serde_rational_array {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer, const N: usize>(
        arr: &[Rational; N],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(arr.iter().map(|r| fmt_rational(*r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        de: D,
    ) -> std::result::Result<[Rational; N], D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        if strings.len() != N {
            return Err(serde::de::Error::custom(format!(
                "expected {N} rationals, got {}",
                strings.len()
            )));
        }
        let mut out = [Rational::from_integer(0); N];
        for (slot, s) in out.iter_mut().zip(&strings) {
            *slot = parse_rational(s).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}
