//! Exact rational helpers.
//!
//! Weights, Lagrange multipliers and coverage levels are all [`Rational`]s so
//! that cut comparisons and breakpoints are decided exactly.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"num/den"`, an integer, or a plain decimal such as `"0.15"`.
/// Exponent notation is rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Rational(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Canonical `"num/den"` text, always reduced, denominator positive.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    // i128 -> f64 is lossy only beyond 2^53, which is fine for reporting.
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Smallest integer `>= r`.
pub fn ceil(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

/// Least common multiple of the denominators, `None` on overflow.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<i128> {
    let mut acc: i128 = 1;
    for v in values {
        let d = *v.denom();
        let g = acc.gcd(&d);
        acc = (acc / g).checked_mul(d)?;
    }
    Some(acc)
}

pub fn is_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

pub fn clamp01(r: Rational) -> Rational {
    if r.is_negative() {
        Rational::zero()
    } else if r > Rational::one() {
        Rational::one()
    } else {
        r
    }
}

/// Bridges an `f64` configuration value (e.g. a CLI flag) to an exact
/// rational by going through its shortest decimal representation.
pub fn from_f64_decimal(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Rational(x.to_string()));
    }
    let text = format!("{x}");
    if text.contains('e') || text.contains('E') {
        return Err(Error::Rational(text));
    }
    parse(&text)
}

/// Serde adapter storing a [`Rational`] as its `"num/den"` text.
pub mod text {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }

    /// Same, for sequences.
    pub mod seq {
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        use super::super::{format, parse, Rational};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse(s).map_err(D::Error::custom))
                .collect()
        }
    }
}
