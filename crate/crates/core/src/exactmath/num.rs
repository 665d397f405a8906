//! Integer and rational helpers shared by every module, plus the string
//! encodings used on the wire (`"num/den"`, `"inf"`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// Arbitrary-precision integer used for every lattice quantity.
pub type Int = BigInt;
/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Least nonnegative residue.
pub fn modulo(a: &Int, m: &Int) -> Int {
    a.mod_floor(m)
}

/// Modular inverse of `a` modulo `m > 0`, when `gcd(a, m) = 1`.
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if e.gcd == -Int::one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

/// Renders a rational as `"num/den"`.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders a rational as `"num"` when integral, `"num/den"` otherwise.
pub fn show_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        fmt_rat(r)
    }
}

/// Parses `"num/den"`, or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = Int::from_str(n.trim()).map_err(|_| bad())?;
            let d = Int::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ExactError::ZeroDenominator);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(Int::from_str(s).map_err(|_| bad())?)),
    }
}

/// Fixed-point decimal rendering by exact rounding (half away from zero).
/// Only used for display; never fed back into computation.
pub fn to_decimal(r: &Rat, places: u32) -> String {
    let scale = Int::from(10).pow(places);
    let scaled = r * Rat::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let mag = rounded.abs();
    let (whole, frac) = mag.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac, width = places as usize)
    }
}

/// A rational number or the projective point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rat),
    Infinity,
}

impl ExtRational {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    /// Projective pair `(n, d)` with `d >= 0`; infinity is `(1, 0)`.
    pub fn as_pair(&self) -> (Int, Int) {
        match self {
            ExtRational::Finite(r) => (r.numer().clone(), r.denom().clone()),
            ExtRational::Infinity => (Int::one(), Int::zero()),
        }
    }

    pub fn from_pair(n: Int, d: Int) -> Self {
        if d.is_zero() {
            ExtRational::Infinity
        } else {
            ExtRational::Finite(Rat::new(n, d))
        }
    }
}

impl From<Rat> for ExtRational {
    fn from(r: Rat) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{}", show_rat(r)),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            Ok(ExtRational::Infinity)
        } else {
            parse_rat(s).map(ExtRational::Finite)
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "serde_rat")]` for [`Rat`] fields: `"num/den"` strings.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&show_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "serde_rat_vec")]` for lists of rationals.
pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(show_rat).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "serde_int")]` for [`Int`] fields. Values inside the `i64`
/// range are plain JSON numbers; larger ones are decimal strings.
pub mod serde_int {
    use super::*;
    use num_traits::ToPrimitive;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(i64),
        Str(String),
    }

    /// Largest magnitude a JavaScript client reads back exactly from a JSON number.
    pub const MAX_SAFE: i64 = (1 << 53) - 1;

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(n) if n.abs() <= MAX_SAFE => s.serialize_i64(n),
            _ => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(Int::from(n)),
            Repr::Str(s) => Int::from_str(s.trim()).map_err(serde::de::Error::custom),
        }
    }
}

/// `#[serde(with = "serde_int_vec")]` for chains and other integer lists.
pub mod serde_int_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct W(#[serde(with = "serde_int")] Int);

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<W> = v.iter().cloned().map(W).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_rat(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rat(&rat(-3, 1)), "-3/1");
        assert_eq!(parse_rat("-7/20").unwrap(), rat(-7, 20));
        assert_eq!(parse_rat("5").unwrap(), rat(5, 1));
        assert!(matches!(parse_rat("1/0"), Err(ExactError::ZeroDenominator)));
        assert!(parse_rat("x/2").is_err());
    }

    #[test]
    fn ext_rational_json() {
        let inf = serde_json::to_string(&ExtRational::Infinity).unwrap();
        assert_eq!(inf, "\"inf\"");
        let v: ExtRational = serde_json::from_str("\"25/14\"").unwrap();
        assert_eq!(v, ExtRational::Finite(rat(25, 14)));
    }

    #[test]
    fn large_integers_serialize_as_strings() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct W(#[serde(with = "serde_int")] Int);
        let small = Int::from(serde_int::MAX_SAFE);
        let big: Int = &small + Int::from(1);
        assert_eq!(serde_json::to_string(&W(small.clone())).unwrap(), "9007199254740991");
        assert_eq!(serde_json::to_string(&W(big.clone())).unwrap(), "\"9007199254740992\"");
        assert_eq!(serde_json::from_str::<W>("\"9007199254740992\"").unwrap(), W(big));
        assert_eq!(serde_json::from_str::<W>("9007199254740991").unwrap(), W(small));
    }

    #[test]
    fn decimals_round_exactly() {
        assert_eq!(to_decimal(&rat(1, 3), 3), "0.333");
        assert_eq!(to_decimal(&rat(2, 3), 3), "0.667");
        assert_eq!(to_decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&rat(12, 1), 1), "12.0");
    }

    #[test]
    fn inverses_and_roots() {
        assert_eq!(mod_inverse(&int(5), &int(4)), Some(int(1)));
        assert_eq!(mod_inverse(&int(2), &int(4)), None);
        assert_eq!(exact_sqrt(&int(196)), Some(int(14)));
        assert_eq!(exact_sqrt(&int(8)), None);
        assert_eq!(modulo(&int(-11), &int(25)), int(14));
    }
}

/// `Vec<(Int, Int)>` as a list of `[p, q]` pairs.
pub mod serde_int_pairs {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "serde_int")] Int, #[serde(with = "serde_int")] Int);

    pub fn serialize<S: Serializer>(v: &[(Int, Int)], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<W> = v.iter().map(|(a, b)| W(a.clone(), b.clone())).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Int, Int)>, D::Error> {
        Ok(Vec::<W>::deserialize(d)?.into_iter().map(|w| (w.0, w.1)).collect())
    }
}
