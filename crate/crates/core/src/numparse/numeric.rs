//! Exact decimal values.
//!
//! A [`NumericValue`] is `coefficient * 10^exponent` with an arbitrary-precision
//! coefficient. The representation is kept canonical (no trailing zeros in the
//! coefficient) so derived equality and hashing are value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Significant digits kept when a quotient does not terminate.
pub const DIVISION_DIGITS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Rounding used by [`NumericValue::round_to_exp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    HalfAwayFromZero,
    Floor,
    Ceil,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumericValue {
    coeff: BigInt,
    exp: i32,
}

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), n as usize)
}

impl NumericValue {
    pub fn new(coeff: impl Into<BigInt>, exp: i32) -> Self {
        let mut v = NumericValue { coeff: coeff.into(), exp };
        v.normalize();
        v
    }

    pub fn zero() -> Self {
        NumericValue { coeff: BigInt::zero(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(v, 0)
    }

    /// `10^k`.
    pub fn pow10(k: i32) -> Self {
        NumericValue { coeff: BigInt::one(), exp: k }
    }

    fn normalize(&mut self) {
        if self.coeff.is_zero() {
            self.exp = 0;
            return;
        }
        let ten = BigInt::from(10u8);
        loop {
            let (q, r) = self.coeff.div_rem(&ten);
            if !r.is_zero() {
                break;
            }
            self.coeff = q;
            self.exp += 1;
        }
    }

    pub fn sign(&self) -> Sign {
        if self.coeff.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Magnitude of the coefficient.
    pub fn digits(&self) -> BigUint {
        self.coeff.magnitude().clone()
    }

    pub fn scale_exp(&self) -> i32 {
        self.exp
    }

    pub fn coefficient(&self) -> &BigInt {
        &self.coeff
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.coeff.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    /// Number of digits after the decimal point in the canonical form.
    pub fn decimal_places(&self) -> u32 {
        if self.exp < 0 {
            (-self.exp) as u32
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        NumericValue { coeff: self.coeff.abs(), exp: self.exp }
    }

    /// `floor(log10(|v|))`, or `None` for zero.
    pub fn magnitude(&self) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        let ndigits = self.coeff.magnitude().to_str_radix(10).len() as i32;
        Some(ndigits - 1 + self.exp)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, i32) {
        let exp = self.exp.min(other.exp);
        let a = &self.coeff * pow10((self.exp - exp) as u32);
        let b = &other.coeff * pow10((other.exp - exp) as u32);
        (a, b, exp)
    }

    /// Quotient with at most [`DIVISION_DIGITS`] significant digits; `None` on a zero divisor.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        self.div_with_digits(other, DIVISION_DIGITS)
    }

    pub fn div_with_digits(&self, other: &Self, sig_digits: u32) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let na = self.coeff.magnitude().to_str_radix(10).len() as i64;
        let nb = other.coeff.magnitude().to_str_radix(10).len() as i64;
        // Scale the numerator so the integer quotient has at least `sig_digits` digits.
        let shift = (sig_digits as i64 + nb - na + 1).max(0) as u32;
        let num = &self.coeff * pow10(shift);
        let (q, r) = num.div_rem(&other.coeff);
        let mut out = NumericValue::new(q, self.exp - other.exp - shift as i32);
        if !r.is_zero() {
            // Inexact: trim to the requested number of significant digits.
            let mag = out.magnitude().unwrap_or(0);
            out = out.round_to_exp(mag - sig_digits as i32 + 1, Rounding::HalfAwayFromZero);
        }
        Some(out)
    }

    /// True when `self / other` terminates (no rounding is needed).
    pub fn divides_exactly(&self, other: &Self) -> bool {
        if other.is_zero() {
            return false;
        }
        // Reduce the fraction; exact iff the reduced denominator is 2^a 5^b.
        let (a, b, _) = self.aligned(other);
        let g = a.gcd(&b);
        let mut den = (b / g).abs();
        for p in [2u8, 5u8] {
            let p = BigInt::from(p);
            while (&den % &p).is_zero() {
                den /= &p;
            }
        }
        den.is_one()
    }

    /// Round to a multiple of `10^k`.
    pub fn round_to_exp(&self, k: i32, mode: Rounding) -> Self {
        if self.exp >= k {
            return self.clone();
        }
        let unit = pow10((k - self.exp) as u32);
        let (q, r) = self.coeff.div_mod_floor(&unit);
        // q is floor division; r in [0, unit)
        let q = match mode {
            Rounding::Floor => q,
            Rounding::Ceil => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
            Rounding::HalfAwayFromZero => {
                let twice: BigInt = &r * 2u32;
                match twice.cmp(&unit) {
                    Ordering::Less => q,
                    Ordering::Greater => q + 1,
                    Ordering::Equal => {
                        if self.coeff.is_negative() {
                            q
                        } else {
                            q + 1
                        }
                    }
                }
            }
        };
        NumericValue::new(q, k)
    }

    /// Round to `places` digits after the decimal point.
    pub fn round_dp(&self, places: u32) -> Self {
        self.round_to_exp(-(places as i32), Rounding::HalfAwayFromZero)
    }

    pub fn to_f64(&self) -> f64 {
        // Good enough for reporting and tolerance checks.
        self.to_plain_string().parse().unwrap_or(f64::NAN)
    }

    pub fn to_i128(&self) -> Option<i128> {
        if !self.is_integer() {
            return None;
        }
        (&self.coeff * pow10(self.exp as u32)).to_i128()
    }

    /// Relative difference `|a-b| / max(|a|,|b|)`; zero when both are zero.
    pub fn relative_gap(&self, other: &Self) -> f64 {
        let diff = (self - other).abs().to_f64();
        let scale = self.abs().to_f64().max(other.abs().to_f64());
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    /// Plain positional rendering, no grouping, no exponent.
    pub fn to_plain_string(&self) -> String {
        self.to_fixed(self.decimal_places())
    }

    /// Plain rendering with exactly `places` fractional digits (rounding if needed).
    pub fn to_fixed(&self, places: u32) -> String {
        let v = self.round_dp(places);
        let neg = v.coeff.is_negative();
        let mut digits = v.coeff.magnitude().to_str_radix(10);
        let mut frac_digits = v.decimal_places();
        if v.exp > 0 {
            digits.push_str(&"0".repeat(v.exp as usize));
        }
        // pad to requested places
        while frac_digits < places {
            digits.push('0');
            frac_digits += 1;
        }
        let fd = frac_digits as usize;
        if digits.len() <= fd {
            digits = format!("{}{}", "0".repeat(fd - digits.len() + 1), digits);
        }
        let (int_part, frac_part) = digits.split_at(digits.len() - fd);
        let mut out = String::new();
        if neg && !v.is_zero() {
            out.push('-');
        }
        out.push_str(int_part);
        if fd > 0 {
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }

    /// Rendering with comma thousands separators.
    pub fn to_grouped(&self, places: u32) -> String {
        let plain = self.to_fixed(places);
        let (sign, rest) = match plain.strip_prefix('-') {
            Some(r) => ("-", r),
            None => ("", plain.as_str()),
        };
        let (int_part, frac) = match rest.find('.') {
            Some(i) => (&rest[..i], &rest[i..]),
            None => (rest, ""),
        };
        let mut grouped = String::new();
        for (i, c) in int_part.chars().enumerate() {
            if i > 0 && (int_part.len() - i) % 3 == 0 {
                grouped.push(',');
            }
            grouped.push(c);
        }
        format!("{sign}{grouped}{frac}")
    }

    /// Parse `-?digits[.digits][e[+-]digits]`, with optional `,` thousands grouping.
    pub fn parse_decimal(s: &str) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (mantissa, exp_part) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let extra_exp: i32 = match exp_part {
            Some(e) => {
                let e = e.strip_prefix('+').unwrap_or(e);
                let digits = e.strip_prefix('-').unwrap_or(e);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                e.parse().ok()?
            }
            None => 0,
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.contains(',') {
            let groups: Vec<&str> = int_part.split(',').collect();
            let first_ok = !groups[0].is_empty() && groups[0].len() <= 3;
            if !first_ok || groups[1..].iter().any(|g| g.len() != 3) {
                return None;
            }
        }
        let int_digits: String = int_part.chars().filter(|c| *c != ',').collect();
        if int_digits.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let all = format!("{int_digits}{frac_part}");
        let mut coeff = BigInt::parse_bytes(all.as_bytes(), 10)?;
        if neg {
            coeff = -coeff;
        }
        Some(NumericValue::new(coeff, extra_exp - frac_part.len() as i32))
    }
}

impl Default for NumericValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for NumericValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for NumericValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a NumericValue> for &'a NumericValue {
    type Output = NumericValue;
    fn add(self, rhs: &'a NumericValue) -> NumericValue {
        let (a, b, exp) = self.aligned(rhs);
        NumericValue::new(a + b, exp)
    }
}

impl<'a> Sub<&'a NumericValue> for &'a NumericValue {
    type Output = NumericValue;
    fn sub(self, rhs: &'a NumericValue) -> NumericValue {
        let (a, b, exp) = self.aligned(rhs);
        NumericValue::new(a - b, exp)
    }
}

impl<'a> Mul<&'a NumericValue> for &'a NumericValue {
    type Output = NumericValue;
    fn mul(self, rhs: &'a NumericValue) -> NumericValue {
        NumericValue::new(&self.coeff * &rhs.coeff, self.exp + rhs.exp)
    }
}

impl Add for NumericValue {
    type Output = NumericValue;
    fn add(self, rhs: NumericValue) -> NumericValue {
        &self + &rhs
    }
}

impl Sub for NumericValue {
    type Output = NumericValue;
    fn sub(self, rhs: NumericValue) -> NumericValue {
        &self - &rhs
    }
}

impl Mul for NumericValue {
    type Output = NumericValue;
    fn mul(self, rhs: NumericValue) -> NumericValue {
        &self * &rhs
    }
}

impl Neg for NumericValue {
    type Output = NumericValue;
    fn neg(self) -> NumericValue {
        NumericValue { coeff: -self.coeff, exp: self.exp }
    }
}

impl Neg for &NumericValue {
    type Output = NumericValue;
    fn neg(self) -> NumericValue {
        NumericValue { coeff: -self.coeff.clone(), exp: self.exp }
    }
}

impl From<i64> for NumericValue {
    fn from(v: i64) -> Self {
        NumericValue::from_i64(v)
    }
}

impl From<BigInt> for NumericValue {
    fn from(v: BigInt) -> Self {
        NumericValue::new(v, 0)
    }
}

impl fmt::Display for NumericValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a decimal number: {0:?}")]
pub struct ParseDecimalError(pub String);

impl FromStr for NumericValue {
    type Err = ParseDecimalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NumericValue::parse_decimal(s).ok_or_else(|| ParseDecimalError(s.to_string()))
    }
}

// Serialized as a plain decimal string so JSON output stays exact.
impl Serialize for NumericValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_plain_string())
    }
}

impl<'de> Deserialize<'de> for NumericValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Num(serde_json::Number),
        }
        let text = match Repr::deserialize(d)? {
            Repr::Str(s) => s,
            Repr::Num(n) => n.to_string(),
        };
        NumericValue::parse_decimal(&text).ok_or_else(|| serde::de::Error::custom(format!("invalid number {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> NumericValue {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_equality() {
        assert_eq!(n("1.850"), n("1.85"));
        assert_eq!(n("1.850").coefficient(), &BigInt::from(185));
        assert_eq!(n("0.000"), NumericValue::zero());
        assert_eq!(n("1,000"), n("1000"));
        assert_eq!(n("1000").scale_exp(), 3);
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "abc", "1,00", "1.2.3", "--1", "e5", "1e", ",100"] {
            assert!(NumericValue::parse_decimal(s).is_none(), "{s}");
        }
    }

    #[test]
    fn exponent_forms() {
        assert_eq!(n("2.5e3"), n("2500"));
        assert_eq!(n("1e0"), n("1"));
        assert_eq!(n("116.111561e6"), n("116111561"));
        assert_eq!(n("5E-2"), n("0.05"));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&n("245.4") - &n("137"), n("108.4"));
        assert_eq!(&n("1.85") * &n("100"), n("185"));
        assert_eq!(n("1").checked_div(&n("4")).unwrap(), n("0.25"));
        assert!(n("1").checked_div(&n("0")).is_none());
        let third = n("1").checked_div(&n("3")).unwrap();
        assert_eq!(third.decimal_places(), DIVISION_DIGITS);
        assert!(!n("1").divides_exactly(&n("0.3048")));
        assert!(n("1.85").divides_exactly(&n("0.01")));
    }

    #[test]
    fn rounding() {
        assert_eq!(n("138").round_to_exp(1, Rounding::HalfAwayFromZero), n("140"));
        assert_eq!(n("135").round_to_exp(1, Rounding::HalfAwayFromZero), n("140"));
        assert_eq!(n("-135").round_to_exp(1, Rounding::HalfAwayFromZero), n("-140"));
        assert_eq!(n("-131").round_to_exp(1, Rounding::Floor), n("-140"));
        assert_eq!(n("131").round_to_exp(1, Rounding::Ceil), n("140"));
        assert_eq!(n("6.0695").round_dp(2), n("6.07"));
    }

    #[test]
    fn rendering() {
        assert_eq!(n("116111561").to_grouped(0), "116,111,561");
        assert_eq!(n("-1234.5").to_grouped(2), "-1,234.50");
        assert_eq!(n("0.05").to_plain_string(), "0.05");
        assert_eq!(n("1.85").to_fixed(1), "1.9");
        assert_eq!(n("100").to_plain_string(), "100");
        assert_eq!(n("-0.004").to_fixed(2), "0.00");
    }

    #[test]
    fn ordering_and_magnitude() {
        assert!(n("1.9") > n("1.85"));
        assert!(n("-2") < n("-1.5"));
        assert_eq!(n("116111561").magnitude(), Some(8));
        assert_eq!(n("0.05").magnitude(), Some(-2));
        assert_eq!(NumericValue::zero().magnitude(), None);
    }
}
