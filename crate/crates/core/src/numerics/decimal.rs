//! Exact conversions between decimal text, rationals, and raw big-floats.
//!
//! All text input is parsed into `BigRational` with no rounding; the single
//! rounding step happens when a rational is converted to a float at a chosen
//! working precision. Output goes the other way: float to rational exactly,
//! then decimal with round-half-to-even at the requested digit count.

use astro_float::{BigFloat, RoundingMode, Sign};
use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

fn parse_err(s: &str, detail: &str) -> Error {
    Error::Parse {
        what: format!("number {s:?}"),
        detail: detail.to_string(),
    }
}

/// Parse `"3"`, `"-3/4"`, `"1.25"`, or `"2.5e-3"` into an exact rational.
pub fn parse_number(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(parse_err(s, "empty"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|e| parse_err(s, &format!("bad numerator: {e}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|e| parse_err(s, &format!("bad denominator: {e}")))?;
        if d.is_zero() {
            return Err(parse_err(s, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(t).ok_or_else(|| parse_err(s, "expected integer, fraction, or decimal"))
}

fn parse_decimal(t: &str) -> Option<BigRational> {
    let (mantissa, exp10) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first()? {
        b'+' => (false, &mantissa[1..]),
        b'-' => (true, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let mut n: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().ok()? };
    if neg {
        n = -n;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Some(if shift >= 0 {
        BigRational::from_integer(n * ten.pow(shift as u32))
    } else {
        BigRational::new(n, ten.pow((-shift) as u32))
    })
}

/// Compare |q| against 10^e.
fn cmp_pow10(q: &BigRational, e: i64) -> std::cmp::Ordering {
    let n = q.numer().abs();
    let d = q.denom().abs();
    let ten = BigInt::from(10u32);
    if e >= 0 {
        n.cmp(&(d * ten.pow(e as u32)))
    } else {
        (n * ten.pow((-e) as u32)).cmp(&d)
    }
}

fn floor_log10(q: &BigRational) -> i64 {
    let approx = super::scalar::rat_log10_abs(q);
    let mut e = approx.floor() as i64;
    while cmp_pow10(q, e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while cmp_pow10(q, e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }
    e
}

/// Render a rational with `sig` significant digits, round half to even.
///
/// Small exponents print positionally, anything else as `d.ddde±N`.
pub fn decimal_string(q: &BigRational, sig: usize) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let aq = q.abs();
    let mut e = floor_log10(&aq);
    // digits = round(|q| * 10^(sig-1-e)) as an integer with exactly sig digits
    let scale = sig as i64 - 1 - e;
    let ten = BigInt::from(10u32);
    let scaled = if scale >= 0 {
        aq.clone() * BigRational::from_integer(ten.pow(scale as u32))
    } else {
        aq.clone() / BigRational::from_integer(ten.pow((-scale) as u32))
    };
    let mut int = scaled.numer() / scaled.denom();
    let rem = scaled.numer() - &int * scaled.denom();
    let twice = &rem * BigInt::from(2u32);
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => int += 1,
        std::cmp::Ordering::Equal => {
            if &int % 2 != BigInt::zero() {
                int += 1;
            }
        }
        std::cmp::Ordering::Less => {}
    }
    let mut digits = int.to_string();
    if digits.len() > sig {
        // rounding carried into a new leading digit (e.g. 9.99 -> 10.0)
        digits.truncate(sig);
        e += 1;
    }
    debug_assert_eq!(digits.len(), sig);
    let trimmed = digits.trim_end_matches('0');
    let body: &str = if trimmed.is_empty() { "0" } else { trimmed };
    let sign = if neg { "-" } else { "" };
    if e >= -4 && e < sig as i64 {
        // positional
        if e >= 0 {
            let e = e as usize;
            if body.len() > e + 1 {
                format!("{sign}{}.{}", &body[..=e], &body[e + 1..])
            } else {
                let zeros = "0".repeat(e + 1 - body.len());
                format!("{sign}{body}{zeros}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("{sign}0.{zeros}{body}")
        }
    } else if body.len() > 1 {
        format!("{sign}{}.{}e{}", &body[..1], &body[1..], e)
    } else {
        format!("{sign}{body}e{e}")
    }
}

/// Exact value of a finite big-float as a rational. `None` for NaN/Inf.
pub(crate) fn bigfloat_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_nan() || x.is_inf() {
        return None;
    }
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _prec, sign, exp, _inexact) = x.as_raw_parts()?;
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    let mag = BigUint::from_bytes_le(&bytes);
    let mut n = BigInt::from(mag);
    if sign == Sign::Neg {
        n = -n;
    }
    // value = n / 2^(64*len) * 2^exp
    let e2 = exp as i64 - 64 * words.len() as i64;
    Some(if e2 >= 0 {
        BigRational::from_integer(n << (e2 as usize))
    } else {
        BigRational::new(n, BigInt::one() << ((-e2) as usize))
    })
}

/// A nonnegative integer as an exact big-float (no rounding).
fn biguint_to_bigfloat(n: &BigUint) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_i64(0, 64);
    }
    let bits = n.bits();
    let len = bits.div_ceil(64) as usize;
    let shifted = n << (64 * len as u64 - bits);
    let mut words = shifted.to_u64_digits();
    words.resize(len, 0);
    BigFloat::from_words(&words, Sign::Pos, bits as astro_float::Exponent)
}

/// Round a rational once to `bits` of binary precision.
pub(crate) fn rational_to_bigfloat(q: &BigRational, bits: usize) -> BigFloat {
    let num = biguint_to_bigfloat(q.numer().magnitude());
    let den = biguint_to_bigfloat(q.denom().magnitude());
    let mag = num.div(&den, bits, RM);
    if q.is_negative() {
        mag.neg()
    } else {
        mag
    }
}
