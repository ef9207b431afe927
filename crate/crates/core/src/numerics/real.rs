use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num::rational::BigRational;

use super::decimal::{bigfloat_to_rational, decimal_string, parse_number, rational_to_bigfloat};
use crate::error::Result;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

/// Run `f` with the thread-local cache of pi/ln(2)/... used by transcendentals.
pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision real number.
///
/// Every value carries its working precision in bits. Binary operations
/// round to the smaller operand precision, so mixing precisions narrows
/// rather than widens. There is no global precision state.
#[derive(Debug, Clone)]
pub struct ArbReal {
    value: BigFloat,
    prec: usize,
}

impl ArbReal {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        ArbReal { value, prec }
    }

    pub fn zero(bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(0, bits), bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(1, bits), bits)
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, bits), bits)
    }

    pub fn from_f64(v: f64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, bits), bits)
    }

    /// Round a rational once to `bits` of precision.
    pub fn from_rational(q: &BigRational, bits: usize) -> Self {
        Self::wrap(rational_to_bigfloat(q, bits), bits)
    }

    /// Exact decimal (or `p/q`) parse, then a single rounding to `bits`.
    pub fn parse(s: &str, bits: usize) -> Result<Self> {
        Ok(Self::from_rational(&parse_number(s)?, bits))
    }

    pub fn pi(bits: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Same value re-rounded to a different working precision.
    pub fn with_bits(&self, bits: usize) -> Self {
        let one = BigFloat::from_i64(1, 64);
        Self::wrap(self.value.mul(&one, bits, RM), bits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        self.value.sign() == Some(Sign::Neg) && !self.value.is_zero()
    }

    fn bin(&self, rhs: &Self, f: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat) -> Self {
        let p = self.prec.min(rhs.prec);
        Self::wrap(f(&self.value, &rhs.value, p), p)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.bin(rhs, |a, b, p| a.add(b, p, RM))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.bin(rhs, |a, b, p| a.sub(b, p, RM))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.bin(rhs, |a, b, p| a.mul(b, p, RM))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.bin(rhs, |a, b, p| a.div(b, p, RM))
    }

    pub fn neg(&self) -> Self {
        Self::wrap(self.value.neg(), self.prec)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_consts(|cc| self.value.atan(self.prec, RM, cc)), self.prec)
    }

    /// Angle of the point (x, y) in (-pi, pi]; the negative real axis maps
    /// to +pi, matching the principal branch used for logarithms and powers.
    pub fn atan2(y: &Self, x: &Self) -> Self {
        let p = y.prec.min(x.prec);
        let pi = ArbReal::pi(p);
        if x.is_zero() && y.is_zero() {
            return ArbReal::zero(p);
        }
        if x.is_zero() {
            let half = pi.div(&ArbReal::from_i64(2, p));
            return if y.is_negative() { half.neg() } else { half };
        }
        let base = y.div(x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base.sub(&pi)
        } else {
            // includes y == 0: arg of a negative real is +pi
            base.add(&pi)
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            Self::wrap(self.value.powi(n as usize, self.prec, RM), self.prec)
        } else {
            let pos = self.value.powi((-n) as usize, self.prec, RM);
            Self::wrap(BigFloat::from_i64(1, self.prec).div(&pos, self.prec, RM), self.prec)
        }
    }

    pub fn partial_cmp(&self, rhs: &Self) -> Option<Ordering> {
        PartialOrd::partial_cmp(&self.value, &rhs.value)
    }

    pub fn lt(&self, rhs: &Self) -> bool {
        self.partial_cmp(rhs) == Some(Ordering::Less)
    }

    pub fn le(&self, rhs: &Self) -> bool {
        matches!(self.partial_cmp(rhs), Some(Ordering::Less | Ordering::Equal))
    }

    /// Exact rational value; `None` for NaN or infinity.
    pub fn to_rational(&self) -> Option<BigRational> {
        bigfloat_to_rational(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.sign() == Some(Sign::Neg) {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if self.value.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exp, _) = self.value.as_raw_parts().expect("finite raw parts");
        let mut frac = 0.0_f64;
        let n = words.len();
        // value = 0.mantissa * 2^exp with the top mantissa bit set
        frac += words[n - 1] as f64 / 2f64.powi(64);
        if n >= 2 {
            frac += words[n - 2] as f64 / 2f64.powi(128);
        }
        let mag = frac * (exp as f64).exp2();
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// log10 of the absolute value, as f64 (fine for magnitude tracking even
    /// when the value itself overflows f64 range). -inf for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.value.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return f64::INFINITY;
        }
        let (words, _, _, exp, _) = self.value.as_raw_parts().expect("finite raw parts");
        let n = words.len();
        let mut frac = words[n - 1] as f64 / 2f64.powi(64);
        if n >= 2 {
            frac += words[n - 2] as f64 / 2f64.powi(128);
        }
        (exp as f64 + frac.log2()) * std::f64::consts::LOG10_2
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        match self.to_rational() {
            Some(q) => decimal_string(&q, sig),
            None => {
                if self.value.is_nan() {
                    "nan".to_string()
                } else if self.value.sign() == Some(Sign::Neg) {
                    "-inf".to_string()
                } else {
                    "inf".to_string()
                }
            }
        }
    }
}

impl fmt::Display for ArbReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).ceil().max(1.0) as usize;
        f.write_str(&self.to_decimal(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_precision_rule() {
        let a = ArbReal::from_i64(1, 256);
        let b = ArbReal::from_i64(3, 128);
        assert_eq!(a.div(&b).precision(), 128);
        assert_eq!(a.add(&b).precision(), 128);
    }

    #[test]
    fn third_round_trips_through_decimal() {
        let x = ArbReal::from_rational(&BigRational::new(1.into(), 3.into()), 512);
        let s = x.to_decimal(100);
        assert!(s.starts_with("0.33333333333333333333"));
    }

    #[test]
    fn log10_abs_tracks_magnitude() {
        let x = ArbReal::from_f64(2.0, 192).powi(1000);
        let expect = 1000.0 * 2f64.log10();
        assert!((x.log10_abs() - expect).abs() < 1e-9);
        // and far outside f64 range
        let y = ArbReal::from_f64(10.0, 192).powi(100_000);
        assert!((y.log10_abs() - 100_000.0).abs() < 1e-6);
        assert_eq!(ArbReal::zero(64).log10_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn to_f64_basics() {
        assert_eq!(ArbReal::from_f64(1.5, 128).to_f64(), 1.5);
        assert_eq!(ArbReal::from_f64(-0.375, 128).to_f64(), -0.375);
        let big = ArbReal::from_f64(2.0, 128).powi(5000);
        assert_eq!(big.to_f64(), f64::INFINITY);
    }

    #[test]
    fn atan2_quadrants_and_branch_cut() {
        let bits = 192;
        let one = ArbReal::one(bits);
        let zero = ArbReal::zero(bits);
        let pi = ArbReal::pi(bits);
        let quarter = ArbReal::atan2(&one, &one);
        assert!((quarter.to_f64() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        // negative real axis lands on +pi, not -pi
        let cut = ArbReal::atan2(&zero, &one.neg());
        assert!((cut.to_f64() - pi.to_f64()).abs() < 1e-15);
        let below = ArbReal::atan2(&one.neg(), &one.neg());
        assert!((below.to_f64() + 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn transcendentals_at_high_precision() {
        let bits = 1024;
        let x = ArbReal::one(bits);
        let e = x.exp();
        // e rounded back through ln should give 1 to ~300 digits
        let back = e.ln();
        let err = back.sub(&x).abs();
        assert!(err.log10_abs() < -290.0, "err = {}", err.log10_abs());
    }
}
