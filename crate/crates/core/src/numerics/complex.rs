use std::fmt;

use num::rational::BigRational;

use super::real::ArbReal;
use super::scalar::CRat;

/// Arbitrary-precision complex number in rectangular form.
///
/// The precision of a value is the smaller of its component precisions;
/// operations follow the same narrowing rule as [`ArbReal`].
#[derive(Debug, Clone)]
pub struct ArbComplex {
    pub re: ArbReal,
    pub im: ArbReal,
}

impl ArbComplex {
    pub fn new(re: ArbReal, im: ArbReal) -> Self {
        ArbComplex { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        Self::new(ArbReal::zero(bits), ArbReal::zero(bits))
    }

    pub fn one(bits: usize) -> Self {
        Self::new(ArbReal::one(bits), ArbReal::zero(bits))
    }

    pub fn from_real(re: ArbReal) -> Self {
        let bits = re.precision();
        Self::new(re, ArbReal::zero(bits))
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self::new(ArbReal::from_i64(v, bits), ArbReal::zero(bits))
    }

    pub fn from_f64s(re: f64, im: f64, bits: usize) -> Self {
        Self::new(ArbReal::from_f64(re, bits), ArbReal::from_f64(im, bits))
    }

    pub fn from_rational_pair(re: &BigRational, im: &BigRational, bits: usize) -> Self {
        Self::new(ArbReal::from_rational(re, bits), ArbReal::from_rational(im, bits))
    }

    pub fn from_complex_rational(q: &CRat, bits: usize) -> Self {
        Self::from_rational_pair(&q.re, &q.im, bits)
    }

    pub fn precision(&self) -> usize {
        self.re.precision().min(self.im.precision())
    }

    /// Re-tag both components at `bits` working precision. Values are kept
    /// (rounded when narrowing); accuracy does not improve when widening.
    pub fn with_bits(&self, bits: usize) -> Self {
        Self::new(self.re.with_bits(bits), self.im.with_bits(bits))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(self.re.add(&rhs.re), self.im.add(&rhs.im))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new(self.re.sub(&rhs.re), self.im.sub(&rhs.im))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        Self::new(re, im)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let den = rhs.re.mul(&rhs.re).add(&rhs.im.mul(&rhs.im));
        let re = self.re.mul(&rhs.re).add(&self.im.mul(&rhs.im)).div(&den);
        let im = self.im.mul(&rhs.re).sub(&self.re.mul(&rhs.im)).div(&den);
        Self::new(re, im)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn scale(&self, k: &ArbReal) -> Self {
        Self::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn abs(&self) -> ArbReal {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).sqrt()
    }

    /// Principal argument in (-pi, pi]; negative reals get +pi.
    pub fn arg(&self) -> ArbReal {
        ArbReal::atan2(&self.im, &self.re)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Self::new(r.mul(&self.im.cos()), r.mul(&self.im.sin()))
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.precision());
        }
        if self.im.is_zero() && !self.re.is_negative() {
            return Self::from_real(self.re.sqrt());
        }
        let half = ArbReal::from_rational(
            &BigRational::new(1.into(), 2.into()),
            self.precision(),
        );
        self.ln().scale(&half).exp()
    }

    /// Principal power z^w = exp(w log z); zero base maps to zero.
    pub fn pow(&self, w: &Self) -> Self {
        if self.is_zero() {
            return Self::zero(self.precision().min(w.precision()));
        }
        if w.is_zero() {
            return Self::one(self.precision().min(w.precision()));
        }
        w.mul(&self.ln()).exp()
    }

    /// log10 of the modulus as f64, safe far outside f64 range.
    pub fn log10_abs(&self) -> f64 {
        let lr = self.re.log10_abs();
        let li = self.im.log10_abs();
        let (hi, lo) = if lr >= li { (lr, li) } else { (li, lr) };
        if hi == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let d = lo - hi;
        if d < -30.0 {
            hi
        } else {
            hi + 0.5 * (1.0 + 10f64.powf(2.0 * d)).log10()
        }
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_c64(&self) -> num::complex::Complex<f64> {
        num::complex::Complex::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ArbComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re.to_decimal(17), self.im.to_decimal(17))
    }
}
