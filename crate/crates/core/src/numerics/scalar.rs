use num::bigint::BigUint;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

use super::complex::ArbComplex;

/// Exact rational scalar.
pub type Rat = BigRational;
/// Exact complex-rational scalar.
pub type CRat = num::complex::Complex<BigRational>;

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        (n.to_u64().expect("fits in u64") as f64).log2()
    } else {
        let shift = (bits - 64) as usize;
        let top = (n >> shift).to_u64().expect("top word fits");
        (top as f64).log2() + shift as f64
    }
}

/// log10 of |q| as f64, exact rationals of any size. -inf for zero.
pub fn rat_log10_abs(q: &Rat) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    (log2_biguint(q.numer().magnitude()) - log2_biguint(q.denom().magnitude()))
        * std::f64::consts::LOG10_2
}

fn combine_component_logs(lr: f64, li: f64) -> f64 {
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

/// log10 of the modulus of an exact complex rational.
pub fn complex_rat_log10_abs(z: &CRat) -> f64 {
    combine_component_logs(rat_log10_abs(&z.re), rat_log10_abs(&z.im))
}

/// Exact square root of a nonnegative rational if both numerator and
/// denominator are perfect squares.
fn exact_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rat::new(sn.into(), sd.into()))
    } else {
        None
    }
}

/// Number type a coefficient recursion can run over.
///
/// The same recursion code drives both the exact complex-rational scalar
/// (used by tests and by exact residual checks) and the arbitrary-precision
/// float scalar (used for actual evaluation). `Ctx` carries whatever the
/// type needs to construct values: nothing for exact rationals, the working
/// precision in bits for floats.
pub trait Scalar: Clone + std::fmt::Debug {
    type Ctx: Copy;

    fn from_rat(q: &Rat, ctx: Self::Ctx) -> Self;
    fn from_crat(q: &CRat, ctx: Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    /// sqrt of a rational, `None` when the type cannot represent it.
    fn sqrt_rat(q: &Rat, ctx: Self::Ctx) -> Option<Self>;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn log10_abs(&self) -> f64;
}

impl Scalar for CRat {
    type Ctx = ();

    fn from_rat(q: &Rat, _: ()) -> Self {
        CRat::new(q.clone(), Rat::zero())
    }

    fn from_crat(q: &CRat, _: ()) -> Self {
        q.clone()
    }

    fn from_i64(v: i64, _: ()) -> Self {
        CRat::new(Rat::from_integer(v.into()), Rat::zero())
    }

    fn sqrt_rat(q: &Rat, _: ()) -> Option<Self> {
        if q.is_negative() {
            exact_sqrt(&-q.clone()).map(|s| CRat::new(Rat::zero(), s))
        } else {
            exact_sqrt(q).map(|s| CRat::new(s, Rat::zero()))
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn log10_abs(&self) -> f64 {
        complex_rat_log10_abs(self)
    }
}

impl Scalar for ArbComplex {
    type Ctx = usize;

    fn from_rat(q: &Rat, bits: usize) -> Self {
        ArbComplex::from_rational_pair(q, &Rat::zero(), bits)
    }

    fn from_crat(q: &CRat, bits: usize) -> Self {
        ArbComplex::from_complex_rational(q, bits)
    }

    fn from_i64(v: i64, bits: usize) -> Self {
        ArbComplex::from_i64(v, bits)
    }

    fn sqrt_rat(q: &Rat, bits: usize) -> Option<Self> {
        let x = super::real::ArbReal::from_rational(&q.abs(), bits).sqrt();
        Some(if q.is_negative() {
            ArbComplex::new(super::real::ArbReal::zero(bits), x)
        } else {
            ArbComplex::from_real(x)
        })
    }

    fn add(&self, rhs: &Self) -> Self {
        ArbComplex::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        ArbComplex::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        ArbComplex::mul(self, rhs)
    }

    fn div(&self, rhs: &Self) -> Self {
        ArbComplex::div(self, rhs)
    }

    fn neg(&self) -> Self {
        ArbComplex::neg(self)
    }

    fn is_zero(&self) -> bool {
        ArbComplex::is_zero(self)
    }

    fn log10_abs(&self) -> f64 {
        ArbComplex::log10_abs(self)
    }
}
