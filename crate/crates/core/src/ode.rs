//! Second-order ODEs `p(z) psi'' + q(z) psi' + r(z) psi = 0` with polynomial
//! coefficients: classification of the origin, exact indicial roots, index
//! shifts that keep irrational roots symbolic, and recentering for analytic
//! continuation.

use std::fmt;

use num::complex::Complex64;
use num::{Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
// note: `Scalar` is deliberately referenced by full path, never imported;
// in scope it would make `.is_zero()` on exact complex rationals ambiguous
// with the standard `num::Zero` method used throughout this module.
use crate::numerics::{parse_number, CRat, Rat};
use crate::roots::polynomial_roots;

fn czero() -> CRat {
    CRat::new(Rat::zero(), Rat::zero())
}

fn c_from(r: Rat) -> CRat {
    CRat::new(r, Rat::zero())
}

fn c_i64(v: i64) -> CRat {
    c_from(Rat::from_integer(v.into()))
}

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn crat_c64(z: &CRat) -> Complex64 {
    Complex64::new(rat_f64(&z.re), rat_f64(&z.im))
}

fn fmt_crat(z: &CRat) -> String {
    if z.im.is_zero() {
        return z.re.to_string();
    }
    if z.re.is_zero() {
        return format!("{}i", z.im);
    }
    if z.im.is_negative() {
        format!("{}-{}i", z.re, -z.im.clone())
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Dense polynomial over exact complex rationals, lowest order first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    c: Vec<CRat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<CRat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { c: coeffs }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn from_rationals(coeffs: &[Rat]) -> Self {
        Self::new(coeffs.iter().map(|r| c_from(r.clone())).collect())
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&v| c_i64(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> CRat {
        self.c.get(k).cloned().unwrap_or_else(czero)
    }

    pub fn coeffs(&self) -> &[CRat] {
        &self.c
    }

    /// Divide by z^n; requires the lowest n coefficients to vanish.
    fn div_z(&self, n: usize) -> Self {
        debug_assert!(self.c.iter().take(n).all(|c| c.is_zero()));
        Poly {
            c: self.c.iter().skip(n).cloned().collect(),
        }
    }

    /// Multiply by z^n.
    fn mul_z(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![czero(); n];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn scale(&self, k: &CRat) -> Self {
        Self::new(self.c.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, z: &CRat) -> CRat {
        let mut acc = czero();
        for c in self.c.iter().rev() {
            acc = &acc * z + c;
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.c.iter().rev() {
            acc = acc * z + crat_c64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * c_i64(k as i64))
                .collect(),
        )
    }

    /// Exact shift of the expansion point: returns s(z) = self(z + w).
    pub fn recenter(&self, w: &CRat) -> Self {
        // Horner in (z + w): acc <- acc * (z + w) + c_k from the top down
        let mut acc: Vec<CRat> = Vec::new();
        for ck in self.c.iter().rev() {
            let mut next = vec![czero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = &next[i + 1] + a;
                next[i] = &next[i] + &(a * w);
            }
            if next.is_empty() {
                next.push(czero());
            }
            next[0] = &next[0] + ck;
            acc = next;
        }
        Poly::new(acc)
    }

    fn c64_coeffs(&self) -> Vec<Complex64> {
        self.c.iter().map(crat_c64).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let cs = fmt_crat(c);
            match k {
                0 => write!(f, "({cs})")?,
                1 => write!(f, "({cs})z")?,
                _ => write!(f, "({cs})z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Nature of the expansion point z = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OriginKind {
    /// p(0) != 0 after removing common z factors: plain power series.
    Ordinary,
    /// p has a simple zero: one-parameter singular family.
    RegularSingularA,
    /// p has a double zero with q(0) = 0 and r(0) != 0.
    RegularSingularB,
    /// Anything worse; series construction is not supported.
    Irregular,
}

impl OriginKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OriginKind::Ordinary => "ordinary",
            OriginKind::RegularSingularA => "regular_singular_a",
            OriginKind::RegularSingularB => "regular_singular_b",
            OriginKind::Irregular => "irregular",
        }
    }
}

impl fmt::Display for OriginKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact indicial root `a + b*sqrt(d)`; `b != 0` and `d` is not a perfect
/// square (it may be negative, giving a conjugate pair).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: CRat,
    pub b: CRat,
    pub d: Rat,
}

/// An indicial root, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Rational(CRat),
    Surd(QuadraticSurd),
}

impl Root {
    pub fn rational(r: Rat) -> Self {
        Root::Rational(c_from(r))
    }

    pub fn integer(v: i64) -> Self {
        Root::Rational(c_i64(v))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Root::Rational(c) if c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&CRat> {
        match self {
            Root::Rational(c) => Some(c),
            Root::Surd(_) => None,
        }
    }

    /// The root in any scalar type; `None` when the type cannot represent an
    /// irrational root exactly.
    pub fn to_scalar<S: crate::numerics::Scalar>(&self, ctx: S::Ctx) -> Option<S> {
        match self {
            Root::Rational(c) => Some(S::from_crat(c, ctx)),
            Root::Surd(s) => {
                let sd = S::sqrt_rat(&s.d, ctx)?;
                Some(S::from_crat(&s.a, ctx).add(&S::from_crat(&s.b, ctx).mul(&sd)))
            }
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Root::Rational(c) => crat_c64(c),
            Root::Surd(s) => {
                let d = rat_f64(&s.d);
                let sq = Complex64::new(d, 0.0).sqrt();
                crat_c64(&s.a) + crat_c64(&s.b) * sq
            }
        }
    }

    pub fn re_f64(&self) -> f64 {
        self.to_c64().re
    }

    /// This root minus an integer (stays exact).
    pub fn sub_integer(&self, n: i64) -> Root {
        match self {
            Root::Rational(c) => Root::Rational(c - c_i64(n)),
            Root::Surd(s) => Root::Surd(QuadraticSurd {
                a: &s.a - c_i64(n),
                b: s.b.clone(),
                d: s.d.clone(),
            }),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Rational(c) => f.write_str(&fmt_crat(c)),
            Root::Surd(s) => {
                if s.a.is_zero() {
                    write!(f, "({})*sqrt({})", fmt_crat(&s.b), s.d)
                } else {
                    write!(f, "{} + ({})*sqrt({})", fmt_crat(&s.a), fmt_crat(&s.b), s.d)
                }
            }
        }
    }
}

/// Relation between the two indicial roots; decides which series shapes exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicialKind {
    /// Roots do not differ by an integer: two plain series.
    NonIntegerDiff,
    /// Double root: second solution carries a logarithm.
    Degenerate,
    /// Roots differ by the positive integer `ell`: the smaller-root solution
    /// may carry a logarithm.
    IntegerDiff(u32),
}

impl IndicialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IndicialKind::NonIntegerDiff => "non_integer_difference",
            IndicialKind::Degenerate => "degenerate",
            IndicialKind::IntegerDiff(_) => "integer_difference",
        }
    }
}

/// Both indicial roots, ordered so that `nu1` has the larger real part
/// (for conjugate pairs, the positive imaginary branch).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicialRoots {
    pub nu1: Root,
    pub nu2: Root,
    pub kind: IndicialKind,
}

/// The ODE `p psi'' + q psi' + r psi = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ODEProblem {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
}

impl ODEProblem {
    pub fn new(p: Poly, q: Poly, r: Poly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::InvalidInput(
                "leading coefficient p(z) must not vanish identically".into(),
            ));
        }
        // keeps kernel windows and root finding on the singularities sane
        const MAX_DEGREE: usize = 64;
        for (poly, name) in [(&p, "p"), (&q, "q"), (&r, "r")] {
            if poly.degree().map_or(false, |d| d > MAX_DEGREE) {
                return Err(Error::InvalidInput(format!(
                    "degree of {name}(z) exceeds the supported bound {MAX_DEGREE}"
                )));
            }
        }
        Ok(ODEProblem { p, q, r })
    }

    /// Remove common factors of z from (p, q, r); the solutions are
    /// unchanged. Returns the reduced problem and the number of factors.
    pub fn normalize(&self) -> (ODEProblem, usize) {
        let mut n = 0;
        let zero_at = |poly: &Poly, k: usize| poly.coeff(k).is_zero();
        while zero_at(&self.p, n) && zero_at(&self.q, n) && zero_at(&self.r, n) {
            n += 1;
            // p is not identically zero, so this terminates
            if self.p.degree().map_or(true, |d| n > d) {
                break;
            }
        }
        if n == 0 {
            (self.clone(), 0)
        } else {
            (
                ODEProblem {
                    p: self.p.div_z(n),
                    q: self.q.div_z(n),
                    r: self.r.div_z(n),
                },
                n,
            )
        }
    }

    fn classify_normalized(&self) -> OriginKind {
        let p0 = self.p.coeff(0);
        if !p0.is_zero() {
            return OriginKind::Ordinary;
        }
        let p1 = self.p.coeff(1);
        if !p1.is_zero() {
            return OriginKind::RegularSingularA;
        }
        let p2 = self.p.coeff(2);
        if !p2.is_zero() && self.q.coeff(0).is_zero() && !self.r.coeff(0).is_zero() {
            return OriginKind::RegularSingularB;
        }
        OriginKind::Irregular
    }

    /// Classification of z = 0 (after normalization).
    pub fn classify(&self) -> OriginKind {
        self.normalize().0.classify_normalized()
    }

    /// The problem multiplied by z, bringing a simple-zero (case A) problem
    /// into the same double-zero shape as case B. The solutions and indicial
    /// structure are untouched; only the bookkeeping becomes uniform.
    pub fn double_zero_form(&self) -> Result<ODEProblem> {
        let (n, _) = self.normalize();
        match n.classify_normalized() {
            OriginKind::RegularSingularA => Ok(ODEProblem {
                p: n.p.mul_z(1),
                q: n.q.mul_z(1),
                r: n.r.mul_z(1),
            }),
            OriginKind::RegularSingularB => Ok(n),
            other => Err(Error::WrongClassification {
                required: "a regular singular point".into(),
                found: other.to_string(),
            }),
        }
    }

    /// Exact indicial roots at z = 0.
    pub fn indicial_roots(&self) -> Result<IndicialRoots> {
        let (n, _) = self.normalize();
        match n.classify_normalized() {
            OriginKind::Ordinary => Ok(IndicialRoots {
                nu1: Root::integer(1),
                nu2: Root::integer(0),
                kind: IndicialKind::IntegerDiff(1),
            }),
            OriginKind::Irregular => Err(Error::IrregularSingularPoint),
            _ => {
                let b = n.double_zero_form()?;
                indicial_of_double_zero(&b)
            }
        }
    }

    /// Number of earlier coefficients each recursion step can reach back to.
    pub fn history_window(&self) -> usize {
        history_window_from_degrees(self.p.degree(), self.q.degree(), self.r.degree())
    }

    /// Shift the index by an indicial root `nu`: with psi = z^nu phi, returns
    /// the (still polynomial-coefficient) problem satisfied by phi. Requires
    /// the double-zero shape from [`Self::double_zero_form`].
    pub fn shift_index(&self, nu: &Root) -> Result<ShiftedProblem> {
        if !self.p.coeff(0).is_zero()
            || !self.p.coeff(1).is_zero()
            || !self.q.coeff(0).is_zero()
            || self.p.coeff(2).is_zero()
        {
            return Err(Error::InvalidShift {
                nu: nu.to_string(),
                reason: "problem is not in double-zero singular shape".into(),
            });
        }
        let d = match nu {
            Root::Rational(_) => Rat::zero(),
            Root::Surd(s) => s.d.clone(),
        };
        let nu_se = match nu {
            Root::Rational(c) => SurdElem {
                e: c.clone(),
                f: czero(),
            },
            Root::Surd(s) => SurdElem {
                e: s.a.clone(),
                f: s.b.clone(),
            },
        };
        let one = SurdElem {
            e: c_i64(1),
            f: czero(),
        };
        let nu_nu_m1 = nu_se.mul(&nu_se.sub(&one), &d);
        // the equation divides cleanly by z^(nu+1) only when nu is a root of
        // nu(nu-1) p2 + nu q1 + r0
        let indicial = nu_nu_m1
            .scale(&self.p.coeff(2))
            .add(&nu_se.scale(&self.q.coeff(1)))
            .add(&SurdElem {
                e: self.r.coeff(0),
                f: czero(),
            });
        if !indicial.is_zero() {
            return Err(Error::InvalidShift {
                nu: nu.to_string(),
                reason: "not an indicial root of the problem".into(),
            });
        }

        let plen = self.p.coeffs().len();
        let qlen = self.q.coeffs().len();
        let rlen = self.r.coeffs().len();
        let p_out = plen.saturating_sub(1);
        let q_out = qlen.saturating_sub(1).max(plen.saturating_sub(2));
        let r_out = rlen
            .saturating_sub(1)
            .max(qlen.saturating_sub(2))
            .max(plen.saturating_sub(3));

        let lift = |c: CRat| SurdElem { e: c, f: czero() };
        let p_new: Vec<SurdElem> = (0..p_out).map(|k| lift(self.p.coeff(k + 1))).collect();
        let q_new: Vec<SurdElem> = (0..q_out)
            .map(|k| {
                lift(self.q.coeff(k + 1))
                    .add(&nu_se.scale(&self.p.coeff(k + 2)).scale(&c_i64(2)))
            })
            .collect();
        let r_new: Vec<SurdElem> = (0..r_out)
            .map(|k| {
                lift(self.r.coeff(k + 1))
                    .add(&nu_se.scale(&self.q.coeff(k + 2)))
                    .add(&nu_nu_m1.scale(&self.p.coeff(k + 3)))
            })
            .collect();

        Ok(ShiftedProblem {
            nu: nu.clone(),
            d,
            p: trim_se(p_new),
            q: trim_se(q_new),
            r: trim_se(r_new),
        })
    }

    /// New problem with the expansion point moved to w: coefficients of the
    /// equation in u = z - w, exactly.
    pub fn recenter(&self, w: &CRat) -> ODEProblem {
        ODEProblem {
            p: self.p.recenter(w),
            q: self.q.recenter(w),
            r: self.r.recenter(w),
        }
    }

    /// Approximate locations of the finite singular points (zeros of p).
    pub fn singularities(&self) -> Vec<Complex64> {
        polynomial_roots(&self.p.c64_coeffs())
    }

    /// Distance from `center` to the nearest other singular point
    /// (the local radius of convergence); infinite if none.
    pub fn radius_at(&self, center: Complex64) -> f64 {
        let scale = 1.0_f64.max(center.norm());
        self.singularities()
            .into_iter()
            .map(|s| (s - center).norm())
            .filter(|d| *d > 1e-9 * scale)
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for ODEProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] psi'' + [{}] psi' + [{}] psi = 0",
            self.p, self.q, self.r
        )
    }
}

pub(crate) fn history_window_from_degrees(
    dp: Option<usize>,
    dq: Option<usize>,
    dr: Option<usize>,
) -> usize {
    let mut w = 1;
    if let Some(d) = dp {
        w = w.max(d);
    }
    if let Some(d) = dq {
        w = w.max(d + 1);
    }
    if let Some(d) = dr {
        w = w.max(d + 2);
    }
    w
}

/// Indicial roots of a double-zero-shape problem:
/// roots of nu(nu-1) p2 + nu q1 + r0.
fn indicial_of_double_zero(b: &ODEProblem) -> Result<IndicialRoots> {
    let p2 = b.p.coeff(2);
    let q1 = b.q.coeff(1);
    let r0 = b.r.coeff(0);
    // monic: nu^2 + beta nu + gamma
    let beta = &(&q1 - &p2) / &p2;
    let gamma = &r0 / &p2;
    let half = c_from(Rat::new(1.into(), 2.into()));
    let mid = -(&beta * &half);
    let delta = &(&mid * &mid) - &gamma;
    if !delta.im.is_zero() {
        return Err(Error::IndicialNotReal);
    }
    let disc = delta.re.clone();
    match <CRat as crate::numerics::Scalar>::sqrt_rat(&disc, ()) {
        Some(s) => {
            let nu1 = &mid + &s;
            let nu2 = &mid - &s;
            let diff = &s + &s; // nu1 - nu2
            let kind = if diff.is_zero() {
                IndicialKind::Degenerate
            } else if diff.im.is_zero() && diff.re.is_integer() {
                let ell = diff
                    .re
                    .to_integer()
                    .to_u32()
                    .ok_or_else(|| Error::InvalidInput("indicial roots too far apart".into()))?;
                IndicialKind::IntegerDiff(ell)
            } else {
                IndicialKind::NonIntegerDiff
            };
            Ok(IndicialRoots {
                nu1: Root::Rational(nu1),
                nu2: Root::Rational(nu2),
                kind,
            })
        }
        None => {
            let one = c_i64(1);
            Ok(IndicialRoots {
                nu1: Root::Surd(QuadraticSurd {
                    a: mid.clone(),
                    b: one.clone(),
                    d: disc.clone(),
                }),
                nu2: Root::Surd(QuadraticSurd {
                    a: mid,
                    b: -one,
                    d: disc,
                }),
                kind: IndicialKind::NonIntegerDiff,
            })
        }
    }
}

/// Element e + f*sqrt(d) of the quadratic extension holding shifted
/// coefficients when the indicial root is irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SurdElem {
    e: CRat,
    f: CRat,
}

impl SurdElem {
    fn is_zero(&self) -> bool {
        self.e.is_zero() && self.f.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        SurdElem {
            e: &self.e + &o.e,
            f: &self.f + &o.f,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        SurdElem {
            e: &self.e - &o.e,
            f: &self.f - &o.f,
        }
    }

    fn mul(&self, o: &Self, d: &Rat) -> Self {
        let dd = c_from(d.clone());
        SurdElem {
            e: &(&self.e * &o.e) + &(&(&self.f * &o.f) * &dd),
            f: &(&self.e * &o.f) + &(&self.f * &o.e),
        }
    }

    fn scale(&self, k: &CRat) -> Self {
        SurdElem {
            e: &self.e * k,
            f: &self.f * k,
        }
    }
}

fn trim_se(mut v: Vec<SurdElem>) -> Vec<SurdElem> {
    while v.last().map_or(false, |s| s.is_zero()) {
        v.pop();
    }
    v
}

/// A problem transformed by psi = z^nu phi, with the root kept symbolic so it
/// can be realized exactly (rational roots) or at any float precision
/// (irrational roots) without committing early.
#[derive(Clone, Debug)]
pub struct ShiftedProblem {
    pub nu: Root,
    d: Rat,
    p: Vec<SurdElem>,
    q: Vec<SurdElem>,
    r: Vec<SurdElem>,
}

/// Coefficients and shift realized in a concrete scalar type.
#[derive(Clone, Debug)]
pub struct MaterializedODE<S> {
    pub p: Vec<S>,
    pub q: Vec<S>,
    pub r: Vec<S>,
    pub nu: S,
}

impl ShiftedProblem {
    pub fn materialize<S: crate::numerics::Scalar>(&self, ctx: S::Ctx) -> Result<MaterializedODE<S>> {
        let sd = S::sqrt_rat(&self.d, ctx).ok_or_else(|| {
            Error::InvalidInput(
                "irrational index shift cannot be represented in an exact scalar".into(),
            )
        })?;
        let conv = |v: &[SurdElem]| -> Vec<S> {
            v.iter()
                .map(|se| S::from_crat(&se.e, ctx).add(&S::from_crat(&se.f, ctx).mul(&sd)))
                .collect()
        };
        let nu = self.nu.to_scalar::<S>(ctx).ok_or_else(|| {
            Error::InvalidInput(
                "irrational index shift cannot be represented in an exact scalar".into(),
            )
        })?;
        Ok(MaterializedODE {
            p: conv(&self.p),
            q: conv(&self.q),
            r: conv(&self.r),
            nu,
        })
    }

    pub fn history_window(&self) -> usize {
        history_window_from_degrees(
            self.p.len().checked_sub(1),
            self.q.len().checked_sub(1),
            self.r.len().checked_sub(1),
        )
    }

    /// The shifted problem as a plain rational-coefficient problem, only
    /// possible for rational roots. Used by diagnostics and tests.
    pub fn to_problem(&self) -> Option<ODEProblem> {
        if !self.d.is_zero() && (self.p.iter().chain(&self.q).chain(&self.r))
            .any(|se| !se.f.is_zero())
        {
            return None;
        }
        let conv = |v: &[SurdElem]| Poly::new(v.iter().map(|se| se.e.clone()).collect());
        Some(ODEProblem {
            p: conv(&self.p),
            q: conv(&self.q),
            r: conv(&self.r),
        })
    }
}

/// Problem given through its normal-form data: indicial roots nu_plus and
/// nu_minus at the origin plus the polynomial potential in the squared
/// variable, with anisotropy scale s.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalProblem {
    pub nu_plus: Rat,
    pub nu_minus: Rat,
    /// v[n] multiplies z^(n+1) in the potential part of r, so v[0] carries
    /// the 1/z term of the potential in the normalized equation.
    pub v: Vec<Rat>,
    pub s: Rat,
}

impl CanonicalProblem {
    /// Single-well quartic oscillator: potential (z^2 + c^2)^2, carried in
    /// the normal form with indices {1, 0}.
    pub fn anharmonic(c2: &Rat) -> Self {
        CanonicalProblem {
            nu_plus: Rat::from_integer(1.into()),
            nu_minus: Rat::zero(),
            v: vec![
                Rat::zero(),
                c2 * c2,
                Rat::zero(),
                c2 + c2,
                Rat::zero(),
                Rat::from_integer(1.into()),
            ],
            s: Rat::from_integer(1.into()),
        }
    }

    /// Symmetric double well: potential (z^2 - c^2)^2.
    pub fn double_well(c2: &Rat) -> Self {
        let mut base = Self::anharmonic(c2);
        base.v[3] = -(c2 + c2);
        base
    }

    /// The explicit ODE: p = z^2, q = (1 - nu_plus - nu_minus) z,
    /// r = nu_plus*nu_minus - sum_n v_n z^(n+1).
    pub fn to_ode(&self) -> ODEProblem {
        let p = Poly::from_integers(&[0, 0, 1]);
        let one = Rat::from_integer(1.into());
        let q = Poly::from_rationals(&[Rat::zero(), &(&one - &self.nu_plus) - &self.nu_minus]);
        let mut rc = vec![Rat::zero(); self.v.len() + 1];
        rc[0] = &self.nu_plus * &self.nu_minus;
        for (i, vn) in self.v.iter().enumerate() {
            rc[i + 1] = -vn.clone();
        }
        let r = Poly::from_rationals(&rc);
        ODEProblem::new(p, q, r).expect("p = z^2 is nonzero")
    }
}

/// A problem as loaded from a JSON file: always the explicit ODE, plus the
/// normal-form data when the file provided it.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub ode: ODEProblem,
    pub canonical: Option<CanonicalProblem>,
}

#[derive(Deserialize)]
struct RawCanonical {
    nu_plus: String,
    nu_minus: String,
    v: Vec<String>,
    #[serde(default)]
    s: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawProblem {
    Canonical { canonical: RawCanonical },
    Direct {
        p: Vec<String>,
        q: Vec<String>,
        r: Vec<String>,
    },
}

/// Parse a problem file. Two layouts are accepted:
/// `{"p": [...], "q": [...], "r": [...]}` with rational/decimal coefficient
/// strings (lowest order first), or `{"canonical": {"nu_plus": ..,
/// "nu_minus": .., "v": [...], "s": ..}}`.
pub fn parse_problem(json: &str) -> Result<LoadedProblem> {
    let raw: RawProblem = serde_json::from_str(json).map_err(|e| Error::Parse {
        what: "problem file".into(),
        detail: e.to_string(),
    })?;
    match raw {
        RawProblem::Direct { p, q, r } => {
            let conv = |v: &[String]| -> Result<Poly> {
                let mut c = Vec::with_capacity(v.len());
                for s in v {
                    c.push(c_from(parse_number(s)?));
                }
                Ok(Poly::new(c))
            };
            Ok(LoadedProblem {
                ode: ODEProblem::new(conv(&p)?, conv(&q)?, conv(&r)?)?,
                canonical: None,
            })
        }
        RawProblem::Canonical { canonical } => {
            let mut v = Vec::with_capacity(canonical.v.len());
            for s in &canonical.v {
                v.push(parse_number(s)?);
            }
            let c = CanonicalProblem {
                nu_plus: parse_number(&canonical.nu_plus)?,
                nu_minus: parse_number(&canonical.nu_minus)?,
                v,
                s: match &canonical.s {
                    Some(s) => parse_number(s)?,
                    None => Rat::from_integer(1.into()),
                },
            };
            Ok(LoadedProblem {
                ode: c.to_ode(),
                canonical: Some(c),
            })
        }
    }
}
