use super::stream::CoeffStream;
use super::{Form, SeriesSolution};
use crate::error::{Error, Result};
use crate::numerics::{plan_precision, ArbComplex, CRat, PrecisionPlan};
use crate::ode::{ODEProblem, Root};
use num::complex::Complex64;
use num::ToPrimitive;

const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// How to evaluate a series solution at a point.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Requested correct decimal digits of the result.
    pub target_digits: u32,
    /// Hard cap on the number of series terms before giving up.
    pub max_terms: usize,
    /// Known bound on log10 of the largest term of the sum. Skips the
    /// low-precision sizing pass when supplied (an estimator can provide it).
    pub magnitude_hint: Option<f64>,
    /// Also assemble the second derivative.
    pub second_derivative: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            target_digits: 50,
            max_terms: 10_000_000,
            magnitude_hint: None,
            second_derivative: false,
        }
    }
}

impl EvalOptions {
    pub fn with_digits(target_digits: u32) -> Self {
        EvalOptions { target_digits, ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: ArbComplex,
    pub derivative: ArbComplex,
    pub second_derivative: Option<ArbComplex>,
    /// Series terms consumed by the final pass.
    pub terms_used: usize,
    /// log10 of the largest term that entered the sum.
    pub max_term_log10: f64,
    /// Working-precision decision the final pass ran under.
    pub plan: PrecisionPlan,
    /// Estimated correct decimal digits of `value` (relative), from the
    /// truncation tail and the rounding floor. An estimate, not a proof.
    pub achieved_digits: f64,
}

pub(crate) fn crat_to_c64(z: &CRat) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::INFINITY), z.im.to_f64().unwrap_or(f64::INFINITY))
}

fn log10_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

struct PassOutput {
    s0: ArbComplex,
    s1: ArbComplex,
    t0: ArbComplex,
    t1: ArbComplex,
    v0: ArbComplex,
    v1: ArbComplex,
    w1: ArbComplex,
    terms_used: usize,
    max_term_log10: f64,
    last_term_log10: f64,
}

/// Truncation policy for a series pass.
#[derive(Clone, Copy)]
enum StopRule {
    /// Terms below 10^-digits, sustained over the history window.
    Target(f64),
    /// Terms a fixed number of decades under the running peak, sustained.
    /// The sizing pass uses this: its low working precision cannot resolve
    /// the final target (recursion noise decays like the slowest second
    /// solution, not like the wanted one), and once the peak is bracketed
    /// its job is done.
    BelowPeak(f64),
}

/// One pass over the coefficient stream at fixed working precision,
/// accumulating the sums that assemble the value and its derivatives:
///   s_i = sum a_i z^m        t_i = sum (m+nu) a_i z^m
///   v_i = sum (m+nu)(m+nu-1) a_i z^m   w1 = sum (2(m+nu)-1) a_1 z^m
/// where a term is weighted by |z|^(m+Re nu) and the log factor.
#[allow(clippy::too_many_arguments)]
fn series_pass(
    mut stream: CoeffStream<ArbComplex>,
    z: &ArbComplex,
    ln_z: &ArbComplex,
    nu: &ArbComplex,
    re_nu: f64,
    window: usize,
    stop: StopRule,
    cap: usize,
    second: bool,
    bits: usize,
) -> Result<PassOutput> {
    let zero = || ArbComplex::zero(bits);
    let one = ArbComplex::one(bits);
    let mut out = PassOutput {
        s0: zero(),
        s1: zero(),
        t0: zero(),
        t1: zero(),
        v0: zero(),
        v1: zero(),
        w1: zero(),
        terms_used: 0,
        max_term_log10: f64::NEG_INFINITY,
        last_term_log10: f64::NEG_INFINITY,
    };
    let lz10 = z.log10_abs();
    let llog10 = ln_z.log10_abs();
    let window = window.max(1);
    let mut zp = ArbComplex::one(bits);
    let mut run = 0usize;
    let mut m = 0usize;
    loop {
        if m >= cap {
            return Err(Error::Divergence { cap });
        }
        let Some(item) = stream.next() else {
            return Err(Error::RecursionBreakdown { m });
        };
        let (a0, a1) = item?;
        let la0 = a0.log10_abs();
        let a1_zero = a1.is_zero();
        let la1 = if a1_zero { f64::NEG_INFINITY } else { a1.log10_abs() + llog10 };
        let term = log10_add(la0, la1) + (m as f64 + re_nu) * lz10;
        if term > out.max_term_log10 {
            out.max_term_log10 = term;
        }
        out.last_term_log10 = term;

        let mu = ArbComplex::from_i64(m as i64, bits).add(nu);
        if !a0.is_zero() {
            let p0 = a0.mul(&zp);
            out.s0 = out.s0.add(&p0);
            out.t0 = out.t0.add(&mu.mul(&p0));
            if second {
                out.v0 = out.v0.add(&mu.mul(&mu.sub(&one)).mul(&p0));
            }
        }
        if !a1_zero {
            let p1 = a1.mul(&zp);
            out.s1 = out.s1.add(&p1);
            out.t1 = out.t1.add(&mu.mul(&p1));
            if second {
                out.v1 = out.v1.add(&mu.mul(&mu.sub(&one)).mul(&p1));
                out.w1 = out.w1.add(&mu.add(&mu).sub(&one).mul(&p1));
            }
        }

        m += 1;
        let settled = match stop {
            StopRule::Target(digits) => term <= -digits,
            StopRule::BelowPeak(drop) => term <= out.max_term_log10 - drop,
        };
        if settled {
            run += 1;
            if run >= window {
                out.terms_used = m;
                return Ok(out);
            }
        } else {
            run = 0;
        }
        zp = zp.mul(z);
    }
}

/// Shared evaluation driver: size the working precision with a cheap
/// low-precision pass (or a caller-provided magnitude hint), then run the
/// full pass and assemble value and derivatives.
pub(crate) fn core_evaluate<F>(
    problem: &ODEProblem,
    nu_root: &Root,
    window: usize,
    z: &CRat,
    opts: &EvalOptions,
    strict_disc: bool,
    make_stream: F,
) -> Result<EvalResult>
where
    F: Fn(usize) -> Result<CoeffStream<ArbComplex>>,
{
    let zc = crat_to_c64(z);
    let abs_z = zc.norm();
    let radius = problem.radius_at(Complex64::new(0.0, 0.0));
    // direct evaluation demands strict interiority; a continuation step may
    // sit on the disc boundary, where the divergence cap is the judge
    let outside = if strict_disc { !(abs_z < radius) } else { abs_z > radius };
    if outside {
        return Err(Error::OutsideConvergenceDisc { abs_z, radius });
    }
    let re_nu = nu_root.re_f64();
    let p_digits = opts.target_digits as f64;

    let mtl = match opts.magnitude_hint {
        Some(h) => h,
        None => {
            let stream = make_stream(64)?;
            let z64 = ArbComplex::from_complex_rational(z, 64);
            let ln64 = z64.ln();
            let nu64 = scalar_nu(nu_root, 64)?;
            let dry = series_pass(
                stream,
                &z64,
                &ln64,
                &nu64,
                re_nu,
                window,
                StopRule::BelowPeak(12.0),
                opts.max_terms,
                false,
                64,
            )?;
            dry.max_term_log10
        }
    };
    let plan = plan_precision(opts.target_digits, if mtl.is_finite() { mtl.max(0.0) } else { 0.0 })?;
    let bits = plan.working_bits;

    let stream = make_stream(bits)?;
    let zb = ArbComplex::from_complex_rational(z, bits);
    let ln_z = zb.ln();
    let nub = scalar_nu(nu_root, bits)?;
    let out = series_pass(
        stream,
        &zb,
        &ln_z,
        &nub,
        re_nu,
        window,
        StopRule::Target(p_digits),
        opts.max_terms,
        opts.second_derivative,
        bits,
    )?;

    let znu = if nu_root.is_zero() { ArbComplex::one(bits) } else { zb.pow(&nub) };
    let value = znu.mul(&out.s0.add(&ln_z.mul(&out.s1)));
    let znu1 = znu.div(&zb);
    let derivative = znu1.mul(&out.t0.add(&ln_z.mul(&out.t1)).add(&out.s1));
    let second_derivative = opts.second_derivative.then(|| {
        znu1.div(&zb).mul(&out.v0.add(&ln_z.mul(&out.v1)).add(&out.w1))
    });

    let rho = if radius.is_finite() { abs_z / radius } else { 0.0 };
    let tail = if rho > 0.0 {
        out.last_term_log10 + (rho / (1.0 - rho)).log10()
    } else {
        out.last_term_log10
    };
    let working_digits = bits as f64 * LOG10_2;
    let roundoff =
        out.max_term_log10.max(0.0) - working_digits + (out.terms_used as f64).log10() + 1.0;
    let err = tail.max(roundoff);
    let vl = value.log10_abs();
    let achieved_digits = if vl.is_finite() { vl - err } else { -err };

    Ok(EvalResult {
        value,
        derivative,
        second_derivative,
        terms_used: out.terms_used,
        max_term_log10: out.max_term_log10,
        plan,
        achieved_digits,
    })
}

fn scalar_nu(nu: &Root, bits: usize) -> Result<ArbComplex> {
    nu.to_scalar::<ArbComplex>(bits)
        .ok_or_else(|| Error::InvalidInput("indicial root not representable".into()))
}

impl SeriesSolution {
    /// Evaluate the solution (value and first derivative, optionally the
    /// second) at an exact point z, to `opts.target_digits` decimal digits.
    pub fn evaluate(&self, z: &CRat, opts: &EvalOptions) -> Result<EvalResult> {
        if num::Zero::is_zero(z) {
            return self.evaluate_at_center(opts);
        }
        core_evaluate(self.problem(), self.nu(), self.window(), z, opts, true, |bits| {
            self.coeff_stream::<ArbComplex>(bits)
        })
    }

    /// z = 0 is the expansion point itself: legal for a Taylor solution and
    /// for a log-free series with indicial root zero, where the value is
    /// read off the first coefficients.
    fn evaluate_at_center(&self, opts: &EvalOptions) -> Result<EvalResult> {
        let supported = matches!(self.form, Form::Taylor { .. })
            || (!self.has_log() && self.nu().is_zero());
        if !supported {
            return Err(Error::CenterEvaluationUnsupported);
        }
        let plan = plan_precision(opts.target_digits, 0.0)?;
        let bits = plan.working_bits;
        let pairs: Vec<(ArbComplex, ArbComplex)> = self
            .coeff_stream::<ArbComplex>(bits)?
            .take(3)
            .collect::<Result<_>>()?;
        let value = pairs[0].0.clone();
        let derivative = pairs[1].0.clone();
        let second_derivative = opts
            .second_derivative
            .then(|| pairs[2].0.add(&pairs[2].0));
        let achieved_digits = bits as f64 * LOG10_2 - 2.0;
        Ok(EvalResult {
            value,
            derivative,
            second_derivative,
            terms_used: 3,
            max_term_log10: 0.0,
            plan,
            achieved_digits,
        })
    }
}
