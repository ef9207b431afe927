//! Exponential growth profiles of solutions from phase integrals.
//!
//! For problems in normal form the two solution branches behave like
//! `exp(±(1/s)∫ Q dt)` times slowly varying factors, where `Q²` is a
//! polynomial read off the problem data. Integrating `Q` along straight rays
//! from the origin and maximizing over the ray angle gives the growth profile
//! `S(u)` of the dominant solution on circles `|z| = e^u`, the raw material
//! for coefficient-magnitude estimation.
//!
//! Two forms of `Q²` are supported: the ordinary-point form, valid when the
//! indicial roots are exactly {0, 1}, and the regular-singular form whose
//! integrand carries an extra `1/t` with the constant part subtracted so the
//! integral converges at the origin.
//!
//! [`s_profile`] records the pure ray exponent: slowly varying amplitude
//! factors and the `z^ν` power are deliberately excluded (they are absorbed
//! by the downstream finite-size correction and the explicit index offset),
//! while [`wkb_log_psi`] reports the full per-point approximation including
//! those factors.

mod quad;

use num::complex::Complex64;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::Rat;
use crate::ode::CanonicalProblem;
use crate::roots::polynomial_roots;

/// Sign of the phase integral in the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Growth profile of the dominant solution on circles `|z| = e^u`.
///
/// All vectors have the same length, one entry per requested `u`. Problems
/// handled here have real data, so conjugate rays carry equal growth and a
/// maximizer is only determined up to conjugation; `phi_star` reports a
/// canonical representative in `[0, 2π)`. A self-conjugate maximizer (the
/// positive or negative real axis) is reported as `0` or `π`; a conjugate
/// pair is reported by its member in `(π, 2π)`. In the squared variable the
/// phase refers to the squared-variable plane. `branch` is +1 or -1 for the
/// sign applied to the phase integral continued from the principal root at
/// the expansion point.
#[derive(Clone, Debug)]
pub struct WkbProfile {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
    pub phi_star: Vec<f64>,
    pub branch: Vec<i8>,
}

/// Knobs for [`s_profile`].
#[derive(Clone, Debug)]
pub struct ProfileOptions {
    /// Number of equally spaced scan angles; 64 resolves every profile here.
    pub n_phi: usize,
    /// Interpret `u` as the log of the *square* of the problem variable:
    /// rays are evaluated at radius `e^{u/2}` and reported phases doubled.
    pub squared_variable: bool,
    /// Relative quadrature tolerance for the ray integrals.
    pub rel_tol: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            n_phi: 64,
            squared_variable: false,
            rel_tol: 1e-9,
        }
    }
}

/// Whether the problem needs the regular-singular form of `Q²`.
///
/// The ordinary-point form applies only to indicial roots exactly {0, 1}
/// with no 1/z term in the potential (v[0] = 0); everything else integrates
/// with the `1/t` weight.
pub fn uses_langer_form(cp: &CanonicalProblem) -> bool {
    !(cp.nu_minus.is_zero()
        && cp.nu_plus.is_one()
        && cp.v.first().map_or(true, |x| x.is_zero()))
}

fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn horner_real(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// The polynomial `Q²` for `cp`, in the requested form, evaluated at `z`.
pub fn q_squared(cp: &CanonicalProblem, z: Complex64, langer: bool) -> Result<Complex64> {
    let ctx = RayContext::new(cp, langer, 1e-9)?;
    Ok(horner(&ctx.coeffs, z))
}

/// Everything a ray integration needs that does not depend on the ray.
struct RayContext {
    /// Coefficients of Q², constant term first.
    coeffs: Vec<f64>,
    /// Q(0): the subtraction constant in the regular-singular integrand,
    /// and the amplitude normalization when nonzero.
    q0: Complex64,
    langer: bool,
    /// Zeros of Q² away from the origin; rays must keep clear of them.
    turning_points: Vec<Complex64>,
    rel_tol: f64,
    /// For the regular-singular form with Q(0) = 0 the integral is taken in
    /// w = √z, where it reduces to an ordinary-form integral of this context.
    sub: Option<Box<RayContext>>,
}

impl RayContext {
    fn new(cp: &CanonicalProblem, langer: bool, rel_tol: f64) -> Result<Self> {
        let v: Vec<f64> = cp.v.iter().map(rat_f64).collect();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "normal-form coefficients overflow f64".into(),
            ));
        }
        if langer {
            let dnu = rat_f64(&(&cp.nu_plus - &cp.nu_minus)).abs();
            let s = rat_f64(&cp.s).abs();
            let q0 = 0.5 * s * dnu;
            let mut coeffs = vec![q0 * q0];
            coeffs.extend_from_slice(&v);
            Self::from_coeffs(coeffs, Complex64::new(q0, 0.0), true, rel_tol)
        } else {
            if uses_langer_form(cp) {
                return Err(Error::WrongClassification {
                    required: "indicial roots {0, 1} for the ordinary-point form".into(),
                    found: format!("nu+ = {}, nu- = {}", cp.nu_plus, cp.nu_minus),
                });
            }
            // v[0] is zero here (checked above); Q² = sum_{n>=1} v[n] z^(n-1)
            let coeffs = if v.len() <= 1 {
                vec![0.0]
            } else {
                v[1..].to_vec()
            };
            let q0 = Complex64::new(coeffs[0], 0.0).sqrt();
            Self::from_coeffs(coeffs, q0, false, rel_tol)
        }
    }

    fn from_coeffs(
        coeffs: Vec<f64>,
        q0: Complex64,
        langer: bool,
        rel_tol: f64,
    ) -> Result<Self> {
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return Err(Error::InvalidInput(
                "Q^2 vanishes identically; the problem has no growth profile".into(),
            ));
        }
        let as_complex: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let turning_points = polynomial_roots(&as_complex);
        let sub = if langer && q0.norm() == 0.0 {
            // Q² = z·V(z); in w = √z the integrand 2√(V(w²)) is regular
            let mut wc = vec![0.0; (coeffs.len() - 1) * 2 - 1];
            for (i, &c) in coeffs[1..].iter().enumerate() {
                wc[2 * i] = c;
            }
            let q0w = Complex64::new(wc[0], 0.0).sqrt();
            Some(Box::new(Self::from_coeffs(wc, q0w, false, rel_tol)?))
        } else {
            None
        };
        Ok(RayContext {
            coeffs,
            q0,
            langer,
            turning_points,
            rel_tol,
            sub,
        })
    }
}

/// Result of one branch-tracked ray integration.
struct RayIntegral {
    /// ∫ along [0, z] of the branch-continued integrand.
    value: Complex64,
    /// Branch-continued √Q² at the endpoint, for amplitude factors.
    q_end: Complex64,
}

const OBSTRUCTION_REL: f64 = 1e-6;

fn obstruction_error(z: Complex64, tol: f64) -> Error {
    Error::PathObstruction {
        z: format!("{:.6}{:+.6}i", z.re, z.im),
        tol,
    }
}

fn dist_to_segment(w: Complex64, z: Complex64) -> f64 {
    let len2 = z.norm_sqr();
    if len2 == 0.0 {
        return w.norm();
    }
    let t = ((w * z.conj()).re / len2).clamp(0.0, 1.0);
    (w - t * z).norm()
}

/// Radii in (0, r_end) where the ray at angle `theta` crosses the branch cut
/// of the principal square root of Q², i.e. where Im Q² changes sign while
/// Re Q² < 0. Each crossing flips the continued branch.
fn flip_radii(coeffs: &[f64], theta: f64, r_end: f64) -> Vec<f64> {
    let im: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (k as f64 * theta).sin())
        .collect();
    let im_scale = im.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if im_scale <= 1e-14 * scale {
        // ray along the real axis: Q² is real, crossings are impossible
        // (zeros on the ray are screened as turning points beforehand)
        return Vec::new();
    }
    let re: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (k as f64 * theta).cos())
        .collect();

    let n = 64 * coeffs.len().max(4);
    let lo = 1e-9 * r_end;
    let hi = r_end * (1.0 - 1e-12);
    let sample = |r: f64| {
        let v = horner_real(&im, r);
        if v == 0.0 {
            horner_real(&im, r * (1.0 + 1e-12) + 1e-300)
        } else {
            v
        }
    };
    let mut flips = Vec::new();
    let mut prev_r = lo;
    let mut prev_v = sample(lo);
    for j in 1..=n {
        let r = lo + (hi - lo) * (j as f64) / (n as f64);
        let v = sample(r);
        if prev_v * v < 0.0 {
            // bisect the crossing
            let (mut a, mut b, mut fa) = (prev_r, r, prev_v);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let fm = sample(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
                if (b - a) <= 1e-14 * r_end {
                    break;
                }
            }
            let rc = 0.5 * (a + b);
            if horner_real(&re, rc) < 0.0 {
                flips.push(rc);
            }
        }
        prev_r = r;
        prev_v = v;
    }
    flips
}

fn ray_integral(ctx: &RayContext, z: Complex64) -> Result<RayIntegral> {
    if let Some(sub) = &ctx.sub {
        let w = z.sqrt();
        let inner = ray_core(sub, w)?;
        return Ok(RayIntegral {
            value: 2.0 * inner.value,
            q_end: w * inner.q_end,
        });
    }
    ray_core(ctx, z)
}

fn ray_core(ctx: &RayContext, z: Complex64) -> Result<RayIntegral> {
    let r_end = z.norm();
    if r_end == 0.0 {
        return Ok(RayIntegral {
            value: Complex64::zero(),
            q_end: ctx.q0,
        });
    }
    let tol_dist = OBSTRUCTION_REL * r_end;
    for &w in &ctx.turning_points {
        if w.norm() <= 1e-9 * r_end {
            // the expansion point itself; the integrand is regular there
            continue;
        }
        if dist_to_segment(w, z) < tol_dist {
            return Err(obstruction_error(z, tol_dist));
        }
    }

    let dir = z / r_end;
    let theta = z.arg();
    let flips = flip_radii(&ctx.coeffs, theta, r_end);

    // segment boundaries with the running branch sign
    let mut bounds = Vec::with_capacity(flips.len() + 2);
    bounds.push(0.0);
    bounds.extend_from_slice(&flips);
    bounds.push(r_end);

    let q0_re = ctx.q0.re;
    let langer = ctx.langer;
    let coeffs = &ctx.coeffs;
    let eval = |r: f64, sigma: f64| -> Complex64 {
        let t = dir * r;
        let root = sigma * horner(coeffs, t).sqrt();
        if langer {
            // (√Q² − Q₀)/t with the constant cancelled analytically:
            // Q²(t) − Q₀² = t·V(t), so the integrand is V/(√Q² + Q₀)
            let v = horner(&coeffs[1..], t);
            let den = root + q0_re;
            if den.norm() <= 1e-12 * (q0_re + root.norm()) {
                return Complex64::new(f64::NAN, f64::NAN);
            }
            v * dir / den
        } else {
            root * dir
        }
    };

    // turn the relative tolerance into an absolute budget per segment
    let mut scale = 0.0;
    for (i, pair) in bounds.windows(2).enumerate() {
        let sigma = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut f = |r: f64| eval(r, sigma);
        scale += quad::rough_scale(&mut f, pair[0], pair[1])
            .ok_or_else(|| obstruction_error(z, tol_dist))?;
    }
    let seg_tol = ctx.rel_tol * scale.max(1e-30) / (bounds.len() - 1) as f64;

    let mut value = Complex64::zero();
    let mut sigma = 1.0;
    for pair in bounds.windows(2) {
        let mut f = |r: f64| eval(r, sigma);
        value += quad::adaptive(&mut f, pair[0], pair[1], seg_tol)
            .ok_or_else(|| obstruction_error(z, tol_dist))?;
        sigma = -sigma;
    }
    let q_end = sigma * horner(coeffs, z).sqrt();
    Ok(RayIntegral { value, q_end })
}

/// Log-magnitude and phase of the WKB approximation to one solution branch
/// at `z`, including the slowly varying amplitude and the `z^ν` power.
///
/// The form of `Q²` follows the classification: ordinary-point form for
/// indicial roots {0, 1}, regular-singular form otherwise. The constant
/// amplitude normalization `√Q(0)` is kept when `Q(0) ≠ 0` and dropped
/// otherwise (it is an overall constant either way).
pub fn wkb_log_psi(cp: &CanonicalProblem, z: Complex64, branch: Branch) -> Result<(f64, f64)> {
    if z.norm() == 0.0 {
        return Err(Error::InvalidInput(
            "the WKB approximation is undefined at the expansion point".into(),
        ));
    }
    let langer = uses_langer_form(cp);
    let ctx = RayContext::new(cp, langer, 1e-9)?;
    let ray = ray_integral(&ctx, z)?;
    let s = rat_f64(&cp.s);
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    let mut w = ray.value * (sign / s);
    w -= 0.5 * ray.q_end.ln();
    if ctx.q0.norm() > 0.0 {
        w += 0.5 * ctx.q0.ln();
    }
    if langer {
        let nu = match branch {
            Branch::Plus => rat_f64(&cp.nu_plus),
            Branch::Minus => rat_f64(&cp.nu_minus),
        };
        w += nu * z.ln();
    }
    Ok((w.re, w.im))
}

/// Ray exponent |Re ∫ / s| at one angle, with the achieving branch sign.
fn ray_exponent(ctx: &RayContext, radius: f64, theta: f64, s: f64) -> Result<(f64, i8)> {
    let z = Complex64::from_polar(radius, theta);
    let ray = ray_integral(ctx, z)?;
    let e = ray.value.re / s;
    Ok((e.abs(), if e >= 0.0 { 1 } else { -1 }))
}

const GOLDEN: f64 = 0.618033988749895;

/// Golden-section refinement of one scan maximum, tracking the best angle
/// and value seen. Probes that stay obstructed after small dodges rank as
/// negative infinity; the true maximum never sits on an obstructed sliver.
fn refine_max(
    ctx: &RayContext,
    radius: f64,
    s_param: f64,
    center: f64,
    half: f64,
    seed: (f64, i8),
) -> (f64, (f64, i8)) {
    let soft = |theta: f64| -> Option<(f64, i8)> {
        for &d in &[0.0, 1e-9, -1e-9, 1e-7, -1e-7, 1e-5, -1e-5] {
            if let Ok(v) = ray_exponent(ctx, radius, theta + d, s_param) {
                return Some(v);
            }
        }
        None
    };
    let (mut a, mut b) = (center - half, center + half);
    let mut theta_best = center;
    let mut best = seed;
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = soft(c);
    let mut fd = soft(d);
    for _ in 0..200 {
        if (b - a) <= 1e-6 {
            break;
        }
        if let Some(x) = fc {
            if x.0 > best.0 {
                best = x;
                theta_best = c;
            }
        }
        if let Some(x) = fd {
            if x.0 > best.0 {
                best = x;
                theta_best = d;
            }
        }
        let vc = fc.map_or(f64::NEG_INFINITY, |x| x.0);
        let vd = fd.map_or(f64::NEG_INFINITY, |x| x.0);
        if vc >= vd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = soft(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = soft(d);
        }
    }
    (theta_best, best)
}

/// Growth profile S(u) = max over ray angle and branch of the ray exponent.
///
/// Rays that pass within a relative 10⁻⁶ of a turning point are retried at
/// slightly perturbed angles (eight times, with growing offsets) before the
/// obstruction is propagated. The scan maximum is refined by golden-section
/// search to an angular tolerance of 10⁻⁶.
pub fn s_profile(cp: &CanonicalProblem, u: &[f64], opts: &ProfileOptions) -> Result<WkbProfile> {
    if opts.n_phi < 8 {
        return Err(Error::InvalidInput(
            "phase scan needs at least 8 angles".into(),
        ));
    }
    if !(opts.rel_tol > 0.0) {
        return Err(Error::InvalidInput(
            "quadrature tolerance must be positive".into(),
        ));
    }
    let langer = uses_langer_form(cp);
    let ctx = RayContext::new(cp, langer, opts.rel_tol)?;
    let s_param = rat_f64(&cp.s);
    if !(s_param != 0.0 && s_param.is_finite()) {
        return Err(Error::InvalidInput("the scale parameter s must be nonzero".into()));
    }

    let tau = std::f64::consts::TAU;
    let mut out = WkbProfile {
        u: Vec::with_capacity(u.len()),
        s: Vec::with_capacity(u.len()),
        phi_star: Vec::with_capacity(u.len()),
        branch: Vec::with_capacity(u.len()),
    };

    for &uj in u {
        let radius = if opts.squared_variable {
            (0.5 * uj).exp()
        } else {
            uj.exp()
        };
        if !radius.is_finite() || radius == 0.0 {
            return Err(Error::InvalidInput(format!(
                "profile radius e^u overflows at u = {uj}"
            )));
        }

        // strict evaluation: perturb obstructed angles, then give up loudly
        let strict = |theta: f64| -> Result<(f64, i8)> {
            let mut last: Option<Error> = None;
            for k in 0..=8u32 {
                let off = if k == 0 {
                    0.0
                } else {
                    let step = k.div_ceil(2) as f64;
                    let mag = step * step * 8e-5;
                    if k % 2 == 1 {
                        mag
                    } else {
                        -mag
                    }
                };
                match ray_exponent(&ctx, radius, theta + off, s_param) {
                    Ok(v) => return Ok(v),
                    Err(e @ Error::PathObstruction { .. }) => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("loop ran"))
        };

        let n = opts.n_phi;
        let mut vals = Vec::with_capacity(n);
        for j in 0..n {
            vals.push(strict(tau * j as f64 / n as f64)?);
        }

        // refine every local maximum of the scan: symmetric problems carry
        // the same growth in several directions (conjugate rays, and both
        // signs of the exponent half a turn apart), and the reported phase
        // should be the canonical one, not whichever node edged ahead
        let mut candidates: Vec<usize> = (0..n)
            .filter(|&j| {
                let prev = vals[(j + n - 1) % n].0;
                let next = vals[(j + 1) % n].0;
                vals[j].0 > prev && vals[j].0 >= next
            })
            .collect();
        if candidates.is_empty() {
            let argmax = (0..n)
                .max_by(|&a, &b| vals[a].0.total_cmp(&vals[b].0))
                .expect("n >= 8");
            candidates.push(argmax);
        }

        let half = tau / n as f64;
        let pi = std::f64::consts::PI;
        // refined candidates folded to [0, π]: conjugate rays carry equal
        // growth for real data, so one half-plane represents them all
        let mut refined: Vec<(f64, f64, f64, i8)> = Vec::new(); // (key, θf, S, ±)
        for j in candidates {
            let center = tau * j as f64 / n as f64;
            let (theta, val) = refine_max(&ctx, radius, s_param, center, half, vals[j]);
            let mut tf = theta.rem_euclid(tau);
            if tf > pi {
                tf = tau - tf;
            }
            // in the squared variable, θf and π-θf label conjugate rays of
            // the underlying variable (phases 2θf and 2π-2θf); group them
            let key = if opts.squared_variable {
                let x = (2.0 * tf).rem_euclid(tau);
                x.min(tau - x)
            } else {
                tf
            };
            refined.push((key, tf, val.0, val.1));
        }
        refined.sort_by(|a, b| a.0.total_cmp(&b.0));
        let ang_tol = 2e-6;
        let mut classes: Vec<Vec<(f64, f64, f64, i8)>> = Vec::new();
        for c in refined {
            match classes.last_mut() {
                Some(g) if (c.0 - g[0].0).abs() <= ang_tol => g.push(c),
                _ => classes.push(vec![c]),
            }
        }
        let class_s =
            |g: &[(f64, f64, f64, i8)]| g.iter().fold(f64::NEG_INFINITY, |m, c| m.max(c.2));
        // strongest class wins; near-ties resolve toward the smaller angle
        let mut bi = 0usize;
        for i in 1..classes.len() {
            let (sb, si) = (class_s(&classes[bi]), class_s(&classes[i]));
            let tol = 1e-8 * (sb.abs().max(si.abs()) + 1e-30);
            if si > sb + tol {
                bi = i;
            }
        }
        let group = &classes[bi];
        let key = group[0].0;
        let s_val = class_s(group);
        let (phi, sign) = if !opts.squared_variable {
            let m = group
                .iter()
                .max_by(|a, b| a.2.total_cmp(&b.2))
                .expect("nonempty class");
            (m.1, m.3)
        } else if key <= ang_tol {
            // the positive real axis of the squared variable; its natural
            // lift is the small-angle member
            let m = group
                .iter()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty class");
            (0.0, m.3)
        } else if key >= pi - ang_tol {
            let m = group
                .iter()
                .max_by(|a, b| a.2.total_cmp(&b.2))
                .expect("nonempty class");
            (pi, m.3)
        } else {
            // a two-sided class: report the squared-variable phase in
            // (π, 2π), whose lift is the larger folded angle
            let m = group
                .iter()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty class");
            (tau - key, m.3)
        };

        out.u.push(uj);
        out.s.push(s_val);
        out.phi_star.push(phi);
        out.branch.push(sign);
    }
    Ok(out)
}
