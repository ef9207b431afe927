//! One-dimensional Legendre transforms of sampled convex functions: the
//! plain transform, a one-loop (finite-size) corrected variant, approximate
//! inverses of both, and a self-contained demonstration on the fair-coin
//! binomial distribution.

use crate::error::{Error, Result};
use num::bigint::{BigInt, BigUint};
use num::rational::Ratio;
use num::ToPrimitive;
use std::f64::consts::{LN_2, TAU};

/// A real function sampled on a strictly increasing grid of at least five
/// points.
///
/// Derivatives come from the three-point Lagrange stencil on the local node
/// triple, evaluated at the node itself. On a uniform grid these are the
/// usual central differences; the first and last points reuse the adjacent
/// triple one-sidedly at the same polynomial order.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    x: Vec<f64>,
    f: Vec<f64>,
}

impl SampledFunction {
    pub fn new(x: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if x.len() != f.len() {
            return Err(Error::InvalidInput(format!(
                "grid and value lengths differ: {} vs {}",
                x.len(),
                f.len()
            )));
        }
        if x.len() < 5 {
            return Err(Error::GridTooShort { need: 5, got: x.len() });
        }
        if let Some(i) = x.iter().chain(f.iter()).position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample near index {i}")));
        }
        for i in 1..x.len() {
            if x[i] <= x[i - 1] {
                return Err(Error::GridNotIncreasing(i));
            }
        }
        Ok(SampledFunction { x, f })
    }

    /// For outputs whose invariants are established by the caller.
    fn new_unchecked(x: Vec<f64>, f: Vec<f64>) -> Self {
        SampledFunction { x, f }
    }

    pub fn grid(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// First index of the stencil triple serving node i.
    fn triple(&self, i: usize) -> usize {
        i.clamp(1, self.x.len() - 2) - 1
    }

    /// d/dx of the quadratic through the local triple, at node i.
    pub fn derivative(&self, i: usize) -> f64 {
        let b = self.triple(i);
        let (x0, x1, x2) = (self.x[b], self.x[b + 1], self.x[b + 2]);
        let (f0, f1, f2) = (self.f[b], self.f[b + 1], self.f[b + 2]);
        let t = self.x[i];
        f0 * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + f1 * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + f2 * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
    }

    /// d2/dx2 of the quadratic through the local triple (constant on it).
    pub fn second_derivative(&self, i: usize) -> f64 {
        let b = self.triple(i);
        let (x0, x1, x2) = (self.x[b], self.x[b + 1], self.x[b + 2]);
        let (f0, f1, f2) = (self.f[b], self.f[b + 1], self.f[b + 2]);
        2.0 * (f0 / ((x0 - x1) * (x0 - x2))
            + f1 / ((x1 - x0) * (x1 - x2))
            + f2 / ((x2 - x0) * (x2 - x1)))
    }

    /// Quadratic interpolation through the triple nearest to `at`.
    pub fn eval(&self, at: f64) -> Result<f64> {
        let n = self.x.len();
        if at < self.x[0] || at > self.x[n - 1] {
            return Err(Error::ExtrapolationOutOfRange {
                m: at,
                lo: self.x[0],
                hi: self.x[n - 1],
            });
        }
        let mid = self.x.partition_point(|&g| g < at).clamp(1, n - 2);
        let b = mid - 1;
        let (x0, x1, x2) = (self.x[b], self.x[b + 1], self.x[b + 2]);
        let (f0, f1, f2) = (self.f[b], self.f[b + 1], self.f[b + 2]);
        Ok(f0 * (at - x1) * (at - x2) / ((x0 - x1) * (x0 - x2))
            + f1 * (at - x0) * (at - x2) / ((x1 - x0) * (x1 - x2))
            + f2 * (at - x0) * (at - x1) / ((x2 - x0) * (x2 - x1)))
    }
}

/// Output of a forward transform.
#[derive(Clone, Debug)]
pub struct TransformResult {
    /// Transform abscissae p_i = U'(x_i); strictly increasing for convex U.
    pub p: Vec<f64>,
    /// Plain transform values F0(p_i) = p_i x_i - U(x_i).
    pub f0: Vec<f64>,
    /// One-loop corrected values F1, present when requested.
    pub f1: Option<Vec<f64>>,
    /// The maximizer map: the input abscissa behind each p_i.
    pub x_of_p: Vec<f64>,
}

impl TransformResult {
    pub fn f0_function(&self) -> SampledFunction {
        SampledFunction::new_unchecked(self.p.clone(), self.f0.clone())
    }

    pub fn f1_function(&self) -> Option<SampledFunction> {
        self.f1
            .as_ref()
            .map(|f1| SampledFunction::new_unchecked(self.p.clone(), f1.clone()))
    }
}

/// Legendre transform of a convex sampled function:
/// p = U'(x), F0(p) = p x - U(x) on the image grid.
pub fn forward(u: &SampledFunction) -> Result<TransformResult> {
    let n = u.len();
    let p: Vec<f64> = (0..n).map(|i| u.derivative(i)).collect();
    for i in 1..n {
        if p[i] <= p[i - 1] {
            return Err(Error::NonConvex { index: i });
        }
    }
    let f0 = (0..n).map(|i| p[i] * u.x[i] - u.f[i]).collect();
    Ok(TransformResult { p, f0, f1: None, x_of_p: u.x.clone() })
}

/// Forward transform with the Gaussian-fluctuation correction
/// F1(p) = F0(p) - log(U''(x) / 2 pi) / 2.
pub fn one_loop(u: &SampledFunction) -> Result<TransformResult> {
    let mut out = forward(u)?;
    let mut f1 = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let dd = u.second_derivative(i);
        if dd <= 0.0 {
            return Err(Error::NonConvex { index: i });
        }
        f1.push(out.f0[i] - 0.5 * (dd / TAU).ln());
    }
    out.f1 = Some(f1);
    Ok(out)
}

/// Inverse transform of a convex F0: x = F0'(p), U(x) = p x - F0(p).
pub fn inverse(f: &SampledFunction) -> Result<SampledFunction> {
    let n = f.len();
    let x: Vec<f64> = (0..n).map(|i| f.derivative(i)).collect();
    for i in 1..n {
        if x[i] <= x[i - 1] {
            return Err(Error::NonConvex { index: i });
        }
    }
    let u = (0..n).map(|i| f.x[i] * x[i] - f.f[i]).collect();
    Ok(SampledFunction::new_unchecked(x, u))
}

/// Inverse for data carrying the one-loop correction. The correction is
/// first peeled off using the measured curvature, F0 ~ F1 - log(2 pi F1'')/2
/// (valid when the correction is small), then the plain inverse applies.
pub fn corrected_inverse(f1: &SampledFunction) -> Result<SampledFunction> {
    let n = f1.len();
    let mut f0 = Vec::with_capacity(n);
    for i in 0..n {
        let dd = f1.second_derivative(i);
        if dd <= 0.0 {
            return Err(Error::NonConvex { index: i });
        }
        f0.push(f1.f[i] - 0.5 * (TAU * dd).ln());
    }
    inverse(&SampledFunction::new_unchecked(f1.x.clone(), f0))
}

/// One comparison row of the coin-toss demonstration.
#[derive(Clone, Debug)]
pub struct DemoRow {
    pub x: f64,
    pub exact: f64,
    pub legendre: f64,
    pub stirling: f64,
}

/// xi log xi + (1 - xi) log(1 - xi), extended by its limit 0 at the ends.
fn entropy(xi: f64) -> f64 {
    let side = |t: f64| if t <= 0.0 { 0.0 } else { t * t.ln() };
    side(xi) + side(1.0 - xi)
}

/// Continuous estimate of the probability of x heads in n fair coin tosses,
/// from the corrected transform of the generating function
/// f(p) = n log(1 + e^p) - n log 2, worked out in closed form:
/// with xi = (x + 1/2)/(n + 1),
/// u(x) = (n+1)[xi log xi + (1-xi) log(1-xi)] + log(2 pi n)/2 + n log 2
/// and the estimate is e^{-u(x)}. Defined for all real x in (-1/2, n+1/2).
pub fn binomial_density(n: u32, x: f64) -> f64 {
    let nn = n as f64;
    let xi = (x + 0.5) / (nn + 1.0);
    let u = (nn + 1.0) * entropy(xi) + 0.5 * (TAU * nn).ln() + nn * LN_2;
    (-u).exp()
}

fn stirling_mass(n: u32, x: u32) -> f64 {
    // the sqrt(chi (1 - chi)) factor vanishes at the endpoints, so the
    // approximation degenerates to 0 there
    if x == 0 || x == n {
        return 0.0;
    }
    let nn = n as f64;
    let chi = x as f64 / nn;
    (-(nn * entropy(chi) + 0.5 * (TAU * nn * chi * (1.0 - chi)).ln() + nn * LN_2)).exp()
}

fn exact_mass(n: u32, x: u32) -> f64 {
    let k = x.min(n - x);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for j in 0..k {
        num *= n - j;
        den *= j + 1;
    }
    let binom = num / den;
    Ratio::<BigInt>::new(binom.into(), BigInt::from(1) << (n as usize))
        .to_f64()
        .unwrap_or(0.0)
}

/// Exact coin-toss probabilities next to their transform-based and Stirling
/// approximations, for x = 0..=n.
pub fn binomial_demo(n: u32) -> Result<Vec<DemoRow>> {
    if n < 2 {
        return Err(Error::InvalidInput("demo needs at least 2 coin tosses".into()));
    }
    Ok((0..=n)
        .map(|x| DemoRow {
            x: x as f64,
            exact: exact_mass(n, x),
            legendre: binomial_density(n, x as f64),
            stirling: stirling_mass(n, x),
        })
        .collect())
}
