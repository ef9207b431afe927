//! Simultaneous root finding for small dense polynomials in f64.
//!
//! Used where approximate root locations are enough: convergence radii and
//! turning-point screening. Exact structure (indicial roots) is handled
//! algebraically elsewhere.

use num::complex::Complex64;

/// All complex roots of `c[0] + c[1] x + ... + c[n] x^n` by Durand-Kerner.
///
/// Leading coefficients that are negligible against the largest coefficient
/// are trimmed first (those roots have escaped to infinity). Returns an empty
/// vector for constant or identically-zero input.
pub(crate) fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return Vec::new();
    }
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() <= 1e-14 * max_mag {
            c.pop();
        } else {
            break;
        }
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();

    // Cauchy bound keeps every root inside |x| <= radius
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut w: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius / seed.norm())
        .collect();

    let eval = |x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in monic.iter().rev() {
            acc = acc * x + ck;
        }
        acc
    };

    for _ in 0..200 {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= w[i] - w[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates; nudge apart and continue
                w[i] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval(w[i]) / denom;
            w[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + w[i].norm()));
        }
        if max_step < 1e-13 {
            break;
        }
    }
    w
}
