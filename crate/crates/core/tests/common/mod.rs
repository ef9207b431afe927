//! Shared helpers for integration tests: an independent formal-series
//! residual check and exact rational reference sums. Nothing here goes
//! through the recursion kernels; residuals are computed by direct
//! convolution so that agreement is meaningful evidence.

#![allow(dead_code)]

use frobeval_core::numerics::{CRat, Rat};
use num::{BigInt, BigRational, One, Zero};

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn crat(n: i64, d: i64) -> CRat {
    CRat::new(rat(n, d), BigRational::zero())
}

pub fn crat_zero() -> CRat {
    CRat::new(BigRational::zero(), BigRational::zero())
}

fn mul_rat(c: &CRat, w: &Rat) -> CRat {
    CRat::new(&c.re * w, &c.im * w)
}

/// Coefficients of the formal residual of
///   psi = z^nu * sum_m (a_m + b_m log z) z^m
/// in p psi'' + q psi' + r psi, as pairs (plain_n, log_n) multiplying
/// z^{n + nu - 2} and z^{n + nu - 2} log z. Exact arithmetic, rational nu.
///
/// Derivation used here, independent of any recursion kernel: write
/// psi = A + B log z with A, B plain series; then
///   L psi = [L A + 2 p B'/z - p B/z^2 + q B/z] + log z * [L B]
/// and each operator acts on series termwise.
pub fn residual_pairs(
    p: &[CRat],
    q: &[CRat],
    r: &[CRat],
    nu: &Rat,
    pairs: &[(CRat, CRat)],
    n_max: usize,
) -> Vec<(CRat, CRat)> {
    let a = |i: i64| -> CRat {
        if i < 0 || i as usize >= pairs.len() { crat_zero() } else { pairs[i as usize].0.clone() }
    };
    let b = |i: i64| -> CRat {
        if i < 0 || i as usize >= pairs.len() { crat_zero() } else { pairs[i as usize].1.clone() }
    };
    let w = |i: i64| -> Rat { nu + BigRational::from_integer(BigInt::from(i)) };

    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=(n_max as i64) {
        let mut plain = crat_zero();
        let mut logc = crat_zero();
        for (k, pk) in p.iter().enumerate() {
            if pk.is_zero() {
                continue;
            }
            let i = n - k as i64;
            let m = w(i);
            let m1 = &m * (&m - BigRational::one());
            // p A'': m(m-1) a_i, and the log bleed-through 2 p B'/z - p B/z^2
            let two_m_minus_1 = &m + &m - BigRational::one();
            plain = plain + &mul_rat(pk, &m1) * &a(i) + &mul_rat(pk, &two_m_minus_1) * &b(i);
            logc = logc + &mul_rat(pk, &m1) * &b(i);
        }
        for (k, qk) in q.iter().enumerate() {
            if qk.is_zero() {
                continue;
            }
            let i1 = n - 1 - k as i64;
            let m = w(i1);
            plain = plain + &mul_rat(qk, &m) * &a(i1) + qk * &b(i1);
            logc = logc + &mul_rat(qk, &m) * &b(i1);
        }
        for (k, rk) in r.iter().enumerate() {
            if rk.is_zero() {
                continue;
            }
            let i = n - 2 - k as i64;
            plain = plain + rk * &a(i);
            logc = logc + rk * &b(i);
        }
        out.push((plain, logc));
    }
    out
}

/// Assert the residual vanishes identically for every index that is fully
/// determined by the provided truncation.
pub fn assert_series_solves(
    p: &[CRat],
    q: &[CRat],
    r: &[CRat],
    nu: &Rat,
    pairs: &[(CRat, CRat)],
    label: &str,
) {
    let window = p.len().max(q.len()).max(r.len()) + 2;
    assert!(pairs.len() > window + 2, "{label}: truncation too short to check anything");
    let n_max = pairs.len() - window;
    let res = residual_pairs(p, q, r, nu, pairs, n_max);
    for (n, (plain, logc)) in res.iter().enumerate() {
        assert!(plain.is_zero(), "{label}: plain residual at n = {n}: {plain}");
        assert!(logc.is_zero(), "{label}: log residual at n = {n}: {logc}");
    }
}

/// sum_{k=0}^{terms-1} x^k / k!, exact.
pub fn exp_partial(x: &Rat, terms: usize) -> Rat {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 1..terms {
        term = &term * x / BigRational::from_integer(BigInt::from(k as i64));
        sum = &sum + &term;
    }
    sum
}

/// sum_{k=0}^{terms-1} (-1)^k (x^2/4)^k / (k!)^2, exact: the entire Bessel
/// series of order zero.
pub fn bessel0_partial(x: &Rat, terms: usize) -> Rat {
    let w = -(x * x) / BigRational::from_integer(BigInt::from(4));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 1..terms {
        let kk = BigRational::from_integer(BigInt::from(k as i64));
        term = &term * &w / (&kk * &kk);
        sum = &sum + &term;
    }
    sum
}
