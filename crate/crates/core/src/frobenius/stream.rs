use super::kernel::Kernels;
use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Fixed-capacity history of the most recent coefficients, indexed by the
/// absolute series index. Recursions only reach back a bounded number of
/// entries, so older values are evicted.
struct Ring<S> {
    cap: usize,
    items: Vec<S>,
    len: usize,
}

impl<S: Scalar> Ring<S> {
    fn new(cap: usize) -> Self {
        Ring { cap, items: Vec::with_capacity(cap), len: 0 }
    }

    fn push(&mut self, v: S) {
        if self.items.len() < self.cap {
            self.items.push(v);
        } else {
            self.items[self.len % self.cap] = v;
        }
        self.len += 1;
    }

    /// Value at absolute index i; None when i is negative (implicit zero).
    /// Panics if the entry was already evicted, which would be a logic error.
    fn get(&self, i: isize) -> Option<&S> {
        if i < 0 {
            return None;
        }
        let i = i as usize;
        assert!(i < self.len && i + self.cap >= self.len, "history window underrun");
        Some(&self.items[i % self.cap])
    }
}

enum Inner<S: Scalar> {
    /// Expansion around an ordinary point; both leading coefficients free.
    Taylor { init: (S, S), hist: Ring<S> },
    /// One plain series at an indicial root nu, on a problem whose p has a
    /// double zero at the origin. The pivot is P_2(m + 2 + nu).
    Plain { nu: S, hist: Ring<S> },
    /// Logarithmic partner for a repeated indicial root, after shifting the
    /// root to zero: emits (a_m, b_m) with psi = sum (a_m + b_m log z) z^m.
    DegenerateLog { a: Ring<S>, b: Ring<S> },
    /// Second solution when the roots differ by the integer ell >= 1, after
    /// shifting the larger root to zero (remaining roots 0 and -ell). Emits
    /// pairs in the smaller-root frame: a_m multiplies z^m, and the log
    /// stream b_{m-ell} rides on the same power, starting at m = ell.
    IntegerLog { ell: i64, a: Ring<S>, b: Ring<S> },
}

/// Iterator over coefficient pairs (a0_m, a1_m) of a series solution
/// psi = z^nu * sum_m (a0_m + a1_m log z) z^m, starting at m = 0.
/// Plain solutions emit a1_m = 0 throughout. The z^nu prefactor and the
/// value of nu live on the owning solution object, not on the stream.
pub struct CoeffStream<S: Scalar> {
    kern: Kernels<S>,
    inner: Inner<S>,
    m: usize,
    failed: bool,
}

fn require_coeff<S: Scalar>(kern: &Kernels<S>, k: usize, what: &str) -> Result<()> {
    if kern.coeff_p(k).is_none() {
        return Err(Error::InvalidInput(format!("{what} stream needs a nonzero p_{k}")));
    }
    Ok(())
}

impl<S: Scalar> CoeffStream<S> {
    fn assemble(kern: Kernels<S>, inner: Inner<S>) -> Self {
        CoeffStream { kern, inner, m: 0, failed: false }
    }

    fn cap(kern: &Kernels<S>) -> usize {
        kern.window() + 2
    }

    /// Series around an ordinary point; requires p(0) != 0.
    pub(crate) fn taylor(kern: Kernels<S>, init: (S, S)) -> Result<Self> {
        require_coeff(&kern, 0, "Taylor")?;
        let hist = Ring::new(Self::cap(&kern));
        Ok(Self::assemble(kern, Inner::Taylor { init, hist }))
    }

    /// Plain series at root `nu` on a double-zero-form problem (p0 = p1 = 0,
    /// q0 = 0). Normalization a_0 = 1.
    pub(crate) fn plain_singular(kern: Kernels<S>, nu: S) -> Result<Self> {
        require_coeff(&kern, 2, "indicial-root")?;
        let hist = Ring::new(Self::cap(&kern));
        Ok(Self::assemble(kern, Inner::Plain { nu, hist }))
    }

    /// Log-bearing partner for a repeated root, on coefficients already
    /// shifted so the root sits at zero (p0 = 0, p1 != 0).
    /// Normalization a0_0 = 0, a1_0 = 1.
    pub(crate) fn degenerate_log(kern: Kernels<S>) -> Result<Self> {
        require_coeff(&kern, 1, "log-partner")?;
        let (a, b) = (Ring::new(Self::cap(&kern)), Ring::new(Self::cap(&kern)));
        Ok(Self::assemble(kern, Inner::DegenerateLog { a, b }))
    }

    /// Second solution for roots separated by ell >= 1, on coefficients
    /// shifted by the larger root. Normalization a0_0 = 1 and a0_ell = 0;
    /// the log stream's scale is fixed by a coupling constant and may vanish.
    pub(crate) fn integer_log(kern: Kernels<S>, ell: u32) -> Result<Self> {
        require_coeff(&kern, 1, "log-partner")?;
        if ell == 0 {
            return Err(Error::InvalidInput("root separation must be >= 1".into()));
        }
        let cap = Self::cap(&kern);
        let (a, b) = (Ring::new(cap), Ring::new(cap));
        Ok(Self::assemble(kern, Inner::IntegerLog { ell: ell as i64, a, b }))
    }

    fn step(&mut self) -> Result<(S, S)> {
        let CoeffStream { kern, inner, m, .. } = self;
        let m = *m as i64;
        let kmax = kern.window() as i64;
        let ctx = kern.ctx();
        let zero = || S::from_i64(0, ctx);
        let fail = || Error::RecursionBreakdown { m: m as usize };
        match inner {
            Inner::Taylor { init, hist } => {
                let a = if m == 0 {
                    init.0.clone()
                } else if m == 1 {
                    init.1.clone()
                } else {
                    // P_0(m) a_m + sum_{k>=1} P_k(m) a_{m-k} = 0
                    let den = kern.p_at_int(0, m);
                    if den.is_zero() {
                        return Err(fail());
                    }
                    let mut num = zero();
                    for k in 1..=kmax.min(m) {
                        let pk = kern.p_at_int(k as usize, m);
                        if pk.is_zero() {
                            continue;
                        }
                        num = num.add(&pk.mul(hist.get((m - k) as isize).expect("window")));
                    }
                    num.neg().div(&den)
                };
                hist.push(a.clone());
                Ok((a, zero()))
            }
            Inner::Plain { nu, hist } => {
                let a = if m == 0 {
                    S::from_i64(1, ctx)
                } else {
                    // P_2(m + 2 + nu) a_m + sum_{k>=3} P_k(m + 2 + nu) a_{m+2-k} = 0
                    let mu = S::from_i64(m + 2, ctx).add(nu);
                    let den = kern.p_at(2, &mu);
                    if den.is_zero() {
                        return Err(fail());
                    }
                    let mut num = zero();
                    for k in 3..=kmax.min(m + 2) {
                        let pk = kern.p_at(k as usize, &mu);
                        if pk.is_zero() {
                            continue;
                        }
                        num = num.add(&pk.mul(hist.get((m + 2 - k) as isize).expect("window")));
                    }
                    num.neg().div(&den)
                };
                hist.push(a.clone());
                Ok((a, zero()))
            }
            Inner::DegenerateLog { a, b } => {
                if m == 0 {
                    let (a0, b0) = (zero(), S::from_i64(1, ctx));
                    a.push(a0.clone());
                    b.push(b0.clone());
                    return Ok((a0, b0));
                }
                // both streams pivot on P_1(m + 1) = m^2 p_1
                let mu = m + 1;
                let den = kern.p_at_int(1, mu);
                if den.is_zero() {
                    return Err(fail());
                }
                let mut bnum = zero();
                let mut anum = zero();
                for k in 2..=kmax.min(m + 1) {
                    let pk = kern.p_at_int(k as usize, mu);
                    if pk.is_zero() {
                        continue;
                    }
                    let idx = (m + 1 - k) as isize;
                    bnum = bnum.add(&pk.mul(b.get(idx).expect("window")));
                    anum = anum.add(&pk.mul(a.get(idx).expect("window")));
                }
                let bm = bnum.neg().div(&den);
                b.push(bm.clone());
                // log coupling; its k = 1 term reads the b value just pushed
                for k in 1..=kmax.min(m + 1) {
                    let qk = kern.q_at_int(k as usize, mu);
                    if qk.is_zero() {
                        continue;
                    }
                    anum = anum.add(&qk.mul(b.get((m + 1 - k) as isize).expect("window")));
                }
                let am = anum.neg().div(&den);
                a.push(am.clone());
                Ok((am, bm))
            }
            Inner::IntegerLog { ell, a, b } => {
                let ell = *ell;
                if m == 0 {
                    let a0 = S::from_i64(1, ctx);
                    a.push(a0.clone());
                    return Ok((a0, zero()));
                }
                if m < ell {
                    // below the gap the log stream is absent:
                    // P_1(m + 1 - ell) a_m + sum_{k>=2} P_k(m + 1 - ell) a_{m+1-k} = 0
                    let mu = m + 1 - ell;
                    let den = kern.p_at_int(1, mu);
                    if den.is_zero() {
                        return Err(fail());
                    }
                    let mut num = zero();
                    for k in 2..=kmax.min(m + 1) {
                        let pk = kern.p_at_int(k as usize, mu);
                        if pk.is_zero() {
                            continue;
                        }
                        num = num.add(&pk.mul(a.get((m + 1 - k) as isize).expect("window")));
                    }
                    let am = num.neg().div(&den);
                    a.push(am.clone());
                    return Ok((am, zero()));
                }
                if m == ell {
                    // the pivot vanishes at the gap; solvability fixes the log
                    // scale b_0 through the Q_1(1) coupling and leaves a_ell
                    // free, pinned to zero
                    let den = kern.q_at_int(1, 1);
                    if den.is_zero() {
                        return Err(fail());
                    }
                    let mut num = zero();
                    for k in 2..=kmax.min(ell + 1) {
                        let pk = kern.p_at_int(k as usize, 1);
                        if pk.is_zero() {
                            continue;
                        }
                        num = num.add(&pk.mul(a.get((ell + 1 - k) as isize).expect("window")));
                    }
                    let b0 = num.neg().div(&den);
                    b.push(b0.clone());
                    let am = zero();
                    a.push(am.clone());
                    return Ok((am, b0));
                }
                // past the gap both streams share the pivot
                // P_1(m + 1 - ell) = (m - ell) m p_1
                let j = m - ell;
                let mu = m + 1 - ell;
                let den = kern.p_at_int(1, mu);
                if den.is_zero() {
                    return Err(fail());
                }
                let mut bnum = zero();
                for k in 2..=kmax.min(j + 1) {
                    let pk = kern.p_at_int(k as usize, mu);
                    if pk.is_zero() {
                        continue;
                    }
                    bnum = bnum.add(&pk.mul(b.get((j + 1 - k) as isize).expect("window")));
                }
                let bj = bnum.neg().div(&den);
                b.push(bj.clone());
                let mut anum = zero();
                for k in 2..=kmax.min(m + 1) {
                    let pk = kern.p_at_int(k as usize, mu);
                    if pk.is_zero() {
                        continue;
                    }
                    anum = anum.add(&pk.mul(a.get((m + 1 - k) as isize).expect("window")));
                }
                for k in 1..=kmax.min(j + 1) {
                    let qk = kern.q_at_int(k as usize, mu);
                    if qk.is_zero() {
                        continue;
                    }
                    anum = anum.add(&qk.mul(b.get((j + 1 - k) as isize).expect("window")));
                }
                let am = anum.neg().div(&den);
                a.push(am.clone());
                Ok((am, bj))
            }
        }
    }
}

impl<S: Scalar> Iterator for CoeffStream<S> {
    type Item = Result<(S, S)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.step() {
            Ok(pair) => {
                self.m += 1;
                Some(Ok(pair))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}
