use crate::numerics::Scalar;
use crate::ode::history_window_from_degrees;

/// The two index-space kernels of a coefficient set (p, q, r):
///
///   P_k(mu) = (mu-k)[(mu-1-k) p_k + q_{k-1}] + r_{k-2}
///   Q_k(mu) = (2mu-1-2k) p_k + q_{k-1}
///
/// Every recursion in this crate is a pivot on one P term; Q (the mu
/// derivative of P) couples a logarithmic partner series to its plain
/// companion. Coefficients with negative index are zero.
pub(crate) struct Kernels<S: Scalar> {
    p: Vec<S>,
    q: Vec<S>,
    r: Vec<S>,
    ctx: S::Ctx,
    kmax: usize,
}

impl<S: Scalar> Kernels<S> {
    pub fn new(p: Vec<S>, q: Vec<S>, r: Vec<S>, ctx: S::Ctx) -> Self {
        let kmax = history_window_from_degrees(
            p.len().checked_sub(1),
            q.len().checked_sub(1),
            r.len().checked_sub(1),
        );
        Kernels { p, q, r, ctx, kmax }
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    /// Largest k with a possibly nonzero kernel; also the number of previous
    /// coefficients a recursion step may reach back to.
    pub fn window(&self) -> usize {
        self.kmax
    }

    pub fn coeff_p(&self, k: usize) -> Option<&S> {
        self.p.get(k).filter(|c| !c.is_zero())
    }

    fn coeff_q(&self, k: i64) -> Option<&S> {
        if k < 0 {
            return None;
        }
        self.q.get(k as usize).filter(|c| !c.is_zero())
    }

    fn coeff_r(&self, k: i64) -> Option<&S> {
        if k < 0 {
            return None;
        }
        self.r.get(k as usize).filter(|c| !c.is_zero())
    }

    fn int(&self, v: i64) -> S {
        S::from_i64(v, self.ctx)
    }

    /// P_k at a scalar argument mu (mu may carry an indicial root).
    pub fn p_at(&self, k: usize, mu: &S) -> S {
        let ki = k as i64;
        let inner = match (self.coeff_p(k), self.coeff_q(ki - 1)) {
            (None, None) => None,
            (pk, qk) => {
                let mut acc = match pk {
                    Some(pk) => mu.sub(&self.int(ki + 1)).mul(pk),
                    None => self.int(0),
                };
                if let Some(qk) = qk {
                    acc = acc.add(qk);
                }
                Some(acc)
            }
        };
        let mut out = match inner {
            Some(inner) => mu.sub(&self.int(ki)).mul(&inner),
            None => self.int(0),
        };
        if let Some(rk) = self.coeff_r(ki - 2) {
            out = out.add(rk);
        }
        out
    }

    /// P_k at an integer argument.
    pub fn p_at_int(&self, k: usize, mu: i64) -> S {
        self.p_at(k, &self.int(mu))
    }

    /// Q_k at an integer argument (log coupling never needs a root offset:
    /// it only appears after shifting the root to zero).
    pub fn q_at_int(&self, k: usize, mu: i64) -> S {
        let ki = k as i64;
        let mut acc = match self.coeff_p(k) {
            Some(pk) => self.int(2 * mu - 1 - 2 * ki).mul(pk),
            None => self.int(0),
        };
        if let Some(qk) = self.coeff_q(ki - 1) {
            acc = acc.add(qk);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{CRat, Rat};
    use num::Zero;

    fn c(v: i64) -> CRat {
        CRat::new(Rat::from_integer(v.into()), Rat::zero())
    }

    fn rat_of(s: &CRat) -> i64 {
        assert!(s.im.is_zero() && s.re.is_integer());
        num::ToPrimitive::to_i64(&s.re.to_integer()).unwrap()
    }

    #[test]
    fn kernels_of_the_shifted_integer_pair_problem() {
        // coefficients p = z, q = 3, r = z
        let k = Kernels::new(vec![c(0), c(1)], vec![c(3)], vec![c(0), c(1)], ());
        assert_eq!(k.window(), 3);
        // P_1(mu) = (mu-1)(mu+1)
        for mu in [-2i64, 0, 1, 2, 5] {
            assert_eq!(rat_of(&k.p_at_int(1, mu)), (mu - 1) * (mu + 1));
        }
        // P_2 vanishes identically, P_3 = r_1 = 1
        assert!(crate::numerics::Scalar::is_zero(&k.p_at_int(2, 7)));
        assert_eq!(rat_of(&k.p_at_int(3, 7)), 1);
        // Q_1(mu) = 2 mu
        for mu in [0i64, 1, 4] {
            assert_eq!(rat_of(&k.q_at_int(1, mu)), 2 * mu);
        }
    }

    #[test]
    fn kernels_of_the_degenerate_problem() {
        // coefficients p = z, q = 1, r = z
        let k = Kernels::new(vec![c(0), c(1)], vec![c(1)], vec![c(0), c(1)], ());
        // P_1(mu) = (mu-1)^2, Q_1(mu) = 2(mu-1)
        for mu in [0i64, 1, 3, 10] {
            assert_eq!(rat_of(&k.p_at_int(1, mu)), (mu - 1) * (mu - 1));
            assert_eq!(rat_of(&k.q_at_int(1, mu)), 2 * (mu - 1));
        }
        assert_eq!(rat_of(&k.p_at_int(3, 9)), 1);
    }

    #[test]
    fn taylor_pivot_kernel() {
        // p = 1, q = 0, r = -1: P_0(mu) = mu(mu-1), P_2 = -1
        let k = Kernels::new(vec![c(1)], vec![], vec![c(-1)], ());
        assert_eq!(k.window(), 2);
        assert_eq!(rat_of(&k.p_at_int(0, 5)), 20);
        assert_eq!(rat_of(&k.p_at_int(2, 5)), -1);
        assert!(crate::numerics::Scalar::is_zero(&k.p_at_int(1, 5)));
    }
}
