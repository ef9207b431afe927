use super::evaluate::{core_evaluate, crat_to_c64, EvalOptions};
use super::stream::CoeffStream;
use super::SeriesSolution;
use crate::error::{Error, Result};
use crate::numerics::{ArbComplex, CRat};
use crate::ode::{OriginKind, Root};
use num::complex::Complex64;

/// State of the continued solution at one path point.
#[derive(Clone, Debug)]
pub struct ContinuationStep {
    pub at: CRat,
    pub value: ArbComplex,
    pub derivative: ArbComplex,
    pub terms_used: usize,
}

#[derive(Clone, Debug)]
pub struct ContinuationResult {
    /// One entry per path point, the first being the direct series value.
    pub steps: Vec<ContinuationStep>,
    /// Per-step digit budget actually used (the request plus headroom for
    /// error growth across steps).
    pub step_digits: u32,
}

impl ContinuationResult {
    pub fn last(&self) -> &ContinuationStep {
        self.steps.last().expect("result holds at least one step")
    }
}

fn crat_sub(a: &CRat, b: &CRat) -> CRat {
    CRat::new(&a.re - &b.re, &a.im - &b.im)
}

impl SeriesSolution {
    /// Analytically continue the solution along a polygonal chain of exact
    /// points. The first point must lie inside the series' own disc of
    /// convergence; every later point must lie inside the Taylor disc of its
    /// predecessor and keep a safety margin from the equation's
    /// singularities. Returns value and derivative at every path point.
    pub fn continue_along(&self, path: &[CRat], opts: &EvalOptions) -> Result<ContinuationResult> {
        if path.is_empty() {
            return Err(Error::InvalidInput("continuation path needs at least one point".into()));
        }
        let headroom = (path.len() as f64).log10().ceil().max(0.0) as u32 + 5;
        let step_digits = opts.target_digits + headroom;
        let step_opts = EvalOptions {
            target_digits: step_digits,
            max_terms: opts.max_terms,
            magnitude_hint: None,
            second_derivative: false,
        };

        let first = self.evaluate(&path[0], &step_opts)?;
        let mut value = first.value;
        let mut derivative = first.derivative;
        let mut steps = vec![ContinuationStep {
            at: path[0].clone(),
            value: value.clone(),
            derivative: derivative.clone(),
            terms_used: first.terms_used,
        }];

        let singular_points = self.problem().singularities();
        for i in 1..path.len() {
            let center = &path[i - 1];
            let target = &path[i];
            let u = crat_sub(target, center);
            if num::Zero::is_zero(&u) {
                steps.push(ContinuationStep {
                    at: target.clone(),
                    value: value.clone(),
                    derivative: derivative.clone(),
                    terms_used: 0,
                });
                continue;
            }

            let res = if num::Zero::is_zero(center) {
                // stepping off the expansion point itself: the original
                // series provides the data directly (and is the only option
                // when the origin is a singular point)
                self.evaluate(target, &step_opts)?
            } else {
                let local = self.problem().recenter(center);
                if local.classify() != OriginKind::Ordinary {
                    return Err(Error::StepNearSingularity { step: i });
                }
                let radius = local.radius_at(Complex64::new(0.0, 0.0));
                let abs_u = crat_to_c64(&u).norm();
                // a step strictly beyond the disc is certain to diverge;
                // a step onto the boundary is left to the stopping rule,
                // which converges exactly when the continued solution does
                if abs_u > radius {
                    return Err(Error::OutsideConvergenceDisc { abs_z: abs_u, radius });
                }
                if radius.is_finite() {
                    let tc = crat_to_c64(target);
                    let clearance = singular_points
                        .iter()
                        .map(|s| (tc - s).norm())
                        .fold(f64::INFINITY, f64::min);
                    if clearance < 0.1 * radius {
                        return Err(Error::StepNearSingularity { step: i });
                    }
                }
                let window = local.history_window();
                core_evaluate(&local, &Root::integer(0), window, &u, &step_opts, false, |bits| {
                    let kern = super::kernels_of::<ArbComplex>(&local, bits);
                    CoeffStream::taylor(kern, (value.with_bits(bits), derivative.with_bits(bits)))
                })?
            };
            value = res.value;
            derivative = res.derivative;
            steps.push(ContinuationStep {
                at: target.clone(),
                value: value.clone(),
                derivative: derivative.clone(),
                terms_used: res.terms_used,
            });
        }
        Ok(ContinuationResult { steps, step_digits })
    }
}
