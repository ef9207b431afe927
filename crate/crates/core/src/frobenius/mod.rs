//! Series solutions around z = 0 for p psi'' + q psi' + r psi = 0 with
//! polynomial coefficients, covering expansion at an ordinary point and all
//! regular-singular cases, including logarithmic second solutions.
//!
//! [`analyze`] inspects a problem and hands out [`SeriesSolution`] handles;
//! a handle can stream exact rational coefficients, stream big-float
//! coefficients at any working precision, evaluate itself to a requested
//! number of decimal digits, or be continued analytically along a path of
//! ordinary points.

mod continuation;
mod evaluate;
pub(crate) mod kernel;
mod stream;

pub use continuation::{ContinuationResult, ContinuationStep};
pub use evaluate::{EvalOptions, EvalResult};
pub use stream::CoeffStream;

use crate::error::{Error, Result};
use crate::numerics::{CRat, Scalar};
use crate::ode::{IndicialKind, IndicialRoots, ODEProblem, OriginKind, Poly, Root, ShiftedProblem};
use kernel::Kernels;

fn poly_scalars<S: Scalar>(p: &Poly, ctx: S::Ctx) -> Vec<S> {
    p.coeffs().iter().map(|c| S::from_crat(c, ctx)).collect()
}

fn kernels_of<S: Scalar>(p: &ODEProblem, ctx: S::Ctx) -> Kernels<S> {
    Kernels::new(poly_scalars(&p.p, ctx), poly_scalars(&p.q, ctx), poly_scalars(&p.r, ctx), ctx)
}

/// Which member of the fundamental system to construct at a regular
/// singular point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionChoice {
    /// Series at the larger indicial root; never carries a logarithm.
    Nu1,
    /// Series at the smaller root: the second member of the fundamental
    /// system, logarithmic whenever the structure demands it.
    Nu2,
    /// Explicitly request the log-bearing partner. Same construction as
    /// [`SolutionChoice::Nu2`] for repeated or integer-separated roots;
    /// an error when the roots do not differ by an integer.
    Log,
}

impl SolutionChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nu1" => Ok(SolutionChoice::Nu1),
            "nu2" => Ok(SolutionChoice::Nu2),
            "log" => Ok(SolutionChoice::Log),
            other => Err(Error::Parse {
                what: "solution choice".into(),
                detail: format!("expected nu1, nu2 or log, got {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug)]
enum Form {
    Taylor { init: (CRat, CRat) },
    Plain { bform: ODEProblem, nu: Root },
    DegenerateLog { shifted: ShiftedProblem },
    IntegerLog { shifted: ShiftedProblem, ell: u32 },
}

/// A single series solution, pinned down up to overall normalization:
/// psi(z) = z^nu * sum_m (a0_m + a1_m log z) z^m.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    origin: OriginKind,
    nu: Root,
    has_log: bool,
    window: usize,
    problem: ODEProblem,
    form: Form,
}

impl SeriesSolution {
    pub fn origin(&self) -> OriginKind {
        self.origin
    }

    /// Exponent of the z^nu prefactor.
    pub fn nu(&self) -> &Root {
        &self.nu
    }

    /// Whether the solution genuinely contains a log z term.
    pub fn has_log(&self) -> bool {
        self.has_log
    }

    /// Number of consecutive small terms required before truncation is
    /// trusted; equals the reach of the recursion.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Radius of convergence of the series (distance from the origin to the
    /// nearest other singular point of the equation).
    pub fn radius(&self) -> f64 {
        self.problem.radius_at(num::complex::Complex64::new(0.0, 0.0))
    }

    pub(crate) fn problem(&self) -> &ODEProblem {
        &self.problem
    }

    /// Stream of coefficient pairs (a0_m, a1_m) at the scalar type's working
    /// context (exact rationals: `ctx = ()`; big floats: `ctx = bits`).
    /// Fails for exact scalars when the indicial root is irrational.
    pub fn coeff_stream<S: Scalar>(&self, ctx: S::Ctx) -> Result<CoeffStream<S>> {
        match &self.form {
            Form::Taylor { init } => {
                let init = (S::from_crat(&init.0, ctx), S::from_crat(&init.1, ctx));
                CoeffStream::taylor(kernels_of(&self.problem, ctx), init)
            }
            Form::Plain { bform, nu } => {
                let nu = nu.to_scalar::<S>(ctx).ok_or_else(|| {
                    Error::InvalidInput(
                        "irrational indicial root cannot be represented exactly".into(),
                    )
                })?;
                CoeffStream::plain_singular(kernels_of(bform, ctx), nu)
            }
            Form::DegenerateLog { shifted } => {
                let mat = shifted.materialize::<S>(ctx)?;
                CoeffStream::degenerate_log(Kernels::new(mat.p, mat.q, mat.r, ctx))
            }
            Form::IntegerLog { shifted, ell } => {
                let mat = shifted.materialize::<S>(ctx)?;
                CoeffStream::integer_log(Kernels::new(mat.p, mat.q, mat.r, ctx), *ell)
            }
        }
    }

    /// First `count` coefficient pairs, collected eagerly.
    pub fn coefficients<S: Scalar>(&self, ctx: S::Ctx, count: usize) -> Result<Vec<(S, S)>> {
        self.coeff_stream::<S>(ctx)?.take(count).collect()
    }
}

/// Classification plus everything needed to construct series solutions.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    origin: OriginKind,
    normalized: ODEProblem,
    roots: Option<IndicialRoots>,
    bform: Option<ODEProblem>,
}

/// Normalize and classify a problem at the origin. Succeeds for every
/// classification; requesting solutions from an irregular singular point
/// fails at that later step.
pub fn analyze(problem: &ODEProblem) -> Result<SolutionSet> {
    let (normalized, _) = problem.normalize();
    let origin = normalized.classify();
    let (roots, bform) = match origin {
        OriginKind::Ordinary | OriginKind::Irregular => (None, None),
        OriginKind::RegularSingularA | OriginKind::RegularSingularB => {
            (Some(normalized.indicial_roots()?), Some(normalized.double_zero_form()?))
        }
    };
    Ok(SolutionSet { origin, normalized, roots, bform })
}

impl SolutionSet {
    pub fn origin(&self) -> OriginKind {
        self.origin
    }

    /// Indicial data; None at an ordinary point or an irregular singularity.
    pub fn roots(&self) -> Option<&IndicialRoots> {
        self.roots.as_ref()
    }

    pub fn normalized(&self) -> &ODEProblem {
        &self.normalized
    }

    fn require_regular_singular(&self) -> Result<()> {
        match self.origin {
            OriginKind::RegularSingularA | OriginKind::RegularSingularB => Ok(()),
            OriginKind::Ordinary => Err(Error::WrongClassification {
                required: "regular singular point".into(),
                found: self.origin.as_str().into(),
            }),
            OriginKind::Irregular => Err(Error::IrregularSingularPoint),
        }
    }

    /// Taylor solution at an ordinary point with psi(0) = init.0 and
    /// psi'(0) = init.1.
    pub fn taylor(&self, init: (CRat, CRat)) -> Result<SeriesSolution> {
        match self.origin {
            OriginKind::Ordinary => {}
            OriginKind::Irregular => return Err(Error::IrregularSingularPoint),
            _ => {
                return Err(Error::WrongClassification {
                    required: "ordinary point".into(),
                    found: self.origin.as_str().into(),
                })
            }
        }
        Ok(SeriesSolution {
            origin: self.origin,
            nu: Root::integer(0),
            has_log: false,
            window: self.normalized.history_window(),
            problem: self.normalized.clone(),
            form: Form::Taylor { init },
        })
    }

    /// Frobenius solution at a regular singular point.
    pub fn frobenius(&self, choice: SolutionChoice) -> Result<SeriesSolution> {
        self.require_regular_singular()?;
        let roots = self.roots.as_ref().expect("regular singular implies roots");
        let bform = self.bform.as_ref().expect("regular singular implies double-zero form");
        let window = bform.history_window();
        let plain = |nu: &Root| SeriesSolution {
            origin: self.origin,
            nu: nu.clone(),
            has_log: false,
            window,
            problem: self.normalized.clone(),
            form: Form::Plain { bform: bform.clone(), nu: nu.clone() },
        };
        match (roots.kind, choice) {
            (_, SolutionChoice::Nu1) => Ok(plain(&roots.nu1)),
            (IndicialKind::NonIntegerDiff, SolutionChoice::Nu2) => Ok(plain(&roots.nu2)),
            (IndicialKind::NonIntegerDiff, SolutionChoice::Log) => Err(Error::NoSuchSolution(
                "indicial roots do not differ by an integer; no logarithmic solution exists"
                    .into(),
            )),
            (IndicialKind::Degenerate, _) => {
                let shifted = bform.shift_index(&roots.nu1)?;
                Ok(SeriesSolution {
                    origin: self.origin,
                    nu: roots.nu1.clone(),
                    has_log: true,
                    window: shifted.history_window(),
                    problem: self.normalized.clone(),
                    form: Form::DegenerateLog { shifted },
                })
            }
            (IndicialKind::IntegerDiff(ell), _) => {
                let shifted = bform.shift_index(&roots.nu1)?;
                let window = shifted.history_window();
                let sol = SeriesSolution {
                    origin: self.origin,
                    nu: roots.nu2.clone(),
                    has_log: true,
                    window,
                    problem: self.normalized.clone(),
                    form: Form::IntegerLog { shifted, ell },
                };
                let has_log = probe_log_scale(&sol, ell)?;
                Ok(SeriesSolution { has_log, ..sol })
            }
        }
    }
}

/// Decide whether the integer-separated second solution truly needs its log
/// term: the coupling constant emitted at the gap index may vanish.
fn probe_log_scale(sol: &SeriesSolution, ell: u32) -> Result<bool> {
    let mut stream = sol.coeff_stream::<CRat>(())?;
    let gap = stream.nth(ell as usize).transpose()?;
    match gap {
        Some((_, b0)) => Ok(!crate::numerics::Scalar::is_zero(&b0)),
        None => Err(Error::RecursionBreakdown { m: ell as usize }),
    }
}
