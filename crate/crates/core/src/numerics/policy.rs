use crate::error::{Error, Result};

/// Working precision chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPlan {
    /// Correct decimal digits requested in the result.
    pub target_digits: u32,
    /// Extra decimal digits absorbing cancellation between large terms.
    pub guard_digits: u32,
    /// Binary working precision for the whole computation.
    pub working_bits: usize,
}

/// Decide the working precision for `target_digits` correct digits when the
/// largest intermediate term is around 10^`max_term_log10` in magnitude.
///
/// Alternating series cancel their large terms against each other, so every
/// decade of intermediate growth costs one decade of the final answer; the
/// guard covers that loss plus a fixed margin of 10 digits.
pub fn plan_precision(target_digits: u32, max_term_log10: f64) -> Result<PrecisionPlan> {
    if target_digits < 1 {
        return Err(Error::InvalidPrecision);
    }
    if !max_term_log10.is_finite() {
        return Err(Error::NonFiniteMagnitude(max_term_log10));
    }
    let guard_digits = max_term_log10.ceil().max(0.0) as u32 + 10;
    let digits = target_digits as f64 + guard_digits as f64;
    let working_bits = (digits * std::f64::consts::LOG2_10).ceil() as usize;
    Ok(PrecisionPlan {
        target_digits,
        guard_digits,
        working_bits,
    })
}
