//! Coefficient sequences `a_n` of entire functions, stored or closed-form.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::fractional::EntireCoeffs;
use crate::special::log_gamma_shift;

/// Read access to the Taylor coefficients of `f(z) = Σ a_n z^n`.
pub trait CoefficientSequence: Sync {
    /// Number of stored coefficients, or `None` for a closed form defined
    /// for every `n`.
    fn stored_len(&self) -> Option<usize>;

    fn coeff(&self, n: usize) -> ExtReal;

    /// `true` if the stored coefficients are a truncation of a longer
    /// series, so the central index must stay clear of the end.
    fn is_truncation(&self) -> bool {
        self.stored_len().is_some()
    }

    /// `ln|a_n| - ln|a_m|`. Closed forms override this with a stable
    /// formula.
    fn log_ratio(&self, n: usize, m: usize) -> f64 {
        self.coeff(n).logmag() - self.coeff(m).logmag()
    }

    /// `ln|a_n|` is concave in `n` and no coefficient vanishes, so
    /// `|a_n| r^n` is unimodal for every `r`.
    fn log_concave(&self) -> bool {
        false
    }

    /// Index of the first negative coefficient, if any.
    fn first_negative(&self) -> Option<usize>;
}

impl CoefficientSequence for EntireCoeffs {
    fn stored_len(&self) -> Option<usize> {
        Some(self.len())
    }

    fn coeff(&self, n: usize) -> ExtReal {
        self.coeffs().get(n).copied().unwrap_or(ExtReal::ZERO)
    }

    fn is_truncation(&self) -> bool {
        !self.is_polynomial()
    }

    fn first_negative(&self) -> Option<usize> {
        self.coeffs().iter().position(|c| c.sign() < 0)
    }
}

/// Coefficients `λ^n / Γ(nα+1)` of `E_α(λz)`, for every `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MittagLefflerSeries {
    alpha: f64,
    lambda: f64,
}

impl MittagLefflerSeries {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        const OP: &str = "mittag_leffler_series";
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(OP, format!("alpha = {alpha} must be positive")));
        }
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::domain(OP, format!("lambda = {lambda} must be finite and nonzero")));
        }
        Ok(MittagLefflerSeries { alpha, lambda })
    }

    /// `exp(z) = E_1(z)`.
    pub fn exp() -> Self {
        MittagLefflerSeries {
            alpha: 1.0,
            lambda: 1.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The first `len` coefficients as a stored vector.
    pub fn truncate(&self, len: usize) -> Result<EntireCoeffs> {
        crate::fractional::mittag_leffler_coeffs(self.alpha, self.lambda, len)
    }
}

impl CoefficientSequence for MittagLefflerSeries {
    fn stored_len(&self) -> Option<usize> {
        None
    }

    fn coeff(&self, n: usize) -> ExtReal {
        let sign = if self.lambda < 0.0 && n % 2 == 1 { -1 } else { 1 };
        let ln_gamma = libm::lgamma_r(n as f64 * self.alpha + 1.0).0;
        ExtReal::from_log(sign, n as f64 * self.lambda.abs().ln() - ln_gamma)
    }

    fn log_ratio(&self, n: usize, m: usize) -> f64 {
        let shift = |lo: usize, hi: usize| {
            let steps = (hi - lo) as f64;
            steps * self.lambda.abs().ln() - log_gamma_shift(lo as f64 * self.alpha + 1.0, steps * self.alpha)
        };
        if n >= m {
            shift(m, n)
        } else {
            -shift(n, m)
        }
    }

    fn log_concave(&self) -> bool {
        true
    }

    fn first_negative(&self) -> Option<usize> {
        (self.lambda < 0.0).then_some(1)
    }
}
