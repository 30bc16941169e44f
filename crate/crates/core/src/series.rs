//! Truncated α-analytic series `u(t) = Σ_{m=0}^{N} u_m t^{αm}`.

use crate::error::{Error, Result};
use crate::extreal::{ExtReal, SignedLogSum, SumOutcome};

/// A truncated power series in `t^α` with extended-range coefficients.
///
/// `coeffs[m]` multiplies `t^{αm}`. The truncation order `N` is
/// `coeffs.len() - 1` and is never extended implicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSeries {
    alpha: f64,
    coeffs: Vec<ExtReal>,
    nominal_radius: f64,
}

/// Shorthand for [`AlphaSeries::from_f64s`].
pub fn make_series(alpha: f64, coeffs: &[f64]) -> Result<AlphaSeries> {
    AlphaSeries::from_f64s(alpha, coeffs)
}

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("alpha = {alpha} must be positive")))
    }
}

impl AlphaSeries {
    pub fn new(alpha: f64, coeffs: Vec<ExtReal>) -> Result<Self> {
        check_alpha("make_series", alpha)?;
        if coeffs.is_empty() {
            return Err(Error::argument("make_series", "coefficient list is empty"));
        }
        Ok(AlphaSeries {
            alpha,
            coeffs,
            nominal_radius: f64::INFINITY,
        })
    }

    pub fn from_f64s(alpha: f64, coeffs: &[f64]) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::argument(
                "make_series",
                format!("coefficient {i} is not finite"),
            ));
        }
        Self::new(alpha, coeffs.iter().map(|&c| ExtReal::from_f64(c)).collect())
    }

    /// The zero series of the given truncation order.
    pub fn zero(alpha: f64, order: usize) -> Result<Self> {
        Self::new(alpha, vec![ExtReal::ZERO; order + 1])
    }

    /// Sets the radius of convergence of the associated series in `z = t^α`.
    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::domain(
                "make_series",
                format!("nominal radius {radius} must be positive"),
            ));
        }
        self.nominal_radius = radius;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[ExtReal] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ExtReal> {
        self.coeffs
    }

    pub fn coeff(&self, m: usize) -> ExtReal {
        self.coeffs.get(m).copied().unwrap_or(ExtReal::ZERO)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn nominal_radius(&self) -> f64 {
        self.nominal_radius
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The first `order + 1` coefficients; a no-op if already shorter.
    pub fn truncated(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        AlphaSeries {
            coeffs: self.coeffs[..keep].to_vec(),
            ..*self
        }
    }

    /// Pads with zeros up to `order`. Only meaningful when the stored
    /// coefficients are the whole function (a polynomial in `t^α`).
    pub fn zero_extended(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < order + 1 {
            coeffs.resize(order + 1, ExtReal::ZERO);
        }
        AlphaSeries { coeffs, ..*self }
    }

    pub(crate) fn from_parts(alpha: f64, coeffs: Vec<ExtReal>, nominal_radius: f64) -> Self {
        debug_assert!(alpha > 0.0 && !coeffs.is_empty());
        AlphaSeries {
            alpha,
            coeffs,
            nominal_radius,
        }
    }

    fn check_same_alpha(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.alpha == other.alpha {
            Ok(())
        } else {
            Err(Error::argument(
                op,
                format!("alpha mismatch: {} vs {}", self.alpha, other.alpha),
            ))
        }
    }

    /// `Σ u_m t^{αm}` for `t >= 0`, summed sign-split in log space.
    pub fn evaluate(&self, t: f64) -> Result<ExtReal> {
        self.evaluate_detailed(t).map(|o| o.value)
    }

    pub fn evaluate_detailed(&self, t: f64) -> Result<SumOutcome> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain("evaluate", format!("t = {t} must be finite and >= 0")));
        }
        if t == 0.0 {
            return Ok(SumOutcome {
                value: self.coeffs[0],
                cancelled: false,
            });
        }
        let step = self.alpha * t.ln();
        if step >= self.nominal_radius.ln() {
            log::warn!(
                "evaluating at t^alpha = {} outside the nominal radius {}",
                (step).exp(),
                self.nominal_radius
            );
        }
        let mut acc = SignedLogSum::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc.push_log(c.sign(), c.logmag() + m as f64 * step);
            }
        }
        Ok(acc.finish())
    }

    /// Coefficient-wise sum, truncated to the shorter order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_alpha(other, "add")?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(AlphaSeries {
            alpha: self.alpha,
            coeffs,
            nominal_radius: self.nominal_radius.min(other.nominal_radius),
        })
    }

    /// Coefficient-wise sum treating missing coefficients of the shorter
    /// operand as zero; the result keeps the longer order.
    pub fn add_extended(&self, other: &Self) -> Result<Self> {
        self.check_same_alpha(other, "add")?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|m| self.coeff(m) + other.coeff(m)).collect();
        Ok(AlphaSeries {
            alpha: self.alpha,
            coeffs,
            nominal_radius: self.nominal_radius.min(other.nominal_radius),
        })
    }

    pub fn negate(&self) -> Self {
        AlphaSeries {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
            ..*self
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: ExtReal) -> Self {
        AlphaSeries {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
            ..*self
        }
    }

    /// Truncated Cauchy product `c_m = Σ_{s=0}^{m} a_s b_{m-s}` up to the
    /// shorter order.
    pub fn cauchy_product(&self, other: &Self) -> Result<Self> {
        self.check_same_alpha(other, "cauchy_product")?;
        let order = self.order().min(other.order());
        Ok(AlphaSeries {
            alpha: self.alpha,
            coeffs: convolve(&self.coeffs, &other.coeffs, order),
            nominal_radius: self.nominal_radius.min(other.nominal_radius),
        })
    }
}

/// `c_m = Σ a_s b_{m-s}` for `m <= order`, missing entries read as zero.
pub(crate) fn convolve(a: &[ExtReal], b: &[ExtReal], order: usize) -> Vec<ExtReal> {
    (0..=order)
        .map(|m| {
            let mut acc = SignedLogSum::new();
            let lo = m.saturating_sub(b.len().saturating_sub(1));
            let hi = m.min(a.len().saturating_sub(1));
            for s in lo..=hi {
                acc.push(a[s] * b[m - s]);
            }
            acc.finish().value
        })
        .collect()
}
