//! Series solutions of `𝔻_α^n y + p_{n-1} 𝔻_α^{n-1} y + ... + p_0 y = 0`
//! with data `𝔻_α^k y(0) = b_k`.
//!
//! Initial data are values of the *iterated Caputo–Djrbashian* derivatives
//! at 0, not ordinary derivatives. With `y = Σ a_m t^{αm}` they fix
//! `a_k = b_k / Γ(kα+1)` for `k < n`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extreal::{ExtReal, SignedLogSum};
use crate::fractional::{caputo_iterate, iterate_log_multiplier};
use crate::series::{convolve, AlphaSeries};

/// Default slack on the root-test statistic in [`majorant_check`].
pub const MAJORANT_TOLERANCE: f64 = 0.05;

/// A sequential fractional Cauchy problem of order `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyProblem {
    alpha: f64,
    p: Vec<AlphaSeries>,
    polynomial: Vec<bool>,
    b: Vec<f64>,
}

impl CauchyProblem {
    /// `p[k]` is the coefficient of `𝔻_α^k y`; `b[k] = 𝔻_α^k y(0)`.
    pub fn new(alpha: f64, p: Vec<AlphaSeries>, b: Vec<f64>) -> Result<Self> {
        const OP: &str = "cauchy_problem";
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(OP, format!("alpha = {alpha} must be positive")));
        }
        if p.is_empty() {
            return Err(Error::argument(OP, "order n must be at least 1"));
        }
        if p.len() != b.len() {
            return Err(Error::argument(
                OP,
                format!("{} coefficient series but {} initial values", p.len(), b.len()),
            ));
        }
        if let Some(k) = p.iter().position(|s| s.alpha() != alpha) {
            return Err(Error::argument(
                OP,
                format!("p_{k} has alpha {} but the problem has {alpha}", p[k].alpha()),
            ));
        }
        if let Some(k) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::argument(OP, format!("b_{k} is not finite")));
        }
        let polynomial = vec![false; p.len()];
        Ok(CauchyProblem {
            alpha,
            p,
            polynomial,
            b,
        })
    }

    /// Marks `p_k` as a polynomial in `t^α`, so it may be zero-extended.
    pub fn with_polynomial(mut self, k: usize) -> Result<Self> {
        match self.polynomial.get_mut(k) {
            Some(flag) => {
                *flag = true;
                Ok(self)
            }
            None => Err(Error::argument("cauchy_problem", format!("no coefficient p_{k}"))),
        }
    }

    pub fn with_all_polynomial(mut self) -> Self {
        self.polynomial.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[AlphaSeries] {
        &self.p
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn is_polynomial(&self, k: usize) -> bool {
        self.polynomial[k]
    }

    pub fn all_polynomial(&self) -> bool {
        self.polynomial.iter().all(|&f| f)
    }

    /// `ρ = min ρ_k` in units of `z = t^α`; polynomial coefficients do not
    /// restrict it.
    pub fn radius(&self) -> f64 {
        self.p
            .iter()
            .zip(&self.polynomial)
            .filter(|(_, &poly)| !poly)
            .map(|(s, _)| s.nominal_radius())
            .fold(f64::INFINITY, f64::min)
    }

    /// Degree of `p_k` in `z = t^α`, `None` if `p_k ≡ 0`.
    pub fn degree(&self, k: usize) -> Option<usize> {
        self.p[k].coeffs().iter().rposition(|c| !c.is_zero())
    }

    /// `p_{j,k}`, the coefficient of `t^{αj}` in `p_k`.
    fn p_coeff(&self, k: usize, j: usize) -> ExtReal {
        self.p[k].coeff(j)
    }
}

/// The solution `y` of a [`CauchyProblem`], truncated at order `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSeries {
    pub series: AlphaSeries,
    /// `1/ρ`: the root-test bound `limsup |a_p|^{1/p} <= 1/ρ` in units of
    /// `t^α` (0 for polynomial coefficients).
    pub majorant_rate: f64,
    /// `a_k Γ(kα+1)` for `k < n`, i.e. the initial data as seeded.
    pub seeded: Vec<f64>,
    /// Indices whose recurrence sum cancelled below resolution and were set
    /// to zero.
    pub cancelled: Vec<usize>,
}

/// Solves the problem to truncation order `order` (`N`).
///
/// Each non-polynomial `p_k` must store at least `N - n + 1` coefficients.
pub fn solve_cauchy(prob: &CauchyProblem, order: usize) -> Result<SolutionSeries> {
    const OP: &str = "solve_cauchy";
    let n = prob.n();
    let alpha = prob.alpha();
    if order < n {
        return Err(Error::argument(OP, format!("N = {order} is below the equation order n = {n}")));
    }
    let needed = order - n;
    for k in 0..n {
        let have = prob.p[k].order();
        if have < needed && !prob.is_polynomial(k) {
            return Err(Error::argument(
                OP,
                format!(
                    "p_{k} has truncation order {have} but N - n = {needed} is required \
                     (short by {}); supply more coefficients or flag it polynomial",
                    needed - have
                ),
            ));
        }
    }

    let mut a = Vec::with_capacity(order + 1);
    for (k, &bk) in prob.b.iter().enumerate() {
        let ln_gamma = libm::lgamma_r(k as f64 * alpha + 1.0).0;
        a.push(ExtReal::from_f64(bk).scale_log(-ln_gamma));
    }
    // derivs[k][s] = a_{s+k} Γ((s+k)α+1)/Γ(sα+1): coefficients of 𝔻_α^k y
    let mut derivs: Vec<Vec<ExtReal>> = vec![Vec::with_capacity(needed + 1); n];
    let mut cancelled = Vec::new();
    for m in 0..=needed {
        for (k, dk) in derivs.iter_mut().enumerate() {
            dk.push(a[m + k].scale_log(iterate_log_multiplier(alpha, k, m)));
        }
        let mut acc = SignedLogSum::new();
        for (k, dk) in derivs.iter().enumerate() {
            for (s, &d) in dk.iter().enumerate() {
                let p = prob.p_coeff(k, m - s);
                if !p.is_zero() && !d.is_zero() {
                    acc.push(-(d * p));
                }
            }
        }
        let sum = acc.finish();
        if sum.cancelled {
            cancelled.push(m + n);
        }
        a.push(sum.value.scale_log(-iterate_log_multiplier(alpha, n, m)));
    }

    let radius = prob.radius();
    let seeded = (0..n)
        .map(|k| a[k].scale_log(libm::lgamma_r(k as f64 * alpha + 1.0).0).to_f64())
        .collect();
    let series = AlphaSeries::new(alpha, a)?.with_radius(radius)?;
    Ok(SolutionSeries {
        series,
        majorant_rate: 1.0 / radius,
        seeded,
        cancelled,
    })
}

/// Coefficients of `𝔻_α^n y + Σ p_k 𝔻_α^k y`. Products with polynomial
/// `p_k` are kept in full so the truncation tail of `y` shows up.
fn residual_series(prob: &CauchyProblem, y: &AlphaSeries) -> Result<AlphaSeries> {
    let n = prob.n();
    let iterate = |j: usize| -> Result<AlphaSeries> {
        if j == 0 {
            Ok(y.clone())
        } else {
            caputo_iterate(y, j).map(|it| it.series)
        }
    };
    let mut total = iterate(n)?;
    for k in 0..n {
        let dk = iterate(k)?;
        let pk = &prob.p[k];
        let order = if prob.is_polynomial(k) {
            dk.order() + pk.order()
        } else {
            dk.order().min(pk.order())
        };
        let term = AlphaSeries::new(prob.alpha(), convolve(dk.coeffs(), pk.coeffs(), order))?;
        total = total.add_extended(&term)?;
    }
    Ok(total)
}

/// `|𝔻_α^n y + Σ p_k 𝔻_α^k y|(t)` at each grid point.
pub fn residual(prob: &CauchyProblem, y: &SolutionSeries, t_grid: &[f64]) -> Result<Vec<f64>> {
    const OP: &str = "residual";
    let radius = prob.radius();
    let alpha = prob.alpha();
    for &t in t_grid {
        if !(t >= 0.0) || !t.is_finite() || t.powf(alpha) >= radius {
            return Err(Error::domain(
                OP,
                format!("t = {t} must satisfy 0 <= t and t^alpha < {radius}"),
            ));
        }
    }
    let r = residual_series(prob, &y.series)?;
    t_grid
        .par_iter()
        .map(|&t| r.evaluate(t).map(|v| v.abs().to_f64()))
        .collect()
}

/// Root-test diagnostic for the solution coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantReport {
    pub r: f64,
    /// `max_{p in [N/2, N]} |a_p|^{1/p} r^α`.
    pub statistic: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// Smallest `M` with `|p_{j,k}| <= M / r^{jα}` over the stored
    /// coefficients.
    pub coefficient_bound: f64,
}

/// Checks `|a_p|^{1/p} r^α <= 1 + tol` on the upper half of the
/// coefficients, for `r^α` inside the coefficient radius.
pub fn majorant_check(prob: &CauchyProblem, y: &SolutionSeries, r: f64) -> Result<MajorantReport> {
    majorant_check_with(prob, y, r, MAJORANT_TOLERANCE)
}

pub fn majorant_check_with(
    prob: &CauchyProblem,
    y: &SolutionSeries,
    r: f64,
    tol: f64,
) -> Result<MajorantReport> {
    const OP: &str = "majorant_check";
    let radius = prob.radius();
    let ln_ra = prob.alpha() * r.ln();
    if !(r > 0.0) || !r.is_finite() || ln_ra >= radius.ln() {
        return Err(Error::argument(
            OP,
            format!("r = {r} must be positive with r^alpha below the radius {radius}"),
        ));
    }
    let coeffs = y.series.coeffs();
    let big_n = coeffs.len() - 1;
    let statistic = (big_n.div_ceil(2).max(1)..=big_n)
        .map(|p| {
            let c = coeffs[p];
            if c.is_zero() {
                0.0
            } else {
                (c.logmag() / p as f64 + ln_ra).exp()
            }
        })
        .fold(0.0, f64::max);
    let coefficient_bound = prob
        .p
        .iter()
        .flat_map(|s| s.coeffs().iter().enumerate())
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| c.logmag() + j as f64 * ln_ra)
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();
    Ok(MajorantReport {
        r,
        statistic,
        tolerance: tol,
        holds: statistic <= 1.0 + tol,
        coefficient_bound,
    })
}
