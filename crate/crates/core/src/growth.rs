//! Predicted growth order of solutions with polynomial coefficients, and an
//! end-to-end check of the prediction against a solved series.
//!
//! Degrees `d_k` are degrees of `p_k` as polynomials in `z = t^α`, not in
//! `t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractional::EntireCoeffs;
use crate::ode::{solve_cauchy, CauchyProblem};
use crate::wiman_valiron::{order_estimate_with, OrderFitConfig, WVSample};

/// Theoretical order of the solutions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderPrediction {
    /// `σ₀ = (1/α) max_k (d_k/(n-k) + 1)` over nonzero `p_k`.
    pub sigma_upper: f64,
    /// `(1/α)(1 + d₀/n)`, present when `d_k/(n-k) <= d₀/n` for all `k`.
    pub sigma_exact: Option<f64>,
    pub dominance_holds: bool,
}

/// Predicts the order for `n` coefficients with degrees `degrees[k]`
/// (`None` for `p_k ≡ 0`). `p_0` must be nonzero.
pub fn predict_order(alpha: f64, n: usize, degrees: &[Option<u64>]) -> Result<OrderPrediction> {
    const OP: &str = "predict_order";
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(OP, format!("alpha = {alpha} must be positive")));
    }
    if n == 0 {
        return Err(Error::argument(OP, "n must be at least 1"));
    }
    if degrees.len() != n {
        return Err(Error::argument(OP, format!("expected {n} degrees, got {}", degrees.len())));
    }
    let d0 = degrees[0].ok_or_else(|| Error::argument(OP, "p_0 must not vanish identically"))?;

    let nn = n as u64;
    // d_k/(n-k) <= d_0/n, compared exactly as d_k·n <= d_0·(n-k)
    let dominance_holds = degrees
        .iter()
        .enumerate()
        .filter_map(|(k, d)| d.map(|d| (k as u64, d)))
        .all(|(k, d)| u128::from(d) * u128::from(nn) <= u128::from(d0) * u128::from(nn - k));

    let exact = (1.0 + d0 as f64 / n as f64) / alpha;
    let sigma_upper = if dominance_holds {
        exact
    } else {
        degrees
            .iter()
            .enumerate()
            .filter_map(|(k, d)| d.map(|d| (d as f64 / (n - k) as f64 + 1.0) / alpha))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(OrderPrediction {
        sigma_upper,
        sigma_exact: dominance_holds.then_some(exact),
        dominance_holds,
    })
}

/// Order bound `(m+1)/α` for `𝔻_α y = P y` with `deg P = m`.
pub fn kochubei_order(alpha: f64, poly_degree: u64) -> f64 {
    (poly_degree as f64 + 1.0) / alpha
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Tolerances for [`verify_sharp_order_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpOrderConfig {
    /// Relative tolerance on the fitted order.
    pub tolerance: f64,
    /// Smallest truncation order accepted.
    pub min_terms: usize,
    pub fit: OrderFitConfig,
}

impl SharpOrderConfig {
    pub fn standard() -> Self {
        SharpOrderConfig {
            tolerance: 0.15,
            min_terms: 1,
            fit: OrderFitConfig::default(),
        }
    }

    /// 5% tolerance; requires `N >= 10^4`.
    pub fn strict() -> Self {
        SharpOrderConfig {
            tolerance: 0.05,
            min_terms: 10_000,
            fit: OrderFitConfig::default(),
        }
    }
}

impl Default for SharpOrderConfig {
    fn default() -> Self {
        Self::standard()
    }
}

/// Prediction versus fitted order for one solved problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub prediction: OrderPrediction,
    pub degrees: Vec<Option<u64>>,
    pub terms: usize,
    pub empirical: f64,
    /// `|empirical - σ_exact|` under dominance, otherwise
    /// `max(0, empirical - σ_upper)`.
    pub abs_gap: f64,
    /// Absolute tolerance on `abs_gap`.
    pub tolerance: f64,
    pub verdict: Verdict,
    pub samples: Vec<WVSample>,
}

pub fn verify_sharp_order(prob: &CauchyProblem, terms: usize, r_grid: &[f64]) -> Result<GrowthReport> {
    verify_sharp_order_with(prob, terms, r_grid, &SharpOrderConfig::standard())
}

/// Solves `prob` to order `terms`, fits the growth order of the solution
/// (as a series in `z = t^α`) and compares it with [`predict_order`].
pub fn verify_sharp_order_with(
    prob: &CauchyProblem,
    terms: usize,
    r_grid: &[f64],
    cfg: &SharpOrderConfig,
) -> Result<GrowthReport> {
    const OP: &str = "verify_sharp_order";
    if !prob.all_polynomial() {
        return Err(Error::argument(OP, "all coefficients p_k must be flagged polynomial"));
    }
    if prob.b().iter().all(|&b| b == 0.0) {
        return Err(Error::argument(OP, "initial data are all zero; the solution is trivial"));
    }
    if terms < cfg.min_terms {
        return Err(Error::argument(
            OP,
            format!("N = {terms} is below the {} terms this mode requires", cfg.min_terms),
        ));
    }
    let degrees: Vec<Option<u64>> = (0..prob.n()).map(|k| prob.degree(k).map(|d| d as u64)).collect();
    let prediction = predict_order(prob.alpha(), prob.n(), &degrees)?;

    let sol = solve_cauchy(prob, terms)?;
    let f = EntireCoeffs::from(&sol.series);
    let fit = order_estimate_with(&f, r_grid, &cfg.fit)?;

    let (abs_gap, tolerance) = match prediction.sigma_exact {
        Some(exact) => ((fit.order - exact).abs(), cfg.tolerance * exact),
        None => (
            (fit.order - prediction.sigma_upper).max(0.0),
            cfg.tolerance * prediction.sigma_upper,
        ),
    };
    Ok(GrowthReport {
        prediction,
        degrees,
        terms,
        empirical: fit.order,
        abs_gap,
        tolerance,
        verdict: if abs_gap <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        samples: fit.samples,
    })
}
