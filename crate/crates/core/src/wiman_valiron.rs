//! Maximal term, central index, growth-order estimates, and a numerical
//! check of `𝒟_α^j f(r) ≈ (ν(r) α)^{jα} f(r) / r^j` on the positive axis.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::LogSum;
use crate::fractional::iterate_log_multiplier;
use crate::io::fmt_g17;
use crate::sequence::CoefficientSequence;

/// Terms more than this many nats below the maximal term are dropped from
/// windowed sums over closed-form sequences.
const WINDOW_NATS: f64 = 40.0;

/// Indices past this are not exactly representable as `f64` steps.
const MAX_CENTRAL_INDEX: usize = 1 << 52;

/// Maximal term and central index of `f` at radius `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WVSample {
    pub r: f64,
    /// `ln μ(r) = max_n ln(|a_n| r^n)`.
    pub log_mu: f64,
    /// `ν(r)`, the largest index attaining `μ(r)`.
    pub nu: u64,
    /// `ln Σ |a_n| r^n`, an upper bound for `ln M(r)` (equal to `ln f(r)`
    /// for nonnegative coefficients).
    #[serde(rename = "log_M_lower")]
    pub log_m_lower: f64,
}

/// Sample plus `ln Σ_m w_m G_j(m-j)` for each requested `j`, with weights
/// `w_m = |a_m| r^m / μ(r)`; `ln_weights` is `ln Σ w_m`.
struct Scan {
    sample: WVSample,
    ln_weights: f64,
    ln_moments: Vec<f64>,
}

fn check_r(op: &'static str, r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("r = {r} must be positive and finite")))
    }
}

fn scan<S: CoefficientSequence + ?Sized>(f: &S, r: f64, moments: Option<(f64, &[usize])>) -> Result<Scan> {
    let ln_r = r.ln();
    let (alpha, js) = moments.unwrap_or((1.0, &[]));
    match f.stored_len() {
        Some(len) => Ok(scan_stored(f, len, ln_r, r, alpha, js)),
        None => scan_closed_form(f, ln_r, r, alpha, js),
    }
}

fn scan_stored<S: CoefficientSequence + ?Sized>(
    f: &S,
    len: usize,
    ln_r: f64,
    r: f64,
    alpha: f64,
    js: &[usize],
) -> Scan {
    let levels: Vec<f64> = (0..len)
        .map(|n| {
            let c = f.coeff(n);
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                c.logmag() + n as f64 * ln_r
            }
        })
        .collect();
    let max = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Scan {
            sample: WVSample {
                r,
                log_mu: max,
                nu: 0,
                log_m_lower: max,
            },
            ln_weights: max,
            ln_moments: vec![max; js.len()],
        };
    }
    let tie = 1e-12 * max.abs().max(1.0);
    let nu = levels.iter().rposition(|&l| l >= max - tie).unwrap_or(0);

    let mut weights = LogSum::new();
    let mut moments = vec![LogSum::new(); js.len()];
    for (m, &l) in levels.iter().enumerate() {
        if l == f64::NEG_INFINITY {
            continue;
        }
        let w = l - max;
        weights.push_log(w);
        for (acc, &j) in moments.iter_mut().zip(js) {
            if m >= j {
                acc.push_log(w + iterate_log_multiplier(alpha, j, m - j));
            }
        }
    }
    Scan {
        sample: WVSample {
            r,
            log_mu: max,
            nu: nu as u64,
            log_m_lower: max + weights.ln(),
        },
        ln_weights: weights.ln(),
        ln_moments: moments.iter().map(LogSum::ln).collect(),
    }
}

/// Central index of a log-concave closed form: the last `n` whose
/// increment `ln|a_n/a_{n-1}| + ln r` is not negative.
fn central_index_log_concave<S: CoefficientSequence + ?Sized>(f: &S, r: f64) -> Result<usize> {
    let ln_r = r.ln();
    let tie = 1e-12 * ln_r.abs().max(1.0);
    let rising = |n: usize| f.log_ratio(n, n - 1) + ln_r >= -tie;
    if !rising(1) {
        return Ok(0);
    }
    let (mut lo, mut hi) = (1usize, 2usize);
    while rising(hi) {
        lo = hi;
        hi *= 2;
        if hi > MAX_CENTRAL_INDEX {
            return Err(Error::domain(
                "wv_sample",
                format!("central index at r = {r} exceeds 2^52, beyond f64 index resolution"),
            ));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if rising(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn scan_closed_form<S: CoefficientSequence + ?Sized>(
    f: &S,
    ln_r: f64,
    r: f64,
    alpha: f64,
    js: &[usize],
) -> Result<Scan> {
    assert!(
        f.log_concave(),
        "closed-form sequences must be log-concave for windowed sampling"
    );
    let nu = central_index_log_concave(f, r)?;
    let log_mu = f.coeff(nu).logmag() + nu as f64 * ln_r;
    // level of term m relative to the maximal term
    let level = |m: usize| f.log_ratio(m, nu) + (m as f64 - nu as f64) * ln_r;

    // Half-width where the terms have dropped by one nat. Wide, smooth
    // windows are summed on a lattice of stride ~ width/8: the trapezoid
    // rule on such sums is accurate to far below double precision, and the
    // stride cancels from every ratio taken below.
    let mut half = 1usize;
    while level(nu + half) > -1.0 {
        half *= 2;
    }
    let stride = if half >= 64 && nu > 16 * half { half / 8 } else { 1 };

    let mut weights = LogSum::new();
    let mut moments = vec![LogSum::new(); js.len()];
    let mut visit = |m: usize, w: f64| {
        weights.push_log(w);
        for (acc, &j) in moments.iter_mut().zip(js) {
            if m >= j {
                acc.push_log(w + iterate_log_multiplier(alpha, j, m - j));
            }
        }
    };
    visit(nu, 0.0);
    let mut m = nu + stride;
    loop {
        let w = level(m);
        if w < -WINDOW_NATS {
            break;
        }
        visit(m, w);
        m += stride;
    }
    let mut m = nu;
    while m >= stride {
        m -= stride;
        let w = level(m);
        if w < -WINDOW_NATS {
            break;
        }
        visit(m, w);
    }
    let ln_stride = (stride as f64).ln();
    Ok(Scan {
        sample: WVSample {
            r,
            log_mu,
            nu: nu as u64,
            log_m_lower: log_mu + weights.ln() + ln_stride,
        },
        ln_weights: weights.ln(),
        ln_moments: moments.iter().map(LogSum::ln).collect(),
    })
}

/// `μ(r)`, `ν(r)` and `ln Σ|a_n| r^n` for one radius.
///
/// Stored sequences are scanned exhaustively; closed forms must be
/// log-concave and are searched around the peak.
pub fn wv_sample<S: CoefficientSequence + ?Sized>(f: &S, r: f64) -> Result<WVSample> {
    check_r("wv_sample", r)?;
    scan(f, r, None).map(|s| s.sample)
}

/// [`wv_sample`] over a grid, evaluated in parallel; output order follows
/// the grid.
pub fn wv_samples<S: CoefficientSequence + ?Sized>(f: &S, r_grid: &[f64]) -> Result<Vec<WVSample>> {
    for &r in r_grid {
        check_r("wv_sample", r)?;
    }
    r_grid.par_iter().map(|&r| scan(f, r, None).map(|s| s.sample)).collect()
}

/// `true` if `ν` never decreases along increasing `r`.
pub fn central_index_monotone(samples: &[WVSample]) -> bool {
    samples.windows(2).all(|w| w[0].r > w[1].r || w[0].nu <= w[1].nu)
}

/// `points` radii from `r_min` to `r_max`, equally spaced in `ln r`.
pub fn geometric_grid(r_min: f64, r_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() || points < 2 {
        return Err(Error::argument(
            "geometric_grid",
            format!("need 0 < r_min < r_max and at least 2 points, got [{r_min}, {r_max}] x {points}"),
        ));
    }
    let (a, b) = (r_min.ln(), r_max.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => r_min,
            _ if i == points - 1 => r_max,
            _ => (a + step * i as f64).exp(),
        })
        .collect())
}

/// Median of all pairwise slopes `(y_j - y_i)/(x_j - x_i)` with `x_i < x_j`.
pub fn theil_sen(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::argument("theil_sen", "x and y lengths differ"));
    }
    let mut slopes = Vec::with_capacity(xs.len() * xs.len() / 2);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let dx = xs[j] - xs[i];
            if dx != 0.0 {
                slopes.push((ys[j] - ys[i]) / dx);
            }
        }
    }
    if slopes.is_empty() {
        return Err(Error::argument("theil_sen", "need two points with distinct x"));
    }
    slopes.sort_by(f64::total_cmp);
    let mid = slopes.len() / 2;
    Ok(if slopes.len() % 2 == 1 {
        slopes[mid]
    } else {
        0.5 * (slopes[mid - 1] + slopes[mid])
    })
}

/// Grid requirements for [`order_estimate_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderFitConfig {
    pub min_points: usize,
    /// Minimum span `log10(r_max / r_min)`.
    pub min_decades: f64,
    /// For truncated sequences of order `N`, `ν(r_max)` must stay below
    /// `saturation_fraction * N`.
    pub saturation_fraction: f64,
}

impl Default for OrderFitConfig {
    fn default() -> Self {
        OrderFitConfig {
            min_points: 20,
            min_decades: 4.0,
            saturation_fraction: 0.8,
        }
    }
}

/// Result of a growth-order fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub order: f64,
    pub samples: Vec<WVSample>,
}

/// Theil–Sen slope of `ln ν` against `ln r` with the default grid rules.
pub fn order_estimate<S: CoefficientSequence + ?Sized>(f: &S, r_grid: &[f64]) -> Result<f64> {
    order_estimate_with(f, r_grid, &OrderFitConfig::default()).map(|fit| fit.order)
}

pub fn order_estimate_with<S: CoefficientSequence + ?Sized>(
    f: &S,
    r_grid: &[f64],
    cfg: &OrderFitConfig,
) -> Result<OrderFit> {
    const OP: &str = "order_estimate";
    if r_grid.len() < cfg.min_points {
        return Err(Error::argument(
            OP,
            format!("grid has {} points, need at least {}", r_grid.len(), cfg.min_points),
        ));
    }
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::argument(OP, "grid must be strictly increasing"));
    }
    let (r_min, r_max) = (r_grid[0], r_grid[r_grid.len() - 1]);
    let decades = (r_max / r_min).log10();
    if decades < cfg.min_decades {
        return Err(Error::argument(
            OP,
            format!("grid spans {decades:.3} decades, need at least {}", cfg.min_decades),
        ));
    }
    let samples = wv_samples(f, r_grid)?;
    if let (Some(len), true) = (f.stored_len(), f.is_truncation()) {
        let order = len - 1;
        let limit = cfg.saturation_fraction * order as f64;
        let last = samples[samples.len() - 1];
        if last.nu as f64 >= limit {
            return Err(Error::Saturation {
                op: OP,
                r: r_max,
                nu: last.nu as usize,
                limit,
                order,
            });
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.nu > 0)
        .map(|s| (s.r.ln(), (s.nu as f64).ln()))
        .unzip();
    // ν = 0 or a single positive sample: bounded central index
    let order = if xs.len() < 2 { 0.0 } else { theil_sen(&xs, &ys)? };
    Ok(OrderFit { order, samples })
}

/// One row of the identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityPoint {
    pub sample: WVSample,
    /// `|A - B| / |A|` per requested `j`.
    pub rel_err: Vec<f64>,
}

/// Relative error between `A = 𝒟_α^j f(r)` and
/// `B = (ν(r) α)^{jα} f(r) / r^j` for each grid radius.
///
/// Requires nonnegative coefficients so that `M(r) = f(r)`.
pub fn wv_identity_check<S: CoefficientSequence + ?Sized>(
    f: &S,
    alpha: f64,
    j: usize,
    r_grid: &[f64],
) -> Result<Vec<f64>> {
    let points = wv_identity_points(f, alpha, &[j], r_grid)?;
    Ok(points.into_iter().map(|p| p.rel_err[0]).collect())
}

/// [`wv_identity_check`] for several `j` at once, keeping the samples.
pub fn wv_identity_points<S: CoefficientSequence + ?Sized>(
    f: &S,
    alpha: f64,
    js: &[usize],
    r_grid: &[f64],
) -> Result<Vec<IdentityPoint>> {
    const OP: &str = "wv_identity_check";
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(OP, format!("alpha = {alpha} must be positive")));
    }
    if js.contains(&0) {
        return Err(Error::argument(OP, "j must be at least 1"));
    }
    if let Some(index) = f.first_negative() {
        return Err(Error::Precondition {
            op: OP,
            index,
            msg: "coefficients must be nonnegative".into(),
        });
    }
    for &r in r_grid {
        check_r(OP, r)?;
    }
    r_grid
        .par_iter()
        .map(|&r| {
            let s = scan(f, r, Some((alpha, js)))?;
            let rel_err = js
                .iter()
                .zip(&s.ln_moments)
                .map(|(&j, &ln_moment)| identity_rel_err(&s, alpha, j, ln_moment))
                .collect();
            Ok(IdentityPoint {
                sample: s.sample,
                rel_err,
            })
        })
        .collect()
}

fn identity_rel_err(s: &Scan, alpha: f64, j: usize, ln_moment: f64) -> f64 {
    // A ∝ Σ w_m G_j(m-j), B ∝ (να)^{jα} Σ w_m; common factor μ(r)/r^j
    let a_zero = ln_moment == f64::NEG_INFINITY;
    let b_zero = s.sample.nu == 0 || s.ln_weights == f64::NEG_INFINITY;
    match (a_zero, b_zero) {
        (true, true) => 0.0,
        (true, false) => f64::INFINITY,
        (false, true) => 1.0,
        (false, false) => {
            let ln_b = (j as f64 * alpha) * (s.sample.nu as f64 * alpha).ln() + s.ln_weights;
            (ln_b - ln_moment).exp_m1().abs()
        }
    }
}

/// Writes `r,nu,log_mu,log_M_lower,rel_err_j1,rel_err_j2` with a header
/// row. Missing error columns are written as `nan`.
pub fn write_wv_csv<W: Write>(mut out: W, rows: &[(WVSample, f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "r,nu,log_mu,log_M_lower,rel_err_j1,rel_err_j2")?;
    for (s, e1, e2) in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_g17(s.r),
            s.nu,
            fmt_g17(s.log_mu),
            fmt_g17(s.log_m_lower),
            fmt_g17(*e1),
            fmt_g17(*e2)
        )?;
    }
    Ok(())
}
