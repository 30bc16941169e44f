//! Incomplete Bell polynomials `B_{n,k}(z_1, ..., z_{n-k+1})`.
//!
//! `B_{n,k} = Σ n! / (j_1! ··· j_L!) Π (z_s / s!)^{j_s}` over nonnegative
//! `j` with `Σ j_s = k` and `Σ s j_s = n`. By convention `B_{n,0} = 0` for
//! `n >= 1`.

use crate::error::{Error, Result};
use crate::extreal::{ExtReal, SignedLogSum};

/// Largest `n` accepted by [`bell_direct`].
pub const BELL_DIRECT_MAX_N: usize = 12;
/// Largest `n` accepted by the recursive evaluators.
pub const BELL_MAX_N: usize = 200;
/// Above this `n` binomial weights come from `ln Γ` instead of exact
/// integers.
const EXACT_BINOMIAL_MAX_N: usize = 60;

fn check_args(op: &'static str, n: usize, k: usize, z_len: usize, max_n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::argument(op, "n must be positive"));
    }
    if n > max_n {
        return Err(Error::argument(op, format!("n = {n} exceeds the limit {max_n}")));
    }
    if k > n {
        return Err(Error::argument(op, format!("k = {k} exceeds n = {n}")));
    }
    if k > 0 && z_len < n - k + 1 {
        return Err(Error::argument(
            op,
            format!("need {} arguments for (n, k) = ({n}, {k}), got {z_len}", n - k + 1),
        ));
    }
    Ok(())
}

/// Direct partition enumeration. Exact integer weights, so it serves as the
/// oracle for [`bell_recursive`]. Limited to `n <= 12`.
pub fn bell_direct(n: usize, k: usize, z: &[f64]) -> Result<f64> {
    check_args("bell_direct", n, k, z.len(), BELL_DIRECT_MAX_N)?;
    if k == 0 {
        return Ok(0.0);
    }
    let len = n - k + 1;
    let fact: Vec<u128> = (0..=n as u128)
        .scan(1u128, |acc, i| {
            if i > 0 {
                *acc *= i;
            }
            Some(*acc)
        })
        .collect();
    let mut counts = vec![0usize; len];
    let mut total = 0.0;
    enumerate(1, n, k, &mut counts, &mut |js| {
        // n! / Π (j_s! (s!)^{j_s})
        let mut denom: u128 = 1;
        let mut prod = 1.0;
        for (idx, &j) in js.iter().enumerate() {
            let s = idx + 1;
            denom *= fact[j] * fact[s].pow(j as u32);
            prod *= z[idx].powi(j as i32);
        }
        total += (fact[n] / denom) as f64 * prod;
    });
    Ok(total)
}

/// Visits every `j` with `Σ_{s>=part} j_s = k_left` and `Σ s j_s = n_left`.
fn enumerate(part: usize, n_left: usize, k_left: usize, js: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    if part > js.len() {
        if n_left == 0 && k_left == 0 {
            visit(js);
        }
        return;
    }
    let max_j = (n_left / part).min(k_left);
    for j in 0..=max_j {
        js[part - 1] = j;
        enumerate(part + 1, n_left - j * part, k_left - j, js, visit);
    }
    js[part - 1] = 0;
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    if n <= EXACT_BINOMIAL_MAX_N {
        (exact_binomial(n, k) as f64).ln()
    } else {
        let g = |x: usize| libm::lgamma_r(x as f64 + 1.0).0;
        g(n) - g(k) - g(n - k)
    }
}

fn exact_binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k) as u128;
    (0..k).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// `B_{n,k}` via `B_{n,k} = Σ_{i=1}^{n-k+1} C(n-1, i-1) z_i B_{n-i,k-1}`,
/// accumulated in `f64`. Exact for integer data of moderate size; use
/// [`bell_recursive_ext`] when the value may leave the `f64` range.
pub fn bell_recursive(n: usize, k: usize, z: &[f64]) -> Result<f64> {
    check_args("bell_recursive", n, k, z.len(), BELL_MAX_N)?;
    if k == 0 {
        return Ok(0.0);
    }
    // table[m][j] = B_{m,j}, with B_{0,0} = 1 for the recursion only
    let mut table = vec![vec![0.0f64; k + 1]; n + 1];
    table[0][0] = 1.0;
    for m in 1..=n {
        // only cells with m - j <= n - k feed into B_{n,k}
        for j in m.saturating_sub(n - k).max(1)..=k.min(m) {
            let mut acc = 0.0;
            for i in 1..=(m - j + 1) {
                let b = table[m - i][j - 1];
                if b != 0.0 {
                    acc += binomial_f64(m - 1, i - 1) * z[i - 1] * b;
                }
            }
            table[m][j] = acc;
        }
    }
    Ok(table[n][k])
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    if n <= EXACT_BINOMIAL_MAX_N {
        exact_binomial(n, k) as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// Log-domain version of [`bell_recursive`] for `n` up to 200.
pub fn bell_recursive_ext(n: usize, k: usize, z: &[ExtReal]) -> Result<ExtReal> {
    check_args("bell_recursive", n, k, z.len(), BELL_MAX_N)?;
    if k == 0 {
        return Ok(ExtReal::ZERO);
    }
    let mut table = vec![vec![ExtReal::ZERO; k + 1]; n + 1];
    table[0][0] = ExtReal::ONE;
    for m in 1..=n {
        // only cells with m - j <= n - k feed into B_{n,k}
        for j in m.saturating_sub(n - k).max(1)..=k.min(m) {
            let mut acc = SignedLogSum::new();
            for i in 1..=(m - j + 1) {
                let b = table[m - i][j - 1];
                if !b.is_zero() {
                    acc.push((z[i - 1] * b).scale_log(ln_binomial(m - 1, i - 1)));
                }
            }
            table[m][j] = acc.finish_unflushed().value;
        }
    }
    Ok(table[n][k])
}

fn check_power_args(op: &'static str, alpha: f64, n: usize, k: usize, w: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(op, format!("alpha = {alpha} must be positive")));
    }
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::domain(op, format!("w = {w} must be positive")));
    }
    if k == 0 || k > n {
        return Err(Error::argument(op, format!("need 1 <= k <= n, got (n, k) = ({n}, {k})")));
    }
    Ok(())
}

/// `|g^{(j)}(w)|` for `g(w) = w^α`, `j = 1..=len`.
pub fn power_derivative_magnitudes(alpha: f64, w: f64, len: usize) -> Vec<ExtReal> {
    let ln_w = w.ln();
    let mut ln_falling = 0.0;
    let mut out = Vec::with_capacity(len);
    for j in 1..=len {
        let factor = (alpha - (j - 1) as f64).abs();
        if factor == 0.0 {
            out.resize(len, ExtReal::ZERO);
            break;
        }
        ln_falling += factor.ln();
        out.push(ExtReal::from_log(1, ln_falling + (alpha - j as f64) * ln_w));
    }
    out
}

/// `B*_{n,k}`: the Bell polynomial at the absolute derivatives of `w^α`.
pub fn power_function_bell(alpha: f64, n: usize, k: usize, w: f64) -> Result<ExtReal> {
    check_power_args("power_function_bell", alpha, n, k, w)?;
    bell_recursive_ext(n, k, &power_derivative_magnitudes(alpha, w, n - k + 1))
}

/// Outcome of [`bell_bound_holds`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellBound {
    pub holds: bool,
    pub log_lhs: f64,
    pub log_rhs: f64,
    /// `log_rhs - log_lhs`; `+inf` when the left side vanishes.
    pub log_slack: f64,
}

/// Checks `B*_{n,k} <= (n-1)! α^k (α+1)···(α+n-k) w^{kα-n}`.
///
/// The bound is attained for some `(n, k)` (e.g. `k = n <= 2`), so a
/// rounding allowance of `1e-12` relative in the log domain is granted.
pub fn bell_bound_holds(alpha: f64, n: usize, k: usize, w: f64) -> Result<BellBound> {
    check_power_args("bell_bound_holds", alpha, n, k, w)?;
    let lhs = power_function_bell(alpha, n, k, w)?;
    let log_lhs = lhs.logmag();
    let rising: f64 = (1..=n - k).map(|i| (alpha + i as f64).ln()).sum();
    let log_rhs = libm::lgamma_r(n as f64).0
        + k as f64 * alpha.ln()
        + rising
        + (k as f64 * alpha - n as f64) * w.ln();
    let log_slack = log_rhs - log_lhs;
    let allowance = 1e-12 * log_rhs.abs().max(1.0);
    Ok(BellBound {
        holds: log_slack >= -allowance,
        log_lhs,
        log_rhs,
        log_slack,
    })
}
