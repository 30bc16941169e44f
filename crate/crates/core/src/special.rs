//! Log-gamma, stable gamma ratios, and the one-parameter Mittag-Leffler
//! function.

use crate::error::{Error, Result};
use crate::extreal::{ExtReal, SignedLogSum, CANCELLATION_THRESHOLD};

/// Default cap on Mittag-Leffler series terms.
pub const ML_TERM_CAP: usize = 1_000_000;

/// Below this argument the ratio falls back to a difference of `ln Γ` values.
const STIRLING_MIN: f64 = 15.0;

/// `B_{2k} / (2k (2k-1))` for k = 1..=7.
const STIRLING_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x = {x} must be positive")));
    }
    Ok(libm::lgamma_r(x).0)
}

/// Stirling remainder `ln Γ(x) - [(x - 1/2) ln x - x + ln(2π)/2]`, x >= 15.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(a) - ln Γ(b)` for `a, b > 0`.
///
/// For large arguments the leading Stirling terms are recombined so that
/// the two huge `ln Γ` values never get subtracted: with `h = a - b`,
///
/// `ln Γ(b+h) - ln Γ(b) = (b - 1/2) ln1p(h/b) + h (ln(b+h) - 1) + S(b+h) - S(b)`.
///
/// The absolute error is then about `ε·|h|·ln b` instead of `ε·b ln b`.
pub fn log_gamma_ratio(a: f64, b: f64) -> f64 {
    log_gamma_shift(b, a - b)
}

/// `ln Γ(b + h) - ln Γ(b)` with the offset `h` given exactly, which matters
/// once `b` is so large that `(b + h) - b` no longer reproduces `h`.
pub fn log_gamma_shift(b: f64, h: f64) -> f64 {
    let a = b + h;
    debug_assert!(a > 0.0 && b > 0.0, "log_gamma_shift({b}, {h})");
    if h == 0.0 {
        return 0.0;
    }
    if a.min(b) < STIRLING_MIN {
        return libm::lgamma_r(a).0 - libm::lgamma_r(b).0;
    }
    (b - 0.5) * (h / b).ln_1p() + h * (a.ln() - 1.0) + (stirling_tail(a) - stirling_tail(b))
}

fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `Γ(numerator_arg) / Γ(denominator_arg)` kept in log form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaRatio {
    pub numerator_arg: f64,
    pub denominator_arg: f64,
    /// `ln|ratio|`; `-inf` when the denominator sits on a pole of Γ.
    pub log_value: f64,
    /// `+1` or `-1`; meaningless when the ratio is zero.
    pub sign: i8,
}

impl GammaRatio {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(
                "gamma_ratio",
                format!("numerator argument {a} must be positive (denominator {b})"),
            ));
        }
        if is_gamma_pole(b) {
            // 1/Γ vanishes at non-positive integers.
            return Ok(GammaRatio {
                numerator_arg: a,
                denominator_arg: b,
                log_value: f64::NEG_INFINITY,
                sign: 1,
            });
        }
        let (log_value, sign) = if b > 0.0 {
            (log_gamma_ratio(a, b), 1)
        } else {
            let (lb, sb) = libm::lgamma_r(b);
            (libm::lgamma_r(a).0 - lb, if sb < 0 { -1 } else { 1 })
        };
        Ok(GammaRatio {
            numerator_arg: a,
            denominator_arg: b,
            log_value,
            sign,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.log_value == f64::NEG_INFINITY
    }

    pub fn value(&self) -> ExtReal {
        ExtReal::from_log(self.sign, self.log_value)
    }
}

/// `Γ(a)/Γ(b)` for `a > 0`; exact zero when `b` is a non-positive integer.
pub fn gamma_ratio(a: f64, b: f64) -> Result<ExtReal> {
    GammaRatio::new(a, b).map(|g| g.value())
}

/// A converged Mittag-Leffler partial sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MittagLefflerSum {
    pub value: ExtReal,
    /// Number of series terms accumulated.
    pub terms: usize,
    /// The alternating sum cancelled below the representable threshold and
    /// the value was reported as zero.
    pub cancelled: bool,
}

/// `E_α(z) = Σ z^k / Γ(kα + 1)` on the real line.
///
/// Summation stops once the series is past its largest term and the next
/// term is below `tol` times the current partial sum. Negative `z` is summed
/// sign-split; beyond `|z|` of a few dozen the alternating series cancels to
/// below double precision and the result is flushed to zero with
/// `cancelled` set.
pub fn mittag_leffler_sum(alpha: f64, z: f64, tol: f64, term_cap: usize) -> Result<MittagLefflerSum> {
    const OP: &str = "mittag_leffler";
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(OP, format!("alpha = {alpha} must be positive")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(OP, format!("tol = {tol} must be positive")));
    }
    if !z.is_finite() {
        return Err(Error::domain(OP, format!("z = {z} must be finite")));
    }
    if z == 0.0 {
        return Ok(MittagLefflerSum {
            value: ExtReal::ONE,
            terms: 1,
            cancelled: false,
        });
    }
    let ln_z = z.abs().ln();
    let ln_tol = tol.ln();
    let term_log = |k: usize| k as f64 * ln_z - libm::lgamma_r(k as f64 * alpha + 1.0).0;
    let term_sign = |k: usize| if z < 0.0 && k % 2 == 1 { -1 } else { 1 };

    let mut acc = SignedLogSum::new();
    let mut current = term_log(0);
    for k in 0..term_cap {
        acc.push_log(term_sign(k), current);
        let next = term_log(k + 1);
        // below CANCELLATION_THRESHOLD of the scale the sum is flushed anyway
        let floor = acc.ln_scale() + CANCELLATION_THRESHOLD.ln();
        let partial = acc.finish_unflushed().value.logmag().max(floor);
        if next < current && next < ln_tol + partial {
            let out = acc.finish();
            return Ok(MittagLefflerSum {
                value: out.value,
                terms: k + 1,
                cancelled: out.cancelled,
            });
        }
        current = next;
    }
    Err(Error::Convergence {
        op: OP,
        terms: term_cap,
        partial: acc.finish().value,
    })
}

/// `E_α(z)` with the default term cap.
pub fn mittag_leffler(alpha: f64, z: f64, tol: f64) -> Result<ExtReal> {
    mittag_leffler_sum(alpha, z, tol, ML_TERM_CAP).map(|s| s.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn log_gamma_known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!(rel(log_gamma(0.5).unwrap(), 0.5 * PI.ln()) < 1e-15);
        assert!(rel(log_gamma(0.5).unwrap(), 0.572_364_942_924_700_1) < 1e-15);
        // mpmath references
        assert!(rel(log_gamma(0.001).unwrap(), 6.907_178_885_383_853_7) < 1e-14);
        assert!(rel(log_gamma(1e6).unwrap(), 12_815_504.569_147_612) < 1e-14);
        assert!(rel(log_gamma(1.25).unwrap(), -0.098_271_836_421_813_16) < 1e-13);
        // near the zero of ln Γ only absolute accuracy is meaningful
        assert!((log_gamma(2.0001).unwrap() - 4.228_165_811_283_071e-5).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_matches_factorials() {
        // exact oracle: ln(n!) accumulated from exact integer factors
        let mut ln_fact = 0.0f64;
        let mut exact: u128 = 1;
        for n in 1..=30u32 {
            exact *= u128::from(n);
            ln_fact += f64::from(n).ln();
            let lg = log_gamma(f64::from(n) + 1.0).unwrap();
            if n <= 25 {
                assert!(rel(lg, (exact as f64).ln()) < 1e-14, "n = {n}");
            }
            assert!(rel(lg, ln_fact) < 1e-13, "n = {n}");
        }
        let twenty_fact = 2_432_902_008_176_640_000f64;
        assert!(rel(log_gamma(21.0).unwrap(), twenty_fact.ln()) < 1e-15);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(log_gamma(-2.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn stable_ratio_against_high_precision() {
        // (a, b, ln Γ(a) - ln Γ(b)) from 40-digit arithmetic
        let cases = [
            (1e12 + 0.5, 1e12, 13.815_510_557_964_149),
            (1e6 + 1.5, 1e6, 20.723_266_211_946_286),
            (20.25, 15.5, 13.547_196_106_801_735),
            (100.5, 100.0, 2.301_335_098_202_222_8),
            (3.7, 2.2, 1.331_124_859_874_749_3),
            (5e11 + 1.0, 5e11 + 0.5, 13.468_936_967_684_551),
            (1e15 + 3.0, 1e15, 103.616_329_184_732_06),
            (2.0e4, 1.0e4, 95_966.000_753_203_79),
        ];
        for (a, b, want) in cases {
            let got = log_gamma_ratio(a, b);
            assert!(rel(got, want) < 2e-15, "({a}, {b}): {got} vs {want}");
            assert!(rel(log_gamma_ratio(b, a), -want) < 2e-15);
        }
    }

    #[test]
    fn gamma_ratio_examples() {
        let g = gamma_ratio(2.0, 1.5).unwrap().to_f64();
        assert!(rel(g, 2.0 / PI.sqrt()) < 1e-15);

        assert!(gamma_ratio(1.5, 0.0).unwrap().is_zero());
        assert!(gamma_ratio(1.5, -3.0).unwrap().is_zero());

        let asym = gamma_ratio(100.5, 100.0).unwrap().to_f64();
        assert!(rel(asym, 10.0) < 0.01);

        // Γ(1)/Γ(-1/2) = -1/(2√π)
        let neg = gamma_ratio(1.0, -0.5).unwrap();
        assert_eq!(neg.sign(), -1);
        assert!(rel(neg.to_f64(), -1.0 / (2.0 * PI.sqrt())) < 1e-15);

        assert!(matches!(gamma_ratio(0.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn gamma_ratio_asymptotics() {
        for &(a, b) in &[(0.5, 0.0), (1.0, 0.25), (2.5, -0.5), (0.3, 1.7)] {
            for &t in &[1e3, 1e4, 1e5] {
                let g = gamma_ratio(t + a, t + b).unwrap().to_f64();
                let dev = (g / f64::powf(t, a - b) - 1.0).abs();
                assert!(dev <= 10.0 / t, "a={a} b={b} t={t} dev={dev}");
            }
        }
    }

    #[test]
    fn mittag_leffler_reduces_to_exp() {
        for i in 0..=40 {
            let x = -5.0 + 0.25 * f64::from(i);
            let e = mittag_leffler(1.0, x, 1e-14).unwrap().to_f64();
            assert!((e - x.exp()).abs() <= 1e-12 * x.exp().max(1.0), "x = {x}: {e}");
        }
        let e1 = mittag_leffler(1.0, 1.0, 1e-14).unwrap().to_f64();
        assert!(rel(e1, std::f64::consts::E) < 1e-15);
    }

    #[test]
    fn mittag_leffler_order_two_is_cosh() {
        for i in 0..=40 {
            let x = -5.0 + 0.25 * f64::from(i);
            let c = mittag_leffler(2.0, x * x, 1e-14).unwrap().to_f64();
            assert!(rel(c, x.cosh()) <= 1e-12, "x = {x}");
        }
    }

    #[test]
    fn mittag_leffler_at_zero() {
        assert_eq!(mittag_leffler(0.5, 0.0, 1e-14).unwrap(), ExtReal::ONE);
    }

    #[test]
    fn mittag_leffler_large_negative_flushes() {
        let s = mittag_leffler_sum(1.0, -60.0, 1e-14, ML_TERM_CAP).unwrap();
        assert!(s.cancelled);
        assert!(s.value.is_zero());
    }

    #[test]
    fn mittag_leffler_term_cap() {
        let err = mittag_leffler_sum(0.5, 50.0, 1e-14, 10).unwrap_err();
        match err {
            Error::Convergence { terms, partial, .. } => {
                assert_eq!(terms, 10);
                assert!(partial.to_f64() > 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn gamma_ratio_is_log_additive(a in 0.01f64..200.0, b in 0.01f64..200.0, c in 0.01f64..200.0) {
            let ab = gamma_ratio(a, b).unwrap();
            let bc = gamma_ratio(b, c).unwrap();
            let ac = gamma_ratio(a, c).unwrap();
            prop_assert!((ab * bc).rel_diff(ac) <= 1e-12);
        }

        #[test]
        fn mittag_leffler_extra_terms_do_not_move(alpha in 0.2f64..3.0, z in -8.0f64..6.0) {
            let tol = 1e-12;
            let s = mittag_leffler_sum(alpha, z, tol, ML_TERM_CAP).unwrap();
            prop_assume!(!s.cancelled);
            let mut acc = SignedLogSum::new();
            let total = s.terms + 10;
            for k in 0..total {
                let l = match (k, z == 0.0) {
                    (0, _) => 0.0,
                    (_, true) => f64::NEG_INFINITY,
                    _ => k as f64 * z.abs().ln() - libm::lgamma_r(k as f64 * alpha + 1.0).0,
                };
                acc.push_log(if z < 0.0 && k % 2 == 1 { -1 } else { 1 }, l);
            }
            let extended = acc.finish().value;
            // relative to the value, or to the largest term when the sum cancels
            let diff = (extended - s.value).abs();
            let bound = (s.value.logmag() + (10.0 * tol).ln()).max(acc.ln_scale() + 1e-14f64.ln());
            prop_assert!(diff.logmag() <= bound);
        }
    }
}
