//! Riemann–Liouville, Caputo–Djrbashian, and Gelfond–Leontiev operators.
//!
//! All operators act on coefficients. On an α-analytic series
//! `u(t) = Σ u_m t^{αm}` the Caputo–Djrbashian derivative is
//!
//! `(𝔻_α u)(t) = Σ_{m>=1} u_m Γ(mα+1)/Γ((m-1)α+1) t^{α(m-1)}`,
//!
//! and the Gelfond–Leontiev operator applies the same multipliers to the
//! Taylor coefficients of `f(z) = Σ a_n z^n`. The two are conjugate under
//! `z = t^α`, so they share one implementation.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::series::AlphaSeries;
use crate::special::{log_gamma_shift, GammaRatio};

/// Taylor coefficients `a_n` of an entire function `f(z) = Σ a_n z^n`,
/// truncated to a finite vector.
#[derive(Clone, Debug, PartialEq)]
pub struct EntireCoeffs {
    coeffs: Vec<ExtReal>,
    polynomial: bool,
}

impl EntireCoeffs {
    pub fn new(coeffs: Vec<ExtReal>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::argument("entire_coeffs", "coefficient list is empty"));
        }
        Ok(EntireCoeffs {
            coeffs,
            polynomial: false,
        })
    }

    /// The stored coefficients are the whole function rather than a
    /// truncation.
    pub fn polynomial(coeffs: Vec<ExtReal>) -> Result<Self> {
        Self::new(coeffs).map(|f| EntireCoeffs {
            polynomial: true,
            ..f
        })
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    fn flagged_like(self, other: &Self) -> Self {
        EntireCoeffs {
            polynomial: other.polynomial,
            ..self
        }
    }

    pub fn from_f64s(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ExtReal::from_f64(c)).collect())
    }

    pub fn coeffs(&self) -> &[ExtReal] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn into_series(self, alpha: f64) -> Result<AlphaSeries> {
        AlphaSeries::new(alpha, self.coeffs)
    }
}

impl From<&AlphaSeries> for EntireCoeffs {
    /// Reads `u(t) = Σ u_m t^{αm}` as `v(z) = Σ u_m z^m`.
    fn from(s: &AlphaSeries) -> Self {
        EntireCoeffs {
            coeffs: s.coeffs().to_vec(),
            polynomial: false,
        }
    }
}

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("alpha = {alpha} must be positive")))
    }
}

/// `ln[Γ((m+j)α+1) / Γ(mα+1)]`, the log of the multiplier that takes
/// coefficient `m + j` of `u` to coefficient `m` of `𝔻_α^j u`.
pub fn iterate_log_multiplier(alpha: f64, j: usize, m: usize) -> f64 {
    log_gamma_shift(m as f64 * alpha + 1.0, j as f64 * alpha)
}

/// `w_m = c_{m+j} Γ((m+j)α+1)/Γ(mα+1)` for `m = 0..len-j`.
fn shift_down(coeffs: &[ExtReal], alpha: f64, j: usize) -> Vec<ExtReal> {
    (0..coeffs.len() - j)
        .map(|m| coeffs[m + j].scale_log(iterate_log_multiplier(alpha, j, m)))
        .collect()
}

/// Coefficient of `x^{β-α-1}` in `D^α x^{β-1}`: `Γ(β)/Γ(β-α)`.
///
/// When `β - α` is a non-positive integer (including `β = α`) the result is
/// exactly zero, matching `D^α x^{α-j} = 0`.
pub fn rl_monomial_coeff(alpha: f64, beta: f64) -> Result<ExtReal> {
    const OP: &str = "rl_monomial_coeff";
    check_alpha(OP, alpha)?;
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(OP, format!("beta = {beta} must be positive")));
    }
    GammaRatio::new(beta, beta - alpha).map(|g| g.value())
}

/// Caputo–Djrbashian derivative `𝔻_α u`. Constants are annihilated; the
/// truncation order drops by one (a constant series maps to the zero
/// series of order 0).
pub fn caputo_derivative(u: &AlphaSeries) -> AlphaSeries {
    if u.order() == 0 {
        return AlphaSeries::from_parts(u.alpha(), vec![ExtReal::ZERO], u.nominal_radius());
    }
    AlphaSeries::from_parts(
        u.alpha(),
        shift_down(u.coeffs(), u.alpha(), 1),
        u.nominal_radius(),
    )
}

/// Result of [`caputo_iterate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Iterated {
    pub series: AlphaSeries,
    /// `j` exceeded the truncation order; `series` is the zero series.
    pub exhausted: bool,
}

/// `𝔻_α^j u` by the direct iterate formula
/// `w_m = u_{m+j} Γ((m+j)α+1)/Γ(mα+1)`.
pub fn caputo_iterate(u: &AlphaSeries, j: usize) -> Result<Iterated> {
    if j == 0 {
        return Err(Error::argument("caputo_iterate", "j must be at least 1"));
    }
    if j > u.order() {
        return Ok(Iterated {
            series: AlphaSeries::from_parts(u.alpha(), vec![ExtReal::ZERO], u.nominal_radius()),
            exhausted: true,
        });
    }
    Ok(Iterated {
        series: AlphaSeries::from_parts(
            u.alpha(),
            shift_down(u.coeffs(), u.alpha(), j),
            u.nominal_radius(),
        ),
        exhausted: false,
    })
}

/// Termwise comparison of `D^β D^γ u`, `D^γ D^β u` and `D^{β+γ} u`.
///
/// Entry `m` of each vector is the coefficient of `t^{αm - β - γ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupReport {
    pub beta: f64,
    pub gamma: f64,
    pub beta_after_gamma: Vec<ExtReal>,
    pub gamma_after_beta: Vec<ExtReal>,
    pub combined: Vec<ExtReal>,
    /// Largest relative coefficient discrepancy of either composition
    /// against the combined operator.
    pub max_discrepancy: f64,
}

impl SemigroupReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_discrepancy <= tol
    }
}

/// Checks `D^β ∘ D^γ = D^γ ∘ D^β = D^{β+γ}` on `u`, which requires
/// `u_m = 0` whenever `αm < β + γ`.
pub fn rl_semigroup_check(u: &AlphaSeries, beta: f64, gamma: f64) -> Result<SemigroupReport> {
    const OP: &str = "rl_semigroup_check";
    for (name, v) in [("beta", beta), ("gamma", gamma)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(OP, format!("{name} = {v} must be positive")));
        }
    }
    let alpha = u.alpha();
    let total = beta + gamma;
    if let Some(m) = u
        .coeffs()
        .iter()
        .enumerate()
        .position(|(m, c)| (m as f64) * alpha < total && !c.is_zero())
    {
        return Err(Error::Precondition {
            op: OP,
            index: m,
            msg: format!("u_{m} must vanish since {m}·{alpha} < {total}"),
        });
    }

    let ratio = |a: f64, b: f64| GammaRatio::new(a, b).map(|g| g.value());
    let mut beta_after_gamma = Vec::with_capacity(u.coeffs().len());
    let mut gamma_after_beta = Vec::with_capacity(u.coeffs().len());
    let mut combined = Vec::with_capacity(u.coeffs().len());
    let mut max_discrepancy = 0.0f64;
    for (m, &c) in u.coeffs().iter().enumerate() {
        if c.is_zero() {
            beta_after_gamma.push(ExtReal::ZERO);
            gamma_after_beta.push(ExtReal::ZERO);
            combined.push(ExtReal::ZERO);
            continue;
        }
        let x = m as f64 * alpha + 1.0;
        let bg = c * ratio(x, x - gamma)? * ratio(x - gamma, x - gamma - beta)?;
        let gb = c * ratio(x, x - beta)? * ratio(x - beta, x - beta - gamma)?;
        let comb = c * ratio(x, x - total)?;
        max_discrepancy = max_discrepancy.max(bg.rel_diff(comb)).max(gb.rel_diff(comb));
        beta_after_gamma.push(bg);
        gamma_after_beta.push(gb);
        combined.push(comb);
    }
    Ok(SemigroupReport {
        beta,
        gamma,
        beta_after_gamma,
        gamma_after_beta,
        combined,
        max_discrepancy,
    })
}

/// Gelfond–Leontiev derivative `b_{n-1} = a_n Γ(nα+1)/Γ((n-1)α+1)`.
pub fn gl_derivative(f: &EntireCoeffs, alpha: f64) -> Result<EntireCoeffs> {
    check_alpha("gl_derivative", alpha)?;
    if f.len() == 1 {
        return EntireCoeffs::new(vec![ExtReal::ZERO]).map(|g| g.flagged_like(f));
    }
    EntireCoeffs::new(shift_down(f.coeffs(), alpha, 1)).map(|g| g.flagged_like(f))
}

/// Right inverse of [`gl_derivative`]:
/// `c_0 = 0`, `c_{n+1} = a_n Γ(nα+1)/Γ((n+1)α+1)`.
pub fn gl_integral(f: &EntireCoeffs, alpha: f64) -> Result<EntireCoeffs> {
    check_alpha("gl_integral", alpha)?;
    let mut out = Vec::with_capacity(f.len() + 1);
    out.push(ExtReal::ZERO);
    out.extend(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, &a)| a.scale_log(-iterate_log_multiplier(alpha, 1, n))),
    );
    EntireCoeffs::new(out).map(|g| g.flagged_like(f))
}

/// Truncated coefficients of `E_α(λz)`: `a_n = λ^n / Γ(nα+1)`.
pub fn mittag_leffler_coeffs(alpha: f64, lambda: f64, len: usize) -> Result<EntireCoeffs> {
    check_alpha("mittag_leffler_coeffs", alpha)?;
    if len == 0 {
        return Err(Error::argument("mittag_leffler_coeffs", "length must be positive"));
    }
    let lam = ExtReal::from_f64(lambda);
    let coeffs = (0..len)
        .map(|n| {
            let ln_gamma = libm::lgamma_r(n as f64 * alpha + 1.0).0;
            lam.powi(n as i32).scale_log(-ln_gamma)
        })
        .collect();
    EntireCoeffs::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::make_series;
    use crate::special::gamma_ratio;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn f64s(c: &[ExtReal]) -> Vec<f64> {
        c.iter().map(|x| x.to_f64()).collect()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn monomial_rule() {
        let c = rl_monomial_coeff(0.5, 1.0).unwrap().to_f64();
        assert!(rel(c, 1.0 / PI.sqrt()) < 1e-15);
        let c = rl_monomial_coeff(0.5, 1.5).unwrap().to_f64();
        assert!(rel(c, PI.sqrt() / 2.0) < 1e-15);
        let c = rl_monomial_coeff(1.0, 3.0).unwrap().to_f64();
        assert!(rel(c, 2.0) < 1e-15);
        // D^α x^{α-1} = 0 via the pole of Γ at 0; likewise x^{α-2} for α > 1
        assert!(rl_monomial_coeff(0.5, 0.5).unwrap().is_zero());
        assert!(rl_monomial_coeff(2.5, 0.5).unwrap().is_zero());
        assert!(matches!(rl_monomial_coeff(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(rl_monomial_coeff(0.5, -1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn example_one_derivatives() {
        let (u0, u1, u2) = (0.7, -1.3, 2.9);
        let u = make_series(0.5, &[u0, u1, u2]).unwrap();
        let d = caputo_derivative(&u);
        let want = [u1 * (PI.sqrt() / 2.0), u2 * (2.0 / PI.sqrt())];
        for (got, want) in f64s(d.coeffs()).iter().zip(want) {
            assert!(rel(*got, want) <= 1e-14);
        }
        let d2 = caputo_iterate(&u, 2).unwrap();
        assert!(!d2.exhausted);
        assert_eq!(d2.series.order(), 0);
        assert!(rel(d2.series.coeff(0).to_f64(), u2) <= 1e-14);
    }

    #[test]
    fn caputo_annihilates_constants() {
        let c = make_series(0.3, &[5.0]).unwrap();
        let d = caputo_derivative(&c);
        assert_eq!(d.order(), 0);
        assert!(d.coeff(0).is_zero());
        assert_eq!(d.coeff(0).sign(), 0);

        let padded = make_series(0.3, &[5.0, 0.0, 0.0]).unwrap();
        assert!(caputo_derivative(&padded).coeffs().iter().all(|c| c.sign() == 0));
    }

    #[test]
    fn classical_derivative_at_alpha_one() {
        let e = make_series(1.0, &[1.0, 1.0, 0.5, 1.0 / 6.0]).unwrap();
        let d = caputo_derivative(&e);
        let got = f64s(d.coeffs());
        for (g, w) in got.iter().zip([1.0, 1.0, 0.5]) {
            assert!(rel(*g, w) < 1e-15);
        }
    }

    #[test]
    fn iterate_edge_cases() {
        let u = make_series(0.5, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(caputo_iterate(&u, 1).unwrap().series, caputo_derivative(&u));
        let ex = caputo_iterate(&u, 3).unwrap();
        assert!(ex.exhausted);
        assert!(ex.series.is_zero());
        assert!(matches!(caputo_iterate(&u, 0), Err(Error::Argument { .. })));
    }

    #[test]
    fn iterate_matches_composition() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for &alpha in &[0.25, 0.5, 0.8, 1.0, 1.7] {
            let xs: Vec<f64> = (0..40).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let u = make_series(alpha, &xs).unwrap();
            for j in 1..=6 {
                let direct = caputo_iterate(&u, j).unwrap().series;
                let mut composed = u.clone();
                for _ in 0..j {
                    composed = caputo_derivative(&composed);
                }
                assert_eq!(direct.order(), composed.order());
                for (a, b) in direct.coeffs().iter().zip(composed.coeffs()) {
                    assert!(a.rel_diff(*b) <= 1e-13, "alpha {alpha} j {j}");
                }
            }
        }
    }

    #[test]
    fn rl_and_caputo_agree_when_constant_term_vanishes() {
        // D^α u_m t^{αm} = u_m Γ(αm+1)/Γ(αm+1-α) t^{α(m-1)} by the monomial rule
        let xs = [0.0, 1.5, -0.25, 3.0, 0.125];
        for &alpha in &[0.3, 0.5, 1.0, 1.5] {
            let u = make_series(alpha, &xs).unwrap();
            let d = caputo_derivative(&u);
            for m in 1..xs.len() {
                let beta = alpha * m as f64 + 1.0;
                let rl = ExtReal::from_f64(xs[m]) * rl_monomial_coeff(alpha, beta).unwrap();
                assert!(d.coeff(m - 1).rel_diff(rl) <= 1e-14);
            }
        }
    }

    #[test]
    fn semigroup_single_monomial() {
        for &alpha in &[0.3, 0.5, 0.9] {
            let u = make_series(alpha, &[0.0, 0.0, 1.0]).unwrap();
            let r = rl_semigroup_check(&u, alpha, alpha).unwrap();
            let want = gamma_ratio(2.0 * alpha + 1.0, 1.0).unwrap();
            for v in [&r.beta_after_gamma, &r.gamma_after_beta, &r.combined] {
                assert!(v[2].rel_diff(want) < 1e-14);
            }
            assert!(r.holds(1e-12));
        }
    }

    #[test]
    fn semigroup_classical() {
        let u = make_series(1.0, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = rl_semigroup_check(&u, 1.0, 1.0).unwrap();
        // t^{3-2} coefficient 6
        assert!(rel(r.combined[3].to_f64(), 6.0) < 1e-14);
        assert!(rel(r.beta_after_gamma[3].to_f64(), 6.0) < 1e-14);
    }

    #[test]
    fn semigroup_precondition() {
        let u = make_series(0.6, &[0.0, 1.0, 1.0, 1.0]).unwrap();
        match rl_semigroup_check(&u, 0.3, 0.9) {
            Err(Error::Precondition { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        let ok = make_series(0.6, &[0.0, 0.0, 1.0, -2.0]).unwrap();
        assert!(rl_semigroup_check(&ok, 0.3, 0.9).unwrap().holds(1e-12));
    }

    #[test]
    fn gl_derivative_examples() {
        let f = EntireCoeffs::from_f64s(&[3.0, 1.0, 0.5, 2.0]).unwrap();
        let d = gl_derivative(&f, 1.0).unwrap();
        for (g, w) in f64s(d.coeffs()).iter().zip([1.0, 1.0, 6.0]) {
            assert!(rel(*g, w) < 1e-15);
        }
        let c = EntireCoeffs::from_f64s(&[4.0, 0.0, 0.0]).unwrap();
        assert!(gl_derivative(&c, 0.5).unwrap().coeffs().iter().all(|x| x.is_zero()));
        let single = EntireCoeffs::from_f64s(&[4.0]).unwrap();
        assert!(gl_derivative(&single, 0.5).unwrap().coeffs()[0].is_zero());
    }

    #[test]
    fn mittag_leffler_is_eigenfunction() {
        for &alpha in &[1.0 / 3.0, 0.5, 1.0] {
            let f = mittag_leffler_coeffs(alpha, 1.0, 60).unwrap();
            let d = gl_derivative(&f, alpha).unwrap();
            for n in 0..d.len() {
                assert!(d.coeffs()[n].rel_diff(f.coeffs()[n]) < 1e-13);
            }
        }
    }

    #[test]
    fn gl_integral_examples() {
        let f = EntireCoeffs::from_f64s(&[1.0, 1.0, 0.5]).unwrap();
        let i = gl_integral(&f, 1.0).unwrap();
        let want = [0.0, 1.0, 0.5, 1.0 / 6.0];
        for (g, w) in f64s(i.coeffs()).iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }

        let g = EntireCoeffs::from_f64s(&[2.0, -1.0, 0.25, 4.0]).unwrap();
        for &alpha in &[0.4, 1.3] {
            let back = gl_integral(&gl_derivative(&g, alpha).unwrap(), alpha).unwrap();
            assert!(back.coeffs()[0].is_zero());
            for n in 1..g.len() {
                assert!(back.coeffs()[n].rel_diff(g.coeffs()[n]) < 1e-14);
            }
        }
    }

    #[test]
    fn conjugation_is_exact() {
        let xs = [1.0, -2.0, 0.5, 7.0, -0.125, 3.0];
        for &alpha in &[0.2, 0.5, 1.0, 2.5] {
            let u = make_series(alpha, &xs).unwrap();
            let via_caputo = caputo_derivative(&u);
            let via_gl = gl_derivative(&EntireCoeffs::from(&u), alpha).unwrap();
            assert_eq!(via_caputo.coeffs(), via_gl.coeffs());
        }
    }

    proptest! {
        #[test]
        fn integral_is_right_inverse(xs in prop::collection::vec(-10.0f64..10.0, 1..30), alpha in 0.1f64..3.0) {
            let f = EntireCoeffs::from_f64s(&xs).unwrap();
            let back = gl_derivative(&gl_integral(&f, alpha).unwrap(), alpha).unwrap();
            prop_assert_eq!(back.len(), f.len());
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                prop_assert!(a.is_zero() == b.is_zero());
                prop_assert!(a.rel_diff(*b) <= 1e-13);
            }
        }
    }
}
