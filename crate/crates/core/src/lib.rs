//! Fractional power series in `t^α`: log-domain coefficient arithmetic,
//! Caputo–Djrbashian and Gelfond–Leontiev operators, Bell polynomials,
//! a series solver for sequential linear fractional ODEs, and
//! Wiman–Valiron growth diagnostics.

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod error;
pub mod extreal;
pub mod fractional;
pub mod growth;
pub mod io;
pub mod ode;
pub mod sequence;
pub mod series;
pub mod special;
pub mod wiman_valiron;

pub use bell::{bell_bound_holds, bell_direct, bell_recursive, bell_recursive_ext, power_function_bell, BellBound};
pub use error::{Error, Result};
pub use extreal::{ExtReal, LogSum, SignedLogSum, SumOutcome, CANCELLATION_THRESHOLD};
pub use fractional::{
    caputo_derivative, caputo_iterate, gl_derivative, gl_integral, mittag_leffler_coeffs,
    rl_monomial_coeff, rl_semigroup_check, EntireCoeffs, Iterated, SemigroupReport,
};
pub use growth::{
    kochubei_order, predict_order, verify_sharp_order, verify_sharp_order_with, GrowthReport,
    OrderPrediction, SharpOrderConfig, Verdict,
};
pub use ode::{majorant_check, residual, solve_cauchy, CauchyProblem, MajorantReport, SolutionSeries};
pub use sequence::{CoefficientSequence, MittagLefflerSeries};
pub use series::{make_series, AlphaSeries};
pub use special::{
    gamma_ratio, log_gamma, log_gamma_ratio, mittag_leffler, mittag_leffler_sum, GammaRatio,
    MittagLefflerSum, ML_TERM_CAP,
};
pub use wiman_valiron::{
    geometric_grid, order_estimate, order_estimate_with, theil_sen, wv_identity_check,
    wv_identity_points, wv_sample, wv_samples, OrderFit, OrderFitConfig, WVSample,
};
