//! Extended-range reals stored as a sign and a natural-log magnitude.
//!
//! Series coefficients of entire functions span thousands of orders of
//! magnitude (`1/Γ(nα+1)` for `n` in the millions), far outside `f64`.
//! [`ExtReal`] keeps `ln|x|` instead of `x`, which makes products exact up to
//! one rounding of the exponent and keeps sums well defined through
//! [`LogSum`] and [`SignedLogSum`].
//!
//! Precision note: a log-magnitude carries an absolute rounding error of about
//! `ε·|ln|x||`, so converting back to `f64` has relative error of the same
//! size. Values near 1 round-trip to the last ulp; values near `1e300` only to
//! a few hundred ulps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use serde::{Deserialize, Serialize};

/// Relative size below which a difference of two nonnegative partial sums is
/// treated as complete cancellation.
pub const CANCELLATION_THRESHOLD: f64 = 1e-13;

/// A real number `sign · exp(logmag)`.
///
/// `sign == 0` means exactly zero; in that case `logmag` is `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtReal {
    sign: i8,
    #[serde(with = "logmag_serde")]
    logmag: f64,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: ExtReal = ExtReal {
        sign: 1,
        logmag: 0.0,
    };

    /// Builds `sign · exp(logmag)`. A zero sign or a `-inf` magnitude yields
    /// exact zero; the sign is reduced to `{-1, 0, 1}`.
    pub fn from_log(sign: i8, logmag: f64) -> Self {
        assert!(!logmag.is_nan(), "ExtReal log-magnitude is NaN");
        if sign == 0 || logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            ExtReal {
                sign: sign.signum(),
                logmag,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(!x.is_nan(), "cannot represent NaN as ExtReal");
        if x == 0.0 {
            Self::ZERO
        } else {
            ExtReal {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    /// Converts to `f64`; overflows to `±inf` and underflows to `±0`.
    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// `ln|x|`, or `-inf` for zero.
    pub fn logmag(self) -> f64 {
        self.logmag
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        ExtReal {
            sign: self.sign.abs(),
            logmag: self.logmag,
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero ExtReal");
        ExtReal {
            sign: self.sign,
            logmag: -self.logmag,
        }
    }

    /// Multiplies by `exp(delta)`.
    pub fn scale_log(self, delta: f64) -> Self {
        if self.sign == 0 {
            self
        } else {
            Self::from_log(self.sign, self.logmag + delta)
        }
    }

    /// `|x|^p`, carrying the sign along for integer `p`.
    pub fn powi(self, p: i32) -> Self {
        if p == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if p % 2 == 0 { 1 } else { self.sign };
        Self::from_log(sign, self.logmag * f64::from(p))
    }

    /// Orders by absolute value.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.logmag.total_cmp(&other.logmag),
        }
    }

    /// Relative difference `|a - b| / max(|a|, |b|)`, computed without leaving
    /// log space. Zero when both are zero; one when exactly one is zero or the
    /// signs differ.
    pub fn rel_diff(self, other: Self) -> f64 {
        if self.sign == 0 && other.sign == 0 {
            return 0.0;
        }
        if self.sign != other.sign {
            return 1.0;
        }
        let d = (self.logmag - other.logmag).abs();
        -(-d).exp_m1()
    }
}

impl Default for ExtReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;

    fn mul(self, rhs: ExtReal) -> ExtReal {
        if self.sign == 0 || rhs.sign == 0 {
            return ExtReal::ZERO;
        }
        ExtReal::from_log(self.sign * rhs.sign, self.logmag + rhs.logmag)
    }
}

impl Div for ExtReal {
    type Output = ExtReal;

    fn div(self, rhs: ExtReal) -> ExtReal {
        self * rhs.recip()
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        ExtReal {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl std::ops::Add for ExtReal {
    type Output = ExtReal;

    /// Exact-cancellation aware sum; see [`SignedLogSum`].
    fn add(self, rhs: ExtReal) -> ExtReal {
        let mut acc = SignedLogSum::new();
        acc.push(self);
        acc.push(rhs);
        acc.finish().value
    }
}

impl std::ops::Sub for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: ExtReal) -> ExtReal {
        self + (-rhs)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        if self.logmag.abs() < 700.0 {
            write!(f, "{}", self.to_f64())
        } else {
            let s = if self.sign < 0 { "-" } else { "" };
            write!(f, "{s}exp({})", self.logmag)
        }
    }
}

mod logmag_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

/// Compensated sum of nonnegative terms given by their logarithms.
///
/// Terms are accumulated as `exp(l - max)` with Neumaier compensation; the
/// running maximum is rescaled when a larger term arrives.
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn push_log(&mut self, l: f64) {
        if l == f64::NEG_INFINITY {
            return;
        }
        if l > self.max {
            let factor = (self.max - l).exp();
            self.sum *= factor;
            self.comp *= factor;
            self.max = l;
        }
        let x = (l - self.max).exp();
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Log of the accumulated sum, `-inf` if empty.
    pub fn ln(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + (self.sum + self.comp).ln()
        }
    }

    /// Largest log pushed so far.
    pub fn max_log(&self) -> f64 {
        self.max
    }
}

/// Result of a sign-split summation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumOutcome {
    pub value: ExtReal,
    /// Set when the positive and negative parts agreed to within
    /// [`CANCELLATION_THRESHOLD`] and the value was reported as zero.
    pub cancelled: bool,
}

/// Sum of signed [`ExtReal`] terms kept as two nonnegative partial sums,
/// differenced once at the end.
#[derive(Clone, Copy, Debug, Default)]
pub struct SignedLogSum {
    pos: LogSum,
    neg: LogSum,
}

impl SignedLogSum {
    pub fn new() -> Self {
        SignedLogSum {
            pos: LogSum::new(),
            neg: LogSum::new(),
        }
    }

    pub fn push(&mut self, x: ExtReal) {
        match x.sign {
            1 => self.pos.push_log(x.logmag),
            -1 => self.neg.push_log(x.logmag),
            _ => {}
        }
    }

    /// Pushes `sign · exp(l)`.
    pub fn push_log(&mut self, sign: i8, l: f64) {
        match sign.signum() {
            1 => self.pos.push_log(l),
            -1 => self.neg.push_log(l),
            _ => {}
        }
    }

    /// Log of the larger of the two partial sums.
    pub fn ln_scale(&self) -> f64 {
        self.pos.ln().max(self.neg.ln())
    }

    /// Differences the partial sums, flushing relative cancellation below
    /// [`CANCELLATION_THRESHOLD`] to zero.
    pub fn finish(&self) -> SumOutcome {
        self.difference(CANCELLATION_THRESHOLD)
    }

    /// Differences the partial sums without flushing; `cancelled` still
    /// reports whether the threshold was crossed.
    pub fn finish_unflushed(&self) -> SumOutcome {
        let out = self.difference(0.0);
        SumOutcome {
            cancelled: self.relative_remainder() < CANCELLATION_THRESHOLD,
            ..out
        }
    }

    fn relative_remainder(&self) -> f64 {
        let (p, n) = (self.pos.ln(), self.neg.ln());
        if p == f64::NEG_INFINITY || n == f64::NEG_INFINITY {
            return 1.0;
        }
        -(-(p - n).abs()).exp_m1()
    }

    fn difference(&self, threshold: f64) -> SumOutcome {
        let (p, n) = (self.pos.ln(), self.neg.ln());
        match (p == f64::NEG_INFINITY, n == f64::NEG_INFINITY) {
            (true, true) => SumOutcome {
                value: ExtReal::ZERO,
                cancelled: false,
            },
            (false, true) => SumOutcome {
                value: ExtReal::from_log(1, p),
                cancelled: false,
            },
            (true, false) => SumOutcome {
                value: ExtReal::from_log(-1, n),
                cancelled: false,
            },
            (false, false) => {
                let (big, small, sign) = if p >= n { (p, n, 1) } else { (n, p, -1) };
                let remainder = -(small - big).exp_m1();
                if remainder <= threshold || remainder == 0.0 {
                    SumOutcome {
                        value: ExtReal::ZERO,
                        cancelled: true,
                    }
                } else {
                    SumOutcome {
                        value: ExtReal::from_log(sign, big + remainder.ln()),
                        cancelled: false,
                    }
                }
            }
        }
    }
}
