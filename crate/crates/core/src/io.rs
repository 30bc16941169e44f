//! Text formats: `%.17g` number formatting and the versioned JSON records
//! for series, problems and solutions.
//!
//! Coefficients are written as `{"sign": s, "logmag": l}` so that extreme
//! magnitudes survive a round trip; on input a plain number is accepted as
//! well. Non-finite reals are written as `null`.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::ode::{CauchyProblem, SolutionSeries};
use crate::series::AlphaSeries;

pub const FORMAT_VERSION: u32 = 1;

/// Formats `x` like C's `printf("%.17g", x)`.
pub fn fmt_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty JSON with every float written by [`fmt_g17`].
pub struct G17Formatter<'a>(PrettyFormatter<'a>);

impl Default for G17Formatter<'_> {
    fn default() -> Self {
        G17Formatter(PrettyFormatter::new())
    }
}

impl Formatter for G17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with `%.17g` floats and a trailing
/// newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter::default());
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtRecord {
    sign: i8,
    logmag: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRecord {
    Plain(f64),
    Ext(ExtRecord),
}

/// On-disk form of an [`AlphaSeries`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    coeffs: Vec<CoeffRecord>,
    #[serde(default)]
    nominal_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polynomial: Option<bool>,
}

fn check_format(format: Option<u32>, what: &str) -> Result<()> {
    match format {
        None | Some(FORMAT_VERSION) => Ok(()),
        Some(v) => Err(Error::Parse(format!("{what}: unsupported format version {v}"))),
    }
}

fn coeff_from_record(rec: &CoeffRecord, field: &str) -> Result<ExtReal> {
    match rec {
        CoeffRecord::Plain(x) => Ok(ExtReal::from_f64(*x)),
        CoeffRecord::Ext(ExtRecord { sign, logmag }) => match (sign, logmag) {
            (0, None) => Ok(ExtReal::ZERO),
            (1 | -1, Some(l)) => Ok(ExtReal::from_log(*sign, *l)),
            _ => Err(Error::Parse(format!(
                "{field}: sign must be -1 or 1 with a finite logmag, or 0 with logmag null"
            ))),
        },
    }
}

fn coeff_to_record(c: ExtReal) -> CoeffRecord {
    CoeffRecord::Ext(ExtRecord {
        sign: c.sign(),
        logmag: (!c.is_zero()).then_some(c.logmag()),
    })
}

impl SeriesRecord {
    pub fn from_series(series: &AlphaSeries, polynomial: bool) -> Self {
        let r = series.nominal_radius();
        SeriesRecord {
            format: Some(FORMAT_VERSION),
            alpha: Some(series.alpha()),
            coeffs: series.coeffs().iter().map(|&c| coeff_to_record(c)).collect(),
            nominal_radius: r.is_finite().then_some(r),
            polynomial: polynomial.then_some(true),
        }
    }

    fn nested(series: &AlphaSeries, polynomial: bool) -> Self {
        SeriesRecord {
            format: None,
            ..Self::from_series(series, polynomial)
        }
    }

    /// Builds the series; `default_alpha` applies when the record has none.
    pub fn to_series(&self, default_alpha: Option<f64>, field: &str) -> Result<(AlphaSeries, bool)> {
        check_format(self.format, field)?;
        let alpha = self
            .alpha
            .or(default_alpha)
            .ok_or_else(|| Error::Parse(format!("{field}: missing field `alpha`")))?;
        if let Some(d) = default_alpha {
            if alpha != d {
                return Err(Error::Parse(format!(
                    "{field}: alpha {alpha} differs from the expected alpha {d}"
                )));
            }
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| coeff_from_record(c, &format!("{field}.coeffs[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let mut series = AlphaSeries::new(alpha, coeffs)?;
        if let Some(r) = self.nominal_radius {
            series = series.with_radius(r)?;
        }
        Ok((series, self.polynomial.unwrap_or(false)))
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Parses a series file; returns the series and its polynomial flag.
pub fn parse_series(text: &str) -> Result<(AlphaSeries, bool)> {
    let rec: SeriesRecord = parse_json(text, "series")?;
    rec.to_series(None, "series")
}

pub fn series_to_json(series: &AlphaSeries, polynomial: bool) -> String {
    to_json_string(&SeriesRecord::from_series(series, polynomial))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemRecord {
    #[serde(default)]
    format: Option<u32>,
    alpha: f64,
    n: usize,
    p: Vec<SeriesRecord>,
    b: Vec<f64>,
    #[serde(rename = "N")]
    big_n: usize,
}

/// Parses a problem file into the problem and its truncation order `N`.
pub fn parse_problem(text: &str) -> Result<(CauchyProblem, usize)> {
    let rec: ProblemRecord = parse_json(text, "problem")?;
    check_format(rec.format, "problem")?;
    if rec.p.len() != rec.n {
        return Err(Error::Parse(format!(
            "problem.p: expected n = {} coefficient series, found {}",
            rec.n,
            rec.p.len()
        )));
    }
    if rec.b.len() != rec.n {
        return Err(Error::Parse(format!(
            "problem.b: expected n = {} initial values, found {}",
            rec.n,
            rec.b.len()
        )));
    }
    let mut p = Vec::with_capacity(rec.n);
    let mut flags = Vec::with_capacity(rec.n);
    for (k, s) in rec.p.iter().enumerate() {
        let (series, poly) = s.to_series(Some(rec.alpha), &format!("problem.p[{k}]"))?;
        p.push(series);
        flags.push(poly);
    }
    let mut prob = CauchyProblem::new(rec.alpha, p, rec.b)?;
    for (k, poly) in flags.into_iter().enumerate() {
        if poly {
            prob = prob.with_polynomial(k)?;
        }
    }
    Ok((prob, rec.big_n))
}

pub fn problem_to_json(prob: &CauchyProblem, big_n: usize) -> String {
    let rec = ProblemRecord {
        format: Some(FORMAT_VERSION),
        alpha: prob.alpha(),
        n: prob.n(),
        p: prob
            .p()
            .iter()
            .enumerate()
            .map(|(k, s)| SeriesRecord::nested(s, prob.is_polynomial(k)))
            .collect(),
        b: prob.b().to_vec(),
        big_n,
    };
    to_json_string(&rec)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionRecord {
    format: u32,
    series: SeriesRecord,
    seeded: Vec<f64>,
    majorant_rate: f64,
    #[serde(default)]
    cancelled: Vec<usize>,
}

pub fn solution_to_json(sol: &SolutionSeries) -> String {
    to_json_string(&SolutionRecord {
        format: FORMAT_VERSION,
        series: SeriesRecord::nested(&sol.series, false),
        seeded: sol.seeded.clone(),
        majorant_rate: sol.majorant_rate,
        cancelled: sol.cancelled.clone(),
    })
}

pub fn parse_solution(text: &str) -> Result<SolutionSeries> {
    let rec: SolutionRecord = parse_json(text, "solution")?;
    check_format(Some(rec.format), "solution")?;
    let (series, _) = rec.series.to_series(None, "solution.series")?;
    Ok(SolutionSeries {
        series,
        majorant_rate: rec.majorant_rate,
        seeded: rec.seeded,
        cancelled: rec.cancelled,
    })
}
