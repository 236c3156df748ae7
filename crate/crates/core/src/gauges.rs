//! Box gauges `phi` for the one-box condition `mu(S(I)) = O(phi(|I|))`.
//!
//! A gauge is evaluated in log-domain: with `lambda = log(1/x)` the gauge is
//! stored through `ln phi(e^{-lambda})`, which stays finite far beyond the
//! range where `x` itself is representable. For still larger scales (Cantor
//! schemes whose lengths are `exp(-2^n)`) a second logarithm `nu = ln lambda`
//! is used.
//!
//! Every family is restricted to `(0, x0]` on which it is increasing and
//! `phi(x)/x` is decreasing, then extended by the constant `phi(x0)`.

use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// The builtin gauge families.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeFamily {
    /// `phi(x) = x^beta`.
    Power { beta: f64 },
    /// `phi(x) = 1 / log(a / x)`.
    Log { a: f64 },
    /// `phi(x) = (log(a/x))^{-1} (log log(a/x))^{-alpha}`.
    LogLog { a: f64, alpha: f64 },
    /// Piecewise-linear interpolation of monotone samples `(x, phi(x))`.
    Table { xs: Vec<f64>, ys: Vec<f64>, source: String },
}

/// An increasing gauge on `(0, 2 pi]` with log-domain evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Gauge {
    family: GaugeFamily,
    /// `-ln x0`: below this `lambda` the gauge is constant.
    lambda_cap: f64,
    /// `ln c` for the scalar multiple `c * phi`.
    log_scale: f64,
}

/// Grid used by the monotonicity checks: `lambda` from `-ln(2 pi)` to `CHECK_LAMBDA_MAX`.
const CHECK_POINTS: usize = 10_000;
const CHECK_LAMBDA_MAX: f64 = 700.0;

/// Largest `lambda` used by bracketing in the plain log-domain.
const LAMBDA_LIMIT: f64 = 1e300;
/// Below this `ln y` inversion switches to the doubly-logarithmic variable.
const LN_Y_SWITCH: f64 = -600.0;

/// Cutoffs of the convergence test are `lambda_k = exp(exp(k * R_MAX / WINDOWS))`.
const WINDOWS: usize = 40;
const RATIO_WINDOW: usize = 10;
const DECAY_RATIO: f64 = 0.9;
const FLAT_RATIO: f64 = 0.99;
const FLOOR: f64 = 1e-6;

/// Smallest `u > 1` with `(u - 1) ln u >= alpha`; beyond it `x u (ln u)^alpha`
/// is increasing in `x`.
fn loglog_threshold(alpha: f64) -> f64 {
    if alpha <= 0.0 {
        return 1.0;
    }
    let h = |u: f64| (u - 1.0) * u.ln() - alpha;
    let (mut lo, mut hi) = (1.0, 2.0);
    while h(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `ln(ln a + lambda)`, accurate for huge `lambda` and for `lambda` near 0.
fn ln_shifted(ln_a: f64, lambda: f64) -> f64 {
    if lambda > 1e8 {
        lambda.ln() + (ln_a / lambda).ln_1p()
    } else if ln_a > 0.0 {
        ln_a.ln() + (lambda / ln_a).ln_1p()
    } else {
        (ln_a + lambda).ln()
    }
}

impl Gauge {
    fn with_family(family: GaugeFamily, lambda_cap: f64) -> Result<Self> {
        let gauge = Gauge { family, lambda_cap, log_scale: 0.0 };
        gauge.check_increasing()?;
        Ok(gauge)
    }

    pub fn power(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::validation(format!("power gauge needs beta > 0, got {beta}")));
        }
        Gauge::with_family(GaugeFamily::Power { beta }, -TAU.ln())
    }

    /// `1 / log(a/x)` on `(0, min(2 pi, a/e)]`.
    pub fn log(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::validation(format!("log gauge needs a > 0, got {a}")));
        }
        let cap = (1.0 - a.ln()).max(-TAU.ln());
        Gauge::with_family(GaugeFamily::Log { a }, cap)
    }

    /// `(log(a/x))^{-1} (log log(a/x))^{-alpha}` on its monotone range.
    pub fn loglog(a: f64, alpha: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::validation(format!(
                "loglog gauge needs a > 0 and alpha >= 0, got a = {a}, alpha = {alpha}"
            )));
        }
        let cap = (loglog_threshold(alpha) - a.ln()).max(-TAU.ln());
        Gauge::with_family(GaugeFamily::LogLog { a, alpha }, cap)
    }

    /// Table gauge from `(x, phi(x))` samples; `phi` must be positive and nondecreasing.
    pub fn table(points: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        let mut points = points;
        if points.len() < 2 {
            return Err(Error::validation("table gauge needs at least two samples"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (i, &(x, y)) in points.iter().enumerate() {
            if !(x.is_finite() && x > 0.0 && y.is_finite() && y > 0.0) {
                return Err(Error::validation(format!("table gauge row {i}: ({x}, {y}) not positive")));
            }
            if i > 0 && (x == points[i - 1].0 || y < points[i - 1].1) {
                return Err(Error::validation(format!(
                    "non-monotone table gauge at row {i}: ({x}, {y})"
                )));
            }
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        let cap = -xs[xs.len() - 1].min(TAU).ln();
        Gauge::with_family(GaugeFamily::Table { xs, ys, source: source.into() }, cap)
    }

    /// Reads a table gauge from a headerless or `x,phi` CSV file.
    pub fn table_from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(path)?;
        let mut points = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::validation(format!("table gauge line {}: expected two columns", i + 1)));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => points.push((x, y)),
                _ if i == 0 => continue,
                _ => {
                    return Err(Error::validation(format!(
                        "table gauge line {}: cannot parse '{}'",
                        i + 1,
                        record.iter().collect::<Vec<_>>().join(",")
                    )))
                }
            }
        }
        Gauge::table(points, path.display().to_string())
    }

    pub fn family(&self) -> &GaugeFamily {
        &self.family
    }

    /// `x0`, the end of the monotone range.
    pub fn cap(&self) -> f64 {
        (-self.lambda_cap).exp()
    }

    /// The gauge `factor * phi`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::validation(format!("gauge scale {factor} must be positive")));
        }
        let mut g = self.clone();
        g.log_scale += factor.ln();
        Ok(g)
    }

    /// `ln phi(e^{-lambda})`.
    pub fn ln_eval_log(&self, lambda: f64) -> f64 {
        let l = lambda.max(self.lambda_cap);
        let base = match &self.family {
            GaugeFamily::Power { beta } => -beta * l,
            GaugeFamily::Log { a } => -ln_shifted(a.ln(), l),
            GaugeFamily::LogLog { a, alpha } => {
                let lu = ln_shifted(a.ln(), l);
                if *alpha == 0.0 {
                    -lu
                } else {
                    -lu - alpha * lu.ln()
                }
            }
            GaugeFamily::Table { xs, ys, .. } => {
                let x_min = xs[0];
                if l > -x_min.ln() {
                    ys[0].ln() - x_min.ln() - l
                } else {
                    let x = (-l).exp();
                    let idx = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
                    let (x0, x1, y0, y1) = (xs[idx - 1], xs[idx], ys[idx - 1], ys[idx]);
                    let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
                    (y0 + t * (y1 - y0)).ln()
                }
            }
        };
        base + self.log_scale
    }

    /// `ln phi` at `lambda = e^nu`.
    pub fn ln_eval_loglog(&self, nu: f64) -> f64 {
        if nu < 690.0 {
            return self.ln_eval_log(nu.exp());
        }
        // lambda = e^nu overflows; only the asymptotic branches are reachable here
        let base = match &self.family {
            GaugeFamily::Power { .. } | GaugeFamily::Table { .. } => f64::NEG_INFINITY,
            GaugeFamily::Log { a } => -(nu + (a.ln() * (-nu).exp()).ln_1p()),
            GaugeFamily::LogLog { a, alpha } => {
                let lu = nu + (a.ln() * (-nu).exp()).ln_1p();
                if *alpha == 0.0 {
                    -lu
                } else {
                    -lu - alpha * lu.ln()
                }
            }
        };
        base + self.log_scale
    }

    /// `phi(e^{-lambda})`.
    pub fn eval_log(&self, lambda: f64) -> f64 {
        self.ln_eval_log(lambda).exp()
    }

    /// `phi(x)` for `x > 0` (constant beyond the monotone range).
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || x.is_nan() {
            return Err(Error::domain(format!("gauge evaluated at non-positive x = {x}")));
        }
        Ok(self.eval_log(-x.ln()))
    }

    fn check_grid() -> impl Iterator<Item = f64> {
        let lo = -TAU.ln();
        (0..CHECK_POINTS).map(move |k| lo + (CHECK_LAMBDA_MAX - lo) * k as f64 / (CHECK_POINTS - 1) as f64)
    }

    fn check_increasing(&self) -> Result<()> {
        let mut prev = f64::INFINITY;
        for lambda in Gauge::check_grid() {
            let v = self.ln_eval_log(lambda);
            if v.is_nan() || v > prev + 1e-12 {
                return Err(Error::validation(format!(
                    "gauge {self} is not increasing near x = exp({})",
                    -lambda
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// Checks that `phi(x)/x` is strictly decreasing on the grid.
    pub fn check_cantor_admissible(&self) -> Result<()> {
        let mut prev = f64::NEG_INFINITY;
        for lambda in Gauge::check_grid() {
            let v = self.ln_eval_log(lambda) + lambda;
            if !(v > prev) {
                return Err(Error::validation(format!(
                    "phi(x)/x is not strictly decreasing for gauge {self} near x = exp({})",
                    -lambda
                )));
            }
            prev = v;
        }
        Ok(())
    }

    /// Largest `lambda` with `phi(e^{-lambda}) >= y`, i.e. `l = e^{-lambda}` solves `phi(l) = y`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::domain(format!("gauge inverse needs y > 0, got {y}")));
        }
        let target = y.ln();
        let mut lo = -TAU.ln();
        if self.ln_eval_log(lo) < target {
            return Err(Error::NoSolution(format!(
                "y = {y} exceeds phi(2 pi) = {}",
                self.eval_log(lo)
            )));
        }
        let mut hi = 1.0;
        while self.ln_eval_log(hi) >= target {
            lo = hi;
            hi *= 2.0;
            if hi > LAMBDA_LIMIT {
                return Err(Error::NoSolution(format!("gauge {self} never drops below {y}")));
            }
        }
        Ok(bisect(lo, hi, |l| self.ln_eval_log(l) >= target))
    }

    /// Inverse in doubly-logarithmic form: returns `nu = ln lambda` for the target
    /// value `ln y`, valid when `y` itself underflows. A zero `lambda` maps to `-inf`.
    pub fn inverse_ln(&self, ln_y: f64) -> Result<f64> {
        if ln_y.is_nan() {
            return Err(Error::domain("gauge inverse of NaN"));
        }
        if ln_y >= LN_Y_SWITCH {
            let lambda = self.inverse(ln_y.exp())?;
            return Ok(if lambda > 0.0 { lambda.ln() } else { f64::NEG_INFINITY });
        }
        let mut lo = self.inverse(LN_Y_SWITCH.exp())?.ln();
        let mut step = 1.0;
        let mut hi = lo + step;
        while self.ln_eval_loglog(hi) >= ln_y {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
            if hi > 1e6 {
                return Err(Error::NoSolution(format!("gauge {self} never drops below exp({ln_y})")));
            }
        }
        Ok(bisect(lo, hi, |nu| self.ln_eval_loglog(nu) >= ln_y))
    }

    /// Tanh-sinh integral of `phi(e^{-lambda})` over `[a, b]` in `lambda`, split at the cap.
    fn integrate_lambda(&self, a: f64, b: f64) -> f64 {
        let f = |l: f64| self.eval_log(l);
        let cap = self.lambda_cap;
        if a < cap && cap < b {
            integrate(f, a, cap) + integrate(f, cap, b)
        } else {
            integrate(f, a, b)
        }
    }

    fn window_cutoff(k: usize) -> f64 {
        let r_max = LAMBDA_LIMIT.ln().ln();
        (r_max * k as f64 / WINDOWS as f64).exp().exp()
    }

    /// Integral of `phi(e^{-lambda})` over `[ln ln cutoff_{k-1}, ln ln cutoff_k]` windows.
    fn increments(&self) -> Vec<f64> {
        (1..=WINDOWS)
            .map(|k| {
                let (sa, sb) = (Gauge::window_cutoff(k - 1).ln(), Gauge::window_cutoff(k).ln());
                integrate(|s: f64| (self.ln_eval_log(s.exp()) + s).exp(), sa, sb)
            })
            .collect()
    }

    /// Analytic tail beyond the last cutoff (nonzero only for convergent loglog gauges).
    fn tail(&self) -> f64 {
        match self.family {
            GaugeFamily::LogLog { a, alpha } if alpha > 1.0 => {
                let lu = ln_shifted(a.ln(), LAMBDA_LIMIT);
                self.log_scale.exp() * lu.powf(1.0 - alpha) / (alpha - 1.0)
            }
            _ => 0.0,
        }
    }

    /// Convergence test for `int_0^{2 pi} phi(x)/x dx`.
    pub fn integral_test(&self) -> IntegralTest {
        self.integral_test_to(TAU)
    }

    /// Convergence test for `int_0^{upper} phi(x)/x dx`, using the constant extension above `x0`.
    pub fn integral_test_to(&self, upper: f64) -> IntegralTest {
        let head = self.integrate_lambda(-upper.ln(), Gauge::window_cutoff(0));
        let increments = self.increments();
        let ratios: Vec<f64> = increments
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect();
        let last_ratios = &ratios[ratios.len() - RATIO_WINDOW..];
        let last_incs = &increments[increments.len() - RATIO_WINDOW..];
        let verdict = if last_ratios.iter().all(|&r| r < DECAY_RATIO) {
            Verdict::Converges
        } else if last_ratios.iter().all(|&r| r >= FLAT_RATIO) && last_incs.iter().all(|&v| v >= FLOOR) {
            Verdict::Diverges
        } else {
            Verdict::Inconclusive
        };
        let partial = head + increments.iter().sum::<f64>();
        let value = if verdict == Verdict::Converges { partial + self.tail() } else { partial };
        IntegralTest { verdict, converges: verdict == Verdict::Converges, value, increments, ratios }
    }
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    quadrature::integrate(f, a, b, 1e-14).integral
}

/// Bisection for the boundary of a predicate that holds on the left.
fn bisect(mut lo: f64, mut hi: f64, holds: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..4000 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

/// Evidence for the convergence of `int phi(x)/x dx`.
///
/// `increments[k]` integrates over `lambda` between consecutive cutoffs
/// `exp(exp(r_k))`; these are uniform in `ln ln ln(1/x)`, where a convergent
/// loglog gauge decays geometrically and the borderline case stays flat.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralTest {
    pub verdict: Verdict,
    pub converges: bool,
    /// The integral (convergent case) or the last partial sum.
    pub value: f64,
    pub increments: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            GaugeFamily::Power { beta } => write!(f, "power:{beta}")?,
            GaugeFamily::Log { a } => write!(f, "log:{a}")?,
            GaugeFamily::LogLog { a, alpha } => write!(f, "loglog:a={a},alpha={alpha}")?,
            GaugeFamily::Table { source, .. } => write!(f, "table:{source}")?,
        }
        if self.log_scale != 0.0 {
            write!(f, " (scaled by {})", self.log_scale.exp())?;
        }
        Ok(())
    }
}

fn parse_number(s: &str) -> Result<f64> {
    match s.trim() {
        "e" => Ok(std::f64::consts::E),
        t => t.parse::<f64>().map_err(|_| Error::validation(format!("cannot parse number '{t}'"))),
    }
}

/// Parses `key=value` lists, allowing a bare leading value for `first_key`.
fn parse_params(body: &str, first_key: &str) -> Result<Vec<(String, f64)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .enumerate()
        .map(|(i, part)| match part.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), parse_number(v)?)),
            None if i == 0 => Ok((first_key.to_string(), parse_number(part)?)),
            None => Err(Error::validation(format!("gauge parameter '{part}' lacks a key"))),
        })
        .collect()
}

fn take(params: &[(String, f64)], key: &str, allowed: &[&str]) -> Result<Option<f64>> {
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(Error::validation(format!("unknown gauge parameter '{k}'")));
    }
    Ok(params.iter().find(|(k, _)| k == key).map(|(_, v)| *v))
}

impl FromStr for Gauge {
    type Err = Error;

    /// `power:1`, `log:2.718281828` (or `log:e`), `loglog:a=10,alpha=2`, `table:<csv path>`.
    fn from_str(spec: &str) -> Result<Self> {
        let (name, body) = spec
            .split_once(':')
            .ok_or_else(|| Error::validation(format!("gauge '{spec}' must look like family:params")))?;
        match name.trim() {
            "power" => {
                let p = parse_params(body, "beta")?;
                Gauge::power(take(&p, "beta", &["beta"])?.unwrap_or(1.0))
            }
            "log" => {
                let p = parse_params(body, "a")?;
                let a = take(&p, "a", &["a"])?.ok_or_else(|| Error::validation("log gauge needs a"))?;
                Gauge::log(a)
            }
            "loglog" => {
                let p = parse_params(body, "a")?;
                let a = take(&p, "a", &["a", "alpha"])?.ok_or_else(|| Error::validation("loglog gauge needs a"))?;
                let alpha = take(&p, "alpha", &["a", "alpha"])?
                    .ok_or_else(|| Error::validation("loglog gauge needs alpha"))?;
                Gauge::loglog(a, alpha)
            }
            "table" => Gauge::table_from_csv(body.trim()),
            other => Err(Error::validation(format!("unknown gauge family '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{E, LN_2};

    use super::*;

    #[test]
    fn eval_examples() {
        let g = Gauge::log(E).unwrap();
        let x = (1.0 - 8.0f64).exp();
        assert!((g.eval(x).unwrap() - 0.125).abs() < 1e-15);
        assert!((Gauge::power(1.0).unwrap().eval(0.01).unwrap() - 0.01).abs() < 1e-17);
        let lambda = 2f64.powi(50) - 1.0;
        assert!((g.eval_log(lambda) - 2f64.powi(-50)).abs() < 1e-12 * 2f64.powi(-50));
        assert!(g.eval(0.0).is_err());
        assert!(g.eval(-1.0).is_err());
    }

    #[test]
    fn log_gauge_is_constant_beyond_cap() {
        let g = Gauge::log(E).unwrap();
        assert!((g.cap() - 1.0).abs() < 1e-15);
        assert_eq!(g.eval(2.0).unwrap(), g.eval(1.0).unwrap());
        assert_eq!(g.eval(TAU).unwrap(), 1.0);
    }

    #[test]
    fn inverse_examples() {
        let g = Gauge::log(E).unwrap();
        for n in 0..20 {
            let lambda = g.inverse(2f64.powi(-n)).unwrap();
            let exact = 2f64.powi(n) - 1.0;
            assert!((lambda - exact).abs() <= 1e-12 * exact.max(1.0), "n = {n}: {lambda}");
        }
        let lambda = Gauge::power(1.0).unwrap().inverse(0.25).unwrap();
        assert!((lambda - 4f64.ln()).abs() < 1e-14);
        assert!(matches!(g.inverse(2.0), Err(Error::NoSolution(_))));
    }

    #[test]
    fn inverse_loglog_round_trip() {
        let g = Gauge::loglog(10.0, 2.0).unwrap();
        let y = 2f64.powi(-10);
        let lambda = g.inverse(y).unwrap();
        assert!((g.eval_log(lambda) / y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_ln_beyond_underflow() {
        let g = Gauge::log(E).unwrap();
        // phi(l_n) = 2^{-n}: lambda_n = 2^n - 1, so nu_n = ln(2^n - 1) ~ n ln 2
        for n in [10usize, 1000, 1500, 1785] {
            let nu = g.inverse_ln(-(n as f64) * LN_2).unwrap();
            let expected = if n < 60 { (2f64.powi(n as i32) - 1.0).ln() } else { n as f64 * LN_2 };
            assert!((nu - expected).abs() < 1e-12 * expected, "n = {n}: {nu} vs {expected}");
        }
        assert_eq!(g.inverse_ln(0.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn cantor_admissibility_check() {
        assert!(Gauge::log(E).unwrap().check_cantor_admissible().is_ok());
        assert!(Gauge::loglog(10.0, 1.0).unwrap().check_cantor_admissible().is_ok());
        assert!(Gauge::power(0.5).unwrap().check_cantor_admissible().is_ok());
        assert!(Gauge::power(1.0).unwrap().check_cantor_admissible().is_err());
    }

    #[test]
    fn table_validation() {
        assert!(Gauge::table(vec![(0.1, 0.5), (0.2, 0.4)], "t").is_err());
        let g = Gauge::table(vec![(0.1, 0.1), (1.0, 0.5), (2.0, 0.7)], "t").unwrap();
        assert!((g.eval(0.55).unwrap() - 0.3).abs() < 1e-12);
        assert!((g.eval(0.05).unwrap() - 0.05).abs() < 1e-12);
        assert_eq!(g.eval(5.0).unwrap(), 0.7);
    }

    #[test]
    fn parse_specs() {
        assert_eq!("power:1".parse::<Gauge>().unwrap(), Gauge::power(1.0).unwrap());
        assert_eq!("log:e".parse::<Gauge>().unwrap(), Gauge::log(E).unwrap());
        assert_eq!("log:2.718281828".parse::<Gauge>().unwrap(), Gauge::log(2.718281828).unwrap());
        assert_eq!(
            "loglog:a=10,alpha=2".parse::<Gauge>().unwrap(),
            Gauge::loglog(10.0, 2.0).unwrap()
        );
        assert!("loglog:a=10".parse::<Gauge>().is_err());
        assert!("loglog:a=10,beta=2".parse::<Gauge>().is_err());
        assert!("cubic:3".parse::<Gauge>().is_err());
    }

    #[test]
    fn integral_test_verdicts() {
        let power = Gauge::power(1.0).unwrap().integral_test();
        assert_eq!(power.verdict, Verdict::Converges);
        assert!((power.value - TAU).abs() < 1e-8, "{}", power.value);
        assert_eq!(Gauge::loglog(10.0, 2.0).unwrap().integral_test().verdict, Verdict::Converges);
        assert_eq!(Gauge::loglog(10.0, 1.0).unwrap().integral_test().verdict, Verdict::Diverges);
        assert_eq!(Gauge::log(E).unwrap().integral_test().verdict, Verdict::Diverges);
    }

    #[test]
    fn loglog_integral_matches_closed_form() {
        // int_0^{x0} phi(x)/x dx = 1/((alpha-1) (ln u*)^{alpha-1}); above x0 the constant adds phi(x0) ln(2pi/x0)
        let alpha = 2.0;
        let g = Gauge::loglog(10.0, alpha).unwrap();
        let u_star = loglog_threshold(alpha);
        let x0 = g.cap();
        let phi0 = g.eval(x0).unwrap();
        let exact = 1.0 / ((alpha - 1.0) * u_star.ln().powf(alpha - 1.0)) + phi0 * (TAU / x0).ln();
        let t = g.integral_test();
        assert!((t.value - exact).abs() < 1e-9, "{} vs {}", t.value, exact);
    }
}
