//! Builders for the extremal examples: generalized Cantor schemes and the
//! counterexample measure, the radial example with divergent potential, and
//! the potential certificate for the one-box condition.
//!
//! Cantor lengths `l_n` are stored through `nu_n = ln lambda_n` with
//! `lambda_n = ln(1/l_n)`; admissible gauges make `lambda_n` grow roughly
//! like `2^n`, so even `lambda_n` leaves double range after ~1000 generations.

use std::f64::consts::{LN_2, TAU};
use std::io::Write;

use serde::Serialize;

use crate::embedding::{
    dyadic_arc_masses, dyadic_box_masses, one_box_sup, potential, potential_sup, stegenga_ratio, StegengaRatio,
};
use crate::error::{Error, Result};
use crate::gauges::{Gauge, Verdict};
use crate::geometry::{Arc, ArcSet, DiskPoint};
use crate::measures::{circle_measure, AtomicMeasure};

/// Largest `lambda` for which literal lengths `e^{-lambda}` are built.
pub const LITERAL_LAMBDA_MAX: f64 = 700.0;
/// Smallest `delta_n` allowed in literal mode (atoms stay below the radius cap).
pub const LITERAL_DELTA_MIN: f64 = 1e-12;
/// Counterexample schemes are never extended beyond this many generations.
pub const MAX_SCHEME_GENERATIONS: usize = 4096;
/// Dyadic depth of the one-box check.
pub const ONEBOX_DEPTH: u32 = 24;
const BOX_CONSTANT: f64 = 8.0;
const ARC_CONSTANT: f64 = 4.0;
const STEGENGA_RESOLUTION: usize = 512;

/// A generalized Cantor set with `phi(l_n) = 2^{-n}` for a normalized gauge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CantorScheme {
    /// `nu_n = ln lambda_n`; `-inf` when `lambda_n = 0`.
    pub log_lambdas: Vec<f64>,
    pub base: Arc,
    #[serde(skip)]
    gauge: Gauge,
}

impl CantorScheme {
    /// Scheme from explicit `lambda_n` (checked for `lambda_{n+1} > lambda_n + ln 2`).
    pub fn from_lambdas(lambdas: &[f64]) -> Result<Self> {
        if lambdas.is_empty() || lambdas.iter().any(|&l| !(l >= 0.0 && l.is_finite())) {
            return Err(Error::validation("lambdas must be finite and nonnegative"));
        }
        let log_lambdas: Vec<f64> = lambdas.iter().map(|&l| if l > 0.0 { l.ln() } else { f64::NEG_INFINITY }).collect();
        for n in 1..log_lambdas.len() {
            check_spacing(&log_lambdas, n)?;
        }
        let base = Arc::new(0.0, (-lambdas[0]).exp().min(TAU))?;
        Ok(CantorScheme { log_lambdas, base, gauge: Gauge::power(1.0)? })
    }

    /// Number of generations after the base arc.
    pub fn generations(&self) -> usize {
        self.log_lambdas.len() - 1
    }

    /// `lambda_n` (may be `+inf` beyond double range).
    pub fn lambda(&self, n: usize) -> f64 {
        self.log_lambdas[n].exp()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.log_lambdas.len()).map(|n| self.lambda(n)).collect()
    }

    /// The normalized gauge (`phi(1) = 1`) the scheme was built from.
    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    fn extend_to(&mut self, generations: usize) -> Result<()> {
        while self.log_lambdas.len() <= generations {
            let n = self.log_lambdas.len();
            let nu = self
                .gauge
                .inverse_ln(-(n as f64) * LN_2)
                .map_err(|e| Error::Construction { generation: n, reason: e.to_string() })?;
            self.log_lambdas.push(nu);
            check_spacing(&self.log_lambdas, n)?;
        }
        Ok(())
    }

    /// The `2^m` arcs of generation `m`.
    pub fn literal_arcs(&self, m: usize) -> Result<ArcSet> {
        if m > self.generations() {
            return Err(Error::validation(format!("generation {m} beyond the scheme's {}", self.generations())));
        }
        if self.lambda(m) > LITERAL_LAMBDA_MAX {
            return Err(Error::Representability(format!(
                "lambda_{m} = {} exceeds {LITERAL_LAMBDA_MAX}",
                self.lambda(m)
            )));
        }
        let lengths: Vec<f64> = (0..=m).map(|n| if n == 0 { self.base.length() } else { (-self.lambda(n)).exp() }).collect();
        // offsets from the base center, built by removing the middle of every arc
        let mut offsets = vec![0.0];
        for n in 0..m {
            let shift = 0.5 * (lengths[n] - lengths[n + 1]);
            offsets = offsets.iter().flat_map(|&o| [o - shift, o + shift]).collect();
        }
        let arcs = offsets
            .into_iter()
            .map(|o| Arc::new(self.base.center() + o, lengths[m]))
            .collect::<Result<Vec<_>>>()?;
        ArcSet::new(arcs)
    }
}

/// `lambda_n - lambda_{n-1} > ln 2` in the doubly-logarithmic representation.
fn check_spacing(log_lambdas: &[f64], n: usize) -> Result<()> {
    let (a, b) = (log_lambdas[n - 1], log_lambdas[n]);
    let ok = if b <= 700.0 {
        let (la, lb) = (a.exp(), b.exp());
        lb - la > LN_2 + 1e-12 * lb.max(1.0)
    } else {
        a == f64::NEG_INFINITY || a + (b - a).exp_m1().ln() > LN_2.ln()
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Construction {
            generation: n,
            reason: format!(
                "lambda_{n} - lambda_{} = {} is not larger than log 2 (l_{n} < l_{}/2 fails)",
                n - 1,
                b.exp() - a.exp(),
                n - 1
            ),
        })
    }
}

/// `lambda_n = phi^{-1}(2^{-n})` for the normalization of `phi` with `phi(1) = 1`.
pub fn scheme_from_gauge(phi: &Gauge, generations: usize) -> Result<CantorScheme> {
    let scale = phi.eval(1.0)?;
    let gauge = phi.scaled(1.0 / scale)?;
    let lambda0 = gauge.inverse(1.0)?.max(0.0);
    let base = Arc::new(0.0, (-lambda0).exp().min(TAU))?;
    let log0 = if lambda0 > 0.0 { lambda0.ln() } else { f64::NEG_INFINITY };
    let mut scheme = CantorScheme { log_lambdas: vec![log0], base, gauge };
    scheme.extend_to(generations)?;
    scheme
        .gauge
        .check_cantor_admissible()
        .map_err(|e| Error::Construction { generation: 0, reason: e.to_string() })?;
    Ok(scheme)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Literal,
    Surrogate,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Mode::Literal),
            "surrogate" => Ok(Mode::Surrogate),
            other => Err(Error::validation(format!("unknown mode '{other}' (literal|surrogate)"))),
        }
    }
}

/// One generation of the counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationRecord {
    pub n: usize,
    /// Truncation depth `m_n`.
    pub m: usize,
    /// `ln delta_n = -(lambda_{m_n} + ln 4)`.
    pub log_delta: f64,
    /// `ln lambda_{m_n}`, finite even when `log_delta` is not.
    pub log_lambda: f64,
    pub surrogate: f64,
    pub box_mass_lower: f64,
    pub ratio_lower: f64,
    pub mode: Mode,
    /// Box mass against QP capacity of `E_{delta_n}` (literal generations only).
    pub stegenga: Option<StegengaRatio>,
}

/// One-box constants of the literal measure over the dyadic family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneBoxCheck {
    pub depth: u32,
    pub max_box_ratio: f64,
    pub box_bound: f64,
    pub max_arc_ratio: f64,
    pub arc_bound: f64,
    pub violations: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub gauge: String,
    pub scheme: CantorScheme,
    pub generations: Vec<GenerationRecord>,
    pub onebox: Option<OneBoxCheck>,
    pub notices: Vec<String>,
    /// `sum 2^{-n} mu_n` over the literal generations.
    #[serde(skip)]
    pub measure: Option<AtomicMeasure>,
}

impl CounterexampleReport {
    /// CSV with columns `n,m_n,log_delta_n,surrogate,ratio_lower,log_lambda,mode`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "m_n", "log_delta_n", "surrogate", "ratio_lower", "log_lambda", "mode"])?;
        for g in &self.generations {
            let mode = match g.mode {
                Mode::Literal => "literal",
                Mode::Surrogate => "surrogate",
            };
            w.write_record([
                g.n.to_string(),
                g.m.to_string(),
                g.log_delta.to_string(),
                g.surrogate.to_string(),
                g.ratio_lower.to_string(),
                g.log_lambda.to_string(),
                mode.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Incremental partial sums of the surrogate over a growing scheme.
struct Surrogates {
    sums: Vec<f64>,
}

impl Surrogates {
    fn at(&mut self, scheme: &mut CantorScheme, m: usize) -> Result<f64> {
        if m >= MAX_SCHEME_GENERATIONS {
            return Err(Error::Construction {
                generation: m,
                reason: format!("scheme needs more than {MAX_SCHEME_GENERATIONS} generations"),
            });
        }
        scheme.extend_to(m)?;
        while self.sums.len() <= m {
            let k = self.sums.len();
            let term = (scheme.log_lambdas[k] - k as f64 * LN_2).exp();
            let prev = self.sums.last().copied().unwrap_or(0.0);
            self.sums.push(prev + term);
        }
        Ok(if self.sums[m] > 0.0 { 1.0 / self.sums[m] } else { f64::INFINITY })
    }
}

/// Counterexample for generations `n = 0..=generations`.
///
/// Depths are chosen so that `ratio_lower(0) >= 2` and
/// `ratio_lower(n + 1) >= 3/2 ratio_lower(n)`, where
/// `ratio_lower(n) = 2^{-n} / surrogate(m_n)`; both hold in floating point.
pub fn counterexample(
    phi: &Gauge,
    generations: usize,
    atoms_per_arc: usize,
    mode: Mode,
) -> Result<CounterexampleReport> {
    if atoms_per_arc == 0 {
        return Err(Error::validation("atoms_per_arc must be at least 1"));
    }
    let mut notices = Vec::new();
    if phi.integral_test().verdict != Verdict::Diverges {
        notices.push(format!("warning: the integral test for {phi} does not report divergence"));
    }
    let mut scheme = scheme_from_gauge(phi, 1)?;
    let mut surrogates = Surrogates { sums: Vec::new() };
    let mut records: Vec<GenerationRecord> = Vec::new();
    let mut m = 0;
    for n in 0..=generations {
        let weight = 0.5f64.powi(n as i32);
        let target = records.last().map_or(2.0, |r| 1.5 * r.ratio_lower);
        if n > 0 {
            m += 1;
        }
        let surrogate = loop {
            match surrogates.at(&mut scheme, m) {
                Ok(s) if weight / s >= target => break Some(s),
                Ok(_) => m += 1,
                Err(e) => {
                    notices.push(format!("generation {n}: {e}; report truncated"));
                    break None;
                }
            }
        };
        let Some(surrogate) = surrogate else { break };
        let nu = scheme.log_lambdas[m];
        records.push(GenerationRecord {
            n,
            m,
            log_delta: -(nu.exp() + 4f64.ln()),
            log_lambda: nu,
            surrogate,
            box_mass_lower: weight,
            ratio_lower: weight / surrogate,
            mode: Mode::Surrogate,
            stegenga: None,
        });
    }

    let mut measure = None;
    let mut onebox = None;
    if mode == Mode::Literal {
        let mut mu = AtomicMeasure::zero();
        let mut finest: Option<ArcSet> = None;
        for rec in records.iter_mut() {
            let lambda = scheme.lambda(rec.m);
            let delta = 0.25 * (-lambda).exp();
            if lambda > LITERAL_LAMBDA_MAX || delta < LITERAL_DELTA_MIN {
                notices.push(format!(
                    "generation {}: delta = exp({}) below {LITERAL_DELTA_MIN}; surrogate mode used",
                    rec.n, rec.log_delta
                ));
                continue;
            }
            let arcs = scheme.literal_arcs(rec.m)?;
            let weights = vec![0.5f64.powi(rec.m as i32); arcs.len()];
            let mu_n = circle_measure(&arcs, &weights, 1.0 - delta, atoms_per_arc)?;
            let part = mu_n.scaled(rec.box_mass_lower)?;
            let dilated = arcs.dilate(delta)?;
            mu = mu.union(&part);
            rec.stegenga = Some(stegenga_ratio(&part, &dilated, STEGENGA_RESOLUTION)?);
            rec.mode = Mode::Literal;
            finest = Some(arcs);
        }
        if let Some(arcs) = finest {
            let m = records.iter().filter(|r| r.mode == Mode::Literal).map(|r| r.m).max().unwrap_or(0);
            let sigma = circle_measure(&arcs, &vec![0.5f64.powi(m as i32); arcs.len()], 0.5, atoms_per_arc)?;
            onebox = Some(onebox_check(&mu, &sigma, scheme.gauge(), ONEBOX_DEPTH));
            measure = Some(mu);
        }
    }
    Ok(CounterexampleReport { gauge: phi.to_string(), scheme, generations: records, onebox, notices, measure })
}

/// Checks `mu(S(I)) <= 8 phi(|I|)` and `sigma(I) <= 4 phi(|I|)` on the dyadic family.
pub fn onebox_check(mu: &AtomicMeasure, sigma: &AtomicMeasure, phi: &Gauge, depth: u32) -> OneBoxCheck {
    let mut violations = 0;
    let mut max_box_ratio: f64 = 0.0;
    let mut max_arc_ratio: f64 = 0.0;
    for (masses, bound, best) in [
        (dyadic_box_masses(mu, depth), BOX_CONSTANT, &mut max_box_ratio),
        (dyadic_arc_masses(sigma, depth), ARC_CONSTANT, &mut max_arc_ratio),
    ] {
        for (idx, m) in masses {
            let ratio = m / phi.eval_log(-idx.length().ln());
            *best = best.max(ratio);
            if ratio > bound {
                violations += 1;
            }
        }
    }
    OneBoxCheck {
        depth,
        max_box_ratio,
        box_bound: BOX_CONSTANT,
        max_arc_ratio,
        arc_bound: ARC_CONSTANT,
        violations,
        pass: violations == 0,
    }
}

/// `F(t) = mu([1 - t, 1)) = 1 / log(2/t)` of the radial example.
pub fn radial_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        1.0 / (2.0 / t.min(1.0)).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialPotential {
    pub w: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// Potential of the radial example at the real point `w`:
/// `1 + int_{1-w}^{1} dx / (x log(2w / (w + x - 1)))`.
pub fn radial_potential(w: f64) -> Result<RadialPotential> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::domain(format!("radial potential needs 0 < w < 1, got {w}")));
    }
    radial_potential_gap(1.0 - w)
}

/// `radial_potential(1 - c)`, exact in the gap `c = 1 - w`.
pub fn radial_potential_gap(c: f64) -> Result<RadialPotential> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain(format!("radial potential needs a gap in (0, 1), got {c}")));
    }
    let w = 1.0 - c;
    let ln_2w = (2.0 * w).ln();
    let ln_w = (-c).ln_1p();
    let ln_c = c.ln();
    // x = c + e^s, so w + x - 1 = e^s
    let f = |s: f64| {
        let e = s.exp();
        e / ((c + e) * (ln_2w - s))
    };
    let split = ln_c.min(ln_w);
    let mut value = 0.0;
    let mut error = 0.0;
    for (a, b) in [(split - 40.0, split), (split, ln_w)] {
        if b > a {
            let out = quadrature::integrate(f, a, b, 1e-13);
            value += out.integral;
            error += out.error_estimate;
        }
    }
    let total = 1.0 + value;
    Ok(RadialPotential { w, value: total, error_estimate: error, converged: error <= 1e-8 * total })
}

/// The chain `sup_w potential <= C_box int_0^16 phi(s)/s ds` for one measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub c_box: f64,
    pub gauge_integral: f64,
    pub bound: f64,
    pub potential_sup: f64,
    pub pass: bool,
    pub witness: Option<Arc>,
    pub argmax: DiskPoint,
}

pub fn potential_certificate(mu: &AtomicMeasure, phi: &Gauge, depth: u32, grid: usize) -> Result<CertificateReport> {
    let test = phi.integral_test();
    if test.verdict != Verdict::Converges {
        return Err(Error::validation(format!(
            "gauge {phi} has no convergent integral test (verdict {:?}); the certificate needs int phi(x)/x dx < inf",
            test.verdict
        )));
    }
    let sup = one_box_sup(mu, phi, depth)?;
    let gauge_integral = phi.integral_test_to(16.0).value;
    let bound = sup.value * gauge_integral;
    let pot = potential_sup(mu, grid)?;
    Ok(CertificateReport {
        c_box: sup.value,
        gauge_integral,
        bound,
        potential_sup: pot.value,
        pass: pot.value <= bound * (1.0 + 1e-9),
        witness: sup.witness,
        argmax: pot.argmax,
    })
}

/// Discretized radial example with `n` atoms.
pub fn radial_measure(n: usize) -> Result<AtomicMeasure> {
    crate::measures::radial_discretize(radial_cdf, n)
}

/// Potential of the discretized radial example at the real point `w`.
pub fn radial_discrete_potential(mu: &AtomicMeasure, w: f64) -> Result<f64> {
    Ok(potential(mu, DiskPoint::new(w, 0.0)?))
}
