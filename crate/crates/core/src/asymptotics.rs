//! Remainder scans, power-law envelope fits, the `beta` series and the
//! oscillatory integrals that control the boundary terms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::gk15;
use crate::spectral_count::{CountSample, Spectrum};

/// Fraction of a step added to every scan point; multiplied by `1/sqrt(2)`
/// so grid points do not land on eigenvalue ties.
pub const SCAN_OFFSET_FRACTION: f64 = 0.01;

/// Minimum number of blocks accepted by the envelope fit.
pub const MIN_FIT_BLOCKS: usize = 8;

/// Default block size for envelope fits.
pub const DEFAULT_BLOCK_SIZE: usize = 20;

/// Scan abscissae `mu_min + i step + step * 0.01 / sqrt(2)` not exceeding `mu_max`.
pub fn scan_grid(mu_min: f64, mu_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(mu_min.is_finite() && mu_max.is_finite() && mu_min > 0.0 && mu_min < mu_max) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < mu_min < mu_max, got [{mu_min}, {mu_max}]"
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    let offset = step * SCAN_OFFSET_FRACTION * std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0u64.. {
        let mu = mu_min + i as f64 * step + offset;
        if mu > mu_max {
            break;
        }
        out.push(mu);
    }
    Ok(out)
}

/// Count comparison at each of the given cutoffs, in the given order.
pub fn samples_at(mus: &[f64]) -> Result<Vec<CountSample>> {
    let Some(top) = mus.iter().copied().reduce(f64::max) else {
        return Ok(Vec::new());
    };
    let spectrum = Spectrum::new(top)?;
    mus.par_iter().map(|&mu| spectrum.sample(mu)).collect()
}

/// Count comparison over [`scan_grid`].
pub fn scan_remainder(mu_min: f64, mu_max: f64, step: f64) -> Result<Vec<CountSample>> {
    samples_at(&scan_grid(mu_min, mu_max, step)?)
}

/// Least-squares power law `|value| ~ C mu^exponent` through block maxima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent: f64,
    /// `ln C`
    pub log_constant: f64,
    pub r_squared: f64,
    pub sample_count: usize,
    pub block_size: usize,
}

/// Which column of a scan the envelope is fitted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitColumn {
    Remainder,
    Diff,
}

/// Envelope fit of the chosen column of a scan.
pub fn fit_column(
    samples: &[CountSample],
    column: FitColumn,
    block_size: usize,
) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| match column {
            FitColumn::Remainder => (s.mu, s.remainder),
            FitColumn::Diff => (s.mu, s.diff as f64),
        })
        .collect();
    fit_envelope_points(&points, block_size)
}

/// Envelope fit of `|remainder|`.
pub fn fit_envelope(samples: &[CountSample], block_size: usize) -> Result<FitResult> {
    fit_column(samples, FitColumn::Remainder, block_size)
}

/// Splits `(mu, value)` pairs (ascending in `mu`) into consecutive blocks,
/// takes `max |value|` per block and regresses its log on the log of the
/// `mu` where that maximum occurs (the block centre would bias the slope
/// for monotone data). Trailing samples that do not fill a block are
/// dropped. Blocks whose maximum is zero carry no information on a log
/// scale and are skipped.
pub fn fit_envelope_points(points: &[(f64, f64)], block_size: usize) -> Result<FitResult> {
    if block_size == 0 {
        return Err(Error::InvalidArgument("block size must be positive".into()));
    }
    let blocks = points.len() / block_size;
    if blocks < MIN_FIT_BLOCKS {
        return Err(Error::InvalidArgument(format!(
            "{} samples make {blocks} blocks of {block_size}; at least {MIN_FIT_BLOCKS} are needed",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|p| !(p.0 > 0.0 && p.0.is_finite() && p.1.is_finite()))
    {
        return Err(Error::InvalidArgument(
            "fit needs positive finite abscissae and finite values".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points[..blocks * block_size]
        .chunks(block_size)
        .filter_map(|b| {
            // first sample attaining the block maximum
            let (at, peak) = b
                .iter()
                .map(|p| (p.0, p.1.abs()))
                .fold((b[0].0, 0.0), |acc, p| if p.1 > acc.1 { p } else { acc });
            (peak > 0.0).then(|| (at.ln(), peak.ln()))
        })
        .collect();
    if logs.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "only {} of {blocks} blocks have a nonzero maximum",
            logs.len()
        )));
    }
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all block centres coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        exponent: slope,
        log_constant: intercept,
        r_squared,
        sample_count: blocks * block_size,
        block_size,
    })
}

/// How the conditionally convergent `beta` series is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Summation {
    /// Partial sums over `0 < |q| <= Q`.
    Symmetric,
    /// Term `q` weighted by `r^|q|` with `r = 1 - 1/Q`.
    Abel,
}

/// `i sum_{q != 0} e^{-2 pi i beta q} / q = 2 sum_{q >= 1} sin(2 pi beta q) / q`,
/// whose value is `2 pi (1/2 - beta)` for `0 < beta < 1`.
pub fn beta_series(beta: f64, q_max: u64, summation: Summation) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::OutOfRange {
            what: "beta",
            value: beta,
            min: 0.0,
            max: 1.0,
        });
    }
    if q_max == 0 {
        return Err(Error::InvalidArgument(
            "series length must be positive".into(),
        ));
    }
    let term = |q: u64| {
        // reduce beta q mod 1 first so large q keep full precision
        let frac = (beta * q as f64).fract();
        (2.0 * PI * frac).sin() / q as f64
    };
    let sum: f64 = match summation {
        Summation::Symmetric => (1..=q_max).map(term).sum(),
        Summation::Abel => {
            let r = 1.0 - 1.0 / q_max as f64;
            let mut weight = 1.0;
            let mut acc = 0.0;
            let mut q = 1;
            // r^q < 1e-18 beyond about 41 Q terms
            while q <= 64 * q_max {
                weight *= r;
                if weight < 1e-18 {
                    break;
                }
                acc += weight * term(q);
                q += 1;
            }
            acc
        }
    };
    Ok(2.0 * sum)
}

/// The four oscillatory integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscKind {
    /// `int_0^inf e^{i tau (nu t^3 - t^2 f(t))} t^2 g(t) dt`
    CA,
    /// `int_0^inf e^{i tau (t^3 - nu t^2 f(t))} t g(t) dt`
    CB,
    /// `(1/xi) int_0^{2 eps} e^{i y eta} dy` at `xi = tau`, `eta = nu tau`.
    VLinear,
    /// `(i/eta) int_0^mu e^{i x xi} dx` at `eta = tau`, `xi = nu tau`.
    HLinear,
}

/// `f(t) = c0 + c2 t^2`, the smooth factor inside the phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub c0: f64,
    pub c2: f64,
}

impl PhaseProfile {
    pub const CONSTANT: Self = Self { c0: 1.0, c2: 0.0 };

    /// `1 - t^2/2`: the curved phase `nu t^3 - t^2 f` then has a
    /// nondegenerate interior critical point near `t = 1`.
    pub const TURNING: Self = Self { c0: 1.0, c2: -0.5 };

    pub fn value(&self, t: f64) -> f64 {
        self.c0 + self.c2 * t * t
    }
}

/// Largest accepted `|nu|`.
pub const NU_MAX: f64 = 0.25;

/// Phase resolution of the oscillatory quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscQuadrature {
    /// Phase increment allowed across one panel before subdivision.
    pub phase_per_panel: f64,
    /// Panel error target relative to the local size of the integrand.
    pub rel_tol: f64,
    /// Panel errors below this times the panel width are accepted outright.
    pub abs_floor: f64,
}

impl Default for OscQuadrature {
    fn default() -> Self {
        Self {
            phase_per_panel: 0.5 * PI,
            rel_tol: 1e-10,
            abs_floor: 1e-16,
        }
    }
}

impl OscQuadrature {
    pub fn halved(&self) -> Self {
        Self {
            phase_per_panel: 0.5 * self.phase_per_panel,
            rel_tol: 0.5 * self.rel_tol,
            abs_floor: 0.5 * self.abs_floor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscIntegralSpec {
    pub kind: OscKind,
    pub nu: f64,
    pub tau_grid: Vec<f64>,
    pub f: PhaseProfile,
    /// `g` is the half bump `exp(1 - 1/(1 - (t/L)^2))` on `[0, L]`.
    pub g_support: f64,
    /// Collar width for the vertical linear piece.
    pub eps: f64,
    /// Length of the horizontal linear piece.
    pub mu: f64,
    pub quadrature: OscQuadrature,
}

impl OscIntegralSpec {
    /// Integral with the standard test functions and a log-spaced grid of
    /// `per_decade` points per decade over `[tau_min, tau_max]`.
    pub fn new(
        kind: OscKind,
        nu: f64,
        tau_min: f64,
        tau_max: f64,
        per_decade: usize,
    ) -> Result<Self> {
        Ok(Self {
            kind,
            nu,
            tau_grid: log_grid(tau_min, tau_max, per_decade)?,
            f: match kind {
                OscKind::CA => PhaseProfile::TURNING,
                _ => PhaseProfile::CONSTANT,
            },
            g_support: 2.0,
            eps: 0.1,
            mu: 10.0,
            quadrature: OscQuadrature::default(),
        })
    }

    fn validate(&self) -> Result<()> {
        if !(self.nu.abs() <= NU_MAX) {
            return Err(Error::OutOfRange {
                what: "nu",
                value: self.nu,
                min: -NU_MAX,
                max: NU_MAX,
            });
        }
        if self.tau_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidArgument("tau grid must be positive".into()));
        }
        if !(self.g_support > 0.0 && self.eps > 0.0 && self.mu > 0.0) {
            return Err(Error::InvalidArgument(
                "support and collar parameters must be positive".into(),
            ));
        }
        let q = &self.quadrature;
        if !(q.phase_per_panel > 0.0 && q.rel_tol > 0.0 && q.abs_floor >= 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `per_decade` log-spaced points per decade, both ends included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && per_decade > 0) {
        return Err(Error::InvalidArgument(format!(
            "bad log grid [{lo}, {hi}] with {per_decade} per decade"
        )));
    }
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    Ok((0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect())
}

/// `exp(1 - 1/(1 - (t/L)^2))` on `[0, L)`, with value 1 at the origin.
pub fn half_bump(t: f64, support: f64) -> f64 {
    let s = t / support;
    if (0.0..1.0).contains(&s) {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// Phase polynomial, its first two derivatives, and the amplitude power.
struct Curved {
    // phase = a3 t^3 + a2 t^2 + a4 t^4
    a2: f64,
    a3: f64,
    a4: f64,
    power: i32,
    support: f64,
}

impl Curved {
    fn new(spec: &OscIntegralSpec) -> Self {
        let OscIntegralSpec { nu, f, .. } = *spec;
        match spec.kind {
            OscKind::CA => Self {
                a2: -f.c0,
                a3: nu,
                a4: -f.c2,
                power: 2,
                support: spec.g_support,
            },
            _ => Self {
                a2: -nu * f.c0,
                a3: 1.0,
                a4: -nu * f.c2,
                power: 1,
                support: spec.g_support,
            },
        }
    }

    fn phase(&self, t: f64) -> f64 {
        t * t * (self.a2 + t * (self.a3 + t * self.a4))
    }

    fn d_phase(&self, t: f64) -> f64 {
        t * (2.0 * self.a2 + t * (3.0 * self.a3 + t * 4.0 * self.a4))
    }

    fn d2_phase(&self, t: f64) -> f64 {
        2.0 * self.a2 + t * (6.0 * self.a3 + t * 12.0 * self.a4)
    }

    fn integrand(&self, tau: f64, t: f64) -> Complex64 {
        let amp = t.powi(self.power) * half_bump(t, self.support);
        if amp == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(amp, tau * self.phase(t))
    }
}

/// Bisects a panel until the GK15 error indicator drops below
/// `rel_tol` times a local magnitude scale plus `floor * (b - a)`.
fn adaptive_panel<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    rel_tol: f64,
    floor: f64,
    depth: u32,
) -> Result<Complex64> {
    let (v, e) = gk15(f, a, b);
    let m = 0.5 * (a + b);
    let scale = (b - a) * f(a).norm().max(f(m).norm()).max(f(b).norm());
    if e <= rel_tol * scale + floor * (b - a) {
        return Ok(v);
    }
    if depth == 0 {
        return Err(Error::AccuracyNotAchieved(format!(
            "oscillatory panel [{a}, {b}] stuck at error {e:e}"
        )));
    }
    Ok(adaptive_panel(f, a, m, rel_tol, floor, depth - 1)?
        + adaptive_panel(f, m, b, rel_tol, floor, depth - 1)?)
}

/// Largest panel width regardless of phase.
const H_MAX: f64 = 1.0 / 16.0;

/// `I_{c,A}` or `I_{c,B}` at one `tau`.
///
/// Panels are sized so the phase moves by about `phase_per_panel`: the
/// width is limited both by the local slope `tau |phi'|` and, near
/// critical points, by the curvature bound `tau max |phi''|`.
fn curved_integral(spec: &OscIntegralSpec, tau: f64) -> Result<Complex64> {
    let c = Curved::new(spec);
    let l = spec.g_support;
    let grid = (0..=2000).map(|i| l * i as f64 / 2000.0);
    let curvature = grid
        .clone()
        .map(|t| c.d2_phase(t).abs())
        .fold(0.0, f64::max)
        * 1.1;
    // rounding in tau * phi sets a relative noise level no panel can beat
    let phase_size = grid.map(|t| c.phase(t).abs()).fold(0.0, f64::max);
    let rel_tol = spec
        .quadrature
        .rel_tol
        .max(64.0 * f64::EPSILON * tau * phase_size);
    let budget = spec.quadrature.phase_per_panel;
    let h_curv = if curvature > 0.0 {
        (2.0 * budget / (tau * curvature)).sqrt()
    } else {
        H_MAX
    };
    let mut f = |t: f64| c.integrand(tau, t);
    let mut t = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    while t < l {
        let slope = tau * c.d_phase(t).abs();
        let h_slope = if slope > 0.0 { budget / slope } else { H_MAX };
        let h = H_MAX.min(h_slope).min(h_curv);
        let b = (t + h).min(l);
        sum += adaptive_panel(&mut f, t, b, rel_tol, spec.quadrature.abs_floor, 30)?;
        t = b;
    }
    Ok(sum)
}

/// `I_v(xi, eta) = (1/xi) int_0^{2 eps} e^{i y eta} dy` in closed form.
pub fn linear_vertical(xi: f64, eta: f64, eps: f64) -> Result<Complex64> {
    if xi == 0.0 {
        return Err(Error::InvalidArgument(
            "vertical piece needs xi != 0".into(),
        ));
    }
    if eta == 0.0 {
        return Ok(Complex64::new(2.0 * eps / xi, 0.0));
    }
    let i = Complex64::i();
    Ok(((i * (2.0 * eps * eta)).exp() - 1.0) / (i * eta * xi))
}

/// `I_h(xi, eta) = (i/eta) int_0^mu e^{i x xi} dx` in closed form.
pub fn linear_horizontal(xi: f64, eta: f64, mu: f64) -> Result<Complex64> {
    if eta == 0.0 {
        return Err(Error::InvalidArgument(
            "horizontal piece needs eta != 0".into(),
        ));
    }
    if xi == 0.0 {
        return Ok(Complex64::new(0.0, mu / eta));
    }
    Ok(((Complex64::i() * (mu * xi)).exp() - 1.0) / (eta * xi))
}

/// Value of the chosen integral at one `tau`.
pub fn oscillatory_integral(spec: &OscIntegralSpec, tau: f64) -> Result<Complex64> {
    spec.validate()?;
    match spec.kind {
        OscKind::CA | OscKind::CB => curved_integral(spec, tau),
        OscKind::VLinear => linear_vertical(tau, spec.nu * tau, spec.eps),
        OscKind::HLinear => linear_horizontal(spec.nu * tau, tau, spec.mu),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscSample {
    pub tau: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscDecay {
    pub fit: FitResult,
    pub samples: Vec<OscSample>,
}

/// Evaluates the integral over the grid and fits `|I(tau)| ~ C tau^exponent`
/// point by point.
pub fn oscillatory_decay(spec: &OscIntegralSpec) -> Result<OscDecay> {
    spec.validate()?;
    let values: Result<Vec<OscSample>> = spec
        .tau_grid
        .par_iter()
        .map(|&tau| {
            let v = oscillatory_integral(spec, tau)?;
            Ok(OscSample {
                tau,
                re: v.re,
                im: v.im,
                abs: v.norm(),
            })
        })
        .collect();
    let samples = values?;
    let points: Vec<(f64, f64)> = samples.iter().map(|s| (s.tau, s.abs)).collect();
    Ok(OscDecay {
        fit: fit_envelope_points(&points, 1)?,
        samples,
    })
}
