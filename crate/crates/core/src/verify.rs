//! Invariant suites, runnable from the command line. Each check records a
//! pass flag and a short human-readable detail; randomized checks draw from
//! a seeded generator so a run is reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    beta_series, linear_horizontal, oscillatory_decay, OscIntegralSpec, OscKind, Summation,
};
use crate::error::{Error, Result};
use crate::geometry::{self, in_domain, involution, scale_function, LatticePoint, Point};
use crate::lattice_count::{
    brute_force_count, count_lattice, lattice_points, sandwich_check, MollifyConfig,
};
use crate::special_fn::{
    airy_zero, bessel_j, bessel_quadrature_reference, bessel_triplet, EvalAccuracy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Special,
    Geometry,
    Lattice,
    Sandwich,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Special,
        Suite::Geometry,
        Suite::Lattice,
        Suite::Sandwich,
        Suite::Appendix,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Geometry => "geometry",
            Suite::Lattice => "lattice",
            Suite::Sandwich => "sandwich",
            Suite::Appendix => "appendix",
        }
    }
}

/// Knobs shared by all suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Number of random draws per randomized check.
    pub samples: usize,
    /// Dilations for the lattice and sandwich suites; suite defaults when empty.
    pub mu: Vec<f64>,
    pub accuracy: EvalAccuracy,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 200,
            mu: Vec::new(),
            accuracy: EvalAccuracy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Recorder {
    checks: Vec<CheckOutcome>,
}

impl Recorder {
    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Runs one suite. Numerical failures inside a check abort the suite with
/// the underlying error; violated invariants are reported as failed checks.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    if opts.samples == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be positive".into(),
        ));
    }
    let mut rec = Recorder { checks: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match suite {
        Suite::Special => special(&mut rec, &mut rng, opts)?,
        Suite::Geometry => geometry_suite(&mut rec, &mut rng, opts)?,
        Suite::Lattice => lattice(&mut rec, &mut rng, opts)?,
        Suite::Sandwich => sandwich(&mut rec, opts)?,
        Suite::Appendix => appendix(&mut rec)?,
    }
    Ok(SuiteReport {
        suite,
        checks: rec.checks,
    })
}

fn special(rec: &mut Recorder, rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..opts.samples {
        let n = rng.gen_range(0..=200u32);
        let x = rng.gen_range(0.0..=500.0);
        let err = (bessel_j(n, x)? - bessel_quadrature_reference(n, x, &opts.accuracy)?).abs();
        worst = worst.max(err);
    }
    rec.check(
        "bessel_vs_trapezoid_oracle",
        worst <= 1e-10,
        format!("max deviation {worst:.3e} over {} draws", opts.samples),
    );

    let mut parity: f64 = 0.0;
    let mut neighbour: f64 = 0.0;
    for n in 0..=20u32 {
        for i in 1..=40 {
            let x = 0.75 * i as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            parity = parity.max((bessel_j(n, -x)? - sign * bessel_j(n, x)?).abs());
            let [below, mid, above] = bessel_triplet(n.max(1), x)?;
            let r = (below + above - 2.0 * f64::from(n.max(1)) / x * mid).abs();
            neighbour = neighbour.max(r / mid.abs().max(1.0));
        }
    }
    rec.check("parity", parity <= 1e-12, format!("max {parity:.3e}"));
    rec.check(
        "three_term_recurrence",
        neighbour <= 1e-10,
        format!("max scaled residual {neighbour:.3e}"),
    );

    let t1 = airy_zero(1)?.t;
    rec.check(
        "first_airy_zero",
        (t1 - 2.338_107_4).abs() <= 1e-6,
        format!("t_1 = {t1:.10}"),
    );
    let mut prev = 0.0;
    let mut increasing = true;
    let mut scaled_max: f64 = 0.0;
    for k in 1..=100u32 {
        let z = airy_zero(k)?;
        increasing &= z.t > prev;
        prev = z.t;
        scaled_max = scaled_max.max(z.correction.abs() * f64::from(k));
    }
    rec.check("airy_zeros_increase", increasing, "k <= 100".into());
    rec.check(
        "airy_correction_order",
        scaled_max <= 0.02,
        format!("max k |t_k - leading| = {scaled_max:.4e}"),
    );
    Ok(())
}

fn geometry_suite(rec: &mut Recorder, rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<()> {
    let area = geometry::area_d()?;
    rec.check("area", (area - 0.25).abs() <= 1e-8, format!("{area:.15}"));

    let mut homog: f64 = 0.0;
    let mut level: f64 = 0.0;
    let mut sym_ok = true;
    for _ in 0..opts.samples {
        let x: f64 = rng.gen_range(-3.0..3.0);
        let y = (-x).max(0.0) + rng.gen_range(0.0..2.0);
        if x == 0.0 && y == 0.0 {
            continue;
        }
        let f1 = scale_function(x, y)?;
        let f2 = scale_function(2.0 * x, 2.0 * y)?;
        homog = homog.max((f2 - 2.0 * f1).abs() / f1.max(1.0));
        let u = rng.gen_range(-0.999..0.999);
        level = level.max((scale_function(u, geometry::g_profile(u)?)? - 1.0).abs());
        let mu = rng.gen_range(0.5..20.0);
        let p = Point::new(rng.gen_range(-mu..mu), rng.gen_range(0.0..mu));
        let q = involution(p);
        // skip points within rounding distance of the boundary
        let margin = |p: Point| {
            let top = geometry::upper_boundary(mu, p.x) - p.y;
            let bottom = p.y - (-p.x).max(0.0);
            top.abs().min(bottom.abs())
        };
        if margin(p) > 1e-9 {
            sym_ok &= in_domain(mu, p) == in_domain(mu, q);
        }
        sym_ok &= involution(q) == p || (involution(q).y - p.y).abs() <= 1e-12 * p.y.abs().max(1.0);
    }
    rec.check("homogeneity", homog <= 1e-10, format!("max {homog:.3e}"));
    rec.check(
        "level_set",
        level <= 1e-10,
        format!("max |F(x, g(x)) - 1| {level:.3e}"),
    );
    rec.check("involution", sym_ok, "J^2 = id and J preserves mu D".into());

    let a = 2.0 * 2f64.sqrt() / (3.0 * std::f64::consts::PI);
    let mut drift: f64 = 0.0;
    for h in [1e-2f64, 1e-4, 1e-6] {
        drift = drift.max((geometry::g_profile(1.0 - h)? / h.powf(1.5) / a - 1.0).abs());
    }
    rec.check(
        "cusp_order",
        drift <= 0.05,
        format!("max ratio drift {drift:.3e}"),
    );
    Ok(())
}

fn lattice(rec: &mut Recorder, rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<()> {
    let mus: Vec<f64> = if opts.mu.is_empty() {
        (0..opts.samples.min(50))
            .map(|_| rng.gen_range(1.0..300.0))
            .collect()
    } else {
        opts.mu.clone()
    };
    let mut mismatches = 0;
    for &mu in &mus {
        if count_lattice(mu)? != brute_force_count(mu)? {
            mismatches += 1;
        }
    }
    rec.check(
        "brute_force_agreement",
        mismatches == 0,
        format!("{mismatches} mismatches over {} dilations", mus.len()),
    );

    let mut monotone = true;
    let mut prev = 0;
    for i in 1..=400 {
        let c = count_lattice(0.5 * i as f64)?;
        monotone &= c >= prev;
        prev = c;
    }
    rec.check("monotone", monotone, "mu = 0.5, 1.0, ..., 200".into());

    let mut symmetric = true;
    for &mu in mus.iter().take(10) {
        let pts = lattice_points(mu)?;
        let set: std::collections::HashSet<LatticePoint> = pts.iter().copied().collect();
        symmetric &= pts.iter().all(|p| set.contains(&p.involution()));
    }
    rec.check(
        "involution_bijection",
        symmetric,
        "J maps R ∩ mu D onto itself".into(),
    );
    Ok(())
}

fn sandwich(rec: &mut Recorder, opts: &VerifyOptions) -> Result<()> {
    let mus = if opts.mu.is_empty() {
        vec![10.0, 20.0]
    } else {
        opts.mu.clone()
    };
    let cfg = MollifyConfig::default();
    for mu in mus {
        let r = sandwich_check(mu, &cfg)?;
        rec.check(
            &format!("sandwich_mu_{mu}"),
            r.is_ordered(),
            format!("{:.6} <= {:.6} <= {:.6}", r.n_minus, r.n_exact, r.n_plus),
        );
        let h = sandwich_check(mu, &cfg.halved())?;
        rec.check(
            &format!("collar_shrinks_mu_{mu}"),
            h.is_ordered() && h.width() < r.width(),
            format!("width {:.4} -> {:.4}", r.width(), h.width()),
        );
    }
    Ok(())
}

fn appendix(rec: &mut Recorder) -> Result<()> {
    for (beta, expected) in [
        (0.25, std::f64::consts::FRAC_PI_2),
        (1.0 / 3.0, std::f64::consts::PI / 3.0),
    ] {
        let v = beta_series(beta, 100_000, Summation::Abel)?;
        rec.check(
            &format!("beta_series_{beta:.4}"),
            (v - expected).abs() <= 1e-3,
            format!("{v:.6} vs 2 pi (1/2 - beta) = {expected:.6}"),
        );
    }
    let a = beta_series(0.2, 100_000, Summation::Abel)?;
    let b = beta_series(0.8, 100_000, Summation::Abel)?;
    rec.check(
        "beta_antisymmetry",
        (a + b).abs() <= 1e-6,
        format!("{:.3e}", a + b),
    );

    let h = linear_horizontal(0.0, 5.0, 10.0)?;
    rec.check(
        "horizontal_zero_frequency",
        h.re == 0.0 && h.im == 2.0,
        format!("{h}"),
    );

    // short grid keeps the suite quick; the full range lives in the acceptance tests
    for nu in [0.0, 0.1, -0.1] {
        let spec = OscIntegralSpec::new(OscKind::CA, nu, 1e2, 1e4, 3)?;
        let fit = oscillatory_decay(&spec)?.fit;
        rec.check(
            &format!("curved_a_decay_nu_{nu}"),
            (-0.6..=-0.4).contains(&fit.exponent),
            format!("exponent {:.4}", fit.exponent),
        );
    }
    for nu in [0.0, 0.05, -0.05, 0.1, -0.1] {
        let spec = OscIntegralSpec::new(OscKind::CB, nu, 1e2, 1e4, 3)?;
        let d = oscillatory_decay(&spec)?;
        let bound = d
            .samples
            .iter()
            .map(|s| s.abs * s.tau.sqrt())
            .fold(0.0, f64::max);
        rec.check(
            &format!("curved_b_sqrt_bound_nu_{nu}"),
            bound <= CURVED_B_SQRT_BOUND,
            format!("max |I| tau^(1/2) = {bound:.4}"),
        );
    }
    Ok(())
}

/// Recorded bound on `|I_{c,B}(tau)| tau^{1/2}` for `|nu| <= 0.1`.
pub const CURVED_B_SQRT_BOUND: f64 = 1.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let opts = VerifyOptions {
            samples: 20,
            ..VerifyOptions::default()
        };
        for suite in [Suite::Special, Suite::Geometry, Suite::Lattice] {
            let r = run_suite(suite, &opts).unwrap();
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let opts = VerifyOptions {
            samples: 0,
            ..VerifyOptions::default()
        };
        assert!(run_suite(Suite::Special, &opts).is_err());
    }
}
