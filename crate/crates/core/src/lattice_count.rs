//! Lattice counts `N_D(mu) = #(R ∩ mu D)` and the mollified sandwich for the
//! one-cusp domain `G = D ∩ {x >= 0}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{in_domain, upper_boundary, LatticePoint, LATTICE_SHIFT};
use crate::quad;

/// Largest `mu` accepted by [`brute_force_count`].
pub const BRUTE_FORCE_MAX_MU: f64 = 2000.0;

/// Largest `mu` accepted by the mollified counts.
pub const MOLLIFY_MAX_MU: f64 = 50.0;

/// Radius of the disc around the origin on which the cutoff `phi` equals 1.
pub const PHI_INNER_RADIUS: f64 = 0.1;

/// Radius outside which `phi` vanishes; below the distance 1/4 from the
/// origin to the nearest lattice point.
pub const PHI_OUTER_RADIUS: f64 = 0.2;

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "dilation must be positive, got {mu}"
        )))
    }
}

/// Number of `k` with `(n, k - 1/4)` in `mu D`.
pub fn column_count(n: i64, mu: f64) -> u64 {
    let x = n as f64;
    if !(mu > 0.0) || x.abs() > mu {
        return 0;
    }
    let top = upper_boundary(mu, x);
    // largest k with k - 1/4 <= top, settled with the same comparison the
    // membership test uses so that ties on the boundary agree
    let mut k_max = (top + LATTICE_SHIFT).floor() as i64;
    while (k_max as f64 - LATTICE_SHIFT) > top {
        k_max -= 1;
    }
    while ((k_max + 1) as f64 - LATTICE_SHIFT) <= top {
        k_max += 1;
    }
    // k - 1/4 >= max(0, -n) iff k >= max(0, -n) + 1
    (k_max - (-n).max(0)).max(0) as u64
}

/// `N_D(mu)`, summed column by column.
pub fn count_lattice(mu: f64) -> Result<u64> {
    check_mu(mu)?;
    let m = mu.floor() as i64;
    Ok((-m..=m).map(|n| column_count(n, mu)).sum())
}

/// `N_D(mu)` by testing every candidate `(n, k)` with the membership predicate.
pub fn brute_force_count(mu: f64) -> Result<u64> {
    check_mu(mu)?;
    if mu > BRUTE_FORCE_MAX_MU {
        return Err(Error::OutOfRange {
            what: "brute-force dilation",
            value: mu,
            min: 0.0,
            max: BRUTE_FORCE_MAX_MU,
        });
    }
    let m = mu.floor() as i64;
    let k_top = (mu + 1.0).floor() as i64;
    let mut count = 0;
    for n in -m..=m {
        for k in 1..=k_top {
            if in_domain(mu, LatticePoint::new(n, k).to_point()) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// All lattice points of `mu D`, column by column.
pub fn lattice_points(mu: f64) -> Result<Vec<LatticePoint>> {
    check_mu(mu)?;
    let m = mu.floor() as i64;
    let mut out = Vec::new();
    for n in -m..=m {
        let first = (-n).max(0) + 1;
        let len = column_count(n, mu) as i64;
        out.extend((first..first + len).map(|k| LatticePoint::new(n, k)));
    }
    Ok(out)
}

/// Which of the two collared domains `G^+` or `G^-` to mollify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Parameters of the mollified counts.
///
/// The collar width is `eps = eps_scale * mu^{-eps_exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifyConfig {
    pub eps_exponent: f64,
    pub eps_scale: f64,
    /// Constant `C` making `C exp(-1/(1 - r^2))` a unit-mass bump.
    pub bump_normalization: f64,
    /// Midpoint cells per `eps` in each direction.
    pub quad_cells: usize,
    pub chi_plateau: f64,
    pub chi_support: f64,
}

impl Default for MollifyConfig {
    fn default() -> Self {
        Self::new(1.0 / 3.0, 1.0, 64, 0.15, 0.30).expect("default mollifier parameters are valid")
    }
}

impl MollifyConfig {
    pub fn new(
        eps_exponent: f64,
        eps_scale: f64,
        quad_cells: usize,
        chi_plateau: f64,
        chi_support: f64,
    ) -> Result<Self> {
        if !(eps_exponent.is_finite() && eps_exponent >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "collar exponent must be nonnegative, got {eps_exponent}"
            )));
        }
        if !(eps_scale.is_finite() && eps_scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "collar scale must be positive, got {eps_scale}"
            )));
        }
        if !(1..=4096).contains(&quad_cells) {
            return Err(Error::InvalidArgument(format!(
                "cells per collar width must lie in 1..=4096, got {quad_cells}"
            )));
        }
        if !(0.0 < chi_plateau && chi_plateau < chi_support && chi_support < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < plateau < support < 1, got {chi_plateau} and {chi_support}"
            )));
        }
        Ok(Self {
            eps_exponent,
            eps_scale,
            bump_normalization: bump_normalization()?,
            quad_cells,
            chi_plateau,
            chi_support,
        })
    }

    /// Collar width at dilation `mu`.
    pub fn eps(&self, mu: f64) -> f64 {
        self.eps_scale * mu.powf(-self.eps_exponent)
    }

    /// Same configuration with the collar halved.
    pub fn halved(&self) -> Self {
        Self {
            eps_scale: 0.5 * self.eps_scale,
            ..*self
        }
    }

    /// Angular cutoff `chi`, equal to 1 on `[-plateau, plateau]` and
    /// vanishing outside `(-support, support)`.
    pub fn chi(&self, r: f64) -> f64 {
        plateau_bump(r.abs(), self.chi_plateau, self.chi_support)
    }

    /// `chi0 = chi(y/x) (1 - phi)`, taken as 0 on the axis `x = 0`.
    pub fn chi0(&self, x: f64, y: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let c = self.chi(y / x);
        if c == 0.0 {
            return 0.0;
        }
        c * (1.0 - plateau_bump(x.hypot(y), PHI_INNER_RADIUS, PHI_OUTER_RADIUS))
    }
}

/// `exp(-1/t)` for `t > 0`, else 0.
fn flat_exp(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step from 0 (at `t <= 0`) to 1 (at `t >= 1`).
fn smooth_step(t: f64) -> f64 {
    let a = flat_exp(t);
    let b = flat_exp(1.0 - t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// 1 on `[0, inner]`, 0 on `[outer, inf)`, smooth in between.
fn plateau_bump(r: f64, inner: f64, outer: f64) -> f64 {
    smooth_step((outer - r) / (outer - inner))
}

/// Unnormalized radial bump `exp(-1/(1 - r^2))` on the unit disc.
fn bump_profile(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// `1 / (2 pi int_0^1 exp(-1/(1-r^2)) r dr)`.
pub fn bump_normalization() -> Result<f64> {
    let radial: f64 = quad::integrate(|r| bump_profile(r * r) * r, 0.0, 1.0, 1e-15, 1000)?;
    Ok(1.0 / (2.0 * std::f64::consts::PI * radial))
}

/// Midpoint weights of `rho_eps` on a `2c x 2c` grid over `[-eps, eps]^2`,
/// with the matching offsets.
struct BumpStencil {
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

impl BumpStencil {
    fn new(eps: f64, cfg: &MollifyConfig) -> Self {
        let cells = 2 * cfg.quad_cells;
        let h = 2.0 / cells as f64;
        let unit: Vec<f64> = (0..cells).map(|i| -1.0 + h * (i as f64 + 0.5)).collect();
        let mut weights = Vec::with_capacity(cells * cells);
        for &u in &unit {
            for &v in &unit {
                weights.push(cfg.bump_normalization * bump_profile(u * u + v * v) * h * h);
            }
        }
        Self {
            offsets: unit.iter().map(|u| u * eps).collect(),
            weights,
        }
    }

    fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Signed indicator of `G^±` at `(x, y)`, given the upper boundary value
/// `top = mu g(x/mu)` for `0 <= x <= mu`.
fn collar_indicator(side: Side, y: f64, top: f64, eps: f64) -> f64 {
    match side {
        Side::Plus => {
            if (0.0..=top + 2.0 * eps).contains(&y) {
                1.0
            } else {
                0.0
            }
        }
        Side::Minus => {
            let h = top - 2.0 * eps;
            if h >= 0.0 {
                if (0.0..=h).contains(&y) {
                    1.0
                } else {
                    0.0
                }
            } else if (h..=0.0).contains(&y) {
                -1.0
            } else {
                0.0
            }
        }
    }
}

/// `(chi0 1_{G^±} * rho_eps)(m)` by the tensor midpoint rule.
fn convolve_at(
    side: Side,
    mu: f64,
    eps: f64,
    m: (f64, f64),
    cfg: &MollifyConfig,
    stencil: &BumpStencil,
) -> f64 {
    let cells = stencil.offsets.len();
    let mut sum = 0.0;
    for (i, &du) in stencil.offsets.iter().enumerate() {
        let x = m.0 - du;
        if !(0.0..=mu).contains(&x) {
            continue;
        }
        let top = upper_boundary(mu, x);
        let row = &stencil.weights[i * cells..(i + 1) * cells];
        for (&dv, &w) in stencil.offsets.iter().zip(row) {
            if w == 0.0 {
                continue;
            }
            let y = m.1 - dv;
            let ind = collar_indicator(side, y, top, eps);
            if ind != 0.0 {
                sum += w * ind * cfg.chi0(x, y);
            }
        }
    }
    sum
}

fn check_mollify_mu(mu: f64) -> Result<()> {
    check_mu(mu)?;
    if mu > MOLLIFY_MAX_MU {
        return Err(Error::OutOfRange {
            what: "mollified dilation",
            value: mu,
            min: 0.0,
            max: MOLLIFY_MAX_MU,
        });
    }
    Ok(())
}

/// Lattice points whose `eps`-ball can meet the support of `chi0 1_{G^±}`,
/// in n-then-k order.
fn candidate_points(mu: f64, eps: f64, cfg: &MollifyConfig) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let n_max = (mu + eps).floor() as i64;
    for n in 0..=n_max {
        let x_hi = n as f64 + eps;
        if x_hi <= 0.0 {
            continue;
        }
        // |y| <= support * x on the support of chi0
        let reach = cfg.chi_support * x_hi + eps;
        let k_lo = (-reach + LATTICE_SHIFT).floor() as i64;
        let k_hi = (reach + LATTICE_SHIFT).ceil() as i64;
        for k in k_lo..=k_hi {
            out.push((n as f64, k as f64 - LATTICE_SHIFT));
        }
    }
    out
}

/// `N_eps^±(mu)`: the mollified weighted count over every lattice point.
pub fn mollified_count(side: Side, mu: f64, cfg: &MollifyConfig) -> Result<f64> {
    check_mollify_mu(mu)?;
    let eps = cfg.eps(mu);
    let stencil = BumpStencil::new(eps, cfg);
    Ok(candidate_points(mu, eps, cfg)
        .into_iter()
        .map(|m| convolve_at(side, mu, eps, m, cfg, &stencil))
        .sum())
}

/// Value of the mollified indicator at a single point (not necessarily a
/// lattice point).
pub fn mollified_value(side: Side, mu: f64, m: (f64, f64), cfg: &MollifyConfig) -> Result<f64> {
    check_mollify_mu(mu)?;
    let eps = cfg.eps(mu);
    let stencil = BumpStencil::new(eps, cfg);
    Ok(convolve_at(side, mu, eps, m, cfg, &stencil))
}

/// Discrete mass of the bump stencil used at dilation `mu`; 1 up to
/// quadrature error.
pub fn stencil_mass(mu: f64, cfg: &MollifyConfig) -> f64 {
    BumpStencil::new(cfg.eps(mu), cfg).mass()
}

/// `sum chi(m2/m1)` over lattice points of `mu G`; the axis `m1 = 0` has
/// no defined weight and is left out.
pub fn weighted_count(mu: f64, cfg: &MollifyConfig) -> Result<f64> {
    check_mu(mu)?;
    let mut sum = 0.0;
    for n in 1..=(mu.floor() as i64) {
        let x = n as f64;
        for k in 1..=(column_count(n, mu) as i64) {
            sum += cfg.chi((k as f64 - LATTICE_SHIFT) / x);
        }
    }
    Ok(sum)
}

/// The two mollified counts and the exact weighted count they should enclose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichResult {
    pub mu: f64,
    pub eps: f64,
    pub n_minus: f64,
    pub n_exact: f64,
    pub n_plus: f64,
}

impl SandwichResult {
    pub fn is_ordered(&self) -> bool {
        self.n_minus <= self.n_exact && self.n_exact <= self.n_plus
    }

    pub fn width(&self) -> f64 {
        self.n_plus - self.n_minus
    }
}

pub fn sandwich_check(mu: f64, cfg: &MollifyConfig) -> Result<SandwichResult> {
    check_mollify_mu(mu)?;
    Ok(SandwichResult {
        mu,
        eps: cfg.eps(mu),
        n_minus: mollified_count(Side::Minus, mu, cfg)?,
        n_exact: weighted_count(mu, cfg)?,
        n_plus: mollified_count(Side::Plus, mu, cfg)?,
    })
}
