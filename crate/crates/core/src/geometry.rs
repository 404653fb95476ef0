//! The cusped domain `D`, its profile `g`, the degree-one homogeneous scale
//! function `F` and the shifted lattice `{(n, k - 1/4)}`.
//!
//! `D = {(x, y) : -1 <= x <= 1, max(0, -x) <= y <= g(x)}` with
//! `g(x) = (sqrt(1 - x^2) - x arccos x) / pi`. It has cusps at `(1, 0)` and
//! `(-1, 1)`, where `g` meets the lower boundary tangentially with order 3/2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Quarter shift of the lattice in the second coordinate.
pub const LATTICE_SHIFT: f64 = 0.25;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Lattice point `(n, k - 1/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub n: i64,
    pub k: i64,
}

impl LatticePoint {
    pub const fn new(n: i64, k: i64) -> Self {
        Self { n, k }
    }

    /// Second coordinate `k - 1/4` (exact in floating point).
    pub fn y(&self) -> f64 {
        self.k as f64 - LATTICE_SHIFT
    }

    pub fn to_point(self) -> Point {
        Point::new(self.n as f64, self.y())
    }

    /// Membership in the sector `S = {y >= max(0, -x)}`.
    pub fn in_sector(&self) -> bool {
        self.y() >= (-(self.n as f64)).max(0.0)
    }

    /// Image under `J(x, y) = (-x, y + x)`, which maps the lattice to itself:
    /// `(n, k - 1/4) -> (-n, k + n - 1/4)`.
    pub fn involution(self) -> Self {
        Self::new(-self.n, self.k + self.n)
    }
}

/// Profile `g` without the domain check, for inner loops.
///
/// Near `x = 1` both terms of the closed form cancel to order
/// `(1 - x)^{3/2}`; there it is summed as a series in `theta = arccos x`.
#[inline]
pub(crate) fn profile(x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    let theta = x.acos();
    if theta < 0.3 {
        // sin(theta) - theta cos(theta) = sum_{j>=1} (-1)^{j+1} 2j theta^{2j+1} / (2j+1)!
        let t2 = theta * theta;
        let mut term = theta * t2 / 3.0;
        let mut sum = term;
        for j in 2..12 {
            let j = j as f64;
            term *= -t2 * j / ((j - 1.0) * (2.0 * j) * (2.0 * j + 1.0));
            sum += term;
        }
        sum / PI
    } else {
        (((1.0 - x) * (1.0 + x)).sqrt() - x * theta) / PI
    }
}

/// `g(x) = (sqrt(1 - x^2) - x arccos x) / pi` on `[-1, 1]`.
pub fn g_profile(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange {
            what: "profile argument",
            value: x,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(profile(x))
}

/// `g'(x) = -arccos(x) / pi`.
pub fn g_derivative(x: f64) -> Result<f64> {
    g_profile(x)?;
    Ok(-x.acos() / PI)
}

/// `g''(x) = 1 / (pi sqrt(1 - x^2))` on the open interval.
pub fn g_second_derivative(x: f64) -> Result<f64> {
    if !(-1.0 < x && x < 1.0) {
        return Err(Error::OutOfRange {
            what: "profile argument",
            value: x,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(1.0 / (PI * (1.0 - x * x).sqrt()))
}

/// Upper boundary of `mu D` at abscissa `x`: `mu g(x / mu)`.
#[inline]
pub fn upper_boundary(mu: f64, x: f64) -> f64 {
    mu * profile(x / mu)
}

/// Closed membership test for `mu D`.
pub fn in_domain(mu: f64, p: Point) -> bool {
    p.x.abs() <= mu && p.y >= (-p.x).max(0.0) && p.y <= upper_boundary(mu, p.x)
}

/// The dilate `mu D`, a closed region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspDomain {
    pub mu: f64,
}

impl CuspDomain {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale must be positive, got {mu}"
            )));
        }
        Ok(Self { mu })
    }

    pub fn upper(&self, x: f64) -> f64 {
        upper_boundary(self.mu, x)
    }

    pub fn lower(&self, x: f64) -> f64 {
        (-x).max(0.0)
    }

    pub fn contains(&self, p: Point) -> bool {
        in_domain(self.mu, p)
    }

    pub fn area(&self) -> f64 {
        0.25 * self.mu * self.mu
    }
}

/// `J(x, y) = (-x, y + x)`; an involution preserving `D` and the lattice.
pub fn involution(p: Point) -> Point {
    Point::new(-p.x, p.y + p.x)
}

/// `lambda g(x / lambda)`, nondecreasing in `lambda >= |x|` since its
/// derivative is `sqrt(1 - (x/lambda)^2) / pi`.
fn dilated_profile(lambda: f64, x: f64) -> f64 {
    lambda * profile(x / lambda)
}

/// Relative bracket width at which [`scale_function`] stops bisecting.
pub const SCALE_REL_WIDTH: f64 = 1e-13;

/// The function `F` on the sector `S`: homogeneous of degree one and equal
/// to 1 on the graph of `g`, i.e. the `lambda > 0` with `lambda g(x/lambda) = y`.
pub fn scale_function(x: f64, y: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite()) || y < (-x).max(0.0) || (x == 0.0 && y == 0.0) {
        return Err(Error::InvalidArgument(format!(
            "({x}, {y}) is not in the sector y >= max(0, -x) minus the origin"
        )));
    }
    let mut lo = x.abs().max(f64::MIN_POSITIVE);
    if dilated_profile(lo, x) >= y {
        return Ok(lo);
    }
    let mut hi = (2.0 * lo).max(y);
    while dilated_profile(hi, x) < y {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > SCALE_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if dilated_profile(mid, x) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Area of `D` by adaptive quadrature of `g(x) - max(0, -x)`, split at the
/// kink `x = 0`.
pub fn area_d_with_tol(abs_tol: f64) -> Result<f64> {
    let left: f64 = quad::integrate(|x| profile(x) + x, -1.0, 0.0, 0.5 * abs_tol, 2000)?;
    let right: f64 = quad::integrate(profile, 0.0, 1.0, 0.5 * abs_tol, 2000)?;
    Ok(left + right)
}

/// `Area(D)` to absolute error `1e-10`.
pub fn area_d() -> Result<f64> {
    area_d_with_tol(1e-10)
}
