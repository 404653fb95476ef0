//! Bessel `J_n` and Airy `Ai` on the real line, plus the zeros of `Ai(-t)`.
//!
//! `J_n` is computed by Miller's backward recurrence normalized with
//! `J_0 + 2 sum J_2k = 1`. The trapezoid rule on the integral representation
//! `J_n(x) = (1/2pi) int_{-pi}^{pi} exp(i(x sin t - n t)) dt` is kept as an
//! independent oracle: the integrand is entire and periodic, so the rule
//! converges geometrically once the node count exceeds `n + |x|`.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::roots::{expand_bracket, safeguarded_newton};

/// Tolerances for the special-function evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalAccuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper limit for quadrature node counts.
    pub max_nodes: usize,
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_nodes: 1 << 20,
        }
    }
}

impl EvalAccuracy {
    pub fn new(abs_tol: f64, rel_tol: f64, max_nodes: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        if max_nodes < 16 {
            return Err(Error::InvalidArgument(format!(
                "max_nodes must be at least 16, got {max_nodes}"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_nodes,
        })
    }
}

/// Orders above this make the backward recurrence too long to be useful.
pub const MAX_RECURRENCE_ORDER: usize = 50_000_000;

/// First node count tried by [`bessel_quadrature_reference`].
pub const ORACLE_START_NODES: usize = 64;

const RESCALE: f64 = 1e250;

/// `J_n(x)` for integer order `n >= 0` and any finite real `x`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    Ok(bessel_triplet(n, x)?[1])
}

/// `(J_n(x), J_n'(x))`, with the derivative from `(J_{n-1} - J_{n+1}) / 2`.
pub fn bessel_j_with_derivative(n: u32, x: f64) -> Result<(f64, f64)> {
    let [below, value, above] = bessel_triplet(n, x)?;
    Ok((value, 0.5 * (below - above)))
}

/// `[J_{n-1}(x), J_n(x), J_{n+1}(x)]` with `J_{-1} = -J_1`.
pub fn bessel_triplet(n: u32, x: f64) -> Result<[f64; 3]> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Bessel argument must be finite, got {x}"
        )));
    }
    if x == 0.0 {
        let at_zero = |m: i64| if m == 0 { 1.0 } else { 0.0 };
        let n = i64::from(n);
        return Ok([at_zero(n - 1), at_zero(n), at_zero(n + 1)]);
    }
    let t = miller(n, x.abs())?;
    if x > 0.0 {
        return Ok(t);
    }
    // J_m(-x) = (-1)^m J_m(x)
    let sign = |m: i64| if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let n = i64::from(n);
    Ok([t[0] * sign(n - 1), t[1] * sign(n), t[2] * sign(n + 1)])
}

fn start_order(n: u32, x: f64) -> usize {
    let top = (n as usize + 1).max(x.ceil() as usize);
    let extra = 20 + (15.0 * x.max(1.0).cbrt()).ceil() as usize;
    let m = top + extra;
    m + (m % 2)
}

fn miller(n: u32, x: f64) -> Result<[f64; 3]> {
    let m = start_order(n, x);
    if m > MAX_RECURRENCE_ORDER {
        return Err(Error::AccuracyNotAchieved(format!(
            "J_{n}({x}) needs recurrence order {m} > {MAX_RECURRENCE_ORDER}"
        )));
    }
    let n = n as usize;
    let two_over_x = 2.0 / x;
    let mut above = 0.0;
    let mut cur = 1.0;
    let mut norm = 0.0;
    // saved[0..3] = f_{n-1}, f_n, f_{n+1}
    let mut saved = [0.0f64; 3];
    for k in (1..=m).rev() {
        let below = (k as f64) * two_over_x * cur - above;
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx + 1 >= n && idx <= n + 1 {
            saved[idx + 1 - n] = cur;
        }
        if cur.abs() > RESCALE {
            let s = 1.0 / RESCALE;
            cur *= s;
            above *= s;
            norm *= s;
            for v in &mut saved {
                *v *= s;
            }
        }
    }
    norm += cur;
    if n == 0 {
        saved[0] = -saved[2];
    }
    Ok([saved[0] / norm, saved[1] / norm, saved[2] / norm])
}

/// Trapezoid rule with `nodes` equally spaced points applied to the
/// 2pi-periodic integral representation of `J_n(x)`.
pub fn bessel_quadrature_oracle(n: u32, x: f64, nodes: usize) -> Result<f64> {
    if nodes < 16 {
        return Err(Error::InvalidArgument(format!(
            "oracle needs at least 16 nodes, got {nodes}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Bessel argument must be finite, got {x}"
        )));
    }
    let h = 2.0 * PI / nodes as f64;
    let order = f64::from(n);
    let sum: f64 = (0..nodes)
        .map(|j| {
            let t = -PI + h * j as f64;
            (order * t - x * t.sin()).cos()
        })
        .sum();
    Ok(sum / nodes as f64)
}

/// Node-doubling driver for the trapezoid oracle, starting at
/// [`ORACLE_START_NODES`]. Accepts once two successive values agree within
/// `abs_tol` and the node count exceeds `n + |x|` (below that the rule can
/// alias onto a neighbouring order).
pub fn bessel_quadrature_reference(n: u32, x: f64, acc: &EvalAccuracy) -> Result<f64> {
    let mut nodes = ORACLE_START_NODES;
    let mut prev = bessel_quadrature_oracle(n, x, nodes)?;
    while nodes < acc.max_nodes {
        nodes *= 2;
        let next = bessel_quadrature_oracle(n, x, nodes)?;
        if (next - prev).abs() <= acc.abs_tol && nodes as f64 > f64::from(n) + x.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::AccuracyNotAchieved(format!(
        "trapezoid oracle for J_{n}({x}) not self-consistent at {} nodes",
        acc.max_nodes
    )))
}

/// `Ai(0)`
pub const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004;
/// `-Ai'(0)`
pub const NEG_AIP0: f64 = 0.258_819_403_792_806_798_405_183_560_189;

/// Lower end of the supported Airy argument range.
pub const AIRY_MIN_ARG: f64 = -1000.0;
/// Upper end of the supported Airy argument range.
pub const AIRY_MAX_ARG: f64 = 10.0;
/// The Maclaurin series is used on `[AIRY_SERIES_MIN, AIRY_SERIES_MAX]`,
/// the asymptotic expansions outside it.
pub const AIRY_SERIES_MIN: f64 = -7.0;
pub const AIRY_SERIES_MAX: f64 = 5.0;

/// `Ai(x)` on `[AIRY_MIN_ARG, AIRY_MAX_ARG]`.
pub fn airy_ai(x: f64) -> Result<f64> {
    Ok(airy_ai_with_derivative(x)?.0)
}

/// `(Ai(x), Ai'(x))` on `[AIRY_MIN_ARG, AIRY_MAX_ARG]`.
pub fn airy_ai_with_derivative(x: f64) -> Result<(f64, f64)> {
    check_range("Airy argument", x, AIRY_MIN_ARG, AIRY_MAX_ARG)?;
    Ok(if x < AIRY_SERIES_MIN {
        airy_oscillatory(-x)
    } else if x > AIRY_SERIES_MAX {
        airy_decaying(x)
    } else {
        airy_maclaurin(x)
    })
}

fn airy_maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum t_k, g = sum u_k and their derivatives p_k, q_k
    let (mut t, mut u) = (1.0, x);
    let (mut p, mut q) = (0.0, 1.0);
    let (mut f, mut g) = (t, u);
    let (mut fp, mut gp) = (p, q);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        t *= x3 / ((k3 - 1.0) * k3);
        u *= x3 / (k3 * (k3 + 1.0));
        p = if k == 1 {
            0.5 * x * x
        } else {
            p * x3 / ((k3 - 3.0) * (k3 - 1.0))
        };
        q *= x3 / (k3 * (k3 - 2.0));
        f += t;
        g += u;
        fp += p;
        gp += q;
        let tail = t.abs() + u.abs() + p.abs() + q.abs();
        if tail <= 1e-18 * (f.abs() + g.abs() + fp.abs() + gp.abs()) {
            break;
        }
    }
    (AI0 * f - NEG_AIP0 * g, AI0 * fp - NEG_AIP0 * gp)
}

/// Coefficients `u_k` of the Airy asymptotic expansions, and `v_k`.
fn airy_asymptotic_coeffs(k: usize) -> (f64, f64) {
    let mut u = 1.0;
    for j in 1..=k {
        let j = j as f64;
        u *= (6.0 * j - 5.0) * (6.0 * j - 3.0) * (6.0 * j - 1.0) / ((2.0 * j - 1.0) * 216.0 * j);
    }
    let k = k as f64;
    let v = if k == 0.0 {
        1.0
    } else {
        -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u
    };
    (u, v)
}

/// Partial sums of `sum (-1)^k c_k zeta^-k` for the `u` and `v` series,
/// truncated at the smallest term.
fn alternating_series(zeta: f64) -> (f64, f64) {
    let (mut su, mut sv) = (1.0, 1.0);
    let mut prev = f64::INFINITY;
    let mut zpow = 1.0;
    for k in 1..60 {
        zpow /= -zeta;
        let (u, v) = airy_asymptotic_coeffs(k);
        let (tu, tv) = (u * zpow, v * zpow);
        let size = tu.abs().max(tv.abs());
        if size > prev {
            break;
        }
        su += tu;
        sv += tv;
        prev = size;
        if size < 1e-17 {
            break;
        }
    }
    (su, sv)
}

fn airy_decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (su, sv) = alternating_series(zeta);
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    let x4 = x.sqrt().sqrt();
    (pre / x4 * su, -pre * x4 * sv)
}

/// `(Ai(-y), Ai'(-y))` for large positive `y`.
fn airy_oscillatory(y: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    // even/odd parts of the u and v series
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut zpow = 1.0;
    for k in 0..80 {
        if k > 0 {
            zpow /= zeta;
        }
        let (u, v) = airy_asymptotic_coeffs(k);
        let (tu, tv) = (u * zpow, v * zpow);
        let size = tu.abs().max(tv.abs());
        if size > prev {
            break;
        }
        // (-1)^{floor(k/2)} alternation within each parity class
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pu += sign * tu;
            pv += sign * tv;
        } else {
            qu += sign * tu;
            qv += sign * tv;
        }
        prev = size;
        if size < 1e-17 {
            break;
        }
    }
    let (s, c) = (zeta + FRAC_PI_4).sin_cos();
    let y4 = y.sqrt().sqrt();
    let rpi = 1.0 / PI.sqrt();
    let ai = rpi / y4 * (s * pu - c * qu);
    let aip = -rpi * y4 * (c * pv + s * qv);
    (ai, aip)
}

/// The k-th zero `-t` of `Ai`, written as `t = initial + correction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryZero {
    pub k: u32,
    pub t: f64,
    /// `(3 pi / 2 (k - 1/4))^{2/3}`
    pub initial: f64,
    /// `t - initial`; decays like `k^{-4/3}`.
    pub correction: f64,
}

/// `(3 pi / 2 (k - 1/4))^{2/3}`, the leading term for the k-th Airy zero.
pub fn airy_zero_leading(k: u32) -> f64 {
    (1.5 * PI * (f64::from(k) - 0.25)).powf(2.0 / 3.0)
}

/// Full asymptotic expansion of the k-th Airy zero (used beyond the
/// supported evaluation range, where it is accurate to rounding).
pub fn airy_zero_asymptotic(k: u32) -> f64 {
    let w = 1.5 * PI * (f64::from(k) - 0.25);
    let w2 = 1.0 / (w * w);
    w.powf(2.0 / 3.0)
        * (1.0
            + w2 * (5.0 / 48.0
                + w2 * (-5.0 / 36.0
                    + w2 * (77125.0 / 82944.0 + w2 * (-108_056_875.0 / 6_967_296.0)))))
}

/// Residual target for refined Airy zeros.
pub const AIRY_ZERO_RESIDUAL: f64 = 1e-12;

/// The k-th positive zero `t_k` of `s -> Ai(-s)`.
pub fn airy_zero(k: u32) -> Result<AiryZero> {
    if k == 0 {
        return Err(Error::InvalidArgument("Airy zero index starts at 1".into()));
    }
    let initial = airy_zero_leading(k);
    let seed = airy_zero_asymptotic(k);
    if seed > -AIRY_MIN_ARG - 1.0 {
        return Ok(AiryZero {
            k,
            t: seed,
            initial,
            correction: seed - initial,
        });
    }
    // quarter of the local zero spacing pi / sqrt(t)
    let quarter = 0.25 * PI / seed.sqrt();
    let f = |s: f64| airy_ai(-s);
    let df = |s: f64| airy_ai_with_derivative(-s).map(|(v, d)| (v, -d));
    let bracket = expand_bracket(f, seed, 0.1 * quarter, 2.0 * quarter)?;
    let (t, _) = safeguarded_newton(df, bracket, seed, 1e-15 * seed, 100)?;
    let residual = airy_ai(-t)?.abs();
    if residual > AIRY_ZERO_RESIDUAL {
        return Err(Error::AccuracyNotAchieved(format!(
            "Airy zero {k}: residual {residual:e} above {AIRY_ZERO_RESIDUAL:e}"
        )));
    }
    Ok(AiryZero {
        k,
        t,
        initial,
        correction: t - initial,
    })
}
