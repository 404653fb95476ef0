//! Positive zeros `x_k(n)` of `J_n`.
//!
//! Initial guesses come from McMahon's expansion for zeros far beyond the
//! transition point and from Olver's uniform expansion near it:
//! `x_k(n) ~ n (1 + psi(t_k / n^{2/3}))`, with `t_k` the k-th zero of
//! `Ai(-t)` and `psi` obtained by inverting the phase
//! `Phi(z) = sqrt(z^2 - 1) - arccos(1/z) = (2/3) s^{3/2}`.
//! Every guess is then refined inside a certified sign-change bracket.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::roots::{bisect_to_width, expand_bracket, safeguarded_newton, Bracket};
use crate::special_fn::{airy_zero, bessel_j, bessel_j_with_derivative};

/// Largest scaled Airy variable accepted by [`psi`].
pub const PSI_S_MAX: f64 = 1e4;

/// Default regime constant: McMahon is used once `k > C n^{4/3}`.
pub const C_REGIME: f64 = 1.0;

/// Residual bound every refined zero must meet.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-10;

/// Certified bracket width relative to the zero.
pub const ZERO_REL_BRACKET: f64 = 1e-12;

/// First half-width tried when growing a bracket around a guess.
pub const BRACKET_FIRST_HALF_WIDTH: f64 = 1e-2;

/// Largest half-width tried. Consecutive zeros of `J_n` are more than `pi`
/// apart, so a window of width `2 * 1.5` never holds two of them.
pub const BRACKET_MAX_HALF_WIDTH: f64 = 1.5;

/// A refined zero of `J_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub n: u32,
    pub k: u32,
    pub x: f64,
    /// `|J_n(x)|`
    pub residual: f64,
    /// Width of the final sign-change bracket.
    pub bracket_width: f64,
}

/// Outcome of refining a single guess; carries no index because the guess
/// alone does not determine which zero was found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedZero {
    pub x: f64,
    pub residual: f64,
    pub bracket_width: f64,
}

impl RefinedZero {
    pub fn with_index(self, n: u32, k: u32) -> BesselZero {
        BesselZero {
            n,
            k,
            x: self.x,
            residual: self.residual,
            bracket_width: self.bracket_width,
        }
    }
}

/// One point of the Olver phase inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlverPhase {
    pub s: f64,
    pub z: f64,
    pub psi: f64,
}

/// `Phi(z) = sqrt(z^2 - 1) - arccos(1/z)` for `z >= 1`.
pub fn phase_function(z: f64) -> Result<f64> {
    if !(z >= 1.0 && z.is_finite()) {
        return Err(Error::OutOfRange {
            what: "phase argument",
            value: z,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    Ok(w_minus_atan((z * z - 1.0).sqrt()))
}

/// `w - atan(w)`, accurate for small `w`.
fn w_minus_atan(w: f64) -> f64 {
    if w < 0.1 {
        // w^3/3 - w^5/5 + w^7/7 - ...
        let w2 = w * w;
        let mut pow = w * w2;
        let mut sum = 0.0;
        for j in 0..10 {
            let term = pow / (2 * j + 3) as f64;
            sum += if j % 2 == 0 { term } else { -term };
            pow *= w2;
        }
        sum
    } else {
        w - w.atan()
    }
}

/// Solves `Phi(z) = (2/3) s^{3/2}` by bisection in `w = sqrt(z^2 - 1)`,
/// on which the phase is `w - atan(w)` and strictly increasing.
pub fn olver_phase(s: f64) -> Result<OlverPhase> {
    check_range("scaled Airy variable", s, 0.0, PSI_S_MAX)?;
    if s == 0.0 {
        return Ok(OlverPhase {
            s,
            z: 1.0,
            psi: 0.0,
        });
    }
    let target = 2.0 / 3.0 * s * s.sqrt();
    // w - atan w >= w - pi/2, so the root lies below target + pi/2
    let mut lo = 0.0f64;
    let mut hi = (target + PI / 2.0).max(2.0 * target.cbrt() * 3f64.cbrt());
    while w_minus_atan(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if w_minus_atan(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    // z - 1 without cancellation
    let psi = w * w / (1.0 + (1.0 + w * w).sqrt());
    Ok(OlverPhase {
        s,
        z: 1.0 + psi,
        psi,
    })
}

/// `psi(s) = z(s) - 1`; `psi(0) = 0` and `psi'(0) = 2^{-1/3}`.
pub fn psi(s: f64) -> Result<f64> {
    Ok(olver_phase(s)?.psi)
}

/// McMahon's expansion `b - (4n^2 - 1) / (8b)` with `b = (k + n/2 - 1/4) pi`.
pub fn mcmahon_guess(n: u32, k: u32) -> f64 {
    let b = (f64::from(k) + 0.5 * f64::from(n) - 0.25) * PI;
    let mu4 = 4.0 * f64::from(n) * f64::from(n);
    b - (mu4 - 1.0) / (8.0 * b)
}

/// Olver's transition-region guess `n (1 + psi(t_k / n^{2/3}))`; needs `n >= 1`.
pub fn olver_guess(n: u32, k: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the transition expansion needs order n >= 1".into(),
        ));
    }
    let nf = f64::from(n);
    let t = airy_zero(k)?.t;
    Ok(nf * (1.0 + psi(t / nf.powf(2.0 / 3.0))?))
}

/// True when the McMahon branch is selected for `(n, k)` under regime
/// constant `c`.
pub fn uses_mcmahon(n: u32, k: u32, c: f64) -> bool {
    n == 0 || f64::from(k) > c * f64::from(n).powf(4.0 / 3.0)
}

/// Initial guess with an explicit regime constant.
pub fn initial_guess_with_regime(n: u32, k: u32, c: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("zero index starts at 1".into()));
    }
    if uses_mcmahon(n, k, c) {
        Ok(mcmahon_guess(n, k))
    } else {
        olver_guess(n, k)
    }
}

/// Initial guess for `x_k(n)` with the default regime constant.
pub fn initial_guess(n: u32, k: u32) -> Result<f64> {
    initial_guess_with_regime(n, k, C_REGIME)
}

/// Refines a guess to the nearest zero of `J_n`.
///
/// A symmetric window around the guess grows until `J_n` changes sign,
/// safeguarded Newton runs inside it, and the result is certified by a
/// sign change across a bracket of width at most `1e-12 x`.
pub fn refine_zero(n: u32, guess: f64) -> Result<RefinedZero> {
    if !(guess.is_finite() && guess > f64::from(n)) {
        return Err(Error::InvalidArgument(format!(
            "guess {guess} must exceed the order {n}"
        )));
    }
    let f = |x: f64| bessel_j(n, x);
    let bracket = expand_bracket(f, guess, BRACKET_FIRST_HALF_WIDTH, BRACKET_MAX_HALF_WIDTH)?;
    let (x, bracket) = safeguarded_newton(
        |x| bessel_j_with_derivative(n, x),
        bracket,
        guess,
        1e-3 * ZERO_REL_BRACKET * guess,
        200,
    )?;
    let final_bracket = certify(n, x, bracket)?;
    let x = if final_bracket.f_lo == 0.0 {
        final_bracket.lo
    } else if final_bracket.f_hi == 0.0 {
        final_bracket.hi
    } else if (final_bracket.lo..=final_bracket.hi).contains(&x) {
        x
    } else {
        0.5 * (final_bracket.lo + final_bracket.hi)
    };
    if x <= f64::from(n) {
        return Err(Error::RootNotFound(format!(
            "refinement of J_{n} from {guess} left the region x > n"
        )));
    }
    let residual = bessel_j(n, x)?.abs();
    if residual > ZERO_RESIDUAL_TOL {
        return Err(Error::AccuracyNotAchieved(format!(
            "J_{n} zero near {x}: residual {residual:e} above {ZERO_RESIDUAL_TOL:e}"
        )));
    }
    Ok(RefinedZero {
        x,
        residual,
        bracket_width: final_bracket.width(),
    })
}

/// Sign change across `x (1 -+ 4.9e-13)`, or bisection of the Newton bracket
/// if rounding spoils the tight window.
fn certify(n: u32, x: f64, bracket: Bracket) -> Result<Bracket> {
    let target = ZERO_REL_BRACKET * x;
    let (lo, hi) = (x - 0.49 * target, x + 0.49 * target);
    let (f_lo, f_hi) = (bessel_j(n, lo)?, bessel_j(n, hi)?);
    if f_lo == 0.0 || f_hi == 0.0 || (f_lo < 0.0) != (f_hi < 0.0) {
        return Ok(Bracket { lo, hi, f_lo, f_hi });
    }
    let ordered = if bracket.lo <= bracket.hi {
        bracket
    } else {
        Bracket {
            lo: bracket.hi,
            hi: bracket.lo,
            f_lo: bracket.f_hi,
            f_hi: bracket.f_lo,
        }
    };
    let b = bisect_to_width(|t| bessel_j(n, t), ordered, target)?;
    Ok(if b.lo <= b.hi {
        b
    } else {
        Bracket {
            lo: b.hi,
            hi: b.lo,
            f_lo: b.f_hi,
            f_hi: b.f_lo,
        }
    })
}

/// The k-th positive zero of `J_n`.
pub fn bessel_zero(n: u32, k: u32) -> Result<BesselZero> {
    Ok(refine_zero(n, initial_guess(n, k)?)?.with_index(n, k))
}

/// All zeros of `J_n` in `(n, mu]`, indexed from 1 in increasing order.
pub fn zeros_up_to(n: u32, mu: f64) -> Result<Vec<BesselZero>> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive, got {mu}"
        )));
    }
    let mut out: Vec<BesselZero> = Vec::new();
    if f64::from(n) >= mu {
        return Ok(out);
    }
    for k in 1u32.. {
        let z = bessel_zero(n, k)?;
        if let Some(prev) = out.last() {
            // neighbours are more than pi apart; anything closer is a repeat
            if z.x - prev.x < 3.0 {
                return Err(Error::RootNotFound(format!(
                    "zeros {} and {k} of J_{n} collapsed onto {} and {}",
                    k - 1,
                    prev.x,
                    z.x
                )));
            }
        }
        if z.x > mu {
            break;
        }
        out.push(z);
    }
    Ok(out)
}
