//! Bracketed root finding shared by the Airy and Bessel zero solvers.

use crate::error::{Error, Result};

/// A sign-change bracket `[lo, hi]` with the function values at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn has_sign_change(&self) -> bool {
        self.f_lo == 0.0 || self.f_hi == 0.0 || (self.f_lo < 0.0) != (self.f_hi < 0.0)
    }

    fn absorb(&mut self, x: f64, fx: f64) {
        if (fx < 0.0) == (self.f_lo < 0.0) {
            self.lo = x;
            self.f_lo = fx;
        } else {
            self.hi = x;
            self.f_hi = fx;
        }
    }
}

/// Grows a symmetric window around `center` until `f` changes sign across it.
///
/// Half-widths go `first, 2*first, ...` and are capped at `max_half_width`.
pub(crate) fn expand_bracket<F>(
    mut f: F,
    center: f64,
    first: f64,
    max_half_width: f64,
) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut h = first.min(max_half_width);
    loop {
        let (lo, hi) = (center - h, center + h);
        let b = Bracket {
            lo,
            hi,
            f_lo: f(lo)?,
            f_hi: f(hi)?,
        };
        if b.has_sign_change() {
            return Ok(b);
        }
        if h >= max_half_width {
            return Err(Error::RootNotFound(format!(
                "no sign change within {max_half_width} of {center}"
            )));
        }
        h = (2.0 * h).min(max_half_width);
    }
}

/// Newton iteration kept inside a sign-change bracket; falls back to
/// bisection whenever the Newton step leaves the bracket or stalls.
///
/// `f` returns the value and derivative. Stops once a step is below `xtol`.
/// The returned bracket always still straddles the root.
pub(crate) fn safeguarded_newton<F>(
    mut f: F,
    mut bracket: Bracket,
    start: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<(f64, Bracket)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !bracket.has_sign_change() {
        return Err(Error::RootNotFound(format!(
            "[{}, {}] is not a sign-change bracket",
            bracket.lo, bracket.hi
        )));
    }
    if bracket.f_lo == 0.0 {
        return Ok((bracket.lo, bracket));
    }
    if bracket.f_hi == 0.0 {
        return Ok((bracket.hi, bracket));
    }
    let mut x = if start > bracket.lo && start < bracket.hi {
        start
    } else {
        0.5 * (bracket.lo + bracket.hi)
    };
    let mut last_step = bracket.width();
    for _ in 0..max_iter {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok((x, bracket));
        }
        bracket.absorb(x, fx);
        let newton = x - fx / dfx;
        let (lo, hi) = (bracket.lo.min(bracket.hi), bracket.lo.max(bracket.hi));
        let next = if dfx != 0.0
            && newton.is_finite()
            && newton > lo
            && newton < hi
            && (newton - x).abs() <= 0.5 * last_step
        {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        last_step = step.max(f64::MIN_POSITIVE);
        x = next;
        if step <= xtol {
            return Ok((x, bracket));
        }
    }
    Err(Error::RootNotFound(format!(
        "Newton/bisection did not converge in {max_iter} iterations near {x}"
    )))
}

/// Plain bisection until the bracket is no wider than `width`.
pub(crate) fn bisect_to_width<F>(mut f: F, mut bracket: Bracket, width: f64) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..200 {
        if bracket.width().abs() <= width {
            return Ok(bracket);
        }
        let mid = 0.5 * (bracket.lo + bracket.hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(Bracket {
                lo: mid,
                hi: mid,
                f_lo: 0.0,
                f_hi: 0.0,
            });
        }
        bracket.absorb(mid, fm);
    }
    Err(Error::RootNotFound(format!(
        "bisection budget exhausted at width {}",
        bracket.width()
    )))
}
