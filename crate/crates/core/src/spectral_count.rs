//! Dirichlet eigenvalue counting on the unit disc.
//!
//! The eigenvalues are `x_k(n)^2` for `n` in `Z`, and `J_n`, `J_{-n}` share
//! their zeros, so `N_disk(mu) = Z(0, mu) + 2 sum_{n>=1} Z(n, mu)` where
//! `Z(n, mu)` counts the zeros of `J_n` up to `mu`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel_zeros::{bessel_zero, zeros_up_to, BesselZero};
use crate::error::{Error, Result};
use crate::geometry::scale_function;
use crate::lattice_count::count_lattice;

/// Relative slack when comparing a zero with the cutoff, so an eigenvalue
/// sitting on `mu^2` is counted regardless of rounding.
pub const COUNT_SLACK: f64 = 4.0 * f64::EPSILON;

/// Regime constant for [`inner_residual`]: requires `k > c n`.
pub const INNER_REGIME_C: f64 = 1.0;

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "cutoff must be positive, got {mu}"
        )))
    }
}

fn multiplicity(n: u32) -> u64 {
    if n == 0 {
        1
    } else {
        2
    }
}

/// One row of a count comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountSample {
    pub mu: f64,
    pub n_disk: u64,
    pub n_lattice: u64,
    pub weyl2: f64,
    pub remainder: f64,
    pub diff: i64,
}

impl CountSample {
    pub fn new(mu: f64, n_disk: u64, n_lattice: u64) -> Self {
        let (weyl2, remainder) = weyl_remainder(mu, n_disk);
        Self {
            mu,
            n_disk,
            n_lattice,
            weyl2,
            remainder,
            diff: n_disk as i64 - n_lattice as i64,
        }
    }
}

/// `(mu^2/4 - mu/2, n_disk - (mu^2/4 - mu/2))`.
pub fn weyl_remainder(mu: f64, n_disk: u64) -> (f64, f64) {
    let weyl2 = 0.25 * mu * mu - 0.5 * mu;
    (weyl2, n_disk as f64 - weyl2)
}

/// `N_disk(mu)`: eigenvalues `<= mu^2` counted with multiplicity.
pub fn count_disk(mu: f64) -> Result<u64> {
    check_mu(mu)?;
    let cutoff = mu * (1.0 + COUNT_SLACK);
    let per_order: Result<Vec<u64>> = (0..=(cutoff.floor() as u32))
        .into_par_iter()
        .map(|n| Ok(zeros_up_to(n, cutoff)?.len() as u64 * multiplicity(n)))
        .collect();
    Ok(per_order?.into_iter().sum())
}

/// `N_disk(mu) - N_D(mu)`.
pub fn compare_counts(mu: f64) -> Result<i64> {
    Ok(count_disk(mu)? as i64 - count_lattice(mu)? as i64)
}

/// `x_k(n) - F(n, k - 1/4)` in the regime `k > c n`.
pub fn inner_residual(n: u32, k: u32) -> Result<f64> {
    if k == 0 || f64::from(k) <= INNER_REGIME_C * f64::from(n) {
        return Err(Error::InvalidArgument(format!(
            "(n, k) = ({n}, {k}) is outside the regime k > {INNER_REGIME_C} n"
        )));
    }
    let x = bessel_zero(n, k)?.x;
    Ok(x - scale_function(f64::from(n), f64::from(k) - 0.25)?)
}

/// Every zero of `J_n` up to a fixed cutoff, over all orders, sorted once so
/// that `N_disk` can be read off at any `mu <= mu_max` by binary search.
#[derive(Debug, Clone)]
pub struct Spectrum {
    mu_max: f64,
    /// Sorted zeros `x` with the cumulative multiplicity up to and including each.
    xs: Vec<f64>,
    cumulative: Vec<u64>,
}

impl Spectrum {
    pub fn new(mu_max: f64) -> Result<Self> {
        check_mu(mu_max)?;
        let cutoff = mu_max * (1.0 + COUNT_SLACK);
        let per_order: Result<Vec<Vec<BesselZero>>> = (0..=(cutoff.floor() as u32))
            .into_par_iter()
            .map(|n| zeros_up_to(n, cutoff))
            .collect();
        let mut all: Vec<(f64, u64)> = per_order?
            .into_iter()
            .flatten()
            .map(|z| (z.x, multiplicity(z.n)))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut running = 0;
        let cumulative = all
            .iter()
            .map(|&(_, m)| {
                running += m;
                running
            })
            .collect();
        Ok(Self {
            mu_max,
            xs: all.into_iter().map(|(x, _)| x).collect(),
            cumulative,
        })
    }

    pub fn mu_max(&self) -> f64 {
        self.mu_max
    }

    /// Number of distinct `(n >= 0, k)` zeros stored.
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `N_disk(mu)` for `0 < mu <= mu_max`.
    pub fn count(&self, mu: f64) -> Result<u64> {
        check_mu(mu)?;
        if mu > self.mu_max {
            return Err(Error::OutOfRange {
                what: "cutoff",
                value: mu,
                min: 0.0,
                max: self.mu_max,
            });
        }
        let cutoff = mu * (1.0 + COUNT_SLACK);
        let idx = self.xs.partition_point(|&x| x <= cutoff);
        Ok(if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        })
    }

    /// Full comparison row at `mu`.
    pub fn sample(&self, mu: f64) -> Result<CountSample> {
        Ok(CountSample::new(mu, self.count(mu)?, count_lattice(mu)?))
    }
}

/// Comparison row at a single `mu`.
pub fn sample(mu: f64) -> Result<CountSample> {
    Ok(CountSample::new(mu, count_disk(mu)?, count_lattice(mu)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn small_counts() {
        assert_eq!(count_disk(2.0).unwrap(), 0);
        assert_eq!(count_disk(3.0).unwrap(), 1);
        assert_eq!(count_disk(4.0).unwrap(), 3);
        assert_eq!(count_disk(5.2).unwrap(), 5);
        assert!(count_disk(0.0).is_err());
    }

    #[test]
    fn remainder_arithmetic() {
        assert_eq!(weyl_remainder(3.0, 1), (0.75, 0.25));
        assert_eq!(weyl_remainder(2.0, 0), (0.0, 0.0));
        assert_eq!(weyl_remainder(4.0, 3), (2.0, 1.0));
    }

    #[test]
    fn small_comparisons() {
        assert_eq!(compare_counts(3.0).unwrap(), 0);
        assert_eq!(compare_counts(4.0).unwrap(), 0);
    }

    #[test]
    fn spectrum_matches_direct_count() {
        let s = Spectrum::new(40.0).unwrap();
        for mu in [2.0, 3.0, 4.0, 5.2, 17.7, 33.1, 40.0] {
            assert_eq!(s.count(mu).unwrap(), count_disk(mu).unwrap(), "mu = {mu}");
        }
        assert!(s.count(40.5).is_err());
    }

    #[test]
    fn inner_residual_examples() {
        let r01 = inner_residual(0, 1).unwrap();
        assert!((r01 - (2.404_825_557_695_773 - 0.75 * PI)).abs() < 1e-10);
        assert!((r01 - 0.0486).abs() < 1e-4);
        let r010 = inner_residual(0, 10).unwrap();
        let bound = r01.abs() * 2.0 / 11.0;
        assert!(r010.abs() <= 3.0 * bound && r010.abs() >= bound / 3.0);
        let r550 = inner_residual(5, 50).unwrap();
        assert!(r550.abs() <= 5.0 * 2.0 * r01.abs() / 56.0);
        assert!(inner_residual(10, 10).is_err());
    }
}
