use diskweyl_core::asymptotics::{
    beta_series, fit_envelope_points, oscillatory_integral, OscIntegralSpec, OscKind, Summation,
};
use diskweyl_core::bessel_zeros::{bessel_zero, zeros_up_to};
use diskweyl_core::geometry::{in_domain, involution, scale_function};
use diskweyl_core::lattice_count::{brute_force_count, column_count, count_lattice};
use diskweyl_core::special_fn::bessel_j;
use diskweyl_core::{LatticePoint, Point, Spectrum};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_function_is_homogeneous(x in -50.0..50.0f64, t in 0.01..1.0f64, lambda in 0.1..20.0f64) {
        let y = (-x).max(0.0) + t * (x.abs() + 1.0);
        let f = scale_function(x, y).unwrap();
        let g = scale_function(lambda * x, lambda * y).unwrap();
        prop_assert!((g - lambda * f).abs() <= 1e-11 * g.abs().max(1.0));
    }

    #[test]
    fn involution_preserves_membership(mu in 1.0..80.0f64, x in -80.0..80.0f64, y in 0.0..80.0f64) {
        let p = Point::new(x, y);
        prop_assert_eq!(in_domain(mu, p), in_domain(mu, involution(p)));
        let back = involution(involution(p));
        prop_assert!((back.x - x).abs() <= 1e-12 * x.abs().max(1.0));
        prop_assert!((back.y - y).abs() <= 1e-12 * (x.abs() + y.abs()).max(1.0));
    }

    #[test]
    fn lattice_involution_is_an_involution(n in -1000i64..1000, k in -1000i64..1000) {
        let p = LatticePoint::new(n, k);
        prop_assert_eq!(p.involution().involution(), p);
    }

    #[test]
    fn column_sums_match_brute_force(mu in 0.5..120.0f64) {
        let columns: u64 = (-(mu.ceil() as i64)..=(mu.ceil() as i64))
            .map(|n| column_count(n, mu))
            .sum();
        prop_assert_eq!(columns, brute_force_count(mu).unwrap());
        prop_assert_eq!(count_lattice(mu).unwrap(), columns);
    }

    #[test]
    fn beta_series_is_antisymmetric(beta in 0.01..0.99f64) {
        let a = beta_series(beta, 100_000, Summation::Abel).unwrap();
        let b = beta_series(1.0 - beta, 100_000, Summation::Abel).unwrap();
        prop_assert!((a + b).abs() <= 1e-6);
    }

    #[test]
    fn fit_recovers_planted_exponents(alpha in -1.0..1.5f64, c in 0.1..10.0f64) {
        let points: Vec<(f64, f64)> = (0..400)
            .map(|i| {
                let mu = 50.0 + 3.6 * f64::from(i);
                (mu, c * mu.powf(alpha))
            })
            .collect();
        let fit = fit_envelope_points(&points, 20).unwrap();
        prop_assert!((fit.exponent - alpha).abs() <= 0.01, "{} vs {}", fit.exponent, alpha);
    }

    #[test]
    fn bessel_three_term_recurrence(n in 0u32..60, x in 0.0..200.0f64) {
        let (a, b, c) = (bessel_j(n, x).unwrap(), bessel_j(n + 1, x).unwrap(), bessel_j(n + 2, x).unwrap());
        let lhs = 2.0 * f64::from(n + 1) * b;
        prop_assert!((lhs - x * (a + c)).abs() <= 1e-12 * (1.0 + x) * (1.0 + f64::from(n)));
    }

    #[test]
    fn zeros_interlace(n in 0u32..80, mu in 20.0..150.0f64) {
        let a = zeros_up_to(n, mu).unwrap();
        let b = zeros_up_to(n + 1, mu).unwrap();
        for (i, z) in b.iter().enumerate() {
            prop_assert!(a[i].x < z.x);
            if let Some(next) = a.get(i + 1) {
                prop_assert!(z.x < next.x);
            }
        }
    }

    #[test]
    fn zeros_are_increasing_in_order(n in 0u32..300, k in 1u32..40) {
        let x = bessel_zero(n, k).unwrap().x;
        prop_assert!(x < bessel_zero(n + 1, k).unwrap().x);
        prop_assert!(x < bessel_zero(n, k + 1).unwrap().x);
    }
}

#[test]
fn spectrum_is_monotone_and_jumps_by_multiplicity() {
    let s = Spectrum::new(60.0).unwrap();
    let mut prev = 0;
    for i in 1..=600 {
        let c = s.count(0.1 * f64::from(i)).unwrap();
        assert!(c >= prev);
        prev = c;
    }
    // stepping across a single zero adds 1 (order 0) or 2
    for (n, k) in [(0u32, 3u32), (4, 2), (11, 1)] {
        let x = bessel_zero(n, k).unwrap().x;
        let jump = s.count(x).unwrap() - s.count(x * (1.0 - 1e-9)).unwrap();
        assert_eq!(jump, if n == 0 { 1 } else { 2 }, "(n, k) = ({n}, {k})");
    }
}

#[test]
fn spectrum_is_deterministic() {
    let a = Spectrum::new(80.0).unwrap();
    let b = Spectrum::new(80.0).unwrap();
    for mu in [10.5, 33.3, 79.9] {
        assert_eq!(a.count(mu).unwrap(), b.count(mu).unwrap());
    }
}

#[test]
fn cubic_phase_matches_gamma_closed_form() {
    // int_0^inf e^{i tau t^3} t dt = Gamma(2/3)/3 e^{i pi/3} tau^{-2/3}; the
    // bump only adds O(tau^{-4/3}).
    let gamma_two_thirds = 1.354_117_939_426_400_5;
    let spec = OscIntegralSpec::new(OscKind::CB, 0.0, 1e4, 1e5, 1).unwrap();
    for tau in [1e4, 1e5] {
        let v = oscillatory_integral(&spec, tau).unwrap();
        let lead = gamma_two_thirds / 3.0 * tau.powf(-2.0 / 3.0);
        assert!(
            (v.norm() / lead - 1.0).abs() < 1e-2,
            "tau {tau}: {} vs {lead}",
            v.norm()
        );
        let arg = v.arg();
        assert!(
            (arg - std::f64::consts::FRAC_PI_3).abs() < 2e-2,
            "tau {tau}: arg {arg}"
        );
    }
}

#[test]
fn oscillatory_quadrature_is_self_consistent() {
    for kind in [OscKind::CA, OscKind::CB] {
        for nu in [-0.1, 0.0, 0.05] {
            let spec = OscIntegralSpec::new(kind, nu, 1e2, 1e4, 2).unwrap();
            let mut fine = spec.clone();
            fine.quadrature = spec.quadrature.halved();
            for &tau in &spec.tau_grid {
                let a = oscillatory_integral(&spec, tau).unwrap().norm();
                let b = oscillatory_integral(&fine, tau).unwrap().norm();
                assert!(
                    (a - b).abs() <= 0.01 * b,
                    "{kind:?} nu {nu} tau {tau}: {a} vs {b}"
                );
            }
        }
    }
}
