use std::f64::consts::PI;

use proptest::prelude::*;

use specpoly::heat_kernels::{sector_diag_series, sector_radial_sum, Truncation};
use specpoly::polyakov::corner_fp_closed_pi2;
use specpoly::rect_eta::{f_value, rect_det_eta, RectConvention};
use specpoly::regdet::{
    fit_finite_part, log_spaced, scale_logdet, zeta_prime_zero_auto, DetScheme,
};
use specpoly::specfun::{bessel_j, bessel_zero, exp_e1_scaled, log_dedekind_eta};
use specpoly::spectra::{rectangle_spectrum, sector_spectrum, SectorGeometry};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn e1_two_sided_bound(x in 1e-3_f64..1e3) {
        let v = x * exp_e1_scaled(x).unwrap();
        prop_assert!(x / (x + 1.0) < v && v < (x + 1.0) / (x + 2.0));
    }

    #[test]
    fn eta_modular_identity(y in 0.1_f64..10.0) {
        let d = log_dedekind_eta(1.0 / y).unwrap().value - log_dedekind_eta(y).unwrap().value;
        prop_assert!((d - 0.5 * y.ln()).abs() < 1e-10);
    }

    #[test]
    fn bessel_zeros_are_zeros(nu in 0.0_f64..30.0, n in 1_usize..20) {
        let z = bessel_zero(nu, n).unwrap();
        let next = bessel_zero(nu, n + 1).unwrap();
        prop_assert!(next > z);
        prop_assert!(bessel_j(nu, z).unwrap().abs() < 1e-10);
    }

    #[test]
    fn sector_kernel_positive_and_symmetric(
        theta in 0.2_f64..PI,
        t in 1e-3_f64..1.0,
        r in 0.05_f64..2.0,
        frac in 0.01_f64..0.99,
    ) {
        let phi = frac * theta;
        let a = sector_diag_series(theta, t, r, phi, Truncation::Auto).unwrap();
        let b = sector_diag_series(theta, t, r, theta - phi, Truncation::Auto).unwrap();
        prop_assert!(a.value > 0.0);
        prop_assert!((a.value - b.value).abs() <= 1e-12 * a.value + a.truncation_bound + b.truncation_bound);
    }

    #[test]
    fn sector_kernel_domain_monotone(
        theta1 in 0.2_f64..2.0,
        grow in 0.0_f64..1.0,
        t in 1e-3_f64..0.5,
        r in 0.05_f64..1.5,
        frac in 0.05_f64..0.95,
    ) {
        let theta2 = theta1 + grow * (PI - theta1);
        let phi = frac * theta1;
        let small = sector_diag_series(theta1, t, r, phi, Truncation::Auto).unwrap().value;
        let large = sector_diag_series(theta2, t, r, phi, Truncation::Auto).unwrap().value;
        prop_assert!(small <= large * (1.0 + 1e-12));
    }

    #[test]
    fn radial_sum_bounded_by_bulk(theta in 0.2_f64..3.0, z in 0.0_f64..1e4) {
        // S_θ(z) rises from 0 towards 1/(2p) = θ/2π, never above θ/2π + ½.
        let s = sector_radial_sum(theta, z, Truncation::Auto).unwrap().value;
        prop_assert!(s >= 0.0 && s <= theta / (2.0 * PI) + 0.5);
    }

    #[test]
    fn fit_recovers_model_members(
        c in proptest::array::uniform5(-5.0_f64..5.0),
        b in -1.0_f64..1.0,
    ) {
        let exps = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let pts: Vec<(f64, f64)> = log_spaced(1e-5_f64, 1e-2, 24)
            .into_iter()
            .map(|t| (t, exps.iter().zip(&c).map(|(e, k)| k * t.powf(*e)).sum::<f64>() + b * t.ln()))
            .collect();
        let fit = fit_finite_part(&pts, &exps, true).unwrap();
        prop_assert!((fit.finite_part() - c[2]).abs() < 1e-7);
        prop_assert!((fit.log_coefficient.unwrap() - b).abs() < 1e-8);
    }

    #[test]
    fn rectangle_inversion_and_square(l in 0.2_f64..5.0) {
        let a = rect_det_eta(l, RectConvention::Paper).unwrap();
        let b = rect_det_eta(1.0 / l, RectConvention::Paper).unwrap();
        prop_assert!((a.f_value - b.f_value).abs() < 1e-12);
        prop_assert_eq!(a.det_corrected * a.det_corrected, a.det_paper);
        let f1 = f_value(1.0_f64, RectConvention::Corrected).unwrap();
        prop_assert!(f_value(l, RectConvention::Corrected).unwrap() >= f1);
    }

    #[test]
    fn closed_corner_is_linear(w0 in -3.0_f64..3.0, wlog in -3.0_f64..3.0) {
        let c = corner_fp_closed_pi2(w0, wlog).unwrap().fp;
        let a = corner_fp_closed_pi2(1.0, 0.0).unwrap().fp;
        let b = corner_fp_closed_pi2(0.0, 1.0).unwrap().fp;
        prop_assert!((c - (w0 * a + wlog * b)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn spectra_sorted_below_cutoff(alpha in 0.3_f64..3.0, cutoff in 200.0_f64..3000.0) {
        let table = sector_spectrum(&SectorGeometry::unit(alpha).unwrap(), cutoff).unwrap();
        let ev: Vec<f64> = table.eigenvalues().collect();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(ev.iter().all(|&l| l > 0.0 && l <= cutoff));
    }

    #[test]
    fn rectangle_spectrum_symmetric(l in 0.4_f64..2.5) {
        let a: Vec<f64> = rectangle_spectrum(l, 2000.0).unwrap().eigenvalues().collect();
        let b: Vec<f64> = rectangle_spectrum(1.0 / l, 2000.0).unwrap().eigenvalues().collect();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * x);
        }
    }

    #[test]
    fn scaling_composes(r1 in 0.3_f64..3.0, r2 in 0.3_f64..3.0) {
        let table = sector_spectrum(&SectorGeometry::unit(1.2).unwrap(), 3000.0).unwrap();
        let base = zeta_prime_zero_auto(&table, &DetScheme::default()).unwrap();
        let two_step = scale_logdet(&scale_logdet(&base, r1).unwrap(), r2).unwrap();
        let one_step = scale_logdet(&base, r1 * r2).unwrap();
        prop_assert!((two_step.zeta_prime0 - one_step.zeta_prime0).abs() < 1e-12);
    }
}
