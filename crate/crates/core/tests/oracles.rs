//! Cross-validation of the three field oracles: frozen high-precision
//! regression values, boundary identities, the residue identity of the
//! pole circle, causality, and continuity across the front.

use num_complex::Complex64;

use evanfront::dispersion::{DispersionModel, SourceSpec};
use evanfront::oracle::{self, QuadratureSettings};
use evanfront::special::sine_integral;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn nonrel(m: f64, v: f64) -> DispersionModel {
    DispersionModel::nonrelativistic(m, v).unwrap()
}

fn rel() -> DispersionModel {
    DispersionModel::relativistic(1.0, 0.0, 1.0).unwrap()
}

/// Sharp-onset closed form against values tabulated independently with
/// 35-digit arithmetic (contour quadrature in the exact u parameter).
/// Rows: (m, V, A, Ω₀, x, t, Re ψ, Im ψ); the t = 0.5 row of the first
/// block sits exactly on the front t = x/v_m.
type FrozenRow = (f64, f64, f64, f64, f64, f64, f64, f64);
#[allow(clippy::excessive_precision)]
const FROZEN_NONREL: [FrozenRow; 11] = [
    (
        1.0,
        0.0,
        1.0,
        -2.0,
        1.0,
        0.25,
        -0.29297377612510813,
        0.14085101549199171,
    ),
    (
        1.0,
        0.0,
        1.0,
        -2.0,
        1.0,
        0.5,
        -0.08745606125566141,
        0.33634238079482756,
    ),
    (
        1.0,
        0.0,
        1.0,
        -2.0,
        1.0,
        0.75,
        -0.046902913228568758,
        0.31610260577040438,
    ),
    (
        1.0,
        0.0,
        1.0,
        -2.0,
        1.0,
        2.0,
        -0.073263462599896977,
        -0.043197421384924562,
    ),
    (
        1.0,
        0.0,
        1.0,
        2.0,
        1.0,
        0.25,
        -0.33229449757895235,
        0.25168069544519127,
    ),
    (
        1.0,
        0.0,
        1.0,
        2.0,
        1.0,
        0.5,
        0.25592720900858945,
        0.55705531009326379,
    ),
    (
        1.0,
        0.0,
        1.0,
        2.0,
        1.0,
        1.5,
        0.46463057379153414,
        -0.90430727717742709,
    ),
    (
        1.0,
        0.0,
        1.0,
        -2.0,
        3.0,
        0.8,
        0.186013786037839,
        0.021271169334298658,
    ),
    (
        2.0,
        1.5,
        0.7,
        -1.2,
        2.0,
        0.9,
        -0.11590453783516138,
        -0.099278519420870976,
    ),
    (
        1.0,
        0.0,
        1.0,
        4.5,
        0.7,
        1.1,
        -0.99616653104302536,
        -0.32171006646452139,
    ),
    (
        0.5,
        -0.3,
        1.0,
        -0.8,
        4.0,
        1.7,
        -0.21474534486474745,
        -0.12554337022323351,
    ),
];

#[test]
fn closed_form_matches_frozen_table() {
    for (m, v, a, om0, x, t, re, im) in FROZEN_NONREL {
        let model = nonrel(m, v);
        let source = SourceSpec::sharp(c(a, 0.0), om0 + v).unwrap();
        let got = oracle::exact_nonrel_sharp(&model, &source, x, t).unwrap();
        let want = c(re, im);
        assert!(
            (got.psi - want).norm() <= 1e-13 * want.norm(),
            "psi({x},{t}) = {} vs frozen {want}",
            got.psi
        );
    }
}

#[test]
fn contour_matches_frozen_table() {
    let settings = QuadratureSettings::default();
    for (m, v, a, om0, x, t, re, im) in FROZEN_NONREL {
        let model = nonrel(m, v);
        let source = SourceSpec::sharp(c(a, 0.0), om0 + v).unwrap();
        let got = oracle::contour_quadrature(&model, &source, x, t, &settings).unwrap();
        let want = c(re, im);
        assert!(
            (got.psi - want).norm() <= 1e-8 * want.norm(),
            "contour psi({x},{t}) = {} vs frozen {want} ({})",
            got.psi,
            got.path_metadata
        );
        assert!(
            got.est_error <= settings.rel_tol * got.psi.norm() + settings.abs_tol,
            "est_error {} out of budget at ({x},{t})",
            got.est_error
        );
    }
}

/// Relativistic contour values frozen from the mpmath prototype (30 dps);
/// m = c = 1, V = 0, A = 1.
#[test]
#[allow(clippy::excessive_precision)]
fn rel_contour_matches_frozen_values() {
    let settings = QuadratureSettings::default();
    let model = rel();
    let table = [
        (0.6, 0.8, 1.3, 0.76998953145274337, -0.26687261386452559),
        (1.25, 0.6, 0.7, 0.96251208410382108, -0.12281190582843028),
        (1.25, 0.6, 1.6, 0.11702171107069969, -0.79654092846368322),
        (0.3, 0.5, 2.0, 0.60101656419910837, -0.36057207609159497),
        (-0.6, 0.8, 1.3, 0.76998953145274337, 0.26687261386452559),
    ];
    for (om0, x, t, re, im) in table {
        let source = SourceSpec::sharp(c(1.0, 0.0), om0).unwrap();
        let got = oracle::contour_quadrature(&model, &source, x, t, &settings).unwrap();
        let want = c(re, im);
        assert!(
            (got.psi - want).norm() <= 1e-8 * want.norm(),
            "rel psi({om0};{x},{t}) = {} vs frozen {want} ({})",
            got.psi,
            got.path_metadata
        );
        assert!(
            got.est_error <= settings.rel_tol * got.psi.norm() + settings.abs_tol,
            "est_error {} out of budget at ({om0};{x},{t})",
            got.est_error
        );
    }
}

#[test]
fn sharp_boundary_identity() {
    // ψ(0, t) = A e^{-iω₀ t} for t > 0, and 0 for t < 0
    let settings = QuadratureSettings::default();
    let models: [DispersionModel; 2] = [nonrel(1.0, 0.4), rel()];
    for model in models {
        let source = SourceSpec::sharp(c(0.8, 0.3), 0.6 + model.potential()).unwrap();
        for i in 0..8 {
            let t = 0.15 + 0.55 * i as f64;
            let want = source.amplitude * (-c(0.0, 1.0) * source.carrier * t).exp();
            let got = oracle::contour_quadrature(&model, &source, 0.0, t, &settings).unwrap();
            assert!(
                (got.psi - want).norm() <= 1e-8 * want.norm(),
                "boundary at t={t}: {} vs {want}",
                got.psi
            );
        }
        assert_eq!(
            oracle::contour_quadrature(&model, &source, 0.4, -1.0, &settings)
                .unwrap()
                .psi,
            c(0.0, 0.0)
        );
    }
}

#[test]
fn band_boundary_closed_form() {
    // ψ(0,t) = A e^{-iω₀ t} [1/2 + Si(Δω t)/π], valid for negative t too
    let model = nonrel(1.0, 0.0);
    let source = SourceSpec::band_limited(c(1.0, 0.0), -2.0, 0.4).unwrap();
    let settings = QuadratureSettings::default();
    for t in [-3.0, -0.4, 0.0, 0.3, 1.0, 4.0, 15.0] {
        let got = oracle::band_quadrature(&model, &source, 0.0, t, &settings).unwrap();
        let si = sine_integral(0.4 * t);
        let want = (-c(0.0, 1.0) * source.carrier * t).exp() * (0.5 + si / std::f64::consts::PI);
        assert!(
            (got.psi - want).norm() <= 1e-9 * want.norm().max(0.1),
            "band boundary t={t}: {} vs {want}",
            got.psi
        );
    }
    // t → +∞ restores the full amplitude, t = 0 gives half of it
    let late = oracle::band_quadrature(&model, &source, 0.0, 400.0, &settings).unwrap();
    assert!((late.psi.norm() - 1.0).abs() < 2e-3);
    let zero = oracle::band_quadrature(&model, &source, 0.0, 0.0, &settings).unwrap();
    assert!((zero.psi.norm() - 0.5).abs() < 1e-10);

    // the identity holds for the relativistic model as well (at x = 0 the
    // phase is Ωt regardless of the dispersion)
    let rel_src = SourceSpec::band_limited(c(1.0, 0.0), 0.6, 0.2).unwrap();
    for t in [0.7, 2.5] {
        let got = oracle::band_quadrature(&rel(), &rel_src, 0.0, t, &settings).unwrap();
        let si = sine_integral(0.2 * t);
        let want = (-c(0.0, 1.0) * rel_src.carrier * t).exp() * (0.5 + si / std::f64::consts::PI);
        assert!((got.psi - want).norm() <= 1e-9 * want.norm());
    }
    // interior relativistic band values converge on refinement
    let loose = QuadratureSettings {
        rel_tol: 1e-6,
        ..Default::default()
    };
    let tight = QuadratureSettings {
        rel_tol: 1e-12,
        ..Default::default()
    };
    let a = oracle::band_quadrature(&rel(), &rel_src, 1.2, 2.0, &loose).unwrap();
    let b = oracle::band_quadrature(&rel(), &rel_src, 1.2, 2.0, &tight).unwrap();
    assert!((a.psi - b.psi).norm() <= 3.0 * a.est_error.max(1e-13 * b.psi.norm()));
}

#[test]
fn pole_circle_residue_identity() {
    // with vs without the pole circle differ by exactly ψ_p
    let settings = QuadratureSettings::default();
    let cases: [(DispersionModel, f64, f64, f64); 4] = [
        (nonrel(1.0, 0.0), -2.0, 1.0, 1.2),
        (nonrel(1.0, 0.0), 2.0, 1.0, 1.4),
        (rel(), 0.6, 0.8, 1.5),
        (rel(), 1.25, 0.6, 1.8),
    ];
    for (model, om0, x, t) in cases {
        let source = SourceSpec::sharp(c(1.0, 0.0), om0 + model.potential()).unwrap();
        let with = oracle::contour_quadrature(&model, &source, x, t, &settings).unwrap();
        let without =
            oracle::contour_quadrature_opts(&model, &source, x, t, &settings, false).unwrap();
        let psi_p = evanfront::decomposition::pole_contribution(&model, &source, x, t).unwrap();
        assert!(psi_p.norm() > 0.0, "front should have passed");
        let diff = with.psi - without.psi;
        assert!(
            (diff - psi_p).norm() <= 1e-11 * psi_p.norm(),
            "residue identity: {diff} vs {psi_p}"
        );
    }
}

#[test]
fn relativistic_causality_small_field() {
    let settings = QuadratureSettings::default();
    let model = rel();
    for om0 in [0.6, 1.25] {
        let source = SourceSpec::sharp(c(1.0, 0.0), om0).unwrap();
        for (x, t) in [(1.5, 1.0), (2.0, 0.5), (1.1, 1.0), (10.0, 2.0)] {
            let got = oracle::contour_quadrature(&model, &source, x, t, &settings).unwrap();
            assert!(
                got.psi.norm() <= 1e-10,
                "acausal field {} at ({x},{t})",
                got.psi.norm()
            );
        }
    }
}

#[test]
fn front_continuity_scales_linearly() {
    let settings = QuadratureSettings::default();
    let cases: [(DispersionModel, f64, f64); 3] = [
        (nonrel(1.0, 0.0), -2.0, 1.0),
        (nonrel(1.0, 0.0), 2.0, 1.0),
        (rel(), 0.6, 0.8),
    ];
    for (model, om0, x) in cases {
        let source = SourceSpec::sharp(c(1.0, 0.0), om0).unwrap();
        let tau = model.traversal_time(om0, x).unwrap();
        let mut prev = f64::INFINITY;
        for k in 2..=5 {
            let dt = tau * 10f64.powi(-k);
            let a = oracle::contour_quadrature(&model, &source, x, tau - dt, &settings).unwrap();
            let b = oracle::contour_quadrature(&model, &source, x, tau + dt, &settings).unwrap();
            let diff = (b.psi - a.psi).norm();
            assert!(diff < prev, "difference must shrink with the step");
            if prev.is_finite() {
                let ratio = prev / diff;
                assert!(
                    (5.0..20.0).contains(&ratio),
                    "non-linear scaling at {om0}: ratio {ratio}"
                );
            }
            prev = diff;
        }
    }
}

#[test]
fn exact_front_value_matches_closed_form() {
    // at t = x/v_m the pole sits exactly on the contour; the PV plus half
    // residue reproduces the continuous field value
    let settings = QuadratureSettings::default();
    let model = nonrel(1.0, 0.0);
    for om0 in [-2.0, 2.0] {
        let source = SourceSpec::sharp(c(1.0, 0.0), om0).unwrap();
        let x = 1.0;
        let tau = model.traversal_time(om0, x).unwrap();
        let cf = oracle::exact_nonrel_sharp(&model, &source, x, tau).unwrap();
        let cq = oracle::contour_quadrature(&model, &source, x, tau, &settings).unwrap();
        assert!(
            (cf.psi - cq.psi).norm() <= 1e-9 * cf.psi.norm(),
            "front value {} vs {} ({})",
            cq.psi,
            cf.psi,
            cq.path_metadata
        );
        assert!(cq.path_metadata.contains("pv=true"));
    }
}

#[test]
fn band_oracle_converges_on_refinement() {
    // est_error honest: halving rel_tol must not move the value by more
    // than the previous error estimate
    let model = nonrel(1.0, 0.0);
    let source = SourceSpec::band_limited(c(1.0, 0.0), -1.0, 0.2).unwrap();
    let loose = QuadratureSettings {
        rel_tol: 1e-6,
        ..Default::default()
    };
    let tight = QuadratureSettings {
        rel_tol: 1e-12,
        ..Default::default()
    };
    let (x, t) = (6.0, 7.0);
    let a = oracle::band_quadrature(&model, &source, x, t, &loose).unwrap();
    let b = oracle::band_quadrature(&model, &source, x, t, &tight).unwrap();
    assert!((a.psi - b.psi).norm() <= a.est_error.max(1e-14 * b.psi.norm()) * 3.0);
}

#[test]
fn field_dispatch_selects_hierarchy() {
    let settings = QuadratureSettings::default();
    let m = nonrel(1.0, 0.0);
    let sharp = SourceSpec::sharp(c(1.0, 0.0), -2.0).unwrap();
    let band = SourceSpec::band_limited(c(1.0, 0.0), -2.0, 0.3).unwrap();
    assert_eq!(
        oracle::field(&m, &sharp, 1.0, 1.0, &settings)
            .unwrap()
            .method,
        oracle::Method::ClosedFormNonRel
    );
    assert_eq!(
        oracle::field(&m, &band, 1.0, 1.0, &settings)
            .unwrap()
            .method,
        oracle::Method::BandQuadrature
    );
    assert_eq!(
        oracle::field(&rel(), &sharp, 0.5, 1.0, &settings)
            .unwrap()
            .method,
        oracle::Method::ContourQuadrature
    );
}
