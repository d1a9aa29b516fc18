//! The complex phase φ(Ω; x, t) = Ωt − k(Ω)x on its two sheets, its saddle
//! points, and the stationary-phase (stph) lines Re φ = φ_s along which the
//! integrand of the field integral descends.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionModel, Sheet};
use crate::error::{Error, Result};

/// Saddle branch: the non-relativistic model has a single saddle (`Plus`);
/// the relativistic model has a pair at ±Ω_s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// Saddle-point data at a fixed observation point (x, t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleInfo {
    /// Saddle frequency Ω_s (signed for the Minus branch).
    pub omega_s: f64,
    /// Wavenumber at the saddle.
    pub k_s: f64,
    /// Phase value φ_s at the saddle.
    pub phi_s: f64,
    /// Second derivative φ_s'' = d²φ/dΩ² at the saddle (signed).
    pub phi_pp: f64,
    /// Proper-time-like quantity ϑ = sqrt(t² − x²/c²); relativistic only.
    pub theta: Option<f64>,
    pub branch: Branch,
}

fn require_interior(x: f64, t: f64) -> Result<()> {
    if !(x > 0.0) || !(t > 0.0) {
        return Err(Error::Domain(format!(
            "phase analysis needs x > 0 and t > 0, got x = {x}, t = {t}"
        )));
    }
    Ok(())
}

/// φ(Ω; x, t) = Ωt − k(Ω)x on the requested sheet.
pub fn phase(
    model: &DispersionModel,
    omega: Complex64,
    sheet: Sheet,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    let k = model.wavenumber(omega, Some(sheet))?;
    Ok(omega * t - k * x)
}

/// Saddle points of e^{-iφ} at (x, t): one for the non-relativistic model,
/// the particle/antiparticle pair for the relativistic one.
pub fn saddles(model: &DispersionModel, x: f64, t: f64) -> Result<Vec<SaddleInfo>> {
    match model {
        DispersionModel::NonRelativistic { .. } => Ok(vec![saddle(model, x, t, Branch::Plus)?]),
        DispersionModel::Relativistic { .. } => Ok(vec![
            saddle(model, x, t, Branch::Plus)?,
            saddle(model, x, t, Branch::Minus)?,
        ]),
    }
}

/// Single saddle on the requested branch.
pub fn saddle(model: &DispersionModel, x: f64, t: f64, branch: Branch) -> Result<SaddleInfo> {
    require_interior(x, t)?;
    match *model {
        DispersionModel::NonRelativistic { mass, .. } => {
            if branch == Branch::Minus {
                return Err(Error::Domain(
                    "the non-relativistic phase has a single saddle".into(),
                ));
            }
            let omega_s = mass * x * x / (2.0 * t * t);
            Ok(SaddleInfo {
                omega_s,
                k_s: mass * x / t,
                phi_s: -mass * x * x / (2.0 * t),
                phi_pp: t / (2.0 * omega_s),
                theta: None,
                branch,
            })
        }
        DispersionModel::Relativistic {
            mass,
            light_speed: c,
            ..
        } => {
            if x >= c * t {
                return Err(Error::CausalRegion { x, ct: c * t });
            }
            let theta = (t * t - x * x / (c * c)).sqrt();
            let m_rest = model.rest_frequency();
            let omega_s = m_rest * t / theta;
            let k_s = mass * x / theta;
            let phi_s = m_rest * theta;
            let phi_pp = theta * theta * theta / (mass * x * x);
            let sgn = if branch == Branch::Plus { 1.0 } else { -1.0 };
            Ok(SaddleInfo {
                omega_s: sgn * omega_s,
                k_s: sgn * k_s,
                phi_s: sgn * phi_s,
                phi_pp: sgn * phi_pp,
                theta: Some(theta),
                branch,
            })
        }
    }
}

/// Real-axis interval of Ω_r on which the stph line of the given branch is
/// parameterized.  Non-relativistic: the full axis (a parabola).
/// Relativistic: the open interval between the two asymptotes
/// Ω_s ± sqrt(Ω_s² − (mc²)²), mirrored for the Minus branch.
pub fn stph_support(model: &DispersionModel, x: f64, t: f64, branch: Branch) -> Result<(f64, f64)> {
    match model {
        DispersionModel::NonRelativistic { .. } => {
            saddle(model, x, t, branch)?;
            Ok((f64::NEG_INFINITY, f64::INFINITY))
        }
        DispersionModel::Relativistic { .. } => {
            let s = saddle(model, x, t, Branch::Plus)?;
            let m_rest = model.rest_frequency();
            let w = (s.omega_s * s.omega_s - m_rest * m_rest).sqrt();
            match branch {
                Branch::Plus => Ok((s.omega_s - w, s.omega_s + w)),
                Branch::Minus => Ok((-s.omega_s - w, -s.omega_s + w)),
            }
        }
    }
}

/// Imaginary part Ω_i of the stationary-phase line at abscissa Ω_r.
///
/// Non-relativistic: the parabola Ω_i/Ω_s = ½ [1 − (Ω_r/Ω_s)²].
/// Relativistic: the closed-form line through +Ω_s, which crosses the real
/// axis at Ω_s and (mc²)²/Ω_s and dives to −∞ at its asymptotes; the Minus
/// branch is its mirror image through the imaginary axis.
pub fn stph_line(
    model: &DispersionModel,
    x: f64,
    t: f64,
    omega_r: f64,
    branch: Branch,
) -> Result<f64> {
    match model {
        DispersionModel::NonRelativistic { .. } => {
            let s = saddle(model, x, t, branch)?;
            let r = omega_r / s.omega_s;
            Ok(0.5 * s.omega_s * (1.0 - r * r))
        }
        DispersionModel::Relativistic { .. } => {
            let s = saddle(model, x, t, Branch::Plus)?;
            let m_rest = model.rest_frequency();
            let or = match branch {
                Branch::Plus => omega_r,
                Branch::Minus => -omega_r,
            };
            let (lo, hi) = stph_support(model, x, t, Branch::Plus)?;
            if !(or > lo && or < hi) {
                return Err(Error::Domain(format!(
                    "Ω_r = {or} outside the stph support ({lo}, {hi})"
                )));
            }
            Ok(rel_stph_imag(or, s.omega_s, m_rest))
        }
    }
}

pub(crate) fn rel_stph_imag(omega_r: f64, omega_s: f64, m_rest: f64) -> f64 {
    let num = -(omega_r - omega_s) * (omega_r * omega_s - m_rest * m_rest);
    let cc = omega_s * omega_s - m_rest * m_rest;
    let p = -omega_r * omega_r + 2.0 * omega_r * omega_s - m_rest * m_rest;
    num / (cc * p).sqrt()
}

/// d Ω_i / d Ω_r along the relativistic stph⁺ line.
pub(crate) fn rel_stph_imag_deriv(omega_r: f64, omega_s: f64, m_rest: f64) -> f64 {
    let cc = omega_s * omega_s - m_rest * m_rest;
    let p = -omega_r * omega_r + 2.0 * omega_r * omega_s - m_rest * m_rest;
    let n = -(omega_r - omega_s) * (omega_r * omega_s - m_rest * m_rest);
    let np = -(2.0 * omega_r * omega_s - m_rest * m_rest - omega_s * omega_s);
    let pp = -2.0 * omega_r + 2.0 * omega_s;
    let d = (cc * p).sqrt();
    let dp = cc.sqrt() * pp / (2.0 * p.sqrt());
    (np * d - n * dp) / (d * d)
}

/// Sheet carried by the stph line at abscissa Ω_r: the line switches from
/// the upper to the lower sheet as it passes through the saddle on the cut.
pub fn stph_sheet(
    model: &DispersionModel,
    x: f64,
    t: f64,
    omega_r: f64,
    branch: Branch,
) -> Result<Sheet> {
    let s = saddle(
        model,
        x,
        t,
        if model.is_relativistic() {
            branch
        } else {
            Branch::Plus
        },
    )?;
    let upper = match branch {
        Branch::Plus => omega_r <= s.omega_s,
        Branch::Minus => omega_r >= s.omega_s,
    };
    Ok(if upper { Sheet::Upper } else { Sheet::Lower })
}

/// Phase on the stph line at abscissa Ω_r.
///
/// Non-relativistic: the closed form φ_s [1 + (i/2)(1 − Ω_r/Ω_s)²].
/// Relativistic: direct evaluation at (Ω_r, Ω_i(Ω_r)) on the proper sheet.
pub fn phase_on_stph(
    model: &DispersionModel,
    x: f64,
    t: f64,
    omega_r: f64,
    branch: Branch,
) -> Result<Complex64> {
    match model {
        DispersionModel::NonRelativistic { .. } => {
            let s = saddle(model, x, t, branch)?;
            let d = 1.0 - omega_r / s.omega_s;
            Ok(s.phi_s * Complex64::new(1.0, 0.5 * d * d))
        }
        DispersionModel::Relativistic { .. } => {
            let omega_i = stph_line(model, x, t, omega_r, branch)?;
            let sheet = stph_sheet(model, x, t, omega_r, branch)?;
            phase(model, Complex64::new(omega_r, omega_i), sheet, x, t)
        }
    }
}

/// Time at which the deformed contour crosses the source pole, t = x / v_m.
pub fn pole_crossing_time(model: &DispersionModel, omega0_k: f64, x: f64) -> Result<f64> {
    model.traversal_time(omega0_k, x)
}

/// Numerically detects the time at which the relevant real-axis crossing
/// point of the stph line meets the pole frequency, by bisection on the
/// crossing-point trajectory.  Independent check of [`pole_crossing_time`].
pub fn detect_crossing_time(model: &DispersionModel, omega0_k: f64, x: f64) -> Result<f64> {
    require_interior(x, 1.0)?;
    let kind = model.classify(omega0_k)?;
    let target = omega0_k.abs();

    // crossing-point abscissa as a function of t
    let crossing = |t: f64| -> Result<f64> {
        let s = saddle(model, x, t, Branch::Plus)?;
        match model {
            DispersionModel::NonRelativistic { .. } => Ok(s.omega_s),
            DispersionModel::Relativistic { .. } => match kind {
                crate::dispersion::WaveKind::Propagating => Ok(s.omega_s),
                crate::dispersion::WaveKind::Evanescent => {
                    let m_rest = model.rest_frequency();
                    Ok(m_rest * m_rest / s.omega_s)
                }
            },
        }
    };

    // the crossing point is monotone in t on the causal domain
    let t_min = match model.light_speed() {
        Some(c) => x / c * (1.0 + 1e-12),
        None => x * 1e-9,
    };
    let mut lo = t_min;
    let mut hi = t_min.max(x) * 2.0;
    let sign_at = |t: f64| -> Result<f64> { Ok(crossing(t)? - target) };
    let s_lo = sign_at(lo)?;
    for _ in 0..200 {
        if sign_at(hi)? * s_lo < 0.0 {
            break;
        }
        hi *= 2.0;
        if hi > 1e18 {
            return Err(Error::Domain("crossing time not bracketed".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sign_at(mid)? * s_lo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nonrel() -> DispersionModel {
        DispersionModel::nonrelativistic(1.0, 0.0).unwrap()
    }

    fn rel() -> DispersionModel {
        DispersionModel::relativistic(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn phase_examples() {
        let p = phase(&nonrel(), Complex64::new(2.0, 0.0), Sheet::Upper, 2.0, 1.0).unwrap();
        assert!((p - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
        let p = phase(&rel(), Complex64::new(1.25, 0.0), Sheet::Upper, 3.0, 5.0).unwrap();
        assert!((p - Complex64::new(4.0, 0.0)).norm() < 1e-13);
        // x → 0 gives Ωt
        let om = Complex64::new(0.3, 0.7);
        let p = phase(&nonrel(), om, Sheet::Upper, 0.0, 2.0).unwrap();
        assert!((p - om * 2.0).norm() < 1e-15);
    }

    #[test]
    fn saddle_examples() {
        let s = saddle(&nonrel(), 2.0, 1.0, Branch::Plus).unwrap();
        assert!((s.omega_s - 2.0).abs() < 1e-15);
        assert!((s.k_s - 2.0).abs() < 1e-15);
        assert!((s.phi_s + 2.0).abs() < 1e-15);
        assert!((s.phi_pp - 0.25).abs() < 1e-15);

        let s = saddle(&rel(), 3.0, 5.0, Branch::Plus).unwrap();
        assert_eq!(s.theta, Some(4.0));
        assert!((s.omega_s - 1.25).abs() < 1e-15);
        assert!((s.k_s - 0.75).abs() < 1e-15);
        assert!((s.phi_s - 4.0).abs() < 1e-15);
        assert!((s.phi_pp - 64.0 / 9.0).abs() < 1e-13);

        let s = saddle(&rel(), 3.0, 5.0, Branch::Minus).unwrap();
        assert!((s.omega_s + 1.25).abs() < 1e-15);
        assert!((s.phi_s + 4.0).abs() < 1e-15);

        // saddle frequency vanishes as t → ∞
        let s = saddle(&nonrel(), 2.0, 1e6, Branch::Plus).unwrap();
        assert!(s.omega_s < 1e-11);

        assert!(matches!(
            saddle(&rel(), 5.0, 3.0, Branch::Plus),
            Err(Error::CausalRegion { .. })
        ));
    }

    #[test]
    fn stph_line_examples() {
        // Ω_s = 2 at (x=2, t=1): Ω_i(0) = 1, Ω_i(±Ω_s) = 0
        let m = nonrel();
        assert!((stph_line(&m, 2.0, 1.0, 0.0, Branch::Plus).unwrap() - 1.0).abs() < 1e-15);
        assert!(stph_line(&m, 2.0, 1.0, 2.0, Branch::Plus).unwrap().abs() < 1e-15);
        assert!(stph_line(&m, 2.0, 1.0, -2.0, Branch::Plus).unwrap().abs() < 1e-15);

        // relativistic crossings at Ω_s and (mc²)²/Ω_s
        let m = rel();
        let (x, t) = (3.0, 5.0); // Ω_s = 1.25, second crossing at 0.8
        assert!(stph_line(&m, x, t, 0.8, Branch::Plus).unwrap().abs() < 1e-13);
        assert!(stph_line(&m, x, t, 1.25, Branch::Plus).unwrap().abs() < 1e-13);
        // mirror line crosses at -0.8
        assert!(stph_line(&m, x, t, -0.8, Branch::Minus).unwrap().abs() < 1e-13);
        // outside the support
        let (lo, hi) = stph_support(&m, x, t, Branch::Plus).unwrap();
        assert!(stph_line(&m, x, t, hi + 0.01, Branch::Plus).is_err());
        assert!((lo * hi - 1.0).abs() < 1e-12); // asymptote product = (mc²)²
    }

    #[test]
    fn phase_on_stph_examples() {
        let m = nonrel();
        let s = saddle(&m, 2.0, 1.0, Branch::Plus).unwrap();
        let p = phase_on_stph(&m, 2.0, 1.0, s.omega_s, Branch::Plus).unwrap();
        assert!((p - Complex64::new(s.phi_s, 0.0)).norm() < 1e-14);
        // Ω_r = −Ω_s: φ = φ_s(1 + 2i) = −2 − 4i
        let p = phase_on_stph(&m, 2.0, 1.0, -2.0, Branch::Plus).unwrap();
        assert!((p - Complex64::new(-2.0, -4.0)).norm() < 1e-14);

        // relativistic: Im φ = −m x²/t at the inner crossing
        let m = rel();
        let p = phase_on_stph(&m, 3.0, 5.0, 0.8, Branch::Plus).unwrap();
        assert!((p.im + 9.0 / 5.0).abs() < 1e-12, "Im phi = {}", p.im);
        assert!((p.re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_phase_and_descent_along_lines() {
        // Re φ constant at φ_s; Im φ decreases away from the saddle
        let cases: Vec<(DispersionModel, f64, f64)> =
            vec![(nonrel(), 1.7, 0.6), (rel(), 1.0, 1.25), (rel(), 0.5, 2.0)];
        for (model, x, t) in cases {
            for branch in [Branch::Plus, Branch::Minus] {
                if !model.is_relativistic() && branch == Branch::Minus {
                    continue;
                }
                let s = saddle(&model, x, t, branch).unwrap();
                let (lo, hi) = stph_support(&model, x, t, branch).unwrap();
                let scale = 12.0 * s.omega_s.abs();
                let (lo, hi) = (lo.max(s.omega_s - scale), hi.min(s.omega_s + scale));
                let margin = (hi - lo) * 1e-4;
                let (lo, hi) = (lo + margin, hi - margin);
                let n = 101;
                let mut last_im_left = f64::NEG_INFINITY;
                let mut last_im_right = 0.0;
                for i in 0..n {
                    let or = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                    let p = phase_on_stph(&model, x, t, or, branch).unwrap();
                    assert!(
                        (p.re - s.phi_s).abs() <= 1e-10 * s.phi_s.abs(),
                        "Re phi = {} vs phi_s = {} at Ω_r = {or}",
                        p.re,
                        s.phi_s
                    );
                    if or <= s.omega_s {
                        assert!(p.im >= last_im_left - 1e-12);
                        last_im_left = p.im;
                    } else {
                        assert!(p.im <= last_im_right + 1e-12);
                        last_im_right = p.im;
                    }
                }
            }
        }
    }

    #[test]
    fn saddle_residual_finite_differences() {
        // central differences of phase() around Ω_s: dφ/dΩ ≈ 0 and φ'' matches
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for model in [nonrel(), rel()] {
            for _ in 0..100 {
                let x: f64 = rng.gen_range(0.2..3.0);
                let t: f64 = match model {
                    DispersionModel::NonRelativistic { .. } => rng.gen_range(0.2..3.0),
                    DispersionModel::Relativistic { .. } => x + rng.gen_range(0.1..3.0),
                };
                let s = saddle(&model, x, t, Branch::Plus).unwrap();
                let h = 1e-5 * s.omega_s.max(1.0);
                let f = |om: f64| {
                    phase(&model, Complex64::new(om, 0.0), Sheet::Upper, x, t)
                        .unwrap()
                        .re
                };
                // Richardson-refined first derivative
                let d1h = (f(s.omega_s + h) - f(s.omega_s - h)) / (2.0 * h);
                let d1h2 = (f(s.omega_s + h / 2.0) - f(s.omega_s - h / 2.0)) / h;
                let d1 = (4.0 * d1h2 - d1h) / 3.0;
                assert!(
                    d1.abs() <= 1e-8 * (s.phi_pp * s.omega_s).abs(),
                    "dphi = {d1} at x={x}, t={t}"
                );
                // curvature: Richardson pair at a step set by the distance
                // to the branch point, balancing truncation and roundoff
                let scale = s.omega_s - model.rest_frequency();
                let h2 = 1e-2 * scale;
                let second =
                    |h: f64| (f(s.omega_s + h) - 2.0 * f(s.omega_s) + f(s.omega_s - h)) / (h * h);
                let d2 = (4.0 * second(h2 / 2.0) - second(h2)) / 3.0;
                assert!(
                    (d2 - s.phi_pp).abs() <= 1e-6 * s.phi_pp.abs(),
                    "phi'' = {d2} vs {} at x={x}, t={t}",
                    s.phi_pp
                );
            }
        }
    }

    #[test]
    fn crossing_detection_matches_front_velocity() {
        for (model, om0, x) in [
            (nonrel(), -2.0, 1.0),
            (nonrel(), 2.0, 1.5),
            (rel(), 0.6, 0.8),
            (rel(), 1.25, 0.6),
        ] {
            let t_pred = pole_crossing_time(&model, om0, x).unwrap();
            let t_det = detect_crossing_time(&model, om0, x).unwrap();
            assert!(
                (t_pred - t_det).abs() <= 1e-8 * t_pred,
                "{t_pred} vs {t_det}"
            );
        }
        assert_eq!(pole_crossing_time(&nonrel(), -2.0, 0.0).unwrap(), 0.0);
    }
}
