//! Independent high-accuracy evaluations of the exact field ψ(x, t).
//!
//! Three routes, in order of analytic constraint:
//!
//! 1. [`exact_nonrel_sharp`] — closed form of the sharp-onset Schrödinger
//!    problem through the Faddeeva function;
//! 2. [`band_quadrature`] — principal-value + residue quadrature of the
//!    field integral restricted to a frequency band;
//! 3. [`contour_quadrature`] — quadrature along the deformed contour
//!    (stationary-phase lines through the saddles, a clockwise circle
//!    around the pole once the front has passed, upward tent for x > ct).
//!
//! Real-axis quadrature of the sharp-onset integrand is deliberately not
//! offered: its 1/Ω tail converges too slowly, while the deformed contour
//! converges exponentially.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decomposition::monochromatic_wave as pole_wave;
use crate::dispersion::{DispersionModel, Sheet, SourceSpec, WaveKind};
use crate::error::{Error, Result};
use crate::phase::{self, Branch};
use crate::quad;
use crate::special::faddeeva;

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Contour tails are truncated once Im φ has dropped by this much
/// (integrand magnitude e^{-70} ≈ 4e-31).
const IM_PHI_DROP: f64 = 70.0;
/// Tent height for the causal (x > ct) evaluation.
const TENT_DROP: f64 = 45.0;
/// Pole-to-path distance, in units of the local line scale, below which the
/// integrand is regularized by subtracting the pole term analytically.
const REGULARIZE_DIST: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Relative tolerance on the returned field value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Panel-split budget per contour piece.
    pub max_subdivisions: u32,
    /// Relative half-width, in units of the local contour scale, below
    /// which a pole is considered exactly on the path and handled as a
    /// symmetric principal value plus half residue.
    pub pv_window: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 400,
            pv_window: 1e-11,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput("rel_tol must be positive".into()));
        }
        if self.max_subdivisions < 64 {
            return Err(Error::InvalidInput(
                "max_subdivisions must be at least 64".into(),
            ));
        }
        if !(self.abs_tol >= 0.0) || !(self.pv_window > 0.0) {
            return Err(Error::InvalidInput("bad tolerance settings".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedFormNonRel,
    BandQuadrature,
    ContourQuadrature,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleResult {
    pub psi: Complex64,
    pub est_error: f64,
    pub method: Method,
    pub path_metadata: String,
}

fn front_passed(model: &DispersionModel, omega0: f64, x: f64, t: f64) -> Result<bool> {
    if x == 0.0 {
        return Ok(t > 0.0);
    }
    Ok(model.front_velocity(omega0)? * t > x)
}

// ---------------------------------------------------------------------------
// closed form (non-relativistic, sharp onset)
// ---------------------------------------------------------------------------

/// Closed-form solution of the sharp-onset boundary problem for the
/// Schrödinger dispersion, written through the Faddeeva function:
///
/// ψ = A e^{-iVt} (M⁺ + M⁻),  M^± = ½ e^{i m x²/(2t)} w(i u^±),
/// u^± = e^{-iπ/4} sqrt(m/2t) (x ∓ k₀ t/m),
///
/// with the reflection M^± = e^{±ik₀x - iΩ₀t} - ½ e^{imx²/2t} w(-iu^±)
/// applied when Re u^± < 0 so that w is only evaluated where it decays.
pub fn exact_nonrel_sharp(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<OracleResult> {
    let mass = match model {
        DispersionModel::NonRelativistic { mass, .. } => *mass,
        DispersionModel::Relativistic { .. } => {
            return Err(Error::InvalidInput(
                "closed form applies to the non-relativistic model only".into(),
            ))
        }
    };
    if source.band.is_some() {
        return Err(Error::InvalidInput(
            "closed form applies to the sharp-onset source only".into(),
        ));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    if t <= 0.0 {
        return Ok(OracleResult {
            psi: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            method: Method::ClosedFormNonRel,
            path_metadata: "quiescent (t <= 0)".into(),
        });
    }
    let omega0 = source.carrier_kinetic(model);
    let k0 = model.outgoing_wavenumber(omega0);
    let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let scale = (mass / (2.0 * t)).sqrt();
    let pref = 0.5 * (I * mass * x * x / (2.0 * t)).exp();
    let mut total = Complex64::new(0.0, 0.0);
    for sgn in [1.0f64, -1.0] {
        let u = rot * scale * (x - sgn * k0 * t / mass);
        let m_term = if u.re >= 0.0 {
            pref * faddeeva(I * u)
        } else {
            (I * (sgn * k0 * x - omega0 * t)).exp() - pref * faddeeva(-I * u)
        };
        total += m_term;
    }
    let psi = source.amplitude * (-I * model.potential() * t).exp() * total;
    Ok(OracleResult {
        est_error: 5e-14 * psi.norm() + 1e-300,
        psi,
        method: Method::ClosedFormNonRel,
        path_metadata: "Faddeeva closed form".into(),
    })
}

// ---------------------------------------------------------------------------
// band-limited source: principal value + residue on the real axis
// ---------------------------------------------------------------------------

/// Field of the band-limited source: the integral over [Ω₀−Δω, Ω₀+Δω] with
/// the pole split off as PV ∫ f/(Ω−Ω₀) − iπ f(Ω₀).  Valid for any t,
/// including t < 0 (the acausal tail of the sharp-band spectrum).
pub fn band_quadrature(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<OracleResult> {
    settings.validate()?;
    let half_width = source
        .band
        .ok_or_else(|| Error::InvalidInput("band quadrature needs a band-limited source".into()))?;
    source.validate_for(model)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    let omega0 = source.carrier_kinetic(model);
    let g = |om: f64| -> Complex64 {
        let k = model.outgoing_wavenumber(om);
        (-I * (om * t - k * x)).exp()
    };
    let g0 = g(omega0);
    // d/dΩ of e^{-iφ} at the pole, for the removable-singularity limit
    let k0 = model.outgoing_wavenumber(omega0);
    let kprime = match model {
        DispersionModel::NonRelativistic { mass, .. } => *mass / k0,
        DispersionModel::Relativistic { light_speed, .. } => {
            Complex64::new(omega0, 0.0) / (light_speed * light_speed * k0)
        }
    };
    let gprime0 = -I * (t - kprime * x) * g0;
    let near = 1e-8 * half_width;
    let integrand = move |om: f64| -> Complex64 {
        let d = om - omega0;
        if d.abs() < near {
            gprime0
        } else {
            (g(om) - g0) / d
        }
    };
    let pref = I * source.amplitude / std::f64::consts::TAU * (-I * model.potential() * t).exp();
    let pref_norm = pref.norm();
    let pts = [omega0 - half_width, omega0, omega0 + half_width];
    let mut rel = settings.rel_tol * 0.5;
    let mut last: Option<(Complex64, f64)> = None;
    for _ in 0..3 {
        let (val, err) = quad::adaptive(
            &integrand,
            &pts,
            rel,
            settings.abs_tol / pref_norm * 0.5,
            settings.max_subdivisions,
        )?;
        let psi = pref * (val - I * std::f64::consts::PI * g0);
        let est = err * pref_norm + 1e-15 * psi.norm();
        if est <= settings.rel_tol * psi.norm() + settings.abs_tol {
            return Ok(OracleResult {
                psi,
                est_error: est,
                method: Method::BandQuadrature,
                path_metadata: format!(
                    "band [{:.6e}, {:.6e}] PV+residue",
                    omega0 - half_width,
                    omega0 + half_width
                ),
            });
        }
        last = Some((psi, est));
        rel *= 1e-2;
    }
    let (psi, est) = last.unwrap();
    Err(Error::NonConvergence {
        context: format!("band quadrature at x={x}, t={t} (psi ~ {psi})"),
        est_error: est,
        subdivisions: settings.max_subdivisions,
    })
}

// ---------------------------------------------------------------------------
// deformed-contour quadrature (sharp onset, both models)
// ---------------------------------------------------------------------------

/// Exact field by quadrature along the deformed contour.  See
/// [`contour_quadrature_opts`]; the pole circle is included.
pub fn contour_quadrature(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<OracleResult> {
    contour_quadrature_opts(model, source, x, t, settings, true)
}

/// Deformed-contour evaluation with the pole circle optionally dropped;
/// the difference between the two variants is exactly the residue term,
/// i.e. the monochromatic wave ψ_p once the front has passed.
pub fn contour_quadrature_opts(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
    include_pole_circle: bool,
) -> Result<OracleResult> {
    settings.validate()?;
    if source.band.is_some() {
        return Err(Error::InvalidInput(
            "contour quadrature applies to the sharp-onset source".into(),
        ));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    if t <= 0.0 {
        return Ok(OracleResult {
            psi: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            method: Method::ContourQuadrature,
            path_metadata: "quiescent (t <= 0)".into(),
        });
    }
    if x == 0.0 {
        return boundary_tent(model, source, t, settings);
    }
    if let DispersionModel::Relativistic { light_speed: c, .. } = model {
        let ct = c * t;
        if (x - ct).abs() <= 1e-12 * ct {
            return Err(Error::Domain(
                "field evaluation on the light cone x = ct is singular".into(),
            ));
        }
        if x > ct {
            return causal_tent(model, source, x, t, settings);
        }
    }
    match model {
        DispersionModel::NonRelativistic { .. } => {
            nonrel_contour(model, source, x, t, settings, include_pole_circle)
        }
        DispersionModel::Relativistic { .. } => {
            rel_contour(model, source, x, t, settings, include_pole_circle)
        }
    }
}

/// Best available oracle for the given model/source combination: closed
/// form > band quadrature > contour quadrature.
pub fn field(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<OracleResult> {
    match (model, source.band) {
        (_, Some(_)) => band_quadrature(model, source, x, t, settings),
        (DispersionModel::NonRelativistic { .. }, None) => exact_nonrel_sharp(model, source, x, t),
        (DispersionModel::Relativistic { .. }, None) => {
            contour_quadrature(model, source, x, t, settings)
        }
    }
}

// --- x = 0: downward tent, pole always enclosed ---------------------------

fn boundary_tent(
    model: &DispersionModel,
    source: &SourceSpec,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<OracleResult> {
    let omega0 = source.carrier_kinetic(model);
    // x = 0 removes the wavenumber from the phase entirely: φ = Ωt
    let f = |om: Complex64| (-I * om * t).exp() / (om - omega0);
    let y0 = (TENT_DROP / t).min(1e14);
    let dir_r = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let dir_l = Complex64::from_polar(1.0, -3.0 * std::f64::consts::FRAC_PI_4);
    let vertex = -I * y0;
    let mut s_max = 10.0 + 4.0 * omega0.abs();
    while (y0 + s_max * std::f64::consts::FRAC_1_SQRT_2) * t < TENT_DROP + 30.0 {
        s_max *= 2.0;
    }
    let right = |s: f64| f(vertex + dir_r * s) * dir_r;
    let left = |s: f64| f(vertex + dir_l * s) * dir_l;
    let pref = I * source.amplitude / std::f64::consts::TAU * (-I * model.potential() * t).exp();
    let (vr, er) = quad::adaptive(
        &right,
        &[0.0, s_max],
        settings.rel_tol,
        settings.abs_tol,
        settings.max_subdivisions,
    )?;
    let (vl, el) = quad::adaptive(
        &left,
        &[0.0, s_max],
        settings.rel_tol,
        settings.abs_tol,
        settings.max_subdivisions,
    )?;
    let tent = pref * (vr - vl);
    let psi_p = pole_wave(model, source, 0.0, t);
    let psi = psi_p + tent;
    Ok(OracleResult {
        psi,
        est_error: (er + el) * pref.norm() + 1e-15 * psi.norm(),
        method: Method::ContourQuadrature,
        path_metadata: format!("boundary tent at depth {y0:.3e} plus pole residue"),
    })
}

// --- x > ct: upward tent, no singularities above the real axis ------------

fn causal_tent(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
) -> Result<OracleResult> {
    let c = model.light_speed().unwrap();
    let omega0 = source.carrier_kinetic(model);
    let gap = x / c - t;
    let y0 = (TENT_DROP / gap).min(1e14);
    let phi = |om: Complex64| -> Complex64 {
        let k = model.wavenumber(om, Some(Sheet::Upper)).unwrap();
        om * t - k * x
    };
    let f = |om: Complex64| (-I * phi(om)).exp() / (om - omega0);
    let vertex = I * y0;
    let dir_r = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let dir_l = Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4);
    let mut s_max = 10.0 + 4.0 * omega0.abs() + 4.0 * model.rest_frequency();
    for _ in 0..200 {
        let drop_r = -phi(vertex + dir_r * s_max).im;
        let drop_l = -phi(vertex + dir_l * s_max).im;
        if drop_r > TENT_DROP + 30.0 && drop_l > TENT_DROP + 30.0 {
            break;
        }
        s_max *= 2.0;
    }
    let right = |s: f64| f(vertex + dir_r * s) * dir_r;
    let left = |s: f64| f(vertex + dir_l * s) * dir_l;
    let pref = I * source.amplitude / std::f64::consts::TAU * (-I * model.potential() * t).exp();
    let (vr, er) = quad::adaptive(
        &right,
        &[0.0, s_max],
        settings.rel_tol,
        settings.abs_tol,
        settings.max_subdivisions,
    )?;
    let (vl, el) = quad::adaptive(
        &left,
        &[0.0, s_max],
        settings.rel_tol,
        settings.abs_tol,
        settings.max_subdivisions,
    )?;
    let psi = pref * (vr - vl);
    Ok(OracleResult {
        psi,
        est_error: (er + el) * pref.norm() + source.amplitude.norm() * (-TENT_DROP).exp(),
        method: Method::ContourQuadrature,
        path_metadata: format!("upward tent at height {y0:.3e} (x > ct)"),
    })
}

// --- shared pole bookkeeping ----------------------------------------------

/// A simple pole split off the integrand: the quadrature integrates
/// f(s) − R/(s − s_p) while the pole term is added back analytically.
/// Within `switch_dist` of the pole the regularized difference is replaced
/// by its Taylor expansion R[(a−b) + (c − ab + b²)(s − s_p)], built from
/// local derivatives of the numerator and denominator; this removes the
/// catastrophic cancellation of the direct difference.
struct SubtractedPole {
    pole: Complex64,
    residue: Complex64,
    l0: Complex64,
    l1: Complex64,
    switch_dist: f64,
}

impl SubtractedPole {
    fn build(
        num: &dyn Fn(Complex64) -> Complex64,
        den: &dyn Fn(Complex64) -> Complex64,
        pole: Complex64,
        residue: Complex64,
        scale: f64,
    ) -> Self {
        let h = 1e-4 * scale;
        let (np, nm) = (num(pole + h), num(pole - h));
        let n0 = num(pole);
        let n1 = (np - nm) / (2.0 * h);
        let n2 = (np - 2.0 * n0 + nm) / (2.0 * h * h);
        let (dp, dm) = (den(pole + h), den(pole - h));
        let d1 = (dp - dm) / (2.0 * h);
        let d2 = (dp + dm) / (2.0 * h * h); // den(pole) = 0
        let a = n1 / n0;
        let b = d2 / d1;
        let c = n2 / n0;
        SubtractedPole {
            pole,
            residue,
            l0: residue * (a - b),
            l1: residue * (c - a * b + b * b),
            switch_dist: 1e-4 * scale,
        }
    }

    fn pole_term(&self, s: Complex64) -> Complex64 {
        self.residue / (s - self.pole)
    }
}

/// Evaluates raw(s) − Σ pole terms, switching to the Taylor patch of the
/// pole whose window contains s (at most one: poles are separated).
fn regularized_value(
    raw: &dyn Fn(Complex64) -> Complex64,
    regs: &[SubtractedPole],
    s: Complex64,
) -> Complex64 {
    for (j, reg) in regs.iter().enumerate() {
        let d = s - reg.pole;
        if d.norm() < reg.switch_dist {
            let mut v = reg.l0 + reg.l1 * d;
            for (i, other) in regs.iter().enumerate() {
                if i != j {
                    v -= other.pole_term(s);
                }
            }
            return v;
        }
    }
    let mut v = raw(s);
    for reg in regs.iter() {
        v -= reg.pole_term(s);
    }
    v
}

/// Analytic value of ∫ R/(s − s_p) ds over [lo, hi] for a pole strictly off
/// the segment (principal log branch; the total argument sweep is < π).
fn off_path_pole_integral(r: Complex64, s_p: Complex64, lo: f64, hi: f64) -> Complex64 {
    r * ((Complex64::new(hi, 0.0) - s_p) / (Complex64::new(lo, 0.0) - s_p)).ln()
}

/// Principal value of the same integral for a pole exactly on the segment,
/// plus the half-residue with the sign fixed by the physical pole lying
/// below the traversed path (Ω-plane displacement −i0 mapped through the
/// local parameterization).
fn on_path_pole_integral(
    r: Complex64,
    s_p: f64,
    lo: f64,
    hi: f64,
    d_omega_ds: Complex64,
) -> Complex64 {
    let pv = r * ((hi - s_p) / (s_p - lo)).ln();
    let half = I * std::f64::consts::PI * r;
    if d_omega_ds.re > 0.0 {
        pv - half
    } else {
        pv + half
    }
}

fn dedup_ascending(mut pts: Vec<f64>, span: f64) -> Vec<f64> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().is_none_or(|&q| p - q > 1e-13 * span) {
            out.push(p);
        }
    }
    out
}

// --- non-relativistic contour ----------------------------------------------

/// Quadrature along the stationary-phase parabola in the exact variable u:
/// Ω(u) = Ω_s (1 + (1−i)u − (i/2)u²), on which e^{-iφ} = e^{-iφ_s} e^{-αu²/2}
/// with α = Ω_s t, the left half on the upper sheet and the right half on
/// the lower (the line pierces the cut at the saddle).
fn nonrel_contour(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
    include_pole_circle: bool,
) -> Result<OracleResult> {
    let mass = model.mass();
    let omega0 = source.carrier_kinetic(model);
    let sad = phase::saddle(model, x, t, Branch::Plus)?;
    let omega_s = sad.omega_s;
    let alpha = omega_s * t;
    let u_limit = (2.0 * IM_PHI_DROP / alpha).sqrt();

    let omega_of = |u: Complex64| -> Complex64 {
        omega_s * (1.0 + Complex64::new(1.0, -1.0) * u - 0.5 * I * u * u)
    };
    let d_omega = |u: Complex64| -> Complex64 { omega_s * (Complex64::new(1.0, -1.0) - I * u) };

    // poles in the u parameter: Ω(u_p) = Ω₀ at u_p = (±z₀ − 1)(1 + i)
    let z0 = Complex64::new(omega0 / omega_s, 0.0).sqrt();
    let one_plus_i = Complex64::new(1.0, 1.0);
    let poles = [(z0 - 1.0) * one_plus_i, (-z0 - 1.0) * one_plus_i];

    let numerator = |u: Complex64| -> Complex64 { d_omega(u) * (-0.5 * alpha * u * u).exp() };
    let denominator = |u: Complex64| -> Complex64 { omega_of(u) - omega0 };

    let mut analytic = Complex64::new(0.0, 0.0);
    let mut regs: Vec<SubtractedPole> = Vec::new();
    let mut pv_note = false;
    let mut pts = vec![-u_limit, u_limit];
    for &cand in [-2.0f64, 0.0].iter() {
        if cand > -u_limit && cand < u_limit {
            pts.push(cand);
        }
    }
    for &u_p in poles.iter() {
        if u_p.re.abs() > u_limit + 2.0 {
            continue;
        }
        let dist = u_p.im.abs();
        if dist < REGULARIZE_DIST {
            // residue of the integrand at u_p: the measure factor cancels
            let r = (-0.5 * alpha * u_p * u_p).exp();
            let scale = 1.0 + u_p.re.abs();
            let pinned = if dist <= settings.pv_window * scale {
                analytic += on_path_pole_integral(r, u_p.re, -u_limit, u_limit, d_omega(u_p));
                pv_note = true;
                Complex64::new(u_p.re, 0.0)
            } else {
                analytic += off_path_pole_integral(r, u_p, -u_limit, u_limit);
                u_p
            };
            regs.push(SubtractedPole::build(
                &numerator,
                &denominator,
                pinned,
                r,
                scale,
            ));
            if u_p.re > -u_limit && u_p.re < u_limit {
                pts.push(u_p.re);
            }
        }
    }
    let pts = dedup_ascending(pts, 2.0 * u_limit);

    let raw = |u: Complex64| -> Complex64 { numerator(u) / denominator(u) };
    let integrand =
        |u: f64| -> Complex64 { regularized_value(&raw, &regs, Complex64::new(u, 0.0)) };

    let pref = I * source.amplitude / std::f64::consts::TAU
        * (-I * (model.potential() * t + sad.phi_s)).exp();
    let pref_norm = pref.norm();
    let (val, err) = quad::adaptive(
        &integrand,
        &pts,
        settings.rel_tol * 0.5,
        settings.abs_tol / pref_norm * 0.5,
        settings.max_subdivisions,
    )?;
    // truncated-tail bound: Gaussian decay of the raw integrand beyond
    // ±u_limit (the subtracted pole terms are added back exactly)
    let tail = (raw(Complex64::new(u_limit, 0.0)).norm()
        + raw(Complex64::new(-u_limit, 0.0)).norm())
        / (alpha * u_limit);
    let mut psi = pref * (val + analytic);
    let mut est = (err + tail) * pref_norm;

    let front = front_passed(model, omega0, x, t)?;
    if front && include_pole_circle {
        let radius = (0.1 * (omega0 - omega_s).abs()).min(0.01 * omega0.abs());
        let k_cont = move |om: Complex64| -> Complex64 {
            if omega0 > 0.0 {
                (2.0 * mass * om).sqrt()
            } else {
                I * (-2.0 * mass * om).sqrt()
            }
        };
        let circ =
            |om: Complex64| -> Complex64 { (-I * (om * t - k_cont(om) * x)).exp() / (om - omega0) };
        let circle = quad::circle_clockwise(&circ, Complex64::new(omega0, 0.0), radius, 64);
        let pole_term = I * source.amplitude / std::f64::consts::TAU
            * (-I * model.potential() * t).exp()
            * circle;
        psi += pole_term;
        est += 1e-13 * pole_term.norm();
    }
    Ok(OracleResult {
        psi,
        est_error: est,
        method: Method::ContourQuadrature,
        path_metadata: format!(
            "nonrel stph parabola, alpha={alpha:.4e}, u in [{:.3e},{:.3e}], pv={pv_note}, pole_circle={}",
            -u_limit,
            u_limit,
            front && include_pole_circle
        ),
    })
}

// --- relativistic contour ----------------------------------------------------

/// Continued stph⁺ ordinate for complex abscissa (used to locate the pole
/// in the line parameter by Newton iteration).
fn rel_stph_imag_complex(s: Complex64, omega_s: f64, m_rest: f64) -> Complex64 {
    let num = -(s - omega_s) * (s * omega_s - m_rest * m_rest);
    let cc = omega_s * omega_s - m_rest * m_rest;
    let p = -s * s + 2.0 * omega_s * s - m_rest * m_rest;
    num / (cc * p).sqrt()
}

#[derive(Clone, Copy)]
enum KRegion {
    UpperSheet,
    GluedRight,
    GluedLeft,
}

fn k_region(model: &DispersionModel, region: KRegion, om: Complex64) -> Complex64 {
    let c = model.light_speed().unwrap();
    let m_rest = model.rest_frequency();
    match region {
        KRegion::UpperSheet => model.wavenumber(om, Some(Sheet::Upper)).unwrap(),
        KRegion::GluedRight => (om - m_rest).sqrt() * (om + m_rest).sqrt() / c,
        KRegion::GluedLeft => -((-om - m_rest).sqrt() * (-om + m_rest).sqrt()) / c,
    }
}

struct RelLegPiece {
    lo: f64,
    hi: f64,
    region: KRegion,
    /// true for the mirrored (stph⁻) parameterization Ω = s + i Ω_i⁺(−s)
    mirrored: bool,
    interior: Vec<f64>,
}

fn rel_contour(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    settings: &QuadratureSettings,
    include_pole_circle: bool,
) -> Result<OracleResult> {
    let m_rest = model.rest_frequency();
    let omega0 = source.carrier_kinetic(model);
    let sad = phase::saddle(model, x, t, Branch::Plus)?;
    let omega_s = sad.omega_s;
    let w = (omega_s * omega_s - m_rest * m_rest).sqrt();
    let inner = m_rest * m_rest / omega_s;
    let mid = 0.5 * (inner + omega_s);

    let line = |s: f64| phase::rel_stph_imag(s, omega_s, m_rest);
    let line_d = |s: f64| phase::rel_stph_imag_deriv(s, omega_s, m_rest);

    // truncation offsets where Im φ has dropped by IM_PHI_DROP; computed on
    // the stph+ tails and reused on stph−, whose Im φ mirrors them exactly
    let drop_at = |s: f64, region: KRegion| -> f64 {
        let om = Complex64::new(s, line(s));
        let k = k_region(model, region, om);
        (om * t - k * x).im
    };
    let find_eps = |end: f64, inward: f64, region: KRegion| -> f64 {
        let mut eps = 1e-2 * w;
        for _ in 0..80 {
            if drop_at(end + inward * eps, region) <= -IM_PHI_DROP {
                return eps;
            }
            eps *= 0.25;
            if eps < 1e-300 {
                break;
            }
        }
        eps
    };

    // stph+ spans (Ω_s − W, Ω_s + W); stph− is its mirror image through the
    // imaginary axis, traversed first so the path runs left to right
    let eps_a = find_eps(omega_s - w, 1.0, KRegion::UpperSheet);
    let eps_b = find_eps(omega_s + w, -1.0, KRegion::GluedRight);
    let pieces = [
        RelLegPiece {
            lo: -(omega_s + w) + eps_b,
            hi: -mid,
            region: KRegion::GluedLeft,
            mirrored: true,
            interior: vec![-omega_s],
        },
        RelLegPiece {
            lo: -mid,
            hi: -(omega_s - w) - eps_a,
            region: KRegion::UpperSheet,
            mirrored: true,
            interior: vec![-inner],
        },
        RelLegPiece {
            lo: omega_s - w + eps_a,
            hi: mid,
            region: KRegion::UpperSheet,
            mirrored: false,
            interior: vec![inner],
        },
        RelLegPiece {
            lo: mid,
            hi: omega_s + w - eps_b,
            region: KRegion::GluedRight,
            mirrored: false,
            interior: vec![omega_s],
        },
    ];

    // locate the pole in the parameter of the piece that can host it
    let kind = model.classify(omega0)?;
    let host = |p: &RelLegPiece| -> bool {
        match (kind, omega0 >= 0.0) {
            (WaveKind::Evanescent, true) => !p.mirrored && matches!(p.region, KRegion::UpperSheet),
            (WaveKind::Evanescent, false) => p.mirrored && matches!(p.region, KRegion::UpperSheet),
            (WaveKind::Propagating, true) => matches!(p.region, KRegion::GluedRight),
            (WaveKind::Propagating, false) => matches!(p.region, KRegion::GluedLeft),
        }
    };
    let seed = match kind {
        WaveKind::Evanescent => inner,
        WaveKind::Propagating => omega_s,
    };

    let pref = I * source.amplitude / std::f64::consts::TAU * (-I * model.potential() * t).exp();
    let pref_norm = pref.norm();
    let mut psi = Complex64::new(0.0, 0.0);
    let mut est = 0.0;
    let mut pv_note = false;

    for piece in pieces.iter() {
        if !(piece.hi > piece.lo) {
            continue;
        }
        let mirrored = piece.mirrored;
        let region = piece.region;
        let point = move |s: Complex64| -> Complex64 {
            if mirrored {
                // Ω_i continued to complex abscissa of the mirrored line
                s + I * rel_stph_imag_complex(-s, omega_s, m_rest)
            } else {
                s + I * rel_stph_imag_complex(s, omega_s, m_rest)
            }
        };
        let d_point = move |s: f64| -> Complex64 {
            if mirrored {
                Complex64::new(1.0, -line_d(-s))
            } else {
                Complex64::new(1.0, line_d(s))
            }
        };

        let numerator = |s: Complex64| -> Complex64 {
            let om = point(s);
            let k = k_region(model, region, om);
            let h = 1e-6 * w;
            let dom = (point(s + h) - point(s - h)) / (2.0 * h);
            (-I * (om * t - k * x)).exp() * dom
        };
        let denominator = |s: Complex64| -> Complex64 { point(s) - omega0 };

        // pole search on the hosting piece
        let mut regs: Vec<SubtractedPole> = Vec::new();
        let mut analytic = Complex64::new(0.0, 0.0);
        if host(piece) {
            let seed_s = if mirrored { -seed } else { seed };
            if seed_s > piece.lo - 0.3 * w && seed_s < piece.hi + 0.3 * w {
                if let Some(s_p) = newton_pole(&point, omega0, seed_s, w) {
                    let dist = s_p.im.abs();
                    if dist < REGULARIZE_DIST * w && s_p.re > piece.lo && s_p.re < piece.hi {
                        let om_p = point(s_p);
                        let k_p = k_region(model, region, om_p);
                        // residue of g(s)·Ω'(s)/(Ω(s)−Ω₀) at the simple zero
                        // of the denominator: the Ω' factors cancel
                        let r = (-I * (om_p * t - k_p * x)).exp();
                        let h = 1e-6 * w;
                        let dom = (point(s_p + h) - point(s_p - h)) / (2.0 * h);
                        let pinned = if dist <= settings.pv_window * w {
                            analytic += on_path_pole_integral(r, s_p.re, piece.lo, piece.hi, dom);
                            pv_note = true;
                            Complex64::new(s_p.re, 0.0)
                        } else {
                            analytic += off_path_pole_integral(r, s_p, piece.lo, piece.hi);
                            s_p
                        };
                        regs.push(SubtractedPole::build(
                            &numerator,
                            &denominator,
                            pinned,
                            r,
                            w,
                        ));
                    }
                }
            }
        }

        let raw_mag = |s: Complex64| -> Complex64 {
            let om = point(s);
            let k = k_region(model, region, om);
            (-I * (om * t - k * x)).exp() * d_point(s.re) / (om - omega0)
        };
        let integrand = |s: f64| -> Complex64 {
            let sc = Complex64::new(s, 0.0);
            regularized_value(&raw_mag, &regs, sc)
        };

        let mut pts = vec![piece.lo, piece.hi];
        for &q in piece.interior.iter() {
            if q > piece.lo && q < piece.hi {
                pts.push(q);
            }
        }
        for reg in regs.iter() {
            if reg.pole.re > piece.lo && reg.pole.re < piece.hi {
                pts.push(reg.pole.re);
            }
        }
        let pts = dedup_ascending(pts, piece.hi - piece.lo);
        let (val, err) = quad::adaptive(
            &integrand,
            &pts,
            settings.rel_tol * 0.25,
            settings.abs_tol / pref_norm * 0.25,
            settings.max_subdivisions,
        )?;
        psi += pref * (val + analytic);
        est += err * pref_norm;
    }
    // truncated tails fall off like e^{-IM_PHI_DROP}
    est += 4.0 * source.amplitude.norm() * (-IM_PHI_DROP).exp();

    let front = front_passed(model, omega0, x, t)?;
    if front && include_pole_circle {
        let crossing = match kind {
            WaveKind::Evanescent => inner.copysign(omega0),
            WaveKind::Propagating => omega_s.copysign(omega0),
        };
        let mut radius = (0.1 * (omega0 - crossing).abs()).min(0.01 * omega0.abs());
        let margin = match kind {
            WaveKind::Evanescent => m_rest - omega0.abs(),
            WaveKind::Propagating => omega0.abs() - m_rest,
        };
        radius = radius.min(0.5 * margin);
        let region = match (kind, omega0 >= 0.0) {
            (WaveKind::Evanescent, _) => KRegion::UpperSheet,
            (WaveKind::Propagating, true) => KRegion::GluedRight,
            (WaveKind::Propagating, false) => KRegion::GluedLeft,
        };
        let circ = |om: Complex64| -> Complex64 {
            let k = k_region(model, region, om);
            (-I * (om * t - k * x)).exp() / (om - omega0)
        };
        let circle = quad::circle_clockwise(&circ, Complex64::new(omega0, 0.0), radius, 64);
        let pole_term = pref * circle;
        psi += pole_term;
        est += 1e-13 * pole_term.norm();
    }

    Ok(OracleResult {
        psi,
        est_error: est,
        method: Method::ContourQuadrature,
        path_metadata: format!(
            "rel stph+/- legs (upper-to-lower sheet switch at each saddle), \
             Omega_s={omega_s:.6e}, W={w:.6e}, pv={pv_note}, pole_circle={}",
            front && include_pole_circle
        ),
    })
}

/// Newton iteration for Ω(s) = Ω₀ in the complex line parameter.
fn newton_pole(
    point: &impl Fn(Complex64) -> Complex64,
    omega0: f64,
    seed: f64,
    scale: f64,
) -> Option<Complex64> {
    let mut s = Complex64::new(seed, 0.0);
    let h = 1e-7 * scale;
    for _ in 0..60 {
        let f = point(s) - omega0;
        if f.norm() < 1e-13 * scale {
            return Some(s);
        }
        let d = (point(s + h) - point(s - h)) / (2.0 * h);
        if d.norm() == 0.0 {
            return None;
        }
        let step = f / d;
        s -= step;
        if !s.re.is_finite() || !s.im.is_finite() {
            return None;
        }
        if step.norm() < 1e-15 * scale {
            return Some(s);
        }
    }
    let f = point(s) - omega0;
    if f.norm() < 1e-10 * scale {
        Some(s)
    } else {
        None
    }
}
