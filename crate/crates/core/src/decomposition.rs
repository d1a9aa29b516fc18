//! Analytic decomposition of the field into the monochromatic pole part and
//! the forerunner saddle parts: Gauss approximation with its validity
//! parameter, near-front jump limits, phase-matching residuals, and the
//! three-segment formulas for the band-limited source.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionModel, SourceSpec, WaveKind};
use crate::error::{Error, Result};
use crate::phase::{self, Branch};

const I: Complex64 = Complex64::new(0.0, 1.0);
const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// Analytic decomposition of ψ(x, t) at one observation point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WaveDecomposition {
    /// Monochromatic pole contribution (zero before the front arrives).
    pub psi_pole: Complex64,
    /// Gauss-approximation saddle contribution (particle branch).
    pub psi_saddle_plus: Complex64,
    /// Antiparticle-branch saddle contribution; zero for the
    /// non-relativistic model.
    pub psi_saddle_minus: Complex64,
    /// Sum of the three parts.
    pub psi_total: Complex64,
    /// Gauss validity parameter φ_s''(Ω_s − Ω₀)² of the dominant branch.
    pub gauss_validity: f64,
    /// Inside the near-front window (validity < 1), where the Gauss form
    /// gives way to the jump analysis.
    pub near_front: bool,
    /// Whether the monochromatic front has passed: v_m t > x.
    pub front_active: bool,
}

/// Frame of dimensionless quantities used by the near-front and
/// band-limited analysis of the evanescent regime.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SaddleFrame {
    /// u₀ = (Ω₀ − Ω_s)/Ω_s.
    pub u0: f64,
    /// w₀ = (|Ω₀| − Ω_s)/Ω_s = (v_m²t² − x²)/x².
    pub w0: f64,
    /// α = Ω_s t.
    pub alpha: f64,
    /// Reduced de Broglie length Δx = 1/(m v_m) at the front velocity.
    pub de_broglie: f64,
}

/// Band-limited contour segments around Ω = −Ω_s (evanescent regime).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BandSegments {
    /// Segment along the lower-edge constant-Im-φ line.
    pub psi_minus_seg: Complex64,
    /// Segment along the stationary-phase line between the edges.
    pub psi_stph_seg: Complex64,
    /// Segment along the upper-edge constant-Im-φ line.
    pub psi_plus_seg: Complex64,
    /// u_± = −w₀ ± Δω/Ω_s.
    pub u_plus: f64,
    pub u_minus: f64,
    pub w0: f64,
    pub alpha: f64,
    /// Which middle-segment formula was selected: the sinh form away from
    /// the front or the arctan form in the narrow window |w₀| ≲ Δω/|Ω₀|.
    pub mid_form: BandMidForm,
    /// The non-selected middle-segment value, reported whenever |w₀| lies
    /// within a factor-3 band of the switch point, where the two
    /// asymptotic forms hand over.
    pub psi_stph_alt: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandMidForm {
    Sinh,
    Arctan,
}

/// Bare monochromatic wave A e^{-i(V + Ω₀)t} e^{i k(Ω₀) x} without the
/// front step; the limit of the pole contribution from behind the front.
pub fn monochromatic_wave(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Complex64 {
    let omega0 = source.carrier_kinetic(model);
    let k0 = model.outgoing_wavenumber(omega0);
    source.amplitude * (-I * (model.potential() + omega0) * t).exp() * (I * k0 * x).exp()
}

/// Monochromatic pole contribution
/// ψ_p = A e^{-i(V + Ω₀)t} e^{i k(Ω₀) x} Θ(v_m t − x); identical form for
/// the sharp and band-limited sources and for both models.  Exactly zero
/// for v_m t <= x.
pub fn pole_contribution(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    if !(x >= 0.0) || !(t > 0.0) {
        return Err(Error::Domain(format!(
            "pole contribution needs x >= 0 and t > 0, got x = {x}, t = {t}"
        )));
    }
    let omega0 = source.carrier_kinetic(model);
    let vm = model.front_velocity(omega0)?;
    if vm * t <= x {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(monochromatic_wave(model, source, x, t))
}

/// Gauss validity parameter φ_s''(Ω_s ∓ Ω₀)² for the requested branch:
/// the squared pole–saddle distance in units of the saddle width.
pub fn gauss_validity(
    model: &DispersionModel,
    omega0_k: f64,
    x: f64,
    t: f64,
    branch: Branch,
) -> Result<f64> {
    let sad = phase::saddle(model, x, t, branch)?;
    Ok((sad.phi_pp * (sad.omega_s - omega0_k).powi(2)).abs())
}

/// Saddle contribution in Gauss approximation, one branch:
///
/// ψ_s = (iA/2π) e^{-i(Vt + φ_s)} sqrt(-2πi/φ_s'') / (Ω_s − Ω₀),
///
/// with the signed curvature φ_s'' selecting the principal root that
/// matches the left-to-right traversal of the descent line.  Relativistic:
/// exact zero outside the light cone.
pub fn saddle_gauss(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    branch: Branch,
) -> Result<Complex64> {
    if model.is_relativistic() {
        let c = model.light_speed().unwrap();
        if x >= c * t {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    let omega0 = source.carrier_kinetic(model);
    let sad = phase::saddle(model, x, t, branch)?;
    let root = (-TAU * I / sad.phi_pp).sqrt();
    Ok(
        I * source.amplitude / TAU * (-I * (model.potential() * t + sad.phi_s)).exp() * root
            / (sad.omega_s - omega0),
    )
}

/// Sum of the Gauss saddle contributions over the branches of the model.
pub fn saddle_gauss_total(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    let mut total = saddle_gauss(model, source, x, t, Branch::Plus)?;
    if model.is_relativistic() {
        total += saddle_gauss(model, source, x, t, Branch::Minus)?;
    }
    Ok(total)
}

/// Dimensionless frame (u₀, w₀, α, Δx) at the observation point.
pub fn saddle_frame(model: &DispersionModel, omega0_k: f64, x: f64, t: f64) -> Result<SaddleFrame> {
    let sad = phase::saddle(model, x, t, Branch::Plus)?;
    let vm = model.front_velocity(omega0_k)?;
    Ok(SaddleFrame {
        u0: (omega0_k - sad.omega_s) / sad.omega_s,
        w0: (omega0_k.abs() - sad.omega_s) / sad.omega_s,
        alpha: sad.omega_s * t,
        de_broglie: 1.0 / (model.mass() * vm),
    })
}

/// Limit of the saddle contribution in the near-front window
/// |v_m t − x| ≪ x, where the Gauss approximation fails:
///
/// propagating: ψ_s → −(A/2) e^{-i(Vt − m x²/2t)} sign(v_m t − x),
/// evanescent: the same times e^{-m x²/t};
/// relativistic phases replace m x²/2t by −mc²ϑ.
///
/// Errors with `Regime` outside the window (gauss_validity >= 1).
pub fn near_front_limit(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    let omega0 = source.carrier_kinetic(model);
    let branch = dominant_branch(model, omega0);
    let validity = gauss_validity(model, omega0, x, t, branch)?;
    if validity >= 1.0 {
        return Err(Error::Regime(format!(
            "near-front limit requested outside the window (validity = {validity:.3})"
        )));
    }
    Ok(near_front_jump_term(model, source, x, t)? * front_sign(model, omega0, x, t)?)
}

fn front_sign(model: &DispersionModel, omega0: f64, x: f64, t: f64) -> Result<f64> {
    let vm = model.front_velocity(omega0)?;
    Ok(if vm * t > x {
        1.0
    } else if vm * t < x {
        -1.0
    } else {
        0.0
    })
}

/// The −(A/2) e^{-i(phase)} (× evanescent suppression) factor multiplying
/// sign(v_m t − x) in the near-front limit.
pub fn near_front_jump_term(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    let omega0 = source.carrier_kinetic(model);
    let kind = model.classify(omega0)?;
    let mass = model.mass();
    let phase_term = match model {
        DispersionModel::NonRelativistic { potential, .. } => {
            (-I * (potential * t - mass * x * x / (2.0 * t))).exp()
        }
        DispersionModel::Relativistic {
            potential,
            light_speed: c,
            ..
        } => {
            if x >= c * t {
                return Err(Error::CausalRegion { x, ct: c * t });
            }
            let theta = (t * t - x * x / (c * c)).sqrt();
            let sgn = if omega0 >= 0.0 { 1.0 } else { -1.0 };
            (-I * (potential * t + sgn * model.rest_frequency() * theta)).exp()
        }
    };
    let suppression = match kind {
        WaveKind::Propagating => 1.0,
        WaveKind::Evanescent => (-mass * x * x / t).exp(),
    };
    Ok(-0.5 * source.amplitude * phase_term * suppression)
}

fn dominant_branch(model: &DispersionModel, omega0: f64) -> Branch {
    if model.is_relativistic() && omega0 < 0.0 {
        Branch::Minus
    } else {
        Branch::Plus
    }
}

/// Residual of the condition that the real phases of ψ_p and ψ_s coincide
/// on the front x = v_m t; its root in x/t re-derives the front velocity.
/// Returns the raw residual (zero at the front), no errors.
pub fn phase_matching_residual(model: &DispersionModel, omega0_k: f64, x: f64, t: f64) -> f64 {
    let a = omega0_k.abs();
    let k0 = model.outgoing_wavenumber(omega0_k);
    match *model {
        DispersionModel::NonRelativistic { mass, .. } => {
            let kin = mass * x * x / (2.0 * t);
            if omega0_k > 0.0 {
                omega0_k * t - k0.re.abs() * x + kin
            } else {
                -a * t + kin
            }
        }
        DispersionModel::Relativistic {
            mass,
            light_speed: c,
            ..
        } => {
            let disc = c * t * c * t - x * x;
            let theta_term = if disc > 0.0 {
                mass * c * disc.sqrt()
            } else {
                0.0
            };
            if a > model.rest_frequency() {
                a * t - k0.re.abs() * x - theta_term
            } else {
                a * t - theta_term
            }
        }
    }
}

/// Full analytic decomposition at one point (sharp source).
///
/// The total is ψ_p + Gauss saddle terms.  Besides the usual 1/validity
/// error of the Gauss approximation, behind an evanescent front the exact
/// saddle integral also carries a pole-adjacent remainder of order
/// |A| e^{-2α} (α = Ω_s t), the same scale as the near-front jump; the
/// decomposition is accurate once both 1/validity and e^{-2α} are small.
pub fn decompose(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<WaveDecomposition> {
    let omega0 = source.carrier_kinetic(model);
    let psi_pole = pole_contribution(model, source, x, t)?;
    let psi_saddle_plus = saddle_gauss(model, source, x, t, Branch::Plus)?;
    let psi_saddle_minus = if model.is_relativistic() {
        saddle_gauss(model, source, x, t, Branch::Minus)?
    } else {
        Complex64::new(0.0, 0.0)
    };
    let branch = dominant_branch(model, omega0);
    let gauss_validity = match model {
        DispersionModel::NonRelativistic { .. } => {
            gauss_validity(model, omega0, x, t, Branch::Plus)?
        }
        DispersionModel::Relativistic { light_speed: c, .. } => {
            if x >= c * t {
                f64::INFINITY
            } else {
                gauss_validity(model, omega0, x, t, branch)?
            }
        }
    };
    let vm = model.front_velocity(omega0)?;
    Ok(WaveDecomposition {
        psi_pole,
        psi_saddle_plus,
        psi_saddle_minus,
        psi_total: psi_pole + psi_saddle_plus + psi_saddle_minus,
        gauss_validity,
        near_front: gauss_validity < 1.0,
        front_active: vm * t > x,
    })
}

/// Default thresholds deciding when the band condition 1/τ ≪ Δω ≪ |Ω₀| is
/// grossly violated.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BandRegimeThresholds {
    /// Required Δω · τ (onset fast compared to the traversal time).
    pub min_delta_omega_tau: f64,
    /// Allowed Δω / |Ω₀| (spectrum well inside the evanescent range).
    pub max_delta_omega_ratio: f64,
}

impl Default for BandRegimeThresholds {
    fn default() -> Self {
        BandRegimeThresholds {
            min_delta_omega_tau: 1.0,
            max_delta_omega_ratio: 0.5,
        }
    }
}

/// Three-segment linearized-contour formulas for the band-limited
/// evanescent source near Ω = −Ω_s:
///
/// ψ_± = (1+i)A/2π · 1/(Δω t) · E S e^{(−i/2+1)Ω_s t u_±} sin(Ω_s t u_±/2),
/// ψ₂  = (1+i)A/2π · 1/((Ω_s−|Ω₀|)t) · E S e^{(Ω_s−|Ω₀|)t} sinh(Δω t)
///        (|w₀| ≫ Δω/|Ω₀|), or
/// ψ_{s,2} = A/π · E S e^{Δω t} arctan(Δω/(Ω_s−|Ω₀|))  (|w₀| ≪ Δω/|Ω₀|),
///
/// with E = e^{-i(Vt − m x²/2t)} and the common suppression S = e^{-m x²/t}.
pub fn band_segments(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<BandSegments> {
    band_segments_with(model, source, x, t, BandRegimeThresholds::default())
}

pub fn band_segments_with(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    thresholds: BandRegimeThresholds,
) -> Result<BandSegments> {
    let mass = match model {
        DispersionModel::NonRelativistic { mass, .. } => *mass,
        DispersionModel::Relativistic { .. } => {
            return Err(Error::Regime(
                "band-limited decomposition covers the non-relativistic model only".into(),
            ))
        }
    };
    let dw = source
        .band
        .ok_or_else(|| Error::InvalidInput("band segments need a band-limited source".into()))?;
    source.validate_for(model)?;
    let omega0 = source.carrier_kinetic(model);
    if model.classify(omega0)? != WaveKind::Evanescent {
        return Err(Error::Regime(
            "band segments apply to the evanescent regime (Ω₀ < 0)".into(),
        ));
    }
    if !(x > 0.0) || !(t > 0.0) {
        return Err(Error::Domain(format!(
            "band segments need x > 0, t > 0, got x = {x}, t = {t}"
        )));
    }
    let tau = model.traversal_time(omega0, x)?;
    if dw * tau < thresholds.min_delta_omega_tau
        || dw > thresholds.max_delta_omega_ratio * omega0.abs()
    {
        return Err(Error::Regime(format!(
            "band condition 1/τ ≪ Δω ≪ |Ω₀| grossly violated: Δω·τ = {:.3}, Δω/|Ω₀| = {:.3}",
            dw * tau,
            dw / omega0.abs()
        )));
    }

    let frame = saddle_frame(model, omega0, x, t)?;
    let omega_s = frame.alpha / t;
    let u_plus = -frame.w0 + dw / omega_s;
    let u_minus = -frame.w0 - dw / omega_s;
    let envelope =
        (-I * (model.potential() * t - mass * x * x / (2.0 * t))).exp() * (-mass * x * x / t).exp();
    let a = source.amplitude;
    let edge = |u: f64| -> Complex64 {
        (1.0 + I) * a / TAU / (dw * t)
            * envelope
            * (Complex64::new(1.0, -0.5) * omega_s * t * u).exp()
            * (0.5 * omega_s * t * u).sin()
    };
    let psi_minus_seg = edge(u_minus);
    let psi_plus_seg = edge(u_plus);

    let switch = dw / omega0.abs();
    let mid_form = if frame.w0.abs() >= switch {
        BandMidForm::Sinh
    } else {
        BandMidForm::Arctan
    };
    let gap = (omega_s - omega0.abs()) * t; // = −w₀ α
    let sinh_form = (1.0 + I) * a / TAU / gap * envelope * gap.exp() * (dw * t).sinh();
    let arctan_form = a / PI * envelope * (dw * t).exp() * (dw / (omega_s - omega0.abs())).atan();
    let (psi_stph_seg, other) = match mid_form {
        BandMidForm::Sinh => (sinh_form, arctan_form),
        BandMidForm::Arctan => (arctan_form, sinh_form),
    };
    // near the handover both asymptotic forms are reported
    let near_switch = frame.w0.abs() >= switch / 3.0 && frame.w0.abs() <= 3.0 * switch;
    Ok(BandSegments {
        psi_minus_seg,
        psi_stph_seg,
        psi_plus_seg,
        u_plus,
        u_minus,
        w0: frame.w0,
        alpha: frame.alpha,
        mid_form,
        psi_stph_alt: near_switch.then_some(other),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailRegime {
    ShortTime,
    LongTime,
}

/// Governing decay exponent of the band-limited forerunner away from the
/// traversal time: −½ Ω_s t for t ≪ τ and −½ (Ω_+²/Ω_s) t ∝ −t³ for t ≫ τ,
/// with Ω_+ the least-attenuated band edge.  Errors in the window around τ.
pub fn band_tail_estimate(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> Result<(TailRegime, f64)> {
    let dw = source.band.ok_or_else(|| {
        Error::InvalidInput("band tail estimate needs a band-limited source".into())
    })?;
    let omega0 = source.carrier_kinetic(model);
    if model.classify(omega0)? != WaveKind::Evanescent {
        return Err(Error::Regime(
            "band tails apply to the evanescent regime".into(),
        ));
    }
    let tau = model.traversal_time(omega0, x)?;
    let sad = phase::saddle(model, x, t, Branch::Plus)?;
    if t <= tau / 3.0 {
        Ok((TailRegime::ShortTime, -0.5 * sad.omega_s * t))
    } else if t >= 3.0 * tau {
        let edge = omega0.abs() - dw;
        Ok((TailRegime::LongTime, -0.5 * edge * edge / sad.omega_s * t))
    } else {
        Err(Error::Regime(format!(
            "t = {t} is inside the crossover window around τ = {tau}"
        )))
    }
}
