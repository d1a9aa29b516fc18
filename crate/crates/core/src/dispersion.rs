//! Dispersion relations for the two particle models, outgoing-branch
//! wavenumbers with explicit sheet bookkeeping, wave classification, and
//! the front velocity / traversal time of the monochromatic part.
//!
//! Everything works in natural units with ħ = 1: `Ω` below is the kinetic
//! frequency Ω = ω − V, masses are m/ħ and the relativistic rest frequency
//! is mc²/ħ.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sheet of the two-sheeted surface of k(Ω).  The two sheets carry opposite
/// signs of the root and are glued along the branch cuts; values on the
/// real axis are the limits from above (`Upper`) or their negatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    Propagating,
    Evanescent,
}

/// Medium parameters.  The cut of k(Ω) lies on Ω ∈ (0, ∞) for the
/// non-relativistic model and on |Ω| ≥ mc² for the relativistic one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DispersionModel {
    NonRelativistic {
        mass: f64,
        potential: f64,
    },
    Relativistic {
        mass: f64,
        potential: f64,
        light_speed: f64,
    },
}

impl DispersionModel {
    pub fn nonrelativistic(mass: f64, potential: f64) -> Result<Self> {
        if !(mass > 0.0) || !potential.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-relativistic model needs mass > 0, got m = {mass}, V = {potential}"
            )));
        }
        Ok(DispersionModel::NonRelativistic { mass, potential })
    }

    pub fn relativistic(mass: f64, potential: f64, light_speed: f64) -> Result<Self> {
        if !(mass > 0.0) || !(light_speed > 0.0) || !potential.is_finite() {
            return Err(Error::InvalidInput(format!(
                "relativistic model needs mass > 0 and c > 0, got m = {mass}, c = {light_speed}"
            )));
        }
        Ok(DispersionModel::Relativistic {
            mass,
            potential,
            light_speed,
        })
    }

    pub fn mass(&self) -> f64 {
        match *self {
            DispersionModel::NonRelativistic { mass, .. } => mass,
            DispersionModel::Relativistic { mass, .. } => mass,
        }
    }

    pub fn potential(&self) -> f64 {
        match *self {
            DispersionModel::NonRelativistic { potential, .. } => potential,
            DispersionModel::Relativistic { potential, .. } => potential,
        }
    }

    pub fn light_speed(&self) -> Option<f64> {
        match *self {
            DispersionModel::NonRelativistic { .. } => None,
            DispersionModel::Relativistic { light_speed, .. } => Some(light_speed),
        }
    }

    pub fn is_relativistic(&self) -> bool {
        matches!(self, DispersionModel::Relativistic { .. })
    }

    /// Rest frequency mc²/ħ; zero for the non-relativistic model, where the
    /// single branch point sits at Ω = 0.
    pub fn rest_frequency(&self) -> f64 {
        match *self {
            DispersionModel::NonRelativistic { .. } => 0.0,
            DispersionModel::Relativistic {
                mass, light_speed, ..
            } => mass * light_speed * light_speed,
        }
    }

    /// Kinetic frequency Ω = ω − V (ħ = 1).
    pub fn kinetic_frequency(&self, omega: f64) -> f64 {
        omega - self.potential()
    }

    /// True if the real frequency lies on a branch cut of k(Ω).
    pub fn on_cut(&self, omega_k: f64) -> bool {
        match *self {
            DispersionModel::NonRelativistic { .. } => omega_k >= 0.0,
            DispersionModel::Relativistic { .. } => omega_k.abs() >= self.rest_frequency(),
        }
    }

    /// Wavenumber k(Ω) for complex Ω with explicit sheet selection.
    ///
    /// With `sheet = None`, points on a branch cut are rejected; otherwise
    /// the on-cut value is the boundary value from above for `Upper` and
    /// its negative for `Lower`.  For real Ω the `Upper` value is the
    /// outgoing root: k·sign(Ω) > 0 in the propagating range and Im k > 0
    /// in the evanescent range.
    pub fn wavenumber(&self, omega_k: Complex64, sheet: Option<Sheet>) -> Result<Complex64> {
        let on_axis = omega_k.im == 0.0;
        let sheet = match sheet {
            Some(s) => s,
            None => {
                if on_axis && self.on_cut(omega_k.re) {
                    return Err(Error::OnBranchCut { omega: omega_k.re });
                }
                Sheet::Upper
            }
        };
        let upper = if on_axis {
            self.wavenumber_upper_axis(omega_k.re)
        } else {
            self.wavenumber_upper(omega_k)
        };
        Ok(match sheet {
            Sheet::Upper => upper,
            Sheet::Lower => -upper,
        })
    }

    /// Upper-sheet wavenumber off the real axis.
    fn wavenumber_upper(&self, omega_k: Complex64) -> Complex64 {
        match *self {
            DispersionModel::NonRelativistic { mass, .. } => {
                // cut along Ω ∈ (0, ∞): k = i sqrt(-2mΩ), principal root
                Complex64::new(0.0, 1.0) * (-2.0 * mass * omega_k).sqrt()
            }
            DispersionModel::Relativistic { light_speed, .. } => {
                let m_rest = self.rest_frequency();
                Complex64::new(0.0, 1.0 / light_speed)
                    * (m_rest - omega_k).sqrt()
                    * (m_rest + omega_k).sqrt()
            }
        }
    }

    /// Boundary value from above (Im Ω → 0⁺) on the real axis; analytic
    /// continuation of the upper sheet, outgoing in the propagating range.
    fn wavenumber_upper_axis(&self, omega_k: f64) -> Complex64 {
        match *self {
            DispersionModel::NonRelativistic { mass, .. } => {
                if omega_k >= 0.0 {
                    Complex64::new((2.0 * mass * omega_k).sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, (-2.0 * mass * omega_k).sqrt())
                }
            }
            DispersionModel::Relativistic { light_speed, .. } => {
                let m_rest = self.rest_frequency();
                if omega_k.abs() <= m_rest {
                    Complex64::new(
                        0.0,
                        (m_rest * m_rest - omega_k * omega_k).sqrt() / light_speed,
                    )
                } else {
                    let k = (omega_k * omega_k - m_rest * m_rest).sqrt() / light_speed;
                    Complex64::new(k.copysign(omega_k), 0.0)
                }
            }
        }
    }

    /// Outgoing wavenumber at a real frequency (upper-sheet boundary value).
    pub fn outgoing_wavenumber(&self, omega_k: f64) -> Complex64 {
        self.wavenumber_upper_axis(omega_k)
    }

    /// Propagating or evanescent at a real kinetic frequency.
    pub fn classify(&self, omega_k: f64) -> Result<WaveKind> {
        match *self {
            DispersionModel::NonRelativistic { .. } => {
                if omega_k == 0.0 {
                    Err(Error::Threshold { omega: omega_k })
                } else if omega_k > 0.0 {
                    Ok(WaveKind::Propagating)
                } else {
                    Ok(WaveKind::Evanescent)
                }
            }
            DispersionModel::Relativistic { .. } => {
                let m_rest = self.rest_frequency();
                if omega_k.abs() == m_rest {
                    Err(Error::Threshold { omega: omega_k })
                } else if omega_k.abs() > m_rest {
                    Ok(WaveKind::Propagating)
                } else {
                    Ok(WaveKind::Evanescent)
                }
            }
        }
    }

    /// Front velocity of the monochromatic part at carrier frequency Ω₀.
    ///
    /// Non-relativistic: v = sqrt(2|Ω₀|/m).  Relativistic:
    /// v = c sqrt(1 − (mc²/Ω₀)²) when propagating and
    /// v = c sqrt(1 − (Ω₀/mc²)²) when evanescent; 0 < v < c in both ranges.
    pub fn front_velocity(&self, omega0_k: f64) -> Result<f64> {
        match *self {
            DispersionModel::NonRelativistic { mass, .. } => {
                if omega0_k == 0.0 {
                    return Err(Error::Threshold { omega: omega0_k });
                }
                Ok((2.0 * omega0_k.abs() / mass).sqrt())
            }
            DispersionModel::Relativistic { light_speed, .. } => {
                if omega0_k == 0.0 {
                    return Err(Error::Threshold { omega: omega0_k });
                }
                let m_rest = self.rest_frequency();
                let a = omega0_k.abs();
                if a == m_rest {
                    return Err(Error::Threshold { omega: omega0_k });
                }
                let r = if a > m_rest { m_rest / a } else { a / m_rest };
                Ok(light_speed * (1.0 - r * r).sqrt())
            }
        }
    }

    /// Traversal time of the monochromatic front over a distance x.
    pub fn traversal_time(&self, omega0_k: f64, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        if x < 0.0 {
            return Err(Error::Domain(format!(
                "traversal distance must be >= 0, got {x}"
            )));
        }
        Ok(x / self.front_velocity(omega0_k)?)
    }

    /// Group velocity dω/dk; only defined in the propagating range, where
    /// it coincides with the front velocity.
    pub fn group_velocity(&self, omega0_k: f64) -> Result<f64> {
        match self.classify(omega0_k)? {
            WaveKind::Evanescent => Err(Error::Domain(format!(
                "group velocity undefined in the evanescent range (Ω₀ = {omega0_k})"
            ))),
            WaveKind::Propagating => match *self {
                DispersionModel::NonRelativistic { mass, .. } => {
                    let k = self.outgoing_wavenumber(omega0_k).re;
                    Ok(k / mass)
                }
                DispersionModel::Relativistic { light_speed, .. } => {
                    let k = self.outgoing_wavenumber(omega0_k).re;
                    Ok(light_speed * light_speed * k / omega0_k)
                }
            },
        }
    }

    /// Residual of the dispersion relation for a (Ω, k) pair, relative to
    /// the frequency scale; zero for consistent pairs on either sheet.
    pub fn dispersion_residual(&self, omega_k: Complex64, k: Complex64) -> f64 {
        match *self {
            DispersionModel::NonRelativistic { mass, .. } => {
                let lhs = k * k / (2.0 * mass);
                (lhs - omega_k).norm() / omega_k.norm().max(1e-300)
            }
            DispersionModel::Relativistic { light_speed, .. } => {
                let m_rest = self.rest_frequency();
                let lhs = omega_k * omega_k;
                let rhs = Complex64::new(m_rest * m_rest, 0.0) + light_speed * light_speed * k * k;
                (lhs - rhs).norm() / lhs.norm().max(1e-300)
            }
        }
    }
}

/// Source switched on at t = 0 with boundary amplitude A e^{-iω₀t}; a band
/// half-width restricts its spectrum to [ω₀ − Δω, ω₀ + Δω].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub amplitude: Complex64,
    pub carrier: f64,
    pub band: Option<f64>,
}

impl SourceSpec {
    pub fn sharp(amplitude: Complex64, carrier: f64) -> Result<Self> {
        if amplitude.norm() == 0.0 {
            return Err(Error::InvalidInput(
                "source amplitude must be nonzero".into(),
            ));
        }
        Ok(SourceSpec {
            amplitude,
            carrier,
            band: None,
        })
    }

    pub fn band_limited(amplitude: Complex64, carrier: f64, half_width: f64) -> Result<Self> {
        if amplitude.norm() == 0.0 {
            return Err(Error::InvalidInput(
                "source amplitude must be nonzero".into(),
            ));
        }
        if !(half_width > 0.0) {
            return Err(Error::InvalidInput(format!(
                "band half-width must be positive, got {half_width}"
            )));
        }
        Ok(SourceSpec {
            amplitude,
            carrier,
            band: Some(half_width),
        })
    }

    /// Kinetic carrier frequency Ω₀ = ω₀ − V.
    pub fn carrier_kinetic(&self, model: &DispersionModel) -> f64 {
        model.kinetic_frequency(self.carrier)
    }

    /// Checks the band condition Δω < |Ω₀| against a concrete medium.
    pub fn validate_for(&self, model: &DispersionModel) -> Result<()> {
        if let Some(dw) = self.band {
            let omega0 = self.carrier_kinetic(model);
            if dw >= omega0.abs() {
                return Err(Error::InvalidInput(format!(
                    "band half-width {dw} must be below |Ω₀| = {}",
                    omega0.abs()
                )));
            }
        }
        Ok(())
    }
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
    fn kinetic_frequency_examples() {
        let m = DispersionModel::nonrelativistic(1.0, 0.0).unwrap();
        assert_eq!(m.kinetic_frequency(3.0), 3.0);
        let m = DispersionModel::nonrelativistic(1.0, 5.0).unwrap();
        assert_eq!(m.kinetic_frequency(3.0), -2.0);
        assert_eq!(m.kinetic_frequency(5.0), 0.0);
    }

    #[test]
    fn wavenumber_examples() {
        let k = nonrel()
            .wavenumber(Complex64::new(2.0, 0.0), Some(Sheet::Upper))
            .unwrap();
        assert!((k - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        let k = nonrel()
            .wavenumber(Complex64::new(-2.0, 0.0), None)
            .unwrap();
        assert!((k - Complex64::new(0.0, 2.0)).norm() < 1e-14);
        let k = rel().wavenumber(Complex64::new(0.5, 0.0), None).unwrap();
        assert!((k - Complex64::new(0.0, 0.75f64.sqrt())).norm() < 1e-14);
    }

    #[test]
    fn wavenumber_on_cut_needs_sheet() {
        assert!(matches!(
            nonrel().wavenumber(Complex64::new(2.0, 0.0), None),
            Err(Error::OnBranchCut { .. })
        ));
        assert!(matches!(
            rel().wavenumber(Complex64::new(-1.5, 0.0), None),
            Err(Error::OnBranchCut { .. })
        ));
        // evanescent ranges are off-cut
        assert!(rel().wavenumber(Complex64::new(0.99, 0.0), None).is_ok());
    }

    #[test]
    fn outgoing_branch_rule() {
        // propagating: k real with k·sign(Ω) > 0; evanescent: Im k > 0
        for om in [0.5, 2.0, 10.0] {
            let k = nonrel().outgoing_wavenumber(om);
            assert!(k.im == 0.0 && k.re > 0.0);
        }
        for om in [-0.5, -2.0] {
            let k = nonrel().outgoing_wavenumber(om);
            assert!(k.re == 0.0 && k.im > 0.0);
        }
        for om in [1.5, 3.0, -1.5, -3.0f64] {
            let k = rel().outgoing_wavenumber(om);
            assert!(k.im == 0.0 && k.re * om.signum() > 0.0);
        }
        for om in [0.5, -0.5, 0.0] {
            let k = rel().outgoing_wavenumber(om);
            assert!(k.re == 0.0 && k.im > 0.0);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(nonrel().classify(-2.0).unwrap(), WaveKind::Evanescent);
        assert_eq!(rel().classify(1.25).unwrap(), WaveKind::Propagating);
        assert_eq!(rel().classify(0.6).unwrap(), WaveKind::Evanescent);
        assert_eq!(rel().classify(-0.6).unwrap(), WaveKind::Evanescent);
        assert!(matches!(
            nonrel().classify(0.0),
            Err(Error::Threshold { .. })
        ));
        assert!(matches!(rel().classify(1.0), Err(Error::Threshold { .. })));
    }

    #[test]
    fn front_velocity_examples() {
        assert!((nonrel().front_velocity(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((nonrel().front_velocity(-2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((rel().front_velocity(0.6).unwrap() - 0.8).abs() < 1e-15);
        assert!((rel().front_velocity(1.25).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(
            rel().front_velocity(1.0),
            Err(Error::Threshold { .. })
        ));
    }

    #[test]
    fn traversal_time_examples() {
        assert!((nonrel().traversal_time(-2.0, 4.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(nonrel().traversal_time(-2.0, 0.0).unwrap(), 0.0);
        assert!((rel().traversal_time(0.6, 0.8).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn group_velocity_matches_front_velocity_when_propagating() {
        assert!((nonrel().group_velocity(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((rel().group_velocity(1.25).unwrap() - 0.6).abs() < 1e-15);
        assert!(nonrel().group_velocity(-1.0).is_err());
        // limit Ω → 0⁺
        assert!(nonrel().group_velocity(1e-12).unwrap() < 2e-6);
    }

    #[test]
    fn sheet_conjugation_relation() {
        // k(Ω*, Lower) = conj(k(Ω, Upper))
        for model in [nonrel(), rel()] {
            for om in [
                Complex64::new(0.7, 0.4),
                Complex64::new(-1.3, 2.0),
                Complex64::new(2.4, -0.8),
                Complex64::new(-0.2, -1.1),
            ] {
                let up = model.wavenumber(om, Some(Sheet::Upper)).unwrap();
                let lo = model.wavenumber(om.conj(), Some(Sheet::Lower)).unwrap();
                assert!((lo - up.conj()).norm() < 1e-14 * up.norm());
            }
        }
    }

    #[test]
    fn source_band_condition() {
        let m = DispersionModel::nonrelativistic(1.0, 5.0).unwrap();
        let s = SourceSpec::band_limited(Complex64::new(1.0, 0.0), 3.0, 0.5).unwrap();
        s.validate_for(&m).unwrap(); // Ω₀ = -2, Δω = 0.5
        let s = SourceSpec::band_limited(Complex64::new(1.0, 0.0), 3.0, 2.5).unwrap();
        assert!(s.validate_for(&m).is_err());
        assert!(SourceSpec::sharp(Complex64::new(0.0, 0.0), 1.0).is_err());
    }
}
