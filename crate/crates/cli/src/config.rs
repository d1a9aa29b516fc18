//! Run configuration: JSON schema, validation, and the conversion into the
//! core's natural units (ħ = 1).  The schema is documented in the README;
//! all physical quantities follow the convention stated there (the CLI
//! accepts an explicit ħ and rescales on input).

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use evanfront::dispersion::{DispersionModel, SourceSpec};
use evanfront::oracle::QuadratureSettings;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub source: SourceConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub method: Method,
    #[serde(default)]
    pub settings: SettingsConfig,
    #[serde(default)]
    pub front: Option<FrontSweepConfig>,
    #[serde(default)]
    pub phasemap: Option<PhasemapConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub mass: f64,
    pub potential: f64,
    #[serde(default)]
    pub light_speed: Option<f64>,
    /// Planck constant of the input unit system; the core works with ħ = 1
    /// and the CLI rescales m → m/ħ, V → V/ħ on input.
    #[serde(default = "one")]
    pub hbar: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    NonRelativistic,
    Relativistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    /// Complex amplitude as [re, im].
    pub amplitude: (f64, f64),
    /// Carrier angular frequency ω₀ (not the kinetic Ω₀).
    pub carrier: f64,
    /// Half-width Δω of the band-limited source; absent means sharp onset.
    #[serde(default)]
    pub band_half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    Analytic,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SettingsConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: u32,
    pub pv_window: f64,
}

impl Default for SettingsConfig {
    fn default() -> Self {
        let s = QuadratureSettings::default();
        SettingsConfig {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            max_subdivisions: s.max_subdivisions,
            pv_window: s.pv_window,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontSweepConfig {
    /// Sweep bounds in the kinetic frequency Ω₀ = ω₀ − V/ħ.
    pub omega0_min: f64,
    pub omega0_max: f64,
    pub count: usize,
    #[serde(default)]
    pub log_scale: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhasemapConfig {
    pub x: f64,
    pub t: f64,
    pub omega_r: (f64, f64),
    pub omega_i: (f64, f64),
    pub resolution: (usize, usize),
    #[serde(default = "default_sheets")]
    pub sheets: Vec<String>,
    #[serde(default)]
    pub levels_re: Vec<f64>,
    #[serde(default)]
    pub levels_im: Vec<f64>,
}

fn default_sheets() -> Vec<String> {
    vec!["upper".into()]
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.model.hbar <= 0.0 {
            bail!("model.hbar must be positive");
        }
        match self.model.kind {
            ModelKind::Relativistic if self.model.light_speed.is_none() => {
                bail!("relativistic model needs model.light_speed")
            }
            _ => {}
        }
        if let Some(grid) = &self.grid {
            if grid.x.is_empty() || grid.t.is_empty() {
                bail!("grid.x and grid.t must be nonempty");
            }
        }
        if self.method == Method::Analytic
            && self.model.kind == ModelKind::Relativistic
            && self.source.band_half_width.is_some()
        {
            bail!("the analytic decomposition does not cover the relativistic band-limited source");
        }
        self.core_model()?;
        self.core_source()?;
        Ok(())
    }

    /// Core model in natural units (ħ = 1): m → m/ħ, V → V/ħ.
    pub fn core_model(&self) -> anyhow::Result<DispersionModel> {
        let m = self.model.mass / self.model.hbar;
        let v = self.model.potential / self.model.hbar;
        Ok(match self.model.kind {
            ModelKind::NonRelativistic => DispersionModel::nonrelativistic(m, v)?,
            ModelKind::Relativistic => {
                DispersionModel::relativistic(m, v, self.model.light_speed.unwrap())?
            }
        })
    }

    pub fn core_source(&self) -> anyhow::Result<SourceSpec> {
        let a = Complex64::new(self.source.amplitude.0, self.source.amplitude.1);
        Ok(match self.source.band_half_width {
            None => SourceSpec::sharp(a, self.source.carrier)?,
            Some(dw) => SourceSpec::band_limited(a, self.source.carrier, dw)?,
        })
    }

    pub fn core_settings(&self, tol_override: Option<f64>) -> QuadratureSettings {
        QuadratureSettings {
            rel_tol: tol_override.unwrap_or(self.settings.rel_tol),
            abs_tol: self.settings.abs_tol,
            max_subdivisions: self.settings.max_subdivisions,
            pv_window: self.settings.pv_window,
        }
    }
}
