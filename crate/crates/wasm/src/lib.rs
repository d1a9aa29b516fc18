//! Browser bindings: three interactive views onto the library, exchanged as
//! JSON strings so the JavaScript side stays free of generated classes.
//!
//! Build with `wasm-pack build --target web crates/wasm` and serve the
//! `www/` page next to the generated `pkg/` directory.

// NaN-rejecting parameter guards are written as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_complex::Complex64;
use serde::Deserialize;
use wasm_bindgen::prelude::wasm_bindgen;

use evanfront::decomposition;
use evanfront::dispersion::{DispersionModel, Sheet, SourceSpec};
use evanfront::oracle::{self, QuadratureSettings};
use evanfront::phasemap::{self, Quantity, Window};

#[derive(Deserialize)]
struct ModelRequest {
    relativistic: bool,
    mass: f64,
    potential: f64,
    #[serde(default = "default_c")]
    light_speed: f64,
}

fn default_c() -> f64 {
    1.0
}

impl ModelRequest {
    fn build(&self) -> Result<DispersionModel, evanfront::Error> {
        if self.relativistic {
            DispersionModel::relativistic(self.mass, self.potential, self.light_speed)
        } else {
            DispersionModel::nonrelativistic(self.mass, self.potential)
        }
    }
}

fn err_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": format!("{e}") }).to_string()
}

/// Phase-map polylines of Re φ/norm and Im φ/norm for one (x, t).
///
/// Request: `{model, x, t, omega_r: [lo,hi], omega_i: [lo,hi],
/// resolution: [nx,ny], levels_re: [...], levels_im: [...], sheets: [...]}`.
#[wasm_bindgen]
pub fn phase_map_json(request: &str) -> String {
    #[derive(Deserialize)]
    struct Req {
        model: ModelRequest,
        x: f64,
        t: f64,
        omega_r: (f64, f64),
        omega_i: (f64, f64),
        resolution: (usize, usize),
        #[serde(default)]
        levels_re: Vec<f64>,
        #[serde(default)]
        levels_im: Vec<f64>,
        #[serde(default)]
        sheets: Vec<String>,
    }
    let req: Req = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let model = match req.model.build() {
        Ok(m) => m,
        Err(e) => return err_json(e),
    };
    let window = Window {
        omega_r: req.omega_r,
        omega_i: req.omega_i,
    };
    let sheets = if req.sheets.is_empty() {
        vec!["upper".to_string()]
    } else {
        req.sheets
    };
    let mut polylines = Vec::new();
    for name in &sheets {
        let sheet = match name.as_str() {
            "upper" => Sheet::Upper,
            "lower" => Sheet::Lower,
            other => return err_json(format!("unknown sheet {other}")),
        };
        let grid = match phasemap::build_grid(&model, req.x, req.t, window, req.resolution, sheet) {
            Ok(g) => g,
            Err(e) => return err_json(e),
        };
        polylines.extend(phasemap::extract_contours(
            &grid,
            &req.levels_re,
            Quantity::ReNormalized,
        ));
        polylines.extend(phasemap::extract_contours(
            &grid,
            &req.levels_im,
            Quantity::ImNormalized,
        ));
    }
    // saddle markers help the page annotate the maps
    let saddles: Vec<_> = evanfront::phase::saddles(&model, req.x, req.t)
        .map(|v| v.into_iter().map(|s| (s.omega_s, s.phi_s)).collect())
        .unwrap_or_default();
    serde_json::json!({ "polylines": polylines, "saddles": saddles }).to_string()
}

/// Front velocity v_m(Ω₀) and unit-distance traversal time over a sweep.
///
/// Request: `{model, omega0_min, omega0_max, count}`.
#[wasm_bindgen]
pub fn front_curve_json(request: &str) -> String {
    #[derive(Deserialize)]
    struct Req {
        model: ModelRequest,
        omega0_min: f64,
        omega0_max: f64,
        count: usize,
    }
    let req: Req = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let model = match req.model.build() {
        Ok(m) => m,
        Err(e) => return err_json(e),
    };
    if req.count < 2 || !(req.omega0_max > req.omega0_min) {
        return err_json("need count >= 2 and omega0_max > omega0_min");
    }
    let mut rows = Vec::with_capacity(req.count);
    for i in 0..req.count {
        let om0 =
            req.omega0_min + (req.omega0_max - req.omega0_min) * i as f64 / (req.count - 1) as f64;
        match model.front_velocity(om0) {
            Ok(vm) => rows.push(serde_json::json!({
                "omega0": om0,
                "v_m": vm,
                "tau_unit_x": 1.0 / vm,
            })),
            Err(_) => rows.push(serde_json::json!({ "omega0": om0, "v_m": null })),
        }
    }
    serde_json::json!({
        "rows": rows,
        "light_speed": model.light_speed(),
        "threshold": model.rest_frequency(),
    })
    .to_string()
}

/// Field evolution at a fixed observation point: oracle |ψ|, the
/// monochromatic part, the forerunner remainder, and the Gauss saddle
/// magnitude over a time sweep.
///
/// Request: `{model, amplitude, carrier, band_half_width?, x, t_min, t_max, count}`.
#[wasm_bindgen]
pub fn evolution_json(request: &str) -> String {
    #[derive(Deserialize)]
    struct Req {
        model: ModelRequest,
        amplitude: (f64, f64),
        carrier: f64,
        #[serde(default)]
        band_half_width: Option<f64>,
        x: f64,
        t_min: f64,
        t_max: f64,
        count: usize,
    }
    let req: Req = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let model = match req.model.build() {
        Ok(m) => m,
        Err(e) => return err_json(e),
    };
    let amplitude = Complex64::new(req.amplitude.0, req.amplitude.1);
    let source = match req.band_half_width {
        None => SourceSpec::sharp(amplitude, req.carrier),
        Some(dw) => SourceSpec::band_limited(amplitude, req.carrier, dw),
    };
    let source = match source {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    if req.count < 2 || !(req.t_max > req.t_min) {
        return err_json("need count >= 2 and t_max > t_min");
    }
    let settings = QuadratureSettings::default();
    let omega0 = source.carrier_kinetic(&model);
    let tau = model.traversal_time(omega0, req.x).ok();
    let mut rows = Vec::with_capacity(req.count);
    for i in 0..req.count {
        let t = req.t_min + (req.t_max - req.t_min) * i as f64 / (req.count - 1) as f64;
        let field = oracle::field(&model, &source, req.x, t, &settings).ok();
        let pole = if t > 0.0 {
            decomposition::pole_contribution(&model, &source, req.x, t).ok()
        } else {
            None
        };
        let gauss = if t > 0.0 && source.band.is_none() {
            decomposition::saddle_gauss_total(&model, &source, req.x, t).ok()
        } else {
            None
        };
        let forerunner = match (&field, &pole) {
            (Some(f), Some(p)) => Some((f.psi - p).norm()),
            _ => None,
        };
        rows.push(serde_json::json!({
            "t": t,
            "psi_abs": field.as_ref().map(|f| f.psi.norm()),
            "pole_abs": pole.map(|p| p.norm()),
            "forerunner_abs": forerunner,
            "gauss_abs": gauss.map(|g| g.norm()),
        }));
    }
    serde_json::json!({ "rows": rows, "tau": tau }).to_string()
}
