//! The five subcommands: field simulation over a grid, analytic
//! decomposition, the front-velocity sweep, phase-map extraction, and the
//! invariant suite.  Grid points are dispatched to the rayon pool and the
//! rows assembled in grid order, so output is independent of scheduling.

use num_complex::Complex64;
use rayon::prelude::*;

use evanfront::decomposition::{self, BandMidForm};
use evanfront::dispersion::{DispersionModel, Sheet, SourceSpec, WaveKind};
use evanfront::oracle::{self, QuadratureSettings};
use evanfront::phasemap::{self, Quantity, Window};
use evanfront::Error as CoreError;

use crate::config::{Method, PhasemapConfig, RunConfig};
use crate::output::{Cell, Table};

pub struct CommandOutcome {
    pub table: Table,
    /// Number of grid points whose evaluation failed (recorded in rows).
    pub numerical_failures: usize,
}

fn num(v: f64) -> Cell {
    Cell::Num(v)
}

fn re_im(v: Complex64) -> (Cell, Cell) {
    (Cell::Num(v.re), Cell::Num(v.im))
}

pub fn simulate(
    config: &RunConfig,
    settings: &QuadratureSettings,
) -> anyhow::Result<CommandOutcome> {
    let grid = config
        .grid
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("simulate needs a grid section in the config"))?;
    let model = config.core_model()?;
    let source = config.core_source()?;
    let method = config.method;

    let points: Vec<(f64, f64)> = grid
        .x
        .iter()
        .flat_map(|&x| grid.t.iter().map(move |&t| (x, t)))
        .collect();
    let rows: Vec<(Vec<Cell>, bool)> = points
        .par_iter()
        .map(|&(x, t)| simulate_row(&model, &source, x, t, method, settings))
        .collect();
    let numerical_failures = rows.iter().filter(|(_, failed)| *failed).count();
    Ok(CommandOutcome {
        table: Table {
            schema: "evanfront simulate csv",
            columns: &[
                "x",
                "t",
                "oracle_method",
                "oracle_re",
                "oracle_im",
                "oracle_abs",
                "oracle_est_error",
                "analytic_re",
                "analytic_im",
                "discrepancy",
                "flag",
            ],
            rows: rows.into_iter().map(|(r, _)| r).collect(),
        },
        numerical_failures,
    })
}

fn simulate_row(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
    method: Method,
    settings: &QuadratureSettings,
) -> (Vec<Cell>, bool) {
    let mut row = vec![num(x), num(t)];
    let mut failed = false;
    let mut flag = String::new();
    if let Some(c) = model.light_speed() {
        if t > 0.0 && x > c * t {
            flag = "causal".into();
        }
    }

    let oracle_result = if method != Method::Analytic {
        match oracle::field(model, source, x, t, settings) {
            Ok(r) => Some(r),
            Err(e) => {
                failed = true;
                flag = format!("error: {e}");
                None
            }
        }
    } else {
        None
    };
    match &oracle_result {
        Some(r) => {
            let tag = match r.method {
                oracle::Method::ClosedFormNonRel => "closed_form",
                oracle::Method::BandQuadrature => "band_quadrature",
                oracle::Method::ContourQuadrature => "contour_quadrature",
            };
            row.push(Cell::Text(tag.into()));
            let (re, im) = re_im(r.psi);
            row.push(re);
            row.push(im);
            row.push(num(r.psi.norm()));
            row.push(num(r.est_error));
        }
        None => {
            for _ in 0..5 {
                row.push(Cell::empty());
            }
        }
    }

    let analytic = if method != Method::Oracle && t > 0.0 && source.band.is_none() {
        match decomposition::decompose(model, source, x, t) {
            Ok(d) => Some(d.psi_total),
            Err(e) => {
                if flag.is_empty() {
                    flag = format!("analytic: {e}");
                }
                None
            }
        }
    } else {
        None
    };
    match analytic {
        Some(v) => {
            let (re, im) = re_im(v);
            row.push(re);
            row.push(im);
        }
        None => {
            row.push(Cell::empty());
            row.push(Cell::empty());
        }
    }
    match (&oracle_result, analytic) {
        (Some(o), Some(a)) => row.push(num((o.psi - a).norm())),
        _ => row.push(Cell::empty()),
    }
    row.push(Cell::Text(flag));
    (row, failed)
}

pub fn decompose(config: &RunConfig) -> anyhow::Result<CommandOutcome> {
    let grid = config
        .grid
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("decompose needs a grid section in the config"))?;
    let model = config.core_model()?;
    let source = config.core_source()?;
    if model.is_relativistic() && source.band.is_some() {
        anyhow::bail!(
            "the analytic decomposition does not cover the relativistic band-limited source"
        );
    }

    let points: Vec<(f64, f64)> = grid
        .x
        .iter()
        .flat_map(|&x| grid.t.iter().map(move |&t| (x, t)))
        .collect();
    let rows: Vec<(Vec<Cell>, bool)> = points
        .par_iter()
        .map(|&(x, t)| decompose_row(&model, &source, x, t))
        .collect();
    let numerical_failures = rows.iter().filter(|(_, failed)| *failed).count();
    Ok(CommandOutcome {
        table: Table {
            schema: "evanfront decompose csv",
            columns: &[
                "x",
                "t",
                "psi_p_re",
                "psi_p_im",
                "psi_s_plus_re",
                "psi_s_plus_im",
                "psi_s_minus_re",
                "psi_s_minus_im",
                "psi_total_re",
                "psi_total_im",
                "gauss_validity",
                "near_front",
                "front_active",
                "u_plus",
                "u_minus",
                "w0",
                "alpha",
                "seg_minus_abs",
                "seg_stph_abs",
                "seg_plus_abs",
                "mid_form",
                "seg_stph_alt_abs",
                "flag",
            ],
            rows: rows.into_iter().map(|(r, _)| r).collect(),
        },
        numerical_failures,
    })
}

fn decompose_row(
    model: &DispersionModel,
    source: &SourceSpec,
    x: f64,
    t: f64,
) -> (Vec<Cell>, bool) {
    let mut row = vec![num(x), num(t)];
    match decomposition::decompose(model, source, x, t) {
        Ok(d) => {
            for v in [
                d.psi_pole,
                d.psi_saddle_plus,
                d.psi_saddle_minus,
                d.psi_total,
            ] {
                let (re, im) = re_im(v);
                row.push(re);
                row.push(im);
            }
            row.push(num(d.gauss_validity));
            row.push(Cell::Bool(d.near_front));
            row.push(Cell::Bool(d.front_active));
            // band segment columns where the regime admits them
            match source.band {
                Some(_) => match decomposition::band_segments(model, source, x, t) {
                    Ok(seg) => {
                        row.push(num(seg.u_plus));
                        row.push(num(seg.u_minus));
                        row.push(num(seg.w0));
                        row.push(num(seg.alpha));
                        row.push(num(seg.psi_minus_seg.norm()));
                        row.push(num(seg.psi_stph_seg.norm()));
                        row.push(num(seg.psi_plus_seg.norm()));
                        row.push(Cell::Text(
                            match seg.mid_form {
                                BandMidForm::Sinh => "sinh",
                                BandMidForm::Arctan => "arctan",
                            }
                            .into(),
                        ));
                        match seg.psi_stph_alt {
                            Some(v) => row.push(num(v.norm())),
                            None => row.push(Cell::empty()),
                        }
                        row.push(Cell::Text(String::new()));
                    }
                    Err(e) => {
                        for _ in 0..9 {
                            row.push(Cell::empty());
                        }
                        row.push(Cell::Text(format!("band: {e}")));
                    }
                },
                None => {
                    for _ in 0..9 {
                        row.push(Cell::empty());
                    }
                    row.push(Cell::Text(String::new()));
                }
            }
            (row, false)
        }
        Err(e) => {
            for _ in 0..20 {
                row.push(Cell::empty());
            }
            row.push(Cell::Text(format!("error: {e}")));
            (row, true)
        }
    }
}

pub fn front(config: &RunConfig) -> anyhow::Result<CommandOutcome> {
    let sweep = config
        .front
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("front needs a front sweep section in the config"))?;
    if sweep.count < 2 || !(sweep.omega0_max > sweep.omega0_min) {
        anyhow::bail!("front sweep needs count >= 2 and omega0_max > omega0_min");
    }
    if sweep.log_scale && sweep.omega0_min <= 0.0 {
        anyhow::bail!("log-scale sweep needs positive omega0_min");
    }
    let model = config.core_model()?;
    let mut rows = Vec::with_capacity(sweep.count);
    for i in 0..sweep.count {
        let f = i as f64 / (sweep.count - 1) as f64;
        let om0 = if sweep.log_scale {
            (sweep.omega0_min.ln() + (sweep.omega0_max / sweep.omega0_min).ln() * f).exp()
        } else {
            sweep.omega0_min + (sweep.omega0_max - sweep.omega0_min) * f
        };
        let mut row = vec![num(om0)];
        match model.front_velocity(om0) {
            Ok(vm) => {
                let regime = match model.classify(om0) {
                    Ok(WaveKind::Propagating) => "propagating",
                    Ok(WaveKind::Evanescent) => "evanescent",
                    Err(_) => "threshold",
                };
                row.push(Cell::Text(regime.into()));
                row.push(num(vm));
                match model.light_speed() {
                    Some(c) => row.push(num(vm / c)),
                    None => row.push(Cell::empty()),
                }
                row.push(num(1.0 / vm)); // traversal time for unit distance
                row.push(Cell::Text(String::new()));
            }
            Err(CoreError::Threshold { .. }) => {
                row.push(Cell::Text("threshold".into()));
                for _ in 0..3 {
                    row.push(Cell::empty());
                }
                row.push(Cell::Text("threshold".into()));
            }
            Err(e) => anyhow::bail!("front velocity failed at Ω₀ = {om0}: {e}"),
        }
        rows.push(row);
    }
    Ok(CommandOutcome {
        table: Table {
            schema: "evanfront front csv",
            columns: &[
                "omega0_kinetic",
                "regime",
                "v_m",
                "v_m_over_c",
                "tau_unit_x",
                "flag",
            ],
            rows,
        },
        numerical_failures: 0,
    })
}

pub struct PhasemapFiles {
    pub polylines: Vec<phasemap::ContourPolyline>,
}

pub fn phasemap_extract(config: &RunConfig) -> anyhow::Result<PhasemapFiles> {
    let pm: &PhasemapConfig = config
        .phasemap
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("phasemap needs a phasemap section in the config"))?;
    let model = config.core_model()?;
    let window = Window {
        omega_r: pm.omega_r,
        omega_i: pm.omega_i,
    };
    let mut polylines = Vec::new();
    for sheet_name in &pm.sheets {
        let sheet = match sheet_name.as_str() {
            "upper" => Sheet::Upper,
            "lower" => Sheet::Lower,
            other => anyhow::bail!("unknown sheet {other:?} (use upper or lower)"),
        };
        let grid = phasemap::build_grid(&model, pm.x, pm.t, window, pm.resolution, sheet)?;
        polylines.extend(phasemap::extract_contours(
            &grid,
            &pm.levels_re,
            Quantity::ReNormalized,
        ));
        polylines.extend(phasemap::extract_contours(
            &grid,
            &pm.levels_im,
            Quantity::ImNormalized,
        ));
    }
    Ok(PhasemapFiles { polylines })
}
