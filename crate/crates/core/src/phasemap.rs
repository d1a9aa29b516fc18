//! Phase values on complex-frequency grids with sheet tracking, and level
//! polylines of Re φ and Im φ that turn the phase-map geometry (saddles,
//! stationary-phase lines, cuts) into plottable data.  Extraction is plain
//! marching squares with linear interpolation inside cells; contours stop
//! at branch cuts, and multi-sheet maps are produced by overlaying
//! per-sheet outputs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionModel, Sheet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub omega_r: (f64, f64),
    pub omega_i: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// Re φ divided by the figure normalization.
    ReNormalized,
    /// Im φ divided by the figure normalization.
    ImNormalized,
}

/// Phase samples on a rectangular grid in the complex Ω plane, one sheet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub sheet: Sheet,
    /// Normalized phase values, row-major with the Ω_i index slowest.
    pub values: Vec<Complex64>,
    /// Nodes adjacent to a branch cut; cells touching them are skipped.
    pub cut_mask: Vec<bool>,
    /// Figure normalization: φ_s for the non-relativistic map,
    /// mc sqrt(|x² − c²t²|) for the relativistic ones.
    pub normalization: f64,
}

/// Level polyline of one quantity on one sheet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContourPolyline {
    pub level: f64,
    pub quantity: Quantity,
    pub sheet: Sheet,
    pub points: Vec<(f64, f64)>,
}

impl PhaseGrid {
    fn node(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn omega_at(&self, ix: usize, iy: usize) -> Complex64 {
        let (r0, r1) = self.window.omega_r;
        let (i0, i1) = self.window.omega_i;
        let fr = if self.nx > 1 {
            ix as f64 / (self.nx - 1) as f64
        } else {
            0.0
        };
        let fi = if self.ny > 1 {
            iy as f64 / (self.ny - 1) as f64
        } else {
            0.0
        };
        Complex64::new(r0 + (r1 - r0) * fr, i0 + (i1 - i0) * fi)
    }
}

/// Figure normalization constant for (model, x, t): the saddle phase for
/// the non-relativistic map, mc sqrt(|x² − c²t²|) for the relativistic
/// maps on either side of the light cone.
pub fn figure_normalization(model: &DispersionModel, x: f64, t: f64) -> Result<f64> {
    match *model {
        DispersionModel::NonRelativistic { mass, .. } => {
            if !(x > 0.0) || !(t > 0.0) {
                return Err(Error::Domain("normalization needs x > 0, t > 0".into()));
            }
            Ok(-mass * x * x / (2.0 * t))
        }
        DispersionModel::Relativistic {
            mass,
            light_speed: c,
            ..
        } => {
            let d = (x * x - c * t * c * t).abs();
            if d == 0.0 {
                return Err(Error::Domain(
                    "normalization degenerate on the light cone".into(),
                ));
            }
            Ok(mass * c * d.sqrt())
        }
    }
}

/// Evaluates the normalized phase on a rectangular grid.  Nodes exactly on
/// a branch cut carry the boundary value of the requested sheet (the limit
/// from above for `Upper`); nodes neighbouring a cut crossing are masked.
pub fn build_grid(
    model: &DispersionModel,
    x: f64,
    t: f64,
    window: Window,
    resolution: (usize, usize),
    sheet: Sheet,
) -> Result<PhaseGrid> {
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput(format!(
            "grid resolution must be at least 2x2, got {nx}x{ny}"
        )));
    }
    if !(window.omega_r.1 > window.omega_r.0) || !(window.omega_i.1 > window.omega_i.0) {
        return Err(Error::InvalidInput("degenerate window".into()));
    }
    let norm = figure_normalization(model, x, t)?;
    let mut grid = PhaseGrid {
        window,
        nx,
        ny,
        sheet,
        values: vec![Complex64::new(0.0, 0.0); nx * ny],
        cut_mask: vec![false; nx * ny],
        normalization: norm,
    };
    for iy in 0..ny {
        for ix in 0..nx {
            let om = grid.omega_at(ix, iy);
            let k = model.wavenumber(om, Some(sheet)).unwrap();
            grid.values[iy * nx + ix] = (om * t - k * x) / norm;
        }
    }
    // mask nodes adjacent to a cut: a vertical cell edge crossing Ω_i = 0
    // inside a cut interval has discontinuous phase across it
    let (i0, i1) = window.omega_i;
    if i0 < 0.0 && i1 > 0.0 {
        for iy in 0..ny.saturating_sub(1) {
            let y_lo = grid.omega_at(0, iy).im;
            let y_hi = grid.omega_at(0, iy + 1).im;
            if y_lo < 0.0 && y_hi > 0.0 {
                for ix in 0..nx {
                    let or = grid.omega_at(ix, iy).re;
                    if model.on_cut(or) {
                        let a = grid.node(ix, iy);
                        let b = grid.node(ix, iy + 1);
                        grid.cut_mask[a] = true;
                        grid.cut_mask[b] = true;
                    }
                }
            }
        }
    }
    Ok(grid)
}

type Segment = ((f64, f64), (f64, f64));

/// Marching-squares level extraction.  Polylines terminate at the window
/// boundary or at masked (cut-adjacent) cells; an empty result for a level
/// outside the data range is not an error.
pub fn extract_contours(
    grid: &PhaseGrid,
    levels: &[f64],
    quantity: Quantity,
) -> Vec<ContourPolyline> {
    let field = |ix: usize, iy: usize| -> f64 {
        let v = grid.values[iy * grid.nx + ix];
        match quantity {
            Quantity::ReNormalized => v.re,
            Quantity::ImNormalized => v.im,
        }
    };
    let mut out = Vec::new();
    for &level in levels {
        let mut segments: Vec<Segment> = Vec::new();
        for iy in 0..grid.ny - 1 {
            for ix in 0..grid.nx - 1 {
                let corners = [
                    grid.node(ix, iy),
                    grid.node(ix + 1, iy),
                    grid.node(ix + 1, iy + 1),
                    grid.node(ix, iy + 1),
                ];
                if corners.iter().any(|&n| grid.cut_mask[n]) {
                    continue;
                }
                let f = [
                    field(ix, iy) - level,
                    field(ix + 1, iy) - level,
                    field(ix + 1, iy + 1) - level,
                    field(ix, iy + 1) - level,
                ];
                if f.iter().any(|v| !v.is_finite()) {
                    continue;
                }
                let p = [
                    om_pair(grid, ix, iy),
                    om_pair(grid, ix + 1, iy),
                    om_pair(grid, ix + 1, iy + 1),
                    om_pair(grid, ix, iy + 1),
                ];
                marching_cell(&f, &p, &mut segments);
            }
        }
        for chain in chain_segments(segments) {
            out.push(ContourPolyline {
                level,
                quantity,
                sheet: grid.sheet,
                points: chain,
            });
        }
    }
    out
}

fn om_pair(grid: &PhaseGrid, ix: usize, iy: usize) -> (f64, f64) {
    let om = grid.omega_at(ix, iy);
    (om.re, om.im)
}

fn lerp(a: (f64, f64), b: (f64, f64), fa: f64, fb: f64) -> (f64, f64) {
    let s = fa / (fa - fb);
    (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1))
}

/// Emits the level segments of one cell; the ambiguous saddle cases (5, 10)
/// are resolved by the cell-center average.
fn marching_cell(f: &[f64; 4], p: &[(f64, f64); 4], segments: &mut Vec<Segment>) {
    let mut case = 0usize;
    for (i, &v) in f.iter().enumerate() {
        if v > 0.0 {
            case |= 1 << i;
        }
    }
    if case == 0 || case == 15 {
        return;
    }
    // edge k joins corner k and corner (k+1) % 4
    let edge = |k: usize| -> (f64, f64) {
        let a = k;
        let b = (k + 1) % 4;
        lerp(p[a], p[b], f[a], f[b])
    };
    let mut push = |ea: usize, eb: usize| segments.push((edge(ea), edge(eb)));
    match case {
        1 => push(3, 0),
        2 => push(0, 1),
        3 => push(3, 1),
        4 => push(1, 2),
        5 => {
            let center = 0.25 * (f[0] + f[1] + f[2] + f[3]);
            if center > 0.0 {
                push(3, 2);
                push(1, 0);
            } else {
                push(3, 0);
                push(1, 2);
            }
        }
        6 => push(0, 2),
        7 => push(3, 2),
        8 => push(2, 3),
        9 => push(2, 0),
        10 => {
            let center = 0.25 * (f[0] + f[1] + f[2] + f[3]);
            if center > 0.0 {
                push(0, 3);
                push(2, 1);
            } else {
                push(0, 1);
                push(2, 3);
            }
        }
        11 => push(2, 1),
        12 => push(1, 3),
        13 => push(1, 0),
        14 => push(0, 3),
        _ => unreachable!(),
    }
}

/// Chains raw segments into ordered polylines by matching endpoints.
fn chain_segments(segments: Vec<Segment>) -> Vec<Vec<(f64, f64)>> {
    if segments.is_empty() {
        return Vec::new();
    }
    let quant = |p: (f64, f64)| -> (i64, i64) {
        ((p.0 * 1e12).round() as i64, (p.1 * 1e12).round() as i64)
    };
    let mut used = vec![false; segments.len()];
    let mut by_end: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for (i, (a, b)) in segments.iter().enumerate() {
        by_end.entry(quant(*a)).or_default().push(i);
        by_end.entry(quant(*b)).or_default().push(i);
    }
    let mut chains = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut chain = vec![a, b];
        // extend forward then backward
        for forward in [true, false] {
            loop {
                let tip = if forward {
                    *chain.last().unwrap()
                } else {
                    chain[0]
                };
                let key = quant(tip);
                let next = by_end
                    .get(&key)
                    .and_then(|c| c.iter().find(|&&i| !used[i]).copied());
                let Some(i) = next else { break };
                used[i] = true;
                let (a, b) = segments[i];
                let other = if quant(a) == key { b } else { a };
                if forward {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }
        chains.push(chain);
    }
    chains
}

/// Intersections of a polyline with the real axis, linearly interpolated
/// inside crossing segments.
pub fn real_axis_crossings(poly: &ContourPolyline) -> Vec<f64> {
    let mut out = Vec::new();
    for w in poly.points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.1 == 0.0 {
            out.push(a.0);
        } else if (a.1 < 0.0) != (b.1 < 0.0) {
            let s = a.1 / (a.1 - b.1);
            out.push(a.0 + s * (b.0 - a.0));
        }
    }
    out
}

/// Writes polylines as CSV with a versioned header comment.  Columns are
/// part of the public contract; floats serialize in shortest round-trip
/// form.
pub fn write_csv<W: std::io::Write>(
    out: &mut W,
    polylines: &[ContourPolyline],
) -> std::io::Result<()> {
    writeln!(out, "# evanfront phasemap csv v1")?;
    writeln!(out, "quantity,level,sheet,omega_r,omega_i,segment_id")?;
    for (id, poly) in polylines.iter().enumerate() {
        let q = match poly.quantity {
            Quantity::ReNormalized => "re",
            Quantity::ImNormalized => "im",
        };
        let sheet = match poly.sheet {
            Sheet::Upper => "upper",
            Sheet::Lower => "lower",
        };
        for (r, i) in poly.points.iter() {
            writeln!(out, "{q},{},{sheet},{r},{i},{id}", poly.level)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{self, Branch};

    fn nonrel() -> DispersionModel {
        DispersionModel::nonrelativistic(1.0, 0.0).unwrap()
    }

    fn rel() -> DispersionModel {
        DispersionModel::relativistic(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn normalization_conventions() {
        // non-relativistic: node at the saddle has φ_r = 1
        let m = nonrel();
        let (x, t) = (2.0, 1.0); // Ω_s = 2, φ_s = −2
        let g = build_grid(
            &m,
            x,
            t,
            Window {
                omega_r: (1.9, 2.1),
                omega_i: (1e-6, 0.2),
            },
            (41, 41),
            Sheet::Upper,
        )
        .unwrap();
        // approach the saddle from above the axis
        let phi = g.values[g.node(20, 0)];
        assert!((phi.re - 1.0).abs() < 1e-3, "phi_r = {}", phi.re);

        // relativistic ct = 0.75 x normalization constant
        let m = rel();
        let (x, t) = (1.0, 0.75);
        let n = figure_normalization(&m, x, t).unwrap();
        assert!((n - (x * x - t * t).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn stph_levels_match_analytic_lines() {
        // the φ_r = 1 contour of the non-relativistic map is the stph parabola
        let m = nonrel();
        let (x, t) = (2.0, 1.0);
        let g = build_grid(
            &m,
            x,
            t,
            Window {
                omega_r: (-3.0, 1.8),
                omega_i: (0.05, 1.4),
            },
            (301, 301),
            Sheet::Upper,
        )
        .unwrap();
        let polys = extract_contours(&g, &[1.0], Quantity::ReNormalized);
        assert!(!polys.is_empty());
        let cell = (4.8f64 / 300.0).hypot(1.35 / 300.0);
        let mut checked = 0;
        for poly in &polys {
            for &(or, oi) in &poly.points {
                let want = phase::stph_line(&m, x, t, or, Branch::Plus).unwrap();
                if !(0.05..=1.4).contains(&want) {
                    continue; // the parabola leaves the window
                }
                assert!(
                    (oi - want).abs() <= 2.0 * cell,
                    "contour off the parabola at Ω_r = {or}: {oi} vs {want}"
                );
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn constant_grid_has_no_contours() {
        let m = nonrel();
        let g = build_grid(
            &m,
            1.0,
            1.0,
            Window {
                omega_r: (-2.0, -1.0),
                omega_i: (0.5, 1.0),
            },
            (8, 8),
            Sheet::Upper,
        )
        .unwrap();
        // a level far outside the value range yields nothing
        let polys = extract_contours(&g, &[1e9], Quantity::ReNormalized);
        assert!(polys.is_empty());
    }

    #[test]
    fn sheet_symmetry_of_grids() {
        // lower-sheet grid equals the conjugate of the upper grid at
        // conjugated nodes
        for m in [nonrel(), rel()] {
            let w_up = Window {
                omega_r: (-2.0, 2.0),
                omega_i: (0.1, 1.0),
            };
            let w_lo = Window {
                omega_r: (-2.0, 2.0),
                omega_i: (-1.0, -0.1),
            };
            let (x, t) = if m.is_relativistic() {
                (1.0, 1.5)
            } else {
                (1.0, 0.8)
            };
            let up = build_grid(&m, x, t, w_up, (21, 11), Sheet::Upper).unwrap();
            let lo = build_grid(&m, x, t, w_lo, (21, 11), Sheet::Lower).unwrap();
            for iy in 0..11 {
                for ix in 0..21 {
                    let a = up.values[up.node(ix, iy)];
                    let b = lo.values[lo.node(ix, 10 - iy)];
                    assert!(
                        (a - b.conj()).norm() < 1e-12 * a.norm().max(1.0),
                        "sheet symmetry violated at ({ix},{iy})"
                    );
                }
            }
        }
    }

    #[test]
    fn refinement_halves_contour_deviation() {
        let m = nonrel();
        let (x, t) = (2.0, 1.0);
        let window = Window {
            omega_r: (-1.0, 1.0),
            omega_i: (0.3, 1.3),
        };
        let mut devs = Vec::new();
        for n in [61usize, 121, 241] {
            let g = build_grid(&m, x, t, window, (n, n), Sheet::Upper).unwrap();
            let polys = extract_contours(&g, &[1.0], Quantity::ReNormalized);
            let mut worst: f64 = 0.0;
            for poly in &polys {
                for &(or, oi) in &poly.points {
                    let want = phase::stph_line(&m, x, t, or, Branch::Plus).unwrap();
                    worst = worst.max((oi - want).abs());
                }
            }
            devs.push(worst);
        }
        assert!(devs[2] < devs[0], "no convergence: {devs:?}");
        assert!(
            devs[2] < 0.6 * devs[0],
            "first-order rate violated: {devs:?}"
        );
    }

    #[test]
    fn csv_emission_is_stable() {
        let poly = ContourPolyline {
            level: 1.0,
            quantity: Quantity::ReNormalized,
            sheet: Sheet::Upper,
            points: vec![(0.5, 0.25), (0.625, 0.375)],
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[poly]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "# evanfront phasemap csv v1\nquantity,level,sheet,omega_r,omega_i,segment_id\n\
             re,1,upper,0.5,0.25,0\nre,1,upper,0.625,0.375,0\n"
        );
    }
}
