//! Invariant suite behind the `check` command: each check measures a
//! quantity the analysis pins down exactly and compares it against a fixed
//! threshold.  Failures are data, not panics.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition;
use crate::dispersion::{DispersionModel, Sheet, SourceSpec};
use crate::oracle::{self, QuadratureSettings};
use crate::phase::{self, Branch};
use crate::phasemap::{self, Quantity, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst measured value of the checked quantity.
    pub measured: f64,
    /// Threshold it must stay below.
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, measured: f64, threshold: f64, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: measured <= threshold && measured.is_finite(),
            measured,
            threshold,
            detail,
        }
    }
}

fn models() -> [DispersionModel; 2] {
    [
        DispersionModel::nonrelativistic(1.0, 0.0).unwrap(),
        DispersionModel::relativistic(1.0, 0.0, 1.0).unwrap(),
    ]
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Runs the invariant suite.  The quick profile covers every module at
/// small sample counts; the full profile adds the Gauss-convergence sweep,
/// the band-limited crossover scan and denser cross-oracle grids.
pub fn run(profile: Profile) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(dispersion_residual());
    out.push(sheet_conjugation());
    out.push(propagating_consistency());
    out.push(front_velocity_shape());
    out.push(saddle_residual());
    out.push(stationary_phase_constancy());
    out.push(descent_monotonicity());
    out.push(crossing_product());
    out.push(crossing_detection());
    out.push(cross_oracle(if profile == Profile::Full { 10 } else { 4 }));
    out.push(boundary_reproduction());
    out.push(band_boundary_identity(if profile == Profile::Full {
        50
    } else {
        12
    }));
    out.push(relativistic_causality());
    out.push(front_continuity());
    out.push(jump_compensation());
    out.push(schroedinger_residual());
    out.push(antiparticle_branch_smallness());
    if profile == Profile::Full {
        out.push(gauss_convergence());
        out.push(band_crossover());
        out.push(phasemap_agreement());
    }
    out
}

fn dispersion_residual() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for model in models() {
        for _ in 0..5000 {
            let om = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-3.0..3.0));
            for sheet in [Sheet::Upper, Sheet::Lower] {
                let k = model.wavenumber(om, Some(sheet)).unwrap();
                worst = worst.max(model.dispersion_residual(om, k));
            }
        }
    }
    CheckResult::new(
        "dispersion_residual",
        worst,
        1e-12,
        "k(Ω) substituted back into the dispersion relation, 10^4 random Ω per model".into(),
    )
}

fn sheet_conjugation() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for model in models() {
        for _ in 0..2000 {
            let om = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-3.0..3.0));
            let up = model.wavenumber(om, Some(Sheet::Upper)).unwrap();
            let lo = model.wavenumber(om.conj(), Some(Sheet::Lower)).unwrap();
            worst = worst.max((lo - up.conj()).norm() / up.norm().max(1e-30));
        }
    }
    CheckResult::new(
        "sheet_conjugation",
        worst,
        1e-12,
        "k(Ω*, lower) = conj k(Ω, upper)".into(),
    )
}

fn propagating_consistency() -> CheckResult {
    let mut worst: f64 = 0.0;
    for model in models() {
        let lo = model.rest_frequency();
        for i in 0..20 {
            let om = lo + (0.05 + i as f64 * 0.35) * (lo.max(1.0));
            let vm = model.front_velocity(om).unwrap();
            let vg = model.group_velocity(om).unwrap();
            worst = worst.max((vm - vg).abs() / model.light_speed().unwrap_or(1.0));
        }
    }
    CheckResult::new(
        "propagating_consistency",
        worst,
        1e-12,
        "front velocity equals group velocity over the propagating range".into(),
    )
}

fn front_velocity_shape() -> CheckResult {
    let model = DispersionModel::relativistic(1.0, 0.0, 1.0).unwrap();
    let c = 1.0;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    // v → c at both ends, v → 0 at the branch point, v < c in between,
    // monotone on each side
    let v_lo = model.front_velocity(1e-4).unwrap();
    let v_hi = model.front_velocity(1e4).unwrap();
    worst = worst.max((v_lo - c).abs() / c).max((v_hi - c).abs() / c);
    let near = model.front_velocity(1.0 - 1e-6).unwrap();
    worst = worst.max(near / c - 1e-2);
    let mut prev = 0.0;
    for i in 1..200 {
        let om = 1.0 - i as f64 * 0.005;
        if om <= 0.0 {
            break;
        }
        let v = model.front_velocity(om).unwrap();
        if v < prev - 1e-14 || v >= c {
            worst = worst.max(1.0);
            detail = format!("monotonicity broken below threshold at Ω = {om}");
        }
        prev = v;
    }
    prev = 0.0;
    for i in 1..200 {
        let om = 1.0 + i as f64 * 0.05;
        let v = model.front_velocity(om).unwrap();
        if v < prev - 1e-14 || v >= c {
            worst = worst.max(1.0);
            detail = format!("monotonicity broken above threshold at Ω = {om}");
        }
        prev = v;
    }
    if detail.is_empty() {
        detail = "v_m(Ω₀): limits at 0 and ∞, zero at the branch point, v < c".into();
    }
    CheckResult::new("front_velocity_shape", worst, 1e-3, detail)
}

fn saddle_residual() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for model in models() {
        for _ in 0..100 {
            let x: f64 = rng.gen_range(0.3..2.5);
            let t: f64 = if model.is_relativistic() {
                x + rng.gen_range(0.1..2.5)
            } else {
                rng.gen_range(0.3..2.5)
            };
            let s = phase::saddle(&model, x, t, Branch::Plus).unwrap();
            let h = 1e-5 * s.omega_s.max(1.0);
            let f = |om: f64| {
                phase::phase(&model, Complex64::new(om, 0.0), Sheet::Upper, x, t)
                    .unwrap()
                    .re
            };
            let d1h = (f(s.omega_s + h) - f(s.omega_s - h)) / (2.0 * h);
            let d1h2 = (f(s.omega_s + h / 2.0) - f(s.omega_s - h / 2.0)) / h;
            let d1 = (4.0 * d1h2 - d1h) / 3.0;
            worst = worst.max(d1.abs() / (s.phi_pp * s.omega_s).abs());
            let h2 = 1e-2 * (s.omega_s - model.rest_frequency());
            let second =
                |h: f64| (f(s.omega_s + h) - 2.0 * f(s.omega_s) + f(s.omega_s - h)) / (h * h);
            let d2 = (4.0 * second(h2 / 2.0) - second(h2)) / 3.0;
            worst = worst.max((d2 - s.phi_pp).abs() / s.phi_pp.abs() * 1e-2);
        }
    }
    CheckResult::new(
        "saddle_residual",
        worst,
        1e-8,
        "dφ/dΩ = 0 and φ'' at the saddle by central differences, 100 points per model".into(),
    )
}

fn stationary_phase_constancy() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (model, x, t) in [
        (models()[0], 1.7, 0.6),
        (models()[0], 0.8, 1.2),
        (models()[1], 1.0, 1.25),
        (models()[1], 0.5, 2.0),
    ] {
        for branch in [Branch::Plus, Branch::Minus] {
            if !model.is_relativistic() && branch == Branch::Minus {
                continue;
            }
            let s = phase::saddle(&model, x, t, branch).unwrap();
            let (lo, hi) = phase::stph_support(&model, x, t, branch).unwrap();
            let (lo, hi) = (
                lo.max(-12.0 * s.omega_s.abs()),
                hi.min(12.0 * s.omega_s.abs()),
            );
            let margin = (hi - lo) * 1e-4;
            for i in 0..200 {
                let or = lo + margin + (hi - lo - 2.0 * margin) * i as f64 / 199.0;
                let p = phase::phase_on_stph(&model, x, t, or, branch).unwrap();
                worst = worst.max((p.re - s.phi_s).abs() / s.phi_s.abs());
            }
        }
    }
    CheckResult::new(
        "stationary_phase_constancy",
        worst,
        1e-10,
        "Re φ = φ_s along the stph lines, both models and branches".into(),
    )
}

fn descent_monotonicity() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (model, x, t) in [(models()[0], 1.7, 0.6), (models()[1], 1.0, 1.3)] {
        let s = phase::saddle(&model, x, t, Branch::Plus).unwrap();
        let (lo, hi) = phase::stph_support(&model, x, t, Branch::Plus).unwrap();
        let (lo, hi) = (lo.max(-9.0 * s.omega_s), hi.min(9.0 * s.omega_s));
        let margin = (hi - lo) * 1e-4;
        let mut prev_left = f64::NEG_INFINITY;
        let mut prev_right = f64::INFINITY;
        for i in 0..300 {
            let or = lo + margin + (hi - lo - 2.0 * margin) * i as f64 / 299.0;
            let p = phase::phase_on_stph(&model, x, t, or, Branch::Plus).unwrap();
            if or <= s.omega_s {
                if p.im < prev_left - 1e-12 * s.phi_s.abs() {
                    worst = worst.max(1.0);
                }
                prev_left = p.im;
            } else {
                if p.im > prev_right + 1e-12 * s.phi_s.abs() {
                    worst = worst.max(1.0);
                }
                prev_right = p.im;
            }
        }
    }
    CheckResult::new(
        "descent_monotonicity",
        worst,
        0.5,
        "Im φ decreases away from the saddle along each stph branch".into(),
    )
}

fn crossing_product() -> CheckResult {
    let model = models()[1];
    let mut worst: f64 = 0.0;
    for (x, t) in [(1.0, 1.25), (0.5, 2.0), (2.0, 2.3)] {
        let s = phase::saddle(&model, x, t, Branch::Plus).unwrap();
        let inner = 1.0 / s.omega_s; // (mc²)²/Ω_s with m = c = 1
        worst = worst.max((s.omega_s * inner - 1.0).abs());
        // asymptote product is (mc²)² as well
        let (lo, hi) = phase::stph_support(&model, x, t, Branch::Plus).unwrap();
        worst = worst.max((lo * hi - 1.0).abs());
    }
    CheckResult::new(
        "crossing_product",
        worst,
        1e-12,
        "product of the real-axis crossings of stph⁺ equals (mc²)²".into(),
    )
}

fn crossing_detection() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (model, om0, x) in [
        (models()[0], -2.0, 1.0),
        (models()[0], 1.3, 1.5),
        (models()[1], 0.6, 0.8),
        (models()[1], 1.25, 0.6),
        (models()[1], -0.4, 1.0),
    ] {
        let t_pred = phase::pole_crossing_time(&model, om0, x).unwrap();
        let t_det = phase::detect_crossing_time(&model, om0, x).unwrap();
        worst = worst.max((t_pred - t_det).abs() / t_pred);
    }
    CheckResult::new(
        "crossing_detection",
        worst,
        1e-8,
        "numerically detected stph crossing time equals x / v_m".into(),
    )
}

fn cross_oracle(n: usize) -> CheckResult {
    let model = models()[0];
    let settings = QuadratureSettings::default();
    let source = SourceSpec::sharp(one(), -2.0).unwrap();
    let source_prop = SourceSpec::sharp(one(), 2.0).unwrap();
    let mut worst: f64 = 0.0;
    for src in [source, source_prop] {
        for i in 0..n {
            for j in 0..n {
                let x = 0.3 + 2.2 * i as f64 / (n - 1) as f64;
                let t = 0.2 + 1.8 * j as f64 / (n - 1) as f64;
                let cf = oracle::exact_nonrel_sharp(&model, &src, x, t).unwrap();
                let cq = oracle::contour_quadrature(&model, &src, x, t, &settings).unwrap();
                let mass = model.mass();
                let floor = (-(mass) * x * x / t).exp();
                let scale = cf.psi.norm().max(floor);
                worst = worst.max((cf.psi - cq.psi).norm() / scale);
            }
        }
    }
    CheckResult::new(
        "cross_oracle",
        worst,
        1e-8,
        format!("closed form vs contour quadrature on a {n}x{n} grid, both regimes"),
    )
}

fn boundary_reproduction() -> CheckResult {
    let settings = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    for model in models() {
        let source =
            SourceSpec::sharp(one(), if model.is_relativistic() { 0.6 } else { -2.0 }).unwrap();
        for i in 0..10 {
            let t = 0.2 + i as f64 * 0.45;
            let want = (Complex64::new(0.0, -1.0) * source.carrier * t).exp();
            let via_contour =
                oracle::contour_quadrature(&model, &source, 0.0, t, &settings).unwrap();
            worst = worst.max((via_contour.psi - want).norm());
            if !model.is_relativistic() {
                let cf = oracle::exact_nonrel_sharp(&model, &source, 0.0, t).unwrap();
                worst = worst.max((cf.psi - want).norm());
            }
        }
    }
    CheckResult::new(
        "boundary_reproduction",
        worst,
        1e-8,
        "oracles reproduce ψ(0,t) = A e^{-iω₀t} for the sharp source".into(),
    )
}

fn band_boundary_identity(nt: usize) -> CheckResult {
    let model = models()[0];
    let settings = QuadratureSettings::default();
    let source = SourceSpec::band_limited(one(), -2.0, 0.4).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..nt {
        let t = -2.0 + 10.0 * i as f64 / (nt - 1) as f64;
        let got = oracle::band_quadrature(&model, &source, 0.0, t, &settings).unwrap();
        let si = crate::special::sine_integral(0.4 * t);
        let want = (Complex64::new(0.0, -1.0) * source.carrier * t).exp()
            * (0.5 + si / std::f64::consts::PI);
        worst = worst.max((got.psi - want).norm() / want.norm().max(1e-3));
    }
    CheckResult::new(
        "band_boundary_identity",
        worst,
        1e-8,
        "band oracle reproduces ψ(0,t) = A e^{-iω₀t}[1/2 + Si(Δω t)/π]".into(),
    )
}

fn relativistic_causality() -> CheckResult {
    let model = models()[1];
    let settings = QuadratureSettings::default();
    let source = SourceSpec::sharp(one(), 0.6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let t: f64 = rng.gen_range(0.2..2.0);
        let x = t * rng.gen_range(1.05..3.0);
        let r = oracle::contour_quadrature(&model, &source, x, t, &settings).unwrap();
        worst = worst.max(r.psi.norm());
    }
    CheckResult::new(
        "relativistic_causality",
        worst,
        1e-6,
        "|ψ| for x > ct via the upward tent".into(),
    )
}

fn front_continuity() -> CheckResult {
    let settings = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (model, om0, x) in [
        (models()[0], -2.0, 1.0),
        (models()[0], 2.0, 1.0),
        (models()[1], 0.6, 0.8),
    ] {
        let source = SourceSpec::sharp(one(), om0 + model.potential()).unwrap();
        let tau = model.traversal_time(om0, x).unwrap();
        let mut diffs = Vec::new();
        for k in 1i32..=4 {
            let dt = tau * 10f64.powi(-k - 1);
            let a = oracle::field(&model, &source, x, tau - dt, &settings).unwrap();
            let b = oracle::field(&model, &source, x, tau + dt, &settings).unwrap();
            diffs.push((b.psi - a.psi).norm());
        }
        // each decade of step shrinks the difference ~10x
        for w in diffs.windows(2) {
            let ratio = w[0] / w[1].max(1e-300);
            if !(4.0..25.0).contains(&ratio) {
                worst = worst.max(1.0);
                detail = format!("non-linear step scaling: diffs {diffs:?}");
            }
        }
    }
    if detail.is_empty() {
        detail = "oracle field is continuous across x = v_m t (linear step scaling)".into();
    }
    CheckResult::new("front_continuity", worst, 0.5, detail)
}

fn jump_compensation() -> CheckResult {
    let mut worst: f64 = 0.0;
    for (model, om0) in [
        (models()[0], -2.0),
        (models()[0], 2.0),
        (models()[1], 0.6),
        (models()[1], 1.25),
    ] {
        let source = SourceSpec::sharp(one(), om0 + model.potential()).unwrap();
        for x in [0.5, 1.0, 1.5, 2.0, 2.5] {
            let tau = model.traversal_time(om0, x).unwrap();
            // ψ_p switches on by the bare wave; the saddle term jumps by
            // 2·(jump term) as sign(v_m t − x) flips
            let pole_jump = decomposition::monochromatic_wave(&model, &source, x, tau);
            let saddle_jump =
                2.0 * decomposition::near_front_jump_term(&model, &source, x, tau).unwrap();
            let scale = pole_jump.norm().max(1e-300);
            worst = worst.max((pole_jump + saddle_jump).norm() / scale);
        }
    }
    CheckResult::new(
        "jump_compensation",
        worst,
        1e-9,
        "ψ_p discontinuity cancels the near-front saddle discontinuity".into(),
    )
}

fn schroedinger_residual() -> CheckResult {
    // the closed form satisfies iψ_t = −ψ_xx/2m + Vψ in the interior
    let model = DispersionModel::nonrelativistic(1.0, 0.3).unwrap();
    let source = SourceSpec::sharp(one(), -1.2).unwrap();
    let mut worst: f64 = 0.0;
    let h = 1e-4;
    for (x, t) in [(0.8, 0.7), (1.5, 1.1), (2.2, 0.9)] {
        let psi = |x: f64, t: f64| {
            oracle::exact_nonrel_sharp(&model, &source, x, t)
                .unwrap()
                .psi
        };
        let p0 = psi(x, t);
        let dt = (psi(x, t + h) - psi(x, t - h)) / (2.0 * h);
        let dxx = (psi(x + h, t) - 2.0 * p0 + psi(x - h, t)) / (h * h);
        let res =
            Complex64::new(0.0, 1.0) * dt + dxx / (2.0 * model.mass()) - model.potential() * p0;
        worst = worst.max(res.norm() / p0.norm().max(1e-6));
    }
    CheckResult::new(
        "schroedinger_residual",
        worst,
        1e-4,
        "closed form satisfies the Schrödinger equation by finite differences".into(),
    )
}

fn antiparticle_branch_smallness() -> CheckResult {
    let model = models()[1];
    // Ω₀ near mc² at late time: the −Ω_s branch is negligible; deep in the
    // forbidden region both branches become comparable
    let near = SourceSpec::sharp(one(), 0.9).unwrap();
    let deep = SourceSpec::sharp(one(), 0.05).unwrap();
    let (x, t) = (0.4, 4.0);
    let near_ratio = decomposition::saddle_gauss(&model, &near, x, t, Branch::Minus)
        .unwrap()
        .norm()
        / decomposition::saddle_gauss(&model, &near, x, t, Branch::Plus)
            .unwrap()
            .norm();
    let deep_ratio = decomposition::saddle_gauss(&model, &deep, x, t, Branch::Minus)
        .unwrap()
        .norm()
        / decomposition::saddle_gauss(&model, &deep, x, t, Branch::Plus)
            .unwrap()
            .norm();
    let measured = if deep_ratio > 3.0 * near_ratio {
        near_ratio
    } else {
        1.0
    };
    CheckResult::new(
        "antiparticle_branch_smallness",
        measured,
        0.2,
        format!("|ψ_s⁻/ψ_s⁺| = {near_ratio:.3e} near mc², {deep_ratio:.3e} deep in the gap"),
    )
}

fn gauss_convergence() -> CheckResult {
    let model = models()[0];
    let settings = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    let mut sets = 0;
    for om0 in [-2.0, -1.0, -0.6] {
        let source = SourceSpec::sharp(one(), om0).unwrap();
        for x in [0.6, 0.9] {
            let mut prev = f64::INFINITY;
            sets += 1;
            for target in [3.0, 10.0, 30.0, 100.0] {
                let t = solve_validity_time(&model, om0, x, target);
                let orc = oracle::field(&model, &source, x, t, &settings).unwrap();
                let pole = decomposition::pole_contribution(&model, &source, x, t).unwrap();
                let fore = orc.psi - pole;
                let gauss =
                    decomposition::saddle_gauss(&model, &source, x, t, Branch::Plus).unwrap();
                let err = (gauss - fore).norm() / fore.norm();
                if err > prev * 1.02 {
                    worst = worst.max(1.0);
                    detail =
                        format!("non-monotone error at validity {target}: {err:.3} > {prev:.3}");
                }
                if target >= 10.0 && err > 0.25 {
                    worst = worst.max(err);
                    detail = format!("error {err:.3} at validity {target}");
                }
                prev = err;
            }
        }
    }
    if detail.is_empty() {
        detail =
            format!("Gauss error decreases over validity {{3,10,30,100}}, {sets} parameter sets");
    }
    CheckResult::new("gauss_convergence", worst, 0.25, detail)
}

/// Pre-front time at which the Gauss validity reaches the target (the
/// validity decreases monotonically from ∞ to its front value on (0, τ)).
fn solve_validity_time(model: &DispersionModel, om0: f64, x: f64, target: f64) -> f64 {
    let tau = model.traversal_time(om0, x).unwrap();
    let f =
        |t: f64| decomposition::gauss_validity(model, om0, x, t, Branch::Plus).unwrap() - target;
    let mut lo = tau * 1e-4;
    let mut hi = tau * (1.0 - 1e-9);
    if f(hi) > 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn band_crossover() -> CheckResult {
    let model = models()[0];
    let settings = QuadratureSettings::default();
    // Δω·τ = 3 with Δω/|Ω₀| = 1/3: both band inequalities hold by 3x
    let om0 = -0.9;
    let dw = 0.3;
    let source = SourceSpec::band_limited(one(), om0, dw).unwrap();
    let vm = model.front_velocity(om0).unwrap();
    let x = 10.0 / vm * 1.34164;
    let tau = x / vm;
    let mut crossover = None;
    for i in 0..60 {
        let t = tau * (0.8 + 0.03 * i as f64);
        let total = oracle::band_quadrature(&model, &source, x, t, &settings).unwrap();
        let pole = decomposition::pole_contribution(&model, &source, x, t).unwrap();
        let fore = (total.psi - pole).norm();
        if pole.norm() >= 0.1 * fore && pole.norm() > 0.0 {
            crossover = Some(t / tau);
            break;
        }
    }
    match crossover {
        Some(r) => CheckResult::new(
            "band_crossover",
            (r - 1.0).abs(),
            1.5,
            format!("monochromatic part within 10x of the forerunner at t/τ = {r:.3}"),
        ),
        None => CheckResult::new(
            "band_crossover",
            f64::INFINITY,
            1.5,
            "no crossover found in t/τ ∈ [0.8, 2.6]".into(),
        ),
    }
}

fn phasemap_agreement() -> CheckResult {
    let mut worst: f64 = 0.0;
    // non-relativistic: φ_r = 1 level against the parabola
    let m = models()[0];
    let (x, t) = (2.0, 1.0);
    let g = phasemap::build_grid(
        &m,
        x,
        t,
        Window {
            omega_r: (-2.5, 1.9),
            omega_i: (0.05, 1.3),
        },
        (241, 241),
        Sheet::Upper,
    )
    .unwrap();
    let cell = (4.4f64 / 240.0).hypot(1.25 / 240.0);
    for poly in phasemap::extract_contours(&g, &[1.0], Quantity::ReNormalized) {
        for &(or, oi) in &poly.points {
            let want = phase::stph_line(&m, x, t, or, Branch::Plus).unwrap();
            if (0.05..1.3).contains(&want) {
                worst = worst.max(((oi - want).abs() / (2.0 * cell)).max(0.0));
            }
        }
    }
    CheckResult::new(
        "phasemap_agreement",
        worst,
        1.0,
        "extracted stph polyline within 2 grid cells of the analytic line".into(),
    )
}
