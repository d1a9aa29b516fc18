//! Criterion 10: `check --profile quick` finishes within 60 s with zero
//! failures, and identical configs give byte-identical outputs for every
//! command.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evanfront"))
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn c10_check_runtime_and_determinism() {
    // quick profile: exit 0, under 60 s
    let start = Instant::now();
    let out = bin()
        .args(["check", "--profile", "quick"])
        .output()
        .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(elapsed <= 60.0, "check quick took {elapsed:.1}s");
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(!report.contains("FAIL"));

    // byte-identical outputs across repeated runs and thread counts
    let dir = tempfile::tempdir().unwrap();
    let sim = write_cfg(
        dir.path(),
        "sim.json",
        r#"{
          "model": {"kind": "non_relativistic", "mass": 1.0, "potential": 0.0},
          "source": {"amplitude": [1.0, 0.0], "carrier": -2.0},
          "grid": {"x": [0.4, 0.9, 1.7], "t": [0.2, 0.5, 1.1, 1.9]},
          "method": "both"
        }"#,
    );
    let band = write_cfg(
        dir.path(),
        "band.json",
        r#"{
          "model": {"kind": "non_relativistic", "mass": 1.0, "potential": 0.0},
          "source": {"amplitude": [1.0, 0.0], "carrier": -2.0, "band_half_width": 0.25},
          "grid": {"x": [8.0], "t": [3.0, 4.0, 5.0]},
          "method": "both"
        }"#,
    );
    let rel = write_cfg(
        dir.path(),
        "rel.json",
        r#"{
          "model": {"kind": "relativistic", "mass": 1.0, "potential": 0.0, "light_speed": 1.0},
          "source": {"amplitude": [1.0, 0.0], "carrier": 0.6},
          "grid": {"x": [0.8], "t": [0.5, 1.3, 2.0]},
          "method": "both",
          "front": {"omega0_min": 0.1, "omega0_max": 3.0, "count": 25},
          "phasemap": {
            "x": 1.0, "t": 1.25,
            "omega_r": [0.3, 2.7], "omega_i": [0.02, 0.7],
            "resolution": [101, 101],
            "sheets": ["upper", "lower"],
            "levels_re": [1.0], "levels_im": [-0.5]
          }
        }"#,
    );
    let runs: [(&str, &PathBuf, &str); 5] = [
        ("simulate", &sim, "csv"),
        ("simulate", &band, "json"),
        ("decompose", &band, "csv"),
        ("front", &rel, "csv"),
        ("phasemap", &rel, "json"),
    ];
    for (cmd, cfg, fmt) in runs {
        let mut outputs = Vec::new();
        for jobs in ["1", "3"] {
            let out_path = dir.path().join(format!("{cmd}_{jobs}.out"));
            let status = bin()
                .args([cmd, "--format", fmt, "--jobs", jobs, "--output"])
                .arg(&out_path)
                .arg("--config")
                .arg(cfg)
                .status()
                .unwrap();
            assert!(status.success(), "{cmd} failed");
            outputs.push(std::fs::read(&out_path).unwrap());
        }
        assert_eq!(
            outputs[0], outputs[1],
            "{cmd} output differs between runs (criterion 10 determinism)"
        );
    }
    println!(
        "ACCEPTANCE C10 PASS: check quick in {elapsed:.2}s with zero failures; \
         simulate/decompose/front/phasemap outputs byte-identical across runs and thread counts"
    );
}
