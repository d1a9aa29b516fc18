//! Time evolution of wave fields radiated by a source switched on at t = 0
//! into a medium with Schrödinger-like or Klein–Gordon dispersion.
//!
//! The field splits into a monochromatic part carried by the source pole,
//! whose front moves at the velocity v_m tied to the traversal time, and a
//! broadband forerunner carried by the saddle points of the phase function.
//! The crate provides:
//!
//! - [`dispersion`]: dispersion relations, outgoing-branch wavenumbers with
//!   sheet bookkeeping, front velocities and traversal times;
//! - [`phase`]: the complex phase, its saddles and stationary-phase lines;
//! - [`decomposition`]: pole and saddle contributions, Gauss approximation
//!   with its validity parameter, near-front limits, band-limited formulas;
//! - [`oracle`]: independent high-accuracy evaluations of the exact field
//!   (closed form, band quadrature, deformed-contour quadrature);
//! - [`phasemap`]: phase values on complex-frequency grids and level-line
//!   extraction for plotting;
//! - [`checks`]: the invariant suite behind `check --profile quick|full`.
//!
//! All core computations use natural units with ħ = 1.
//!
//! ```
//! use evanfront::{decomposition, oracle, DispersionModel, SourceSpec};
//! use num_complex::Complex64;
//!
//! // evanescent carrier: Ω₀ = −2, front velocity v_m = 2, so the
//! // monochromatic part reaches x = 1 at t = 0.5
//! let model = DispersionModel::nonrelativistic(1.0, 0.0)?;
//! let source = SourceSpec::sharp(Complex64::new(1.0, 0.0), -2.0)?;
//! assert_eq!(model.front_velocity(-2.0)?, 2.0);
//!
//! let (x, t) = (1.0, 3.0);
//! let parts = decomposition::decompose(&model, &source, x, t)?;
//! assert!(parts.front_active && parts.gauss_validity > 100.0);
//!
//! // well past the front the analytic decomposition tracks the exact field
//! let exact = oracle::field(&model, &source, x, t, &Default::default())?;
//! assert!((parts.psi_total - exact.psi).norm() < 0.1 * exact.psi.norm());
//! # Ok::<(), evanfront::Error>(())
//! ```

// parameter guards are written as negated comparisons (`!(x > 0.0)`) so
// that NaN inputs fall through to the error path
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod decomposition;
pub mod dispersion;
pub mod error;
pub mod oracle;
pub mod phase;
pub mod phasemap;
pub mod quad;
pub mod special;

pub use dispersion::{DispersionModel, Sheet, SourceSpec, WaveKind};
pub use error::{Error, Result};
pub use phase::{Branch, SaddleInfo};
