//! Leading-order QED polarization correlations for `e⁻e⁻ → e⁻e⁻` and
//! `e⁺e⁻ → 2γ`, the speed dependent entangled states they produce, and the
//! Clauser–Horne functional used to test local hidden variable bounds.
//!
//! Units are electron-mass units (`m = 1`) and angles are radians throughout
//! the library. Amplitudes are only defined up to an overall constant; every
//! probability is normalized over a complete set of outcomes.
//!
//! Module map:
//!
//! * [`kinematics`]: speeds, momenta, Dirac spinors and photon polarizations.
//! * [`gamma`]: Dirac matrices, bilinears and their closed forms.
//! * [`amplitudes`]: Møller and annihilation amplitudes, state extraction and
//!   the unpolarized spin sum.
//! * [`correlations`]: closed-form joint and marginal probabilities.
//! * [`bell`]: the S functional, the LHV self-test and the violation search.
//! * [`verify`]: the oracle/identity suite behind `qedcorr verify`.

pub mod amplitudes;
pub mod bell;
pub mod correlations;
pub mod error;
pub mod gamma;
pub mod kinematics;
pub mod verify;

pub use error::{Error, Result};

pub use num_complex::Complex64;
