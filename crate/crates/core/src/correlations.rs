//! Closed-form joint and single-detector polarization probabilities.
//!
//! Six scenarios are covered. Each carries its own angle reference and the
//! angle shift that maps one detector outcome onto its complement (`π` for
//! spins, `π/2` for linear photon polarizations).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error};
use crate::kinematics::{SpinConvention, Speed};

/// Residual accepted by [`marginalization_check`].
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Polarized `e⁻e⁻ → e⁻e⁻`, outgoing along `z` (`θ = 0`); spin angles from the `x` axis.
    #[serde(rename = "moller-polarized-theta0")]
    MollerPolarizedTheta0,
    /// Polarized `e⁻e⁻ → e⁻e⁻` at `θ = π/2`, where the outgoing state is the singlet.
    #[serde(rename = "moller-polarized-theta-pi2")]
    MollerPolarizedThetaPi2,
    /// Polarized `e⁺e⁻ → 2γ` at `θ = π/2`; polarization angles from the `z` axis.
    PhotonPolarized,
    /// Unpolarized `e⁻e⁻ → e⁻e⁻` at `θ = π/2`; spin angles from the `z` axis.
    MollerUnpolarized,
    /// Unpolarized `e⁺e⁻ → 2γ` at `θ = π/2`; polarization angles from the beam (`y`) axis.
    PhotonUnpolarized,
    /// Spin-0 pair annihilation into two photons at `θ = π/2`; angles from the beam axis.
    #[serde(rename = "spin0")]
    Spin0Annihilation,
}

/// Axis from which a scenario's polarization angles are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceAxis {
    X,
    /// The beam direction.
    Y,
    Z,
}

/// Which detector a single-particle probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Detector {
    First,
    Second,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::MollerPolarizedTheta0,
        Scenario::MollerPolarizedThetaPi2,
        Scenario::PhotonPolarized,
        Scenario::MollerUnpolarized,
        Scenario::PhotonUnpolarized,
        Scenario::Spin0Annihilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::MollerPolarizedTheta0 => "moller-polarized-theta0",
            Scenario::MollerPolarizedThetaPi2 => "moller-polarized-theta-pi2",
            Scenario::PhotonPolarized => "photon-polarized",
            Scenario::MollerUnpolarized => "moller-unpolarized",
            Scenario::PhotonUnpolarized => "photon-unpolarized",
            Scenario::Spin0Annihilation => "spin0",
        }
    }

    pub fn is_photon(self) -> bool {
        matches!(
            self,
            Scenario::PhotonPolarized | Scenario::PhotonUnpolarized | Scenario::Spin0Annihilation
        )
    }

    /// Angle shift turning a detector outcome into its orthogonal complement.
    pub fn complementary_shift(self) -> f64 {
        if self.is_photon() {
            FRAC_PI_2
        } else {
            PI
        }
    }

    pub fn reference_axis(self) -> ReferenceAxis {
        match self {
            Scenario::MollerPolarizedTheta0 | Scenario::MollerPolarizedThetaPi2 => ReferenceAxis::X,
            Scenario::PhotonPolarized | Scenario::MollerUnpolarized => ReferenceAxis::Z,
            Scenario::PhotonUnpolarized | Scenario::Spin0Annihilation => ReferenceAxis::Y,
        }
    }

    /// Measurement spinor parametrization for spin scenarios.
    pub fn spin_convention(self) -> Option<SpinConvention> {
        match self {
            Scenario::MollerPolarizedTheta0 | Scenario::MollerPolarizedThetaPi2 => {
                Some(SpinConvention::MollerTheta0)
            }
            Scenario::MollerUnpolarized => Some(SpinConvention::UnpolarizedZ),
            _ => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
                domain(format!("unknown scenario '{s}', expected one of {}", names.join(", ")))
            })
    }
}

/// Shared pieces of the polarized `θ = 0` Møller formulas.
fn moller_theta0_parts(beta: Speed) -> (f64, f64, f64) {
    let r2 = beta.rho().value().powi(2);
    let a = 1.0 + 6.0 * r2 + r2 * r2;
    let n2 = a * a + 16.0 * r2 * r2;
    (a, 4.0 * r2, n2)
}

/// `F[χ₁,χ₂] = (1−β²)(1+3β²) sin²((χ₁−χ₂)/2) + β⁴ cos²((χ₁+χ₂)/2) + 4β⁴`.
pub fn moller_unpolarized_weight_closed_form(beta: Speed, chi1: f64, chi2: f64) -> f64 {
    let b2 = beta.beta().powi(2);
    (1.0 - b2) * (1.0 + 3.0 * b2) * (0.5 * (chi1 - chi2)).sin().powi(2)
        + b2 * b2 * (0.5 * (chi1 + chi2)).cos().powi(2)
        + 4.0 * b2 * b2
}

/// `C = 2(1 + 2β² + 6β⁴)`, the sum of `F` over a complete set of outcomes.
pub fn moller_unpolarized_normalization(beta: Speed) -> f64 {
    let b2 = beta.beta().powi(2);
    2.0 * (1.0 + 2.0 * b2 + 6.0 * b2 * b2)
}

/// `C` obtained by explicitly summing `F` over `(χ₁,χ₂)`, `(χ₁+π,χ₂)`,
/// `(χ₁,χ₂+π)`, `(χ₁+π,χ₂+π)`.
pub fn moller_unpolarized_normalization_by_sum(beta: Speed, chi1: f64, chi2: f64) -> f64 {
    [(0.0, 0.0), (PI, 0.0), (0.0, PI), (PI, PI)]
        .iter()
        .map(|(d1, d2)| moller_unpolarized_weight_closed_form(beta, chi1 + d1, chi2 + d2))
        .sum()
}

/// `4β²(1−β²)` and `2β²(1−β²)` shared by the unpolarized photon and spin-0 formulas.
fn annihilation_speed_terms(beta: Speed) -> f64 {
    let b2 = beta.beta().powi(2);
    2.0 * b2 * (1.0 - b2)
}

/// `cos(χ₁−χ₂) − 2β² cos χ₁ cos χ₂`.
fn annihilation_overlap(beta: Speed, chi1: f64, chi2: f64) -> f64 {
    (chi1 - chi2).cos() - 2.0 * beta.beta().powi(2) * chi1.cos() * chi2.cos()
}

/// Joint probability `P[χ₁,χ₂]` that both detectors fire.
pub fn joint(scenario: Scenario, beta: Speed, chi1: f64, chi2: f64) -> f64 {
    match scenario {
        Scenario::MollerPolarizedTheta0 => {
            let (a, t, n2) = moller_theta0_parts(beta);
            let amp = a * (0.5 * (chi1 - chi2)).sin() - t * (0.5 * (chi1 + chi2)).cos();
            amp * amp / (2.0 * n2)
        }
        Scenario::MollerPolarizedThetaPi2 => 0.5 * (0.5 * (chi1 - chi2)).sin().powi(2),
        Scenario::PhotonPolarized => {
            // Projection of the speed dependent photon state onto
            // (0, sin χ₁, cos χ₁)⊗(0, sin χ₂, cos χ₂): the symmetric part
            // contributes sin(χ₁+χ₂).
            let r2 = beta.rho().value().powi(2);
            let anti = (1.0 + r2).powi(2);
            let sym = (beta.beta() * (1.0 - r2)).powi(2);
            (anti * (chi1 - chi2).sin().powi(2) + sym * (chi1 + chi2).sin().powi(2))
                / (2.0 * (anti + sym))
        }
        Scenario::MollerUnpolarized => {
            moller_unpolarized_weight_closed_form(beta, chi1, chi2)
                / moller_unpolarized_normalization(beta)
        }
        Scenario::PhotonUnpolarized => {
            let k = annihilation_speed_terms(beta);
            (1.0 - annihilation_overlap(beta, chi1, chi2).powi(2)) / (2.0 * (1.0 + k))
        }
        Scenario::Spin0Annihilation => {
            let k = annihilation_speed_terms(beta);
            annihilation_overlap(beta, chi1, chi2).powi(2) / (2.0 * (1.0 - k))
        }
    }
}

/// Single-detector probability `P[χ,−]` (first) or `P[−,χ]` (second).
pub fn marginal(scenario: Scenario, beta: Speed, which: Detector, chi: f64) -> f64 {
    match scenario {
        Scenario::MollerPolarizedTheta0 => {
            let (a, t, n2) = moller_theta0_parts(beta);
            let k = t * a / n2 * chi.sin();
            match which {
                Detector::First => 0.5 - k,
                Detector::Second => 0.5 + k,
            }
        }
        Scenario::MollerPolarizedThetaPi2
        | Scenario::PhotonPolarized
        | Scenario::MollerUnpolarized => 0.5,
        Scenario::PhotonUnpolarized => {
            let k = annihilation_speed_terms(beta);
            (1.0 + 2.0 * k * chi.cos().powi(2)) / (2.0 * (1.0 + k))
        }
        Scenario::Spin0Annihilation => {
            let k = annihilation_speed_terms(beta);
            (1.0 - 2.0 * k * chi.cos().powi(2)) / (2.0 * (1.0 - k))
        }
    }
}

/// Outcome of an identity check: the largest residual and whether it is
/// within [`IDENTITY_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub residual: f64,
    pub passed: bool,
}

/// Checks that summing the joint over complementary outcomes reproduces each
/// marginal, and that joints and marginals each sum to one.
pub fn marginalization_check(scenario: Scenario, beta: Speed, chi1: f64, chi2: f64) -> IdentityCheck {
    let d = scenario.complementary_shift();
    let p = |a: f64, b: f64| joint(scenario, beta, a, b);
    let m1 = |a: f64| marginal(scenario, beta, Detector::First, a);
    let m2 = |b: f64| marginal(scenario, beta, Detector::Second, b);

    let residuals = [
        (p(chi1, chi2) + p(chi1, chi2 + d) - m1(chi1)).abs(),
        (p(chi1, chi2) + p(chi1 + d, chi2) - m2(chi2)).abs(),
        (p(chi1, chi2) + p(chi1 + d, chi2) + p(chi1, chi2 + d) + p(chi1 + d, chi2 + d) - 1.0).abs(),
        (m1(chi1) + m1(chi1 + d) - 1.0).abs(),
        (m2(chi2) + m2(chi2 + d) - 1.0).abs(),
    ];
    let residual = residuals.into_iter().fold(0.0, f64::max);
    IdentityCheck {
        residual,
        passed: residual <= IDENTITY_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn speed(b: f64) -> Speed {
        Speed::new(b).unwrap()
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.name()));
            assert_eq!(serde_json::from_str::<Scenario>(&json).unwrap(), s);
        }
        assert!("moller".parse::<Scenario>().is_err());
    }

    #[test]
    fn moller_theta0_rest_limit() {
        for &(c1, c2) in &[(0.0f64, 1.0f64), (2.0, 0.3), (5.0, 4.0)] {
            let expect = 0.5 * (0.5 * (c1 - c2)).sin().powi(2);
            assert_abs_diff_eq!(joint(Scenario::MollerPolarizedTheta0, Speed::ZERO, c1, c2), expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn photon_polarized_equal_angles() {
        let b: f64 = 0.6;
        let r2: f64 = 1.0 / 9.0;
        for &chi in &[0.2f64, 0.9, 2.0] {
            let s = (b * (1.0 - r2)).powi(2);
            let expect = s * (2.0 * chi).sin().powi(2) / (2.0 * ((1.0 + r2) * (1.0 + r2) + s));
            assert_abs_diff_eq!(joint(Scenario::PhotonPolarized, speed(b), chi, chi), expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn moller_unpolarized_at_light_speed() {
        assert_abs_diff_eq!(joint(Scenario::MollerUnpolarized, speed(1.0), 0.0, 0.0), 5.0 / 18.0, epsilon = 1e-15);
    }

    #[test]
    fn spin0_at_rest() {
        for &(c1, c2) in &[(0.0f64, 1.0f64), (2.0, 0.3)] {
            let expect = 0.5 * (c1 - c2).cos().powi(2);
            assert_abs_diff_eq!(joint(Scenario::Spin0Annihilation, Speed::ZERO, c1, c2), expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn marginal_examples() {
        for &b in &[0.0, 0.4, 1.0] {
            assert_eq!(marginal(Scenario::PhotonPolarized, speed(b), Detector::First, 1.3), 0.5);
        }
        assert_abs_diff_eq!(
            marginal(Scenario::MollerPolarizedTheta0, speed(0.7), Detector::First, 0.0),
            0.5
        );
        assert_abs_diff_eq!(
            marginal(Scenario::PhotonUnpolarized, speed(0.5), Detector::First, 0.0),
            1.75 / 2.75,
            epsilon = 1e-15
        );
    }

    #[test]
    fn normalization_constant_matches_explicit_sum() {
        for &b in &[0.0, 0.3, 0.8, 1.0] {
            for &(c1, c2) in &[(0.1, 0.2), (1.0, 4.0), (3.3, 5.5)] {
                let by_sum = moller_unpolarized_normalization_by_sum(speed(b), c1, c2);
                assert_abs_diff_eq!(by_sum, moller_unpolarized_normalization(speed(b)), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn identities_hold_for_every_scenario() {
        for s in Scenario::ALL {
            for &b in &[0.0, 0.2, 0.45, 0.9, 1.0] {
                for &(c1, c2) in &[(0.0, 0.0), (0.3, 2.9), (4.0, 1.5)] {
                    let c = marginalization_check(s, speed(b), c1, c2);
                    assert!(c.passed, "{s} beta={b}: {}", c.residual);
                }
            }
        }
    }

    #[test]
    fn reference_axes() {
        assert_eq!(Scenario::MollerPolarizedTheta0.reference_axis(), ReferenceAxis::X);
        assert_eq!(Scenario::PhotonPolarized.reference_axis(), ReferenceAxis::Z);
        assert_eq!(Scenario::Spin0Annihilation.reference_axis(), ReferenceAxis::Y);
        assert_eq!(Scenario::MollerUnpolarized.spin_convention(), Some(SpinConvention::UnpolarizedZ));
        assert_eq!(Scenario::Spin0Annihilation.complementary_shift(), FRAC_PI_2);
        assert_eq!(Scenario::MollerUnpolarized.complementary_shift(), PI);
    }
}
