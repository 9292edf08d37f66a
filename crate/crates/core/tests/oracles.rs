//! Closed-form probabilities against routes that never touch the closed
//! forms: explicit spin sums, full spinor contractions and a scalar
//! amplitude written out here.

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use qedcorr::amplitudes::{
    annihilation_amplitude, annihilation_amplitude_from, moller_unpolarized_weight, EntangledState,
    StateBasis,
};
use qedcorr::bell::{s_value, scan, BellSettings, ScanOptions};
use qedcorr::correlations::{joint, marginal, Detector, Scenario};
use qedcorr::kinematics::{
    annihilation_momenta, incoming_electron_spinor, measurement_two_spinor, photon_polarization,
    Beam, DiracSpinor, SpinConvention, Speed, TwoSpinor,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn speeds() -> Vec<Speed> {
    (1..=9).map(|i| Speed::new(i as f64 / 10.0).unwrap()).collect()
}

fn angle_pairs(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)))
        .collect()
}

/// `w(χ₁,χ₂) / Σ w` over the four complementary outcome pairs.
fn normalized<W: Fn(f64, f64) -> f64>(w: W, shift: f64, c1: f64, c2: f64) -> f64 {
    let total: f64 = [(0.0, 0.0), (shift, 0.0), (0.0, shift), (shift, shift)]
        .iter()
        .map(|(a, b)| w(c1 + a, c2 + b))
        .sum();
    w(c1, c2) / total
}

/// Positron spinor for momentum along `−y` with rest-frame spin `eta`.
fn positron(eta: TwoSpinor, beta: Speed) -> DiracSpinor {
    let rho = beta.rho().value();
    let upper = eta.sigma_dot([0.0, -1.0, 0.0]).scale(rho.into());
    DiracSpinor::from_blocks(beta.spinor_norm_factor().unwrap(), upper, eta)
}

#[test]
fn unpolarized_moller_matches_explicit_spin_sum() {
    for beta in speeds() {
        for (c1, c2) in angle_pairs(11, 20) {
            let w = |a: f64, b: f64| {
                let x1 = measurement_two_spinor(a, SpinConvention::UnpolarizedZ);
                let x2 = measurement_two_spinor(b, SpinConvention::UnpolarizedZ);
                moller_unpolarized_weight(x1, x2, beta).unwrap().0
            };
            let expect = normalized(w, PI, c1, c2);
            assert_abs_diff_eq!(joint(Scenario::MollerUnpolarized, beta, c1, c2), expect, epsilon = 1e-12);
        }
    }
}

/// Spin-summed `|v̄ M u|²` for photons at `θ = π/2`, angles from the beam axis.
fn photon_spin_sum(beta: Speed, c1: f64, c2: f64) -> f64 {
    let e1 = photon_polarization(c1 + FRAC_PI_2, FRAC_PI_2);
    let e2 = photon_polarization(c2 + FRAC_PI_2, FRAC_PI_2);
    let mut total = 0.0;
    for s in 0..2 {
        let u = incoming_electron_spinor(TwoSpinor::basis(s), Beam::PlusY, beta).unwrap();
        for t in 0..2 {
            let v = positron(TwoSpinor::basis(t), beta);
            total += annihilation_amplitude_from(&u, &v, &e1, &e2, beta, FRAC_PI_2)
                .unwrap()
                .0
                .norm_sqr();
        }
    }
    total
}

#[test]
fn unpolarized_annihilation_matches_explicit_spin_sum() {
    for beta in speeds() {
        for (c1, c2) in angle_pairs(12, 20) {
            let expect = normalized(|a, b| photon_spin_sum(beta, a, b), FRAC_PI_2, c1, c2);
            assert_abs_diff_eq!(joint(Scenario::PhotonUnpolarized, beta, c1, c2), expect, epsilon = 1e-12);
        }
    }
}

/// Scalar pair annihilation:
/// `ε₁·ε₂ − (p₁·ε₁)(p₂·ε₂)/(p₁·k₁) − (p₁·ε₂)(p₂·ε₁)/(p₁·k₂)`.
fn scalar_amplitude(beta: Speed, c1: f64, c2: f64) -> f64 {
    let k = annihilation_momenta(beta, FRAC_PI_2).unwrap();
    let e1 = photon_polarization(c1 + FRAC_PI_2, FRAC_PI_2).four_vector();
    let e2 = photon_polarization(c2 + FRAC_PI_2, FRAC_PI_2).four_vector();
    let (p1, p2) = (k.electron, k.positron);
    e1.dot(&e2) - p1.dot(&e1) * p2.dot(&e2) / p1.dot(&k.k1) - p1.dot(&e2) * p2.dot(&e1) / p1.dot(&k.k2)
}

#[test]
fn spin0_matches_scalar_amplitude() {
    let mut grid = speeds();
    grid.push(Speed::ZERO);
    for beta in grid {
        for (c1, c2) in angle_pairs(13, 20) {
            let expect = normalized(|a, b| scalar_amplitude(beta, a, b).powi(2), FRAC_PI_2, c1, c2);
            assert_abs_diff_eq!(joint(Scenario::Spin0Annihilation, beta, c1, c2), expect, epsilon = 1e-12);
        }
    }
}

#[test]
fn polarized_annihilation_matches_full_contraction() {
    // State built from the unreduced amplitude, angles from the z axis.
    for beta in speeds() {
        let basis = [
            photon_polarization(FRAC_PI_2, FRAC_PI_2),
            photon_polarization(0.0, FRAC_PI_2),
        ];
        let mut coeffs = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                coeffs[a][b] = annihilation_amplitude(&basis[a], &basis[b], beta, FRAC_PI_2).unwrap().0;
            }
        }
        let state = EntangledState::from_unnormalized(coeffs, StateBasis::PhotonLinear).unwrap();
        for (c1, c2) in angle_pairs(14, 20) {
            let b1 = [Complex64::new(c1.sin(), 0.0), Complex64::new(c1.cos(), 0.0)];
            let b2 = [Complex64::new(c2.sin(), 0.0), Complex64::new(c2.cos(), 0.0)];
            assert_abs_diff_eq!(
                state.joint_probability(&b1, &b2),
                joint(Scenario::PhotonPolarized, beta, c1, c2),
                epsilon = 1e-12
            );
        }
    }
}

#[test]
fn polarized_annihilation_at_supplementary_angles() {
    // with χ₂ = π − χ₁ only the antisymmetric part contributes
    let beta = Speed::new(0.5).unwrap();
    for chi in [0.3f64, 0.7, 1.2] {
        assert_abs_diff_eq!(
            joint(Scenario::PhotonPolarized, beta, chi, PI - chi),
            0.5 * anti_fraction(beta) * (2.0 * chi).sin().powi(2),
            epsilon = 1e-14
        );
    }
}

fn anti_fraction(beta: Speed) -> f64 {
    let r2 = beta.rho().value().powi(2);
    let anti = (1.0 + r2).powi(2);
    let sym = (beta.beta() * (1.0 - r2)).powi(2);
    anti / (anti + sym)
}

#[test]
fn rest_limits_are_singlet_like() {
    for (c1, c2) in angle_pairs(15, 10) {
        let half = 0.5 * (c1 - c2);
        for sc in [Scenario::MollerPolarizedTheta0, Scenario::MollerPolarizedThetaPi2, Scenario::MollerUnpolarized] {
            assert_abs_diff_eq!(joint(sc, Speed::ZERO, c1, c2), 0.5 * half.sin().powi(2), epsilon = 1e-15);
        }
        for sc in [Scenario::PhotonPolarized, Scenario::PhotonUnpolarized] {
            assert_abs_diff_eq!(joint(sc, Speed::ZERO, c1, c2), 0.5 * (c1 - c2).sin().powi(2), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(
            joint(Scenario::Spin0Annihilation, Speed::ZERO, c1, c2),
            0.5 * (c1 - c2).cos().powi(2),
            epsilon = 1e-15
        );
    }
}

#[test]
fn marginals_from_independent_sums() {
    for beta in speeds() {
        for (c, _) in angle_pairs(16, 10) {
            let sum_second = |a: f64| {
                normalized(|x, y| photon_spin_sum(beta, x, y), FRAC_PI_2, a, 0.0)
                    + normalized(|x, y| photon_spin_sum(beta, x, y), FRAC_PI_2, a, FRAC_PI_2)
            };
            assert_abs_diff_eq!(
                marginal(Scenario::PhotonUnpolarized, beta, Detector::First, c),
                sum_second(c),
                epsilon = 1e-12
            );
        }
    }
}

#[test]
fn singlet_optimum_is_the_regression_anchor() {
    let r = scan(Scenario::MollerPolarizedTheta0, &[Speed::ZERO], &ScanOptions::default()).unwrap();
    let best = r.points[0].best;
    assert_abs_diff_eq!(best.margin, (2f64.sqrt() - 1.0) / 2.0, epsilon = 1e-10);
    // and the reported settings reproduce it
    assert_eq!(s_value(&r.points[0].settings), best);
}

#[test]
fn singlet_textbook_settings() {
    // 0, π/4, π/2, 3π/4 give S = −(1+√2)/2 for the singlet.
    let s = BellSettings::new(
        Scenario::MollerPolarizedThetaPi2,
        Speed::new(0.6).unwrap(),
        [0.0, 0.25 * PI, 0.5 * PI, 0.75 * PI],
    );
    let r = s_value(&s);
    assert_abs_diff_eq!(r.s, -(1.0 + 2f64.sqrt()) / 2.0, epsilon = 1e-14);
}
