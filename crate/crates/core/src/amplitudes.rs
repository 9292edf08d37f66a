//! Leading-order amplitudes, entangled-state extraction and the unpolarized
//! Møller spin sum.
//!
//! Amplitudes carry no overall coupling or normalization constant; states are
//! obtained by evaluating an amplitude on a product basis and normalizing.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{bilinear, current, minkowski_contract, slash, ComplexMatrix4};
use crate::kinematics::{
    annihilation_momenta, electron_spinor_final, electron_spinor_initial,
    incoming_electron_spinor, moller_momenta, outgoing_direction, photon_polarization,
    positron_spinor, Beam, DiracSpinor, FinalElectron, InitialElectron, PhotonPolarization, Speed,
    TwoSpinor,
};

/// Propagator denominators smaller than this are treated as singular.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude(pub Complex64);

impl Amplitude {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// Unnormalized probability weight from an explicit spin sum.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SpinSumResult(pub f64);

impl SpinSumResult {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Product basis labelling the coefficient tensor of an [`EntangledState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateBasis {
    /// Index 0 = spin up along `z`, 1 = spin down.
    Spin,
    /// Index 0 = polarization at `χ = π/2`, 1 = polarization at `χ = 0`.
    /// At `θ = π/2` these are the `y` and `z` axes.
    PhotonLinear,
}

/// Normalized two-particle state; `coeffs[a][b]` multiplies `|a⟩₁|b⟩₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntangledState {
    pub coeffs: [[Complex64; 2]; 2],
    pub basis: StateBasis,
}

impl EntangledState {
    pub fn from_unnormalized(coeffs: [[Complex64; 2]; 2], basis: StateBasis) -> Result<Self> {
        let n = coeffs.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateKinematics(
                "amplitude vanishes on every basis state".into(),
            ));
        }
        Ok(EntangledState {
            coeffs: coeffs.map(|row| row.map(|c| c / n)),
            basis,
        })
    }

    /// `(|1⟩|0⟩ − |0⟩|1⟩)/√2`.
    pub fn antisymmetric(basis: StateBasis) -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        EntangledState {
            coeffs: [[ZERO, -s], [s, ZERO]],
            basis,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &EntangledState) -> Complex64 {
        self.coeffs
            .iter()
            .flatten()
            .zip(other.coeffs.iter().flatten())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &EntangledState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `⟨bra₁|⟨bra₂|ψ⟩` with both bras given by their ket components.
    pub fn project(&self, bra1: &[Complex64; 2], bra2: &[Complex64; 2]) -> Complex64 {
        let mut acc = ZERO;
        for a in 0..2 {
            for b in 0..2 {
                acc += bra1[a].conj() * bra2[b].conj() * self.coeffs[a][b];
            }
        }
        acc
    }

    /// `‖⟨bra₁|⟨bra₂|ψ⟩‖²`.
    pub fn joint_probability(&self, bra1: &[Complex64; 2], bra2: &[Complex64; 2]) -> f64 {
        self.project(bra1, bra2).norm_sqr()
    }

    /// `‖⟨bra₁|ψ⟩‖²` with the second particle unobserved.
    pub fn first_marginal(&self, bra1: &[Complex64; 2]) -> f64 {
        (0..2)
            .map(|b| {
                (0..2)
                    .map(|a| bra1[a].conj() * self.coeffs[a][b])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    }

    /// `‖⟨bra₂|ψ⟩‖²` with the first particle unobserved.
    pub fn second_marginal(&self, bra2: &[Complex64; 2]) -> f64 {
        (0..2)
            .map(|a| {
                (0..2)
                    .map(|b| bra2[b].conj() * self.coeffs[a][b])
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    }
}

/// Basis components of the linear polarization at angle `χ` in the
/// [`StateBasis::PhotonLinear`] basis.
pub fn photon_measurement(chi: f64) -> [Complex64; 2] {
    [Complex64::new(chi.sin(), 0.0), Complex64::new(chi.cos(), 0.0)]
}

/// Møller amplitude for the spin-up/spin-down initial pair:
/// direct term over `(p₁′−p₁)²` minus exchange term over `(p₂′−p₁)²`.
pub fn moller_amplitude(
    xi1: TwoSpinor,
    xi2: TwoSpinor,
    beta: Speed,
    theta: f64,
) -> Result<Amplitude> {
    let u1 = electron_spinor_initial(InitialElectron::SpinUpP1, beta)?;
    let u2 = electron_spinor_initial(InitialElectron::SpinDownP2, beta)?;
    moller_amplitude_from(&u1, &u2, xi1, xi2, beta, theta)
}

/// Møller amplitude with arbitrary incoming spinors `u1` (along `+y`) and `u2` (along `−y`).
pub fn moller_amplitude_from(
    u1: &DiracSpinor,
    u2: &DiracSpinor,
    xi1: TwoSpinor,
    xi2: TwoSpinor,
    beta: Speed,
    theta: f64,
) -> Result<Amplitude> {
    let k = moller_momenta(beta, theta)?;
    let direct_den = (k.p1_prime - k.p1).invariant_mass_sq();
    let exchange_den = (k.p2_prime - k.p1).invariant_mass_sq();
    if direct_den.abs() < DENOMINATOR_FLOOR || exchange_den.abs() < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateKinematics(format!(
            "photon propagator vanishes at beta = {}, theta = {theta}",
            beta.beta()
        )));
    }
    let f1 = electron_spinor_final(FinalElectron::P1Prime, xi1, beta, theta)?;
    let f2 = electron_spinor_final(FinalElectron::P2Prime, xi2, beta, theta)?;
    let direct = minkowski_contract(&current(&f1, u1), &current(&f2, u2)) / direct_den;
    let exchange = minkowski_contract(&current(&f2, u1), &current(&f1, u2)) / exchange_den;
    Ok(Amplitude(direct - exchange))
}

/// Evaluates the Møller amplitude on the spin product basis and normalizes.
pub fn extract_moller_state(beta: Speed, theta: f64) -> Result<EntangledState> {
    let mut coeffs = [[ZERO; 2]; 2];
    for (a, row) in coeffs.iter_mut().enumerate() {
        for (b, c) in row.iter_mut().enumerate() {
            *c = moller_amplitude(TwoSpinor::basis(a), TwoSpinor::basis(b), beta, theta)?.0;
        }
    }
    EntangledState::from_unnormalized(coeffs, StateBasis::Spin)
}

/// Closed-form `θ = 0` Møller state: `(1+6ρ²+ρ⁴)` on `(|↓↑⟩−|↑↓⟩)/√2`
/// and `4iρ²` on `(|↓↓⟩+|↑↑⟩)/√2`, normalized.
pub fn moller_state_theta0(beta: Speed) -> EntangledState {
    let r2 = beta.rho().value().powi(2);
    let singlet = Complex64::new(1.0 + 6.0 * r2 + r2 * r2, 0.0);
    let triplet = Complex64::new(0.0, 4.0 * r2);
    EntangledState::from_unnormalized([[triplet, -singlet], [singlet, triplet]], StateBasis::Spin)
        .expect("singlet coefficient is at least 1")
}

/// Full pair-annihilation amplitude `v̄[…]u` contracted with both photon
/// polarizations, built from explicit spinors and slash products.
///
/// The contact terms enter as `−ε̸₂(p₁·ε₁)/(p₁k₁) − ε̸₁(p₁·ε₂)/(p₁k₂)`, the form
/// that follows from `(p̸₁ − m)u = 0` in the `(+,−,−,−)` metric.
pub fn annihilation_amplitude(
    e1: &PhotonPolarization,
    e2: &PhotonPolarization,
    beta: Speed,
    theta: f64,
) -> Result<Amplitude> {
    let u = electron_spinor_initial(InitialElectron::SpinUpP1, beta)?;
    let v = positron_spinor(beta)?;
    annihilation_amplitude_from(&u, &v, e1, e2, beta, theta)
}

/// [`annihilation_amplitude`] with arbitrary electron (`u`, along `+y`) and
/// positron (`v`) spinors.
pub fn annihilation_amplitude_from(
    u: &DiracSpinor,
    v: &DiracSpinor,
    e1: &PhotonPolarization,
    e2: &PhotonPolarization,
    beta: Speed,
    theta: f64,
) -> Result<Amplitude> {
    let k = annihilation_momenta(beta, theta)?;
    let p1 = k.electron;
    let p1k1 = p1.dot(&k.k1);
    let p1k2 = p1.dot(&k.k2);
    if p1k1.abs() < DENOMINATOR_FLOOR || p1k2.abs() < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateKinematics(format!(
            "electron propagator vanishes at beta = {}, theta = {theta}",
            beta.beta()
        )));
    }
    let eps1 = e1.four_vector();
    let eps2 = e2.four_vector();
    let s1 = slash(&eps1);
    let s2 = slash(&eps2);
    let m: ComplexMatrix4 = s2 * slash(&k.k1) * s1 * (0.5 / p1k1)
        + s1 * slash(&k.k2) * s2 * (0.5 / p1k2)
        - s2 * (p1.dot(&eps1) / p1k1)
        - s1 * (p1.dot(&eps2) / p1k2);
    Ok(Amplitude(bilinear(v, &[m], u)))
}

/// Reduced amplitude `−i(1+ρ²) n⃗·(e⃗₁×e⃗₂) + β(1−ρ²)(e₁⁽²⁾e₂⁽³⁾ + e₁⁽³⁾e₂⁽²⁾)`.
pub fn reduced_annihilation_amplitude(
    e1: &PhotonPolarization,
    e2: &PhotonPolarization,
    beta: Speed,
    theta: f64,
) -> Amplitude {
    let r2 = beta.rho().value().powi(2);
    let n = outgoing_direction(theta);
    let cross = e1.cross(e2);
    let triple = n[0] * cross[0] + n[1] * cross[1] + n[2] * cross[2];
    let sym = e1.e[1] * e2.e[2] + e1.e[2] * e2.e[1];
    Amplitude(Complex64::new(beta.beta() * (1.0 - r2) * sym, -(1.0 + r2) * triple))
}

/// Evaluates the reduced annihilation amplitude on the linear-polarization
/// basis `{e⃗(χ=π/2), e⃗(χ=0)}` and normalizes.
pub fn extract_photon_state(beta: Speed, theta: f64) -> Result<EntangledState> {
    let basis = [
        photon_polarization(FRAC_PI_2, theta),
        photon_polarization(0.0, theta),
    ];
    let mut coeffs = [[ZERO; 2]; 2];
    for (a, row) in coeffs.iter_mut().enumerate() {
        for (b, c) in row.iter_mut().enumerate() {
            *c = reduced_annihilation_amplitude(&basis[a], &basis[b], beta, theta).0;
        }
    }
    EntangledState::from_unnormalized(coeffs, StateBasis::PhotonLinear)
}

/// Closed-form `θ = π/2` photon state: `i(1+ρ²)` on `(|yz⟩−|zy⟩)/√2` and
/// `−β(1−ρ²)` on `(|yz⟩+|zy⟩)/√2`, normalized.
pub fn photon_state_theta_pi2(beta: Speed) -> EntangledState {
    let r2 = beta.rho().value().powi(2);
    let anti = I * (1.0 + r2);
    let sym = Complex64::new(-beta.beta() * (1.0 - r2), 0.0);
    EntangledState::from_unnormalized(
        [[ZERO, anti + sym], [-anti + sym, ZERO]],
        StateBasis::PhotonLinear,
    )
    .expect("antisymmetric coefficient is at least 1")
}

/// Initial-spin sum of `|A|²` at `θ = π/2` for outgoing spins `xi1`, `xi2`.
pub fn moller_unpolarized_weight(
    xi1: TwoSpinor,
    xi2: TwoSpinor,
    beta: Speed,
) -> Result<SpinSumResult> {
    let mut total = 0.0;
    for s in 0..2 {
        let u1 = incoming_electron_spinor(TwoSpinor::basis(s), Beam::PlusY, beta)?;
        for t in 0..2 {
            let u2 = incoming_electron_spinor(TwoSpinor::basis(t), Beam::MinusY, beta)?;
            total += moller_amplitude_from(&u1, &u2, xi1, xi2, beta, FRAC_PI_2)?
                .0
                .norm_sqr();
        }
    }
    Ok(SpinSumResult(total))
}
