//! Centre-of-momentum kinematics, Dirac spinors and photon polarizations.
//!
//! Everything is expressed in electron-mass units. Initial particles move along
//! `±y`; final particles leave in the `x–z` plane at polar angle `θ` measured
//! from the `z` axis.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest speed accepted by constructions that need `γ` or `(p⁰+m)/2m`.
pub const SPINOR_BETA_LIMIT: f64 = 1.0 - 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Speed as a fraction of `c`, validated into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Speed(f64);

impl Speed {
    pub const ZERO: Speed = Speed(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || !(0.0..=1.0).contains(&beta) {
            return Err(domain(format!("beta must lie in [0, 1], got {beta}")));
        }
        Ok(Speed(beta))
    }

    #[inline]
    pub fn beta(self) -> f64 {
        self.0
    }

    /// Lorentz factor; rejects speeds at or above [`SPINOR_BETA_LIMIT`].
    pub fn gamma(self) -> Result<f64> {
        if self.0 >= SPINOR_BETA_LIMIT {
            return Err(domain(format!(
                "gamma diverges at beta = {}; spinor and momentum constructions need beta < 1",
                self.0
            )));
        }
        Ok(1.0 / (1.0 - self.0 * self.0).sqrt())
    }

    #[inline]
    pub fn rho(self) -> Rho {
        rho_of_beta(self)
    }

    /// The spinor prefactor `(p⁰ + m) / 2m = (γ + 1) / 2`.
    pub fn spinor_norm_factor(self) -> Result<f64> {
        Ok(0.5 * (self.gamma()? + 1.0))
    }
}

impl TryFrom<f64> for Speed {
    type Error = Error;

    fn try_from(beta: f64) -> Result<Self> {
        Speed::new(beta)
    }
}

impl From<Speed> for f64 {
    fn from(s: Speed) -> f64 {
        s.0
    }
}

/// Small-component weight `ρ = γβ/(γ+1)` of a boosted spinor.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rho(f64);

impl Rho {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ρ = β / (1 + √(1−β²))`. This form stays finite at `β = 1`, where it returns 1.
pub fn rho_of_beta(beta: Speed) -> Rho {
    let b = beta.beta();
    Rho(b / (1.0 + (1.0 - b * b).sqrt()))
}

/// Real four-vector `(t, x, y, z)` with metric `diag(+,−,−,−)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    pub fn from_energy_momentum(t: f64, p: [f64; 3]) -> Self {
        FourVector::new(t, p[0], p[1], p[2])
    }

    /// Contravariant components in the order `(t, x, y, z)`.
    pub fn components(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    pub fn invariant_mass_sq(&self) -> f64 {
        self.dot(self)
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

/// Unit vector `(sin θ, 0, cos θ)` along which the first outgoing particle travels.
pub fn outgoing_direction(theta: f64) -> [f64; 3] {
    [theta.sin(), 0.0, theta.cos()]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollerMomenta {
    pub p1: FourVector,
    pub p2: FourVector,
    pub p1_prime: FourVector,
    pub p2_prime: FourVector,
}

/// Møller kinematics: incoming pair along `±y`, outgoing pair at angle `θ` from `z`.
pub fn moller_momenta(beta: Speed, theta: f64) -> Result<MollerMomenta> {
    let gamma = beta.gamma()?;
    let p = gamma * beta.beta();
    let n = outgoing_direction(theta);
    let p1 = FourVector::new(gamma, 0.0, p, 0.0);
    let p1_prime = FourVector::new(gamma, p * n[0], p * n[1], p * n[2]);
    Ok(MollerMomenta {
        p1,
        p2: FourVector::new(gamma, 0.0, -p, 0.0),
        p1_prime,
        p2_prime: FourVector::new(gamma, -p1_prime.x, -p1_prime.y, -p1_prime.z),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnihilationMomenta {
    pub electron: FourVector,
    pub positron: FourVector,
    pub k1: FourVector,
    pub k2: FourVector,
}

/// Pair annihilation kinematics: leptons along `±y`, photons with `|k| = k⁰ = γ`.
pub fn annihilation_momenta(beta: Speed, theta: f64) -> Result<AnnihilationMomenta> {
    let gamma = beta.gamma()?;
    let p = gamma * beta.beta();
    let n = outgoing_direction(theta);
    let k1 = FourVector::new(gamma, gamma * n[0], gamma * n[1], gamma * n[2]);
    Ok(AnnihilationMomenta {
        electron: FourVector::new(gamma, 0.0, p, 0.0),
        positron: FourVector::new(gamma, 0.0, -p, 0.0),
        k1,
        k2: FourVector::new(gamma, -k1.x, -k1.y, -k1.z),
    })
}

/// Pauli two-spinor `(upper, lower)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSpinor {
    pub upper: Complex64,
    pub lower: Complex64,
}

impl TwoSpinor {
    pub const fn new(upper: Complex64, lower: Complex64) -> Self {
        TwoSpinor { upper, lower }
    }

    pub const fn spin_up() -> Self {
        TwoSpinor::new(ONE, ZERO)
    }

    pub const fn spin_down() -> Self {
        TwoSpinor::new(ZERO, ONE)
    }

    /// Basis vector `index` (0 = up, 1 = down).
    pub fn basis(index: usize) -> Self {
        if index == 0 {
            Self::spin_up()
        } else {
            Self::spin_down()
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &TwoSpinor) -> Complex64 {
        self.upper.conj() * other.upper + self.lower.conj() * other.lower
    }

    pub fn scale(&self, k: Complex64) -> TwoSpinor {
        TwoSpinor::new(self.upper * k, self.lower * k)
    }

    /// `(σ⃗·n⃗) ξ` for a real three-vector `n`.
    pub fn sigma_dot(&self, n: [f64; 3]) -> TwoSpinor {
        let (a, b) = (self.upper, self.lower);
        let minus = Complex64::new(n[0], -n[1]);
        let plus = Complex64::new(n[0], n[1]);
        TwoSpinor::new(a * n[2] + minus * b, plus * a - b * n[2])
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.upper, self.lower]
    }
}

/// Which of the two measurement-spinor parametrizations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinConvention {
    /// `(e^{−iχ/2}, e^{iχ/2})/√2`, angle measured from the `x` axis (polarized Møller, `θ = 0`).
    MollerTheta0,
    /// `(−i cos χ/2, sin χ/2)`, angle measured from the `z` axis (unpolarized Møller).
    UnpolarizedZ,
}

pub fn measurement_two_spinor(chi: f64, convention: SpinConvention) -> TwoSpinor {
    match convention {
        SpinConvention::MollerTheta0 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            TwoSpinor::new(
                Complex64::from_polar(s, -0.5 * chi),
                Complex64::from_polar(s, 0.5 * chi),
            )
        }
        SpinConvention::UnpolarizedZ => TwoSpinor::new(
            Complex64::new(0.0, -(0.5 * chi).cos()),
            Complex64::new((0.5 * chi).sin(), 0.0),
        ),
    }
}

/// Four-spinor stored as `components` with the prefactor `(p⁰+m)/2m` kept
/// separately; the physical spinor is `√norm_factor · components`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracSpinor {
    pub components: [Complex64; 4],
    pub norm_factor: f64,
}

impl DiracSpinor {
    pub fn from_blocks(norm_factor: f64, upper: TwoSpinor, lower: TwoSpinor) -> Self {
        DiracSpinor {
            components: [upper.upper, upper.lower, lower.upper, lower.lower],
            norm_factor,
        }
    }

    pub fn upper_block(&self) -> TwoSpinor {
        TwoSpinor::new(self.components[0], self.components[1])
    }

    pub fn lower_block(&self) -> TwoSpinor {
        TwoSpinor::new(self.components[2], self.components[3])
    }

    /// Physical components including the `√((p⁰+m)/2m)` prefactor.
    pub fn full(&self) -> [Complex64; 4] {
        let s = self.norm_factor.sqrt();
        self.components.map(|c| c * s)
    }

    /// `ū v = u† γ⁰ v` for two spinors.
    pub fn bar_dot(&self, other: &DiracSpinor) -> Complex64 {
        let a = self.full();
        let b = other.full();
        a[0].conj() * b[0] + a[1].conj() * b[1] - a[2].conj() * b[2] - a[3].conj() * b[3]
    }

    /// `u† v`.
    pub fn dagger_dot(&self, other: &DiracSpinor) -> Complex64 {
        let a = self.full();
        let b = other.full();
        a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
    }
}

/// Direction of an incoming lepton along the beam (`y`) axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beam {
    PlusY,
    MinusY,
}

/// Incoming electron spinor with arbitrary rest-frame spin `xi`.
pub fn incoming_electron_spinor(xi: TwoSpinor, beam: Beam, beta: Speed) -> Result<DiracSpinor> {
    let norm = beta.spinor_norm_factor()?;
    let sign = match beam {
        Beam::PlusY => 1.0,
        Beam::MinusY => -1.0,
    };
    let rho = beta.rho().value();
    let lower = xi.sigma_dot([0.0, 1.0, 0.0]).scale((sign * rho).into());
    Ok(DiracSpinor::from_blocks(norm, xi, lower))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialElectron {
    /// Spin up along `z`, moving along `+y`.
    SpinUpP1,
    /// Spin down along `z`, moving along `−y`.
    SpinDownP2,
}

pub fn electron_spinor_initial(which: InitialElectron, beta: Speed) -> Result<DiracSpinor> {
    match which {
        InitialElectron::SpinUpP1 => {
            incoming_electron_spinor(TwoSpinor::spin_up(), Beam::PlusY, beta)
        }
        InitialElectron::SpinDownP2 => {
            incoming_electron_spinor(TwoSpinor::spin_down(), Beam::MinusY, beta)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalElectron {
    P1Prime,
    P2Prime,
}

/// Outgoing electron spinor; the lower block is `±ρ (σ⃗·n̂) ξ` with `+` for `p₁′`.
pub fn electron_spinor_final(
    which: FinalElectron,
    xi: TwoSpinor,
    beta: Speed,
    theta: f64,
) -> Result<DiracSpinor> {
    let norm = beta.spinor_norm_factor()?;
    let sign = match which {
        FinalElectron::P1Prime => 1.0,
        FinalElectron::P2Prime => -1.0,
    };
    let rho = beta.rho().value();
    let lower = xi
        .sigma_dot(outgoing_direction(theta))
        .scale((sign * rho).into());
    Ok(DiracSpinor::from_blocks(norm, xi, lower))
}

/// Positron spinor paired with the spin-up electron in pair annihilation.
pub fn positron_spinor(beta: Speed) -> Result<DiracSpinor> {
    let norm = beta.spinor_norm_factor()?;
    let rho = beta.rho().value();
    Ok(DiracSpinor {
        components: [ZERO, I * rho, ONE, ZERO],
        norm_factor: norm,
    })
}

/// Real transverse polarization three-vector of a photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonPolarization {
    pub e: [f64; 3],
}

impl PhotonPolarization {
    /// Polarization four-vector `(0, e⃗)`.
    pub fn four_vector(&self) -> FourVector {
        FourVector::from_energy_momentum(0.0, self.e)
    }

    pub fn dot(&self, v: [f64; 3]) -> f64 {
        self.e[0] * v[0] + self.e[1] * v[1] + self.e[2] * v[2]
    }

    pub fn cross(&self, other: &PhotonPolarization) -> [f64; 3] {
        let (a, b) = (self.e, other.e);
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }
}

/// `e⃗ = (−cos θ cos χ, sin χ, sin θ cos χ)`: at `θ = π/2` this is
/// `(0, sin χ, cos χ)`, an angle `χ` from the `z` axis.
pub fn photon_polarization(chi: f64, theta: f64) -> PhotonPolarization {
    PhotonPolarization {
        e: [
            -theta.cos() * chi.cos(),
            chi.sin(),
            theta.sin() * chi.cos(),
        ],
    }
}
