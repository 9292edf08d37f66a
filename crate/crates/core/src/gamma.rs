//! Dirac matrices in the Dirac–Pauli representation, spinor bilinears by
//! direct contraction, and the closed-form bilinears used as oracles.
//!
//! Metric is `diag(+,−,−,−)`, `ū = u†γ⁰` and `ε₁₂₃ = +1`.
//!
//! The closed forms agree with direct contraction with no residual phase for
//! every family. One printed column needs a sign fix: the `δ^{j3}` column of
//! `ū(p₁′)γʲu(p₁)` is `ρ(cos θ, −i + sin θ)`; the other form fails the
//! contraction check and also fails to reproduce the `θ = 0` amplitude.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::kinematics::{
    electron_spinor_final, electron_spinor_initial, positron_spinor, DiracSpinor, FinalElectron,
    FourVector, InitialElectron, Speed, TwoSpinor,
};

pub type BilinearResult = Complex64;

/// Diagonal of the Minkowski metric.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

const O: Complex64 = Complex64::new(0.0, 0.0);
const R: Complex64 = Complex64::new(1.0, 0.0);
const M: Complex64 = Complex64::new(-1.0, 0.0);
const J: Complex64 = Complex64::new(0.0, 1.0);
const MJ: Complex64 = Complex64::new(0.0, -1.0);

/// Row-major 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[Complex64; 4]; 4]);

static GAMMA: [ComplexMatrix4; 4] = [
    ComplexMatrix4([[R, O, O, O], [O, R, O, O], [O, O, M, O], [O, O, O, M]]),
    ComplexMatrix4([[O, O, O, R], [O, O, R, O], [O, M, O, O], [M, O, O, O]]),
    ComplexMatrix4([[O, O, O, MJ], [O, O, J, O], [O, J, O, O], [MJ, O, O, O]]),
    ComplexMatrix4([[O, O, R, O], [O, O, O, M], [M, O, O, O], [O, R, O, O]]),
];

impl ComplexMatrix4 {
    pub const fn zero() -> Self {
        ComplexMatrix4([[O; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = R;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ComplexMatrix4(self.0.map(|row| row.map(|x| x * k)))
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [O; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// Ordered product of a list of matrices; the empty product is the identity.
    pub fn product(ms: &[ComplexMatrix4]) -> Self {
        ms.iter().fold(Self::identity(), |acc, m| acc * *m)
    }
}

impl Mul for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = O;
                for k in 0..4 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }
}

impl Add for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn add(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }
}

impl Sub for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn sub(self, rhs: ComplexMatrix4) -> ComplexMatrix4 {
        self + (-rhs)
    }
}

impl Neg for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn neg(self) -> ComplexMatrix4 {
        self.scale(M)
    }
}

impl Mul<f64> for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, k: f64) -> ComplexMatrix4 {
        self.scale(Complex64::new(k, 0.0))
    }
}

/// `γ^μ` for `μ ∈ {0, 1, 2, 3}`.
pub fn gamma(mu: usize) -> Result<ComplexMatrix4> {
    GAMMA
        .get(mu)
        .copied()
        .ok_or_else(|| domain(format!("gamma index must be 0..=3, got {mu}")))
}

/// `γk = Σ_μ g_μμ k^μ γ^μ`.
pub fn slash(k: &FourVector) -> ComplexMatrix4 {
    let c = k.components();
    (0..4).fold(ComplexMatrix4::zero(), |acc, mu| {
        acc + GAMMA[mu] * (METRIC[mu] * c[mu])
    })
}

/// `ū_bar Γ u` with `Γ` the ordered product of `gammas` and `ū = u†γ⁰`.
pub fn bilinear(u_bar: &DiracSpinor, gammas: &[ComplexMatrix4], u: &DiracSpinor) -> BilinearResult {
    let gu = ComplexMatrix4::product(gammas).apply(&u.full());
    let g0gu = GAMMA[0].apply(&gu);
    u_bar
        .full()
        .iter()
        .zip(g0gu.iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Vector current `J^μ = ū γ^μ u`, upper index.
pub fn current(u_bar: &DiracSpinor, u: &DiracSpinor) -> [Complex64; 4] {
    let mut j = [O; 4];
    for (mu, g) in GAMMA.iter().enumerate() {
        j[mu] = bilinear(u_bar, std::slice::from_ref(g), u);
    }
    j
}

/// `a^μ b_μ` for complex four-vectors.
pub fn minkowski_contract(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    (0..4).map(|mu| a[mu] * b[mu] * METRIC[mu]).sum()
}

/// `ε_{ijk}` for 1-based spatial indices, `ε₁₂₃ = +1`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// The eight Møller matrix elements `ū(final) Γ u(initial)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MollerBilinear {
    /// `ū(p₁′)γ⁰u(p₁)`
    TimeP1pP1,
    /// `ū(p₂′)γ⁰u(p₂)`
    TimeP2pP2,
    /// `ū(p₁′)γ⁰u(p₂)`
    TimeP1pP2,
    /// `ū(p₂′)γ⁰u(p₁)`
    TimeP2pP1,
    /// `ū(p₁′)γʲu(p₁)`
    SpaceP1pP1,
    /// `ū(p₂′)γʲu(p₂)`
    SpaceP2pP2,
    /// `ū(p₁′)γʲu(p₂)`
    SpaceP1pP2,
    /// `ū(p₂′)γʲu(p₁)`
    SpaceP2pP1,
}

impl MollerBilinear {
    pub const ALL: [MollerBilinear; 8] = [
        MollerBilinear::TimeP1pP1,
        MollerBilinear::TimeP2pP2,
        MollerBilinear::TimeP1pP2,
        MollerBilinear::TimeP2pP1,
        MollerBilinear::SpaceP1pP1,
        MollerBilinear::SpaceP2pP2,
        MollerBilinear::SpaceP1pP2,
        MollerBilinear::SpaceP2pP1,
    ];

    pub fn is_temporal(self) -> bool {
        matches!(
            self,
            MollerBilinear::TimeP1pP1
                | MollerBilinear::TimeP2pP2
                | MollerBilinear::TimeP1pP2
                | MollerBilinear::TimeP2pP1
        )
    }

    pub fn outgoing(self) -> FinalElectron {
        use MollerBilinear::*;
        match self {
            TimeP1pP1 | TimeP1pP2 | SpaceP1pP1 | SpaceP1pP2 => FinalElectron::P1Prime,
            _ => FinalElectron::P2Prime,
        }
    }

    pub fn incoming(self) -> InitialElectron {
        use MollerBilinear::*;
        match self {
            TimeP1pP1 | TimeP2pP1 | SpaceP1pP1 | SpaceP2pP1 => InitialElectron::SpinUpP1,
            _ => InitialElectron::SpinDownP2,
        }
    }

    /// Lorentz indices carried by this element (`[0]` or `[1, 2, 3]`).
    pub fn indices(self) -> &'static [usize] {
        if self.is_temporal() {
            &[0]
        } else {
            &[1, 2, 3]
        }
    }
}

/// Two-component columns `c` such that the bilinear equals `ξ†c`; one column
/// for `γ⁰` elements and one per spatial index `j = 1, 2, 3` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearColumns {
    pub columns: Vec<[Complex64; 2]>,
}

impl BilinearColumns {
    /// `ξ†c` for each column.
    pub fn contract(&self, xi: &TwoSpinor) -> Vec<BilinearResult> {
        self.columns
            .iter()
            .map(|c| xi.upper.conj() * c[0] + xi.lower.conj() * c[1])
            .collect()
    }
}

/// Closed-form Møller matrix element, prefactor `(p⁰+m)/2m` included.
pub fn closed_form_moller_bilinear(
    kind: MollerBilinear,
    beta: Speed,
    theta: f64,
) -> Result<BilinearColumns> {
    let norm = beta.spinor_norm_factor()?;
    Ok(closed_form_moller_columns(kind, norm, beta.rho().value(), theta))
}

pub(crate) fn closed_form_moller_columns(
    kind: MollerBilinear,
    norm: f64,
    rho: f64,
    theta: f64,
) -> BilinearColumns {
    use MollerBilinear::*;
    let (s, c) = theta.sin_cos();
    let r2 = rho * rho;
    let cx = |re: f64, im: f64| Complex64::new(re, im);
    let columns: Vec<[Complex64; 2]> = match kind {
        TimeP1pP1 => vec![[cx(1.0, r2 * s), cx(0.0, -r2 * c)]],
        TimeP2pP2 => vec![[cx(0.0, -r2 * c), cx(1.0, -r2 * s)]],
        TimeP1pP2 => vec![[cx(0.0, r2 * c), cx(1.0, r2 * s)]],
        TimeP2pP1 => vec![[cx(1.0, -r2 * s), cx(0.0, r2 * c)]],
        SpaceP1pP1 => vec![
            [cx(s, 1.0), cx(-c, 0.0)],
            [J * cx(s, -1.0), J * cx(-c, 0.0)],
            [cx(c, 0.0), cx(s, -1.0)],
        ],
        SpaceP2pP2 => vec![
            [cx(-c, 0.0), cx(-s, 1.0)],
            [J * cx(c, 0.0), J * cx(s, 1.0)],
            [cx(s, 1.0), cx(-c, 0.0)],
        ],
        SpaceP1pP2 => vec![
            [cx(c, 0.0), cx(s, 1.0)],
            [J * cx(-c, 0.0), J * cx(-s, 1.0)],
            [cx(-s, 1.0), cx(c, 0.0)],
        ],
        SpaceP2pP1 => vec![
            [cx(-s, 1.0), cx(c, 0.0)],
            [MJ * cx(s, 1.0), MJ * cx(-c, 0.0)],
            [cx(-c, 0.0), cx(-s, -1.0)],
        ],
    };
    let scale = if kind.is_temporal() { norm } else { norm * rho };
    BilinearColumns {
        columns: columns
            .into_iter()
            .map(|col| col.map(|z| z * scale))
            .collect(),
    }
}

/// Same element by direct contraction of the explicit spinors.
pub fn numeric_moller_bilinear(
    kind: MollerBilinear,
    xi: TwoSpinor,
    beta: Speed,
    theta: f64,
) -> Result<Vec<BilinearResult>> {
    let outgoing = electron_spinor_final(kind.outgoing(), xi, beta, theta)?;
    let incoming = electron_spinor_initial(kind.incoming(), beta)?;
    Ok(kind
        .indices()
        .iter()
        .map(|&mu| bilinear(&outgoing, &[GAMMA[mu]], &incoming))
        .collect())
}

/// Pair-annihilation matrix elements `v̄ Γ u`, spatial indices 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnihilationBilinear {
    /// `v̄ γⁱγ⁰γʲ u`
    SpaceTimeSpace { i: usize, j: usize },
    /// `v̄ γⁱ u`
    Space { i: usize },
    /// `v̄ γⁱγᵐγʲ u`
    SpaceSpaceSpace { i: usize, m: usize, j: usize },
}

impl AnnihilationBilinear {
    fn check(self) -> Result<()> {
        let ok = |k: usize| (1..=3).contains(&k);
        let valid = match self {
            AnnihilationBilinear::SpaceTimeSpace { i, j } => ok(i) && ok(j),
            AnnihilationBilinear::Space { i } => ok(i),
            AnnihilationBilinear::SpaceSpaceSpace { i, m, j } => ok(i) && ok(m) && ok(j),
        };
        if valid {
            Ok(())
        } else {
            Err(domain(format!("spatial indices must be 1..=3 in {self:?}")))
        }
    }

    pub fn gammas(self) -> Result<Vec<ComplexMatrix4>> {
        self.check()?;
        Ok(match self {
            AnnihilationBilinear::SpaceTimeSpace { i, j } => vec![GAMMA[i], GAMMA[0], GAMMA[j]],
            AnnihilationBilinear::Space { i } => vec![GAMMA[i]],
            AnnihilationBilinear::SpaceSpaceSpace { i, m, j } => {
                vec![GAMMA[i], GAMMA[m], GAMMA[j]]
            }
        })
    }

    /// Every valid index combination, in a fixed order.
    pub fn all() -> Vec<AnnihilationBilinear> {
        let mut out = Vec::with_capacity(39);
        for i in 1..=3 {
            for j in 1..=3 {
                out.push(AnnihilationBilinear::SpaceTimeSpace { i, j });
            }
        }
        for i in 1..=3 {
            out.push(AnnihilationBilinear::Space { i });
        }
        for i in 1..=3 {
            for m in 1..=3 {
                for j in 1..=3 {
                    out.push(AnnihilationBilinear::SpaceSpaceSpace { i, m, j });
                }
            }
        }
        out
    }
}

pub fn closed_form_annihilation_bilinear(
    kind: AnnihilationBilinear,
    beta: Speed,
) -> Result<BilinearResult> {
    kind.check()?;
    let norm = beta.spinor_norm_factor()?;
    Ok(closed_form_annihilation_value(kind, norm, beta.rho().value()))
}

pub(crate) fn closed_form_annihilation_value(
    kind: AnnihilationBilinear,
    norm: f64,
    rho: f64,
) -> BilinearResult {
    let r2 = rho * rho;
    match kind {
        AnnihilationBilinear::SpaceTimeSpace { i, j } => {
            Complex64::new(0.0, norm * 2.0 * levi_civita(i, j, 2) * rho)
        }
        AnnihilationBilinear::Space { i } => Complex64::new(norm * (1.0 - r2) * delta(i, 3), 0.0),
        AnnihilationBilinear::SpaceSpaceSpace { i, m, j } => {
            let sym = -delta(m, j) * delta(i, 3) - delta(m, i) * delta(j, 3)
                + delta(i, j) * delta(m, 3);
            Complex64::new(
                norm * sym * (1.0 - r2),
                -norm * (1.0 + r2) * levi_civita(i, m, j),
            )
        }
    }
}

/// Same element by direct contraction of the electron and positron spinors.
pub fn numeric_annihilation_bilinear(
    kind: AnnihilationBilinear,
    beta: Speed,
) -> Result<BilinearResult> {
    let gammas = kind.gammas()?;
    let u = electron_spinor_initial(InitialElectron::SpinUpP1, beta)?;
    let v = positron_spinor(beta)?;
    Ok(bilinear(&v, &gammas, &u))
}
