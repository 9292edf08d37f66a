//! The Clauser–Horne functional, its local-hidden-variable self-test and the
//! search for settings that push it outside `[−1, 0]`.

mod nelder_mead;
mod scan;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::correlations::{joint, marginal, Detector, Scenario};
use crate::kinematics::Speed;

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};
pub use scan::{scan, ScanOptions, ScanPoint, ScanReport, ViolationRange, DEFAULT_COARSE_STEP};

/// Guard band applied before declaring a violation.
pub const VIOLATION_GUARD: f64 = 1e-12;

/// Scenario, speed and the four analyzer angles (radians, kept in `[0, 2π)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellSettings {
    pub scenario: Scenario,
    pub beta: Speed,
    pub chi1: f64,
    pub chi2: f64,
    pub chi1p: f64,
    pub chi2p: f64,
}

impl BellSettings {
    /// Angles are given as `[χ₁, χ₂, χ₁′, χ₂′]`.
    pub fn new(scenario: Scenario, beta: Speed, angles: [f64; 4]) -> Self {
        let [chi1, chi2, chi1p, chi2p] = angles.map(normalize_angle);
        BellSettings {
            scenario,
            beta,
            chi1,
            chi2,
            chi1p,
            chi2p,
        }
    }

    pub fn angles(&self) -> [f64; 4] {
        [self.chi1, self.chi2, self.chi1p, self.chi2p]
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellResult {
    pub s: f64,
    pub violated: bool,
    /// Distance of `s` outside `[−1, 0]`, zero inside.
    pub margin: f64,
}

impl BellResult {
    pub fn from_s(s: f64) -> Self {
        BellResult {
            s,
            violated: s > VIOLATION_GUARD || s < -1.0 - VIOLATION_GUARD,
            margin: s.max(-1.0 - s).max(0.0),
        }
    }

    /// Signed distance to the nearest bound; negative inside `[−1, 0]`.
    pub fn excess(&self) -> f64 {
        signed_excess(self.s)
    }
}

pub(crate) fn signed_excess(s: f64) -> f64 {
    s.max(-1.0 - s)
}

/// `S` from arbitrary joint and single-detector probabilities, with angles
/// ordered `[χ₁, χ₂, χ₁′, χ₂′]`.
pub fn s_functional<J, M1, M2>(p: J, first: M1, second: M2, angles: [f64; 4]) -> f64
where
    J: Fn(f64, f64) -> f64,
    M1: Fn(f64) -> f64,
    M2: Fn(f64) -> f64,
{
    let [a, b, ap, bp] = angles;
    p(a, b) - p(a, bp) + p(ap, b) + p(ap, bp) - first(ap) - second(b)
}

pub fn s_value(settings: &BellSettings) -> BellResult {
    let sc = settings.scenario;
    let beta = settings.beta;
    let s = s_functional(
        |a, b| joint(sc, beta, a, b),
        |a| marginal(sc, beta, Detector::First, a),
        |b| marginal(sc, beta, Detector::Second, b),
        settings.angles(),
    );
    BellResult::from_s(s)
}

/// A local deterministic assignment: whether each detector fires for its
/// unprimed and primed setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub first: [bool; 2],
    pub second: [bool; 2],
}

impl DeterministicStrategy {
    /// All sixteen strategies, indexed by the bits `(first, first′, second, second′)`.
    pub fn all() -> impl Iterator<Item = DeterministicStrategy> {
        (0u8..16).map(|bits| DeterministicStrategy {
            first: [bits & 1 != 0, bits & 2 != 0],
            second: [bits & 4 != 0, bits & 8 != 0],
        })
    }

    fn outcome(fires: [bool; 2], setting: usize) -> f64 {
        if fires[setting] {
            1.0
        } else {
            0.0
        }
    }

    /// `S` with probabilities taken from the fixed outcomes; settings are
    /// labelled by angle `0` (unprimed) and `1` (primed).
    pub fn s(&self) -> f64 {
        let f = |x: f64| Self::outcome(self.first, x as usize);
        let g = |x: f64| Self::outcome(self.second, x as usize);
        s_functional(|a, b| f(a) * g(b), f, g, [0.0, 0.0, 1.0, 1.0])
    }
}

/// `S` for a convex mixture of deterministic strategies. Probabilities are
/// averaged first, then combined.
pub fn mixture_s(weighted: &[(f64, DeterministicStrategy)]) -> f64 {
    let total: f64 = weighted.iter().map(|(w, _)| w).sum();
    let avg = |term: &dyn Fn(&DeterministicStrategy) -> f64| {
        weighted.iter().map(|(w, st)| w * term(st)).sum::<f64>() / total
    };
    let one = |fires: [bool; 2], x: f64| DeterministicStrategy::outcome(fires, x as usize);
    s_functional(
        |a, b| avg(&|st| one(st.first, a) * one(st.second, b)),
        |a| avg(&|st| one(st.first, a)),
        |b| avg(&|st| one(st.second, b)),
        [0.0, 0.0, 1.0, 1.0],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvCheck {
    pub values: Vec<(DeterministicStrategy, f64)>,
    pub min: f64,
    pub max: f64,
    pub passed: bool,
}

/// Enumerates all deterministic strategies and checks that every `S` lies in
/// `[−1, 0]` with both endpoints attained.
pub fn lhv_bound_check() -> LhvCheck {
    let values: Vec<_> = DeterministicStrategy::all().map(|st| (st, st.s())).collect();
    let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let passed = values.iter().all(|v| (-1.0..=0.0).contains(&v.1)) && min == -1.0 && max == 0.0;
    LhvCheck {
        values,
        min,
        max,
        passed,
    }
}
