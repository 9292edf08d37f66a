//! Exhaustive coarse grid over the four analyzer angles followed by an
//! optional simplex polish, repeated for each speed on a grid.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{minimize, NelderMeadOptions};
use super::{s_value, signed_excess, BellResult, BellSettings};
use crate::correlations::{joint, marginal, Detector, Scenario};
use crate::error::{domain, Result};
use crate::kinematics::Speed;

/// 3° in radians.
pub const DEFAULT_COARSE_STEP: f64 = PI / 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Grid spacing per angle, in `(0, π/4]`.
    pub coarse_step: f64,
    pub refine: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            coarse_step: DEFAULT_COARSE_STEP,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub beta: Speed,
    /// Best grid point.
    pub coarse: BellResult,
    pub coarse_settings: BellSettings,
    /// Best of the grid point and its polished version.
    pub best: BellResult,
    pub settings: BellSettings,
}

/// First and last speed of the longest run of consecutive grid entries with
/// a violation. A statement about what the search found, not a proof that
/// nothing exists outside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationRange {
    pub from: Speed,
    pub to: Speed,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub scenario: Scenario,
    pub options: ScanOptions,
    pub points: Vec<ScanPoint>,
    pub violation_range: Option<ViolationRange>,
}

impl ScanReport {
    pub fn beta_grid(&self) -> Vec<Speed> {
        self.points.iter().map(|p| p.beta).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    margin: f64,
    abs_s: f64,
    idx: [usize; 4],
}

impl Candidate {
    /// `Greater` when `self` should replace `other`; index order decides last,
    /// smaller indices winning.
    fn rank(&self, other: &Candidate) -> Ordering {
        self.margin
            .total_cmp(&other.margin)
            .then(self.abs_s.total_cmp(&other.abs_s))
            .then(other.idx.cmp(&self.idx))
    }
}

fn grid_angles(step: f64) -> Vec<f64> {
    let n = (PI / step - 1e-9).ceil() as usize;
    (0..n).map(|i| i as f64 * step).collect()
}

fn coarse_search(scenario: Scenario, beta: Speed, angles: &[f64]) -> Candidate {
    let n = angles.len();
    let table: Vec<f64> = angles
        .iter()
        .flat_map(|&a| angles.iter().map(move |&b| joint(scenario, beta, a, b)))
        .collect();
    let first: Vec<f64> = angles
        .iter()
        .map(|&a| marginal(scenario, beta, Detector::First, a))
        .collect();
    let second: Vec<f64> = angles
        .iter()
        .map(|&b| marginal(scenario, beta, Detector::Second, b))
        .collect();
    let p = |i: usize, j: usize| table[i * n + j];

    let per_row: Vec<Candidate> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<Candidate> = None;
            for j in 0..n {
                let fixed = p(i, j) - second[j];
                for k in 0..n {
                    let pk = p(k, j) - first[k];
                    for l in 0..n {
                        let s = fixed - p(i, l) + pk + p(k, l);
                        let margin = s.max(-1.0 - s).max(0.0);
                        let c = Candidate {
                            margin,
                            abs_s: s.abs(),
                            idx: [i, j, k, l],
                        };
                        if best.map_or(true, |b| c.rank(&b) == Ordering::Greater) {
                            best = Some(c);
                        }
                    }
                }
            }
            best.expect("grid has at least one angle")
        })
        .collect();

    per_row
        .into_iter()
        .reduce(|acc, c| if c.rank(&acc) == Ordering::Greater { c } else { acc })
        .expect("grid has at least one angle")
}

fn refine(start: &BellSettings, step: f64) -> BellSettings {
    let objective = |x: &[f64; 4]| {
        let s = s_value(&BellSettings::new(start.scenario, start.beta, *x));
        -signed_excess(s.s)
    };
    let opts = NelderMeadOptions {
        initial_step: 0.5 * step,
        ..NelderMeadOptions::default()
    };
    let m = minimize(objective, start.angles(), &opts);
    BellSettings::new(start.scenario, start.beta, m.x)
}

fn scan_one(scenario: Scenario, beta: Speed, angles: &[f64], opts: &ScanOptions) -> ScanPoint {
    let c = coarse_search(scenario, beta, angles);
    let coarse_settings = BellSettings::new(scenario, beta, c.idx.map(|i| angles[i]));
    let coarse = s_value(&coarse_settings);
    let (best, settings) = if opts.refine {
        let polished = refine(&coarse_settings, opts.coarse_step);
        let r = s_value(&polished);
        if r.excess() > coarse.excess() {
            (r, polished)
        } else {
            (coarse, coarse_settings)
        }
    } else {
        (coarse, coarse_settings)
    };
    ScanPoint {
        beta,
        coarse,
        coarse_settings,
        best,
        settings,
    }
}

fn longest_violation_run(points: &[ScanPoint]) -> Option<ViolationRange> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, p) in points.iter().enumerate() {
        if p.best.violated {
            let s = *start.get_or_insert(i);
            if best.map_or(true, |(a, b)| i + 1 - s > b + 1 - a) {
                best = Some((s, i));
            }
        } else {
            start = None;
        }
    }
    best.map(|(a, b)| ViolationRange {
        from: points[a].beta,
        to: points[b].beta,
        count: b + 1 - a,
    })
}

/// Searches each speed of `betas`, in order, for the settings with the largest
/// violation margin.
pub fn scan(scenario: Scenario, betas: &[Speed], opts: &ScanOptions) -> Result<ScanReport> {
    if betas.is_empty() {
        return Err(domain("scan needs at least one beta"));
    }
    let step = opts.coarse_step;
    if !(step > 0.0 && step <= FRAC_PI_4) {
        return Err(domain(format!("coarse step must lie in (0, pi/4], got {step}")));
    }
    let angles = grid_angles(step);
    let points: Vec<ScanPoint> = betas
        .iter()
        .map(|&b| scan_one(scenario, b, &angles, opts))
        .collect();
    let violation_range = longest_violation_run(&points);
    Ok(ScanReport {
        scenario,
        options: *opts,
        points,
        violation_range,
    })
}
