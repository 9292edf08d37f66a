//! Execution of a validated [`Plan`] and rendering of its results.

use std::fmt::Write as _;

use qedcorr::bell::{s_value, scan, BellResult, BellSettings, ScanReport};
use qedcorr::correlations::{joint, marginal, Detector, Scenario};
use qedcorr::kinematics::Speed;
use qedcorr::verify::{self, VerifyReport};
use serde::Serialize;
use serde_json::json;

use crate::config::{Format, Job, Plan};

/// Rendered output and whether the run counts as successful.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// 17 significant digits, locale independent.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn to_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct EvalRow {
    chi1: f64,
    chi2: f64,
    p_joint: f64,
    p_first: f64,
    p_second: f64,
}

#[derive(Serialize)]
struct SearchRow {
    beta: f64,
    best_s: f64,
    violated: bool,
    chi1: f64,
    chi2: f64,
    chi1p: f64,
    chi2p: f64,
    margin: f64,
    coarse_s: f64,
}

fn degrees(settings: &BellSettings) -> [f64; 4] {
    settings.angles().map(f64::to_degrees)
}

fn search_rows(report: &ScanReport) -> Vec<SearchRow> {
    report
        .points
        .iter()
        .map(|p| {
            let [chi1, chi2, chi1p, chi2p] = degrees(&p.settings);
            SearchRow {
                beta: p.beta.beta(),
                best_s: p.best.s,
                violated: p.best.violated,
                chi1,
                chi2,
                chi1p,
                chi2p,
                margin: p.best.margin,
                coarse_s: p.coarse.s,
            }
        })
        .collect()
}

fn render_search(report: &ScanReport, format: Format) -> anyhow::Result<String> {
    let rows = search_rows(report);
    match format {
        Format::Csv => {
            let mut out = String::from("beta,best_s,chi1,chi2,chi1p,chi2p,margin\n");
            for r in &rows {
                out += &csv_line(&[
                    num(r.beta),
                    num(r.best_s),
                    num(r.chi1),
                    num(r.chi2),
                    num(r.chi1p),
                    num(r.chi2p),
                    num(r.margin),
                ]);
            }
            Ok(out)
        }
        Format::Json => to_json(&json!({
            "scenario": report.scenario,
            "step_deg": report.options.coarse_step.to_degrees(),
            "refine": report.options.refine,
            "violation_range": report.violation_range.map(|r| json!({
                "from": r.from.beta(),
                "to": r.to.beta(),
                "count": r.count,
            })),
            "points": rows,
        })),
    }
}

fn render_fixed_sweep(
    scenario: Scenario,
    rows: &[(Speed, BellResult)],
    angles: [f64; 4],
    format: Format,
) -> anyhow::Result<String> {
    match format {
        Format::Csv => {
            let mut out = String::from("beta,s,violated,margin\n");
            for (b, r) in rows {
                out += &csv_line(&[num(b.beta()), num(r.s), r.violated.to_string(), num(r.margin)]);
            }
            Ok(out)
        }
        Format::Json => to_json(&json!({
            "scenario": scenario,
            "chi1": angles[0],
            "chi2": angles[1],
            "chi1p": angles[2],
            "chi2p": angles[3],
            "points": rows.iter().map(|(b, r)| json!({
                "beta": b.beta(),
                "s": r.s,
                "violated": r.violated,
                "margin": r.margin,
            })).collect::<Vec<_>>(),
        })),
    }
}

fn render_verify(report: &VerifyReport, format: Format) -> anyhow::Result<String> {
    if format == Format::Json {
        return to_json(&json!({ "passed": report.passed(), "checks": report.checks }));
    }
    let mut out = String::new();
    for c in &report.checks {
        writeln!(
            out,
            "{}  {:<52} samples={:<5} max_residual={:.3e} tolerance={:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.samples,
            c.max_residual,
            c.tolerance
        )?;
    }
    let failed = report.failures().count();
    writeln!(out, "{} of {} checks passed", report.checks.len() - failed, report.checks.len())?;
    Ok(out)
}

pub fn execute(plan: &Plan) -> anyhow::Result<Outcome> {
    let format = plan.format;
    let ok = |text| Ok(Outcome { text, passed: true });
    match &plan.job {
        Job::Eval {
            scenario,
            beta,
            pairs,
        } => {
            let rows: Vec<EvalRow> = pairs
                .iter()
                .map(|(a, b)| EvalRow {
                    chi1: a.degrees,
                    chi2: b.degrees,
                    p_joint: joint(*scenario, *beta, a.radians, b.radians),
                    p_first: marginal(*scenario, *beta, Detector::First, a.radians),
                    p_second: marginal(*scenario, *beta, Detector::Second, b.radians),
                })
                .collect();
            match format {
                Format::Csv => {
                    let mut out = String::from("chi1,chi2,p_joint,p_first,p_second\n");
                    for r in &rows {
                        out += &csv_line(&[
                            num(r.chi1),
                            num(r.chi2),
                            num(r.p_joint),
                            num(r.p_first),
                            num(r.p_second),
                        ]);
                    }
                    ok(out)
                }
                Format::Json => ok(to_json(&json!({
                    "scenario": scenario,
                    "beta": beta.beta(),
                    "rows": rows,
                }))?),
            }
        }
        Job::Bell { settings, degrees } => {
            let r = s_value(settings);
            match format {
                Format::Csv => {
                    let mut out = String::from("s,violated,margin\n");
                    out += &csv_line(&[num(r.s), r.violated.to_string(), num(r.margin)]);
                    ok(out)
                }
                Format::Json => ok(to_json(&json!({
                    "command": "bell",
                    "scenario": settings.scenario,
                    "beta": settings.beta.beta(),
                    "chi1": degrees[0],
                    "chi2": degrees[1],
                    "chi1p": degrees[2],
                    "chi2p": degrees[3],
                    "s": r.s,
                    "violated": r.violated,
                    "margin": r.margin,
                }))?),
            }
        }
        Job::Scan {
            scenario,
            betas,
            options,
        }
        | Job::SweepSearch {
            scenario,
            betas,
            options,
        } => {
            let report = scan(*scenario, betas, options)?;
            if let Some(r) = report.violation_range {
                eprintln!(
                    "violations found for beta in [{}, {}] ({} grid points)",
                    r.from.beta(),
                    r.to.beta(),
                    r.count
                );
            } else {
                eprintln!("no violation found on this grid");
            }
            ok(render_search(&report, format)?)
        }
        Job::SweepFixed {
            scenario,
            betas,
            angles,
        } => {
            let rows: Vec<(Speed, BellResult)> = betas
                .iter()
                .map(|&b| (b, s_value(&BellSettings::new(*scenario, b, angles.radians))))
                .collect();
            ok(render_fixed_sweep(*scenario, &rows, angles.degrees, format)?)
        }
        Job::Verify(opts) => {
            let report = verify::run(opts)?;
            Ok(Outcome {
                text: render_verify(&report, format)?,
                passed: report.passed(),
            })
        }
    }
}
