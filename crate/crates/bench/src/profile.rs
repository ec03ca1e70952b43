//! Performance profiles over relative solution error, and their SVG/CSV
//! rendering.
//!
//! For problem `p` and solver `s`, the ratio is `err(p, s) / min_t err(p, t)`
//! with the minimum over successful runs; failed, errored and missing runs
//! get `+∞`. The curve of `s` at `τ` is the fraction of problems whose ratio
//! is at most `τ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qls_core::UNIT_ROUNDOFF;

use crate::config::SolverKind;
use crate::error::{BenchError, Result};
use crate::suite::BenchRecord;

/// Grid points per decade of `τ`.
pub const TAU_STEPS_PER_DECADE: usize = 10;
pub const TAU_MAX_EXPONENT: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub solver: SolverKind,
    /// `(τ, fraction)` on the grid `τ = 10^(i/10)`, `i = 0..=160`.
    pub points: Vec<(f64, f64)>,
}

impl ProfileCurve {
    pub fn fraction_at(&self, i: usize) -> f64 {
        self.points[i].1
    }

    /// Fraction of problems the solver solved at all.
    pub fn success_rate(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.1)
    }
}

pub fn tau_grid() -> Vec<f64> {
    (0..=TAU_STEPS_PER_DECADE * TAU_MAX_EXPONENT)
        .map(|i| 10f64.powf(i as f64 / TAU_STEPS_PER_DECADE as f64))
        .collect()
}

/// Ratio of each solver to the best successful solver on each problem.
/// Errors are floored at `u` so an exact solve does not make every other
/// ratio infinite.
pub fn performance_ratios(records: &[BenchRecord]) -> Result<BTreeMap<SolverKind, Vec<f64>>> {
    let problems: BTreeSet<&str> = records.iter().map(|r| r.problem_id.as_str()).collect();
    let solvers: BTreeSet<SolverKind> = records.iter().map(|r| r.solver).collect();
    if problems.is_empty() || solvers.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let mut err: BTreeMap<(&str, SolverKind), f64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_success()) {
        err.insert((r.problem_id.as_str(), r.solver), r.rel_error.max(UNIT_ROUNDOFF));
    }
    let mut ratios: BTreeMap<SolverKind, Vec<f64>> = solvers.iter().map(|s| (*s, Vec::new())).collect();
    for p in &problems {
        let best = solvers
            .iter()
            .filter_map(|s| err.get(&(*p, *s)))
            .fold(f64::INFINITY, |a, &b| a.min(b));
        for s in &solvers {
            let ratio = err.get(&(*p, *s)).map_or(f64::INFINITY, |e| e / best);
            ratios.get_mut(s).expect("solver present").push(ratio);
        }
    }
    Ok(ratios)
}

pub fn performance_profile(records: &[BenchRecord]) -> Result<Vec<ProfileCurve>> {
    let ratios = performance_ratios(records)?;
    let grid = tau_grid();
    Ok(ratios
        .into_iter()
        .map(|(solver, rs)| {
            let total = rs.len() as f64;
            let points = grid
                .iter()
                .map(|&tau| {
                    // tolerate the rounding in 10^(i/10) at the grid points
                    let cut = tau * (1.0 + 4.0 * UNIT_ROUNDOFF);
                    (tau, rs.iter().filter(|&&r| r <= cut).count() as f64 / total)
                })
                .collect();
            ProfileCurve { solver, points }
        })
        .collect())
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Standalone SVG step plot with a log₁₀ τ axis, one polyline per curve and
/// a legend.
pub fn profile_svg(curves: &[ProfileCurve]) -> Result<String> {
    if curves.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let tau_max = curves
        .iter()
        .filter_map(|c| c.points.last())
        .map(|p| p.0.log10())
        .fold(1.0, f64::max);
    let px = |tau: f64| MARGIN_LEFT + plot_w * tau.log10() / tau_max;
    let py = |frac: f64| MARGIN_TOP + plot_h * (1.0 - frac);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for d in 0..=tau_max as usize {
        let x = px(10f64.powi(d as i32));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0,
            MARGIN_TOP + plot_h + 18.0
        );
    }
    for k in 0..=4 {
        let frac = k as f64 / 4.0;
        let y = py(frac);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{frac}</text>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">τ (log scale)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );

    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut pts = Vec::with_capacity(2 * c.points.len());
        let mut prev: Option<f64> = None;
        for &(tau, frac) in &c.points {
            let x = px(tau);
            if let Some(py_prev) = prev {
                pts.push(format!("{x:.2},{py_prev:.2}"));
            }
            let y = py(frac);
            pts.push(format!("{x:.2},{y:.2}"));
            prev = Some(y);
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN_TOP + 15.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            c.solver
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Long-format curve points: `solver,tau,fraction`.
pub fn profile_csv(curves: &[ProfileCurve]) -> String {
    let mut s = String::from("solver,tau,fraction\n");
    for c in curves {
        for (tau, frac) in &c.points {
            let _ = writeln!(s, "{},{tau:e},{frac}", c.solver);
        }
    }
    s
}

/// Writes the SVG to `path` and the curve points next to it with a `.csv`
/// extension. Returns the CSV path.
pub fn emit_profile_svg(curves: &[ProfileCurve], path: &Path) -> Result<PathBuf> {
    let svg = profile_svg(curves)?;
    std::fs::write(path, svg).map_err(|e| BenchError::io(path, e))?;
    let csv_path = path.with_extension("csv");
    std::fs::write(&csv_path, profile_csv(curves)).map_err(|e| BenchError::io(&csv_path, e))?;
    Ok(csv_path)
}
