use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::sweep::{SweepFits, SweepRecord};
use crate::error::{Error, Result};
use crate::solver::TraceRow;

pub const CSV_HEADER: &str =
    "m,sigma,r0,A,delta_s,lambda_flow,lambda_identity,convexity_defect,dist_xm,energy,converged";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let cols = [r.m, r.sigma, r.r0, r.asymmetry, r.deficit, r.lambda_flow, r.lambda_identity, r.convexity_defect, r.dist_xm, r.energy];
        let joined: Vec<String> = cols.iter().map(|x| num(*x)).collect();
        let _ = writeln!(out, "{},{}", joined.join(","), r.converged);
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &[TraceRow]) -> Result<()> {
    let mut out = String::from("iter,energy,volume,lambda,residual,step\n");
    for t in trace {
        let _ = writeln!(out, "{},{},{},{},{},{}", t.iteration, num(t.energy), num(t.volume), num(t.lambda), num(t.residual), num(t.step));
    }
    fs::write(path, out)?;
    Ok(())
}

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    points: Vec<(f64, f64)>,
    dashed: bool,
}

/// Log-log plot with decade ticks.
fn svg_plot(title: &str, ylabel: &str, series: &[Series]) -> Option<String> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().cloned())
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .collect();
    if pts.is_empty() {
        return None;
    }
    let (w, h, ml, mr, mt, mb) = (640.0, 420.0, 80.0, 20.0, 40.0, 50.0);
    let bounds = |v: Vec<f64>| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min).log10().floor();
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max).log10().ceil();
        (lo, if hi > lo { hi } else { lo + 1.0 })
    };
    let (x0, x1) = bounds(pts.iter().map(|p| p.0).collect());
    let (y0, y1) = bounds(pts.iter().map(|p| p.1).collect());
    let px = |x: f64| ml + (x.log10() - x0) / (x1 - x0) * (w - ml - mr);
    let py = |y: f64| h - mb - (y.log10() - y0) / (y1 - y0) * (h - mt - mb);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - ml - mr,
        h - mt - mb
    );
    for d in (x0 as i32)..=(x1 as i32) {
        let x = px(10f64.powi(d));
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, h - mb, h - mb + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"#, h - mb + 18.0);
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = py(10f64.powi(d));
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{ml}" y2="{y:.2}" stroke="black"/>"#, ml - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#, ml - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">m</text>"#, w / 2.0, h - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{ylabel}</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, ser) in series.iter().enumerate() {
        let good: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        if good.is_empty() {
            continue;
        }
        let dash = if ser.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}"{dash}/>"#, good.join(" "), ser.color);
        if !ser.dashed {
            for p in &good {
                let (cx, cy) = p.split_once(',').expect("formatted pair");
                let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{}"/>"#, ser.color);
            }
        }
        let ly = mt + 16.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" fill="{}">{}</text>"#, ml + 10.0, ser.color, ser.label);
    }
    s.push_str("</svg>\n");
    Some(s)
}

/// Writes `sweep.csv` and, when fits are available, log-log plots of `r0`
/// (with its envelope), `λ_m` and `δ_s` against `m`.
pub fn emit_report(records: &[SweepRecord], fits: Option<&SweepFits>, outdir: &Path) -> Result<Report> {
    if records.is_empty() {
        return Err(Error::InvalidData("no sweep records to report".into()));
    }
    fs::create_dir_all(outdir)?;
    let mut report = Report::default();
    let csv = outdir.join("sweep.csv");
    fs::write(&csv, sweep_csv(records))?;
    report.files.push(csv);

    let Some(fits) = fits.filter(|f| !f.is_empty()) else {
        report.warnings.push("no power-law fits available; plots skipped".into());
        return Ok(report);
    };
    let ok: Vec<&SweepRecord> = records.iter().filter(|r| r.converged).collect();
    let column = |f: &dyn Fn(&SweepRecord) -> f64| ok.iter().map(|r| (r.m, f(r))).collect::<Vec<_>>();
    let env = &fits.r0_envelope;
    let plots = [
        (
            "r0_vs_m.svg",
            svg_plot(
                "r0 against volume",
                "r0",
                &[
                    Series { label: "r0", color: "#1f77b4", points: column(&|r| r.r0), dashed: false },
                    Series {
                        label: "envelope C m^e",
                        color: "#d62728",
                        points: column(&|r| env.constant * r.m.powf(fits.exponent)),
                        dashed: true,
                    },
                ],
            ),
        ),
        (
            "lambda_vs_m.svg",
            svg_plot(
                "Lagrange multiplier against volume",
                "lambda",
                &[
                    Series { label: "flow", color: "#1f77b4", points: column(&|r| r.lambda_flow), dashed: false },
                    Series { label: "identity", color: "#ff7f0e", points: column(&|r| r.lambda_identity), dashed: true },
                ],
            ),
        ),
        (
            "delta_vs_m.svg",
            svg_plot(
                "Wulff deficit against volume",
                "delta_s",
                &[Series { label: "delta_s", color: "#2ca02c", points: column(&|r| r.deficit), dashed: false }],
            ),
        ),
    ];
    for (name, svg) in plots {
        match svg {
            Some(svg) => {
                let path = outdir.join(name);
                fs::write(&path, svg)?;
                report.files.push(path);
            }
            None => report.warnings.push(format!("{name}: no positive data to plot")),
        }
    }
    Ok(report)
}
