use std::f64::consts::PI;
use std::fs;

use fracshape::harness::*;
use fracshape::{Error, Potential};
use proptest::prelude::*;

fn record(m: f64, r0: f64, lambda: f64, deficit: f64) -> SweepRecord {
    SweepRecord {
        m,
        sigma: (m / PI).sqrt(),
        r0,
        asymmetry: 2.0 * r0,
        deficit,
        lambda_flow: lambda,
        lambda_identity: lambda,
        convexity_defect: 0.0,
        dist_xm: 0.0,
        x_m: [0.0, 0.0],
        energy: 1.0,
        converged: true,
        error: None,
    }
}

fn synthetic() -> Vec<SweepRecord> {
    [1.0, 0.3, 0.1, 0.03, 0.01]
        .iter()
        .map(|&m| record(m, 0.1 * f64::powf(m, 0.5), 3.0 * f64::powf(m, -0.25), 0.01 * m))
        .collect()
}

fn opts() -> SolverOptions {
    SolverOptions { k: 64, starts: 1, ..SolverOptions::default() }
}

#[test]
fn exact_power_laws_are_recovered() {
    let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
    let f = fit_power_law(&xs, &xs.map(f64::sqrt)).unwrap();
    assert!((f.slope - 0.5).abs() < 1e-14 && f.intercept.abs() < 1e-14);
    assert!((f.r_squared - 1.0).abs() < 1e-14);
    let f = fit_power_law(&xs, &xs.map(|x| 3.0 * x * x)).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-13);
    assert!((f.intercept - 3f64.ln()).abs() < 1e-13);
    assert!((f.predict(10.0) - 300.0).abs() < 1e-9);
    assert!(f.residuals.iter().all(|r| r.abs() < 1e-13));
}

#[test]
fn bad_fit_data_is_rejected() {
    assert!(matches!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]), Err(Error::InvalidData(_))));
    assert!(matches!(fit_power_law(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::InvalidData(_))));
    assert!(matches!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 2.0]), Err(Error::InvalidData(_))));
    assert!(matches!(fit_power_law(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]), Err(Error::InvalidData(_))));
}

#[test]
fn report_writes_csv_and_plots() {
    let rows = synthetic();
    let fits = fit_sweep(&rows, 0.5);
    assert!((fits.r0.as_ref().unwrap().slope - 0.5).abs() < 1e-12);
    assert!((fits.lambda.as_ref().unwrap().slope + 0.25).abs() < 1e-12);
    assert_eq!(fits.exponent, 0.5 * 0.5 / 8.0);
    let dir = tempfile::tempdir().unwrap();
    let rep = emit_report(&rows, Some(&fits), dir.path()).unwrap();
    assert!(rep.warnings.is_empty(), "{:?}", rep.warnings);
    assert_eq!(rep.files.len(), 4);
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(
        lines[0],
        "m,sigma,r0,A,delta_s,lambda_flow,lambda_identity,convexity_defect,dist_xm,energy,converged"
    );
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 11 && l.ends_with("true")));
    for name in ["r0_vs_m.svg", "lambda_vs_m.svg", "delta_vs_m.svg"] {
        let svg = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    // reruns are byte-identical
    let again = tempfile::tempdir().unwrap();
    emit_report(&rows, Some(&fits), again.path()).unwrap();
    for f in ["sweep.csv", "r0_vs_m.svg", "lambda_vs_m.svg", "delta_vs_m.svg"] {
        assert_eq!(fs::read(dir.path().join(f)).unwrap(), fs::read(again.path().join(f)).unwrap());
    }
}

#[test]
fn report_without_fits_writes_only_the_table() {
    let rows: Vec<SweepRecord> = synthetic().into_iter().take(2).collect();
    let fits = fit_sweep(&rows, 0.5);
    assert!(fits.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let rep = emit_report(&rows, Some(&fits), dir.path()).unwrap();
    assert_eq!(rep.files, vec![dir.path().join("sweep.csv")]);
    assert_eq!(rep.warnings.len(), 1);
    assert!(!dir.path().join("r0_vs_m.svg").exists());
    assert!(matches!(emit_report(&[], None, dir.path()), Err(Error::InvalidData(_))));
}

#[test]
fn unwritable_outdir_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    fs::write(&file, "x").unwrap();
    assert!(matches!(emit_report(&synthetic(), None, &file.join("sub")), Err(Error::Io(_))));
}

#[test]
fn envelopes_take_the_worst_ratio() {
    let rows = synthetic();
    let e = r0_envelope(&rows, 0.5);
    let oracle = rows.iter().map(|r| r.r0 / r.m.powf(1.0 / 32.0)).fold(0.0, f64::max);
    assert!(e.pass && e.rows == 5 && (e.constant - oracle).abs() < 1e-15);
    let g = Potential::power(2.0);
    let d = deficit_envelope(&rows, &g, 0.5);
    let oracle = rows.iter().map(|r| r.deficit / (r.sigma.powf(0.5) * r.sigma * r.sigma)).fold(0.0, f64::max);
    assert!(d.pass && (d.constant - oracle).abs() < 1e-12 * oracle);
    let mut bad = rows.clone();
    bad[2].r0 = f64::NAN;
    assert!(!r0_envelope(&bad, 0.5).pass);
}

#[test]
fn sweep_volumes_are_validated() {
    let g = Potential::power(2.0);
    let four = [1.0, 0.5, 0.1, 0.05];
    assert!(matches!(run_sweep(0.5, &g, &four, &opts()), Err(Error::InvalidParameter(_))));
    let unsorted = [1.0, 0.5, 0.6, 0.1, 0.05];
    assert!(matches!(run_sweep(0.5, &g, &unsorted, &opts()), Err(Error::InvalidParameter(_))));
    let narrow = [1.0, 0.9, 0.8, 0.7, 0.2];
    assert!(matches!(run_sweep(0.5, &g, &narrow, &opts()), Err(Error::InvalidParameter(_))));
    let negative = [1.0, 0.5, 0.1, 0.05, -0.01];
    assert!(matches!(run_sweep(0.5, &g, &negative, &opts()), Err(Error::InvalidParameter(_))));
}

#[test]
fn small_sweep_produces_disc_minimizers() {
    let g = Potential::power(2.0);
    let vols: Vec<f64> = [0.3, 0.1, 0.03, 0.01, 0.003].iter().map(|f| f * PI).collect();
    let rows = run_sweep(0.5, &g, &vols, &opts()).unwrap();
    assert_eq!(rows.len(), 5);
    for (r, m) in rows.iter().zip(&vols) {
        assert!(r.converged && r.error.is_none(), "{r:?}");
        assert_eq!(r.m, *m);
        assert!(r.r0 < 0.02 && r.dist_xm < 1e-6 && r.convexity_defect < 1e-6);
    }
    // the multiplier grows as the volume shrinks
    assert!(rows.windows(2).all(|w| w[1].lambda_flow > w[0].lambda_flow));
    let fits = fit_sweep(&rows, 0.5);
    assert!(fits.lambda.as_ref().unwrap().slope < 0.0);
}

#[test]
fn sweep_configs_parse() {
    let text = r#"{"s":0.5,"potential":{"kind":"power","p":2},"volumes":{"start":1.0,"ratio":0.5,"count":6},"solver":{"k":64}}"#;
    let cfg = SweepConfig::from_json(text).unwrap();
    assert_eq!(cfg.volumes.volumes(), vec![1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125]);
    assert_eq!(cfg.solver.k, 64);
    assert_eq!(cfg.solver.starts, SolverOptions::default().starts);
    let list = SweepConfig::from_json(r#"{"s":0.3,"potential":{"kind":"power","p":1},"volumes":[1,0.1]}"#).unwrap();
    assert_eq!(list.volumes, VolumeGrid::List(vec![1.0, 0.1]));
    assert!(SweepConfig::from_json(r#"{"s":0.3}"#).is_err());
}

proptest! {
    #[test]
    fn fit_recovers_any_power(a in -3.0f64..3.0, c in 0.1f64..10.0, x0 in 0.01f64..1.0) {
        let xs: Vec<f64> = (0..6).map(|i| x0 * 2f64.powi(i)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| c * x.powf(a)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        prop_assert!((f.slope - a).abs() < 1e-10);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-9);
    }
}
