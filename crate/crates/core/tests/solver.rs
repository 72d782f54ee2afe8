use std::f64::consts::{PI, TAU};

use fracshape::potentials::rescaled_potential;
use fracshape::shapes::*;
use fracshape::solver::*;
use fracshape::{Error, Potential, QuadratureSpec};
use proptest::prelude::*;

const P_DISC: f64 = 62.13063877777977;

fn anisotropic() -> Potential {
    Potential::QuadraticForm { q: [[1.0, 0.0], [0.0, 4.0]], center: [0.0, 0.0] }
}

fn small(s: f64, m: f64, g: Potential) -> SolveConfig {
    SolveConfig { k: 128, starts: 2, ..SolveConfig::new(s, m, g) }
}

#[test]
fn energy_of_unit_disc() {
    let b = Shape::Radial(RadialShape::ball([0.0, 0.0], 1.0, 256).unwrap());
    let e = total_energy(&b, &Potential::power(2.0), &QuadratureSpec::with_s(0.5)).unwrap();
    assert!((e.perimeter - P_DISC).abs() < 1e-7);
    assert!((e.potential - PI / 2.0).abs() < 1e-10);
    assert!((e.total - P_DISC - PI / 2.0).abs() < 1e-7);
}

#[test]
fn energy_is_affine_in_the_potential_weight() {
    let e = Shape::Radial(RadialShape::ellipse([0.1, 0.0], 1.3, 0.8, 128).unwrap());
    let q = QuadratureSpec::with_s(0.5);
    let at = |k: f64| {
        let g = Potential::QuadraticForm { q: [[k, 0.0], [0.0, k]], center: [0.0, 0.0] };
        total_energy(&e, &g, &q).unwrap().total
    };
    let (e1, e2, e3) = (at(1.0), at(2.0), at(3.0));
    assert!(((e3 - e1) - 2.0 * (e2 - e1)).abs() < 1e-10 * e3);
}

#[test]
fn penalty_vanishes_at_unit_volume_and_scales_with_weight() {
    let map = RescaleMap::new(2, 0.1, [0.0, 0.0]).unwrap();
    let gm = rescaled_potential(&Potential::power(2.0), &map, 0.5);
    let b = RadialShape::ball([0.0, 0.0], 1.0, 128).unwrap();
    let e = penalized_energy(&b, &gm, 0.5, 64.0, 3.0).unwrap();
    assert!(e.penalty < 1e-12);
    let big = RadialShape::ball([0.0, 0.0], 1.1, 128).unwrap();
    let p1 = penalized_energy(&big, &gm, 0.5, 10.0, 3.0).unwrap().penalty;
    let p2 = penalized_energy(&big, &gm, 0.5, 20.0, 3.0).unwrap().penalty;
    assert!((p1 - 10.0 * PI * 0.21).abs() < 1e-9);
    assert!((p2 - 2.0 * p1).abs() < 1e-12);
    assert!(matches!(
        penalized_energy(&big, &gm, 0.5, 10.0, 1.05),
        Err(Error::OutsideWindow { .. })
    ));
}

#[test]
fn invalid_configs_are_rejected() {
    let base = SolveConfig::new(0.5, 0.1, Potential::power(2.0));
    for bad in [
        SolveConfig { s: 1.0, ..base },
        SolveConfig { m: 0.0, ..base },
        SolveConfig { k: 8, ..base },
        SolveConfig { starts: 0, ..base },
        SolveConfig { window: 1.0, ..base },
        SolveConfig { mu: -1.0, ..base },
        SolveConfig { potential: Potential::power(0.5), ..base },
    ] {
        assert!(matches!(minimize(&bad), Err(Error::InvalidParameter(_))), "{bad:?}");
    }
}

#[test]
fn small_volume_minimizer_is_the_centered_disc() {
    let s = 0.5;
    let m = 0.01 * PI;
    let g = Potential::power(2.0);
    let r = minimize(&small(s, m, g)).unwrap();
    assert!(r.converged);
    let disc = RadialShape::ball([0.0, 0.0], 1.0, 128).unwrap();
    assert!(hausdorff_distance(&r.shape, &disc) < 0.05);
    assert!(r.map.x_m[0].hypot(r.map.x_m[1]) < 1e-6);
    assert!(r.energy_descaled <= r.ball_energy * (1.0 + 1e-9));
    // the disc of volume m about the origin, in closed form
    let sigma: f64 = 0.1;
    let oracle = P_DISC * sigma.powf(2.0 - s) + PI / 2.0 * sigma.powi(4);
    assert!((r.energy_descaled - oracle).abs() < 1e-6 * oracle, "{} vs {oracle}", r.energy_descaled);
    assert!(r.residual <= 0.05 * r.lambda_tilde_flow.abs());
    assert!(r.lambda_gap < 0.05);
    assert!((r.lambda_flow - sigma.powf(-s) * r.lambda_tilde_flow).abs() < 1e-6 * r.lambda_flow.abs());
}

#[test]
fn trace_is_monotone_and_volume_preserving() {
    let cfg = SolveConfig { starts: 1, perturbation: 0.1, ..small(0.5, 0.5, anisotropic()) };
    let r = minimize(&cfg).unwrap();
    assert!(r.trace.len() > 2);
    assert_eq!(r.trace[0].iteration, 0);
    for w in r.trace.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12 * w[0].energy.abs());
    }
    for row in &r.trace {
        assert!((row.volume - PI).abs() < 1e-3 * PI);
    }
}

#[test]
fn anisotropic_minimizer_beats_the_disc() {
    let r = minimize(&small(0.5, PI, anisotropic())).unwrap();
    assert!(r.converged && !r.starts_disagree);
    assert!(r.energy_descaled < r.ball_energy - 1e-3);
    let sw = ball_sandwich_radii(&r.shape, [0.0, 0.0]).unwrap();
    assert!(sw.r0 > 0.01, "{sw:?}");
    // wider along the cheaper x axis
    assert!(r.shape.radius_at(0.0) > r.shape.radius_at(0.5 * PI));
    // symmetric under x ↦ −x
    let flipped = RadialShape::new(r.shape.center, (0..r.shape.len()).map(|k| r.shape.radius_at(k as f64 * TAU / r.shape.len() as f64 + PI)).collect()).unwrap();
    assert!(hausdorff_distance(&r.shape, &flipped) < 1e-3);
    assert!(r.lambda_gap < 0.05);
    let est = lagrange_multiplier(&r, &anisotropic(), 0.5, PI).unwrap();
    assert!((est.lambda_flow - r.lambda_flow).abs() < 1e-9 * est.lambda_flow.abs());
}

#[test]
fn off_center_potential_moves_the_minimizer() {
    let g = Potential::shifted_power(2.0, [0.3, 0.0]);
    let r = minimize(&small(0.5, 0.01 * PI, g)).unwrap();
    assert!(r.converged);
    assert!((r.map.x_m[0] - 0.3).abs() < 1e-3 && r.map.x_m[1].abs() < 1e-3, "{:?}", r.map.x_m);
    assert!((r.descaled.center[0] - 0.3).abs() < 1e-3);
}

#[test]
fn projected_and_penalized_agree() {
    let k = 128;
    let base = SolveConfig { starts: 1, ..small(0.5, 0.3 * PI, anisotropic()) };
    let proj = minimize(&base).unwrap();
    let pen = minimize(&SolveConfig { mode: Mode::Penalized, mu: 64.0, ..base }).unwrap();
    assert!(proj.converged && pen.converged);
    assert!(hausdorff_distance(&proj.shape, &pen.shape) < 2.0 * TAU / k as f64);
    assert!((pen.shape.volume() - PI).abs() < 1e-3 * PI);
}

#[test]
fn unpenalized_flow_does_not_keep_the_volume() {
    let cfg = SolveConfig { mode: Mode::Penalized, mu: 0.0, starts: 1, ..small(0.5, 0.01 * PI, Potential::power(2.0)) };
    match minimize(&cfg) {
        Err(Error::StarShapeLost { .. }) => {}
        Ok(r) => assert!((r.shape.volume() - PI).abs() > 1e-3 * PI),
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let cfg = SolveConfig { max_iterations: 2, starts: 1, ..small(0.5, PI, anisotropic()) };
    let r = minimize(&cfg).unwrap();
    assert!(!r.converged);
    assert!(matches!(lagrange_multiplier(&r, &anisotropic(), 0.5, PI), Err(Error::NotConverged)));
}

#[test]
fn calibration_needs_penalized_mode_and_finds_a_stable_weight() {
    let cfg = SolveConfig { starts: 1, ..small(0.5, 0.3 * PI, anisotropic()) };
    assert!(matches!(calibrate_penalty(&cfg), Err(Error::Calibration(_))));
    let cal = calibrate_penalty(&SolveConfig { mode: Mode::Penalized, ..cfg }).unwrap();
    assert!(cal.mu0 >= 1.0 && cal.mu0.log2().fract() == 0.0);
    let last = &cal.history[cal.history.len() - 2..];
    assert_eq!(last[0].mu, cal.mu0);
    assert!(last.iter().all(|p| p.error.is_none() && p.volume_deviation.unwrap() < 1e-3));
}

#[test]
fn solve_results_serialize() {
    let r = minimize(&SolveConfig { starts: 1, k: 64, ..SolveConfig::new(0.5, 0.1, Potential::power(2.0)) }).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: SolveResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn perturbed_starts_have_unit_volume(k in 16usize..300, index in 0usize..6, seed in 0u64..100) {
        let rho = initial_profile(k, index, 0.05, seed);
        let area = 0.5 * TAU / k as f64 * rho.iter().map(|r| r * r).sum::<f64>();
        prop_assert!((area - PI).abs() < 1e-12);
        prop_assert!(rho.iter().all(|r| *r > 0.0));
    }

    #[test]
    fn minimizer_never_loses_to_the_disc(m in 0.01f64..1.0, shift in -0.5f64..0.5) {
        let g = Potential::shifted_power(2.0, [shift, 0.1]);
        let r = minimize(&SolveConfig { k: 64, starts: 1, ..SolveConfig::new(0.5, m, g) }).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.energy_descaled <= r.ball_energy * (1.0 + 1e-9));
    }
}
