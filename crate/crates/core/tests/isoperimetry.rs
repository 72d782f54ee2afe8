mod common;

use std::f64::consts::PI;

use common::integrate;
use fracshape::isoperimetry::*;
use fracshape::nonlocal::ball_perimeter;
use fracshape::shapes::*;
use fracshape::{Error, Potential, QuadratureSpec};
use proptest::prelude::*;

/// `|E △ B_1(0)|/π` for the area-π ellipse with semi-axes `a`, `1/a`,
/// from the polar form of both boundaries.
fn centered_ellipse_asymmetry(a: f64) -> f64 {
    let b = 1.0 / a;
    let rho2 = |t: f64| (a * b).powi(2) / ((b * t.cos()).powi(2) + (a * t.sin()).powi(2));
    // ρ = 1 where tan²θ = (1 − b²)/(a² − 1)
    let root = ((1.0 - b * b) / (a * a - 1.0)).sqrt().atan();
    let f = |t: f64| 0.5 * (rho2(t) - 1.0).abs();
    4.0 * (integrate(0.0, root, 64, f) + integrate(root, 0.5 * PI, 64, f)) / PI
}

fn two_disc_grid(gap: f64) -> GridSet {
    let h = 1.0 / 32.0;
    let w = (4.0 + gap) / h;
    GridSet::from_fn(2, [-1.0, -1.0], h, w.ceil() as usize, 64, |p| {
        let d1 = p[0] * p[0] + p[1] * p[1];
        let d2 = (p[0] - 2.0 - gap).powi(2) + p[1] * p[1];
        d1 < 1.0 || d2 < 1.0
    })
    .unwrap()
}

#[test]
fn disc_has_no_asymmetry_and_no_deficit() {
    let b = Shape::Radial(RadialShape::ball([0.2, 0.1], 1.0, 256).unwrap());
    let r = iso_report(&b, &QuadratureSpec::with_s(0.5)).unwrap();
    assert!(r.asymmetry < 1e-6, "{r:?}");
    assert!(r.deficit.abs() <= r.deficit_error.max(1e-8), "{r:?}");
}

#[test]
fn ellipse_asymmetry_matches_polar_oracle() {
    for a in [1.05, 1.2, 1.5] {
        let e = Shape::Radial(RadialShape::ellipse([0.0, 0.0], a, 1.0 / a, 256).unwrap());
        let got = fraenkel_asymmetry(&e).unwrap();
        let oracle = centered_ellipse_asymmetry(a);
        assert!((got.value - oracle).abs() < 1e-4 * oracle.max(1e-2), "a={a}: {} vs {oracle}", got.value);
        assert!(got.center[0].abs() < 1e-3 && got.center[1].abs() < 1e-3);
    }
}

#[test]
fn two_far_discs_have_asymmetry_one() {
    let g = Shape::Grid(two_disc_grid(6.0));
    let a = fraenkel_asymmetry(&g).unwrap();
    assert!((a.value - 1.0).abs() < 2e-2, "{a:?}");
}

#[test]
fn whole_cell_translation_moves_only_the_center() {
    let g = GridSet::from_fn(2, [-1.5, -1.5], 1.0 / 16.0, 48, 48, |p| (p[0] / 1.3).powi(2) + (p[1] / 0.8).powi(2) < 1.0).unwrap();
    let a0 = fraenkel_asymmetry(&Shape::Grid(g.clone())).unwrap();
    let moved = g.translated([5.0 * g.h(), -3.0 * g.h()]);
    let a1 = fraenkel_asymmetry(&Shape::Grid(moved)).unwrap();
    assert_eq!(a0.value.to_bits(), a1.value.to_bits());
    assert!((a1.center[0] - a0.center[0] - 5.0 * g.h()).abs() < 1e-12);
    assert!((a1.center[1] - a0.center[1] + 3.0 * g.h()).abs() < 1e-12);
}

#[test]
fn interval_asymmetry() {
    let one = Shape::Intervals(IntervalUnion::single(-0.3, 2.0).unwrap());
    assert!(fraenkel_asymmetry(&one).unwrap().value < 1e-12);
    let two = Shape::Intervals(IntervalUnion::new(vec![(0.0, 1.0), (100.0, 101.0)]).unwrap());
    assert!((fraenkel_asymmetry(&two).unwrap().value - 1.0).abs() < 1e-12);
    // [0,1] ∪ [1.5, 2]: best interval of length 1.5 is [0, 1.5] or [0.5, 2], missing 0.5 either way
    let near = Shape::Intervals(IntervalUnion::new(vec![(0.0, 1.0), (1.5, 2.0)]).unwrap());
    assert!((fraenkel_asymmetry(&near).unwrap().value - 2.0 * 0.5 / 1.5).abs() < 1e-12);
}

#[test]
fn reference_perimeter_scales_by_homogeneity() {
    for s in [0.2, 0.5, 0.8] {
        let p1 = reference_ball_perimeter(2, s, PI).unwrap().value;
        assert!((p1 - ball_perimeter(2, s, 1.0)).abs() < 1e-12 * p1);
        let p4 = reference_ball_perimeter(2, s, 4.0 * PI).unwrap().value;
        assert!((p4 / p1 - 2f64.powf(2.0 - s)).abs() < 1e-12);
        let l = reference_ball_perimeter(1, s, 3.0).unwrap().value;
        assert!((l - 2.0 * 3f64.powf(1.0 - s) / (s * (1.0 - s))).abs() < 1e-12 * l);
    }
    assert!(reference_ball_perimeter(2, 0.5, 0.0).is_err());
}

#[test]
fn ellipse_deficit_is_positive_in_every_representation() {
    let q = QuadratureSpec { s: 0.5, mc_samples: 100_000, ..QuadratureSpec::default() };
    let (a, b) = (1.5, 1.0 / 1.5);
    let radial = Shape::Radial(RadialShape::ellipse([0.0, 0.0], a, b, 256).unwrap());
    let (d, err, ..) = wulff_deficit(&radial, &q).unwrap();
    assert!(d > 3.0 * err && d > 0.0, "{d} ± {err}");
    let grid = Shape::Grid(
        GridSet::from_fn(2, [-1.6, -1.6], 3.2 / 96.0, 96, 96, |p| (p[0] / a).powi(2) + (p[1] / b).powi(2) < 1.0).unwrap(),
    );
    let (dg, ..) = wulff_deficit(&grid, &q).unwrap();
    assert!(dg > 0.0);
    let mc = fracshape::nonlocal::fractional_perimeter_mc(&radial, &q, 2).unwrap();
    let reference = reference_ball_perimeter(2, 0.5, PI).unwrap().value;
    assert!(mc.value - reference > 0.0, "{mc:?} vs {reference}");
}

#[test]
fn deficit_is_scale_invariant() {
    let q = QuadratureSpec::with_s(0.4);
    let e = RadialShape::ellipse([0.0, 0.0], 1.3, 0.9, 128).unwrap();
    let (d1, ..) = wulff_deficit(&Shape::Radial(e.clone()), &q).unwrap();
    let (d2, ..) = wulff_deficit(&Shape::Radial(e.scaled(2.7)), &q).unwrap();
    assert!((d1 - d2).abs() < 1e-10 * d1.abs().max(1e-6));
}

#[test]
fn quantitative_check_on_ellipse_family() {
    let corpus: Vec<Shape> = [1.05, 1.1, 1.2, 1.4]
        .iter()
        .map(|&a| Shape::Radial(RadialShape::ellipse([0.0, 0.0], a, 1.0 / a, 256).unwrap()))
        .collect();
    let r = quantitative_check(&corpus, &QuadratureSpec::with_s(0.5)).unwrap();
    assert!(r.pass && r.deficits_nonnegative && r.c_fit > 0.0, "{r:?}");
    // δ/A² stays bounded away from zero as the ellipses approach the disc
    let ratios: Vec<f64> = r.reports.iter().map(|x| x.deficit / (x.asymmetry * x.asymmetry)).collect();
    assert!(ratios[0] > 0.25 * ratios[3], "{ratios:?}");
}

#[test]
fn degenerate_corpora_are_rejected() {
    let q = QuadratureSpec::with_s(0.5);
    assert!(matches!(quantitative_check(&[], &q), Err(Error::DegenerateCorpus(_))));
    let corpus = vec![
        Shape::Radial(RadialShape::ellipse([0.0, 0.0], 1.2, 1.0 / 1.2, 128).unwrap()),
        Shape::Radial(RadialShape::ball([0.0, 0.0], 1.0, 128).unwrap()),
    ];
    assert!(matches!(quantitative_check(&corpus, &q), Err(Error::DegenerateCorpus(_))));
}

#[test]
fn random_corpus_is_normalized_and_reproducible() {
    let a = random_fourier_corpus(10, 128, 0.3, 4).unwrap();
    let b = random_fourier_corpus(10, 128, 0.3, 4).unwrap();
    assert_eq!(a, b);
    for e in &a {
        assert!((e.volume() - PI).abs() < 1e-12);
        assert!(e.min_radius() > 0.0);
    }
    assert_ne!(a, random_fourier_corpus(10, 128, 0.3, 5).unwrap());
}

#[test]
fn rearrangement_of_a_centered_disc_is_an_equality() {
    let g = Potential::power(2.0);
    let q = QuadratureSpec::with_s(0.5);
    let b = Shape::Radial(RadialShape::ball([0.0, 0.0], 1.0, 256).unwrap());
    let r = symmetric_rearrangement_check(&b, &g, &q).unwrap();
    assert!(r.pass);
    assert!((r.perimeter.value - r.perimeter_rearranged).abs() < 1e-7 * r.perimeter_rearranged);
    assert!((r.potential - PI / 2.0).abs() < 1e-10);
    assert!((r.potential_rearranged - PI / 2.0).abs() < 1e-12);
}

#[test]
fn rearrangement_of_a_shifted_disc_is_strict() {
    let g = Potential::power(2.0);
    let q = QuadratureSpec::with_s(0.5);
    let c = [0.4, -0.3];
    let b = Shape::Radial(RadialShape::ball(c, 1.0, 256).unwrap());
    let r = symmetric_rearrangement_check(&b, &g, &q).unwrap();
    let oracle = PI / 2.0 + PI * (c[0] * c[0] + c[1] * c[1]);
    assert!((r.potential - oracle).abs() < 1e-10, "{} vs {oracle}", r.potential);
    assert!(r.pass && r.potential_rearranged < r.potential - 0.1);
}

#[test]
fn rearrangement_in_one_dimension() {
    let g = Potential::shifted_power(2.0, [0.5, 0.0]);
    let q = QuadratureSpec::with_s(0.5);
    let u = Shape::Intervals(IntervalUnion::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap());
    let r = symmetric_rearrangement_check(&u, &g, &q).unwrap();
    assert!(r.pass);
    // ∫_{−1}^{1} x² = 2/3 around the center 0.5
    assert!((r.potential_rearranged - 2.0 / 3.0).abs() < 1e-12);
    assert!(r.perimeter_rearranged < r.perimeter.value);
}

#[test]
fn anisotropic_potential_has_no_rearrangement() {
    let g = Potential::QuadraticForm { q: [[1.0, 0.0], [0.0, 4.0]], center: [0.0, 0.0] };
    let b = Shape::Radial(RadialShape::ball([0.0, 0.0], 1.0, 64).unwrap());
    assert!(matches!(
        symmetric_rearrangement_check(&b, &g, &QuadratureSpec::default()),
        Err(Error::NonRadialPotential)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deficit_and_asymmetry_are_nonnegative(
        coef in proptest::collection::vec(-0.15f64..0.15, 4),
        s in 0.2f64..0.8,
    ) {
        let e = RadialShape::from_fn([0.0, 0.0], 128, |t| {
            1.0 + coef.iter().enumerate().map(|(k, c)| c * ((k + 2) as f64 * t + k as f64).cos()).sum::<f64>()
        }).unwrap();
        let r = iso_report(&Shape::Radial(e), &QuadratureSpec::with_s(s)).unwrap();
        prop_assert!(r.asymmetry >= 0.0 && r.asymmetry <= 2.0);
        prop_assert!(r.deficit >= -r.deficit_error);
    }

    #[test]
    fn rearrangement_never_increases_energy(
        coef in proptest::collection::vec(-0.15f64..0.15, 3),
        dx in -0.5f64..0.5, dy in -0.5f64..0.5,
    ) {
        let e = RadialShape::from_fn([dx, dy], 128, |t| {
            1.0 + coef.iter().enumerate().map(|(k, c)| c * ((k + 2) as f64 * t).cos()).sum::<f64>()
        }).unwrap();
        let r = symmetric_rearrangement_check(&Shape::Radial(e), &Potential::power(2.0), &QuadratureSpec::with_s(0.5)).unwrap();
        prop_assert!(r.pass, "{:?}", r);
    }
}
