use std::f64::consts::PI;

use fracshape::potentials::*;
use fracshape::RescaleMap;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point_in_disc(rng: &mut ChaCha8Rng, r: f64) -> [f64; 2] {
    loop {
        let p = [rng.random_range(-r..r), rng.random_range(-r..r)];
        if p[0] * p[0] + p[1] * p[1] < r * r {
            return p;
        }
    }
}

#[test]
fn rescaled_quadratic_at_unit_point() {
    let map = RescaleMap::new(2, PI * 0.25, [0.0, 0.0]).unwrap();
    assert!((map.sigma - 0.5).abs() < 1e-15);
    let gm = rescaled_potential(&Potential::power(2.0), &map, 0.5);
    assert!((gm.eval([1.0, 0.0]) - 0.5f64.powf(2.5)).abs() < 1e-15);
}

#[test]
fn lipschitz_constants_of_powers() {
    assert_eq!(lipschitz_bound(&Potential::power(2.0), 2.0), 4.0);
    assert_eq!(lipschitz_bound(&Potential::power(1.0), 5.0), 1.0);
}

#[test]
fn operator_norm_matches_eigenvalue_formula() {
    for q in [[[2.0f64, 1.0], [1.0, 3.0]], [[1.0, 0.0], [0.0, 4.0]], [[5.0, -2.0], [-2.0, 1.0]]] {
        let (t, d) = (q[0][0] + q[1][1], q[0][0] * q[1][1] - q[0][1] * q[1][0]);
        let top = 0.5 * t + (0.25 * t * t - d).sqrt();
        assert!((operator_norm(q) - top).abs() < 1e-12 * top);
    }
}

#[test]
fn invalid_potentials_are_rejected() {
    assert!(Potential::power(0.5).validate().is_err());
    assert!(Potential::QuadraticForm { q: [[1.0, 2.0], [2.0, 1.0]], center: [0.0, 0.0] }.validate().is_err());
    assert!(Potential::QuadraticForm { q: [[1.0, 0.5], [0.0, 1.0]], center: [0.0, 0.0] }.validate().is_err());
    assert!(Potential::shifted_power(2.0, [f64::NAN, 0.0]).validate().is_err());
    assert!(Potential::shifted_power(2.0, [0.3, 0.0]).validate().is_ok());
}

#[test]
fn minimum_is_zero_at_argmin() {
    let gs = [
        Potential::power(1.0),
        Potential::power(3.0),
        Potential::shifted_power(2.0, [0.3, -0.1]),
        Potential::QuadraticForm { q: [[1.0, 0.2], [0.2, 2.0]], center: [1.0, 1.0] },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in gs {
        assert_eq!(g.eval(g.argmin()), 0.0);
        for _ in 0..1000 {
            let x = random_point_in_disc(&mut rng, 4.0);
            assert!(g.eval(x) >= 0.0);
        }
    }
}

#[test]
fn gradients_match_finite_differences() {
    let gs = [
        Potential::power(1.5),
        Potential::shifted_power(2.0, [0.3, 0.0]),
        Potential::QuadraticForm { q: [[1.0, 0.3], [0.3, 4.0]], center: [0.0, 0.5] },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for g in gs {
        for _ in 0..50 {
            let x = random_point_in_disc(&mut rng, 2.0);
            let h = 1e-6;
            let grad = g.gradient(x);
            let hess = g.hessian(x);
            for i in 0..2 {
                let mut up = x;
                let mut dn = x;
                up[i] += h;
                dn[i] -= h;
                let fd = (g.eval(up) - g.eval(dn)) / (2.0 * h);
                assert!((fd - grad[i]).abs() < 1e-6 * (1.0 + grad[i].abs()));
                let gd = [(g.gradient(up)[0] - g.gradient(dn)[0]) / (2.0 * h), (g.gradient(up)[1] - g.gradient(dn)[1]) / (2.0 * h)];
                assert!((gd[0] - hess[i][0]).abs() < 1e-5 * (1.0 + hess[i][0].abs()));
                assert!((gd[1] - hess[i][1]).abs() < 1e-5 * (1.0 + hess[i][1].abs()));
            }
        }
    }
}

#[test]
fn rescaled_potential_sup_on_unit_disc_shrinks_with_volume() {
    let g = Potential::power(2.0);
    let mut last = f64::INFINITY;
    for m in [PI, 0.3 * PI, 0.1 * PI, 0.01 * PI] {
        let map = RescaleMap::new(2, m, [0.0, 0.0]).unwrap();
        let gm = rescaled_potential(&g, &map, 0.5);
        let sup = (0..360)
            .map(|k| {
                let t = k as f64 * PI / 180.0;
                gm.eval([t.cos(), t.sin()])
            })
            .fold(0.0, f64::max);
        // |x|² on the boundary of B_1 scales as σ^{2+s}
        assert!((sup - map.sigma.powf(2.5)).abs() < 1e-12);
        assert!(sup < last);
        last = sup;
    }
}

#[test]
fn coercive_along_rays() {
    let gs = [Potential::power(1.0), Potential::QuadraticForm { q: [[1.0, 0.0], [0.0, 4.0]], center: [0.0, 0.0] }];
    for g in gs {
        for k in 0..16 {
            let t = k as f64 * PI / 8.0;
            let far = g.eval([1e3 * t.cos(), 1e3 * t.sin()]);
            let near = g.eval([t.cos(), t.sin()]);
            assert!(far > 100.0 * near);
        }
    }
}

#[test]
fn potentials_parse_from_config_fragments() {
    let g: Potential = serde_json::from_str(r#"{"kind":"quadratic_form","q":[[1,0],[0,4]]}"#).unwrap();
    assert_eq!(g.eval([1.0, 1.0]), 5.0);
    assert!(g.radial_center().is_none());
    let g: Potential = serde_json::from_str(r#"{"kind":"shifted_power","p":2,"center":[0.3,0]}"#).unwrap();
    assert_eq!(g.radial_center(), Some([0.3, 0.0]));
    assert!(serde_json::from_str::<Potential>(r#"{"kind":"gaussian"}"#).is_err());
}

proptest! {
    #[test]
    fn lipschitz_bound_holds_on_random_pairs(
        p in 1.0f64..4.0, r in 0.5f64..5.0, cx in -1.0f64..1.0, seed in 0u64..1000,
    ) {
        let g = Potential::shifted_power(p, [cx, 0.0]);
        let l = lipschitz_bound(&g, r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let x = random_point_in_disc(&mut rng, r);
            let y = random_point_in_disc(&mut rng, r);
            let d = (x[0] - y[0]).hypot(x[1] - y[1]);
            prop_assert!((g.eval(x) - g.eval(y)).abs() <= l * d * (1.0 + 1e-12) + 1e-14);
        }
    }

    #[test]
    fn quadratic_lipschitz_bound_holds(
        a in 0.5f64..3.0, b in 0.5f64..3.0, c in -0.4f64..0.4, seed in 0u64..1000,
    ) {
        let g = Potential::QuadraticForm { q: [[a, c], [c, b]], center: [0.2, -0.1] };
        let l = lipschitz_bound(&g, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let x = random_point_in_disc(&mut rng, 2.0);
            let y = random_point_in_disc(&mut rng, 2.0);
            let d = (x[0] - y[0]).hypot(x[1] - y[1]);
            prop_assert!((g.eval(x) - g.eval(y)).abs() <= l * d * (1.0 + 1e-12) + 1e-14);
        }
    }

    #[test]
    fn rescaling_is_the_identity_at_unit_volume(x in -3.0f64..3.0, y in -3.0f64..3.0, p in 1.0f64..3.0) {
        let g = Potential::power(p);
        let map = RescaleMap::new(2, PI, [0.0, 0.0]).unwrap();
        let gm = rescaled_potential(&g, &map, 0.4);
        prop_assert!((gm.eval([x, y]) - g.eval([x, y])).abs() <= 1e-12 * (1.0 + g.eval([x, y])));
    }
}
