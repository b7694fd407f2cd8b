mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use prism_nematic::energy::{
    bound_ratio, conformal_energy, exterior_flux, interior_flux, lower_bound_lp,
    lower_bound_prism, prism_lp_data, unwrapped_energy, upper_bound_prism, EnergyReport,
    ElasticConstants, LpConstraints,
};
use prism_nematic::{invariants_of, make_prism, Prism, RationalMap, RationalMapSpec};
use rand::Rng;
use rayon::prelude::*;

#[test]
fn ratio_law() {
    let mut rng = common::rng(31);
    for _ in 0..50 {
        let p = common::random_prism(&mut rng);
        let [lx, ly, lz] = p.lengths();
        let want = ((lx / lz).powi(2) + (ly / lz).powi(2) + 1.0).sqrt();
        let omega = rng.gen_range(0.5..20.0);
        let ratio = upper_bound_prism(&p, omega, 1.3) / lower_bound_prism(&p, omega, 1.3);
        assert!((ratio - want).abs() <= 1e-12 * want);
        assert!((bound_ratio(&p) - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn cube_anchors() {
    let cube = Prism::cube(1.0).unwrap();
    assert!((lower_bound_prism(&cube, FRAC_PI_2, 1.0) - 4.0 * PI).abs() < 1e-12);
    let e0 = unwrapped_energy(&cube, 1.0).unwrap();
    assert!((15.25..=15.45).contains(&e0));
    assert!((1.21..=1.23).contains(&(e0 / (4.0 * PI))));
}

#[test]
fn bound_sandwich() {
    let mut rng = common::rng(32);
    let cases: Vec<(Prism, RationalMap)> = (0..24)
        .map(|_| (common::random_prism(&mut rng), common::random_map(&mut rng, 7)))
        .collect();
    cases.par_iter().for_each(|(p, m)| {
        let omega = invariants_of(m).omega0.abs();
        let (lo, up) = (lower_bound_prism(p, omega, 1.0), upper_bound_prism(p, omega, 1.0));
        let e = conformal_energy(p, m, 1.0, 1e-7 * up).unwrap();
        assert!(lo <= e.value + e.error_estimate, "{lo} > {}", e.value);
        assert!(e.value - e.error_estimate <= up, "{} > {up}", e.value);
    });
}

#[test]
fn conformal_energy_matches_unwrapped_closed_form() {
    let mut rng = common::rng(33);
    let map = RationalMap::new(&RationalMapSpec::unwrapped()).unwrap();
    for _ in 0..10 {
        let p = common::random_prism(&mut rng);
        let e0 = unwrapped_energy(&p, 2.0).unwrap();
        let q = conformal_energy(&p, &map, 2.0, 1e-9 * e0).unwrap();
        assert!(common::rel_err(q.value, e0) <= 1e-8, "{} vs {e0}", q.value);
    }
}

#[test]
fn interior_flux_is_the_trapped_area() {
    let mut rng = common::rng(34);
    for _ in 0..20 {
        let p = common::random_prism(&mut rng);
        let m = common::random_map(&mut rng, 9);
        let flux = interior_flux(&p, &m, 1e-8).unwrap();
        let omega = invariants_of(&m).omega0;
        assert!((flux.value - omega).abs() <= 1e-5, "{} vs {omega}", flux.value);
    }
}

#[test]
fn no_flux_through_exterior_faces() {
    let mut rng = common::rng(35);
    for _ in 0..10 {
        let p = common::random_prism(&mut rng);
        let m = common::random_map(&mut rng, 7);
        let total = conformal_energy(&p, &m, 1.0, 1e-6).unwrap().value / 16.0;
        for f in exterior_flux(&p, &m).unwrap() {
            assert!(f.abs() <= 1e-8 * total, "{f} vs {total}");
        }
    }
}

#[test]
fn lp_matches_closed_form_on_random_prisms() {
    let mut rng = common::rng(36);
    for _ in 0..10 {
        let p = common::random_prism(&mut rng);
        let omega = rng.gen_range(0.5..20.0);
        let (vertices, edges) = prism_lp_data(&p, omega);
        let want = 8.0 * 1.0 * p.lz() * omega;
        for constraints in [LpConstraints::AllPairs, LpConstraints::Edges(edges)] {
            let cert = lower_bound_lp(&vertices, &constraints, 1.0).unwrap();
            assert!(common::rel_err(cert.objective, want) <= 1e-9, "{} vs {want}", cert.objective);
            assert!(cert.feasible);
            assert_eq!(cert.xi.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
        }
    }
}

#[test]
fn report_round_trips_through_json() {
    let p = make_prism(3.0, 2.0, 1.0).unwrap();
    let m = RationalMap::new(&RationalMapSpec::unwrapped()).unwrap();
    let c = ElasticConstants::with_frank(1.0, 0.8, 0.5, 1.1).unwrap();
    let e = conformal_energy(&p, &m, 1.0, 1e-8).unwrap();
    let r = EnergyReport::bounds(&p, FRAC_PI_2, &c).with_exact(&p, &e);
    let json = serde_json::to_string(&r).unwrap();
    let back: EnergyReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["lower", "upper", "exact", "exact_err", "scaled", "ratio"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}
