//! Acceptance criteria, one line each. Exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use prism_nematic::conformal::gradient_sq_fd;
use prism_nematic::energy::{
    conformal_energy, exterior_flux, lower_bound_lp, lower_bound_prism, prism_lp_data,
    unwrapped_energy, upper_bound_prism, LpConstraints,
};
use prism_nematic::invariants::{
    kink_numbers, numeric_kink_x, numeric_kink_y, numeric_kink_z, numeric_trapped_area,
    trapped_area,
};
use prism_nematic::sweep::{builtin_family, minimize_family, sweep_energy, Classification};
use prism_nematic::{make_prism, vertex_trapped_areas, Prism, RationalMap, RationalMapSpec, Sign, Vec3};
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn norm(v: Vec3) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// The 50 random specs shared by criteria 4 and 5.
fn oracle_specs() -> Vec<RationalMap> {
    let mut rng = common::rng(0xACCE);
    (0..50).map(|_| common::random_map(&mut rng, 9)).collect()
}

fn imag1(s: f64) -> RationalMap {
    RationalMap::new(&RationalMapSpec::unwrapped().with_imag(s, Sign::Plus)).unwrap()
}

fn cube_lower_bound() -> Outcome {
    let cube = Prism::cube(1.0).unwrap();
    let e = lower_bound_prism(&cube, FRAC_PI_2, 1.0);
    let err = (e - 4.0 * PI).abs();
    check(err <= 1e-12, format!("E- = {e:.15}, |E- - 4pi| = {err:.1e}"))
}

fn bound_ratio() -> Outcome {
    let cube = Prism::cube(1.0).unwrap();
    let r = upper_bound_prism(&cube, FRAC_PI_2, 1.0) / lower_bound_prism(&cube, FRAC_PI_2, 1.0);
    let mut worst = (r - 3f64.sqrt()).abs();
    let mut rng = common::rng(2);
    for _ in 0..20 {
        let p = common::random_prism(&mut rng);
        let omega = rng.gen_range(0.5..20.0);
        let [lx, ly, lz] = p.lengths();
        let want = ((lx / lz).powi(2) + (ly / lz).powi(2) + 1.0).sqrt();
        let got = upper_bound_prism(&p, omega, 1.0) / lower_bound_prism(&p, omega, 1.0);
        worst = worst.max((got - want).abs() / want);
    }
    check(worst <= 1e-12, format!("cube ratio {r:.15}, worst deviation {worst:.1e}"))
}

fn unwrapped_cube() -> Outcome {
    let cube = Prism::cube(1.0).unwrap();
    let e0 = unwrapped_energy(&cube, 1.0).map_err(|e| e.to_string())?;
    let map = RationalMap::new(&RationalMapSpec::unwrapped()).unwrap();
    let q = conformal_energy(&cube, &map, 1.0, 1e-9).map_err(|e| e.to_string())?;
    let ratio = e0 / (4.0 * PI);
    let rel = (q.value - e0).abs() / e0;
    check(
        (15.25..=15.45).contains(&e0) && (1.21..=1.23).contains(&ratio) && rel <= 1e-4,
        format!("E0 = {e0:.6}, E0/4pi = {ratio:.4}, quadrature rel. diff {rel:.1e}"),
    )
}

fn degree_oracle() -> Outcome {
    let mut maps = vec![
        RationalMap::new(&RationalMapSpec::unwrapped()).unwrap(),
        imag1(0.5),
    ];
    maps.extend(oracle_specs());
    let errs: Vec<Result<f64, String>> = maps
        .par_iter()
        .map(|m| {
            let q = numeric_trapped_area(m, 1e-6).map_err(|e| format!("{:?}: {e}", m.spec()))?;
            Ok((q.value - trapped_area(m)).abs())
        })
        .collect();
    let mut worst = 0.0f64;
    for e in errs {
        worst = worst.max(e?);
    }
    let anchors = trapped_area(&maps[0]) == FRAC_PI_2 && trapped_area(&maps[1]) == 1.5 * PI;
    check(
        worst <= 1e-5 && anchors,
        format!("{} specs, worst |numeric - closed form| = {worst:.1e}", maps.len()),
    )
}

fn kink_oracle() -> Outcome {
    let mut maps = vec![imag1(0.5)];
    maps.extend(oracle_specs());
    let mismatches: Vec<String> = maps
        .par_iter()
        .filter_map(|m| {
            let numeric = (|| Ok::<_, prism_nematic::Error>([numeric_kink_x(m)?, numeric_kink_y(m)?, numeric_kink_z(m)?]))();
            match numeric {
                Ok(k) if k == kink_numbers(m) => None,
                Ok(k) => Some(format!("{:?}: numeric {k:?} vs {:?}", m.spec(), kink_numbers(m))),
                Err(e) => Some(format!("{:?}: {e}", m.spec())),
            }
        })
        .collect();
    let kz = kink_numbers(&maps[0])[2];
    check(
        mismatches.is_empty() && kz.abs() == 1,
        if mismatches.is_empty() {
            format!("{} specs match exactly, imag1 k_z = {kz}", maps.len())
        } else {
            mismatches.join("; ")
        },
    )
}

fn energy_curve_shapes() -> Outcome {
    let grid: Vec<f64> = (0..10).map(|i| f64::from(50 + 5 * i) / 100.0).collect();
    let fam = builtin_family("imag1").unwrap();
    let cube = Prism::cube(1.0).unwrap();
    let flat = make_prism(20.0, 10.0, 1.0).unwrap();
    let err = |e: prism_nematic::Error| e.to_string();

    let cube_rows = sweep_energy(&fam, &cube, 1.0, &grid, 1e-9).map_err(err)?.rows;
    let decreasing = cube_rows.windows(2).all(|w| w[1].scaled < w[0].scaled);
    let cube_min = minimize_family(&fam, &cube, 1.0, 1e-6).map_err(err)?;

    let flat_rows = sweep_energy(&fam, &flat, 1.0, &grid, 1e-9).map_err(err)?.rows;
    let imin = (0..flat_rows.len())
        .min_by(|&a, &b| flat_rows[a].scaled.total_cmp(&flat_rows[b].scaled))
        .unwrap();
    let interior = imin > 0 && imin + 1 < flat_rows.len();
    let flat_min = minimize_family(&fam, &flat, 1.0, 1e-6).map_err(err)?;

    check(
        decreasing
            && cube_min.classification == Classification::EdgeSingular
            && interior
            && flat_min.classification == Classification::Smooth,
        format!(
            "cube: eps {:.4} -> {:.4}, {:?}; (20,10,1): grid min at s = {:.2}, argmin {:.4}, {:?}",
            cube_rows[0].scaled,
            cube_rows[cube_rows.len() - 1].scaled,
            cube_min.classification,
            grid[imin],
            flat_min.result.argmin,
            flat_min.classification
        ),
    )
}

fn bound_sandwich() -> Outcome {
    let mut rng = common::rng(7);
    let cases: Vec<(Prism, RationalMap)> = (0..20)
        .map(|_| (common::random_prism(&mut rng), common::random_map(&mut rng, 7)))
        .collect();
    let results: Vec<Result<(f64, f64, f64, f64), String>> = cases
        .par_iter()
        .map(|(p, m)| {
            let omega = trapped_area(m).abs();
            let (lo, up) = (lower_bound_prism(p, omega, 1.0), upper_bound_prism(p, omega, 1.0));
            let e = conformal_energy(p, m, 1.0, 1e-7 * up).map_err(|e| e.to_string())?;
            Ok((lo, e.value, e.error_estimate, up))
        })
        .collect();
    let mut tightest = f64::INFINITY;
    for r in results {
        let (lo, e, err, up) = r?;
        if !(lo <= e + err && e - err <= up) {
            return Err(format!("violated: {lo} <= {e} <= {up}"));
        }
        tightest = tightest.min((e - lo) / lo).min((up - e) / up);
    }
    Ok(format!("20 pairs hold, smallest relative margin {tightest:.3}"))
}

fn lp_agreement() -> Outcome {
    let mut rng = common::rng(8);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = common::random_prism(&mut rng);
        let omega = rng.gen_range(0.5..20.0);
        let k = rng.gen_range(0.5..2.0);
        let (vertices, _) = prism_lp_data(&p, omega);
        let cert = lower_bound_lp(&vertices, &LpConstraints::AllPairs, k).map_err(|e| e.to_string())?;
        let want = 8.0 * k * p.lz() * omega;
        worst = worst.max((cert.objective - want).abs() / want);
    }
    check(worst <= 1e-9, format!("10 prisms, worst relative deviation {worst:.1e}"))
}

fn conformality_equality() -> Outcome {
    let mut rng = common::rng(9);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let m = common::random_map(&mut rng, 9);
        let p = common::random_prism(&mut rng);
        for _ in 0..100 {
            let r = common::random_octant_point(&mut rng, &p);
            let g = gradient_sq_fd(&m, r, 1e-5 * norm(r)).map_err(|e| e.to_string())?;
            let d = 2.0 * norm(m.flux_field(r).map_err(|e| e.to_string())?);
            worst = worst.max((g - d).abs() / d);
        }
    }
    check(worst <= 1e-5, format!("1000 points, worst relative gap {worst:.1e}"))
}

fn conservation() -> Outcome {
    let mut rng = common::rng(10);
    let (mut worst_div, mut worst_ext) = (0.0f64, 0.0f64);
    let mut sums_exact = true;
    for _ in 0..10 {
        let m = common::random_map(&mut rng, 9);
        let p = common::random_prism(&mut rng);
        for _ in 0..20 {
            let r = common::random_octant_point(&mut rng, &p);
            let h = 1e-5 * norm(r);
            let (mut div, mut scale) = (0.0, 0.0);
            for j in 0..3 {
                let (mut a, mut b) = (r, r);
                a[j] += h;
                b[j] -= h;
                let da = m.flux_field(a).map_err(|e| e.to_string())?[j];
                let db = m.flux_field(b).map_err(|e| e.to_string())?[j];
                let term = (da - db) / (2.0 * h);
                div += term;
                scale += term.abs();
            }
            worst_div = worst_div.max(div.abs() / scale);
        }
        let total = conformal_energy(&p, &m, 1.0, 1e-6).map_err(|e| e.to_string())?.value / 16.0;
        for f in exterior_flux(&p, &m).map_err(|e| e.to_string())? {
            worst_ext = worst_ext.max(f.abs() / total);
        }
        let areas = vertex_trapped_areas(&p, trapped_area(&m));
        sums_exact &= areas.iter().map(|a| a.1).sum::<f64>() == 0.0;
    }
    check(
        worst_div <= 1e-5 && worst_ext <= 1e-8 && sums_exact,
        format!(
            "relative divergence {worst_div:.1e}, exterior flux/total {worst_ext:.1e}, vertex sums exact: {sums_exact}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 cube lower bound = 4pi", cube_lower_bound, Duration::from_secs(1)),
        ("2 upper/lower ratio law", bound_ratio, Duration::from_secs(1)),
        ("3 unwrapped cube energy", unwrapped_cube, Duration::from_secs(5)),
        ("4 trapped-area oracle", degree_oracle, Duration::from_secs(60)),
        ("5 kink-number oracle", kink_oracle, Duration::from_secs(30)),
        ("6 energy-curve shapes", energy_curve_shapes, Duration::from_secs(120)),
        ("7 bound sandwich", bound_sandwich, Duration::from_secs(120)),
        ("8 LP vs closed form", lp_agreement, Duration::from_secs(1)),
        ("9 conformality equality", conformality_equality, Duration::from_secs(10)),
        ("10 conservation", conservation, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time budget {budget:?}")),
            Err(d) => ("FAIL", d),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("[{tag}] {name}: {detail} ({:.2}s)", elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
