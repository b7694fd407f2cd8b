//! Shared random generators for integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use prism_nematic::{make_prism, Orientation, Prism, RationalMap, RationalMapSpec, Sign};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sign(rng: &mut impl Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// `count` positions in `[0.1, 0.9]`, pairwise at least 0.05 apart.
fn separated(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    loop {
        let mut xs: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..0.9)).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|w| w[1] - w[0] >= 0.05) {
            return xs;
        }
    }
}

/// A valid spec of degree at most `max_degree`, conformal or anticonformal.
pub fn random_spec(rng: &mut impl Rng, max_degree: u32) -> RationalMapSpec {
    loop {
        let n: i32 = 2 * rng.gen_range(-2..=1) + 1;
        let a = rng.gen_range(0..=2usize);
        let b = rng.gen_range(0..=2usize);
        let c = rng.gen_range(0..=1usize);
        let degree = n.unsigned_abs() as usize + 2 * (a + b) + 4 * c;
        if degree > max_degree as usize {
            continue;
        }
        let mut spec = RationalMapSpec::new(sign(rng), n);
        for p in separated(rng, a) {
            spec = spec.with_real(p, sign(rng));
        }
        for p in separated(rng, b) {
            spec = spec.with_imag(p, sign(rng));
        }
        for _ in 0..c {
            let m = rng.gen_range(0.15..0.85);
            let th = rng.gen_range(0.15..FRAC_PI_2 - 0.15);
            spec = spec.with_complex(m * th.cos(), m * th.sin(), sign(rng));
        }
        if rng.gen_bool(0.25) {
            spec = spec.with_orientation(Orientation::Anticonformal);
        }
        if spec.validate().is_ok() {
            return spec;
        }
    }
}

pub fn random_map(rng: &mut impl Rng, max_degree: u32) -> RationalMap {
    RationalMap::new(&random_spec(rng, max_degree)).unwrap()
}

/// Sorted lengths with aspect ratios `a_xz` up to 20.
pub fn random_prism(rng: &mut impl Rng) -> Prism {
    let lz = rng.gen_range(0.5..2.0);
    let ly = lz * rng.gen_range(1.0..5.0);
    let lx = ly * rng.gen_range(1.0..4.0);
    make_prism(lx, ly, lz).unwrap()
}

/// A point strictly inside the octant of `prism`, away from the origin.
pub fn random_octant_point(rng: &mut impl Rng, prism: &Prism) -> [f64; 3] {
    let [lx, ly, lz] = prism.lengths();
    loop {
        let p = [
            rng.gen_range(0.02..0.98) * lx / 2.0,
            rng.gen_range(0.02..0.98) * ly / 2.0,
            rng.gen_range(0.02..0.98) * lz / 2.0,
        ];
        if p.iter().map(|v| v * v).sum::<f64>().sqrt() > 0.05 * lz {
            return p;
        }
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
