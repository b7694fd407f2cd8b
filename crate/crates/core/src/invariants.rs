//! Edge orientations, kink numbers and trapped areas of conformal maps, in
//! closed form and from independent numerical oracles.
//!
//! Kink numbers follow one convention on all three faces: with `Δ` the
//! continuous change of the director's angle in the face along the path and
//! `δ` the shortest change between its end values,
//! `k = (δ − Δ) / 2π`. The z-face path is the quarter circle from `w = 1`
//! to `w = i`; the x- and y-face paths run from `w = 0` to `w = i` and to
//! `w = 1` respectively.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{ExtComplex, HomogeneousValue, Orientation, RationalMap, Sign};
use crate::error::{Error, Result};
use crate::numerics::{quad1d, quad2d_with, QuadOptions, QuadratureResult, Rect};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologicalInvariants {
    #[serde(rename = "ex")]
    pub e_x: Sign,
    #[serde(rename = "ey")]
    pub e_y: Sign,
    #[serde(rename = "ez")]
    pub e_z: Sign,
    #[serde(rename = "kx")]
    pub k_x: i32,
    #[serde(rename = "ky")]
    pub k_y: i32,
    #[serde(rename = "kz")]
    pub k_z: i32,
    pub omega0: f64,
    pub omega_min: f64,
}

fn parity(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Trapped area at the origin, `½(|n| + 2(a+b) + 4c)π`; negative for
/// anticonformal maps.
pub fn trapped_area(map: &RationalMap) -> f64 {
    let omega = 0.5 * f64::from(map.degree()) * PI;
    match map.orientation() {
        Orientation::Conformal => omega,
        Orientation::Anticonformal => -omega,
    }
}

/// Signs of the director along the x, y and z edges.
pub fn edge_orientations(map: &RationalMap) -> [Sign; 3] {
    let spec = map.spec();
    let a = spec.real.len();
    let b = spec.imag.len();
    let eps = spec.epsilon.as_i32();
    let e_x = eps * parity(a);
    let e_y = eps * parity(b) * if (spec.n - 1).rem_euclid(4) == 0 { 1 } else { -1 };
    let e_z = spec.n.signum();
    let e_y = match map.orientation() {
        Orientation::Conformal => e_y,
        // f(w̄) = conj f(w): the y component of the director flips
        Orientation::Anticonformal => -e_y,
    };
    [e_x, e_y, e_z].map(|v| Sign::of(f64::from(v)))
}

/// Closed-form kink numbers `(k_x, k_y, k_z)`, with axis factors taken in
/// increasing order of position.
pub fn kink_numbers(map: &RationalMap) -> [i32; 3] {
    let spec = map.spec();
    let conformal = RationalMap::new(&spec.clone().with_orientation(Orientation::Conformal))
        .expect("spec already validated");
    let [e_x, e_y, e_z] = edge_orientations(&conformal).map(Sign::as_i32);
    let (a, b) = (spec.real.len(), spec.imag.len());

    let alternating = |list: &[crate::conformal::AxisFactor]| -> i32 {
        list.iter()
            .enumerate()
            .map(|(i, f)| parity(i + 1) * f.sign.as_i32())
            .sum()
    };
    let odd = |count: usize| 1 - parity(count);

    // 4k_x = -(-1)^b e_y (2 Σ_k (-1)^k σ_k + (1 - (-1)^b) e_z)
    let kx4 = -parity(b) * e_y * (2 * alternating(&spec.imag) + odd(b) * e_z);
    let ky4 = -parity(a) * e_x * (2 * alternating(&spec.real) + odd(a) * e_z);
    let sum = |list: &[crate::conformal::AxisFactor]| -> i32 {
        list.iter().map(|f| f.sign.as_i32()).sum()
    };
    let tau: i32 = spec.complex.iter().map(|f| f.sign.as_i32()).sum();
    let kz4 = e_x * e_y - spec.n - 2 * sum(&spec.real) - 2 * sum(&spec.imag) - 4 * tau;
    debug_assert!(kx4 % 4 == 0 && ky4 % 4 == 0 && kz4 % 4 == 0);
    let (kx, ky, kz) = (kx4 / 4, ky4 / 4, kz4 / 4);

    match map.orientation() {
        Orientation::Conformal => [kx, ky, kz],
        Orientation::Anticonformal => [-kx, ky, -kz],
    }
}

/// `2π(|k_x| + |k_y| + |k_z| + ¼)`.
pub fn omega_min(kinks: [i32; 3]) -> f64 {
    let total: i32 = kinks.iter().map(|k| k.abs()).sum();
    TAU * (f64::from(total) + 0.25)
}

pub fn invariants_of(map: &RationalMap) -> TopologicalInvariants {
    let [e_x, e_y, e_z] = edge_orientations(map);
    let kinks = kink_numbers(map);
    TopologicalInvariants {
        e_x,
        e_y,
        e_z,
        k_x: kinks[0],
        k_y: kinks[1],
        k_z: kinks[2],
        omega0: trapped_area(map),
        omega_min: omega_min(kinks),
    }
}

/// `∫_Q 𝒜 d²w` over the quarter disc, in polar coordinates, starting from a
/// 16 × 16 grid so that closely spaced zero/pole pairs are seen.
pub fn numeric_trapped_area(map: &RationalMap, tol: f64) -> Result<QuadratureResult> {
    let integrand = |rho: f64, theta: f64| {
        let w = Complex64::from_polar(rho, theta);
        map.area_density(ExtComplex::Finite(w)) * rho
    };
    let opts = QuadOptions {
        abs_tol: tol,
        max_evals: 4_000_000,
        grid: 16,
        ..QuadOptions::default()
    };
    let mut r = quad2d_with(integrand, Rect::new(0.0, 1.0, 0.0, FRAC_PI_2), &opts)?;
    if map.orientation() == Orientation::Anticonformal {
        r.value = -r.value;
    }
    Ok(r)
}

const PHASE_PANELS: usize = 2048;

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// The three face paths joining adjacent edges in the `w` plane.
#[derive(Debug, Clone, Copy)]
enum FacePath {
    /// `w = it` on the `x = 0` face; `f` is imaginary.
    X,
    /// `w = t` on the `y = 0` face; `f` is real.
    Y,
    /// `w = e^{iπt/2}` on the sphere; `|f| = 1`.
    Z,
}

impl FacePath {
    fn point(self, t: f64) -> (Complex64, Complex64) {
        match self {
            FacePath::X => (Complex64::new(0.0, t), Complex64::i()),
            FacePath::Y => (Complex64::new(t, 0.0), Complex64::new(1.0, 0.0)),
            FacePath::Z => {
                let w = Complex64::from_polar(1.0, FRAC_PI_2 * t);
                (w, Complex64::i() * FRAC_PI_2 * w)
            }
        }
    }

    /// In-plane angle of the director.
    fn angle(self, n: Vec3) -> f64 {
        match self {
            FacePath::X => n[1].atan2(n[2]),
            FacePath::Y => n[0].atan2(n[2]),
            FacePath::Z => n[1].atan2(n[0]),
        }
    }

    /// `dφ/dt` from the homogeneous value at the analytic argument `u` with
    /// `du/dt = du`. On the x and y paths `f = c g` with `g` real and
    /// `φ = 2 arctan g`; on the z path `φ = arg f`.
    fn rate(self, h: &HomogeneousValue, du: Complex64) -> f64 {
        let wr = h.dp * h.q - h.p * h.dq;
        match self {
            FacePath::Z => (wr * du / (h.p * h.q)).im,
            FacePath::X | FacePath::Y => {
                let c = match self {
                    FacePath::X => Complex64::i(),
                    _ => Complex64::new(1.0, 0.0),
                };
                // f'/(1 + |f|²) = W Q̄/Q / (|P|² + |Q|²); near a pole of f
                // the phase Q̄/Q equals (P̄/P)(c/c̄) because g is real.
                let phase = if h.q.norm_sqr() >= h.p.norm_sqr() {
                    h.q.conj() / h.q
                } else {
                    h.p.conj() / h.p * (c / c.conj())
                };
                let s = h.p.norm_sqr() + h.q.norm_sqr();
                2.0 * (wr * phase * du / c).re / s
            }
        }
    }
}

/// Continuous change of the director angle along `path`, with the angles at
/// both ends.
///
/// Each panel's change is the wrapped endpoint difference plus the multiple
/// of 2π that brings it closest to the quadrature of `dφ/dt` over the panel,
/// so turns narrower than the panel are still counted.
fn track_angle(map: &RationalMap, path: FacePath) -> Result<(f64, f64, f64)> {
    let conj = map.orientation() == Orientation::Anticonformal;
    let at = |t: f64| {
        let (w, dw) = path.point(t);
        let h = map.eval(ExtComplex::Finite(w));
        let du = if conj { dw.conj() } else { dw };
        (h, du)
    };
    let angle = |t: f64| path.angle(at(t).0.lift());
    let rate = |t: f64| {
        let (h, du) = at(t);
        path.rate(&h, du)
    };
    let opts = QuadOptions {
        abs_tol: 1e-3,
        max_evals: 200_000,
        ..QuadOptions::default()
    };

    let start = angle(0.0);
    let mut prev = start;
    let mut total = 0.0;
    for i in 0..PHASE_PANELS {
        let (t0, t1) = (
            i as f64 / PHASE_PANELS as f64,
            (i + 1) as f64 / PHASE_PANELS as f64,
        );
        let next = angle(t1);
        let step = wrap(next - prev);
        let integral = match quad1d(rate, (t0, t1), &opts) {
            Ok(r) => r.value,
            Err(Error::Accuracy { .. }) => {
                return Err(Error::PathResolution { refinements: i })
            }
            Err(e) => return Err(e),
        };
        let turns = ((integral - step) / TAU).round();
        total += step + TAU * turns;
        prev = next;
    }
    Ok((total, start, prev))
}

fn kink_from_phase(total: f64, start: f64, end: f64) -> Result<i32> {
    let shortest = wrap(end - start);
    let k = (shortest - total) / TAU;
    let rounded = k.round();
    if (k - rounded).abs() > 1e-6 {
        return Err(Error::PathResolution { refinements: 0 });
    }
    Ok(rounded as i32)
}

fn numeric_kink(map: &RationalMap, path: FacePath) -> Result<i32> {
    let (total, a, b) = track_angle(map, path)?;
    kink_from_phase(total, a, b)
}

/// Kink number on the z-face from the director's azimuth along `|w| = 1`.
pub fn numeric_kink_z(map: &RationalMap) -> Result<i32> {
    numeric_kink(map, FacePath::Z)
}

/// Kink number on the x-face (`x = 0`), along `w ∈ [0, i]`.
pub fn numeric_kink_x(map: &RationalMap) -> Result<i32> {
    numeric_kink(map, FacePath::X)
}

/// Kink number on the y-face (`y = 0`), along `w ∈ [0, 1]`.
pub fn numeric_kink_y(map: &RationalMap) -> Result<i32> {
    numeric_kink(map, FacePath::Y)
}

/// Edge orientations read off the director on the three edges.
pub fn sampled_edge_orientations(map: &RationalMap) -> [Sign; 3] {
    let nx = map.director([1.0, 0.0, 0.0]).expect("off the vertex")[0];
    let ny = map.director([0.0, 1.0, 0.0]).expect("off the vertex")[1];
    let nz = map.director([0.0, 0.0, 1.0]).expect("off the vertex")[2];
    [nx, ny, nz].map(Sign::of)
}

/// Numerical counterparts of the closed-form invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericInvariants {
    pub omega0_numeric: f64,
    pub omega0_numeric_err: f64,
    pub kx_numeric: i32,
    pub ky_numeric: i32,
    pub kz_numeric: i32,
    pub ex_sampled: Sign,
    pub ey_sampled: Sign,
    pub ez_sampled: Sign,
}

pub fn numeric_invariants(map: &RationalMap, tol: f64) -> Result<NumericInvariants> {
    let area = numeric_trapped_area(map, tol)?;
    let [ex, ey, ez] = sampled_edge_orientations(map);
    Ok(NumericInvariants {
        omega0_numeric: area.value,
        omega0_numeric_err: area.error_estimate,
        kx_numeric: numeric_kink_x(map)?,
        ky_numeric: numeric_kink_y(map)?,
        kz_numeric: numeric_kink_z(map)?,
        ex_sampled: ex,
        ey_sampled: ey,
        ez_sampled: ez,
    })
}
