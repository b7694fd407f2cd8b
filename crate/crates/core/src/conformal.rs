//! Rational maps `f(w)` satisfying tangent boundary conditions on the octant,
//! and the radially constant director fields they define.
//!
//! A point `r` of the octant is projected to `w = (x + iy) / (|r| + z)` in the
//! quarter disc, and the director is the inverse stereographic image of
//! `f(w)`. The map is
//!
//! ```text
//! f(w) = ε wⁿ ∏ⱼ ((w² − rⱼ²)/(rⱼ²w² − 1))^ρⱼ
//!            ∏ₖ ((w² + sₖ²)/(sₖ²w² + 1))^σₖ
//!            ∏ₗ ((w² − tₗ²)(w² − t̄ₗ²)/((tₗ²w² − 1)(t̄ₗ²w² − 1)))^τₗ
//! ```
//!
//! All evaluation is projective: `f = P/Q` with `P`, `Q` and their derivatives
//! accumulated factor by factor, so poles and the density near them are
//! computed without dividing by zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{cross, dot, norm, scale, Vec3};

/// Strict inequalities on factor positions are enforced with this margin.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_i32())
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i32() as i8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Conformal,
    Anticonformal,
}

/// A zero (`Plus`) or pole (`Minus`) at `±position` or `±i·position`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, Sign)", into = "(f64, Sign)")]
pub struct AxisFactor {
    pub position: f64,
    pub sign: Sign,
}

impl From<(f64, Sign)> for AxisFactor {
    fn from((position, sign): (f64, Sign)) -> Self {
        AxisFactor { position, sign }
    }
}

impl From<AxisFactor> for (f64, Sign) {
    fn from(f: AxisFactor) -> Self {
        (f.position, f.sign)
    }
}

/// A quadruple of zeros (or poles) at `±t`, `±t̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, Sign)", into = "(f64, f64, Sign)")]
pub struct ComplexFactor {
    pub position: Complex64,
    pub sign: Sign,
}

impl From<(f64, f64, Sign)> for ComplexFactor {
    fn from((re, im, sign): (f64, f64, Sign)) -> Self {
        ComplexFactor {
            position: Complex64::new(re, im),
            sign,
        }
    }
}

impl From<ComplexFactor> for (f64, f64, Sign) {
    fn from(f: ComplexFactor) -> Self {
        (f.position.re, f.position.im, f.sign)
    }
}

/// The discrete and continuous data of a rational map, as supplied by a user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalMapSpec {
    pub epsilon: Sign,
    pub n: i32,
    #[serde(default)]
    pub real: Vec<AxisFactor>,
    #[serde(default)]
    pub imag: Vec<AxisFactor>,
    #[serde(default)]
    pub complex: Vec<ComplexFactor>,
    #[serde(default)]
    pub orientation: Orientation,
}

impl RationalMapSpec {
    /// `f(w) = w`.
    pub fn unwrapped() -> Self {
        Self::new(Sign::Plus, 1)
    }

    pub fn new(epsilon: Sign, n: i32) -> Self {
        RationalMapSpec {
            epsilon,
            n,
            real: Vec::new(),
            imag: Vec::new(),
            complex: Vec::new(),
            orientation: Orientation::Conformal,
        }
    }

    pub fn with_real(mut self, position: f64, sign: Sign) -> Self {
        self.real.push(AxisFactor { position, sign });
        self
    }

    pub fn with_imag(mut self, position: f64, sign: Sign) -> Self {
        self.imag.push(AxisFactor { position, sign });
        self
    }

    pub fn with_complex(mut self, re: f64, im: f64, sign: Sign) -> Self {
        self.complex.push(ComplexFactor {
            position: Complex64::new(re, im),
            sign,
        });
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Degree of `f` as a map of the Riemann sphere.
    pub fn degree(&self) -> u32 {
        self.n.unsigned_abs() + 2 * (self.real.len() + self.imag.len()) as u32
            + 4 * self.complex.len() as u32
    }

    pub fn validate(&self) -> Result<()> {
        if self.n % 2 == 0 {
            return Err(Error::SpecValidation(format!(
                "n must be odd, got {}",
                self.n
            )));
        }
        let in_unit = |x: f64| x.is_finite() && x > BOUNDARY_TOL && x < 1.0 - BOUNDARY_TOL;
        for (group, list) in [("real", &self.real), ("imag", &self.imag)] {
            for f in list {
                if !in_unit(f.position) {
                    return Err(Error::SpecValidation(format!(
                        "{group} factor position must lie in (0, 1), got {}",
                        f.position
                    )));
                }
            }
            for (i, a) in list.iter().enumerate() {
                for b in &list[..i] {
                    if a.sign != b.sign && (a.position - b.position).abs() <= BOUNDARY_TOL {
                        return Err(Error::SpecValidation(format!(
                            "{group} zero and pole coincide at {}",
                            a.position
                        )));
                    }
                }
            }
        }
        for f in &self.complex {
            let t = f.position;
            if !in_unit(t.norm()) {
                return Err(Error::SpecValidation(format!(
                    "complex factor modulus must lie in (0, 1), got {}",
                    t.norm()
                )));
            }
            if t.re.abs() <= BOUNDARY_TOL || t.im.abs() <= BOUNDARY_TOL {
                return Err(Error::SpecValidation(format!(
                    "complex factor {t} must lie off both axes"
                )));
            }
        }
        for (i, a) in self.complex.iter().enumerate() {
            for b in &self.complex[..i] {
                let (pa, pb) = (first_quadrant(a.position), first_quadrant(b.position));
                if a.sign != b.sign && (pa - pb).norm() <= BOUNDARY_TOL {
                    return Err(Error::SpecValidation(format!(
                        "complex zero and pole coincide at {pa}"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn first_quadrant(t: Complex64) -> Complex64 {
    Complex64::new(t.re.abs(), t.im.abs())
}

/// `f = P/Q` together with `dP/dw` and `dQ/dw`.
///
/// At the point at infinity the derivatives are taken with respect to the
/// chart coordinate `u = 1/w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousValue {
    pub p: Complex64,
    pub q: Complex64,
    pub dp: Complex64,
    pub dq: Complex64,
}

impl HomogeneousValue {
    pub fn value(&self) -> ExtComplex {
        if self.q == Complex64::new(0.0, 0.0) {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(self.p / self.q)
        }
    }

    /// `4|f'|² / (1 + |f|²)²`, evaluated as `4|P'Q − PQ'|² / (|P|² + |Q|²)²`.
    pub fn area_density(&self) -> f64 {
        let wr = self.dp * self.q - self.p * self.dq;
        let s = self.p.norm_sqr() + self.q.norm_sqr();
        4.0 * wr.norm_sqr() / (s * s)
    }

    /// Unit vector whose stereographic projection is `P/Q`.
    pub fn lift(&self) -> Vec3 {
        lift_projective(self.p, self.q)
    }
}

/// Numerator/denominator pair of a quadratic-in-`w²` factor.
#[derive(Debug, Clone, Copy)]
struct QuadFactor {
    /// Coefficients of `c0 + c1 z + c2 z²` with `z = w²`.
    zeros: [f64; 3],
    poles: [f64; 3],
}

impl QuadFactor {
    fn eval(c: &[f64; 3], w: Complex64) -> (Complex64, Complex64) {
        let z = w * w;
        let v = c[0] + z * (c[1] + z * c[2]);
        let dv = (c[1] + z * (2.0 * c[2])) * (2.0 * w);
        (v, dv)
    }
}

/// A validated rational map, compiled for fast evaluation.
///
/// Axis factors are stored sorted by increasing position; complex factors are
/// reduced to their first-quadrant representative.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    spec: RationalMapSpec,
}

impl RationalMap {
    pub fn new(spec: &RationalMapSpec) -> Result<Self> {
        spec.validate()?;
        let mut spec = spec.clone();
        spec.real.sort_by(|a, b| a.position.total_cmp(&b.position));
        spec.imag.sort_by(|a, b| a.position.total_cmp(&b.position));
        for f in &mut spec.complex {
            f.position = first_quadrant(f.position);
        }
        Ok(RationalMap { spec })
    }

    /// The spec with axis factors sorted by position.
    pub fn spec(&self) -> &RationalMapSpec {
        &self.spec
    }

    pub fn orientation(&self) -> Orientation {
        self.spec.orientation
    }

    pub fn degree(&self) -> u32 {
        self.spec.degree()
    }

    fn factors(&self) -> impl Iterator<Item = (QuadFactor, Sign)> + '_ {
        let real = self.spec.real.iter().map(|f| {
            let r2 = f.position * f.position;
            (
                QuadFactor {
                    zeros: [-r2, 1.0, 0.0],
                    poles: [-1.0, r2, 0.0],
                },
                f.sign,
            )
        });
        let imag = self.spec.imag.iter().map(|f| {
            let s2 = f.position * f.position;
            (
                QuadFactor {
                    zeros: [s2, 1.0, 0.0],
                    poles: [1.0, s2, 0.0],
                },
                f.sign,
            )
        });
        let complex = self.spec.complex.iter().map(|f| {
            let t2 = f.position * f.position;
            let m4 = t2.norm_sqr();
            (
                QuadFactor {
                    zeros: [m4, -2.0 * t2.re, 1.0],
                    poles: [1.0, -2.0 * t2.re, m4],
                },
                f.sign,
            )
        });
        real.chain(imag).chain(complex)
    }

    /// Evaluates the analytic map at `w` (no conjugation).
    fn eval_analytic(&self, w: Complex64) -> HomogeneousValue {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(self.spec.epsilon.as_f64(), 0.0);
        let mut dp = zero;
        let mut q = one;
        let mut dq = zero;

        let m = self.spec.n.unsigned_abs() as i32;
        let wm = w.powi(m);
        let dwm = if m == 0 { zero } else { w.powi(m - 1) * f64::from(m) };
        if self.spec.n > 0 {
            (p, dp) = (p * wm, p * dwm + dp * wm);
        } else {
            (q, dq) = (q * wm, q * dwm + dq * wm);
        }

        for (factor, sign) in self.factors() {
            let (num, dnum) = QuadFactor::eval(&factor.zeros, w);
            let (den, dden) = QuadFactor::eval(&factor.poles, w);
            let ((a, da), (b, db)) = match sign {
                Sign::Plus => ((num, dnum), (den, dden)),
                Sign::Minus => ((den, dden), (num, dnum)),
            };
            (p, dp) = (p * a, p * da + dp * a);
            (q, dq) = (q * b, q * db + dq * b);
        }
        HomogeneousValue { p, q, dp, dq }
    }

    /// `f(w)`, or `f(w̄)` for an anticonformal map.
    pub fn eval(&self, w: ExtComplex) -> HomogeneousValue {
        match w {
            ExtComplex::Finite(w) => {
                let w = match self.spec.orientation {
                    Orientation::Conformal => w,
                    Orientation::Anticonformal => w.conj(),
                };
                self.eval_analytic(w)
            }
            // f(1/u) = 1/f(u)
            ExtComplex::Infinity => {
                let at0 = self.eval_analytic(Complex64::new(0.0, 0.0));
                HomogeneousValue {
                    p: at0.q,
                    q: at0.p,
                    dp: at0.dq,
                    dq: at0.dp,
                }
            }
        }
    }

    /// Pulled-back area density `𝒜 = 4|f'|²/(1 + |f|²)²` per unit `d²w`.
    /// Zero at the point at infinity.
    pub fn area_density(&self, w: ExtComplex) -> f64 {
        match w {
            ExtComplex::Finite(_) => self.eval(w).area_density(),
            ExtComplex::Infinity => 0.0,
        }
    }

    /// Area density per unit solid angle of the source sphere,
    /// `𝒜 (1 + |w|²)² / 4`. Invariant under `w -> 1/w`.
    pub fn spherical_density(&self, w: ExtComplex) -> f64 {
        match w {
            ExtComplex::Finite(z) => {
                let s = 1.0 + z.norm_sqr();
                self.eval(w).area_density() * s * s / 4.0
            }
            ExtComplex::Infinity => self.eval(ExtComplex::Infinity).area_density() / 4.0,
        }
    }

    /// The director `n(r)`; radially constant.
    pub fn director(&self, r: Vec3) -> Result<Vec3> {
        let w = project_point(r)?;
        Ok(self.eval(w).lift())
    }

    /// The topological flux field `D(r)`, radial with magnitude
    /// `spherical_density / |r|²`, negated for anticonformal maps.
    pub fn flux_field(&self, r: Vec3) -> Result<Vec3> {
        let w = project_point(r)?;
        let rr = norm(r);
        let orient = match self.spec.orientation {
            Orientation::Conformal => 1.0,
            Orientation::Anticonformal => -1.0,
        };
        Ok(scale(r, orient * self.spherical_density(w) / (rr * rr * rr)))
    }
}

/// Validates `spec` and evaluates `f` at `w`.
pub fn eval_f(spec: &RationalMapSpec, w: ExtComplex) -> Result<HomogeneousValue> {
    Ok(RationalMap::new(spec)?.eval(w))
}

fn lift_projective(p: Complex64, q: Complex64) -> Vec3 {
    let pq = p * q.conj();
    let (pp, qq) = (p.norm_sqr(), q.norm_sqr());
    let s = pp + qq;
    [2.0 * pq.re / s, 2.0 * pq.im / s, (qq - pp) / s]
}

/// Inverse stereographic projection `w -> e` with `w = (e_x + i e_y)/(1 + e_z)`.
pub fn stereo_lift(w: ExtComplex) -> Vec3 {
    match w {
        ExtComplex::Finite(z) => lift_projective(z, Complex64::new(1.0, 0.0)),
        ExtComplex::Infinity => [0.0, 0.0, -1.0],
    }
}

/// Stereographic projection of a unit vector; the south pole maps to infinity.
pub fn stereo_project(e: Vec3) -> Result<ExtComplex> {
    let len = norm(e);
    if !len.is_finite() || (len - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(len));
    }
    Ok(project_ray(e, 1.0))
}

/// `(x + iy)/(|r| + z)`, switching to `(|r| − z)/(x − iy)` in the lower half
/// space to avoid cancellation.
fn project_ray(r: Vec3, len: f64) -> ExtComplex {
    let [x, y, z] = r;
    if z >= 0.0 {
        ExtComplex::Finite(Complex64::new(x, y) / (len + z))
    } else {
        let den = Complex64::new(x, -y);
        if den.norm_sqr() == 0.0 {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite((len - z) / den)
        }
    }
}

/// Projection of a point (not necessarily unit) to the `w` plane.
pub fn project_point(r: Vec3) -> Result<ExtComplex> {
    let len = norm(r);
    if len == 0.0 {
        return Err(Error::UndefinedAtVertex);
    }
    if !len.is_finite() {
        return Err(Error::Domain(format!("non-finite point {r:?}")));
    }
    Ok(project_ray(r, len))
}

/// Finite-difference derivatives `∂_j n` at `r` (central, step `h`).
pub fn director_jacobian_fd(map: &RationalMap, r: Vec3, h: f64) -> Result<[Vec3; 3]> {
    let mut out = [[0.0; 3]; 3];
    for (j, col) in out.iter_mut().enumerate() {
        let mut plus = r;
        let mut minus = r;
        plus[j] += h;
        minus[j] -= h;
        let (np, nm) = (map.director(plus)?, map.director(minus)?);
        *col = std::array::from_fn(|k| (np[k] - nm[k]) / (2.0 * h));
    }
    Ok(out)
}

/// `(∇n)² = Σ_j |∂_j n|²` by central differences.
pub fn gradient_sq_fd(map: &RationalMap, r: Vec3, h: f64) -> Result<f64> {
    Ok(director_jacobian_fd(map, r, h)?
        .iter()
        .map(|c| dot(*c, *c))
        .sum())
}

/// `D_j = ½ ε_jkl (∂_k n × ∂_l n)·n` from finite differences of the director,
/// independent of the closed form used by [`RationalMap::flux_field`].
pub fn flux_field_fd(map: &RationalMap, r: Vec3, h: f64) -> Result<Vec3> {
    let [dx, dy, dz] = director_jacobian_fd(map, r, h)?;
    let n = map.director(r)?;
    Ok([
        dot(cross(dy, dz), n),
        dot(cross(dz, dx), n),
        dot(cross(dx, dy), n),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ExtComplex {
        ExtComplex::finite(re, im)
    }

    fn imag1(s: f64) -> RationalMap {
        RationalMap::new(&RationalMapSpec::unwrapped().with_imag(s, Sign::Plus)).unwrap()
    }

    fn assert_vec(a: Vec3, b: Vec3, tol: f64) {
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn unwrapped_is_identity() {
        let hv = eval_f(&RationalMapSpec::unwrapped(), c(0.5, 0.0)).unwrap();
        assert_eq!(hv.value(), c(0.5, 0.0));
    }

    #[test]
    fn imag_family_values_and_pole() {
        let f = imag1(0.5);
        match f.eval(c(1.0, 0.0)).value() {
            ExtComplex::Finite(z) => assert!((z - 1.0).norm() < 1e-15),
            ExtComplex::Infinity => panic!("unexpected pole"),
        }
        let hv = f.eval(c(0.0, 2.0));
        assert_eq!(hv.q, Complex64::new(0.0, 0.0));
        assert_eq!(hv.value(), ExtComplex::Infinity);
        // density stays finite at the pole
        assert!(hv.area_density().is_finite());
    }

    #[test]
    fn validation_errors() {
        let bad_n = RationalMapSpec::new(Sign::Plus, 2);
        assert!(matches!(bad_n.validate(), Err(Error::SpecValidation(_))));
        let out = RationalMapSpec::unwrapped().with_real(1.0, Sign::Plus);
        assert!(RationalMap::new(&out).is_err());
        let zero = RationalMapSpec::unwrapped().with_imag(0.0, Sign::Plus);
        assert!(RationalMap::new(&zero).is_err());
        let on_axis = RationalMapSpec::unwrapped().with_complex(0.5, 0.0, Sign::Plus);
        assert!(RationalMap::new(&on_axis).is_err());
        let big = RationalMapSpec::unwrapped().with_complex(0.8, 0.8, Sign::Plus);
        assert!(RationalMap::new(&big).is_err());
        let cancel = RationalMapSpec::unwrapped()
            .with_real(0.3, Sign::Plus)
            .with_real(0.3, Sign::Minus);
        assert!(RationalMap::new(&cancel).is_err());
        let double = RationalMapSpec::unwrapped()
            .with_real(0.3, Sign::Plus)
            .with_real(0.3, Sign::Plus);
        assert!(RationalMap::new(&double).is_ok());
    }

    #[test]
    fn stereographic_round_trip() {
        assert_vec(stereo_lift(c(0.0, 0.0)), [0.0, 0.0, 1.0], 0.0);
        assert_vec(stereo_lift(c(1.0, 0.0)), [1.0, 0.0, 0.0], 0.0);
        assert_vec(stereo_lift(ExtComplex::Infinity), [0.0, 0.0, -1.0], 0.0);
        assert_eq!(
            stereo_project([0.0, 0.0, -1.0]).unwrap(),
            ExtComplex::Infinity
        );
        assert!(matches!(
            stereo_project([1.0, 1.0, 0.0]),
            Err(Error::Normalization(_))
        ));
        for &(re, im) in &[(0.3, -0.2), (5.0, 7.0), (-1e3, 2e3), (0.0, 1e-8)] {
            let e = stereo_lift(c(re, im));
            match stereo_project(e).unwrap() {
                ExtComplex::Finite(z) => {
                    let w = Complex64::new(re, im);
                    assert!((z - w).norm() <= 1e-12 * (1.0 + w.norm()));
                }
                ExtComplex::Infinity => panic!(),
            }
        }
    }

    #[test]
    fn director_on_axes() {
        let f = RationalMap::new(&RationalMapSpec::unwrapped()).unwrap();
        assert_vec(f.director([2.0, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0], 1e-15);
        assert_vec(f.director([0.0, 0.0, 0.3]).unwrap(), [0.0, 0.0, 1.0], 1e-15);
        assert_eq!(f.director([0.0; 3]), Err(Error::UndefinedAtVertex));
        // f(w) = w is the identity on directions
        let n = f.director([1.0, 1.0, 1.0]).unwrap();
        let s = 3f64.sqrt().recip();
        assert_vec(n, [s, s, s], 1e-15);
    }

    #[test]
    fn area_density_examples() {
        let f = RationalMap::new(&RationalMapSpec::unwrapped()).unwrap();
        assert_eq!(f.area_density(c(0.0, 0.0)), 4.0);
        let on_circle = f.area_density(c(0.6, 0.8));
        assert!((on_circle - 1.0).abs() < 1e-15);
        let cube = RationalMap::new(&RationalMapSpec::new(Sign::Plus, 3)).unwrap();
        assert_eq!(cube.area_density(c(0.0, 0.0)), 0.0);
        assert_eq!(f.area_density(ExtComplex::Infinity), 0.0);
        assert_eq!(f.spherical_density(ExtComplex::Infinity), 1.0);
    }

    #[test]
    fn flux_of_unwrapped_is_inverse_square() {
        let f = RationalMap::new(&RationalMapSpec::unwrapped()).unwrap();
        for r in [[0.3, 0.1, 0.2], [1.0, 2.0, 0.5], [0.0, 0.4, 0.0]] {
            let d = f.flux_field(r).unwrap();
            let r3 = norm(r).powi(3);
            assert_vec(d, scale(r, 1.0 / r3), 1e-12 / r3);
        }
        let cube = RationalMap::new(&RationalMapSpec::new(Sign::Plus, 3)).unwrap();
        assert_eq!(cube.flux_field([0.0, 0.0, 1.0]).unwrap(), [0.0; 3]);
        assert_eq!(f.flux_field([0.0; 3]), Err(Error::UndefinedAtVertex));
    }

    #[test]
    fn anticonformal_flips_flux_and_y_component() {
        let spec = RationalMapSpec::unwrapped().with_imag(0.4, Sign::Plus);
        let f = RationalMap::new(&spec).unwrap();
        let g = RationalMap::new(&spec.clone().with_orientation(Orientation::Anticonformal))
            .unwrap();
        let r = [0.3, 0.5, 0.2];
        let (nf, ng) = (f.director(r).unwrap(), g.director(r).unwrap());
        assert_vec(ng, [nf[0], -nf[1], nf[2]], 1e-14);
        let (df, dg) = (f.flux_field(r).unwrap(), g.flux_field(r).unwrap());
        assert_vec(dg, scale(df, -1.0), 1e-12);
    }

    #[test]
    fn infinity_is_reciprocal_of_origin() {
        let spec = RationalMapSpec::new(Sign::Minus, -3).with_real(0.4, Sign::Minus);
        let f = RationalMap::new(&spec).unwrap();
        let at0 = f.eval(c(0.0, 0.0));
        assert_eq!(at0.value(), ExtComplex::Infinity);
        assert_eq!(f.eval(ExtComplex::Infinity).value(), c(0.0, 0.0));
        // large |w| approaches the chart value at infinity
        let far = f.eval(c(1e6, 0.0)).lift();
        assert_vec(far, f.eval(ExtComplex::Infinity).lift(), 1e-5);
    }

    #[test]
    fn spec_json_shape() {
        let json = r#"{"epsilon": 1, "n": 1, "real": [[0.3, 1]], "imag": [[0.5, -1]],
            "complex": [[0.2, 0.4, 1]], "orientation": "conformal"}"#;
        let spec: RationalMapSpec = serde_json_like(json);
        assert_eq!(spec.real[0], AxisFactor { position: 0.3, sign: Sign::Plus });
        assert_eq!(spec.imag[0].sign, Sign::Minus);
        assert_eq!(spec.complex[0].position, Complex64::new(0.2, 0.4));
        assert_eq!(spec.degree(), 1 + 4 + 4);
    }

    fn serde_json_like(s: &str) -> RationalMapSpec {
        serde_json::from_str(s).unwrap()
    }
}
