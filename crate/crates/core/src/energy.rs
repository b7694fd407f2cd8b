//! One-constant elastic energy: topological lower bounds (closed form and
//! linear program), the closed-form upper bound, exact energies of conformal
//! configurations by face quadrature, and the unwrapped closed form.
//!
//! For a radially constant conformal field the energy density equals
//! `2|D|` and `D` is divergence free, so the energy of the prism is
//! `16K ∮ r D·dS` over the boundary of the octant. `D` is radial, hence only
//! the three interior (mid-plane) faces contribute.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{flux_field_fd, project_point, RationalMap};
use crate::error::{Error, Result};
use crate::geometry::{vertex_trapped_areas, Axis, OctantFace, Prism};
use crate::numerics::{
    appell_f2_restricted, lp_solve, quad2d, quad2d_composite, PairBound, QuadratureResult, Rect,
};
use crate::vec3::{distance, norm, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticConstants {
    #[serde(rename = "K")]
    pub k: f64,
    /// Splay, twist and bend constants, when they differ.
    #[serde(rename = "K123", default, skip_serializing_if = "Option::is_none")]
    pub frank: Option<[f64; 3]>,
}

impl ElasticConstants {
    pub fn one_constant(k: f64) -> Result<Self> {
        let c = ElasticConstants { k, frank: None };
        c.validate()?;
        Ok(c)
    }

    pub fn with_frank(k: f64, k1: f64, k2: f64, k3: f64) -> Result<Self> {
        let c = ElasticConstants {
            k,
            frank: Some([k1, k2, k3]),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.k) {
            return Err(Error::InvalidInput(format!("K must be positive, got {}", self.k)));
        }
        if let Some(ks) = self.frank {
            if !ks.iter().all(|&v| pos(v)) {
                return Err(Error::InvalidInput(format!(
                    "K1, K2, K3 must be positive, got {ks:?}"
                )));
            }
        }
        Ok(())
    }

    /// The smallest of K1, K2, K3, which bounds the Frank energy from below.
    pub fn min_frank(&self) -> Option<f64> {
        self.frank.map(|ks| ks.into_iter().fold(f64::INFINITY, f64::min))
    }
}

/// `E₋ = 8 K L_z |Ω⁰|`.
pub fn lower_bound_prism(prism: &Prism, omega0: f64, k: f64) -> f64 {
    8.0 * k * prism.lz() * omega0.abs()
}

/// `E₊ = 8 K (L_x² + L_y² + L_z²)^{1/2} |Ω⁰|`.
pub fn upper_bound_prism(prism: &Prism, omega0: f64, k: f64) -> f64 {
    8.0 * k * prism.diagonal() * omega0.abs()
}

/// `E₊/E₋ = (a_xz² + a_yz² + 1)^{1/2}`.
pub fn bound_ratio(prism: &Prism) -> f64 {
    let axz = prism.aspect(Axis::X, Axis::Z);
    let ayz = prism.aspect(Axis::Y, Axis::Z);
    (axz * axz + ayz * ayz + 1.0).sqrt()
}

/// Which vertex pairs carry a Lipschitz constraint in the lower-bound program.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum LpConstraints {
    /// Every pair, at straight-line distance.
    #[default]
    AllPairs,
    /// Only the listed pairs (typically the polyhedron's edges).
    Edges(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub xi: Vec<f64>,
    pub objective: f64,
    /// `|ξ^a − ξ^b| <= |a − b|` holds for every pair, so a 1-Lipschitz
    /// interpolant exists and the bound is valid.
    pub feasible: bool,
}

/// Maximizes `2K Σ_a ξ^a Ω^a` over 1-Lipschitz vertex values `ξ^a`.
///
/// `vertices` pairs each vertex position with its trapped area; the areas
/// must sum to zero.
pub fn lower_bound_lp(
    vertices: &[(Vec3, f64)],
    constraints: &LpConstraints,
    k: f64,
) -> Result<LowerBoundCertificate> {
    if vertices.len() < 2 {
        return Err(Error::InvalidInput(
            "the lower-bound program needs at least two vertices".into(),
        ));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidInput(format!("K must be positive, got {k}")));
    }
    let sum: f64 = vertices.iter().map(|v| v.1).sum();
    let scale: f64 = vertices.iter().map(|v| v.1.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-9 * scale {
        return Err(Error::InvalidInput(format!(
            "trapped areas must sum to zero, got {sum}"
        )));
    }
    let pairs: Vec<(usize, usize)> = match constraints {
        LpConstraints::AllPairs => (0..vertices.len())
            .flat_map(|a| (0..a).map(move |b| (b, a)))
            .collect(),
        LpConstraints::Edges(e) => e.clone(),
    };
    let mut bounds = Vec::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        if a >= vertices.len() || b >= vertices.len() {
            return Err(Error::InvalidInput(format!(
                "edge ({a}, {b}) references a missing vertex"
            )));
        }
        bounds.push(PairBound {
            a,
            b,
            max_distance: distance(vertices[a].0, vertices[b].0),
        });
    }
    let costs: Vec<f64> = vertices.iter().map(|v| v.1).collect();
    let sol = lp_solve(&costs, &bounds)?;

    let mut feasible = true;
    for a in 0..vertices.len() {
        for b in 0..a {
            let d = distance(vertices[a].0, vertices[b].0);
            if (sol.x[a] - sol.x[b]).abs() > d + 1e-9 * (1.0 + d) {
                feasible = false;
            }
        }
    }
    let objective = 2.0 * k * sol.objective;
    Ok(LowerBoundCertificate {
        xi: sol.x,
        objective,
        feasible,
    })
}

/// Vertex positions paired with trapped areas.
pub type LpVertices = Vec<(Vec3, f64)>;

/// Vertex positions with parity-signed trapped areas, and the prism's edges.
pub fn prism_lp_data(prism: &Prism, omega0: f64) -> (LpVertices, Vec<(usize, usize)>) {
    let vertices = vertex_trapped_areas(prism, omega0)
        .into_iter()
        .map(|(v, a)| (v.coords, a))
        .collect();
    let edges = prism
        .edges()
        .into_iter()
        .map(|(a, b)| (a as usize, b as usize))
        .collect();
    (vertices, edges)
}

/// Quadrature of `g(r)` over an octant face parameterized by its two free
/// coordinates.
fn face_integral(
    prism: &Prism,
    face: &OctantFace,
    tol: f64,
    g: impl Fn(Vec3) -> f64,
) -> Result<QuadratureResult> {
    let octant = prism.octant();
    let (u1, v1) = octant.face_extent(face);
    quad2d(
        |u, v| g(octant.face_point(face, u, v)),
        Rect::new(0.0, u1, 0.0, v1),
        tol,
    )
}

/// Sums per-face results, turning any face's accuracy failure into one for
/// the total.
fn sum_faces(parts: Vec<Result<QuadratureResult>>) -> Result<QuadratureResult> {
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    let mut failed = false;
    for part in parts {
        match part {
            Ok(r) => {
                total.value += r.value;
                total.error_estimate += r.error_estimate;
                total.evaluations += r.evaluations;
            }
            Err(Error::Accuracy {
                value,
                error,
                evaluations,
            }) => {
                failed = true;
                total.value += value;
                total.error_estimate += error;
                total.evaluations += evaluations;
            }
            Err(e) => return Err(e),
        }
    }
    if failed {
        return Err(Error::Accuracy {
            value: total.value,
            error: total.error_estimate,
            evaluations: total.evaluations,
        });
    }
    Ok(total)
}

/// Exact energy `16K ∮ r |D|·dS` of the reflection-symmetric conformal field
/// of `map`, to absolute tolerance `tol`.
pub fn conformal_energy(
    prism: &Prism,
    map: &RationalMap,
    k: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let faces = prism.octant().interior_faces();
    let parts: Vec<Result<QuadratureResult>> = faces
        .par_iter()
        .map(|face| {
            let h = face.offset;
            face_integral(prism, face, tol / 3.0, |r| {
                let rr = norm(r);
                let w = project_point(r).expect("interior faces avoid the origin");
                16.0 * k * map.spherical_density(w) * h / (rr * rr)
            })
        })
        .collect();
    sum_faces(parts)
}

/// Flux of `D` through the interior faces of the octant; equals the trapped
/// area at the origin.
pub fn interior_flux(prism: &Prism, map: &RationalMap, tol: f64) -> Result<QuadratureResult> {
    let faces = prism.octant().interior_faces();
    let parts = faces
        .iter()
        .map(|face| {
            let axis = face.axis.index();
            face_integral(prism, face, tol / 3.0, |r| {
                map.flux_field(r).expect("interior faces avoid the origin")[axis]
            })
        })
        .collect();
    sum_faces(parts)
}

/// `∫ r D·n̂ dA` over each exterior face (`x = 0`, `y = 0`, `z = 0`, outward
/// normal `−ê`), with `D` from finite differences of the director rather
/// than the closed form. Tangent boundary conditions make these vanish.
pub fn exterior_flux(prism: &Prism, map: &RationalMap) -> Result<[f64; 3]> {
    let octant = prism.octant();
    let mut out = [0.0; 3];
    for (slot, face) in out.iter_mut().zip(octant.exterior_faces()) {
        let axis = face.axis.index();
        let (u1, v1) = octant.face_extent(&face);
        let failure = std::cell::RefCell::new(None);
        let r = quad2d_composite(
            |u, v| {
                let p = octant.face_point(&face, u, v);
                let rr = norm(p);
                match flux_field_fd(map, p, 1e-5 * rr) {
                    Ok(d) => -rr * d[axis],
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            },
            Rect::new(0.0, u1, 0.0, v1),
            6,
            6,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        *slot = r.value;
    }
    Ok(out)
}

/// `E₀ = 8 Σ_i a_ji a_ki K L_i F2(1,½,½,3/2,3/2; −a_ji², −a_ki²)` over cyclic
/// `(i, j, k)`: the energy of the unwrapped configuration `f(w) = w`.
pub fn unwrapped_energy(prism: &Prism, k: f64) -> Result<f64> {
    let mut total = 0.0;
    for i in Axis::ALL {
        let (j, kk) = i.cyclic_rest();
        let (aj, ak) = (prism.aspect(j, i), prism.aspect(kk, i));
        total += 8.0 * aj * ak * k * prism.length(i) * appell_f2_restricted(aj * aj, ak * ak)?;
    }
    Ok(total)
}

/// `E / V^{1/3}`.
pub fn scaled_energy(e: f64, prism: &Prism) -> f64 {
    e / prism.volume().cbrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    pub exact_err: Option<f64>,
    pub scaled: Option<f64>,
    pub ratio: f64,
    /// Optimum of the lower-bound linear program, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_lp: Option<f64>,
    /// Lower bound with `K` replaced by `min(K1, K2, K3)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_frank: Option<f64>,
}

impl EnergyReport {
    pub fn bounds(prism: &Prism, omega0: f64, constants: &ElasticConstants) -> Self {
        EnergyReport {
            lower: lower_bound_prism(prism, omega0, constants.k),
            upper: upper_bound_prism(prism, omega0, constants.k),
            exact: None,
            exact_err: None,
            scaled: None,
            ratio: bound_ratio(prism),
            lower_lp: None,
            lower_frank: constants
                .min_frank()
                .map(|kmin| lower_bound_prism(prism, omega0, kmin)),
        }
    }

    pub fn with_exact(mut self, prism: &Prism, exact: &QuadratureResult) -> Self {
        self.exact = Some(exact.value);
        self.exact_err = Some(exact.error_estimate);
        self.scaled = Some(scaled_energy(exact.value, prism));
        self
    }
}
