//! Topological lower bounds, closed-form upper bounds and exact energies of
//! conformal tangent director fields in a right rectangular prism.
//!
//! A reflection-symmetric field is fixed by its values on the octant
//! `{0 <= r_j <= L_j/2}`. Radially constant conformal fields there are
//! stereographic images of rational maps `f(w)` ([`conformal`]), whose edge
//! orientations, kink numbers and trapped areas are available both in closed
//! form and from numerical oracles ([`invariants`]). [`energy`] turns these
//! into one-constant elastic energy bounds and quadrature energies, and
//! [`sweep`] explores one-parameter families of maps.

pub mod conformal;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod numerics;
pub mod sweep;
mod vec3;

pub use conformal::{
    eval_f, stereo_lift, stereo_project, AxisFactor, ComplexFactor, ExtComplex,
    HomogeneousValue, Orientation, RationalMap, RationalMapSpec, Sign,
};
pub use error::{Error, Result};
pub use geometry::{edge_length, make_prism, vertex_trapped_areas, Axis, Prism, PrismVertex};
pub use invariants::{invariants_of, TopologicalInvariants};
pub use vec3::Vec3;
