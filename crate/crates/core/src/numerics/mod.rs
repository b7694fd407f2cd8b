//! Self-contained numerical kernels.

pub mod appell;
pub mod minimize;
pub mod quadrature;
pub mod simplex;

pub use appell::appell_f2_restricted;
pub use minimize::{minimize_1d, minimize_1d_with, MinimizeOptions, MinimizeResult};
pub use quadrature::{quad1d, quad2d, quad2d_composite, quad2d_with, QuadOptions, QuadratureResult, Rect};
pub use simplex::{lp_solve, Constraint, LinearProgram, LpSolution, PairBound, Relation};
