//! Right rectangular prisms, their vertices and edges, and the octant
//! `{0 <= r_j <= L_j / 2}` on which reflection-symmetric fields are defined.
//!
//! Vertices are indexed by three bits (bit 0 for x, bit 1 for y, bit 2 for
//! z); a set bit means the coordinate equals the side length. The parity of a
//! vertex is the parity of its popcount, so the origin has parity +1 and each
//! single reflection flips it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two axes following `self` in cyclic order (x -> y, z).
    pub fn cyclic_rest(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prism {
    lx: f64,
    ly: f64,
    lz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrismVertex {
    pub index: u8,
    pub coords: [f64; 3],
}

impl PrismVertex {
    /// +1 for an even number of coordinates at the far side, -1 otherwise.
    pub fn parity(&self) -> i8 {
        if self.index.count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Builds a prism with `Lx >= Ly >= Lz > 0`.
///
/// Unsorted input is rejected rather than permuted, since the labels of the
/// axes carry through to edge orientations and kink numbers.
pub fn make_prism(lx: f64, ly: f64, lz: f64) -> Result<Prism> {
    for (name, v) in [("Lx", lx), ("Ly", ly), ("Lz", lz)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidDimension(format!(
                "{name} must be finite and positive, got {v}"
            )));
        }
    }
    if !(lx >= ly && ly >= lz) {
        let mut sorted = [lx, ly, lz];
        sorted.sort_by(|a, b| b.total_cmp(a));
        return Err(Error::Ordering { lx, ly, lz, sorted });
    }
    Ok(Prism { lx, ly, lz })
}

impl Prism {
    pub fn cube(side: f64) -> Result<Prism> {
        make_prism(side, side, side)
    }

    pub fn lengths(&self) -> [f64; 3] {
        [self.lx, self.ly, self.lz]
    }

    pub fn length(&self, axis: Axis) -> f64 {
        self.lengths()[axis.index()]
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn lz(&self) -> f64 {
        self.lz
    }

    /// Aspect ratio `a_ij = L_i / L_j`.
    pub fn aspect(&self, i: Axis, j: Axis) -> f64 {
        self.length(i) / self.length(j)
    }

    pub fn volume(&self) -> f64 {
        self.lx * self.ly * self.lz
    }

    pub fn diagonal(&self) -> f64 {
        (self.lx * self.lx + self.ly * self.ly + self.lz * self.lz).sqrt()
    }

    pub fn vertex(&self, index: u8) -> PrismVertex {
        assert!(index < 8, "vertex index out of range: {index}");
        let l = self.lengths();
        let mut coords = [0.0; 3];
        for (k, c) in coords.iter_mut().enumerate() {
            if index & (1 << k) != 0 {
                *c = l[k];
            }
        }
        PrismVertex { index, coords }
    }

    pub fn vertices(&self) -> [PrismVertex; 8] {
        std::array::from_fn(|i| self.vertex(i as u8))
    }

    /// Pairs of vertex indices joined by an edge (12 of them).
    pub fn edges(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::with_capacity(12);
        for a in 0u8..8 {
            for k in 0..3 {
                let b = a | (1 << k);
                if b != a {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn owns(&self, v: &PrismVertex) -> bool {
        v.index < 8 && self.vertex(v.index).coords == v.coords
    }

    pub fn octant(&self) -> Octant {
        Octant {
            half: [self.lx / 2.0, self.ly / 2.0, self.lz / 2.0],
        }
    }
}

/// Length of the edge between two vertices, or `None` if they are not adjacent.
pub fn edge_length(prism: &Prism, a: &PrismVertex, b: &PrismVertex) -> Result<Option<f64>> {
    for v in [a, b] {
        if !prism.owns(v) {
            return Err(Error::Domain(format!(
                "vertex {:?} does not belong to the prism",
                v.coords
            )));
        }
    }
    let diff = a.index ^ b.index;
    if diff.count_ones() != 1 {
        return Ok(None);
    }
    let axis = diff.trailing_zeros() as usize;
    Ok(Some(prism.lengths()[axis]))
}

/// Signed trapped area at every vertex of a reflection-symmetric field whose
/// trapped area at the origin is `omega0`.
pub fn vertex_trapped_areas(prism: &Prism, omega0: f64) -> Vec<(PrismVertex, f64)> {
    prism
        .vertices()
        .into_iter()
        .map(|v| (v, f64::from(v.parity()) * omega0))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctantFace {
    /// Normal axis of the face.
    pub axis: Axis,
    /// Coordinate of the face along its normal axis.
    pub offset: f64,
    pub exterior: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Octant {
    pub half: [f64; 3],
}

impl Octant {
    pub fn contains(&self, r: [f64; 3]) -> bool {
        r.iter().zip(self.half).all(|(&c, h)| (0.0..=h).contains(&c))
    }

    /// The faces `x = 0`, `y = 0`, `z = 0`.
    pub fn exterior_faces(&self) -> [OctantFace; 3] {
        Axis::ALL.map(|axis| OctantFace {
            axis,
            offset: 0.0,
            exterior: true,
        })
    }

    /// The mid-plane faces `x = Lx/2`, `y = Ly/2`, `z = Lz/2`.
    pub fn interior_faces(&self) -> [OctantFace; 3] {
        Axis::ALL.map(|axis| OctantFace {
            axis,
            offset: self.half[axis.index()],
            exterior: false,
        })
    }

    pub fn face_area(&self, face: &OctantFace) -> f64 {
        let (a, b) = face.axis.cyclic_rest();
        self.half[a.index()] * self.half[b.index()]
    }

    /// Maps `(u, v)` on a face to a point, where `u`, `v` run along the two
    /// cyclically following axes.
    pub fn face_point(&self, face: &OctantFace, u: f64, v: f64) -> [f64; 3] {
        let (a, b) = face.axis.cyclic_rest();
        let mut r = [0.0; 3];
        r[face.axis.index()] = face.offset;
        r[a.index()] = u;
        r[b.index()] = v;
        r
    }

    /// Extents of the `(u, v)` parameters of a face.
    pub fn face_extent(&self, face: &OctantFace) -> (f64, f64) {
        let (a, b) = face.axis.cyclic_rest();
        (self.half[a.index()], self.half[b.index()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cube_has_unit_aspect_ratios() {
        let p = make_prism(1.0, 1.0, 1.0).unwrap();
        for i in Axis::ALL {
            for j in Axis::ALL {
                assert_eq!(p.aspect(i, j), 1.0);
            }
        }
    }

    #[test]
    fn slab_aspect_ratios() {
        let p = make_prism(20.0, 10.0, 1.0).unwrap();
        assert_eq!(p.aspect(Axis::X, Axis::Z), 20.0);
        assert_eq!(p.aspect(Axis::Y, Axis::Z), 10.0);
        assert_eq!(p.volume(), 200.0);
    }

    #[test]
    fn rejects_unsorted_and_nonpositive() {
        match make_prism(1.0, 2.0, 3.0) {
            Err(Error::Ordering { sorted, .. }) => assert_eq!(sorted, [3.0, 2.0, 1.0]),
            other => panic!("expected ordering error, got {other:?}"),
        }
        let msg = make_prism(1.0, 2.0, 3.0).unwrap_err().to_string();
        assert!(msg.contains("(3, 2, 1)"), "{msg}");
        assert!(matches!(
            make_prism(1.0, 0.0, 0.0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            make_prism(f64::NAN, 1.0, 1.0),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn edge_lengths() {
        let cube = Prism::cube(1.0).unwrap();
        let v = cube.vertices();
        assert_eq!(edge_length(&cube, &v[0], &v[1]).unwrap(), Some(1.0));
        assert_eq!(edge_length(&cube, &v[0], &v[3]).unwrap(), None);
        assert_eq!(edge_length(&cube, &v[0], &v[0]).unwrap(), None);

        let p = make_prism(20.0, 10.0, 1.0).unwrap();
        let w = p.vertices();
        assert_eq!(edge_length(&p, &w[0], &w[4]).unwrap(), Some(1.0));
        assert_eq!(edge_length(&p, &w[4], &w[0]).unwrap(), Some(1.0));
        assert_eq!(edge_length(&p, &w[2], &w[0]).unwrap(), Some(10.0));

        // a cube vertex is not a vertex of the (20, 10, 1) prism
        assert!(matches!(
            edge_length(&p, &v[1], &w[0]),
            Err(Error::Domain(_))
        ));
        assert_eq!(p.edges().len(), 12);
    }

    #[test]
    fn vertices_are_distinct_with_balanced_parity() {
        let p = make_prism(3.0, 2.0, 1.0).unwrap();
        let vs = p.vertices();
        for i in 0..8 {
            for j in 0..i {
                assert_ne!(vs[i].coords, vs[j].coords);
            }
        }
        assert_eq!(vs[0].parity(), 1);
        assert_eq!(vs.iter().map(|v| i32::from(v.parity())).sum::<i32>(), 0);
        for v in vs {
            for k in 0..3 {
                assert_eq!(p.vertex(v.index ^ (1 << k)).parity(), -v.parity());
            }
        }
    }

    #[test]
    fn trapped_areas_follow_reflection_parity() {
        let cube = Prism::cube(1.0).unwrap();
        let areas = vertex_trapped_areas(&cube, FRAC_PI_2);
        let at = |c: [f64; 3]| areas.iter().find(|(v, _)| v.coords == c).unwrap().1;
        assert_eq!(at([0.0, 0.0, 0.0]), FRAC_PI_2);
        assert_eq!(at([1.0, 0.0, 0.0]), -FRAC_PI_2);
        assert_eq!(at([1.0, 1.0, 0.0]), FRAC_PI_2);
        assert_eq!(at([1.0, 1.0, 1.0]), -FRAC_PI_2);

        assert!(vertex_trapped_areas(&cube, 0.0).iter().all(|(_, a)| *a == 0.0));

        let p = make_prism(20.0, 10.0, 1.0).unwrap();
        let sum: f64 = vertex_trapped_areas(&p, 1.5 * std::f64::consts::PI)
            .iter()
            .map(|(_, a)| a)
            .sum();
        assert_eq!(sum, 0.0);
    }

    #[test]
    fn octant_faces() {
        let p = make_prism(4.0, 2.0, 1.0).unwrap();
        let o = p.octant();
        assert_eq!(o.exterior_faces().len(), 3);
        let areas: Vec<f64> = o.interior_faces().iter().map(|f| o.face_area(f)).collect();
        assert_eq!(areas, vec![2.0 * 1.0 / 4.0, 4.0 * 1.0 / 4.0, 4.0 * 2.0 / 4.0]);
        let f = o.interior_faces()[1];
        assert_eq!(o.face_point(&f, 0.25, 1.5), [1.5, 1.0, 0.25]);
        assert!(o.contains([2.0, 1.0, 0.5]));
        assert!(!o.contains([2.1, 0.0, 0.0]));
    }
}
