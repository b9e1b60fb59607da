//! The triangulated square used for every tile member.

use crate::complex::{Complex2, Edge, Triangle, Vertex};

/// A triangulated square: a 3×3 grid whose four cells are each coned from a
/// cell-center vertex.
///
/// Local vertex ids: grid point `(r, c)` is `3r + c` (row 0 on top), cell
/// centers are `9..13` for cells (0,0), (0,1), (1,0), (1,1). Boundary paths
/// are directed: left and right run top to bottom, top and bottom run left
/// to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareGadget {
    pub complex: Complex2,
    pub center: Vertex,
    pub left: [Vertex; 3],
    pub top: [Vertex; 3],
    pub right: [Vertex; 3],
    pub bottom: [Vertex; 3],
}

pub(crate) const GADGET_VERTICES: u32 = 13;

fn grid(r: u32, c: u32) -> Vertex {
    Vertex(3 * r + c)
}

impl SquareGadget {
    pub fn boundary_edges(&self) -> Vec<Edge> {
        [self.left, self.top, self.right, self.bottom]
            .iter()
            .flat_map(|p| [Edge::new(p[0], p[1]).unwrap(), Edge::new(p[1], p[2]).unwrap()])
            .collect()
    }

    /// The same gadget with every vertex id shifted by `offset`.
    pub fn shifted(&self, offset: u32) -> SquareGadget {
        let s = |v: Vertex| Vertex(v.0 + offset);
        let p = |path: [Vertex; 3]| path.map(s);
        SquareGadget {
            complex: self.complex.relabel(s).expect("shift is injective"),
            center: s(self.center),
            left: p(self.left),
            top: p(self.top),
            right: p(self.right),
            bottom: p(self.bottom),
        }
    }

    /// Triangles in construction order (cell by cell, then around the cell).
    pub(crate) fn ordered_triangles(offset: u32) -> Vec<Triangle> {
        let mut out = Vec::with_capacity(16);
        for r in 0..2 {
            for c in 0..2 {
                let apex = Vertex(9 + 2 * r + c + offset);
                let ring =
                    [grid(r, c), grid(r, c + 1), grid(r + 1, c + 1), grid(r + 1, c)].map(|v| Vertex(v.0 + offset));
                for m in 0..4 {
                    out.push(Triangle::new(apex, ring[m], ring[(m + 1) % 4]).unwrap());
                }
            }
        }
        out
    }
}

/// Builds the square gadget and checks its defining properties: 13
/// vertices, 28 edges, 16 triangles, a disk, no triangle with two boundary
/// edges, and no triangle holding both the center and a boundary edge.
pub fn build_square_gadget() -> SquareGadget {
    let gadget = SquareGadget {
        complex: Complex2::from_triangles(SquareGadget::ordered_triangles(0)),
        center: grid(1, 1),
        left: [grid(0, 0), grid(1, 0), grid(2, 0)],
        top: [grid(0, 0), grid(0, 1), grid(0, 2)],
        right: [grid(0, 2), grid(1, 2), grid(2, 2)],
        bottom: [grid(2, 0), grid(2, 1), grid(2, 2)],
    };
    let k = &gadget.complex;
    assert_eq!((k.num_vertices(), k.num_edges(), k.num_triangles()), (13, 28, 16));
    let boundary = gadget.boundary_edges();
    assert_eq!(k.boundary_edges(), boundary.iter().copied().collect());
    for t in k.triangles() {
        let on_boundary = boundary.iter().filter(|e| t.contains_edge(e)).count();
        assert!(on_boundary <= 1);
        assert!(!(on_boundary == 1 && t.contains(gadget.center)));
    }
    gadget
}
