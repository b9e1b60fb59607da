//! The complex built from a Grid Tiling instance.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::gadget::{build_square_gadget, SquareGadget, GADGET_VERTICES};
use super::{GridTilingError, GridTilingInstance, Selection};
use crate::complex::{Complex2, Triangle, Vertex};

/// One copy of the square gadget, for pair `(a, b)` of tile `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCopy {
    pub a: u32,
    pub b: u32,
    pub i: u32,
    pub j: u32,
    /// Its 16 triangles in the final complex, in construction order.
    pub triangles: Vec<Triangle>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutput {
    pub complex: Complex2,
    pub k_prime: u64,
    pub grid_k: u32,
    /// Square copies in construction order (tiles row-major, pairs sorted).
    pub squares: Vec<SquareCopy>,
    /// The `8k` triangles of the back sheet.
    pub back_sheet: Vec<Triangle>,
}

impl ReductionOutput {
    /// Triangle sets of the square copies keyed by `(a, b, i, j)`.
    pub fn tile_square_index(&self) -> BTreeMap<(u32, u32, u32, u32), &[Triangle]> {
        self.squares
            .iter()
            .map(|s| ((s.a, s.b, s.i, s.j), s.triangles.as_slice()))
            .collect()
    }

    /// All triangles: squares in construction order, then the back sheet.
    /// Square `s` occupies positions `16 s .. 16 (s + 1)`.
    pub fn ordered_triangles(&self) -> Vec<Triangle> {
        self.squares
            .iter()
            .flat_map(|s| s.triangles.iter().copied())
            .chain(self.back_sheet.iter().copied())
            .collect()
    }
}

/// Builds the reduction complex: one square gadget per tile member, glued
/// along 2-edge paths (right to left within a row when first coordinates
/// agree, bottom to top within a column when second coordinates agree),
/// centers of a tile identified, and the outer boundary glued to a cone
/// over an `8k`-cycle. Vertices of the result are numbered `0..V`.
pub fn generate_reduction(instance: &GridTilingInstance) -> Result<ReductionOutput, GridTilingError> {
    let k = instance.k();
    let gadget = build_square_gadget();
    let members: Vec<(u32, u32, u32, u32)> = instance
        .sets()
        .flat_map(|((i, j), set)| set.iter().map(move |&(a, b)| (a, b, i, j)))
        .collect();
    let copies: Vec<SquareGadget> = (0..members.len())
        .map(|s| gadget.shifted(s as u32 * GADGET_VERTICES))
        .collect();
    let cycle_len = 8 * k;
    let base = members.len() as u32 * GADGET_VERTICES;
    let apex = Vertex(base + cycle_len);
    let pos = |x: u32| Vertex(base + x % cycle_len);
    let forward = |start: u32| [pos(start), pos(start + 1), pos(start + 2)];
    let backward = |start: u32| [pos(start + 2), pos(start + 1), pos(start)];
    let sheet_top = |j: u32| forward(2 * (j - 1));
    let sheet_right = |i: u32| forward(2 * k + 2 * (i - 1));
    let sheet_bottom = |j: u32| backward(4 * k + 2 * (k - j));
    let sheet_left = |i: u32| backward(6 * k + 2 * (k - i));

    let total = apex.0 as usize + 1;
    let mut uf: UnionFind<usize> = UnionFind::new(total);
    let mut glue = |p: [Vertex; 3], q: [Vertex; 3]| {
        for (x, y) in p.iter().zip(q.iter()) {
            uf.union(x.0 as usize, y.0 as usize);
        }
    };
    let in_tile = |i: u32, j: u32| members.iter().enumerate().filter(move |(_, m)| (m.2, m.3) == (i, j));

    for i in 1..=k {
        for j in 1..=k {
            for (s, &(a, b, _, _)) in in_tile(i, j) {
                let sq = &copies[s];
                if j < k {
                    for (t, _) in in_tile(i, j + 1).filter(|(_, m)| m.0 == a) {
                        glue(sq.right, copies[t].left);
                    }
                    // squares of this tile sharing `a` share their right path
                    for (t, _) in in_tile(i, j).filter(|(_, m)| m.0 == a) {
                        glue(sq.right, copies[t].right);
                    }
                }
                if j > 1 {
                    for (t, _) in in_tile(i, j).filter(|(_, m)| m.0 == a) {
                        glue(sq.left, copies[t].left);
                    }
                }
                if i < k {
                    for (t, _) in in_tile(i + 1, j).filter(|(_, m)| m.1 == b) {
                        glue(sq.bottom, copies[t].top);
                    }
                    for (t, _) in in_tile(i, j).filter(|(_, m)| m.1 == b) {
                        glue(sq.bottom, copies[t].bottom);
                    }
                }
                if i > 1 {
                    for (t, _) in in_tile(i, j).filter(|(_, m)| m.1 == b) {
                        glue(sq.top, copies[t].top);
                    }
                }
                for (t, _) in in_tile(i, j) {
                    glue([sq.center; 3], [copies[t].center; 3]);
                }
                if j == 1 {
                    glue(sq.left, sheet_left(i));
                }
                if j == k {
                    glue(sq.right, sheet_right(i));
                }
                if i == 1 {
                    glue(sq.top, sheet_top(j));
                }
                if i == k {
                    glue(sq.bottom, sheet_bottom(j));
                }
            }
        }
    }

    let mut raw: Vec<Triangle> = Vec::with_capacity(16 * members.len() + cycle_len as usize);
    for s in 0..members.len() {
        raw.extend(SquareGadget::ordered_triangles(s as u32 * GADGET_VERTICES));
    }
    for x in 0..cycle_len {
        raw.push(Triangle::new(apex, pos(x), pos(x + 1)).expect("cycle positions are distinct"));
    }

    let mut classes: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for v in 0..total {
        classes.entry(uf.find(v)).or_default().push(Vertex(v as u32));
    }
    let classes: Vec<Vec<Vertex>> = classes.into_values().collect();
    let glued = Complex2::from_triangles(raw.iter().copied())
        .quotient_by_vertex_identifications(&classes)
        .map_err(|e| GridTilingError::Construction(e.to_string()))?;

    // representative = class minimum, then compact to 0..V in sorted order
    let mut rep = vec![Vertex(0); total];
    for class in &classes {
        let m = *class.iter().min().unwrap();
        for &v in class {
            rep[v.0 as usize] = m;
        }
    }
    let compact: BTreeMap<Vertex, Vertex> = glued
        .vertices()
        .enumerate()
        .map(|(i, v)| (v, Vertex(i as u32)))
        .collect();
    let image = |t: &Triangle| {
        let [a, b, c] = t.corners().map(|v| compact[&rep[v.0 as usize]]);
        Triangle::new(a, b, c).expect("quotient checked non-degeneracy")
    };
    let complex = glued.relabel(|v| compact[&v]).expect("compaction is injective");
    let squares = members
        .iter()
        .enumerate()
        .map(|(s, &(a, b, i, j))| SquareCopy {
            a,
            b,
            i,
            j,
            triangles: raw[16 * s..16 * (s + 1)].iter().map(image).collect(),
        })
        .collect();
    let back_sheet = raw[16 * members.len()..].iter().map(image).collect();
    let k = k as u64;
    Ok(ReductionOutput {
        complex,
        k_prime: 16 * k * k + 8 * k,
        grid_k: instance.k(),
        squares,
        back_sheet,
    })
}

/// The squares chosen by `selection` together with the back sheet.
pub fn assemble_solution(output: &ReductionOutput, selection: &Selection) -> Result<Vec<Triangle>, GridTilingError> {
    let index = output.tile_square_index();
    let mut out = Vec::new();
    for i in 1..=output.grid_k {
        for j in 1..=output.grid_k {
            let &(a, b) = selection
                .get(&(i, j))
                .ok_or(GridTilingError::SelectionOutOfSet { i, j })?;
            let ts = index
                .get(&(a, b, i, j))
                .ok_or(GridTilingError::SelectionOutOfSet { i, j })?;
            out.extend_from_slice(ts);
        }
    }
    out.extend_from_slice(&output.back_sheet);
    out.sort_unstable();
    Ok(out)
}
