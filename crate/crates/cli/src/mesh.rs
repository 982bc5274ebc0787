//! Wavefront OBJ export of two-dimensional immersions.
//!
//! Vertices are the immersion's ambient chart coordinates `(t, x1, x2)`,
//! row-major over the `(u, v)` lattice. Each lattice cell becomes two
//! triangles split along the diagonal from its lower-left corner. No normals
//! are written.

use std::fmt::Write as _;

use yamabe_core::{Immersion, Result};

pub const MESH_WARNING: &str =
    "mesh vertices are ambient chart coordinates (t, x1, x2), not an isometric embedding; distances are not to scale";

/// A triangle mesh on a `rows x cols` lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub rows: usize,
    pub cols: usize,
    pub vertices: Vec<[f64; 3]>,
}

impl Mesh {
    /// Sample `imm` on the lattice `us x vs`. The chart must be
    /// two-dimensional.
    pub fn sample(imm: &Immersion, us: &[f64], vs: &[f64]) -> Result<Self> {
        assert_eq!(imm.n(), 2, "meshes are two-dimensional");
        let mut vertices = Vec::with_capacity(us.len() * vs.len());
        for &u in us {
            for &v in vs {
                let p = imm.position(&[u, v])?;
                vertices.push([p[0], p[1], p[2]]);
            }
        }
        Ok(Mesh {
            rows: us.len(),
            cols: vs.len(),
            vertices,
        })
    }

    /// 1-based OBJ vertex indices of the triangles.
    pub fn faces(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(2 * self.rows.saturating_sub(1) * self.cols.saturating_sub(1));
        let idx = |i: usize, j: usize| i * self.cols + j + 1;
        for i in 0..self.rows.saturating_sub(1) {
            for j in 0..self.cols.saturating_sub(1) {
                let (ll, lr, ul, ur) = (idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1));
                out.push([ll, lr, ur]);
                out.push([ll, ur, ul]);
            }
        }
        out
    }

    pub fn to_obj(&self, header: &str) -> String {
        let mut s = String::new();
        for line in header.lines() {
            let _ = writeln!(s, "# {line}");
        }
        for v in &self.vertices {
            let _ = writeln!(s, "v {:?} {:?} {:?}", v[0], v[1], v[2]);
        }
        for f in self.faces() {
            let _ = writeln!(s, "f {} {} {}", f[0], f[1], f[2]);
        }
        s
    }
}

/// Vertices of an OBJ document, in file order.
pub fn parse_obj_vertices(text: &str) -> std::result::Result<Vec<[f64; 3]>, String> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        if it.next() != Some("v") {
            continue;
        }
        let mut v = [0.0; 3];
        for c in &mut v {
            *c = it
                .next()
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| format!("line {}: bad vertex", k + 1))?;
        }
        out.push(v);
    }
    Ok(out)
}
