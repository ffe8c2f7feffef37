//! Depth-buffer reference for hidden-line checks on z = f(x, y) grids.
//!
//! Every grid cell is split into two triangles and rotated; the buffer
//! depth at a screen point is the largest depth of any triangle covering
//! it (larger depth = nearer the viewer, orthographic view along -z).

use crate::rotation::apply;
use crate::Mat;

#[derive(Debug, Clone)]
pub struct DepthOracle {
    tris: Vec<[[f64; 3]; 3]>,
    /// Rotated grid vertices, row-major.
    pub verts: Vec<[f64; 3]>,
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl DepthOracle {
    /// `z[j * nx + i]` sits at `(xs[i], ys[j])`.
    pub fn new(xs: &[f64], ys: &[f64], z: &[f64], rot: &Mat) -> Self {
        let (nx, ny) = (xs.len(), ys.len());
        let mut verts = Vec::with_capacity(nx * ny);
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                verts.push(apply(rot, [x, y, z[j * nx + i]]));
            }
        }
        let mut tris = Vec::new();
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let a = verts[j * nx + i];
                let b = verts[j * nx + i + 1];
                let c = verts[(j + 1) * nx + i + 1];
                let d = verts[(j + 1) * nx + i];
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
        let (x_min, x_max) = verts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v[0]), hi.max(v[0]))
            });
        DepthOracle {
            tris,
            verts,
            nx,
            ny,
            x_min,
            x_max,
        }
    }

    /// Nearest surface depth over screen point `(x, y)`, if covered.
    pub fn depth_at(&self, x: f64, y: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for t in &self.tris {
            if let Some(d) = triangle_depth(t, x, y) {
                best = Some(best.map_or(d, |b: f64| b.max(d)));
            }
        }
        best
    }

    /// Index `(cell, triangle)` of every triangle in front of the point.
    pub fn occluders(&self, x: f64, y: f64, depth: f64, tol: f64) -> Vec<(usize, usize, usize)> {
        let cells_x = self.nx - 1;
        self.tris
            .iter()
            .enumerate()
            .filter(|(_, t)| triangle_depth(t, x, y).is_some_and(|d| d > depth + tol))
            .map(|(n, _)| ((n / 2) % cells_x, (n / 2) / cells_x, n % 2))
            .collect()
    }

    /// Whether a surface point at `(x, y)` with `depth` is unobstructed.
    pub fn visible(&self, x: f64, y: f64, depth: f64, tol: f64) -> bool {
        self.depth_at(x, y).is_none_or(|d| d <= depth + tol)
    }

    /// Classifies a drawn point `p` lying on the rotated polyline `line`.
    /// A hidden point counts as [`Verdict::Boundary`] when the line is
    /// visible one screen column (`column_width`) to either side of it.
    pub fn classify(&self, p: [f64; 3], line: &[[f64; 3]], column_width: f64, tol: f64) -> Verdict {
        if self.visible(p[0], p[1], p[2], tol) {
            return Verdict::Visible;
        }
        let mut best = (f64::INFINITY, 0usize, 0.0);
        for s in 0..line.len().saturating_sub(1) {
            let (a, b) = (line[s], line[s + 1]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let l2 = d[0] * d[0] + d[1] * d[1];
            let t = if l2 > 0.0 {
                (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let dist = (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1]);
            if dist < best.0 {
                best = (dist, s, t);
            }
        }
        let (a, b) = (line[best.1], line[best.1 + 1]);
        let dx = (b[0] - a[0]).abs();
        let step = if dx > column_width { column_width / dx } else { 1.0 };
        let near = [best.2 - step, best.2 + step].iter().any(|&t| {
            let t = t.clamp(0.0, 1.0);
            let q: Vec<f64> = (0..3).map(|k| a[k] + t * (b[k] - a[k])).collect();
            self.visible(q[0], q[1], q[2], tol)
        });
        if near {
            Verdict::Boundary
        } else {
            Verdict::Hidden
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Visible,
    /// Hidden, but within one column of a visible stretch of the same line.
    Boundary,
    Hidden,
}

/// Depth of the triangle's plane at `(x, y)` when the point lies inside its
/// projection (edges included, up to rounding).
fn triangle_depth(t: &[[f64; 3]; 3], x: f64, y: f64) -> Option<f64> {
    let [a, b, c] = t;
    let det = (b[1] - c[1]) * (a[0] - c[0]) + (c[0] - b[0]) * (a[1] - c[1]);
    if det.abs() < 1e-15 {
        return None;
    }
    let l1 = ((b[1] - c[1]) * (x - c[0]) + (c[0] - b[0]) * (y - c[1])) / det;
    let l2 = ((c[1] - a[1]) * (x - c[0]) + (a[0] - c[0]) * (y - c[1])) / det;
    let l3 = 1.0 - l1 - l2;
    const EPS: f64 = -1e-12;
    if l1 >= EPS && l2 >= EPS && l3 >= EPS {
        Some(l1 * a[2] + l2 * b[2] + l3 * c[2])
    } else {
        None
    }
}
