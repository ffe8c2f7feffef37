use std::collections::BTreeSet;

use super::{EulerAngles, ParametricGrid, Projection, SurfaceError, ViewTransform};
use crate::kernel::{PlotContext, PlotError};

/// Facet spanned by samples `(i, j)`, `(i + 1, j)`, `(i + 1, j + 1)` and
/// `(i, j + 1)`, indices taken modulo the grid size in wrapped directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClosedSurfaceReport {
    /// Front-facing facets, in (j, i) order.
    pub drawn_facets: Vec<Facet>,
    /// Distinct non-degenerate edges emitted.
    pub edge_count: usize,
}

// Facets whose normal is within this relative tolerance of edge-on are
// treated as back-facing, so full turns of an angle cannot flip them.
const EDGE_ON_TOLERANCE: f64 = 1e-12;

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Outward facet normal, right-handed in (u, v). The cross product of the
/// diagonals is twice the mean u-by-v tangent product and stays well defined
/// on facets that collapse to a triangle at a pole.
pub(crate) fn facet_normal(grid: &ParametricGrid, f: Facet) -> [f64; 3] {
    let (i1, j1) = ((f.i + 1) % grid.nu(), (f.j + 1) % grid.nv());
    let p00 = grid.point(f.i, f.j);
    let p10 = grid.point(i1, f.j);
    let p11 = grid.point(i1, j1);
    let p01 = grid.point(f.i, j1);
    cross(sub(p11, p00), sub(p01, p10))
}

/// Wireframe of the front-facing facets of a parametric grid. Each edge
/// shared by two drawn facets is drawn once.
pub fn render_closed_surface(
    grid: &ParametricGrid,
    angles: EulerAngles,
    projection: Projection,
    ctx: &mut PlotContext,
) -> Result<ClosedSurfaceReport, SurfaceError> {
    if ctx.is_sealed() {
        return Err(PlotError::Sealed.into());
    }
    let view = ViewTransform::new(angles, projection)?;
    let (nu, nv) = (grid.nu(), grid.nv());
    let (fu, fv) = grid.facet_dims();
    let projected = grid
        .points()
        .iter()
        .map(|&p| view.project(p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = ClosedSurfaceReport::default();
    // u-edges keyed (j, i): (i, j) -> (i + 1, j); v-edges keyed (i, j): (i, j) -> (i, j + 1).
    let mut u_edges = BTreeSet::new();
    let mut v_edges = BTreeSet::new();
    for j in 0..fv {
        for i in 0..fu {
            let facet = Facet { i, j };
            let n = facet_normal(grid, facet);
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            let nz = view.rotation.apply(n)[2];
            if !(len > 0.0 && nz > EDGE_ON_TOLERANCE * len) {
                continue;
            }
            report.drawn_facets.push(facet);
            let (i1, j1) = ((i + 1) % nu, (j + 1) % nv);
            u_edges.insert((j, i));
            u_edges.insert((j1, i));
            v_edges.insert((i, j));
            v_edges.insert((i1, j));
        }
    }

    let mut draw = |a: usize, b: usize| -> Result<(), SurfaceError> {
        if grid.points()[a] == grid.points()[b] {
            return Ok(());
        }
        let (pa, pb) = (projected[a].point, projected[b].point);
        ctx.move_to(pa.x, pa.y)?;
        ctx.line_to(pb.x, pb.y)?;
        report.edge_count += 1;
        Ok(())
    };
    for &(j, i) in &u_edges {
        draw(j * nu + i, j * nu + (i + 1) % nu)?;
    }
    for &(i, j) in &v_edges {
        draw(j * nu + i, ((j + 1) % nv) * nu + i)?;
    }
    Ok(report)
}
