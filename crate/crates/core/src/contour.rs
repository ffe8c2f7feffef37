//! Level curves of a [`ScalarGrid`] by marching squares.
//!
//! Cell corners are numbered counter-clockwise from the lower left
//! (`v0 = (i, j)`, `v1 = (i+1, j)`, `v2 = (i+1, j+1)`, `v3 = (i, j+1)`) and
//! edges likewise (`e0` bottom, `e1` right, `e2` top, `e3` left). Crossing
//! points are computed from the edge's own two samples in a fixed order, so
//! the two cells sharing an edge produce bit-identical points.

use std::collections::HashMap;

use thiserror::Error;

use crate::kernel::{PlotContext, PlotError, Point2};
use crate::surface::ScalarGrid;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("levels must be finite and strictly ascending")]
    BadLevels,
    #[error(transparent)]
    Plot(#[from] PlotError),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourLevelSet(Vec<f64>);

impl ContourLevelSet {
    pub fn new(levels: Vec<f64>) -> Result<Self, ContourError> {
        let finite = levels.iter().all(|l| l.is_finite());
        let ascending = levels.windows(2).all(|w| w[0] < w[1]);
        if finite && ascending {
            Ok(ContourLevelSet(levels))
        } else {
            Err(ContourError::BadLevels)
        }
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// A grid edge: horizontal from `(i, j)` to `(i+1, j)` or vertical from
/// `(i, j)` to `(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridEdge {
    Horizontal { i: usize, j: usize },
    Vertical { i: usize, j: usize },
}

impl GridEdge {
    /// Sample indices `(i, j)` of both ends, lower end first.
    pub fn ends(self) -> ((usize, usize), (usize, usize)) {
        match self {
            GridEdge::Horizontal { i, j } => ((i, j), (i + 1, j)),
            GridEdge::Vertical { i, j } => ((i, j), (i, j + 1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPolyline {
    pub level: f64,
    /// User-space vertices. A closed polyline does not repeat its first
    /// vertex.
    pub vertices: Vec<Point2>,
    /// Grid edge carrying each vertex.
    pub edges: Vec<GridEdge>,
    pub closed: bool,
}

/// `k` evenly spaced levels strictly inside the grid's value range.
pub fn choose_levels(grid: &ScalarGrid, k: usize) -> ContourLevelSet {
    let (lo, hi) = grid.min_max();
    if hi <= lo || k == 0 {
        return ContourLevelSet::default();
    }
    let levels = (1..=k)
        .map(|i| lo + (i as f64 / (k + 1) as f64) * (hi - lo))
        .collect();
    ContourLevelSet(levels)
}

#[derive(Debug, Clone, Copy)]
struct Crossing {
    point: Point2,
    edge: GridEdge,
}

/// Minimum distance, as a fraction of the grid's value range, between a
/// level and the sample values used to interpolate its crossings.
const LEVEL_NUDGE: f64 = 1e-12;

struct LevelField<'a> {
    grid: &'a ScalarGrid,
    level: f64,
    nudge: f64,
}

impl LevelField<'_> {
    /// Sample value held at least `nudge` away from the level on its own
    /// side, so no crossing lands on a grid vertex. A value equal to the
    /// level counts as above.
    fn value(&self, i: usize, j: usize) -> f64 {
        let v = self.grid.z_at(i, j);
        if v >= self.level {
            v.max(self.level + self.nudge)
        } else {
            v.min(self.level - self.nudge)
        }
    }

    fn above(&self, i: usize, j: usize) -> bool {
        self.grid.z_at(i, j) >= self.level
    }

    fn crossing(&self, edge: GridEdge) -> Crossing {
        let ((ia, ja), (ib, jb)) = edge.ends();
        let (va, vb) = (self.value(ia, ja), self.value(ib, jb));
        let t = (self.level - va) / (vb - va);
        let a = Point2::new(self.grid.x_at(ia), self.grid.y_at(ja));
        let b = Point2::new(self.grid.x_at(ib), self.grid.y_at(jb));
        let point = match edge {
            GridEdge::Horizontal { .. } => Point2::new(a.x + (b.x - a.x) * t, a.y),
            GridEdge::Vertical { .. } => Point2::new(a.x, a.y + (b.y - a.y) * t),
        };
        Crossing { point, edge }
    }

    /// Segments of cell `(i, j)` as pairs of cell-edge numbers.
    fn cell_segments(&self, i: usize, j: usize) -> &'static [(usize, usize)] {
        let mut case = 0;
        if self.above(i, j) {
            case |= 1;
        }
        if self.above(i + 1, j) {
            case |= 2;
        }
        if self.above(i + 1, j + 1) {
            case |= 4;
        }
        if self.above(i, j + 1) {
            case |= 8;
        }
        match case {
            0 | 15 => &[],
            1 | 14 => &[(3, 0)],
            2 | 13 => &[(0, 1)],
            3 | 12 => &[(3, 1)],
            4 | 11 => &[(1, 2)],
            6 | 9 => &[(0, 2)],
            7 | 8 => &[(3, 2)],
            5 | 10 => {
                let center = (self.value(i, j)
                    + self.value(i + 1, j)
                    + self.value(i + 1, j + 1)
                    + self.value(i, j + 1))
                    / 4.0;
                // With the center on the high side, the high corners join
                // through the middle and the low corners are cut off.
                match (case, center >= self.level) {
                    (5, true) => &[(0, 1), (2, 3)],
                    (5, false) => &[(3, 0), (1, 2)],
                    (_, true) => &[(3, 0), (1, 2)],
                    (_, false) => &[(0, 1), (2, 3)],
                }
            }
            _ => unreachable!(),
        }
    }
}

fn cell_edge(i: usize, j: usize, e: usize) -> GridEdge {
    match e {
        0 => GridEdge::Horizontal { i, j },
        1 => GridEdge::Vertical { i: i + 1, j },
        2 => GridEdge::Horizontal { i, j: j + 1 },
        _ => GridEdge::Vertical { i, j },
    }
}

/// Unchained segments for one level, in cell order. Zero-length segments
/// are dropped.
pub fn level_segments(grid: &ScalarGrid, level: f64) -> Vec<[(Point2, GridEdge); 2]> {
    let (lo, hi) = grid.min_max();
    let field = LevelField {
        grid,
        level,
        nudge: LEVEL_NUDGE * (hi - lo),
    };
    let mut out = Vec::new();
    for j in 0..grid.ny() - 1 {
        for i in 0..grid.nx() - 1 {
            for &(ea, eb) in field.cell_segments(i, j) {
                let a = field.crossing(cell_edge(i, j, ea));
                let b = field.crossing(cell_edge(i, j, eb));
                if a.point != b.point {
                    out.push([(a.point, a.edge), (b.point, b.edge)]);
                }
            }
        }
    }
    out
}

fn key(p: Point2) -> (u64, u64) {
    // +0.0 folds -0.0 onto 0.0.
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

/// Greedy chaining of segments into maximal polylines.
fn chain(level: f64, segments: &[[(Point2, GridEdge); 2]]) -> Vec<ContourPolyline> {
    let mut at: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for end in seg {
            at.entry(key(end.0)).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let next_from = |p: Point2, used: &[bool]| -> Option<usize> {
        at.get(&key(p))?.iter().copied().find(|&s| !used[s])
    };

    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut chain: Vec<(Point2, GridEdge)> = segments[start].to_vec();

        // Forward from the tail, then backward from the head.
        for forward in [true, false] {
            loop {
                let end = if forward { chain[chain.len() - 1] } else { chain[0] };
                let Some(s) = next_from(end.0, &used) else {
                    break;
                };
                used[s] = true;
                let seg = segments[s];
                let other = if key(seg[0].0) == key(end.0) { seg[1] } else { seg[0] };
                if forward {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }

        let first = chain[0].0;
        let last = chain[chain.len() - 1].0;
        let closed = chain.len() > 3 && first.distance(last) < 1e-12;
        if closed {
            chain.pop();
        }
        out.push(ContourPolyline {
            level,
            vertices: chain.iter().map(|c| c.0).collect(),
            edges: chain.iter().map(|c| c.1).collect(),
            closed,
        });
    }
    out
}

/// Contours for every level, level by level.
pub fn extract_contours(grid: &ScalarGrid, levels: &ContourLevelSet) -> Vec<ContourPolyline> {
    levels
        .levels()
        .iter()
        .flat_map(|&level| chain(level, &level_segments(grid, level)))
        .collect()
}

/// MoveTo plus LineTo chain per polyline; closed ones return to their start.
pub fn render_contours(
    polylines: &[ContourPolyline],
    ctx: &mut PlotContext,
) -> Result<(), ContourError> {
    if ctx.is_sealed() {
        return Err(PlotError::Sealed.into());
    }
    for pl in polylines {
        let Some(first) = pl.vertices.first() else {
            continue;
        };
        ctx.move_to(first.x, first.y)?;
        for p in &pl.vertices[1..] {
            ctx.line_to(p.x, p.y)?;
        }
        if pl.closed {
            ctx.line_to(first.x, first.y)?;
        }
    }
    Ok(())
}
