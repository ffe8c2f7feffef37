//! Floating-horizon hidden-line removal for z = f(x, y) grids.
//!
//! Grid lines are drawn nearest first. For every device column the buffer
//! keeps the highest and lowest projected y drawn so far; a later point is
//! visible only where it rises strictly above the upper horizon or drops
//! strictly below the lower one. Between integer columns the horizon is not
//! sampled, so the answer is exact only to within one column.

use super::{EulerAngles, Projection, ScalarGrid, SurfaceError, ViewTransform};
use crate::kernel::{PlotContext, Point2};

pub const DEFAULT_HORIZON_WIDTH: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeshStyle {
    /// Grid rows only.
    #[default]
    Rows,
    /// Rows and columns.
    Mesh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectSurfaceOptions {
    pub style: MeshStyle,
    pub horizon_width: usize,
    /// Keep a copy of the upper horizon after each line pass.
    pub trace: bool,
}

impl Default for RectSurfaceOptions {
    fn default() -> Self {
        RectSurfaceOptions {
            style: MeshStyle::Rows,
            horizon_width: DEFAULT_HORIZON_WIDTH,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// A projected grid vertex.
    Vertex,
    /// Where a line enters or leaves the visible region.
    Boundary,
}

/// Projected point with its rotated depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub depth: f64,
    pub kind: PointKind,
}

impl SurfacePoint {
    pub fn vertex(x: f64, y: f64, depth: f64) -> Self {
        SurfacePoint {
            x,
            y,
            depth,
            kind: PointKind::Vertex,
        }
    }

    fn same_place(&self, other: &SurfacePoint) -> bool {
        self.x == other.x && self.y == other.y
    }

    fn lerp(&self, other: &SurfacePoint, t: f64, kind: PointKind) -> SurfacePoint {
        SurfacePoint {
            x: self.x + (other.x - self.x) * t,
            y: self.y + (other.y - self.y) * t,
            depth: self.depth + (other.depth - self.depth) * t,
            kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Above,
    Below,
    Hidden,
    /// Outside the horizons but covered by the adjacent strip.
    Occluded,
}

/// A point on a polyline and the columns bracketing it (equal when it sits
/// on a column).
struct Sample {
    p: SurfacePoint,
    lo: usize,
    hi: usize,
    emit: bool,
}

/// Upper and lower horizons over `width` columns spanning `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonBuffer {
    x_min: f64,
    x_max: f64,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl HorizonBuffer {
    pub fn new(width: usize, x_min: f64, x_max: f64) -> Result<Self, SurfaceError> {
        if width < 2 {
            return Err(SurfaceError::HorizonWidth);
        }
        Ok(HorizonBuffer {
            x_min,
            x_max,
            upper: vec![f64::NEG_INFINITY; width],
            lower: vec![f64::INFINITY; width],
        })
    }

    pub fn width(&self) -> usize {
        self.upper.len()
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Fractional column of device x.
    pub fn column(&self, x: f64) -> f64 {
        let span = self.x_max - self.x_min;
        if span > 0.0 {
            ((x - self.x_min) / span * (self.width() - 1) as f64).clamp(0.0, (self.width() - 1) as f64)
        } else {
            0.0
        }
    }

    fn nearest(&self, c: f64) -> usize {
        (c.round() as usize).min(self.width() - 1)
    }

    fn bracket(&self, x: f64) -> (usize, usize) {
        let c = self.column(x);
        (c.floor() as usize, (c.ceil() as usize).min(self.width() - 1))
    }

    /// Side of `y` against the horizons of both bracketing columns. Between
    /// two columns the true envelope never leaves the band spanned by the
    /// two column values, so this test can only err towards hiding.
    fn side(&self, y: f64, lo: usize, hi: usize) -> Side {
        if y > self.upper[lo].max(self.upper[hi]) {
            Side::Above
        } else if y < self.lower[lo].min(self.lower[hi]) {
            Side::Below
        } else {
            Side::Hidden
        }
    }

    /// Visibility of a point against the columns on either side of it.
    pub fn is_visible(&self, x: f64, y: f64) -> bool {
        let (lo, hi) = self.bracket(x);
        self.side(y, lo, hi) != Side::Hidden
    }

    fn margin(&self, side: Side, y: f64, lo: usize, hi: usize) -> f64 {
        match side {
            Side::Above => y - self.upper[lo].max(self.upper[hi]),
            Side::Below => self.lower[lo].min(self.lower[hi]) - y,
            Side::Hidden | Side::Occluded => unreachable!("margin of hidden side"),
        }
    }

    fn raise(&mut self, col: usize, y: f64) {
        self.upper[col] = self.upper[col].max(y);
        self.lower[col] = self.lower[col].min(y);
    }

    /// Folds segment `ab` into both horizons at every column it covers.
    pub fn update_segment(&mut self, a: Point2, b: Point2) {
        let (ca, cb) = (self.column(a.x), self.column(b.x));
        self.raise(self.nearest(ca), a.y);
        self.raise(self.nearest(cb), b.y);
        for c in interior_columns(ca, cb) {
            let t = (c as f64 - ca) / (cb - ca);
            self.raise(c, a.y + (b.y - a.y) * t);
        }
    }

    pub fn update_polyline(&mut self, points: &[SurfacePoint]) {
        for w in points.windows(2) {
            self.update_segment(Point2::new(w[0].x, w[0].y), Point2::new(w[1].x, w[1].y));
        }
    }

    fn samples(&self, points: &[SurfacePoint]) -> Vec<Sample> {
        let mut out = Vec::with_capacity(points.len());
        let Some(first) = points.first() else {
            return out;
        };
        let vertex = |p: &SurfacePoint| {
            let (lo, hi) = self.bracket(p.x);
            Sample {
                p: *p,
                lo,
                hi,
                emit: true,
            }
        };
        out.push(vertex(first));
        for w in points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let (ca, cb) = (self.column(a.x), self.column(b.x));
            for c in interior_columns(ca, cb) {
                let t = (c as f64 - ca) / (cb - ca);
                out.push(Sample {
                    p: a.lerp(b, t, PointKind::Boundary),
                    lo: c,
                    hi: c,
                    emit: false,
                });
            }
            out.push(vertex(b));
        }
        out
    }

    /// Splits a polyline into its visible runs against the current horizons.
    /// Runs keep the original vertices plus interpolated entry and exit
    /// points; the buffer is not modified.
    pub fn visible_runs(&self, points: &[SurfacePoint]) -> Vec<Vec<SurfacePoint>> {
        self.runs_with(points, None)
    }

    fn classify(&self, s: &Sample, strip: Option<&StripOccluder>) -> Side {
        let side = self.side(s.p.y, s.lo, s.hi);
        match strip {
            Some(o) if side != Side::Hidden && o.occludes(&s.p, s.lo) => Side::Occluded,
            _ => side,
        }
    }

    fn runs_with(
        &self,
        points: &[SurfacePoint],
        strip: Option<&StripOccluder>,
    ) -> Vec<Vec<SurfacePoint>> {
        let samples = self.samples(points);
        let mut runs = Vec::new();
        let mut cur: Vec<SurfacePoint> = Vec::new();
        let Some(first) = samples.first() else {
            return runs;
        };
        let sides: Vec<Side> = samples.iter().map(|s| self.classify(s, strip)).collect();
        if is_shown(sides[0]) {
            cur.push(first.p);
        }
        for (w, sw) in samples.windows(2).zip(sides.windows(2)) {
            let (s, t) = (&w[0], &w[1]);
            let (ss, ts) = (sw[0], sw[1]);
            match (is_shown(ss), is_shown(ts)) {
                (false, false) => {}
                (false, true) => {
                    let k = self.crossing(ss, ts, s, t, strip);
                    push_point(&mut cur, s.p.lerp(&t.p, k, PointKind::Boundary));
                    if t.emit {
                        push_point(&mut cur, t.p);
                    }
                }
                (true, false) => {
                    let k = self.crossing(ts, ss, s, t, strip);
                    push_point(&mut cur, s.p.lerp(&t.p, k, PointKind::Boundary));
                    close_run(&mut runs, &mut cur);
                }
                (true, true) if ss == ts => {
                    if t.emit {
                        push_point(&mut cur, t.p);
                    }
                }
                (true, true) => {
                    let k_out = self.margin_crossing(ss, s, t);
                    let k_in = self.margin_crossing(ts, s, t).max(k_out);
                    push_point(&mut cur, s.p.lerp(&t.p, k_out, PointKind::Boundary));
                    close_run(&mut runs, &mut cur);
                    push_point(&mut cur, s.p.lerp(&t.p, k_in, PointKind::Boundary));
                    if t.emit {
                        push_point(&mut cur, t.p);
                    }
                }
            }
        }
        close_run(&mut runs, &mut cur);
        runs
    }

    /// Transition parameter between a hidden sample and a shown one, whose
    /// visible side is `shown`.
    fn crossing(
        &self,
        hidden: Side,
        shown: Side,
        s: &Sample,
        t: &Sample,
        strip: Option<&StripOccluder>,
    ) -> f64 {
        match (hidden, strip) {
            (Side::Occluded, Some(o)) => o.bisect(&s.p, &t.p),
            _ => self.margin_crossing(shown, s, t),
        }
    }

    /// Parameter in [0, 1] where the visibility margin for `side` changes
    /// sign between samples `s` and `t`.
    fn margin_crossing(&self, side: Side, s: &Sample, t: &Sample) -> f64 {
        let g0 = self.margin(side, s.p.y, s.lo, s.hi);
        let g1 = self.margin(side, t.p.y, t.lo, t.hi);
        if g0.is_finite() && g1.is_finite() && g0 != g1 {
            (g0 / (g0 - g1)).clamp(0.0, 1.0)
        } else {
            // Horizon starts between the two samples.
            0.5
        }
    }
}

fn is_shown(side: Side) -> bool {
    matches!(side, Side::Above | Side::Below)
}

/// Triangles of the grid cells between the line being drawn and the line
/// drawn just before it, bucketed by horizon column.
///
/// The horizons only know the outline of finished cells. These cells are
/// not finished yet but can still fold over the current line, so points
/// are tested against them directly.
struct StripOccluder {
    tris: Vec<[SurfacePoint; 3]>,
    buckets: Vec<Vec<usize>>,
    tol: f64,
}

impl StripOccluder {
    fn new(tris: Vec<[SurfacePoint; 3]>, horizon: &HorizonBuffer, tol: f64) -> Self {
        let mut buckets = vec![Vec::new(); horizon.width()];
        for (n, t) in tris.iter().enumerate() {
            let lo = t.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
            let hi = t.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
            let c0 = horizon.column(lo).floor() as usize;
            let c1 = (horizon.column(hi).ceil() as usize).min(horizon.width() - 1);
            for bucket in &mut buckets[c0..=c1] {
                bucket.push(n);
            }
        }
        StripOccluder { tris, buckets, tol }
    }

    fn occludes(&self, p: &SurfacePoint, col: usize) -> bool {
        self.buckets[col]
            .iter()
            .any(|&n| covers(&self.tris[n], p, self.tol))
    }

    fn occludes_anywhere(&self, p: &SurfacePoint) -> bool {
        self.tris.iter().any(|t| covers(t, p, self.tol))
    }

    /// Where occlusion starts or stops between `a` and `b`.
    fn bisect(&self, a: &SurfacePoint, b: &SurfacePoint) -> f64 {
        let a_hidden = self.occludes_anywhere(a);
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..48 {
            let mid = 0.5 * (lo + hi);
            if self.occludes_anywhere(&a.lerp(b, mid, PointKind::Boundary)) == a_hidden {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if a_hidden {
            hi
        } else {
            lo
        }
    }
}

/// Whether triangle `t` lies strictly over `p` and in front of it.
fn covers(t: &[SurfacePoint; 3], p: &SurfacePoint, tol: f64) -> bool {
    let [a, b, c] = t;
    let det = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
    if det == 0.0 {
        return false;
    }
    let l1 = ((b.y - c.y) * (p.x - c.x) + (c.x - b.x) * (p.y - c.y)) / det;
    let l2 = ((c.y - a.y) * (p.x - c.x) + (a.x - c.x) * (p.y - c.y)) / det;
    let l3 = 1.0 - l1 - l2;
    const INSIDE: f64 = 1e-9;
    if !(l1 > INSIDE && l2 > INSIDE && l3 > INSIDE) {
        return false;
    }
    l1 * a.depth + l2 * b.depth + l3 * c.depth > p.depth + tol
}

fn push_point(run: &mut Vec<SurfacePoint>, p: SurfacePoint) {
    if run.last().is_some_and(|last| last.same_place(&p)) {
        return;
    }
    run.push(p);
}

fn close_run(runs: &mut Vec<Vec<SurfacePoint>>, cur: &mut Vec<SurfacePoint>) {
    if cur.len() >= 2 {
        runs.push(std::mem::take(cur));
    } else {
        cur.clear();
    }
}

/// Integer columns strictly between fractional columns `ca` and `cb`, in
/// travel order.
fn interior_columns(ca: f64, cb: f64) -> Box<dyn Iterator<Item = usize>> {
    if cb > ca {
        let lo = ca.floor() as usize + 1;
        let hi = cb.ceil() as usize;
        Box::new(lo..hi)
    } else if ca > cb {
        let lo = cb.floor() as usize + 1;
        let hi = ca.ceil() as usize;
        Box::new((lo..hi).rev())
    } else {
        Box::new(std::iter::empty())
    }
}

/// Which polyline a visible run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunSource {
    /// Grid line `k` of the swept family.
    Line(usize),
    /// Edge joining vertex `index` of an earlier line to the same vertex of
    /// line `to`.
    Connector { from: usize, to: usize, index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibleRun {
    pub source: RunSource,
    pub points: Vec<SurfacePoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonReport {
    /// True when grid columns, not rows, were swept near to far.
    pub swept_columns: bool,
    /// Swept lines, nearest first.
    pub line_order: Vec<usize>,
    /// Vertices per swept line.
    pub line_len: usize,
    pub runs: Vec<VisibleRun>,
    /// Upper horizon after each line pass (only with `trace`).
    pub upper_trace: Vec<Vec<f64>>,
}

/// Draws a scalar grid with hidden lines removed. Projected coordinates are
/// handed to `ctx` as user units.
pub fn render_rect_surface(
    grid: &ScalarGrid,
    angles: EulerAngles,
    projection: Projection,
    ctx: &mut PlotContext,
    opts: &RectSurfaceOptions,
) -> Result<HorizonReport, SurfaceError> {
    if opts.horizon_width < 2 {
        return Err(SurfaceError::HorizonWidth);
    }
    if ctx.is_sealed() {
        return Err(crate::kernel::PlotError::Sealed.into());
    }
    let view = ViewTransform::new(angles, projection)?;
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut verts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let q = view.project([grid.x_at(i), grid.y_at(j), grid.z_at(i, j)])?;
            verts.push(SurfacePoint::vertex(q.point.x, q.point.y, q.depth));
        }
    }

    let rows: Vec<Vec<usize>> = (0..ny).map(|j| (0..nx).map(|i| j * nx + i).collect()).collect();
    let cols: Vec<Vec<usize>> = (0..nx).map(|i| (0..ny).map(|j| j * nx + i).collect()).collect();
    // Lines are ordered by the depth of their footprint on the z = 0 plane.
    // Any point that hides part of a line then lies over a line that comes
    // earlier, or in the strip between the line and its predecessor.
    let flat_depth = |v: usize| {
        view.rotation
            .apply([grid.x_at(v % nx), grid.y_at(v / nx), 0.0])[2]
    };
    let key = |line: &Vec<usize>| 0.5 * (flat_depth(line[0]) + flat_depth(line[line.len() - 1]));
    let row_keys: Vec<f64> = rows.iter().map(key).collect();
    let col_keys: Vec<f64> = cols.iter().map(key).collect();
    let swept_columns = opts.style == MeshStyle::Mesh && spread(&col_keys) > spread(&row_keys);
    let (lines, keys) = if swept_columns {
        (cols, col_keys)
    } else {
        (rows, row_keys)
    };
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));

    let (x_min, x_max) = verts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v.x), hi.max(v.x))
        });
    let scale = verts
        .iter()
        .fold(f64::MIN_POSITIVE, |m, v| m.max(v.x.abs()).max(v.y.abs()).max(v.depth.abs()));
    let tol = 1e-9 * scale;
    let mut horizon = HorizonBuffer::new(opts.horizon_width, x_min, x_max)?;
    let mut done = vec![false; lines.len()];
    let mut report = HorizonReport {
        swept_columns,
        line_order: order.clone(),
        line_len: lines[0].len(),
        runs: Vec::new(),
        upper_trace: Vec::new(),
    };

    for &k in &order {
        let line: Vec<SurfacePoint> = lines[k].iter().map(|&v| verts[v]).collect();
        let mut connectors = Vec::new();
        let mut tris = Vec::new();
        let mut diagonals = Vec::new();
        for nb in [k.wrapping_sub(1), k + 1] {
            if nb < lines.len() && done[nb] {
                for (m, (&a, &b)) in lines[nb].iter().zip(&lines[k]).enumerate() {
                    connectors.push((nb, m, [verts[a], verts[b]]));
                }
                let lo = k.min(nb);
                for m in 0..lines[k].len() - 1 {
                    let (i, j) = if swept_columns { (lo, m) } else { (m, lo) };
                    tris.extend(cell_triangles(&verts, nx, i, j));
                    diagonals.push([verts[j * nx + i], verts[(j + 1) * nx + i + 1]]);
                }
            }
        }
        let strip = StripOccluder::new(tris, &horizon, tol);

        for run in horizon.runs_with(&line, Some(&strip)) {
            emit(ctx, &run)?;
            report.runs.push(VisibleRun {
                source: RunSource::Line(k),
                points: run,
            });
        }
        if opts.style == MeshStyle::Mesh {
            for (from, index, seg) in &connectors {
                for run in horizon.runs_with(seg, Some(&strip)) {
                    emit(ctx, &run)?;
                    report.runs.push(VisibleRun {
                        source: RunSource::Connector {
                            from: *from,
                            to: k,
                            index: *index,
                        },
                        points: run,
                    });
                }
            }
        }

        // Connectors and cell diagonals bound the surface between lines even
        // when not drawn; a cell that folds over in projection can reach
        // past its outline along the diagonal.
        horizon.update_polyline(&line);
        for (_, _, seg) in &connectors {
            horizon.update_polyline(seg);
        }
        for seg in &diagonals {
            horizon.update_polyline(seg);
        }
        done[k] = true;
        if opts.trace {
            report.upper_trace.push(horizon.upper().to_vec());
        }
    }
    Ok(report)
}

/// The two triangles of cell `(i, j)`, split along the diagonal from
/// `(i, j)` to `(i + 1, j + 1)`.
fn cell_triangles(verts: &[SurfacePoint], nx: usize, i: usize, j: usize) -> [[SurfacePoint; 3]; 2] {
    let a = verts[j * nx + i];
    let b = verts[j * nx + i + 1];
    let c = verts[(j + 1) * nx + i + 1];
    let d = verts[(j + 1) * nx + i];
    [[a, b, c], [a, c, d]]
}

fn spread(keys: &[f64]) -> f64 {
    let (lo, hi) = keys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| (lo.min(d), hi.max(d)));
    hi - lo
}

fn emit(ctx: &mut PlotContext, run: &[SurfacePoint]) -> Result<(), SurfaceError> {
    let mut pts = run.iter();
    if let Some(first) = pts.next() {
        ctx.move_to(first.x, first.y)?;
        for p in pts {
            ctx.line_to(p.x, p.y)?;
        }
    }
    Ok(())
}
