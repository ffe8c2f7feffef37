//! Built-in demonstration surfaces and one-call rendering onto a page.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::backend::PageSetup;
use crate::contour::{choose_levels, extract_contours, render_contours, ContourError, ContourLevelSet};
use crate::kernel::{BBox, DisplayList, PlotContext, PlotError, Point2, Rect, Window};
use crate::math;
use crate::surface::{
    render_closed_surface, render_rect_surface, sample_parametric, sample_scalar, EulerAngles,
    MeshStyle, ParametricGrid, Projection, RectSurfaceOptions, Resolution, ScalarGrid,
    SurfaceError, ViewTransform, DEFAULT_HORIZON_WIDTH,
};

pub const DEFAULT_RESOLUTION: usize = 32;
pub const MAX_RESOLUTION: usize = 512;

/// Scalar demos are scaled so the largest |z| equals this, over an x-y
/// footprint of [-1, 1] squared.
pub const Z_HALF_HEIGHT: f64 = 0.6;

/// Fraction of the fitted extent left blank on each side.
const FIT_PADDING: f64 = 0.04;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("unknown demo '{0}'")]
    UnknownDemo(String),
    #[error("demo '{0}' is a closed surface and has no contours")]
    NotScalar(&'static str),
    #[error("demo '{0}' is not a closed surface")]
    NotClosed(&'static str),
    #[error("resolution {0} outside 2..=512")]
    Resolution(usize),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Plot(#[from] PlotError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Demo {
    Sinc,
    Saddle,
    Ripple,
    Sphere,
    Torus,
}

impl Demo {
    pub const ALL: [Demo; 5] = [Demo::Sinc, Demo::Saddle, Demo::Ripple, Demo::Sphere, Demo::Torus];

    pub fn name(self) -> &'static str {
        match self {
            Demo::Sinc => "sinc",
            Demo::Saddle => "saddle",
            Demo::Ripple => "ripple",
            Demo::Sphere => "sphere",
            Demo::Torus => "torus",
        }
    }

    pub fn is_closed(self) -> bool {
        matches!(self, Demo::Sphere | Demo::Torus)
    }

    /// Natural sampling domain of a scalar demo, the same on both axes.
    pub fn domain(self) -> Option<(f64, f64)> {
        match self {
            Demo::Sinc | Demo::Ripple => Some((-10.0, 10.0)),
            Demo::Saddle => Some((-1.0, 1.0)),
            Demo::Sphere | Demo::Torus => None,
        }
    }

    /// Height of a scalar demo; `None` for closed surfaces.
    pub fn eval(self, x: f64, y: f64) -> Option<f64> {
        let r = (x * x + y * y).sqrt();
        match self {
            Demo::Sinc => Some(if r == 0.0 { 1.0 } else { math::sin(r) / r }),
            Demo::Saddle => Some(x * x - y * y),
            Demo::Ripple => Some(math::cos(r) * math::exp(-r / 3.0)),
            Demo::Sphere | Demo::Torus => None,
        }
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = SceneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Demo::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| SceneError::UnknownDemo(s.to_owned()))
    }
}

pub fn resolution(n: usize) -> Result<Resolution, SceneError> {
    if (2..=MAX_RESOLUTION).contains(&n) {
        Ok(Resolution::new(n)?)
    } else {
        Err(SceneError::Resolution(n))
    }
}

/// Samples `f` over `domain` squared and rescales onto the standard
/// footprint and height.
pub fn normalized_grid<F>(f: F, domain: (f64, f64), res: Resolution) -> Result<ScalarGrid, SurfaceError>
where
    F: Fn(f64, f64) -> f64,
{
    let raw = sample_scalar(f, domain, domain, res)?;
    let peak = raw.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if peak > 0.0 { Z_HALF_HEIGHT / peak } else { 1.0 };
    raw.remapped((-1.0, 1.0), (-1.0, 1.0), scale)
}

pub fn scalar_demo_grid(demo: Demo, res: Resolution) -> Result<ScalarGrid, SceneError> {
    let domain = demo.domain().ok_or(SceneError::NotScalar(demo.name()))?;
    Ok(normalized_grid(
        |x, y| demo.eval(x, y).unwrap_or(f64::NAN),
        domain,
        res,
    )?)
}

/// Sphere: longitude u wraps, latitude v runs pole to pole. Torus: both
/// directions wrap. Both are oriented with outward normals.
pub fn closed_demo_grid(demo: Demo, res: Resolution) -> Result<ParametricGrid, SceneError> {
    let n = res.get();
    let grid = match demo {
        Demo::Sphere => sample_parametric(
            |u, v| {
                let (cu, su, cv, sv) = (math::cos(u), math::sin(u), math::cos(v), math::sin(v));
                [cv * cu, cv * su, sv]
            },
            (0.0, 2.0 * PI),
            (-FRAC_PI_2, FRAC_PI_2),
            (n, n),
            (true, false),
        )?,
        Demo::Torus => {
            let (big, small) = (2.0, 0.75);
            sample_parametric(
                |u, v| {
                    let ring = big + small * math::cos(v);
                    [ring * math::cos(u), ring * math::sin(u), small * math::sin(v)]
                },
                (0.0, 2.0 * PI),
                (0.0, 2.0 * PI),
                (n, n),
                (true, true),
            )?
        }
        other => return Err(SceneError::NotClosed(other.name())),
    };
    Ok(grid)
}

/// Orientation and drawing options for a surface panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct View {
    pub angles: EulerAngles,
    pub projection: Projection,
    pub style: MeshStyle,
    pub horizon_width: usize,
}

impl Default for View {
    fn default() -> Self {
        let (angles, projection) = crate::surface::default_view();
        View {
            angles,
            projection,
            style: MeshStyle::Rows,
            horizon_width: DEFAULT_HORIZON_WIDTH,
        }
    }
}

/// Window that maps the bounding box of `points` onto the page's drawable
/// area with equal x and y scale, centered and slightly padded.
pub fn fit_window<I>(points: I, page: &PageSetup) -> Result<Window, PlotError>
where
    I: IntoIterator<Item = Point2>,
{
    page.validate()
        .map_err(|_| PlotError::InvalidWindow("page has no drawable area"))?;
    let device = page.drawable();
    let b = BBox::of_points(points);
    let (cx, cy, w, h) = if b.min.x <= b.max.x {
        (
            0.5 * (b.min.x + b.max.x),
            0.5 * (b.min.y + b.max.y),
            b.width(),
            b.height(),
        )
    } else {
        (0.0, 0.0, 0.0, 0.0)
    };
    let (dw, dh) = (device.width(), device.height());
    let mut s = (w / dw).max(h / dh);
    if s.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        s = 1.0 / dw.max(dh);
    }
    let s = s * (1.0 + 2.0 * FIT_PADDING);
    let (hw, hh) = (0.5 * s * dw, 0.5 * s * dh);
    Window::new(
        Rect::new(Point2::new(cx - hw, cy - hh), Point2::new(cx + hw, cy + hh)),
        device,
    )
}

fn projected_points<I>(points: I, view: &View) -> Result<Vec<Point2>, SurfaceError>
where
    I: IntoIterator<Item = [f64; 3]>,
{
    let vt = ViewTransform::new(view.angles, view.projection)?;
    points
        .into_iter()
        .map(|p| vt.project(p).map(|q| q.point))
        .collect()
}

/// Hidden-line rendering of a scalar grid, fitted to the page.
pub fn render_scalar_surface(
    grid: &ScalarGrid,
    view: &View,
    page: &PageSetup,
    frame: &str,
) -> Result<DisplayList, SceneError> {
    let pts = (0..grid.ny()).flat_map(|j| {
        (0..grid.nx()).map(move |i| [grid.x_at(i), grid.y_at(j), grid.z_at(i, j)])
    });
    let window = fit_window(projected_points(pts, view)?, page)?;
    let mut ctx = PlotContext::new(window)?;
    ctx.begin_frame(frame)?;
    let opts = RectSurfaceOptions {
        style: view.style,
        horizon_width: view.horizon_width,
        ..RectSurfaceOptions::default()
    };
    render_rect_surface(grid, view.angles, view.projection, &mut ctx, &opts)?;
    Ok(ctx.finalize()?)
}

/// Back-face culled wireframe of a closed grid, fitted to the page.
pub fn render_closed(
    grid: &ParametricGrid,
    view: &View,
    page: &PageSetup,
    frame: &str,
) -> Result<DisplayList, SceneError> {
    let window = fit_window(projected_points(grid.points().iter().copied(), view)?, page)?;
    let mut ctx = PlotContext::new(window)?;
    ctx.begin_frame(frame)?;
    render_closed_surface(grid, view.angles, view.projection, &mut ctx)?;
    Ok(ctx.finalize()?)
}

pub fn render_demo(
    demo: Demo,
    res: Resolution,
    view: &View,
    page: &PageSetup,
) -> Result<DisplayList, SceneError> {
    if demo.is_closed() {
        render_closed(&closed_demo_grid(demo, res)?, view, page, demo.name())
    } else {
        render_scalar_surface(&scalar_demo_grid(demo, res)?, view, page, demo.name())
    }
}

/// Plan view of the level curves, the grid's x-y rectangle fitted to the
/// page. Level `k` (ascending) is drawn with pen `k % 8 + 1`.
pub fn render_contour_grid(
    grid: &ScalarGrid,
    levels: &ContourLevelSet,
    page: &PageSetup,
    frame: &str,
) -> Result<DisplayList, SceneError> {
    let (x0, x1) = grid.x_range();
    let (y0, y1) = grid.y_range();
    let window = fit_window([Point2::new(x0, y0), Point2::new(x1, y1)], page)?;
    let mut ctx = PlotContext::new(window)?;
    ctx.begin_frame(frame)?;
    let polys = extract_contours(grid, levels);
    // A fresh context already holds pen 1.
    let mut pen = 1;
    for (k, &level) in levels.levels().iter().enumerate() {
        let mine: Vec<_> = polys.iter().filter(|p| p.level == level).cloned().collect();
        if mine.is_empty() {
            continue;
        }
        if (k % 8) as u8 + 1 != pen {
            pen = (k % 8) as u8 + 1;
            ctx.select_pen(pen)?;
        }
        render_contours(&mine, &mut ctx)?;
    }
    Ok(ctx.finalize()?)
}

/// Contours of a scalar demo at `k` evenly spaced levels.
pub fn render_contour_demo(
    demo: Demo,
    res: Resolution,
    k: usize,
    page: &PageSetup,
) -> Result<DisplayList, SceneError> {
    let grid = scalar_demo_grid(demo, res)?;
    let levels = choose_levels(&grid, k);
    render_contour_grid(&grid, &levels, page, &format!("contour-{}", demo.name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::PlotCommand;

    #[test]
    fn names_round_trip() {
        for d in Demo::ALL {
            assert_eq!(d.name().parse::<Demo>().unwrap(), d);
        }
        assert_eq!(
            "nosuch".parse::<Demo>(),
            Err(SceneError::UnknownDemo("nosuch".into()))
        );
    }

    #[test]
    fn demo_values() {
        assert_eq!(Demo::Sinc.eval(0.0, 0.0), Some(1.0));
        assert_eq!(Demo::Saddle.eval(2.0, 1.0), Some(3.0));
        assert_eq!(Demo::Ripple.eval(0.0, 0.0), Some(1.0));
        assert_eq!(Demo::Sphere.eval(0.0, 0.0), None);
    }

    #[test]
    fn normalized_height() {
        let g = scalar_demo_grid(Demo::Saddle, Resolution::new(5).unwrap()).unwrap();
        let (lo, hi) = g.min_max();
        assert_eq!((lo, hi), (-Z_HALF_HEIGHT, Z_HALF_HEIGHT));
        assert_eq!(g.x_range(), (-1.0, 1.0));
    }

    #[test]
    fn fit_is_uniform_and_inside() {
        let page = PageSetup::default();
        let w = fit_window([Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)], &page).unwrap();
        let sx = w.device.width() / w.user.width();
        let sy = w.device.height() / w.user.height();
        assert!((sx - sy).abs() < 1e-9 * sx);
        assert!(w.user.min.x < -1.0 && w.user.max.y > 1.0);
        // Degenerate input still yields a usable window.
        assert!(fit_window([Point2::new(3.0, 3.0)], &page).is_ok());
        assert!(fit_window(std::iter::empty(), &page).is_ok());
    }

    #[test]
    fn contour_levels_cycle_pens() {
        // z = x on [0, 1]: every one of 10 levels crosses the grid.
        let z = (0..9).map(|k| (k % 3) as f64 / 2.0).collect();
        let grid = ScalarGrid::new(3, 3, (0.0, 1.0), (0.0, 1.0), z).unwrap();
        let levels = ContourLevelSet::new((1..=10).map(|k| k as f64 / 11.0).collect()).unwrap();
        let dl = render_contour_grid(&grid, &levels, &PageSetup::default(), "c").unwrap();
        let pens: Vec<u8> = dl
            .commands()
            .iter()
            .filter_map(|c| match c {
                PlotCommand::SelectPen(k) => Some(*k),
                _ => None,
            })
            .collect();
        assert_eq!(pens, [2, 3, 4, 5, 6, 7, 8, 1, 2]);
    }

    #[test]
    fn default_view_demo_is_not_empty() {
        let page = PageSetup::default();
        let dl = render_demo(Demo::Sinc, Resolution::new(16).unwrap(), &View::default(), &page)
            .unwrap();
        assert!(dl
            .commands()
            .iter()
            .any(|c| matches!(c, PlotCommand::LineTo(_))));
        let drawable = page.drawable();
        for c in dl.commands() {
            if let Some(p) = c.point() {
                assert!(drawable.contains(p));
            }
        }
    }

    #[test]
    fn closed_demos_render() {
        let page = PageSetup::default();
        for d in [Demo::Sphere, Demo::Torus] {
            let dl = render_demo(d, Resolution::new(8).unwrap(), &View::default(), &page).unwrap();
            assert!(!dl.is_empty());
        }
        assert!(matches!(
            render_contour_demo(Demo::Torus, Resolution::new(8).unwrap(), 3, &page),
            Err(SceneError::NotScalar("torus"))
        ));
    }
}
