//! Python module `plot94`.

use plot94_core::backend::{emit_hpgl, emit_svg, PageSetup};
use plot94_core::contour::choose_levels;
use plot94_core::dmpl::{parse_dmp, translate_with, DmpResolution};
use plot94_core::expr::{parse_expression, Expr};
use plot94_core::scene::{
    normalized_grid, render_contour_demo, render_contour_grid, render_demo, render_scalar_surface,
    resolution, Demo, View, DEFAULT_RESOLUTION,
};
use plot94_core::surface::{self, EulerAngles, MeshStyle, Projection};
use plot94_core::{kernel, PlotCommand, Point2, Rect, Window};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type XY = (f64, f64);
type Corners = (f64, f64, f64, f64);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rect((x0, y0, x1, y1): Corners) -> Rect {
    Rect::new(Point2::new(x0, y0), Point2::new(x1, y1))
}

fn page(page: Option<(f64, f64, f64)>) -> PyResult<PageSetup> {
    match page {
        None => Ok(PageSetup::default()),
        Some((w, h, margin)) => PageSetup::new(w, h, margin).map_err(value_error),
    }
}

/// A finished list of device commands in millimeters.
#[pyclass(frozen, eq, skip_from_py_object, module = "plot94")]
#[derive(Clone, PartialEq)]
pub struct DisplayList(pub kernel::DisplayList);

#[pymethods]
impl DisplayList {
    /// Commands as tuples: ("M", x, y), ("L", x, y), ("K", x, y), ("P", pen),
    /// ("B", name), ("E",).
    fn commands(&self, py: Python<'_>) -> PyResult<Vec<Py<PyAny>>> {
        self.0
            .commands()
            .iter()
            .map(|c| {
                Ok(match c {
                    PlotCommand::MoveTo(p) => ("M", p.x, p.y).into_pyobject(py)?.into_any().unbind(),
                    PlotCommand::LineTo(p) => ("L", p.x, p.y).into_pyobject(py)?.into_any().unbind(),
                    PlotCommand::Marker(p) => ("K", p.x, p.y).into_pyobject(py)?.into_any().unbind(),
                    PlotCommand::SelectPen(k) => ("P", *k).into_pyobject(py)?.into_any().unbind(),
                    PlotCommand::BeginFrame(n) => ("B", n.as_str()).into_pyobject(py)?.into_any().unbind(),
                    PlotCommand::EndFrame => ("E",).into_pyobject(py)?.into_any().unbind(),
                })
            })
            .collect()
    }

    /// (x0, y0, x1, y1); all zero for an empty list.
    #[getter]
    fn bbox(&self) -> Corners {
        if self.0.commands().iter().all(|c| c.point().is_none()) {
            return (0.0, 0.0, 0.0, 0.0);
        }
        let b = self.0.bbox();
        (b.min.x, b.min.y, b.max.x, b.max.y)
    }

    /// Pen-down polylines.
    fn trajectory(&self) -> Vec<Vec<XY>> {
        self.0
            .trajectory()
            .into_iter()
            .map(|l| l.into_iter().map(|p| (p.x, p.y)).collect())
            .collect()
    }

    /// HP-GL file text. `page` is (width_mm, height_mm, margin_mm).
    #[pyo3(signature = (page=None))]
    fn to_hpgl(&self, page: Option<(f64, f64, f64)>) -> PyResult<String> {
        Ok(emit_hpgl(&self.0, &self::page(page)?).map_err(value_error)?.to_file_string())
    }

    #[pyo3(signature = (page=None))]
    fn to_svg(&self, page: Option<(f64, f64, f64)>) -> PyResult<String> {
        Ok(emit_svg(&self.0, &self::page(page)?))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("DisplayList(<{} commands>)", self.0.len())
    }
}

/// The pen kernel: user coordinates in, clipped device commands out.
#[pyclass(module = "plot94")]
pub struct PlotContext(kernel::PlotContext);

#[pymethods]
impl PlotContext {
    /// Maps the `user` rectangle onto `device` (default: the page's drawable
    /// area).
    #[new]
    #[pyo3(signature = (user, device=None))]
    fn new(user: Corners, device: Option<Corners>) -> PyResult<Self> {
        let window = match device {
            Some(d) => Window::new(rect(user), rect(d)),
            None => Window::on_default_page(rect(user)),
        }
        .map_err(value_error)?;
        Ok(PlotContext(kernel::PlotContext::new(window).map_err(value_error)?))
    }

    /// Classic pen call: 2 draws, 3 moves, negative re-origins.
    fn plot(&mut self, x: f64, y: f64, code: i32) -> PyResult<()> {
        self.0.plot(x, y, code).map_err(value_error)
    }

    fn move_to(&mut self, x: f64, y: f64) -> PyResult<()> {
        self.0.move_to(x, y).map_err(value_error)
    }

    fn line_to(&mut self, x: f64, y: f64) -> PyResult<()> {
        self.0.line_to(x, y).map_err(value_error)
    }

    fn mark(&mut self, x: f64, y: f64) -> PyResult<()> {
        self.0.mark(x, y).map_err(value_error)
    }

    fn set_factor(&mut self, s: f64) -> PyResult<()> {
        self.0.set_factor(s).map_err(value_error)
    }

    fn select_pen(&mut self, pen: u8) -> PyResult<()> {
        self.0.select_pen(pen).map_err(value_error)
    }

    fn begin_frame(&mut self, name: &str) -> PyResult<()> {
        self.0.begin_frame(name).map_err(value_error)
    }

    fn end_frame(&mut self) -> PyResult<()> {
        self.0.end_frame().map_err(value_error)
    }

    #[getter]
    fn pen_position(&self) -> XY {
        let p = self.0.pen_position();
        (p.x, p.y)
    }

    /// Seals the context and returns its list.
    fn finalize(&mut self) -> PyResult<DisplayList> {
        self.0.finalize().map(DisplayList).map_err(value_error)
    }
}

/// A parsed z = f(x, y) expression.
#[pyclass(frozen, module = "plot94")]
pub struct Expression(Expr);

#[pymethods]
impl Expression {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_expression(text).map(Expression).map_err(value_error)
    }

    fn __call__(&self, x: f64, y: f64) -> f64 {
        self.0.eval(x, y)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyfunction]
#[pyo3(name = "parse_expression")]
fn parse_expression_text(text: &str) -> PyResult<Expression> {
    Expression::new(text)
}

#[pyfunction]
fn demos() -> Vec<&'static str> {
    Demo::ALL.iter().map(|d| d.name()).collect()
}

/// Z-X-Z rotation matrix for angles in radians, as three rows.
#[pyfunction]
fn rotation_matrix(phi: f64, theta: f64, psi: f64) -> [[f64; 3]; 3] {
    surface::rotation_matrix(EulerAngles::new(phi, theta, psi)).0
}

/// Part of segment a-b inside `rect` (x0, y0, x1, y1), or None.
#[pyfunction]
fn clip_segment(a: XY, b: XY, rect: Corners) -> Option<(XY, XY)> {
    kernel::clip_segment(Point2::new(a.0, a.1), Point2::new(b.0, b.1), &self::rect(rect))
        .map(|(p, q)| ((p.x, p.y), (q.x, q.y)))
}

fn surface_view(angles: (f64, f64, f64), style: &str, distance: Option<f64>) -> PyResult<View> {
    Ok(View {
        angles: EulerAngles::new(angles.0, angles.1, angles.2),
        projection: distance.map_or(Projection::Orthographic, |distance| Projection::Perspective { distance }),
        style: match style {
            "rows" => MeshStyle::Rows,
            "mesh" => MeshStyle::Mesh,
            other => return Err(PyValueError::new_err(format!("unknown style '{other}'"))),
        },
        ..View::default()
    })
}

/// Hidden-line render of a built-in demo or an expression. Angles are
/// radians; `extent` is the half-width of the domain sampled for `expr`.
#[pyfunction]
#[pyo3(signature = (demo=None, *, expr=None, angles=None, resolution=DEFAULT_RESOLUTION, style="rows", distance=None, extent=1.0))]
fn render(
    demo: Option<&str>,
    expr: Option<&Expression>,
    angles: Option<(f64, f64, f64)>,
    resolution: usize,
    style: &str,
    distance: Option<f64>,
    extent: f64,
) -> PyResult<DisplayList> {
    let view = match angles {
        Some(a) => surface_view(a, style, distance)?,
        None => {
            let d = View::default().angles;
            surface_view((d.phi, d.theta, d.psi), style, distance)?
        }
    };
    let res = self::resolution(resolution).map_err(value_error)?;
    let page = PageSetup::default();
    let dl = match (demo, expr) {
        (Some(name), None) => render_demo(name.parse().map_err(value_error)?, res, &view, &page),
        (None, Some(e)) => {
            let grid = normalized_grid(|x, y| e.0.eval(x, y), (-extent, extent), res).map_err(value_error)?;
            render_scalar_surface(&grid, &view, &page, "expr")
        }
        _ => return Err(PyValueError::new_err("give exactly one of demo or expr")),
    };
    dl.map(DisplayList).map_err(value_error)
}

/// Plan-view contours at `levels` evenly spaced levels.
#[pyfunction]
#[pyo3(signature = (demo=None, *, expr=None, levels=5, resolution=DEFAULT_RESOLUTION, extent=1.0))]
fn contour(
    demo: Option<&str>,
    expr: Option<&Expression>,
    levels: usize,
    resolution: usize,
    extent: f64,
) -> PyResult<DisplayList> {
    if levels == 0 {
        return Err(PyValueError::new_err("levels must be at least 1"));
    }
    let res = self::resolution(resolution).map_err(value_error)?;
    let page = PageSetup::default();
    let dl = match (demo, expr) {
        (Some(name), None) => render_contour_demo(name.parse().map_err(value_error)?, res, levels, &page),
        (None, Some(e)) => {
            let grid = normalized_grid(|x, y| e.0.eval(x, y), (-extent, extent), res).map_err(value_error)?;
            render_contour_grid(&grid, &choose_levels(&grid, levels), &page, "contour-expr")
        }
        _ => return Err(PyValueError::new_err("give exactly one of demo or expr")),
    };
    dl.map(DisplayList).map_err(value_error)
}

/// Translates DM/PL program text to an HP-GL file.
#[pyfunction]
#[pyo3(signature = (text, fine=false))]
fn dmp_to_hpgl(text: &str, fine: bool) -> PyResult<String> {
    let program = parse_dmp(text).map_err(value_error)?;
    let res = if fine { DmpResolution::FINE } else { DmpResolution::default() };
    Ok(translate_with(&program, &PageSetup::default(), res)
        .map_err(value_error)?
        .to_file_string())
}

/// Parsed DM/PL commands in canonical text form, one per item.
#[pyfunction]
fn parse_dmp_commands(text: &str) -> PyResult<Vec<String>> {
    let program = parse_dmp(text).map_err(value_error)?;
    Ok(program.commands().iter().map(|c| c.to_string()).collect())
}

#[pymodule]
fn plot94(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DisplayList>()?;
    m.add_class::<PlotContext>()?;
    m.add_class::<Expression>()?;
    m.add_function(wrap_pyfunction!(demos, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(clip_segment, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(contour, m)?)?;
    m.add_function(wrap_pyfunction!(dmp_to_hpgl, m)?)?;
    m.add_function(wrap_pyfunction!(parse_dmp_commands, m)?)?;
    m.add_function(wrap_pyfunction!(parse_expression_text, m)?)?;
    Ok(())
}
