//! Panel specifications and their rendering.

use std::fmt;

use plot94_core::backend::PageSetup;
use plot94_core::scene::{
    render_contour_demo, render_demo, resolution, Demo, SceneError, View, DEFAULT_RESOLUTION,
    MAX_RESOLUTION,
};
use plot94_core::surface::{default_view, EulerAngles, MeshStyle, Projection};
use plot94_core::DisplayList;
use serde::{Deserialize, Serialize};

/// Prefix selecting the plan-view contour variant of a scalar demo.
pub const CONTOUR_PREFIX: &str = "contour-";
pub const DEFAULT_CONTOUR_LEVELS: usize = 5;
pub const MAX_CONTOUR_LEVELS: usize = 64;
pub const DEFAULT_EYE_DISTANCE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Euler {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl From<Euler> for EulerAngles {
    fn from(e: Euler) -> Self {
        EulerAngles::new(e.phi, e.theta, e.psi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionMode {
    #[default]
    Orthographic,
    Perspective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    #[default]
    Rows,
    Mesh,
}

/// Wire form of one panel. Angles are radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSpec {
    pub demo: String,
    pub euler: Euler,
    pub resolution: usize,
    #[serde(default)]
    pub projection: ProjectionMode,
    /// Eye distance for perspective panels.
    #[serde(default = "default_distance")]
    pub distance: f64,
    #[serde(default)]
    pub style: Style,
    /// Level count for contour panels.
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_distance() -> f64 {
    DEFAULT_EYE_DISTANCE
}

fn default_levels() -> usize {
    DEFAULT_CONTOUR_LEVELS
}

impl Default for PanelSpec {
    fn default() -> Self {
        let (angles, _) = default_view();
        PanelSpec {
            demo: Demo::Sinc.name().to_owned(),
            euler: Euler {
                phi: angles.phi,
                theta: angles.theta,
                psi: angles.psi,
            },
            resolution: DEFAULT_RESOLUTION,
            projection: ProjectionMode::Orthographic,
            distance: DEFAULT_EYE_DISTANCE,
            style: Style::Rows,
            levels: DEFAULT_CONTOUR_LEVELS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// What a spec asks to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Surface(Demo),
    Contour(Demo),
}

impl PanelSpec {
    /// Checks every field and reports all that fail.
    pub fn validate(&self) -> Result<Target, Vec<FieldError>> {
        let mut errs = Vec::new();
        let mut bad = |field, message: String| errs.push(FieldError { field, message });

        let target = match self.demo.strip_prefix(CONTOUR_PREFIX) {
            Some(base) => match base.parse::<Demo>() {
                Ok(d) if d.is_closed() => {
                    bad("demo", format!("'{base}' has no contour variant"));
                    None
                }
                Ok(d) => Some(Target::Contour(d)),
                Err(e) => {
                    bad("demo", e.to_string());
                    None
                }
            },
            None => match self.demo.parse::<Demo>() {
                Ok(d) => Some(Target::Surface(d)),
                Err(e) => {
                    bad("demo", e.to_string());
                    None
                }
            },
        };
        for (name, v) in [
            ("euler.phi", self.euler.phi),
            ("euler.theta", self.euler.theta),
            ("euler.psi", self.euler.psi),
        ] {
            if !v.is_finite() {
                bad(name, "must be finite".into());
            }
        }
        if !(2..=MAX_RESOLUTION).contains(&self.resolution) {
            bad(
                "resolution",
                format!("{} outside 2..={MAX_RESOLUTION}", self.resolution),
            );
        }
        if !(self.distance.is_finite() && self.distance > 0.0) {
            bad("distance", "must be finite and positive".into());
        }
        if !(1..=MAX_CONTOUR_LEVELS).contains(&self.levels) {
            bad(
                "levels",
                format!("{} outside 1..={MAX_CONTOUR_LEVELS}", self.levels),
            );
        }
        match (target, errs.is_empty()) {
            (Some(t), true) => Ok(t),
            _ => Err(errs),
        }
    }

    pub fn view(&self) -> View {
        View {
            angles: self.euler.into(),
            projection: match self.projection {
                ProjectionMode::Orthographic => Projection::Orthographic,
                ProjectionMode::Perspective => Projection::Perspective {
                    distance: self.distance,
                },
            },
            style: match self.style {
                Style::Rows => MeshStyle::Rows,
                Style::Mesh => MeshStyle::Mesh,
            },
            ..View::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("invalid panel spec: {}", join(.0))]
    Invalid(Vec<FieldError>),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

fn join(errs: &[FieldError]) -> String {
    errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

/// Renders a spec on the default page.
pub fn render_spec(spec: &PanelSpec) -> Result<DisplayList, RenderError> {
    let target = spec.validate().map_err(RenderError::Invalid)?;
    let page = PageSetup::default();
    let res = resolution(spec.resolution)?;
    Ok(match target {
        Target::Surface(d) => render_demo(d, res, &spec.view(), &page)?,
        Target::Contour(d) => render_contour_demo(d, res, spec.levels, &page)?,
    })
}
