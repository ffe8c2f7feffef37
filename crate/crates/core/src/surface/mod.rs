//! Three-dimensional surfaces under Euler-angle orientation.
//!
//! Scalar grids z = f(x, y) are drawn with a floating-horizon hidden-line
//! pass ([`render_rect_surface`]); closed parametric grids are drawn with
//! back-face culling ([`render_closed_surface`]).

mod closed;
mod grid;
mod horizon;

pub use closed::{render_closed_surface, ClosedSurfaceReport, Facet};
pub use grid::{sample_parametric, sample_scalar, ParametricGrid, Resolution, ScalarGrid};
pub use horizon::{
    render_rect_surface, HorizonBuffer, HorizonReport, MeshStyle, PointKind, RectSurfaceOptions,
    RunSource, SurfacePoint, VisibleRun, DEFAULT_HORIZON_WIDTH,
};

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
use std::ops::Mul;

use thiserror::Error;

use crate::kernel::{PlotError, Point2};
use crate::math;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("resolution {0} below the minimum of 2 samples per axis")]
    Resolution(usize),
    #[error("degenerate sampling range [{0}, {1}]")]
    DegenerateRange(f64, f64),
    #[error("function is not finite at ({x}, {y})")]
    NonFiniteSample { x: f64, y: f64 },
    #[error("grid shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite Euler angle")]
    NonFiniteAngle,
    #[error("perspective distance must be positive, got {0}")]
    BadDistance(f64),
    #[error("point with rotated depth {depth} is behind the eye at distance {distance}")]
    BehindEye { depth: f64, distance: f64 },
    #[error("horizon width must be at least 2 columns")]
    HorizonWidth,
    #[error(transparent)]
    Plot(#[from] PlotError),
}

/// Z-X-Z Euler angles in radians, kept exactly as given.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub const fn new(phi: f64, theta: f64, psi: f64) -> Self {
        EulerAngles { phi, theta, psi }
    }

    pub fn from_degrees(phi: f64, theta: f64, psi: f64) -> Self {
        EulerAngles::new(phi.to_radians(), theta.to_radians(), psi.to_radians())
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.theta.is_finite() && self.psi.is_finite()
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat3) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..3 {
            for c in 0..3 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        worst
    }
}

impl Mul for Mat3 {
    type Output = Mat3;

    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        Mat3(out)
    }
}

/// `R = Rz(phi) * Rx(theta) * Rz(psi)`, written out in closed form.
pub fn rotation_matrix(e: EulerAngles) -> Mat3 {
    let (s1, c1) = (math::sin(e.phi), math::cos(e.phi));
    let (s2, c2) = (math::sin(e.theta), math::cos(e.theta));
    let (s3, c3) = (math::sin(e.psi), math::cos(e.psi));
    Mat3([
        [c1 * c3 - c2 * s1 * s3, -c1 * s3 - c2 * c3 * s1, s1 * s2],
        [c3 * s1 + c1 * c2 * s3, c1 * c2 * c3 - s1 * s3, -c1 * s2],
        [s2 * s3, c3 * s2, c2],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Projection {
    #[default]
    Orthographic,
    /// Eye on the +z axis at `distance` from the origin.
    Perspective { distance: f64 },
}

/// A point after rotation and projection. Larger `depth` is nearer the viewer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projected {
    pub point: Point2,
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewTransform {
    pub rotation: Mat3,
    pub projection: Projection,
}

impl ViewTransform {
    pub fn new(angles: EulerAngles, projection: Projection) -> Result<Self, SurfaceError> {
        if !angles.is_finite() {
            return Err(SurfaceError::NonFiniteAngle);
        }
        if let Projection::Perspective { distance } = projection {
            if !(distance.is_finite() && distance > 0.0) {
                return Err(SurfaceError::BadDistance(distance));
            }
        }
        Ok(ViewTransform {
            rotation: rotation_matrix(angles),
            projection,
        })
    }

    pub fn project(&self, p: [f64; 3]) -> Result<Projected, SurfaceError> {
        let q = self.rotation.apply(p);
        match self.projection {
            Projection::Orthographic => Ok(Projected {
                point: Point2::new(q[0], q[1]),
                depth: q[2],
            }),
            Projection::Perspective { distance } => {
                if q[2] >= distance {
                    return Err(SurfaceError::BehindEye {
                        depth: q[2],
                        distance,
                    });
                }
                let s = distance / (distance - q[2]);
                Ok(Projected {
                    point: Point2::new(q[0] * s, q[1] * s),
                    depth: q[2],
                })
            }
        }
    }
}

/// Conventional oblique view used when nothing else is specified.
pub fn default_view() -> (EulerAngles, Projection) {
    (
        EulerAngles::new(-FRAC_PI_4, -FRAC_PI_3, 0.0),
        Projection::Orthographic,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn identity_at_zero() {
        let r = rotation_matrix(EulerAngles::default());
        assert_eq!(r.max_abs_diff(&Mat3::IDENTITY), 0.0);
    }

    #[test]
    fn quarter_turn_about_z() {
        let r = rotation_matrix(EulerAngles::new(FRAC_PI_2, 0.0, 0.0));
        let v = r.apply([1.0, 0.0, 0.0]);
        assert!(v[0].abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15 && v[2].abs() < 1e-15);
    }

    #[test]
    fn default_view_constant() {
        let (e, p) = default_view();
        assert_eq!(e, EulerAngles::new(-FRAC_PI_4, -FRAC_PI_3, 0.0));
        assert_eq!(p, Projection::Orthographic);
        let r = rotation_matrix(e);
        assert!((r.transpose() * r).max_abs_diff(&Mat3::IDENTITY) < 1e-12);
    }

    #[test]
    fn projections() {
        let ortho = ViewTransform::new(EulerAngles::default(), Projection::Orthographic).unwrap();
        let p = ortho.project([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.point, Point2::new(1.0, 2.0));
        assert_eq!(p.depth, 3.0);

        let persp = ViewTransform::new(
            EulerAngles::default(),
            Projection::Perspective { distance: 10.0 },
        )
        .unwrap();
        assert_eq!(persp.project([1.0, 0.0, 0.0]).unwrap().point, Point2::new(1.0, 0.0));
        // 10 / (10 - 5) = 2
        assert_eq!(persp.project([1.0, 0.0, 5.0]).unwrap().point, Point2::new(2.0, 0.0));
        assert!(matches!(
            persp.project([0.0, 0.0, 10.0]),
            Err(SurfaceError::BehindEye { .. })
        ));
    }

    #[test]
    fn bad_views() {
        assert_eq!(
            ViewTransform::new(EulerAngles::default(), Projection::Perspective { distance: 0.0 }),
            Err(SurfaceError::BadDistance(0.0))
        );
        assert_eq!(
            ViewTransform::new(EulerAngles::new(f64::NAN, 0.0, 0.0), Projection::Orthographic),
            Err(SurfaceError::NonFiniteAngle)
        );
    }
}
