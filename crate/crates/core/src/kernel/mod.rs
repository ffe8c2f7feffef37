//! Device-independent pen kernel.
//!
//! User coordinates are abstract reals. Device coordinates are millimeters
//! measured from the lower-left corner of the drawable area of a page, with
//! y growing upward. Everything downstream of [`PlotContext`] (the display
//! list and the backends) only ever sees device millimeters.

mod clip;
mod context;
mod display_list;

pub use clip::clip_segment;
pub use context::PlotContext;
pub use display_list::{BBox, DisplayList, DisplayListError, PlotCommand};

use thiserror::Error;

/// Default drawable page: A-size landscape.
pub const DEFAULT_PAGE_WIDTH_MM: f64 = 254.0;
pub const DEFAULT_PAGE_HEIGHT_MM: f64 = 190.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlotError {
    #[error("invalid window: {0}")]
    InvalidWindow(&'static str),
    #[error("invalid coordinate ({x}, {y})")]
    InvalidCoordinate { x: f64, y: f64 },
    #[error("invalid pen code {0}; expected +-2 or +-3")]
    InvalidPenCode(i32),
    #[error("invalid factor {0}; must be finite and positive")]
    InvalidFactor(f64),
    #[error("invalid pen id {0}; expected 1..=8")]
    InvalidPen(u8),
    #[error("frame error: {0}")]
    Frame(&'static str),
    #[error("context is sealed")]
    Sealed,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

/// Axis-aligned rectangle, boundary inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub const fn new(min: Point2, max: Point2) -> Self {
        Rect { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Classic plotter pen code: 3 moves with the pen up, 2 draws with the pen
/// down. A negative code performs the move or draw and then makes the target
/// point the new user origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PenCode(i32);

impl PenCode {
    pub const DRAW: PenCode = PenCode(2);
    pub const MOVE: PenCode = PenCode(3);
    pub const DRAW_REORIGIN: PenCode = PenCode(-2);
    pub const MOVE_REORIGIN: PenCode = PenCode(-3);

    pub fn new(code: i32) -> Result<Self, PlotError> {
        match code.abs() {
            2 | 3 => Ok(PenCode(code)),
            _ => Err(PlotError::InvalidPenCode(code)),
        }
    }

    pub fn code(self) -> i32 {
        self.0
    }

    pub fn is_draw(self) -> bool {
        self.0.abs() == 2
    }

    pub fn reorigins(self) -> bool {
        self.0 < 0
    }
}

impl TryFrom<i32> for PenCode {
    type Error = PlotError;

    fn try_from(code: i32) -> Result<Self, Self::Error> {
        PenCode::new(code)
    }
}

/// Maps a user-space rectangle onto a device rectangle in millimeters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub user: Rect,
    pub device: Rect,
}

impl Window {
    pub fn new(user: Rect, device: Rect) -> Result<Self, PlotError> {
        let w = Window { user, device };
        w.validate()?;
        Ok(w)
    }

    /// User rectangle mapped onto the whole default drawable page.
    pub fn on_default_page(user: Rect) -> Result<Self, PlotError> {
        Window::new(
            user,
            Rect::new(
                Point2::ORIGIN,
                Point2::new(DEFAULT_PAGE_WIDTH_MM, DEFAULT_PAGE_HEIGHT_MM),
            ),
        )
    }

    pub fn validate(&self) -> Result<(), PlotError> {
        let finite = [self.user.min, self.user.max, self.device.min, self.device.max]
            .iter()
            .all(|p| p.is_finite());
        if !finite {
            return Err(PlotError::InvalidWindow("non-finite corner"));
        }
        if !(self.user.max.x > self.user.min.x && self.user.max.y > self.user.min.y) {
            return Err(PlotError::InvalidWindow("user rectangle has no area"));
        }
        if !(self.device.max.x > self.device.min.x && self.device.max.y > self.device.min.y) {
            return Err(PlotError::InvalidWindow("device rectangle has no area"));
        }
        Ok(())
    }
}

/// Affine user-to-device map. The effective user point is
/// `origin + factor * p`, which is then carried from the user rectangle onto
/// the device rectangle componentwise.
pub fn user_to_device(window: &Window, factor: f64, origin: Point2, p: Point2) -> Point2 {
    let u = Point2::new(origin.x + factor * p.x, origin.y + factor * p.y);
    let (user, dev) = (&window.user, &window.device);
    Point2::new(
        dev.min.x + (u.x - user.min.x) / user.width() * dev.width(),
        dev.min.y + (u.y - user.min.y) / user.height() * dev.height(),
    )
}
