//! Serializers from a [`DisplayList`](crate::DisplayList) to plotter and
//! display formats.

mod hpgl;
mod svg;

pub use hpgl::{
    emit_hpgl, interpret_hpgl, HpglDocument, HpglWriter, InterpretError, PLOTTER_UNITS_PER_MM,
    PLOTTER_UNIT_MAX,
};
pub use svg::{emit_svg, PEN_COLORS, STROKE_WIDTH_MM};

use thiserror::Error;

use crate::kernel::{Point2, Rect, DEFAULT_PAGE_HEIGHT_MM, DEFAULT_PAGE_WIDTH_MM};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("page setup invalid: {0}")]
    InvalidPage(&'static str),
    #[error("drawing extent ({x0:.3}, {y0:.3})-({x1:.3}, {y1:.3}) mm exceeds the drawable area {width:.3} x {height:.3} mm")]
    PageOverflow {
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
        width: f64,
        height: f64,
    },
    #[error("plotter coordinate ({0}, {1}) outside 0..=32767")]
    CoordinateRange(i64, i64),
}

/// Physical page. Device millimeters start at the lower-left corner of the
/// drawable area, `margin_mm` in from the paper edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageSetup {
    pub width_mm: f64,
    pub height_mm: f64,
    pub margin_mm: f64,
}

impl Default for PageSetup {
    fn default() -> Self {
        PageSetup {
            width_mm: DEFAULT_PAGE_WIDTH_MM,
            height_mm: DEFAULT_PAGE_HEIGHT_MM,
            margin_mm: 5.0,
        }
    }
}

impl PageSetup {
    pub fn new(width_mm: f64, height_mm: f64, margin_mm: f64) -> Result<Self, BackendError> {
        let page = PageSetup {
            width_mm,
            height_mm,
            margin_mm,
        };
        page.validate()?;
        Ok(page)
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        if !(self.width_mm.is_finite() && self.height_mm.is_finite() && self.margin_mm.is_finite())
        {
            return Err(BackendError::InvalidPage("non-finite dimension"));
        }
        if self.margin_mm < 0.0 {
            return Err(BackendError::InvalidPage("negative margin"));
        }
        if !(self.drawable_width() > 0.0 && self.drawable_height() > 0.0) {
            return Err(BackendError::InvalidPage("no drawable area inside the margins"));
        }
        Ok(())
    }

    pub fn drawable_width(&self) -> f64 {
        self.width_mm - 2.0 * self.margin_mm
    }

    pub fn drawable_height(&self) -> f64 {
        self.height_mm - 2.0 * self.margin_mm
    }

    /// Drawable area in device millimeters.
    pub fn drawable(&self) -> Rect {
        Rect::new(
            Point2::ORIGIN,
            Point2::new(self.drawable_width(), self.drawable_height()),
        )
    }
}

/// Formats with three decimals, never printing a negative zero.
pub(crate) fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_owned()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_page() {
        let p = PageSetup::default();
        assert_eq!((p.width_mm, p.height_mm, p.margin_mm), (254.0, 190.5, 5.0));
        assert_eq!(p.drawable().max, Point2::new(244.0, 180.5));
    }

    #[test]
    fn invalid_pages() {
        assert!(PageSetup::new(10.0, 10.0, 5.0).is_err());
        assert!(PageSetup::new(10.0, 10.0, -1.0).is_err());
        assert!(PageSetup::new(f64::NAN, 10.0, 0.0).is_err());
    }

    #[test]
    fn three_decimals() {
        assert_eq!(fmt3(-0.0001), "0.000");
        assert_eq!(fmt3(1.5), "1.500");
        assert_eq!(fmt3(-2.25), "-2.250");
    }
}
