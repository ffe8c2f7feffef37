//! Pen-plotter graphics toolkit.
//!
//! The [`kernel`] turns user-space pen motions into a clipped device
//! [`DisplayList`]. Renderers in [`surface`] and [`contour`] emit into a
//! [`PlotContext`]; [`backend`] serializes finished lists to HP-GL and SVG;
//! [`dmpl`] translates Houston Instrument DM/PL programs to HP-GL.

pub mod backend;
pub mod contour;
pub mod dmpl;
pub mod expr;
pub mod kernel;
mod math;
pub mod scene;
pub mod surface;

pub use kernel::{
    clip_segment, user_to_device, BBox, DisplayList, PenCode, PlotCommand, PlotContext, PlotError,
    Point2, Rect, Window,
};
