//! Plot sessions over HTTP.
//!
//! A session is an ordered set of up to 16 panels, each a surface or
//! contour demo with its own orientation. Every change re-renders the
//! affected panel synchronously and bumps the session revision; the
//! rendered display lists are served in a compact JSON form and can be
//! exported as HP-GL or SVG.

pub mod http;
pub mod spec;
pub mod store;
pub mod wire;

pub use http::{router, run, serve};
pub use spec::{render_spec, Euler, FieldError, PanelSpec, ProjectionMode, Style};
pub use store::{ExportFormat, Panel, ServiceError, SessionStore, Snapshot};
pub use wire::{display_list_json, revisioned_display_list_json};
