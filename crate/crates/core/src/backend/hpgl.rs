use std::fmt;

use thiserror::Error;

use super::{BackendError, PageSetup};
use crate::kernel::{DisplayList, PlotCommand, Point2};

pub const PLOTTER_UNITS_PER_MM: f64 = 40.0;
pub const PLOTTER_UNIT_MAX: i64 = 32767;

/// Overflow checks allow this much float noise past the drawable edge.
const EDGE_SLACK_MM: f64 = 1e-9;

/// An HP-GL program as `;`-terminated statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpglDocument {
    statements: Vec<String>,
}

impl HpglDocument {
    pub fn statements(&self) -> &[String] {
        &self.statements
    }

    /// All statements run together, as a plotter would receive them.
    pub fn compact(&self) -> String {
        self.statements.concat()
    }

    /// One statement per line; the on-disk `.hpgl` form.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for st in &self.statements {
            s.push_str(st);
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for HpglDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verb {
    Up,
    Down,
}

/// Builds an [`HpglDocument`], coalescing consecutive PU (or PD) moves into
/// one statement.
#[derive(Debug, Clone)]
pub struct HpglWriter {
    statements: Vec<String>,
    pending: Option<(Verb, Vec<(i64, i64)>)>,
}

impl Default for HpglWriter {
    fn default() -> Self {
        Self::new()
    }
}

impl HpglWriter {
    /// Starts with the `IN;SP1;` prologue.
    pub fn new() -> Self {
        HpglWriter {
            statements: vec!["IN;".into(), "SP1;".into()],
            pending: None,
        }
    }

    fn flush(&mut self) {
        if let Some((verb, coords)) = self.pending.take() {
            let mut s = String::from(match verb {
                Verb::Up => "PU",
                Verb::Down => "PD",
            });
            for (k, (x, y)) in coords.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&format!("{x},{y}"));
            }
            s.push(';');
            self.statements.push(s);
        }
    }

    fn push_move(&mut self, verb: Verb, x: i64, y: i64) -> Result<(), BackendError> {
        if !(0..=PLOTTER_UNIT_MAX).contains(&x) || !(0..=PLOTTER_UNIT_MAX).contains(&y) {
            return Err(BackendError::CoordinateRange(x, y));
        }
        match &mut self.pending {
            Some((v, coords)) if *v == verb => coords.push((x, y)),
            _ => {
                self.flush();
                self.pending = Some((verb, vec![(x, y)]));
            }
        }
        Ok(())
    }

    pub fn pen_up(&mut self, x: i64, y: i64) -> Result<(), BackendError> {
        self.push_move(Verb::Up, x, y)
    }

    pub fn pen_down(&mut self, x: i64, y: i64) -> Result<(), BackendError> {
        self.push_move(Verb::Down, x, y)
    }

    pub fn select_pen(&mut self, pen: u8) {
        self.flush();
        self.statements.push(format!("SP{pen};"));
    }

    /// Re-initializes the plotter mid-document.
    pub fn initialize(&mut self) {
        self.flush();
        self.statements.push("IN;".into());
        self.statements.push("SP1;".into());
    }

    /// Appends the `PU;SP0;` epilogue.
    pub fn finish(mut self) -> HpglDocument {
        self.flush();
        self.statements.push("PU;".into());
        self.statements.push("SP0;".into());
        HpglDocument {
            statements: self.statements,
        }
    }
}

fn to_units(mm: f64, margin: f64) -> i64 {
    ((mm + margin) * PLOTTER_UNITS_PER_MM).round() as i64
}

/// Serializes a display list for a 40 units/mm plotter. Lists that do not
/// fit the drawable area are rejected, never rescaled.
pub fn emit_hpgl(dl: &DisplayList, page: &PageSetup) -> Result<HpglDocument, BackendError> {
    page.validate()?;
    if dl.commands().iter().any(|c| c.point().is_some()) {
        let b = dl.bbox();
        let (w, h) = (page.drawable_width(), page.drawable_height());
        if b.min.x < -EDGE_SLACK_MM
            || b.min.y < -EDGE_SLACK_MM
            || b.max.x > w + EDGE_SLACK_MM
            || b.max.y > h + EDGE_SLACK_MM
        {
            return Err(BackendError::PageOverflow {
                x0: b.min.x,
                y0: b.min.y,
                x1: b.max.x,
                y1: b.max.y,
                width: w,
                height: h,
            });
        }
    }
    let m = page.margin_mm;
    let mut w = HpglWriter::new();
    for cmd in dl.commands() {
        match *cmd {
            PlotCommand::MoveTo(p) => w.pen_up(to_units(p.x, m), to_units(p.y, m))?,
            PlotCommand::LineTo(p) => w.pen_down(to_units(p.x, m), to_units(p.y, m))?,
            PlotCommand::Marker(p) => {
                let (x, y) = (to_units(p.x, m), to_units(p.y, m));
                w.pen_up(x, y)?;
                w.pen_down(x, y)?;
            }
            PlotCommand::SelectPen(k) => w.select_pen(k),
            PlotCommand::BeginFrame(_) | PlotCommand::EndFrame => {}
        }
    }
    Ok(w.finish())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpretError {
    #[error("statement {index}: unsupported instruction {mnemonic:?}")]
    Unsupported { index: usize, mnemonic: String },
    #[error("statement {index}: bad parameter {text:?}")]
    BadParameter { index: usize, text: String },
    #[error("statement {index}: odd number of coordinates")]
    OddCoordinates { index: usize },
}

/// Replays an HP-GL program (IN, SP, PU, PD, PA) and returns its pen-down
/// polylines in device millimeters, i.e. with `margin_mm` removed.
///
/// Independent of [`HpglWriter`]; used to check emitted documents.
pub fn interpret_hpgl(text: &str, margin_mm: f64) -> Result<Vec<Vec<Point2>>, InterpretError> {
    let mut out: Vec<Vec<Point2>> = Vec::new();
    let mut current: Vec<Point2> = Vec::new();
    let mut pos = Point2::ORIGIN;
    let mut down = false;

    let to_mm = |u: f64| u / PLOTTER_UNITS_PER_MM - margin_mm;

    for (index, raw) in text.split(';').enumerate() {
        let st: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if st.is_empty() {
            continue;
        }
        let cut = st.char_indices().nth(2).map_or(st.len(), |(i, _)| i);
        let (mnemonic, params) = st.split_at(cut);
        let mnemonic = mnemonic.to_ascii_uppercase();
        if !matches!(mnemonic.as_str(), "IN" | "SP" | "PU" | "PD" | "PA") {
            return Err(InterpretError::Unsupported { index, mnemonic });
        }
        let values = if params.is_empty() {
            Vec::new()
        } else {
            params
                .split(',')
                .map(|t| {
                    t.parse::<f64>().map_err(|_| InterpretError::BadParameter {
                        index,
                        text: t.to_owned(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        match mnemonic.as_str() {
            "IN" => {
                down = false;
                end_polyline(&mut out, &mut current);
            }
            "SP" => end_polyline(&mut out, &mut current),
            "PU" | "PD" | "PA" => {
                if values.len() % 2 != 0 {
                    return Err(InterpretError::OddCoordinates { index });
                }
                match mnemonic.as_str() {
                    "PU" => down = false,
                    "PD" => down = true,
                    _ => {}
                }
                if !down {
                    end_polyline(&mut out, &mut current);
                }
                for pair in values.chunks(2) {
                    let p = Point2::new(to_mm(pair[0]), to_mm(pair[1]));
                    if down {
                        if current.is_empty() {
                            current.push(pos);
                        }
                        current.push(p);
                    }
                    pos = p;
                }
            }
            _ => {
                return Err(InterpretError::Unsupported {
                    index,
                    mnemonic: mnemonic.to_owned(),
                })
            }
        }
    }
    end_polyline(&mut out, &mut current);
    Ok(out)
}

fn end_polyline(out: &mut Vec<Vec<Point2>>, current: &mut Vec<Point2>) {
    if !current.is_empty() {
        out.push(std::mem::take(current));
    }
}
