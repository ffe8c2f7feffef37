use thiserror::Error;

use super::Point2;

/// One device-level drawing command. Coordinates are device millimeters.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotCommand {
    MoveTo(Point2),
    LineTo(Point2),
    /// A dot: pen lowered and raised in place.
    Marker(Point2),
    SelectPen(u8),
    BeginFrame(String),
    EndFrame,
}

impl PlotCommand {
    pub fn point(&self) -> Option<Point2> {
        match *self {
            PlotCommand::MoveTo(p) | PlotCommand::LineTo(p) | PlotCommand::Marker(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    /// Convention for a list without coordinates.
    pub const EMPTY: BBox = BBox {
        min: Point2::ORIGIN,
        max: Point2::ORIGIN,
    };

    pub fn of_points<I: IntoIterator<Item = Point2>>(points: I) -> BBox {
        let mut it = points.into_iter();
        let Some(first) = it.next() else {
            return BBox::EMPTY;
        };
        it.fold(BBox { min: first, max: first }, |b, p| BBox {
            min: Point2::new(b.min.x.min(p.x), b.min.y.min(p.y)),
            max: Point2::new(b.max.x.max(p.x), b.max.y.max(p.y)),
        })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DisplayListError {
    #[error("command {0}: LineTo without a current point in its frame")]
    DanglingLine(usize),
    #[error("command {0}: frames nested deeper than one level")]
    NestedFrame(usize),
    #[error("command {0}: EndFrame without BeginFrame")]
    UnbalancedEnd(usize),
    #[error("frame left open at end of list")]
    UnclosedFrame,
    #[error("command {0}: pen id {1} outside 1..=8")]
    BadPen(usize, u8),
    #[error("command {0}: non-finite coordinate")]
    NonFinite(usize),
    #[error("bounding box does not enclose command {0}")]
    BBoxMismatch(usize),
}

/// Ordered device-independent drawing commands plus their bounding box.
///
/// Lists produced by [`super::PlotContext::finalize`] always pass
/// [`DisplayList::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DisplayList {
    commands: Vec<PlotCommand>,
    bbox: BBox,
}

impl Default for DisplayList {
    fn default() -> Self {
        DisplayList {
            commands: Vec::new(),
            bbox: BBox::EMPTY,
        }
    }
}

impl DisplayList {
    /// Builds a list from raw commands, computing the bounding box. The
    /// result is not validated.
    pub fn from_commands(commands: Vec<PlotCommand>) -> Self {
        let bbox = BBox::of_points(commands.iter().filter_map(PlotCommand::point));
        DisplayList { commands, bbox }
    }

    pub fn commands(&self) -> &[PlotCommand] {
        &self.commands
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn validate(&self) -> Result<(), DisplayListError> {
        let mut in_frame = false;
        let mut has_point = false;
        for (i, cmd) in self.commands.iter().enumerate() {
            if let Some(p) = cmd.point() {
                if !p.is_finite() {
                    return Err(DisplayListError::NonFinite(i));
                }
                let b = &self.bbox;
                if p.x < b.min.x || p.x > b.max.x || p.y < b.min.y || p.y > b.max.y {
                    return Err(DisplayListError::BBoxMismatch(i));
                }
            }
            match cmd {
                PlotCommand::MoveTo(_) => has_point = true,
                PlotCommand::LineTo(_) if !has_point => {
                    return Err(DisplayListError::DanglingLine(i))
                }
                PlotCommand::LineTo(_) | PlotCommand::Marker(_) => {}
                PlotCommand::SelectPen(k) if !(1..=8).contains(k) => {
                    return Err(DisplayListError::BadPen(i, *k))
                }
                PlotCommand::SelectPen(_) => {}
                PlotCommand::BeginFrame(_) => {
                    if in_frame {
                        return Err(DisplayListError::NestedFrame(i));
                    }
                    in_frame = true;
                    has_point = false;
                }
                PlotCommand::EndFrame => {
                    if !in_frame {
                        return Err(DisplayListError::UnbalancedEnd(i));
                    }
                    in_frame = false;
                    has_point = false;
                }
            }
        }
        if in_frame {
            return Err(DisplayListError::UnclosedFrame);
        }
        Ok(())
    }

    /// Pen-down polylines traced by the list. A marker is a two-vertex
    /// polyline at one point; pen selection and frame boundaries end the
    /// current polyline.
    pub fn trajectory(&self) -> Vec<Vec<Point2>> {
        let mut out = Vec::new();
        let mut current: Vec<Point2> = Vec::new();
        let mut pos: Option<Point2> = None;
        for cmd in &self.commands {
            match *cmd {
                PlotCommand::MoveTo(p) => {
                    flush(&mut out, &mut current);
                    pos = Some(p);
                }
                PlotCommand::LineTo(p) => {
                    if current.is_empty() {
                        current.push(pos.unwrap_or(p));
                    }
                    current.push(p);
                    pos = Some(p);
                }
                PlotCommand::Marker(p) => {
                    flush(&mut out, &mut current);
                    out.push(vec![p, p]);
                    pos = Some(p);
                }
                PlotCommand::SelectPen(_) | PlotCommand::BeginFrame(_) | PlotCommand::EndFrame => {
                    flush(&mut out, &mut current);
                }
            }
        }
        flush(&mut out, &mut current);
        out
    }
}

fn flush(out: &mut Vec<Vec<Point2>>, current: &mut Vec<Point2>) {
    if !current.is_empty() {
        out.push(std::mem::take(current));
    }
}
