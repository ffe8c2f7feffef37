use super::{
    clip_segment, user_to_device, DisplayList, PenCode, PlotCommand, PlotError, Point2, Window,
};

/// Mutable pen state that accumulates a [`DisplayList`].
///
/// Single owner; build one context per drawing and call [`finalize`] once.
///
/// [`finalize`]: PlotContext::finalize
#[derive(Debug, Clone)]
pub struct PlotContext {
    window: Window,
    factor: f64,
    origin: Point2,
    /// Unclipped device position of the pen.
    pen: Point2,
    pen_down: bool,
    /// Where the pen sits in the emitted list, if a LineTo may continue from it.
    emitted: Option<Point2>,
    commands: Vec<PlotCommand>,
    in_frame: bool,
    sealed: bool,
}

impl PlotContext {
    pub fn new(window: Window) -> Result<Self, PlotError> {
        window.validate()?;
        let pen = user_to_device(&window, 1.0, Point2::ORIGIN, Point2::ORIGIN);
        Ok(PlotContext {
            window,
            factor: 1.0,
            origin: Point2::ORIGIN,
            pen,
            pen_down: false,
            emitted: None,
            commands: Vec::new(),
            in_frame: false,
            sealed: false,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    /// Current user origin, in unscaled user units.
    pub fn origin_offset(&self) -> Point2 {
        self.origin
    }

    /// Device position of the pen, before clipping.
    pub fn pen_position(&self) -> Point2 {
        self.pen
    }

    pub fn is_pen_down(&self) -> bool {
        self.pen_down
    }

    pub fn is_sealed(&self) -> bool {
        self.sealed
    }

    fn check_open(&self) -> Result<(), PlotError> {
        if self.sealed {
            Err(PlotError::Sealed)
        } else {
            Ok(())
        }
    }

    pub fn to_device(&self, p: Point2) -> Point2 {
        user_to_device(&self.window, self.factor, self.origin, p)
    }

    /// Moves (|code| = 3) or draws (|code| = 2) to user point `(x, y)`.
    /// Negative codes make `(x, y)` the new user origin afterwards.
    pub fn plot(&mut self, x: f64, y: f64, code: i32) -> Result<(), PlotError> {
        self.check_open()?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(PlotError::InvalidCoordinate { x, y });
        }
        let code = PenCode::new(code)?;
        let target = self.to_device(Point2::new(x, y));
        if !target.is_finite() {
            return Err(PlotError::InvalidCoordinate { x, y });
        }

        if code.is_draw() {
            self.draw_device(target);
        } else {
            self.move_device(target);
        }
        self.pen = target;
        self.pen_down = code.is_draw();

        if code.reorigins() {
            self.origin = Point2::new(
                self.origin.x + self.factor * x,
                self.origin.y + self.factor * y,
            );
        }
        Ok(())
    }

    pub fn move_to(&mut self, x: f64, y: f64) -> Result<(), PlotError> {
        self.plot(x, y, PenCode::MOVE.code())
    }

    pub fn line_to(&mut self, x: f64, y: f64) -> Result<(), PlotError> {
        self.plot(x, y, PenCode::DRAW.code())
    }

    /// Dots the paper at `(x, y)`.
    pub fn mark(&mut self, x: f64, y: f64) -> Result<(), PlotError> {
        self.move_to(x, y)?;
        self.line_to(x, y)
    }

    fn move_device(&mut self, target: Point2) {
        if self.window.device.contains(target) {
            if self.emitted != Some(target) {
                self.push_move(target);
            }
            self.emitted = Some(target);
        } else {
            self.emitted = None;
        }
    }

    fn draw_device(&mut self, target: Point2) {
        let device = self.window.device;
        if target == self.pen {
            if device.contains(target) {
                if self.commands.last() == Some(&PlotCommand::MoveTo(target)) {
                    self.commands.pop();
                }
                self.commands.push(PlotCommand::Marker(target));
            }
            self.emitted = None;
            return;
        }
        let Some((a, b)) = clip_segment(self.pen, target, &device) else {
            self.emitted = None;
            return;
        };
        if self.emitted != Some(a) {
            self.push_move(a);
        }
        if a == b {
            // Segment grazes a corner.
            if let Some(PlotCommand::MoveTo(_)) = self.commands.last() {
                self.commands.pop();
            }
            self.commands.push(PlotCommand::Marker(a));
            self.emitted = None;
            return;
        }
        self.commands.push(PlotCommand::LineTo(b));
        self.emitted = Some(b);
    }

    fn push_move(&mut self, p: Point2) {
        if let Some(PlotCommand::MoveTo(last)) = self.commands.last_mut() {
            *last = p;
        } else {
            self.commands.push(PlotCommand::MoveTo(p));
        }
    }

    /// Scales subsequent user coordinates by `s` about the current origin.
    pub fn set_factor(&mut self, s: f64) -> Result<(), PlotError> {
        self.check_open()?;
        if !(s.is_finite() && s > 0.0) {
            return Err(PlotError::InvalidFactor(s));
        }
        self.factor = s;
        Ok(())
    }

    pub fn select_pen(&mut self, pen: u8) -> Result<(), PlotError> {
        self.check_open()?;
        if !(1..=8).contains(&pen) {
            return Err(PlotError::InvalidPen(pen));
        }
        self.commands.push(PlotCommand::SelectPen(pen));
        Ok(())
    }

    pub fn begin_frame(&mut self, name: &str) -> Result<(), PlotError> {
        self.check_open()?;
        if self.in_frame {
            return Err(PlotError::Frame("frames cannot nest"));
        }
        self.in_frame = true;
        self.emitted = None;
        self.commands.push(PlotCommand::BeginFrame(name.to_owned()));
        Ok(())
    }

    pub fn end_frame(&mut self) -> Result<(), PlotError> {
        self.check_open()?;
        if !self.in_frame {
            return Err(PlotError::Frame("no open frame"));
        }
        self.in_frame = false;
        self.emitted = None;
        self.commands.push(PlotCommand::EndFrame);
        Ok(())
    }

    /// Seals the context and hands back the accumulated list. An open frame
    /// is closed first.
    pub fn finalize(&mut self) -> Result<DisplayList, PlotError> {
        self.check_open()?;
        if self.in_frame {
            self.commands.push(PlotCommand::EndFrame);
            self.in_frame = false;
        }
        self.sealed = true;
        Ok(DisplayList::from_commands(std::mem::take(&mut self.commands)))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BBox, Rect};
    use super::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Rect {
        Rect::new(Point2::new(x0, y0), Point2::new(x1, y1))
    }

    fn identity() -> PlotContext {
        let r = rect(0.0, 0.0, 100.0, 100.0);
        PlotContext::new(Window::new(r, r).unwrap()).unwrap()
    }

    #[test]
    fn fresh_context() {
        let w = Window::new(rect(0.0, 0.0, 1.0, 1.0), rect(0.0, 0.0, 100.0, 100.0)).unwrap();
        let mut ctx = PlotContext::new(w).unwrap();
        assert_eq!(ctx.pen_position(), Point2::ORIGIN);
        assert!(!ctx.is_pen_down());
        assert_eq!(ctx.factor(), 1.0);
        assert_eq!(ctx.origin_offset(), Point2::ORIGIN);
        let dl = ctx.finalize().unwrap();
        assert!(dl.is_empty());
        assert_eq!(dl.bbox(), BBox::EMPTY);
    }

    #[test]
    fn move_then_draw() {
        let mut ctx = identity();
        ctx.plot(1.0, 2.0, 3).unwrap();
        ctx.plot(3.0, 4.0, 2).unwrap();
        let dl = ctx.finalize().unwrap();
        assert_eq!(
            dl.commands(),
            &[
                PlotCommand::MoveTo(Point2::new(1.0, 2.0)),
                PlotCommand::LineTo(Point2::new(3.0, 4.0))
            ]
        );
    }

    #[test]
    fn reorigin_shifts_later_points() {
        let mut ctx = identity();
        ctx.plot(5.0, 5.0, -3).unwrap();
        ctx.plot(1.0, 0.0, 2).unwrap();
        assert_eq!(ctx.pen_position(), Point2::new(6.0, 5.0));
        let dl = ctx.finalize().unwrap();
        assert_eq!(dl.commands()[1], PlotCommand::LineTo(Point2::new(6.0, 5.0)));
    }

    #[test]
    fn bad_inputs() {
        let mut ctx = identity();
        assert_eq!(ctx.plot(0.0, 0.0, 7), Err(PlotError::InvalidPenCode(7)));
        assert!(matches!(
            ctx.plot(f64::NAN, 0.0, 3),
            Err(PlotError::InvalidCoordinate { .. })
        ));
        assert_eq!(ctx.set_factor(0.0), Err(PlotError::InvalidFactor(0.0)));
        assert!(ctx.set_factor(f64::INFINITY).is_err());
        assert_eq!(ctx.select_pen(0), Err(PlotError::InvalidPen(0)));
    }

    #[test]
    fn factor_scales_about_origin() {
        let mut ctx = identity();
        ctx.set_factor(1.0).unwrap();
        ctx.plot(1.5, 2.5, 3).unwrap();
        assert_eq!(ctx.pen_position(), Point2::new(1.5, 2.5));
        ctx.set_factor(2.0).unwrap();
        ctx.plot(1.0, 1.0, 3).unwrap();
        assert_eq!(ctx.pen_position(), Point2::new(2.0, 2.0));
    }

    #[test]
    fn zero_length_draw_is_marker() {
        let mut ctx = identity();
        ctx.plot(4.0, 4.0, 3).unwrap();
        ctx.plot(4.0, 4.0, 2).unwrap();
        let dl = ctx.finalize().unwrap();
        assert_eq!(dl.commands(), &[PlotCommand::Marker(Point2::new(4.0, 4.0))]);
        dl.validate().unwrap();
    }

    #[test]
    fn draws_are_clipped() {
        let mut ctx = identity();
        ctx.plot(-50.0, 50.0, 3).unwrap();
        ctx.plot(150.0, 50.0, 2).unwrap();
        ctx.plot(150.0, 60.0, 2).unwrap();
        ctx.plot(50.0, 60.0, 2).unwrap();
        let dl = ctx.finalize().unwrap();
        assert_eq!(
            dl.commands(),
            &[
                PlotCommand::MoveTo(Point2::new(0.0, 50.0)),
                PlotCommand::LineTo(Point2::new(100.0, 50.0)),
                PlotCommand::MoveTo(Point2::new(100.0, 60.0)),
                PlotCommand::LineTo(Point2::new(50.0, 60.0)),
            ]
        );
        dl.validate().unwrap();
    }

    #[test]
    fn sealed_after_finalize() {
        let mut ctx = identity();
        ctx.begin_frame("f").unwrap();
        ctx.plot(1.0, 1.0, 3).unwrap();
        let dl = ctx.finalize().unwrap();
        assert_eq!(dl.commands().last(), Some(&PlotCommand::EndFrame));
        dl.validate().unwrap();
        assert_eq!(ctx.plot(1.0, 1.0, 3), Err(PlotError::Sealed));
        assert_eq!(ctx.finalize(), Err(PlotError::Sealed));
    }

    #[test]
    fn frames_do_not_nest() {
        let mut ctx = identity();
        ctx.begin_frame("a").unwrap();
        assert!(matches!(ctx.begin_frame("b"), Err(PlotError::Frame(_))));
        ctx.end_frame().unwrap();
        assert!(matches!(ctx.end_frame(), Err(PlotError::Frame(_))));
    }
}
