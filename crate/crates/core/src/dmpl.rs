//! Houston Instrument DM/PL to HP-GL translation.
//!
//! Accepted grammar (whitespace separates commands and is otherwise
//! ignored; it may not appear inside a command):
//!
//! ```text
//! program  := ws* init (ws* command)* ws*
//! init     := ";:"
//! command  := init | "U" | "D" | "H" | "P" digit | int "," int
//! ```
//!
//! `U`/`D` set the pen state applied by later coordinate pairs, `P` selects
//! pen 1-8, `H` lifts the pen and returns to the origin. Anything else,
//! including relative moves and speed commands, is rejected with its byte
//! offset.

use std::ops::Range;

use thiserror::Error;

use crate::backend::{HpglDocument, HpglWriter, PageSetup, PLOTTER_UNITS_PER_MM, PLOTTER_UNIT_MAX};
use crate::kernel::Point2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DmplError {
    #[error("program does not start with the ';:' initialize command")]
    MissingInit,
    #[error("byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("byte {offset}: pen {pen} outside 1..=8")]
    PenRange { offset: usize, pen: u8 },
    #[error("byte {offset}: unknown command byte {byte:#04x}")]
    Unknown { offset: usize, byte: u8 },
    #[error("bytes {}..{}: translated point ({x}, {y}) falls outside the plotter range", span.start, span.end)]
    PageOverflow { span: Range<usize>, x: i64, y: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmpCommand {
    Init,
    PenUp,
    PenDown,
    MoveAbs { x: u32, y: u32 },
    SelectPen(u8),
    Home,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmpProgram {
    commands: Vec<DmpCommand>,
    spans: Vec<Range<usize>>,
}

impl DmpProgram {
    /// Builds a program directly; the first command must be `Init`. Spans
    /// refer to the text produced by [`DmpProgram::to_source`].
    pub fn from_commands(commands: Vec<DmpCommand>) -> Result<Self, DmplError> {
        if commands.first() != Some(&DmpCommand::Init) {
            return Err(DmplError::MissingInit);
        }
        for c in &commands {
            if let DmpCommand::SelectPen(k) = c {
                if !(1..=8).contains(k) {
                    return Err(DmplError::PenRange { offset: 0, pen: *k });
                }
            }
        }
        let mut spans = Vec::with_capacity(commands.len());
        let mut at = 0;
        let mut prev_move = false;
        for c in &commands {
            let is_move = matches!(c, DmpCommand::MoveAbs { .. });
            if is_move && prev_move {
                at += 1;
            }
            let len = c.to_string().len();
            spans.push(at..at + len);
            at += len;
            prev_move = is_move;
        }
        Ok(DmpProgram { commands, spans })
    }

    pub fn commands(&self) -> &[DmpCommand] {
        &self.commands
    }

    pub fn source_spans(&self) -> &[Range<usize>] {
        &self.spans
    }

    /// Canonical source text (no separators needed between commands except
    /// between two coordinate pairs).
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        let mut prev_move = false;
        for c in &self.commands {
            let is_move = matches!(c, DmpCommand::MoveAbs { .. });
            if is_move && prev_move {
                s.push(' ');
            }
            s.push_str(&c.to_string());
            prev_move = is_move;
        }
        s
    }
}

impl std::fmt::Display for DmpCommand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DmpCommand::Init => f.write_str(";:"),
            DmpCommand::PenUp => f.write_str("U"),
            DmpCommand::PenDown => f.write_str("D"),
            DmpCommand::MoveAbs { x, y } => write!(f, "{x},{y}"),
            DmpCommand::SelectPen(k) => write!(f, "P{k}"),
            DmpCommand::Home => f.write_str("H"),
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<u32, DmplError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(DmplError::Parse {
                offset: start,
                message: "expected a coordinate".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(DmplError::Parse {
                offset: start,
                message: "coordinate too large".into(),
            })
    }
}

pub fn parse_dmp(text: &str) -> Result<DmpProgram, DmplError> {
    parse_dmp_bytes(text.as_bytes())
}

pub fn parse_dmp_bytes(bytes: &[u8]) -> Result<DmpProgram, DmplError> {
    let mut cur = Cursor { bytes, pos: 0 };
    let mut commands = Vec::new();
    let mut spans = Vec::new();

    cur.skip_ws();
    if !bytes[cur.pos..].starts_with(b";:") {
        return Err(DmplError::MissingInit);
    }

    loop {
        cur.skip_ws();
        let start = cur.pos;
        let Some(b) = cur.peek() else {
            break;
        };
        let cmd = match b {
            b';' => {
                if bytes.get(start + 1) != Some(&b':') {
                    return Err(DmplError::Parse {
                        offset: start + 1,
                        message: "expected ':' after ';'".into(),
                    });
                }
                cur.pos += 2;
                DmpCommand::Init
            }
            b'U' => {
                cur.pos += 1;
                DmpCommand::PenUp
            }
            b'D' => {
                cur.pos += 1;
                DmpCommand::PenDown
            }
            b'H' => {
                cur.pos += 1;
                DmpCommand::Home
            }
            b'P' => {
                let at = start + 1;
                match bytes.get(at) {
                    Some(d) if d.is_ascii_digit() => {
                        let pen = d - b'0';
                        if !(1..=8).contains(&pen) {
                            return Err(DmplError::PenRange { offset: at, pen });
                        }
                        cur.pos += 2;
                        DmpCommand::SelectPen(pen)
                    }
                    _ => {
                        return Err(DmplError::Parse {
                            offset: at,
                            message: "expected a pen digit after 'P'".into(),
                        })
                    }
                }
            }
            b'0'..=b'9' => {
                let x = cur.integer()?;
                if cur.peek() != Some(b',') {
                    return Err(DmplError::Parse {
                        offset: cur.pos,
                        message: "expected ',' in coordinate pair".into(),
                    });
                }
                cur.pos += 1;
                let y = cur.integer()?;
                DmpCommand::MoveAbs { x, y }
            }
            other => {
                return Err(DmplError::Unknown {
                    offset: start,
                    byte: other,
                })
            }
        };
        commands.push(cmd);
        spans.push(start..cur.pos);
    }
    Ok(DmpProgram { commands, spans })
}

/// Size of one DM/PL step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmpResolution {
    pub inches_per_unit: f64,
}

impl Default for DmpResolution {
    fn default() -> Self {
        DmpResolution {
            inches_per_unit: 0.005,
        }
    }
}

impl DmpResolution {
    /// The 0.001-inch variant.
    pub const FINE: DmpResolution = DmpResolution {
        inches_per_unit: 0.001,
    };

    pub fn mm_per_unit(&self) -> f64 {
        self.inches_per_unit * 25.4
    }

    pub fn plotter_units_per_unit(&self) -> f64 {
        self.mm_per_unit() * PLOTTER_UNITS_PER_MM
    }
}

pub fn translate(program: &DmpProgram, page: &PageSetup) -> Result<HpglDocument, DmplError> {
    translate_with(program, page, DmpResolution::default())
}

/// Translates to HP-GL with the DM/PL origin on the plotter origin. Points
/// must land inside both the 0..=32767 range and the physical page.
pub fn translate_with(
    program: &DmpProgram,
    page: &PageSetup,
    resolution: DmpResolution,
) -> Result<HpglDocument, DmplError> {
    let scale = resolution.plotter_units_per_unit();
    let x_max = PLOTTER_UNIT_MAX.min((page.width_mm * PLOTTER_UNITS_PER_MM).floor() as i64);
    let y_max = PLOTTER_UNIT_MAX.min((page.height_mm * PLOTTER_UNITS_PER_MM).floor() as i64);

    let mut w = HpglWriter::new();
    let mut down = false;
    let mut seen_init = false;
    for (cmd, span) in program.commands.iter().zip(&program.spans) {
        match *cmd {
            DmpCommand::Init => {
                if seen_init {
                    w.initialize();
                }
                seen_init = true;
                down = false;
            }
            DmpCommand::PenUp => down = false,
            DmpCommand::PenDown => down = true,
            DmpCommand::MoveAbs { x, y } => {
                let ux = (x as f64 * scale).round() as i64;
                let uy = (y as f64 * scale).round() as i64;
                if ux > x_max || uy > y_max {
                    return Err(DmplError::PageOverflow {
                        span: span.clone(),
                        x: ux,
                        y: uy,
                    });
                }
                let r = if down { w.pen_down(ux, uy) } else { w.pen_up(ux, uy) };
                r.map_err(|_| DmplError::PageOverflow {
                    span: span.clone(),
                    x: ux,
                    y: uy,
                })?;
            }
            DmpCommand::SelectPen(k) => w.select_pen(k),
            DmpCommand::Home => {
                w.pen_up(0, 0).expect("origin is in range");
                down = false;
            }
        }
    }
    Ok(w.finish())
}

/// Pen-down polylines of the program in millimeters. Lifting the pen only
/// ends a polyline once the pen actually travels; pen changes, homing and
/// re-initialization always end it.
pub fn trajectory(program: &DmpProgram) -> Vec<Vec<Point2>> {
    trajectory_with(program, DmpResolution::default())
}

pub fn trajectory_with(program: &DmpProgram, resolution: DmpResolution) -> Vec<Vec<Point2>> {
    let mm = resolution.mm_per_unit();
    let mut out = Vec::new();
    let mut current: Vec<Point2> = Vec::new();
    let mut pos = Point2::ORIGIN;
    let mut down = false;
    let end = |out: &mut Vec<Vec<Point2>>, current: &mut Vec<Point2>| {
        if !current.is_empty() {
            out.push(std::mem::take(current));
        }
    };
    for cmd in &program.commands {
        match *cmd {
            DmpCommand::Init => {
                end(&mut out, &mut current);
                down = false;
            }
            DmpCommand::PenUp => down = false,
            DmpCommand::PenDown => down = true,
            DmpCommand::MoveAbs { x, y } => {
                let p = Point2::new(x as f64 * mm, y as f64 * mm);
                if down {
                    if current.is_empty() {
                        current.push(pos);
                    }
                    current.push(p);
                } else {
                    end(&mut out, &mut current);
                }
                pos = p;
            }
            DmpCommand::SelectPen(_) => end(&mut out, &mut current),
            DmpCommand::Home => {
                end(&mut out, &mut current);
                pos = Point2::ORIGIN;
                down = false;
            }
        }
    }
    end(&mut out, &mut current);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use DmpCommand::*;

    #[test]
    fn grammar_example() {
        let p = parse_dmp(";:U100,200D300,200").unwrap();
        assert_eq!(
            p.commands(),
            &[
                Init,
                PenUp,
                MoveAbs { x: 100, y: 200 },
                PenDown,
                MoveAbs { x: 300, y: 200 }
            ]
        );
        assert_eq!(p.source_spans(), &[0..2, 2..3, 3..10, 10..11, 11..18]);
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse_dmp(""), Err(DmplError::MissingInit));
        assert_eq!(parse_dmp("  \n"), Err(DmplError::MissingInit));
        assert_eq!(parse_dmp("U;:"), Err(DmplError::MissingInit));
    }

    #[test]
    fn pen_out_of_range() {
        assert_eq!(
            parse_dmp(";:P9"),
            Err(DmplError::PenRange { offset: 3, pen: 9 })
        );
        assert_eq!(
            parse_dmp(";:P0"),
            Err(DmplError::PenRange { offset: 3, pen: 0 })
        );
    }

    #[test]
    fn malformed_and_unknown() {
        assert!(matches!(
            parse_dmp(";:100"),
            Err(DmplError::Parse { offset: 5, .. })
        ));
        assert!(matches!(
            parse_dmp(";:100,"),
            Err(DmplError::Parse { offset: 6, .. })
        ));
        assert!(matches!(
            parse_dmp(";:100 ,5"),
            Err(DmplError::Parse { offset: 5, .. })
        ));
        assert_eq!(
            parse_dmp(";: R10,10"),
            Err(DmplError::Unknown {
                offset: 3,
                byte: b'R'
            })
        );
        assert!(matches!(
            parse_dmp(";:99999999999,1"),
            Err(DmplError::Parse { offset: 2, .. })
        ));
        assert!(matches!(
            parse_dmp(";:;"),
            Err(DmplError::Parse { offset: 3, .. })
        ));
    }

    #[test]
    fn whitespace_separates() {
        let p = parse_dmp("  ;:\n U 1,2\t3,4\r\n H ").unwrap();
        assert_eq!(
            p.commands(),
            &[Init, PenUp, MoveAbs { x: 1, y: 2 }, MoveAbs { x: 3, y: 4 }, Home]
        );
        assert_eq!(p.source_spans(), &[2..4, 6..7, 8..11, 12..15, 18..19]);
    }

    fn program(cmds: Vec<DmpCommand>) -> DmpProgram {
        DmpProgram::from_commands(cmds).unwrap()
    }

    #[test]
    fn translate_examples() {
        let page = PageSetup::default();
        assert_eq!(
            translate(&program(vec![Init]), &page).unwrap().compact(),
            "IN;SP1;PU;SP0;"
        );
        // 100 * 5.08 = 508 and 200 * 5.08 = 1016 exactly.
        let doc = translate(&program(vec![Init, PenUp, MoveAbs { x: 100, y: 200 }]), &page).unwrap();
        assert_eq!(doc.compact(), "IN;SP1;PU508,1016;PU;SP0;");
        // 5.08 rounds to 5.
        let doc = translate(&program(vec![Init, MoveAbs { x: 1, y: 1 }]), &page).unwrap();
        assert!(doc.compact().contains("PU5,5;"));
    }

    #[test]
    fn translate_pen_state_machine() {
        let p = parse_dmp(";:U100,200D300,200P2H").unwrap();
        let doc = translate(&p, &PageSetup::default()).unwrap();
        assert_eq!(
            doc.compact(),
            "IN;SP1;PU508,1016;PD1524,1016;SP2;PU0,0;PU;SP0;"
        );
    }

    #[test]
    fn overflow_cites_span() {
        let p = parse_dmp(";:U 100,100 9000,10").unwrap();
        match translate(&p, &PageSetup::default()) {
            Err(DmplError::PageOverflow { span, .. }) => assert_eq!(span, 12..19),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn trajectories() {
        assert!(trajectory(&program(vec![Init])).is_empty());
        let t = trajectory(&program(vec![
            Init,
            PenUp,
            MoveAbs { x: 10, y: 0 },
            PenDown,
            MoveAbs { x: 20, y: 0 },
        ]));
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].len(), 2);

        let t = trajectory(&program(vec![
            Init,
            PenDown,
            MoveAbs { x: 1, y: 0 },
            MoveAbs { x: 2, y: 0 },
            MoveAbs { x: 3, y: 0 },
        ]));
        // Starts at the origin, then 0.127 mm steps.
        let xs: Vec<f64> = t[0].iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 0.127, 2.0 * 0.127, 3.0 * 0.127]);
    }

    #[test]
    fn canonical_source_reparses() {
        let p = program(vec![
            Init,
            MoveAbs { x: 1, y: 2 },
            MoveAbs { x: 3, y: 4 },
            PenDown,
            SelectPen(4),
            Home,
        ]);
        assert_eq!(p.to_source(), ";:1,2 3,4DP4H");
        assert_eq!(parse_dmp(&p.to_source()).unwrap().commands(), p.commands());
    }
}
