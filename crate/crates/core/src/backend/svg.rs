use std::fmt::Write;

use super::{fmt3, PageSetup};
use crate::kernel::{DisplayList, PlotCommand, Point2};

/// Stroke colors for pens 1 through 8.
pub const PEN_COLORS: [&str; 8] = [
    "#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

pub const STROKE_WIDTH_MM: f64 = 0.35;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

struct PathBuilder<'a> {
    out: &'a mut String,
    page: &'a PageSetup,
    pen: u8,
    data: String,
    drawn: bool,
}

impl PathBuilder<'_> {
    fn coord(&self, p: Point2) -> String {
        let x = p.x + self.page.margin_mm;
        let y = self.page.height_mm - (p.y + self.page.margin_mm);
        format!("{} {}", fmt3(x), fmt3(y))
    }

    fn flush(&mut self) {
        if self.drawn {
            let _ = writeln!(self.out, "<path class=\"pen{}\" d=\"{}\"/>", self.pen, self.data);
        }
        self.data.clear();
        self.drawn = false;
    }

    fn start(&mut self, p: Point2) {
        self.flush();
        self.data = format!("M {}", self.coord(p));
    }

    fn line(&mut self, p: Point2) {
        let c = self.coord(p);
        self.data.push_str(" L ");
        self.data.push_str(&c);
        self.drawn = true;
    }
}

/// Renders the list as a standalone SVG page. One `<path>` per pen-down
/// polyline; device y is flipped to SVG's downward axis.
pub fn emit_svg(dl: &DisplayList, page: &PageSetup) -> String {
    let mut out = String::new();
    let (w, h) = (fmt3(page.width_mm), fmt3(page.height_mm));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = write!(
        out,
        "<style>path{{fill:none;stroke-width:{};stroke-linecap:round;stroke-linejoin:round}}",
        fmt3(STROKE_WIDTH_MM)
    );
    for (k, color) in PEN_COLORS.iter().enumerate() {
        let _ = write!(out, ".pen{}{{stroke:{color}}}", k + 1);
    }
    out.push_str("</style>\n");

    let mut body = String::new();
    let mut pos: Option<Point2> = None;
    {
        let mut path = PathBuilder {
            out: &mut body,
            page,
            pen: 1,
            data: String::new(),
            drawn: false,
        };
        for cmd in dl.commands() {
            match cmd {
                PlotCommand::MoveTo(p) => {
                    path.start(*p);
                    pos = Some(*p);
                }
                PlotCommand::LineTo(p) => {
                    if path.data.is_empty() {
                        path.start(pos.unwrap_or(*p));
                    }
                    path.line(*p);
                    pos = Some(*p);
                }
                PlotCommand::Marker(p) => {
                    path.start(*p);
                    path.line(*p);
                    path.flush();
                    pos = Some(*p);
                }
                PlotCommand::SelectPen(k) => {
                    path.flush();
                    path.pen = *k;
                }
                PlotCommand::BeginFrame(name) => {
                    path.flush();
                    let _ = writeln!(path.out, "<g data-frame=\"{}\">", escape(name));
                }
                PlotCommand::EndFrame => {
                    path.flush();
                    path.out.push_str("</g>\n");
                }
            }
        }
        path.flush();
    }
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn square_page() -> PageSetup {
        PageSetup::new(100.0, 100.0, 0.0).unwrap()
    }

    #[test]
    fn empty_list_has_header_and_no_paths() {
        let s = emit_svg(&DisplayList::default(), &PageSetup::default());
        assert!(s.starts_with("<?xml"));
        assert!(s.contains("width=\"254.000mm\" height=\"190.500mm\""));
        assert!(!s.contains("<path"));
    }

    #[test]
    fn y_axis_flipped() {
        let dl = DisplayList::from_commands(vec![
            PlotCommand::MoveTo(p(0.0, 0.0)),
            PlotCommand::LineTo(p(10.0, 0.0)),
        ]);
        let s = emit_svg(&dl, &square_page());
        assert!(s.contains("d=\"M 0.000 100.000 L 10.000 100.000\""));
    }

    #[test]
    fn pen_selection_changes_class() {
        let dl = DisplayList::from_commands(vec![
            PlotCommand::MoveTo(p(0.0, 0.0)),
            PlotCommand::LineTo(p(1.0, 0.0)),
            PlotCommand::SelectPen(2),
            PlotCommand::LineTo(p(2.0, 0.0)),
        ]);
        let s = emit_svg(&dl, &square_page());
        assert!(s.contains("<path class=\"pen1\" d=\"M 0.000 100.000 L 1.000 100.000\"/>"));
        assert!(s.contains("<path class=\"pen2\" d=\"M 1.000 100.000 L 2.000 100.000\"/>"));
    }

    #[test]
    fn frames_become_groups() {
        let dl = DisplayList::from_commands(vec![
            PlotCommand::BeginFrame("a<b".into()),
            PlotCommand::Marker(p(1.0, 1.0)),
            PlotCommand::EndFrame,
        ]);
        let s = emit_svg(&dl, &square_page());
        assert!(s.contains("<g data-frame=\"a&lt;b\">\n<path class=\"pen1\" d=\"M 1.000 99.000 L 1.000 99.000\"/>\n</g>"));
    }
}
