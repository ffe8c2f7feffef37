//! Canonical JSON form of a display list.
//!
//! ```text
//! {"commands":[["M",x,y],["L",x,y],["K",x,y],["P",k]],"bbox":[x0,y0,x1,y1]}
//! ```
//!
//! Coordinates are device millimeters with exactly three decimals. Frame
//! markers are not part of the wire form. An empty list has bbox
//! `[0,0,0,0]`.

use std::fmt::Write;

use plot94_core::{DisplayList, PlotCommand};

fn num(out: &mut String, v: f64) {
    let s = format!("{v:.3}");
    out.push_str(if s == "-0.000" { "0.000" } else { &s });
}

fn commands_and_bbox(out: &mut String, dl: &DisplayList) {
    out.push_str("\"commands\":[");
    let mut first = true;
    for cmd in dl.commands() {
        let (tag, p) = match *cmd {
            PlotCommand::MoveTo(p) => ("M", p),
            PlotCommand::LineTo(p) => ("L", p),
            PlotCommand::Marker(p) => ("K", p),
            PlotCommand::SelectPen(k) => {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "[\"P\",{k}]");
                continue;
            }
            PlotCommand::BeginFrame(_) | PlotCommand::EndFrame => continue,
        };
        if !first {
            out.push(',');
        }
        first = false;
        let _ = write!(out, "[\"{tag}\",");
        num(out, p.x);
        out.push(',');
        num(out, p.y);
        out.push(']');
    }
    out.push_str("],\"bbox\":");
    if dl.commands().iter().all(|c| c.point().is_none()) {
        out.push_str("[0,0,0,0]");
    } else {
        let b = dl.bbox();
        out.push('[');
        for (k, v) in [b.min.x, b.min.y, b.max.x, b.max.y].into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            num(out, v);
        }
        out.push(']');
    }
}

/// `{"commands":[...],"bbox":[...]}`.
pub fn display_list_json(dl: &DisplayList) -> String {
    let mut out = String::from("{");
    commands_and_bbox(&mut out, dl);
    out.push('}');
    out
}

/// `{"revision":n,"commands":[...],"bbox":[...]}`.
pub fn revisioned_display_list_json(revision: u64, dl: &DisplayList) -> String {
    let mut out = format!("{{\"revision\":{revision},");
    commands_and_bbox(&mut out, dl);
    out.push('}');
    out
}
