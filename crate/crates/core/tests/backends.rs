use plot94_core::backend::{emit_hpgl, emit_svg, interpret_hpgl, BackendError, PageSetup};
use plot94_core::kernel::{DisplayList, PlotCommand, PlotContext, Point2, Rect, Window};
use plot94_core::scene::{render_contour_demo, render_demo, resolution, Demo, View};
use plot94_core::surface::{EulerAngles, MeshStyle};
use proptest::prelude::*;

fn assert_round_trip(dl: &DisplayList, page: &PageSetup) {
    let doc = emit_hpgl(dl, page).unwrap();
    let text = doc.to_file_string();
    assert!(text.starts_with("IN;"));
    assert!(doc.compact().ends_with("PU;SP0;"));
    for st in doc.statements() {
        if st.starts_with("PU") || st.starts_with("PD") {
            for v in st[2..st.len() - 1].split(',').filter(|s| !s.is_empty()) {
                let v: i64 = v.parse().unwrap();
                assert!((0..=32767).contains(&v));
            }
        }
    }
    let got = interpret_hpgl(&text, page.margin_mm).unwrap();
    let want = dl.trajectory();
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g.len(), w.len());
        for (p, q) in g.iter().zip(w) {
            // Each axis rounds to the nearest unit, so the error is at most
            // half a unit per axis.
            assert!((p.x - q.x).abs() <= 0.0125 + 1e-9 && (p.y - q.y).abs() <= 0.0125 + 1e-9);
            assert!(p.distance(*q) <= 0.025);
        }
    }
}

#[test]
fn demos_round_trip_through_the_interpreter() {
    let page = PageSetup::default();
    let res = resolution(24).unwrap();
    let views = [
        View::default(),
        View {
            angles: EulerAngles::from_degrees(30.0, -70.0, 10.0),
            style: MeshStyle::Mesh,
            ..View::default()
        },
    ];
    for demo in Demo::ALL {
        for view in &views {
            let dl = render_demo(demo, res, view, &page).unwrap();
            assert!(!dl.is_empty());
            assert_round_trip(&dl, &page);
        }
        if !demo.is_closed() {
            let dl = render_contour_demo(demo, res, 4, &page).unwrap();
            assert_round_trip(&dl, &page);
        }
    }
}

#[test]
fn output_bytes_are_stable() {
    let page = PageSetup::default();
    let res = resolution(16).unwrap();
    for demo in Demo::ALL {
        let a = render_demo(demo, res, &View::default(), &page).unwrap();
        let b = render_demo(demo, res, &View::default(), &page).unwrap();
        assert_eq!(emit_hpgl(&a, &page).unwrap(), emit_hpgl(&b, &page).unwrap());
        assert_eq!(emit_svg(&a, &page), emit_svg(&b, &page));
    }
}

#[test]
fn oversized_lists_are_rejected() {
    let page = PageSetup::new(100.0, 100.0, 0.0).unwrap();
    let dl = DisplayList::from_commands(vec![
        PlotCommand::MoveTo(Point2::new(0.0, 0.0)),
        PlotCommand::LineTo(Point2::new(150.0, 10.0)),
    ]);
    assert!(matches!(emit_hpgl(&dl, &page), Err(BackendError::PageOverflow { .. })));
}

#[test]
fn svg_flips_y() {
    let page = PageSetup::new(100.0, 100.0, 0.0).unwrap();
    let dl = DisplayList::from_commands(vec![
        PlotCommand::MoveTo(Point2::new(0.0, 0.0)),
        PlotCommand::LineTo(Point2::new(10.0, 0.0)),
    ]);
    let svg = emit_svg(&dl, &page);
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("M 0.000 100.000 L 10.000 100.000"));
}

proptest! {
    #[test]
    fn random_lists_round_trip(
        ops in prop::collection::vec((0u8..5, 0.0..200.0f64, 0.0..150.0f64, 1u8..9), 0..80),
        margin in 0.0..20.0f64,
    ) {
        let page = PageSetup::new(254.0, 190.5, margin).unwrap();
        let dev = page.drawable();
        let user = Rect::new(Point2::ORIGIN, Point2::new(200.0, 150.0));
        let mut c = PlotContext::new(Window::new(user, dev).unwrap()).unwrap();
        for (op, x, y, pen) in ops {
            match op {
                0 => c.move_to(x, y).unwrap(),
                1 | 2 => c.line_to(x, y).unwrap(),
                3 => c.select_pen(pen).unwrap(),
                _ => c.mark(x, y).unwrap(),
            }
        }
        let dl = c.finalize().unwrap();
        assert_round_trip(&dl, &page);
    }
}
