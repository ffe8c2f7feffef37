use super::{Point2, Rect};

const INSIDE: u8 = 0;
const LEFT: u8 = 1;
const RIGHT: u8 = 1 << 1;
const BOTTOM: u8 = 1 << 2;
const TOP: u8 = 1 << 3;

// Each endpoint needs at most one x and one y refinement.
const MAX_REFINEMENTS: usize = 4;

fn outcode(p: Point2, r: &Rect) -> u8 {
    let mut code = INSIDE;
    if p.x < r.min.x {
        code |= LEFT;
    } else if p.x > r.max.x {
        code |= RIGHT;
    }
    if p.y < r.min.y {
        code |= BOTTOM;
    } else if p.y > r.max.y {
        code |= TOP;
    }
    code
}

/// Intersection of the infinite line through `a`,`b` with the edge selected
/// by `code`. Always evaluated from the original endpoints so repeated
/// refinements do not accumulate error.
fn edge_point(a: Point2, b: Point2, code: u8, r: &Rect) -> Point2 {
    if code & TOP != 0 {
        Point2::new(a.x + (b.x - a.x) * (r.max.y - a.y) / (b.y - a.y), r.max.y)
    } else if code & BOTTOM != 0 {
        Point2::new(a.x + (b.x - a.x) * (r.min.y - a.y) / (b.y - a.y), r.min.y)
    } else if code & RIGHT != 0 {
        Point2::new(r.max.x, a.y + (b.y - a.y) * (r.max.x - a.x) / (b.x - a.x))
    } else {
        Point2::new(r.min.x, a.y + (b.y - a.y) * (r.min.x - a.x) / (b.x - a.x))
    }
}

fn clamp_into(p: Point2, r: &Rect) -> Point2 {
    Point2::new(p.x.clamp(r.min.x, r.max.x), p.y.clamp(r.min.y, r.max.y))
}

/// Cohen-Sutherland clip of segment `ab` against `rect` (boundary inclusive).
///
/// Returns `None` when the segment misses the rectangle. Returned endpoints
/// always satisfy `rect.contains`, so clipping a clipped segment is the
/// identity.
pub fn clip_segment(a: Point2, b: Point2, rect: &Rect) -> Option<(Point2, Point2)> {
    let (mut p, mut q) = (a, b);
    let (mut cp, mut cq) = (outcode(p, rect), outcode(q, rect));

    for _ in 0..MAX_REFINEMENTS {
        if cp | cq == INSIDE {
            return Some((p, q));
        }
        if cp & cq != INSIDE {
            return None;
        }
        if cp != INSIDE {
            p = edge_point(a, b, cp, rect);
            cp = outcode(p, rect);
        } else {
            q = edge_point(a, b, cq, rect);
            cq = outcode(q, rect);
        }
    }
    if cp | cq == INSIDE {
        return Some((p, q));
    }
    if cp & cq != INSIDE {
        return None;
    }

    // Out of refinements: only rounding noise can leave a point a few ulps
    // outside an edge it was just moved onto.
    let slack = 1e-9 * (1.0 + rect.width().abs().max(rect.height().abs()));
    let near = |pt: Point2| {
        pt.x >= rect.min.x - slack
            && pt.x <= rect.max.x + slack
            && pt.y >= rect.min.y - slack
            && pt.y <= rect.max.y + slack
    };
    if near(p) && near(q) {
        Some((clamp_into(p, rect), clamp_into(q, rect)))
    } else {
        None
    }
}
