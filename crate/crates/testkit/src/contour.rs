/// Whether the level crosses the edge between samples `a` and `b`, with
/// samples equal to the level counted as above.
pub fn edge_crossed(a: f64, b: f64, level: f64) -> bool {
    (a >= level) != (b >= level)
}

/// Value of the linear interpolant along the edge at the point whose
/// distance from the `a` end is `s` of a unit-length edge.
pub fn interpolate(a: f64, b: f64, s: f64) -> f64 {
    a + (b - a) * s
}
